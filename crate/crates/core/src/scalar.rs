//! Coefficient field for η-functions and amplitudes.
//!
//! Two realizations share the [`Scalar`] trait:
//!
//! * [`Exact`]: Gaussian rationals, `Complex<BigRational>`. Arithmetic is closed and
//!   equality is decidable.
//! * [`Float`]: `Complex64`. Comparisons use an absolute tolerance
//!   ([`DEFAULT_TOL`] unless stated otherwise).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::eta::SeriesKind;

/// Default absolute tolerance for floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_REL_THRESHOLD: f64 = 1e-10;

/// Bound on numerators and denominators of random exact coefficients.
pub const RANDOM_RATIONAL_BOUND: i64 = 100;

pub type Exact = Complex<BigRational>;
pub type Float = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

/// A nonnegative real number produced by taking a modulus.
///
/// The exact backend keeps moduli exact: a rational when the squared modulus is
/// a perfect rational square, otherwise the square root of a rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Rational(BigRational),
    SqrtOf(BigRational),
    Float(f64),
}

impl Magnitude {
    pub fn to_f64(&self) -> f64 {
        match self {
            Magnitude::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Magnitude::SqrtOf(r) => r.to_f64().unwrap_or(f64::NAN).sqrt(),
            Magnitude::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Magnitude::Rational(r) | Magnitude::SqrtOf(r) => r.is_zero(),
            Magnitude::Float(x) => x.abs() < DEFAULT_TOL,
        }
    }

    /// The exact rational value, if there is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Magnitude::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Magnitude::Float(x) => serde_json::json!(x),
            other => Value::String(other.to_string()),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Rational(r) => write!(f, "{r}"),
            Magnitude::SqrtOf(r) => write!(f, "sqrt({r})"),
            Magnitude::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Gaussian integers; the exact invariant formulas run here after clearing
/// denominators.
pub type GaussianInt = Complex<BigInt>;

/// Commutative ring operations used by the polynomial formulas.
pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// Image of a small integer.
    fn small(v: i64) -> Self;
}

impl Ring for Exact {
    fn small(v: i64) -> Self {
        Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
    }
}

impl Ring for Float {
    fn small(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl Ring for GaussianInt {
    fn small(v: i64) -> Self {
        Complex::new(v.into(), BigInt::zero())
    }
}

/// Operations the η-algebra and the invariant code need from a coefficient.
pub trait Scalar: Ring + fmt::Debug + Send + Sync + 'static {
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(v.into()))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    fn conj(&self) -> Self;

    /// True only for a coefficient that is identically zero.
    fn is_exact_zero(&self) -> bool;

    /// Zero test; tolerance-based on the float backend.
    fn is_zero(&self) -> bool {
        self.near(&Self::zero(), DEFAULT_TOL)
    }

    /// Equality; `tol` is an absolute bound on each component and ignored by
    /// the exact backend.
    fn near(&self, other: &Self, tol: f64) -> bool;

    fn checked_div(&self, rhs: &Self) -> Result<Self>;

    fn to_complex64(&self) -> Complex64;

    fn modulus(&self) -> Magnitude;

    /// Square root of the real part. Refused by the exact backend.
    fn real_sqrt(&self) -> Result<Self>;

    /// `g^(k)(at) / k!` for `k = 0..count`.
    fn taylor_coefficients(kind: SeriesKind, at: &Self, count: usize) -> Result<Vec<Self>>;

    fn render(&self) -> String;

    /// `[re, im]`; exact components as `"p/q"` strings, float ones as numbers.
    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn matrix_rank(rows: &[Vec<Self>]) -> usize;

    /// A random coefficient: standard complex Gaussian (float) or a Gaussian
    /// rational with bounded numerators and denominators (exact).
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// The entries of `xs` times their least common denominator, as Gaussian
    /// integers. `None` on inexact backends.
    fn clear_denominators(_xs: &[Self]) -> Option<Vec<GaussianInt>> {
        None
    }

    /// `z / den` for a positive integer `den`.
    fn from_gaussian_ratio(z: &GaussianInt, den: &BigInt) -> Self;

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// |z| / den for a positive integer `den`, kept exact.
pub fn gaussian_modulus(z: &GaussianInt, den: &BigInt) -> Magnitude {
    let n2 = &z.re * &z.re + &z.im * &z.im;
    let root = n2.sqrt();
    if &root * &root == n2 {
        Magnitude::Rational(BigRational::new(root, den.clone()))
    } else {
        Magnitude::SqrtOf(BigRational::new(n2, den * den))
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn render_parts<T: fmt::Display>(
    re: T,
    im: T,
    re_zero: bool,
    im_zero: bool,
    im_neg: bool,
    im_abs: T,
) -> String {
    match (re_zero, im_zero) {
        (_, true) => re.to_string(),
        (true, false) => format!("{im}i"),
        (false, false) if im_neg => format!("{re}-{im_abs}i"),
        (false, false) => format!("{re}+{im}i"),
    }
}

fn parse_rational_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| Error::Json(format!("bad rational {s:?}")))
        }
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(Error::Json(format!("expected rational string, got {v}"))),
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    Some(if neg { -r } else { r })
}

impl Scalar for Exact {
    fn clear_denominators(xs: &[Self]) -> Option<Vec<GaussianInt>> {
        let k = xs
            .iter()
            .flat_map(|x| [x.re.denom(), x.im.denom()])
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        let scale = |r: &BigRational| r.numer() * (&k / r.denom());
        Some(
            xs.iter()
                .map(|x| Complex::new(scale(&x.re), scale(&x.im)))
                .collect(),
        )
    }

    fn from_gaussian_ratio(z: &GaussianInt, den: &BigInt) -> Self {
        Complex::new(
            BigRational::new(z.re.clone(), den.clone()),
            BigRational::new(z.im.clone(), den.clone()),
        )
    }

    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn from_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if rhs.im.is_zero() {
            return Ok(Complex::new(&self.re / &rhs.re, &self.im / &rhs.re));
        }
        Ok(self.clone() / rhs.clone())
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn modulus(&self) -> Magnitude {
        if self.im.is_zero() {
            return Magnitude::Rational(self.re.abs());
        }
        let sq = &self.re * &self.re + &self.im * &self.im;
        match rational_sqrt(&sq) {
            Some(r) => Magnitude::Rational(r),
            None => Magnitude::SqrtOf(sq),
        }
    }

    fn real_sqrt(&self) -> Result<Self> {
        Err(Error::ExactNormalize)
    }

    fn taylor_coefficients(kind: SeriesKind, at: &Self, count: usize) -> Result<Vec<Self>> {
        if !at.is_exact_zero() {
            return Err(Error::InexactSeries { kind: kind.name() });
        }
        Ok((0..count)
            .map(|k| {
                let sign = match kind {
                    SeriesKind::Exp => 1,
                    SeriesKind::Cos if k % 2 == 0 => {
                        if (k / 2) % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                    SeriesKind::Sin if k % 2 == 1 => {
                        if (k / 2) % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                    _ => 0,
                };
                Self::from_rational(&BigRational::new(BigInt::from(sign), factorial(k)))
            })
            .collect())
    }

    fn render(&self) -> String {
        render_parts(
            &self.re,
            &self.im,
            self.re.is_zero(),
            self.im.is_zero(),
            self.im.is_negative(),
            &self.im.abs(),
        )
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.re.to_string(), self.im.to_string()])
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => Ok(Complex::new(
                parse_rational_json(re)?,
                parse_rational_json(im)?,
            )),
            _ => Err(Error::Json(format!("expected [re, im], got {v}"))),
        }
    }

    fn matrix_rank(rows: &[Vec<Self>]) -> usize {
        let mut m: Vec<Vec<Self>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_exact_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let p = m[rank][col].clone();
            for r in (rank + 1)..m.len() {
                if m[r][col].is_exact_zero() {
                    continue;
                }
                let factor = m[r][col].clone() / p.clone();
                for c in col..cols {
                    let delta = factor.clone() * m[rank][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
            rank += 1;
        }
        rank
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let b = RANDOM_RATIONAL_BOUND;
        let mut part = || {
            BigRational::new(
                rng.random_range(-b..=b).into(),
                rng.random_range(1..=b).into(),
            )
        };
        let re = part();
        let im = part();
        Complex::new(re, im)
    }
}

impl Scalar for Float {
    fn from_gaussian_ratio(z: &GaussianInt, den: &BigInt) -> Self {
        let q = |x: &BigInt| {
            BigRational::new(x.clone(), den.clone())
                .to_f64()
                .unwrap_or(f64::NAN)
        };
        Complex64::new(q(&z.re), q(&z.im))
    }

    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self.re - other.re).abs() <= tol && (self.im - other.im).abs() <= tol
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }

    fn modulus(&self) -> Magnitude {
        Magnitude::Float(self.norm())
    }

    fn real_sqrt(&self) -> Result<Self> {
        if self.re < 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Complex64::new(self.re.sqrt(), 0.0))
    }

    fn taylor_coefficients(kind: SeriesKind, at: &Self, count: usize) -> Result<Vec<Self>> {
        let (s, c) = (at.sin(), at.cos());
        let mut fact = 1.0;
        Ok((0..count)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                let d = match kind {
                    SeriesKind::Exp => at.exp(),
                    SeriesKind::Cos => [c, -s, -c, s][k % 4],
                    SeriesKind::Sin => [s, c, -s, -c][k % 4],
                };
                d / fact
            })
            .collect())
    }

    fn render(&self) -> String {
        render_parts(
            self.re,
            self.im,
            self.re == 0.0,
            self.im == 0.0,
            self.im < 0.0,
            self.im.abs(),
        )
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let part = |x: &Value| -> Result<f64> {
            match x {
                Value::Number(n) => n
                    .as_f64()
                    .ok_or_else(|| Error::Json(format!("bad number {n}"))),
                Value::String(s) => parse_rational(s)
                    .and_then(|r| r.to_f64())
                    .ok_or_else(|| Error::Json(format!("bad number {s:?}"))),
                _ => Err(Error::Json(format!("expected number, got {x}"))),
            }
        };
        match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => Ok(Complex64::new(part(re)?, part(im)?)),
            _ => Err(Error::Json(format!("expected [re, im], got {v}"))),
        }
    }

    fn matrix_rank(rows: &[Vec<Self>]) -> usize {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return 0;
        }
        let m = DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]);
        let sv = m.singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_REL_THRESHOLD * max).count()
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-0.125"), Some(q(-1, 8)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn exact_modulus_stays_exact() {
        let z = Exact::new(q(3, 5), q(4, 5));
        assert_eq!(z.modulus(), Magnitude::Rational(q(1, 1)));
        let w = Exact::new(q(1, 1), q(1, 1));
        assert_eq!(w.modulus(), Magnitude::SqrtOf(q(2, 1)));
        assert_eq!(w.modulus().to_string(), "sqrt(2)");
        assert_eq!(Exact::from_ratio(-1, 2).modulus().to_string(), "1/2");
    }

    #[test]
    fn exact_taylor_at_zero() {
        let cos =
            Exact::taylor_coefficients(SeriesKind::Cos, &<Exact as Scalar>::zero(), 5).unwrap();
        let expect = [q(1, 1), q(0, 1), q(-1, 2), q(0, 1), q(1, 24)];
        for (c, e) in cos.iter().zip(expect.iter()) {
            assert_eq!(c, &Exact::from_rational(e));
        }
        let sin =
            Exact::taylor_coefficients(SeriesKind::Sin, &<Exact as Scalar>::zero(), 4).unwrap();
        assert_eq!(sin[3], Exact::from_ratio(-1, 6));
        assert!(Exact::taylor_coefficients(SeriesKind::Exp, &<Exact as Scalar>::one(), 3).is_err());
    }

    #[test]
    fn float_taylor_matches_exact_at_zero() {
        for kind in [SeriesKind::Cos, SeriesKind::Sin, SeriesKind::Exp] {
            let f = Float::taylor_coefficients(kind, &<Float as Scalar>::zero(), 7).unwrap();
            let e = Exact::taylor_coefficients(kind, &<Exact as Scalar>::zero(), 7).unwrap();
            for (a, b) in f.iter().zip(e.iter()) {
                assert!(a.near(&b.to_complex64(), 1e-15));
            }
        }
    }

    #[test]
    fn render_forms() {
        assert_eq!(Exact::from_ratio(1, 128).render(), "1/128");
        assert_eq!(Exact::new(q(1, 2), q(-1, 3)).render(), "1/2-1/3i");
        assert_eq!(Exact::imag_unit().render(), "1i");
        assert_eq!(Float::new(0.5, 0.0).render(), "0.5");
    }

    #[test]
    fn exact_rank_by_elimination() {
        let r = |v: &[i64]| v.iter().map(|&x| Exact::from_i64(x)).collect::<Vec<_>>();
        assert_eq!(Exact::matrix_rank(&[r(&[1, 2]), r(&[2, 4])]), 1);
        assert_eq!(Exact::matrix_rank(&[r(&[1, 2]), r(&[2, 5])]), 2);
        assert_eq!(Exact::matrix_rank(&[r(&[0, 0]), r(&[0, 0])]), 0);
    }

    #[test]
    fn float_rank_threshold() {
        let r = |v: &[f64]| v.iter().map(|&x| Float::new(x, 0.0)).collect::<Vec<_>>();
        assert_eq!(
            Float::matrix_rank(&[r(&[1.0, 2.0]), r(&[2.0, 4.0 + 1e-14])]),
            1
        );
        assert_eq!(Float::matrix_rank(&[r(&[1.0, 0.0]), r(&[0.0, 1e-3])]), 2);
    }

    #[test]
    fn json_components() {
        let z = Exact::new(q(1, 2), q(-3, 1));
        assert_eq!(z.to_json(), serde_json::json!(["1/2", "-3"]));
        assert_eq!(Exact::from_json(&z.to_json()).unwrap(), z);
        assert!(Exact::from_json(&serde_json::json!([1])).is_err());
    }
}
