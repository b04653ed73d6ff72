//! Polynomial invariants of four-qubit amplitude tensors and the two
//! symmetric monotones built from them.
//!
//! All polynomial routines return *raw* values, i.e. homogeneous polynomials
//! in the amplitudes of whatever (possibly unnormalized) tensor they are given.
//! [`normalized_invariant`] turns a raw degree-d value into its value on the
//! unit-normalized state by dividing by `norm_sq^(d/2)`, which keeps the exact
//! backend free of square roots.
//!
//! Conventions (index `x` is the 4-bit basis string, qubit 1 most significant):
//!
//! * `H = Σ_{x<8} (−1)^{popcount x} a_x a_{15−x}`.
//! * `L, M, N` are the determinants of the 12|34, 13|24 and 14|23 flattenings
//!   multiplied by [`LMN_SIGNS`]. With these signs `L + M + N = 0` identically,
//!   which makes Σ and Π invariant under every qubit relabeling.
//! * `D` for a pair split: write the state as a 2×2 matrix in the first pair
//!   whose entries are bilinear in (z, t), the variables of the second pair.
//!   Its determinant is a biquadratic form; `D` is [`SEXTIC_SCALE`] times the
//!   determinant of the symmetric 3×3 matrix of that form.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::eta::{AmplitudeVector, EtaFunction};
use num_bigint::BigInt;

use crate::scalar::{gaussian_modulus, GaussianInt, Magnitude, Ring, Scalar, DEFAULT_TOL};
use crate::states::NamedState;

pub const DEG_H: u32 = 2;
pub const DEG_LMN: u32 = 4;
pub const DEG_D: u32 = 6;
pub const DEG_SIGMA: u32 = 8;
pub const DEG_PI: u32 = 12;
pub const DEG_F3: u32 = 12;
pub const DEG_F2: u32 = 8;

// every term of F₃ and F₂′ must be homogeneous of the same degree
const _: () = {
    assert!(2 * DEG_LMN == DEG_SIGMA);
    assert!(3 * DEG_LMN == DEG_PI);
    assert!(6 * DEG_H == DEG_F3);
    assert!(2 * DEG_H + DEG_SIGMA == DEG_F3);
    assert!(DEG_PI == DEG_F3);
    assert!(4 * DEG_H == DEG_F2);
    assert!(DEG_H + DEG_D == DEG_F2);
    assert!(DEG_SIGMA == DEG_F2);
};

/// Signs applied to the raw 12|34, 13|24, 14|23 flattening determinants.
/// Fixed so that L + M + N = 0 and Π(ψ_cs) = +2⁻¹¹.
pub const LMN_SIGNS: [i64; 3] = [1, -1, 1];

/// Overall factor of the sextic invariants, fixed so that W(ψ_ad) = ζ/32.
pub const SEXTIC_SCALE: i64 = 4;

/// The three ways to split four qubits into two pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairSplit {
    S12_34,
    S13_24,
    S14_23,
}

impl PairSplit {
    pub const ALL: [PairSplit; 3] = [PairSplit::S12_34, PairSplit::S13_24, PairSplit::S14_23];

    /// 0-based qubit positions of (first pair, second pair).
    pub fn pairs(self) -> ([usize; 2], [usize; 2]) {
        match self {
            PairSplit::S12_34 => ([0, 1], [2, 3]),
            PairSplit::S13_24 => ([0, 2], [1, 3]),
            PairSplit::S14_23 => ([0, 3], [1, 2]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairSplit::S12_34 => "12|34",
            PairSplit::S13_24 => "13|24",
            PairSplit::S14_23 => "14|23",
        }
    }
}

/// The 16 amplitudes a_{ijkl} of a four-qubit state and their squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTensor4<S> {
    a: [S; 16],
    norm_sq: S,
}

impl<S: Scalar> AmplitudeTensor4<S> {
    pub fn new(amps: Vec<S>) -> Result<Self> {
        let len = amps.len();
        let a: [S; 16] = amps.try_into().map_err(|_| Error::QubitCount {
            expected: 4,
            got: if len.is_power_of_two() {
                len.trailing_zeros() as usize
            } else {
                0
            },
        })?;
        let norm_sq = a
            .iter()
            .fold(S::zero(), |acc, x| acc + x.conj() * x.clone());
        Ok(Self { a, norm_sq })
    }

    pub fn from_amplitudes(v: &AmplitudeVector<S>) -> Result<Self> {
        if v.n() != 4 {
            return Err(Error::QubitCount {
                expected: 4,
                got: v.n(),
            });
        }
        Self::new(v.amps().to_vec())
    }

    pub fn from_eta(f: &EtaFunction<S>) -> Result<Self> {
        Self::from_amplitudes(&f.to_amplitudes())
    }

    pub fn from_state(st: &NamedState<S>) -> Result<Self> {
        Self::from_eta(&st.function)
    }

    /// a_{ijkl}.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.a[(i << 3) | (j << 2) | (k << 1) | l]
    }

    pub fn entries(&self) -> &[S; 16] {
        &self.a
    }

    pub fn norm_sq(&self) -> &S {
        &self.norm_sq
    }

    pub fn to_amplitudes(&self) -> AmplitudeVector<S> {
        AmplitudeVector::new(self.a.to_vec()).expect("16 amplitudes")
    }

    /// Multiplies every amplitude by `lambda`.
    pub fn scaled(&self, lambda: &S) -> Self {
        Self::new(self.a.iter().map(|x| lambda.clone() * x.clone()).collect())
            .expect("16 amplitudes")
    }

    fn nonzero(&self) -> Result<()> {
        if self.norm_sq.is_zero() {
            Err(Error::ZeroState)
        } else {
            Ok(())
        }
    }
}

/// Value on the unit-normalized state of a homogeneous degree-`degree`
/// invariant whose raw value is `raw`.
pub fn normalized_invariant<S: Scalar>(raw: &S, degree: u32, norm_sq: &S) -> Result<S> {
    if !degree.is_multiple_of(2) {
        return Err(Error::OddDegree(degree));
    }
    if norm_sq.is_zero() {
        return Err(Error::ZeroState);
    }
    raw.checked_div(&norm_sq.pow(degree / 2))
}

fn c<R: Ring>(v: i64) -> R {
    R::small(v)
}

fn sum<R: Ring>(terms: impl IntoIterator<Item = R>) -> R {
    terms.into_iter().fold(c(0), |acc, x| acc + x)
}

fn raw_h<R: Ring>(a: &[R; 16]) -> R {
    sum((0..8usize).map(|x| {
        let term = a[x].clone() * a[15 - x].clone();
        if x.count_ones() % 2 == 0 {
            term
        } else {
            -term
        }
    }))
}

/// Raw Cayley pairing H (degree 2).
pub fn cayley_h<S: Scalar>(t: &AmplitudeTensor4<S>) -> S {
    raw_h(&t.a)
}

fn bit_index(bits: [(usize, usize); 4]) -> usize {
    bits.iter().map(|&(q, b)| b << (3 - q)).sum()
}

fn flatten_entries<R: Ring>(a: &[R; 16], split: PairSplit) -> [[R; 4]; 4] {
    let ([p0, p1], [q0, q1]) = split.pairs();
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            a[bit_index([(p0, r >> 1), (p1, r & 1), (q0, c >> 1), (q1, c & 1)])].clone()
        })
    })
}

/// 4×4 flattening: rows are the bits of the first pair (lexicographic, first
/// qubit most significant), columns the bits of the second pair.
pub fn flatten<S: Scalar>(t: &AmplitudeTensor4<S>, split: PairSplit) -> [[S; 4]; 4] {
    flatten_entries(&t.a, split)
}

fn det2<R: Ring>(m: [[&R; 2]; 2]) -> R {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

fn det3<R: Ring>(m: &[[R; 3]; 3]) -> R {
    sum((0..3).map(|c| {
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        m[0][c].clone() * det2([[&m[1][c1], &m[1][c2]], [&m[2][c1], &m[2][c2]]])
    }))
}

/// Cofactor expansion along the first row.
pub fn det4<R: Ring>(m: &[[R; 4]; 4]) -> R {
    sum((0..4).map(|c| {
        let cols: Vec<usize> = (0..4).filter(|&k| k != c).collect();
        let minor: [[R; 3]; 3] =
            std::array::from_fn(|r| std::array::from_fn(|k| m[r + 1][cols[k]].clone()));
        let term = m[0][c].clone() * det3(&minor);
        if c % 2 == 0 {
            term
        } else {
            -term
        }
    }))
}

fn raw_lmn<R: Ring>(a: &[R; 16]) -> [R; 3] {
    std::array::from_fn(|k| c::<R>(LMN_SIGNS[k]) * det4(&flatten_entries(a, PairSplit::ALL[k])))
}

/// Raw (L, M, N) (degree 4 each).
pub fn lmn<S: Scalar>(t: &AmplitudeTensor4<S>) -> (S, S, S) {
    let [l, m, n] = raw_lmn(&t.a);
    (l, m, n)
}

// the halved middle row and column of the symmetric matrix contribute 1/4
const _: () = assert!(SEXTIC_SCALE % 4 == 0);

fn raw_d<R: Ring>(a: &[R; 16], split: PairSplit) -> R {
    let ([p0, p1], [q0, q1]) = split.pairs();
    // entry (i, j) of the 2×2 matrix, as bilinear coefficients e[k][l] of z_k t_l
    let entry = |i: usize, j: usize| -> [[R; 2]; 2] {
        std::array::from_fn(|k| {
            std::array::from_fn(|l| a[bit_index([(p0, i), (p1, j), (q0, k), (q1, l)])].clone())
        })
    };
    let product = |x: &[[R; 2]; 2], y: &[[R; 2]; 2]| -> [[R; 3]; 3] {
        let mut out: [[R; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| c(0)));
        for k1 in 0..2 {
            for l1 in 0..2 {
                for k2 in 0..2 {
                    for l2 in 0..2 {
                        let v = x[k1][l1].clone() * y[k2][l2].clone();
                        out[k1 + k2][l1 + l2] = out[k1 + k2][l1 + l2].clone() + v;
                    }
                }
            }
        }
        out
    };
    let diag = product(&entry(0, 0), &entry(1, 1));
    let off = product(&entry(0, 1), &entry(1, 0));
    let b: [[R; 3]; 3] =
        std::array::from_fn(|r| std::array::from_fn(|c| diag[r][c].clone() - off[r][c].clone()));
    c::<R>(SEXTIC_SCALE / 4) * det3(&b)
}

/// Raw sextic invariant D for one pair split (degree 6).
pub fn sextic_d<S: Scalar>(t: &AmplitudeTensor4<S>, split: PairSplit) -> S {
    raw_d(&t.a, split)
}

/// Normalized Schläfli-basis values.
#[derive(Debug, Clone, PartialEq)]
pub struct Schlafli<S> {
    pub h: S,
    pub w: S,
    pub sigma: S,
    pub pi: S,
}

/// Everything computed for one four-qubit state, normalized by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport<S> {
    pub h: S,
    pub l: S,
    pub m: S,
    pub n: S,
    pub dxy: S,
    pub dxz: S,
    pub dxt: S,
    pub w: S,
    pub sigma: S,
    pub pi: S,
    pub f3_abs: Magnitude,
    pub f2_abs: Magnitude,
    pub norm_sq: S,
}

/// H⁶ − 24H²Σ − 64Π, times 32.
pub fn f3_polynomial<R: Ring>(h: &R, sigma: &R, pi: &R) -> R {
    let h2 = h.clone() * h.clone();
    let h6 = h2.clone() * h2.clone() * h2.clone();
    c::<R>(32) * (h6 - c::<R>(24) * h2 * sigma.clone() - c::<R>(64) * pi.clone())
}

/// 3H⁴ − 16HW + 8Σ, times 16.
pub fn f2_polynomial<R: Ring>(h: &R, w: &R, sigma: &R) -> R {
    let h2 = h.clone() * h.clone();
    c::<R>(16)
        * (c::<R>(3) * h2.clone() * h2 - c::<R>(16) * h.clone() * w.clone()
            + c::<R>(8) * sigma.clone())
}

/// Degrees of the values returned by `raw_values`, in report order.
const RAW_DEGREES: [u32; 12] = [
    DEG_H, DEG_LMN, DEG_LMN, DEG_LMN, DEG_D, DEG_D, DEG_D, DEG_D, DEG_SIGMA, DEG_PI, DEG_F3, DEG_F2,
];

fn raw_values<R: Ring>(a: &[R; 16]) -> [R; 12] {
    let h = raw_h(a);
    let [l, m, n] = raw_lmn(a);
    let [dxy, dxz, dxt] = PairSplit::ALL.map(|s| raw_d(a, s));
    let w = dxy.clone() + dxz.clone() + dxt.clone();
    let sigma = l.clone() * l.clone() + m.clone() * m.clone() + n.clone() * n.clone();
    let pi = (l.clone() - m.clone()) * (m.clone() - n.clone()) * (n.clone() - l.clone());
    let f3 = f3_polynomial(&h, &sigma, &pi);
    let f2 = f2_polynomial(&h, &w, &sigma);
    [h, l, m, n, dxy, dxz, dxt, w, sigma, pi, f3, f2]
}

/// Every raw value normalized by its degree, with the moduli of the last two.
/// The exact backend evaluates the formulas on a Gaussian-integer multiple of
/// the tensor, so each value costs a single reduction.
fn normalized_values<S: Scalar>(
    t: &AmplitudeTensor4<S>,
    all: bool,
) -> Result<(Vec<S>, Magnitude, Magnitude)> {
    t.nonzero()?;
    let wanted = if all { RAW_DEGREES.len() } else { 0 };
    match S::clear_denominators(&t.a) {
        Some(ints) => {
            let ints: [GaussianInt; 16] = ints.try_into().expect("16 amplitudes");
            let nsq: BigInt = ints.iter().map(|z| z.norm_sqr()).sum();
            let powers: Vec<BigInt> = (0..=DEG_F3 / 2)
                .map(|k| num_traits::Pow::pow(&nsq, k))
                .collect();
            let raw = raw_values(&ints);
            let values = raw.iter().zip(RAW_DEGREES).take(wanted);
            let values = values
                .map(|(x, d)| S::from_gaussian_ratio(x, &powers[d as usize / 2]))
                .collect();
            let f3 = gaussian_modulus(&raw[10], &powers[DEG_F3 as usize / 2]);
            let f2 = gaussian_modulus(&raw[11], &powers[DEG_F2 as usize / 2]);
            Ok((values, f3, f2))
        }
        None => {
            let mut powers = vec![S::one()];
            for k in 1..=DEG_F3 as usize / 2 {
                powers.push(powers[k - 1].clone() * t.norm_sq.clone());
            }
            let raw = raw_values(&t.a);
            let norm = |k: usize| raw[k].checked_div(&powers[RAW_DEGREES[k] as usize / 2]);
            let values = (0..wanted).map(norm).collect::<Result<Vec<S>>>()?;
            Ok((values, norm(10)?.modulus(), norm(11)?.modulus()))
        }
    }
}

pub fn invariant_report<S: Scalar>(t: &AmplitudeTensor4<S>) -> Result<InvariantReport<S>> {
    let (values, f3_abs, f2_abs) = normalized_values(t, true)?;
    let [h, l, m, n, dxy, dxz, dxt, w, sigma, pi, _, _]: [S; 12] =
        values.try_into().expect("12 values");
    Ok(InvariantReport {
        h,
        l,
        m,
        n,
        dxy,
        dxz,
        dxt,
        w,
        sigma,
        pi,
        f3_abs,
        f2_abs,
        norm_sq: t.norm_sq.clone(),
    })
}

/// (|F₃|, |F₂′|) without the rest of the report.
pub fn monotones<S: Scalar>(t: &AmplitudeTensor4<S>) -> Result<(Magnitude, Magnitude)> {
    let (_, f3, f2) = normalized_values(t, false)?;
    Ok((f3, f2))
}

pub fn schlafli<S: Scalar>(t: &AmplitudeTensor4<S>) -> Result<Schlafli<S>> {
    let r = invariant_report(t)?;
    Ok(Schlafli {
        h: r.h,
        w: r.w,
        sigma: r.sigma,
        pi: r.pi,
    })
}

pub fn f3_abs<S: Scalar>(t: &AmplitudeTensor4<S>) -> Result<Magnitude> {
    Ok(monotones(t)?.0)
}

pub fn f2p_abs<S: Scalar>(t: &AmplitudeTensor4<S>) -> Result<Magnitude> {
    Ok(monotones(t)?.1)
}

/// Real values render as a single number (or `"p/q"` string), complex ones
/// as `[re, im]`.
pub fn scalar_json<S: Scalar>(x: &S) -> Value {
    let parts = x.to_json();
    let z = x.to_complex64();
    let real = match S::BACKEND {
        crate::scalar::Backend::Exact => parts[1] == Value::String("0".into()),
        crate::scalar::Backend::Float => z.im.abs() <= DEFAULT_TOL,
    };
    if real {
        parts[0].clone()
    } else {
        parts
    }
}

impl<S: Scalar> InvariantReport<S> {
    /// `(name, rendered value)` in the fixed field order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let s = |x: &S| render_real(x);
        vec![
            ("H", s(&self.h)),
            ("L", s(&self.l)),
            ("M", s(&self.m)),
            ("N", s(&self.n)),
            ("Dxy", s(&self.dxy)),
            ("Dxz", s(&self.dxz)),
            ("Dxt", s(&self.dxt)),
            ("W", s(&self.w)),
            ("Sigma", s(&self.sigma)),
            ("Pi", s(&self.pi)),
            ("F3abs", self.f3_abs.to_string()),
            ("F2abs", self.f2_abs.to_string()),
            ("norm_sq", s(&self.norm_sq)),
        ]
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "H": scalar_json(&self.h),
            "L": scalar_json(&self.l),
            "M": scalar_json(&self.m),
            "N": scalar_json(&self.n),
            "Dxy": scalar_json(&self.dxy),
            "Dxz": scalar_json(&self.dxz),
            "Dxt": scalar_json(&self.dxt),
            "W": scalar_json(&self.w),
            "Sigma": scalar_json(&self.sigma),
            "Pi": scalar_json(&self.pi),
            "F3abs": self.f3_abs.to_json(),
            "F2abs": self.f2_abs.to_json(),
            "norm_sq": scalar_json(&self.norm_sq),
        })
    }
}

fn render_real<S: Scalar>(x: &S) -> String {
    match scalar_json(x) {
        Value::String(s) => s,
        Value::Number(n) => n.to_string(),
        _ => x.render(),
    }
}

/// Rank of the flattening that groups the qubits in `subset` (1-based) into
/// rows and the rest into columns. Rank 1 means the state is a product across
/// that cut.
pub fn flatten_rank<S: Scalar>(v: &AmplitudeVector<S>, subset: &[usize]) -> Result<usize> {
    let n = v.n();
    let mut rows_q: Vec<usize> = subset.to_vec();
    rows_q.sort_unstable();
    rows_q.dedup();
    if rows_q.len() != subset.len()
        || rows_q.is_empty()
        || rows_q.len() >= n
        || rows_q.iter().any(|&q| q == 0 || q > n)
    {
        return Err(Error::InvalidSubset(format!("{subset:?} for {n} qubits")));
    }
    let cols_q: Vec<usize> = (1..=n).filter(|q| !rows_q.contains(q)).collect();
    let place = |qs: &[usize], bits: usize| -> usize {
        qs.iter()
            .enumerate()
            .map(|(k, &q)| ((bits >> (qs.len() - 1 - k)) & 1) << (n - q))
            .sum()
    };
    let matrix: Vec<Vec<S>> = (0..1usize << rows_q.len())
        .map(|r| {
            (0..1usize << cols_q.len())
                .map(|c| v.amps()[place(&rows_q, r) | place(&cols_q, c)].clone())
                .collect()
        })
        .collect();
    Ok(S::matrix_rank(&matrix))
}

/// Two-qubit concurrence 2|a₀₀a₁₁ − a₀₁a₁₀| of the normalized state.
pub fn concurrence2<S: Scalar>(v: &AmplitudeVector<S>) -> Result<Magnitude> {
    if v.n() != 2 {
        return Err(Error::QubitCount {
            expected: 2,
            got: v.n(),
        });
    }
    let a = v.amps();
    let raw = c::<S>(2) * (a[0].clone() * a[3].clone() - a[1].clone() * a[2].clone());
    Ok(normalized_invariant(&raw, 2, &v.norm_sq())?.modulus())
}

/// Cayley hyperdeterminant of a 2×2×2 array, indexed by the 3-bit basis string.
pub fn hyperdeterminant3<R: Ring>(a: &[R]) -> R {
    let p = |x: usize, y: usize, z: usize, w: usize| {
        a[x].clone() * a[y].clone() * a[z].clone() * a[w].clone()
    };
    let squares = p(0, 0, 7, 7) + p(1, 1, 6, 6) + p(2, 2, 5, 5) + p(4, 4, 3, 3);
    let cross = p(0, 7, 3, 4)
        + p(0, 7, 5, 2)
        + p(0, 7, 6, 1)
        + p(3, 4, 5, 2)
        + p(3, 4, 6, 1)
        + p(5, 2, 6, 1);
    let quartic = p(0, 6, 5, 3) + p(7, 1, 2, 4);
    squares - c::<R>(2) * cross + c::<R>(4) * quartic
}

/// Three-tangle 4|Det(a)| of the normalized three-qubit state.
pub fn three_tangle<S: Scalar>(v: &AmplitudeVector<S>) -> Result<Magnitude> {
    if v.n() != 3 {
        return Err(Error::QubitCount {
            expected: 3,
            got: v.n(),
        });
    }
    let raw = c::<S>(4) * hyperdeterminant3(v.amps());
    Ok(normalized_invariant(&raw, 4, &v.norm_sq())?.modulus())
}
