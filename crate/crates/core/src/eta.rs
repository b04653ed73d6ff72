//! Functions of nilpotent commuting variables η₁…η_n.
//!
//! An [`EtaFunction`] stores one coefficient per monomial. A monomial is a
//! bitmask: bit `i` set means η_{i+1} is a factor. Because η_i² = 0 and the
//! variables commute, the product of two monomials is zero when they share a
//! variable and their union otherwise, with no sign.
//!
//! The same 2ⁿ coefficients are the amplitudes of an n-qubit state in the
//! binary basis ([`AmplitudeVector`]): qubit 1 is the most significant bit
//! of the basis string and bit 0 of the mask, so for n = 2 we have
//! `1 = |00⟩`, `η₁ = |10⟩`, `η₂ = |01⟩`, `η₁η₂ = |11⟩`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, DEFAULT_TOL};

/// Largest supported number of variables (masks fit in a `u32`).
pub const MAX_VARIABLES: usize = 16;

pub type Mask = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    Cos,
    Sin,
    Exp,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Cos => "cos",
            SeriesKind::Sin => "sin",
            SeriesKind::Exp => "exp",
        }
    }
}

fn check_count(n: usize) -> Result<()> {
    if (1..=MAX_VARIABLES).contains(&n) {
        Ok(())
    } else {
        Err(Error::VariableCount(n))
    }
}

/// Element of the 2ⁿ-dimensional algebra generated by η₁…η_n.
#[derive(Debug, Clone)]
pub struct EtaFunction<S> {
    n: usize,
    coeffs: BTreeMap<Mask, S>,
}

impl<S: Scalar> EtaFunction<S> {
    pub fn zero(n: usize) -> Result<Self> {
        check_count(n)?;
        Ok(Self {
            n,
            coeffs: BTreeMap::new(),
        })
    }

    /// The constant function `c`.
    pub fn constant(n: usize, c: S) -> Result<Self> {
        Self::from_terms(n, [(0, c)])
    }

    pub fn one(n: usize) -> Result<Self> {
        Self::constant(n, S::one())
    }

    /// The variable η_i, `1 ≤ i ≤ n`.
    pub fn variable(n: usize, i: usize) -> Result<Self> {
        check_count(n)?;
        if i == 0 || i > n {
            return Err(Error::VariableIndex { index: i, n });
        }
        Self::from_terms(n, [(1 << (i - 1), S::one())])
    }

    /// The monomial η_{i₁}⋯η_{i_k} for 1-based indices.
    pub fn monomial(n: usize, vars: &[usize], c: S) -> Result<Self> {
        check_count(n)?;
        let mut mask = 0;
        for &i in vars {
            if i == 0 || i > n {
                return Err(Error::VariableIndex { index: i, n });
            }
            mask |= 1 << (i - 1);
        }
        Self::from_terms(n, [(mask, c)])
    }

    /// Builds a function from `(mask, coefficient)` pairs; repeated masks add up.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Mask, S)>) -> Result<Self> {
        check_count(n)?;
        let mut f = Self {
            n,
            coeffs: BTreeMap::new(),
        };
        for (m, c) in terms {
            if (m as u64) >> n != 0 {
                return Err(Error::VariableIndex {
                    index: 32 - m.leading_zeros() as usize,
                    n,
                });
            }
            f.accumulate(m, c);
        }
        f.prune();
        Ok(f)
    }

    fn accumulate(&mut self, m: Mask, c: S) {
        match self.coeffs.get_mut(&m) {
            Some(slot) => *slot = slot.clone() + c,
            None => {
                self.coeffs.insert(m, c);
            }
        }
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| !c.is_exact_zero());
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient of the monomial `m` (zero when absent).
    pub fn coeff(&self, m: Mask) -> S {
        self.coeffs.get(&m).cloned().unwrap_or_else(S::zero)
    }

    /// Nonzero terms in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Mask, &S)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Scalar::is_zero)
    }

    /// The mask-0 coefficient.
    pub fn constant_term(&self) -> S {
        self.coeff(0)
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::MismatchedCount(self.n, other.n))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.coeffs {
            out.accumulate(m, c.clone());
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.map_coeffs(|x| c.clone() * x.clone());
        out.prune();
        out
    }

    /// Conjugates every coefficient; monomials are unchanged.
    pub fn conjugate(&self) -> Self {
        self.map_coeffs(Scalar::conj)
    }

    fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(&m, c)| (m, f(c))).collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        let mut out = Self {
            n: self.n,
            coeffs: BTreeMap::new(),
        };
        for (&m1, c1) in &self.coeffs {
            for (&m2, c2) in &other.coeffs {
                if m1 & m2 == 0 {
                    out.accumulate(m1 | m2, c1.clone() * c2.clone());
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n).expect("n already validated");
        for _ in 0..k {
            acc = acc.multiply(self).expect("same n");
        }
        acc
    }

    /// ⟨F, G⟩ = Σ_m conj(F_m)·G_m, conjugate-linear in the first slot.
    pub fn inner_product(&self, other: &Self) -> Result<S> {
        self.same_n(other)?;
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(m, f)| other.coeffs.get(m).map(|g| f.conj() * g.clone()))
            .fold(S::zero(), |acc, x| acc + x))
    }

    pub fn norm_sq(&self) -> S {
        self.inner_product(self).expect("same n")
    }

    /// Divides by the square root of the squared norm. The exact backend
    /// refuses; pair the function with [`EtaFunction::norm_sq`] instead and
    /// normalize invariants by degree.
    pub fn normalize(&self) -> Result<Self> {
        let nsq = self.norm_sq();
        if nsq.is_zero() {
            return Err(Error::ZeroState);
        }
        let norm = nsq.real_sqrt()?;
        let inv = S::one().checked_div(&norm)?;
        Ok(self.scale(&inv))
    }

    /// Hodge dual: each monomial goes to the monomial on the complementary
    /// variables with the same coefficient.
    pub fn hodge_dual(&self) -> Self {
        let full = self.full_mask();
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&m, c)| (full ^ m, c.clone()))
                .collect(),
        }
    }

    fn full_mask(&self) -> Mask {
        ((1u64 << self.n) - 1) as Mask
    }

    /// g(F) for g ∈ {cos, sin, exp}: with F = f₀ + N and N nilpotent,
    /// g(F) = Σ_{k=0}^{n} g⁽ᵏ⁾(f₀) Nᵏ / k!.
    pub fn apply_series(&self, kind: SeriesKind) -> Result<Self> {
        let f0 = self.constant_term();
        let mut nil = self.clone();
        nil.coeffs.remove(&0);
        let coeffs = S::taylor_coefficients(kind, &f0, self.n + 1)?;
        let mut out = Self::zero(self.n)?;
        let mut power = Self::one(self.n)?;
        for c in coeffs {
            if power.coeffs.is_empty() {
                break;
            }
            out = out.add(&power.scale(&c))?;
            power = power.multiply(&nil)?;
        }
        Ok(out)
    }

    pub fn cos(&self) -> Result<Self> {
        self.apply_series(SeriesKind::Cos)
    }

    pub fn sin(&self) -> Result<Self> {
        self.apply_series(SeriesKind::Sin)
    }

    pub fn exp(&self) -> Result<Self> {
        self.apply_series(SeriesKind::Exp)
    }

    /// Coefficient-wise comparison with absolute tolerance `tol` (ignored by
    /// the exact backend).
    pub fn eq_within(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n
            && self
                .coeffs
                .keys()
                .chain(other.coeffs.keys())
                .all(|&m| self.coeff(m).near(&other.coeff(m), tol))
    }

    pub fn to_amplitudes(&self) -> AmplitudeVector<S> {
        let mut amps = vec![S::zero(); 1 << self.n];
        for (&m, c) in &self.coeffs {
            amps[mask_to_index(m, self.n)] = c.clone();
        }
        AmplitudeVector { n: self.n, amps }
    }

    pub fn from_amplitudes(a: &AmplitudeVector<S>) -> Self {
        let terms = a
            .amps
            .iter()
            .enumerate()
            .map(|(idx, c)| (index_to_mask(idx, a.n), c.clone()));
        Self::from_terms(a.n, terms).expect("amplitude vector has a valid qubit count")
    }

    /// `{"n": n, "coeffs": {"<mask>": [re, im], ...}}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(m, c)| (m.to_string(), c.to_json()))
            .collect();
        serde_json::json!({ "n": self.n, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing integer field \"n\"".into()))?
            as usize;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Json("missing object field \"coeffs\"".into()))?;
        let mut terms = Vec::with_capacity(coeffs.len());
        for (k, c) in coeffs {
            let m: Mask = k
                .parse()
                .map_err(|_| Error::Json(format!("bad mask {k:?}")))?;
            terms.push((m, S::from_json(c)?));
        }
        Self::from_terms(n, terms)
    }
}

impl<S: Scalar> PartialEq for EtaFunction<S> {
    fn eq(&self, other: &Self) -> bool {
        self.eq_within(other, DEFAULT_TOL)
    }
}

/// Renders `η₁η₂`-style monomials with ASCII names, e.g. `e1*e2`; mask 0 is `1`.
pub fn monomial_name(m: Mask) -> String {
    if m == 0 {
        return "1".into();
    }
    (0..MAX_VARIABLES)
        .filter(|i| m >> i & 1 == 1)
        .map(|i| format!("e{}", i + 1))
        .collect::<Vec<_>>()
        .join("*")
}

/// The binary-basis label of mask `m` for `n` qubits, qubit 1 first.
pub fn basis_label(m: Mask, n: usize) -> String {
    (0..n)
        .map(|i| if m >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl<S: Scalar> fmt::Display for EtaFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&m, c)| format!("({})*{}", c.render(), monomial_name(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Mask bit i (qubit i+1) maps to binary-string position i, counted from the
/// most significant end.
pub fn mask_to_index(m: Mask, n: usize) -> usize {
    (0..n)
        .filter(|i| m >> i & 1 == 1)
        .map(|i| 1 << (n - 1 - i))
        .sum()
}

pub fn index_to_mask(idx: usize, n: usize) -> Mask {
    (0..n)
        .filter(|i| idx >> (n - 1 - i) & 1 == 1)
        .map(|i| 1 << i)
        .sum()
}

/// Dense binary-basis amplitudes; `amps[b]` is the amplitude of the basis
/// string whose value (qubit 1 most significant) is `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector<S> {
    n: usize,
    amps: Vec<S>,
}

impl<S: Scalar> AmplitudeVector<S> {
    pub fn new(amps: Vec<S>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let n = len.trailing_zeros() as usize;
        check_count(n)?;
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[S] {
        &self.amps
    }

    /// Amplitude of the basis string given as 0/1 characters, e.g. `"0110"`.
    pub fn get(&self, label: &str) -> Option<&S> {
        if label.len() != self.n {
            return None;
        }
        let idx = usize::from_str_radix(label, 2).ok()?;
        self.amps.get(idx)
    }

    pub fn into_amps(self) -> Vec<S> {
        self.amps
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    /// Σ conj(a_b)·c_b.
    pub fn dot(&self, other: &Self) -> S {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(S::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
    }

    /// Applies the 2×2 matrix `g` to qubit `qubit` (1-based).
    pub fn apply_single_qubit(&self, qubit: usize, g: &[[S; 2]; 2]) -> Result<Self> {
        if qubit == 0 || qubit > self.n {
            return Err(Error::VariableIndex {
                index: qubit,
                n: self.n,
            });
        }
        let bit = 1 << (self.n - qubit);
        let mut out = self.amps.clone();
        for idx in (0..self.amps.len()).filter(|i| i & bit == 0) {
            let (a0, a1) = (self.amps[idx].clone(), self.amps[idx | bit].clone());
            out[idx] = g[0][0].clone() * a0.clone() + g[0][1].clone() * a1.clone();
            out[idx | bit] = g[1][0].clone() * a0 + g[1][1].clone() * a1;
        }
        Ok(Self {
            n: self.n,
            amps: out,
        })
    }

    /// Relabels qubits: qubit `q` of the result carries old qubit `perm[q]`
    /// (0-based positions).
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidSubset(format!(
                "{perm:?} is not a permutation of {} qubits",
                self.n
            )));
        }
        let n = self.n;
        let mut out = vec![S::zero(); self.amps.len()];
        for (old, a) in self.amps.iter().enumerate() {
            let new: usize = (0..n)
                .filter(|&q| old >> (n - 1 - perm[q]) & 1 == 1)
                .map(|q| 1 << (n - 1 - q))
                .sum();
            out[new] = a.clone();
        }
        Ok(Self { n, amps: out })
    }
}
