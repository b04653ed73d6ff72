//! Random states, random local unitaries, invariance sweeps and closed-form
//! curves for the monotones.
//!
//! Every random object is drawn from a `ChaCha8Rng` seeded per trial from a
//! master seed, so results do not depend on evaluation order.

use std::f64::consts::PI;
use std::io::Write;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eta::{AmplitudeVector, EtaFunction};
use crate::invariants::{self, flatten_rank, invariant_report, AmplitudeTensor4};
use crate::scalar::{Exact, Float, Magnitude, Scalar};
use crate::states;

/// Largest variable count accepted by [`random_state`].
pub const MAX_RANDOM_VARIABLES: usize = 6;

/// Drift is measured relative to `max(|reference|, DRIFT_FLOOR)`.
pub const DRIFT_FLOOR: f64 = 1e-6;

/// Relative drift bound for local-unitary and permutation checks.
pub const INVARIANCE_TOL: f64 = 1e-9;

/// Absolute bound for closed-form sweep rows.
pub const SWEEP_TOL: f64 = 1e-10;

/// Seed for trial `index` of a run started from `master` (splitmix64 step).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_random_n(n: usize) -> Result<()> {
    if (1..=MAX_RANDOM_VARIABLES).contains(&n) {
        Ok(())
    } else {
        Err(Error::VariableCount(n))
    }
}

fn random_terms<S: Scalar>(n: usize, seed: u64, from_mask: u32) -> Result<EtaFunction<S>> {
    check_random_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let f = EtaFunction::from_terms(n, (from_mask..1 << n).map(|m| (m, S::random(&mut rng))))?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

/// A random nonzero η-function of `n ≤ 6` variables, deterministic per seed.
pub fn random_state<S: Scalar>(n: usize, seed: u64) -> Result<EtaFunction<S>> {
    random_terms(n, seed, 0)
}

/// Like [`random_state`] but with zero constant term.
pub fn random_nilpotent<S: Scalar>(n: usize, seed: u64) -> Result<EtaFunction<S>> {
    random_terms(n, seed, 1)
}

pub type Unitary2 = [[Float; 2]; 2];

/// Haar-random 2×2 unitary: Gram–Schmidt on the columns of a complex
/// Gaussian matrix. The implied triangular factor has a positive real
/// diagonal, which is the phase fixing that makes the result Haar.
pub fn random_local_unitary(seed: u64) -> Unitary2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || {
        let re: f64 = rand::Rng::sample(&mut rng, StandardNormal);
        let im: f64 = rand::Rng::sample(&mut rng, StandardNormal);
        Float::new(re, im)
    };
    let v1 = [gauss(), gauss()];
    let v2 = [gauss(), gauss()];
    let norm = |v: &[Float; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let n1 = norm(&v1);
    let u1 = [v1[0] / n1, v1[1] / n1];
    let proj = u1[0].conj() * v2[0] + u1[1].conj() * v2[1];
    let w = [v2[0] - proj * u1[0], v2[1] - proj * u1[1]];
    let n2 = norm(&w);
    let u2 = [w[0] / n2, w[1] / n2];
    [[u1[0], u2[0]], [u1[1], u2[1]]]
}

/// Outcome of an invariance check on |F₃| and |F₂′|.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub trials: usize,
    pub max_drift_f3: f64,
    pub max_drift_f2: f64,
    pub tol: f64,
    /// Exact backend only: every transformed value equalled the reference.
    pub exact_match: Option<bool>,
    pub passed: bool,
}

pub fn relative_drift(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(DRIFT_FLOOR)
}

struct DriftTracker {
    reference: (Magnitude, Magnitude),
    trials: usize,
    f3: f64,
    f2: f64,
    exact: bool,
}

impl DriftTracker {
    fn new(reference: (Magnitude, Magnitude)) -> Self {
        Self {
            reference,
            trials: 0,
            f3: 0.0,
            f2: 0.0,
            exact: true,
        }
    }

    fn observe(&mut self, f3: Magnitude, f2: Magnitude) {
        self.trials += 1;
        self.f3 = self
            .f3
            .max(relative_drift(f3.to_f64(), self.reference.0.to_f64()));
        self.f2 = self
            .f2
            .max(relative_drift(f2.to_f64(), self.reference.1.to_f64()));
        self.exact &= f3 == self.reference.0 && f2 == self.reference.1;
    }

    fn finish(self, tol: f64, exact_backend: bool) -> InvarianceReport {
        let exact_match = exact_backend.then_some(self.exact);
        let passed = match exact_match {
            Some(m) => m,
            None => self.f3 < tol && self.f2 < tol,
        };
        InvarianceReport {
            trials: self.trials,
            max_drift_f3: self.f3,
            max_drift_f2: self.f2,
            tol,
            exact_match,
            passed,
        }
    }
}

fn monotones<S: Scalar>(v: &AmplitudeVector<S>) -> Result<(Magnitude, Magnitude)> {
    invariants::monotones(&AmplitudeTensor4::from_amplitudes(v)?)
}

/// Applies `trials` independent random U₁⊗U₂⊗U₃⊗U₄ to `state` and tracks
/// the relative drift of both monotones.
pub fn check_lu_invariance(
    state: &EtaFunction<Float>,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<InvarianceReport> {
    let v = state.to_amplitudes();
    let mut tracker = DriftTracker::new(monotones(&v)?);
    for trial in 0..trials {
        let mut u = v.clone();
        for qubit in 1..=4 {
            let s = derive_seed(seed, (trial * 4 + qubit) as u64);
            u = u.apply_single_qubit(qubit, &random_local_unitary(s))?;
        }
        let (f3, f2) = monotones(&u)?;
        tracker.observe(f3, f2);
    }
    Ok(tracker.finish(tol, false))
}

/// All 24 orderings of four qubits, identity first.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// Evaluates both monotones under every qubit relabeling. On the exact backend
/// the check passes only if every value is identical.
pub fn check_permutation_invariance<S: Scalar>(
    state: &EtaFunction<S>,
    tol: f64,
) -> Result<InvarianceReport> {
    let v = state.to_amplitudes();
    let mut tracker = DriftTracker::new(monotones(&v)?);
    for p in permutations4() {
        let (f3, f2) = monotones(&v.permute_qubits(&p)?)?;
        tracker.observe(f3, f2);
    }
    Ok(tracker.finish(tol, S::BACKEND == crate::scalar::Backend::Exact))
}

/// One point of a closed-form sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub f3_computed: f64,
    pub f3_closed: f64,
    pub f3_err: f64,
    pub f2_computed: f64,
    pub f2_closed: f64,
    pub f2_err: f64,
}

impl SweepRow {
    fn new(parameter: f64, f3: f64, f3_closed: f64, f2: f64, f2_closed: f64) -> Self {
        Self {
            parameter,
            f3_computed: f3,
            f3_closed,
            f3_err: (f3 - f3_closed).abs(),
            f2_computed: f2,
            f2_closed,
            f2_err: (f2 - f2_closed).abs(),
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.f3_err < tol && self.f2_err < tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaFamily {
    /// sin α·ψ_CW + cos α·ψ_GHZ
    C,
    /// cos α·ψ_W + sin α·⋆ψ_W
    S,
}

fn grid(points: usize) -> Result<()> {
    if points < 2 {
        Err(Error::DegenerateGrid(points))
    } else {
        Ok(())
    }
}

/// Closed-form (|F₃|, |F₂′|) of the α-families.
pub fn alpha_closed_form(family: AlphaFamily, alpha: f64) -> (f64, f64) {
    match family {
        AlphaFamily::C => (0.5, 3.0),
        AlphaFamily::S => {
            let s = (2.0 * alpha).sin();
            (0.5 * s.powi(6), 3.0 * s.powi(4))
        }
    }
}

/// Both monotones on a uniform α grid over [0, π].
pub fn sweep_alpha(family: AlphaFamily, points: usize) -> Result<Vec<SweepRow>> {
    grid(points)?;
    (0..points)
        .map(|k| {
            let alpha = PI * k as f64 / (points - 1) as f64;
            let st = match family {
                AlphaFamily::C => states::psi_c_alpha::<Float>(alpha)?,
                AlphaFamily::S => states::psi_s_alpha::<Float>(alpha)?,
            };
            let (f3, f2) = monotones(&st.function.to_amplitudes())?;
            let (c3, c2) = alpha_closed_form(family, alpha);
            Ok(SweepRow::new(alpha, f3.to_f64(), c3, f2.to_f64(), c2))
        })
        .collect()
}

/// ζ = (2ad / (a² + d²))².
pub fn zeta<S: Scalar>(a: &S, d: &S) -> Result<S> {
    let r = (S::from_i64(2) * a.clone() * d.clone())
        .checked_div(&(a.clone() * a.clone() + d.clone() * d.clone()))?;
    Ok(r.clone() * r)
}

/// Closed-form (|F₃|, |F₂′|) on the a = b, c = d slice as functions of ζ.
pub fn zeta_closed_form<S: Scalar>(z: &S) -> (S, S) {
    let one = S::one();
    let f3 = (one.clone() - z.clone()).pow(2) * (z.clone() + S::from_ratio(1, 2));
    let f2 = (z.clone() - one) * (z.clone() - S::from_i64(3));
    (f3, f2)
}

/// a = 1 and d uniform on [0, 1], so ζ covers [0, 1] monotonically.
pub fn sweep_zeta(points: usize) -> Result<Vec<SweepRow>> {
    grid(points)?;
    (0..points)
        .map(|k| {
            let d = k as f64 / (points - 1) as f64;
            let (a, d) = (Float::new(1.0, 0.0), Float::new(d, 0.0));
            let z = zeta(&a, &d)?;
            let (f3, f2) = monotones(&states::psi_ad(a, d)?.function.to_amplitudes())?;
            let (c3, c2) = zeta_closed_form(&z);
            Ok(SweepRow::new(
                z.re,
                f3.to_f64(),
                c3.norm(),
                f2.to_f64(),
                c2.norm(),
            ))
        })
        .collect()
}

/// Exact evaluation of the a = 1 slice at a rational `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactZetaPoint {
    pub d: BigRational,
    pub zeta: BigRational,
    pub f3: Magnitude,
    pub f2: Magnitude,
    pub f3_closed: BigRational,
    pub f2_closed: BigRational,
}

impl ExactZetaPoint {
    pub fn matches(&self) -> bool {
        self.f3.as_rational() == Some(&self.f3_closed)
            && self.f2.as_rational() == Some(&self.f2_closed)
    }
}

pub fn zeta_point_exact(d: &BigRational) -> Result<ExactZetaPoint> {
    let (a, dd) = (
        Exact::from_rational(&BigRational::one()),
        Exact::from_rational(d),
    );
    let z = zeta(&a, &dd)?;
    let (f3, f2) = monotones(&states::psi_ad(a, dd)?.function.to_amplitudes())?;
    let (c3, c2) = zeta_closed_form(&z);
    let abs = |x: Exact| {
        if x.re < BigRational::zero() {
            -x.re
        } else {
            x.re
        }
    };
    Ok(ExactZetaPoint {
        d: d.clone(),
        zeta: z.re,
        f3,
        f2,
        f3_closed: abs(c3),
        f2_closed: abs(c2),
    })
}

/// Writes rows as CSV with the header
/// `parameter,f3_computed,f3_closed,f3_err,f2_computed,f2_closed,f2_err`.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}

pub fn rows_to_json(rows: &[SweepRow]) -> serde_json::Value {
    serde_json::to_value(rows).expect("plain numeric rows")
}

/// cos²F + sin²F = 1, coefficient-wise. Exact on the exact backend.
pub fn trig_identity_holds<S: Scalar>(f: &EtaFunction<S>, tol: f64) -> Result<bool> {
    let (c, s) = (f.cos()?, f.sin()?);
    let sum = c.multiply(&c)?.add(&s.multiply(&s)?)?;
    Ok(sum.eq_within(&EtaFunction::one(f.n())?, tol))
}

/// One named exact value compared against its expected rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl AnchorCheck {
    fn new(name: String, expected: &str, actual: String) -> Self {
        let passed = actual == expected;
        Self {
            name,
            expected: expected.into(),
            actual,
            passed,
        }
    }
}

/// Exact reference values of the named four-qubit states.
pub fn exact_anchor_checks() -> Result<Vec<AnchorCheck>> {
    let one = <Exact as Scalar>::one();
    let cases: [(&str, NamedStateExact, &[(&str, &str)]); 5] = [
        (
            "PSIC4",
            states::psi_c(4)?,
            &[("F3abs", "1/2"), ("F2abs", "3")],
        ),
        (
            "PSIS4",
            states::psi_s(4)?,
            &[("F3abs", "1/2"), ("F2abs", "3")],
        ),
        (
            "PSICS",
            states::psi_cs()?,
            &[
                ("H", "0"),
                ("W", "0"),
                ("Sigma", "1/128"),
                ("Pi", "1/2048"),
                ("F3abs", "1"),
                ("F2abs", "1"),
            ],
        ),
        (
            "PSIA(1)",
            states::psi_a(one.clone())?,
            &[("F3abs", "0"), ("F2abs", "0")],
        ),
        (
            "PSID(1)",
            states::psi_d(one)?,
            &[("F3abs", "0"), ("F2abs", "0")],
        ),
    ];
    let mut out = Vec::new();
    for (label, st, expect) in cases {
        let fields = invariant_report(&AmplitudeTensor4::from_state(&st)?)?.fields();
        for (key, want) in expect {
            let got = fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .unwrap_or_default();
            out.push(AnchorCheck::new(format!("{label} {key}"), want, got));
        }
        if label.starts_with("PSIA") || label.starts_with("PSID") {
            let rank = flatten_rank(&st.function.to_amplitudes(), &[1, 3])?;
            out.push(AnchorCheck::new(
                format!("{label} rank 13|24"),
                "1",
                rank.to_string(),
            ));
        }
    }
    Ok(out)
}

type NamedStateExact = states::NamedState<Exact>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_states_are_deterministic() {
        let a = random_state::<Float>(4, 7).unwrap();
        assert_eq!(a, random_state::<Float>(4, 7).unwrap());
        let b = random_state::<Float>(4, 8).unwrap();
        let ip = a
            .normalize()
            .unwrap()
            .inner_product(&b.normalize().unwrap())
            .unwrap();
        assert!(ip.norm() < 1.0 - 1e-6);
        assert!(random_state::<Float>(7, 0).is_err());
        assert!(random_nilpotent::<Exact>(3, 1)
            .unwrap()
            .coeff(0)
            .is_exact_zero());
    }

    #[test]
    fn exact_random_coefficients_are_bounded() {
        let f = random_state::<Exact>(5, 42).unwrap();
        let bound = num_bigint::BigInt::from(crate::scalar::RANDOM_RATIONAL_BOUND);
        for (_, c) in f.terms() {
            for part in [&c.re, &c.im] {
                assert!(part.denom() <= &bound);
                assert!(num_traits::Signed::abs(part.numer()) <= bound);
            }
        }
    }

    #[test]
    fn haar_unitaries() {
        for seed in 0..50 {
            let u = random_local_unitary(seed);
            for i in 0..2 {
                for j in 0..2 {
                    let dot = u[0][i].conj() * u[0][j] + u[1][i].conj() * u[1][j];
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - Float::new(expect, 0.0)).norm() < 1e-13);
                }
            }
            let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
            assert!((det.norm() - 1.0).abs() < 1e-13);
        }
        assert_eq!(random_local_unitary(9), random_local_unitary(9));
    }

    #[test]
    fn permutation_list() {
        let p = permutations4();
        assert_eq!(p.len(), 24);
        assert_eq!(p[0], [0, 1, 2, 3]);
        let mut sorted = p.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
    }

    #[test]
    fn invariance_checks() {
        let cs = states::psi_cs::<Exact>().unwrap().function;
        let r = check_permutation_invariance(&cs, INVARIANCE_TOL).unwrap();
        assert_eq!(r.exact_match, Some(true));
        assert!(r.passed && r.max_drift_f3 == 0.0);

        let c4 = states::psi_c::<Float>(4).unwrap().function;
        let r = check_lu_invariance(&c4, 200, INVARIANCE_TOL, 1).unwrap();
        assert!(r.passed, "{r:?}");

        let mut prod = vec![Float::new(0.0, 0.0); 16];
        prod[0] = Float::new(1.0, 0.0);
        let prod = EtaFunction::from_amplitudes(&AmplitudeVector::new(prod).unwrap());
        let r = check_lu_invariance(&prod, 20, INVARIANCE_TOL, 2).unwrap();
        assert!(r.passed);
        let (f3, f2) = monotones(&prod.to_amplitudes()).unwrap();
        assert!(f3.to_f64() < 1e-15 && f2.to_f64() < 1e-15);
    }

    #[test]
    fn sweep_endpoints() {
        let rows = sweep_alpha(AlphaFamily::S, 5).unwrap();
        // α = π/4
        assert!((rows[1].f3_computed - 0.5).abs() < 1e-12);
        assert!((rows[1].f2_computed - 3.0).abs() < 1e-12);
        assert!(rows[0].f3_computed.abs() < 1e-14 && rows[0].f2_computed.abs() < 1e-14);
        assert!(rows.iter().all(|r| r.within(SWEEP_TOL)));
        let z = sweep_zeta(3).unwrap();
        assert_eq!(z[2].parameter, 1.0);
        assert!(z[2].f3_computed < 1e-14 && z[2].f2_computed < 1e-14);
        assert_eq!(sweep_zeta(1).unwrap_err(), Error::DegenerateGrid(1));
    }

    #[test]
    fn exact_zeta_point() {
        let p = zeta_point_exact(&BigRational::new(1.into(), 3.into())).unwrap();
        assert_eq!(p.zeta, BigRational::new(9.into(), 25.into()));
        assert!(p.matches());
    }

    #[test]
    fn trig_and_anchors() {
        let f = random_nilpotent::<Exact>(4, 3).unwrap();
        assert!(trig_identity_holds(&f, 0.0).unwrap());
        let g = f.add(&EtaFunction::variable(4, 1).unwrap()).unwrap();
        assert!(trig_identity_holds(&g, 0.0).unwrap());
        let checks = exact_anchor_checks().unwrap();
        assert_eq!(checks.len(), 16);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn csv_header() {
        let rows = sweep_alpha(AlphaFamily::C, 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .starts_with("parameter,f3_computed,f3_closed,f3_err,f2_computed,f2_closed,f2_err\n"));
        assert_eq!(text.lines().count(), 3);
        assert_eq!(rows_to_json(&rows).as_array().unwrap().len(), 2);
    }
}
