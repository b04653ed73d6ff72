//! Named multiqubit states as η-functions.
//!
//! Every state is stored unnormalized, with exact integer or rational
//! coefficients where possible, together with its squared norm. The
//! trigonometric states are produced by the series code, never keyed in by
//! hand.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::eta::EtaFunction;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedState<S: Scalar> {
    pub label: String,
    pub function: EtaFunction<S>,
    pub norm_sq: S,
}

impl<S: Scalar> NamedState<S> {
    pub fn new(label: impl Into<String>, function: EtaFunction<S>) -> Self {
        let norm_sq = function.norm_sq();
        Self {
            label: label.into(),
            function,
            norm_sq,
        }
    }

    pub fn n(&self) -> usize {
        self.function.n()
    }
}

/// Parameters (a, b, c, d) of the generic four-qubit family G_abcd.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> FamilyParams<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self> {
        if [&a, &b, &c, &d].iter().all(|x| x.is_exact_zero()) {
            return Err(Error::UnsupportedState {
                state: "G".into(),
                reason: "all parameters are zero".into(),
            });
        }
        Ok(Self { a, b, c, d })
    }
}

fn unsupported<T>(state: &str, n: usize) -> Result<T> {
    Err(Error::UnsupportedState {
        state: state.into(),
        reason: format!("n = {n} not available"),
    })
}

fn eta<S: Scalar>(n: usize, i: usize) -> EtaFunction<S> {
    EtaFunction::variable(n, i).expect("index checked by caller")
}

/// η_i ± η_j for four variables.
fn pair<S: Scalar>(i: usize, j: usize, minus: bool) -> EtaFunction<S> {
    let (a, b) = (eta::<S>(4, i), eta::<S>(4, j));
    if minus { a.sub(&b) } else { a.add(&b) }.expect("same n")
}

/// cos(η_i − η_j) − cos(η_k + η_l), which equals η_iη_j + η_kη_l.
fn cos_difference<S: Scalar>(i: usize, j: usize, k: usize, l: usize) -> Result<EtaFunction<S>> {
    pair::<S>(i, j, true)
        .cos()?
        .sub(&pair::<S>(k, l, false).cos()?)
}

fn variable_sum<S: Scalar>(n: usize) -> Result<EtaFunction<S>> {
    (1..=n).try_fold(EtaFunction::zero(n)?, |acc, i| {
        acc.add(&EtaFunction::variable(n, i)?)
    })
}

fn half<S: Scalar>() -> S {
    S::from_ratio(1, 2)
}

/// GHZ representative: 1 − η₁η₂ for n = 2, 1 + η₁⋯η_n for n = 3, 4.
pub fn ghz<S: Scalar>(n: usize) -> Result<NamedState<S>> {
    let top: Vec<usize> = (1..=n).collect();
    let sign = match n {
        2 => S::from_i64(-1),
        3 | 4 => S::one(),
        _ => return unsupported("GHZ", n),
    };
    let f = EtaFunction::one(n)?.add(&EtaFunction::monomial(n, &top, sign)?)?;
    Ok(NamedState::new(format!("GHZ{n}"), f))
}

/// W representative: η₁ + ⋯ + η_n.
pub fn w<S: Scalar>(n: usize) -> Result<NamedState<S>> {
    if !(2..=4).contains(&n) {
        return unsupported("W", n);
    }
    Ok(NamedState::new(format!("W{n}"), variable_sum(n)?))
}

/// Cluster-Werner representative: Σ_{i<j} η_iη_j.
pub fn cw<S: Scalar>(n: usize) -> Result<NamedState<S>> {
    if !(3..=4).contains(&n) {
        return unsupported("CW", n);
    }
    let mut f = EtaFunction::zero(n)?;
    for i in 1..=n {
        for j in (i + 1)..=n {
            f = f.add(&EtaFunction::monomial(n, &[i, j], S::one())?)?;
        }
    }
    Ok(NamedState::new(format!("CW{n}"), f))
}

/// Hodge dual of the four-qubit W state.
pub fn star_w<S: Scalar>() -> Result<NamedState<S>> {
    Ok(NamedState::new("STARW4", w::<S>(4)?.function.hodge_dual()))
}

/// cos(η₁ + ⋯ + η_n).
pub fn psi_c<S: Scalar>(n: usize) -> Result<NamedState<S>> {
    if !(2..=4).contains(&n) {
        return unsupported("PSIC", n);
    }
    Ok(NamedState::new(
        format!("PSIC{n}"),
        variable_sum::<S>(n)?.cos()?,
    ))
}

/// sin(η₁ + ⋯ + η_n).
pub fn psi_s<S: Scalar>(n: usize) -> Result<NamedState<S>> {
    if !(2..=4).contains(&n) {
        return unsupported("PSIS", n);
    }
    Ok(NamedState::new(
        format!("PSIS{n}"),
        variable_sum::<S>(n)?.sin()?,
    ))
}

/// cos(η₁η₂ + η₃η₄) + sin(η₁η₂ + η₃η₄) = 1 + η₁η₂ + η₃η₄ − η₁η₂η₃η₄.
pub fn psi_cs<S: Scalar>() -> Result<NamedState<S>> {
    let arg = EtaFunction::monomial(4, &[1, 2], S::one())?.add(&EtaFunction::monomial(
        4,
        &[3, 4],
        S::one(),
    )?)?;
    Ok(NamedState::new("PSICS", arg.cos()?.add(&arg.sin()?)?))
}

/// G_abcd as an η-function:
///
/// (a+d)/2·exp(η₁η₂η₃η₄) + (a−d)/2·(cos(η₁−η₂) − cos(η₃+η₄))
///   + (b+c)/2·(cos(η₁−η₃) − cos(η₂+η₄)) + (b−c)/2·(cos(η₁−η₄) − cos(η₂+η₃)).
///
/// `exp` acts on the top monomial, so it contributes 1 + η₁η₂η₃η₄.
pub fn g_abcd<S: Scalar>(p: &FamilyParams<S>) -> Result<NamedState<S>> {
    let h = half::<S>();
    let top = EtaFunction::monomial(4, &[1, 2, 3, 4], S::one())?.exp()?;
    let f = top
        .scale(&(h.clone() * (p.a.clone() + p.d.clone())))
        .add(&cos_difference(1, 2, 3, 4)?.scale(&(h.clone() * (p.a.clone() - p.d.clone()))))?
        .add(&cos_difference(1, 3, 2, 4)?.scale(&(h.clone() * (p.b.clone() + p.c.clone()))))?
        .add(&cos_difference(1, 4, 2, 3)?.scale(&(h * (p.b.clone() - p.c.clone()))))?;
    let label = format!(
        "G({},{},{},{})",
        p.a.render(),
        p.b.render(),
        p.c.render(),
        p.d.render()
    );
    Ok(NamedState::new(label, f))
}

/// The a = b, c = d slice of G_abcd.
pub fn psi_ad<S: Scalar>(a: S, d: S) -> Result<NamedState<S>> {
    if a.is_exact_zero() && d.is_exact_zero() {
        return Err(Error::UnsupportedState {
            state: "PSIAD".into(),
            reason: "a = d = 0".into(),
        });
    }
    let label = format!("PSIAD({},{})", a.render(), d.render());
    let st = g_abcd(&FamilyParams::new(a.clone(), a, d.clone(), d)?)?;
    Ok(NamedState { label, ..st })
}

/// a·(exp(η₁η₂η₃η₄) + cos(η₁−η₃) − cos(η₂+η₄)) = a·(1+η₁η₃)(1+η₂η₄).
pub fn psi_a<S: Scalar>(a: S) -> Result<NamedState<S>> {
    if a.is_exact_zero() {
        return Err(Error::UnsupportedState {
            state: "PSIA".into(),
            reason: "a = 0".into(),
        });
    }
    let top = EtaFunction::monomial(4, &[1, 2, 3, 4], S::one())?.exp()?;
    let f = top.add(&cos_difference(1, 3, 2, 4)?)?.scale(&a);
    Ok(NamedState::new(format!("PSIA({})", a.render()), f))
}

/// d·(cos(η₁−η₂) − cos(η₃+η₄) + cos(η₁−η₄) − cos(η₂+η₃)) = d·(η₁+η₃)(η₂+η₄).
pub fn psi_d<S: Scalar>(d: S) -> Result<NamedState<S>> {
    if d.is_exact_zero() {
        return Err(Error::UnsupportedState {
            state: "PSID".into(),
            reason: "d = 0".into(),
        });
    }
    let f = cos_difference(1, 2, 3, 4)?
        .add(&cos_difference(1, 4, 2, 3)?)?
        .scale(&d);
    Ok(NamedState::new(format!("PSID({})", d.render()), f))
}

fn real<S: Scalar>(x: f64) -> Result<S> {
    BigRational::from_float(x)
        .map(|r| S::from_rational(&r))
        .ok_or_else(|| Error::UnsupportedState {
            state: "alpha".into(),
            reason: format!("{x} is not finite"),
        })
}

fn unit<S: Scalar>(st: NamedState<S>, name: &str) -> Result<EtaFunction<S>> {
    st.function.normalize().map_err(|e| match e {
        Error::ExactNormalize => Error::FloatOnly(name.into()),
        other => other,
    })
}

/// sin α·ψ_CW + cos α·ψ_GHZ with unit-normalized four-qubit ingredients.
pub fn psi_c_alpha<S: Scalar>(alpha: f64) -> Result<NamedState<S>> {
    let cw = unit(cw::<S>(4)?, "PSICALPHA")?;
    let ghz = unit(ghz::<S>(4)?, "PSICALPHA")?;
    let f = cw
        .scale(&real(alpha.sin())?)
        .add(&ghz.scale(&real(alpha.cos())?))?;
    Ok(NamedState::new(format!("PSICALPHA({alpha})"), f))
}

/// cos α·ψ_W + sin α·⋆ψ_W with unit-normalized four-qubit ingredients.
pub fn psi_s_alpha<S: Scalar>(alpha: f64) -> Result<NamedState<S>> {
    let w = unit(w::<S>(4)?, "PSISALPHA")?;
    let star = w.hodge_dual();
    let f = w
        .scale(&real(alpha.cos())?)
        .add(&star.scale(&real(alpha.sin())?))?;
    Ok(NamedState::new(format!("PSISALPHA({alpha})"), f))
}

/// Labels accepted by [`lookup`] without arguments.
pub const FIXED_LABELS: &[&str] = &[
    "GHZ2", "GHZ3", "GHZ4", "W2", "W3", "W4", "CW3", "CW4", "STARW4", "PSIC2", "PSIC3", "PSIC4",
    "PSIS2", "PSIS3", "PSIS4", "PSICS",
];

/// Labels that take literal arguments, with their arity.
pub const PARAMETRIC_LABELS: &[(&str, usize)] = &[
    ("G", 4),
    ("PSICALPHA", 1),
    ("PSISALPHA", 1),
    ("PSIAD", 2),
    ("PSIA", 1),
    ("PSID", 1),
];

pub fn is_known_label(name: &str) -> bool {
    FIXED_LABELS.contains(&name) || PARAMETRIC_LABELS.iter().any(|(l, _)| *l == name)
}

/// Resolves a registry label such as `PSIC4` or `G` with arguments `[1,0,0,1]`.
pub fn lookup<S: Scalar>(name: &str, args: &[BigRational]) -> Result<NamedState<S>> {
    let bad_arity = |want: usize| Error::UnsupportedState {
        state: name.into(),
        reason: format!("expected {want} argument(s), got {}", args.len()),
    };
    if let Some(&(_, arity)) = PARAMETRIC_LABELS.iter().find(|(l, _)| *l == name) {
        if args.len() != arity {
            return Err(bad_arity(arity));
        }
        let s = |i: usize| S::from_rational(&args[i]);
        let f = |i: usize| num_traits::ToPrimitive::to_f64(&args[i]).unwrap_or(f64::NAN);
        return match name {
            "G" => g_abcd(&FamilyParams::new(s(0), s(1), s(2), s(3))?),
            "PSICALPHA" => psi_c_alpha(f(0)),
            "PSISALPHA" => psi_s_alpha(f(0)),
            "PSIAD" => psi_ad(s(0), s(1)),
            "PSIA" => psi_a(s(0)),
            _ => psi_d(s(0)),
        };
    }
    if !args.is_empty() {
        return Err(bad_arity(0));
    }
    let digit = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|d| d.parse::<usize>().ok())
    };
    let st = match name {
        "PSICS" => psi_cs(),
        "STARW4" => star_w(),
        _ if name.starts_with("GHZ") => digit("GHZ").map_or_else(|| unsupported(name, 0), ghz),
        _ if name.starts_with("CW") => digit("CW").map_or_else(|| unsupported(name, 0), cw),
        _ if name.starts_with("PSIC") => digit("PSIC").map_or_else(|| unsupported(name, 0), psi_c),
        _ if name.starts_with("PSIS") => digit("PSIS").map_or_else(|| unsupported(name, 0), psi_s),
        _ if name.starts_with('W') => digit("W").map_or_else(|| unsupported(name, 0), w),
        _ => Err(Error::UnsupportedState {
            state: name.into(),
            reason: "unknown label".into(),
        }),
    }?;
    if !FIXED_LABELS.contains(&name) {
        return Err(Error::UnsupportedState {
            state: name.into(),
            reason: "unknown label".into(),
        });
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::{basis_label, Mask};
    use crate::scalar::{Exact, Float};

    fn coeffs(st: &NamedState<Exact>) -> Vec<(String, String)> {
        st.function
            .terms()
            .map(|(m, c)| (basis_label(m, st.n()), c.render()))
            .collect()
    }

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn basic_states() {
        let w4 = w::<Exact>(4).unwrap();
        assert_eq!(w4.norm_sq, q(4, 1));
        assert_eq!(cw::<Exact>(4).unwrap().norm_sq, q(6, 1));
        assert_eq!(cw::<Exact>(3).unwrap().norm_sq, q(3, 1));
        let g2 = ghz::<Exact>(2).unwrap();
        assert_eq!(
            coeffs(&g2),
            vec![("00".into(), "1".into()), ("11".into(), "-1".into())]
        );
        assert_eq!(g2.norm_sq, q(2, 1));
        assert_eq!(
            coeffs(&ghz::<Exact>(4).unwrap()),
            vec![("0000".into(), "1".into()), ("1111".into(), "1".into())]
        );
        assert!(ghz::<Exact>(5).is_err());
        assert!(cw::<Exact>(2).is_err());
    }

    #[test]
    fn trig_states() {
        let c3 = psi_c::<Exact>(3).unwrap();
        assert_eq!(
            coeffs(&c3),
            vec![
                ("000".into(), "1".into()),
                ("110".into(), "-1".into()),
                ("101".into(), "-1".into()),
                ("011".into(), "-1".into()),
            ]
        );
        let s4 = psi_s::<Exact>(4).unwrap();
        for (m, c) in s4.function.terms() {
            let expect = match m.count_ones() {
                1 => q(1, 1),
                3 => q(-1, 1),
                _ => panic!("unexpected monomial {m:b}"),
            };
            assert_eq!(c, &expect);
        }
        assert_eq!(s4.function.terms().count(), 8);
        assert_eq!(psi_c::<Exact>(2).unwrap().norm_sq, q(2, 1));
        assert_eq!(psi_s::<Exact>(3).unwrap().norm_sq, q(4, 1));
        assert_eq!(psi_c::<Exact>(4).unwrap().norm_sq, q(8, 1));
    }

    #[test]
    fn cluster_state() {
        let cs = psi_cs::<Exact>().unwrap();
        assert_eq!(
            coeffs(&cs),
            vec![
                ("0000".into(), "1".into()),
                ("1100".into(), "1".into()),
                ("0011".into(), "1".into()),
                ("1111".into(), "-1".into()),
            ]
        );
        assert_eq!(cs.norm_sq, q(4, 1));
        let a = cs.function.to_amplitudes();
        assert_eq!(a.get("1111").unwrap().clone() * q(1, 2), q(-1, 2));
    }

    #[test]
    fn family_g() {
        let one = Exact::one();
        let g =
            g_abcd(&FamilyParams::new(one.clone(), one.clone(), one.clone(), one.clone()).unwrap())
                .unwrap();
        assert_eq!(
            coeffs(&g),
            vec![
                ("0000".into(), "1".into()),
                ("1010".into(), "1".into()),
                ("0101".into(), "1".into()),
                ("1111".into(), "1".into()),
            ]
        );
        let d = cos_difference::<Exact>(1, 2, 3, 4).unwrap();
        assert_eq!(
            d.terms().map(|(m, _)| m).collect::<Vec<Mask>>(),
            vec![0b0011, 0b1100]
        );
        let zero = Exact::from_i64(0);
        assert!(FamilyParams::new(zero.clone(), zero.clone(), zero.clone(), zero).is_err());
    }

    #[test]
    fn ad_slice_placement() {
        let (a, d) = (q(3, 1), q(1, 2));
        let st = psi_ad(a.clone(), d.clone()).unwrap();
        let amps = st.function.to_amplitudes();
        let p = (a.clone() + d.clone()) * q(1, 2);
        let m = (a - d) * q(1, 2);
        for label in ["0000", "1111", "0101", "1010"] {
            assert_eq!(amps.get(label), Some(&p), "{label}");
        }
        for label in ["1100", "0011", "1001", "0110"] {
            assert_eq!(amps.get(label), Some(&m), "{label}");
        }
        let plug = psi_ad(q(1, 1), q(0, 1)).unwrap();
        assert!(plug
            .function
            .terms()
            .all(|(m, c)| m.count_ones() % 2 == 0 && c == &q(1, 2)));
        assert_eq!(plug.function.terms().count(), 8);
    }

    #[test]
    fn factorizations() {
        let e13 = EtaFunction::one(4)
            .unwrap()
            .add(&EtaFunction::monomial(4, &[1, 3], Exact::one()).unwrap())
            .unwrap();
        let e24 = EtaFunction::one(4)
            .unwrap()
            .add(&EtaFunction::monomial(4, &[2, 4], Exact::one()).unwrap())
            .unwrap();
        assert_eq!(
            psi_a(Exact::one()).unwrap().function,
            e13.multiply(&e24).unwrap()
        );
        let s13 = pair::<Exact>(1, 3, false);
        let s24 = pair::<Exact>(2, 4, false);
        let d = psi_d(Exact::one()).unwrap();
        assert_eq!(d.function, s13.multiply(&s24).unwrap());
        assert_eq!(
            d.function
                .terms()
                .map(|(m, _)| basis_label(m, 4))
                .collect::<Vec<_>>(),
            vec!["1100", "0110", "1001", "0011"]
        );
        assert_eq!(
            psi_a(Exact::one()).unwrap().function,
            psi_ad(q(1, 1), q(1, 1)).unwrap().function
        );
        assert_eq!(d.function, psi_ad(q(1, 1), q(-1, 1)).unwrap().function);
        assert!(psi_a(q(0, 1)).is_err());
    }

    #[test]
    fn dual_and_orthogonality() {
        assert_eq!(
            w::<Exact>(4).unwrap().function.hodge_dual(),
            star_w::<Exact>().unwrap().function
        );
        let ip = |a: &NamedState<Exact>, b: &NamedState<Exact>| {
            a.function.inner_product(&b.function).unwrap()
        };
        assert_eq!(ip(&ghz(4).unwrap(), &cw(4).unwrap()), q(0, 1));
        assert_eq!(ip(&w(4).unwrap(), &star_w().unwrap()), q(0, 1));
    }

    #[test]
    fn alpha_families() {
        let s = psi_s_alpha::<Float>(std::f64::consts::FRAC_PI_4).unwrap();
        for (m, c) in s.function.terms() {
            assert!(matches!(m.count_ones(), 1 | 3));
            assert!(c.near(
                &Float::new(0.5 * std::f64::consts::FRAC_1_SQRT_2, 0.0),
                1e-15
            ));
        }
        let c0 = psi_c_alpha::<Float>(0.0).unwrap();
        assert!(c0.function.eq_within(
            &ghz::<Float>(4).unwrap().function.normalize().unwrap(),
            1e-15
        ));
        let sm = psi_s_alpha::<Float>(-std::f64::consts::FRAC_PI_4).unwrap();
        let trig = psi_s::<Float>(4).unwrap().function.normalize().unwrap();
        assert!(sm.function.eq_within(&trig, 1e-15));
        for alpha in [0.1, 1.0, 2.5] {
            assert!((psi_c_alpha::<Float>(alpha).unwrap().norm_sq.re - 1.0).abs() < 1e-12);
            assert!((psi_s_alpha::<Float>(alpha).unwrap().norm_sq.re - 1.0).abs() < 1e-12);
        }
        assert_eq!(
            psi_s_alpha::<Exact>(0.5).unwrap_err(),
            Error::FloatOnly("PSISALPHA".into())
        );
    }

    #[test]
    fn registry() {
        for label in FIXED_LABELS {
            let st = lookup::<Exact>(label, &[]).unwrap();
            assert_eq!(&st.label, label);
            assert_eq!(st.norm_sq, st.function.norm_sq());
        }
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        let g =
            lookup::<Exact>("G", &[one.clone(), zero.clone(), zero.clone(), one.clone()]).unwrap();
        assert_eq!(g.function, ghz::<Exact>(4).unwrap().function);
        assert!(lookup::<Exact>("GHZ9", &[]).is_err());
        assert!(lookup::<Exact>("W5", &[]).is_err());
        assert!(lookup::<Exact>("PSIAD", &[one.clone()]).is_err());
        assert!(lookup::<Exact>("FOO", &[]).is_err());
        assert!(lookup::<Exact>("PSICALPHA", &[one.clone()]).is_err());
        assert!(lookup::<Float>("PSICALPHA", &[one]).is_ok());
    }
}
