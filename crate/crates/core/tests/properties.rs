use etaqubit::expr::parse;
use etaqubit::invariants::{
    cayley_h, hyperdeterminant3, lmn, sextic_d, AmplitudeTensor4, PairSplit,
};
use etaqubit::{AmplitudeVector, EtaFunction, Exact, Scalar};
use num_rational::BigRational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn coeff() -> impl Strategy<Value = Exact> {
    (rational(), rational()).prop_map(|(re, im)| Exact::new(re, im))
}

/// Sparse exact η-function on `n` variables; `nilpotent` drops the constant term.
fn eta(n: usize, nilpotent: bool) -> impl Strategy<Value = EtaFunction<Exact>> {
    prop::collection::vec(prop::option::weighted(0.4, coeff()), 1 << n).prop_map(move |cs| {
        let terms = cs
            .into_iter()
            .enumerate()
            .filter(|(m, _)| !nilpotent || *m != 0);
        EtaFunction::from_terms(n, terms.filter_map(|(m, c)| c.map(|c| (m as u32, c)))).unwrap()
    })
}

fn sized_eta(nilpotent: bool) -> impl Strategy<Value = EtaFunction<Exact>> {
    (1usize..=4).prop_flat_map(move |n| eta(n, nilpotent))
}

fn triple() -> impl Strategy<Value = [EtaFunction<Exact>; 3]> {
    (1usize..=4).prop_flat_map(|n| {
        (eta(n, false), eta(n, false), eta(n, false)).prop_map(|(a, b, c)| [a, b, c])
    })
}

fn pair(nilpotent: bool) -> impl Strategy<Value = (EtaFunction<Exact>, EtaFunction<Exact>)> {
    (1usize..=4).prop_flat_map(move |n| (eta(n, nilpotent), eta(n, nilpotent)))
}

/// ad − bc = 1 as a product of two shears.
fn sl2() -> impl Strategy<Value = [[Exact; 2]; 2]> {
    (coeff(), coeff()).prop_map(|(t, u)| {
        let one = <Exact as Scalar>::one();
        [[one.clone() + t.clone() * u.clone(), t], [u, one]]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_commutative_associative_and_distributive([f, g, h] in triple()) {
        prop_assert_eq!(f.multiply(&g).unwrap(), g.multiply(&f).unwrap());
        prop_assert_eq!(f.multiply(&g).unwrap().multiply(&h).unwrap(), f.multiply(&g.multiply(&h).unwrap()).unwrap());
        prop_assert_eq!(
            f.multiply(&g.add(&h).unwrap()).unwrap(),
            f.multiply(&g).unwrap().add(&f.multiply(&h).unwrap()).unwrap()
        );
    }

    #[test]
    fn nilpotent_part_vanishes_past_n(f in sized_eta(true)) {
        prop_assert!(f.pow(f.n() as u32 + 1).is_zero());
    }

    #[test]
    fn trigonometric_identity(f in (2usize..=6).prop_flat_map(|n| eta(n, true))) {
        let (c, s) = (f.cos().unwrap(), f.sin().unwrap());
        let sum = c.multiply(&c).unwrap().add(&s.multiply(&s).unwrap()).unwrap();
        prop_assert_eq!(sum, EtaFunction::one(f.n()).unwrap());
    }

    #[test]
    fn exp_splits_over_sums((f, g) in pair(true)) {
        let lhs = f.add(&g).unwrap().exp().unwrap();
        prop_assert_eq!(lhs, f.exp().unwrap().multiply(&g.exp().unwrap()).unwrap());
    }

    #[test]
    fn euler_formula(f in sized_eta(true)) {
        let i = EtaFunction::constant(f.n(), Exact::imag_unit()).unwrap();
        let lhs = i.multiply(&f).unwrap().exp().unwrap();
        let rhs = f.cos().unwrap().add(&i.multiply(&f.sin().unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inner_product_is_hermitian((f, g) in pair(false), c in coeff()) {
        prop_assert_eq!(f.inner_product(&g).unwrap(), g.inner_product(&f).unwrap().conj());
        prop_assert_eq!(f.inner_product(&g.scale(&c)).unwrap(), c.clone() * f.inner_product(&g).unwrap());
        prop_assert_eq!(f.scale(&c).inner_product(&g).unwrap(), c.conj() * f.inner_product(&g).unwrap());
        let nsq = f.norm_sq();
        prop_assert!(nsq.im == BigRational::from_integer(0.into()));
        prop_assert!(nsq.re >= BigRational::from_integer(0.into()));
        prop_assert_eq!(nsq.re == BigRational::from_integer(0.into()), f.is_zero());
    }

    #[test]
    fn hodge_dual_is_an_isometric_involution((f, g) in pair(false)) {
        prop_assert_eq!(f.hodge_dual().hodge_dual(), f.clone());
        prop_assert_eq!(f.hodge_dual().inner_product(&g.hodge_dual()).unwrap(), f.inner_product(&g).unwrap());
    }

    #[test]
    fn amplitudes_round_trip(f in sized_eta(false)) {
        let v = f.to_amplitudes();
        prop_assert_eq!(v.norm_sq(), f.norm_sq());
        prop_assert_eq!(EtaFunction::from_amplitudes(&v), f.clone());
        prop_assert_eq!(EtaFunction::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn raw_invariants_are_local_sl_invariant(f in eta(4, false), g in sl2(), q in 1usize..=4) {
        let v = f.to_amplitudes();
        let moved = v.apply_single_qubit(q, &g).unwrap();
        let (t, u) = (AmplitudeTensor4::from_amplitudes(&v).unwrap(), AmplitudeTensor4::from_amplitudes(&moved).unwrap());
        prop_assert_eq!(cayley_h(&t), cayley_h(&u));
        prop_assert_eq!(lmn(&t), lmn(&u));
        for split in PairSplit::ALL {
            prop_assert_eq!(sextic_d(&t, split), sextic_d(&u, split));
        }
    }

    #[test]
    fn hyperdeterminant_is_local_sl_invariant(f in eta(3, false), g in sl2(), q in 1usize..=3) {
        let v = f.to_amplitudes();
        let moved = v.apply_single_qubit(q, &g).unwrap();
        prop_assert_eq!(hyperdeterminant3(v.amps()), hyperdeterminant3(moved.amps()));
    }

    #[test]
    fn qubit_relabeling_matches_variable_relabeling(f in eta(3, false), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let moved = f.to_amplitudes().permute_qubits(&perm).unwrap();
        let back: Vec<usize> = (0..3).map(|q| perm.iter().position(|&p| p == q).unwrap()).collect();
        prop_assert_eq!(moved.permute_qubits(&back).unwrap(), f.to_amplitudes());
        prop_assert_eq!(AmplitudeVector::norm_sq(&moved), f.norm_sq());
    }

    #[test]
    fn printed_expressions_reparse(src in expression(3)) {
        let e = parse(&src, 3).unwrap();
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed, 3).unwrap(), e);
    }
}

fn expression(n: usize) -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|k| k.to_string()),
        (1u32..9, 1u32..9).prop_map(|(p, q)| format!("{p}/{q}")),
        Just("i".to_string()),
        (1..=n).prop_map(|k| format!("e{k}")),
        prop::sample::select(vec!["W3", "GHZ3", "CW3", "PSIS3"]).prop_map(str::to_string),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (
                inner.clone(),
                prop::sample::select(vec!["+", "-", "*"]),
                inner.clone()
            )
                .prop_map(|(a, op, b)| format!("{a} {op} {b}")),
            inner.clone().prop_map(|a| format!("-{a}")),
            inner.clone().prop_map(|a| format!("({a})")),
            (
                prop::sample::select(vec!["cos", "sin", "exp", "dual", "conj", "normalize"]),
                inner
            )
                .prop_map(|(f, a)| format!("{f}({a})")),
        ]
    })
}
