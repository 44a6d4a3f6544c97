use bicoef::bounds::{generic_a2_bound, printed_a2_bound, report, Field};
use bicoef::classes::{functional, invert_schlicht, SchlichtCoeffs};
use bicoef::harness::{check_bounds_random, sweep_a2, sweep_a3, SweepConfig, BOUND_SLACK};
use bicoef::scalar::{int, ratio};
use bicoef::{
    BoundInputs, ClassKind, ClassSpec, Exact, MindaTarget, Scalar, TheoremId, TruncatedSeries,
};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn q() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| ratio(n, d))
}

fn exact() -> impl Strategy<Value = Exact> {
    (q(), q()).prop_map(|(re, im)| Exact::from_parts(&re, &im))
}

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries<Exact>> {
    prop::collection::vec(exact(), order + 1).prop_map(move |c| TruncatedSeries::new(c, order))
}

fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries<Exact>> {
    prop::collection::vec(exact(), order).prop_map(move |mut c| {
        c.insert(0, Exact::one());
        TruncatedSeries::new(c, order)
    })
}

fn schlicht(order: usize) -> impl Strategy<Value = TruncatedSeries<Exact>> {
    prop::collection::vec(exact(), order - 1).prop_map(move |a| SchlichtCoeffs::new(a).to_series(order))
}

fn kind() -> impl Strategy<Value = ClassKind> {
    prop_oneof![Just(ClassKind::P), Just(ClassKind::M), Just(ClassKind::L)]
}

fn unit_param() -> impl Strategy<Value = BigRational> {
    (0i64..=20).prop_map(|k| ratio(k, 20))
}

fn theorem() -> impl Strategy<Value = TheoremId> {
    prop::sample::select(TheoremId::ALL.to_vec())
}

fn inputs() -> impl Strategy<Value = BoundInputs> {
    (unit_param(), unit_param(), 1i64..=300, -300i64..=300, 1i64..=300, -300i64..=300).prop_map(
        |(alpha, beta, b1, b2, d1, d2)| BoundInputs {
            alpha,
            beta,
            b1: ratio(b1, 100),
            b2: ratio(b2, 100),
            d1: ratio(d1, 100),
            d2: ratio(d2, 100),
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative_and_associative(a in series(5), b in series(5), c in series(5)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn division_inverts_multiplication(a in series(5), b in unit_series(5)) {
        prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
    }

    #[test]
    fn reversion_is_a_two_sided_inverse(f in schlicht(6)) {
        let g = f.revert().unwrap();
        let id = TruncatedSeries::variable(6);
        prop_assert_eq!(&g.compose(&f).unwrap(), &id);
        prop_assert_eq!(&f.compose(&g).unwrap(), &id);
        let (g2, g3) = invert_schlicht(&f.coeff(2), &f.coeff(3));
        prop_assert_eq!(g.coeff(2), g2);
        prop_assert_eq!(g.coeff(3), g3);
    }

    #[test]
    fn exp_inverts_log(a in unit_series(5)) {
        let back = a.log_unit().unwrap().exp_nil().unwrap();
        prop_assert!(back.agrees_through(&a, back.accurate_to(), Default::default()));
    }

    #[test]
    fn powers_add_exponents(a in unit_series(4), s in q(), t in q()) {
        let (es, et) = (Exact::from_ratio(&s), Exact::from_ratio(&t));
        let lhs = a.pow_unit(&es).unwrap().mul(&a.pow_unit(&et).unwrap());
        let rhs = a.pow_unit(&(es + &et)).unwrap();
        prop_assert!(lhs.agrees_through(&rhs, rhs.accurate_to(), Default::default()));
    }

    #[test]
    fn engine_matches_triples(k in kind(), alpha in unit_param(), a2 in exact(), a3 in exact()) {
        let spec = ClassSpec::new(k, alpha).unwrap();
        let t = spec.triple::<Exact>();
        let f = SchlichtCoeffs::new(vec![a2.clone(), a3.clone()]).to_series(3);
        let e = functional(&spec, &f).unwrap();
        prop_assert_eq!((e.coeff(1), e.coeff(2)), t.expansion_f(&a2, &a3));
        // the inverse expansion is the forward one on the inverse coefficients
        let (g2, g3) = invert_schlicht(&a2, &a3);
        prop_assert_eq!(t.expansion_f(&g2, &g3), t.expansion_g(&a2, &a3));
        let eg = functional(&spec, &f.revert().unwrap()).unwrap();
        prop_assert_eq!((eg.coeff(1), eg.coeff(2)), t.expansion_g(&a2, &a3));
    }

    #[test]
    fn coefficient_equations_hold_on_consistent_params(id in theorem(), inp in inputs(), c1 in exact(), c2 in exact()) {
        let pair = id.pair(&inp).unwrap();
        let k = pair.constants::<Exact>();
        let sp = k.consistent_params(c1, c2);
        let res = k.eliminate(&sp);
        prop_assume!(!res.degenerate);
        prop_assert!(k.f_residual(&sp, &res).unwrap().is_zero());
        prop_assert!(k.g_residual(&sp, &res).unwrap().is_zero());
    }

    #[test]
    fn five_theorems_match_generic(id in prop::sample::select(vec![TheoremId::PP, TheoremId::PM, TheoremId::PL, TheoremId::MM, TheoremId::ML]), inp in inputs()) {
        let rep = report(id, &inp).unwrap();
        prop_assert!(rep.discrepancies.is_empty(), "{:?}", rep.discrepancies);
    }

    #[test]
    fn ll_sigma_flag_is_the_product_set(inp in inputs()) {
        let rep = report(TheoremId::LL, &inp).unwrap();
        let product_nonzero = !(&inp.alpha * &inp.beta).is_zero();
        prop_assert_eq!(rep.has(Field::Sigma), product_nonzero);
        prop_assert_eq!(rep.has(Field::A3Rhs), inp.d2 != inp.d1);
    }

    #[test]
    fn random_samples_respect_bounds(id in theorem(), inp in inputs(), seed in any::<u64>()) {
        let pair = id.pair(&inp).unwrap();
        prop_assume!(generic_a2_bound(&pair).is_some());
        let rep = check_bounds_random(&pair, seed, 300, seed % 2 == 0);
        prop_assert!(rep.is_ok(), "{:?}", rep);
    }

    #[test]
    fn sweeps_never_exceed(id in theorem(), inp in inputs(), radial in 2usize..5, phase in 4usize..9, seed in any::<u64>()) {
        let pair = id.pair(&inp).unwrap();
        prop_assume!(generic_a2_bound(&pair).is_some());
        let cfg = SweepConfig { radial_steps: radial, phase_steps: phase, seed, samples: 100, max_modulus: 2.0 };
        let a2 = sweep_a2(&pair, &cfg).unwrap();
        prop_assert!(a2.gap >= -BOUND_SLACK);
        prop_assert!(a2.attained);
        if let Ok(a3) = sweep_a3(&pair, &cfg) {
            prop_assert!(a3.gap >= -BOUND_SLACK);
        }
    }
}

#[test]
fn strong_target_bound_increases() {
    let mut last = 0.0;
    for k in 1..=20 {
        let phi = MindaTarget::strong(&ratio(k, 20), 3).unwrap();
        let inp = BoundInputs::new(int(0), int(0), &phi, &phi);
        let v = printed_a2_bound(TheoremId::PP, &inp).unwrap();
        let t = k as f64 / 20.0;
        assert!((v - 2.0 * t / (1.0 + t).sqrt()).abs() < 1e-12);
        assert!(v > last);
        last = v;
    }
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let inp = BoundInputs { alpha: ratio(1, 3), beta: ratio(2, 3), b1: int(2), b2: ratio(1, 2), d1: int(1), d2: int(3) };
    let pair = TheoremId::PM.pair(&inp).unwrap();
    let cfg = SweepConfig { seed: 5, samples: 300, ..SweepConfig::default() };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| (sweep_a2(&pair, &cfg).unwrap(), sweep_a3(&pair, &cfg).unwrap()));
    let b = many.install(|| (sweep_a2(&pair, &cfg).unwrap(), sweep_a3(&pair, &cfg).unwrap()));
    assert_eq!(a, b);
}
