//! Property tests for the trigonometric polynomial algebra: evaluation
//! round-trips against pointwise arithmetic, finite differences, and Duhamel
//! quadrature; canonicalization and product laws.

use asympt::quad;
use asympt::trig::{TrigKind, TrigPoly, TrigTerm};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = TrigKind> {
    prop_oneof![Just(TrigKind::Cos), Just(TrigKind::Sin)]
}

fn term_strategy() -> impl Strategy<Value = TrigTerm> {
    (-2.0_f64..2.0, 0u32..=5, kind_strategy())
        .prop_map(|(coeff, harmonic, kind)| TrigTerm::new(coeff, 0, harmonic, kind))
}

fn poly_strategy() -> impl Strategy<Value = TrigPoly> {
    (0.5_f64..2.0, proptest::collection::vec(term_strategy(), 1..4))
        .prop_map(|(omega, terms)| TrigPoly::from_terms(omega, terms).expect("finite inputs"))
}

/// Term-set comparison with a coefficient tolerance relative to the larger
/// polynomial's scale.
fn terms_close(a: &TrigPoly, b: &TrigPoly, tol_rel: f64) -> bool {
    let scale = a.max_abs_coeff().max(b.max_abs_coeff()).max(1e-30);
    let keys = |p: &TrigPoly| {
        p.terms()
            .iter()
            .map(|t| (t.t_power, t.harmonic, t.kind))
            .collect::<Vec<_>>()
    };
    let mut all = keys(a);
    all.extend(keys(b));
    all.sort();
    all.dedup();
    all.into_iter().all(|(p, h, k)| {
        (a.coefficient(p, h, k) - b.coefficient(p, h, k)).abs() <= tol_rel * scale
    })
}

fn five_point_derivative(p: &TrigPoly, t: f64) -> f64 {
    let h = 5e-4;
    (-p.eval(t + 2.0 * h) + 8.0 * p.eval(t + h) - 8.0 * p.eval(t - h) + p.eval(t - 2.0 * h))
        / (12.0 * h)
}

proptest! {
    #[test]
    fn product_matches_pointwise_evaluation(p in poly_strategy(), q in poly_strategy(), times in proptest::collection::vec(0.0_f64..10.0, 20)) {
        let q = q.with_omega(p.omega()).unwrap();
        let prod = p.multiply(&q).unwrap();
        let scale = (1.0 + p.max_abs_coeff()) * (1.0 + q.max_abs_coeff());
        for t in times {
            let direct = p.eval(t) * q.eval(t);
            prop_assert!((prod.eval(t) - direct).abs() <= 1e-8 * scale,
                "t = {t}: {} vs {}", prod.eval(t), direct);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(p in poly_strategy(), times in proptest::collection::vec(0.1_f64..10.0, 20)) {
        let d = p.differentiate(1);
        for t in times {
            let fd = five_point_derivative(&p, t);
            prop_assert!((d.eval(t) - fd).abs() <= 1e-7 + 1e-8 * fd.abs(),
                "t = {t}: symbolic {} vs stencil {}", d.eval(t), fd);
        }
    }

    #[test]
    fn sine_kernel_matches_duhamel_quadrature(p in poly_strategy(), times in proptest::collection::vec(0.1_f64..8.0, 5)) {
        let omega = p.omega();
        let g = p.integrate_sine_kernel().unwrap();
        for t in times {
            // particular solution of g'' + w^2 g = -f with homogeneous start
            let duhamel = -quad::integrate(
                |s: f64| (omega * (t - s)).sin() * p.eval(s),
                0.0,
                t,
                1e-12,
            ).unwrap() / omega;
            let scale = 1.0 + p.max_abs_coeff() * t;
            prop_assert!((g.eval(t) - duhamel).abs() <= 1e-8 * scale,
                "t = {t}: kernel {} vs quadrature {}", g.eval(t), duhamel);
        }
    }

    #[test]
    fn sine_kernel_contract_holds(p in poly_strategy()) {
        let omega = p.omega();
        let g = p.integrate_sine_kernel().unwrap();
        prop_assert!(g.eval(0.0).abs() <= 1e-12 * (1.0 + p.max_abs_coeff()));
        prop_assert!(g.differentiate(1).eval(0.0).abs() <= 1e-12 * (1.0 + p.max_abs_coeff()));
        let resid = g.differentiate(2).add(&g.scale(omega * omega)).unwrap().add(&p).unwrap();
        let scale = p.max_abs_coeff().max(1e-30);
        for i in 0..=40 {
            let t = 10.0 * i as f64 / 40.0;
            prop_assert!(resid.eval(t).abs() <= 1e-10 * scale * (1.0 + t),
                "residual {} at t = {t}", resid.eval(t));
        }
    }

    #[test]
    fn canonicalization_is_idempotent(p in poly_strategy()) {
        let rebuilt = TrigPoly::from_terms(p.omega(), p.terms().to_vec()).unwrap();
        prop_assert_eq!(p.terms().len(), rebuilt.terms().len());
        for (a, b) in p.terms().iter().zip(rebuilt.terms()) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn multiplication_is_commutative(p in poly_strategy(), q in poly_strategy()) {
        let q = q.with_omega(p.omega()).unwrap();
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        prop_assert!(terms_close(&pq, &qp, 1e-12));
    }

    #[test]
    fn multiplication_is_associative(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        let q = q.with_omega(p.omega()).unwrap();
        let r = r.with_omega(p.omega()).unwrap();
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert!(terms_close(&left, &right, 1e-12));
    }

    #[test]
    fn integer_power_matches_repeated_products(p in poly_strategy()) {
        let cubed = p.powi(3).unwrap();
        let manual = p.multiply(&p).unwrap().multiply(&p).unwrap();
        prop_assert!(terms_close(&cubed, &manual, 1e-12));
    }

    #[test]
    fn resonant_stripping_removes_exactly_the_first_harmonic(p in poly_strategy()) {
        let stripped = p.without_resonant();
        prop_assert_eq!(stripped.coefficient(0, 1, TrigKind::Cos), 0.0);
        prop_assert_eq!(stripped.coefficient(0, 1, TrigKind::Sin), 0.0);
        for term in stripped.terms() {
            prop_assert!((term.t_power, term.harmonic) != (0, 1));
            let original = p.coefficient(term.t_power, term.harmonic, term.kind);
            prop_assert_eq!(term.coeff, original);
        }
    }

    #[test]
    fn secular_terms_are_detected(coeff in 0.01_f64..2.0, power in 1u32..=2) {
        let p = TrigPoly::from_terms(
            1.0,
            vec![
                TrigTerm::new(1.0, 0, 1, TrigKind::Cos),
                TrigTerm::new(coeff, power, 1, TrigKind::Sin),
            ],
        ).unwrap();
        prop_assert!(!p.is_secular_free());
        let found = p.detect_secular();
        prop_assert_eq!(found.len(), 1);
        prop_assert_eq!(found[0].t_power, power);
    }
}
