//! Trust checks for the numerical reference machinery itself: convergence
//! under tolerance tightening, run-to-run determinism, and agreement between
//! the residual evaluator and integrated trajectories.

use asympt::oracle::{
    integrate_ivp, integrate_oscillator, linspace, measure_cycle, shoot_bratu, OdeOptions,
};
use asympt::problems::{make_problem, residual, OscillatorSpec, ParamMap, ProblemSpec};

fn duffing(eps: f64, amp: f64) -> OscillatorSpec {
    OscillatorSpec {
        linear: 1.0,
        quadratic: 0.0,
        cubic: eps,
        quintic: 0.0,
        vdp: 0.0,
        damping: 0.0,
        forcing: 0.0,
        forcing_freq: 0.0,
        eps,
        amp,
        amp_b: 0.0,
    }
}

/// Tightening the tolerance must not make the endpoint worse, and across
/// four halvings it must buy a substantial accuracy gain overall.
#[test]
fn endpoint_error_decreases_with_tolerance() {
    let spec = duffing(0.2, 1.0);
    let t_end = 10.0;
    let reference = integrate_oscillator(
        &spec,
        t_end,
        &OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() },
    )
    .unwrap();
    let exact = reference.y_end()[0];

    let mut errors = Vec::new();
    let mut rtol = 1e-5;
    while rtol > 0.9e-9 {
        let sol = integrate_oscillator(
            &spec,
            t_end,
            &OdeOptions { rtol, atol: rtol * 1e-2, ..OdeOptions::default() },
        )
        .unwrap();
        errors.push((sol.y_end()[0] - exact).abs());
        rtol *= 0.5;
    }
    for pair in errors.windows(2) {
        // Small slack: the step controller is not exactly monotone in rtol
        // near roundoff, but tightening must never cost an order.
        assert!(
            pair[1] <= pair[0] * 1.1 + 1e-14,
            "error grew under tighter tolerance: {pair:?}"
        );
    }
    assert!(
        errors.last().unwrap() * 100.0 <= errors[0].max(1e-12),
        "four orders of tolerance bought too little: {errors:?}"
    );
}

/// Two identical runs in one process must agree bit for bit.
#[test]
fn integration_is_deterministic() {
    let spec = duffing(0.15, 1.2);
    let opts = OdeOptions::default();
    let a = integrate_oscillator(&spec, 25.0, &opts).unwrap();
    let b = integrate_oscillator(&spec, 25.0, &opts).unwrap();
    assert_eq!(a.y_end()[0].to_bits(), b.y_end()[0].to_bits());
    assert_eq!(a.y_end()[1].to_bits(), b.y_end()[1].to_bits());
    assert_eq!(a.accepted_steps(), b.accepted_steps());

    let vdp = OscillatorSpec { vdp: 0.4, ..duffing(0.0, 1.0) };
    let m1 = measure_cycle(&vdp, 60.0, &opts).unwrap();
    let m2 = measure_cycle(&vdp, 60.0, &opts).unwrap();
    assert_eq!(m1.period.to_bits(), m2.period.to_bits());
    assert_eq!(m1.amplitude.to_bits(), m2.amplitude.to_bits());
}

/// Feeding an integrated trajectory back through the symbolic residual
/// evaluator must produce a residual at the dense-output accuracy level,
/// not at the scale of the equation's own terms.
#[test]
fn residual_of_integrated_trajectory_is_small() {
    let mut params = ParamMap::new();
    params.insert("eps".into(), 0.2);
    params.insert("amp".into(), 1.0);
    let problem = make_problem("duffing_cubic", &params).unwrap();
    let spec = match &problem {
        ProblemSpec::Oscillator(spec) => spec.clone(),
        other => panic!("unexpected problem kind: {other:?}"),
    };
    let sol = integrate_oscillator(&spec, 7.0, &OdeOptions::default()).unwrap();
    let grid = linspace(0.5, 6.5, 301);
    let r = residual(&problem, &sol.candidate(0), &grid).unwrap();
    // Dominated by second derivatives of the quartic dense output; the
    // equation terms are O(1), so 1e-5 demonstrates genuine cancellation.
    assert!(r.max_abs() < 1e-5, "trajectory residual {}", r.max_abs());
}

/// Same for a boundary-value trajectory from the shooting solver.
#[test]
fn residual_of_bratu_shot_is_small() {
    let lambda = 1.0;
    let mut params = ParamMap::new();
    params.insert("lambda".into(), lambda);
    let problem = make_problem("bratu", &params).unwrap();
    let shot = shoot_bratu(lambda, 401).unwrap();
    let slope = shot[0].meta().shoot_param.expect("shooting stores its slope");
    let sol = integrate_ivp(
        |_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -lambda * y[0].exp();
        },
        0.0,
        &[0.0, slope],
        1.0,
        &OdeOptions::default(),
    )
    .unwrap();
    let grid = linspace(0.05, 0.95, 181);
    let r = residual(&problem, &sol.candidate(0), &grid).unwrap();
    assert!(r.max_abs() < 1e-4, "shot residual {}", r.max_abs());
}

/// Problem construction is a pure function of its inputs.
#[test]
fn problem_construction_is_deterministic() {
    let mut params = ParamMap::new();
    params.insert("eps".into(), 0.1);
    params.insert("amp".into(), 1.3);
    let a = make_problem("duffing_cubic", &params).unwrap();
    let b = make_problem("duffing_cubic", &params).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));

    let cases: [(&str, &[(&str, f64)]); 11] = [
        ("duffing_cubic", &[("eps", 0.2), ("amp", 1.0)]),
        ("duffing_quintic", &[("eps", 0.1), ("amp", 1.0)]),
        ("van_der_pol", &[("mu", 0.3)]),
        ("vdp_duffing", &[("alpha", 0.2), ("amp", 1.0), ("mu", 0.1)]),
        ("pendulum", &[("amp", 0.5)]),
        ("bratu", &[("lambda", 1.0)]),
        ("singular_linear", &[("eps", 0.02)]),
        ("falkner_skan", &[("beta", 0.0)]),
        ("wkb", &[("eps", 0.01)]),
        ("snewton", &[]),
        ("kdv_wave", &[("c", 1.0)]),
    ];
    for (name, pairs) in cases {
        let mut p = ParamMap::new();
        for (key, value) in pairs {
            p.insert((*key).into(), *value);
        }
        let a = make_problem(name, &p).unwrap();
        let b = make_problem(name, &p).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"), "name = {name}");
    }
}
