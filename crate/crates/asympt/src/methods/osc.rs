//! Approximate periodic solutions of conservative nonlinear oscillators:
//! iterative correction with a sine-kernel functional, secular-cancellation
//! frequency expansions, a homotopy split for the quintic oscillator, and the
//! self-excitation balance quantity for limit-cycle amplitude.
//!
//! All methods return a trigonometric polynomial plus a frequency record; the
//! residual norm is evaluated on one period of the governing equation so the
//! caller can compare methods without re-deriving anything.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::linspace;
use crate::problems::{residual, OscillatorSpec, ProblemSpec, TrigCandidate};
use crate::trig::{TrigKind, TrigPoly};

/// How a frequency was produced and what its expansion coefficients mean.
#[derive(Debug, Clone, Serialize)]
pub struct FrequencyResult {
    pub omega: f64,
    pub omega_squared: f64,
    /// Expansion coefficients, constant term first; see `expansion_of`.
    pub expansion: Vec<f64>,
    /// What `expansion` builds, e.g. "omega^2 in powers of the cubic coefficient".
    pub expansion_of: String,
    /// Human-readable record of the cancelled resonance.
    pub secular_condition: String,
}

/// A periodic approximation with its frequency and sampled residual norm.
#[derive(Debug, Clone, Serialize)]
pub struct ApproxSolution {
    pub method: String,
    pub order: u32,
    pub solution: TrigPoly,
    pub frequency: FrequencyResult,
    /// Max |governing-equation residual| over 201 samples of one period.
    pub residual_norm: f64,
}

/// Which form the frequency expansion takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionVariant {
    /// Expand `omega^2` in the nonlinear coefficient (the default; exact
    /// resummation of the secular conditions).
    ModifiedSquared,
    /// Expand `omega` itself, the classical series form.
    ClassicFrequency,
}

fn require_conservative(o: &OscillatorSpec, method: &str) -> Result<()> {
    if !o.is_conservative() {
        return Err(Error::Unsupported {
            reason: format!(
                "{method} assumes an undamped, unforced oscillator; got vdp = {}, delta = {}, gamma = {}",
                o.vdp, o.damping, o.forcing
            ),
        });
    }
    Ok(())
}

/// Max |residual| of `u` against the oscillator equation over one period.
fn periodic_residual_norm(o: &OscillatorSpec, u: &TrigPoly) -> Result<f64> {
    let spec = ProblemSpec::Oscillator(o.clone());
    let grid = linspace(0.0, 2.0 * std::f64::consts::PI / u.omega(), 201);
    Ok(residual(&spec, &TrigCandidate::new(u), &grid)?.max_abs())
}

/// Nonlinear (amplitude-dependent) part of the restored force for `u`.
fn nonlinear_force(o: &OscillatorSpec, u: &TrigPoly) -> Result<TrigPoly> {
    let u2 = u.multiply(u)?;
    let u3 = u2.multiply(u)?;
    let mut nl = u2.scale(o.quadratic).add(&u3.scale(o.cubic))?;
    if o.quintic != 0.0 {
        let u5 = u3.multiply(&u2)?;
        nl = nl.add(&u5.scale(o.quintic))?;
    }
    Ok(nl)
}

/// Solves `lam` from the pair `lam*a1 + f_cos = 0`, `lam*b1 + f_sin = 0`,
/// using the larger-amplitude channel and checking the other for consistency.
fn solve_resonance(a1: f64, b1: f64, f_cos: f64, f_sin: f64, context: &str) -> Result<f64> {
    let amp = a1.hypot(b1);
    if amp < 1e-300 {
        return Err(Error::SecularUnresolvable {
            reason: format!("{context}: no first-harmonic content to balance against"),
        });
    }
    let lam = if a1.abs() >= b1.abs() { -f_cos / a1 } else { -f_sin / b1 };
    let res_c = lam * a1 + f_cos;
    let res_s = lam * b1 + f_sin;
    let scale = (f_cos.abs() + f_sin.abs()).max(lam.abs() * amp).max(1e-300);
    if res_c.abs().max(res_s.abs()) > 1e-8 * scale {
        return Err(Error::SecularUnresolvable {
            reason: format!("{context}: sine and cosine resonance conditions disagree"),
        });
    }
    Ok(lam)
}

fn harmonic_one(p: &TrigPoly) -> (f64, f64) {
    (p.coefficient(0, 1, TrigKind::Cos), p.coefficient(0, 1, TrigKind::Sin))
}

/// Frequency from the current iterate's secular condition:
/// `(linear - omega^2) * (first harmonic of u) + (first harmonic of N(u)) = 0`.
fn resolve_omega(o: &OscillatorSpec, u: &TrigPoly, nl: &TrigPoly) -> Result<f64> {
    let (a1, b1) = harmonic_one(u);
    let (nc, ns) = harmonic_one(nl);
    // lam = linear - omega^2
    let lam = solve_resonance(a1, b1, nc, ns, "iterative correction")?;
    let w2 = o.linear - lam;
    if !(w2 > 0.0) || !w2.is_finite() {
        return Err(Error::SecularUnresolvable {
            reason: format!("resonance balance gives nonpositive omega^2 = {w2}"),
        });
    }
    Ok(w2)
}

/// Iterative correction of a cosine ansatz for the conservative oscillator.
///
/// Each step re-solves the frequency so the first-harmonic residual vanishes,
/// then adds the sine-kernel integral of the remaining residual:
/// `u_{n+1} = u_n + J[R(u_n)]`, which preserves `u(0)` and `u'(0)` exactly.
/// `order` is the number of correction steps (0 returns the balanced cosine
/// ansatz itself); the frequency reported with the solution is the one the
/// last correction was built at.
pub fn vim_iterate(o: &OscillatorSpec, order: u32) -> Result<ApproxSolution> {
    require_conservative(o, "iterative correction")?;
    if order > 3 {
        return Err(Error::InvalidOrder { got: order, valid: "0..=3" });
    }

    // base ansatz at a placeholder frequency; re-solved before first use
    let mut u = TrigPoly::cos_term(1.0, 1, o.amp)?;
    if o.amp_b != 0.0 {
        u = u.add(&TrigPoly::sin_term(1.0, 1, o.amp_b)?)?;
    }

    let mut w2_history = Vec::with_capacity(order as usize + 1);
    let mut nl = nonlinear_force(o, &u)?;
    let mut w2 = resolve_omega(o, &u, &nl)?;
    w2_history.push(w2);
    u = u.with_omega(w2.sqrt())?;
    nl = nl.with_omega(w2.sqrt())?;

    for step in 0..order {
        // residual at the re-solved frequency; the first harmonic cancels by
        // construction and is pruned to keep roundoff out of the kernel
        let r = u.differentiate(2).add(&u.scale(o.linear))?.add(&nl)?.without_resonant();
        u = u.add(&r.integrate_sine_kernel()?)?;
        if step + 1 < order {
            nl = nonlinear_force(o, &u)?;
            w2 = resolve_omega(o, &u, &nl)?;
            w2_history.push(w2);
            u = u.with_omega(w2.sqrt())?;
            nl = nl.with_omega(w2.sqrt())?;
        }
    }

    let omega = w2.sqrt();
    let residual_norm = periodic_residual_norm(o, &u)?;
    Ok(ApproxSolution {
        method: "vim".into(),
        order,
        solution: u,
        frequency: FrequencyResult {
            omega,
            omega_squared: w2,
            expansion: w2_history,
            expansion_of: "omega^2 re-solved at each correction step".into(),
            secular_condition: format!(
                "first-harmonic residual cancelled at each step; final omega^2 = {w2}"
            ),
        },
        residual_norm,
    })
}

/// Secular-cancellation expansion in the cubic coefficient, to second order.
///
/// Works in scaled time `tau = omega t` with `u = u0 + c u1 + c^2 u2` and
/// `omega^2 = linear + c g1 + c^2 g2` (`c` = cubic coefficient); each order
/// fixes `g_k` by removing the resonant forcing and solves the rest with the
/// sine-kernel integral, preserving the initial conditions. The
/// [`ExpansionVariant`] decides whether the reported frequency resums
/// `omega^2` directly (default) or expands `omega` itself classically.
pub fn lp_expand(o: &OscillatorSpec, order: u32, variant: ExpansionVariant) -> Result<ApproxSolution> {
    require_conservative(o, "frequency expansion")?;
    if o.vdp != 0.0 {
        return Err(Error::Unsupported {
            reason: "frequency expansion requires mu = 0; the self-excited term cannot be expanded".into(),
        });
    }
    if o.quadratic != 0.0 || o.quintic != 0.0 {
        return Err(Error::Unsupported {
            reason: "frequency expansion is implemented for cubic nonlinearity only".into(),
        });
    }
    if !(o.linear > 0.0) {
        return Err(Error::SingularParameter {
            what: format!("linear coefficient {} must be positive for the expansion", o.linear),
        });
    }
    if order > 2 {
        return Err(Error::InvalidOrder { got: order, valid: "0..=2" });
    }
    let c = o.cubic;
    let lin = o.linear;

    // all expansion work happens at base frequency 1 (scaled time)
    let mut u0 = TrigPoly::cos_term(1.0, 1, o.amp)?;
    if o.amp_b != 0.0 {
        u0 = u0.add(&TrigPoly::sin_term(1.0, 1, o.amp_b)?)?;
    }
    let (a1, b1) = harmonic_one(&u0);

    let mut g = vec![lin];
    let mut u = u0.clone();

    if order >= 1 {
        // order c: lin (u1'' + u1) = g1 u0 - u0^3
        let cube = u0.powi(3)?;
        let (hc, hs) = harmonic_one(&cube);
        // g1 a1 - hc = 0
        let g1 = solve_resonance(a1, b1, -hc, -hs, "first expansion order")?;
        let p1 = cube.sub(&u0.scale(g1))?.without_resonant();
        let u1 = p1.scale(1.0 / lin).integrate_sine_kernel()?;
        u = u.add(&u1.scale(c))?;
        g.push(g1);

        if order >= 2 {
            // order c^2: lin (u2'' + u2) = g1 (u1 + P1/lin) + g2 u0 - 3 u0^2 u1
            let g1v = g[1];
            let known = u1
                .scale(g1v)
                .add(&p1.scale(g1v / lin))?
                .sub(&u0.powi(2)?.multiply(&u1)?.scale(3.0))?;
            let (kc, ks) = harmonic_one(&known);
            let g2 = solve_resonance(a1, b1, kc, ks, "second expansion order")?;
            let p2 = known.add(&u0.scale(g2))?.scale(-1.0).without_resonant();
            let u2 = p2.scale(1.0 / lin).integrate_sine_kernel()?;
            u = u.add(&u2.scale(c * c))?;
            g.push(g2);
        }
    }

    let (omega, expansion, expansion_of) = match variant {
        ExpansionVariant::ModifiedSquared => {
            let mut w2 = 0.0;
            for (k, gk) in g.iter().enumerate() {
                w2 += gk * c.powi(k as i32);
            }
            if !(w2 > 0.0) {
                return Err(Error::NoSolution {
                    detail: format!("resummed omega^2 = {w2} is not positive at this amplitude"),
                });
            }
            (w2.sqrt(), g.clone(), "omega^2 in powers of the cubic coefficient".to_string())
        }
        ExpansionVariant::ClassicFrequency => {
            let sl = lin.sqrt();
            let mut coeffs = vec![sl];
            if g.len() > 1 {
                coeffs.push(g[1] / (2.0 * sl));
            }
            if g.len() > 2 {
                coeffs.push((g[2] - g[1] * g[1] / (4.0 * lin)) / (2.0 * sl));
            }
            let mut w = 0.0;
            for (k, wk) in coeffs.iter().enumerate() {
                w += wk * c.powi(k as i32);
            }
            if !(w > 0.0) {
                return Err(Error::NoSolution {
                    detail: format!("expanded omega = {w} is not positive at this amplitude"),
                });
            }
            (w, coeffs, "omega in powers of the cubic coefficient".to_string())
        }
    };

    let solution = u.with_omega(omega)?;
    let residual_norm = periodic_residual_norm(o, &solution)?;
    let secular = match order {
        0 => "no nonlinear orders requested; omega^2 = linear".to_string(),
        1 => format!("resonant forcing removed at order 1: g1 = {}", g[1]),
        _ => format!("resonant forcing removed at orders 1, 2: g1 = {}, g2 = {}", g[1], g[2]),
    };
    Ok(ApproxSolution {
        method: match variant {
            ExpansionVariant::ModifiedSquared => "lp".into(),
            ExpansionVariant::ClassicFrequency => "lp_classic".into(),
        },
        order,
        solution,
        frequency: FrequencyResult {
            omega,
            omega_squared: omega * omega,
            expansion,
            expansion_of,
            secular_condition: secular,
        },
        residual_norm,
    })
}

/// First-order homotopy split for the quintic oscillator
/// `u'' + u + eps u^5 = 0`, `u(0) = A`, `u'(0) = 0`.
///
/// The split keeps the unit linear operator, so the frequency follows from
/// removing the `cos(alpha t)` forcing, `alpha = sqrt(1 + (5/8) eps A^4)`,
/// and the first correction carries only the third and fifth harmonics:
/// `v1 = 5 eps A^5/(16 (9 alpha^2 - 1)) cos 3 alpha t
///     + eps A^5/(16 (25 alpha^2 - 1)) cos 5 alpha t`.
pub fn hpm_quintic(o: &OscillatorSpec) -> Result<ApproxSolution> {
    require_conservative(o, "homotopy split")?;
    if o.cubic != 0.0 || o.quadratic != 0.0 {
        return Err(Error::Unsupported {
            reason: "the homotopy split is implemented for the pure quintic oscillator".into(),
        });
    }
    if o.linear != 1.0 {
        return Err(Error::Unsupported {
            reason: format!("the homotopy split assumes unit linear stiffness, got {}", o.linear),
        });
    }
    if o.amp_b != 0.0 {
        return Err(Error::Unsupported {
            reason: "the homotopy split uses a pure cosine ansatz (amp_b must be 0)".into(),
        });
    }
    let eps = o.quintic;
    let a = o.amp;
    let a2 = 1.0 + 0.625 * eps * a.powi(4);
    if !(a2 > 0.0) {
        return Err(Error::NoSolution {
            detail: format!("homotopy frequency alpha^2 = {a2} is not positive"),
        });
    }
    let alpha = a2.sqrt();

    let d3 = 9.0 * a2 - 1.0;
    let d5 = 25.0 * a2 - 1.0;
    for (d, label) in [(d3, "9 alpha^2 - 1"), (d5, "25 alpha^2 - 1")] {
        if d.abs() <= 1e-9 {
            return Err(Error::NearResonantDenominator { value: d, context: label });
        }
    }
    let k3 = 5.0 * eps * a.powi(5) / (16.0 * d3);
    let k5 = eps * a.powi(5) / (16.0 * d5);

    let mut u = TrigPoly::cos_term(alpha, 1, a)?;
    if k3 != 0.0 {
        u = u.add(&TrigPoly::cos_term(alpha, 3, k3)?)?;
    }
    if k5 != 0.0 {
        u = u.add(&TrigPoly::cos_term(alpha, 5, k5)?)?;
    }

    let residual_norm = periodic_residual_norm(o, &u)?;
    Ok(ApproxSolution {
        method: "hpm".into(),
        order: 1,
        solution: u,
        frequency: FrequencyResult {
            omega: alpha,
            omega_squared: a2,
            expansion: vec![1.0, 0.625 * a.powi(4)],
            expansion_of: "alpha^2 in powers of the quintic coefficient".into(),
            secular_condition: format!(
                "cos(alpha t) forcing removed: alpha^2 = 1 + (5/8) eps A^4 = {a2}"
            ),
        },
        residual_norm,
    })
}

/// Amplitude-drift quantity of the self-excited oscillator
/// `u'' - eps (1 - u^2) u' + u = 0` for the ansatz `A cos(omega t)`:
///
/// `alpha = eps^2 (A^2 - 4) omega pi / (4 (2 pi omega - eps A^2))`.
///
/// It vanishes exactly at the limit-cycle amplitude `A = 2`; its sign says
/// whether the ansatz amplitude grows or decays.
pub fn limit_cycle_alpha(eps: f64, amp: f64, omega: f64) -> Result<f64> {
    if !eps.is_finite() || !amp.is_finite() || !omega.is_finite() {
        return Err(Error::NonFinite { what: "limit-cycle parameters" });
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidParam { param: "omega", reason: "must be > 0".into() });
    }
    let denom = 4.0 * (2.0 * std::f64::consts::PI * omega - eps * amp * amp);
    if denom.abs() <= 1e-9 {
        return Err(Error::NearResonantDenominator {
            value: denom,
            context: "2 pi omega - eps A^2",
        });
    }
    Ok(eps * eps * (amp * amp - 4.0) * omega * std::f64::consts::PI / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_problem, ParamMap};
    use approx::assert_relative_eq;

    fn oscillator(name: &str, pairs: &[(&str, f64)]) -> OscillatorSpec {
        let params: ParamMap = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        match make_problem(name, &params).unwrap() {
            ProblemSpec::Oscillator(o) => o,
            _ => panic!("expected oscillator"),
        }
    }

    #[test]
    fn first_correction_of_cubic_oscillator_matches_closed_form() {
        let o = oscillator("duffing_cubic", &[("eps", 0.1), ("amp", 1.0)]);
        let s = vim_iterate(&o, 1).unwrap();
        let w2 = 1.0 + 0.75 * 0.1;
        assert_relative_eq!(s.frequency.omega_squared, w2, epsilon = 1e-14);
        // u1 = A cos wt + eps A^3/(32 w^2) (cos 3wt - cos wt)
        let k = 0.1 / (32.0 * w2);
        assert_relative_eq!(s.solution.coefficient(0, 3, TrigKind::Cos), k, epsilon = 1e-15);
        assert_relative_eq!(s.solution.coefficient(0, 1, TrigKind::Cos), 1.0 - k, epsilon = 1e-15);
        assert!(s.solution.is_secular_free());
    }

    #[test]
    fn corrections_preserve_initial_conditions() {
        let o = oscillator("duffing_cubic", &[("eps", 0.3), ("amp", 1.2)]);
        for order in 0..=3 {
            let s = vim_iterate(&o, order).unwrap();
            let cand = TrigCandidate::new(&s.solution);
            use crate::problems::Candidate;
            assert_relative_eq!(cand.eval(0.0), 1.2, epsilon = 1e-12);
            assert!(cand.d1(0.0).abs() < 1e-12, "u'(0) = {}", cand.d1(0.0));
        }
    }

    #[test]
    fn deeper_corrections_do_not_worsen_the_residual() {
        let o = oscillator("duffing_cubic", &[("eps", 0.2), ("amp", 1.0)]);
        let r1 = vim_iterate(&o, 1).unwrap().residual_norm;
        let r2 = vim_iterate(&o, 2).unwrap().residual_norm;
        assert!(r2 <= r1, "order 2 residual {r2} vs order 1 {r1}");
    }

    #[test]
    fn iterative_correction_rejects_self_excited_problems() {
        let o = oscillator("van_der_pol", &[("mu", 0.5)]);
        assert!(matches!(vim_iterate(&o, 1), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn iterative_correction_rejects_deep_orders() {
        let o = oscillator("duffing_cubic", &[("eps", 0.1), ("amp", 1.0)]);
        assert!(matches!(vim_iterate(&o, 9), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn expansion_and_correction_agree_exactly_at_first_order() {
        let o = oscillator("duffing_cubic", &[("eps", 0.1), ("amp", 1.0)]);
        let vim = vim_iterate(&o, 1).unwrap();
        let lp = lp_expand(&o, 1, ExpansionVariant::ModifiedSquared).unwrap();
        assert_relative_eq!(
            vim.frequency.omega_squared,
            lp.frequency.omega_squared,
            epsilon = 1e-14
        );
        // corrections agree only through O(eps): the kernel divides by the
        // re-solved omega^2, the expansion works at the base frequency
        for (h, kind) in [(1, TrigKind::Cos), (3, TrigKind::Cos)] {
            let diff =
                (vim.solution.coefficient(0, h, kind) - lp.solution.coefficient(0, h, kind)).abs();
            assert!(diff < 3e-4, "harmonic {h} coefficients differ by {diff}");
        }
    }

    #[test]
    fn second_order_expansion_coefficients_match_hand_derivation() {
        let o = oscillator("duffing_cubic", &[("eps", 0.1), ("amp", 1.0)]);
        let lp = lp_expand(&o, 2, ExpansionVariant::ModifiedSquared).unwrap();
        // g1 = (3/4) A^2, g2 = -(3/128) A^4 for unit linear stiffness
        assert_relative_eq!(lp.frequency.expansion[1], 0.75, epsilon = 1e-14);
        assert_relative_eq!(lp.frequency.expansion[2], -3.0 / 128.0, epsilon = 1e-14);
        let classic = lp_expand(&o, 2, ExpansionVariant::ClassicFrequency).unwrap();
        // omega_1 = 3 A^2 / 8, omega_2 = -21 A^4 / 256
        assert_relative_eq!(classic.frequency.expansion[1], 0.375, epsilon = 1e-14);
        assert_relative_eq!(classic.frequency.expansion[2], -21.0 / 256.0, epsilon = 1e-14);
        // the two variants agree through O(c^2)
        assert!((lp.frequency.omega - classic.frequency.omega).abs() < 1e-4);
    }

    #[test]
    fn sine_split_initial_conditions_use_rotational_symmetry() {
        let o = oscillator("vdp_duffing", &[("alpha", 1.0), ("amp", 0.6), ("amp_b", 0.8)]);
        let lp = lp_expand(&o, 1, ExpansionVariant::ModifiedSquared).unwrap();
        // omega^2 = 1 + (3/4) alpha (A^2 + B^2) = 1.75
        assert_relative_eq!(lp.frequency.omega_squared, 1.75, epsilon = 1e-13);
    }

    #[test]
    fn expansion_rejects_live_self_excitation_and_quintic_terms() {
        let o = oscillator("vdp_duffing", &[("alpha", 1.0), ("mu", 0.5), ("amp", 1.0)]);
        assert!(matches!(lp_expand(&o, 1, ExpansionVariant::ModifiedSquared), Err(Error::Unsupported { .. })));
        let q = oscillator("duffing_quintic", &[("eps", 0.1), ("amp", 1.0)]);
        assert!(matches!(lp_expand(&q, 1, ExpansionVariant::ModifiedSquared), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn pendulum_expansion_tracks_the_true_frequency() {
        let o = oscillator("pendulum", &[("amp", 0.5)]);
        let lp = lp_expand(&o, 2, ExpansionVariant::ModifiedSquared).unwrap();
        assert_relative_eq!(lp.frequency.omega, 0.9842303134408295, epsilon = 1e-12);
        // true frequency of the full sine pendulum at this amplitude
        let exact = 0.9843948500239019;
        assert!((lp.frequency.omega - exact).abs() / exact < 5e-3);
    }

    #[test]
    fn quintic_homotopy_matches_frozen_first_order_values() {
        let o = oscillator("duffing_quintic", &[("eps", 0.1), ("amp", 1.0)]);
        let s = hpm_quintic(&o).unwrap();
        assert_relative_eq!(s.frequency.omega, 1.0307764064044151, epsilon = 1e-15);
        assert_relative_eq!(
            s.solution.coefficient(0, 3, TrigKind::Cos),
            0.0036496350364963502,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            s.solution.coefficient(0, 5, TrigKind::Cos),
            0.0002444987775061125,
            epsilon = 1e-15
        );
        // the correction carries no first harmonic at all
        assert_eq!(s.solution.coefficient(0, 1, TrigKind::Cos), 1.0);
    }

    #[test]
    fn quintic_homotopy_degenerates_to_plain_cosine_without_nonlinearity() {
        let o = oscillator("duffing_quintic", &[("eps", 0.0), ("amp", 1.0)]);
        let s = hpm_quintic(&o).unwrap();
        assert_eq!(s.frequency.omega, 1.0);
        assert_eq!(s.solution.terms().len(), 1);
        assert!(s.residual_norm < 1e-14);
    }

    #[test]
    fn quintic_homotopy_rejects_cubic_content() {
        let o = oscillator("duffing_cubic", &[("eps", 0.1), ("amp", 1.0)]);
        assert!(matches!(hpm_quintic(&o), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn amplitude_drift_vanishes_exactly_on_the_limit_cycle() {
        assert_eq!(limit_cycle_alpha(0.3, 2.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_drift_matches_frozen_value_and_sign_logic() {
        let a = limit_cycle_alpha(0.1, 1.0, 1.0).unwrap();
        assert_relative_eq!(a, -0.003810648352163176, epsilon = 1e-15);
        // below the limit cycle the amplitude must grow toward it
        assert!(a < 0.0);
        assert!(limit_cycle_alpha(0.1, 3.0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn amplitude_drift_guards_the_resonant_denominator() {
        // eps A^2 = 2 pi omega forces the denominator to zero
        let eps = 2.0 * std::f64::consts::PI;
        assert!(matches!(
            limit_cycle_alpha(eps, 1.0, 1.0),
            Err(Error::NearResonantDenominator { .. })
        ));
    }

    #[test]
    fn iterative_correction_handles_quintic_problems_too() {
        let o = oscillator("duffing_quintic", &[("eps", 0.1), ("amp", 1.0)]);
        let s = vim_iterate(&o, 1).unwrap();
        // secular condition gives the same frequency as the homotopy split
        assert_relative_eq!(s.frequency.omega_squared, 1.0625, epsilon = 1e-14);
        assert!(s.solution.is_secular_free());
        use crate::problems::Candidate;
        let cand = TrigCandidate::new(&s.solution);
        assert_relative_eq!(cand.eval(0.0), 1.0, epsilon = 1e-13);
    }
}
