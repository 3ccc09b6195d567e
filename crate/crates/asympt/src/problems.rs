//! Problem registry, parameter validation, and residual evaluation.
//!
//! Every governing equation handled by the crate is described by a spec type;
//! [`make_problem`] builds one from a name and a flat parameter map (the same
//! map the CLI and configuration files produce). [`residual`] evaluates the
//! left-hand side of the governing equation pointwise for any candidate
//! solution that can report two derivatives.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{GridFunction, GridMeta};
use crate::trig::TrigPoly;

/// Flat `name -> value` parameter map (deterministic iteration order).
pub type ParamMap = BTreeMap<String, f64>;

/// Second-order oscillator `u'' + delta u' - mu (1 - u^2) u' + a1 u + a2 u^2
/// + a3 u^3 + a5 u^5 = gamma cos(Omega t)` with initial data
/// `u(0) = A`, `u'(0) = omega B`.
///
/// Damping and forcing are carried for residual evaluation only; every
/// approximation method in this crate requires them to vanish.
#[derive(Debug, Clone, Serialize)]
pub struct OscillatorSpec {
    pub linear: f64,
    pub quadratic: f64,
    pub cubic: f64,
    pub quintic: f64,
    /// mu >= 0, coefficient of the self-excitation term `-mu (1 - u^2) u'`.
    pub vdp: f64,
    pub damping: f64,
    pub forcing: f64,
    pub forcing_freq: f64,
    /// Nominal perturbation strength (coincides with the active nonlinear
    /// coefficient for the canonical problems).
    pub eps: f64,
    /// Cosine amplitude A > 0.
    pub amp: f64,
    /// Sine split B of the initial condition.
    pub amp_b: f64,
}

impl OscillatorSpec {
    pub fn is_conservative(&self) -> bool {
        self.vdp == 0.0 && self.damping == 0.0 && self.forcing == 0.0
    }
}

/// Which two-point boundary-value problem a [`BvpSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BvpKind {
    /// `u'' + lambda e^u = 0`, `u(0) = u(1) = 0`.
    Bratu,
    /// `eps y'' + y' + y = 0`, `y(0) = alpha`, `y(1) = beta`, `0 < eps < 1/4`.
    SingularLinear,
    /// `f''' + f f'' + beta (1 - f'^2) = 0`, `f(0) = f'(0) = 0`, `f' -> 1`.
    FalknerSkan,
}

/// Two-point boundary-value problem; which fields are meaningful depends on
/// [`BvpSpec::kind`].
#[derive(Debug, Clone, Serialize)]
pub struct BvpSpec {
    pub kind: BvpKind,
    pub lambda: f64,
    pub eps: f64,
    pub left: f64,
    pub right: f64,
    pub beta_fs: f64,
}

impl BvpSpec {
    pub fn bratu(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParam {
                param: "lambda",
                reason: format!("must be finite and >= 0, got {lambda}"),
            });
        }
        Ok(BvpSpec { kind: BvpKind::Bratu, lambda, eps: 0.0, left: 0.0, right: 0.0, beta_fs: 0.0 })
    }

    pub fn singular_linear(eps: f64, left: f64, right: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.25) {
            return Err(Error::InvalidParam {
                param: "eps",
                reason: format!("must lie in (0, 1/4), got {eps}"),
            });
        }
        if !left.is_finite() || !right.is_finite() {
            return Err(Error::NonFinite { what: "boundary value" });
        }
        Ok(BvpSpec { kind: BvpKind::SingularLinear, lambda: 0.0, eps, left, right, beta_fs: 0.0 })
    }

    pub fn falkner_skan(beta_fs: f64) -> Result<Self> {
        if !beta_fs.is_finite() {
            return Err(Error::NonFinite { what: "beta" });
        }
        Ok(BvpSpec { kind: BvpKind::FalknerSkan, lambda: 0.0, eps: 0.0, left: 0.0, right: 0.0, beta_fs })
    }
}

/// Coefficient field `F(x) = (offset + slope * x)^power` for the oscillatory
/// equation `eps^2 y'' + F(x) y = 0`.
///
/// Covers both canonical cases: a constant field (`slope = 0`) and the
/// squared linear ramp (`offset = slope = 1`, `power = 2`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WkbField {
    pub offset: f64,
    pub slope: f64,
    pub power: f64,
}

impl WkbField {
    pub fn eval(&self, x: f64) -> f64 {
        (self.offset + self.slope * x).powf(self.power)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let base = self.offset + self.slope * x;
        self.power * self.slope * base.powf(self.power - 1.0)
    }
}

/// Oscillatory second-order problem `eps^2 y'' + F(x) y = 0` on `[x_lo, x_hi]`
/// with `F` strictly positive (no turning points in the domain).
#[derive(Debug, Clone, Serialize)]
pub struct WkbSpec {
    pub field: WkbField,
    pub eps: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl WkbSpec {
    /// Minimum of `F` over a 1001-point sampling grid; errs on a turning point.
    pub fn check_positive(&self) -> Result<f64> {
        let n = 1000;
        let mut fmin = f64::INFINITY;
        for i in 0..=n {
            let x = self.x_lo + (self.x_hi - self.x_lo) * i as f64 / n as f64;
            let v = self.field.eval(x);
            if !(v > 0.0) {
                return Err(Error::TurningPoint { x });
            }
            fmin = fmin.min(v);
        }
        Ok(fmin)
    }
}

/// Radial bound-state pair `S'' + (2/r) S' = -S U`, `U'' + (2/r) U' = -S^2`
/// posed in integral form on `[0, r_max]`.
#[derive(Debug, Clone, Serialize)]
pub struct SNewtonSpec {
    pub s0: f64,
    pub u0: f64,
    pub r_max: f64,
    pub grid_points: usize,
    /// Under-relaxation factor in (0, 1]; 1 is a plain fixed-point sweep.
    pub theta: f64,
}

/// Traveling-wave reduction `u'' - c u - 3 u^2 = 0` (zero integration
/// constants) of the shallow-water wave equation, in `xi = x - c t - xi0`.
#[derive(Debug, Clone, Serialize)]
pub struct TravelingWaveSpec {
    pub speed: f64,
    pub offset: f64,
}

/// `y'' + (k^2/n) y - (1 - n) y'^2 / y = 0`; verification target for the
/// residual evaluator (closed-form solutions via [`lambert_closed_form`]).
#[derive(Debug, Clone, Serialize)]
pub struct LambertSpec {
    pub k: f64,
    pub n: f64,
}

/// Any problem the crate knows how to describe.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProblemSpec {
    Oscillator(OscillatorSpec),
    Bvp(BvpSpec),
    Wkb(WkbSpec),
    SNewton(SNewtonSpec),
    TravelingWave(TravelingWaveSpec),
    Lambert(LambertSpec),
}

impl ProblemSpec {
    /// Direct constructor for the residual verification target; not part of
    /// the [`make_problem`] registry.
    pub fn lambert(k: f64, n: f64) -> Result<Self> {
        if !k.is_finite() || !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidParam { param: "n", reason: "k, n must be finite, n nonzero".into() });
        }
        Ok(ProblemSpec::Lambert(LambertSpec { k, n }))
    }

    /// Domain on which residuals may be sampled (`None` bound = unbounded).
    pub fn domain(&self) -> (Option<f64>, Option<f64>) {
        match self {
            ProblemSpec::Oscillator(_) | ProblemSpec::Lambert(_) | ProblemSpec::TravelingWave(_) => {
                (None, None)
            }
            ProblemSpec::Bvp(b) => match b.kind {
                BvpKind::Bratu | BvpKind::SingularLinear => (Some(0.0), Some(1.0)),
                BvpKind::FalknerSkan => (Some(0.0), None),
            },
            ProblemSpec::Wkb(w) => (Some(w.x_lo), Some(w.x_hi)),
            ProblemSpec::SNewton(s) => (Some(0.0), Some(s.r_max)),
        }
    }

    /// Diagnostics about accepted-but-inert parameters.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let ProblemSpec::Oscillator(o) = self {
            if o.damping != 0.0 {
                out.push(format!(
                    "damping delta = {} is carried in the residual but no approximation method supports it",
                    o.damping
                ));
            }
            if o.forcing != 0.0 {
                out.push(format!(
                    "forcing gamma = {} is carried in the residual but no approximation method supports it",
                    o.forcing
                ));
            }
        }
        out
    }
}

/// Names accepted by [`make_problem`].
pub const PROBLEM_NAMES: [&str; 11] = [
    "duffing_cubic",
    "duffing_quintic",
    "van_der_pol",
    "vdp_duffing",
    "pendulum",
    "bratu",
    "singular_linear",
    "falkner_skan",
    "wkb",
    "snewton",
    "kdv_wave",
];

struct Params<'a> {
    problem: &'static str,
    map: &'a ParamMap,
    allowed: &'static [&'static str],
}

impl<'a> Params<'a> {
    fn new(problem: &'static str, map: &'a ParamMap, allowed: &'static [&'static str]) -> Result<Self> {
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::InvalidParam {
                    param: "unknown",
                    reason: format!("'{key}' is not a parameter of {problem} (expected one of {allowed:?})"),
                });
            }
        }
        Ok(Params { problem, map, allowed })
    }

    fn required(&self, key: &'static str) -> Result<f64> {
        debug_assert!(self.allowed.contains(&key));
        self.map
            .get(key)
            .copied()
            .ok_or(Error::MissingParam { problem: self.problem, param: key })
    }

    fn optional(&self, key: &'static str, default: f64) -> f64 {
        debug_assert!(self.allowed.contains(&key));
        self.map.get(key).copied().unwrap_or(default)
    }
}

fn check(cond: bool, param: &'static str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParam { param, reason: reason.to_string() })
    }
}

fn positive_amp(p: &Params) -> Result<f64> {
    let amp = p.required("amp")?;
    check(amp > 0.0 && amp.is_finite(), "amp", &format!("must be > 0, got {amp}"))?;
    Ok(amp)
}

/// Builds a validated [`ProblemSpec`] from a registry name and parameter map.
///
/// Unknown names, missing required parameters, out-of-range values, and
/// unrecognized parameter keys are all rejected.
pub fn make_problem(name: &str, params: &ParamMap) -> Result<ProblemSpec> {
    match name {
        "duffing_cubic" => {
            let p = Params::new("duffing_cubic", params, &["eps", "amp", "amp_b", "linear", "delta", "gamma", "forcing_freq"])?;
            let eps = p.required("eps")?;
            check(eps >= 0.0 && eps.is_finite(), "eps", &format!("must be >= 0, got {eps}"))?;
            let amp = positive_amp(&p)?;
            let linear = p.optional("linear", 1.0);
            check(linear > 0.0, "linear", "must be > 0")?;
            Ok(ProblemSpec::Oscillator(OscillatorSpec {
                linear,
                quadratic: 0.0,
                cubic: eps,
                quintic: 0.0,
                vdp: 0.0,
                damping: p.optional("delta", 0.0),
                forcing: p.optional("gamma", 0.0),
                forcing_freq: p.optional("forcing_freq", 1.0),
                eps,
                amp,
                amp_b: p.optional("amp_b", 0.0),
            }))
        }
        "duffing_quintic" => {
            let p = Params::new("duffing_quintic", params, &["eps", "amp", "delta", "gamma", "forcing_freq"])?;
            let eps = p.required("eps")?;
            check(eps >= 0.0 && eps.is_finite(), "eps", &format!("must be >= 0, got {eps}"))?;
            let amp = positive_amp(&p)?;
            Ok(ProblemSpec::Oscillator(OscillatorSpec {
                linear: 1.0,
                quadratic: 0.0,
                cubic: 0.0,
                quintic: eps,
                vdp: 0.0,
                damping: p.optional("delta", 0.0),
                forcing: p.optional("gamma", 0.0),
                forcing_freq: p.optional("forcing_freq", 1.0),
                eps,
                amp,
                amp_b: 0.0,
            }))
        }
        "van_der_pol" => {
            let p = Params::new("van_der_pol", params, &["mu", "amp"])?;
            let mu = p.required("mu")?;
            check(mu >= 0.0 && mu.is_finite(), "mu", &format!("must be >= 0, got {mu}"))?;
            let amp = p.optional("amp", 1.0);
            check(amp > 0.0, "amp", "must be > 0")?;
            Ok(ProblemSpec::Oscillator(OscillatorSpec {
                linear: 1.0,
                quadratic: 0.0,
                cubic: 0.0,
                quintic: 0.0,
                vdp: mu,
                damping: 0.0,
                forcing: 0.0,
                forcing_freq: 1.0,
                eps: mu,
                amp,
                amp_b: 0.0,
            }))
        }
        "vdp_duffing" => {
            let p = Params::new("vdp_duffing", params, &["alpha", "mu", "amp", "amp_b"])?;
            let alpha = p.required("alpha")?;
            check(alpha >= 0.0 && alpha.is_finite(), "alpha", &format!("must be >= 0, got {alpha}"))?;
            let mu = p.optional("mu", 0.0);
            check(mu >= 0.0, "mu", "must be >= 0")?;
            let amp = positive_amp(&p)?;
            Ok(ProblemSpec::Oscillator(OscillatorSpec {
                linear: 1.0,
                quadratic: 0.0,
                cubic: alpha,
                quintic: 0.0,
                vdp: mu,
                damping: 0.0,
                forcing: 0.0,
                forcing_freq: 1.0,
                eps: alpha,
                amp,
                amp_b: p.optional("amp_b", 0.0),
            }))
        }
        "pendulum" => {
            let p = Params::new("pendulum", params, &["amp"])?;
            let amp = positive_amp(&p)?;
            // sin u truncated to u - u^3/6
            Ok(ProblemSpec::Oscillator(OscillatorSpec {
                linear: 1.0,
                quadratic: 0.0,
                cubic: -1.0 / 6.0,
                quintic: 0.0,
                vdp: 0.0,
                damping: 0.0,
                forcing: 0.0,
                forcing_freq: 1.0,
                eps: 1.0 / 6.0,
                amp,
                amp_b: 0.0,
            }))
        }
        "bratu" => {
            let p = Params::new("bratu", params, &["lambda"])?;
            Ok(ProblemSpec::Bvp(BvpSpec::bratu(p.required("lambda")?)?))
        }
        "singular_linear" => {
            let p = Params::new("singular_linear", params, &["eps", "alpha", "beta"])?;
            Ok(ProblemSpec::Bvp(BvpSpec::singular_linear(
                p.required("eps")?,
                p.optional("alpha", 0.0),
                p.optional("beta", 1.0),
            )?))
        }
        "falkner_skan" => {
            let p = Params::new("falkner_skan", params, &["beta"])?;
            Ok(ProblemSpec::Bvp(BvpSpec::falkner_skan(p.optional("beta", 0.0))?))
        }
        "wkb" => {
            let p = Params::new("wkb", params, &["eps", "x_lo", "x_hi", "f_offset", "f_slope", "f_power"])?;
            let eps = p.required("eps")?;
            check(eps > 0.0 && eps.is_finite(), "eps", &format!("must be > 0, got {eps}"))?;
            let x_lo = p.optional("x_lo", 0.0);
            let x_hi = p.optional("x_hi", 1.0);
            check(x_lo < x_hi, "x_lo", "requires x_lo < x_hi")?;
            let spec = WkbSpec {
                field: WkbField {
                    offset: p.optional("f_offset", 1.0),
                    slope: p.optional("f_slope", 1.0),
                    power: p.optional("f_power", 2.0),
                },
                eps,
                x_lo,
                x_hi,
            };
            spec.check_positive()?;
            Ok(ProblemSpec::Wkb(spec))
        }
        "snewton" => {
            let p = Params::new("snewton", params, &["s0", "u0", "r_max", "grid_points", "theta"])?;
            let s0 = p.optional("s0", 1.0);
            let u0 = p.optional("u0", 1.0);
            let r_max = p.optional("r_max", 2.0);
            check(s0 > 0.0, "s0", "must be > 0")?;
            check(u0 > 0.0, "u0", "must be > 0")?;
            check(r_max > 0.0 && r_max.is_finite(), "r_max", "must be > 0")?;
            let gp = p.optional("grid_points", 512.0);
            check(gp.fract() == 0.0 && (64.0..=1e7).contains(&gp), "grid_points", "must be an integer >= 64")?;
            let theta = p.optional("theta", 1.0);
            check(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0, 1]")?;
            Ok(ProblemSpec::SNewton(SNewtonSpec { s0, u0, r_max, grid_points: gp as usize, theta }))
        }
        "kdv_wave" => {
            let p = Params::new("kdv_wave", params, &["c", "xi0"])?;
            let c = p.required("c")?;
            check(c > 0.0 && c.is_finite(), "c", &format!("must be > 0, got {c}"))?;
            Ok(ProblemSpec::TravelingWave(TravelingWaveSpec { speed: c, offset: p.optional("xi0", 0.0) }))
        }
        other => Err(Error::UnknownProblem { name: other.to_string() }),
    }
}

/// A candidate solution that can report itself and two derivatives pointwise.
///
/// The default third derivative (needed only by the boundary-layer similarity
/// equation) is a centered difference of [`Candidate::d2`].
pub trait Candidate {
    fn eval(&self, x: f64) -> f64;
    fn d1(&self, x: f64) -> f64;
    fn d2(&self, x: f64) -> f64;

    fn d3(&self, x: f64) -> f64 {
        let h = 1e-4 * x.abs().max(1.0);
        (self.d2(x + h) - self.d2(x - h)) / (2.0 * h)
    }
}

/// Candidate backed by a trigonometric polynomial with analytic derivatives.
pub struct TrigCandidate {
    u: TrigPoly,
    du: TrigPoly,
    ddu: TrigPoly,
}

impl TrigCandidate {
    pub fn new(u: &TrigPoly) -> Self {
        TrigCandidate { u: u.clone(), du: u.differentiate(1), ddu: u.differentiate(2) }
    }
}

impl Candidate for TrigCandidate {
    fn eval(&self, x: f64) -> f64 {
        self.u.eval(x)
    }
    fn d1(&self, x: f64) -> f64 {
        self.du.eval(x)
    }
    fn d2(&self, x: f64) -> f64 {
        self.ddu.eval(x)
    }
}

/// Candidate wrapping an arbitrary callable; derivatives by centered finite
/// differences with scale-aware steps (accuracy is limited accordingly).
pub struct FnCandidate<F: Fn(f64) -> f64> {
    f: F,
}

impl<F: Fn(f64) -> f64> FnCandidate<F> {
    pub fn new(f: F) -> Self {
        FnCandidate { f }
    }
}

impl<F: Fn(f64) -> f64> Candidate for FnCandidate<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn d1(&self, x: f64) -> f64 {
        let h = 6.06e-6 * x.abs().max(1.0);
        ((self.f)(x + h) - (self.f)(x - h)) / (2.0 * h)
    }

    fn d2(&self, x: f64) -> f64 {
        let h = 1.22e-4 * x.abs().max(1.0);
        ((self.f)(x + h) - 2.0 * (self.f)(x) + (self.f)(x - h)) / (h * h)
    }
}

/// Closed-form solution `y = (c cos kx + d sin kx)^(1/n)` of the
/// [`LambertSpec`] equation, with analytic derivatives.
pub struct LambertClosedForm {
    pub c: f64,
    pub d: f64,
    pub k: f64,
    pub n: f64,
}

/// Convenience constructor for [`LambertClosedForm`].
pub fn lambert_closed_form(c: f64, d: f64, k: f64, n: f64) -> LambertClosedForm {
    LambertClosedForm { c, d, k, n }
}

impl LambertClosedForm {
    fn z(&self, x: f64) -> (f64, f64, f64) {
        let (s, co) = (self.k * x).sin_cos();
        let z = self.c * co + self.d * s;
        let dz = self.k * (-self.c * s + self.d * co);
        let ddz = -self.k * self.k * z;
        (z, dz, ddz)
    }
}

impl Candidate for LambertClosedForm {
    fn eval(&self, x: f64) -> f64 {
        let (z, _, _) = self.z(x);
        z.powf(1.0 / self.n)
    }

    fn d1(&self, x: f64) -> f64 {
        let (z, dz, _) = self.z(x);
        let inv_n = 1.0 / self.n;
        inv_n * z.powf(inv_n - 1.0) * dz
    }

    fn d2(&self, x: f64) -> f64 {
        let (z, dz, ddz) = self.z(x);
        let inv_n = 1.0 / self.n;
        inv_n * (inv_n - 1.0) * z.powf(inv_n - 2.0) * dz * dz + inv_n * z.powf(inv_n - 1.0) * ddz
    }
}

fn check_grid(grid: &[f64], lo: Option<f64>, hi: Option<f64>) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid { reason: "empty sample grid".into() });
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidGrid { reason: format!("grid not strictly increasing at {}", w[1]) });
        }
    }
    for &x in grid {
        if !x.is_finite() {
            return Err(Error::InvalidGrid { reason: "non-finite grid point".into() });
        }
        let lo_v = lo.unwrap_or(f64::NEG_INFINITY);
        let hi_v = hi.unwrap_or(f64::INFINITY);
        if x < lo_v || x > hi_v {
            return Err(Error::OutsideDomain { x, lo: lo_v, hi: hi_v });
        }
    }
    Ok(())
}

/// Pointwise left-hand side of the governing equation along `grid`.
///
/// The gravitating bound-state pair is excluded: its consistency check is the
/// finite-difference residual computed by its own solver, since a single
/// scalar candidate cannot represent the coupled fields.
pub fn residual(problem: &ProblemSpec, candidate: &dyn Candidate, grid: &[f64]) -> Result<GridFunction> {
    let (lo, hi) = problem.domain();
    check_grid(grid, lo, hi)?;

    let name;
    let mut values = Vec::with_capacity(grid.len());
    match problem {
        ProblemSpec::Oscillator(o) => {
            name = "oscillator";
            for &t in grid {
                let u = candidate.eval(t);
                let du = candidate.d1(t);
                let ddu = candidate.d2(t);
                let r = ddu + o.damping * du - o.vdp * (1.0 - u * u) * du
                    + o.linear * u
                    + o.quadratic * u * u
                    + o.cubic * u * u * u
                    + o.quintic * u.powi(5)
                    - o.forcing * (o.forcing_freq * t).cos();
                values.push(r);
            }
        }
        ProblemSpec::Bvp(b) => match b.kind {
            BvpKind::Bratu => {
                name = "bratu";
                for &x in grid {
                    values.push(candidate.d2(x) + b.lambda * candidate.eval(x).exp());
                }
            }
            BvpKind::SingularLinear => {
                name = "singular_linear";
                for &x in grid {
                    values.push(b.eps * candidate.d2(x) + candidate.d1(x) + candidate.eval(x));
                }
            }
            BvpKind::FalknerSkan => {
                name = "falkner_skan";
                for &x in grid {
                    let d1 = candidate.d1(x);
                    values.push(candidate.d3(x) + candidate.eval(x) * candidate.d2(x) + b.beta_fs * (1.0 - d1 * d1));
                }
            }
        },
        ProblemSpec::Wkb(w) => {
            name = "wkb";
            for &x in grid {
                values.push(w.eps * w.eps * candidate.d2(x) + w.field.eval(x) * candidate.eval(x));
            }
        }
        ProblemSpec::TravelingWave(tw) => {
            name = "kdv_wave";
            for &xi in grid {
                let u = candidate.eval(xi);
                values.push(candidate.d2(xi) - tw.speed * u - 3.0 * u * u);
            }
        }
        ProblemSpec::Lambert(l) => {
            name = "lambert";
            for &x in grid {
                let y = candidate.eval(x);
                let dy = candidate.d1(x);
                values.push(candidate.d2(x) + l.k * l.k / l.n * y - (1.0 - l.n) * dy * dy / y);
            }
        }
        ProblemSpec::SNewton(_) => {
            return Err(Error::Unsupported {
                reason: "the coupled bound-state pair has no single-candidate residual; \
                         use the finite-difference check reported by its solver"
                    .into(),
            });
        }
    }

    if let Some((i, _)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::EvaluationFailed { x: grid[i] });
    }

    GridFunction::new(grid.to_vec(), values, GridMeta::new(name, "residual"))
}

/// Plain-text configuration files: `[section]` headers over `key = value`
/// lines, `#` comments, blank lines ignored.
pub mod config {
    use super::{make_problem, ParamMap, ProblemSpec};
    use crate::error::{Error, Result};
    use std::collections::BTreeMap;

    /// Parsed configuration document: section name -> (key -> raw value).
    #[derive(Debug, Clone, Default)]
    pub struct ConfigDoc {
        sections: BTreeMap<String, BTreeMap<String, String>>,
    }

    impl ConfigDoc {
        pub fn section(&self, name: &str) -> Option<&BTreeMap<String, String>> {
            self.sections.get(name)
        }

        pub fn section_names(&self) -> impl Iterator<Item = &str> {
            self.sections.keys().map(String::as_str)
        }

        /// Interprets a section as a problem definition: a `problem` (or
        /// `name`) key selects the registry entry, every other key must parse
        /// as a number and becomes a parameter.
        pub fn problem_from_section(&self, section: &str) -> Result<ProblemSpec> {
            let (name, params) = self.problem_params(section)?;
            make_problem(&name, &params)
        }

        /// The raw `(registry name, parameter map)` pair of a problem section.
        pub fn problem_params(&self, section: &str) -> Result<(String, ParamMap)> {
            let sec = self.section(section).ok_or_else(|| Error::Config {
                line: 0,
                reason: format!("missing section [{section}]"),
            })?;
            let mut name = None;
            let mut params = ParamMap::new();
            for (key, value) in sec {
                if key == "problem" || key == "name" {
                    name = Some(value.clone());
                } else {
                    let v: f64 = value.parse().map_err(|_| Error::Config {
                        line: 0,
                        reason: format!("value of '{key}' in [{section}] is not a number: '{value}'"),
                    })?;
                    params.insert(key.clone(), v);
                }
            }
            let name = name.ok_or_else(|| Error::Config {
                line: 0,
                reason: format!("section [{section}] has no 'problem' key"),
            })?;
            Ok((name, params))
        }
    }

    /// Parses configuration text. Keys outside any section are rejected.
    pub fn parse(text: &str) -> Result<ConfigDoc> {
        let mut doc = ConfigDoc::default();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(stripped) = line.strip_prefix('[') {
                let name = stripped.strip_suffix(']').ok_or(Error::Config {
                    line: line_no,
                    reason: "unterminated section header".into(),
                })?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(Error::Config { line: line_no, reason: "empty section name".into() });
                }
                doc.sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Config {
                line: line_no,
                reason: format!("expected 'key = value', got '{line}'"),
            })?;
            let section = current.as_ref().ok_or(Error::Config {
                line: line_no,
                reason: "key outside any [section]".into(),
            })?;
            doc.sections
                .get_mut(section)
                .expect("section created on header")
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(pairs: &[(&str, f64)]) -> ParamMap {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn duffing_registry_entry_copies_eps_into_cubic() {
        let p = make_problem("duffing_cubic", &params(&[("eps", 0.1), ("amp", 1.0)])).unwrap();
        match p {
            ProblemSpec::Oscillator(o) => {
                assert_eq!(o.cubic, 0.1);
                assert_eq!(o.linear, 1.0);
                assert_eq!(o.amp, 1.0);
                assert!(o.is_conservative());
            }
            _ => panic!("expected oscillator"),
        }
    }

    #[test]
    fn pendulum_uses_cubic_truncation_of_sine() {
        let p = make_problem("pendulum", &params(&[("amp", 0.5)])).unwrap();
        match p {
            ProblemSpec::Oscillator(o) => assert_relative_eq!(o.cubic, -1.0 / 6.0),
            _ => panic!("expected oscillator"),
        }
    }

    #[test]
    fn unknown_problem_and_unknown_key_are_rejected() {
        assert!(matches!(
            make_problem("ruffing_cubic", &ParamMap::new()),
            Err(Error::UnknownProblem { .. })
        ));
        let err = make_problem("duffing_cubic", &params(&[("eps", 0.1), ("amp", 1.0), ("lambda", 2.0)]));
        assert!(matches!(err, Err(Error::InvalidParam { .. })));
    }

    #[test]
    fn missing_required_parameter_is_reported() {
        assert!(matches!(
            make_problem("duffing_cubic", &params(&[("amp", 1.0)])),
            Err(Error::MissingParam { param: "eps", .. })
        ));
    }

    #[test]
    fn singular_linear_rejects_eps_outside_open_quarter_interval() {
        assert!(make_problem("singular_linear", &params(&[("eps", 0.3)])).is_err());
        assert!(make_problem("singular_linear", &params(&[("eps", 0.25)])).is_err());
        assert!(make_problem("singular_linear", &params(&[("eps", 0.01)])).is_ok());
    }

    #[test]
    fn bratu_accepts_zero_lambda_but_not_negative() {
        assert!(make_problem("bratu", &params(&[("lambda", 0.0)])).is_ok());
        assert!(make_problem("bratu", &params(&[("lambda", -1.0)])).is_err());
    }

    #[test]
    fn nonzero_damping_and_forcing_produce_warnings() {
        let p = make_problem(
            "duffing_cubic",
            &params(&[("eps", 0.1), ("amp", 1.0), ("delta", 0.2), ("gamma", 0.3)]),
        )
        .unwrap();
        assert_eq!(p.warnings().len(), 2);
        let clean = make_problem("duffing_cubic", &params(&[("eps", 0.1), ("amp", 1.0)])).unwrap();
        assert!(clean.warnings().is_empty());
    }

    #[test]
    fn wkb_field_detects_turning_points() {
        // F = (1 - 2x)^1 crosses zero inside [0, 1]
        let err = make_problem(
            "wkb",
            &params(&[("eps", 0.1), ("f_offset", 1.0), ("f_slope", -2.0), ("f_power", 1.0)]),
        );
        assert!(matches!(err, Err(Error::TurningPoint { .. })));
    }

    #[test]
    fn oscillator_residual_of_cosine_matches_closed_form() {
        // r(t) = (1 - w^2) A cos wt + eps (3A^3/4 cos wt + A^3/4 cos 3wt)
        let spec = make_problem("duffing_cubic", &params(&[("eps", 0.2), ("amp", 1.3)])).unwrap();
        let (w, a, eps) = (1.1, 1.3, 0.2);
        let u = TrigPoly::cos_term(w, 1, a).unwrap();
        let cand = TrigCandidate::new(&u);
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let r = residual(&spec, &cand, &grid).unwrap();
        for (&t, &v) in r.points().iter().zip(r.values()) {
            let expect = (1.0 - w * w) * a * (w * t).cos()
                + eps * (0.75 * a.powi(3) * (w * t).cos() + 0.25 * a.powi(3) * (3.0 * w * t).cos());
            assert_relative_eq!(v, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn lambert_closed_form_solves_its_equation() {
        // y = (cos 2x)^(1/3) for k = 2, n = 3, on a grid avoiding cos zeros
        let problem = ProblemSpec::lambert(2.0, 3.0).unwrap();
        let y = lambert_closed_form(1.0, 0.0, 2.0, 3.0);
        let grid: Vec<f64> = (0..200).map(|i| -0.7 + 1.4 * i as f64 / 199.0).collect();
        let r = residual(&problem, &y, &grid).unwrap();
        let max = r.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(max < 1e-8, "max residual {max}");
    }

    #[test]
    fn snewton_residual_is_unsupported() {
        let p = make_problem("snewton", &ParamMap::new()).unwrap();
        let cand = FnCandidate::new(|_| 0.0);
        assert!(matches!(residual(&p, &cand, &[0.0, 1.0]), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn residual_grid_must_be_increasing_and_in_domain() {
        let p = make_problem("bratu", &params(&[("lambda", 1.0)])).unwrap();
        let cand = FnCandidate::new(|x: f64| x * (1.0 - x));
        assert!(matches!(
            residual(&p, &cand, &[0.5, 0.4]),
            Err(Error::InvalidGrid { .. })
        ));
        assert!(matches!(
            residual(&p, &cand, &[0.5, 1.5]),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn config_round_trip_builds_problem() {
        let text = "\n# demo\n[problem]\nname = duffing_cubic\neps = 0.15\namp = 1.25\n\n[method]\nname = vim\norder = 1\n";
        let doc = config::parse(text).unwrap();
        let spec = doc.problem_from_section("problem").unwrap();
        match spec {
            ProblemSpec::Oscillator(o) => {
                assert_eq!(o.cubic, 0.15);
                assert_eq!(o.amp, 1.25);
            }
            _ => panic!("expected oscillator"),
        }
        assert_eq!(doc.section("method").unwrap().get("name").unwrap(), "vim");
    }

    #[test]
    fn config_syntax_errors_carry_line_numbers() {
        let err = config::parse("[problem]\nessentially broken line\n");
        match err {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected config error, got {other:?}"),
        }
        let err = config::parse("key = 1\n");
        assert!(matches!(err, Err(Error::Config { line: 1, .. })));
    }
}
