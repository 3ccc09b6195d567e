//! Independent numerical references: an adaptive embedded Runge-Kutta
//! integrator with dense output, limit-cycle measurement, shooting solvers
//! for the supported boundary-value problems, and closed-form/quadrature
//! references where they exist.
//!
//! Everything here is deliberately separate from the approximation methods:
//! no frequency expansions, no variational identities. Agreement between the
//! two layers is what the acceptance suite certifies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problems::{BvpKind, BvpSpec, Candidate, OscillatorSpec};
use crate::quad;

/// Provenance tags for a [`GridFunction`].
#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    /// Problem or quantity family, e.g. "bratu".
    pub name: String,
    /// What the values are, e.g. "solution" or "residual".
    pub quantity: String,
    /// Shooting parameter that produced the solution, when one exists
    /// (`u'(0)` for the Bratu problem, `f''(0)` for the similarity equation).
    pub shoot_param: Option<f64>,
}

impl GridMeta {
    pub fn new(name: &str, quantity: &str) -> Self {
        GridMeta { name: name.to_string(), quantity: quantity.to_string(), shoot_param: None }
    }

    pub fn with_shoot_param(mut self, s: f64) -> Self {
        self.shoot_param = Some(s);
        self
    }
}

/// A scalar function sampled on a strictly increasing grid.
#[derive(Debug, Clone, Serialize)]
pub struct GridFunction {
    points: Vec<f64>,
    values: Vec<f64>,
    meta: GridMeta,
}

impl GridFunction {
    pub fn new(points: Vec<f64>, values: Vec<f64>, meta: GridMeta) -> Result<Self> {
        if points.len() != values.len() || points.is_empty() {
            return Err(Error::InvalidGrid {
                reason: format!("length mismatch: {} points, {} values", points.len(), values.len()),
            });
        }
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidGrid { reason: format!("grid not strictly increasing at {}", w[1]) });
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::EvaluationFailed { x: points[i] });
        }
        Ok(GridFunction { points, values, meta })
    }

    /// Samples `f` on `points`.
    pub fn sample(f: impl Fn(f64) -> f64, points: &[f64], meta: GridMeta) -> Result<Self> {
        let values = points.iter().map(|&x| f(x)).collect();
        GridFunction::new(points.to_vec(), values, meta)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &GridMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Sup-norm difference against another function on the identical grid.
    pub fn sup_diff(&self, other: &GridFunction) -> Result<f64> {
        if self.points != other.points {
            return Err(Error::InvalidGrid { reason: "sup_diff requires identical grids".into() });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Uniform grid of `n` points spanning `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > lo, "linspace needs n >= 2 and hi > lo");
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Tolerances and budget for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-12, max_steps: 2_000_000, h_max: None }
    }
}

// Dormand-Prince 5(4) tableau (FSAL: the 7th stage is the next first stage).
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] =
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const A7: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
// b - bhat, for the embedded error estimate
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output weights for the 5th-order interpolant
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One accepted step, stored as plain polynomial coefficients in the local
/// variable `theta = (t - t0)/h`, five per component.
#[derive(Debug, Clone)]
pub struct Segment {
    t0: f64,
    h: f64,
    /// `dim * 5` coefficients: component `i` holds `c[5i..5i+5]`, value
    /// `sum_k c_k theta^k`.
    coeff: Vec<f64>,
}

impl Segment {
    pub fn t_start(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + self.h
    }

    /// Value of component `comp` at local coordinate `theta` in [0, 1].
    pub fn eval_theta(&self, theta: f64, comp: usize) -> f64 {
        let c = &self.coeff[5 * comp..5 * comp + 5];
        (((c[4] * theta + c[3]) * theta + c[2]) * theta + c[1]) * theta + c[0]
    }

    /// `order`-th time derivative of component `comp` at `theta` (order <= 3:
    /// exact derivatives of the quartic interpolant).
    pub fn deriv_theta(&self, theta: f64, comp: usize, order: u32) -> f64 {
        let c = &self.coeff[5 * comp..5 * comp + 5];
        let p = match order {
            0 => return self.eval_theta(theta, comp),
            1 => ((4.0 * c[4] * theta + 3.0 * c[3]) * theta + 2.0 * c[2]) * theta + c[1],
            2 => (12.0 * c[4] * theta + 6.0 * c[3]) * theta + 2.0 * c[2],
            3 => 24.0 * c[4] * theta + 6.0 * c[3],
            _ => 0.0,
        };
        p / self.h.powi(order as i32)
    }
}

struct Stepper<F> {
    f: F,
    dim: usize,
    t: f64,
    y: Vec<f64>,
    k1: Vec<f64>,
    h: f64,
    opts: OdeOptions,
    attempts: usize,
    accepted: usize,
    rejected: usize,
    just_rejected: bool,
}

impl<F: FnMut(f64, &[f64], &mut [f64])> Stepper<F> {
    fn new(mut f: F, t0: f64, y0: &[f64], opts: OdeOptions) -> Result<Self> {
        let dim = y0.len();
        if dim == 0 {
            return Err(Error::InvalidGrid { reason: "empty state vector".into() });
        }
        if y0.iter().any(|v| !v.is_finite()) || !t0.is_finite() {
            return Err(Error::NonFinite { what: "initial data" });
        }
        let mut k1 = vec![0.0; dim];
        f(t0, y0, &mut k1);
        let mut st = Stepper {
            f,
            dim,
            t: t0,
            y: y0.to_vec(),
            k1,
            h: 0.0,
            opts,
            attempts: 0,
            accepted: 0,
            rejected: 0,
            just_rejected: false,
        };
        st.h = st.initial_step()?;
        Ok(st)
    }

    fn scale(&self, y1: &[f64]) -> Vec<f64> {
        self.y
            .iter()
            .zip(y1)
            .map(|(a, b)| self.opts.atol + self.opts.rtol * a.abs().max(b.abs()))
            .collect()
    }

    fn initial_step(&mut self) -> Result<f64> {
        let sc: Vec<f64> =
            self.y.iter().map(|v| self.opts.atol + self.opts.rtol * v.abs()).collect();
        let rms = |v: &[f64]| -> f64 {
            (v.iter().zip(&sc).map(|(x, s)| (x / s) * (x / s)).sum::<f64>() / self.dim as f64).sqrt()
        };
        let d0 = rms(&self.y);
        let d1 = rms(&self.k1);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        if !h0.is_finite() || h0 <= 0.0 {
            h0 = 1e-6;
        }
        let y1: Vec<f64> = self.y.iter().zip(&self.k1).map(|(y, k)| y + h0 * k).collect();
        let mut f1 = vec![0.0; self.dim];
        (self.f)(self.t + h0, &y1, &mut f1);
        let diff: Vec<f64> = f1.iter().zip(&self.k1).map(|(a, b)| a - b).collect();
        let d2 = rms(&diff) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        let mut h = (100.0 * h0).min(h1);
        if let Some(hm) = self.opts.h_max {
            h = h.min(hm);
        }
        if !h.is_finite() || h <= 0.0 {
            return Err(Error::IntegrationFailure {
                t_last: self.t,
                reason: "could not determine an initial step size".into(),
            });
        }
        Ok(h)
    }

    /// Advances one accepted step, never stepping past `t_limit`.
    fn advance(&mut self, t_limit: f64) -> Result<Segment> {
        let mut k = vec![vec![0.0; self.dim]; 7];
        k[0].copy_from_slice(&self.k1);
        loop {
            self.attempts += 1;
            if self.attempts > self.opts.max_steps {
                return Err(Error::IntegrationFailure {
                    t_last: self.t,
                    reason: format!("step budget of {} exhausted", self.opts.max_steps),
                });
            }
            let mut h = self.h;
            if let Some(hm) = self.opts.h_max {
                h = h.min(hm);
            }
            let remaining = t_limit - self.t;
            let clipped = h >= remaining;
            if clipped {
                h = remaining;
            }
            if h <= 4.0 * f64::EPSILON * self.t.abs().max(1.0) {
                return Err(Error::IntegrationFailure {
                    t_last: self.t,
                    reason: "step size underflow".into(),
                });
            }

            let mut ytmp = vec![0.0; self.dim];
            let a_rows: [&[f64]; 6] = [&A2, &A3, &A4, &A5, &A6, &A7];
            for (stage, row) in a_rows.iter().enumerate() {
                for i in 0..self.dim {
                    let mut acc = 0.0;
                    for (j, aij) in row.iter().enumerate() {
                        acc += aij * k[j][i];
                    }
                    ytmp[i] = self.y[i] + h * acc;
                }
                let (head, tail) = k.split_at_mut(stage + 1);
                (self.f)(self.t + C[stage + 1] * h, &ytmp, &mut tail[0]);
                let _ = head;
            }
            // FSAL: stage 7 used A7 = b, so ytmp now holds the 5th-order result
            let y1 = ytmp;

            let sc = self.scale(&y1);
            let mut err = 0.0;
            for i in 0..self.dim {
                let mut e = 0.0;
                for (j, ej) in E.iter().enumerate() {
                    e += ej * k[j][i];
                }
                let r = h * e / sc[i];
                err += r * r;
            }
            err = (err / self.dim as f64).sqrt();

            if !err.is_finite() {
                self.rejected += 1;
                self.just_rejected = true;
                self.h = h * 0.1;
                continue;
            }
            if err > 1.0 {
                self.rejected += 1;
                self.just_rejected = true;
                self.h = h * (0.9 * err.powf(-0.2)).clamp(0.1, 0.5);
                continue;
            }

            // accepted: build the dense interpolant
            let mut coeff = vec![0.0; self.dim * 5];
            for i in 0..self.dim {
                let dy = y1[i] - self.y[i];
                let r1 = self.y[i];
                let r2 = dy;
                let r3 = h * k[0][i] - dy;
                let r4 = dy - h * k[6][i] - r3;
                let mut acc = 0.0;
                for (j, dj) in D.iter().enumerate() {
                    acc += dj * k[j][i];
                }
                let r5 = h * acc;
                let c = &mut coeff[5 * i..5 * i + 5];
                c[0] = r1;
                c[1] = r2 + r3;
                c[2] = -r3 + r4 + r5;
                c[3] = -r4 - 2.0 * r5;
                c[4] = r5;
            }
            let seg = Segment { t0: self.t, h, coeff };

            let t_new = if clipped { t_limit } else { self.t + h };
            self.t = t_new;
            self.y = y1;
            self.k1.copy_from_slice(&k[6]);
            self.accepted += 1;
            let facmax = if self.just_rejected { 1.0 } else { 5.0 };
            self.just_rejected = false;
            self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, facmax).max(0.2);
            return Ok(seg);
        }
    }
}

/// Dense numerical solution of an initial-value problem on `[t0, t_end]`.
#[derive(Debug, Clone)]
pub struct IvpSolution {
    dim: usize,
    t0: f64,
    t_end: f64,
    segments: Vec<Segment>,
    y_end: Vec<f64>,
    accepted: usize,
    rejected: usize,
}

impl IvpSolution {
    fn from_segments(dim: usize, segments: Vec<Segment>, y_end: Vec<f64>, accepted: usize, rejected: usize) -> Self {
        let t0 = segments.first().map(|s| s.t0).unwrap_or(0.0);
        let t_end = segments.last().map(|s| s.t_end()).unwrap_or(t0);
        IvpSolution { dim, t0, t_end, segments, y_end, accepted, rejected }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_span(&self) -> (f64, f64) {
        (self.t0, self.t_end)
    }

    pub fn y_end(&self) -> &[f64] {
        &self.y_end
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let span = (self.t_end - self.t0).max(f64::MIN_POSITIVE);
        let slack = 1e-9 * span;
        if t < self.t0 - slack || t > self.t_end + slack {
            return Err(Error::OutsideDomain { x: t, lo: self.t0, hi: self.t_end });
        }
        let t = t.clamp(self.t0, self.t_end);
        // binary search for the segment containing t
        let mut lo = 0usize;
        let mut hi = self.segments.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.segments[mid].t_end() < t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let seg = &self.segments[lo];
        let theta = ((t - seg.t0) / seg.h).clamp(0.0, 1.0);
        Ok((lo, theta))
    }

    /// Component `comp` at time `t`.
    pub fn component(&self, t: f64, comp: usize) -> Result<f64> {
        let (i, theta) = self.locate(t)?;
        Ok(self.segments[i].eval_theta(theta, comp))
    }

    /// All components at time `t`.
    pub fn eval_all(&self, t: f64) -> Result<Vec<f64>> {
        let (i, theta) = self.locate(t)?;
        Ok((0..self.dim).map(|c| self.segments[i].eval_theta(theta, c)).collect())
    }

    /// `order`-th derivative (order <= 3) of component `comp` at `t`,
    /// differentiated analytically on the local interpolant.
    pub fn derivative(&self, t: f64, comp: usize, order: u32) -> Result<f64> {
        let (i, theta) = self.locate(t)?;
        Ok(self.segments[i].deriv_theta(theta, comp, order))
    }

    /// Samples one component on `points` as a [`GridFunction`].
    pub fn to_grid(&self, points: &[f64], comp: usize, meta: GridMeta) -> Result<GridFunction> {
        let mut values = Vec::with_capacity(points.len());
        for &t in points {
            values.push(self.component(t, comp)?);
        }
        GridFunction::new(points.to_vec(), values, meta)
    }

    /// View of one component as a [`Candidate`] with analytic interpolant
    /// derivatives. Times are clamped to the integration span.
    pub fn candidate(&self, comp: usize) -> IvpComponent<'_> {
        IvpComponent { sol: self, comp }
    }
}

/// A single component of an [`IvpSolution`] exposed as a residual candidate.
pub struct IvpComponent<'a> {
    sol: &'a IvpSolution,
    comp: usize,
}

impl IvpComponent<'_> {
    fn deriv_clamped(&self, t: f64, order: u32) -> f64 {
        let t = t.clamp(self.sol.t0, self.sol.t_end);
        let (i, theta) = self.sol.locate(t).expect("clamped time is in span");
        self.sol.segments[i].deriv_theta(theta, self.comp, order)
    }
}

impl Candidate for IvpComponent<'_> {
    fn eval(&self, x: f64) -> f64 {
        self.deriv_clamped(x, 0)
    }
    fn d1(&self, x: f64) -> f64 {
        self.deriv_clamped(x, 1)
    }
    fn d2(&self, x: f64) -> f64 {
        self.deriv_clamped(x, 2)
    }
    fn d3(&self, x: f64) -> f64 {
        self.deriv_clamped(x, 3)
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end > t0`, returning a dense
/// solution. `f` writes the derivative into its third argument.
pub fn integrate_ivp<F>(f: F, t0: f64, y0: &[f64], t_end: f64, opts: &OdeOptions) -> Result<IvpSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    if !(t_end > t0) {
        return Err(Error::IntegrationFailure { t_last: t0, reason: format!("t_end {t_end} must exceed t0 {t0}") });
    }
    let mut st = Stepper::new(f, t0, y0, *opts)?;
    let mut segments = Vec::new();
    while st.t < t_end {
        segments.push(st.advance(t_end)?);
    }
    Ok(IvpSolution::from_segments(st.dim, segments, st.y.clone(), st.accepted, st.rejected))
}

/// First-order system for an [`OscillatorSpec`]: state `[u, u']`.
pub fn oscillator_system(o: &OscillatorSpec) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |t, y, dy| {
        let (u, v) = (y[0], y[1]);
        dy[0] = v;
        dy[1] = -o.damping * v + o.vdp * (1.0 - u * u) * v
            - o.linear * u
            - o.quadratic * u * u
            - o.cubic * u * u * u
            - o.quintic * u.powi(5)
            + o.forcing * (o.forcing_freq * t).cos();
    }
}

/// Integrates the oscillator from `u(0) = amp`, `u'(0) = 0`.
pub fn integrate_oscillator(o: &OscillatorSpec, t_end: f64, opts: &OdeOptions) -> Result<IvpSolution> {
    integrate_ivp(oscillator_system(o), 0.0, &[o.amp, 0.0], t_end, opts)
}

/// Steady-state cycle measured from a long integration.
#[derive(Debug, Clone, Serialize)]
pub struct CycleMeasurement {
    /// Mean of the last five crossing intervals.
    pub period: f64,
    /// Peak |u| over the final measured cycle.
    pub amplitude: f64,
    /// Upward zero crossings discarded as transient.
    pub transients_skipped: usize,
    /// Retained upward-crossing times of `u`.
    pub crossing_times: Vec<f64>,
}

/// Measures the steady period and amplitude of an oscillator by integrating
/// past `settle_time` and locating upward zero crossings of `u` with the
/// dense interpolant. Stops once the last five crossing intervals agree to a
/// relative spread of 1e-4; gives up [`Error::NoCycle`] after 600 time units
/// beyond `settle_time`.
pub fn measure_cycle(o: &OscillatorSpec, settle_time: f64, opts: &OdeOptions) -> Result<CycleMeasurement> {
    if o.amp == 0.0 {
        return Err(Error::NoCycle { reason: "zero initial amplitude".into() });
    }
    let t_cap = settle_time + 600.0;
    let sys = oscillator_system(o);
    let mut st = Stepper::new(sys, 0.0, &[o.amp, 0.0], *opts)?;
    let mut segments: Vec<Segment> = Vec::new();
    let mut crossings: Vec<f64> = Vec::new();
    let mut transients = 0usize;

    let period = 'outer: loop {
        if st.t >= t_cap {
            return Err(Error::NoCycle {
                reason: format!("no stable period within {t_cap} time units (found {} crossings)", crossings.len()),
            });
        }
        let u_prev = st.y[0];
        let seg = st.advance(t_cap)?;
        let u_new = st.y[0];
        segments.push(seg);
        if u_prev < 0.0 && u_new >= 0.0 {
            let seg = segments.last().expect("just pushed");
            // bisect the quartic interpolant for the crossing
            let (mut a, mut b) = (0.0_f64, 1.0_f64);
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if seg.eval_theta(m, 0) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            let t_star = seg.t0 + 0.5 * (a + b) * seg.h;
            if t_star <= settle_time {
                transients += 1;
            } else {
                crossings.push(t_star);
                if crossings.len() >= 6 {
                    let last = &crossings[crossings.len() - 6..];
                    let gaps: Vec<f64> = last.windows(2).map(|w| w[1] - w[0]).collect();
                    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
                    let spread = gaps.iter().fold(0.0_f64, |m, g| m.max(*g))
                        - gaps.iter().fold(f64::INFINITY, |m, g| m.min(*g));
                    if spread < 1e-4 * mean {
                        break 'outer mean;
                    }
                }
            }
        }
    };

    // peak |u| over the final cycle, sampled densely on the stored interpolants
    let t_last = *crossings.last().expect("loop breaks only with crossings");
    let t_from = t_last - period;
    let eval_at = |t: f64| -> f64 {
        let mut lo = 0usize;
        let mut hi = segments.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if segments[mid].t_end() < t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let seg = &segments[lo];
        seg.eval_theta(((t - seg.t0) / seg.h).clamp(0.0, 1.0), 0)
    };
    let mut amplitude = 0.0_f64;
    for i in 0..=2000 {
        let t = t_from + period * i as f64 / 2000.0;
        amplitude = amplitude.max(eval_at(t).abs());
    }

    Ok(CycleMeasurement { period, amplitude, transients_skipped: transients, crossing_times: crossings })
}

/// Exact period of the conservative oscillator `u'' + a1 u + a3 u^3 + a5 u^5
/// = 0` started from `u(0) = A`, `u'(0) = 0`, reduced to a smooth quadrature:
///
/// `T = 4 * Int_0^{pi/2} dtheta / sqrt(a1 + (a3 A^2/2)(1+s^2) + (a5 A^4/3)(1+s^2+s^4))`,
/// `s = sin(theta)`.
pub fn conservative_exact_period(o: &OscillatorSpec) -> Result<f64> {
    if !o.is_conservative() || o.quadratic != 0.0 {
        return Err(Error::Unsupported {
            reason: "exact period quadrature requires an undamped, unforced, even potential".into(),
        });
    }
    let a2 = o.amp * o.amp;
    let radicand = |s2: f64| {
        o.linear + 0.5 * o.cubic * a2 * (1.0 + s2) + o.quintic * a2 * a2 / 3.0 * (1.0 + s2 + s2 * s2)
    };
    // minimum over s^2 in [0,1] is at an endpoint for these monomials
    if radicand(0.0) <= 0.0 || radicand(1.0) <= 0.0 {
        return Err(Error::NoSolution {
            detail: "amplitude outside the oscillatory range of the potential".into(),
        });
    }
    let integral = quad::integrate(
        |theta: f64| {
            let s = theta.sin();
            1.0 / radicand(s * s).sqrt()
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-13,
    )?;
    Ok(4.0 * integral)
}

// ---------------------------------------------------------------------------
// shooting solvers

fn bratu_system(lambda: f64) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |_x, y, dy| {
        dy[0] = y[1];
        dy[1] = -lambda * y[0].exp();
    }
}

/// `u(1)` of the initial-value problem `u'' = -lambda e^u`, `u(0) = 0`,
/// `u'(0) = s`.
fn bratu_end_value(lambda: f64, s: f64, opts: &OdeOptions) -> Result<f64> {
    let sol = integrate_ivp(bratu_system(lambda), 0.0, &[0.0, s], 1.0, opts)?;
    Ok(sol.y_end()[0])
}

const BRATU_SLOPE_MAX: f64 = 20.0;

/// Maximizes `s -> u(1; s)` over `[0, 20]`: coarse scan then golden-section.
fn bratu_phi_max(lambda: f64, opts: &OdeOptions) -> Result<(f64, f64)> {
    let n = 80;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=n {
        let s = BRATU_SLOPE_MAX * i as f64 / n as f64;
        let phi = bratu_end_value(lambda, s, opts)?;
        if phi > best.1 {
            best = (s, phi);
        }
    }
    let width = BRATU_SLOPE_MAX / n as f64;
    let (mut a, mut b) = ((best.0 - width).max(0.0), (best.0 + width).min(BRATU_SLOPE_MAX));
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = bratu_end_value(lambda, x1, opts)?;
    let mut f2 = bratu_end_value(lambda, x2, opts)?;
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = bratu_end_value(lambda, x2, opts)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = bratu_end_value(lambda, x1, opts)?;
        }
    }
    let s_star = 0.5 * (a + b);
    Ok((s_star, bratu_end_value(lambda, s_star, opts)?))
}

pub(crate) fn bisect_root(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let (fa, fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSolution { detail: format!("no sign change on [{a}, {b}]") });
    }
    let positive_right = fb > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == positive_right {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// All solutions of the Bratu problem `u'' + lambda e^u = 0`, `u(0) = u(1) =
/// 0`, found by shooting on `s = u'(0)` over `[0, 20]`. Returns 0, 1, or 2
/// solutions sorted by increasing initial slope (lower branch first); each
/// grid's metadata records the slope.
pub fn shoot_bratu(lambda: f64, n_points: usize) -> Result<Vec<GridFunction>> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParam { param: "lambda", reason: "must be >= 0".into() });
    }
    let opts = OdeOptions::default();
    let (s_star, phi_star) = bratu_phi_max(lambda, &opts)?;
    if phi_star < 0.0 {
        return Ok(Vec::new());
    }
    let mut slopes = Vec::new();
    let phi = |s: f64| bratu_end_value(lambda, s, &opts);
    let phi0 = phi(0.0)?;
    if phi0 == 0.0 {
        slopes.push(0.0);
    } else if phi0 < 0.0 && s_star > 0.0 {
        slopes.push(bisect_root(phi, 0.0, s_star)?);
    }
    let phi_hi = phi(BRATU_SLOPE_MAX)?;
    if phi_hi == 0.0 {
        slopes.push(BRATU_SLOPE_MAX);
    } else if phi_hi < 0.0 && s_star < BRATU_SLOPE_MAX {
        slopes.push(bisect_root(phi, s_star, BRATU_SLOPE_MAX)?);
    }
    slopes.dedup_by(|a, b| (*a - *b).abs() < 1e-8);

    let grid = linspace(0.0, 1.0, n_points);
    let mut out = Vec::new();
    for s in slopes {
        let sol = integrate_ivp(bratu_system(lambda), 0.0, &[0.0, s], 1.0, &opts)?;
        out.push(sol.to_grid(&grid, 0, GridMeta::new("bratu", "solution").with_shoot_param(s))?);
    }
    Ok(out)
}

/// Locates the fold of the Bratu problem: the largest `lambda` in `[lo, hi]`
/// that still admits a solution, bisected to the requested width.
pub fn bratu_fold_bisect(mut lo: f64, mut hi: f64, width: f64) -> Result<f64> {
    if !(lo < hi && width > 0.0) {
        return Err(Error::InvalidParam { param: "width", reason: "requires lo < hi and width > 0".into() });
    }
    let opts = OdeOptions { rtol: 1e-9, atol: 1e-11, ..OdeOptions::default() };
    let has = |lambda: f64| -> Result<bool> { Ok(bratu_phi_max(lambda, &opts)?.1 >= 0.0) };
    if !has(lo)? {
        return Err(Error::NoSolution { detail: format!("no solution even at lambda = {lo}") });
    }
    if has(hi)? {
        return Err(Error::NoSolution { detail: format!("solutions persist at lambda = {hi}") });
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if has(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn falkner_skan_system(beta: f64) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |_x, y, dy| {
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = -y[0] * y[2] - beta * (1.0 - y[1] * y[1]);
    }
}

/// `f'(eta_max) - 1` for the similarity equation shot with `f''(0) = s`;
/// `None` when the trajectory blows up before `eta_max`.
fn falkner_skan_end(beta: f64, s: f64, eta_max: f64, opts: &OdeOptions) -> Option<f64> {
    integrate_ivp(falkner_skan_system(beta), 0.0, &[0.0, 0.0, s], eta_max, opts)
        .ok()
        .map(|sol| sol.y_end()[1] - 1.0)
}

/// All shooting solutions of `f''' + f f'' + beta (1 - f'^2) = 0`,
/// `f(0) = f'(0) = 0`, `f'(eta_max) = 1`, scanning `f''(0)` over
/// `[-0.4, 2]`. Sorted by decreasing wall slope, so the physical branch
/// comes first; metadata records `f''(0)`.
pub fn shoot_falkner_skan(beta: f64, eta_max: f64, n_points: usize) -> Result<Vec<GridFunction>> {
    let opts = OdeOptions { rtol: 1e-10, atol: 1e-12, ..OdeOptions::default() };
    let (s_lo, s_hi) = (-0.4, 2.0);
    let n = 240;
    let mut prev: Option<(f64, f64)> = None;
    let mut roots = Vec::new();
    for i in 0..=n {
        let s = s_lo + (s_hi - s_lo) * i as f64 / n as f64;
        let phi = falkner_skan_end(beta, s, eta_max, &opts).filter(|v| v.is_finite());
        if let (Some((sp, fp)), Some(fc)) = (prev, phi) {
            if fp == 0.0 {
                roots.push(sp);
            } else if fp.signum() != fc.signum() {
                let root = bisect_root(
                    |x| {
                        falkner_skan_end(beta, x, eta_max, &opts).ok_or(Error::IntegrationFailure {
                            t_last: 0.0,
                            reason: format!("similarity trajectory blew up at slope {x}"),
                        })
                    },
                    sp,
                    s,
                )?;
                roots.push(root);
            }
        }
        prev = phi.map(|v| (s, v));
    }
    roots.sort_by(|a, b| b.partial_cmp(a).expect("finite slopes"));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    let grid = linspace(0.0, eta_max, n_points);
    let mut out = Vec::new();
    for s in roots {
        let sol = integrate_ivp(falkner_skan_system(beta), 0.0, &[0.0, 0.0, s], eta_max, &opts)?;
        // genuine boundary-layer solutions have decayed shear at the far
        // edge; a trajectory merely passing through f' = 1 has not
        if sol.y_end()[2].abs() > 1e-3 {
            continue;
        }
        out.push(sol.to_grid(&grid, 0, GridMeta::new("falkner_skan", "solution").with_shoot_param(s))?);
    }
    Ok(out)
}

/// Dense similarity solution for downstream evaluation (physical branch).
pub fn falkner_skan_solution(beta: f64, eta_max: f64) -> Result<IvpSolution> {
    let opts = OdeOptions { rtol: 1e-10, atol: 1e-12, ..OdeOptions::default() };
    let grids = shoot_falkner_skan(beta, eta_max, 2)?;
    let s = grids
        .first()
        .and_then(|g| g.meta().shoot_param)
        .ok_or(Error::NoSolution { detail: format!("no similarity solution for beta = {beta}") })?;
    integrate_ivp(falkner_skan_system(beta), 0.0, &[0.0, 0.0, s], eta_max, &opts)
}

/// Shooting solution of the singularly perturbed problem `eps y'' + y' + y =
/// 0`, `y(0) = alpha`, `y(1) = beta`. The problem is linear, so two trial
/// slopes and one secant step are exact.
fn shoot_singular(spec: &BvpSpec, n_points: usize) -> Result<GridFunction> {
    let eps = spec.eps;
    let sys = |_x: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -(y[1] + y[0]) / eps;
    };
    let opts = OdeOptions::default();
    let end = |s: f64| -> Result<f64> {
        Ok(integrate_ivp(sys, 0.0, &[spec.left, s], 1.0, &opts)?.y_end()[0])
    };
    let (s0, s1) = (0.0, 1.0);
    let (e0, e1) = (end(s0)?, end(s1)?);
    if (e1 - e0).abs() < 1e-300 {
        return Err(Error::NoSolution { detail: "degenerate shooting sensitivity".into() });
    }
    let s = s0 + (spec.right - e0) * (s1 - s0) / (e1 - e0);
    let sol = integrate_ivp(sys, 0.0, &[spec.left, s], 1.0, &opts)?;
    let grid = linspace(0.0, 1.0, n_points);
    sol.to_grid(&grid, 0, GridMeta::new("singular_linear", "solution").with_shoot_param(s))
}

/// Numerical reference for a two-point boundary-value problem, dispatching on
/// the kind. For the Bratu problem this is the lower branch; the similarity
/// equation is truncated at `eta_max = 10`.
pub fn shoot_bvp(spec: &BvpSpec, n_points: usize) -> Result<GridFunction> {
    if n_points < 2 {
        return Err(Error::InvalidGrid { reason: "need at least 2 output points".into() });
    }
    match spec.kind {
        BvpKind::Bratu => shoot_bratu(spec.lambda, n_points)?
            .into_iter()
            .next()
            .ok_or(Error::NoSolution {
                detail: format!("no solution at lambda = {} (beyond the fold)", spec.lambda),
            }),
        BvpKind::SingularLinear => shoot_singular(spec, n_points),
        BvpKind::FalknerSkan => shoot_falkner_skan(spec.beta_fs, 10.0, n_points)?
            .into_iter()
            .next()
            .ok_or(Error::NoSolution { detail: format!("no similarity solution for beta = {}", spec.beta_fs) }),
    }
}

/// Closed-form solution of `eps y'' + y' + y = 0`, `y(0) = alpha`,
/// `y(1) = beta`: `y = a e^{m1 x} + b e^{m2 x}` with the characteristic roots
/// computed in a cancellation-free form.
#[derive(Debug, Clone, Serialize)]
pub struct ExactSingular {
    pub m1: f64,
    pub m2: f64,
    pub a: f64,
    pub b: f64,
}

/// Builds the exact two-exponential solution (requires `0 < eps < 1/4` so the
/// roots are real and distinct).
pub fn exact_singular(eps: f64, alpha: f64, beta: f64) -> Result<ExactSingular> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::SingularParameter { what: format!("eps = {eps} outside (0, 1/4)") });
    }
    let disc = (1.0 - 4.0 * eps).sqrt();
    let m1 = -2.0 / (1.0 + disc); // slow root, near -1
    let m2 = -(1.0 + disc) / (2.0 * eps); // fast root, near -1/eps
    let (e1, e2) = (m1.exp(), m2.exp());
    let det = e1 - e2;
    if det.abs() < 1e-300 {
        return Err(Error::SingularParameter { what: "degenerate characteristic roots".into() });
    }
    let b = (alpha * e1 - beta) / det;
    let a = alpha - b;
    Ok(ExactSingular { m1, m2, a, b })
}

impl ExactSingular {
    pub fn eval(&self, x: f64) -> f64 {
        self.a * (self.m1 * x).exp() + self.b * (self.m2 * x).exp()
    }
}

impl Candidate for ExactSingular {
    fn eval(&self, x: f64) -> f64 {
        ExactSingular::eval(self, x)
    }
    fn d1(&self, x: f64) -> f64 {
        self.a * self.m1 * (self.m1 * x).exp() + self.b * self.m2 * (self.m2 * x).exp()
    }
    fn d2(&self, x: f64) -> f64 {
        self.a * self.m1 * self.m1 * (self.m1 * x).exp() + self.b * self.m2 * self.m2 * (self.m2 * x).exp()
    }
}
