//! Closed algebra of trigonometric polynomials in a single base frequency.
//!
//! A [`TrigPoly`] is a finite sum of terms `c * t^k * cos(n*w*t)` or
//! `c * t^k * sin(n*w*t)` over one base frequency `w`. The algebra is closed
//! under addition, multiplication (product-to-sum rewriting), differentiation,
//! and integration against the oscillator sine kernel
//!
//! ```text
//! J[f](t) = (1/w) * integral_0^t sin(w*(tau - t)) f(tau) dtau
//! ```
//!
//! which is the particular solution of `g'' + w^2 g = -f` with
//! `g(0) = g'(0) = 0`. Resonant inputs (harmonic 1) produce secular
//! `t*sin`/`t*cos` terms; [`TrigPoly::detect_secular`] reports them.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficients whose magnitude falls below `PRUNE_REL` times the largest
/// coefficient magnitude in the polynomial are dropped during normalization.
pub const PRUNE_REL: f64 = 1e-14;

/// Which trigonometric factor a term carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Cos,
    Sin,
}

/// One term `coeff * t^t_power * {cos,sin}(harmonic * w * t)`.
///
/// `harmonic == 0` with `Sin` is identically zero and never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigTerm {
    pub coeff: f64,
    pub t_power: u32,
    pub harmonic: u32,
    pub kind: TrigKind,
}

impl TrigTerm {
    pub fn new(coeff: f64, t_power: u32, harmonic: u32, kind: TrigKind) -> Self {
        TrigTerm { coeff, t_power, harmonic, kind }
    }

    fn key(&self) -> (u32, u32, TrigKind) {
        (self.t_power, self.harmonic, self.kind)
    }

    fn eval(&self, omega: f64, t: f64) -> f64 {
        let phase = self.harmonic as f64 * omega * t;
        let trig = match self.kind {
            TrigKind::Cos => phase.cos(),
            TrigKind::Sin => phase.sin(),
        };
        self.coeff * t.powi(self.t_power as i32) * trig
    }
}

/// Trigonometric polynomial over a fixed base frequency.
///
/// Terms are kept canonically sorted by `(t_power, harmonic, kind)` with like
/// terms merged and negligible coefficients pruned, so structural equality of
/// normalized polynomials is meaningful.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigPoly {
    omega: f64,
    terms: Vec<TrigTerm>,
}

impl TrigPoly {
    /// The zero polynomial at base frequency `omega`.
    pub fn zero(omega: f64) -> Result<Self> {
        Self::from_terms(omega, Vec::new())
    }

    /// The constant polynomial `c`.
    pub fn constant(omega: f64, c: f64) -> Result<Self> {
        Self::from_terms(omega, vec![TrigTerm::new(c, 0, 0, TrigKind::Cos)])
    }

    /// `coeff * cos(harmonic * w * t)`.
    pub fn cos_term(omega: f64, harmonic: u32, coeff: f64) -> Result<Self> {
        Self::from_terms(omega, vec![TrigTerm::new(coeff, 0, harmonic, TrigKind::Cos)])
    }

    /// `coeff * sin(harmonic * w * t)`.
    pub fn sin_term(omega: f64, harmonic: u32, coeff: f64) -> Result<Self> {
        Self::from_terms(omega, vec![TrigTerm::new(coeff, 0, harmonic, TrigKind::Sin)])
    }

    /// Builds a normalized polynomial from raw terms.
    ///
    /// Rejects non-finite coefficients and non-positive base frequencies;
    /// merges like terms, removes `sin(0)` terms, and prunes coefficients
    /// below [`PRUNE_REL`] relative to the largest magnitude.
    pub fn from_terms(omega: f64, terms: Vec<TrigTerm>) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::NonFinite { what: "base frequency" });
        }
        for term in &terms {
            if !term.coeff.is_finite() {
                return Err(Error::NonFinite { what: "term coefficient" });
            }
        }
        Ok(TrigPoly { omega, terms: Self::normalize(terms) })
    }

    fn normalize(terms: Vec<TrigTerm>) -> Vec<TrigTerm> {
        let mut merged: BTreeMap<(u32, u32, TrigKind), f64> = BTreeMap::new();
        for term in terms {
            if term.harmonic == 0 && term.kind == TrigKind::Sin {
                continue; // sin(0) == 0
            }
            *merged.entry(term.key()).or_insert(0.0) += term.coeff;
        }
        let max_abs = merged.values().fold(0.0_f64, |m, c| m.max(c.abs()));
        if max_abs == 0.0 {
            return Vec::new();
        }
        merged
            .into_iter()
            .filter(|(_, c)| c.abs() >= PRUNE_REL * max_abs)
            .map(|((t_power, harmonic, kind), coeff)| TrigTerm { coeff, t_power, harmonic, kind })
            .collect()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same coefficients reinterpreted over a new base frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::from_terms(omega, self.terms.clone())
    }

    /// Coefficient of the term `(t_power, harmonic, kind)`, or zero.
    pub fn coefficient(&self, t_power: u32, harmonic: u32, kind: TrigKind) -> f64 {
        self.terms
            .iter()
            .find(|t| t.key() == (t_power, harmonic, kind))
            .map_or(0.0, |t| t.coeff)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0_f64, |m, t| m.max(t.coeff.abs()))
    }

    /// Pointwise value at time `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(self.omega, t)).sum()
    }

    fn check_same_omega(&self, other: &Self) -> Result<()> {
        if self.omega != other.omega {
            return Err(Error::FrequencyMismatch { left: self.omega, right: other.omega });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_omega(other)?;
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_terms(self.omega, terms)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, factor: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| TrigTerm { coeff: t.coeff * factor, ..*t })
            .collect();
        TrigPoly { omega: self.omega, terms: Self::normalize(terms) }
    }

    /// Product with full product-to-sum rewriting; the result stays inside
    /// the algebra (no nested products survive).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_omega(other)?;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len() * 2);
        for a in &self.terms {
            for b in &other.terms {
                let c = 0.5 * a.coeff * b.coeff;
                let p = a.t_power + b.t_power;
                let sum = a.harmonic + b.harmonic;
                let diff = a.harmonic as i64 - b.harmonic as i64;
                let diff_abs = diff.unsigned_abs() as u32;
                match (a.kind, b.kind) {
                    // cos A cos B = (cos(A-B) + cos(A+B)) / 2
                    (TrigKind::Cos, TrigKind::Cos) => {
                        out.push(TrigTerm::new(c, p, diff_abs, TrigKind::Cos));
                        out.push(TrigTerm::new(c, p, sum, TrigKind::Cos));
                    }
                    // sin A sin B = (cos(A-B) - cos(A+B)) / 2
                    (TrigKind::Sin, TrigKind::Sin) => {
                        out.push(TrigTerm::new(c, p, diff_abs, TrigKind::Cos));
                        out.push(TrigTerm::new(-c, p, sum, TrigKind::Cos));
                    }
                    // sin A cos B = (sin(A+B) + sin(A-B)) / 2
                    (TrigKind::Sin, TrigKind::Cos) => {
                        out.push(TrigTerm::new(c, p, sum, TrigKind::Sin));
                        if diff != 0 {
                            let sign = if diff > 0 { 1.0 } else { -1.0 };
                            out.push(TrigTerm::new(sign * c, p, diff_abs, TrigKind::Sin));
                        }
                    }
                    // cos A sin B = (sin(A+B) - sin(A-B)) / 2
                    (TrigKind::Cos, TrigKind::Sin) => {
                        out.push(TrigTerm::new(c, p, sum, TrigKind::Sin));
                        if diff != 0 {
                            let sign = if diff > 0 { -1.0 } else { 1.0 };
                            out.push(TrigTerm::new(sign * c, p, diff_abs, TrigKind::Sin));
                        }
                    }
                }
            }
        }
        Self::from_terms(self.omega, out)
    }

    /// Integer power via repeated multiplication.
    pub fn powi(&self, exp: u32) -> Result<Self> {
        let mut acc = Self::constant(self.omega, 1.0)?;
        for _ in 0..exp {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * 2);
        for term in &self.terms {
            // product rule on t^k
            if term.t_power >= 1 {
                out.push(TrigTerm::new(
                    term.coeff * term.t_power as f64,
                    term.t_power - 1,
                    term.harmonic,
                    term.kind,
                ));
            }
            // chain rule on the trig factor
            if term.harmonic >= 1 {
                let scale = term.harmonic as f64 * self.omega;
                match term.kind {
                    TrigKind::Cos => out.push(TrigTerm::new(
                        -term.coeff * scale,
                        term.t_power,
                        term.harmonic,
                        TrigKind::Sin,
                    )),
                    TrigKind::Sin => out.push(TrigTerm::new(
                        term.coeff * scale,
                        term.t_power,
                        term.harmonic,
                        TrigKind::Cos,
                    )),
                }
            }
        }
        TrigPoly { omega: self.omega, terms: Self::normalize(out) }
    }

    /// Term-wise derivative of the given order (product rule included).
    pub fn differentiate(&self, order: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..order {
            out = out.derivative();
        }
        out
    }

    /// Integral against the oscillator sine kernel:
    /// `J[f](t) = (1/w) * integral_0^t sin(w*(tau - t)) f(tau) dtau`.
    ///
    /// Closed forms per `(harmonic, kind)`; the resonant harmonic 1 produces
    /// secular `t*sin`/`t*cos` output. Inputs already carrying `t^k` factors
    /// (`k >= 1`) are outside the table and rejected.
    pub fn integrate_sine_kernel(&self) -> Result<Self> {
        if let Some(term) = self.terms.iter().find(|t| t.t_power >= 1) {
            return Err(Error::SecularInput { t_power: term.t_power });
        }
        let w = self.omega;
        let w2 = w * w;
        let mut out = Vec::with_capacity(self.terms.len() * 2);
        for term in &self.terms {
            let c = term.coeff;
            let n = term.harmonic;
            match (n, term.kind) {
                // g'' + w^2 g = -c  =>  g = (c/w^2)(cos(wt) - 1)
                (0, TrigKind::Cos) => {
                    out.push(TrigTerm::new(c / w2, 0, 1, TrigKind::Cos));
                    out.push(TrigTerm::new(-c / w2, 0, 0, TrigKind::Cos));
                }
                (0, TrigKind::Sin) => unreachable!("sin(0) terms are normalized away"),
                // resonant: g = -(c/(2w)) t sin(wt)
                (1, TrigKind::Cos) => {
                    out.push(TrigTerm::new(-c / (2.0 * w), 1, 1, TrigKind::Sin));
                }
                // resonant: g = (c/(2w)) t cos(wt) - (c/(2w^2)) sin(wt)
                (1, TrigKind::Sin) => {
                    out.push(TrigTerm::new(c / (2.0 * w), 1, 1, TrigKind::Cos));
                    out.push(TrigTerm::new(-c / (2.0 * w2), 0, 1, TrigKind::Sin));
                }
                // g = c/((n^2-1)w^2) (cos(nwt) - cos(wt))
                (n, TrigKind::Cos) => {
                    let k = c / ((n * n - 1) as f64 * w2);
                    out.push(TrigTerm::new(k, 0, n, TrigKind::Cos));
                    out.push(TrigTerm::new(-k, 0, 1, TrigKind::Cos));
                }
                // g = c/((n^2-1)w^2) (sin(nwt) - n sin(wt))
                (n, TrigKind::Sin) => {
                    let k = c / ((n * n - 1) as f64 * w2);
                    out.push(TrigTerm::new(k, 0, n, TrigKind::Sin));
                    out.push(TrigTerm::new(-k * n as f64, 0, 1, TrigKind::Sin));
                }
            }
        }
        Self::from_terms(w, out)
    }

    /// Terms carrying a positive power of `t` (secular growth).
    pub fn detect_secular(&self) -> Vec<TrigTerm> {
        self.terms.iter().filter(|t| t.t_power >= 1).copied().collect()
    }

    pub fn is_secular_free(&self) -> bool {
        self.terms.iter().all(|t| t.t_power == 0)
    }

    /// Copy with the pure harmonic-1 terms (kernel-resonant inputs) removed.
    pub fn without_resonant(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| !(t.t_power == 0 && t.harmonic == 1))
            .copied()
            .collect();
        TrigPoly { omega: self.omega, terms: Self::normalize(terms) }
    }
}

impl fmt::Display for TrigPoly {
    /// Serializes as `c * t^k * cos(n*w*t)` terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|term| {
                let mut s = format!("{}", term.coeff);
                match term.t_power {
                    0 => {}
                    1 => s.push_str(" * t"),
                    k => s.push_str(&format!(" * t^{k}")),
                }
                if term.harmonic > 0 {
                    let name = match term.kind {
                        TrigKind::Cos => "cos",
                        TrigKind::Sin => "sin",
                    };
                    if term.harmonic == 1 {
                        s.push_str(&format!(" * {name}(w*t)"));
                    } else {
                        s.push_str(&format!(" * {name}({}*w*t)", term.harmonic));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cos1(omega: f64, c: f64) -> TrigPoly {
        TrigPoly::cos_term(omega, 1, c).unwrap()
    }

    #[test]
    fn cos_squared_rewrites_to_mean_plus_second_harmonic() {
        let p = cos1(1.0, 1.0);
        let sq = p.multiply(&p).unwrap();
        assert_eq!(sq.terms().len(), 2);
        assert_relative_eq!(sq.coefficient(0, 0, TrigKind::Cos), 0.5);
        assert_relative_eq!(sq.coefficient(0, 2, TrigKind::Cos), 0.5);
    }

    #[test]
    fn sin_squared_rewrites_to_mean_minus_second_harmonic() {
        let p = TrigPoly::sin_term(2.0, 1, 1.0).unwrap();
        let sq = p.multiply(&p).unwrap();
        assert_relative_eq!(sq.coefficient(0, 0, TrigKind::Cos), 0.5);
        assert_relative_eq!(sq.coefficient(0, 2, TrigKind::Cos), -0.5);
    }

    #[test]
    fn sin_times_cos_is_half_second_harmonic_sine() {
        let s = TrigPoly::sin_term(1.0, 1, 1.0).unwrap();
        let c = cos1(1.0, 1.0);
        let prod = s.multiply(&c).unwrap();
        assert_eq!(prod.terms().len(), 1);
        assert_relative_eq!(prod.coefficient(0, 2, TrigKind::Sin), 0.5);
    }

    #[test]
    fn cube_of_cosine_splits_into_first_and_third_harmonics() {
        let a = 0.7;
        let p = cos1(1.3, a);
        let cube = p.powi(3).unwrap();
        assert_relative_eq!(cube.coefficient(0, 1, TrigKind::Cos), 0.75 * a * a * a, epsilon = 1e-15);
        assert_relative_eq!(cube.coefficient(0, 3, TrigKind::Cos), 0.25 * a * a * a, epsilon = 1e-15);
        assert_eq!(cube.terms().len(), 2);
    }

    #[test]
    fn fifth_power_of_cosine_has_binomial_harmonic_weights() {
        let a = 1.1;
        let p = cos1(0.9, a);
        let fifth = p.powi(5).unwrap();
        let a5 = a.powi(5);
        assert_relative_eq!(fifth.coefficient(0, 1, TrigKind::Cos), 10.0 / 16.0 * a5, epsilon = 1e-12);
        assert_relative_eq!(fifth.coefficient(0, 3, TrigKind::Cos), 5.0 / 16.0 * a5, epsilon = 1e-12);
        assert_relative_eq!(fifth.coefficient(0, 5, TrigKind::Cos), 1.0 / 16.0 * a5, epsilon = 1e-12);
    }

    #[test]
    fn multiply_is_commutative() {
        let a = TrigPoly::from_terms(
            1.7,
            vec![
                TrigTerm::new(0.3, 0, 0, TrigKind::Cos),
                TrigTerm::new(-1.2, 0, 2, TrigKind::Sin),
                TrigTerm::new(0.8, 0, 3, TrigKind::Cos),
            ],
        )
        .unwrap();
        let b = TrigPoly::from_terms(
            1.7,
            vec![TrigTerm::new(2.0, 0, 1, TrigKind::Cos), TrigTerm::new(0.5, 0, 4, TrigKind::Sin)],
        )
        .unwrap();
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        for t in ab.terms() {
            assert_relative_eq!(t.coeff, ba.coefficient(t.t_power, t.harmonic, t.kind), epsilon = 1e-14);
        }
    }

    #[test]
    fn mismatched_frequencies_are_rejected() {
        let a = cos1(1.0, 1.0);
        let b = cos1(2.0, 1.0);
        assert!(matches!(a.multiply(&b), Err(Error::FrequencyMismatch { .. })));
        assert!(matches!(a.add(&b), Err(Error::FrequencyMismatch { .. })));
    }

    #[test]
    fn derivative_applies_product_rule_to_secular_terms() {
        // d/dt [ t sin(wt) ] = sin(wt) + wt cos(wt)
        let w = 1.4;
        let p = TrigPoly::from_terms(w, vec![TrigTerm::new(1.0, 1, 1, TrigKind::Sin)]).unwrap();
        let d = p.differentiate(1);
        assert_relative_eq!(d.coefficient(0, 1, TrigKind::Sin), 1.0);
        assert_relative_eq!(d.coefficient(1, 1, TrigKind::Cos), w);
    }

    #[test]
    fn second_derivative_of_cosine_scales_by_harmonic_squared() {
        let w = 0.8;
        let p = TrigPoly::cos_term(w, 3, 2.0).unwrap();
        let dd = p.differentiate(2);
        assert_relative_eq!(dd.coefficient(0, 3, TrigKind::Cos), -2.0 * (3.0 * w) * (3.0 * w));
        assert_eq!(dd.terms().len(), 1);
    }

    #[test]
    fn kernel_on_third_harmonic_matches_closed_form() {
        // J[c cos(3wt)] = c/(8w^2) (cos(3wt) - cos(wt))
        let w = 1.2;
        let c = 0.4;
        let f = TrigPoly::cos_term(w, 3, c).unwrap();
        let g = f.integrate_sine_kernel().unwrap();
        let k = c / (8.0 * w * w);
        assert_relative_eq!(g.coefficient(0, 3, TrigKind::Cos), k, epsilon = 1e-15);
        assert_relative_eq!(g.coefficient(0, 1, TrigKind::Cos), -k, epsilon = 1e-15);
        assert_eq!(g.terms().len(), 2);
    }

    #[test]
    fn kernel_on_resonant_cosine_is_secular() {
        // J[cos(wt)] = -(t/(2w)) sin(wt)
        let w = 2.0;
        let f = cos1(w, 1.0);
        let g = f.integrate_sine_kernel().unwrap();
        assert_eq!(g.terms().len(), 1);
        assert_relative_eq!(g.coefficient(1, 1, TrigKind::Sin), -1.0 / (2.0 * w));
        assert_eq!(g.detect_secular().len(), 1);
        assert!(!g.is_secular_free());
    }

    #[test]
    fn kernel_on_resonant_sine_mixes_secular_cosine_and_plain_sine() {
        let w = 1.5;
        let c = 3.0;
        let f = TrigPoly::sin_term(w, 1, c).unwrap();
        let g = f.integrate_sine_kernel().unwrap();
        assert_relative_eq!(g.coefficient(1, 1, TrigKind::Cos), c / (2.0 * w));
        assert_relative_eq!(g.coefficient(0, 1, TrigKind::Sin), -c / (2.0 * w * w));
    }

    #[test]
    fn kernel_on_constant_meets_zero_initial_conditions() {
        let w = 0.9;
        let f = TrigPoly::constant(w, 2.0).unwrap();
        let g = f.integrate_sine_kernel().unwrap();
        assert_relative_eq!(g.eval(0.0), 0.0, epsilon = 1e-15);
        // g = (c/w^2)(cos wt - 1)
        assert_relative_eq!(g.coefficient(0, 1, TrigKind::Cos), 2.0 / (w * w));
        assert_relative_eq!(g.coefficient(0, 0, TrigKind::Cos), -2.0 / (w * w));
    }

    #[test]
    fn kernel_rejects_secular_input() {
        let w = 1.0;
        let f = TrigPoly::from_terms(w, vec![TrigTerm::new(1.0, 1, 1, TrigKind::Sin)]).unwrap();
        assert!(matches!(f.integrate_sine_kernel(), Err(Error::SecularInput { t_power: 1 })));
    }

    #[test]
    fn normalization_merges_prunes_and_drops_zero_sine() {
        let p = TrigPoly::from_terms(
            1.0,
            vec![
                TrigTerm::new(1.0, 0, 2, TrigKind::Cos),
                TrigTerm::new(2.0, 0, 2, TrigKind::Cos),
                TrigTerm::new(5.0, 0, 0, TrigKind::Sin), // sin(0): dropped
                TrigTerm::new(1e-20, 0, 7, TrigKind::Cos), // below relative prune
            ],
        )
        .unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_relative_eq!(p.coefficient(0, 2, TrigKind::Cos), 3.0);
    }

    #[test]
    fn normalization_is_idempotent() {
        let p = TrigPoly::from_terms(
            2.5,
            vec![
                TrigTerm::new(0.25, 1, 1, TrigKind::Sin),
                TrigTerm::new(-0.5, 0, 3, TrigKind::Cos),
                TrigTerm::new(1.0, 0, 1, TrigKind::Cos),
            ],
        )
        .unwrap();
        let again = TrigPoly::from_terms(p.omega(), p.terms().to_vec()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn non_finite_inputs_are_rejected() {
        assert!(TrigPoly::cos_term(1.0, 1, f64::NAN).is_err());
        assert!(TrigPoly::cos_term(0.0, 1, 1.0).is_err());
        assert!(TrigPoly::cos_term(-1.0, 1, 1.0).is_err());
    }

    #[test]
    fn eval_matches_direct_summation() {
        let w = 1.7;
        let p = TrigPoly::from_terms(
            w,
            vec![
                TrigTerm::new(0.5, 0, 0, TrigKind::Cos),
                TrigTerm::new(1.25, 0, 2, TrigKind::Sin),
                TrigTerm::new(-0.75, 2, 1, TrigKind::Cos),
            ],
        )
        .unwrap();
        let t = 0.83;
        let expect = 0.5 + 1.25 * (2.0 * w * t).sin() - 0.75 * t * t * (w * t).cos();
        assert_relative_eq!(p.eval(t), expect, epsilon = 1e-14);
    }

    #[test]
    fn display_uses_plus_joined_product_form() {
        let p = TrigPoly::from_terms(
            1.0,
            vec![
                TrigTerm::new(1.5, 0, 0, TrigKind::Cos),
                TrigTerm::new(-0.25, 1, 1, TrigKind::Sin),
                TrigTerm::new(2.0, 0, 3, TrigKind::Cos),
            ],
        )
        .unwrap();
        assert_eq!(format!("{p}"), "1.5 + 2 * cos(3*w*t) + -0.25 * t * sin(w*t)");
        assert_eq!(format!("{}", TrigPoly::zero(1.0).unwrap()), "0");
    }

    #[test]
    fn without_resonant_strips_only_pure_first_harmonic() {
        let p = TrigPoly::from_terms(
            1.0,
            vec![
                TrigTerm::new(1.0, 0, 1, TrigKind::Cos),
                TrigTerm::new(2.0, 0, 1, TrigKind::Sin),
                TrigTerm::new(3.0, 0, 3, TrigKind::Cos),
                TrigTerm::new(4.0, 1, 1, TrigKind::Sin),
            ],
        )
        .unwrap();
        let stripped = p.without_resonant();
        assert_relative_eq!(stripped.coefficient(0, 1, TrigKind::Cos), 0.0);
        assert_relative_eq!(stripped.coefficient(0, 1, TrigKind::Sin), 0.0);
        assert_relative_eq!(stripped.coefficient(0, 3, TrigKind::Cos), 3.0);
        assert_relative_eq!(stripped.coefficient(1, 1, TrigKind::Sin), 4.0);
    }
}
