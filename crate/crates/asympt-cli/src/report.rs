//! Report documents and their two renderings.
//!
//! The JSON schema is fixed: a [`Report`] always carries the keys `schema`,
//! `problem`, `params`, `method`, `order`, `result`, `oracle`, and
//! `warnings`; `result` is tagged by `kind`. CSV output is the tabular view
//! of the same run (solution samples for `solve`, one row per cell for
//! `sweep`). Both renderings are deterministic: maps are ordered, floats use
//! the shortest round-trip representation.

use serde::Serialize;
use std::collections::BTreeMap;

pub const REPORT_SCHEMA: &str = "asympt.report.v1";
pub const SWEEP_SCHEMA: &str = "asympt.sweep.v1";

/// Method-specific payload of a single run.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultBlock {
    /// Periodic expansion with a corrected frequency.
    Expansion {
        omega: f64,
        omega_squared: f64,
        /// Frequency expansion coefficients, constant term first.
        expansion: Vec<f64>,
        expansion_of: String,
        secular_condition: String,
        solution_text: String,
        solution_terms: Vec<asympt::trig::TrigTerm>,
        residual_norm: f64,
    },
    /// Self-excited steady state located by the vanishing secular coefficient.
    LimitCycle { amplitude: f64, alpha_residual: f64 },
    /// Stationary amplitudes of the one-parameter variational ansatz.
    RitzRoots { count: usize, roots: Vec<RitzRootOut> },
    /// Fixed-point iteration on an integral reformulation.
    Iteration { iterations: usize, converged: bool, midpoint_value: f64 },
    /// Inner/outer composite for the singularly perturbed problem.
    Composite { t_f: f64, doublings: u32, layer_edge: f64, sup_error: f64 },
    /// Slowly varying phase-integral approximation.
    PhaseIntegral { c_cos: f64, c_sin: f64 },
    /// Converged radial profiles of the coupled bound-state system.
    RadialProfile {
        sweeps: usize,
        picard_residual: f64,
        fd_residual_s: f64,
        fd_residual_u: f64,
        center_s: f64,
        center_u: f64,
    },
    /// Closed-form solitary wave.
    Soliton { speed: f64, depth: f64, width: f64, max_residual: f64 },
    /// Shooting solutions; one wall slope per branch.
    Shooting { slopes: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct RitzRootOut {
    pub amplitude: f64,
    pub stationarity_residual: f64,
    pub branch: String,
}

/// The oracle comparison attached to every run: one scalar quantity
/// measured both ways plus named extras.
#[derive(Debug, Clone, Serialize)]
pub struct OracleBlock {
    /// What `method_value`/`oracle_value` measure, e.g. "period".
    pub quantity: &'static str,
    pub method_value: Option<f64>,
    pub oracle_value: Option<f64>,
    /// |method - oracle| / |oracle|.
    pub rel_error: Option<f64>,
    /// Relative tolerance the reference integrator ran at.
    pub tol: f64,
    pub detail: BTreeMap<&'static str, f64>,
}

impl OracleBlock {
    pub fn compare(quantity: &'static str, method: f64, oracle: f64, tol: f64) -> Self {
        let rel = (method - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE);
        OracleBlock {
            quantity,
            method_value: Some(method),
            oracle_value: Some(oracle),
            rel_error: Some(rel),
            tol,
            detail: BTreeMap::new(),
        }
    }

    pub fn with_detail(mut self, key: &'static str, value: f64) -> Self {
        self.detail.insert(key, value);
        self
    }
}

/// One `solve` run, ready for serialization.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub problem: String,
    pub params: BTreeMap<String, f64>,
    pub method: String,
    pub order: u32,
    pub result: ResultBlock,
    pub oracle: OracleBlock,
    pub warnings: Vec<String>,
}

/// One sweep-grid cell. Failures stay in-row so the sweep table is always
/// complete and in axis order.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// Axis parameter values of this cell, in axis order.
    pub cell: BTreeMap<String, f64>,
    pub method_value: Option<f64>,
    pub oracle_value: Option<f64>,
    pub rel_error: Option<f64>,
    pub solution_count: Option<usize>,
    /// Method/oracle error message when the cell failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepAxisOut {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub problem: String,
    pub params: BTreeMap<String, f64>,
    pub method: String,
    pub order: u32,
    pub axes: Vec<SweepAxisOut>,
    pub rows: Vec<SweepRow>,
}

/// A CSV cell: numbers print with the shortest round-trip form, absent
/// values print as the empty string.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        match v {
            Some(x) => Cell::Num(x),
            None => Cell::Empty,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Text(s) => {
                if s.contains(',') || s.contains('"') || s.contains('\n') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Cell::Empty => String::new(),
        }
    }
}

/// Column-labeled table backing the CSV rendering of a run.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types always serialize");
    text.push('\n');
    text
}

/// Fixed summary columns of a sweep; the dynamic axis columns are prepended
/// by [`sweep_csv`], which owns its header strings.
pub fn sweep_table(report: &SweepReport) -> Table {
    let mut columns: Vec<&'static str> = Vec::new();
    let mut rows = Vec::new();
    for row in &report.rows {
        let mut cells: Vec<Cell> = report
            .axes
            .iter()
            .map(|a| Cell::Num(row.cell[&a.param]))
            .collect();
        cells.push(Cell::opt(row.method_value));
        cells.push(Cell::opt(row.oracle_value));
        cells.push(Cell::opt(row.rel_error));
        cells.push(match row.solution_count {
            Some(n) => Cell::Int(n),
            None => Cell::Empty,
        });
        cells.push(match &row.error {
            Some(e) => Cell::Text(e.clone()),
            None => Cell::Empty,
        });
        rows.push(cells);
    }
    columns.extend(["method_value", "oracle_value", "rel_error", "solution_count", "error"]);
    Table { columns, rows }
}

/// CSV text for a sweep: axis columns keep their parameter names.
pub fn sweep_csv(report: &SweepReport) -> String {
    let table = sweep_table(report);
    let mut header: Vec<String> = report.axes.iter().map(|a| a.param.clone()).collect();
    header.extend(table.columns.iter().map(|c| c.to_string()));
    let mut out = header.join(",");
    out.push('\n');
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
