//! Run configuration: the merged view of config-file values and command-line
//! flags that the executors consume.
//!
//! The config file is flat `key = value` text with optional `[problem]`,
//! `[method]`, and `[sweep]` sections. Command-line flags always override
//! file values; the file named by the `ASYMPT_CONFIG` environment variable
//! is loaded first when the variable is set.

use asympt::problems::ParamMap;
use asympt::{Error, Result};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidParam {
                param: "format",
                reason: format!("expected 'json' or 'csv', got '{other}'"),
            }),
        }
    }
}

/// One sweep dimension: `steps` evenly spaced values of `param` on
/// `[lo, hi]` (a single step collapses to the point `lo`).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepAxis {
    /// Parses the `param=lo:hi:steps` flag syntax.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidParam {
            param: "axis",
            reason: format!("{reason} (expected param=lo:hi:steps, got '{text}')"),
        };
        let (param, range) = text.split_once('=').ok_or_else(|| bad("missing '='"))?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range needs three ':'-separated fields"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = parts[1].parse().map_err(|_| bad("hi is not a number"))?;
        let steps: usize = parts[2].parse().map_err(|_| bad("steps is not an integer"))?;
        let axis = SweepAxis { param: param.trim().to_string(), lo, hi, steps };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.param.is_empty() {
            return Err(Error::InvalidParam { param: "axis", reason: "empty parameter name".into() });
        }
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::NonFinite { what: "sweep bound" });
        }
        if self.lo > self.hi {
            return Err(Error::InvalidParam {
                param: "axis",
                reason: format!("lo {} exceeds hi {}", self.lo, self.hi),
            });
        }
        if self.steps == 0 {
            return Err(Error::InvalidParam { param: "axis", reason: "steps must be >= 1".into() });
        }
        Ok(())
    }

    /// Grid values in ascending order; `steps == 1` yields just `lo`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.lo + h * i as f64).collect()
    }
}

/// Everything one invocation needs: problem, method, tolerances, output
/// disposition, and (for sweeps) the axes.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: String,
    pub params: BTreeMap<String, f64>,
    /// `None` selects the problem's default method.
    pub method: Option<String>,
    /// `None` selects the method's default order.
    pub order: Option<u32>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// Upper bound on concurrent sweep cells.
    pub jobs: usize,
    /// Relative tolerance handed to the numerical reference integrator.
    pub tol: f64,
    /// When set, an oracle relative error above this is a distinct failure.
    pub max_error: Option<f64>,
    pub axes: Vec<SweepAxis>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            problem: String::new(),
            params: BTreeMap::new(),
            method: None,
            order: None,
            format: OutputFormat::Json,
            out: None,
            jobs: 4,
            tol: 1e-8,
            max_error: None,
            axes: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn param_map(&self) -> ParamMap {
        self.params.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.problem.is_empty() {
            return Err(Error::InvalidParam {
                param: "problem",
                reason: "no problem selected (use --problem or a config file)".into(),
            });
        }
        if self.jobs == 0 {
            return Err(Error::InvalidParam { param: "jobs", reason: "must be >= 1".into() });
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParam { param: "tol", reason: "must be positive".into() });
        }
        if let Some(m) = self.max_error {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::InvalidParam { param: "max_error", reason: "must be positive".into() });
            }
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        Ok(())
    }
}

/// Applies `key = value` from a config-file section outside `[problem]`.
fn apply_top_level(cfg: &mut RunConfig, key: &str, value: &str, line: usize) -> Result<()> {
    let bad = |reason: String| Error::Config { line, reason };
    match key {
        "format" => cfg.format = value.parse()
            .map_err(|e: Error| bad(e.to_string()))?,
        "out" => cfg.out = Some(PathBuf::from(value)),
        "jobs" => {
            cfg.jobs = value.parse().map_err(|_| bad(format!("jobs is not an integer: '{value}'")))?
        }
        "tol" => cfg.tol = parse_number(value).ok_or_else(|| bad(format!("tol is not a number: '{value}'")))?,
        "max_error" => {
            cfg.max_error =
                Some(parse_number(value).ok_or_else(|| bad(format!("max_error is not a number: '{value}'")))?)
        }
        other => return Err(bad(format!("unknown key '{other}'"))),
    }
    Ok(())
}

fn parse_number(value: &str) -> Option<f64> {
    value.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses the flat config-file format into a [`RunConfig`] starting from the
/// defaults. Unknown keys are errors so typos surface immediately.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut section = "";
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.trim();
        if stripped.is_empty() || stripped.starts_with('#') {
            continue;
        }
        if let Some(name) = stripped.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            // sections may repeat; keys merge in file order
            section = match name.trim() {
                "problem" => "problem",
                "method" => "method",
                "sweep" => "sweep",
                other => {
                    return Err(Error::Config { line, reason: format!("unknown section '[{other}]'") })
                }
            };
            continue;
        }
        let (key, value) = stripped.split_once('=').ok_or_else(|| Error::Config {
            line,
            reason: format!("expected 'key = value', got '{stripped}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config { line, reason: "empty key or value".into() });
        }
        match section {
            "problem" => {
                if key == "name" {
                    cfg.problem = value.to_string();
                } else {
                    let v = parse_number(value).ok_or_else(|| Error::Config {
                        line,
                        reason: format!("parameter '{key}' is not a finite number: '{value}'"),
                    })?;
                    cfg.params.insert(key.to_string(), v);
                }
            }
            "method" => match key {
                "name" => cfg.method = Some(value.to_string()),
                "order" => {
                    cfg.order = Some(value.parse().map_err(|_| Error::Config {
                        line,
                        reason: format!("order is not an integer: '{value}'"),
                    })?)
                }
                other => {
                    return Err(Error::Config {
                        line,
                        reason: format!("unknown key '{other}' in [method]"),
                    })
                }
            },
            "sweep" => match key {
                "axis" | "axis2" => {
                    let axis = SweepAxis::parse(value)
                        .map_err(|e| Error::Config { line, reason: e.to_string() })?;
                    cfg.axes.push(axis);
                }
                other => {
                    return Err(Error::Config {
                        line,
                        reason: format!("unknown key '{other}' in [sweep]"),
                    })
                }
            },
            _ => apply_top_level(&mut cfg, key, value, line)?,
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parses_and_generates_grid() {
        let axis = SweepAxis::parse("eps=0.01:0.3:30").unwrap();
        assert_eq!(axis.param, "eps");
        let v = axis.values();
        assert_eq!(v.len(), 30);
        assert_eq!(v[0], 0.01);
        assert!((v[29] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn single_step_axis_is_a_point() {
        let axis = SweepAxis::parse("amp=1.5:9.0:1").unwrap();
        assert_eq!(axis.values(), vec![1.5]);
    }

    #[test]
    fn malformed_axes_are_rejected() {
        assert!(SweepAxis::parse("eps0.01:0.3:30").is_err());
        assert!(SweepAxis::parse("eps=0.3:0.1:5").is_err());
        assert!(SweepAxis::parse("eps=0.1:0.3:0").is_err());
        assert!(SweepAxis::parse("eps=a:0.3:5").is_err());
    }

    #[test]
    fn config_file_round_trips_all_sections() {
        let text = "\
# demo
format = csv
jobs = 2
tol = 1e-9

[problem]
name = duffing_cubic
eps = 0.1
amp = 1.0

[method]
name = vim
order = 2

[sweep]
axis = eps=0.01:0.3:10
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.jobs, 2);
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.problem, "duffing_cubic");
        assert_eq!(cfg.params["eps"], 0.1);
        assert_eq!(cfg.method.as_deref(), Some("vim"));
        assert_eq!(cfg.order, Some(2));
        assert_eq!(cfg.axes.len(), 1);
    }

    #[test]
    fn unknown_keys_name_their_line() {
        let err = parse_config("bogus = 1\n").unwrap_err();
        match err {
            Error::Config { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_config("[nope]\n").is_err());
        assert!(parse_config("[method]\nweight = 2\n").is_err());
    }

    #[test]
    fn validation_catches_missing_problem_and_bad_jobs() {
        let cfg = RunConfig::default();
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { problem: "bratu".into(), jobs: 0, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
