//! Command-line orchestration: config parsing, table rendering and the
//! invariant checks behind `verify`.

mod config;
mod table1;
mod verify;

use std::fmt::Write as _;

use serde::Serialize;

pub use config::{Format, Mass, PotentialConfig, Resolved, RunConfig, StateConfig, MAX_ORDER};
pub use table1::{column_configs, run_table1, Table1, Table1Column, PRINTED_E_NUM};
pub use verify::{run_verify, SuiteReport, VerifyOptions};

use crate::analysis::{bracket_estimate, partial_sums, Bracket};
use crate::engine::energy_series;
use crate::oracle::{solve_bound_state, OracleResult};
use crate::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Numerical {
        context: String,
        #[source]
        source: Error,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{failed} verification suite(s) failed")]
    VerifyFailed { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical { source, .. } => match source {
                Error::InvalidArgument(_) | Error::InvalidState(_) => 2,
                _ => 3,
            },
            CliError::VerifyFailed { .. } => 3,
        }
    }

    pub(crate) fn numerical(context: impl Into<String>) -> impl FnOnce(Error) -> CliError {
        let context = context.into();
        move |source| CliError::Numerical { context, source }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub binding: f64,
    pub nodes: usize,
    pub small_component_nodes: usize,
    pub residual: f64,
    pub uncertainty: f64,
}

impl OracleSummary {
    fn new(r: &OracleResult, mass: f64) -> Self {
        Self {
            binding: r.binding * mass,
            nodes: r.node_count,
            small_component_nodes: r.small_node_count,
            residual: r.residual,
            uncertainty: r.uncertainty * mass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketSummary {
    pub estimate: f64,
    pub gap: f64,
    pub k_star: usize,
    pub bracketing: bool,
}

impl From<Bracket> for BracketSummary {
    fn from(b: Bracket) -> Self {
        Self {
            estimate: b.estimate,
            gap: b.gap,
            k_star: b.k_star,
            bracketing: b.bracketing,
        }
    }
}

/// Result of `series`, in the configured mass unit.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    pub config_echo: RunConfig,
    pub corrections: Vec<f64>,
    pub binding_sums: Vec<f64>,
    pub bracket: Option<BracketSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

/// Engine and oracle run in units of the mass and are scaled on output.
pub fn series_report(config: &RunConfig) -> Result<SeriesReport, CliError> {
    let r = config.resolve()?;
    let series = energy_series(&r.spec, &r.state, 1.0, r.order)
        .map_err(CliError::numerical(format!("energy series for {}", r.state)))?
        .rescaled(r.mass);
    let sums = partial_sums(&series).map_err(CliError::numerical("partial sums"))?;
    let bracket = if sums.len() >= 4 {
        Some(bracket_estimate(&sums).map_err(CliError::numerical("bracket"))?.into())
    } else {
        None
    };
    let oracle = if config.oracle {
        let o = solve_bound_state(&r.spec, &r.state, 1.0, config.oracle_tol)
            .map_err(CliError::numerical(format!("shooting solution for {}", r.state)))?;
        Some(OracleSummary::new(&o, r.mass))
    } else {
        None
    };
    Ok(SeriesReport {
        config_echo: config.clone(),
        corrections: series.corrections().to_vec(),
        binding_sums: sums.binding_sums,
        bracket,
        oracle,
    })
}

pub fn run_series(config: &RunConfig) -> Result<String, CliError> {
    let report = series_report(config)?;
    let unit = &config.mass.unit;
    let mut out = String::new();
    match config.format {
        Format::Json => {
            out = serde_json::to_string_pretty(&report).expect("report serializes");
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("k,E_k,B_k\n");
            for (k, (e, b)) in report.corrections.iter().zip(&report.binding_sums).enumerate() {
                let _ = writeln!(out, "{k},{e},{b}");
            }
        }
        Format::Table => {
            let r = config.resolve()?;
            let _ = writeln!(out, "# {}, mass {} {unit}", r.state, config.mass.value);
            let _ = writeln!(out, "{:>3}  {:>24}  {:>16}", "k", format!("E_k [{unit}]"), format!("B[k] [{unit}]"));
            for (k, (e, b)) in report.corrections.iter().zip(&report.binding_sums).enumerate() {
                let _ = writeln!(out, "{k:>3}  {e:>24.15e}  {b:>16.6}");
            }
            if let Some(b) = &report.bracket {
                let _ = writeln!(
                    out,
                    "estimate {:.6} {unit}, gap {:.2e} at k = {}{}",
                    b.estimate,
                    b.gap,
                    b.k_star,
                    if b.bracketing { "" } else { " (partial sums do not bracket)" }
                );
            }
            if let Some(o) = &report.oracle {
                let _ = writeln!(out, "shooting {:.6} {unit}, G nodes {}, residual {:.1e}", o.binding, o.nodes, o.residual);
            }
        }
    }
    Ok(out)
}

pub fn run_oracle(config: &RunConfig, tol: Option<f64>) -> Result<String, CliError> {
    let r = config.resolve()?;
    let tol = tol.unwrap_or(config.oracle_tol);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Config(format!("at `tol`: must be positive, got {tol}")));
    }
    let o = solve_bound_state(&r.spec, &r.state, 1.0, tol)
        .map_err(CliError::numerical(format!("shooting solution for {}", r.state)))?;
    let summary = OracleSummary::new(&o, r.mass);
    let unit = &config.mass.unit;
    Ok(match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
            s.push('\n');
            s
        }
        Format::Csv => format!(
            "binding,nodes,small_component_nodes,residual,uncertainty\n{},{},{},{},{}\n",
            summary.binding, summary.nodes, summary.small_component_nodes, summary.residual, summary.uncertainty
        ),
        Format::Table => format!(
            "# {}, mass {} {unit}\nbinding {:.9} {unit}\nG nodes {}, F nodes {}\nresidual {:.2e}, bracket width {:.2e} {unit}, {} iterations\n",
            r.state,
            config.mass.value,
            summary.binding,
            summary.nodes,
            summary.small_component_nodes,
            summary.residual,
            summary.uncertainty,
            o.iterations
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(potential: &str, order: usize, format: &str) -> RunConfig {
        RunConfig::from_json(&format!(
            r#"{{"potential": {potential}, "state": {{"s": 1, "l": 1, "n_r": 1}}, "order": {order}, "format": "{format}"}}"#
        ))
        .unwrap()
    }

    const VECTOR: &str = r#"{"kind": "charge-recipe", "vector_share": 1.0, "scalar_share": 0.0}"#;

    #[test]
    fn coulomb_rows_vanish() {
        let c = config(r#"{"kind": "coulomb", "vector_strength": 0.54}"#, 10, "json");
        let r = series_report(&c).unwrap();
        for e in &r.corrections[1..] {
            assert!(e.abs() <= 1e-10 * 511.0034);
        }
        let b = r.bracket.unwrap();
        assert_eq!(b.gap, 0.0);
    }

    #[test]
    fn order_zero_is_single_row() {
        let c = config(VECTOR, 0, "csv");
        let out = run_series(&c).unwrap();
        assert_eq!(out.lines().count(), 2);
        let b: f64 = out.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
        assert!((b - 20.644616).abs() < 1e-3);
    }

    #[test]
    fn vector_column_prefix() {
        let c = config(VECTOR, 4, "json");
        let r = series_report(&c).unwrap();
        let printed = [20.644616, 11.091653, 12.415123, 12.264120, 12.308677];
        for (b, p) in r.binding_sums.iter().zip(printed) {
            assert!((b - p).abs() < 2e-3, "{b} vs {p}");
        }
    }

    #[test]
    fn output_is_deterministic() {
        for f in ["table", "csv", "json"] {
            let c = config(VECTOR, 8, f);
            assert_eq!(run_series(&c).unwrap(), run_series(&c).unwrap());
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        let e = CliError::Numerical {
            context: "c".into(),
            source: Error::InvalidArgument("x".into()),
        };
        assert_eq!(e.exit_code(), 2);
        let e = CliError::Numerical {
            context: "c".into(),
            source: Error::InternalConsistency {
                order: 3,
                what: "dual path",
                residual: 1.0,
            },
        };
        assert_eq!(e.exit_code(), 3);
        assert_eq!(CliError::VerifyFailed { failed: 1 }.exit_code(), 3);
    }
}
