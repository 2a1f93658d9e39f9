use std::fmt::Write as _;

use serde::Serialize;

use super::config::{PotentialConfig, RunConfig, StateConfig};
use super::{BracketSummary, CliError, OracleSummary};
use crate::analysis::{bracket_estimate, partial_sums};
use crate::engine::energy_series;
use crate::oracle::solve_bound_state;
use crate::states::QuantumNumbers;

/// Shooting binding energies printed under the table, keV, in column order.
pub const PRINTED_E_NUM: [f64; 6] = [12.297609, 8.852592, 11.724567, 12.543990, 9.081723, 11.881875];

const ORACLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Table1Column {
    pub label: String,
    pub state: QuantumNumbers,
    pub corrections: Vec<f64>,
    pub binding_sums: Vec<f64>,
    pub bracket: Option<BracketSummary>,
    pub oracle: OracleSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1 {
    pub mass: f64,
    pub unit: String,
    pub order: usize,
    pub columns: Vec<Table1Column>,
}

/// Configs for the six columns: `s = 1` (l = 1) then `s = -1` (l = 0),
/// each with pure vector, pure scalar and the equal mix in which both
/// components carry half of the nuclear charge.
pub fn column_configs(order: usize) -> Vec<(String, RunConfig)> {
    let mixes = [("E_V", 1.0, 0.0), ("E_W", 0.0, 1.0), ("E_V+W", 0.5, 0.5)];
    let mut out = Vec::new();
    for (s, l) in [(1, 1), (-1, 0)] {
        for (name, vector_share, scalar_share) in mixes {
            let config = RunConfig {
                mass: Default::default(),
                alpha: super::config::DEFAULT_ALPHA,
                z: 74,
                potential: PotentialConfig::ChargeRecipe {
                    vector_share,
                    scalar_share,
                    screen_coefficient: super::config::DEFAULT_SCREEN_COEFFICIENT,
                    screened: true,
                },
                state: StateConfig { s, l, n_r: 1 },
                order,
                format: Default::default(),
                oracle_tol: ORACLE_TOL,
                oracle: true,
            };
            out.push((format!("{name} s={s}"), config));
        }
    }
    out
}

fn column(label: String, config: RunConfig) -> Result<Table1Column, CliError> {
    let r = config.resolve()?;
    let context = format!("{label} column");
    let series = energy_series(&r.spec, &r.state, 1.0, r.order)
        .map_err(CliError::numerical(context.clone()))?
        .rescaled(r.mass);
    let sums = partial_sums(&series).map_err(CliError::numerical(context.clone()))?;
    let bracket = if sums.len() >= 4 {
        Some(bracket_estimate(&sums).map_err(CliError::numerical(context.clone()))?.into())
    } else {
        None
    };
    let oracle = solve_bound_state(&r.spec, &r.state, 1.0, config.oracle_tol).map_err(CliError::numerical(context))?;
    Ok(Table1Column {
        label,
        state: r.state,
        corrections: series.corrections().to_vec(),
        binding_sums: sums.binding_sums,
        bracket,
        oracle: OracleSummary::new(&oracle, r.mass),
    })
}

/// All six columns, computed on one thread each.
pub fn run_table1(order: usize) -> Result<Table1, CliError> {
    if order > super::MAX_ORDER {
        return Err(CliError::Config(format!("at `order`: at most {}, got {order}", super::MAX_ORDER)));
    }
    let configs = column_configs(order);
    let mass = configs[0].1.mass.clone();
    let columns = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .into_iter()
            .map(|(label, config)| scope.spawn(move || column(label, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("column worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(Table1 {
        mass: mass.value,
        unit: mass.unit,
        order,
        columns,
    })
}

impl Table1 {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# binding energies [{}], mass {} {}", self.unit, self.mass, self.unit);
        let _ = write!(out, "{:>6}", "k");
        for c in &self.columns {
            let _ = write!(out, "{:>14}", c.label);
        }
        out.push('\n');
        for k in 0..=self.order {
            let _ = write!(out, "{k:>6}");
            for c in &self.columns {
                let _ = write!(out, "{:>14.6}", c.binding_sums[k]);
            }
            out.push('\n');
        }
        let mut row = |name: &str, f: &dyn Fn(&Table1Column) -> Option<f64>| {
            let _ = write!(out, "{name:>6}");
            for c in &self.columns {
                match f(c) {
                    Some(v) => {
                        let _ = write!(out, "{v:>14.6}");
                    }
                    None => {
                        let _ = write!(out, "{:>14}", "-");
                    }
                }
            }
            out.push('\n');
        };
        row("E_num", &|c| Some(c.oracle.binding));
        row("est", &|c| c.bracket.as_ref().map(|b| b.estimate));
        row("gap", &|c| c.bracket.as_ref().map(|b| b.gap));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }
}
