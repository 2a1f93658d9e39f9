//! Direct shooting solution of the radial Dirac system
//!
//! ```text
//! G' = -χ G / r + (E - V + m + W) F
//! F' =  χ F / r - (E - V - m - W) G
//! ```
//!
//! for the closed-form potentials. Nothing here looks at the expansion
//! coefficients beyond the two Coulomb residues that fix the behavior at
//! the origin.

use serde::Serialize;

use crate::ode::{self, State, Tolerance};
use crate::potentials::PotentialSpec;
use crate::states::{frobenius_index, QuantumNumbers};
use crate::{Error, Result};

/// Engineering constants of the shooting method. Lengths are in units of
/// `1/m`, scan limits are binding energies in units of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub r_min: f64,
    /// `r_max - r_match` in decay lengths; `e^-42` is below `1e-18`.
    pub decay_span: f64,
    /// Matching radius in decay lengths.
    pub match_scale: f64,
    pub rtol: f64,
    pub scan_min: f64,
    pub scan_max: f64,
    pub scan_points: usize,
    pub max_iterations: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            r_min: 1e-6,
            decay_span: 42.0,
            match_scale: 2.0,
            rtol: 1e-13,
            scan_min: 1e-5,
            scan_max: 0.9,
            scan_points: 160,
            max_iterations: 400,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub energy: f64,
    pub binding: f64,
    /// Zeros of the large component `G`.
    pub node_count: usize,
    /// Zeros of the small component `F`.
    pub small_node_count: usize,
    pub iterations: usize,
    /// Normalized matching determinant at the returned energy.
    pub residual: f64,
    /// Width of the final energy bracket.
    pub uncertainty: f64,
}

struct Shooter<'a> {
    p: &'a PotentialSpec,
    chi: f64,
    m: f64,
    start: State,
    cfg: OracleConfig,
}

struct Shot {
    mismatch: f64,
    g_nodes: usize,
    f_nodes: usize,
}

#[derive(Default)]
struct SignChanges {
    last: [f64; 2],
    count: [usize; 2],
}

impl SignChanges {
    fn see(&mut self, y: &State) {
        for c in 0..2 {
            if y[c] != 0.0 {
                if self.last[c] != 0.0 && y[c].signum() != self.last[c] {
                    self.count[c] += 1;
                }
                self.last[c] = y[c].signum();
            }
        }
    }
}

impl<'a> Shooter<'a> {
    fn new(p: &'a PotentialSpec, q: &QuantumNumbers, m: f64, cfg: OracleConfig) -> Result<Self> {
        let chi = f64::from(q.chi());
        let v0 = p.v(0);
        let w0 = p.w(0);
        let gamma = frobenius_index(q.chi(), v0, w0)?;
        // null vector of [[-χ, W0-V0], [V0+W0, χ]] - γ
        let rows = [[-chi - gamma, w0 - v0], [v0 + w0, chi - gamma]];
        let row = if ode::norm(&rows[0]) >= ode::norm(&rows[1]) { rows[0] } else { rows[1] };
        let mut start = [-row[1], row[0]];
        let n = ode::norm(&start);
        if n == 0.0 {
            return Err(Error::Integration("no regular solution at the origin".into()));
        }
        let sign = if start[0] != 0.0 { start[0].signum() } else { start[1].signum() };
        start = [sign * start[0] / n, sign * start[1] / n];
        Ok(Self {
            p,
            chi,
            m,
            start,
            cfg,
        })
    }

    fn rhs(&self, e: f64) -> impl Fn(f64, &State) -> State + '_ {
        move |r, y| {
            let v = self.p.vector_potential(r);
            let w = self.p.scalar_potential(r);
            [
                -self.chi * y[0] / r + (e - v + self.m + w) * y[1],
                self.chi * y[1] / r - (e - v - self.m - w) * y[0],
            ]
        }
    }

    fn shoot(&self, e: f64) -> Result<Shot> {
        let kappa = (self.m * self.m - e * e).sqrt();
        let r_min = self.cfg.r_min / self.m;
        let r_match = (self.cfg.match_scale / kappa).max(10.0 * r_min);
        let r_max = r_match + self.cfg.decay_span / kappa;
        let tol = Tolerance {
            rtol: self.cfg.rtol,
            ..Tolerance::default()
        };
        let f = self.rhs(e);

        let mut outward_nodes = SignChanges::default();
        let out = ode::integrate(&f, r_min, self.start, r_match, tol, |_, y| outward_nodes.see(y))?;

        let v = self.p.vector_potential(r_max);
        let w = self.p.scalar_potential(r_max);
        let k_loc = ((self.m + w).powi(2) - (e - v).powi(2)).max(0.0).sqrt();
        let tail = [1.0, (-k_loc + self.chi / r_max) / (e - v + self.m + w)];
        let mut inward_nodes = SignChanges::default();
        let inw = ode::integrate(&f, r_max, tail, r_match, tol, |_, y| inward_nodes.see(y))?;

        let mismatch = (out[0] * inw[1] - out[1] * inw[0]) / (ode::norm(&out) * ode::norm(&inw));
        Ok(Shot {
            mismatch,
            g_nodes: outward_nodes.count[0] + inward_nodes.count[0],
            f_nodes: outward_nodes.count[1] + inward_nodes.count[1],
        })
    }
}

/// The level is picked by its position among the levels of the same `χ`
/// ([`QuantumNumbers::level_index`]). Node counts are reported, not used for
/// selection: the small component `F` has `n_r` nodes in every field tried,
/// while `G` loses its node for `χ > 0` when the vector part dominates.
pub fn solve_bound_state(p: &PotentialSpec, q: &QuantumNumbers, m: f64, tol: f64) -> Result<OracleResult> {
    solve_bound_state_with(p, q, m, tol, OracleConfig::default())
}

pub fn solve_bound_state_with(
    p: &PotentialSpec,
    q: &QuantumNumbers,
    m: f64,
    tol: f64,
    cfg: OracleConfig,
) -> Result<OracleResult> {
    check_arguments(m, tol, &cfg)?;
    let shooter = Shooter::new(p, q, m, cfg)?;

    let index = q.level_index() as usize;
    let brackets = scan(&shooter, m, &cfg)?;
    match brackets.get(index) {
        Some(b) => level(&shooter, b, m, tol, &cfg),
        None if brackets.is_empty() => Err(Error::NoBoundState(format!(
            "matching function keeps its sign for binding in [{:e}, {:e}]·m",
            cfg.scan_min, cfg.scan_max
        ))),
        None => Err(Error::WrongState {
            expected: index,
            found: brackets.len(),
        }),
    }
}

/// Every level of the given `χ` whose binding lies in the scan window,
/// deepest first.
pub fn bound_states(p: &PotentialSpec, q: &QuantumNumbers, m: f64, tol: f64, cfg: OracleConfig) -> Result<Vec<OracleResult>> {
    check_arguments(m, tol, &cfg)?;
    let shooter = Shooter::new(p, q, m, cfg)?;
    scan_levels(&shooter, m, tol, &cfg)
}

fn check_arguments(m: f64, tol: f64, cfg: &OracleConfig) -> Result<()> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(format!("mass must be positive, got {m}")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if !(cfg.scan_min > 0.0 && cfg.scan_max < 1.0 && cfg.scan_min < cfg.scan_max && cfg.scan_points >= 2) {
        return Err(Error::InvalidArgument("bad binding scan window".into()));
    }
    Ok(())
}

/// Sign changes of the matching function, `(E_lo, D_lo, E_hi, D_hi)`,
/// deepest first.
fn scan(shooter: &Shooter, m: f64, cfg: &OracleConfig) -> Result<Vec<[f64; 4]>> {
    let ratio = (cfg.scan_max / cfg.scan_min).powf(1.0 / (cfg.scan_points - 1) as f64);
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..cfg.scan_points {
        let e = m * (1.0 - cfg.scan_max / ratio.powi(i as i32));
        let d = shooter.shoot(e)?.mismatch;
        if let Some((e0, d0)) = prev {
            if d0 != 0.0 && d0.signum() != d.signum() {
                out.push([e0, d0, e, d]);
            }
        }
        prev = Some((e, d));
    }
    Ok(out)
}

fn level(shooter: &Shooter, bracket: &[f64; 4], m: f64, tol: f64, cfg: &OracleConfig) -> Result<OracleResult> {
    let [lo, d_lo, hi, d_hi] = *bracket;
    let root = refine(shooter, lo, d_lo, hi, d_hi, tol * m, cfg.max_iterations)?;
    let shot = shooter.shoot(root.energy)?;
    Ok(OracleResult {
        energy: root.energy,
        binding: m - root.energy,
        node_count: shot.g_nodes,
        small_node_count: shot.f_nodes,
        iterations: root.iterations,
        residual: shot.mismatch.abs(),
        uncertainty: root.width,
    })
}

fn scan_levels(shooter: &Shooter, m: f64, tol: f64, cfg: &OracleConfig) -> Result<Vec<OracleResult>> {
    scan(shooter, m, cfg)?
        .iter()
        .map(|b| level(shooter, b, m, tol, cfg))
        .collect()
}

struct Root {
    energy: f64,
    width: f64,
    iterations: usize,
}

/// Bisection for a few steps, then Illinois false position, falling back to
/// bisection whenever an update fails to halve the bracket.
fn refine(s: &Shooter, mut lo: f64, mut f_lo: f64, mut hi: f64, mut f_hi: f64, tol: f64, max_iter: usize) -> Result<Root> {
    let mut iterations = 0;
    let mut bisect_next = true;
    // +1 when `lo` moved last, -1 when `hi` did
    let mut last_side = 0i8;
    while (hi - lo).abs() > tol {
        if iterations >= max_iter {
            return Err(Error::Integration(format!(
                "eigenvalue refinement did not converge, bracket width {:e}",
                (hi - lo).abs()
            )));
        }
        let width = (hi - lo).abs();
        let secant = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let x = if iterations < 6 || bisect_next || !(secant > lo.min(hi) && secant < lo.max(hi)) {
            0.5 * (lo + hi)
        } else {
            secant
        };
        iterations += 1;
        let fx = s.shoot(x)?.mismatch;
        if fx == 0.0 {
            return Ok(Root {
                energy: x,
                width: 0.0,
                iterations,
            });
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
            if last_side == 1 {
                f_hi *= 0.5;
            }
            last_side = 1;
        } else {
            hi = x;
            f_hi = fx;
            if last_side == -1 {
                f_lo *= 0.5;
            }
            last_side = -1;
        }
        bisect_next = (hi - lo).abs() > 0.5 * width && !bisect_next;
    }
    let energy = if f_lo.abs() <= f_hi.abs() { lo } else { hi };
    Ok(Root {
        energy,
        width: (hi - lo).abs(),
        iterations,
    })
}
