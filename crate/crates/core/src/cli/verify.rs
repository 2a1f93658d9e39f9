use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closed_forms::{pure_vector_coefficients, pure_vector_convention, yukawa_coefficients, ClosedFormInputs};
use crate::engine::{build_tables_with, energy_series_with, EngineOptions, Fault, RESIDUE_TOL};
use crate::potentials::{coulomb_spec, custom_spec, yukawa_spec, PotentialSpec};
use crate::states::{make_state, QuantumNumbers};

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub order: usize,
    pub seed: u64,
    pub sweep_points: usize,
    /// Flip the sign of one recursion term to demonstrate that the checks
    /// notice.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            order: 15,
            seed: 0x5eed,
            sweep_points: 100,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    /// Largest residual in units of the tolerance; `≤ 1` passes.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<5} {:<16} {:>4} cases  worst/tol {:.3e}  (tol {:.0e})",
            if self.passed { "ok" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance,
        )?;
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    worst: f64,
    detail: String,
}

impl Tally {
    /// Record `residual / tol`, keeping a note about the worst case.
    fn see(&mut self, ratio: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
        if ratio > self.worst {
            self.worst = ratio;
            self.detail = what();
        }
    }

    fn fail(&mut self, what: String) {
        self.cases += 1;
        self.worst = f64::INFINITY;
        self.detail = what;
    }

    fn report(self, name: &'static str, tolerance: f64) -> SuiteReport {
        let passed = self.worst <= 1.0;
        SuiteReport {
            name,
            cases: self.cases,
            worst: self.worst,
            tolerance,
            passed,
            detail: self.detail,
        }
    }
}

fn states() -> Vec<QuantumNumbers> {
    [(1, 1, 1), (-1, 0, 1), (-1, 0, 0), (1, 2, 2), (-1, 1, 3)]
        .iter()
        .map(|&(s, l, n)| make_state(s, l, n).expect("valid state"))
        .collect()
}

fn table1_states() -> [QuantumNumbers; 2] {
    [make_state(1, 1, 1).unwrap(), make_state(-1, 0, 1).unwrap()]
}

fn random_spec(rng: &mut ChaCha8Rng, order: usize) -> PotentialSpec {
    let a = rng.gen_range(0.1..0.6);
    let b = rng.gen_range(0.0..0.4);
    let lambda = rng.gen_range(0.005..0.1);
    let mu = rng.gen_range(0.005..0.1);
    yukawa_spec(a, lambda, b, mu, order).expect("valid couplings")
}

fn engine_options(opts: &VerifyOptions) -> EngineOptions {
    EngineOptions {
        strict: false,
        fault: opts.inject_fault.then_some(Fault::FlipChiQTerm),
        ..EngineOptions::default()
    }
}

/// Table-1 parameters plus seeded random Yukawa mixtures.
fn cases(opts: &VerifyOptions) -> Vec<(PotentialSpec, QuantumNumbers)> {
    let alpha = 1.0 / 137.036;
    let recipe = |z: f64| (alpha * z, 1.13 * alpha * z.cbrt());
    let (a, l) = recipe(74.0);
    let (ah, lh) = recipe(37.0);
    let mut out = Vec::new();
    for q in table1_states() {
        out.push((yukawa_spec(a, l, 0.0, 0.0, opts.order).unwrap(), q));
        out.push((yukawa_spec(0.0, 0.0, a, l, opts.order).unwrap(), q));
        out.push((yukawa_spec(ah, lh, ah, lh, opts.order).unwrap(), q));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let all = states();
    for i in 0..12 {
        out.push((random_spec(&mut rng, opts.order), all[i % all.len()]));
    }
    out
}

pub fn coulomb_nullity(opts: &VerifyOptions) -> SuiteReport {
    const TOL: f64 = 1e-10;
    let mut t = Tally::default();
    let order = opts.order.min(10);
    for q in states() {
        for (a, b) in [(0.54, 0.0), (0.0, 0.54), (0.3, 0.25), (0.1, 0.6)] {
            let p = coulomb_spec(a, b, order).unwrap();
            match energy_series_with(&p, &q, 1.0, order, engine_options(opts)) {
                Ok(s) => {
                    for (k, e) in s.corrections().iter().enumerate().skip(1) {
                        t.see(e.abs() / TOL, || format!("{q}, a={a}, b={b}: E_{k} = {e:e}"));
                    }
                }
                Err(e) => t.fail(format!("{q}, a={a}, b={b}: {e}")),
            }
        }
    }
    t.report("coulomb-nullity", TOL)
}

pub fn dual_path(opts: &VerifyOptions) -> SuiteReport {
    const TOL: f64 = 1e-9;
    let mut t = Tally::default();
    for (p, q) in cases(opts) {
        match build_tables_with(&p, &q, 1.0, opts.order, engine_options(opts)) {
            Ok(tables) => {
                for k in 1..=opts.order {
                    let e = tables.energies()[k];
                    let r = tables.dual_path_residuals()[k];
                    t.see(r / (TOL * e.abs()), || format!("{q}: order {k}, |ΔE| = {r:e}, E = {e:e}"));
                }
            }
            Err(e) => t.fail(format!("{q}: {e}")),
        }
    }
    t.report("dual-path", TOL)
}

pub fn residues(opts: &VerifyOptions) -> SuiteReport {
    let mut t = Tally::default();
    for (p, q) in cases(opts) {
        match build_tables_with(&p, &q, 1.0, opts.order, engine_options(opts)) {
            Ok(tables) => {
                for (k, r) in tables.residue_residuals().iter().enumerate() {
                    t.see(r / RESIDUE_TOL, || format!("{q}: order {k}, relative residual {r:e}"));
                }
            }
            Err(e) => t.fail(format!("{q}: {e}")),
        }
    }
    t.report("residues", RESIDUE_TOL)
}

pub fn scaling(opts: &VerifyOptions) -> SuiteReport {
    const TOL: f64 = 1e-12;
    let mut t = Tally::default();
    for (p, q) in cases(opts) {
        let base = match energy_series_with(&p, &q, 1.0, opts.order, engine_options(opts)) {
            Ok(s) => s,
            Err(e) => {
                t.fail(format!("{q}: {e}"));
                continue;
            }
        };
        for sigma in [0.5, 2.0, 10.0] {
            match energy_series_with(&p.scaled(sigma), &q, sigma, opts.order, engine_options(opts)) {
                Ok(s) => {
                    for (k, (x, y)) in base.corrections().iter().zip(s.corrections()).enumerate() {
                        let rel = (y - sigma * x).abs() / (sigma * x).abs();
                        t.see(rel / TOL, || format!("{q}: sigma {sigma}, order {k}, relative {rel:e}"));
                    }
                }
                Err(e) => t.fail(format!("{q}, sigma {sigma}: {e}")),
            }
        }
    }
    t.report("scaling", TOL)
}

/// Printed closed forms against the engine over a seeded parameter sweep.
pub fn closed_forms(opts: &VerifyOptions) -> Vec<SuiteReport> {
    const YUKAWA_TOL: f64 = 1e-10;
    const VECTOR_TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc105ed);
    let mut yukawa = Tally::default();
    let mut vector = Tally::default();
    let options = engine_options(opts);
    for i in 0..opts.sweep_points {
        let q = table1_states()[i % 2];
        let a = rng.gen_range(0.1..0.6);
        let b = rng.gen_range(0.0..0.6);
        let lambda = rng.gen_range(0.005..0.1);
        let mu = rng.gen_range(0.005..0.1);

        let p = yukawa_spec(a, lambda, b, mu, 3).unwrap();
        let closed = ClosedFormInputs::new(a, b, lambda, mu, &q).and_then(|c| yukawa_coefficients(&c, 1.0));
        match (closed, energy_series_with(&p, &q, 1.0, 3, options)) {
            (Ok(c), Ok(s)) => {
                for k in 1..=3 {
                    let e = s.corrections()[k];
                    let rel = (c[k] - e).abs() / e.abs();
                    yukawa.see(rel / YUKAWA_TOL, || {
                        format!("{q}, a={a}, b={b}, λ={lambda}, μ={mu}: order {k}, relative {rel:e}")
                    });
                }
            }
            (Err(e), _) | (_, Err(e)) => yukawa.fail(format!("{q}, a={a}, b={b}: {e}")),
        }

        // pure vector with an arbitrary (not Yukawa) radial shape
        let mut v = vec![-a];
        for i in 1..=5 {
            v.push(-a * rng.gen_range(-1.0..1.0) * lambda.powi(i));
        }
        let p = custom_spec(&v, &[0.0; 6]).unwrap();
        let closed = pure_vector_convention(&v)
            .and_then(|tilde| ClosedFormInputs::new(a, 0.0, lambda, 0.0, &q).and_then(|c| pure_vector_coefficients(&tilde, &c)));
        match (closed, energy_series_with(&p, &q, 1.0, 5, options)) {
            (Ok(c), Ok(s)) => {
                for k in 1..=5 {
                    let e = s.corrections()[k];
                    let rel = (c[k] - e).abs() / e.abs();
                    vector.see(rel / VECTOR_TOL, || format!("{q}, V = {v:?}: order {k}, relative {rel:e}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => vector.fail(format!("{q}, V = {v:?}: {e}")),
        }
    }
    vec![
        yukawa.report("closed-yukawa", YUKAWA_TOL),
        vector.report("closed-vector", VECTOR_TOL),
    ]
}

pub fn run_verify(opts: &VerifyOptions) -> Vec<SuiteReport> {
    let mut out = vec![coulomb_nullity(opts), dual_path(opts), residues(opts), scaling(opts)];
    out.extend(closed_forms(opts));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes() {
        for r in run_verify(&VerifyOptions::default()) {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn injected_fault_is_caught_by_dual_path() {
        let opts = VerifyOptions {
            inject_fault: true,
            ..VerifyOptions::default()
        };
        let r = dual_path(&opts);
        assert!(!r.passed, "{r}");
    }
}
