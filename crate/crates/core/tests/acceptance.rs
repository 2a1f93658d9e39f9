//! One line per acceptance criterion and a nonzero exit if any fails. Runs
//! without the test harness so the lines always reach the output and the
//! timings are not shared with other tests.

use std::time::{Duration, Instant};

use dirac_lpt::analysis::{bracket_estimate, partial_sums};
use dirac_lpt::cli::{column_configs, run_verify, VerifyOptions, PRINTED_E_NUM};
use dirac_lpt::closed_forms::{pure_vector_coefficients, pure_vector_convention, yukawa_coefficients, ClosedFormInputs};
use dirac_lpt::engine::{compute_e0, energy_series};
use dirac_lpt::oracle::solve_bound_state;
use dirac_lpt::potentials::{coulomb_spec, custom_spec, yukawa_spec};
use dirac_lpt::states::make_state;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Partial sums `m - Σ E_j` in keV, rows k = 0..15, columns
/// (V, W, V+W) for s = 1 then (V, W, V+W) for s = -1.
const PRINTED: [[f64; 6]; 16] = [
    [20.644616, 16.59173, 18.292804, 20.644616, 16.59173, 18.292804],
    [11.091653, 7.348948, 10.846326, 11.091653, 7.348948, 10.846326],
    [12.415123, 9.066156, 11.810855, 12.721342, 9.372375, 12.003761],
    [12.264120, 8.784152, 11.703753, 12.500951, 8.995036, 11.855249],
    [12.308677, 8.880691, 11.730813, 12.558797, 9.118034, 11.890052],
    [12.292914, 8.838096, 11.722213, 12.537837, 9.063240, 11.878837],
    [12.299805, 8.860978, 11.725555, 12.546910, 9.092488, 11.883163],
    [12.296473, 8.847251, 11.724110, 12.542466, 9.074820, 11.881275],
    [12.298236, 8.856234, 11.724792, 12.544844, 9.086483, 11.882175],
    [12.297242, 8.849965, 11.724449, 12.543482, 9.078246, 11.881715],
    [12.297834, 8.854576, 11.724631, 12.544306, 9.084385, 11.881963],
    [12.297465, 8.851033, 11.724530, 12.543784, 9.079601, 11.881823],
    [12.297704, 8.853860, 11.724588, 12.544128, 9.083474, 11.881905],
    [12.297544, 8.851529, 11.724553, 12.543893, 9.080233, 11.881856],
    [12.297654, 8.853509, 11.724575, 12.544058, 9.083025, 11.881886],
    [12.297576, 8.851782, 11.724561, 12.543939, 9.080555, 11.881867],
];

const ROW_TOL_KEV: f64 = 2e-3;
const ROW0_TOL_KEV: f64 = 1e-3;
const TABLE_BUDGET: Duration = Duration::from_secs(1);
const E_NUM_TOL_KEV: f64 = 1e-3;
const ORACLE_BUDGET: Duration = Duration::from_secs(5);
const YUKAWA_CLOSED_TOL: f64 = 1e-10;
const VECTOR_CLOSED_TOL: f64 = 1e-9;
const COULOMB_ORACLE_TOL: f64 = 1e-8;

struct Outcome {
    id: &'static str,
    passed: bool,
    line: String,
}

fn report(id: &'static str, passed: bool, line: String) -> Outcome {
    println!("[{}] criterion {id}: {line}", if passed { "PASS" } else { "FAIL" });
    Outcome { id, passed, line }
}

fn binding_columns() -> Vec<Vec<f64>> {
    column_configs(15)
        .into_iter()
        .map(|(_, c)| {
            let r = c.resolve().unwrap();
            let s = energy_series(&r.spec, &r.state, 1.0, 15).unwrap().rescaled(r.mass);
            partial_sums(&s).unwrap().binding_sums
        })
        .collect()
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let columns = binding_columns();
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    let mut worst_at = (0, 0);
    let mut row0 = 0.0f64;
    for (c, sums) in columns.iter().enumerate() {
        for (k, b) in sums.iter().enumerate() {
            let d = (b - PRINTED[k][c]).abs();
            if d > worst {
                worst = d;
                worst_at = (k, c);
            }
            if k == 0 {
                row0 = row0.max(d);
            }
        }
    }
    let passed = worst <= ROW_TOL_KEV && row0 <= ROW0_TOL_KEV && elapsed < TABLE_BUDGET;
    report(
        "1",
        passed,
        format!(
            "96 partial sums, max |dB| = {worst:.2e} keV at k={}, column {} (tol {ROW_TOL_KEV:e}); k=0 max {row0:.2e} keV (tol {ROW0_TOL_KEV:e}); {:.0} ms (budget {} ms)",
            worst_at.0,
            worst_at.1,
            elapsed.as_secs_f64() * 1e3,
            TABLE_BUDGET.as_millis()
        ),
    )
}

/// Shooting bindings in keV for the six columns, with the large and small
/// component node counts.
fn oracle_columns() -> (Vec<(f64, usize, usize)>, Duration) {
    let start = Instant::now();
    let out = column_configs(15)
        .into_iter()
        .map(|(_, c)| {
            let r = c.resolve().unwrap();
            let o = solve_bound_state(&r.spec, &r.state, 1.0, c.oracle_tol).unwrap();
            (o.binding * r.mass, o.node_count, o.small_node_count)
        })
        .collect();
    (out, start.elapsed())
}

fn shooting_row(oracle: &[(f64, usize, usize)], elapsed: Duration) -> Vec<Outcome> {
    let worst = oracle
        .iter()
        .zip(PRINTED_E_NUM)
        .map(|((b, _, _), p)| (b - p).abs())
        .fold(0.0, f64::max);
    let values = report(
        "2",
        worst <= E_NUM_TOL_KEV && elapsed < ORACLE_BUDGET,
        format!(
            "shooting bindings {:?} keV, max |dE| = {worst:.2e} keV (tol {E_NUM_TOL_KEV:e}); {:.2} s (budget {} s)",
            oracle.iter().map(|o| format!("{:.6}", o.0)).collect::<Vec<_>>(),
            elapsed.as_secs_f64(),
            ORACLE_BUDGET.as_secs()
        ),
    );
    // n_r = 1 for every column; F always carries n_r nodes, G has one node
    // fewer when χ > 0 and the vector part dominates.
    let f_ok = oracle.iter().all(|o| o.2 == 1);
    let nodes = report(
        "2 (nodes)",
        f_ok,
        format!(
            "small-component nodes {:?} (want n_r = 1 each); large-component nodes {:?} ({} of 6 equal n_r)",
            oracle.iter().map(|o| o.2).collect::<Vec<_>>(),
            oracle.iter().map(|o| o.1).collect::<Vec<_>>(),
            oracle.iter().filter(|o| o.1 == 1).count(),
        ),
    );
    vec![values, nodes]
}

fn bracketing(oracle: &[(f64, usize, usize)]) -> Outcome {
    let mut passed = true;
    let mut notes = Vec::new();
    for ((label, c), (b_num, _, _)) in column_configs(15).into_iter().zip(oracle) {
        let r = c.resolve().unwrap();
        let s = energy_series(&r.spec, &r.state, 1.0, 15).unwrap().rescaled(r.mass);
        let seq = partial_sums(&s).unwrap();
        let br = bracket_estimate(&seq).unwrap();
        let inside = (br.estimate - b_num).abs() < br.gap;
        let ok = seq.brackets_from_above() && inside;
        passed &= ok;
        notes.push(format!(
            "{label}: |est-num| {:.1e} < gap {:.1e} {}",
            (br.estimate - b_num).abs(),
            br.gap,
            if ok { "ok" } else { "NO" }
        ));
    }
    report("3", passed, format!("even sums fall, odd sums rise from k=2; {}", notes.join("; ")))
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let states = [make_state(1, 1, 1).unwrap(), make_state(-1, 0, 1).unwrap()];
    let mut yukawa_worst = 0.0f64;
    let mut vector_worst = 0.0f64;
    for i in 0..100 {
        let q = states[i % 2];
        let a = rng.gen_range(0.1..0.6);
        let b = rng.gen_range(0.0..0.6);
        let lambda = rng.gen_range(0.005..0.1);
        let mu = rng.gen_range(0.005..0.1);
        let engine = energy_series(&yukawa_spec(a, lambda, b, mu, 3).unwrap(), &q, 1.0, 3).unwrap();
        let closed = yukawa_coefficients(&ClosedFormInputs::new(a, b, lambda, mu, &q).unwrap(), 1.0).unwrap();
        for k in 1..=3 {
            let e = engine.corrections()[k];
            yukawa_worst = yukawa_worst.max((closed[k] - e).abs() / e.abs());
        }

        let mut v = vec![-a];
        for j in 1..=5 {
            v.push(-a * rng.gen_range(-1.0..1.0) * lambda.powi(j));
        }
        let engine = energy_series(&custom_spec(&v, &[0.0; 6]).unwrap(), &q, 1.0, 5).unwrap();
        let inputs = ClosedFormInputs::new(a, 0.0, lambda, 0.0, &q).unwrap();
        let closed = pure_vector_coefficients(&pure_vector_convention(&v).unwrap(), &inputs).unwrap();
        for k in 0..=5 {
            let e = engine.corrections()[k];
            vector_worst = vector_worst.max((closed[k] - e).abs() / e.abs());
        }
    }
    report(
        "4",
        yukawa_worst <= YUKAWA_CLOSED_TOL && vector_worst <= VECTOR_CLOSED_TOL,
        format!(
            "100-point sweep: Yukawa E1..E3 max relative {yukawa_worst:.1e} (tol {YUKAWA_CLOSED_TOL:e}); pure vector E0..E5 max relative {vector_worst:.1e} (tol {VECTOR_CLOSED_TOL:e})"
        ),
    )
}

fn properties() -> Outcome {
    let reports: Vec<_> = run_verify(&VerifyOptions::default())
        .into_iter()
        .filter(|r| matches!(r.name, "coulomb-nullity" | "dual-path" | "residues" | "scaling"))
        .collect();
    let passed = reports.iter().all(|r| r.passed) && reports.len() == 4;
    report(
        "5",
        passed,
        reports
            .iter()
            .map(|r| format!("{} worst/tol {:.1e} over {} cases", r.name, r.worst, r.cases))
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn coulomb_oracle() -> Outcome {
    let a = 74.0 / 137.036;
    let mut worst = 0.0f64;
    for q in [make_state(1, 1, 1).unwrap(), make_state(-1, 0, 1).unwrap()] {
        for (v, w) in [(a, 0.0), (0.0, a), (a / 2.0, a / 2.0)] {
            let p = coulomb_spec(v, w, 0).unwrap();
            let o = solve_bound_state(&p, &q, 1.0, 1e-12).unwrap();
            let e0 = compute_e0(&q, -v, -w, 1.0).unwrap();
            worst = worst.max((o.energy - e0).abs());
        }
    }
    report(
        "6",
        worst <= COULOMB_ORACLE_TOL,
        format!("unscreened fields, both states, three mixes: max |E_num - E_0| = {worst:.1e} m (tol {COULOMB_ORACLE_TOL:e})"),
    )
}

fn main() -> std::process::ExitCode {
    let mut outcomes = vec![table_reproduction()];
    let (oracle, elapsed) = oracle_columns();
    outcomes.extend(shooting_row(&oracle, elapsed));
    outcomes.push(bracketing(&oracle));
    outcomes.push(closed_forms());
    outcomes.push(properties());
    outcomes.push(coulomb_oracle());
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", outcomes.len(), outcomes.len());
        std::process::ExitCode::SUCCESS
    } else {
        for o in &failed {
            eprintln!("failed: criterion {} ({})", o.id, o.line);
        }
        std::process::ExitCode::FAILURE
    }
}
