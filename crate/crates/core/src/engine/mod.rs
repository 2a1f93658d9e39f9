//! Laurent-coefficient recursions for the ħ-expansion of the Riccati
//! equation obeyed by `R = G'/G`.
//!
//! With `R(r) = ħ^{-1} Σ R_k(r) ħ^{2k}` and `E = ħ^{-2} Σ E_k ħ^{2k}`, every
//! `R_k` has a pole of order `k` at the origin:
//!
//! ```text
//! R_k(r) = r^{-k}   Σ_i R^k_i r^i
//! Q_k(r) = r^{-2-k} Σ_i Q^k_i r^i       (Q = (m' - V')/(E + m(r) - V))
//! ```
//!
//! and the quantization condition fixes the residues:
//! `R^1_0 = N`, `R^{k+1}_k = 0` for `k ≥ 1`.
//!
//! Each order `k ≥ 1` is built as
//!
//! 1. `R^k_i` for `i < k` (these do not involve `E_k`);
//! 2. `E_k`, twice: from the closed recursion ([`energy_correction`]) and
//!    by solving the residue condition for the unknown
//!    ([`quantization_solve`]);
//! 3. `R^k_i` for `i ≥ k` and the row `Q^k`;
//! 4. the residue `R^{k+1}_k` is re-evaluated and must vanish.
//!
//! Table elements with a negative order or index are zero, as is `R^0_i`
//! for `i > 0`.

mod scalar;

use serde::Serialize;

use crate::potentials::PotentialSpec;
use crate::states::{principal_n, QuantumNumbers};
use crate::summation::Neumaier;
use crate::{Error, Result};

use scalar::{Accumulator, Affine, Bounded, Scalar};

/// Relative tolerance on `R^1_0 = N`.
pub const LEADING_RESIDUE_TOL: f64 = 1e-12;
/// `|R^{k+1}_k|` relative to the summed magnitudes of its terms, after
/// each order.
pub const RESIDUE_TOL: f64 = 1e-9;

/// Deliberate corruption of one recurrence term, for exercising the
/// consistency checks.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the `χ Q^{k-3}_i` term in the `R^k_i` recurrence.
    FlipChiQTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Use compensated summation for the convolution sums.
    pub compensated: bool,
    /// Abort with [`Error::InternalConsistency`] when a residue check fails.
    pub strict: bool,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            compensated: true,
            strict: true,
            fault: None,
        }
    }
}

/// Leading-order energy, the exact Dirac-Coulomb level for the origin
/// couplings `V_0`, `W_0`.
pub fn compute_e0(q: &QuantumNumbers, v0: f64, w0: f64, m: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidArgument(format!("mass must be positive, got {m}")));
    }
    let n = principal_n(q, v0, w0)?;
    let disc = n * n + v0 * v0 - w0 * w0;
    if disc < 0.0 {
        return Err(Error::Supercritical(format!("N^2 + V0^2 - W0^2 = {disc:e} is negative")));
    }
    let e0 = m * (n * disc.sqrt() - v0 * w0) / (n * n + v0 * v0);
    if e0.abs() > m {
        return Err(Error::NoBoundState(format!("|E0| = {} exceeds the mass {m}", e0.abs())));
    }
    Ok(e0)
}

/// `m - E_0`, arranged so that a weakly bound level does not lose digits
/// to cancellation.
pub fn leading_binding(q: &QuantumNumbers, v0: f64, w0: f64, m: f64) -> Result<f64> {
    compute_e0(q, v0, w0, m)?;
    let n = principal_n(q, v0, w0)?;
    let s = (n * n + v0 * v0 - w0 * w0).sqrt();
    Ok(m * (v0 + w0) * (v0 * s + n * w0) / ((n + s) * (n * n + v0 * v0)))
}

/// Triangular Laurent tables, filled order by order.
#[derive(Debug, Clone)]
pub struct LaurentTables {
    order: usize,
    next: usize,
    mass: f64,
    chi: f64,
    n: f64,
    r: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
    e: Vec<f64>,
    dual_path: Vec<f64>,
    residues: Vec<f64>,
    options: EngineOptions,
}

impl LaurentTables {
    /// Seed order zero: `E_0`, `R^0_0`, the row `Q^0` and `R^1_0`.
    pub fn new(
        p: &PotentialSpec,
        q: &QuantumNumbers,
        m: f64,
        order: usize,
        options: EngineOptions,
    ) -> Result<Self> {
        if !p.supports_order(order) {
            return Err(Error::InvalidArgument(format!(
                "potential is expanded to order {} but order {order} was requested",
                p.truncation_order()
            )));
        }
        let v0 = p.v(0);
        let w0 = p.w(0);
        let n = principal_n(q, v0, w0)?;
        let e0 = compute_e0(q, v0, w0, m)?;
        let binding = leading_binding(q, v0, w0, m)?;
        let r00 = -(binding * (2.0 * m - binding)).max(0.0).sqrt();
        if r00 == 0.0 || e0 + m == 0.0 {
            return Err(Error::DegenerateState(format!(
                "E0 = {e0} sits at the continuum edge (R0 = 0)"
            )));
        }

        let width = order + 1;
        let mut tables = Self {
            order,
            next: 1,
            mass: m,
            chi: q.chi() as f64,
            n,
            r: vec![vec![0.0; width]; width],
            q: vec![vec![0.0; width]; order],
            e: vec![0.0; width],
            dual_path: vec![0.0; width],
            residues: vec![0.0; width],
            options,
        };
        tables.e[0] = e0;
        tables.r[0][0] = r00;
        if let Some(row) = tables.q.first_mut() {
            for (i, qi) in row.iter_mut().enumerate() {
                let i = i as isize;
                *qi = (i - 1) as f64 * (p.w(i) - p.v(i)) / (e0 + m);
            }
        }

        let r10 = tables.laurent_value(p, 1, 0);
        let residual = (r10 - n).abs() / n.abs();
        tables.residues[0] = residual;
        if options.strict && residual > LEADING_RESIDUE_TOL {
            return Err(Error::InternalConsistency {
                order: 0,
                what: "R^1_0 = N",
                residual,
            });
        }
        if order >= 1 {
            tables.r[1][0] = r10;
        }
        Ok(tables)
    }

    /// Order of the next correction to be computed.
    pub fn next_order(&self) -> usize {
        self.next
    }

    pub fn is_complete(&self) -> bool {
        self.next > self.order
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Quantization count `N`.
    pub fn n(&self) -> f64 {
        self.n
    }

    /// Energy corrections computed so far (`E_0..E_{next-1}`; later entries are zero).
    pub fn energies(&self) -> &[f64] {
        &self.e
    }

    /// `R^k_i`, zero outside the table.
    #[inline]
    pub fn r(&self, k: isize, i: isize) -> f64 {
        if k < 0 || i < 0 {
            return 0.0;
        }
        debug_assert!((k as usize) <= self.order && (i as usize) <= self.order);
        self.r[k as usize][i as usize]
    }

    /// `Q^k_i`, zero outside the table.
    #[inline]
    pub fn q(&self, k: isize, i: isize) -> f64 {
        if k < 0 || i < 0 {
            return 0.0;
        }
        debug_assert!((k as usize) < self.order && (i as usize) <= self.order);
        self.q[k as usize][i as usize]
    }

    #[inline]
    fn e_at(&self, k: isize) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.e[k as usize]
        }
    }

    pub fn r_row(&self, k: usize) -> &[f64] {
        &self.r[k]
    }

    pub fn q_row(&self, k: usize) -> &[f64] {
        &self.q[k]
    }

    /// `|energy_correction - quantization_solve|` per order (entry 0 unused).
    pub fn dual_path_residuals(&self) -> &[f64] {
        &self.dual_path
    }

    /// Entry 0: `|R^1_0 - N| / |N|`; entry `k ≥ 1`: `|R^{k+1}_k|` divided by
    /// the sum of the magnitudes of the terms that make it up.
    pub fn residue_residuals(&self) -> &[f64] {
        &self.residues
    }

    fn recurrence<'a>(&'a self, p: &'a PotentialSpec) -> Recurrence<'a> {
        Recurrence {
            spec: p,
            chi: self.chi,
            mass: self.mass,
            r00: self.r[0][0],
            options: self.options,
        }
    }

    /// `R^k_i` evaluated from the stored rows.
    fn laurent_value(&self, p: &PotentialSpec, k: usize, i: usize) -> f64 {
        self.recurrence(p).laurent::<f64>(
            k,
            i,
            |a, b| self.r(a, b),
            |a, b| self.q(a, b),
            |a| self.e_at(a),
        )
    }

    /// Complete the next order.
    pub fn advance(&mut self, p: &PotentialSpec) -> Result<()> {
        let k = self.next;
        if k > self.order {
            return Err(Error::InvalidArgument(format!(
                "tables already complete through order {}",
                self.order
            )));
        }
        let direct = energy_correction(k, self, p)?;
        let solved = quantization_solve(k, self, p)?;
        self.dual_path[k] = (direct - solved).abs();
        self.e[k] = direct;

        for i in k..=self.order {
            self.r[k][i] = self.laurent_value(p, k, i);
        }
        if k < self.order {
            let row = self.q_row_from(p, k);
            self.q[k] = row;
        }

        let residue = self.recurrence(p).laurent::<Bounded>(
            k + 1,
            k,
            |a, b| Bounded::exact(self.r(a, b)),
            |a, b| Bounded::exact(self.q(a, b)),
            |a| Bounded::exact(self.e_at(a)),
        );
        let relative = if residue.magnitude > 0.0 {
            residue.value.abs() / residue.magnitude
        } else {
            0.0
        };
        self.residues[k] = relative;
        if self.options.strict && relative > RESIDUE_TOL {
            return Err(Error::InternalConsistency {
                order: k,
                what: "R^{k+1}_k = 0",
                residual: relative,
            });
        }

        if k < self.order {
            for i in 0..=k {
                self.r[k + 1][i] = self.laurent_value(p, k + 1, i);
            }
        }
        self.next += 1;
        Ok(())
    }

    /// Row `Q^k` from the Q-recursion; needs `E_k` and rows `Q^{<k}`.
    fn q_row_from(&self, p: &PotentialSpec, k: usize) -> Vec<f64> {
        let denom = self.e[0] + self.mass;
        let k = k as isize;
        (0..=self.order as isize)
            .map(|i| {
                let mut acc = Neumaier::with_mode(self.options.compensated);
                for j in 0..k {
                    acc.add(self.q(j, j + i - k) * self.e_at(k - j));
                }
                for j in 0..=i {
                    acc.add(self.q(k - 1, j) * (p.w(i - j) - p.v(i - j)));
                }
                -acc.value() / denom
            })
            .collect()
    }
}

/// Everything the `R^k_i` recurrence needs besides the tables.
struct Recurrence<'a> {
    spec: &'a PotentialSpec,
    chi: f64,
    mass: f64,
    r00: f64,
    options: EngineOptions,
}

impl Recurrence<'_> {
    /// `R^k_i` for `k ≥ 1`, with table access abstracted so the same
    /// expression can be evaluated with one entry left as an unknown.
    fn laurent<T: Scalar>(
        &self,
        k: usize,
        i: usize,
        r: impl Fn(isize, isize) -> T,
        q: impl Fn(isize, isize) -> T,
        e: impl Fn(isize) -> T,
    ) -> T {
        let p = self.spec;
        let (k, i) = (k as isize, i as isize);
        let mut acc = T::Acc::start(self.options.compensated);

        acc.add(r(k - 1, i) * (i - k + 1) as f64);
        for j in 1..k {
            for s in 0..=i {
                acc.add(r(j, s) * r(k - j, i - s));
            }
        }
        for j in 0..=k - 2 {
            for s in 0..=i {
                acc.add(-(q(j, s) * r(k - 2 - j, i - s)));
            }
        }
        let chi_q = q(k - 3, i) * self.chi;
        match self.options.fault {
            Some(Fault::FlipChiQTerm) => acc.add(chi_q),
            None => acc.add(-chi_q),
        }
        if k == i {
            for j in 0..=k {
                acc.add(e(j) * e(k - j));
            }
        }
        acc.add(-(e(k - 1) * (2.0 * p.v(i - k + 1))));
        if k == 2 {
            let conv = crate::summation::sum(
                (0..=i).map(|s| p.v(s) * p.v(i - s) - p.w(s) * p.w(i - s)),
            );
            acc.add(T::constant(conv));
            if i == 0 {
                acc.add(T::constant(-self.chi * (self.chi + 1.0)));
            }
        }
        if k == 1 {
            acc.add(T::constant(-2.0 * self.mass * p.w(i)));
        }
        acc.value() / (-2.0 * self.r00)
    }
}

fn check_next(k: usize, tables: &LaurentTables) -> Result<()> {
    if k == 0 || k != tables.next || k > tables.order {
        return Err(Error::InvalidArgument(format!(
            "order {k} cannot be computed now (next order is {}, table order {})",
            tables.next, tables.order
        )));
    }
    Ok(())
}

/// `E_k` from the closed energy recursion.
///
/// Requires the tables to be complete through order `k - 1` with the
/// sub-diagonal part `R^k_{i<k}` of row `k` in place, i.e.
/// `tables.next_order() == k`.
pub fn energy_correction(k: usize, tables: &LaurentTables, p: &PotentialSpec) -> Result<f64> {
    check_next(k, tables)?;
    let t = tables;
    let comp = t.options.compensated;
    let ki = k as isize;
    let r00 = t.r(0, 0);
    let r10 = t.r(1, 0);
    let e0 = t.e[0];
    let m = t.mass;
    let chi = t.chi;

    let denom = 2.0 * (e0 * r10 + p.v(0) * r00);
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::DegenerateQuantization { order: k });
    }

    // terms divided by R^1_0
    let mut x = Neumaier::with_mode(comp);
    for j in 2..ki {
        for s in 0..=ki {
            x.add(t.r(j, s) * t.r(ki + 1 - j, ki - s));
        }
    }
    if k >= 2 {
        for s in 1..=ki {
            x.add(2.0 * t.r(1, s) * t.r(ki, ki - s));
        }
    }
    for j in 0..ki {
        for s in 0..=ki {
            x.add(-t.q(j, s) * t.r(ki - 1 - j, ki - s));
        }
    }
    if k == 1 {
        x.add(2.0 * (p.v(0) * p.v(1) - p.w(0) * p.w(1)));
    }
    x.add(-chi * t.q(ki - 2, ki));

    // terms divided by R^0_0
    let mut y = Neumaier::with_mode(comp);
    y.add(t.r(ki - 1, ki));
    for j in 1..ki {
        for s in 0..=ki {
            y.add(t.r(j, s) * t.r(ki - j, ki - s));
        }
    }
    for j in 0..=ki - 2 {
        for s in 0..=ki {
            y.add(-t.q(j, s) * t.r(ki - 2 - j, ki - s));
        }
    }
    for j in 1..ki {
        y.add(t.e_at(j) * t.e_at(ki - j));
    }
    y.add(-2.0 * t.e_at(ki - 1) * p.v(1));
    if k == 2 {
        for s in 0..=2 {
            y.add(p.v(s) * p.v(2 - s) - p.w(s) * p.w(2 - s));
        }
    }
    if k == 1 {
        y.add(-2.0 * m * p.w(1));
    }
    y.add(-chi * t.q(ki - 3, ki));

    let value = r00 * r10 / denom * (x.value() / r10 - y.value() / r00);
    if !value.is_finite() {
        return Err(Error::DegenerateQuantization { order: k });
    }
    Ok(value)
}

/// `E_k` by solving the residue condition `R^{k+1}_k = 0` directly.
///
/// `E_k` enters `R^k_k` and `R^{k+1}_k` linearly, so both are carried as
/// `value + slope·E_k` and the condition is solved for the root. Same
/// preconditions as [`energy_correction`].
pub fn quantization_solve(k: usize, tables: &LaurentTables, p: &PotentialSpec) -> Result<f64> {
    check_next(k, tables)?;
    let t = tables;
    let rec = t.recurrence(p);
    let ki = k as isize;
    let unknown_e = |j: isize| {
        if j == ki {
            Affine::unknown()
        } else {
            Affine::constant(t.e_at(j))
        }
    };
    let table_q = |a: isize, b: isize| Affine::constant(t.q(a, b));

    let diagonal = rec.laurent::<Affine>(k, k, |a, b| Affine::constant(t.r(a, b)), table_q, unknown_e);
    let residue = rec.laurent::<Affine>(
        k + 1,
        k,
        |a, b| {
            if a == ki && b == ki {
                diagonal
            } else {
                Affine::constant(t.r(a, b))
            }
        },
        table_q,
        unknown_e,
    );
    if residue.slope == 0.0 {
        return Err(Error::DegenerateQuantization { order: k });
    }
    let root = -residue.value / residue.slope;
    if !root.is_finite() {
        return Err(Error::DegenerateQuantization { order: k });
    }
    Ok(root)
}

/// Build the tables through order `K` with default options.
pub fn build_tables(p: &PotentialSpec, q: &QuantumNumbers, m: f64, order: usize) -> Result<LaurentTables> {
    build_tables_with(p, q, m, order, EngineOptions::default())
}

pub fn build_tables_with(
    p: &PotentialSpec,
    q: &QuantumNumbers,
    m: f64,
    order: usize,
    options: EngineOptions,
) -> Result<LaurentTables> {
    let mut tables = LaurentTables::new(p, q, m, order, options)?;
    while !tables.is_complete() {
        tables.advance(p)?;
    }
    Ok(tables)
}

/// Energy corrections `E_0..E_K` with consistency diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySeries {
    corrections: Vec<f64>,
    mass: f64,
    state: QuantumNumbers,
    n: Option<f64>,
    max_dual_path_residual: f64,
    max_residue: f64,
}

impl EnergySeries {
    pub fn new(corrections: Vec<f64>, mass: f64, state: QuantumNumbers) -> Self {
        Self {
            corrections,
            mass,
            state,
            n: None,
            max_dual_path_residual: 0.0,
            max_residue: 0.0,
        }
    }

    pub fn corrections(&self) -> &[f64] {
        &self.corrections
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn state(&self) -> &QuantumNumbers {
        &self.state
    }

    pub fn order(&self) -> usize {
        self.corrections.len().saturating_sub(1)
    }

    /// Quantization count `N`, when the series came from the engine.
    pub fn n(&self) -> Option<f64> {
        self.n
    }

    /// Largest `|E_k(direct) - E_k(residue solve)|`.
    pub fn max_dual_path_residual(&self) -> f64 {
        self.max_dual_path_residual
    }

    /// Largest `|R^{k+1}_k|` over `k ≥ 1`.
    pub fn max_residue(&self) -> f64 {
        self.max_residue
    }

    /// `S_k = Σ_{j≤k} E_j`.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut acc = Neumaier::new();
        self.corrections
            .iter()
            .map(|&e| {
                acc.add(e);
                acc.value()
            })
            .collect()
    }

    /// Whether every partial sum stays below the rest mass.
    pub fn bound_at_all_orders(&self) -> bool {
        self.partial_sums().iter().all(|&s| s < self.mass)
    }

    /// The same series with every energy multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            corrections: self.corrections.iter().map(|e| e * factor).collect(),
            mass: self.mass * factor,
            state: self.state,
            n: self.n,
            max_dual_path_residual: self.max_dual_path_residual * factor,
            max_residue: self.max_residue,
        }
    }
}

pub fn energy_series(p: &PotentialSpec, q: &QuantumNumbers, m: f64, order: usize) -> Result<EnergySeries> {
    energy_series_with(p, q, m, order, EngineOptions::default())
}

pub fn energy_series_with(
    p: &PotentialSpec,
    q: &QuantumNumbers,
    m: f64,
    order: usize,
    options: EngineOptions,
) -> Result<EnergySeries> {
    let tables = build_tables_with(p, q, m, order, options)?;
    let max = |xs: &[f64]| xs.iter().copied().fold(0.0, f64::max);
    Ok(EnergySeries {
        corrections: tables.e.clone(),
        mass: m,
        state: *q,
        n: Some(tables.n),
        max_dual_path_residual: max(&tables.dual_path),
        max_residue: max(tables.residues.get(1..).unwrap_or(&[])),
    })
}
