//! Printed analytic expressions for the first few energy corrections.
//!
//! These are hard-coded cross-checks for the recursion engine, evaluated in
//! units `m = 1` with `ε = E_0` and `ρ = sqrt(1 - ε²)`.
//!
//! # Pure-vector convention
//!
//! The general pure-vector expressions ([`pure_vector_coefficients`]) are
//! written for a potential
//!
//! ```text
//! V(r) = -(a/r) Σ ṽ_i (-r)^i,      ṽ_0 = 1,
//! ```
//!
//! i.e. for the engine's coefficients `V_i` they take `a = -V_0` and
//! `ṽ_i = (-1)^i V_i / V_0`. Under this map they agree with the engine to
//! rounding for orders 0 through 5, and the Yukawa case reduces to
//! `ṽ_i = λ^i / i!`, reproducing [`yukawa_coefficients`]. Reading `a = V_0`
//! and `ṽ_i = V_i` literally flips the sign of every odd order.
//! [`pure_vector_convention`] performs the conversion.

use crate::engine::{compute_e0, leading_binding};
use crate::states::{principal_n, QuantumNumbers};
use crate::{Error, Result};

/// Couplings, screens and the derived `ε`, `ρ`, `N` for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInputs {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub mu: f64,
    epsilon: f64,
    rho: f64,
    chi: i32,
    n: f64,
}

impl ClosedFormInputs {
    /// `a`, `b` are the vector and scalar strengths (both ≥ 0), `lambda`
    /// and `mu` their screens in units of the mass. `ε` comes from
    /// [`compute_e0`] with `V_0 = -a`, `W_0 = -b`.
    pub fn new(a: f64, b: f64, lambda: f64, mu: f64, q: &QuantumNumbers) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::InvalidArgument(format!("strengths must be non-negative, got a={a}, b={b}")));
        }
        let n = principal_n(q, -a, -b)?;
        let epsilon = compute_e0(q, -a, -b, 1.0)?;
        let binding = leading_binding(q, -a, -b, 1.0)?;
        let rho = (binding * (2.0 - binding)).max(0.0).sqrt();
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::SingularInput(format!("epsilon = {epsilon} is outside (0, 1)")));
        }
        Ok(Self {
            a,
            b,
            lambda,
            mu,
            epsilon,
            rho,
            chi: q.chi(),
            n,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn chi(&self) -> i32 {
        self.chi
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

/// Convert engine coefficients `V_i` (true signs, `V_0 < 0`) to the
/// normalized `ṽ_i` used by [`pure_vector_coefficients`].
pub fn pure_vector_convention(v: &[f64]) -> Result<Vec<f64>> {
    let v0 = *v
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty coefficient list".into()))?;
    if v0 == 0.0 {
        return Err(Error::SingularInput("V_0 = 0 cannot be normalized".into()));
    }
    let mut sign = 1.0;
    Ok(v
        .iter()
        .map(|&c| {
            let out = sign * c / v0;
            sign = -sign;
            out
        })
        .collect())
}

/// `E_0..E_5` for a pure vector potential in the normalized convention
/// (see the module docs). `v` must hold at least `ṽ_0..ṽ_5`; the scalar
/// fields of `inputs` are ignored apart from `ε`, which must come from
/// `b = 0`.
pub fn pure_vector_coefficients(v: &[f64], inputs: &ClosedFormInputs) -> Result<[f64; 6]> {
    if v.len() < 6 {
        return Err(Error::InvalidArgument(format!("need 6 coefficients, got {}", v.len())));
    }
    let a = inputs.a;
    let eps = inputs.epsilon;
    let rho = inputs.rho;
    if rho == 0.0 {
        return Err(Error::SingularInput("rho = 0".into()));
    }
    let chi = inputs.chi as f64;
    let n = inputs.n;
    let (v1, v2, v3, v4, v5) = (v[1], v[2], v[3], v[4], v[5]);
    let (e2, e4) = (eps * eps, eps.powi(4));
    let (a2, a4) = (a * a, a.powi(4));
    let (r2, r4) = (rho * rho, rho.powi(4));
    let (c2, c3, c4) = (chi * chi, chi.powi(3), chi.powi(4));

    let e0 = n / (n * n + a2).sqrt();
    let e1 = a * v1;
    let en2 = -v2 / (2.0 * r2) * (3.0 * a2 * eps - chi * (chi * eps + 1.0) * r2);
    let en3 = v3 / (2.0 * r4)
        * (a.powi(3) * (4.0 * e2 + 1.0) - a * (2.0 * c2 * e2 + 3.0 * chi * eps + c2 - 1.0) * r2);
    let en4 = 1.0 / (8.0 * rho.powi(6))
        * (v2 * v2
            * (a4 * eps * (5.0 * e2 - 12.0)
                + a2 * eps * (6.0 * c2 * r2 - 5.0) * r2
                + c2 * (c2 * eps * (e2 + 2.0) + chi * (4.0 * e2 + 2.0) + 3.0 * eps) * r4)
            + v4 * (-5.0 * a4 * eps * (4.0 * e2 + 3.0)
                + a2 * (6.0 * c2 * eps * (2.0 * e2 + 3.0) + 6.0 * chi * (4.0 * e2 + 1.0) - 25.0 * eps) * r2
                - 3.0 * chi * (c2 - 1.0) * (chi * eps + 2.0) * r4));
    let en5 = -a / (8.0 * rho.powi(8))
        * (v2 * v3
            * (3.0 * a4 * (8.0 * e4 - 20.0 * e2 - 3.0)
                - a2 * (c2 * (32.0 * e4 - 36.0 * e2 - 10.0)
                    + chi * eps * (10.0 * e2 - 24.0)
                    + 9.0 * (6.0 * e2 + 1.0))
                    * r2
                + chi
                    * (30.0 * c2 * eps.powi(3)
                        + 24.0 * chi * e2
                        + 10.0 * eps
                        + chi
                        + c3 * (8.0 * e4 + 8.0 * e2 - 1.0))
                    * r4)
            + v5 * (-3.0 * a4 * (8.0 * e4 + 12.0 * e2 + 1.0)
                + a2 * (c2 * (16.0 * e4 + 48.0 * e2 + 6.0)
                    + 10.0 * chi * eps * (4.0 * e2 + 3.0)
                    - 15.0 * (6.0 * e2 + 1.0))
                    * r2
                + (5.0 * c2 * (4.0 * e2 + 3.0) - 3.0 * c4 * (4.0 * e2 + 1.0) + 50.0 * chi * eps
                    - 30.0 * c3 * eps
                    - 12.0)
                    * r4));
    Ok([e0, e1, en2, en3, en4, en5])
}

/// `E_0..E_3` for `V = -(a/r) e^{-λr}`, `W = -(b/r) e^{-μr}`, multiplied by
/// the mass `m` (λ, μ are in units of `m`).
pub fn yukawa_coefficients(inputs: &ClosedFormInputs, m: f64) -> Result<[f64; 4]> {
    let ClosedFormInputs {
        a, b, lambda: l, mu, ..
    } = *inputs;
    let eps = inputs.epsilon;
    let rho = inputs.rho;
    let chi = inputs.chi as f64;
    let n = inputs.n;
    let split = a + b * eps;
    if split == 0.0 {
        return Err(Error::SingularInput("a + b*epsilon = 0".into()));
    }
    if rho == 0.0 {
        return Err(Error::SingularInput("rho = 0".into()));
    }
    let (e2, e4) = (eps * eps, eps.powi(4));
    let (r2, r4) = (rho * rho, rho.powi(4));
    let c2 = chi * chi;
    let (a2, a3, a4) = (a * a, a.powi(3), a.powi(4));
    let (b2, b3, b4) = (b * b, b.powi(3), b.powi(4));

    let e0 = (n * (n * n + a2 - b2).sqrt() - a * b) / (n * n + a2);
    let e1 = a * l + b * mu * eps;
    let en2 = -1.0 / (4.0 * split * r2)
        * (l * l
            * (3.0 * a3 * eps - a * chi * (chi * eps + 1.0) * r2
                + 2.0 * a2 * b * (2.0 * e2 + 1.0)
                + a * b2 * eps * (e2 + 2.0))
            + mu * mu
                * (3.0 * b3 * e2 - b * chi * eps * r2 - b * c2 * r2
                    + 2.0 * b2 * a * eps * (e2 + 2.0)
                    + b * a2 * (2.0 * e2 + 1.0)));
    let en3 = 1.0 / (12.0 * split * r4)
        * (l.powi(3)
            * (a4 * (4.0 * e2 + 1.0)
                - a2 * (2.0 * c2 * e2 + 3.0 * chi * eps + c2 - 1.0) * r2
                + 3.0 * a3 * b * eps * (2.0 * e2 + 3.0)
                + a2 * b2 * (2.0 * e4 + 11.0 * e2 + 2.0)
                - a * b * (3.0 * chi + (3.0 * c2 - 1.0) * eps) * r2
                + a * b3 * eps * (3.0 * e2 + 2.0))
            + mu.powi(3)
                * (b4 * (-8.0 * e4 + 13.0 * e2)
                    + b2 * (3.0 * chi * eps.powi(3) + (2.0 * c2 + 1.0) * e2 - 6.0 * chi * eps - 5.0 * c2) * r2
                    - 3.0 * b3 * a * eps * (2.0 * e4 - e2 - 6.0)
                    - b2 * a2 * (4.0 * e4 - 14.0 * e2 - 5.0)
                    - b * a * eps * (3.0 * chi * eps + 3.0 * c2 - 1.0) * r2
                    + b * a3 * eps * (2.0 * e2 + 3.0))
            + l * l
                * mu
                * (9.0 * a3 * b * eps * r2 - 6.0 * a2 * b2 * (2.0 * e4 - e2 - 1.0)
                    + 3.0 * a * b3 * eps * r2 * (e2 + 2.0)
                    - 3.0 * a * b * chi * (chi * eps + 1.0) * r4));
    Ok([e0 * m, e1 * m, en2 * m, en3 * m])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::energy_series;
    use crate::potentials::yukawa_spec;
    use crate::states::make_state;
    use approx::assert_relative_eq;

    fn states() -> [QuantumNumbers; 2] {
        [make_state(1, 1, 1).unwrap(), make_state(-1, 0, 1).unwrap()]
    }

    #[test]
    fn coulomb_has_no_corrections() {
        let q = make_state(-1, 0, 1).unwrap();
        let inputs = ClosedFormInputs::new(0.5, 0.0, 0.0, 0.0, &q).unwrap();
        let e = pure_vector_coefficients(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], &inputs).unwrap();
        assert_eq!(&e[1..], &[0.0; 5]);
        let y = yukawa_coefficients(&inputs, 1.0).unwrap();
        assert_eq!(&y[1..], &[0.0; 3]);
        assert_relative_eq!(e[0], y[0], max_relative = 1e-15);
    }

    #[test]
    fn first_order_pure_vector() {
        let q = make_state(-1, 0, 1).unwrap();
        let inputs = ClosedFormInputs::new(0.5, 0.0, 0.0, 0.0, &q).unwrap();
        let e = pure_vector_coefficients(&[1.0, 0.2, 0.0, 0.0, 0.0, 0.0], &inputs).unwrap();
        assert_relative_eq!(e[1], 0.1, max_relative = 1e-15);
    }

    #[test]
    fn yukawa_reductions() {
        for q in states() {
            let inputs = ClosedFormInputs::new(0.4, 0.0, 0.05, 0.0, &q).unwrap();
            let (eps, rho, chi) = (inputs.epsilon(), inputs.rho(), q.chi() as f64);
            let y = yukawa_coefficients(&inputs, 1.0).unwrap();
            assert_relative_eq!(y[1], 0.4 * 0.05, max_relative = 1e-15);
            let e2 = -(0.05f64.powi(2) / (4.0 * rho * rho)) * (3.0 * 0.16 * eps - chi * (chi * eps + 1.0) * rho * rho);
            assert_relative_eq!(y[2], e2, max_relative = 1e-13);

            let scalar = ClosedFormInputs::new(0.0, 0.4, 0.0, 0.05, &q).unwrap();
            let y = yukawa_coefficients(&scalar, 1.0).unwrap();
            assert_relative_eq!(y[1], 0.4 * 0.05 * scalar.epsilon(), max_relative = 1e-15);
            // no λ-dependence when a = 0
            let other = ClosedFormInputs { lambda: 0.9, ..scalar };
            assert_eq!(yukawa_coefficients(&other, 1.0).unwrap(), y);
        }
    }

    #[test]
    fn singular_inputs() {
        let q = make_state(-1, 0, 1).unwrap();
        let inputs = ClosedFormInputs::new(0.0, 0.0, 0.1, 0.1, &q);
        // free particle: epsilon = 1
        assert!(matches!(inputs, Err(Error::SingularInput(_))));
        let mut ok = ClosedFormInputs::new(0.3, 0.0, 0.1, 0.1, &q).unwrap();
        ok.a = 0.0;
        assert!(matches!(yukawa_coefficients(&ok, 1.0), Err(Error::SingularInput(_))));
        assert!(pure_vector_coefficients(&[1.0, 0.0], &ok).is_err());
    }

    #[test]
    fn convention_map() {
        let v = [-0.5, 0.1, 0.04, -0.01];
        assert_eq!(pure_vector_convention(&v).unwrap(), vec![1.0, 0.2, -0.08, -0.02]);
        assert!(pure_vector_convention(&[0.0, 1.0]).is_err());
        assert!(pure_vector_convention(&[]).is_err());
    }

    #[test]
    fn second_order_matches_engine() {
        let (a, lambda) = (0.540004, 0.0346197);
        for q in states() {
            let p = yukawa_spec(a, lambda, 0.0, 0.0, 2).unwrap();
            let s = energy_series(&p, &q, 1.0, 2).unwrap();
            let inputs = ClosedFormInputs::new(a, 0.0, lambda, 0.0, &q).unwrap();
            let y = yukawa_coefficients(&inputs, 1.0).unwrap();
            assert_relative_eq!(s.corrections()[2], y[2], max_relative = 1e-12);
        }
    }

    #[test]
    fn pure_vector_matches_engine_through_fifth_order() {
        let q = make_state(1, 2, 2).unwrap();
        let v = [-0.35, 0.02, -0.013, 0.004, 0.0021, -0.0007];
        let p = crate::potentials::custom_spec(&v, &[0.0; 6]).unwrap();
        let s = energy_series(&p, &q, 1.0, 5).unwrap();
        let inputs = ClosedFormInputs::new(0.35, 0.0, 0.0, 0.0, &q).unwrap();
        let e = pure_vector_coefficients(&pure_vector_convention(&v).unwrap(), &inputs).unwrap();
        for k in 0..=5 {
            assert_relative_eq!(s.corrections()[k], e[k], max_relative = 1e-10);
        }
    }
}
