//! Adaptive Dormand–Prince 5(4) stepping for two-component systems.

use crate::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 0.0,
            max_steps: 1_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const D1: f64 = 71.0 / 57600.0;
const D3: f64 = -71.0 / 16695.0;
const D4: f64 = 71.0 / 1920.0;
const D5: f64 = -17253.0 / 339200.0;
const D6: f64 = 22.0 / 525.0;
const D7: f64 = -1.0 / 40.0;

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrate `y' = f(x, y)` from `x0` to `x1` (either direction).
///
/// The local error is measured against the norm of the state rather than
/// componentwise, since the two components of a wavefunction pass through
/// zero at different places. `observe` sees every accepted point.
pub fn integrate<F, O>(f: F, x0: f64, y0: State, x1: f64, tol: Tolerance, mut observe: O) -> Result<State>
where
    F: Fn(f64, &State) -> State,
    O: FnMut(f64, &State),
{
    if !(x0.is_finite() && x1.is_finite()) {
        return Err(Error::Integration("non-finite interval".into()));
    }
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = dir * initial_step(&y, &k1, span.abs(), tol.rtol);
    let mut steps = 0;
    observe(x, &y);
    while (x1 - x) * dir > 0.0 {
        steps += 1;
        if steps > tol.max_steps {
            return Err(Error::Integration(format!("step budget exhausted at x = {x:e}")));
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            x + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            x + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(x + h, &y_new);
        let err = axpy(
            &[0.0, 0.0],
            h,
            &[(D1, &k1), (D3, &k3), (D4, &k4), (D5, &k5), (D6, &k6), (D7, &k7)],
        );
        let scale = tol.atol + tol.rtol * norm(&y).max(norm(&y_new));
        let ratio = norm(&err) / scale;
        if !ratio.is_finite() {
            return Err(Error::Integration(format!("non-finite state near x = {x:e}")));
        }
        if ratio <= 1.0 {
            x = if (x + h - x1) * dir >= 0.0 { x1 } else { x + h };
            y = y_new;
            k1 = k7;
            observe(x, &y);
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < 1e-14 * x.abs().max(span.abs()) {
            return Err(Error::Integration(format!("step size underflow at x = {x:e}")));
        }
    }
    Ok(y)
}

#[inline]
pub fn norm(y: &State) -> f64 {
    y[0].hypot(y[1])
}

fn initial_step(y: &State, dy: &State, span: f64, rtol: f64) -> f64 {
    let ny = norm(y);
    let nd = norm(dy);
    let guess = if ny > 0.0 && nd > 0.0 {
        0.01 * (ny / nd) * rtol.powf(0.2)
    } else {
        1e-6 * span
    };
    guess.min(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_oscillator_forward() {
        let y = integrate(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, Tolerance::default(), |_, _| {}).unwrap();
        assert_relative_eq!(y[0], 10f64.sin(), epsilon = 1e-10);
        assert_relative_eq!(y[1], 10f64.cos(), epsilon = 1e-10);
    }

    #[test]
    fn exponential_backward() {
        let y1 = (-3.0f64).exp();
        let y = integrate(|_, y| [y[0], y[1]], 0.0, [1.0, 2.0], -3.0, Tolerance::default(), |_, _| {}).unwrap();
        assert_relative_eq!(y[0], y1, max_relative = 1e-10);
        assert_relative_eq!(y[1], 2.0 * y1, max_relative = 1e-10);
    }

    #[test]
    fn observer_sees_monotone_points() {
        let mut xs = Vec::new();
        integrate(|_, y| [y[1], -y[0]], 0.0, [1.0, 0.0], 3.0, Tolerance::default(), |x, _| xs.push(x)).unwrap();
        assert_eq!(xs[0], 0.0);
        assert_eq!(*xs.last().unwrap(), 3.0);
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn zero_span_returns_start() {
        let y = integrate(|_, y| *y, 1.0, [3.0, 4.0], 1.0, Tolerance::default(), |_, _| {}).unwrap();
        assert_eq!(y, [3.0, 4.0]);
    }

    #[test]
    fn step_budget_is_enforced() {
        let tol = Tolerance {
            max_steps: 5,
            ..Tolerance::default()
        };
        let r = integrate(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], 100.0, tol, |_, _| {});
        assert!(matches!(r, Err(Error::Integration(_))));
    }
}
