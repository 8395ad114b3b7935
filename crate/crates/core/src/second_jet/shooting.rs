//! Newton shooting on the initial slopes of the second-jet system
//! `a'' = 4 a'^2 / Z`, `b'' = 4 b'^2 / Z`, `Z = 1 + 2a + 2b`, integrated with
//! classical RK4.

use super::SecondJetBoundary;
use crate::error::{Error, Result};

/// Largest RK4 step used between collocation nodes.
const MAX_STEP: f64 = 1.0 / 4096.0;
const MAX_NEWTON: usize = 60;
const ENDPOINT_TOL: f64 = 1e-13;

/// `(a, b, a', b')`
pub type State = [f64; 4];

fn rhs(y: &State) -> Option<State> {
    let z = 1.0 + 2.0 * y[0] + 2.0 * y[1];
    if !(z > 0.0) {
        return None;
    }
    Some([y[2], y[3], 4.0 * y[2] * y[2] / z, 4.0 * y[3] * y[3] / z])
}

fn rk4_step(y: &State, h: f64) -> Option<State> {
    let add = |y: &State, k: &State, s: f64| -> State {
        [
            y[0] + s * k[0],
            y[1] + s * k[1],
            y[2] + s * k[2],
            y[3] + s * k[3],
        ]
    };
    let k1 = rhs(y)?;
    let k2 = rhs(&add(y, &k1, 0.5 * h))?;
    let k3 = rhs(&add(y, &k2, 0.5 * h))?;
    let k4 = rhs(&add(y, &k3, h))?;
    let mut out = *y;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Some(out)
}

/// Integrates from `t = 0` and records the state at every entry of `times`
/// (increasing, starting at 0). `None` when `Z` leaves the positive axis.
pub fn integrate(y0: State, times: &[f64]) -> Option<Vec<State>> {
    let mut out = Vec::with_capacity(times.len());
    let mut y = y0;
    let mut t = 0.0;
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / MAX_STEP).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                y = rk4_step(&y, h)?;
            }
        }
        if !y.iter().all(|v| v.is_finite()) {
            return None;
        }
        t = target;
        out.push(y);
    }
    Some(out)
}

fn endpoint(a0: f64, b0: f64, slopes: [f64; 2], times: &[f64]) -> Option<[f64; 2]> {
    let y = integrate([a0, b0, slopes[0], slopes[1]], times)?;
    let last = y.last()?;
    Some([last[0], last[1]])
}

/// Finds initial slopes `(a'(0), b'(0))` reaching `(a1, b1)` at `t = 1`.
///
/// `times` is the sampling schedule later used for dense output (ending at
/// 1); integrating along it during the search makes the endpoint match exact
/// for that schedule.
pub fn solve_slopes(
    boundary: &SecondJetBoundary,
    guess: [f64; 2],
    times: &[f64],
) -> Result<[f64; 2]> {
    let &SecondJetBoundary { a0, b0, a1, b1 } = boundary;
    let mismatch = |s: [f64; 2]| endpoint(a0, b0, s, times).map(|e| [e[0] - a1, e[1] - b1]);
    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());

    let mut s = guess;
    let mut r = mismatch(s).ok_or_else(|| {
        Error::Numeric("shooting: initial slope guess leaves the half-plane".into())
    })?;
    for _ in 0..MAX_NEWTON {
        if norm(r) < ENDPOINT_TOL {
            return Ok(s);
        }
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let h = 1e-7 * (1.0 + s[k].abs());
            let mut sp = s;
            sp[k] += h;
            let mut sm = s;
            sm[k] -= h;
            let (rp, rm) = match (mismatch(sp), mismatch(sm)) {
                (Some(rp), Some(rm)) => (rp, rm),
                _ => {
                    return Err(Error::Numeric(
                        "shooting: Jacobian probe leaves the half-plane".into(),
                    ))
                }
            };
            jac[0][k] = (rp[0] - rm[0]) / (2.0 * h);
            jac[1][k] = (rp[1] - rm[1]) / (2.0 * h);
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::Numeric("shooting: singular Jacobian".into()));
        }
        let ds = [
            -(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det,
        ];
        let mut lambda = 1.0;
        loop {
            let trial = [s[0] + lambda * ds[0], s[1] + lambda * ds[1]];
            if let Some(rt) = mismatch(trial) {
                if norm(rt) < norm(r) || lambda < 1e-3 {
                    s = trial;
                    r = rt;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(Error::Numeric(format!(
                    "shooting: damping failed, endpoint residual {:.3e}",
                    norm(r)
                )));
            }
        }
    }
    if norm(r) < ENDPOINT_TOL * 100.0 {
        return Ok(s);
    }
    Err(Error::Numeric(format!(
        "shooting did not converge in {MAX_NEWTON} Newton steps, endpoint residual {:.3e}",
        norm(r)
    )))
}
