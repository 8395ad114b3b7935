//! Grid estimate of the `C^B` norm of a trigonometric potential.
//!
//! `sin^(2r) u` is expanded into cosines,
//! `2^(-2r) C(2r, r) + 2^(1-2r) sum_m (-1)^m C(2r, r-m) cos(2mu)`,
//! so every derivative is available in closed form before sampling.

use std::f64::consts::PI;

use super::TorusPotential;

/// Points per axis of the sampling grid.
pub const NORM_GRID: usize = 256;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(constant, [(frequency, amplitude)])` for `sin(u)^power`, power even.
fn cosine_series(power: u32) -> (f64, Vec<(f64, f64)>) {
    let r = power / 2;
    let scale = 0.5f64.powi(power as i32);
    let constant = scale * binomial(power, r);
    let modes = (1..=r)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            (2.0 * m as f64, 2.0 * scale * sign * binomial(power, r - m))
        })
        .collect();
    (constant, modes)
}

/// Samples of the `order`-th derivative of `sin(u)^power` on the grid.
fn derivative_samples(power: u32, order: usize, points: &[f64]) -> Vec<f64> {
    let (constant, modes) = cosine_series(power);
    points
        .iter()
        .map(|&u| {
            let base = if order == 0 { constant } else { 0.0 };
            modes.iter().fold(base, |acc, &(w, c)| {
                // d^k cos(wu) = w^k cos(wu + k pi / 2)
                acc + c * w.powi(order as i32) * (w * u + order as f64 * PI / 2.0).cos()
            })
        })
        .collect()
}

/// Max over multi-indices `|alpha| <= b` of the grid sup of `|d^alpha f|`.
pub fn cb_norm_report(potential: &TorusPotential, b: usize) -> f64 {
    if potential.is_zero() {
        return 0.0;
    }
    let points: Vec<f64> = (0..NORM_GRID)
        .map(|i| -PI + 2.0 * PI * i as f64 / NORM_GRID as f64)
        .collect();
    let terms = potential.terms();
    // per term, per derivative order: samples along one axis
    let xs: Vec<Vec<Vec<f64>>> = terms
        .iter()
        .map(|t| {
            (0..=b)
                .map(|k| derivative_samples(t.sin_x_power, k, &points))
                .collect()
        })
        .collect();
    let ys: Vec<Vec<Vec<f64>>> = terms
        .iter()
        .map(|t| {
            (0..=b)
                .map(|k| derivative_samples(t.sin_y_power, k, &points))
                .collect()
        })
        .collect();
    let mut best: f64 = 0.0;
    let mut row = vec![0.0; NORM_GRID];
    for ax in 0..=b {
        for ay in 0..=(b - ax) {
            for i in 0..NORM_GRID {
                row.iter_mut().for_each(|v| *v = 0.0);
                for (ti, t) in terms.iter().enumerate() {
                    let fx = t.coeff * xs[ti][ax][i];
                    if fx == 0.0 {
                        continue;
                    }
                    for (v, fy) in row.iter_mut().zip(&ys[ti][ay]) {
                        *v += fx * fy;
                    }
                }
                best = row.iter().fold(best, |m, v| m.max(v.abs()));
            }
        }
    }
    best
}
