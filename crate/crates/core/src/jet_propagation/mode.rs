//! Dirichlet problems `f'' + lambda f = k` on `[0, 1]`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::timegrid::{CoefficientSeries, TimeGrid};

/// `sqrt(lambda)` within this distance of `j pi` counts as resonant.
pub const RESONANCE_TOL: f64 = 1e-9;
/// Closer than this (but not resonant) the Green function is badly
/// conditioned and a warning is attached.
pub const NEAR_RESONANCE_TOL: f64 = 1e-6;
/// Tolerance on the compatibility condition at resonance.
pub const COMPATIBILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ModeProblem {
    pub lambda: f64,
    pub source: CoefficientSeries,
    pub f0: f64,
    pub f1: f64,
}

impl ModeProblem {
    pub fn new(lambda: f64, source: CoefficientSeries, f0: f64, f1: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(invalid(format!(
                "mode eigenvalue must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self {
            lambda,
            source,
            f0,
            f1,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    /// `sqrt(lambda) = multiple * pi`
    pub multiple: usize,
    /// `f(0) - (-1)^j f(1)` from the boundary data.
    pub boundary_defect: f64,
    /// `int_0^1 k(t) sin(j pi t) / (j pi) dt`, the value the defect must take.
    pub compatibility_value: f64,
    pub compatible: bool,
}

#[derive(Debug, Clone)]
pub struct ModeSolution {
    /// `None` only for an incompatible resonant problem.
    pub values: Option<CoefficientSeries>,
    pub resonance: Option<Resonance>,
    /// Distance of `sqrt(lambda)` to the nearest positive multiple of pi.
    pub resonance_gap: f64,
    /// Max nodewise `|f'' + lambda f - k|` (spectral); zero when unsolved.
    pub residual: f64,
}

impl ModeSolution {
    pub fn near_resonant(&self) -> bool {
        self.resonance.is_none() && self.resonance_gap < NEAR_RESONANCE_TOL
    }
}

/// Nearest multiple `j >= 1` of pi and the distance to it.
fn nearest_multiple(omega: f64) -> (usize, f64) {
    let j = (omega / PI).round().max(1.0);
    (j as usize, (omega - j * PI).abs())
}

pub fn solve_mode(problem: &ModeProblem, grid: &Arc<TimeGrid>) -> Result<ModeSolution> {
    let ModeProblem {
        lambda,
        ref source,
        f0,
        f1,
    } = *problem;
    if source.grid().node_count() != grid.node_count() {
        return Err(crate::Error::GridMismatch {
            left: source.grid().node_count(),
            right: grid.node_count(),
        });
    }
    let omega = lambda.sqrt();
    let (multiple, gap) = nearest_multiple(omega);
    let k = source.values();
    let t = grid.nodes();

    // particular solution with f_p(0) = f_p'(0) = 0, and its boundary data
    let fp: Vec<f64> = if omega == 0.0 {
        let k1 = grid.cumulative(k);
        let tk: Vec<f64> = t.iter().zip(k).map(|(t, k)| t * k).collect();
        let k2 = grid.cumulative(&tk);
        t.iter()
            .zip(k1.iter().zip(&k2))
            .map(|(t, (a, b))| t * a - b)
            .collect()
    } else {
        let kc: Vec<f64> = t
            .iter()
            .zip(k)
            .map(|(t, k)| (omega * t).cos() * k)
            .collect();
        let ks: Vec<f64> = t
            .iter()
            .zip(k)
            .map(|(t, k)| (omega * t).sin() * k)
            .collect();
        let (ic, is) = (grid.cumulative(&kc), grid.cumulative(&ks));
        t.iter()
            .enumerate()
            .map(|(i, t)| ((omega * t).sin() * ic[i] - (omega * t).cos() * is[i]) / omega)
            .collect()
    };
    let (cos_t, sin_t): (Vec<f64>, Vec<f64>) = if omega == 0.0 {
        (vec![1.0; t.len()], t.to_vec())
    } else {
        t.iter()
            .map(|t| ((omega * t).cos(), (omega * t).sin()))
            .unzip()
    };

    let assemble = |c: f64| -> Vec<f64> {
        (0..t.len())
            .map(|i| f0 * cos_t[i] + c * sin_t[i] + fp[i])
            .collect()
    };

    let last = t.len() - 1;
    let (values, resonance) = if gap < RESONANCE_TOL {
        let j = multiple as f64;
        let sign = if multiple % 2 == 0 { 1.0 } else { -1.0 };
        let weight: Vec<f64> = t
            .iter()
            .zip(k)
            .map(|(t, k)| k * (j * PI * t).sin())
            .collect();
        let compatibility_value = grid.quadrature(&weight) / (j * PI);
        let boundary_defect = f0 - sign * f1;
        let compatible = (boundary_defect - compatibility_value).abs() < COMPATIBILITY_TOL;
        let values = compatible.then(|| {
            // fix the free sin(j pi t) component by quadrature orthogonality
            let base = assemble(0.0);
            let s: Vec<f64> = t.iter().map(|t| (j * PI * t).sin()).collect();
            let num: Vec<f64> = base.iter().zip(&s).map(|(b, s)| b * s).collect();
            let den: Vec<f64> = s.iter().map(|s| s * s).collect();
            let c = -grid.quadrature(&num) / grid.quadrature(&den);
            base.iter()
                .zip(&s)
                .map(|(b, s)| b + c * s)
                .collect::<Vec<_>>()
        });
        let res = Resonance {
            multiple,
            boundary_defect,
            compatibility_value,
            compatible,
        };
        (values, Some(res))
    } else {
        let c = (f1 - f0 * cos_t[last] - fp[last]) / sin_t[last];
        (Some(assemble(c)), None)
    };

    let values = values
        .map(|v| CoefficientSeries::new(Arc::clone(grid), v))
        .transpose()?;
    let residual = values
        .as_ref()
        .map_or(0.0, |f| mode_residual(f, lambda, source));
    Ok(ModeSolution {
        values,
        resonance,
        resonance_gap: gap,
        residual,
    })
}

/// Max nodewise `|f'' + lambda f - k|` with spectral derivatives.
pub fn mode_residual(f: &CoefficientSeries, lambda: f64, k: &CoefficientSeries) -> f64 {
    let fpp = f.derivative().derivative();
    (0..f.values().len())
        .map(|i| (fpp.values()[i] + lambda * f.values()[i] - k.values()[i]).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<TimeGrid> {
        TimeGrid::new(64).unwrap()
    }

    #[test]
    fn free_linear_mode() {
        let g = grid();
        let p = ModeProblem::new(0.0, CoefficientSeries::zeros(&g), 0.0, 1.0).unwrap();
        let s = solve_mode(&p, &g).unwrap();
        let f = s.values.unwrap();
        for (t, v) in g.nodes().iter().zip(f.values()) {
            assert!((t - v).abs() < 1e-15);
        }
        assert!(s.resonance.is_none());
    }

    #[test]
    fn resonant_homogeneous_cosine() {
        let g = grid();
        let p = ModeProblem::new(PI * PI, CoefficientSeries::zeros(&g), 1.0, -1.0).unwrap();
        let s = solve_mode(&p, &g).unwrap();
        let r = s.resonance.unwrap();
        assert!(r.compatible && r.multiple == 1);
        let f = s.values.unwrap();
        for (t, v) in g.nodes().iter().zip(f.values()) {
            assert!((v - (PI * t).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn resonant_sine_source_is_incompatible() {
        let g = grid();
        let k = CoefficientSeries::from_fn(&g, |t| (PI * t).sin());
        let p = ModeProblem::new(PI * PI, k, 0.0, 0.0).unwrap();
        let s = solve_mode(&p, &g).unwrap();
        let r = s.resonance.unwrap();
        assert!((r.compatibility_value - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert!(!r.compatible);
        assert!(s.values.is_none());
    }

    #[test]
    fn forced_non_resonant_mode() {
        let g = grid();
        let k = CoefficientSeries::from_fn(&g, |t| (3.0 * t).exp() - t * t);
        let p = ModeProblem::new(2.5, k, 0.3, -0.7).unwrap();
        let s = solve_mode(&p, &g).unwrap();
        let f = s.values.as_ref().unwrap();
        assert!(s.residual < 1e-7, "{}", s.residual);
        assert!((f.first() - 0.3).abs() < 1e-14);
        assert!((f.last() + 0.7).abs() < 1e-12);
    }

    #[test]
    fn second_multiple_resonance() {
        // f = t cos(2 pi t) solves f'' + 4 pi^2 f = -4 pi sin(2 pi t)
        let g = grid();
        let k = CoefficientSeries::from_fn(&g, |t| -4.0 * PI * (2.0 * PI * t).sin());
        let p = ModeProblem::new(4.0 * PI * PI, k, 0.0, 1.0).unwrap();
        let s = solve_mode(&p, &g).unwrap();
        let r = s.resonance.unwrap();
        assert_eq!(r.multiple, 2);
        assert!(r.compatible, "{r:?}");
        assert!(s.residual < 1e-7);
    }

    #[test]
    fn negative_lambda_rejected() {
        let g = grid();
        assert!(ModeProblem::new(-1.0, CoefficientSeries::zeros(&g), 0.0, 0.0).is_err());
    }
}
