//! The family `h_n = sin(pi/2n)/2 (sin^2 x - sin^2 y)` and its perturbation
//! `h~_n = h_n + chi sin^(2n-2k) x sin^(2k) y`.
//!
//! Joining `0` to `h_n` gives `eps = pi/(4n)`, so degree `2n` is resonant.
//! Both potentials share their `(2n-2)`-jets, hence the same compatibility
//! data, while their left-hand sides differ by a nonzero amount: at most one
//! of the two can be joined to `0` by a smooth non-degenerate geodesic.

mod norm;
mod potential;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::jet_propagation::{propagate, JetTable, ObstructionReport, Propagation};
use crate::numeric::factorial;
use crate::second_jet::{epsilon_from_boundary, SecondJetBoundary};
use crate::timegrid::TimeGrid;

pub use norm::{cb_norm_report, NORM_GRID};
pub use potential::{
    jets_at_origin, sin_power_series, sin_squared_series, FamilyParams, TorusPotential, TrigTerm,
};

/// `|v_k|` below this counts as zero.
pub const WEIGHT_FLOOR: f64 = 1e-12;

fn check_family_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(invalid(format!("the family needs n > 2, got {n}")));
    }
    Ok(())
}

pub fn build_h(n: usize) -> Result<TorusPotential> {
    check_family_n(n)?;
    let c = 0.5 * (PI / (2.0 * n as f64)).sin();
    let p = TorusPotential::new(vec![
        TrigTerm {
            coeff: c,
            sin_x_power: 2,
            sin_y_power: 0,
        },
        TrigTerm {
            coeff: -c,
            sin_x_power: 0,
            sin_y_power: 2,
        },
    ])?;
    Ok(p.with_family(FamilyParams {
        n,
        kappa: None,
        chi: None,
    }))
}

pub fn build_h_tilde(n: usize, kappa: usize, chi: f64) -> Result<TorusPotential> {
    check_family_n(n)?;
    if kappa > n {
        return Err(invalid(format!("kappa must lie in 0..={n}, got {kappa}")));
    }
    if chi == 0.0 || !chi.is_finite() {
        return Err(invalid(format!(
            "chi must be finite and nonzero, got {chi}"
        )));
    }
    let mut terms = build_h(n)?.terms().to_vec();
    terms.push(TrigTerm {
        coeff: chi,
        sin_x_power: (2 * n - 2 * kappa) as u32,
        sin_y_power: (2 * kappa) as u32,
    });
    Ok(TorusPotential::new(terms)?.with_family(FamilyParams {
        n,
        kappa: Some(kappa),
        chi: Some(chi),
    }))
}

/// `|h_n|_B + |h~_n|_B`, taking the largest value over the admissible
/// perturbation indices so the estimate does not depend on a choice of kappa.
pub fn family_norm(n: usize, b: usize) -> Result<f64> {
    let chi = (-(n as f64)).exp();
    let h = cb_norm_report(&build_h(n)?, b);
    let mut worst: f64 = 0.0;
    for kappa in 0..=n {
        worst = worst.max(cb_norm_report(&build_h_tilde(n, kappa, chi)?, b));
    }
    Ok(h + worst)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Conclusion {
    /// Exactly one potential satisfies the compatibility condition.
    OnlyH,
    OnlyHTilde,
    Neither,
    /// Would contradict the lhs difference; never expected.
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObstructionDemo {
    pub n: usize,
    pub epsilon: f64,
    pub epsilon_expected: f64,
    pub resonant_order: usize,
    pub kappa: usize,
    pub chi: f64,
    /// Compatibility weights on the jets of the endpoint carrying `h_n`.
    pub v: Vec<f64>,
    /// Weights on the jets of the zero endpoint.
    pub v_start: Vec<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    pub lhs_h: f64,
    pub lhs_htilde: f64,
    pub difference: f64,
    /// `v_kappa (2n - 2kappa)! (2kappa)! chi`
    pub expected_difference: f64,
    pub report_h: ObstructionReport,
    pub report_htilde: ObstructionReport,
    /// Largest disagreement between the two runs in the shared compatibility data.
    pub shared_data_mismatch: f64,
    pub conclusion: Conclusion,
}

fn obstruction_for(
    potential: &TorusPotential,
    n: usize,
    grid: &Arc<TimeGrid>,
) -> Result<ObstructionReport> {
    let jets = jets_at_origin(potential, 2 * n)?;
    match propagate(&JetTable::new(), &jets, 2 * n, grid)? {
        Propagation::Obstructed { report, .. } if report.resonant_order == 2 * n => Ok(report),
        Propagation::Obstructed { report, .. } => Err(Error::Internal(format!(
            "resonance at degree {} instead of {}",
            report.resonant_order,
            2 * n
        ))),
        Propagation::Complete(_) => Err(Error::Internal(format!(
            "no resonance up to degree {}",
            2 * n
        ))),
    }
}

pub fn obstruction_demo(n: usize, grid: &Arc<TimeGrid>) -> Result<ObstructionDemo> {
    let h = build_h(n)?;
    let jets = jets_at_origin(&h, 2)?;
    let (a1, b1) = jets.second_jet();
    let epsilon = epsilon_from_boundary(&SecondJetBoundary::new(0.0, 0.0, a1, b1)?)?;
    let epsilon_expected = PI / (4.0 * n as f64);
    if (epsilon - epsilon_expected).abs() > 1e-10 {
        return Err(Error::Internal(format!(
            "eps = {epsilon} differs from pi/(4n) = {epsilon_expected}"
        )));
    }

    let report_h = obstruction_for(&h, n, grid)?;
    let (kappa, vmax) = report_h
        .u
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, v)| {
            if v.abs() > bv {
                (i, v.abs())
            } else {
                (bi, bv)
            }
        });
    if vmax < WEIGHT_FLOOR {
        return Err(Error::Internal(
            "all compatibility weights vanish at the resonant degree".into(),
        ));
    }
    let chi = (-(n as f64)).exp();
    let report_htilde = obstruction_for(&build_h_tilde(n, kappa, chi)?, n, grid)?;

    let mut shared_data_mismatch = (report_h.k - report_htilde.k).abs();
    for (a, b) in report_h
        .u
        .iter()
        .zip(&report_htilde.u)
        .chain(report_h.v.iter().zip(&report_htilde.v))
    {
        shared_data_mismatch = shared_data_mismatch.max((a - b).abs());
    }
    let fact = factorial(2 * n - 2 * kappa) * factorial(2 * kappa);
    let conclusion = match (report_h.satisfied, report_htilde.satisfied) {
        (true, false) => Conclusion::OnlyH,
        (false, true) => Conclusion::OnlyHTilde,
        (false, false) => Conclusion::Neither,
        (true, true) => Conclusion::Both,
    };
    Ok(ObstructionDemo {
        n,
        epsilon,
        epsilon_expected,
        resonant_order: report_h.resonant_order,
        kappa,
        chi,
        v: report_h.u.clone(),
        v_start: report_h.v.clone(),
        k: report_h.k,
        lhs_h: report_h.lhs,
        lhs_htilde: report_htilde.lhs,
        difference: report_htilde.lhs - report_h.lhs,
        expected_difference: report_h.u[kappa] * fact * chi,
        report_h,
        report_htilde,
        shared_data_mismatch,
        conclusion,
    })
}
