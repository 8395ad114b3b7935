//! Order-by-order propagation of the even Taylor jets of a geodesic along
//! the central fiber.
//!
//! At degree `2n` the top jet `P(t)` solves a linear system whose operator
//! diagonalizes after `P = U(A(t)) Q`: in the q-basis each coordinate obeys
//! `f'' + 16 eps^2 k^2 f = k_k(t)`. The top mode hits `pi^2` when
//! `4 eps n = pi`; there the boundary jets must satisfy one linear
//! compatibility condition.

mod mode;
mod source;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::numeric::factorial;
use crate::poly_ops::{d_weights, q_coordinates_matrix, u_eigenvalue, PolyBasis};
use crate::second_jet::{solve_bvp, CausalClass, SecondJetBoundary, SecondJetPath};
use crate::timegrid::{CoefficientSeries, TimeGrid};

pub use mode::{
    mode_residual, solve_mode, ModeProblem, ModeSolution, Resonance, COMPATIBILITY_TOL,
    NEAR_RESONANCE_TOL, RESONANCE_TOL,
};
pub use source::source_k1;

/// Taylor coefficients of one even potential at the origin, keyed by total
/// degree. Each entry lists the coefficients of `x^(d-2i) y^(2i)`,
/// `i = 0..=d/2` (monomial convention, not derivative values).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JetTable {
    orders: BTreeMap<usize, Vec<f64>>,
}

impl JetTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts the EvenEven coefficients of one even degree.
    pub fn with_order(mut self, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        self.set_order(degree, coeffs)?;
        Ok(self)
    }

    pub fn set_order(&mut self, degree: usize, coeffs: Vec<f64>) -> Result<()> {
        if degree < 2 || degree % 2 == 1 {
            return Err(invalid(format!(
                "jet tables hold even degrees >= 2, got {degree}"
            )));
        }
        if coeffs.len() != degree / 2 + 1 {
            return Err(invalid(format!(
                "degree {degree} needs {} coefficients, got {}",
                degree / 2 + 1,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite jet coefficient {c}")));
        }
        self.orders.insert(degree, coeffs);
        Ok(())
    }

    /// Builds a table from full coefficient lists (`x^(d-k) y^k`,
    /// `k = 0..=d`), rejecting any odd jet. Constant terms are dropped.
    pub fn from_full(full: &BTreeMap<usize, Vec<f64>>) -> Result<Self> {
        let mut table = Self::new();
        for (&degree, coeffs) in full {
            if coeffs.len() != degree + 1 {
                return Err(invalid(format!(
                    "degree {degree} needs {} full coefficients, got {}",
                    degree + 1,
                    coeffs.len()
                )));
            }
            for (k, c) in coeffs.iter().enumerate() {
                if (k % 2 == 1 || degree % 2 == 1) && *c != 0.0 {
                    return Err(invalid(format!(
                        "odd jet x^{} y^{k} = {c}: potentials must be even in x and y",
                        degree - k
                    )));
                }
            }
            if degree >= 2 && degree % 2 == 0 {
                table.set_order(degree, coeffs.iter().step_by(2).copied().collect())?;
            }
        }
        Ok(table)
    }

    /// Coefficients at `degree`, zeros if absent.
    pub fn order(&self, degree: usize) -> Vec<f64> {
        self.orders
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| vec![0.0; degree / 2 + 1])
    }

    pub fn orders(&self) -> &BTreeMap<usize, Vec<f64>> {
        &self.orders
    }

    /// `(a, b)` of the 2-jet `a x^2 + b y^2`.
    pub fn second_jet(&self) -> (f64, f64) {
        let c = self.order(2);
        (c[0], c[1])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderDiagnostics {
    pub degree: usize,
    /// Largest mode-solver residual `|f'' + lambda f - k|`.
    pub max_mode_residual: f64,
    /// Residual of the order equation evaluated on the stored coefficients.
    pub equation_residual: f64,
    pub boundary_mismatch: f64,
    /// `|U (U^-1 P) - P|` over all nodes.
    pub round_trip_error: f64,
    /// Smallest distance of a mode frequency to a multiple of pi.
    pub resonance_gap: f64,
    pub near_resonance: bool,
    /// `4 eps n > pi`: the mode problem is still uniquely solvable, but the
    /// order lies past the range where determinacy is established.
    pub above_first_resonance: bool,
}

#[derive(Debug, Clone)]
pub struct JetHierarchy {
    pub grid: Arc<TimeGrid>,
    pub path2: SecondJetPath,
    /// Degree `2m >= 4` to one series per EvenEven monomial, original axes.
    pub orders: BTreeMap<usize, Vec<CoefficientSeries>>,
    pub diagnostics: Vec<OrderDiagnostics>,
}

impl JetHierarchy {
    pub fn max_degree(&self) -> usize {
        self.orders.keys().next_back().copied().unwrap_or(2)
    }

    pub fn epsilon(&self) -> f64 {
        self.path2.epsilon.unwrap_or(0.0)
    }

    /// Coefficient series of one degree, including degree 2 as `[a, b]`.
    pub fn coefficients(&self, degree: usize) -> Option<Vec<CoefficientSeries>> {
        if degree == 2 {
            return Some(vec![self.path2.a.clone(), self.path2.b.clone()]);
        }
        self.orders.get(&degree).cloned()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub resonant_order: usize,
    /// `4 eps n = multiple * pi`
    pub multiple: usize,
    /// Weights on `D_x^(2n-2i) D_y^(2i) phi_1(0)`.
    pub u: Vec<f64>,
    /// Weights on `D_x^(2n-2i) D_y^(2i) phi_0(0)`.
    pub v: Vec<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    pub lhs: f64,
    pub residual: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone)]
pub enum Propagation {
    Complete(JetHierarchy),
    Obstructed {
        lower: JetHierarchy,
        report: ObstructionReport,
    },
}

impl Propagation {
    pub fn hierarchy(&self) -> &JetHierarchy {
        match self {
            Self::Complete(h) | Self::Obstructed { lower: h, .. } => h,
        }
    }

    pub fn obstruction(&self) -> Option<&ObstructionReport> {
        match self {
            Self::Complete(_) => None,
            Self::Obstructed { report, .. } => Some(report),
        }
    }
}

/// Internal frame: axes exchanged when `a` decreases, so that `A > 0`.
struct Frame {
    swapped: bool,
}

impl Frame {
    fn apply<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        if self.swapped {
            out.reverse();
        }
        out
    }
}

/// `U(A(t))` diagonal entries at node `i` (internal frame).
fn u_diag(path: &SecondJetPath, n: usize, i: usize) -> Vec<f64> {
    match &path.rate_ratio {
        Some(a) => (0..=n)
            .map(|idx| u_eigenvalue(2 * n - 2 * idx, 2 * idx, a.values()[i]))
            .collect(),
        None => vec![1.0; n + 1],
    }
}

fn resonance_of(eps: f64, n: usize) -> (usize, f64) {
    let omega = 4.0 * eps * n as f64;
    let j = (omega / PI).round().max(1.0);
    (j as usize, (omega - j * PI).abs())
}

/// Builds the 2-jet path and checks the hypotheses shared by all orders.
fn second_jet_path(
    phi0: &JetTable,
    phi1: &JetTable,
    grid: &Arc<TimeGrid>,
) -> Result<SecondJetPath> {
    let (a0, b0) = phi0.second_jet();
    let (a1, b1) = phi1.second_jet();
    let boundary = SecondJetBoundary::new(a0, b0, a1, b1)?;
    let path = solve_bvp(&boundary, grid)?;
    match path.class {
        CausalClass::SpaceLike | CausalClass::Stationary => Ok(path),
        class => Err(domain(format!(
            "higher jets need space-like 2-jets (sigma2 < 0), boundary is {class:?}"
        ))),
    }
}

pub fn propagate(
    phi0: &JetTable,
    phi1: &JetTable,
    max_order: usize,
    grid: &Arc<TimeGrid>,
) -> Result<Propagation> {
    if max_order < 2 || max_order % 2 == 1 {
        return Err(invalid(format!(
            "max order must be even and >= 2, got {max_order}"
        )));
    }
    let path2 = second_jet_path(phi0, phi1, grid)?;
    let mut hier = JetHierarchy {
        grid: Arc::clone(grid),
        path2,
        orders: BTreeMap::new(),
        diagnostics: Vec::new(),
    };
    for n in 2..=max_order / 2 {
        let degree = 2 * n;
        let (_, gap) = resonance_of(hier.epsilon(), n);
        if hier.path2.class == CausalClass::SpaceLike && gap < RESONANCE_TOL {
            let report = compatibility_check(&phi0.order(degree), &phi1.order(degree), &hier)?;
            return Ok(Propagation::Obstructed {
                lower: hier,
                report,
            });
        }
        let (coeffs, diag) = solve_order(&hier, n, &phi0.order(degree), &phi1.order(degree))?;
        hier.orders.insert(degree, coeffs);
        hier.diagnostics.push(diag);
    }
    Ok(Propagation::Complete(hier))
}

fn solve_order(
    hier: &JetHierarchy,
    n: usize,
    p0: &[f64],
    p1: &[f64],
) -> Result<(Vec<CoefficientSeries>, OrderDiagnostics)> {
    let grid = &hier.grid;
    let nodes = grid.node_count();
    let path = &hier.path2;
    let eps = hier.epsilon();
    let frame = Frame {
        swapped: path.swapped_axes,
    };
    let rhs = source_k1(hier, 2 * n)?;
    let to_q = q_coordinates_matrix(n)?;
    let q_matrix = to_q
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Internal("q-basis change is singular".into()))?;

    // q-coordinates of the source at every node and of the boundary jets
    let mut modes_src = DMatrix::zeros(n + 1, nodes);
    for i in 0..nodes {
        let u = u_diag(path, n, i);
        let r: Vec<f64> = rhs.iter().map(|s| s.values()[i]).collect();
        let r = frame.apply(&r);
        let qr = DVector::from_iterator(n + 1, r.iter().zip(&u).map(|(r, u)| r / u));
        modes_src.set_column(i, &(&to_q * qr));
    }
    let boundary_modes = |p: &[f64], i: usize| {
        let u = u_diag(path, n, i);
        let p = frame.apply(p);
        &to_q * DVector::from_iterator(n + 1, p.iter().zip(&u).map(|(p, u)| p / u))
    };
    let f0 = boundary_modes(p0, 0);
    let f1 = boundary_modes(p1, nodes - 1);

    let mut mode_values = DMatrix::zeros(n + 1, nodes);
    let mut max_mode_residual: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for k in 0..=n {
        let src =
            CoefficientSeries::new(Arc::clone(grid), modes_src.row(k).iter().copied().collect())?;
        let lambda = 16.0 * eps * eps * (k * k) as f64;
        let sol = solve_mode(&ModeProblem::new(lambda, src, f0[k], f1[k])?, grid)?;
        if eps > 0.0 && k > 0 {
            min_gap = min_gap.min(sol.resonance_gap);
        }
        if sol.resonance.is_some() {
            // resonance first appears in the top mode and stops propagation
            return Err(Error::Internal(format!(
                "unexpected resonance in mode {k} at degree {}",
                2 * n
            )));
        }
        let values = sol.values.expect("non-resonant modes are solved");
        max_mode_residual = max_mode_residual.max(sol.residual);
        for (i, v) in values.values().iter().enumerate() {
            mode_values[(k, i)] = *v;
        }
    }

    // back to monomial coefficients: P = U Q
    let mut p = vec![Vec::with_capacity(nodes); n + 1];
    let mut round_trip_error: f64 = 0.0;
    for i in 0..nodes {
        let u = u_diag(path, n, i);
        let q = &q_matrix * mode_values.column(i);
        let pint: Vec<f64> = q.iter().zip(&u).map(|(q, u)| q * u).collect();
        let back: Vec<f64> = pint.iter().zip(&u).map(|(p, u)| (p / u) * u).collect();
        for (a, b) in pint.iter().zip(&back) {
            round_trip_error = round_trip_error.max((a - b).abs());
        }
        for (col, v) in p.iter_mut().zip(frame.apply(&pint)) {
            col.push(v);
        }
    }
    let coeffs = p
        .into_iter()
        .map(|v| CoefficientSeries::new(Arc::clone(grid), v))
        .collect::<Result<Vec<_>>>()?;

    let boundary_mismatch = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (c.first() - p0[i]).abs().max((c.last() - p1[i]).abs()))
        .fold(0.0, f64::max);
    let equation_residual = order_equation_residual(path, &coeffs, &rhs)?;
    let (_, gap) = resonance_of(eps, n);
    let diag = OrderDiagnostics {
        degree: 2 * n,
        max_mode_residual,
        equation_residual,
        boundary_mismatch,
        round_trip_error,
        resonance_gap: if eps > 0.0 { min_gap } else { f64::INFINITY },
        near_resonance: eps > 0.0 && min_gap < NEAR_RESONANCE_TOL,
        above_first_resonance: eps > 0.0 && 4.0 * eps * n as f64 > PI && gap >= RESONANCE_TOL,
    };
    Ok((coeffs, diag))
}

/// Max nodewise residual of
/// `P'' + (a'' x^2 + b'' y^2) lap P / Z - 4 (a' x d_x + b' y d_y) P' / Z - rhs`
/// in the original axes, with spectral time derivatives of the stored
/// coefficients.
pub fn order_equation_residual(
    path: &SecondJetPath,
    coeffs: &[CoefficientSeries],
    rhs: &[CoefficientSeries],
) -> Result<f64> {
    let n = coeffs.len() - 1;
    let basis = PolyBasis::even(n)?;
    let d1: Vec<_> = coeffs.iter().map(|c| c.derivative()).collect();
    let d2: Vec<_> = d1.iter().map(|c| c.derivative()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..path.grid().node_count() {
        let (a, b) = (path.a.values()[i], path.b.values()[i]);
        let (ap, bp) = (path.a_prime.values()[i], path.b_prime.values()[i]);
        let z = 1.0 + 2.0 * a + 2.0 * b;
        let (app, bpp) = (4.0 * ap * ap / z, 4.0 * bp * bp / z);
        let mut out: Vec<f64> = (0..=n)
            .map(|r| d2[r].values()[i] - rhs[r].values()[i])
            .collect();
        for (col, (j, k)) in basis.monomials().into_iter().enumerate() {
            let p = coeffs[col].values()[i];
            let dp = d1[col].values()[i];
            let (jf, kf) = (j as f64, k as f64);
            // (a'' x^2 + b'' y^2) lap x^j y^k
            out[col] += (app * jf * (jf - 1.0) + bpp * kf * (kf - 1.0)) * p / z;
            if k >= 2 {
                out[col - 1] += app * kf * (kf - 1.0) * p / z;
            }
            if j >= 2 {
                out[col + 1] += bpp * jf * (jf - 1.0) * p / z;
            }
            out[col] -= 4.0 * (ap * jf + bp * kf) * dp / z;
        }
        worst = out.iter().fold(worst, |m, v| m.max(v.abs()));
    }
    Ok(worst)
}

/// Compatibility condition at a resonant degree `2n`, given the hierarchy
/// up to degree `2n - 2` and the prescribed top jets of both potentials.
pub fn compatibility_check(
    phi0_top: &[f64],
    phi1_top: &[f64],
    lower: &JetHierarchy,
) -> Result<ObstructionReport> {
    let degree = lower.max_degree() + 2;
    let n = degree / 2;
    let path = &lower.path2;
    if path.class != CausalClass::SpaceLike {
        return Err(Error::InvalidState(
            "compatibility check needs space-like 2-jets".into(),
        ));
    }
    let (multiple, gap) = resonance_of(lower.epsilon(), n);
    if gap >= RESONANCE_TOL {
        return Err(Error::InvalidState(format!(
            "degree {degree} is not resonant (4 eps n - j pi = {gap:.3e})"
        )));
    }
    for (name, top) in [("phi0", phi0_top), ("phi1", phi1_top)] {
        if top.len() != n + 1 {
            return Err(invalid(format!(
                "{name} top jet needs {} coefficients, got {}",
                n + 1,
                top.len()
            )));
        }
    }
    let a = path
        .rate_ratio
        .as_ref()
        .ok_or_else(|| Error::Internal("space-like path without A(t)".into()))?;
    let frame = Frame {
        swapped: path.swapped_axes,
    };
    let sign = if multiple % 2 == 0 { 1.0 } else { -1.0 };
    let fact = |i: usize| factorial(2 * n - 2 * i) * factorial(2 * i);

    // top q-coordinate of U^-1 rhs is D_{A(t)} applied to rhs
    let rhs = source_k1(lower, degree)?;
    let grid = &lower.grid;
    let jpi = multiple as f64 * PI;
    let mut weighted = Vec::with_capacity(grid.node_count());
    for (i, t) in grid.nodes().iter().enumerate() {
        let w = d_weights(n, a.values()[i])?;
        let r: Vec<f64> = rhs.iter().map(|s| s.values()[i]).collect();
        let kn: f64 = w.iter().zip(frame.apply(&r)).map(|(w, r)| w * r).sum();
        weighted.push(kn * (jpi * t).sin() / jpi);
    }
    let k = grid.quadrature(&weighted);

    let w0 = frame.apply(&d_weights(n, a.first())?);
    let w1 = frame.apply(&d_weights(n, a.last())?);
    let v: Vec<f64> = (0..=n).map(|i| w0[i] / fact(i)).collect();
    let u: Vec<f64> = (0..=n).map(|i| -sign * w1[i] / fact(i)).collect();
    let lhs: f64 = (0..=n)
        .map(|i| v[i] * fact(i) * phi0_top[i] + u[i] * fact(i) * phi1_top[i])
        .sum();
    let residual = (lhs - k).abs();
    Ok(ObstructionReport {
        resonant_order: degree,
        multiple,
        u,
        v,
        k,
        lhs,
        residual,
        satisfied: residual < COMPATIBILITY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<TimeGrid> {
        TimeGrid::new(64).unwrap()
    }

    fn two_jet(a: f64, b: f64) -> JetTable {
        JetTable::new().with_order(2, vec![a, b]).unwrap()
    }

    #[test]
    fn jet_table_validation() {
        assert!(JetTable::new().with_order(3, vec![0.0; 2]).is_err());
        assert!(JetTable::new().with_order(4, vec![0.0; 2]).is_err());
        let mut full = BTreeMap::new();
        full.insert(2, vec![1.0, 0.0, 2.0]);
        full.insert(4, vec![0.0, 0.5, 0.0, 0.0, 0.0]);
        assert!(JetTable::from_full(&full).is_err());
        full.insert(4, vec![0.1, 0.0, 0.2, 0.0, 0.3]);
        let t = JetTable::from_full(&full).unwrap();
        assert_eq!(t.order(4), vec![0.1, 0.2, 0.3]);
        assert_eq!(t.second_jet(), (1.0, 2.0));
        assert_eq!(t.order(6), vec![0.0; 4]);
    }

    #[test]
    fn zero_data_gives_zero_hierarchy() {
        let z = JetTable::new();
        let p = propagate(&z, &z, 10, &grid()).unwrap();
        let Propagation::Complete(h) = p else {
            panic!("zero data cannot obstruct")
        };
        assert_eq!(h.max_degree(), 10);
        for series in h.orders.values() {
            assert!(series.iter().all(|s| s.max_abs() == 0.0));
        }
    }

    #[test]
    fn time_like_is_rejected() {
        let e = propagate(&JetTable::new(), &two_jet(0.25, 0.25), 4, &grid()).unwrap_err();
        assert!(matches!(e, Error::Domain(_)));
    }

    #[test]
    fn first_step_has_no_source() {
        let c = 0.5 * (PI / 12.0).sin();
        let phi1 = two_jet(c, -c)
            .with_order(4, vec![0.01, -0.02, 0.03])
            .unwrap();
        let p = propagate(&JetTable::new(), &phi1, 4, &grid()).unwrap();
        let h = p.hierarchy();
        let rhs = source_k1(h, 4).unwrap();
        assert!(rhs.iter().all(|s| s.max_abs() == 0.0));
        let d = &h.diagnostics[0];
        assert!(d.equation_residual < 1e-7, "{d:?}");
        assert!(d.boundary_mismatch < 1e-13, "{d:?}");
    }

    #[test]
    fn generic_propagation_to_order_ten() {
        let c = 0.5 * (PI / 12.0).sin();
        let phi0 = two_jet(0.0, 0.0)
            .with_order(4, vec![0.02, 0.0, -0.01])
            .unwrap();
        let phi1 = two_jet(c, -c)
            .with_order(4, vec![-0.03, 0.01, 0.02])
            .unwrap()
            .with_order(6, vec![0.001, 0.002, -0.001, 0.003])
            .unwrap();
        let p = propagate(&phi0, &phi1, 10, &grid()).unwrap();
        let Propagation::Complete(h) = p else {
            panic!("eps = pi/24 stays below resonance through degree 10")
        };
        for d in &h.diagnostics {
            assert!(d.max_mode_residual < 1e-7, "{d:?}");
            assert!(d.equation_residual < 1e-6, "{d:?}");
            assert!(d.boundary_mismatch < 1e-12, "{d:?}");
            assert!(d.round_trip_error < 1e-11, "{d:?}");
            assert!(!d.above_first_resonance);
        }
    }

    #[test]
    fn swapped_axes_mirror_the_hierarchy() {
        let c = 0.5 * (PI / 10.0).sin();
        let phi0 = two_jet(0.01, 0.02)
            .with_order(4, vec![0.02, 0.005, -0.01])
            .unwrap();
        let phi1 = two_jet(c, -c)
            .with_order(4, vec![-0.03, 0.01, 0.02])
            .unwrap();
        let mirror = |t: &JetTable| {
            let mut m = JetTable::new();
            for (d, c) in t.orders() {
                let mut c = c.clone();
                c.reverse();
                m.set_order(*d, c).unwrap();
            }
            m
        };
        let g = grid();
        let h = propagate(&phi0, &phi1, 8, &g).unwrap();
        let hm = propagate(&mirror(&phi0), &mirror(&phi1), 8, &g).unwrap();
        assert!(!h.hierarchy().path2.swapped_axes);
        assert!(hm.hierarchy().path2.swapped_axes);
        for (d, series) in &h.hierarchy().orders {
            let other = &hm.hierarchy().orders[d];
            for (i, s) in series.iter().enumerate() {
                let m = &other[series.len() - 1 - i];
                assert!(s.max_abs_diff(m).unwrap() < 1e-10);
            }
        }
        for d in &hm.hierarchy().diagnostics {
            assert!(d.equation_residual < 1e-6, "{d:?}");
        }
    }

    #[test]
    fn resonance_at_predicted_order() {
        // eps = pi / 12 resonates at degree 6
        let c = 0.5 * (PI / 6.0).sin();
        let phi1 = two_jet(c, -c);
        let p = propagate(&JetTable::new(), &phi1, 10, &grid()).unwrap();
        let r = p.obstruction().expect("resonance at degree 6");
        assert_eq!(r.resonant_order, 6);
        assert_eq!(r.multiple, 1);
        assert_eq!(p.hierarchy().max_degree(), 4);
        // zero higher data and zero lower jets: everything vanishes
        assert!(r.k.abs() < 1e-14 && r.lhs == 0.0 && r.satisfied);
    }

    #[test]
    fn compatibility_rejects_non_resonant_order() {
        let c = 0.5 * (PI / 12.0).sin();
        let p = propagate(&JetTable::new(), &two_jet(c, -c), 4, &grid()).unwrap();
        let e = compatibility_check(&[0.0; 4], &[0.0; 4], p.hierarchy()).unwrap_err();
        assert!(matches!(e, Error::InvalidState(_)));
    }

    #[test]
    fn propagation_is_deterministic() {
        let c = 0.5 * (PI / 12.0).sin();
        let phi1 = two_jet(c, -c)
            .with_order(4, vec![0.01, 0.02, 0.03])
            .unwrap();
        let g = grid();
        let a = propagate(&JetTable::new(), &phi1, 8, &g).unwrap();
        let b = propagate(&JetTable::new(), &phi1, 8, &g).unwrap();
        for (d, s) in &a.hierarchy().orders {
            for (x, y) in s.iter().zip(&b.hierarchy().orders[d]) {
                assert_eq!(x.values(), y.values());
            }
        }
    }
}
