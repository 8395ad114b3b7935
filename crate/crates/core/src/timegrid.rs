//! Chebyshev-Lobatto collocation on the unit time interval.
//!
//! Every time-dependent scalar in the crate (second jets, mode amplitudes,
//! sources) is a [`CoefficientSeries`]: samples at the nodes of one shared
//! [`TimeGrid`]. Differentiation is the dense spectral matrix, integration is
//! Clenshaw-Curtis, and cumulative integrals go through the Chebyshev
//! coefficients of the samples.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::numeric::compensated_sum;

/// Smallest grid accepted by [`TimeGrid::new`].
pub const MIN_NODES: usize = 8;

/// Grid size used when callers do not ask for one.
pub const DEFAULT_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    diff: DMatrix<f64>,
    weights: Vec<f64>,
    cumint: DMatrix<f64>,
}

impl TimeGrid {
    /// Chebyshev-Gauss-Lobatto grid with `node_count` points on `[0, 1]`.
    pub fn new(node_count: usize) -> Result<Arc<Self>> {
        if node_count < MIN_NODES {
            return Err(invalid(format!(
                "time grid needs at least {MIN_NODES} nodes, got {node_count}"
            )));
        }
        let n = node_count - 1;
        let nf = n as f64;
        // t_j = (1 - cos(pi j / N)) / 2, written so both ends are exact.
        let nodes: Vec<f64> = (0..=n)
            .map(|j| {
                let s = (PI * j as f64 / (2.0 * nf)).sin();
                s * s
            })
            .collect();
        let diff = chebyshev_diff_matrix(n);
        let weights = clenshaw_curtis_weights(n);
        let cumint = cumulative_integration_matrix(n);
        Ok(Arc::new(Self {
            nodes,
            diff,
            weights,
            cumint,
        }))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// First-derivative matrix in the `t` coordinate.
    pub fn diff_matrix(&self) -> &DMatrix<f64> {
        &self.diff
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Matrix mapping samples of `g` to samples of `t -> int_0^t g`.
    pub fn cumint_matrix(&self) -> &DMatrix<f64> {
        &self.cumint
    }

    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.node_count());
        let v = DVector::from_column_slice(values);
        (&self.diff * v).as_slice().to_vec()
    }

    pub fn quadrature(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.node_count());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn cumulative(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.node_count());
        let v = DVector::from_column_slice(values);
        (&self.cumint * v).as_slice().to_vec()
    }
}

/// Spectral first-derivative matrix on `t_j = (1 - cos(pi j / N)) / 2`.
///
/// Off-diagonal node differences use the product-of-sines form and the
/// diagonal is the negative row sum, so constants are annihilated to roundoff.
fn chebyshev_diff_matrix(n: usize) -> DMatrix<f64> {
    let nf = n as f64;
    let c = |j: usize| {
        let base = if j == 0 || j == n { 2.0 } else { 1.0 };
        if j.is_multiple_of(2) {
            base
        } else {
            -base
        }
    };
    let mut d = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i == j {
                continue;
            }
            // x_i - x_j for x_k = cos(pi k / N)
            let dx = 2.0
                * (PI * (i + j) as f64 / (2.0 * nf)).sin()
                * (PI * (j as f64 - i as f64) / (2.0 * nf)).sin();
            d[(i, j)] = c(i) / c(j) / dx;
        }
    }
    for i in 0..=n {
        d[(i, i)] = -compensated_sum((0..=n).filter(|&j| j != i).map(|j| d[(i, j)]));
    }
    // dx/dt = -2
    d * -2.0
}

fn clenshaw_curtis_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut w = vec![0.0; n + 1];
    let mut interior = vec![1.0; n.saturating_sub(1)];
    for (idx, v) in interior.iter_mut().enumerate() {
        let theta = PI * (idx + 1) as f64 / nf;
        if n.is_multiple_of(2) {
            for k in 1..n / 2 {
                let kf = k as f64;
                *v -= 2.0 * (2.0 * kf * theta).cos() / (4.0 * kf * kf - 1.0);
            }
            *v -= (nf * theta).cos() / (nf * nf - 1.0);
        } else {
            for k in 1..=(n - 1) / 2 {
                let kf = k as f64;
                *v -= 2.0 * (2.0 * kf * theta).cos() / (4.0 * kf * kf - 1.0);
            }
        }
    }
    let end = if n.is_multiple_of(2) {
        1.0 / (nf * nf - 1.0)
    } else {
        1.0 / (nf * nf)
    };
    w[0] = end;
    w[n] = end;
    for (idx, v) in interior.iter().enumerate() {
        w[idx + 1] = 2.0 * v / nf;
    }
    // [-1, 1] -> [0, 1]
    w.iter().map(|x| 0.5 * x).collect()
}

/// Values -> Chebyshev coefficients -> termwise antiderivative -> values.
fn cumulative_integration_matrix(n: usize) -> DMatrix<f64> {
    let nf = n as f64;
    let cos_kj = |k: usize, j: usize| (PI * ((k * j) % (2 * n)) as f64 / nf).cos();

    // f = sum_k b_k T_k
    let mut coef = DMatrix::<f64>::zeros(n + 1, n + 1);
    for k in 0..=n {
        for j in 0..=n {
            let half_j = if j == 0 || j == n { 0.5 } else { 1.0 };
            let half_k = if k == 0 || k == n { 0.5 } else { 1.0 };
            coef[(k, j)] = 2.0 / nf * half_j * half_k * cos_kj(k, j);
        }
    }

    // F = sum_k c_k T_k, k = 0..=N+1, with F' = f in x.
    let mut anti = DMatrix::<f64>::zeros(n + 2, n + 1);
    for k in 0..=n {
        match k {
            0 => anti[(1, 0)] += 1.0,
            1 => anti[(2, 1)] += 0.25,
            _ => {
                let kf = k as f64;
                anti[(k + 1, k)] += 0.5 / (kf + 1.0);
                anti[(k - 1, k)] -= 0.5 / (kf - 1.0);
            }
        }
    }

    // int_0^{t_j} g dt = (F(x_0) - F(x_j)) / 2 since t = (1 - x) / 2.
    let mut eval = DMatrix::<f64>::zeros(n + 1, n + 2);
    for j in 0..=n {
        for k in 0..=n + 1 {
            eval[(j, k)] = 0.5 * (1.0 - cos_kj(k, j));
        }
    }
    eval * anti * coef
}

/// One time-dependent scalar sampled on a [`TimeGrid`].
#[derive(Debug, Clone)]
pub struct CoefficientSeries {
    grid: Arc<TimeGrid>,
    values: Vec<f64>,
}

impl CoefficientSeries {
    pub fn new(grid: Arc<TimeGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(invalid(format!(
                "series has {} samples but the grid has {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &Arc<TimeGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn constant(grid: &Arc<TimeGrid>, c: f64) -> Self {
        Self::from_fn(grid, |_| c)
    }

    pub fn zeros(grid: &Arc<TimeGrid>) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn derivative(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.grid.differentiate(&self.values),
        }
    }

    /// Clenshaw-Curtis quadrature over `[0, 1]`.
    pub fn integrate(&self) -> f64 {
        self.grid.quadrature(&self.values)
    }

    /// Samples of `t -> int_0^t self`.
    pub fn cumulative_integral(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.grid.cumulative(&self.values),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Nodewise `f(t, v)`.
    pub fn map_with_time(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self
                .grid
                .nodes()
                .iter()
                .zip(&self.values)
                .map(|(&t, &v)| f(t, v))
                .collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        let (l, r) = (self.grid.node_count(), other.grid.node_count());
        if l != r {
            return Err(Error::GridMismatch { left: l, right: r });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}
