use std::sync::Arc;

use super::JetHierarchy;
use crate::error::{Error, Result};
use crate::poly_ops::{Bivariate, PolyBasis};
use crate::timegrid::CoefficientSeries;

/// Time derivatives of the lower jets at one node, as polynomials.
pub(crate) struct LowerJets {
    pub l: Bivariate,
    pub l1: Bivariate,
    pub l2: Bivariate,
}

/// Spectral time derivatives of every stored order, computed once.
pub(crate) struct LowerSeries {
    orders: Vec<(PolyBasis, Vec<[Vec<f64>; 3]>)>,
}

impl LowerSeries {
    pub fn new(lower: &JetHierarchy, below_degree: usize) -> Result<Self> {
        let mut orders = Vec::new();
        for degree in (4..below_degree).step_by(2) {
            let coeffs = lower.orders.get(&degree).ok_or_else(|| {
                Error::InvalidState(format!(
                    "order {degree} missing while building the degree-{below_degree} source"
                ))
            })?;
            let series = coeffs
                .iter()
                .map(|c| {
                    let d1 = c.derivative();
                    let d2 = d1.derivative();
                    [c.values().to_vec(), d1.into_values(), d2.into_values()]
                })
                .collect();
            orders.push((
                PolyBasis::new(degree, crate::poly_ops::Parity::EvenEven)?,
                series,
            ));
        }
        Ok(Self { orders })
    }

    pub fn at_node(&self, lower: &JetHierarchy, i: usize, max_degree: usize) -> LowerJets {
        let p = &lower.path2;
        let (a, b) = (p.a.values()[i], p.b.values()[i]);
        let (ap, bp) = (p.a_prime.values()[i], p.b_prime.values()[i]);
        let z = 1.0 + 2.0 * a + 2.0 * b;
        let mut l = Bivariate::zeros(max_degree);
        let mut l1 = Bivariate::zeros(max_degree);
        let mut l2 = Bivariate::zeros(max_degree);
        l.add_term(2, 0, a);
        l.add_term(0, 2, b);
        l1.add_term(2, 0, ap);
        l1.add_term(0, 2, bp);
        l2.add_term(2, 0, 4.0 * ap * ap / z);
        l2.add_term(0, 2, 4.0 * bp * bp / z);
        for (basis, series) in &self.orders {
            for ((j, k), s) in basis.monomials().into_iter().zip(series) {
                l.add_term(j, k, s[0][i]);
                l1.add_term(j, k, s[1][i]);
                l2.add_term(j, k, s[2][i]);
            }
        }
        LowerJets { l, l1, l2 }
    }
}

/// Degree-`degree` part of `-(lap L) L'' + |grad L'|^2`.
pub(crate) fn k1_polynomial(jets: &LowerJets, degree: usize) -> Bivariate {
    let lap = jets.l.laplacian();
    let (gx, gy) = (jets.l1.dx(), jets.l1.dy());
    gx.product_part(&gx, degree)
        .add(&gy.product_part(&gy, degree), 1.0)
        .add(&lap.product_part(&jets.l2, degree), -1.0)
}

/// Right-hand side `K1(L) / (1 + 2a + 2b)` of the degree-`target_degree`
/// equation, one series per EvenEven monomial (original axes).
pub fn source_k1(lower: &JetHierarchy, target_degree: usize) -> Result<Vec<CoefficientSeries>> {
    let basis = PolyBasis::new(target_degree, crate::poly_ops::Parity::EvenEven)?;
    if target_degree < 4 {
        return Err(Error::InvalidArgument(format!(
            "sources start at degree 4, got {target_degree}"
        )));
    }
    let series = LowerSeries::new(lower, target_degree)?;
    let grid = Arc::clone(&lower.grid);
    let z = lower.path2.z();
    let mut cols = vec![Vec::with_capacity(grid.node_count()); basis.dim()];
    for i in 0..grid.node_count() {
        let jets = series.at_node(lower, i, target_degree);
        let k1 = k1_polynomial(&jets, target_degree);
        for (col, (j, k)) in cols.iter_mut().zip(basis.monomials()) {
            col.push(k1.get(j, k) / z.values()[i]);
        }
    }
    cols.into_iter()
        .map(|v| CoefficientSeries::new(Arc::clone(&grid), v))
        .collect()
}
