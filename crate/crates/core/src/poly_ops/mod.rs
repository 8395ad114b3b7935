//! Linear operators on homogeneous polynomials in `x, y` of a fixed even
//! degree, stored as dense matrices over a monomial basis.
//!
//! Monomials `x^j y^k` are always ordered by descending `j`.

mod bivariate;
mod exact;
mod operators;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use bivariate::Bivariate;
pub use operators::{
    apply_d_operator, boost, boost_squared, conjugation_identity_residual, d_weights,
    dtilde_coefficients, eigenbasis_q, op_ea, op_sa, op_u, q_coefficient_matrix,
    q_coordinates_matrix, u_eigenvalue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// Only `x^j y^k` with `j` and `k` both even.
    EvenEven,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyBasis {
    degree: usize,
    parity: Parity,
}

impl PolyBasis {
    pub fn new(degree: usize, parity: Parity) -> Result<Self> {
        if degree == 0 || degree % 2 == 1 {
            return Err(invalid(format!(
                "polynomial degree must be even and positive, got {degree}"
            )));
        }
        Ok(Self { degree, parity })
    }

    /// EvenEven basis of degree `2n`.
    pub fn even(n: usize) -> Result<Self> {
        Self::new(2 * n, Parity::EvenEven)
    }

    /// Full basis of degree `2n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(2 * n, Parity::Full)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Half the degree.
    pub fn n(&self) -> usize {
        self.degree / 2
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        match self.parity {
            Parity::EvenEven => self.n() + 1,
            Parity::Full => self.degree + 1,
        }
    }

    /// Exponent pair `(j, k)` of basis element `i`.
    pub fn monomial(&self, i: usize) -> (usize, usize) {
        let k = match self.parity {
            Parity::EvenEven => 2 * i,
            Parity::Full => i,
        };
        (self.degree - k, k)
    }

    pub fn monomials(&self) -> Vec<(usize, usize)> {
        (0..self.dim()).map(|i| self.monomial(i)).collect()
    }

    pub fn index_of(&self, j: usize, k: usize) -> Option<usize> {
        if j + k != self.degree {
            return None;
        }
        match self.parity {
            Parity::EvenEven if j.is_multiple_of(2) => Some(k / 2),
            Parity::EvenEven => None,
            Parity::Full => Some(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyVector {
    basis: PolyBasis,
    coeffs: Vec<f64>,
}

impl PolyVector {
    pub fn new(basis: PolyBasis, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.dim() {
            return Err(invalid(format!(
                "{} coefficients for a basis of dimension {}",
                coeffs.len(),
                basis.dim()
            )));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn zeros(basis: PolyBasis) -> Self {
        Self {
            basis,
            coeffs: vec![0.0; basis.dim()],
        }
    }

    pub fn basis(&self) -> PolyBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of `x^j y^k`, zero if the monomial is not in the basis.
    pub fn coeff(&self, j: usize, k: usize) -> f64 {
        self.basis.index_of(j, k).map_or(0.0, |i| self.coeffs[i])
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.basis
            .monomials()
            .iter()
            .zip(&self.coeffs)
            .map(|(&(j, k), c)| c * x.powi(j as i32) * y.powi(k as i32))
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.basis != other.basis {
            return Err(invalid("polynomial vectors live in different bases"));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyOperator {
    domain: PolyBasis,
    codomain: PolyBasis,
    matrix: DMatrix<f64>,
}

impl PolyOperator {
    pub fn new(domain: PolyBasis, codomain: PolyBasis, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(invalid(format!(
                "operator matrix is {:?}, expected {}x{}",
                matrix.shape(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(Self {
            domain,
            codomain,
            matrix,
        })
    }

    /// Builds the matrix from the image of every domain monomial, given as
    /// `((j, k), coefficient)` terms. Terms outside the codomain are a bug in
    /// the caller.
    pub(crate) fn from_monomial_action(
        domain: PolyBasis,
        codomain: PolyBasis,
        action: impl Fn(usize, usize) -> Vec<((usize, usize), f64)>,
    ) -> Self {
        let mut m = DMatrix::zeros(codomain.dim(), domain.dim());
        for (col, (j, k)) in domain.monomials().into_iter().enumerate() {
            for ((jj, kk), c) in action(j, k) {
                if c == 0.0 {
                    continue;
                }
                let row = codomain
                    .index_of(jj, kk)
                    .unwrap_or_else(|| panic!("x^{jj} y^{kk} is outside {codomain:?}"));
                m[(row, col)] += c;
            }
        }
        Self {
            domain,
            codomain,
            matrix: m,
        }
    }

    pub fn diagonal(basis: PolyBasis, entry: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_monomial_action(basis, basis, |j, k| vec![((j, k), entry(j, k))])
    }

    pub fn domain(&self) -> PolyBasis {
        self.domain
    }

    pub fn codomain(&self) -> PolyBasis {
        self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &PolyVector) -> Result<PolyVector> {
        if v.basis != self.domain {
            return Err(invalid(format!(
                "operator expects {:?}, got {:?}",
                self.domain, v.basis
            )));
        }
        let out = &self.matrix * nalgebra::DVector::from_column_slice(&v.coeffs);
        Ok(PolyVector {
            basis: self.codomain,
            coeffs: out.as_slice().to_vec(),
        })
    }

    /// `self ∘ rhs`
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if rhs.codomain != self.domain {
            return Err(invalid("operator composition: bases do not chain"));
        }
        Ok(Self {
            domain: rhs.domain,
            codomain: self.codomain,
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if rhs.domain != self.domain || rhs.codomain != self.codomain {
            return Err(invalid("operator difference: bases differ"));
        }
        Ok(Self {
            domain: self.domain,
            codomain: self.codomain,
            matrix: &self.matrix - &rhs.matrix,
        })
    }

    pub fn try_inverse(&self) -> Result<Self> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("operator is singular".into()))?;
        Ok(Self {
            domain: self.codomain,
            codomain: self.domain,
            matrix: inv,
        })
    }

    /// Largest entry in absolute value.
    pub fn max_abs(&self) -> f64 {
        self.matrix.amax()
    }
}
