use super::{PolyBasis, PolyVector};
use crate::error::Result;

/// Dense polynomial in `x, y` of total degree at most `max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bivariate {
    max_degree: usize,
    // row-major in (j, k), j + k <= max_degree uses the lower-left triangle
    coeffs: Vec<f64>,
}

impl Bivariate {
    pub fn zeros(max_degree: usize) -> Self {
        Self {
            max_degree,
            coeffs: vec![0.0; (max_degree + 1) * (max_degree + 1)],
        }
    }

    fn idx(&self, j: usize, k: usize) -> usize {
        j * (self.max_degree + 1) + k
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        if j + k > self.max_degree {
            0.0
        } else {
            self.coeffs[self.idx(j, k)]
        }
    }

    /// Adds `c x^j y^k`. Panics beyond `max_degree`.
    pub fn add_term(&mut self, j: usize, k: usize, c: f64) {
        assert!(
            j + k <= self.max_degree,
            "x^{j} y^{k} exceeds degree {}",
            self.max_degree
        );
        let i = self.idx(j, k);
        self.coeffs[i] += c;
    }

    /// Adds `scale * v`, a homogeneous polynomial given in a monomial basis.
    pub fn add_homogeneous(&mut self, v: &PolyVector, scale: f64) {
        for ((j, k), c) in v.basis().monomials().into_iter().zip(v.coeffs()) {
            self.add_term(j, k, scale * c);
        }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let d = self.max_degree;
        (0..=d).flat_map(move |j| (0..=d - j).map(move |k| (j, k, self.get(j, k))))
    }

    pub fn dx(&self) -> Self {
        let mut out = Self::zeros(self.max_degree);
        for (j, k, c) in self.terms() {
            if j > 0 && c != 0.0 {
                out.add_term(j - 1, k, j as f64 * c);
            }
        }
        out
    }

    pub fn dy(&self) -> Self {
        let mut out = Self::zeros(self.max_degree);
        for (j, k, c) in self.terms() {
            if k > 0 && c != 0.0 {
                out.add_term(j, k - 1, k as f64 * c);
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = self.dx().dx();
        let yy = self.dy().dy();
        for (c, d) in out.coeffs.iter_mut().zip(&yy.coeffs) {
            *c += d;
        }
        out
    }

    /// Degree-`degree` part of `self * other`, exact in the sense that no
    /// contributing term is truncated.
    pub fn product_part(&self, other: &Self, degree: usize) -> Self {
        let mut out = Self::zeros(degree.max(self.max_degree));
        for (j1, k1, c1) in self.terms() {
            if c1 == 0.0 || j1 + k1 > degree {
                continue;
            }
            let rest = degree - j1 - k1;
            for j2 in 0..=rest {
                let c2 = other.get(j2, rest - j2);
                if c2 != 0.0 {
                    out.add_term(j1 + j2, k1 + rest - j2, c1 * c2);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self, scale: f64) -> Self {
        let d = self.max_degree.max(other.max_degree);
        let mut out = Self::zeros(d);
        for (j, k, c) in self
            .terms()
            .chain(other.terms().map(|(j, k, c)| (j, k, scale * c)))
        {
            if c != 0.0 {
                out.add_term(j, k, c);
            }
        }
        out
    }

    /// Homogeneous part of the given degree in `basis` ordering. Monomials
    /// of that degree outside the basis are dropped.
    pub fn homogeneous_part(&self, basis: PolyBasis) -> Result<PolyVector> {
        let c = basis
            .monomials()
            .into_iter()
            .map(|(j, k)| self.get(j, k))
            .collect();
        PolyVector::new(basis, c)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.terms()
            .map(|(j, k, c)| c * x.powi(j as i32) * y.powi(k as i32))
            .sum()
    }
}
