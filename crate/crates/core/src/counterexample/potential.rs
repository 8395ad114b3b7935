use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::jet_propagation::JetTable;

/// `coeff * sin(x)^sin_x_power * sin(y)^sin_y_power`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub coeff: f64,
    pub sin_x_power: u32,
    pub sin_y_power: u32,
}

/// Parameters of a member of the `h_n` / `h~_n` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
}

/// An even trigonometric potential on the flat torus vanishing at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPotential {
    terms: Vec<TrigTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<FamilyParams>,
}

impl TorusPotential {
    pub fn new(terms: Vec<TrigTerm>) -> Result<Self> {
        for t in &terms {
            if !t.coeff.is_finite() {
                return Err(invalid(format!("non-finite coefficient {}", t.coeff)));
            }
            if t.sin_x_power % 2 == 1 || t.sin_y_power % 2 == 1 {
                return Err(invalid(format!(
                    "sin(x)^{} sin(y)^{} is odd; potentials must be even",
                    t.sin_x_power, t.sin_y_power
                )));
            }
            if t.sin_x_power == 0 && t.sin_y_power == 0 && t.coeff != 0.0 {
                return Err(invalid("potentials are normalized to vanish at the origin"));
            }
        }
        Ok(Self {
            terms,
            family: None,
        })
    }

    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            family: None,
        }
    }

    pub(crate) fn with_family(mut self, family: FamilyParams) -> Self {
        self.family = Some(family);
        self
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn family(&self) -> Option<FamilyParams> {
        self.family
    }

    /// Re-validates after deserialization.
    pub fn validated(self) -> Result<Self> {
        let family = self.family;
        let mut p = Self::new(self.terms)?;
        p.family = family;
        Ok(p)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let (sx, sy) = (x.sin(), y.sin());
        self.terms
            .iter()
            .map(|t| t.coeff * sx.powi(t.sin_x_power as i32) * sy.powi(t.sin_y_power as i32))
            .sum()
    }

    /// The same potential with `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| TrigTerm {
                    coeff: t.coeff,
                    sin_x_power: t.sin_y_power,
                    sin_y_power: t.sin_x_power,
                })
                .collect(),
            family: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }
}

/// Exact Taylor coefficients of `sin(u)^2` up to `u^max_degree`, indexed by
/// degree: `sin^2 u = sum_k (-1)^(k+1) 2^(2k-1) u^(2k) / (2k)!`.
pub fn sin_squared_series(max_degree: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); max_degree + 1];
    let mut fact = BigInt::one();
    for d in 1..=max_degree {
        fact *= BigInt::from(d);
        if d % 2 == 0 {
            let k = d / 2;
            let num = BigInt::one() << (2 * k - 1);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out[d] = BigRational::new(num * BigInt::from(sign), fact.clone());
        }
    }
    out
}

fn truncated_mul(a: &[BigRational], b: &[BigRational], max_degree: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); max_degree + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(max_degree + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Exact Taylor coefficients of `sin(u)^(2p)` up to `u^max_degree`.
pub fn sin_power_series(power: u32, max_degree: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); max_degree + 1];
    out[0] = BigRational::one();
    let s2 = sin_squared_series(max_degree);
    for _ in 0..power / 2 {
        out = truncated_mul(&out, &s2, max_degree);
    }
    out
}

/// Taylor coefficients at the origin up to total degree `order`, computed
/// exactly per term and rounded once when scaled by the term coefficient.
pub fn jets_at_origin(potential: &TorusPotential, order: usize) -> Result<JetTable> {
    if order < 2 || order % 2 == 1 {
        return Err(invalid(format!(
            "jet order must be even and >= 2, got {order}"
        )));
    }
    let mut acc: Vec<Vec<f64>> = (0..=order / 2).map(|half| vec![0.0; half + 1]).collect();
    for t in &potential.terms {
        let sx = sin_power_series(t.sin_x_power, order);
        let sy = sin_power_series(t.sin_y_power, order);
        for (j, cx) in sx.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (k, cy) in sy.iter().enumerate().take(order + 1 - j) {
                if cy.is_zero() {
                    continue;
                }
                let exact = (cx * cy).to_f64().unwrap_or(f64::NAN);
                // index of x^j y^k in the EvenEven list of degree j + k
                acc[(j + k) / 2][k / 2] += t.coeff * exact;
            }
        }
    }
    let mut table = JetTable::new();
    for (half, coeffs) in acc.into_iter().enumerate().skip(1) {
        table.set_order(2 * half, coeffs)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sin_squared_to_order_six() {
        let s = sin_squared_series(6);
        assert_eq!(s[2], r(1, 1));
        assert_eq!(s[4], r(-1, 3));
        assert_eq!(s[6], r(2, 45));
        assert!(s[1].is_zero() && s[3].is_zero() && s[0].is_zero());
    }

    #[test]
    fn sin_fourth_power() {
        // sin^4 u = u^4 - 2u^6/3 + ...
        let s = sin_power_series(4, 6);
        assert_eq!(s[4], r(1, 1));
        assert_eq!(s[6], r(-2, 3));
    }

    #[test]
    fn rejects_odd_and_constant_terms() {
        let odd = TrigTerm {
            coeff: 1.0,
            sin_x_power: 1,
            sin_y_power: 0,
        };
        assert!(TorusPotential::new(vec![odd]).is_err());
        let constant = TrigTerm {
            coeff: 1.0,
            sin_x_power: 0,
            sin_y_power: 0,
        };
        assert!(TorusPotential::new(vec![constant]).is_err());
    }

    #[test]
    fn mixed_term_jets() {
        let p = TorusPotential::new(vec![TrigTerm {
            coeff: 3.0,
            sin_x_power: 2,
            sin_y_power: 2,
        }])
        .unwrap();
        let j = jets_at_origin(&p, 6).unwrap();
        assert_eq!(j.order(2), vec![0.0, 0.0]);
        assert_eq!(j.order(4), vec![0.0, 3.0, 0.0]);
        // 3 (x^2 - x^4/3)(y^2 - y^4/3) at degree 6
        assert_eq!(j.order(6), vec![0.0, -1.0, -1.0, 0.0]);
    }
}
