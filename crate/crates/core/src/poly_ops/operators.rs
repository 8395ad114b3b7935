use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{exact, PolyBasis, PolyOperator, PolyVector};
use crate::error::{invalid, Error, Result};

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("A must be positive and finite, got {a}")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("polynomial half-degree n must be at least 1"));
    }
    Ok(())
}

/// `x d/dy + y d/dx` on the full basis of degree `2n`.
pub fn boost(n: usize) -> Result<PolyOperator> {
    check_n(n)?;
    let basis = PolyBasis::full(n)?;
    Ok(PolyOperator::from_monomial_action(basis, basis, |j, k| {
        let mut out = Vec::with_capacity(2);
        if k > 0 {
            out.push(((j + 1, k - 1), k as f64));
        }
        if j > 0 {
            out.push(((j - 1, k + 1), j as f64));
        }
        out
    }))
}

/// The square of the boost, restricted to the EvenEven basis.
pub fn boost_squared(n: usize) -> Result<PolyOperator> {
    check_n(n)?;
    let basis = PolyBasis::even(n)?;
    Ok(PolyOperator::from_monomial_action(basis, basis, |j, k| {
        let (jf, kf) = (j as f64, k as f64);
        let mut out = vec![((j, k), 2.0 * jf * kf + jf + kf)];
        if k >= 2 {
            out.push(((j + 2, k - 2), kf * (kf - 1.0)));
        }
        if j >= 2 {
            out.push(((j - 2, k + 2), jf * (jf - 1.0)));
        }
        out
    }))
}

fn binomial_row(p: usize, sign: i64) -> Vec<BigInt> {
    // coefficients of x^{p-i} y^i in (x + sign y)^p
    let mut row = vec![BigInt::one()];
    for i in 0..p {
        let prev = row[i].clone();
        row.push(prev * BigInt::from(p - i) / BigInt::from(i + 1));
    }
    for (i, c) in row.iter_mut().enumerate() {
        if sign < 0 && i % 2 == 1 {
            *c = -c.clone();
        }
    }
    row
}

fn product_y_powers(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Exact coefficients of the eigenvectors
/// `q_k = (x+y)^(n+k) (x-y)^(n-k) + (x+y)^(n-k) (x-y)^(n+k)`:
/// row `k`, column `i` holds the coefficient of `x^(2n-2i) y^(2i)`.
pub fn q_coefficient_matrix(n: usize) -> Vec<Vec<BigInt>> {
    (0..=n)
        .map(|k| {
            let first = product_y_powers(&binomial_row(n + k, 1), &binomial_row(n - k, -1));
            let second = product_y_powers(&binomial_row(n - k, 1), &binomial_row(n + k, -1));
            (0..=n).map(|i| &first[2 * i] + &second[2 * i]).collect()
        })
        .collect()
}

pub fn eigenbasis_q(n: usize) -> Result<Vec<PolyVector>> {
    check_n(n)?;
    let basis = PolyBasis::even(n)?;
    q_coefficient_matrix(n)
        .into_iter()
        .map(|row| {
            let coeffs = row
                .iter()
                .map(|c| exact::to_f64(&BigRational::from_integer(c.clone())))
                .collect();
            PolyVector::new(basis, coeffs)
        })
        .collect()
}

/// Matrix taking EvenEven coefficients to coordinates in the q-basis,
/// inverted exactly. Entry `(k, i)` multiplies the coefficient of
/// `x^(2n-2i) y^(2i)` in the `q_k` coordinate.
pub fn q_coordinates_matrix(n: usize) -> Result<DMatrix<f64>> {
    check_n(n)?;
    let c = q_coefficient_matrix(n);
    // columns of the forward map are the q_k
    let forward: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| (0..=n).map(|k| c[k][i].clone()).collect())
        .collect();
    let mut inv = DMatrix::zeros(n + 1, n + 1);
    for col in 0..=n {
        let mut e = vec![BigInt::zero(); n + 1];
        e[col] = BigInt::one();
        let x = exact::solve(&forward, &e)
            .ok_or_else(|| Error::Internal(format!("q-basis singular for n = {n}")))?;
        for (row, v) in x.iter().enumerate() {
            inv[(row, col)] = exact::to_f64(v);
        }
    }
    Ok(inv)
}

/// `(A^2 x^2 + A^-2 y^2) (d_xx + d_yy)` on the EvenEven basis.
pub fn op_ea(n: usize, a: f64) -> Result<PolyOperator> {
    check_n(n)?;
    check_a(a)?;
    let basis = PolyBasis::even(n)?;
    let (a2, ia2) = (a * a, 1.0 / (a * a));
    Ok(PolyOperator::from_monomial_action(basis, basis, |j, k| {
        let (jj, kk) = (
            (j * j.saturating_sub(1)) as f64,
            (k * k.saturating_sub(1)) as f64,
        );
        let mut out = vec![((j, k), a2 * jj + ia2 * kk)];
        if k >= 2 {
            out.push(((j + 2, k - 2), a2 * kk));
        }
        if j >= 2 {
            out.push(((j - 2, k + 2), ia2 * jj));
        }
        out
    }))
}

/// `A x d_x - A^-1 y d_y`, diagonal on monomials.
pub fn op_sa(n: usize, a: f64) -> Result<PolyOperator> {
    check_n(n)?;
    check_a(a)?;
    Ok(PolyOperator::diagonal(PolyBasis::even(n)?, |j, k| {
        a * j as f64 - k as f64 / a
    }))
}

/// Eigenvalue `(A^2+1)^(j/2) (A^-2+1)^(k/2)` of the transform on `x^j y^k`.
pub fn u_eigenvalue(j: usize, k: usize, a: f64) -> f64 {
    (a * a + 1.0).powf(0.5 * j as f64) * (1.0 / (a * a) + 1.0).powf(0.5 * k as f64)
}

pub fn op_u(n: usize, a: f64) -> Result<PolyOperator> {
    check_n(n)?;
    check_a(a)?;
    Ok(PolyOperator::diagonal(PolyBasis::even(n)?, |j, k| {
        u_eigenvalue(j, k, a)
    }))
}

/// Max-abs entry of `U^-1 (A x d_y + A^-1 y d_x) U - B` on the full basis.
pub fn conjugation_identity_residual(n: usize, a: f64) -> Result<f64> {
    conjugation_residual_with(n, a, u_eigenvalue)
}

fn conjugation_residual_with(
    n: usize,
    a: f64,
    u_entry: impl Fn(usize, usize, f64) -> f64,
) -> Result<f64> {
    check_n(n)?;
    check_a(a)?;
    let basis = PolyBasis::full(n)?;
    let m = PolyOperator::from_monomial_action(basis, basis, |j, k| {
        let mut out = Vec::with_capacity(2);
        if k > 0 {
            out.push(((j + 1, k - 1), a * k as f64));
        }
        if j > 0 {
            out.push(((j - 1, k + 1), j as f64 / a));
        }
        out
    });
    let u = PolyOperator::diagonal(basis, |j, k| u_entry(j, k, a));
    let u_inv = PolyOperator::diagonal(basis, |j, k| 1.0 / u_entry(j, k, a));
    let conj = u_inv.compose(&m)?.compose(&u)?;
    Ok(conj.sub(&boost(n)?)?.max_abs())
}

/// Exact `w_j = nu_j (2j)! (2n-2j)!` solving `D~(q_k) = [k == n]`.
fn dtilde_values_exact(n: usize) -> Result<Vec<BigRational>> {
    let c = q_coefficient_matrix(n);
    // unknown j multiplies the coefficient of x^(2j) y^(2n-2j), column n - j
    let m: Vec<Vec<BigInt>> = c
        .iter()
        .map(|row| (0..=n).map(|j| row[n - j].clone()).collect())
        .collect();
    let mut rhs = vec![BigInt::zero(); n + 1];
    rhs[n] = BigInt::one();
    exact::solve(&m, &rhs)
        .ok_or_else(|| Error::Internal(format!("q-basis system singular for n = {n}")))
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `nu_0 .. nu_n` of `D~ = sum_j nu_j d_x^(2j) d_y^(2n-2j)`.
pub fn dtilde_coefficients(n: usize) -> Result<Vec<f64>> {
    check_n(n)?;
    let w = dtilde_values_exact(n)?;
    Ok(w.iter()
        .enumerate()
        .map(|(j, wj)| {
            let f = factorial_big(2 * j) * factorial_big(2 * n - 2 * j);
            exact::to_f64(&(wj / BigRational::from_integer(f)))
        })
        .collect())
}

/// Weights of `D` as a linear functional on EvenEven coefficient vectors:
/// `D(P) = sum_i weights[i] * P[i]`, index `i` being `x^(2n-2i) y^(2i)`.
pub fn d_weights(n: usize, a: f64) -> Result<Vec<f64>> {
    check_n(n)?;
    check_a(a)?;
    let w = dtilde_values_exact(n)?;
    let s = a * a / (1.0 + a * a);
    let c = 1.0 / (1.0 + a * a);
    Ok((0..=n)
        .map(|i| {
            let j = n - i;
            // A^(2n-2j) / (1+A^2)^n
            exact::to_f64(&w[j]) * s.powi((n - j) as i32) * c.powi(j as i32)
        })
        .collect())
}

pub fn apply_d_operator(n: usize, a: f64, poly: &PolyVector) -> Result<f64> {
    let basis = PolyBasis::even(n)?;
    if poly.basis() != basis {
        return Err(invalid(format!(
            "D operator of degree {} applied to {:?}",
            2 * n,
            poly.basis()
        )));
    }
    let w = d_weights(n, a)?;
    Ok(w.iter().zip(poly.coeffs()).map(|(w, c)| w * c).sum())
}
