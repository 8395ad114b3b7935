//! Every poly_ops matrix rebuilt by exact symbolic differentiation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use gjl_core::poly_ops::{
    boost, boost_squared, conjugation_identity_residual, d_weights, dtilde_coefficients,
    eigenbasis_q, op_ea, op_sa, op_u, q_coefficient_matrix, q_coordinates_matrix, PolyBasis,
};

use super::{rat, to_f64, x, y, RatPoly};

const REL_TOL: f64 = 1e-14;

fn close(computed: f64, exact: &BigRational) -> bool {
    let e = to_f64(exact);
    if exact.is_zero() {
        return computed.abs() <= 1e-300;
    }
    (computed - e).abs() <= REL_TOL * e.abs()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn mono(j: usize, k: usize) -> RatPoly {
    RatPoly::monomial(j as u32, k as u32, BigRational::one())
}

/// Compares an operator matrix with the images of each domain monomial.
pub fn check_matrix(
    name: &str,
    basis: PolyBasis,
    matrix: &nalgebra::DMatrix<f64>,
    image: impl Fn(&RatPoly) -> RatPoly,
    failures: &mut Vec<String>,
) {
    for (col, (j, k)) in basis.monomials().into_iter().enumerate() {
        let img = image(&mono(j, k));
        for (row, (jj, kk)) in basis.monomials().into_iter().enumerate() {
            let exact = img.coeff(jj as u32, kk as u32);
            if !close(matrix[(row, col)], &exact) {
                failures.push(format!(
                    "{name}: entry ({row},{col}) = {} but exact {}",
                    matrix[(row, col)],
                    exact
                ));
            }
        }
    }
}

fn power(base: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * base)
}

fn diff(p: &RatPoly, nx: usize, ny: usize) -> RatPoly {
    let mut q = p.clone();
    for _ in 0..nx {
        q = q.dx();
    }
    for _ in 0..ny {
        q = q.dy();
    }
    q
}

/// Exact Gauss-Jordan elimination; `None` when singular.
#[allow(clippy::needless_range_loop)]
fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        let piv = m[c][c].clone();
        for v in m[c].iter_mut() {
            *v = &*v / &piv;
        }
        rhs[c] = &rhs[c] / &piv;
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for cc in 0..n {
                    let d = &f * &m[c][cc];
                    m[r][cc] -= d;
                }
                let d = &f * &rhs[c];
                rhs[r] -= d;
            }
        }
    }
    Some(rhs)
}

/// Mismatches between poly_ops and the oracle for half-degree `n`, each `A`
/// given as an exact fraction.
pub fn mismatches(n: usize, a_values: &[(i64, i64)]) -> Vec<String> {
    let mut failures = Vec::new();
    let even = PolyBasis::even(n).unwrap();
    let full = PolyBasis::full(n).unwrap();
    let boost_img = |p: &RatPoly| x().mul(&p.dy()).add(&y().mul(&p.dx()));

    check_matrix(
        "B",
        full,
        boost(n).unwrap().matrix(),
        boost_img,
        &mut failures,
    );
    check_matrix(
        "B^2",
        even,
        boost_squared(n).unwrap().matrix(),
        |p| boost_img(&boost_img(p)),
        &mut failures,
    );

    // q_k = (x+y)^(n+k) (x-y)^(n-k) + (x+y)^(n-k) (x-y)^(n+k)
    let xpy = x().add(&y());
    let xmy = x().add(&y().scale(&int(-1)));
    let q: Vec<RatPoly> = (0..=n)
        .map(|k| {
            let (p, m) = ((n + k) as u32, (n - k) as u32);
            xpy.pow(p)
                .mul(&xmy.pow(m))
                .add(&xpy.pow(m).mul(&xmy.pow(p)))
        })
        .collect();
    let qc = q_coefficient_matrix(n);
    let qv = eigenbasis_q(n).unwrap();
    for k in 0..=n {
        for (i, (j, kk)) in even.monomials().into_iter().enumerate() {
            let exact = q[k].coeff(j as u32, kk as u32);
            if BigRational::from_integer(qc[k][i].clone()) != exact {
                failures.push(format!(
                    "q_{k}: coefficient {i} = {} but exact {exact}",
                    qc[k][i]
                ));
            }
            if !close(qv[k].coeffs()[i], &exact) {
                failures.push(format!("eigenbasis q_{k}[{i}] = {}", qv[k].coeffs()[i]));
            }
        }
    }

    // coordinates of each monomial in the q-basis
    let coords = q_coordinates_matrix(n).unwrap();
    for (i, (j, k)) in even.monomials().into_iter().enumerate() {
        let m: Vec<Vec<BigRational>> = even
            .monomials()
            .into_iter()
            .map(|(jj, kk)| q.iter().map(|qk| qk.coeff(jj as u32, kk as u32)).collect())
            .collect();
        let rhs = even
            .monomials()
            .into_iter()
            .map(|(jj, kk)| if (jj, kk) == (j, k) { int(1) } else { int(0) })
            .collect();
        let c = solve(m, rhs).expect("q-basis is a basis");
        for (row, v) in c.iter().enumerate() {
            if !close(coords[(row, i)], v) {
                failures.push(format!(
                    "q coordinates ({row},{i}) = {} but exact {v}",
                    coords[(row, i)]
                ));
            }
        }
    }

    // D~ = sum_j nu_j d_x^(2j) d_y^(2n-2j) with D~(q_k) = [k == n]
    let m: Vec<Vec<BigRational>> = q
        .iter()
        .map(|qk| {
            (0..=n)
                .map(|j| diff(qk, 2 * j, 2 * n - 2 * j).coeff(0, 0))
                .collect()
        })
        .collect();
    let rhs = (0..=n).map(|k| int((k == n) as i64)).collect();
    let nu = solve(m, rhs).expect("D~ system is regular");
    for (j, (c, e)) in dtilde_coefficients(n).unwrap().iter().zip(&nu).enumerate() {
        if !close(*c, e) {
            failures.push(format!("nu_{j} = {c} but exact {e}"));
        }
    }
    let dtilde = |p: &RatPoly| -> BigRational {
        (0..=n)
            .map(|j| &nu[j] * diff(p, 2 * j, 2 * n - 2 * j).coeff(0, 0))
            .fold(BigRational::zero(), |acc, v| acc + v)
    };

    for &(num, den) in a_values {
        let a = rat(num, den);
        let af = to_f64(&a);
        let a2 = &a * &a;
        let ia2 = BigRational::one() / &a2;
        let tag = format!("A={num}/{den}");

        let weight = {
            let w = x().pow(2).scale(&a2).add(&y().pow(2).scale(&ia2));
            move |p: &RatPoly| w.mul(&p.dx().dx().add(&p.dy().dy()))
        };
        check_matrix(
            &format!("E_A {tag}"),
            even,
            op_ea(n, af).unwrap().matrix(),
            weight,
            &mut failures,
        );

        let (ac, iac) = (a.clone(), BigRational::one() / &a);
        check_matrix(
            &format!("S_A {tag}"),
            even,
            op_sa(n, af).unwrap().matrix(),
            move |p| {
                x().mul(&p.dx())
                    .scale(&ac)
                    .add(&y().mul(&p.dy()).scale(&-iac.clone()))
            },
            &mut failures,
        );

        // on even monomials U is a rational scaling
        let ux = &a2 + int(1);
        let uy = &ia2 + int(1);
        let u_of = |j: usize, k: usize| power(&ux, j / 2) * power(&uy, k / 2);
        check_matrix(
            &format!("U {tag}"),
            even,
            op_u(n, af).unwrap().matrix(),
            |p| {
                let mut out = RatPoly::default();
                for ((j, k), c) in &p.0 {
                    out = out.add(&RatPoly::monomial(
                        *j,
                        *k,
                        c * u_of(*j as usize, *k as usize),
                    ));
                }
                out
            },
            &mut failures,
        );

        // D(P) = D~(U^-1 P)
        let dw = d_weights(n, af).unwrap();
        for (i, (j, k)) in even.monomials().into_iter().enumerate() {
            let exact = dtilde(&mono(j, k)) / u_of(j, k);
            if !close(dw[i], &exact) {
                failures.push(format!("D weight {i} {tag} = {} but exact {exact}", dw[i]));
            }
        }
    }

    // A = 3/4 makes U rational on odd monomials too: sqrt(A^2+1) = 5/4 and
    // sqrt(A^-2+1) = 5/3, so the conjugation identity can be checked exactly.
    let (sx, sy) = (rat(5, 4), rat(5, 3));
    let a = rat(3, 4);
    let u_full = |p: &RatPoly, inverse: bool| {
        let mut out = RatPoly::default();
        for ((j, k), c) in &p.0 {
            let s = power(&sx, *j as usize) * power(&sy, *k as usize);
            let s = if inverse { BigRational::one() / s } else { s };
            out = out.add(&RatPoly::monomial(*j, *k, c * s));
        }
        out
    };
    for (j, k) in full.monomials() {
        let p = mono(j, k);
        let up = u_full(&p, false);
        let m = x()
            .mul(&up.dy())
            .scale(&a)
            .add(&y().mul(&up.dx()).scale(&(BigRational::one() / &a)));
        if u_full(&m, true) != boost_img(&p) {
            failures.push(format!("exact conjugation fails on x^{j} y^{k}"));
        }
    }
    let r = conjugation_identity_residual(n, 0.75).unwrap();
    if r > 1e-12 {
        failures.push(format!("conjugation residual at A=3/4 is {r}"));
    }
    failures
}

pub const A_VALUES: [(i64, i64); 4] = [(1, 1), (3, 2), (2, 7), (13, 5)];
