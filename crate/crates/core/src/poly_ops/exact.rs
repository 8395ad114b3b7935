//! Gaussian elimination over the rationals for the small integer systems
//! that define the `D~` weights.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Solves `m x = rhs` exactly. `None` if `m` is singular.
pub(crate) fn solve(m: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            row.iter()
                .chain(std::iter::once(r))
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..=n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some((0..n).map(|r| &a[r][n] / &a[r][r]).collect())
}

pub(crate) fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3)],
        ];
        let x = solve(&m, &[BigInt::from(3), BigInt::from(5)]).unwrap();
        assert_eq!(to_f64(&x[0]), 0.8);
        assert_eq!(to_f64(&x[1]), 1.4);
        let singular = vec![vec![BigInt::from(1); 2]; 2];
        assert!(solve(&singular, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }
}
