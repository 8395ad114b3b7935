//! Restarted GMRES with right preconditioning.

pub(crate) struct GmresOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `op(x) = rhs` starting from zero, preconditioned as `op(prec(y))`.
pub(crate) fn gmres(
    op: impl Fn(&[f64]) -> Vec<f64>,
    prec: impl Fn(&[f64]) -> Vec<f64>,
    rhs: &[f64],
    restart: usize,
    max_iter: usize,
    rel_tol: f64,
) -> GmresOutcome {
    let n = rhs.len();
    let b_norm = norm(rhs);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return GmresOutcome {
            solution: x,
            iterations: 0,
            relative_residual: 0.0,
        };
    }
    let mut iterations = 0;
    let mut rel = 1.0;
    while iterations < max_iter {
        let ax = op(&x);
        let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = norm(&r);
        rel = beta / b_norm;
        if rel < rel_tol {
            break;
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|r| r / beta).collect()];
        let mut z: Vec<Vec<f64>> = Vec::new();
        let mut h = vec![vec![0.0; restart]; restart + 1];
        let (mut cs, mut sn) = (vec![0.0; restart], vec![0.0; restart]);
        let mut g = vec![0.0; restart + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..restart {
            let zk = prec(&v[k]);
            let mut w = op(&zk);
            z.push(zk);
            for i in 0..=k {
                h[i][k] = dot(&w, &v[i]);
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= h[i][k] * vj;
                }
            }
            let w_norm = norm(&w);
            h[k + 1][k] = w_norm;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            iterations += 1;
            rel = g[k + 1].abs() / b_norm;
            // w_norm == 0 is a lucky breakdown: the Krylov space is invariant
            if rel < rel_tol || iterations >= max_iter || w_norm == 0.0 {
                break;
            }
            v.push(w.iter().map(|w| w / w_norm).collect());
        }
        // back substitution on the triangular system
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, zi) in x.iter_mut().zip(&z[j]) {
                *xi += yj * zi;
            }
        }
        if rel < rel_tol {
            break;
        }
    }
    GmresOutcome {
        solution: x,
        iterations,
        relative_residual: rel,
    }
}
