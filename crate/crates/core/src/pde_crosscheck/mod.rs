//! Finite-difference solver for the regularized torus geodesic equation
//! `Phi_tt (1 + lap Phi) - |grad Phi_t|^2 = delta` on `[0,1] x T^2`, with
//! `Phi(0) = 0` and `Phi(1) = phi1`, used to cross-check the second jets.
//!
//! Newton's method with the exact Jacobian of the discrete operator; each
//! linear step is GMRES preconditioned by a constant-coefficient operator
//! that separates into Fourier modes in `x, y` and tridiagonal solves in `t`.

mod gmres;

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::counterexample::TorusPotential;
use crate::error::{invalid, Error, Result};
use crate::second_jet::SecondJetPath;

/// Newton iterations allowed per regularization level.
pub const MAX_NEWTON: usize = 40;
const GMRES_RESTART: usize = 40;
const GMRES_MAX_ITER: usize = 400;
const GMRES_TOL: f64 = 1e-11;
/// Nodewise `sigma2` values below this are roundoff.
pub const SIGMA2_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub nt: usize,
    pub nx: usize,
    pub ny: usize,
}

impl GridShape {
    pub fn new(nt: usize, nx: usize, ny: usize) -> Result<Self> {
        if nt < 9 {
            return Err(invalid(format!("nt must be >= 9, got {nt}")));
        }
        for (name, v) in [("nx", nx), ("ny", ny)] {
            if v < 16 || v % 2 == 1 {
                return Err(invalid(format!("{name} must be even and >= 16, got {v}")));
            }
        }
        Ok(Self { nt, nx, ny })
    }

    fn len(&self) -> usize {
        self.nt * self.nx * self.ny
    }

    fn slice(&self) -> usize {
        self.nx * self.ny
    }

    fn dt(&self) -> f64 {
        1.0 / (self.nt - 1) as f64
    }

    fn hx(&self) -> f64 {
        2.0 * PI / self.nx as f64
    }

    fn hy(&self) -> f64 {
        2.0 * PI / self.ny as f64
    }

    fn idx(&self, i: usize, ix: usize, iy: usize) -> usize {
        (i * self.nx + ix) * self.ny + iy
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSolution {
    pub shape: GridShape,
    pub delta: f64,
    /// `phi[(i * nx + ix) * ny + iy]` at `t = i dt`, `x = -pi + ix hx`.
    pub phi: Vec<f64>,
    pub residual_norm: f64,
    /// Newton iterations spent at each regularization level.
    pub newton_iterations: Vec<usize>,
    /// GMRES iterations summed over the Newton steps of each level.
    pub linear_iterations: Vec<usize>,
    /// Smallest `1 + lap Phi` over interior points.
    pub min_nondegeneracy: f64,
}

impl GridSolution {
    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.shape.dt()
    }

    pub fn x(&self, ix: usize) -> f64 {
        -PI + ix as f64 * self.shape.hx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        -PI + iy as f64 * self.shape.hy()
    }

    pub fn at(&self, i: usize, ix: usize, iy: usize) -> f64 {
        self.phi[self.shape.idx(i, ix, iy)]
    }

    /// The same solution with `x` and `y` exchanged.
    pub fn transposed(&self) -> Self {
        let s = self.shape;
        let t = GridShape {
            nt: s.nt,
            nx: s.ny,
            ny: s.nx,
        };
        let mut phi = vec![0.0; s.len()];
        for i in 0..s.nt {
            for ix in 0..s.nx {
                for iy in 0..s.ny {
                    phi[t.idx(i, iy, ix)] = self.at(i, ix, iy);
                }
            }
        }
        Self {
            shape: t,
            phi,
            ..self.clone()
        }
    }

    /// Writes all slices as CSV rows `t,x,y,phi` after a commented header.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let s = self.shape;
        let mut out = out;
        writeln!(
            out,
            "# nt={} nx={} ny={} delta={:e} residual={:e}",
            s.nt, s.nx, s.ny, self.delta, self.residual_norm
        )
        .map_err(io_err)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "x", "y", "phi"]).map_err(csv_err)?;
        for i in 0..s.nt {
            for ix in 0..s.nx {
                for iy in 0..s.ny {
                    w.serialize((self.t(i), self.x(ix), self.y(iy), self.at(i, ix, iy)))
                        .map_err(csv_err)?;
                }
            }
        }
        w.flush().map_err(io_err)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("csv output failed: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv output failed: {e}"))
}

/// Periodic neighbours `(minus, plus)` of an index.
fn wrap(i: usize, n: usize) -> (usize, usize) {
    ((i + n - 1) % n, (i + 1) % n)
}

/// Coefficient fields of the linearization at the current iterate, on
/// interior slices.
struct Linearization {
    one_plus_lap: Vec<f64>,
    phi_tt: Vec<f64>,
    grad_t: Vec<(f64, f64)>,
}

struct Discretization {
    shape: GridShape,
}

impl Discretization {
    fn interior_len(&self) -> usize {
        (self.shape.nt - 2) * self.shape.slice()
    }

    fn lap(&self, f: &[f64], i: usize, ix: usize, iy: usize) -> f64 {
        let s = self.shape;
        let (xm, xp) = wrap(ix, s.nx);
        let (ym, yp) = wrap(iy, s.ny);
        let c = f[s.idx(i, ix, iy)];
        (f[s.idx(i, xm, iy)] - 2.0 * c + f[s.idx(i, xp, iy)]) / (s.hx() * s.hx())
            + (f[s.idx(i, ix, ym)] - 2.0 * c + f[s.idx(i, ix, yp)]) / (s.hy() * s.hy())
    }

    /// Central-difference gradient of `(f[i+1] - f[i-1]) / 2dt`.
    fn grad_t(&self, f: &[f64], i: usize, ix: usize, iy: usize) -> (f64, f64) {
        let s = self.shape;
        let (xm, xp) = wrap(ix, s.nx);
        let (ym, yp) = wrap(iy, s.ny);
        let ft = |jx: usize, jy: usize| {
            (f[s.idx(i + 1, jx, jy)] - f[s.idx(i - 1, jx, jy)]) / (2.0 * s.dt())
        };
        (
            (ft(xp, iy) - ft(xm, iy)) / (2.0 * s.hx()),
            (ft(ix, yp) - ft(ix, ym)) / (2.0 * s.hy()),
        )
    }

    fn dtt(&self, f: &[f64], i: usize, ix: usize, iy: usize) -> f64 {
        let s = self.shape;
        (f[s.idx(i + 1, ix, iy)] - 2.0 * f[s.idx(i, ix, iy)] + f[s.idx(i - 1, ix, iy)])
            / (s.dt() * s.dt())
    }

    fn interior_points(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let s = self.shape;
        (1..s.nt - 1)
            .flat_map(move |i| (0..s.nx).flat_map(move |ix| (0..s.ny).map(move |iy| (i, ix, iy))))
    }

    fn residual(&self, phi: &[f64], delta: f64) -> Vec<f64> {
        self.interior_points()
            .map(|(i, ix, iy)| {
                let (gx, gy) = self.grad_t(phi, i, ix, iy);
                self.dtt(phi, i, ix, iy) * (1.0 + self.lap(phi, i, ix, iy))
                    - gx * gx
                    - gy * gy
                    - delta
            })
            .collect()
    }

    fn linearize(&self, phi: &[f64]) -> Linearization {
        let mut lin = Linearization {
            one_plus_lap: Vec::with_capacity(self.interior_len()),
            phi_tt: Vec::with_capacity(self.interior_len()),
            grad_t: Vec::with_capacity(self.interior_len()),
        };
        for (i, ix, iy) in self.interior_points() {
            lin.one_plus_lap.push(1.0 + self.lap(phi, i, ix, iy));
            lin.phi_tt.push(self.dtt(phi, i, ix, iy));
            lin.grad_t.push(self.grad_t(phi, i, ix, iy));
        }
        lin
    }

    /// Embeds an interior vector into a full array with zero boundary slices.
    fn embed(&self, w: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.shape.len()];
        let off = self.shape.slice();
        full[off..off + w.len()].copy_from_slice(w);
        full
    }

    fn jacobian_apply(&self, lin: &Linearization, w: &[f64]) -> Vec<f64> {
        let full = self.embed(w);
        self.interior_points()
            .enumerate()
            .map(|(p, (i, ix, iy))| {
                let (wx, wy) = self.grad_t(&full, i, ix, iy);
                let (gx, gy) = lin.grad_t[p];
                self.dtt(&full, i, ix, iy) * lin.one_plus_lap[p]
                    + lin.phi_tt[p] * self.lap(&full, i, ix, iy)
                    - 2.0 * (gx * wx + gy * wy)
            })
            .collect()
    }

    /// Forces `Phi(t, x, y) = Phi(t, -x, y) = Phi(t, x, -y)` on interior
    /// slices; the boundary slices stay exactly as sampled.
    fn symmetrize(&self, phi: &mut [f64]) {
        let s = self.shape;
        let src = phi.to_vec();
        for i in 1..s.nt - 1 {
            for ix in 0..s.nx {
                let mx = (s.nx - ix) % s.nx;
                let (x0, x1) = (ix.min(mx), ix.max(mx));
                for iy in 0..s.ny {
                    let my = (s.ny - iy) % s.ny;
                    let (y0, y1) = (iy.min(my), iy.max(my));
                    // fixed summation order keeps the result bitwise even
                    phi[s.idx(i, ix, iy)] = 0.25
                        * ((src[s.idx(i, x0, y0)] + src[s.idx(i, x1, y0)])
                            + (src[s.idx(i, x0, y1)] + src[s.idx(i, x1, y1)]));
                }
            }
        }
    }

    fn min_nondegeneracy(&self, phi: &[f64]) -> f64 {
        self.interior_points()
            .map(|(i, ix, iy)| 1.0 + self.lap(phi, i, ix, iy))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Orthonormal real eigenvectors (columns) of the periodic second difference
/// and their eigenvalues.
fn periodic_eigenbasis(n: usize, h: f64) -> (DMatrix<f64>, Vec<f64>) {
    let mut e = DMatrix::zeros(n, n);
    let mut mu = vec![0.0; n];
    let nf = n as f64;
    let mut col = 0;
    for k in 0..=n / 2 {
        let theta = 2.0 * PI * k as f64 / nf;
        let eig = -(2.0 - 2.0 * theta.cos()) / (h * h);
        if k == 0 || k == n / 2 {
            let scale = 1.0 / nf.sqrt();
            for j in 0..n {
                e[(j, col)] = scale * (theta * j as f64).cos();
            }
            mu[col] = eig;
            col += 1;
        } else {
            let scale = (2.0 / nf).sqrt();
            for j in 0..n {
                e[(j, col)] = scale * (theta * j as f64).cos();
                e[(j, col + 1)] = scale * (theta * j as f64).sin();
            }
            mu[col] = eig;
            mu[col + 1] = eig;
            col += 2;
        }
    }
    (e, mu)
}

/// `c_tt D_tt + c_lap lap`, zero Dirichlet data in `t`, inverted mode by mode.
struct Preconditioner {
    shape: GridShape,
    ex: DMatrix<f64>,
    ey: DMatrix<f64>,
    mu_x: Vec<f64>,
    mu_y: Vec<f64>,
    c_tt: f64,
    c_lap: f64,
}

impl Preconditioner {
    fn new(shape: GridShape, lin: &Linearization) -> Self {
        let (ex, mu_x) = periodic_eigenbasis(shape.nx, shape.hx());
        let (ey, mu_y) = periodic_eigenbasis(shape.ny, shape.hy());
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        Self {
            shape,
            ex,
            ey,
            mu_x,
            mu_y,
            c_tt: mean(&lin.one_plus_lap),
            c_lap: mean(&lin.phi_tt).max(0.0),
        }
    }

    fn apply(&self, r: &[f64]) -> Vec<f64> {
        let s = self.shape;
        let m = s.nt - 2;
        // to modal coordinates, slice by slice
        let mut modal: Vec<DMatrix<f64>> = (0..m)
            .map(|i| {
                let slice =
                    DMatrix::from_row_slice(s.nx, s.ny, &r[i * s.slice()..(i + 1) * s.slice()]);
                self.ex.transpose() * slice * &self.ey
            })
            .collect();
        let off = self.c_tt / (s.dt() * s.dt());
        let mut rhs = vec![0.0; m];
        let mut cp = vec![0.0; m];
        for kx in 0..s.nx {
            for ky in 0..s.ny {
                let diag = -2.0 * off + self.c_lap * (self.mu_x[kx] + self.mu_y[ky]);
                for (i, v) in rhs.iter_mut().enumerate() {
                    *v = modal[i][(kx, ky)];
                }
                // Thomas algorithm, constant tridiagonal (off, diag, off)
                cp[0] = off / diag;
                rhs[0] /= diag;
                for i in 1..m {
                    let denom = diag - off * cp[i - 1];
                    cp[i] = off / denom;
                    rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
                }
                for i in (0..m - 1).rev() {
                    rhs[i] -= cp[i] * rhs[i + 1];
                }
                for (i, v) in rhs.iter().enumerate() {
                    modal[i][(kx, ky)] = *v;
                }
            }
        }
        let mut out = Vec::with_capacity(r.len());
        for slice in modal {
            let back = &self.ex * slice * self.ey.transpose();
            for ix in 0..s.nx {
                for iy in 0..s.ny {
                    out.push(back[(ix, iy)]);
                }
            }
        }
        out
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solves the regularized equation for each `delta` in turn, starting from
/// `Phi = t phi1` and continuing from the previous level.
pub fn solve_geodesic(
    phi1: &TorusPotential,
    shape: GridShape,
    delta_schedule: &[f64],
) -> Result<GridSolution> {
    let shape = GridShape::new(shape.nt, shape.nx, shape.ny)?;
    if delta_schedule.is_empty() {
        return Err(invalid("delta schedule is empty"));
    }
    if delta_schedule.iter().any(|d| !(*d > 0.0)) {
        return Err(invalid("delta values must be positive"));
    }
    if delta_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("delta schedule must be strictly decreasing"));
    }
    let disc = Discretization { shape };
    let mut phi = vec![0.0; shape.len()];
    for i in 0..shape.nt {
        let t = i as f64 * shape.dt();
        for ix in 0..shape.nx {
            let x = -PI + ix as f64 * shape.hx();
            for iy in 0..shape.ny {
                let y = -PI + iy as f64 * shape.hy();
                phi[shape.idx(i, ix, iy)] = t * phi1.evaluate(x, y);
            }
        }
    }
    disc.symmetrize(&mut phi);
    let min_nd = disc.min_nondegeneracy(&phi);
    if !(min_nd > 0.0) {
        return Err(Error::Numeric(format!(
            "initial guess is degenerate: min(1 + lap Phi) = {min_nd:.3e}; reduce the amplitude"
        )));
    }

    let mut iterations = Vec::with_capacity(delta_schedule.len());
    let mut linear_iterations = Vec::with_capacity(delta_schedule.len());
    let mut res_norm = f64::INFINITY;
    for &delta in delta_schedule {
        let tol = 1e-9 * (1.0 + delta);
        let mut f = disc.residual(&phi, delta);
        res_norm = max_abs(&f);
        let mut it = 0;
        let mut linear = 0;
        while res_norm >= tol {
            if it == MAX_NEWTON {
                return Err(Error::Numeric(format!(
                    "Newton did not converge at delta = {delta:e}: residual {res_norm:.3e} after {MAX_NEWTON} iterations"
                )));
            }
            it += 1;
            let lin = disc.linearize(&phi);
            let prec = Preconditioner::new(shape, &lin);
            let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
            let lin_sol = gmres::gmres(
                |w| disc.jacobian_apply(&lin, w),
                |r| prec.apply(r),
                &rhs,
                GMRES_RESTART,
                GMRES_MAX_ITER,
                GMRES_TOL,
            );
            linear += lin_sol.iterations;
            let step = &lin_sol.solution;
            let mut lambda = 1.0;
            loop {
                let mut trial = phi.clone();
                let off = shape.slice();
                for (p, s) in trial[off..off + step.len()].iter_mut().zip(step) {
                    *p += lambda * s;
                }
                disc.symmetrize(&mut trial);
                let nd = disc.min_nondegeneracy(&trial);
                let ft = disc.residual(&trial, delta);
                let rt = max_abs(&ft);
                if nd > 0.0 && rt < res_norm {
                    phi = trial;
                    f = ft;
                    res_norm = rt;
                    break;
                }
                lambda *= 0.5;
                if lambda < 1.0 / 1024.0 {
                    return Err(Error::Numeric(format!(
                        "Newton damping failed at delta = {delta:e}: residual {res_norm:.3e}, min(1 + lap Phi) = {nd:.3e}, GMRES relative residual {:.3e}",
                        lin_sol.relative_residual
                    )));
                }
            }
        }
        iterations.push(it);
        linear_iterations.push(linear);
    }
    let min_nondegeneracy = disc.min_nondegeneracy(&phi);
    Ok(GridSolution {
        shape,
        delta: *delta_schedule.last().expect("non-empty"),
        phi,
        residual_norm: res_norm,
        newton_iterations: iterations,
        linear_iterations,
        min_nondegeneracy,
    })
}

/// `(a, b)` at every time slice: half the fourth-order central second
/// differences of `Phi` in `x` and `y` at the origin.
pub fn extract_second_jets(sol: &GridSolution) -> (Vec<f64>, Vec<f64>) {
    let s = sol.shape;
    let (ox, oy) = (s.nx / 2, s.ny / 2);
    let d2 = |f: &dyn Fn(usize) -> f64, n: usize, h: f64, o: usize| {
        let at = |k: isize| f(((o as isize + k).rem_euclid(n as isize)) as usize);
        (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h)
    };
    let mut a = Vec::with_capacity(s.nt);
    let mut b = Vec::with_capacity(s.nt);
    for i in 0..s.nt {
        a.push(0.5 * d2(&|ix| sol.at(i, ix, oy), s.nx, s.hx(), ox));
        b.push(0.5 * d2(&|iy| sol.at(i, ox, iy), s.ny, s.hy(), oy));
    }
    (a, b)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub shape: GridShape,
    pub delta: f64,
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Nodewise `a' b' / (1 + 2a + 2b)^2` at interior slices.
    pub sigma2: Vec<f64>,
    pub sigma2_mean: f64,
    /// `(max - min) / |mean|`, zero when every value is below `SIGMA2_FLOOR`.
    pub sigma2_relative_spread: f64,
    pub epsilon_estimate: f64,
    pub epsilon_reference: Option<f64>,
    pub epsilon_relative_error: Option<f64>,
    pub residual_norm: f64,
}

pub fn crosscheck_report(sol: &GridSolution, reference: &SecondJetPath) -> CrosscheckReport {
    let (a, b) = extract_second_jets(sol);
    let s = sol.shape;
    let dt = s.dt();
    let t: Vec<f64> = (0..s.nt).map(|i| sol.t(i)).collect();
    let sigma2: Vec<f64> = (1..s.nt - 1)
        .map(|i| {
            let ap = (a[i + 1] - a[i - 1]) / (2.0 * dt);
            let bp = (b[i + 1] - b[i - 1]) / (2.0 * dt);
            let z = 1.0 + 2.0 * a[i] + 2.0 * b[i];
            ap * bp / (z * z)
        })
        .collect();
    let mean = sigma2.iter().sum::<f64>() / sigma2.len() as f64;
    let (lo, hi) = sigma2
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
            (l.min(*v), h.max(*v))
        });
    let spread = if max_abs(&sigma2) <= SIGMA2_FLOOR {
        0.0
    } else {
        (hi - lo) / mean.abs()
    };
    let epsilon_estimate = (-mean).max(0.0).sqrt();
    let epsilon_reference = reference.epsilon;
    CrosscheckReport {
        shape: s,
        delta: sol.delta,
        t,
        a,
        b,
        sigma2,
        sigma2_mean: mean,
        sigma2_relative_spread: spread,
        epsilon_estimate,
        epsilon_reference,
        epsilon_relative_error: epsilon_reference.map(|e| (epsilon_estimate - e).abs() / e),
        residual_norm: sol.residual_norm,
    }
}
