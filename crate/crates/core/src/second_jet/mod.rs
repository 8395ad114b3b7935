//! Second jets along the central fiber.
//!
//! Writing the 2-jet of the geodesic as `a(t) x^2 + b(t) y^2`, the pair
//! `(X, Z) = (2a - 2b, 1 + 2a + 2b)` traces a geodesic of the Lorentz-Poincare
//! half-plane. Space-like boundary data are solved in closed form on the
//! hyperbola `Z^2 - (X - lambda)^2 = C`; the remaining causal classes fall
//! back to Newton shooting.

mod halfplane;
pub mod shooting;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::timegrid::{CoefficientSeries, TimeGrid};

pub use halfplane::{classify, connectable, distance, CausalClass, HalfPlanePoint, CLASSIFY_TOL};

/// Acceptance bound for [`ode_residual`] on solved paths.
pub const ODE_RESIDUAL_TOL: f64 = 1e-8;

/// Coefficients of the 2-jets `a x^2 + b y^2` of the two boundary potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondJetBoundary {
    pub a0: f64,
    pub b0: f64,
    pub a1: f64,
    pub b1: f64,
}

impl SecondJetBoundary {
    pub fn new(a0: f64, b0: f64, a1: f64, b1: f64) -> Result<Self> {
        if ![a0, b0, a1, b1].iter().all(|v| v.is_finite()) {
            return Err(invalid("second-jet boundary values must be finite"));
        }
        if !(a1 + b1 + 0.5 > 0.0) {
            return Err(invalid("inequality `a1 + b1 + 1/2 > 0` violated"));
        }
        if !(a0 + b0 + 0.5 > 0.0) {
            return Err(invalid("inequality `a0 + b0 + 1/2 > 0` violated"));
        }
        Ok(Self { a0, b0, a1, b1 })
    }

    pub fn zero() -> Self {
        Self {
            a0: 0.0,
            b0: 0.0,
            a1: 0.0,
            b1: 0.0,
        }
    }

    /// The same data with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            a0: self.b0,
            b0: self.a0,
            a1: self.b1,
            b1: self.a1,
        }
    }

    /// Checks both cross inequalities; equivalent to half-plane connectability.
    pub fn check_connectable(&self) -> Result<()> {
        if !(self.a0 + self.b1 + 0.5 > 0.0) {
            return Err(Error::NotConnectable {
                violated: "a0 + b1 + 1/2 > 0",
            });
        }
        if !(self.a1 + self.b0 + 0.5 > 0.0) {
            return Err(Error::NotConnectable {
                violated: "a1 + b0 + 1/2 > 0",
            });
        }
        Ok(())
    }

    pub fn is_connectable(&self) -> bool {
        self.check_connectable().is_ok()
    }
}

/// `(X, Z) = (2a - 2b, 1 + 2a + 2b)` at both ends.
pub fn to_halfplane(boundary: &SecondJetBoundary) -> (HalfPlanePoint, HalfPlanePoint) {
    let map = |a: f64, b: f64| HalfPlanePoint {
        x: 2.0 * a - 2.0 * b,
        z: 1.0 + 2.0 * a + 2.0 * b,
    };
    (map(boundary.a0, boundary.b0), map(boundary.a1, boundary.b1))
}

pub fn classify_boundary(boundary: &SecondJetBoundary) -> Result<CausalClass> {
    boundary.check_connectable()?;
    let (p0, p1) = to_halfplane(boundary);
    classify(p0, p1)
}

/// `epsilon = D / 4` where `D` is the half-plane distance of the endpoints.
pub fn epsilon_from_boundary(boundary: &SecondJetBoundary) -> Result<f64> {
    let class = classify_boundary(boundary)?;
    if class != CausalClass::SpaceLike {
        return Err(domain(format!(
            "epsilon needs space-like 2-jets, boundary is {class:?}"
        )));
    }
    let (p0, p1) = to_halfplane(boundary);
    Ok(distance(p0, p1)? / 4.0)
}

/// Parameters of `Z^2 - (X - lambda)^2 = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperbola {
    pub lambda: f64,
    pub c: f64,
}

/// Solution of the second-jet boundary-value problem sampled on a grid.
#[derive(Debug, Clone)]
pub struct SecondJetPath {
    pub boundary: SecondJetBoundary,
    pub class: CausalClass,
    /// `sqrt(-sigma2)`; present for space-like paths only.
    pub epsilon: Option<f64>,
    pub a: CoefficientSeries,
    pub b: CoefficientSeries,
    /// Exact time derivatives of `a` and `b` (closed form or ODE state).
    pub a_prime: CoefficientSeries,
    pub b_prime: CoefficientSeries,
    /// `A(t)` with `a'/Z = epsilon A` and `b'/Z = -epsilon / A` in the
    /// internal frame (after the axis swap, if any). Space-like only.
    pub rate_ratio: Option<CoefficientSeries>,
    /// `(a' + b') / Z`
    pub sigma1: CoefficientSeries,
    /// The conserved `a' b' / Z^2`.
    pub sigma2: f64,
    /// `true` when `a` decreases, so that the internal frame exchanges `x`
    /// and `y` to keep `A > 0`.
    pub swapped_axes: bool,
    pub hyperbola: Option<Hyperbola>,
}

impl SecondJetPath {
    pub fn grid(&self) -> &Arc<TimeGrid> {
        self.a.grid()
    }

    /// `Z = 1 + 2a + 2b`
    pub fn z(&self) -> CoefficientSeries {
        self.a
            .zip_with(&self.b, |a, b| 1.0 + 2.0 * a + 2.0 * b)
            .expect("a and b share a grid")
    }

    /// `X = 2a - 2b`
    pub fn x(&self) -> CoefficientSeries {
        self.a
            .zip_with(&self.b, |a, b| 2.0 * a - 2.0 * b)
            .expect("a and b share a grid")
    }

    /// `(a, b, a', b')` in the internal frame.
    pub fn internal_frame(
        &self,
    ) -> (
        &CoefficientSeries,
        &CoefficientSeries,
        &CoefficientSeries,
        &CoefficientSeries,
    ) {
        if self.swapped_axes {
            (&self.b, &self.a, &self.b_prime, &self.a_prime)
        } else {
            (&self.a, &self.b, &self.a_prime, &self.b_prime)
        }
    }
}

pub fn solve_bvp(boundary: &SecondJetBoundary, grid: &Arc<TimeGrid>) -> Result<SecondJetPath> {
    let boundary = SecondJetBoundary::new(boundary.a0, boundary.b0, boundary.a1, boundary.b1)?;
    let class = classify_boundary(&boundary)?;
    let path = match class {
        CausalClass::Stationary => stationary_path(&boundary, grid),
        CausalClass::SpaceLike => space_like_path(&boundary, grid)?,
        CausalClass::TimeLike | CausalClass::LightLike => {
            shooting_path(&boundary, class, grid, None)?
        }
    };
    check_interior_positivity(&path)?;
    Ok(path)
}

/// Shooting solve from an explicit initial-slope guess, regardless of class.
pub fn solve_by_shooting(
    boundary: &SecondJetBoundary,
    grid: &Arc<TimeGrid>,
    guess: [f64; 2],
) -> Result<SecondJetPath> {
    let class = classify_boundary(boundary)?;
    let path = shooting_path(boundary, class, grid, Some(guess))?;
    check_interior_positivity(&path)?;
    Ok(path)
}

fn check_interior_positivity(path: &SecondJetPath) -> Result<()> {
    if let Some((i, z)) = path
        .z()
        .values()
        .iter()
        .enumerate()
        .find(|(_, z)| !(**z > 0.0))
    {
        return Err(domain(format!(
            "path leaves a + b + 1/2 > 0 at node {i} (Z = {z})"
        )));
    }
    Ok(())
}

fn stationary_path(boundary: &SecondJetBoundary, grid: &Arc<TimeGrid>) -> SecondJetPath {
    let zero = CoefficientSeries::zeros(grid);
    SecondJetPath {
        boundary: *boundary,
        class: CausalClass::Stationary,
        epsilon: None,
        a: CoefficientSeries::constant(grid, boundary.a0),
        b: CoefficientSeries::constant(grid, boundary.b0),
        a_prime: zero.clone(),
        b_prime: zero.clone(),
        rate_ratio: None,
        sigma1: zero,
        sigma2: 0.0,
        swapped_axes: false,
        hyperbola: None,
    }
}

/// Closed form on the upper branch `Z = R / sin(phi)`, `X = lambda - s R cot(phi)`,
/// where the hyperbolic angle `phi` is the Lorentzian arclength, so
/// `phi(t) = phi0 + 4 epsilon t`.
fn space_like_path(boundary: &SecondJetBoundary, grid: &Arc<TimeGrid>) -> Result<SecondJetPath> {
    let (p0, p1) = to_halfplane(boundary);
    let d = distance(p0, p1)?;
    let eps = d / 4.0;
    // Orientation of X; a negative orientation is the x <-> y swap.
    let orient = if p1.x >= p0.x { 1.0 } else { -1.0 };
    // tan(phi0) = sin D / (Z0 / Z1 - cos D), phi0 in (0, pi - D)
    let phi0 = (p1.z * d.sin()).atan2(p0.z - p1.z * d.cos());
    let radius = p0.z * phi0.sin();
    if !(phi0 > 0.0 && phi0 + d < std::f64::consts::PI) {
        return Err(Error::Internal(format!(
            "hyperbola angle range ({phi0}, {}) leaves (0, pi)",
            phi0 + d
        )));
    }

    let nodes = grid.nodes();
    let n = nodes.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut ap = Vec::with_capacity(n);
    let mut bp = Vec::with_capacity(n);
    let mut ratio = Vec::with_capacity(n);
    let mut sigma1 = Vec::with_capacity(n);
    // Samples use the chord form of the same curve: with the half-plane
    // embedded as the quadric -p0^2 + p1^2 + p2^2 = 1, the geodesic is
    // (sin((1-t)D) P0 + sin(tD) P1) / sin D and 1/Z, X/Z are linear in P.
    // Both terms of 1/Z are positive, so nothing cancels near phi = pi.
    // `a` and `b` are blended directly from their endpoint values rather
    // than recovered from `Z +- X - 1`, which would cost an ulp of `Z`; the
    // spectral second derivative amplifies sample noise by about N^4.
    let sin_d = d.sin();
    let (w0, w1) = (1.0 / p0.z, 1.0 / p1.z);
    let (u0, u1) = (p0.x / p0.z, p1.x / p1.z);
    let half_steps = (n - 1) as f64;
    for (j, &t) in nodes.iter().enumerate() {
        let phi = phi0 + d * t;
        let (s, c) = phi.sin_cos();
        // 1 - t_j without cancellation, so both ends see exact node positions
        let tau = {
            let q = (std::f64::consts::PI * j as f64 / (2.0 * half_steps)).cos();
            q * q
        };
        let (s0, c0) = ((d * tau).sin(), (d * tau).cos());
        let (s1, c1) = ((d * t).sin(), (d * t).cos());
        let inv_z = (s0 * w0 + s1 * w1) / sin_d;
        let x_over_z = (s0 * u0 + s1 * u1) / sin_d;
        let z = 1.0 / inv_z;
        let inv_zp = d * (c1 * w1 - c0 * w0) / sin_d;
        let x_over_zp = d * (c1 * u1 - c0 * u0) / sin_d;
        let zp = -inv_zp * z * z;
        let xp = x_over_zp * z + x_over_z * zp;
        // sin(D) (1 - alpha - beta) / 4 with alpha, beta the chord weights
        let gap = -(0.5 * d * tau).sin() * (0.5 * d * t).sin() * (0.5 * d).sin();
        let den = s0 * w0 + s1 * w1;
        a.push((gap + s0 * w0 * boundary.a0 + s1 * w1 * boundary.a1) / den);
        b.push((gap + s0 * w0 * boundary.b0 + s1 * w1 * boundary.b1) / den);
        ap.push((zp + xp) / 4.0);
        bp.push((zp - xp) / 4.0);
        ratio.push((0.5 * phi).tan());
        sigma1.push(-0.5 * d * c / s);
    }

    let series = |v: Vec<f64>| CoefficientSeries::new(Arc::clone(grid), v);
    Ok(SecondJetPath {
        boundary: *boundary,
        class: CausalClass::SpaceLike,
        epsilon: Some(eps),
        a: series(a)?,
        b: series(b)?,
        a_prime: series(ap)?,
        b_prime: series(bp)?,
        rate_ratio: Some(series(ratio)?),
        sigma1: series(sigma1)?,
        sigma2: -eps * eps,
        swapped_axes: orient < 0.0,
        hyperbola: Some(Hyperbola {
            lambda: p0.x + orient * radius * phi0.cos() / phi0.sin(),
            c: radius * radius,
        }),
    })
}

fn shooting_path(
    boundary: &SecondJetBoundary,
    class: CausalClass,
    grid: &Arc<TimeGrid>,
    guess: Option<[f64; 2]>,
) -> Result<SecondJetPath> {
    let guess = guess.unwrap_or([boundary.a1 - boundary.a0, boundary.b1 - boundary.b0]);
    let times = grid.nodes();
    let slopes = shooting::solve_slopes(boundary, guess, times)?;
    let states = shooting::integrate([boundary.a0, boundary.b0, slopes[0], slopes[1]], times)
        .ok_or_else(|| Error::Numeric("shooting: converged slopes leave the half-plane".into()))?;

    let col = |k: usize| states.iter().map(|y| y[k]).collect::<Vec<_>>();
    let (a, b, ap, bp) = (col(0), col(1), col(2), col(3));
    let n = a.len();
    let mut s1 = Vec::with_capacity(n);
    let mut s2 = Vec::with_capacity(n);
    for i in 0..n {
        let z = 1.0 + 2.0 * a[i] + 2.0 * b[i];
        s1.push((ap[i] + bp[i]) / z);
        s2.push(ap[i] * bp[i] / (z * z));
    }
    let sigma2 = s2.iter().sum::<f64>() / n as f64;

    let series = |v: Vec<f64>| CoefficientSeries::new(Arc::clone(grid), v);
    let epsilon = (class == CausalClass::SpaceLike).then(|| (-sigma2).max(0.0).sqrt());
    let swapped = ap[0] < 0.0;
    let rate_ratio = match epsilon {
        Some(eps) if eps > 0.0 => {
            let num = if swapped { &bp } else { &ap };
            let v = (0..n)
                .map(|i| {
                    let z = 1.0 + 2.0 * a[i] + 2.0 * b[i];
                    num[i] / (z * eps)
                })
                .collect();
            Some(series(v)?)
        }
        _ => None,
    };
    Ok(SecondJetPath {
        boundary: *boundary,
        class,
        epsilon,
        a: series(a)?,
        b: series(b)?,
        a_prime: series(ap)?,
        b_prime: series(bp)?,
        rate_ratio,
        sigma1: series(s1)?,
        sigma2,
        swapped_axes: swapped && class == CausalClass::SpaceLike,
        hyperbola: None,
    })
}

/// Max over nodes of `|a'' - 4a'^2/Z| + |b'' - 4b'^2/Z|`, with all derivatives
/// taken spectrally from the sampled `a` and `b`.
pub fn ode_residual(path: &SecondJetPath) -> f64 {
    residual_of(&path.a, &path.b)
}

pub(crate) fn residual_of(a: &CoefficientSeries, b: &CoefficientSeries) -> f64 {
    let (da, db) = (a.derivative(), b.derivative());
    let (dda, ddb) = (da.derivative(), db.derivative());
    (0..a.values().len())
        .map(|i| {
            let z = 1.0 + 2.0 * a.values()[i] + 2.0 * b.values()[i];
            let ra = dda.values()[i] - 4.0 * da.values()[i].powi(2) / z;
            let rb = ddb.values()[i] - 4.0 * db.values()[i].powi(2) / z;
            ra.abs() + rb.abs()
        })
        .fold(0.0, f64::max)
}
