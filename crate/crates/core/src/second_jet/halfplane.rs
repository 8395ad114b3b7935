//! Geometry of the Lorentz-Poincare upper half-plane `{(X, Z) : Z > 0}` with
//! metric `(dX^2 - dZ^2) / Z^2`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tie tolerance for causal classification.
pub const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub z: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, z: f64) -> Result<Self> {
        if !(z > 0.0) || !x.is_finite() || !z.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "half-plane point needs finite X and Z > 0, got ({x}, {z})"
            )));
        }
        Ok(Self { x, z })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    SpaceLike,
    TimeLike,
    LightLike,
    /// Identical endpoints: the constant path.
    Stationary,
}

/// Whether a geodesic joins the two points: `Z0 + Z1 > |X1 - X0|`.
pub fn connectable(p0: HalfPlanePoint, p1: HalfPlanePoint) -> bool {
    p0.z + p1.z > (p1.x - p0.x).abs()
}

pub fn classify(p0: HalfPlanePoint, p1: HalfPlanePoint) -> Result<CausalClass> {
    if !connectable(p0, p1) {
        return Err(Error::NotConnectable {
            violated: "Z0 + Z1 > |X1 - X0|",
        });
    }
    let dx = (p1.x - p0.x).abs();
    let dz = (p1.z - p0.z).abs();
    Ok(if dx <= CLASSIFY_TOL && dz <= CLASSIFY_TOL {
        CausalClass::Stationary
    } else if (dz - dx).abs() <= CLASSIFY_TOL {
        CausalClass::LightLike
    } else if dz < dx {
        CausalClass::SpaceLike
    } else {
        CausalClass::TimeLike
    })
}

/// Lorentzian length of the space-like geodesic joining `p0` and `p1`.
///
/// The value is the arccosine of `(Z0^2 + Z1^2 - (X0 - X1)^2) / (2 Z0 Z1)`,
/// evaluated through the half-angle form so that short and nearly maximal
/// geodesics keep full relative accuracy.
pub fn distance(p0: HalfPlanePoint, p1: HalfPlanePoint) -> Result<f64> {
    let class = classify(p0, p1)?;
    if class != CausalClass::SpaceLike {
        return Err(domain(format!(
            "distance is defined for space-like pairs only, got {class:?}"
        )));
    }
    let dx = (p1.x - p0.x).abs();
    let dz = (p1.z - p0.z).abs();
    let sum_z = p0.z + p1.z;
    let cos_d = (p0.z * p0.z + p1.z * p1.z - dx * dx) / (2.0 * p0.z * p1.z);
    if !(cos_d > -1.0 - CLASSIFY_TOL && cos_d < 1.0 + CLASSIFY_TOL) {
        return Err(Error::Internal(format!(
            "cos(D) = {cos_d} outside (-1, 1) for a space-like pair"
        )));
    }
    // 1 - cos D = (dx^2 - dz^2) / (2 Z0 Z1),  1 + cos D = ((Z0 + Z1)^2 - dx^2) / (2 Z0 Z1)
    let s = ((dx - dz) * (dx + dz)).sqrt();
    let c = ((sum_z - dx) * (sum_z + dx)).sqrt();
    Ok(2.0 * s.atan2(c))
}
