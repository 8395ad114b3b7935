//! Oracles shared by the integration tests. None of them call into the
//! solvers they check.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use gjl_core::second_jet::SecondJetBoundary;

pub mod poly_oracle;

pub mod rk4 {
    //! Shooting for `a'' = 4a'^2/Z`, `b'' = 4b'^2/Z`, `Z = 1 + 2a + 2b`, with
    //! a fixed-step RK4 and a finite-difference Newton on the initial slopes.

    type State = [f64; 4];

    fn rhs(y: &State) -> State {
        let z = 1.0 + 2.0 * y[0] + 2.0 * y[1];
        [y[2], y[3], 4.0 * y[2] * y[2] / z, 4.0 * y[3] * y[3] / z]
    }

    fn step(y: &State, h: f64) -> State {
        let add = |y: &State, k: &State, s: f64| -> State {
            [
                y[0] + s * k[0],
                y[1] + s * k[1],
                y[2] + s * k[2],
                y[3] + s * k[3],
            ]
        };
        let k1 = rhs(y);
        let k2 = rhs(&add(y, &k1, h / 2.0));
        let k3 = rhs(&add(y, &k2, h / 2.0));
        let k4 = rhs(&add(y, &k3, h));
        [0, 1, 2, 3].map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }

    /// States at `times` (sorted, starting at 0), taking at most `h_max` per step.
    pub fn integrate(y0: State, times: &[f64], h_max: f64) -> Vec<State> {
        let mut out = vec![y0];
        let mut y = y0;
        for w in times.windows(2) {
            let m = ((w[1] - w[0]) / h_max).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / m as f64;
            for _ in 0..m {
                y = step(&y, h);
            }
            out.push(y);
        }
        out
    }

    fn end(y0: [f64; 2], s: [f64; 2], target: [f64; 2]) -> [f64; 2] {
        let y = *integrate([y0[0], y0[1], s[0], s[1]], &[0.0, 1.0], H_MAX)
            .last()
            .unwrap();
        [y[0] - target[0], y[1] - target[1]]
    }

    const H_MAX: f64 = 1e-3;

    fn norm(f: [f64; 2]) -> f64 {
        let n = f[0].abs().max(f[1].abs());
        if n.is_finite() {
            n
        } else {
            f64::INFINITY
        }
    }

    /// Backtracking Newton with a finite-difference Jacobian.
    fn newton(y0: [f64; 2], mut s: [f64; 2], target: [f64; 2]) -> Option<[f64; 2]> {
        let mut f = end(y0, s, target);
        for _ in 0..50 {
            let r = norm(f);
            if r < 1e-13 {
                return Some(s);
            }
            if !r.is_finite() {
                return None;
            }
            let d = 1e-7;
            let fa = end(y0, [s[0] + d, s[1]], target);
            let fb = end(y0, [s[0], s[1] + d], target);
            let j = [
                [(fa[0] - f[0]) / d, (fb[0] - f[0]) / d],
                [(fa[1] - f[1]) / d, (fb[1] - f[1]) / d],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let ds = [
                (j[1][1] * f[0] - j[0][1] * f[1]) / det,
                (-j[1][0] * f[0] + j[0][0] * f[1]) / det,
            ];
            let mut lambda = 1.0;
            loop {
                let trial = [s[0] - lambda * ds[0], s[1] - lambda * ds[1]];
                let ft = end(y0, trial, target);
                if norm(ft) < r || (r < 1e-10 && norm(ft).is_finite()) {
                    s = trial;
                    f = ft;
                    break;
                }
                lambda /= 2.0;
                if lambda < 1e-8 {
                    return (r < 1e-11).then_some(s);
                }
            }
        }
        None
    }

    /// `(a, b)` at `times`, or `None` when Newton fails. The far endpoint is
    /// approached by continuation from the starting point.
    pub fn solve(
        a0: f64,
        b0: f64,
        a1: f64,
        b1: f64,
        times: &[f64],
    ) -> Option<(Vec<f64>, Vec<f64>)> {
        let steps = 16;
        let mut s = [0.0, 0.0];
        for m in 1..=steps {
            let w = m as f64 / steps as f64;
            let target = [a0 + w * (a1 - a0), b0 + w * (b1 - b0)];
            s = newton([a0, b0], s, target)?;
        }
        let ys = integrate([a0, b0, s[0], s[1]], times, H_MAX);
        Some((
            ys.iter().map(|y| y[0]).collect(),
            ys.iter().map(|y| y[1]).collect(),
        ))
    }
}

/// Space-like, connectable boundaries with moderate Z on both ends and the
/// singularities of the closed form kept away from the interval.
pub fn random_spacelike_boundary(rng: &mut impl Rng) -> SecondJetBoundary {
    loop {
        let v: [f64; 4] = [0; 4].map(|_| rng.gen_range(-0.3..0.8));
        let Ok(b) = SecondJetBoundary::new(v[0], v[1], v[2], v[3]) else {
            continue;
        };
        let (x0, z0) = (2.0 * v[0] - 2.0 * v[1], 1.0 + 2.0 * v[0] + 2.0 * v[1]);
        let (x1, z1) = (2.0 * v[2] - 2.0 * v[3], 1.0 + 2.0 * v[2] + 2.0 * v[3]);
        let (dx, dz) = ((x1 - x0).abs(), (z1 - z0).abs());
        // well inside the space-like cone and well inside connectability
        if !(z0 > 0.2 && z1 > 0.2 && dx > dz * 1.05 + 1e-3 && z0 + z1 > dx * 1.05) {
            continue;
        }
        // The path is Z = R / sin(phi0 + D t), singular at t = -phi0 / D and
        // t = (pi - phi0) / D. Closer than 0.1 to [0, 1] a 64-node spectral
        // second derivative cannot resolve it to 1e-8.
        let d = ((z0 * z0 + z1 * z1 - (x1 - x0).powi(2)) / (2.0 * z0 * z1)).acos();
        let phi0 = (z1 * d.sin()).atan2(z0 - z1 * d.cos());
        if phi0.min(std::f64::consts::PI - phi0 - d) >= 0.1 * d {
            return b;
        }
    }
}

/// Exact bivariate polynomial: `(j, k) -> coefficient of x^j y^k`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RatPoly(pub BTreeMap<(u32, u32), BigRational>);

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RatPoly {
    pub fn monomial(j: u32, k: u32, c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((j, k), c);
        }
        Self(m)
    }

    fn push(&mut self, key: (u32, u32), c: BigRational) {
        let e = self.0.entry(key).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.0 {
            out.push(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::default();
        for (k, c) in &self.0 {
            out.push(*k, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for ((j1, k1), c1) in &self.0 {
            for ((j2, k2), c2) in &other.0 {
                out.push((j1 + j2, k1 + k2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, p: u32) -> Self {
        (0..p).fold(Self::monomial(0, 0, BigRational::one()), |acc, _| {
            acc.mul(self)
        })
    }

    pub fn dx(&self) -> Self {
        let mut out = Self::default();
        for ((j, k), c) in &self.0 {
            if *j > 0 {
                out.push((j - 1, *k), c * BigRational::from_integer(BigInt::from(*j)));
            }
        }
        out
    }

    pub fn dy(&self) -> Self {
        let mut out = Self::default();
        for ((j, k), c) in &self.0 {
            if *k > 0 {
                out.push((*j, k - 1), c * BigRational::from_integer(BigInt::from(*k)));
            }
        }
        out
    }

    pub fn coeff(&self, j: u32, k: u32) -> BigRational {
        self.0
            .get(&(j, k))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The constant term, for fully differentiated monomials.
    pub fn constant(&self) -> BigRational {
        self.coeff(0, 0)
    }
}

pub fn x() -> RatPoly {
    RatPoly::monomial(1, 0, BigRational::one())
}

pub fn y() -> RatPoly {
    RatPoly::monomial(0, 1, BigRational::one())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

/// `|computed - exact| <= 4 ulp(exact)`, with exact zeros matched exactly.
pub fn matches_exact(computed: f64, exact: &BigRational) -> bool {
    let e = to_f64(exact);
    if exact.is_zero() {
        return computed == 0.0;
    }
    (computed - e).abs() <= 4.0 * f64::EPSILON * e.abs()
}
