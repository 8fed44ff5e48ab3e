//! Unit tangent vectors, boundary coordinates `(x, y, t)` and exact sampling
//! of the normalized Liouville measure.
//!
//! In boundary coordinates the geodesic flow is a translation of `t`, and the
//! invariant measure has density `(x − y)⁻²` in `dx dy dt` up to the
//! normalization `1/(π·area(S))`.

use crate::error::{Error, Result};
use crate::hypgeom::{BoundaryPoint, Geodesic, UhpPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

type Point = UhpPoint<f64>;

/// Directions within this many radians (in tangent) of vertical are treated
/// as exactly vertical.
pub const VERTICAL_TOL: f64 = 1e-12;

/// A unit tangent vector: base point and direction angle measured from the
/// positive real direction, in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitTangentVector {
    pub base: Point,
    pub angle: f64,
}

impl UnitTangentVector {
    pub fn new(base: Point, angle: f64) -> Self {
        Self { base, angle: angle.rem_euclid(TAU) }
    }
}

/// Forward endpoint `x`, backward endpoint `y` and arc-length parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoords {
    pub x: BoundaryPoint<f64>,
    pub y: BoundaryPoint<f64>,
    pub t: f64,
}

impl BoundaryCoords {
    pub fn geodesic(&self) -> Geodesic<f64> {
        Geodesic { plus: self.x, minus: self.y }
    }
}

pub fn to_boundary_coords(v: &UnitTangentVector) -> BoundaryCoords {
    let (sin, cos) = v.angle.sin_cos();
    let Point { x, y } = v.base;
    if cos.abs() <= VERTICAL_TOL * sin.abs() {
        return if sin > 0.0 {
            BoundaryCoords { x: BoundaryPoint::Infinity, y: BoundaryPoint::Finite(x), t: y.ln() }
        } else {
            BoundaryCoords { x: BoundaryPoint::Finite(x), y: BoundaryPoint::Infinity, t: -y.ln() }
        };
    }
    // Center on the real axis where the normal through the base meets it.
    let center = x + y * sin / cos;
    let radius = y / cos.abs();
    let (plus, minus) = if cos > 0.0 { (center + radius, center - radius) } else { (center - radius, center + radius) };
    BoundaryCoords {
        x: BoundaryPoint::Finite(plus),
        y: BoundaryPoint::Finite(minus),
        t: (-sin / cos.abs()).asinh(),
    }
}

pub fn from_boundary_coords(c: &BoundaryCoords) -> UnitTangentVector {
    let base = c.geodesic().point(c.t);
    let angle = match (c.x, c.y) {
        (BoundaryPoint::Infinity, _) => FRAC_PI_2,
        (_, BoundaryPoint::Infinity) => 3.0 * FRAC_PI_2,
        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(m)) => {
            let sigma = if p > m { 1.0 } else { -1.0 };
            (-c.t.tanh()).atan2(sigma / c.t.cosh())
        }
    };
    UnitTangentVector::new(base, angle)
}

/// `G_s(x, y, t) = (x, y, t + s)`.
pub fn flow_shift(c: &BoundaryCoords, s: f64) -> BoundaryCoords {
    BoundaryCoords { t: c.t + s, ..*c }
}

/// `φ(x, y) = (x − y)⁻²`.
pub fn boundary_density(x: f64, y: f64) -> Result<f64> {
    if x == y || !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument(format!("density needs distinct finite endpoints, got ({x}, {y})")));
    }
    Ok((x - y).powi(-2))
}

/// Normalization `1/(π·area(S))` turning `φ dx dy dt` into the invariant
/// probability measure.
pub fn density_normalization(area: f64) -> f64 {
    1.0 / (PI * area)
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replica `index` under master seed `master`:
/// `splitmix64(master + index · 0x9E3779B97F4A7C15)` with wrapping arithmetic.
pub fn replica_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Draws vectors distributed by the Liouville measure of the modular
/// orbifold: base uniform in hyperbolic area on `F`, angle uniform.
///
/// The base is drawn by rejection from the strip `|x| ≤ 1/2, y ≥ √3/2`, whose
/// `y⁻²` marginal is sampled exactly by inverse CDF, `y = (√3/2)/(1 − u)`.
#[derive(Debug, Clone)]
pub struct LiouvilleSampler {
    rng: ChaCha8Rng,
    proposals: u64,
    accepted: u64,
}

impl LiouvilleSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), proposals: 0, accepted: 0 }
    }

    pub fn for_replica(master: u64, index: u64) -> Self {
        Self::new(replica_seed(master, index))
    }

    pub fn sample(&mut self) -> UnitTangentVector {
        let angle = self.rng.gen::<f64>() * TAU;
        loop {
            self.proposals += 1;
            let x = self.rng.gen::<f64>() - 0.5;
            let u: f64 = self.rng.gen();
            let y = SQRT3_2 / (1.0 - u);
            if x * x + y * y >= 1.0 {
                self.accepted += 1;
                return UnitTangentVector { base: UhpPoint { x, y }, angle };
            }
        }
    }

    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::dist;

    fn close(a: &UnitTangentVector, b: &UnitTangentVector, tol: f64) -> bool {
        let da = (a.angle - b.angle).rem_euclid(TAU);
        let da = da.min(TAU - da);
        (a.base.x - b.base.x).abs() < tol && (a.base.y - b.base.y).abs() < tol && da < tol
    }

    #[test]
    fn coordinate_examples() {
        let up = to_boundary_coords(&UnitTangentVector::new(UhpPoint::i(), FRAC_PI_2));
        assert_eq!((up.x, up.y), (BoundaryPoint::Infinity, BoundaryPoint::Finite(0.0)));
        assert_eq!(up.t, 0.0);
        let right = to_boundary_coords(&UnitTangentVector::new(UhpPoint::i(), 0.0));
        assert_eq!((right.x, right.y, right.t), (BoundaryPoint::Finite(1.0), BoundaryPoint::Finite(-1.0), 0.0));
        let down = to_boundary_coords(&UnitTangentVector::new(UhpPoint { x: 0.2, y: 3.0 }, 3.0 * FRAC_PI_2));
        assert_eq!(down.x, BoundaryPoint::Finite(0.2));
        assert!(down.y.is_infinite());
    }

    #[test]
    fn round_trip_example() {
        let v = UnitTangentVector::new(UhpPoint { x: 0.3, y: 0.7 }, 1.1);
        let c = to_boundary_coords(&v);
        assert!(close(&from_boundary_coords(&c), &v, 1e-9));
        assert!(dist(c.geodesic().point(c.t), v.base) < 1e-12);
    }

    #[test]
    fn endpoints_by_ode_integration() {
        // Integrate the geodesic equations x'' = 2x'y'/y, y'' = (y'² − x'²)/y
        // forward with RK4 and compare the limiting real coordinate with x.
        let v = UnitTangentVector::new(UhpPoint { x: 0.3, y: 0.7 }, 1.1);
        let c = to_boundary_coords(&v);
        let f = |s: [f64; 4]| [s[2], s[3], 2.0 * s[2] * s[3] / s[1], (s[3] * s[3] - s[2] * s[2]) / s[1]];
        let (sin, cos) = v.angle.sin_cos();
        let mut s = [v.base.x, v.base.y, v.base.y * cos, v.base.y * sin];
        let h = 1e-3;
        for _ in 0..25_000 {
            let k1 = f(s);
            let k2 = f(std::array::from_fn(|i| s[i] + 0.5 * h * k1[i]));
            let k3 = f(std::array::from_fn(|i| s[i] + 0.5 * h * k2[i]));
            let k4 = f(std::array::from_fn(|i| s[i] + h * k3[i]));
            s = std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        }
        assert!((s[0] - c.x.finite().unwrap()).abs() < 1e-6);
        assert!(s[1] < 1e-6);
    }

    #[test]
    fn flow_shift_laws() {
        let c = BoundaryCoords { x: BoundaryPoint::Finite(1.0), y: BoundaryPoint::Finite(-1.0), t: 0.0 };
        assert_eq!(flow_shift(&c, 2.0).t, 2.0);
        assert_eq!(flow_shift(&c, 0.0), c);
        assert_eq!(flow_shift(&flow_shift(&c, 0.25), 0.5), flow_shift(&c, 0.75));
        let v = from_boundary_coords(&flow_shift(&c, 0.7));
        assert_eq!(v.base, c.geodesic().point(0.7));
    }

    #[test]
    fn density_examples() {
        assert_eq!(boundary_density(1.0, -1.0).unwrap(), 0.25);
        assert_eq!(boundary_density(3.0, 1.0).unwrap(), 0.25);
        assert_eq!(boundary_density(2.0, -2.0).unwrap(), 1.0 / 16.0);
        assert!(boundary_density(1.0, 1.0).is_err());
        assert!((density_normalization(PI / 3.0) - 3.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        let seeds: std::collections::HashSet<_> = (0..1000).map(|i| replica_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        let a: Vec<_> = (0..5).map(|_| LiouvilleSampler::new(7).sample()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn samples_lie_in_domain() {
        let mut s = LiouvilleSampler::new(1);
        for _ in 0..10_000 {
            let v = s.sample();
            assert!(v.base.x.abs() <= 0.5 && v.base.x * v.base.x + v.base.y * v.base.y >= 1.0);
            assert!((0.0..TAU).contains(&v.angle));
        }
        let rate = s.accepted() as f64 / s.proposals() as f64;
        assert!((rate - 0.9069).abs() < 0.01);
    }
}
