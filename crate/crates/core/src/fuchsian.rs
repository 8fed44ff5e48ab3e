//! The modular group and the orbifold model built on it.
//!
//! Provides exact integer group elements, reduction into the standard
//! fundamental domain `F = {|Re z| ≤ 1/2, |z| ≥ 1}`, complete enumeration of
//! orbit points in metric balls, and disc-center sites with their cone order
//! and embedding radius.

use crate::error::{Error, Result};
use crate::hypgeom::{cosh_dist_minus_one, dist, BoundaryPoint, MobiusMap, UhpPoint};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Mul;
use std::sync::{Arc, OnceLock, RwLock};

type Point = UhpPoint<f64>;

/// Boundary tolerance for fundamental-domain membership and tie-breaking.
pub const DOMAIN_TOL: f64 = 1e-12;

/// Largest ball radius `orbit_ball` accepts.
pub const MAX_ORBIT_RADIUS: f64 = 3.0;

/// An element of PSL(2, Z), stored with canonical sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GroupElement {
    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    /// `z ↦ z + 1`
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };
    /// `z ↦ z − 1`
    pub const T_INV: Self = Self { a: 1, b: -1, c: 0, d: 1 };
    /// `z ↦ −1/z`
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 }.canonical();

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidMap(format!("({a}, {b}; {c}, {d}) has determinant {}", a * d - b * c)));
        }
        Ok(Self { a, b, c, d }.canonical())
    }

    /// Translation `z ↦ z + n`.
    pub const fn translation(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    const fn canonical(self) -> Self {
        let lead = if self.a != 0 {
            self.a
        } else if self.b != 0 {
            self.b
        } else if self.c != 0 {
            self.c
        } else {
            self.d
        };
        if lead < 0 {
            Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical()
    }

    /// `a² + b² + c² + d² = 2 cosh d(i, g·i)`.
    pub fn norm_sqr(&self) -> i64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn to_mobius(&self) -> MobiusMap<f64> {
        MobiusMap { a: self.a as f64, b: self.b as f64, c: self.c as f64, d: self.d as f64 }
    }

    pub fn apply(&self, z: Point) -> Point {
        self.to_mobius().apply(z)
    }

    pub fn apply_boundary(&self, p: BoundaryPoint<f64>) -> BoundaryPoint<f64> {
        self.to_mobius().apply_boundary(p)
    }
}

impl Mul for GroupElement {
    type Output = Self;

    fn mul(self, r: Self) -> Self {
        Self {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
        .canonical()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

/// A group element together with the image of the base point under it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub element: GroupElement,
    pub point: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpecialKind {
    Cone { order: u32 },
    Cusp,
}

/// A cone point or cusp of the orbifold, given by a representative in `F`
/// (cusps carry no interior point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialPoint {
    pub kind: SpecialKind,
    pub point: Option<Point>,
}

/// A finite-area hyperbolic orbifold presented as `H/Γ` with an integral
/// group `Γ`.
pub trait OrbifoldModel: Send + Sync {
    fn name(&self) -> &str;
    fn area(&self) -> f64;
    fn generators(&self) -> Vec<GroupElement>;
    fn in_fundamental_domain(&self, z: Point) -> bool;
    /// Returns `(z_f, g)` with `z_f = g·z` in the fundamental domain.
    fn reduce(&self, z: Point) -> (Point, GroupElement);
    /// Every `(g, g·z0)` with `d(w, g·z0) ≤ rho_c`.
    fn orbit_ball(&self, z0: Point, w: Point, rho_c: f64) -> Result<Vec<OrbitPoint>>;
    fn special_points(&self) -> Vec<SpecialPoint>;
}

/// Caches the integer matrices of bounded norm together with the images of
/// a base point. Entries are built once under the write lock and then shared.
#[derive(Default)]
pub struct OrbitCache {
    entries: RwLock<HashMap<(u64, u64, i64), Arc<Vec<OrbitPoint>>>>,
}

impl OrbitCache {
    pub fn get(&self, z0: Point, bound: i64) -> Arc<Vec<OrbitPoint>> {
        let key = (z0.x.to_bits(), z0.y.to_bits(), bound);
        if let Some(v) = self.entries.read().expect("orbit cache poisoned").get(&key) {
            return Arc::clone(v);
        }
        let mut map = self.entries.write().expect("orbit cache poisoned");
        Arc::clone(map.entry(key).or_insert_with(|| {
            Arc::new(
                elements_with_norm_at_most(bound)
                    .into_iter()
                    .map(|g| OrbitPoint { element: g, point: g.apply(z0) })
                    .collect(),
            )
        }))
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("orbit cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All elements of PSL(2, Z) with `a² + b² + c² + d² ≤ bound`, sorted.
pub fn elements_with_norm_at_most(bound: i64) -> Vec<GroupElement> {
    let m = isqrt(bound.max(0));
    let mut out = HashSet::new();
    for a in -m..=m {
        let ra = bound - a * a;
        let mb = isqrt(ra);
        for b in -mb..=mb {
            let rb = ra - b * b;
            let mc = isqrt(rb);
            for c in -mc..=mc {
                let rc = rb - c * c;
                if a != 0 {
                    let num = 1 + b * c;
                    if num % a == 0 {
                        let d = num / a;
                        if d * d <= rc {
                            out.insert(GroupElement { a, b, c, d }.canonical());
                        }
                    }
                } else if b * c == -1 {
                    let md = isqrt(rc);
                    for d in -md..=md {
                        out.insert(GroupElement { a, b, c, d }.canonical());
                    }
                }
            }
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    v
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The modular orbifold `H/PSL(2, Z)`.
#[derive(Default)]
pub struct Modular {
    cache: OrbitCache,
}

impl Modular {
    pub fn cache(&self) -> &OrbitCache {
        &self.cache
    }
}

/// Shared instance of the modular model (and its enumeration cache).
pub fn modular() -> &'static Modular {
    static MODEL: OnceLock<Modular> = OnceLock::new();
    MODEL.get_or_init(Modular::default)
}

/// Looks up a model by name. Only `modular` ships.
pub fn model_by_name(name: &str) -> Result<&'static dyn OrbifoldModel> {
    match name {
        "modular" => Ok(modular()),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

pub fn orbifold_area(name: &str) -> Result<f64> {
    Ok(model_by_name(name)?.area())
}

const MAX_REDUCTION_STEPS: usize = 100_000;

impl OrbifoldModel for Modular {
    fn name(&self) -> &str {
        "modular"
    }

    fn area(&self) -> f64 {
        std::f64::consts::FRAC_PI_3
    }

    fn generators(&self) -> Vec<GroupElement> {
        vec![GroupElement::T, GroupElement::T_INV, GroupElement::S]
    }

    fn in_fundamental_domain(&self, z: Point) -> bool {
        z.x.abs() <= 0.5 + DOMAIN_TOL && z.norm_sqr() >= 1.0 - DOMAIN_TOL
    }

    fn reduce(&self, z: Point) -> (Point, GroupElement) {
        let (mut x, mut y) = (z.x, z.y);
        let mut g = GroupElement::IDENTITY;
        for _ in 0..MAX_REDUCTION_STEPS {
            let n = x.round();
            if n != 0.0 {
                x -= n;
                g = GroupElement::translation(-(n as i64)) * g;
            }
            let r2 = x * x + y * y;
            if r2 < 1.0 - DOMAIN_TOL {
                x = -x / r2;
                y /= r2;
                g = GroupElement::S * g;
            } else {
                break;
            }
        }
        // Boundary points go to the Re z ≤ 0 half.
        if x > 0.5 - DOMAIN_TOL {
            x -= 1.0;
            g = GroupElement::T_INV * g;
        }
        let r2 = x * x + y * y;
        if (r2 - 1.0).abs() <= DOMAIN_TOL && x > 0.0 {
            x = -x / r2;
            y /= r2;
            g = GroupElement::S * g;
        }
        (UhpPoint { x, y }, g)
    }

    fn orbit_ball(&self, z0: Point, w: Point, rho_c: f64) -> Result<Vec<OrbitPoint>> {
        if !(rho_c > 0.0) {
            return Err(Error::InvalidArgument(format!("orbit ball radius must be positive, got {rho_c}")));
        }
        if rho_c > MAX_ORBIT_RADIUS {
            return Err(Error::SizeLimit(rho_c));
        }
        // Orbit points of z0 ∈ F never rise above Im z0, and d(w, p) ≥ |ln(Im w / Im p)|.
        if self.in_fundamental_domain(z0) && w.y > z0.y * rho_c.exp() * (1.0 + 1e-12) {
            return Ok(Vec::new());
        }
        let i = UhpPoint::i();
        let reach = dist(i, w) + rho_c + dist(i, z0);
        let bound = (2.0 * reach.cosh() * (1.0 + 1e-12)).floor() as i64;
        let threshold = rho_c.cosh() - 1.0;
        let all = self.cache.get(z0, bound);
        Ok(all
            .iter()
            .filter(|op| cosh_dist_minus_one(w, op.point) <= threshold)
            .copied()
            .collect())
    }

    fn special_points(&self) -> Vec<SpecialPoint> {
        let rho = UhpPoint { x: -0.5, y: 3f64.sqrt() / 2.0 };
        vec![
            SpecialPoint { kind: SpecialKind::Cone { order: 2 }, point: Some(UhpPoint::i()) },
            SpecialPoint { kind: SpecialKind::Cone { order: 3 }, point: Some(rho) },
            SpecialPoint { kind: SpecialKind::Cusp, point: None },
        ]
    }
}

/// Tolerance for deciding that a group element fixes the site center.
pub const STABILIZER_TOL: f64 = 1e-10;

/// A disc center on the orbifold: a lift `z0` in the closed fundamental
/// domain, its cone order `k` (1 at regular points) and the embedding radius
/// `R`, half the smallest displacement of `z0` by a non-stabilizing element.
#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub z0: Point,
    pub order: u32,
    pub max_radius: f64,
    pub stabilizer: Vec<GroupElement>,
}

impl Site {
    pub fn new(model: &dyn OrbifoldModel, z0: Point) -> Result<Self> {
        if !z0.y.is_finite() || !z0.x.is_finite() || z0.y <= 0.0 {
            return Err(Error::InvalidPoint(format!("site center ({}, {}) is not an interior point", z0.x, z0.y)));
        }
        if !model.in_fundamental_domain(z0) {
            return Err(Error::InvalidPoint(format!(
                "site center ({}, {}) is not in the closed fundamental domain",
                z0.x, z0.y
            )));
        }
        let mut stabilizer: Vec<GroupElement> = model
            .orbit_ball(z0, z0, 0.05)?
            .into_iter()
            .filter(|op| dist(op.point, z0) < STABILIZER_TOL)
            .map(|op| op.element)
            .collect();
        stabilizer.sort();
        let mut max_radius = None;
        for rho in [0.5, 1.0, 2.0, MAX_ORBIT_RADIUS] {
            let nearest = model
                .orbit_ball(z0, z0, rho)?
                .into_iter()
                .map(|op| dist(op.point, z0))
                .filter(|d| *d >= STABILIZER_TOL)
                .fold(f64::INFINITY, f64::min);
            if nearest.is_finite() {
                max_radius = Some(nearest / 2.0);
                break;
            }
        }
        let max_radius = max_radius.ok_or_else(|| {
            Error::InvalidPoint("no distinct orbit point within the enumeration limit".to_string())
        })?;
        Ok(Self { z0, order: stabilizer.len() as u32, max_radius, stabilizer })
    }

    /// Canonical representative of the coset `g·Stab(z0)`: the smallest
    /// canonical matrix in it. Two elements move `z0` to the same point iff
    /// their keys agree.
    pub fn coset_key(&self, g: GroupElement) -> GroupElement {
        self.stabilizer.iter().map(|s| g * *s).min().unwrap_or(g)
    }

    /// Largest disc area below which discs embed (k-to-1 at cone points).
    pub fn max_area(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.order as f64 * (self.max_radius.cosh() - 1.0)
    }

    pub fn is_cone(&self) -> bool {
        self.order > 1
    }
}

/// A site on the modular orbifold.
pub fn make_site(z0: Point) -> Result<Site> {
    Site::new(modular(), z0)
}
