//! Upper half-plane geometry.
//!
//! Everything here is closed form: Möbius actions, the hyperbolic distance,
//! unit-speed geodesic parameterization, distance from a point to a geodesic
//! together with the foot parameter, chords cut out of metric discs, and the
//! two tangency maps `W_ρ`, `U_ρ` that describe which geodesics issuing from a
//! boundary point meet the disc `B_ρ(i)`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use std::ops::{Mul, Neg};

/// A point `x + iy` of the upper half-plane, `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UhpPoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> UhpPoint<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y <= T::zero() {
            return Err(Error::InvalidPoint(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(Self { x, y })
    }

    /// The point `i`.
    pub fn i() -> Self {
        Self { x: T::zero(), y: T::one() }
    }

    /// Squared Euclidean modulus `|z|²`.
    #[inline]
    pub fn norm_sqr(&self) -> T {
        self.x * self.x + self.y * self.y
    }
}

/// A point of the extended real line bounding the half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> BoundaryPoint<T> {
    pub fn finite(&self) -> Option<T> {
        match *self {
            BoundaryPoint::Finite(v) => Some(v),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }
}

impl<T: Real> Neg for BoundaryPoint<T> {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            BoundaryPoint::Finite(v) => BoundaryPoint::Finite(-v),
            BoundaryPoint::Infinity => BoundaryPoint::Infinity,
        }
    }
}

/// A unimodular real matrix acting by `z ↦ (az + b)/(cz + d)`, identified
/// with its negative.
///
/// Constructed maps are scaled to determinant one and sign-normalized so that
/// the first nonzero entry of `(a, b, c, d)` is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> MobiusMap<T> {
    /// Normalizes `(a, b; c, d)`. The determinant must be positive.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det <= T::zero() {
            return Err(Error::InvalidMap(format!("determinant {det} is not positive")));
        }
        let s = det.sqrt().recip();
        Ok(Self { a: a * s, b: b * s, c: c * s, d: d * s }.canonical_sign())
    }

    pub fn identity() -> Self {
        Self { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    fn canonical_sign(self) -> Self {
        let lead = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|v| *v != T::zero())
            .unwrap_or_else(T::one);
        if lead < T::zero() {
            Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical_sign()
    }

    pub fn apply(&self, z: UhpPoint<T>) -> UhpPoint<T> {
        let den_re = self.c * z.x + self.d;
        let den_im = self.c * z.y;
        let den = den_re * den_re + den_im * den_im;
        let num_re = self.a * z.x + self.b;
        let x = (num_re * den_re + self.a * self.c * z.y * z.y) / den;
        let y = self.det() * z.y / den;
        UhpPoint { x, y }
    }

    /// Boundary action; the pole goes to infinity.
    pub fn apply_boundary(&self, p: BoundaryPoint<T>) -> BoundaryPoint<T> {
        match p {
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == T::zero() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
            BoundaryPoint::Infinity => {
                if self.c == T::zero() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &Geodesic<T>) -> Geodesic<T> {
        Geodesic { plus: self.apply_boundary(g.plus), minus: self.apply_boundary(g.minus) }
    }
}

impl<T: Real> Mul for MobiusMap<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
        .canonical_sign()
    }
}

/// `cosh d(z, w) - 1 = |z − w|² / (2 Im z Im w)`.
#[inline]
pub fn cosh_dist_minus_one<T: Real>(z: UhpPoint<T>, w: UhpPoint<T>) -> T {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    (dx * dx + dy * dy) / (T::two() * z.y * w.y)
}

/// Hyperbolic distance.
pub fn dist<T: Real>(z: UhpPoint<T>, w: UhpPoint<T>) -> T {
    // 2 asinh(|z - w| / (2 sqrt(y y'))) keeps full precision near zero.
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    let e = (dx * dx + dy * dy).sqrt() / (T::two() * (z.y * w.y).sqrt());
    T::two() * e.asinh()
}

/// An oriented geodesic from `minus` (the backward endpoint α₋) to `plus`
/// (the forward endpoint α₊).
///
/// The unit-speed parameter has its origin at the top of the semicircle when
/// both endpoints are finite, and at height one on vertical geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic<T> {
    pub plus: BoundaryPoint<T>,
    pub minus: BoundaryPoint<T>,
}

/// Closest approach of a geodesic to a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootPoint<T> {
    pub distance: T,
    pub t_foot: T,
}

impl<T: Real> Geodesic<T> {
    pub fn new(plus: BoundaryPoint<T>, minus: BoundaryPoint<T>) -> Result<Self> {
        let ok = match (plus, minus) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => false,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => a != b && a.is_finite() && b.is_finite(),
            (BoundaryPoint::Finite(a), _) | (_, BoundaryPoint::Finite(a)) => a.is_finite(),
        };
        if ok {
            Ok(Self { plus, minus })
        } else {
            Err(Error::DegenerateGeodesic)
        }
    }

    /// Convenience constructor for two finite endpoints.
    pub fn between(plus: T, minus: T) -> Result<Self> {
        Self::new(BoundaryPoint::Finite(plus), BoundaryPoint::Finite(minus))
    }

    /// The point at arc-length parameter `t`.
    pub fn point(&self, t: T) -> UhpPoint<T> {
        match (self.plus, self.minus) {
            (BoundaryPoint::Finite(p), BoundaryPoint::Finite(m)) => {
                let c = (p + m) * T::half();
                let rho = (p - m).abs() * T::half();
                let sigma = if p > m { T::one() } else { -T::one() };
                UhpPoint { x: c + sigma * rho * t.tanh(), y: rho / t.cosh() }
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(m)) => UhpPoint { x: m, y: t.exp() },
            (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => UhpPoint { x: p, y: (-t).exp() },
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => unreachable!("validated geodesic"),
        }
    }

    /// Image of `p` under the orientation-preserving map sending α₋ → 0 and
    /// α₊ → ∞, as `(u, v, log|image|)`; the geodesic becomes the positive
    /// imaginary axis with its parameter equal to the log-modulus.
    fn normal_form(&self, p: UhpPoint<T>) -> (T, T, T) {
        match (self.plus, self.minus) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(m)) => {
                // s (w − m)/(a − w), s = sign(a − m)
                let ax = p.x - m;
                let bx = a - p.x;
                let a2 = ax * ax + p.y * p.y;
                let b2 = bx * bx + p.y * p.y;
                let s = if a > m { T::one() } else { -T::one() };
                let u = s * (ax * bx - p.y * p.y) / b2;
                let v = p.y * (a - m).abs() / b2;
                (u, v, T::half() * (a2 / b2).ln())
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(m)) => {
                let u = p.x - m;
                (u, p.y, T::half() * (u * u + p.y * p.y).ln())
            }
            (BoundaryPoint::Finite(a), BoundaryPoint::Infinity) => {
                // −1/(w − a)
                let dx = p.x - a;
                let n2 = dx * dx + p.y * p.y;
                (-dx / n2, p.y / n2, -T::half() * n2.ln())
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => unreachable!("validated geodesic"),
        }
    }

    /// Distance from `p` to the geodesic and the parameter of the foot of the
    /// perpendicular. Satisfies `cosh d(γ(t), p) = cosh(distance)·cosh(t − t_foot)`.
    pub fn foot(&self, p: UhpPoint<T>) -> FootPoint<T> {
        let (u, v, log_mod) = self.normal_form(p);
        FootPoint { distance: (u.abs() / v).asinh(), t_foot: log_mod }
    }

    /// The same geodesic traversed backwards.
    pub fn reversed(&self) -> Self {
        Self { plus: self.minus, minus: self.plus }
    }
}

/// Free-function form of [`Geodesic::foot`].
pub fn dist_to_geodesic<T: Real>(p: UhpPoint<T>, g: &Geodesic<T>) -> FootPoint<T> {
    g.foot(p)
}

/// The parameter interval during which a geodesic lies inside a metric disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordInterval<T> {
    pub t_entry: T,
    pub t_exit: T,
    pub center: UhpPoint<T>,
    pub radius: T,
    /// Closest approach of the geodesic to `center`.
    pub closest: T,
}

impl<T: Real> ChordInterval<T> {
    pub fn length(&self) -> T {
        self.t_exit - self.t_entry
    }

    pub fn midpoint(&self) -> T {
        (self.t_entry + self.t_exit) * T::half()
    }
}

/// Chord of the disc `B_r(center)` cut by `g`, or `None` on a miss.
///
/// Closest approach within [`Real::geom_eps`] of `r` counts as a miss, so
/// tangencies never produce zero-length excursions.
pub fn excursion_interval<T: Real>(g: &Geodesic<T>, center: UhpPoint<T>, r: T) -> Option<ChordInterval<T>> {
    chord_from_foot(g.foot(center), center, r)
}

pub(crate) fn chord_from_foot<T: Real>(foot: FootPoint<T>, center: UhpPoint<T>, r: T) -> Option<ChordInterval<T>> {
    if foot.distance >= r - T::geom_eps() {
        return None;
    }
    let half = (r.cosh() / foot.distance.cosh()).acosh();
    Some(ChordInterval {
        t_entry: foot.t_foot - half,
        t_exit: foot.t_foot + half,
        center,
        radius: r,
        closest: foot.distance,
    })
}

/// `W_ρ(x) = (x sinh ρ − 1)/(x + sinh ρ)`.
pub fn w_map<T: Real>(rho: T) -> MobiusMap<T> {
    let s = rho.sinh();
    MobiusMap { a: s, b: -T::one(), c: T::one(), d: s }
}

/// `U_ρ(x) = (x sinh ρ + 1)/(−x + sinh ρ)`.
pub fn u_map<T: Real>(rho: T) -> MobiusMap<T> {
    let s = rho.sinh();
    MobiusMap { a: s, b: T::one(), c: -T::one(), d: s }
}

/// Second endpoints `(w, u)` of the two geodesics from `x` tangent to
/// `B_ρ(i)`. Negative `x` uses the reflected pair `(−W_ρ(−x), −U_ρ(−x))`.
pub fn tangency_maps<T: Real>(rho: T, x: T) -> Result<(BoundaryPoint<T>, BoundaryPoint<T>)> {
    if !(rho > T::zero()) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("tangency maps need rho > 0 and finite x, got ({rho}, {x})")));
    }
    let (w, u) = (w_map(rho), u_map(rho));
    if x >= T::zero() {
        let p = BoundaryPoint::Finite(x);
        Ok((w.apply_boundary(p), u.apply_boundary(p)))
    } else {
        let p = BoundaryPoint::Finite(-x);
        Ok((-w.apply_boundary(p), -u.apply_boundary(p)))
    }
}

/// An arc of the extended real line, traversed in the increasing direction
/// from `from` to `to` and wrapping through ∞ when `from > to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryArc<T> {
    pub from: BoundaryPoint<T>,
    pub to: BoundaryPoint<T>,
}

impl<T: Real> BoundaryArc<T> {
    /// True when the closed arc contains ∞.
    pub fn is_unbounded(&self) -> bool {
        match (self.from, self.to) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => a > b,
            _ => true,
        }
    }

    pub fn contains(&self, y: BoundaryPoint<T>) -> bool {
        let y = match y {
            BoundaryPoint::Infinity => return self.is_unbounded(),
            BoundaryPoint::Finite(y) => y,
        };
        match (self.from, self.to) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                if a <= b {
                    a <= y && y <= b
                } else {
                    y >= a || y <= b
                }
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(b)) => y <= b,
            (BoundaryPoint::Finite(a), BoundaryPoint::Infinity) => y >= a,
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
        }
    }

    /// `∫ (x − y)⁻² dy` over the arc, for `x` outside it.
    ///
    /// With the antiderivative `F(y) = 1/(x − y)` vanishing at ∞ this is
    /// `F(to) − F(from)` whether or not the arc wraps.
    pub fn inner_measure(&self, x: T) -> T {
        let f = |p: BoundaryPoint<T>| match p {
            BoundaryPoint::Finite(y) => (x - y).recip(),
            BoundaryPoint::Infinity => T::zero(),
        };
        f(self.to) - f(self.from)
    }
}

/// The set `I_x` of far endpoints `y` for which the geodesic joining `x` and
/// `y` meets the closed disc `B_ρ(i)`.
///
/// The arc runs from `U_ρ(x)` to `W_ρ(x)` (reflected for `x < 0`) and contains
/// ∞ exactly when `|x| ≤ sinh ρ`.
pub fn chord_boundary_interval<T: Real>(rho: T, x: T) -> Result<BoundaryArc<T>> {
    let (w, u) = tangency_maps(rho, x)?;
    Ok(if x >= T::zero() { BoundaryArc { from: u, to: w } } else { BoundaryArc { from: w, to: u } })
}
