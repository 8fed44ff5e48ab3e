//! Closed-form asymptotics for excursions into embedded discs, and the
//! quadrature oracle for the cross-section measure.
//!
//! For a disc of radius `r` about a point of cone order `k` on an orbifold of
//! area `A_S`:
//!
//! ```text
//! return rate            2 sinh r / (k A_S)
//! mean excursion length  π (cosh r − 1) / sinh r
//! mean return gap        k A_S / (2 sinh r)
//! disc area              (2π/k)(cosh r − 1)
//! ```
//!
//! The area form substitutes `cosh r = (k/2π) a + 1`, which gives
//! `rate = 2 √((1/k + a/2π)² − 1/k²) / A_S` and
//! `mean length = π / √(1 + 4π/(ka))`. The same expressions printed with a
//! plus sign under the radical are also evaluated, for comparison only.

use crate::error::{Error, Result};
use crate::hypgeom::tangency_maps;
use crate::quad::{integrate_pieces, Quadrature};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Asymptotic excursion statistics for one disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction<T> {
    pub radius: T,
    pub order: u32,
    /// Entries per unit time.
    pub rate: T,
    pub mean_excursion_length: T,
    pub mean_return_gap: T,
    /// `μ(L_r(ε))/ε`, the thickened cross-section measure per unit thickness.
    pub section_measure_per_eps: T,
    pub disc_area: T,
    /// Fraction of time spent in the disc, `disc_area / area(S)`.
    pub occupancy: T,
}

/// The area-form expressions as printed with `+` under the radical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedAreaForm<T> {
    pub rate: T,
    pub mean_excursion_length: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaFormPrediction<T> {
    pub area: T,
    pub corrected: Prediction<T>,
    pub printed: PrintedAreaForm<T>,
}

fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_order(k: u32) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("cone order must be at least 1".to_string()))
    }
}

/// `(2π/k)(cosh r − 1)`
pub fn disc_area<T: Real>(r: T, k: u32) -> T {
    T::two() * T::PI() / T::from_u32(k).unwrap() * (r.cosh() - T::one())
}

pub fn predict_radius_form<T: Real>(r: T, k: u32, area_s: T) -> Result<Prediction<T>> {
    check_positive("radius", r)?;
    check_positive("orbifold area", area_s)?;
    check_order(k)?;
    let kf = T::from_u32(k).unwrap();
    let (s, c) = (r.sinh(), r.cosh());
    let rate = T::two() * s / (kf * area_s);
    let disc = disc_area(r, k);
    Ok(Prediction {
        radius: r,
        order: k,
        rate,
        mean_excursion_length: T::PI() * (c - T::one()) / s,
        mean_return_gap: kf * area_s / (T::two() * s),
        section_measure_per_eps: rate,
        disc_area: disc,
        occupancy: disc / area_s,
    })
}

/// Radius of the disc of area `a` about a point of order `k`:
/// `arccosh((k/2π) a + 1)`.
pub fn radius_from_area<T: Real>(a: T, k: u32) -> Result<T> {
    check_positive("disc area", a)?;
    check_order(k)?;
    Ok((T::from_u32(k).unwrap() * a / (T::two() * T::PI()) + T::one()).acosh())
}

pub fn predict_area_form<T: Real>(a: T, k: u32, area_s: T) -> Result<AreaFormPrediction<T>> {
    check_positive("orbifold area", area_s)?;
    let r = radius_from_area(a, k)?;
    let corrected = predict_radius_form(r, k, area_s)?;
    let kf = T::from_u32(k).unwrap();
    let two_pi = T::two() * T::PI();
    let inv_k = kf.recip();
    let printed_rate = T::two() * ((inv_k + a / two_pi).powi(2) + inv_k * inv_k).sqrt() / area_s;
    let q = two_pi / (kf * a);
    let printed_length = T::PI() / ((q + T::one()).powi(2) + q * q).sqrt();
    Ok(AreaFormPrediction {
        area: a,
        corrected,
        printed: PrintedAreaForm { rate: printed_rate, mean_excursion_length: printed_length },
    })
}

/// `μ(L_r(ε)) = 2ε sinh r / area(S)`.
pub fn section_measure<T: Real>(r: T, eps: T, area_s: T) -> Result<T> {
    check_positive("radius", r)?;
    check_positive("orbifold area", area_s)?;
    if !(eps >= T::zero()) {
        return Err(Error::InvalidArgument(format!("thickness must be non-negative, got {eps}")));
    }
    Ok(T::two() * eps * r.sinh() / area_s)
}

/// `∫_{I_x} (x − y)⁻² dy` from the tangency endpoints, branch by branch:
/// `1/(x − W) + 1/(U − x)` when `I_x` contains ∞ and `1/(x − W) − 1/(x − U)`
/// when it is bounded (mirrored for `x < 0`).
pub fn inner_integral<T: Real>(r: T, x: T) -> T {
    let (w, u) = tangency_maps(r, x.abs()).expect("radius validated by caller");
    // For x < 0 the interval is the mirror image of I_{|x|} and the measure
    // agrees, so both signs use the |x| branch.
    let ax = x.abs();
    let from_w = (ax - w.finite().expect("W is finite for x >= 0")).recip();
    if ax <= r.sinh() {
        // (−∞, W] ∪ [U, ∞); U is ∞ exactly at the pole.
        from_w + u.finite().map_or(T::zero(), |uv| (uv - ax).recip())
    } else {
        // [U, W]
        let uv = u.finite().expect("U is finite off the pole");
        from_w - (ax - uv).recip()
    }
}

/// Absolute tolerance of the outer integration.
pub const ORACLE_TOL: f64 = 1e-10;

/// `I(r) = ∫_ℝ ∫_{I_x} (x − y)⁻² dy dx`, integrated numerically with
/// `x = tan θ` and breakpoints at the branch switches `x = ± sinh r`.
/// The closed form is `2π sinh r`.
pub fn quadrature_oracle<T: Real>(r: T) -> Result<Quadrature<T>> {
    check_positive("radius", r)?;
    if r > T::two() {
        return Err(Error::InvalidArgument(format!("oracle radius must be at most 2, got {r}")));
    }
    let edge = T::FRAC_PI_2();
    let split = r.sinh().atan();
    let breaks = [-edge, -split, T::zero(), split, edge];
    let q = integrate_pieces(
        |th: T| {
            let (s, c) = th.sin_cos();
            if c <= T::zero() {
                return T::zero();
            }
            let v = inner_integral(r, s / c) / (c * c);
            if v.is_finite() {
                v
            } else {
                T::zero()
            }
        },
        &breaks,
        T::lit(ORACLE_TOL).max(T::epsilon() * T::lit(100.0)),
    );
    Ok(q)
}
