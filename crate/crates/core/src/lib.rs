//! Geodesic excursions into embedded discs on hyperbolic orbifolds.
//!
//! The crate traces generic geodesics on the modular orbifold `H/PSL(2, Z)`,
//! records every visit to a disc about a chosen site (a regular point or a
//! cone point), and compares the long-run statistics with their closed forms:
//! return rate `2 sinh r / (k·area)`, mean excursion length
//! `π (cosh r − 1)/sinh r` and mean return gap `k·area/(2 sinh r)`.
//!
//! Geometry ([`hypgeom`]), closed forms ([`theory`]) and quadrature
//! ([`quad`]) are generic over the scalar type; the group, sampler, tracer
//! and experiment harness work in `f64`. Concrete aliases for both precisions
//! live at the crate root.

pub mod error;
pub mod excursion;
pub mod fuchsian;
pub mod harness;
pub mod hypgeom;
pub mod liouville;
pub mod quad;
pub mod scalar;
pub mod theory;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point64 = hypgeom::UhpPoint<f64>;
pub type Point32 = hypgeom::UhpPoint<f32>;
pub type Boundary64 = hypgeom::BoundaryPoint<f64>;
pub type Boundary32 = hypgeom::BoundaryPoint<f32>;
pub type Mobius64 = hypgeom::MobiusMap<f64>;
pub type Mobius32 = hypgeom::MobiusMap<f32>;
pub type Geodesic64 = hypgeom::Geodesic<f64>;
pub type Geodesic32 = hypgeom::Geodesic<f32>;
pub type Chord64 = hypgeom::ChordInterval<f64>;
pub type Chord32 = hypgeom::ChordInterval<f32>;
pub type Arc64 = hypgeom::BoundaryArc<f64>;
pub type Arc32 = hypgeom::BoundaryArc<f32>;
pub type Prediction64 = theory::Prediction<f64>;
pub type Prediction32 = theory::Prediction<f32>;
pub type AreaPrediction64 = theory::AreaFormPrediction<f64>;
pub type AreaPrediction32 = theory::AreaFormPrediction<f32>;
