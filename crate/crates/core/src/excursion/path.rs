use crate::fuchsian::{GroupElement, OrbifoldModel};
use crate::hypgeom::{Geodesic, UhpPoint};
use crate::liouville::{to_boundary_coords, UnitTangentVector};

/// Length of the time window served by one frame.
pub const FRAME_LENGTH: f64 = 0.5;

/// One chart of a geodesic ray: the ray re-expressed near the fundamental
/// domain after applying the accumulated reductions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    /// Absolute time at which the frame starts.
    pub start: f64,
    pub geodesic: Geodesic<f64>,
    /// Parameter on `geodesic` of the point at time `start`.
    pub param0: f64,
    /// Element carrying the previous frame's coordinates to this one.
    pub entry: GroupElement,
}

impl Frame {
    #[inline]
    pub fn param(&self, t: f64) -> f64 {
        self.param0 + (t - self.start)
    }

    #[inline]
    pub fn time(&self, param: f64) -> f64 {
        self.start + (param - self.param0)
    }

    #[inline]
    pub fn point(&self, t: f64) -> UhpPoint<f64> {
        self.geodesic.point(self.param(t))
    }
}

/// A geodesic ray on the orbifold, stored as a chain of frames.
///
/// Evaluating a geodesic far from its basepoint loses all precision, so the
/// ray is re-centered every [`FRAME_LENGTH`]: at each frame boundary the
/// current point is reduced into the fundamental domain and the geodesic is
/// moved by the same group element. The schedule depends only on the initial
/// vector, so every consumer of the path sees the same curve.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    frames: Vec<Frame>,
}

impl GeodesicPath {
    /// Builds frames covering `[0, horizon]`.
    pub fn new(model: &dyn OrbifoldModel, v: &UnitTangentVector, horizon: f64) -> Self {
        let coords = to_boundary_coords(v);
        let (_, h0) = model.reduce(v.base);
        let geodesic = h0.to_mobius().apply_geodesic(&coords.geodesic());
        let param0 = geodesic.foot(h0.apply(v.base)).t_foot;
        let mut frames = vec![Frame { start: 0.0, geodesic, param0, entry: h0 }];
        let count = (horizon.max(0.0) / FRAME_LENGTH).ceil() as usize + 1;
        for k in 1..count {
            let prev = frames[k - 1];
            let start = k as f64 * FRAME_LENGTH;
            let p = prev.point(start);
            let (w, h) = model.reduce(p);
            let geodesic = h.to_mobius().apply_geodesic(&prev.geodesic);
            let param0 = geodesic.foot(w).t_foot;
            frames.push(Frame { start, geodesic, param0, entry: h });
        }
        Self { frames }
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    /// Index of the frame serving time `t`.
    pub fn frame_index(&self, t: f64) -> usize {
        let k = (t / FRAME_LENGTH).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.frames.len() - 1)
        }
    }

    pub fn frame(&self, k: usize) -> &Frame {
        &self.frames[k]
    }

    /// Point at time `t`, in the coordinates of the frame serving `t`.
    pub fn point(&self, t: f64) -> UhpPoint<f64> {
        self.frames[self.frame_index(t)].point(t)
    }
}
