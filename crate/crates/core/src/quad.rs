//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Used by the verification oracles: the cross-section integral, the area of
//! the fundamental domain and the sampler's reference marginals.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_9,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
    /// False when the subdivision limit was hit before the tolerance.
    pub converged: bool,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let c = (a + b) * T::half();
    let h = (b - a) * T::half();
    let fc = f(c);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        kronrod = kronrod + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * T::lit(WG[j / 2]);
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, bisecting the
/// interval with the largest error estimate until the summed estimate is
/// below `tol` or `max_intervals` is reached.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T, max_intervals: usize) -> Quadrature<T> {
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let total_err = parts.iter().fold(T::zero(), |s, p| s + p.3);
        if total_err <= tol || parts.len() >= max_intervals {
            let value = parts.iter().fold(T::zero(), |s, p| s + p.2);
            return Quadrature { value, error: total_err, evaluations, converged: total_err <= tol };
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .fold((0, -T::one()), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = (lo + hi) * T::half();
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        evaluations += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integrates over consecutive breakpoints, splitting the tolerance evenly.
pub fn integrate_pieces<T: Real, F: FnMut(T) -> T>(mut f: F, breaks: &[T], tol: T) -> Quadrature<T> {
    let n = T::from_usize(breaks.len().saturating_sub(1).max(1)).unwrap();
    let mut out = Quadrature { value: T::zero(), error: T::zero(), evaluations: 0, converged: true };
    for w in breaks.windows(2) {
        let q = integrate(&mut f, w[0], w[1], tol / n, 4096);
        out.value = out.value + q.value;
        out.error = out.error + q.error;
        out.evaluations += q.evaluations;
        out.converged &= q.converged;
    }
    out
}

/// `∫_a^∞ f`, via `y = a + s/(1 − s)` on `s ∈ [0, 1)`.
pub fn integrate_to_infinity<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, tol: T) -> Quadrature<T> {
    integrate(
        |s: T| {
            let one_minus = T::one() - s;
            if one_minus <= T::zero() {
                return T::zero();
            }
            let y = a + s / one_minus;
            let v = f(y) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                T::zero()
            }
        },
        T::zero(),
        T::one(),
        tol,
        4096,
    )
}
