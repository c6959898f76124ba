//! Adaptive Gauss-Kronrod integration.
//!
//! Every integral in the crate goes through [`adapt`]: a 7/15-point Gauss-Kronrod
//! pair on each interval, with the interval carrying the largest error estimate
//! bisected first. Vector-valued integrands (complex values are two components)
//! share one set of subdivision decisions, and the interval error is the sum of
//! the per-component estimates.
//!
//! Triangle-domain double integrals `∫₀^τ dt ∫₀^t dt' f(t')` are reduced to the
//! single integral `∫₀^τ (τ − u) f(u) du`, which is an identity rather than an
//! approximation. [`integrate_2d_naive`] is a brute-force midpoint rule over the
//! same triangle, kept as an independent reference for tests.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for every integral evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_ABS_TOL: f64 = 1e-13;
    pub const DEFAULT_REL_TOL: f64 = 1e-10;
    pub const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;

    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                value: abs_tol,
                reason: "must be positive and finite",
            });
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: rel_tol,
                reason: "must be positive and finite",
            });
        }
        if max_subdivisions == 0 {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }

    fn tolerance(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: Self::DEFAULT_ABS_TOL,
            rel_tol: Self::DEFAULT_REL_TOL,
            max_subdivisions: Self::DEFAULT_MAX_SUBDIVISIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate<T = f64> {
    pub value: T,
    pub error_estimate: f64,
    /// Number of intervals in the final partition.
    pub subdivisions_used: usize,
}

// Kronrod abscissae on [-1, 1], descending; XGK[1], XGK[3], XGK[5] and the
// centre are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// QUADPACK-style error rescaling: |K15 - G7| is pessimistic for smooth
/// integrands, and never trust an estimate below the roundoff floor.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

#[derive(Debug, Clone, Copy)]
struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const N: usize> Eq for Segment<N> {}

impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Segment<N> {
    // Max-heap on error; ties go to the leftmost interval.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn eval_point<const N: usize, F>(f: &mut F, x: f64) -> Result<[f64; N]>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let v = f(x)?;
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { at: x })
    }
}

fn gauss_kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Segment<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut samples = [[0.0; N]; 15];
    samples[7] = eval_point(f, center)?;
    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        samples[j] = eval_point(f, center - dx)?;
        samples[14 - j] = eval_point(f, center + dx)?;
    }

    let mut value = [0.0; N];
    let mut error = 0.0;
    for c in 0..N {
        let fc = samples[7][c];
        let mut res_k = WGK[7] * fc;
        let mut res_g = WG[3] * fc;
        let mut res_abs = WGK[7] * fc.abs();
        for j in 0..7 {
            let pair = samples[j][c] + samples[14 - j][c];
            res_k += WGK[j] * pair;
            res_abs += WGK[j] * (samples[j][c].abs() + samples[14 - j][c].abs());
            if j % 2 == 1 {
                res_g += WG[j / 2] * pair;
            }
        }
        let mean = 0.5 * res_k;
        let mut res_asc = WGK[7] * (fc - mean).abs();
        for j in 0..7 {
            res_asc += WGK[j] * ((samples[j][c] - mean).abs() + (samples[14 - j][c] - mean).abs());
        }
        let width = half.abs();
        value[c] = res_k * half;
        error += rescale_error((res_k - res_g) * half, res_abs * width, res_asc * width);
    }
    Ok(Segment { a, b, value, error })
}

fn norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Core adaptive driver. `panels` equal-width intervals seed the partition
/// (capped at the subdivision budget) before worst-first bisection starts.
fn adapt<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    q: &QuadratureSpec,
) -> Result<IntegralEstimate<[f64; N]>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::Domain {
            function: "integrate",
            argument: "b - a",
            value: b - a,
        });
    }
    if a == b {
        return Ok(IntegralEstimate {
            value: [0.0; N],
            error_estimate: 0.0,
            subdivisions_used: 1,
        });
    }

    let panels = panels.clamp(1, q.max_subdivisions);
    let mut heap = BinaryHeap::with_capacity(q.max_subdivisions + 1);
    let mut total = [0.0; N];
    let mut total_err = 0.0;
    let width = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels {
            b
        } else {
            a + width * (i + 1) as f64
        };
        let seg = gauss_kronrod(&mut f, lo, hi)?;
        for (t, v) in total.iter_mut().zip(seg.value) {
            *t += v;
        }
        total_err += seg.error;
        heap.push(seg);
    }

    while total_err > q.tolerance(norm(&total)) {
        if heap.len() >= q.max_subdivisions {
            return Err(Error::NumericalFailure {
                estimate: total.to_vec(),
                error_estimate: total_err,
                subdivisions: heap.len(),
            });
        }
        let worst = heap.pop().expect("partition is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval has shrunk to adjacent floats; no further progress possible.
            heap.push(worst);
            return Err(Error::NumericalFailure {
                estimate: total.to_vec(),
                error_estimate: total_err,
                subdivisions: heap.len(),
            });
        }
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        for (c, t) in total.iter_mut().enumerate() {
            *t += left.value[c] + right.value[c] - worst.value[c];
        }
        total_err = (total_err + left.error + right.error - worst.error).max(0.0);
        heap.push(left);
        heap.push(right);
    }

    // Re-sum left to right so the reported value does not carry the
    // incremental update history.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = [0.0; N];
    let mut error_estimate = 0.0;
    for seg in &segments {
        for (v, x) in value.iter_mut().zip(seg.value) {
            *v += x;
        }
        error_estimate += seg.error;
    }
    Ok(IntegralEstimate {
        value,
        error_estimate,
        subdivisions_used: segments.len(),
    })
}

fn scalar(est: IntegralEstimate<[f64; 1]>) -> IntegralEstimate {
    IntegralEstimate {
        value: est.value[0],
        error_estimate: est.error_estimate,
        subdivisions_used: est.subdivisions_used,
    }
}

fn complex(est: IntegralEstimate<[f64; 2]>) -> IntegralEstimate<Complex64> {
    IntegralEstimate {
        value: Complex64::new(est.value[0], est.value[1]),
        error_estimate: est.error_estimate,
        subdivisions_used: est.subdivisions_used,
    }
}

/// Number of seed panels so that each spans at most half a period of an
/// oscillation with the given angular frequency.
pub fn oscillation_panels(length: f64, angular_frequency: f64) -> usize {
    let n = (length.abs() * angular_frequency.abs() / std::f64::consts::PI).ceil();
    if n.is_finite() && n >= 1.0 {
        n as usize
    } else {
        1
    }
}

/// `∫ₐᵇ f` for an infallible real integrand.
pub fn integrate_1d<F>(mut f: F, a: f64, b: f64, q: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: FnMut(f64) -> f64,
{
    adapt(|x| Ok([f(x)]), a, b, 1, q).map(scalar)
}

/// `∫ₐᵇ f` with `panels` seed intervals and a fallible integrand.
pub fn try_integrate_1d<F>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    q: &QuadratureSpec,
) -> Result<IntegralEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    adapt(|x| Ok([f(x)?]), a, b, panels, q).map(scalar)
}

/// Complex `∫ₐᵇ f`; real and imaginary parts share subdivisions.
pub fn integrate_complex<F>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    q: &QuadratureSpec,
) -> Result<IntegralEstimate<Complex64>>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    adapt(
        |x| {
            let z = f(x)?;
            Ok([z.re, z.im])
        },
        a,
        b,
        panels,
        q,
    )
    .map(complex)
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function: "reduce_double",
            argument: "tau",
            value: tau,
        })
    }
}

/// `∫₀^τ dt ∫₀^t dt' f(t')`, evaluated as `∫₀^τ (τ − u) f(u) du`.
pub fn reduce_double<F>(mut f: F, tau: f64, q: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: FnMut(f64) -> f64,
{
    try_reduce_double(|u| Ok(f(u)), tau, 1, q)
}

pub fn try_reduce_double<F>(
    mut f: F,
    tau: f64,
    panels: usize,
    q: &QuadratureSpec,
) -> Result<IntegralEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_tau(tau)?;
    try_integrate_1d(|u| Ok((tau - u) * f(u)?), 0.0, tau, panels, q)
}

pub fn reduce_double_complex<F>(
    mut f: F,
    tau: f64,
    panels: usize,
    q: &QuadratureSpec,
) -> Result<IntegralEstimate<Complex64>>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    check_tau(tau)?;
    integrate_complex(|u| Ok(f(u)? * (tau - u)), 0.0, tau, panels, q)
}

/// `∫₀^∞ f(ω) dω` through `ω = scale·u/(1 − u)`, which maps `[0, ∞)` onto
/// `[0, 1)`. Suited to integrands with an `e^{−ω/scale}` tail.
pub fn integrate_semi_infinite<F>(
    mut f: F,
    scale: f64,
    q: &QuadratureSpec,
) -> Result<IntegralEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain {
            function: "integrate_semi_infinite",
            argument: "scale",
            value: scale,
        });
    }
    try_integrate_1d(
        |u| {
            let rest = 1.0 - u;
            let omega = scale * u / rest;
            if !omega.is_finite() {
                return Ok(0.0);
            }
            let jacobian = scale / (rest * rest);
            let v = f(omega)?;
            // The tail underflows before the Jacobian overflows for decaying
            // integrands; treat 0·∞ as 0.
            if v == 0.0 {
                Ok(0.0)
            } else {
                Ok(v * jacobian)
            }
        },
        0.0,
        1.0,
        1,
        q,
    )
}

/// Brute-force midpoint rule for `∫₀^τ dt ∫₀^t dt' f(t, t')` on a
/// `panels × panels` grid. Cells strictly inside the triangle use their
/// centre; the half cells on the diagonal use their centroid with half
/// weight. Converges as `O(panels⁻²)`. Intended as a test reference only.
pub fn integrate_2d_naive<F>(f: F, tau: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    check_tau(tau)?;
    if panels < 10 {
        return Err(Error::Domain {
            function: "integrate_2d_naive",
            argument: "panels",
            value: panels as f64,
        });
    }
    let h = tau / panels as f64;
    let rows: Vec<f64> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let t = (i as f64 + 0.5) * h;
            let mut row = 0.0;
            for k in 0..i {
                row += f(t, (k as f64 + 0.5) * h);
            }
            row * h * h + 0.5 * h * h * f((i as f64 + 2.0 / 3.0) * h, (i as f64 + 1.0 / 3.0) * h)
        })
        .collect();
    Ok(rows.iter().sum())
}
