//! Independent numeric reference for the analytic transform.
//!
//! Integrates `g(t) e^{-iwt}` by adaptive Gauss-Kronrod quadrature, segment by
//! segment (the integrand is smooth inside each segment, with derivative kinks
//! at the knots). Used by tests and the `verify` command only; it is orders of
//! magnitude slower than the closed form and never feeds production output.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::detrend::DetrendedCurve;

/// 15-point Kronrod abscissae on `[-1, 1]` (positive half; symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights for the odd-indexed Kronrod abscissae.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub est_error: f64,
    pub evaluations: usize,
    /// False when the evaluation budget ran out before the tolerance was met;
    /// `value` is then the best estimate so far.
    pub converged: bool,
}

pub const DEFAULT_EVAL_BUDGET: usize = 10_000_000;

struct Interval {
    value: Complex64,
    err: f64,
    /// integral of the integrand modulus, the roundoff scale of `value`
    resabs: f64,
    a: f64,
    b: f64,
    /// segment index owning [a, b]
    seg: usize,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One Gauss-Kronrod panel on `[a, b]` of segment `seg`.
fn gk15(curve: &DetrendedCurve, seg: usize, omega: f64, a: f64, b: f64) -> Interval {
    let segment = &curve.segments()[seg];
    let p0 = curve.p0();
    let f = |t: f64| -> Complex64 {
        let g = segment.amplitude * (segment.rate * (t - segment.start as f64)).exp() - p0;
        g * Complex64::from_polar(1.0, -omega * t)
    };
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut resabs = WGK[7] * f_center.norm();
    for (i, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let lo = f(center - dx);
        let hi = f(center + dx);
        let pair = lo + hi;
        kronrod += WGK[i] * pair;
        resabs += WGK[i] * (lo.norm() + hi.norm());
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).norm();
    Interval {
        value,
        err,
        resabs: resabs * half,
        a,
        b,
        seg,
    }
}

/// Adaptive quadrature of the transform integral at one frequency.
///
/// Subdivides until the total error estimate drops below
/// `tol * (|value| + p0 * 1e-12)` or the evaluation budget is exhausted.
/// The target is floored at the roundoff level of the panel sums; near
/// spectral nulls the estimate cannot drop below machine noise no matter
/// how finely the panels are split.
pub fn quadrature_transform(curve: &DetrendedCurve, omega: f64, tol: f64) -> QuadratureResult {
    quadrature_transform_with_budget(curve, omega, tol, DEFAULT_EVAL_BUDGET)
}

pub fn quadrature_transform_with_budget(
    curve: &DetrendedCurve,
    omega: f64,
    tol: f64,
    budget: usize,
) -> QuadratureResult {
    let tol = tol.max(1e-13);
    let mut heap = BinaryHeap::new();
    let mut value = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut evaluations = 0usize;
    let mut l1 = 0.0;
    for (k, seg) in curve.segments().iter().enumerate() {
        let a = seg.start as f64;
        let iv = gk15(curve, k, omega, a, a + 1.0);
        evaluations += 15;
        value += iv.value;
        total_err += iv.err;
        l1 += iv.resabs;
        heap.push(iv);
    }
    let floor = curve.p0() * 1e-12;
    let noise = 50.0 * f64::EPSILON * l1;
    loop {
        let target = (tol * (value.norm() + floor)).max(noise);
        if total_err <= target {
            return QuadratureResult {
                value,
                est_error: total_err,
                evaluations,
                converged: true,
            };
        }
        if evaluations + 30 > budget {
            return QuadratureResult {
                value,
                est_error: total_err,
                evaluations,
                converged: false,
            };
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(curve, worst.seg, omega, worst.a, mid);
        let right = gk15(curve, worst.seg, omega, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
}

/// Threshold for [`VerifyOutcome::passed`].
pub const VERIFY_MAX_RELATIVE_DEVIATION: f64 = 1e-9;

/// Result of an analytic-vs-quadrature sweep over random frequencies.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOutcome {
    pub samples: usize,
    pub max_deviation: f64,
    pub worst_omega: f64,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.max_deviation < VERIFY_MAX_RELATIVE_DEVIATION
    }
}

/// Compare an analytic transform path against quadrature at `samples` random
/// frequencies in `(0, 2*pi]`. The analytic path is a closure so negative
/// controls can inject a corrupted one.
pub fn verify_curve(
    curve: &DetrendedCurve,
    samples: usize,
    seed: u64,
    analytic: impl Fn(f64) -> Complex64,
) -> VerifyOutcome {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let floor = curve.p0() * 1e-12;
    let mut max_deviation = 0.0f64;
    let mut worst_omega = 0.0f64;
    for _ in 0..samples {
        let u = ((rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9007199254740992.0);
        let omega = u * std::f64::consts::TAU;
        let reference = quadrature_transform(curve, omega, 1e-11);
        let dev = (analytic(omega) - reference.value).norm() / (reference.value.norm() + floor);
        if dev > max_deviation {
            max_deviation = dev;
            worst_omega = omega;
        }
    }
    VerifyOutcome {
        samples,
        max_deviation,
        worst_omega,
    }
}
