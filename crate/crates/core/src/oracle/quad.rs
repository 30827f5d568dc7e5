//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|I|)`. Error estimates follow the
//! QUADPACK heuristic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_intervals: 4000,
        }
    }

    /// Purely relative tolerance.
    pub fn relative(rel_tol: f64) -> Self {
        Self::new(0.0, rel_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    (value, err)
}

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain(format!("integration limits must be finite: [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    let (value, error) = gk21(&f, lo, hi);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { lo, hi, value, error });
    let mut total = value;
    let mut total_err = error;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: total,
                error: total_err,
                intervals: heap.len(),
            });
        }
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure {
                estimate: total,
                error: total_err,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo.min(worst.hi) || mid >= worst.lo.max(worst.hi) {
            // cannot split further in floating point
            return Err(Error::QuadratureFailure {
                estimate: total,
                error: total_err,
                intervals: heap.len() + 1,
            });
        }
        let (v1, e1) = gk21(&f, worst.lo, mid);
        let (v2, e2) = gk21(&f, mid, worst.hi);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated rounding from the running updates
    let segments = heap.into_vec();
    let value = segments.iter().map(|s| s.value).sum();
    let error = segments.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        error,
        intervals: segments.len(),
        evaluations,
    })
}

/// `∫ f` to an absolute-or-relative tolerance `tol`. Integrable
/// inverse-square-root singularities at either end are tolerated: the
/// interval is mapped through `r = lo + (hi − lo) sin²θ` first.
pub fn adaptive_quad<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let opts = QuadOptions::new(tol, tol);
    if lo == hi {
        return Ok(0.0);
    }
    if lo > hi {
        return adaptive_quad(f, hi, lo, tol).map(|v| -v);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain(format!("integration limits must be finite: [{lo}, {hi}]")));
    }
    integrate_between_turning_points(|r, _, _| f(r), lo, hi, &opts).map(|r| r.value)
}

/// Integrates over `[lo, hi]` a function with at most inverse-square-root
/// singularities at both ends, using `r = lo + (hi − lo) sin²θ`.
///
/// `f` receives `(r, r − lo, hi − r)` with the two distances computed
/// without cancellation.
pub fn integrate_between_turning_points<F>(f: F, lo: f64, hi: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(hi > lo) {
        return Err(Error::Domain(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let width = hi - lo;
    integrate(
        |theta| {
            let (s, c) = theta.sin_cos();
            let d_lo = width * s * s;
            let d_hi = width * c * c;
            let jac = 2.0 * width * s * c;
            if jac == 0.0 {
                return 0.0;
            }
            f(lo + d_lo, d_lo, d_hi) * jac
        },
        0.0,
        FRAC_PI_2,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_quad(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
        let v = adaptive_quad(|x| 3.0 * x * x, -1.0, 2.0, 1e-12).unwrap();
        assert!((v - 9.0).abs() < 1e-13);
    }

    #[test]
    fn inverse_sqrt_endpoints_direct() {
        let v = adaptive_quad(|r| 1.0 / ((r - 1.0) * (3.0 - r)).sqrt(), 1.0, 3.0, 1e-10).unwrap();
        assert!((v - PI).abs() < 1e-8, "{v}");
    }

    #[test]
    fn inverse_sqrt_endpoints_substituted() {
        let r = integrate_between_turning_points(
            |_, a, b| 1.0 / (a * b).sqrt(),
            1.0,
            3.0,
            &QuadOptions::relative(1e-13),
        )
        .unwrap();
        assert!((r.value - PI).abs() < 1e-13);
        assert!(r.evaluations < 200);
    }

    #[test]
    fn beta_integral() {
        let v = adaptive_quad(|y| y.powi(3) * (1.0 - y).powi(2), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0 / 60.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = adaptive_quad(f64::exp, 0.0, 1.0, 1e-12).unwrap();
        let b = adaptive_quad(f64::exp, 1.0, 0.0, 1e-12).unwrap();
        assert!((a + b).abs() < 1e-14);
        assert!((a - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn non_integrable_fails() {
        let opts = QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_intervals: 200,
        };
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, &opts);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn infinite_limits_rejected() {
        assert!(adaptive_quad(|x| x, 0.0, f64::INFINITY, 1e-8).is_err());
    }
}
