//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! The interval is first cut at every declared singular point, so that
//! integrable log or power singularities only ever sit on subinterval
//! endpoints, where the Kronrod rule never samples. Semi-infinite ranges are
//! mapped onto `[0, 1)` by `x = lower + t / (1 - t)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumericsError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub lower: f64,
    pub upper: Upper,
    /// Abscissae where the integrand may be singular or non-smooth.
    pub singular_points: Vec<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(lower: f64, upper: Upper) -> Self {
        Self {
            lower,
            upper,
            singular_points: Vec::new(),
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_subdivisions: 2000,
        }
    }

    pub fn finite(lower: f64, upper: f64) -> Self {
        Self::new(lower, Upper::Finite(upper))
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_singular_points(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.singular_points.extend(points);
        self
    }

    pub fn with_max_subdivisions(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.lower.is_finite() {
            return Err(NumericsError::InvalidSpec("lower limit must be finite".into()));
        }
        if let Upper::Finite(b) = self.upper {
            if !(b > self.lower) {
                return Err(NumericsError::InvalidSpec(format!(
                    "lower limit {} must be below upper limit {b}",
                    self.lower
                )));
            }
        }
        if !(self.rel_tol > 0.0) || self.abs_tol < 0.0 {
            return Err(NumericsError::InvalidSpec("tolerances must be positive".into()));
        }
        for &p in &self.singular_points {
            let inside = p >= self.lower
                && match self.upper {
                    Upper::Finite(b) => p <= b,
                    Upper::Infinite => p.is_finite(),
                };
            if !inside {
                return Err(NumericsError::InvalidSpec(format!(
                    "singular point {p} lies outside the integration range"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

impl NumericsError {
    /// Best available estimate carried by a non-convergence error.
    pub fn best_estimate(&self) -> Option<f64> {
        match self {
            NumericsError::NoConvergence { estimate, .. } => Some(*estimate),
            _ => None,
        }
    }
}

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
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
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
struct Segment {
    a: f64,
    b: f64,
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

fn kronrod21(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Adaptive integral of `f` over the range described by `spec`.
///
/// On failure to reach the requested tolerance the error carries the best
/// estimate and the achieved error bound.
pub fn integrate<F>(mut f: F, spec: &QuadratureSpec) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> f64,
{
    spec.validate()?;
    let lower = spec.lower;
    match spec.upper {
        Upper::Finite(upper) => {
            let breaks = breakpoints(lower, upper, spec.singular_points.iter().copied());
            adapt(&mut f, &breaks, spec)
        }
        Upper::Infinite => {
            let to_t = |x: f64| {
                let s = x - lower;
                s / (1.0 + s)
            };
            let breaks = breakpoints(0.0, 1.0, spec.singular_points.iter().map(|&p| to_t(p)));
            let mut mapped = |t: f64| {
                let one_minus = 1.0 - t;
                let x = lower + t / one_minus;
                let v = f(x);
                if v == 0.0 {
                    0.0
                } else {
                    v / (one_minus * one_minus)
                }
            };
            adapt(&mut mapped, &breaks, spec)
        }
    }
}

fn breakpoints(a: f64, b: f64, interior: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(interior.filter(|&p| p > a && p < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

fn adapt(
    f: &mut impl FnMut(f64) -> f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadEstimate> {
    let mut heap = BinaryHeap::new();
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    let mut total = 0.0;
    let mut total_error = 0.0;
    for w in breaks.windows(2) {
        let (value, error) = kronrod21(f, w[0], w[1]);
        total += value;
        total_error += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let mut subdivisions = heap.len();
    loop {
        let tolerance = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_error <= tolerance || !total_error.is_finite() && !total.is_finite() {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // Segment too narrow to split in floating point: accept as is.
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs() {
            settled_value += worst.value;
            settled_error += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            heap.push(worst);
            let (value, error) = sum_heap(&heap, settled_value, settled_error);
            return Err(NumericsError::NoConvergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let (v1, e1) = kronrod21(f, worst.a, mid);
        let (v2, e2) = kronrod21(f, mid, worst.b);
        subdivisions += 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        // Recompute sums from scratch every so often to avoid drift.
        if subdivisions % 64 == 0 {
            let (v, e) = sum_heap(&heap, settled_value, settled_error);
            total = v;
            total_error = e;
        } else {
            total += v1 + v2 - worst.value;
            total_error += e1 + e2 - worst.error;
        }
    }
    let (value, abs_error) = sum_heap(&heap, settled_value, settled_error);
    if !value.is_finite() {
        return Err(NumericsError::NoConvergence {
            estimate: value,
            error: abs_error,
            subdivisions,
        });
    }
    let tolerance = spec.abs_tol.max(spec.rel_tol * value.abs());
    // Segments settled because of floating-point resolution may leave an
    // error above tolerance; accept when that residue is at roundoff level.
    if abs_error > tolerance && abs_error > 1e3 * f64::EPSILON * value.abs().max(spec.abs_tol) {
        let heap_error: f64 = heap.iter().map(|s| s.error).sum();
        if heap_error > tolerance {
            return Err(NumericsError::NoConvergence {
                estimate: value,
                error: abs_error,
                subdivisions,
            });
        }
    }
    Ok(QuadEstimate {
        value,
        abs_error,
        subdivisions,
    })
}

fn sum_heap(heap: &BinaryHeap<Segment>, value: f64, error: f64) -> (f64, f64) {
    // Sum in ascending address order so the result does not depend on heap layout.
    let mut segments: Vec<&Segment> = heap.iter().collect();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    segments
        .iter()
        .fold((value, error), |(v, e), s| (v + s.value, e + s.error))
}

/// Maximise a unimodal function on `[a, b]` by golden-section search.
/// Returns the abscissa and the function value there.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (hi - lo).abs() <= x_tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
