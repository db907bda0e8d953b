//! Adaptive Gauss–Kronrod quadrature on finite intervals and rectangles.
//!
//! One-dimensional integrals use a globally adaptive G7/K15 rule with the
//! QUADPACK error heuristic. Rectangles are integrated as nested 1-d
//! integrals; the inner integral is seeded with break points at the outer
//! abscissa and on a geometric ladder around it, which keeps localised ridges
//! on the diagonal (kernels with short bandwidth) and heavy tails resolved.

// Nodes and weights are the published 16-digit values.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 4000;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

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

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the
/// partition given by the (sorted, deduplicated internally) break points.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> QuadResult {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|v| v.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return QuadResult { value: 0.0, error: 0.0, evaluations: 0, converged: true };
    }
    let mut heap = BinaryHeap::with_capacity(2 * pts.len());
    for w in pts.windows(2) {
        heap.push(kronrod15(&f, w[0], w[1]));
    }
    let mut evaluations = 15 * (pts.len() - 1);
    let (mut value, mut error) = totals(&heap);
    loop {
        if error <= tol {
            // running sums drift; confirm with an exact pass
            (value, error) = totals(&heap);
            if error <= tol {
                return QuadResult { value, error, evaluations, converged: true };
            }
        }
        if heap.len() >= MAX_INTERVALS {
            (value, error) = totals(&heap);
            return QuadResult { value, error, evaluations, converged: error <= tol };
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || worst.error.is_infinite() && worst.b - worst.a < 1e-12 {
            // interval at floating-point resolution
            heap.push(worst);
            (value, error) = totals(&heap);
            return QuadResult { value, error, evaluations, converged: false };
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if !error.is_finite() || !value.is_finite() {
            (value, error) = totals(&heap);
        }
        evaluations += 30;
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    // sort for an order-independent sum
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|l, r| l.a.total_cmp(&r.a));
    let vals: Vec<f64> = segs.iter().map(|s| s.value).collect();
    let errs: Vec<f64> = segs.iter().map(|s| s.error).collect();
    (crate::reduce::pairwise_sum(&vals), crate::reduce::pairwise_sum(&errs))
}

/// Break points on `[lo, hi]`: the end points plus `center ± 2^k` for
/// `k = -1, 0, 1, ...` while inside the interval.
pub fn ladder_breaks(lo: f64, hi: f64, center: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    if center > lo && center < hi {
        pts.push(center);
    }
    let mut step = 0.5;
    while step < (hi - lo) {
        for p in [center - step, center + step] {
            if p > lo && p < hi {
                pts.push(p);
            }
        }
        step *= 2.0;
    }
    pts
}

/// Integrates `f(x, y)` over `[x0, x1] × [y0, y1]` to absolute tolerance
/// `tol`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, x: (f64, f64), y: (f64, f64), tol: f64) -> QuadResult {
    let inner_tol = 0.25 * tol / (x.1 - x.0).abs().max(1.0);
    let evals = std::cell::Cell::new(0usize);
    let all_converged = std::cell::Cell::new(true);
    let outer_center = if x.0 < 0.0 && x.1 > 0.0 { 0.0 } else { 0.5 * (x.0 + x.1) };
    let outer = integrate_with_breaks(
        |xv| {
            let breaks = ladder_breaks(y.0, y.1, xv.clamp(y.0, y.1));
            let r = integrate_with_breaks(|yv| f(xv, yv), &breaks, inner_tol);
            evals.set(evals.get() + r.evaluations);
            if !r.converged {
                all_converged.set(false);
            }
            r.value
        },
        &ladder_breaks(x.0, x.1, outer_center),
        0.5 * tol,
    );
    QuadResult {
        value: outer.value,
        error: outer.error + inner_tol * (x.1 - x.0).abs(),
        evaluations: evals.get(),
        converged: outer.converged && all_converged.get(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-12);
        assert!((r.value - 9.0).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate(|x| (-0.5 * x * x).exp(), -12.0, 12.0, 1e-13);
        assert!((r.value - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kink_is_resolved_with_breaks() {
        let r = integrate_with_breaks(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], 1e-13);
        assert!((r.value - 2.5).abs() < 1e-13);
        let r = integrate(|x: f64| x.abs(), -1.0, 2.0, 1e-10);
        assert!((r.value - 2.5).abs() < 1e-10);
    }

    #[test]
    fn narrow_ridge_in_two_dimensions() {
        let s2: f64 = 0.01;
        let r = integrate_2d(|x, y| (-(x - y).powi(2) / (2.0 * s2)).exp(), (-5.0, 5.0), (-5.0, 5.0), 1e-9);
        // reduces to ∫_{-10}^{10} (10 - |t|) e^{-t²/(2s²)} dt
        let exact = integrate_with_breaks(
            |t: f64| (10.0 - t.abs()) * (-t * t / (2.0 * s2)).exp(),
            &[-10.0, -1.0, 0.0, 1.0, 10.0],
            1e-13,
        )
        .value;
        assert!((r.value - exact).abs() < 1e-8, "{} vs {}", r.value, exact);
    }

    #[test]
    fn ladder_contains_center_and_ends() {
        let b = ladder_breaks(-3.0, 3.0, 1.0);
        assert!(b.contains(&-3.0) && b.contains(&3.0) && b.contains(&1.0) && b.contains(&0.5) && b.contains(&-1.0));
        assert!(b.iter().all(|v| (-3.0..=3.0).contains(v)));
    }
}
