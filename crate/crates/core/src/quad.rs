//! Quadrature and summation primitives.
//!
//! - [`adaptive`]: globally adaptive Gauss-Kronrod (7/15) with user breakpoints,
//!   used for cap integrals whose integrands have kinks or jumps at known angles.
//! - [`gauss_legendre`]: fixed-order nodes and weights.
//! - [`periodic_trapezoid`]: the rule of choice for smooth periodic integrands
//!   (boundary integrals parametrized by the normal angle).
//! - [`pairwise_sum`]: fixed-tree summation; results do not depend on how the
//!   terms were produced (serially or by a thread pool).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

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
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// 7-point Gauss weights, attached to XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`adaptive`]. Converged when `err <= max(abs, rel * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

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
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            // deterministic tie-break
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`, with the
/// interval pre-split at every breakpoint strictly inside it.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        };
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut prev = lo;
    for &p in cuts.iter().chain(std::iter::once(&hi)) {
        let (value, error) = gk15(&f, prev, p);
        heap.push(Segment {
            a: prev,
            b: p,
            value,
            error,
        });
        prev = p;
    }

    loop {
        let (total, err) = totals(&heap);
        if err <= tol.abs.max(tol.rel * total.abs()) || heap.len() >= tol.max_intervals {
            return QuadResult {
                value: sign * total,
                error: err,
                intervals: heap.len(),
            };
        }
        let worst = heap.pop().expect("non-empty segment heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, a, b);
            heap.push(Segment { a, b, value, error });
        }
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    // order by position so the sum is independent of heap layout
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let values: Vec<f64> = segs.iter().map(|s| s.value).collect();
    let errors: Vec<f64> = segs.iter().map(|s| s.error).collect();
    (pairwise_sum(&values), pairwise_sum(&errors))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre rule with `panels` equal panels of the given order.
pub fn gauss_legendre_composite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    order: usize,
    panels: usize,
) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let terms: Vec<f64> = (0..panels)
        .flat_map(|k| {
            let c = a + (k as f64 + 0.5) * h;
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| wi * f(c + 0.5 * h * xi) * 0.5 * h)
                .collect::<Vec<_>>()
        })
        .collect();
    pairwise_sum(&terms)
}

/// Periodic trapezoidal rule on `N` equispaced angles `2πj/N`.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    let terms: Vec<f64> = (0..n).map(|j| f(j as f64 * h)).collect();
    pairwise_sum(&terms) * h
}

/// Sum with a fixed binary tree over the slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gk_integrates_polynomials_exactly() {
        let r = adaptive(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, &[], Tolerance::default());
        // ∫ = [x^6/6 - x^3 + x] from -1 to 2
        let exact = (64.0 / 6.0 - 8.0 + 2.0) - (1.0 / 6.0 + 1.0 - 1.0);
        assert_abs_diff_eq!(r.value, exact, epsilon = 1e-13);
    }

    #[test]
    fn breakpoints_handle_jumps() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let r = adaptive(f, 0.0, 1.0, &[0.3], Tolerance::default());
        assert_abs_diff_eq!(r.value, 0.3 + 1.4, epsilon = 1e-14);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = adaptive(|x| x.exp(), 1.0, 0.0, &[], Tolerance::default());
        assert_abs_diff_eq!(r.value, 1.0 - 1f64.exp(), epsilon = 1e-13);
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 20, 41] {
            let (x, w) = gauss_legendre(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
        let v = gauss_legendre_composite(|x| x.cos(), 0.0, 1.0, 10, 3);
        assert_abs_diff_eq!(v, 1f64.sin(), epsilon = 1e-15);
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        let v = periodic_trapezoid(|t| (t.cos()).exp(), 32);
        // 2π I_0(1)
        assert_abs_diff_eq!(v, 2.0 * PI * 1.266_065_877_752_008_4, epsilon = 1e-13);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
