//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `abs_tol`. The final sum runs over subintervals in
//! left-to-right order, so results are bit-reproducible on a given platform.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerance and work limit for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Quadrature {
    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_subdivisions == 0 {
            return Err(Error::InvalidArgument("max_subdivisions must be at least 1".into()));
        }
        Ok(Self {
            abs_tol,
            max_subdivisions,
        })
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
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
        self.cmp(other) == Ordering::Equal
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
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]` to absolute accuracy `q.abs_tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, q: &Quadrature) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("integration requires a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&f, a, b);
    let mut total_err = first.error;
    heap.push(first);
    let mut splits = 1;
    while total_err > q.abs_tol {
        if splits >= q.max_subdivisions {
            return Err(Error::SubdivisionLimit {
                limit: q.max_subdivisions,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            return Err(Error::SubdivisionLimit {
                limit: splits,
                error: total_err,
            });
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        total_err = total_err - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
        if splits % 64 == 0 {
            // refresh the running sum to avoid drift from the incremental update
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(segments.iter().map(|s| s.value).sum())
}

/// Integrates `f` over `[a, inf)`.
///
/// `tail_bound(t)` must bound `|int_t^inf f|`; the range is truncated at the
/// first `T = a + 2^k` where that bound falls below `abs_tol / 10`.
pub fn integrate_to_infinity<F, B>(f: F, a: f64, tail_bound: B, q: &Quadrature) -> Result<f64>
where
    F: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let target = q.abs_tol / 10.0;
    let mut width = 1.0;
    while tail_bound(a + width) >= target {
        width *= 2.0;
        if width > 1e12 {
            return Err(Error::Domain("tail bound does not decay".into()));
        }
    }
    let inner = Quadrature {
        abs_tol: q.abs_tol - target,
        ..*q
    };
    integrate(f, a, a + width, &inner)
}

const GL5_X: [f64; 3] = [0.0, 0.538_469_310_105_683_1, 0.906_179_845_938_664];
const GL5_W: [f64; 3] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Five-point Gauss-Legendre rule on `[a, b]`; exact for degree-9 polynomials.
pub(crate) fn gauss_legendre5<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = GL5_W[0] * f(c);
    for j in 1..3 {
        let d = h * GL5_X[j];
        s += GL5_W[j] * (f(c - d) + f(c + d));
    }
    s * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_polynomial() {
        let q = Quadrature::default();
        assert!((integrate(|_| 1.0, 0.0, 1.0, &q).unwrap() - 1.0).abs() < 1e-15);
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, &q).unwrap();
        assert!((v - 8.0).abs() < 1e-13);
        assert_eq!(integrate(|x| x, 1.0, 1.0, &q).unwrap(), 0.0);
    }

    #[test]
    fn kinked_integrand() {
        let q = Quadrature::new(1e-11, 2000).unwrap();
        let v = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &q).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-10);
    }

    #[test]
    fn log_singularity_at_endpoint() {
        let q = Quadrature::new(1e-10, 4000).unwrap();
        let v = integrate(|x: f64| -x.ln(), 0.0, 1.0, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn subdivision_limit_is_reported() {
        let q = Quadrature::new(1e-14, 2).unwrap();
        let r = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 3.0, &q);
        assert!(matches!(r, Err(Error::SubdivisionLimit { .. })));
    }

    #[test]
    fn reversed_limits_rejected() {
        let q = Quadrature::default();
        assert!(integrate(|x| x, 1.0, 0.0, &q).is_err());
        assert!(Quadrature::new(0.0, 10).is_err());
        assert!(Quadrature::new(1e-9, 0).is_err());
    }

    #[test]
    fn improper_exponential() {
        let q = Quadrature::new(1e-12, 4000).unwrap();
        let v = integrate_to_infinity(|t: f64| (-t).exp(), 0.0, |t: f64| (-t).exp(), &q).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
    }

    #[test]
    fn gauss_legendre_is_exact_for_degree_nine() {
        let v = gauss_legendre5(|x: f64| x.powi(9) + x.powi(4), 0.0, 1.0);
        assert!((v - (0.1 + 0.2)).abs() < 1e-15);
    }

    #[test]
    fn deterministic() {
        let q = Quadrature::new(1e-12, 4000).unwrap();
        let f = |x: f64| (x * 7.0).sin() * (-x).exp();
        let a = integrate(f, 0.0, 5.0, &q).unwrap();
        let b = integrate(f, 0.0, 5.0, &q).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn additive_on_polynomials(c0 in -3.0f64..3.0, c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, c5 in -3.0f64..3.0,
                                       a in -2.0f64..0.0, w1 in 0.0f64..2.0, w2 in 0.0f64..2.0) {
                let q = Quadrature::new(1e-12, 1000).unwrap();
                let f = |x: f64| c0 + c1 * x + c2 * x * x + c5 * x.powi(5);
                let b = a + w1;
                let c = b + w2;
                let ab = integrate(f, a, b, &q).unwrap();
                let bc = integrate(f, b, c, &q).unwrap();
                let ac = integrate(f, a, c, &q).unwrap();
                prop_assert!((ab + bc - ac).abs() <= 3.0 * q.abs_tol);
            }
        }
    }
}
