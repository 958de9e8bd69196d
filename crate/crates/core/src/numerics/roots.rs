//! Bracketing root finder (Brent's method).

use crate::error::{Error, Result};

/// Default absolute tolerance on the abscissa.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

const MAX_ITER: usize = 200;

/// A closed interval on which a continuous function changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bracket requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { lo, hi, tol })
    }

    /// Bracket with the default tolerance.
    pub fn with_default_tol(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, DEFAULT_ROOT_TOL)
    }
}

/// Finds a root of `f` inside `bracket`.
///
/// The returned abscissa always lies in `[lo, hi]`, and the final bracketing
/// interval is no wider than `2 * tol`. Evaluation order is fixed, so the
/// result is deterministic.
pub fn find_root<F>(mut f: F, bracket: &RootBracket) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * bracket.tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b.clamp(bracket.lo, bracket.hi));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Domain(format!("function returned NaN at {b}")));
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_ITER,
    })
}

/// Root of an increasing-then-positive gap function on `[lo, hi]`, or `lo`
/// when the function is already non-negative there. Used for threshold
/// equations of the form "stop payoff minus continuation".
pub(crate) fn threshold_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    if f_lo >= 0.0 {
        return Ok(lo);
    }
    find_root(f, &RootBracket::new(lo, hi, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let b = RootBracket::new(0.0, 1.0, 1e-12).unwrap();
        let r = find_root(|x| x - 0.5, &b).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bcdp_constant_equation() {
        let b = RootBracket::new(1.0, 3.0, 1e-12).unwrap();
        let c = find_root(|x: f64| x.exp() - 1.0 - 2.0 * x, &b).unwrap();
        assert!((c - 1.2564).abs() < 1e-4);
        assert!((c.exp() - 1.0 - 2.0 * c).abs() < 1e-10);
    }

    #[test]
    fn geometric_mu_equation() {
        let b = RootBracket::new(2.0, 5.0, 1e-12).unwrap();
        let mu = find_root(|m: f64| m * m * (2.0 / m).exp() - 3f64.exp(), &b).unwrap();
        assert!((mu - 3.3145).abs() < 1e-3);
    }

    #[test]
    fn no_sign_change() {
        let b = RootBracket::new(0.0, 1.0, 1e-12).unwrap();
        assert!(matches!(
            find_root(|x| x * x + 1.0, &b),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn bad_brackets() {
        assert!(RootBracket::new(1.0, 1.0, 1e-9).is_err());
        assert!(RootBracket::new(0.0, 1.0, 0.0).is_err());
        assert!(RootBracket::new(0.0, f64::INFINITY, 1e-9).is_err());
    }

    #[test]
    fn endpoint_roots() {
        let b = RootBracket::new(0.0, 1.0, 1e-12).unwrap();
        assert_eq!(find_root(|x| x, &b).unwrap(), 0.0);
        assert_eq!(find_root(|x| x - 1.0, &b).unwrap(), 1.0);
    }

    #[test]
    fn threshold_root_clamps_at_lower_end() {
        assert_eq!(threshold_root(|x| x + 1.0, 0.0, 1.0, 1e-12).unwrap(), 0.0);
        let r = threshold_root(|x| x - 0.25, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.25).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn root_stays_in_bracket(lo in -10.0f64..0.0, width in 0.1f64..20.0, t in 0.0f64..1.0, k in 0.1f64..5.0) {
                let hi = lo + width;
                let target = lo + t * width;
                let b = RootBracket::new(lo, hi, 1e-12).unwrap();
                let f = |x: f64| (x - target) * k + 0.1 * (x - target).powi(3);
                let r = find_root(f, &b).unwrap();
                prop_assert!(r >= lo && r <= hi);
                prop_assert!((r - target).abs() < 1e-9);
            }
        }
    }
}
