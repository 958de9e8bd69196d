//! Large-N constants of the full-information problems.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate, Quadrature, RootBracket};

const INNER_TOL: f64 = 1e-13;
const OUTER_TOL: f64 = 1e-11;
const MAX_SUB: usize = 4000;

fn quad(tol: f64) -> Quadrature {
    Quadrature {
        abs_tol: tol,
        max_subdivisions: MAX_SUB,
    }
}

/// Runs an outer integral whose integrand itself integrates; the first inner
/// failure is returned instead of a NaN.
fn nested<F>(outer: F, a: f64, b: f64) -> Result<f64>
where
    F: Fn(f64, &RefCell<Option<Error>>) -> f64,
{
    let err = RefCell::new(None);
    let v = integrate(|t| outer(t, &err), a, b, &quad(OUTER_TOL));
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    v
}

fn record(r: Result<f64>, err: &RefCell<Option<Error>>) -> f64 {
    match r {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    }
}

/// Ein(t) = int_0^t (1 - e^{-u})/u du, by quadrature.
pub fn ein(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("Ein requires t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    integrate(
        |u: f64| if u == 0.0 { 1.0 } else { -f64::exp_m1(-u) / u },
        0.0,
        t,
        &quad(INNER_TOL),
    )
}

/// F(z) = int_0^z e^t (1 - Ein(t)) dt.
pub fn z_equation(z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("z must be non-negative, got {z}")));
    }
    nested(|t, err| t.exp() * (1.0 - record(ein(t), err)), 0.0, z)
}

/// Root z of F in (1, 3): s (1 - x_s) -> z for the no-recall thresholds.
pub fn asymptotic_z() -> Result<f64> {
    let err = RefCell::new(None);
    let z = find_root(
        |z| record(z_equation(z), &err),
        &RootBracket::new(1.0, 3.0, 1e-12)?,
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    z
}

/// Root of Ein(z) = 1: s (1 - x_s) -> z for the thresholds with recall.
pub fn recall_asymptote() -> Result<f64> {
    let err = RefCell::new(None);
    let z = find_root(|z| record(ein(z), &err) - 1.0, &RootBracket::new(0.5, 3.0, 1e-12)?);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    z
}

/// Limit C of v(0, N)/N for the no-recall problem:
/// C = int_0^1 e^{-z/u} (int_0^u [(e^{zt/u} - 1)/t + e^{zt/u}/(1 - t)] dt - 1) du.
///
/// With t = u tau the inner integral is A + u B(u), where
/// A = int_0^1 (e^{z tau} - 1)/tau d tau and
/// B(u) = int_0^1 (e^{z tau} - e^z)/(1 - u tau) d tau - e^z ln(1 - u)/u.
pub fn fidp_limit_constant() -> Result<f64> {
    let z = asymptotic_z()?;
    limit_constant_at(z)
}

pub(crate) fn limit_constant_at(z: f64) -> Result<f64> {
    let ez = z.exp();
    let a = integrate(
        |t: f64| if t == 0.0 { z } else { f64::exp_m1(z * t) / t },
        0.0,
        1.0,
        &quad(INNER_TOL),
    )?;
    nested(
        |u, err| {
            let w = (-z / u).exp();
            if w == 0.0 {
                return 0.0;
            }
            let smooth = record(
                integrate(
                    |t: f64| ((z * t).exp() - ez) / (1.0 - u * t),
                    0.0,
                    1.0,
                    &quad(INNER_TOL),
                ),
                err,
            );
            let b = smooth - ez * f64::ln_1p(-u) / u;
            w * (a + u * b - 1.0)
        },
        0.0,
        1.0,
    )
}

/// c* solving e^c = 1 + 2c on (1, 3).
pub fn bcdp_c_star() -> Result<f64> {
    find_root(
        |c: f64| f64::exp_m1(c) - 2.0 * c,
        &RootBracket::new(1.0, 3.0, 1e-14)?,
    )
}

/// Limit of the optimal no-recall payoff:
/// v* = int_0^1 (1/x) int_0^x e^{-c* x/(1-y)} dy dx - 2 int_0^1 y e^{-c*/y} dy.
pub fn bcdp_limit_value() -> Result<f64> {
    let c = bcdp_c_star()?;
    let first = nested(
        |x, err| {
            let inner = record(
                integrate(
                    |y: f64| if y >= 1.0 { 0.0 } else { (-c * x / (1.0 - y)).exp() },
                    0.0,
                    x,
                    &quad(INNER_TOL),
                ),
                err,
            );
            inner / x
        },
        0.0,
        1.0,
    )?;
    let second = integrate(
        |y: f64| if y == 0.0 { 0.0 } else { y * (-c / y).exp() },
        0.0,
        1.0,
        &quad(INNER_TOL),
    )?;
    Ok(first - 2.0 * second)
}

/// I(c) = int_1^inf e^{-ct}/t dt, truncated at T with e^{-cT}/(cT) < 1e-14.
pub fn exp_integral_tail(c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("I(c) requires c > 0, got {c}")));
    }
    let mut t_max = 2.0;
    while (-c * t_max).exp() / (c * t_max) >= 1e-14 {
        t_max *= 2.0;
    }
    integrate(|t: f64| (-c * t).exp() / t, 1.0, t_max, &quad(INNER_TOL))
}

/// Limit of the optimal payoff with recall: u* = (1 - ln 2)/2 + (ln 2)^2 I(ln 2).
pub fn bcdp_recall_limit_value() -> Result<f64> {
    let l = std::f64::consts::LN_2;
    Ok((1.0 - l) / 2.0 + l * l * exp_integral_tail(l)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ein_series(t: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..200 {
            term *= t / k as f64;
            let s = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += s * term / k as f64;
        }
        sum
    }

    #[test]
    fn ein_against_series() {
        for &t in &[0.01, 0.5, 1.0, 2.1, 3.0] {
            assert!((ein(t).unwrap() - ein_series(t)).abs() < 1e-12, "t={t}");
        }
        assert_eq!(ein(0.0).unwrap(), 0.0);
        assert!(ein(-1.0).is_err());
    }

    #[test]
    fn z_constant() {
        let z = asymptotic_z().unwrap();
        assert!((z - 2.119_824_4).abs() < 1e-6, "{z}");
        assert!(z_equation(1.0).unwrap() > 0.0);
        assert!(z_equation(3.0).unwrap() < 0.0);
    }

    #[test]
    fn recall_constant() {
        let z = recall_asymptote().unwrap();
        assert!((z - 1.345_016_62).abs() < 1e-6, "{z}");
    }

    #[test]
    fn limit_constant() {
        let c = fidp_limit_constant().unwrap();
        assert!((c - 0.435_170_81).abs() < 1e-6, "{c}");
    }

    #[test]
    fn bcdp_constants() {
        let c = bcdp_c_star().unwrap();
        assert!((c - 1.256_431_21).abs() < 1e-7);
        let v = bcdp_limit_value().unwrap();
        assert!((v - 0.310_965_46).abs() < 1e-6, "{v}");
        let u = bcdp_recall_limit_value().unwrap();
        assert!((u - 0.335_360_05).abs() < 1e-6, "{u}");
    }

    #[test]
    fn tail_integral() {
        assert!(exp_integral_tail(std::f64::consts::LN_2).unwrap() > 0.0);
        assert!(exp_integral_tail(1.0).unwrap() < exp_integral_tail(0.5).unwrap());
        // E_1(1) = 0.219383934395520...
        assert!((exp_integral_tail(1.0).unwrap() - 0.219_383_934_395_520_3).abs() < 1e-12);
    }
}
