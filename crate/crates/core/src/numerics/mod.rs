//! Special functions, root finding and quadrature shared by every solver.

mod quad;
mod roots;
mod special;

pub use quad::{integrate, integrate_to_infinity, Quadrature};
pub use roots::{find_root, RootBracket, DEFAULT_ROOT_TOL};
pub use special::{digamma, trigamma, EULER_GAMMA};

pub(crate) use quad::gauss_legendre5;
pub(crate) use roots::threshold_root;
pub(crate) use special::digamma_diff;

/// sum_{m=0}^{s-1} x^m evaluated without cancellation near x = 1.
///
/// Takes `u = 1 - x` so callers holding grid coordinates near 1 keep full
/// precision.
pub fn geometric_sum_u(u: f64, s: u32) -> f64 {
    if s == 0 {
        return 0.0;
    }
    if u <= 0.0 {
        return s as f64;
    }
    if u >= 1.0 {
        return 1.0;
    }
    if s <= 64 {
        let x = 1.0 - u;
        let mut acc = 0.0;
        for _ in 0..s {
            acc = acc * x + 1.0;
        }
        return acc;
    }
    -f64::exp_m1(s as f64 * f64::ln_1p(-u)) / u
}

/// x^p for x = 1 - u, accurate when u is tiny.
pub fn pow_u(u: f64, p: f64) -> f64 {
    if p == 0.0 {
        return 1.0;
    }
    if u >= 1.0 {
        return 0.0;
    }
    (p * f64::ln_1p(-u)).exp()
}

/// Harmonic number H_n.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|j| 1.0 / j as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sum_matches_power_sum() {
        assert_eq!(geometric_sum_u(0.5, 1), 1.0);
        assert_eq!(geometric_sum_u(0.0, 7), 7.0);
        assert!((geometric_sum_u(0.5, 3) - 1.75).abs() < 1e-15);
        for &u in &[1e-12f64, 1e-6, 0.01, 0.3, 0.9] {
            for &s in &[1u32, 2, 5, 40, 100, 2000] {
                let x = 1.0 - u;
                let direct: f64 = (0..s).map(|m| x.powi(m as i32)).sum();
                let got = geometric_sum_u(u, s);
                assert!((got - direct).abs() <= 1e-11 * direct.max(1.0), "u={u} s={s}: {got} vs {direct}");
            }
        }
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), 0.0);
        assert!((harmonic(4) - 25.0 / 12.0).abs() < 1e-15);
    }
}
