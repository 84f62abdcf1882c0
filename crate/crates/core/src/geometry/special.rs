//! Gamma values at half integers and the regularized incomplete Beta
//! function, evaluated by adaptive Gauss–Legendre quadrature of its integral
//! definition.

use std::f64::consts::PI;
use std::sync::OnceLock;

const GL_ORDER: usize = 16;
const MAX_DEPTH: u32 = 40;

/// Γ(k/2) for a positive integer `k`.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k > 0, "gamma_half needs k > 0");
    let (mut x, mut acc) = if k % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = k as f64 / 2.0;
    while x < target - 0.25 {
        acc *= x;
        x += 1.0;
    }
    acc
}

fn legendre_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            // Newton iteration from the Chebyshev-like initial guess.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule.push((x, w));
        }
        rule
    })
}

fn gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    legendre_rule()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gauss_legendre(f, a, mid);
    let right = gauss_legendre(f, mid, b);
    let split = left + right;
    if depth >= MAX_DEPTH || (split - whole).abs() <= tol {
        return split;
    }
    adaptive(f, a, mid, left, 0.5 * tol, depth + 1) + adaptive(f, mid, b, right, 0.5 * tol, depth + 1)
}

/// Adaptive Gauss–Legendre quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gauss_legendre(&f, a, b);
    adaptive(&f, a, b, whole, tol, 0)
}

/// Lower incomplete Beta integral `B(z; a, b) = ∫₀ᶻ tᵃ⁻¹ (1−t)ᵇ⁻¹ dt`.
///
/// The integral is split at 1/2 and both halves are mapped to smooth
/// integrands: `t = u^{1/a}` near 0 and `1 − t = s^{1/b}` near 1.
pub fn incomplete_beta(z: f64, a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "incomplete_beta needs a, b > 0");
    let z = z.clamp(0.0, 1.0);
    let tol = 1e-13;
    let lo_end = z.min(0.5);
    let low = integrate(
        |u: f64| (1.0 - u.powf(1.0 / a)).powf(b - 1.0) / a,
        0.0,
        lo_end.powf(a),
        tol,
    );
    if z <= 0.5 {
        return low;
    }
    let high = integrate(
        |s: f64| (1.0 - s.powf(1.0 / b)).powf(a - 1.0) / b,
        (1.0 - z).powf(b),
        0.5f64.powf(b),
        tol,
    );
    low + high
}

/// Complete Beta function by the same quadrature.
pub fn beta(a: f64, b: f64) -> f64 {
    incomplete_beta(1.0, a, b)
}

/// Regularized incomplete Beta function `I_z(a, b)`.
pub fn regularized_incomplete_beta(z: f64, a: f64, b: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if z >= 1.0 {
        return 1.0;
    }
    (incomplete_beta(z, a, b) / beta(a, b)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_values() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(2), 1.0);
        assert_eq!(gamma_half(8), 6.0);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn beta_closed_forms() {
        // B(1, 1/2) = 2, B(1/2, 1/2) = π, B(2, 3) = 1/12.
        assert!((beta(1.0, 0.5) - 2.0).abs() < 1e-10);
        assert!((beta(0.5, 0.5) - PI).abs() < 1e-10);
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn regularized_matches_elementary_forms() {
        // I_z(1, 1/2) = 1 − √(1−z); I_z(a, 1) = z^a.
        for &z in &[0.01_f64, 0.3, 0.5, 0.77, 0.999_999] {
            let want = 1.0 - (1.0 - z).sqrt();
            assert!((regularized_incomplete_beta(z, 1.0, 0.5) - want).abs() < 1e-10, "z={z}");
            assert!((regularized_incomplete_beta(z, 2.5, 1.0) - z.powf(2.5)).abs() < 1e-10);
        }
        assert_eq!(regularized_incomplete_beta(0.0, 2.0, 0.5), 0.0);
        assert_eq!(regularized_incomplete_beta(1.0, 2.0, 0.5), 1.0);
    }

    #[test]
    fn integrate_polynomial_exactly() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }
}
