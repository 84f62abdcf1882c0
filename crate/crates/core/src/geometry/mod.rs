//! Norms, balls and volumes in ℝⁿ, plus a seeded Monte Carlo volume
//! estimator used to cross-check the analytic formulas.

mod montecarlo;
pub mod special;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
pub use montecarlo::{monte_carlo_volume, BoundingBox, VolumeEstimate};
use special::{gamma_half, regularized_incomplete_beta};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    Euclidean,
    L1,
    LInf,
    /// `‖x‖ = maxᵢ wᵢ |xᵢ|` with positive weights.
    WeightedLInf(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Norm {
    pub kind: NormKind,
    pub dim: usize,
}

impl Norm {
    pub fn new(kind: NormKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("norm dimension must be positive"));
        }
        if let NormKind::WeightedLInf(w) = &kind {
            if w.len() != dim {
                return Err(invalid(format!("expected {dim} weights, got {}", w.len())));
            }
            if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(invalid("weights must be positive and finite"));
            }
        }
        Ok(Self { kind, dim })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self { kind: NormKind::Euclidean, dim }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            NormKind::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
            NormKind::LInf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            NormKind::WeightedLInf(w) => x.iter().zip(w).fold(0.0, |m, (v, wi)| m.max(wi * v.abs())),
        }
    }

    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.eval(&diff)
    }

    /// Constants `(c1, c2)` with `c1·‖x‖ ≤ ‖x‖₂ ≤ c2·‖x‖`.
    pub fn equivalence_constants(&self) -> (f64, f64) {
        let n = self.dim as f64;
        match &self.kind {
            NormKind::Euclidean => (1.0, 1.0),
            NormKind::L1 => (1.0 / n.sqrt(), 1.0),
            NormKind::LInf => (1.0, n.sqrt()),
            NormKind::WeightedLInf(w) => {
                let wmax = w.iter().cloned().fold(f64::MIN, f64::max);
                let wmin = w.iter().cloned().fold(f64::MAX, f64::min);
                (1.0 / wmax, n.sqrt() / wmin)
            }
        }
    }
}

/// Closed ball `{x : ‖x − center‖ ≤ radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
    pub norm: Norm,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64, norm: Norm) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(invalid("ball radius must be nonnegative"));
        }
        if center.len() != norm.dim {
            return Err(invalid("ball center dimension does not match the norm"));
        }
        Ok(Self { center, radius, norm })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.norm.dist(x, &self.center) <= self.radius
    }

    pub fn volume(&self) -> Result<f64> {
        ball_volume(&self.norm, self.radius)
    }
}

/// Lebesgue measure of the ball of radius `r` for `norm`.
pub fn ball_volume(norm: &Norm, r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(invalid(format!("radius must be a finite nonnegative number, got {r}")));
    }
    let n = norm.dim as i32;
    let v = match &norm.kind {
        NormKind::Euclidean => euclidean_ball_volume(norm.dim, r),
        NormKind::L1 => (2.0 * r).powi(n) / (1..=norm.dim).map(|k| k as f64).product::<f64>(),
        NormKind::LInf => (2.0 * r).powi(n),
        NormKind::WeightedLInf(w) => w.iter().map(|wi| 2.0 * r / wi).product(),
    };
    Ok(v)
}

pub(crate) fn euclidean_ball_volume(n: usize, r: f64) -> f64 {
    PI.powf(n as f64 / 2.0) * r.powi(n as i32) / gamma_half(n as u32 + 2)
}

/// Volume of a cap of height `h ∈ [0, 2R]` cut from the Euclidean ball of
/// radius `radius` in dimension `n`.
fn cap_volume(n: usize, radius: f64, h: f64) -> f64 {
    let h = h.clamp(0.0, 2.0 * radius);
    if h <= radius {
        let z = (2.0 * radius * h - h * h) / (radius * radius);
        0.5 * euclidean_ball_volume(n, radius) * regularized_incomplete_beta(z, (n as f64 + 1.0) / 2.0, 0.5)
    } else {
        euclidean_ball_volume(n, radius) - cap_volume(n, radius, 2.0 * radius - h)
    }
}

/// `λ(B²_eps(0) ∩ B²_r(x))` for `x` at distance `eps` from the origin, by the
/// two-cap incomplete Beta expression. Valid for `r ≤ √2·eps`, where the cap
/// cut from the `eps`-ball is at most a half ball.
pub fn boundary_intersection_volume(n: usize, eps: f64, r: f64) -> f64 {
    let a = (n as f64 + 1.0) / 2.0;
    let q = (r / (2.0 * eps)).powi(2);
    let pref = PI.powf(n as f64 / 2.0) / (2.0 * gamma_half(n as u32 + 2));
    pref * (r.powi(n as i32) * regularized_incomplete_beta(1.0 - q, a, 0.5)
        + eps.powi(n as i32) * regularized_incomplete_beta((r / eps).powi(2) * (1.0 - q), a, 0.5))
}

/// Volume of the intersection of the Euclidean balls `B²_eps(0)` and
/// `B²_r(x)` with `‖x‖₂ = center_distance`.
///
/// When `center_distance == eps` and `r ≤ √2·eps` the boundary formula is
/// used directly; every other configuration goes through the general
/// spherical-cap decomposition. For `r ≥ 2·eps` on the boundary the result is
/// the full `λ(B²_eps)`.
pub fn euclidean_ball_intersection_volume(n: usize, eps: f64, r: f64, center_distance: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(eps > 0.0) || !(r > 0.0) || !(center_distance >= 0.0) {
        return Err(invalid("radii must be positive and the distance nonnegative"));
    }
    let d = center_distance;
    if d == eps && r <= std::f64::consts::SQRT_2 * eps {
        return Ok(boundary_intersection_volume(n, eps, r));
    }
    Ok(general_intersection_volume(n, eps, r, d))
}

fn general_intersection_volume(n: usize, eps: f64, r: f64, d: f64) -> f64 {
    if d >= eps + r {
        return 0.0;
    }
    if d + r <= eps {
        return euclidean_ball_volume(n, r);
    }
    if d + eps <= r {
        return euclidean_ball_volume(n, eps);
    }
    // Radical hyperplane at distance c from the origin along the center line.
    let c = (d * d + eps * eps - r * r) / (2.0 * d);
    cap_volume(n, eps, eps - c) + cap_volume(n, r, r + c - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-circle lens area, the classical planar formula.
    fn lens_area(big: f64, small: f64, d: f64) -> f64 {
        let a1 = ((d * d + small * small - big * big) / (2.0 * d * small)).acos();
        let a2 = ((d * d + big * big - small * small) / (2.0 * d * big)).acos();
        let k = ((-d + small + big) * (d + small - big) * (d - small + big) * (d + small + big)).sqrt();
        small * small * a1 + big * big * a2 - 0.5 * k
    }

    #[test]
    fn ball_volume_examples() {
        let e2 = Norm::euclidean(2);
        assert!((ball_volume(&e2, 1.0).unwrap() - PI).abs() < 1e-14);
        assert_eq!(ball_volume(&e2, 0.0).unwrap(), 0.0);
        let inf2 = Norm::new(NormKind::LInf, 2).unwrap();
        assert_eq!(ball_volume(&inf2, 0.5).unwrap(), 1.0);
        let l1 = Norm::new(NormKind::L1, 3).unwrap();
        assert!((ball_volume(&l1, 1.0).unwrap() - 8.0 / 6.0).abs() < 1e-14);
        let w = Norm::new(NormKind::WeightedLInf(vec![1.0, 2.0]), 2).unwrap();
        assert!((ball_volume(&w, 1.0).unwrap() - 2.0).abs() < 1e-14);
        let e3 = Norm::euclidean(3);
        assert!((ball_volume(&e3, 1.0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn ball_volume_rejects_negative_radius() {
        assert!(ball_volume(&Norm::euclidean(2), -1.0).is_err());
        assert!(ball_volume(&Norm::euclidean(2), f64::NAN).is_err());
    }

    #[test]
    fn intersection_in_one_dimension_is_interval_overlap() {
        // [-1, 1] ∩ [0.5, 1.5] = [0.5, 1].
        let v = euclidean_ball_intersection_volume(1, 1.0, 0.5, 1.0).unwrap();
        assert!((v - 0.5).abs() < 1e-12, "{v}");
        let v = euclidean_ball_intersection_volume(1, 1.0, 0.5, 0.2).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn planar_intersection_matches_lens_formula() {
        for &(r, d) in &[(0.2, 1.0), (0.7, 1.0), (1.3, 1.0), (0.5, 0.8), (1.2, 0.5)] {
            let got = euclidean_ball_intersection_volume(2, 1.0, r, d).unwrap();
            let want = lens_area(1.0, r, d);
            assert!((got - want).abs() < 1e-8, "r={r} d={d}: {got} vs {want}");
        }
    }

    #[test]
    fn boundary_formula_agrees_with_cap_decomposition() {
        for n in 1..=5 {
            for &r in &[0.05, 0.3, 0.9, 1.4] {
                let a = boundary_intersection_volume(n, 1.0, r);
                let b = general_intersection_volume(n, 1.0, r, 1.0);
                assert!((a - b).abs() < 1e-9, "n={n} r={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn large_radius_is_clamped_to_the_small_ball() {
        let v = euclidean_ball_intersection_volume(3, 1.0, 2.5, 1.0).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn equivalence_constants_sandwich() {
        let norms = [
            Norm::euclidean(3),
            Norm::new(NormKind::L1, 3).unwrap(),
            Norm::new(NormKind::LInf, 3).unwrap(),
            Norm::new(NormKind::WeightedLInf(vec![0.5, 2.0, 1.0]), 3).unwrap(),
        ];
        let e = Norm::euclidean(3);
        let pts = [[1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [-0.3, 2.0, 0.1], [0.0, 0.0, -4.0]];
        for norm in &norms {
            let (c1, c2) = norm.equivalence_constants();
            assert!(c1 > 0.0 && c2 > 0.0);
            for p in &pts {
                let (x, x2) = (norm.eval(p), e.eval(p));
                assert!(c1 * x <= x2 + 1e-12 && x2 <= c2 * x + 1e-12);
            }
        }
    }
}
