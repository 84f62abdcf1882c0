//! Hiding games `(Q, r)`: searcher and hider each pick a point of `Q`, and
//! the searcher wins iff the two points are within `r`.

pub mod cantor;
mod equalizing;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::special::integrate;
use crate::geometry::Norm;
use crate::space::SearchSpace;
use crate::strategy::MixedStrategy;
pub use cantor::{cantor_solution, cantor_value, CantorBranch, CantorPoint, CantorSolution};
pub use equalizing::{
    equality_system, solve_finite_equalizing, EqualitySystem, EqualizingOutcome, InfeasibilityWitness,
};

/// Default tolerance for calling a certificate equalizing.
pub const EQUALIZING_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct HideGame {
    pub space: SearchSpace,
    pub r: f64,
    pub norm: Norm,
}

impl HideGame {
    /// Finite point sets keep their own norm; everything else is Euclidean.
    pub fn new(space: SearchSpace, r: f64) -> Result<Self> {
        let norm = match &space {
            SearchSpace::Points { norm, .. } => norm.clone(),
            SearchSpace::Network(_) => {
                return Err(Error::UnsupportedGeometry("hiding games on networks are not modelled".into()))
            }
            s => Norm::euclidean(s.dim()),
        };
        Self::with_norm(space, r, norm)
    }

    pub fn with_norm(space: SearchSpace, r: f64, norm: Norm) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(invalid("detection radius must be finite and nonnegative"));
        }
        if norm.dim != space.dim() {
            return Err(invalid("norm dimension does not match the space"));
        }
        Ok(Self { space, r, norm })
    }

    /// `h_r(x, y)`: 1 iff `‖x − y‖ ≤ r`.
    pub fn payoff(&self, x: &[f64], y: &[f64]) -> u8 {
        u8::from(self.norm.dist(x, y) <= self.r)
    }

    /// `μ(B_r(y))`.
    pub fn detection(&self, mu: &MixedStrategy<Vec<f64>>, y: &[f64]) -> f64 {
        mu.atoms().iter().filter(|(x, _)| self.payoff(x, y) == 1).map(|(_, w)| w).sum()
    }

    /// Verification points at pitch `r/10` (or 1/100 of the extent when
    /// `r = 0`); finite sets use all their points and the Cantor set the
    /// endpoints of `C₆`.
    pub fn verification_grid(&self) -> Result<Vec<Vec<f64>>> {
        let pitch = |extent: f64| if self.r > 0.0 { self.r / 10.0 } else { extent / 100.0 };
        Ok(match &self.space {
            SearchSpace::Points { points, .. } => points.clone(),
            SearchSpace::Cantor { .. } => {
                cantor::level_endpoints(6)?.into_iter().map(|q| vec![cantor::dyadic_to_f64(q)]).collect()
            }
            &SearchSpace::Interval { lo, hi } => axis(lo, hi, pitch(hi - lo)).into_iter().map(|x| vec![x]).collect(),
            SearchSpace::Box { lo, hi } => {
                if lo.len() > 3 {
                    return Err(Error::UnsupportedGeometry("verification grids stop at dimension 3".into()));
                }
                let extent = lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max);
                let axes: Vec<Vec<f64>> = lo.iter().zip(hi).map(|(&a, &b)| axis(a, b, pitch(extent))).collect();
                product(&axes)
            }
            &SearchSpace::Disc { radius } => {
                let h = pitch(2.0 * radius);
                let ax = axis(-radius, radius, h);
                let mut pts: Vec<Vec<f64>> =
                    product(&[ax.clone(), ax]).into_iter().filter(|p| p[0].hypot(p[1]) <= radius).collect();
                let k = ((2.0 * PI * radius / h).ceil() as usize).max(4);
                pts.extend((0..k).map(|i| {
                    let t = 2.0 * PI * i as f64 / k as f64;
                    vec![radius * t.cos(), radius * t.sin()]
                }));
                pts
            }
            SearchSpace::Region(s) => {
                let mut pts = Vec::new();
                for g in s.regions() {
                    let (lo, hi) = g.bounding_box();
                    let h = pitch((hi[0] - lo[0]).max(hi[1] - lo[1]));
                    for x in axis(lo[0], hi[0], h) {
                        let (y0, y1) = (g.bottom().eval(x), g.top().eval(x));
                        pts.extend(axis(y0, y1, h).into_iter().map(|y| vec![x, y]));
                    }
                }
                pts
            }
            SearchSpace::Network(_) => unreachable!("rejected in HideGame::new"),
        })
    }
}

/// `lo, lo + h, …` plus `hi`.
pub(crate) fn axis(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let k = ((hi - lo) / h - 1e-9).ceil().max(1.0) as usize;
    (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect()
}

pub(crate) fn product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![vec![]], |acc, ax| {
        acc.iter()
            .flat_map(|p| {
                ax.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect()
    })
}

/// Coverage statistics of a searcher strategy over a verification set. The
/// claim is about that set only, never about all of `Q`.
#[derive(Debug, Clone, Serialize)]
pub struct EqualizingCertificate {
    pub strategy: MixedStrategy<Vec<f64>>,
    /// Mean of `μ(B_r(y))` over the verification points.
    pub c: f64,
    /// `max |μ(B_r(y)) − c|`.
    pub max_deviation: f64,
    /// Smallest coverage: what the strategy guarantees on the set.
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl EqualizingCertificate {
    pub fn is_equalizing(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

pub fn check_equalizing(
    game: &HideGame,
    mu: &MixedStrategy<Vec<f64>>,
    verification: &[Vec<f64>],
) -> Result<EqualizingCertificate> {
    if verification.is_empty() {
        return Err(Error::Empty("verification set".into()));
    }
    let cover: Vec<f64> = verification.par_iter().map(|y| game.detection(mu, y)).collect();
    let c = cover.iter().sum::<f64>() / cover.len() as f64;
    let max_deviation = cover.iter().map(|v| (v - c).abs()).fold(0.0, f64::max);
    Ok(EqualizingCertificate {
        strategy: mu.clone(),
        c,
        max_deviation,
        min: cover.iter().copied().fold(f64::INFINITY, f64::min),
        max: cover.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        points: cover.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitIntervalSolution {
    pub value: f64,
    /// `n` with `r ∈ [1/(2(n+1)), 1/(2n))`; 0 for `r ≥ ½`, absent for `r = 0`.
    pub n: Option<usize>,
    /// `(1 + 2k) / (2(n+1))`, `k = 0..=n`.
    pub searcher_atoms: Vec<f64>,
    /// `(2 + ε) k / (2(n+1))`, `k = 0..=n`.
    pub hider_atoms: Vec<f64>,
    pub epsilon: f64,
}

/// `V_{[0,1]}(r) = min(1/⌈1/(2r)⌉, 1)` with both players' optimal atoms.
///
/// The hider uses `ε = 2/n`, which puts its atoms at `k/n`.
pub fn unit_interval_value(r: f64) -> Result<UnitIntervalSolution> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(invalid("r must be finite and nonnegative"));
    }
    if r == 0.0 {
        return Ok(UnitIntervalSolution {
            value: 0.0,
            n: None,
            searcher_atoms: vec![],
            hider_atoms: vec![],
            epsilon: 0.0,
        });
    }
    if r >= 0.5 {
        return Ok(UnitIntervalSolution {
            value: 1.0,
            n: Some(0),
            searcher_atoms: vec![0.5],
            hider_atoms: vec![0.0],
            epsilon: 0.0,
        });
    }
    // n = ⌈1/(2r)⌉ − 1, nudged so that r = 1/(2n) lands in the right cell.
    let mut n = (1.0 / (2.0 * r)).ceil() as usize - 1;
    while r >= 1.0 / (2.0 * n as f64) {
        n -= 1;
    }
    while r < 1.0 / (2.0 * (n + 1) as f64) {
        n += 1;
    }
    let m = (n + 1) as f64;
    let epsilon = 2.0 / n as f64;
    Ok(UnitIntervalSolution {
        value: 1.0 / m,
        n: Some(n),
        searcher_atoms: (0..=n).map(|k| (1 + 2 * k) as f64 / (2.0 * m)).collect(),
        hider_atoms: (0..=n).map(|k| k as f64 / n as f64).collect(),
        epsilon,
    })
}

/// Value on the disc of radius `s` with `r = 1`.
pub fn disc_value(s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(invalid("disc radius must be nonnegative"));
    }
    if s <= 1.0 {
        return Ok(1.0);
    }
    if s > 2f64.sqrt() {
        return Err(Error::UnsupportedRegime(format!("disc radius {s} > √2 with r = 1 has no closed form here")));
    }
    Ok((1.0 / s).asin() / PI)
}

/// Searcher strategy on an `a × b` rectangle: density `ρ₀` on the interior,
/// line density `ρ₀πr/4` on the boundary and mass `ρ₀πr²/4` at each corner.
/// Every point of the rectangle is covered with mass at least `ρ₀πr²` as
/// long as `r ≤ min(a, b)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryWeighted {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub interior_density: f64,
    pub edge_density: f64,
    pub corner_mass: f64,
}

impl BoundaryWeighted {
    pub fn new(a: f64, b: f64, r: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(invalid("rectangle sides must be positive"));
        }
        if !(r > 0.0 && r <= a.min(b) / 2.0) {
            return Err(Error::UnsupportedRegime(format!("boundary-weighted searcher needs 0 < r ≤ {}", a.min(b) / 2.0)));
        }
        let rho = 1.0 / (a * b + PI * r * (a + b) / 2.0 + PI * r * r);
        Ok(Self { a, b, r, interior_density: rho, edge_density: rho * PI * r / 4.0, corner_mass: rho * PI * r * r / 4.0 })
    }

    /// The guaranteed detection probability `ρ₀πr²`.
    pub fn guarantee(&self) -> f64 {
        self.interior_density * PI * self.r * self.r
    }

    /// `μ(B_r(y))` for `y` in `[0, a] × [0, b]`, by quadrature.
    pub fn coverage(&self, y: [f64; 2]) -> f64 {
        let (a, b, r) = (self.a, self.b, self.r);
        let chord = |x: f64| {
            let h = (r * r - (x - y[0]).powi(2)).max(0.0).sqrt();
            ((y[1] + h).min(b) - (y[1] - h).max(0.0)).max(0.0)
        };
        let (x0, x1) = ((y[0] - r).max(0.0), (y[0] + r).min(a));
        let area = integrate(chord, x0, x1, 1e-12);
        let seg = |c: f64, lo: f64, hi: f64, d: f64| {
            // Part of a boundary line at distance d from y, parametrized over [lo, hi].
            if d > r {
                return 0.0;
            }
            let h = (r * r - d * d).sqrt();
            ((c + h).min(hi) - (c - h).max(lo)).max(0.0)
        };
        let edges = seg(y[0], 0.0, a, y[1]) + seg(y[0], 0.0, a, b - y[1]) + seg(y[1], 0.0, b, y[0]) + seg(y[1], 0.0, b, a - y[0]);
        let corners = [[0.0, 0.0], [a, 0.0], [0.0, b], [a, b]]
            .iter()
            .filter(|c| (c[0] - y[0]).hypot(c[1] - y[1]) <= r)
            .count();
        self.interior_density * area + self.edge_density * edges + self.corner_mass * corners as f64
    }

    /// Total mass, 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.interior_density * self.a * self.b + self.edge_density * 2.0 * (self.a + self.b) + 4.0 * self.corner_mass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub r: f64,
    pub lower: f64,
    pub upper: f64,
    /// `λ(B_r)/λ(Q)`.
    pub asymptote: f64,
    /// `lower / asymptote`.
    pub ratio: f64,
}

/// Lower and upper bounds on `V_Q(r)` against `λ(B_r)/λ(Q)`.
///
/// The upper bound is `min(1, λ(B_r)/λ(Q))`. The lower bound is exact on
/// intervals and comes from [`BoundaryWeighted`] on rectangles.
pub fn asymptotic_ratio_sweep(space: &SearchSpace, rs: &[f64]) -> Result<Vec<AsymptoticRow>> {
    if space.measure() <= 0.0 {
        return Err(Error::UnsupportedRegime(
            "λ(Q) = 0: V_Q(r) need not be equivalent to any M·r^α (the Cantor set is a counterexample)".into(),
        ));
    }
    let lambda = space.measure();
    rs.iter()
        .map(|&r| {
            if !(r > 0.0) {
                return Err(invalid("radii must be positive"));
            }
            let asymptote = space.ball_measure(r)? / lambda;
            let lower = match space {
                &SearchSpace::Interval { lo, hi } => unit_interval_value(r / (hi - lo))?.value,
                SearchSpace::Box { lo, hi } if lo.len() == 1 => unit_interval_value(r / (hi[0] - lo[0]))?.value,
                SearchSpace::Box { lo, hi } if lo.len() == 2 => {
                    BoundaryWeighted::new(hi[0] - lo[0], hi[1] - lo[1], r)?.guarantee()
                }
                other => {
                    return Err(Error::UnsupportedGeometry(format!(
                        "no asymptotic lower bound on a {} space",
                        other.kind()
                    )))
                }
            };
            Ok(AsymptoticRow { r, lower, upper: asymptote.min(1.0), asymptote, ratio: lower / asymptote })
        })
        .collect()
}
