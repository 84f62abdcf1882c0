//! Patrolling games `(Q, m, r)`: the patroller picks a walk, the attacker a
//! point `y` and start time `t`; the attack is caught iff the walk comes
//! within `r` of `y` during `[t, t + m]`.

mod simple;
mod three_arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::network::{Network, NetworkPoint, NetworkWalk};
use crate::space::SearchSpace;
use crate::strategy::MixedStrategy;
use crate::trajectory::{SimpleSpace, Walk};
pub use simple::{default_eps_prime, rtour_patroller, simple_space_value_estimate, SimpleSpaceEstimate};
pub use three_arc::{
    n2_walk, three_arc_bounds, three_arc_bounds_exact, three_arc_formulas, three_arc_strategies, ExactBounds,
    N2Walk, ThreeArcFormulas,
};

#[derive(Debug, Clone)]
pub struct PatrolGame {
    pub space: SearchSpace,
    pub m: f64,
    pub r: f64,
}

impl PatrolGame {
    pub fn new(space: SearchSpace, m: f64, r: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(invalid("attack duration m must be finite and nonnegative"));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(invalid("detection radius r must be finite and nonnegative"));
        }
        if matches!(space, SearchSpace::Network(_)) && r != 0.0 {
            return Err(Error::UnsupportedGeometry("network games use detection radius r = 0".into()));
        }
        Ok(Self { space, m, r })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attack<P> {
    pub point: P,
    pub time: f64,
}

impl<P> Attack<P> {
    pub fn new(point: P, time: f64) -> Self {
        Self { point, time }
    }
}

/// Outcome of one walk against one attack. `extended` flags that the window
/// ran past the end of a non-periodic walk, which then counts as parked at
/// its final point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payoff {
    pub hit: bool,
    pub extended: bool,
}

impl Payoff {
    pub fn value(self) -> f64 {
        f64::from(u8::from(self.hit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueBounds {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

impl ValueBounds {
    pub fn exact(v: f64) -> Self {
        Self { lower: v, upper: v, exact: true }
    }
}

/// Walk and point types of a space, with the detection rule.
pub trait PatrolGeometry: Sync {
    type Point: Sync;
    type Walk: Sync;
    fn payoff(&self, w: &Self::Walk, a: &Attack<Self::Point>, m: f64, r: f64) -> Payoff;
}

impl PatrolGeometry for Network {
    type Point = NetworkPoint;
    type Walk = NetworkWalk;

    /// `r` is ignored: network games are played with `r = 0`.
    fn payoff(&self, w: &NetworkWalk, a: &Attack<NetworkPoint>, m: f64, _r: f64) -> Payoff {
        Payoff {
            hit: w.visits_during(self, &a.point, a.time, m),
            extended: !w.is_periodic() && a.time + m + w.offset() > w.duration(),
        }
    }
}

/// Euclidean space of any dimension.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl PatrolGeometry for Euclidean {
    type Point = Vec<f64>;
    type Walk = Walk;

    fn payoff(&self, w: &Walk, a: &Attack<Vec<f64>>, m: f64, r: f64) -> Payoff {
        let d = w.min_distance(&a.point, a.time, m);
        let end = w.times()[w.times().len() - 1];
        Payoff { hit: d <= r * (1.0 + 1e-12) + 1e-15, extended: w.period().is_none() && a.time + m > end }
    }
}

/// `∫∫ g_{m,r} dμ dν` for finite supports.
pub fn mixed_payoff<G: PatrolGeometry>(
    geom: &G,
    mu: &MixedStrategy<G::Walk>,
    nu: &MixedStrategy<Attack<G::Point>>,
    m: f64,
    r: f64,
) -> f64 {
    mu.atoms()
        .par_iter()
        .map(|(w, p)| p * nu.atoms().iter().map(|(a, q)| q * geom.payoff(w, a, m, r).value()).sum::<f64>())
        .sum()
}

/// Detection probability of `mu` against the single attack `a`.
pub fn detection_probability<G: PatrolGeometry>(
    geom: &G,
    mu: &MixedStrategy<G::Walk>,
    a: &Attack<G::Point>,
    m: f64,
    r: f64,
) -> f64 {
    mu.atoms().par_iter().map(|(w, p)| p * geom.payoff(w, a, m, r).value()).sum()
}

pub fn discovery_rate_upper_bound(game: &PatrolGame) -> Result<f64> {
    game.space.discovery_rate(game.r)
}

/// `min(1, (mρ + λ(B_r)) / λ(Q))`.
pub fn value_upper_bound(game: &PatrolGame) -> Result<f64> {
    let lambda = game.space.measure();
    if !(lambda > 0.0) {
        return Err(invalid("the upper bound needs λ(Q) > 0"));
    }
    let rho = discovery_rate_upper_bound(game)?;
    Ok(((game.m * rho + game.space.ball_measure(game.r)?) / lambda).min(1.0))
}

/// Attacks at time 0 at arc lengths `kλ/resolution`, edges laid end to end
/// in id order; each atom stands for the interval to its right.
pub fn uniform_attacker_network(net: &Network, resolution: usize) -> Result<MixedStrategy<Attack<NetworkPoint>>> {
    if resolution == 0 {
        return Err(invalid("resolution must be positive"));
    }
    let lambda = net.total_measure();
    if !(lambda > 0.0) {
        return Err(invalid("network has zero length"));
    }
    let mut atoms = Vec::with_capacity(resolution);
    let mut edge = 0;
    let mut start = 0.0;
    for k in 0..resolution {
        let s = lambda * k as f64 / resolution as f64;
        while edge + 1 < net.edge_count() && s >= start + net.edge(edge).len {
            start += net.edge(edge).len;
            edge += 1;
        }
        let len = net.edge(edge).len;
        let alpha = if len > 0.0 { ((s - start) / len).clamp(0.0, 1.0) } else { 0.0 };
        atoms.push(Attack::new(NetworkPoint::new(edge, alpha), 0.0));
    }
    MixedStrategy::uniform(atoms)
}

/// Attacks at time 0 on an area-uniform `k × k` grid of each piece.
pub fn uniform_attacker_region(space: &SimpleSpace, k: usize) -> Result<MixedStrategy<Attack<Vec<f64>>>> {
    if k == 0 {
        return Err(invalid("resolution must be positive"));
    }
    MixedStrategy::new(space.uniform_grid(k).into_iter().map(|(p, w)| (Attack::new(p.to_vec(), 0.0), w)).collect())
}

/// The Eulerian parametrization started at `kλ/resolution`, equal weights.
pub fn uniform_patroller(net: &Network, resolution: usize) -> Result<MixedStrategy<NetworkWalk>> {
    if resolution == 0 {
        return Err(invalid("resolution must be positive"));
    }
    let w = net.parametrization(&net.eulerian_tour()?)?;
    let lambda = w.period().expect("parametrization is periodic");
    let walks = (0..resolution).map(|k| w.shifted(lambda * k as f64 / resolution as f64)).collect::<Result<Vec<_>>>()?;
    MixedStrategy::uniform(walks)
}

/// `V_N(m, 0) = min(m/λ(N), 1)` on an Eulerian network.
pub fn eulerian_value(net: &Network, m: f64) -> Result<f64> {
    if !(m >= 0.0) {
        return Err(invalid("m must be nonnegative"));
    }
    if !net.is_eulerian()? {
        return Err(Error::NotEulerian("the closed form needs an Eulerian network".into()));
    }
    Ok((m / net.total_measure()).min(1.0))
}

/// [`eulerian_value`] in exact arithmetic; edge lengths are read at their
/// binary values.
pub fn eulerian_value_exact(net: &Network, m: &BigRational) -> Result<BigRational> {
    if m.is_negative() {
        return Err(invalid("m must be nonnegative"));
    }
    if !net.is_eulerian()? {
        return Err(Error::NotEulerian("the closed form needs an Eulerian network".into()));
    }
    let lambda = net.total_measure_exact();
    if lambda.is_zero() {
        return Err(invalid("network has zero length"));
    }
    Ok((m / lambda).min(BigRational::one()))
}

/// Smallest detection probability of `mu` over the attack grid
/// `points × times`, with the minimizing attack.
pub fn worst_case_attack(
    net: &Network,
    mu: &MixedStrategy<NetworkWalk>,
    m: f64,
    points: &[NetworkPoint],
    times: &[f64],
) -> Result<(f64, Attack<NetworkPoint>)> {
    if points.is_empty() || times.is_empty() {
        return Err(Error::Empty("attack grid".into()));
    }
    let best = points
        .par_iter()
        .enumerate()
        .map(|(pi, y)| {
            let intervals: Vec<Vec<(f64, f64)>> = mu.atoms().iter().map(|(w, _)| w.visit_intervals(net, y)).collect();
            let mut local = (f64::INFINITY, 0usize);
            for (ti, &t) in times.iter().enumerate() {
                let p: f64 = mu
                    .atoms()
                    .iter()
                    .zip(&intervals)
                    .filter(|((w, _), iv)| w.hits(iv, net, y, t, m))
                    .map(|((_, p), _)| p)
                    .sum();
                if p < local.0 {
                    local = (p, ti);
                }
            }
            (local.0, pi, local.1)
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a },
        );
    Ok((best.0, Attack::new(points[best.1], times[best.2])))
}

/// `0, h, 2h, …` below `end`, with `h = end / count`.
pub fn time_grid(end: f64, count: usize) -> Vec<f64> {
    (0..count.max(1)).map(|k| end * k as f64 / count.max(1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::trajectory::ElementaryRegion;

    #[test]
    fn constant_walk_catches_its_point() {
        let net = presets::circle(4.0);
        let p = NetworkPoint::new(0, 0.3);
        let w = NetworkWalk::constant(&net, p, 4.0).unwrap();
        assert!(net.payoff(&w, &Attack::new(p, 2.0), 0.0, 0.0).hit);
        let anti = NetworkPoint::new(0, 0.8);
        assert!(!net.payoff(&w, &Attack::new(anti, 2.0), 0.0, 0.0).hit);
    }

    #[test]
    fn planar_payoff_and_extension_flag() {
        let w = Walk::new(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![1.0, 0.0]], None).unwrap();
        let a = Attack::new(vec![1.0, 0.2], 0.5);
        assert!(!Euclidean.payoff(&w, &a, 0.1, 0.3).hit);
        let p = Euclidean.payoff(&w, &a, 1.0, 0.3);
        assert!(p.hit && p.extended);
    }

    #[test]
    fn mixed_payoff_examples() {
        let net = presets::circle(4.0);
        let y = NetworkPoint::new(0, 0.0);
        let w1 = NetworkWalk::constant(&net, y, 4.0).unwrap();
        let w2 = NetworkWalk::constant(&net, NetworkPoint::new(0, 0.5), 4.0).unwrap();
        let nu = MixedStrategy::point(Attack::new(y, 0.0));
        assert_eq!(mixed_payoff(&net, &MixedStrategy::point(w1.clone()), &nu, 0.0, 0.0), 1.0);
        let mu = MixedStrategy::uniform(vec![w1, w2]).unwrap();
        assert_eq!(mixed_payoff(&net, &mu, &nu, 0.0, 0.0), 0.5);
    }

    #[test]
    fn upper_bound_examples() {
        let g = PatrolGame::new(SearchSpace::Network(presets::n1()), 2.0, 0.0).unwrap();
        assert_eq!(value_upper_bound(&g).unwrap(), 0.25);
        let sq = SearchSpace::Region(SimpleSpace::single(ElementaryRegion::unit_square()));
        let g = PatrolGame::new(sq.clone(), 1.0, 0.1).unwrap();
        assert!((value_upper_bound(&g).unwrap() - (0.2 + std::f64::consts::PI * 0.01)).abs() < 1e-12);
        let g = PatrolGame::new(sq, 1e9, 0.1).unwrap();
        assert_eq!(value_upper_bound(&g).unwrap(), 1.0);
        let pts = SearchSpace::Cantor { depth: 4 };
        assert!(value_upper_bound(&PatrolGame::new(pts, 1.0, 0.1).unwrap()).is_err());
        assert!(PatrolGame::new(SearchSpace::Network(presets::n1()), 1.0, 0.1).is_err());
    }

    #[test]
    fn circle_attacker_grid() {
        let nu = uniform_attacker_network(&presets::circle(3.0), 3).unwrap();
        let alphas: Vec<f64> = nu.atoms().iter().map(|(a, _)| a.point.alpha * 3.0).collect();
        assert!(alphas.iter().zip([0.0, 1.0, 2.0]).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(nu.atoms().iter().all(|(_, w)| (w - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn square_attacker_grid() {
        let nu = uniform_attacker_region(&SimpleSpace::single(ElementaryRegion::unit_square()), 4).unwrap();
        assert_eq!(nu.len(), 16);
        assert!(nu.atoms().iter().all(|(_, w)| (w - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn uniform_patroller_on_circle() {
        let net = presets::circle(3.0);
        let mu = uniform_patroller(&net, 30).unwrap();
        let y = NetworkPoint::new(0, 0.4);
        for &(t, m) in &[(0.0, 1.0), (1.3, 0.5), (7.7, 2.0)] {
            let p = detection_probability(&net, &mu, &Attack::new(y, t), m, 0.0);
            assert!((p - m / 3.0).abs() <= 3.0 / 30.0, "t={t} m={m} p={p}");
        }
        assert_eq!(detection_probability(&net, &mu, &Attack::new(y, 0.2), 3.0, 0.0), 1.0);
        assert!(uniform_patroller(&presets::n2(), 10).is_err());
    }

    #[test]
    fn eulerian_values() {
        let n1 = presets::n1();
        assert_eq!(eulerian_value(&n1, 2.0).unwrap(), 0.25);
        assert_eq!(eulerian_value(&n1, 0.0).unwrap(), 0.0);
        assert_eq!(eulerian_value(&n1, 8.0).unwrap(), 1.0);
        let exact = eulerian_value_exact(&n1, &BigRational::from_integer(2.into())).unwrap();
        assert_eq!(exact, BigRational::new(1.into(), 4.into()));
        assert!(eulerian_value(&presets::n2(), 1.0).is_err());
    }
}
