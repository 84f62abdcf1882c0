use serde::{Deserialize, Serialize};

use super::{EdgeId, Network, NetworkPoint, Tour, ALPHA_TOL};
use crate::error::{invalid, Error, Result};

/// Time tolerance used for the closed detection window.
pub(crate) const TIME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedLeg {
    pub edge: EdgeId,
    pub from_alpha: f64,
    pub to_alpha: f64,
    pub t0: f64,
    pub t1: f64,
}

impl TimedLeg {
    fn alpha_at(&self, t: f64) -> f64 {
        if self.t1 <= self.t0 {
            return self.to_alpha;
        }
        let s = ((t - self.t0) / (self.t1 - self.t0)).clamp(0.0, 1.0);
        self.from_alpha + s * (self.to_alpha - self.from_alpha)
    }

    /// Times in `[t0, t1]` at which the leg sits at `alpha` on its edge.
    fn times_at(&self, alpha: f64, len: f64) -> Option<(f64, f64)> {
        let tol = if len > 0.0 { ALPHA_TOL / len } else { f64::INFINITY };
        let (lo, hi) = (self.from_alpha.min(self.to_alpha), self.from_alpha.max(self.to_alpha));
        if alpha < lo - tol || alpha > hi + tol {
            return None;
        }
        if hi - lo <= tol {
            return Some((self.t0, self.t1));
        }
        let s = ((alpha - self.from_alpha) / (self.to_alpha - self.from_alpha)).clamp(0.0, 1.0);
        let t = self.t0 + s * (self.t1 - self.t0);
        Some((t, t))
    }
}

/// Piecewise-linear 1-Lipschitz walk on a network. Legs are contiguous in
/// time starting at 0. A periodic walk repeats with period equal to the end
/// time of its last leg; a non-periodic walk stays at its final point.
/// `offset` shifts time: the walk's position at `t` is the base position at
/// `t + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkWalk {
    legs: Vec<TimedLeg>,
    periodic: bool,
    offset: f64,
}

impl NetworkWalk {
    /// Validates speed, continuity and (for periodic walks) closure.
    pub fn new(net: &Network, legs: Vec<TimedLeg>, periodic: bool) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::Empty("walk has no legs".into()));
        }
        let mut t = 0.0;
        for (i, l) in legs.iter().enumerate() {
            net.check_point(&NetworkPoint::new(l.edge, l.from_alpha))?;
            net.check_point(&NetworkPoint::new(l.edge, l.to_alpha))?;
            if (l.t0 - t).abs() > TIME_TOL || l.t1 < l.t0 {
                return Err(invalid(format!("leg {i} has inconsistent times")));
            }
            let dist = net.edge(l.edge).len * (l.to_alpha - l.from_alpha).abs();
            let dt = l.t1 - l.t0;
            if dist > dt * (1.0 + 1e-12) + 1e-15 {
                return Err(Error::SpeedLimit(format!("leg {i} moves {dist} in time {dt}")));
            }
            if i > 0 {
                let prev = &legs[i - 1];
                if !net.same_point(&NetworkPoint::new(prev.edge, prev.to_alpha), &NetworkPoint::new(l.edge, l.from_alpha)) {
                    return Err(invalid(format!("leg {i} does not start where leg {} ends", i - 1)));
                }
            }
            t = l.t1;
        }
        if periodic {
            let (f, l) = (&legs[0], &legs[legs.len() - 1]);
            if !(t > 0.0) {
                return Err(invalid("periodic walk needs a positive period"));
            }
            if !net.same_point(&NetworkPoint::new(l.edge, l.to_alpha), &NetworkPoint::new(f.edge, f.from_alpha)) {
                return Err(invalid("periodic walk does not return to its start"));
            }
        }
        Ok(Self { legs, periodic, offset: 0.0 })
    }

    /// Unit-speed walk along a route; zero-length legs are dropped.
    pub fn along(net: &Network, tour: &Tour, periodic: bool) -> Result<Self> {
        let mut legs = Vec::new();
        let mut t = 0.0;
        for l in tour.legs() {
            let len = l.length(net);
            if len == 0.0 {
                continue;
            }
            legs.push(TimedLeg { edge: l.edge, from_alpha: l.from_alpha, to_alpha: l.to_alpha, t0: t, t1: t + len });
            t += len;
        }
        if legs.is_empty() {
            return Err(Error::Empty("route has zero length".into()));
        }
        Self::new(net, legs, periodic)
    }

    /// Stationary walk at `p`, periodic with the given period.
    pub fn constant(net: &Network, p: NetworkPoint, period: f64) -> Result<Self> {
        let leg = TimedLeg { edge: p.edge, from_alpha: p.alpha, to_alpha: p.alpha, t0: 0.0, t1: period };
        Self::new(net, vec![leg], true)
    }

    pub fn legs(&self) -> &[TimedLeg] {
        &self.legs
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn duration(&self) -> f64 {
        self.legs[self.legs.len() - 1].t1
    }

    pub fn period(&self) -> Option<f64> {
        self.periodic.then(|| self.duration())
    }

    /// `w_{t0}(t) = w(t0 + t)`. Only periodic walks can be shifted.
    pub fn shifted(&self, t0: f64) -> Result<Self> {
        let p = self.period().ok_or_else(|| invalid("only periodic walks can be shifted"))?;
        let mut w = self.clone();
        w.offset = (self.offset + t0).rem_euclid(p);
        Ok(w)
    }

    fn base_time(&self, t: f64) -> f64 {
        let s = t + self.offset;
        match self.period() {
            Some(p) => s.rem_euclid(p),
            None => s.clamp(0.0, self.duration()),
        }
    }

    pub fn position(&self, t: f64) -> NetworkPoint {
        let s = self.base_time(t);
        let i = self.legs.partition_point(|l| l.t1 < s).min(self.legs.len() - 1);
        let l = &self.legs[i];
        NetworkPoint::new(l.edge, l.alpha_at(s))
    }

    /// Base-time intervals within `[0, duration]` during which the walk is at `y`.
    pub fn visit_intervals(&self, net: &Network, y: &NetworkPoint) -> Vec<(f64, f64)> {
        let reps = net.representations(y);
        let mut out = Vec::new();
        for l in &self.legs {
            for &(e, a) in &reps {
                if e == l.edge {
                    if let Some(iv) = l.times_at(a, net.edge(e).len) {
                        out.push(iv);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Whether the walk passes through `y` at some time in `[t, t + m]`.
    pub fn visits_during(&self, net: &Network, y: &NetworkPoint, t: f64, m: f64) -> bool {
        self.hits(&self.visit_intervals(net, y), net, y, t, m)
    }

    /// Same as [`visits_during`](Self::visits_during) with precomputed
    /// `visit_intervals`.
    pub fn hits(&self, intervals: &[(f64, f64)], net: &Network, y: &NetworkPoint, t: f64, m: f64) -> bool {
        let start = t + self.offset;
        let end = start + m;
        match self.period() {
            Some(p) => {
                if intervals.is_empty() {
                    return false;
                }
                if m >= p {
                    return true;
                }
                intervals.iter().any(|&(a, b)| {
                    let k_lo = ((start - b - TIME_TOL) / p).floor() as i64;
                    let k_hi = ((end - a + TIME_TOL) / p).ceil() as i64;
                    (k_lo..=k_hi).any(|k| {
                        let off = k as f64 * p;
                        a + off <= end + TIME_TOL && b + off >= start - TIME_TOL
                    })
                })
            }
            None => {
                let d = self.duration();
                let in_legs = intervals.iter().any(|&(a, b)| a <= end + TIME_TOL && b >= start - TIME_TOL);
                in_legs || (end >= d && net.same_point(&self.position(d), y))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn circle_wraps() {
        let net = presets::circle(3.0);
        let w = net.parametrization(&net.eulerian_tour().unwrap()).unwrap();
        assert_eq!(w.period(), Some(3.0));
        assert!(net.same_point(&w.position(3.0), &w.position(0.0)));
        assert!((net.distance(&w.position(1.0), &w.position(0.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn n1_midpoint_of_second_edge() {
        let n1 = presets::n1();
        let tour = n1.eulerian_tour().unwrap();
        let w = n1.parametrization(&tour).unwrap();
        let second = tour.legs()[1];
        let p = w.position(1.5);
        assert_eq!(p.edge, second.edge);
        assert!((p.alpha - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_fast_legs() {
        let net = Network::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let leg = TimedLeg { edge: 0, from_alpha: 0.0, to_alpha: 1.0, t0: 0.0, t1: 0.5 };
        assert!(matches!(NetworkWalk::new(&net, vec![leg], false), Err(Error::SpeedLimit(_))));
    }

    #[test]
    fn detection_on_circle() {
        let net = presets::circle(4.0);
        let w = NetworkWalk::constant(&net, NetworkPoint::new(0, 0.0), 4.0).unwrap();
        let antipode = NetworkPoint::new(0, 0.5);
        assert!(!w.visits_during(&net, &antipode, 0.0, 0.0));
        assert!(w.visits_during(&net, &NetworkPoint::new(0, 1.0), 7.3, 0.0));
        let moving = net.parametrization(&net.eulerian_tour().unwrap()).unwrap();
        assert!(moving.visits_during(&net, &antipode, 1.0, 1.0));
        assert!(!moving.visits_during(&net, &antipode, 2.5, 1.0));
        assert!(moving.visits_during(&net, &antipode, 2.5, 3.5));
        let shifted = moving.shifted(1.0).unwrap();
        assert!(shifted.visits_during(&net, &antipode, 1.0, 0.0));
    }

    #[test]
    fn non_periodic_walk_stays_at_end() {
        let net = Network::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let leg = TimedLeg { edge: 0, from_alpha: 0.0, to_alpha: 1.0, t0: 0.0, t1: 1.0 };
        let w = NetworkWalk::new(&net, vec![leg], false).unwrap();
        assert_eq!(w.position(5.0), NetworkPoint::new(0, 1.0));
        assert!(w.visits_during(&net, &NetworkPoint::new(0, 1.0), 10.0, 0.0));
        assert!(!w.visits_during(&net, &NetworkPoint::new(0, 0.5), 10.0, 5.0));
    }
}
