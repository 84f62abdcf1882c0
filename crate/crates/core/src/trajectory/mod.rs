//! Piecewise-linear walks in ℝⁿ, total variation, the arc-length
//! reparametrization of a closed curve, and r-tours of planar regions.

mod region;
mod rtour;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
pub use region::{ElementaryRegion, PiecewiseLinear, SimpleSpace};
pub use rtour::{boustrophedon_rtour, simple_space_rtour, RTour, SpaceTour};

const SPEED_TOL: f64 = 1e-12;

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub(crate) fn point_segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab2: f64 = a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum();
    if ab2 == 0.0 {
        return euclid(p, a);
    }
    let t: f64 = p.iter().zip(a).zip(b).map(|((p, a), b)| (p - a) * (b - a)).sum::<f64>() / ab2;
    let t = t.clamp(0.0, 1.0);
    let q: Vec<f64> = a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect();
    euclid(p, &q)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WalkData {
    times: Vec<f64>,
    points: Vec<Vec<f64>>,
    period: Option<f64>,
}

/// Piecewise-linear walk through `points` at `times`. A periodic walk has
/// knots spanning exactly one period and repeats; a non-periodic walk stays
/// at its last knot afterwards (and at its first knot before `times[0]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WalkData", into = "WalkData")]
pub struct Walk {
    times: Vec<f64>,
    points: Vec<Vec<f64>>,
    period: Option<f64>,
    // Cumulative arc length at each knot.
    cum: Vec<f64>,
}

impl TryFrom<WalkData> for Walk {
    type Error = Error;
    fn try_from(d: WalkData) -> Result<Self> {
        Walk::new(d.times, d.points, d.period)
    }
}

impl From<Walk> for WalkData {
    fn from(w: Walk) -> Self {
        WalkData { times: w.times, points: w.points, period: w.period }
    }
}

impl Walk {
    pub fn new(times: Vec<f64>, points: Vec<Vec<f64>>, period: Option<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != points.len() {
            return Err(invalid("walk needs matching, nonempty times and points"));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim || p.iter().any(|x| !x.is_finite())) {
            return Err(invalid("walk points must share a positive dimension and be finite"));
        }
        let mut cum = vec![0.0];
        for i in 1..times.len() {
            let dt = times[i] - times[i - 1];
            if !(dt > 0.0) {
                return Err(invalid(format!("knot times must increase (index {i})")));
            }
            let d = euclid(&points[i], &points[i - 1]);
            if d > dt * (1.0 + SPEED_TOL) {
                return Err(Error::SpeedLimit(format!("segment {i} has speed {}", d / dt)));
            }
            cum.push(cum[i - 1] + d);
        }
        if let Some(p) = period {
            let span = times[times.len() - 1] - times[0];
            if !(p > 0.0) || (span - p).abs() > 1e-12 * p.max(1.0) {
                return Err(invalid("periodic walk knots must span exactly one period"));
            }
            if euclid(&points[0], &points[points.len() - 1]) > 1e-12 {
                return Err(invalid("periodic walk must end where it starts"));
            }
        }
        Ok(Self { times, points, period, cum })
    }

    /// Constant walk at `p`; periodic with period `period` when given.
    pub fn constant(p: Vec<f64>, period: f64) -> Result<Self> {
        Self::new(vec![0.0, period], vec![p.clone(), p], Some(period))
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    fn start(&self) -> f64 {
        self.times[0]
    }

    fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Maps `t` into the knot range; periodic walks wrap, others clamp.
    fn base_time(&self, t: f64) -> f64 {
        match self.period {
            Some(p) => self.start() + (t - self.start()).rem_euclid(p),
            None => t.clamp(self.start(), self.end()),
        }
    }

    fn segment_at(&self, s: f64) -> usize {
        self.times.partition_point(|&x| x <= s).clamp(1, self.times.len().max(2) - 1)
    }

    pub fn position(&self, t: f64) -> Vec<f64> {
        if self.times.len() == 1 {
            return self.points[0].clone();
        }
        let s = self.base_time(t);
        let i = self.segment_at(s);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let u = ((s - t0) / (t1 - t0)).clamp(0.0, 1.0);
        self.points[i - 1].iter().zip(&self.points[i]).map(|(a, b)| a + u * (b - a)).collect()
    }

    /// Arc length travelled from `times[0]` up to `t`, unbounded for periodic walks.
    fn arc_length_to(&self, t: f64) -> f64 {
        if self.times.len() == 1 {
            return 0.0;
        }
        let (laps, s) = match self.period {
            Some(p) => {
                let laps = ((t - self.start()) / p).floor();
                (laps, self.base_time(t))
            }
            None => (0.0, self.base_time(t)),
        };
        let i = self.segment_at(s);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let u = ((s - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let lap_len = self.cum[self.cum.len() - 1];
        laps * lap_len + self.cum[i - 1] + u * (self.cum[i] - self.cum[i - 1])
    }

    /// Total variation on `[a, b]`: the arc length travelled.
    pub fn total_variation(&self, a: f64, b: f64) -> Result<f64> {
        if !(a <= b) {
            return Err(invalid(format!("reversed interval [{a}, {b}]")));
        }
        Ok(self.arc_length_to(b) - self.arc_length_to(a))
    }

    /// Total variation over one period (or the knot range if not periodic).
    pub fn total_variation_lap(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }

    /// `min_{τ ∈ [t, t+m]} ‖y − w(τ)‖`, exact for piecewise-linear walks.
    pub fn min_distance(&self, y: &[f64], t: f64, m: f64) -> f64 {
        if self.times.len() == 1 {
            return euclid(y, &self.points[0]);
        }
        let (t_a, t_b) = (t, t + m);
        let mut best = euclid(y, &self.position(t_a)).min(euclid(y, &self.position(t_b)));
        let (lo, laps) = match self.period {
            Some(p) => {
                if m >= p {
                    return self.min_distance_lap(y).min(best);
                }
                let k0 = ((t_a - self.start()) / p).floor();
                let k1 = ((t_b - self.start()) / p).floor();
                (k0, (k1 - k0) as usize)
            }
            None => (0.0, 0),
        };
        let p = self.period.unwrap_or(0.0);
        for lap in 0..=laps {
            let shift = (lo + lap as f64) * p;
            for i in 1..self.times.len() {
                let (s0, s1) = (self.times[i - 1] + shift, self.times[i] + shift);
                let (c0, c1) = (s0.max(t_a), s1.min(t_b));
                if c0 > c1 {
                    continue;
                }
                let (a, b) = (self.position(c0), self.position(c1));
                best = best.min(point_segment_distance(y, &a, &b));
            }
        }
        best
    }

    fn min_distance_lap(&self, y: &[f64]) -> f64 {
        self.points
            .windows(2)
            .map(|w| point_segment_distance(y, &w[0], &w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Time-shifted copy `t ↦ w(t + t0)`. Periodic walks only.
    pub fn shifted(&self, t0: f64) -> Result<Self> {
        let p = self.period.ok_or_else(|| invalid("only periodic walks can be shifted"))?;
        let s = t0.rem_euclid(p);
        let times: Vec<f64> = self.times.iter().map(|t| t - s).collect();
        Ok(Self { times, points: self.points.clone(), period: self.period, cum: self.cum.clone() })
    }
}

/// Closed polyline `L` traced at constant speed with total period
/// `TV(L) + ε′`; each of the `k` segments gets `ε′/k` of slack so the walk is
/// strictly slower than 1 where it moves.
pub fn reparametrize(tour: &RTour, eps_prime: f64) -> Result<Walk> {
    if !(eps_prime > 0.0) {
        return Err(invalid("eps_prime must be positive"));
    }
    let pts = tour.points();
    let tv = tour.total_variation();
    if pts.len() < 2 || tv == 0.0 {
        return Walk::constant(pts[0].to_vec(), eps_prime);
    }
    let k = (pts.len() - 1) as f64;
    let mut times = vec![0.0];
    let mut cum = 0.0;
    for (i, w) in pts.windows(2).enumerate() {
        cum += euclid(&w[0], &w[1]);
        times.push(cum + eps_prime * (i + 1) as f64 / k);
    }
    let n = times.len();
    times[n - 1] = tv + eps_prime;
    let points = pts.iter().map(|p| p.to_vec()).collect();
    Walk::new(times, points, Some(tv + eps_prime))
}
