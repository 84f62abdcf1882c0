//! Patrolling on a network with `r = 0`, reduced to a finite game.
//!
//! Columns are cells `(σ, k)`: a sub-edge `σ` of length at most the edge
//! pitch and the attack-time slot `[t_k, t_k + τ]`. A walk scores 1 on a
//! cell only if it runs over all of `σ` inside `[t_k + τ, t_k + m]`, which
//! detects every attack in the cell. Rows are time shifts of walks whose
//! period divides the horizon `H`, so everything is `H`-periodic and the
//! attack time only matters modulo `H`. The row player's guarantee is then
//! a certified lower bound on the value.

use std::collections::HashSet;

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrixgame::{best_by, double_oracle, ImplicitGame, MatrixGame, LP_TOL};
use crate::network::{EdgeId, Leg, Network, NetworkWalk, Tour, TIME_TOL};
use crate::patrol::{n2_walk, N2Walk};

#[derive(Debug, Clone)]
pub struct NetworkOracleConfig {
    pub edge_pitch: f64,
    /// Attack-time slot width; `m/100` when unset.
    pub time_pitch: Option<f64>,
    /// `2λ(N)` when unset.
    pub horizon: Option<f64>,
    /// Longest enumerated circuit, in edges.
    pub max_depth: usize,
    /// Most rows (walk shifts) before giving up.
    pub budget: usize,
    /// Further periodic walks, e.g. [`three_arc_family`].
    pub extra_walks: Vec<NetworkWalk>,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for NetworkOracleConfig {
    fn default() -> Self {
        Self {
            edge_pitch: 1.0 / 24.0,
            time_pitch: None,
            horizon: None,
            max_depth: 10,
            budget: 50_000,
            extra_walks: Vec::new(),
            max_iter: 2000,
            tol: 1e-7,
        }
    }
}

/// The periodic named walks on `N2`: `w³, w⁴, w⁵, w⁶` and the 4-tour.
pub fn three_arc_family(net: &Network) -> Result<Vec<NetworkWalk>> {
    [N2Walk::W3, N2Walk::W4, N2Walk::W5, N2Walk::W6, N2Walk::Tour4].into_iter().map(|w| n2_walk(net, w)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub edge: EdgeId,
    pub a0: f64,
    pub a1: f64,
}

#[derive(Debug, Clone)]
struct BaseWalk {
    label: String,
    period: f64,
    /// Per segment, sorted full-traversal intervals `(a, b)` with `a ∈ [0, P)`.
    runs: Vec<Vec<(f64, f64)>>,
}

impl BaseWalk {
    fn new(label: String, walk: &NetworkWalk, segments: &[Segment], net: &Network) -> Self {
        let period = walk.duration();
        let mut runs = vec![Vec::new(); segments.len()];
        for leg in walk.legs() {
            let (lo, hi) = (leg.from_alpha.min(leg.to_alpha), leg.from_alpha.max(leg.to_alpha));
            if hi - lo <= 0.0 || net.edge(leg.edge).len == 0.0 {
                continue;
            }
            let time = |alpha: f64| leg.t0 + (alpha - leg.from_alpha) / (leg.to_alpha - leg.from_alpha) * (leg.t1 - leg.t0);
            for (k, s) in segments.iter().enumerate() {
                if s.edge == leg.edge && s.a0 >= lo - 1e-12 && s.a1 <= hi + 1e-12 {
                    let (x, y) = (time(s.a0), time(s.a1));
                    let (a, b) = (x.min(y), x.max(y));
                    // Base time t + offset is position at time t.
                    let a_shift = (a - walk.offset()).rem_euclid(period);
                    runs[k].push((a_shift, a_shift + (b - a)));
                }
            }
        }
        for r in &mut runs {
            r.sort_by(|p, q| p.0.total_cmp(&q.0));
        }
        Self { label, period, runs }
    }

    /// Does the walk, started `shift` late in its cycle, run over segment
    /// `seg` inside `[s, e]`?
    fn covers(&self, seg: usize, shift: f64, s: f64, e: f64) -> bool {
        let (s, e) = (s + shift, e + shift);
        self.runs[seg].iter().any(|&(a, b)| {
            let j = ((s - TIME_TOL - a) / self.period).ceil();
            b + j * self.period <= e + TIME_TOL
        })
    }
}

/// The finite game. Row `i` is `(base walk, shift)`; column `seg·T + k` is
/// segment `seg` at time slot `k`.
#[derive(Debug, Clone)]
pub struct PatrolGrid {
    pub m: f64,
    pub horizon: f64,
    pub time_pitch: f64,
    pub segments: Vec<Segment>,
    pub times: Vec<f64>,
    bases: Vec<BaseWalk>,
    rows: Vec<(usize, f64)>,
    /// Rows of the unit-speed Eulerian parametrization, if any.
    pub euler_rows: std::ops::Range<usize>,
    /// Bound from the uniform attack on grid points at time 0.
    pub grid_upper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PatrolOracle {
    /// Certified: `V ≥ lower`.
    pub lower: f64,
    /// Certified: `V ≤ upper`.
    pub upper: f64,
    /// Value bound against the walk family only.
    pub family_upper: f64,
    pub rows: usize,
    pub cols: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Support of the row strategy as `(walk label, shift, probability)`.
    pub strategy: Vec<(String, f64, f64)>,
}

pub fn discretize_patrolling_network(net: &Network, m: f64, cfg: &NetworkOracleConfig) -> Result<PatrolGrid> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(invalid("m must be positive"));
    }
    if !(cfg.edge_pitch > 0.0) {
        return Err(invalid("edge pitch must be positive"));
    }
    let lambda = net.total_measure();
    let horizon = cfg.horizon.unwrap_or(2.0 * lambda);
    let tau = cfg.time_pitch.unwrap_or(m / 100.0);
    if !(horizon > 0.0) || !(tau > 0.0) || tau >= m {
        return Err(invalid("need a positive horizon and 0 < time pitch < m"));
    }
    let mut segments = Vec::new();
    let mut h_min = f64::INFINITY;
    for (id, e) in net.edges().iter().enumerate() {
        if e.len == 0.0 {
            continue;
        }
        let k = (e.len / cfg.edge_pitch - 1e-9).ceil().max(1.0) as usize;
        h_min = h_min.min(e.len / k as f64);
        segments.extend((0..k).map(|i| Segment { edge: id, a0: i as f64 / k as f64, a1: (i + 1) as f64 / k as f64 }));
    }
    let slots = (horizon / tau - 1e-9).ceil() as usize;
    let times: Vec<f64> = (0..slots).map(|k| k as f64 * tau).collect();

    let points = net.grid_points(cfg.edge_pitch)?.len();
    let grid_upper = (((m / h_min + 1e-9).floor() + 1.0) / points as f64).min(1.0);

    let divides = |p: f64| p > 0.0 && p <= horizon + TIME_TOL && ((horizon / p) - (horizon / p).round()).abs() < 1e-9;
    let step = cfg.edge_pitch.min(tau);

    let mut closed_form: Vec<(String, NetworkWalk)> = Vec::new();
    let mut euler = false;
    if net.is_eulerian()? {
        closed_form.push(("euler".into(), net.parametrization(&net.eulerian_tour()?)?));
        euler = true;
    }
    for (i, w) in cfg.extra_walks.iter().enumerate() {
        match w.period() {
            Some(p) if divides(p) => closed_form.push((format!("extra{i}"), w.clone())),
            _ => debug!("extra walk {i} skipped: not periodic with period dividing {horizon}"),
        }
    }
    let mut seen = HashSet::new();
    let mut bases: Vec<BaseWalk> = Vec::new();
    let mut add = |label: String, w: &NetworkWalk, bases: &mut Vec<BaseWalk>| {
        if seen.insert(walk_key(w)) {
            bases.push(BaseWalk::new(label, w, &segments, net));
        }
    };
    for (label, w) in &closed_form {
        add(label.clone(), w, &mut bases);
    }
    let closed_count = bases.len();
    let shifts = |p: f64| (p / step - 1e-9).ceil().max(1.0) as usize;
    let count_rows = |bases: &[BaseWalk]| bases.iter().map(|b| shifts(b.period)).sum::<usize>();

    let circuits = enumerate_circuits(net, horizon, cfg.max_depth, &divides, cfg.budget);
    let mut over_budget = circuits.is_none();
    for (i, c) in circuits.unwrap_or_default().iter().enumerate() {
        let w = NetworkWalk::along(net, c, true)?;
        add(format!("circuit{i}"), &w, &mut bases);
        if count_rows(&bases) > cfg.budget {
            over_budget = true;
            break;
        }
    }
    let make_rows = |bases: &[BaseWalk]| -> Vec<(usize, f64)> {
        bases
            .iter()
            .enumerate()
            .flat_map(|(b, w)| {
                let n = shifts(w.period);
                (0..n).map(move |j| (b, w.period * j as f64 / n as f64))
            })
            .collect()
    };
    let euler_rows = 0..if euler { shifts(bases[0].period) } else { 0 };
    if over_budget {
        bases.truncate(closed_count);
        let partial = PatrolGrid {
            m,
            horizon,
            time_pitch: tau,
            segments,
            times,
            rows: make_rows(&bases),
            bases,
            euler_rows,
            grid_upper,
        };
        let partial_lower = partial.best_uniform_family();
        return Err(Error::BudgetExceeded { budget: cfg.budget, partial_lower });
    }
    let rows = make_rows(&bases);
    info!(
        "patrol grid: {} base walks ({} closed-form), {} rows, {} segments x {} slots",
        bases.len(),
        closed_count,
        rows.len(),
        segments.len(),
        times.len()
    );
    Ok(PatrolGrid { m, horizon, time_pitch: tau, segments, times, bases, rows, euler_rows, grid_upper })
}

fn walk_key(w: &NetworkWalk) -> String {
    let mut k = format!("{:.9}", w.offset());
    for l in w.legs() {
        k.push_str(&format!("|{}:{:.9}:{:.9}:{:.9}", l.edge, l.from_alpha, l.to_alpha, l.t1));
    }
    k
}

/// Closed non-backtracking edge circuits with length dividing the horizon,
/// up to rotation, primitive only. `None` once more than `budget` are found.
fn enumerate_circuits(
    net: &Network,
    horizon: f64,
    max_depth: usize,
    divides: &dyn Fn(f64) -> bool,
    budget: usize,
) -> Option<Vec<Tour>> {
    // Step (edge, forward); forward runs from edge.a to edge.b.
    type Step = (EdgeId, bool);
    let from = |s: Step| if s.1 { net.edge(s.0).a } else { net.edge(s.0).b };
    let to = |s: Step| if s.1 { net.edge(s.0).b } else { net.edge(s.0).a };
    let out = |u: usize| -> Vec<Step> {
        let mut v = Vec::new();
        for &e in net.incident(u) {
            if net.edge(e).len == 0.0 {
                continue;
            }
            for dir in [true, false] {
                let s = (e, dir);
                if from(s) == u && !v.contains(&s) {
                    v.push(s);
                }
            }
        }
        v
    };
    let backtrack = |p: Step, q: Step| p.0 == q.0 && p.1 != q.1;
    let mut found: Vec<Vec<Step>> = Vec::new();
    let mut keys = HashSet::new();
    let mut stack: Vec<(Vec<Step>, f64)> = Vec::new();
    for u in 0..net.node_count() {
        stack.extend(out(u).into_iter().map(|s| (vec![s], net.edge(s.0).len)));
    }
    while let Some((path, len)) = stack.pop() {
        let last = *path.last().expect("paths are nonempty");
        let start = from(path[0]);
        if to(last) == start && divides(len) && !backtrack(last, path[0]) && is_primitive(&path) {
            let canon = canonical_rotation(&path);
            if keys.insert(canon.clone()) {
                found.push(canon);
                if found.len() > budget {
                    return None;
                }
            }
        }
        if path.len() >= max_depth {
            continue;
        }
        for s in out(to(last)) {
            let l = len + net.edge(s.0).len;
            if !backtrack(last, s) && l <= horizon + TIME_TOL {
                let mut p = path.clone();
                p.push(s);
                stack.push((p, l));
            }
        }
    }
    found.sort();
    Some(
        found
            .into_iter()
            .map(|c| {
                Tour::new(
                    c.into_iter()
                        .map(|(e, fwd)| {
                            let (a0, a1) = if fwd { (0.0, 1.0) } else { (1.0, 0.0) };
                            Leg { edge: e, from_alpha: a0, to_alpha: a1 }
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn canonical_rotation<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    (0..v.len()).map(|k| [&v[k..], &v[..k]].concat()).min().expect("nonempty")
}

fn is_primitive<T: PartialEq>(v: &[T]) -> bool {
    let n = v.len();
    (1..n).filter(|d| n % d == 0).all(|d| (0..n).any(|i| v[i] != v[(i + d) % n]))
}

impl PatrolGrid {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.segments.len() * self.times.len()
    }

    pub fn row_label(&self, i: usize) -> String {
        let (b, s) = self.rows[i];
        format!("{}@{}", self.bases[b].label, s)
    }

    pub fn col_label(&self, j: usize) -> String {
        let t = self.times.len();
        let s = &self.segments[j / t];
        format!("e{}[{},{}]@{}", s.edge, s.a0, s.a1, self.times[j % t])
    }

    pub fn to_matrix(&self) -> Result<MatrixGame> {
        MatrixGame::from_fn(
            (0..self.row_count()).map(|i| self.row_label(i)).collect(),
            (0..self.col_count()).map(|j| self.col_label(j)).collect(),
            |i, j| self.payoff(i, j),
        )
    }

    /// Guarantee of a row mix: its worst cell.
    pub fn guarantee(&self, mix: &[(usize, f64)]) -> f64 {
        self.best_col(mix).1
    }

    /// Best guarantee among uniform shifts of a single base walk.
    fn best_uniform_family(&self) -> f64 {
        (0..self.bases.len())
            .map(|b| {
                let rows: Vec<usize> = (0..self.rows.len()).filter(|&i| self.rows[i].0 == b).collect();
                let p = 1.0 / rows.len() as f64;
                self.guarantee(&rows.iter().map(|&i| (i, p)).collect::<Vec<_>>())
            })
            .fold(0.0, f64::max)
    }

    pub fn solve(&self, tol: f64, max_iter: usize) -> Result<PatrolOracle> {
        let init_rows: Vec<usize> = if self.euler_rows.is_empty() {
            (0..self.rows.len()).filter(|&i| self.rows[i].1 == 0.0).collect()
        } else {
            self.euler_rows.clone().collect()
        };
        let d = double_oracle(self, &init_rows, &[0], tol, max_iter)?;
        info!("patrol oracle: {} iterations, converged {}, [{}, {}]", d.iterations, d.converged, d.lower, d.upper);
        let lower = d.lower.max(self.best_uniform_family());
        Ok(PatrolOracle {
            lower,
            upper: self.grid_upper.max(lower),
            family_upper: d.upper,
            rows: self.row_count(),
            cols: self.col_count(),
            iterations: d.iterations,
            converged: d.converged,
            strategy: d
                .row_strategy
                .iter()
                .map(|&(i, p)| (self.bases[self.rows[i].0].label.clone(), self.rows[i].1, p))
                .collect(),
        })
    }

    /// [`solve`](Self::solve) with the default tolerances.
    pub fn bracket(&self) -> Result<PatrolOracle> {
        self.solve(LP_TOL.max(1e-7), 2000)
    }
}

impl ImplicitGame for PatrolGrid {
    fn rows(&self) -> usize {
        self.row_count()
    }

    fn cols(&self) -> usize {
        self.col_count()
    }

    fn payoff(&self, i: usize, j: usize) -> f64 {
        let (b, shift) = self.rows[i];
        let t = self.times.len();
        let start = self.times[j % t];
        f64::from(u8::from(self.bases[b].covers(j / t, shift, start + self.time_pitch, start + self.m)))
    }

    fn best_col(&self, row_mix: &[(usize, f64)]) -> (usize, f64) {
        // A run over `σ` during `[a, b]` covers the slots with
        // `t_k ∈ [b − m, a − τ]`; candidates from that range are confirmed
        // with `covers` so the scores match `payoff` exactly.
        let t = self.times.len();
        let tau = self.time_pitch;
        let scores: Vec<f64> = (0..self.segments.len())
            .into_par_iter()
            .flat_map_iter(|seg| {
                let mut acc = vec![0.0; t];
                let mut stamp = vec![usize::MAX; t];
                for (n, &(i, p)) in row_mix.iter().enumerate() {
                    let (b, shift) = self.rows[i];
                    let w = &self.bases[b];
                    for &(a0, b0) in &w.runs[seg] {
                        let j0 = ((shift - b0 - w.period) / w.period).floor() as i64;
                        let j1 = ((shift - a0 + self.horizon + self.m + w.period) / w.period).ceil() as i64;
                        for j in j0..=j1 {
                            let a = a0 + j as f64 * w.period - shift;
                            let bb = b0 + j as f64 * w.period - shift;
                            let lo = ((bb - self.m) / tau).floor() as i64 - 1;
                            let hi = ((a - tau) / tau).ceil() as i64 + 1;
                            for k in lo.max(0)..=hi.min(t as i64 - 1) {
                                let k = k as usize;
                                if stamp[k] != n && w.covers(seg, shift, self.times[k] + tau, self.times[k] + self.m) {
                                    stamp[k] = n;
                                    acc[k] += p;
                                }
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        best_by(scores.len(), |j| scores[j], false)
    }}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn cfg() -> NetworkOracleConfig {
        NetworkOracleConfig { time_pitch: Some(1.0 / 50.0), ..Default::default() }
    }

    #[test]
    fn circle_bracket_contains_third() {
        let net = presets::circle(3.0);
        let g = discretize_patrolling_network(&net, 1.0, &cfg()).unwrap();
        let o = g.bracket().unwrap();
        assert!(o.lower <= 1.0 / 3.0 && 1.0 / 3.0 <= o.upper, "{o:?}");
        assert!(o.upper - o.lower <= 0.05, "{o:?}");
    }

    #[test]
    fn circle_uniform_patroller_rows() {
        let net = presets::circle(3.0);
        let g = discretize_patrolling_network(&net, 1.0, &cfg()).unwrap();
        let n = g.euler_rows.len();
        assert_eq!(n, 3 * 50);
        let v = g.guarantee(&g.euler_rows.clone().map(|i| (i, 1.0 / n as f64)).collect::<Vec<_>>());
        // Losses: one time slot and one segment.
        assert!((v - 1.0 / 3.0).abs() <= 3.0 / n as f64 + (1.0 / 24.0 + 1.0 / 50.0) / 3.0, "{v}");
        assert!(v <= 1.0 / 3.0);
    }

    #[test]
    fn circle_circuits() {
        let net = presets::circle(3.0);
        let c = enumerate_circuits(&net, 6.0, 6, &|p: f64| ((6.0 / p) - (6.0 / p).round()).abs() < 1e-9, 100).unwrap();
        assert_eq!(c.len(), 2, "{c:?}");
    }

    #[test]
    fn n2_contains_third() {
        let net = presets::n2();
        let c = NetworkOracleConfig { horizon: Some(12.0), extra_walks: three_arc_family(&net).unwrap(), max_depth: 8, ..cfg() };
        let o = discretize_patrolling_network(&net, 1.0, &c).unwrap().solve(1e-6, 25).unwrap();
        assert!(o.lower <= 1.0 / 3.0 + 1e-9 && o.lower >= 1.0 / 3.0 - 0.05, "{o:?}");
        assert!(o.upper >= 1.0 / 3.0 && o.upper - o.lower <= 0.05, "{o:?}");
    }

    #[test]
    fn budget_reports_partial_lower() {
        let net = presets::circle(3.0);
        let c = NetworkOracleConfig { budget: 10, ..cfg() };
        match discretize_patrolling_network(&net, 1.0, &c) {
            Err(Error::BudgetExceeded { partial_lower, .. }) => assert!(partial_lower > 0.25 && partial_lower <= 1.0 / 3.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn entries_are_binary() {
        let net = presets::circle(1.0);
        let c = NetworkOracleConfig { edge_pitch: 0.25, time_pitch: Some(0.25), ..Default::default() };
        let m = discretize_patrolling_network(&net, 1.0, &c).unwrap().to_matrix().unwrap();
        assert!(m.payoff().iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn fast_best_col_matches_brute_force() {
        let net = presets::n2();
        let c = NetworkOracleConfig {
            edge_pitch: 0.25,
            time_pitch: Some(0.1),
            horizon: Some(12.0),
            extra_walks: three_arc_family(&net).unwrap(),
            max_depth: 6,
            ..Default::default()
        };
        let g = discretize_patrolling_network(&net, 1.3, &c).unwrap();
        let n = g.row_count();
        for mix in [vec![(0, 1.0)], (0..n).step_by(7).map(|i| (i, 1.0)).collect::<Vec<_>>()] {
            let fast = g.best_col(&mix);
            let slow = best_by(g.col_count(), |j| mix.iter().map(|&(i, p)| p * g.payoff(i, j)).sum(), false);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn primitive_and_rotation() {
        assert!(!is_primitive(&[1, 2, 1, 2]));
        assert!(is_primitive(&[1, 1, 2]));
        assert_eq!(canonical_rotation(&[3, 1, 2]), vec![1, 2, 3]);
    }
}
