//! Hiding games on grids.
//!
//! In one dimension both one-sided games are exact: with the searcher on the
//! grid, the hider's continuum of positions collapses to the cells of the
//! arrangement of the intervals `[g − r, g + r]`, and symmetrically. In
//! higher dimension the grid has covering radius `δ`, and the game on the
//! grid with radius `r − δ` (resp. `r + δ`) bounds `V_Q(r)` from below
//! (resp. above).

use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::Norm;
use crate::hiding::cantor::{self, dyadic_from_f64, dyadic_to_f64, Dyadic};
use crate::hiding::{axis, product, BoundaryWeighted, HideGame};
use crate::matrixgame::{best_by, double_oracle, ImplicitGame, MatrixGame};
use crate::space::SearchSpace;

use super::Bracket;

/// Dense 0/1 LPs get slow well before [`LP_MAX_SIDE`](crate::matrixgame::LP_MAX_SIDE).
const DIRECT_LP_SIDE: usize = 600;

/// Finite hiding game: rows are searcher points, columns hider points.
#[derive(Debug, Clone)]
pub struct GridHidingGame {
    pub rows: Vec<Vec<f64>>,
    pub cols: Vec<Vec<f64>>,
    payoff: Payoffs,
}

#[derive(Debug, Clone)]
enum Payoffs {
    /// Precomputed row-major 0/1 entries.
    Dense(Vec<u8>),
    Metric { r: f64, norm: Norm },
}

impl GridHidingGame {
    pub fn metric(rows: Vec<Vec<f64>>, cols: Vec<Vec<f64>>, r: f64, norm: Norm) -> Self {
        Self { rows, cols, payoff: Payoffs::Metric { r, norm } }
    }

    fn dense(rows: Vec<Vec<f64>>, cols: Vec<Vec<f64>>, f: impl Fn(usize, usize) -> bool) -> Self {
        let n = cols.len();
        let entries = (0..rows.len() * n).map(|k| u8::from(f(k / n, k % n))).collect();
        Self { rows, cols, payoff: Payoffs::Dense(entries) }
    }

    pub fn to_matrix(&self) -> Result<MatrixGame> {
        let label = |p: &Vec<f64>| p.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
        MatrixGame::from_fn(self.rows.iter().map(label).collect(), self.cols.iter().map(label).collect(), |i, j| {
            ImplicitGame::payoff(self, i, j)
        })
    }

    /// Value bracket of this finite game: one LP for small games, double
    /// oracle otherwise. Both ends are certified by explicit strategies.
    pub fn solve(&self, tol: f64, max_iter: usize) -> Result<Bracket> {
        self.solve_with(tol, max_iter, None)
    }

    /// As [`solve`](Self::solve), also scoring a known searcher mix; on
    /// large games the uniform hider is always scored.
    pub fn solve_with(&self, tol: f64, max_iter: usize, searcher: Option<&[(usize, f64)]>) -> Result<Bracket> {
        if self.rows.len() <= DIRECT_LP_SIDE && self.cols.len() <= DIRECT_LP_SIDE {
            let s = self.to_matrix()?.solve_lp()?;
            return Ok(Bracket { lower: s.lower, upper: s.upper });
        }
        let n = self.cols.len() as f64;
        let uniform: Vec<(usize, f64)> = (0..self.cols.len()).map(|j| (j, 1.0 / n)).collect();
        let mut b = Bracket { lower: 0.0, upper: self.best_row(&uniform).1 };
        if let Some(x) = searcher {
            b.lower = self.best_col(x).1;
        }
        if max_iter > 0 {
            let (init_rows, init_cols) = self.seeds();
            let d = double_oracle(self, &init_rows, &init_cols, tol, max_iter)?;
            log::info!(
                "hiding grid {}x{}: double oracle {} iterations, converged {}",
                self.rows.len(),
                self.cols.len(),
                d.iterations,
                d.converged
            );
            b.lower = b.lower.max(d.lower);
            b.upper = b.upper.min(d.upper);
        }
        Ok(b)
    }

    /// Expected payoff of every `targets` point against a mix over `sources`.
    fn scores(&self, mix: &[(usize, f64)], sources: &[Vec<f64>], targets: &[Vec<f64>]) -> Vec<f64> {
        let Payoffs::Metric { r, norm } = &self.payoff else { unreachable!("dense payoffs are scored directly") };
        let index = BucketIndex::new(mix.iter().map(|&(k, _)| &sources[k][..]), norm.equivalence_constants().1 * r);
        targets
            .par_iter()
            .map(|t| index.near(t).filter(|&s| norm.dist(&sources[mix[s].0], t) <= *r).map(|s| mix[s].1).sum())
            .collect()
    }

    /// [`seeds`](Self::seeds) from the entries: for each uncovered column
    /// the row hitting most uncovered columns, and columns sharing no row.
    fn dense_seeds(&self) -> (Vec<usize>, Vec<usize>) {
        let (nr, nc) = (self.rows.len(), self.cols.len());
        let hit = |i: usize, j: usize| ImplicitGame::payoff(self, i, j) > 0.0;
        let mut cover = Vec::new();
        let mut covered = vec![false; nc];
        for j in 0..nc {
            if covered[j] {
                continue;
            }
            let gain = |i: usize| (0..nc).filter(|&k| !covered[k] && hit(i, k)).count();
            let Some(i) = (0..nr).filter(|&i| hit(i, j)).max_by_key(|&i| (gain(i), std::cmp::Reverse(i))) else {
                continue;
            };
            cover.push(i);
            for (k, c) in covered.iter_mut().enumerate() {
                *c = *c || hit(i, k);
            }
        }
        let mut used = vec![false; nr];
        let mut packing = Vec::new();
        for j in 0..nc {
            if (0..nr).all(|i| !(used[i] && hit(i, j))) {
                packing.push(j);
                for (i, u) in used.iter_mut().enumerate() {
                    *u = *u || hit(i, j);
                }
            }
        }
        if cover.is_empty() {
            cover.push(0);
        }
        if packing.is_empty() {
            packing.push(0);
        }
        (cover, packing)
    }

    /// Greedy cover (rows seeing every column) and greedy packing (columns no
    /// row sees twice) as double-oracle starting sets.
    fn seeds(&self) -> (Vec<usize>, Vec<usize>) {
        let Payoffs::Metric { r, norm } = &self.payoff else { return self.dense_seeds() };
        let mut cover = Vec::new();
        let mut covered = vec![false; self.cols.len()];
        let near = |a: &[f64], b: &[f64], rad: f64| norm.dist(a, b) <= rad;
        for j in 0..self.cols.len() {
            if covered[j] {
                continue;
            }
            // Nearest row to the first uncovered column.
            let i = (0..self.rows.len())
                .min_by(|&a, &b| norm.dist(&self.rows[a], &self.cols[j]).total_cmp(&norm.dist(&self.rows[b], &self.cols[j])))
                .expect("rows are nonempty");
            cover.push(i);
            for (k, c) in covered.iter_mut().enumerate() {
                *c = *c || near(&self.rows[i], &self.cols[k], *r);
            }
        }
        let mut packing: Vec<usize> = Vec::new();
        for j in 0..self.cols.len() {
            if packing.iter().all(|&k| !near(&self.cols[j], &self.cols[k], 2.0 * r)) {
                packing.push(j);
            }
        }
        (cover, packing)
    }
}

impl ImplicitGame for GridHidingGame {
    fn rows(&self) -> usize {
        self.rows.len()
    }

    fn cols(&self) -> usize {
        self.cols.len()
    }

    fn payoff(&self, i: usize, j: usize) -> f64 {
        match &self.payoff {
            Payoffs::Dense(e) => f64::from(e[i * self.cols.len() + j]),
            Payoffs::Metric { r, norm } => f64::from(u8::from(norm.dist(&self.rows[i], &self.cols[j]) <= *r)),
        }
    }

    fn best_row(&self, col_mix: &[(usize, f64)]) -> (usize, f64) {
        if let Payoffs::Dense(_) = self.payoff {
            return best_by(self.rows.len(), |i| col_mix.iter().map(|&(j, p)| p * self.payoff(i, j)).sum(), true);
        }
        let s = self.scores(col_mix, &self.cols, &self.rows);
        best_by(s.len(), |i| s[i], true)
    }

    fn best_col(&self, row_mix: &[(usize, f64)]) -> (usize, f64) {
        if let Payoffs::Dense(_) = self.payoff {
            return best_by(self.cols.len(), |j| row_mix.iter().map(|&(i, p)| p * self.payoff(i, j)).sum(), false);
        }
        let s = self.scores(row_mix, &self.rows, &self.cols);
        best_by(s.len(), |j| s[j], false)
    }
}

/// Points hashed into cubes of side `reach`; [`near`](Self::near) yields a
/// superset of the points within `reach` in every coordinate.
struct BucketIndex {
    reach: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl BucketIndex {
    fn new<'a>(points: impl Iterator<Item = &'a [f64]>, reach: f64) -> Self {
        let reach = if reach > 0.0 { reach } else { 1.0 };
        let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (k, p) in points.enumerate() {
            cells.entry(Self::key(p, reach)).or_default().push(k);
        }
        Self { reach, cells }
    }

    fn key(p: &[f64], reach: f64) -> Vec<i64> {
        p.iter().map(|x| (x / reach).floor() as i64).collect()
    }

    fn near<'a>(&'a self, p: &[f64]) -> impl Iterator<Item = usize> + 'a {
        let base = Self::key(p, self.reach);
        let d = base.len();
        (0..3usize.pow(d as u32)).flat_map(move |code| {
            let mut c = code;
            let key: Vec<i64> = base
                .iter()
                .map(|&b| {
                    let off = (c % 3) as i64 - 1;
                    c /= 3;
                    b + off
                })
                .collect();
            self.cells.get(&key).into_iter().flatten().copied()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketKind {
    /// Finite `Q`: the grid is `Q` and both games coincide.
    Finite,
    /// One-dimensional exact one-sided games.
    Exact1d,
    /// Grid games at radii `r ∓ δ`.
    RadiusShift,
}

#[derive(Debug, Clone)]
pub struct HidingDiscretization {
    pub grid: Vec<Vec<f64>>,
    /// Every point of `Q` is within this distance of the grid (0 when exact).
    pub covering_radius: f64,
    /// `V_Q(r) ≥ value(lower)`.
    pub lower: GridHidingGame,
    /// `V_Q(r) ≤ value(upper)`.
    pub upper: GridHidingGame,
    /// Both players on the grid at radius `r`.
    pub grid_game: GridHidingGame,
    pub kind: BracketKind,
    /// Searcher mix scored against `lower` on top of the solver's own.
    pub searcher_hint: Option<Vec<(usize, f64)>>,
}

impl HidingDiscretization {
    pub fn bracket(&self, tol: f64, max_iter: usize) -> Result<Bracket> {
        let lo = self.lower.solve_with(tol, max_iter, self.searcher_hint.as_deref())?;
        let hi = self.upper.solve(tol, max_iter)?;
        Ok(Bracket { lower: lo.lower, upper: hi.upper })
    }
}

/// Grids at spacing at most `pitch`: intervals and boxes get a regular grid
/// with both ends, the disc a clipped square grid plus a boundary ring, the
/// Cantor set the endpoints of `Cₖ` with `4⁻ᵏ ≤ pitch`, finite sets
/// themselves.
pub fn discretize_hiding(game: &HideGame, pitch: f64) -> Result<HidingDiscretization> {
    if !(pitch > 0.0) || !pitch.is_finite() {
        return Err(invalid("pitch must be positive"));
    }
    let r = game.r;
    let norm = game.norm.clone();
    match &game.space {
        SearchSpace::Points { points, .. } => {
            let g = GridHidingGame::metric(points.clone(), points.clone(), r, norm);
            Ok(HidingDiscretization {
                grid: points.clone(),
                covering_radius: 0.0,
                lower: g.clone(),
                upper: g.clone(),
                grid_game: g,
                kind: BracketKind::Finite,
                searcher_hint: None,
            })
        }
        &SearchSpace::Interval { lo, hi } => exact_1d(lo, hi, r, pitch),
        SearchSpace::Box { lo, hi } if lo.len() == 1 => exact_1d(lo[0], hi[0], r, pitch),
        SearchSpace::Cantor { .. } => cantor_grid(r, pitch),
        SearchSpace::Box { lo, hi } => {
            let axes: Vec<Vec<f64>> = lo.iter().zip(hi).map(|(&a, &b)| axis(a, b, pitch)).collect();
            // Actual spacing per axis is at most `pitch`.
            let delta = axes
                .iter()
                .map(|ax| ax.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max).powi(2) / 4.0)
                .sum::<f64>()
                .sqrt();
            let mut d = shifted(product(&axes), delta, r, norm);
            if lo.len() == 2 {
                if let Ok(bw) = BoundaryWeighted::new(hi[0] - lo[0], hi[1] - lo[1], r) {
                    let local: Vec<Vec<f64>> = d.grid.iter().map(|p| vec![p[0] - lo[0], p[1] - lo[1]]).collect();
                    d.searcher_hint = Some(boundary_weighted_mix(&local, &bw));
                }
            }
            Ok(d)
        }
        &SearchSpace::Disc { radius } => {
            let ax = axis(-radius, radius, pitch);
            let mut grid: Vec<Vec<f64>> =
                product(&[ax.clone(), ax]).into_iter().filter(|p| p[0].hypot(p[1]) <= radius).collect();
            let k = ((2.0 * std::f64::consts::PI * radius / pitch).ceil() as usize).max(4);
            grid.extend((0..k).map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                vec![radius * t.cos(), radius * t.sin()]
            }));
            // Within h/√2 of a square-grid point, or within h/√2 of the rim
            // and then h/2 along it from a ring point.
            let delta = pitch * (std::f64::consts::FRAC_1_SQRT_2 + 0.5);
            Ok(shifted(grid, delta, r, norm))
        }
        other => Err(Error::UnsupportedGeometry(format!("no hiding grid for a {} space", other.kind()))),
    }
}

/// [`BoundaryWeighted`] lumped onto a product grid of `[0, a] × [0, b]`:
/// trapezoid weights for the area part, along-edge trapezoid weights for
/// the edge part, corner atoms at the corners.
pub fn boundary_weighted_mix(grid: &[Vec<f64>], bw: &BoundaryWeighted) -> Vec<(usize, f64)> {
    let coords = |d: usize| {
        let mut v: Vec<f64> = grid.iter().map(|p| p[d]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let (xs, ys) = (coords(0), coords(1));
    // Trapezoid weight of coordinate `x` on its axis.
    let trap = |ax: &[f64], x: f64| {
        let i = ax.partition_point(|&v| v < x);
        let left = if i > 0 { x - ax[i - 1] } else { 0.0 };
        let right = if i + 1 < ax.len() { ax[i + 1] - x } else { 0.0 };
        (left + right) / 2.0
    };
    let eps = 1e-12;
    let weights: Vec<f64> = grid
        .iter()
        .map(|p| {
            let (wx, wy) = (trap(&xs, p[0]), trap(&ys, p[1]));
            let on_x = p[0] <= eps || p[0] >= bw.a - eps;
            let on_y = p[1] <= eps || p[1] >= bw.b - eps;
            let mut w = bw.interior_density * wx * wy;
            if on_x {
                w += bw.edge_density * wy;
            }
            if on_y {
                w += bw.edge_density * wx;
            }
            if on_x && on_y {
                w += bw.corner_mass;
            }
            w
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().enumerate().map(|(i, w)| (i, w / total)).collect()
}

fn shifted(grid: Vec<Vec<f64>>, delta: f64, r: f64, norm: Norm) -> HidingDiscretization {
    // A hair of slack so rounding never works against the bound.
    let slack = 1e-12 * (1.0 + r);
    HidingDiscretization {
        lower: GridHidingGame::metric(grid.clone(), grid.clone(), (r - delta - slack).max(-1.0), norm.clone()),
        upper: GridHidingGame::metric(grid.clone(), grid.clone(), r + delta + slack, norm.clone()),
        grid_game: GridHidingGame::metric(grid.clone(), grid.clone(), r, norm),
        covering_radius: delta,
        grid,
        kind: BracketKind::RadiusShift,
        searcher_hint: None,
    }
}

type Exact = Ratio<i128>;

/// Cells of the arrangement of `[c − r, c + r]` over `[lo, hi]`: every
/// breakpoint inside plus one point strictly between consecutive ones.
fn arrangement(centers: &[Exact], r: Exact, lo: Exact, hi: Exact) -> Vec<Exact> {
    let mut pts = vec![lo, hi];
    for &c in centers {
        pts.extend([c - r, c + r].into_iter().filter(|p| *p > lo && *p < hi));
    }
    pts.sort();
    pts.dedup();
    let mids: Vec<Exact> = pts.windows(2).map(|w| (w[0] + w[1]) / 2).collect();
    pts.extend(mids);
    pts.sort();
    pts
}

fn exact_1d(lo: f64, hi: f64, r: f64, pitch: f64) -> Result<HidingDiscretization> {
    let (elo, ehi, er) = (dyadic_from_f64(lo)?, dyadic_from_f64(hi)?, dyadic_from_f64(r)?);
    let k = ((hi - lo) / pitch - 1e-9).ceil().max(1.0) as i128;
    let grid: Vec<Exact> = (0..=k).map(|i| elo + (ehi - elo) * Exact::new(i, k)).collect();
    let hit = |a: &Exact, b: &Exact| (*a - *b).abs() <= er;
    let as_f64 = |v: &[Exact]| v.iter().map(|&x| vec![dyadic_to_f64(x)]).collect::<Vec<_>>();
    let hider_cells = arrangement(&grid, er, elo, ehi);
    let lower = GridHidingGame::dense(as_f64(&grid), as_f64(&hider_cells), |i, j| hit(&grid[i], &hider_cells[j]));
    let upper = GridHidingGame::dense(as_f64(&hider_cells), as_f64(&grid), |i, j| hit(&hider_cells[i], &grid[j]));
    let grid_game = GridHidingGame::dense(as_f64(&grid), as_f64(&grid), |i, j| hit(&grid[i], &grid[j]));
    Ok(HidingDiscretization {
        grid: as_f64(&grid),
        covering_radius: 0.0,
        lower,
        upper,
        grid_game,
        kind: BracketKind::Exact1d,
        searcher_hint: None,
    })
}

/// Endpoints of `Cₖ` with exact distances; the covering radius is half an
/// interval length.
fn cantor_grid(r: f64, pitch: f64) -> Result<HidingDiscretization> {
    let mut k = 0u32;
    while 0.25f64.powi(k as i32) > pitch {
        k += 1;
    }
    let pts: Vec<Dyadic> = cantor::level_endpoints(k)?;
    let er = dyadic_from_f64(r)?;
    let delta = Dyadic::new(1, 2 * (1i128 << (2 * k)));
    let grid: Vec<Vec<f64>> = pts.iter().map(|&x| vec![dyadic_to_f64(x)]).collect();
    let game_at = |rad: Dyadic| {
        GridHidingGame::dense(grid.clone(), grid.clone(), |i, j| !rad.is_negative() && (pts[i] - pts[j]).abs() <= rad)
    };
    let lower_r = if er > delta { er - delta } else { -Dyadic::new(1, 1) };
    Ok(HidingDiscretization {
        lower: game_at(lower_r),
        upper: game_at(er + delta),
        grid_game: game_at(er),
        covering_radius: dyadic_to_f64(delta),
        grid,
        kind: BracketKind::RadiusShift,
        searcher_hint: None,
    })
}
