//! Finite matrix games sandwiching continuous ones, and refinement sweeps.

pub mod hiding;
pub mod patrol;

use std::collections::HashSet;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};

pub use hiding::{boundary_weighted_mix, discretize_hiding, BracketKind, GridHidingGame, HidingDiscretization};
pub use patrol::{
    discretize_patrolling_network, three_arc_family, NetworkOracleConfig, PatrolGrid, PatrolOracle, Segment,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

/// One refinement level handed to [`convergence_sweep`].
#[derive(Debug, Clone)]
pub struct Level {
    /// The grid, used only for the nesting check.
    pub grid: Vec<Vec<f64>>,
    pub rows: usize,
    pub cols: usize,
    pub bracket: Bracket,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub lower: f64,
    pub upper: f64,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub lower_nondecreasing: bool,
    pub upper_nonincreasing: bool,
    pub target: Option<f64>,
    /// Whether `target` lies in the last bracket.
    pub target_in_final: Option<bool>,
}

impl SweepReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Key for grid points, exact up to ~1e-9 relative noise.
fn point_key(p: &[f64]) -> Vec<i64> {
    p.iter().map(|x| (x * 1e9).round() as i64).collect()
}

/// Builds each level, checks that its grid contains the previous one, and
/// records brackets. Monotonicity of the one-sided bounds is reported, not
/// enforced, since the restriction argument only covers nested grids whose
/// brackets are exact.
pub fn convergence_sweep(
    ks: impl IntoIterator<Item = usize>,
    target: Option<f64>,
    mut build: impl FnMut(usize) -> Result<Level>,
) -> Result<SweepReport> {
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut prev: Option<(usize, HashSet<Vec<i64>>)> = None;
    for k in ks {
        let start = Instant::now();
        let level = build(k)?;
        let runtime_ms = start.elapsed().as_millis();
        let keys: HashSet<Vec<i64>> = level.grid.iter().map(|p| point_key(p)).collect();
        if let Some((pk, pkeys)) = &prev {
            if !pkeys.is_subset(&keys) {
                return Err(Error::NotNested(*pk, k));
            }
        }
        log::info!("sweep k={k}: [{}, {}] in {runtime_ms} ms", level.bracket.lower, level.bracket.upper);
        rows.push(SweepRow {
            k,
            rows: level.rows,
            cols: level.cols,
            lower: level.bracket.lower,
            upper: level.bracket.upper,
            runtime_ms,
        });
        prev = Some((k, keys));
    }
    let eps = 1e-12;
    let lower_nondecreasing = rows.windows(2).all(|w| w[1].lower >= w[0].lower - eps);
    let upper_nonincreasing = rows.windows(2).all(|w| w[1].upper <= w[0].upper + eps);
    let target_in_final = target.and_then(|t| rows.last().map(|r| r.lower - eps <= t && t <= r.upper + eps));
    Ok(SweepReport { rows, lower_nondecreasing, upper_nonincreasing, target, target_in_final })
}

/// Sweep for a hiding game at pitches `base / 2ᵏ`.
pub fn hiding_sweep(
    game: &crate::hiding::HideGame,
    base_pitch: f64,
    ks: impl IntoIterator<Item = usize>,
    target: Option<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<SweepReport> {
    convergence_sweep(ks, target, |k| {
        let d = discretize_hiding(game, base_pitch / (1u64 << k) as f64)?;
        let bracket = d.bracket(tol, max_iter)?;
        Ok(Level { rows: d.lower.rows.len(), cols: d.lower.cols.len(), grid: d.grid, bracket })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hiding::HideGame;
    use crate::matrixgame::LP_TOL;
    use crate::space::SearchSpace;

    #[test]
    fn unit_interval_sweep() {
        let g = HideGame::new(SearchSpace::Interval { lo: 0.0, hi: 1.0 }, 0.3).unwrap();
        let rep = hiding_sweep(&g, 1.0, 2..=7, Some(0.5), LP_TOL, 100).unwrap();
        assert_eq!(rep.target_in_final, Some(true));
        let first = rep.rows[0].upper - rep.rows[0].lower;
        let last = rep.rows.last().unwrap();
        assert!(last.upper - last.lower <= first + 1e-12);
        assert!(rep.lower_nondecreasing, "{rep:?}");
    }

    #[test]
    fn identity_refinement() {
        let g = HideGame::new(SearchSpace::Interval { lo: 0.0, hi: 1.0 }, 0.2).unwrap();
        let rep = hiding_sweep(&g, 1.0 / 8.0, [0, 0], None, LP_TOL, 100).unwrap();
        assert_eq!(rep.rows[0].lower, rep.rows[1].lower);
        assert_eq!(rep.rows[0].upper, rep.rows[1].upper);
    }

    #[test]
    fn non_nested_is_rejected() {
        let g = HideGame::new(SearchSpace::Interval { lo: 0.0, hi: 1.0 }, 0.2).unwrap();
        let err = convergence_sweep([3, 2], None, |k| {
            let d = discretize_hiding(&g, 1.0 / k as f64)?;
            Ok(Level { grid: d.grid, rows: 0, cols: 0, bracket: Bracket { lower: 0.0, upper: 1.0 } })
        });
        assert!(matches!(err, Err(Error::NotNested(3, 2))));
    }

    #[test]
    fn csv_header() {
        let rep = SweepReport {
            rows: vec![SweepRow { k: 1, rows: 2, cols: 3, lower: 0.25, upper: 0.5, runtime_ms: 7 }],
            lower_nondecreasing: true,
            upper_nonincreasing: true,
            target: None,
            target_in_final: None,
        };
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,rows,cols,lower,upper,runtime_ms\n1,2,3,0.25,0.5,7\n");
    }
}
