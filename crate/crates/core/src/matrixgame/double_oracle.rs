//! Double oracle for games too large to write down: solve a restricted game,
//! add each side's best pure reply to the other's restricted optimum, repeat.
//! Every iterate yields a valid bracket on the full game's value.

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MatrixGame, LP_MAX_SIDE};
use crate::error::{invalid, Result};

pub trait ImplicitGame: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn payoff(&self, i: usize, j: usize) -> f64;

    /// Row maximizing expected payoff against a sparse column mix; ties to
    /// the lowest index.
    fn best_row(&self, col_mix: &[(usize, f64)]) -> (usize, f64) {
        best_by(self.rows(), |i| col_mix.iter().map(|&(j, p)| p * self.payoff(i, j)).sum(), true)
    }

    /// Column minimizing expected payoff against a sparse row mix.
    fn best_col(&self, row_mix: &[(usize, f64)]) -> (usize, f64) {
        best_by(self.cols(), |j| row_mix.iter().map(|&(i, p)| p * self.payoff(i, j)).sum(), false)
    }
}

/// Parallel arg-best over `0..n` with deterministic lowest-index ties.
pub(crate) fn best_by(n: usize, f: impl Fn(usize) -> f64 + Sync, maximize: bool) -> (usize, f64) {
    (0..n)
        .into_par_iter()
        .map(|k| (k, f(k)))
        .reduce(
            || (usize::MAX, if maximize { f64::NEG_INFINITY } else { f64::INFINITY }),
            |a, b| {
                let b_wins = if maximize { b.1 > a.1 } else { b.1 < a.1 };
                if b_wins || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleOracleResult {
    /// Guaranteed by `row_strategy` against every column.
    pub lower: f64,
    /// Conceded by `col_strategy` against every row.
    pub upper: f64,
    pub row_strategy: Vec<(usize, f64)>,
    pub col_strategy: Vec<(usize, f64)>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn double_oracle<G: ImplicitGame + ?Sized>(
    game: &G,
    init_rows: &[usize],
    init_cols: &[usize],
    tol: f64,
    max_iter: usize,
) -> Result<DoubleOracleResult> {
    if init_rows.is_empty() || init_cols.is_empty() {
        return Err(invalid("double oracle needs initial rows and columns"));
    }
    let mut rows: Vec<usize> = init_rows.to_vec();
    let mut cols: Vec<usize> = init_cols.to_vec();
    rows.dedup();
    cols.dedup();
    let mut out = DoubleOracleResult {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
        row_strategy: Vec::new(),
        col_strategy: Vec::new(),
        iterations: 0,
        converged: false,
    };
    for it in 1..=max_iter {
        out.iterations = it;
        let sub = MatrixGame::from_fn(
            rows.iter().map(|i| i.to_string()).collect(),
            cols.iter().map(|j| j.to_string()).collect(),
            |a, b| game.payoff(rows[a], cols[b]),
        )?;
        let sol = sub.solve_lp()?;
        let x: Vec<(usize, f64)> =
            rows.iter().zip(&sol.row_strategy).filter(|(_, &p)| p > 0.0).map(|(&i, &p)| (i, p)).collect();
        let y: Vec<(usize, f64)> =
            cols.iter().zip(&sol.col_strategy).filter(|(_, &p)| p > 0.0).map(|(&j, &p)| (j, p)).collect();
        let (bi, up) = game.best_row(&y);
        let (bj, lo) = game.best_col(&x);
        if lo > out.lower {
            out.lower = lo;
            out.row_strategy = x;
        }
        if up < out.upper {
            out.upper = up;
            out.col_strategy = y;
        }
        debug!("double oracle it {it}: {}x{}, bracket [{}, {}]", rows.len(), cols.len(), out.lower, out.upper);
        if out.upper - out.lower <= tol {
            out.converged = true;
            break;
        }
        let new_row = !rows.contains(&bi);
        let new_col = !cols.contains(&bj);
        if !new_row && !new_col {
            out.converged = true;
            break;
        }
        if new_row {
            rows.push(bi);
        }
        if new_col {
            cols.push(bj);
        }
        if rows.len() > LP_MAX_SIDE || cols.len() > LP_MAX_SIDE {
            break;
        }
    }
    Ok(out)
}

impl ImplicitGame for MatrixGame {
    fn rows(&self) -> usize {
        MatrixGame::rows(self)
    }

    fn cols(&self) -> usize {
        MatrixGame::cols(self)
    }

    fn payoff(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
}
