//! Finite two-player zero-sum games. The row player maximizes.

mod double_oracle;
mod io;
mod lp;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
pub use double_oracle::{double_oracle, DoubleOracleResult, ImplicitGame};
pub(crate) use double_oracle::best_by;

/// Largest side handled by the simplex; bigger games use fictitious play.
pub const LP_MAX_SIDE: usize = 2000;
pub const LP_TOL: f64 = 1e-9;
pub const FP_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    payoff: Vec<f64>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Row,
    Col,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Simplex,
    FictitiousPlay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    /// `min_j (xᵀA)_j`: what the row strategy guarantees.
    pub lower: f64,
    /// `max_i (Ay)_i`: what the column strategy concedes.
    pub upper: f64,
    pub gap: f64,
    pub method: Method,
}

impl MatrixGame {
    pub fn new(rows: usize, cols: usize, payoff: Vec<f64>) -> Result<Self> {
        let row_labels = (0..rows).map(|i| format!("r{i}")).collect();
        let col_labels = (0..cols).map(|j| format!("c{j}")).collect();
        Self::with_labels(payoff, row_labels, col_labels)
    }

    pub fn with_labels(payoff: Vec<f64>, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        let (rows, cols) = (row_labels.len(), col_labels.len());
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix game needs at least one row and one column".into()));
        }
        if payoff.len() != rows * cols {
            return Err(invalid(format!("payoff has {} entries, expected {}", payoff.len(), rows * cols)));
        }
        if let Some(k) = payoff.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k / cols, k % cols));
        }
        Ok(Self { rows, cols, payoff, row_labels, col_labels })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid("ragged payoff rows"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Game with `payoff(i, j)` filled in, rows computed in parallel.
    pub fn from_fn(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        f: impl Fn(usize, usize) -> f64 + Sync,
    ) -> Result<Self> {
        use rayon::prelude::*;
        let cols = col_labels.len();
        let mut payoff = vec![0.0; row_labels.len() * cols];
        if cols > 0 {
            payoff.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = f(i, j);
                }
            });
        }
        Self::with_labels(payoff, row_labels, col_labels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.payoff[i * self.cols + j]
    }

    pub fn payoff(&self) -> &[f64] {
        &self.payoff
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    /// `a·A + b`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::with_labels(
            self.payoff.iter().map(|v| a * v + b).collect(),
            self.row_labels.clone(),
            self.col_labels.clone(),
        )
    }

    /// Sub-game on the given rows and columns, labels kept.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let payoff = rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        Self::with_labels(
            payoff,
            rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
        )
    }

    /// `(Ay)_i` for every row.
    pub fn row_payoffs(&self, y: &[f64]) -> Vec<f64> {
        self.payoff.chunks(self.cols).map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
    }

    /// `(xᵀA)_j` for every column.
    pub fn col_payoffs(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (row, &xi) in self.payoff.chunks(self.cols).zip(x) {
            if xi != 0.0 {
                for (o, a) in out.iter_mut().zip(row) {
                    *o += xi * a;
                }
            }
        }
        out
    }

    /// Best pure reply to the opponent's mixed strategy: the maximizing row
    /// for `Side::Row`, the minimizing column for `Side::Col`. Ties go to the
    /// lowest index.
    pub fn best_response(&self, opponent: &[f64], side: Side) -> Result<(usize, f64)> {
        let (payoffs, better): (Vec<f64>, fn(f64, f64) -> bool) = match side {
            Side::Row => {
                check_strategy(opponent, self.cols)?;
                (self.row_payoffs(opponent), |a, b| a > b)
            }
            Side::Col => {
                check_strategy(opponent, self.rows)?;
                (self.col_payoffs(opponent), |a, b| a < b)
            }
        };
        let mut best = (0, payoffs[0]);
        for (k, &v) in payoffs.iter().enumerate().skip(1) {
            if better(v, best.1) {
                best = (k, v);
            }
        }
        Ok(best)
    }

    fn bracket(&self, x: &[f64], y: &[f64]) -> (f64, f64) {
        let lower = self.col_payoffs(x).into_iter().fold(f64::INFINITY, f64::min);
        let upper = self.row_payoffs(y).into_iter().fold(f64::NEG_INFINITY, f64::max);
        (lower, upper)
    }

    /// Simplex below [`LP_MAX_SIDE`] on both sides, fictitious play above.
    pub fn solve(&self, tol: f64) -> Result<Solution> {
        if !(tol > 0.0) {
            return Err(invalid("tol must be positive"));
        }
        if self.rows <= LP_MAX_SIDE && self.cols <= LP_MAX_SIDE {
            self.solve_lp()
        } else {
            self.fictitious_play(tol, 200_000)
        }
    }

    pub fn solve_lp(&self) -> Result<Solution> {
        let min = self.payoff.iter().copied().fold(f64::INFINITY, f64::min);
        let shift = 1.0 - min;
        let shifted: Vec<f64> = self.payoff.iter().map(|v| v + shift).collect();
        let sol = lp::solve_packing(&shifted, self.rows, self.cols)?;
        let v = 1.0 / sol.objective;
        let y = normalize(sol.z.iter().map(|z| z * v).collect());
        let x = normalize(sol.duals.iter().map(|d| d * v).collect());
        let (lower, upper) = self.bracket(&x, &y);
        debug!("simplex {}x{}: {} pivots, bracket [{lower}, {upper}]", self.rows, self.cols, sol.pivots);
        Ok(Solution {
            value: v - shift,
            row_strategy: x,
            col_strategy: y,
            lower,
            upper,
            gap: upper - lower,
            method: Method::Simplex,
        })
    }

    /// Brown–Robinson fictitious play; stops once the empirical strategies
    /// certify a gap of at most `tol`.
    pub fn fictitious_play(&self, tol: f64, max_iter: usize) -> Result<Solution> {
        let (m, n) = (self.rows, self.cols);
        let mut row_count = vec![0u64; m];
        let mut col_count = vec![0u64; n];
        // Cumulative payoffs of each row against the column history and vice versa.
        let mut row_acc = vec![0.0; m];
        let mut col_acc = vec![0.0; n];
        let (mut i, mut j) = (0usize, 0usize);
        let mut best = (f64::NEG_INFINITY, f64::INFINITY, Vec::new(), Vec::new());
        for it in 1..=max_iter {
            row_count[i] += 1;
            col_count[j] += 1;
            for (acc, a) in col_acc.iter_mut().zip(&self.payoff[i * n..(i + 1) * n]) {
                *acc += a;
            }
            for (k, acc) in row_acc.iter_mut().enumerate() {
                *acc += self.payoff[k * n + j];
            }
            let t = it as f64;
            let (bi, upper) = argmax(&row_acc);
            let (bj, lower) = argmin(&col_acc);
            let (lower, upper) = (lower / t, upper / t);
            if lower > best.0 {
                best.0 = lower;
                best.2 = row_count.clone();
            }
            if upper < best.1 {
                best.1 = upper;
                best.3 = col_count.clone();
            }
            if best.1 - best.0 <= tol {
                break;
            }
            i = bi;
            j = bj;
        }
        let x = normalize(best.2.iter().map(|&c| c as f64).collect());
        let y = normalize(best.3.iter().map(|&c| c as f64).collect());
        let (lower, upper) = self.bracket(&x, &y);
        Ok(Solution {
            value: 0.5 * (lower + upper),
            row_strategy: x,
            col_strategy: y,
            lower,
            upper,
            gap: upper - lower,
            method: Method::FictitiousPlay,
        })
    }
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (k, &x)| if x > b.1 { (k, x) } else { b })
}

fn argmin(v: &[f64]) -> (usize, f64) {
    v.iter().enumerate().fold((0, f64::INFINITY), |b, (k, &x)| if x < b.1 { (k, x) } else { b })
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    for x in &mut v {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        for x in &mut v {
            *x /= s;
        }
    }
    v
}

fn check_strategy(p: &[f64], len: usize) -> Result<()> {
    if p.len() != len {
        return Err(invalid(format!("strategy has {} entries, expected {len}", p.len())));
    }
    if p.iter().any(|&x| !(x >= 0.0)) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(invalid("strategy must be nonnegative and sum to 1"));
    }
    Ok(())
}
