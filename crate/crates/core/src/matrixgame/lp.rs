//! Dense tableau simplex for `max Σz s.t. Az ≤ 1, z ≥ 0` with `A > 0`.
//!
//! Pricing is Dantzig's rule on a right-hand side perturbed by tiny distinct
//! amounts, which keeps 0/1 games from stalling on degenerate vertices. The
//! final basis is then re-evaluated at the true right-hand side. After a run
//! of degenerate pivots the solver still switches to Bland's rule.

use log::trace;
use rayon::prelude::*;

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const PERTURB: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;
/// Ratios this close count as tied, so Bland's rule sees float-noise ties.
const TIE_EPS: f64 = 1e-11;

pub(crate) struct LpSolution {
    pub z: Vec<f64>,
    pub duals: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// `a` is row-major `m × n` and strictly positive.
pub(crate) fn solve_packing(a: &[f64], m: usize, n: usize) -> Result<LpSolution> {
    let w = n + m + 1;
    let rhs = n + m;
    let mut t = vec![0.0; (m + 1) * w];
    for i in 0..m {
        t[i * w..i * w + n].copy_from_slice(&a[i * n..(i + 1) * n]);
        t[i * w + n + i] = 1.0;
        t[i * w + rhs] = 1.0 + PERTURB * ((i as f64 * 0.618_033_988_749_895).fract() + 0.5);
    }
    for j in 0..n {
        t[m * w + j] = -1.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut bland = false;
    let mut degenerate = 0usize;
    let max_pivots = 50 * (m + n) + 1000;
    let mut pivots = 0;
    loop {
        let obj = &t[m * w..m * w + rhs];
        let entering = if bland {
            obj.iter().position(|&c| c < -PIVOT_EPS)
        } else {
            let (j, &c) = obj.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty row");
            (c < -PIVOT_EPS).then_some(j)
        };
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let coef = t[i * w + e];
            if coef > PIVOT_EPS {
                let ratio = t[i * w + rhs] / coef;
                let better = match leave {
                    None => true,
                    Some((k, best)) => ratio < best - TIE_EPS || (ratio <= best + TIE_EPS && basis[i] < basis[k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, ratio)) = leave else {
            return Err(Error::InvalidArgument("linear program is unbounded".into()));
        };
        if ratio <= TIE_EPS {
            degenerate += 1;
            if degenerate >= DEGENERATE_RUN && !bland {
                trace!("switching to Bland's rule after {degenerate} degenerate pivots");
                bland = true;
            }
        } else {
            degenerate = 0;
        }
        pivot(&mut t, w, r, e);
        basis[r] = e;
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::InvalidArgument(format!("simplex did not converge in {max_pivots} pivots")));
        }
    }
    // The slack block holds B⁻¹, so B⁻¹·1 is its row sums.
    let mut z = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            z[b] = t[i * w + n..i * w + n + m].iter().sum::<f64>().max(0.0);
        }
    }
    let duals: Vec<f64> = (0..m).map(|i| t[m * w + n + i]).collect();
    let objective = duals.iter().sum();
    Ok(LpSolution { z, duals, objective, pivots })
}

fn pivot(t: &mut [f64], w: usize, r: usize, e: usize) {
    let p = t[r * w + e];
    for v in &mut t[r * w..(r + 1) * w] {
        *v /= p;
    }
    let prow: Vec<f64> = t[r * w..(r + 1) * w].to_vec();
    t.par_chunks_mut(w).with_min_len(128).enumerate().for_each(|(i, row)| {
        if i == r {
            return;
        }
        let f = row[e];
        if f != 0.0 {
            for (v, &pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            row[e] = 0.0;
        }
    });
}
