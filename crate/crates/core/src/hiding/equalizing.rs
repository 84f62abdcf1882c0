//! Exact search for equalizing strategies on finite spaces.
//!
//! With `N` the 0/1 neighbourhood matrix (`N[j][i] = 1` iff `‖xᵢ − xⱼ‖ ≤ r`),
//! an equalizing `p` solves `(N₁ − Nⱼ) p = 0` for `j ≥ 2`, `Σ pᵢ = 1`,
//! `p ≥ 0`. Everything here is done over the rationals so that every answer
//! carries a certificate anyone can re-check.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Norm;

type Q = BigRational;

/// `A p = b` with `p ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualitySystem {
    pub a: Vec<Vec<Q>>,
    pub b: Vec<Q>,
    /// Neighbourhood matrix, row `j` = indicator of `B_r(xⱼ)`.
    pub neighbourhoods: Vec<Vec<bool>>,
}

impl EqualitySystem {
    pub fn vars(&self) -> usize {
        self.neighbourhoods.len()
    }

    fn apply(&self, p: &[Q]) -> Vec<Q> {
        self.a.iter().map(|row| row.iter().zip(p).map(|(a, x)| a * x).sum()).collect()
    }

    fn transpose_apply(&self, y: &[Q]) -> Vec<Q> {
        (0..self.vars()).map(|i| self.a.iter().zip(y).map(|(row, yk)| &row[i] * yk).sum()).collect()
    }

    fn dot_b(&self, y: &[Q]) -> Q {
        self.b.iter().zip(y).map(|(b, y)| b * y).sum()
    }

    /// `μ(B_r(xⱼ))` for every `j`.
    pub fn coverage(&self, p: &[Q]) -> Vec<Q> {
        self.neighbourhoods
            .iter()
            .map(|row| row.iter().zip(p).filter(|(&hit, _)| hit).map(|(_, x)| x.clone()).sum())
            .collect()
    }
}

pub fn equality_system(points: &[Vec<f64>], r: f64, norm: &Norm) -> Result<EqualitySystem> {
    if points.is_empty() {
        return Err(Error::Empty("finite hiding game needs at least one point".into()));
    }
    if points.iter().any(|p| p.len() != norm.dim) {
        return Err(crate::error::invalid("point dimension does not match the norm"));
    }
    let n = points.len();
    let nb: Vec<Vec<bool>> =
        points.iter().map(|x| points.iter().map(|y| norm.dist(x, y) <= r).collect()).collect();
    let ind = |hit: bool| if hit { Q::one() } else { Q::zero() };
    let mut a: Vec<Vec<Q>> = (1..n).map(|j| (0..n).map(|i| ind(nb[0][i]) - ind(nb[j][i])).collect()).collect();
    a.push(vec![Q::one(); n]);
    let mut b = vec![Q::zero(); n - 1];
    b.push(Q::one());
    Ok(EqualitySystem { a, b, neighbourhoods: nb })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum InfeasibilityWitness {
    /// `yᵀA = 0` but `yᵀb ≠ 0`: the equations alone have no solution.
    Inconsistent { y: Vec<Q> },
    /// `A` has full column rank and its only solution has a negative entry.
    UniqueSolutionNegative { solution: Vec<Q>, negative_index: usize },
    /// Farkas: `Aᵀy ≤ 0` and `bᵀy > 0`, so no `p ≥ 0` solves `Ap = b`.
    Farkas { y: Vec<Q> },
}

impl InfeasibilityWitness {
    /// Re-checks the witness against `sys` from scratch.
    pub fn verify(&self, sys: &EqualitySystem) -> bool {
        match self {
            InfeasibilityWitness::Inconsistent { y } => {
                y.len() == sys.b.len() && sys.transpose_apply(y).iter().all(Zero::is_zero) && !sys.dot_b(y).is_zero()
            }
            InfeasibilityWitness::UniqueSolutionNegative { solution, negative_index } => {
                solution.len() == sys.vars()
                    && sys.apply(solution) == sys.b
                    && solution.get(*negative_index).is_some_and(Signed::is_negative)
                    && rank(&sys.a) == sys.vars()
            }
            InfeasibilityWitness::Farkas { y } => {
                y.len() == sys.b.len()
                    && sys.transpose_apply(y).iter().all(|v| !v.is_positive())
                    && sys.dot_b(y).is_positive()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EqualizingOutcome {
    /// `p` is a probability vector with `μ(B_r(xⱼ)) = c` for every `j`.
    Equalizing { p: Vec<Q>, c: Q },
    Infeasible(InfeasibilityWitness),
}

impl EqualizingOutcome {
    pub fn verify(&self, sys: &EqualitySystem) -> bool {
        match self {
            EqualizingOutcome::Equalizing { p, c } => {
                p.len() == sys.vars()
                    && p.iter().all(|x| !x.is_negative())
                    && p.iter().sum::<Q>() == Q::one()
                    && sys.coverage(p).iter().all(|v| v == c)
            }
            EqualizingOutcome::Infeasible(w) => w.verify(sys),
        }
    }
}

/// Decides exactly whether the finite hiding game on `points` has an
/// equalizing strategy.
pub fn solve_finite_equalizing(points: &[Vec<f64>], r: f64, norm: &Norm) -> Result<(EqualitySystem, EqualizingOutcome)> {
    let sys = equality_system(points, r, norm)?;
    let outcome = solve_system(&sys);
    debug_assert!(outcome.verify(&sys));
    Ok((sys, outcome))
}

fn solve_system(sys: &EqualitySystem) -> EqualizingOutcome {
    let n = sys.vars();
    let rows = sys.a.len();
    // [A | b | I], reduced on the A block; the I block records row operations.
    let mut m: Vec<Vec<Q>> = sys
        .a
        .iter()
        .zip(&sys.b)
        .enumerate()
        .map(|(k, (row, b))| {
            let mut v = row.clone();
            v.push(b.clone());
            v.extend((0..rows).map(|j| if j == k { Q::one() } else { Q::zero() }));
            v
        })
        .collect();
    let pivots = reduce(&mut m, n);
    for row in &m[pivots.len()..] {
        if !row[n].is_zero() {
            return EqualizingOutcome::Infeasible(InfeasibilityWitness::Inconsistent { y: row[n + 1..].to_vec() });
        }
    }
    if pivots.len() == n {
        let mut p = vec![Q::zero(); n];
        for (k, &col) in pivots.iter().enumerate() {
            p[col] = m[k][n].clone();
        }
        if let Some(neg) = p.iter().position(Signed::is_negative) {
            return EqualizingOutcome::Infeasible(InfeasibilityWitness::UniqueSolutionNegative {
                solution: p,
                negative_index: neg,
            });
        }
        let c = sys.coverage(&p)[0].clone();
        return EqualizingOutcome::Equalizing { p, c };
    }
    phase_one(sys)
}

/// Gauss–Jordan on the first `n` columns; returns pivot columns in row order.
fn reduce(m: &mut [Vec<Q>], n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&k| !m[k][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

fn rank(a: &[Vec<Q>]) -> usize {
    let n = a.first().map_or(0, Vec::len);
    let mut m = a.to_vec();
    reduce(&mut m, n).len()
}

/// Phase-1 simplex with Bland's rule: `min Σ aᵢ` over `A p + a = b`,
/// `p, a ≥ 0` with rows signed so that `b ≥ 0`. A positive optimum yields
/// the Farkas vector from the artificial columns' reduced costs.
fn phase_one(sys: &EqualitySystem) -> EqualizingOutcome {
    let n = sys.vars();
    let rows = sys.a.len();
    let width = n + rows;
    let sign: Vec<Q> = sys.b.iter().map(|b| if b.is_negative() { -Q::one() } else { Q::one() }).collect();
    let mut t: Vec<Vec<Q>> = (0..rows)
        .map(|k| {
            let mut v: Vec<Q> = sys.a[k].iter().map(|x| x * &sign[k]).collect();
            v.extend((0..rows).map(|j| if j == k { Q::one() } else { Q::zero() }));
            v.push(&sys.b[k] * &sign[k]);
            v
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();
    // Reduced costs d_j = c_j − c_Bᵀ B⁻¹ A_j, with the objective value last.
    let mut d: Vec<Q> = (0..=width)
        .map(|j| {
            let c = if (n..width).contains(&j) { Q::one() } else { Q::zero() };
            c - t.iter().map(|row| row[j].clone()).sum::<Q>()
        })
        .collect();
    while let Some(enter) = (0..width).find(|&j| d[j].is_negative()) {
        let leave = (0..rows)
            .filter(|&k| t[k][enter].is_positive())
            .min_by(|&a, &b| {
                let ra = &t[a][width] / &t[a][enter];
                let rb = &t[b][width] / &t[b][enter];
                ra.cmp(&rb).then(basis[a].cmp(&basis[b]))
            })
            .expect("phase one is bounded below by zero");
        let inv = t[leave][enter].recip();
        for v in t[leave].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = t[leave].clone();
        for (k, row) in t.iter_mut().enumerate() {
            if k != leave && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        let f = d[enter].clone();
        for (v, pv) in d.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
        basis[leave] = enter;
    }
    let objective = -d[width].clone();
    if objective.is_zero() {
        let mut p = vec![Q::zero(); n];
        for (k, &j) in basis.iter().enumerate() {
            if j < n {
                p[j] = t[k][width].clone();
            }
        }
        let c = sys.coverage(&p)[0].clone();
        return EqualizingOutcome::Equalizing { p, c };
    }
    let y = (0..rows).map(|k| (Q::one() - &d[n + k]) * &sign[k]).collect();
    EqualizingOutcome::Infeasible(InfeasibilityWitness::Farkas { y })
}
