//! One function per verb. Each takes a single `(m, r)` point and returns
//! output rows.

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use patrol_games::discretize::{discretize_hiding, discretize_patrolling_network, NetworkOracleConfig};
use patrol_games::hiding::{
    asymptotic_ratio_sweep, cantor_solution, check_equalizing, disc_value, solve_finite_equalizing,
    unit_interval_value, EqualizingOutcome, HideGame, EQUALIZING_TOL,
};
use patrol_games::network::Network;
use patrol_games::patrol::{
    eulerian_value, rtour_patroller, simple_space_value_estimate, three_arc_bounds, three_arc_strategies,
    uniform_attacker_network, uniform_patroller, value_upper_bound, PatrolGame,
};
use patrol_games::{Error, MixedStrategy, SearchSpace};

use crate::game::Instance;
use crate::output::{Record, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Verb {
    Value,
    Bounds,
    Strategy,
    Sweep,
    Oracle,
    VerifyEqualizing,
}

#[derive(Debug, Clone)]
pub struct Opts {
    pub resolution: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

/// A single game: patrolling when `m` is set, hiding otherwise.
pub struct Point<'a> {
    pub inst: &'a Instance,
    pub m: Option<f64>,
    pub r: f64,
}

fn regime(msg: impl Into<String>) -> anyhow::Error {
    Error::UnsupportedRegime(msg.into()).into()
}

impl Point<'_> {
    fn head(&self) -> Record {
        Record::new()
            .opt_field("preset", self.inst.preset.as_deref())
            .field("space", self.inst.space.kind())
            .opt_field("m", self.m)
            .field("r", self.r)
    }

    fn patrol(&self) -> Result<PatrolGame> {
        let m = self.m.expect("patrol point");
        Ok(PatrolGame::new(self.inst.space.clone(), m, self.r)?)
    }

    fn hide(&self) -> Result<HideGame> {
        Ok(HideGame::new(self.inst.space.clone(), self.r)?)
    }
}

/// Closed-form hiding value, when one is implemented.
fn hiding_closed_form(space: &SearchSpace, r: f64) -> Result<Option<f64>> {
    Ok(match space {
        &SearchSpace::Interval { lo, hi } if hi > lo => Some(unit_interval_value(r / (hi - lo))?.value),
        SearchSpace::Cantor { .. } => Some(cantor_solution(r)?.value),
        &SearchSpace::Disc { radius } if r > 0.0 => Some(disc_value(radius / r)?),
        _ => None,
    })
}

/// Finite point sets are their own grid.
fn finite_lp(game: &HideGame) -> Result<patrol_games::matrixgame::Solution> {
    Ok(discretize_hiding(game, 1.0)?.grid_game.to_matrix()?.solve_lp()?)
}

pub fn value(p: &Point, _o: &Opts) -> Result<Vec<Record>> {
    let v = match (&p.inst.space, p.m) {
        (SearchSpace::Network(net), Some(m)) => network_value(p, net, m)?,
        (SearchSpace::Region(_), Some(_)) => {
            return Err(regime("patrolling a planar region has asymptotic bounds only; use `bounds`"))
        }
        (_, Some(_)) => return Err(regime(format!("no closed-form patrolling value on a {} space", p.inst.space.kind()))),
        (SearchSpace::Points { .. }, None) => finite_lp(&p.hide()?)?.value,
        (space, None) => hiding_closed_form(space, p.r)?.ok_or_else(|| {
            regime(format!("no closed-form hiding value on a {} space; use `bounds` or `oracle`", space.kind()))
        })?,
    };
    Ok(vec![p.head().field("exact", true).num("value", v, Status::Exact)])
}

fn network_value(p: &Point, net: &Network, m: f64) -> Result<f64> {
    if p.inst.is_n2() {
        let b = three_arc_bounds(m)?;
        if !b.exact {
            return Err(regime(format!("N2 with 2 < m < 4 (m = {m}) has bounds only; use `bounds`")));
        }
        return Ok(b.lower);
    }
    Ok(eulerian_value(net, m)?)
}

pub fn bounds(p: &Point, _o: &Opts) -> Result<Vec<Record>> {
    let rec = p.head();
    let Some(m) = p.m else {
        return hiding_bounds(p, rec);
    };
    let ub = value_upper_bound(&p.patrol()?)?;
    let rec = match &p.inst.space {
        SearchSpace::Network(net) => {
            let b = if p.inst.is_n2() {
                three_arc_bounds(m)?
            } else {
                let v = eulerian_value(net, m).map_err(|e| match e {
                    Error::NotEulerian(why) => {
                        regime(format!("non-Eulerian network ({why}) without closed-form bounds; use `oracle`"))
                    }
                    e => e.into(),
                })?;
                patrol_games::patrol::ValueBounds::exact(v)
            };
            tagged_pair(rec, b.lower, b.upper, b.exact)
        }
        SearchSpace::Region(space) => {
            let e = simple_space_value_estimate(space, m, p.r, None)?;
            tagged_pair(rec, e.lower, e.upper, false)
                .num("asymptote", e.asymptote, Status::Estimate(None))
                .field("tour_length", e.total_variation)
                .field("eps_prime", e.eps_prime)
        }
        other => return Err(regime(format!("no patrolling lower bound on a {} space", other.kind()))),
    };
    Ok(vec![rec.num("upper_bound", ub, Status::Upper)])
}

fn tagged_pair(rec: Record, lower: f64, upper: f64, exact: bool) -> Record {
    let (ls, us) = if exact { (Status::Exact, Status::Exact) } else { (Status::Lower, Status::Upper) };
    rec.num("lower", lower, ls).num("upper", upper, us).field("exact", exact)
}

fn hiding_bounds(p: &Point, rec: Record) -> Result<Vec<Record>> {
    let space = &p.inst.space;
    if let SearchSpace::Points { .. } = space {
        let s = finite_lp(&p.hide()?)?;
        return Ok(vec![tagged_pair(rec, s.lower, s.upper, s.gap.abs() <= 1e-12)]);
    }
    if let Some(v) = hiding_closed_form(space, p.r)? {
        return Ok(vec![tagged_pair(rec, v, v, true)]);
    }
    let row = asymptotic_ratio_sweep(space, &[p.r])?.remove(0);
    Ok(vec![tagged_pair(rec, row.lower, row.upper, false).num("asymptote", row.asymptote, Status::Estimate(None))])
}

fn atoms<P: serde::Serialize>(rec: &Record, player: &str, mu: &MixedStrategy<P>) -> Vec<Record> {
    mu.atoms()
        .iter()
        .map(|(a, w)| rec.clone().field("player", player).field("atom", a).num("probability", *w, Status::Exact))
        .collect()
}

pub fn strategy(p: &Point, o: &Opts) -> Result<Vec<Record>> {
    let rec = p.head();
    let res = o.resolution.unwrap_or(24);
    let mut out = Vec::new();
    match (&p.inst.space, p.m) {
        (SearchSpace::Network(net), Some(m)) if p.inst.is_n2() => {
            let (mu, nu) = three_arc_strategies(net, m, res)?;
            out.extend(atoms(&rec, "patroller", &mu));
            out.extend(atoms(&rec, "attacker", &nu));
        }
        (SearchSpace::Network(net), Some(_)) => {
            out.extend(atoms(&rec, "patroller", &uniform_patroller(net, res)?));
            out.extend(atoms(&rec, "attacker", &uniform_attacker_network(net, res)?));
        }
        (SearchSpace::Region(space), Some(_)) => {
            let mu = rtour_patroller(space, p.r, patrol_games::patrol::default_eps_prime(p.r), res)?;
            out.extend(atoms(&rec, "patroller", &mu));
        }
        (&SearchSpace::Interval { lo, hi }, None) => {
            let s = unit_interval_value(p.r / (hi - lo))?;
            let scale = |v: &[f64]| MixedStrategy::uniform(v.iter().map(|x| lo + (hi - lo) * x).collect::<Vec<_>>());
            if !s.searcher_atoms.is_empty() {
                out.extend(atoms(&rec, "searcher", &scale(&s.searcher_atoms)?));
                out.extend(atoms(&rec, "hider", &scale(&s.hider_atoms)?));
            }
        }
        (SearchSpace::Cantor { .. }, None) => {
            let s = cantor_solution(p.r)?;
            let mu = MixedStrategy::uniform(s.atoms.iter().map(|a| a.to_f64()).collect())?;
            out.extend(atoms(&rec.field("n", s.n).field("branch", s.branch), "searcher", &mu));
        }
        (SearchSpace::Points { points, .. }, None) => {
            let s = finite_lp(&p.hide()?)?;
            let pick = |w: &[f64]| {
                MixedStrategy::new(points.iter().cloned().zip(w.iter().copied()).filter(|(_, q)| *q > 0.0).collect())
            };
            out.extend(atoms(&rec, "searcher", &pick(&s.row_strategy)?));
            out.extend(atoms(&rec, "hider", &pick(&s.col_strategy)?));
        }
        (space, _) => return Err(regime(format!("no explicit optimal strategies on a {} space", space.kind()))),
    }
    Ok(out)
}

pub fn oracle(p: &Point, o: &Opts) -> Result<Vec<Record>> {
    let rec = p.head();
    match (&p.inst.space, p.m) {
        (SearchSpace::Network(net), Some(m)) => {
            let cfg = NetworkOracleConfig {
                edge_pitch: 1.0 / o.resolution.unwrap_or(24) as f64,
                tol: o.tol,
                max_iter: o.max_iter,
                ..Default::default()
            };
            let s = discretize_patrolling_network(net, m, &cfg)?.solve(o.tol, o.max_iter)?;
            Ok(vec![tagged_pair(rec, s.lower, s.upper, false)
                .num("family_upper", s.family_upper, Status::Estimate(None))
                .field("rows", s.rows)
                .field("cols", s.cols)
                .field("iterations", s.iterations)
                .field("converged", s.converged)])
        }
        (space, Some(_)) => Err(regime(format!("no patrolling oracle on a {} space", space.kind()))),
        (space, None) => {
            let extent = match space {
                &SearchSpace::Interval { lo, hi } => hi - lo,
                SearchSpace::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max),
                &SearchSpace::Disc { radius } => 2.0 * radius,
                _ => 1.0,
            };
            let pitch = extent / o.resolution.unwrap_or(200) as f64;
            let d = discretize_hiding(&p.hide()?, pitch)?;
            let b = d.bracket(o.tol, o.max_iter)?;
            Ok(vec![tagged_pair(rec, b.lower, b.upper, false)
                .field("grid_points", d.grid.len())
                .field("pitch", pitch)
                .field("bracket", format!("{:?}", d.kind))])
        }
    }
}

pub fn verify_equalizing(p: &Point, o: &Opts) -> Result<Vec<Record>> {
    if p.m.is_some() {
        bail!("verify-equalizing applies to hiding games; drop --m");
    }
    let game = p.hide()?;
    let rec = p.head();
    if let SearchSpace::Points { points, norm } = &p.inst.space {
        let (sys, out) = solve_finite_equalizing(points, p.r, norm)?;
        let verified = out.verify(&sys);
        return Ok(vec![match out {
            EqualizingOutcome::Equalizing { p: w, c } => rec
                .field("equalizing", true)
                .field("verified", verified)
                .field("c_exact", c.to_string())
                .num("c", num_traits::ToPrimitive::to_f64(&c).unwrap_or(f64::NAN), Status::Exact)
                .field("weights", w.iter().map(ToString::to_string).collect::<Vec<_>>()),
            EqualizingOutcome::Infeasible(wit) => {
                rec.field("equalizing", false).field("verified", verified).field("witness", wit)
            }
        }]);
    }
    let mu = match &p.inst.space {
        &SearchSpace::Interval { lo, hi } => {
            let s = unit_interval_value(p.r / (hi - lo))?;
            MixedStrategy::uniform(s.searcher_atoms.iter().map(|x| vec![lo + (hi - lo) * x]).collect())?
        }
        SearchSpace::Cantor { .. } => {
            MixedStrategy::uniform(cantor_solution(p.r)?.atoms.iter().map(|a| vec![a.to_f64()]).collect())?
        }
        space => return Err(regime(format!("no candidate equalizing strategy on a {} space", space.kind()))),
    };
    let mut verification = game.verification_grid()?;
    // Seeded random points on top of the grid.
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let (lo, hi) = match p.inst.space {
        SearchSpace::Interval { lo, hi } => (lo, hi),
        _ => (0.0, 1.0),
    };
    let extra = o.resolution.unwrap_or(1000);
    if matches!(p.inst.space, SearchSpace::Interval { .. }) {
        verification.extend((0..extra).map(|_| vec![rng.gen_range(lo..=hi)]));
    }
    let cert = check_equalizing(&game, &mu, &verification)?;
    Ok(vec![rec
        .field("equalizing", cert.is_equalizing(EQUALIZING_TOL))
        .num("c", cert.c, Status::Estimate(None))
        .num("max_deviation", cert.max_deviation, Status::Estimate(None))
        .num("min_coverage", cert.min, Status::Estimate(None))
        .num("max_coverage", cert.max, Status::Estimate(None))
        .field("verification_points", cert.points)])
}
