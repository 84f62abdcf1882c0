//! The three-arc network `N2`: value bounds as a function of `m` and the
//! walks behind them.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{time_grid, uniform_attacker_network, Attack, ValueBounds};
use crate::error::{invalid, Error, Result};
use crate::network::{Network, NetworkPoint, NetworkWalk};
use crate::presets::n2_point;
use crate::strategy::MixedStrategy;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The three expressions in the bounds, evaluated at any `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeArcFormulas {
    /// `(5m − 2) / (3(m + 2))`
    pub first_lower: BigRational,
    /// `(14 − 2m) / (3(6 − m))`, undefined at `m = 6`
    pub second_lower: Option<BigRational>,
    /// `1 − (1/3)((4 − m)/2)²`
    pub upper: BigRational,
}

pub fn three_arc_formulas(m: &BigRational) -> ThreeArcFormulas {
    let three = q(3, 1);
    let first_lower = (q(5, 1) * m - q(2, 1)) / (&three * (m + q(2, 1)));
    let six_minus = q(6, 1) - m;
    let second_lower = (!six_minus.is_zero()).then(|| (q(14, 1) - q(2, 1) * m) / (&three * six_minus));
    let half = (q(4, 1) - m) / q(2, 1);
    let upper = BigRational::one() - &half * &half / three;
    ThreeArcFormulas { first_lower, second_lower, upper }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactBounds {
    pub lower: BigRational,
    pub upper: BigRational,
    pub exact: bool,
}

/// Piecewise bounds on `V_{N2}(m, 0)`: exact `m/3` up to 2, two lower
/// branches meeting at `10/3`, exact 1 from 4 on.
pub fn three_arc_bounds_exact(m: &BigRational) -> Result<ExactBounds> {
    if m.is_negative() {
        return Err(invalid("m must be nonnegative"));
    }
    if *m <= q(2, 1) {
        let v = m / q(3, 1);
        return Ok(ExactBounds { lower: v.clone(), upper: v, exact: true });
    }
    if *m >= q(4, 1) {
        return Ok(ExactBounds { lower: BigRational::one(), upper: BigRational::one(), exact: true });
    }
    let f = three_arc_formulas(m);
    let lower = if *m <= q(10, 3) { f.first_lower } else { f.second_lower.expect("m < 6") };
    Ok(ExactBounds { lower, upper: f.upper, exact: false })
}

pub fn three_arc_bounds(m: f64) -> Result<ValueBounds> {
    let exact = BigRational::from_float(m).ok_or_else(|| invalid("m must be finite"))?;
    let b = three_arc_bounds_exact(&exact)?;
    Ok(ValueBounds {
        lower: b.lower.to_f64().expect("finite"),
        upper: b.upper.to_f64().expect("finite"),
        exact: b.exact,
    })
}

/// Named walks on `N2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum N2Walk {
    /// `(u1,u2,u3,u1,u4,u3)` on `[0, 3]`.
    W1,
    /// `(u3,u2,u1,u3,u4,u1)` on `[0, 3]`.
    W2,
    /// `(u1,u2,u3,u5,u3,u1,u6,u1)`, 3-periodic.
    W3,
    /// `(u1,u7,u1,u3,u8,u3,u4,u1)`, 3-periodic.
    W4,
    /// `(u1,u2,u3,u10,u3,u4,u1,u9,u1)`, 3-periodic.
    W5,
    /// `w¹` followed by `w²`, 6-periodic.
    W6,
    /// `(u1,u2,u3,u1,u4,u3,u1)`, 4-periodic.
    Tour4,
}

impl N2Walk {
    fn path(self) -> (&'static [usize], bool) {
        match self {
            N2Walk::W1 => (&[1, 2, 3, 1, 4, 3], false),
            N2Walk::W2 => (&[3, 2, 1, 3, 4, 1], false),
            N2Walk::W3 => (&[1, 2, 3, 5, 3, 1, 6, 1], true),
            N2Walk::W4 => (&[1, 7, 1, 3, 8, 3, 4, 1], true),
            N2Walk::W5 => (&[1, 2, 3, 10, 3, 4, 1, 9, 1], true),
            N2Walk::W6 => (&[1, 2, 3, 1, 4, 3, 2, 1, 3, 4, 1], true),
            N2Walk::Tour4 => (&[1, 2, 3, 1, 4, 3, 1], true),
        }
    }
}

/// Unit-speed walk along one of the named `N2` paths; `net` must be
/// [`presets::n2`](crate::presets::n2).
pub fn n2_walk(net: &Network, which: N2Walk) -> Result<NetworkWalk> {
    let (path, periodic) = which.path();
    let pts: Vec<NetworkPoint> = path.iter().map(|&k| n2_point(net, k)).collect();
    NetworkWalk::along(net, &net.tour_through(&pts)?, periodic)
}

/// `μ⁰` at finite resolution: `w⁶` shifted by `6k/resolution`.
///
/// Picking `u` uniformly on `N2 \ {u1, u3}` and `i ∈ {1, 2}` uniformly,
/// `w^i_u` is `w⁶` started at a uniform time in `[0, 6)`, because `w¹` and
/// `w²` each cross every point once in 3 time units and alternate.
pub fn mu0(net: &Network, resolution: usize) -> Result<MixedStrategy<NetworkWalk>> {
    if resolution == 0 {
        return Err(invalid("resolution must be positive"));
    }
    let w6 = n2_walk(net, N2Walk::W6)?;
    let walks = (0..resolution).map(|k| w6.shifted(6.0 * k as f64 / resolution as f64)).collect::<Result<Vec<_>>>()?;
    MixedStrategy::uniform(walks)
}

/// The paper's strategy pair for `m ≤ 2`, `m = 3` and `m ≥ 4`.
///
/// * `m ≤ 2`: `μ⁰` against the uniform attack at time 0.
/// * `m = 3`: `μ̃ = (1/15)(w³ + w⁴ + w⁵) + (4/5)μ⁰` against `ã`, uniform on
///   `N2 × [0, 3]` (`resolution` points times `resolution` start times).
/// * `m ≥ 4`: the 4-periodic tour against the uniform attack.
pub fn three_arc_strategies(
    net: &Network,
    m: f64,
    resolution: usize,
) -> Result<(MixedStrategy<NetworkWalk>, MixedStrategy<Attack<NetworkPoint>>)> {
    if !(m >= 0.0) {
        return Err(invalid("m must be nonnegative"));
    }
    if m <= 2.0 {
        return Ok((mu0(net, resolution)?, uniform_attacker_network(net, resolution)?));
    }
    if m >= 4.0 {
        let tour = n2_walk(net, N2Walk::Tour4)?;
        return Ok((MixedStrategy::point(tour), uniform_attacker_network(net, resolution)?));
    }
    if m != 3.0 {
        return Err(Error::UnsupportedRegime(format!(
            "strategies on N2 exist for m ≤ 2, m = 3 and m ≥ 4; m = {m} only has bounds"
        )));
    }
    let specials = [N2Walk::W3, N2Walk::W4, N2Walk::W5]
        .into_iter()
        .map(|w| n2_walk(net, w))
        .collect::<Result<Vec<_>>>()?;
    let mu = MixedStrategy::mix(vec![(0.2, MixedStrategy::uniform(specials)?), (0.8, mu0(net, resolution)?)])?;
    let points = uniform_attacker_network(net, resolution)?;
    let times = time_grid(3.0, resolution);
    let w = 1.0 / (points.len() * times.len()) as f64;
    let attacks = points
        .atoms()
        .iter()
        .flat_map(|(a, _)| times.iter().map(move |&t| (Attack::new(a.point, t), w)))
        .collect();
    Ok((mu, MixedStrategy::new(attacks)?))
}
