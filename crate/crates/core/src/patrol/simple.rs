//! Planar simple search spaces: the r-tour patroller and the upper bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::strategy::MixedStrategy;
use crate::trajectory::{reparametrize, simple_space_rtour, SimpleSpace, Walk};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleSpaceEstimate {
    /// `min(1, m/(TV(L) + ε′))`, guaranteed by the r-tour patroller; 1 when
    /// the tour is a single point.
    pub lower: f64,
    /// `min(1, (2rm + πr²)/λ(Q))`.
    pub upper: f64,
    /// `2rm/λ(Q)`.
    pub asymptote: f64,
    pub total_variation: f64,
    pub eps_prime: f64,
    /// `ε` with `TV(L) = (1 + ε)·λ(Q)/(2r)`.
    pub measured_eps: f64,
    pub connector_length: f64,
}

/// Default slack `ε′` added to the r-tour period.
pub fn default_eps_prime(r: f64) -> f64 {
    r
}

pub fn simple_space_value_estimate(
    space: &SimpleSpace,
    m: f64,
    r: f64,
    eps_prime: Option<f64>,
) -> Result<SimpleSpaceEstimate> {
    if !(m >= 0.0) || !(r > 0.0) {
        return Err(invalid("need m ≥ 0 and r > 0"));
    }
    let lambda = space.area();
    if !(lambda > 0.0) {
        return Err(invalid("the space has zero area"));
    }
    let eps_prime = eps_prime.unwrap_or_else(|| default_eps_prime(r));
    let st = simple_space_rtour(space, r)?;
    let tv = st.tour.total_variation();
    let lower = if tv == 0.0 { 1.0 } else { (m / (tv + eps_prime)).min(1.0) };
    Ok(SimpleSpaceEstimate {
        lower,
        upper: ((2.0 * r * m + PI * r * r) / lambda).min(1.0),
        asymptote: 2.0 * r * m / lambda,
        total_variation: tv,
        eps_prime,
        measured_eps: st.tour.measured_eps(lambda),
        connector_length: st.connector_length,
    })
}

/// Uniformly time-shifted reparametrized r-tour, `resolution` shifts.
pub fn rtour_patroller(space: &SimpleSpace, r: f64, eps_prime: f64, resolution: usize) -> Result<MixedStrategy<Walk>> {
    if resolution == 0 {
        return Err(invalid("resolution must be positive"));
    }
    let st = simple_space_rtour(space, r)?;
    let w = reparametrize(&st.tour, eps_prime)?;
    let p = w.period().expect("reparametrized tours are periodic");
    let walks = (0..resolution).map(|k| w.shifted(p * k as f64 / resolution as f64)).collect::<Result<Vec<_>>>()?;
    MixedStrategy::uniform(walks)
}
