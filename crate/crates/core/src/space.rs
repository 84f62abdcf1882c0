//! Ground sets `Q` the games are played on.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{ball_volume, euclidean_ball_volume, Norm};
use crate::network::{Network, NetworkFile};
use crate::trajectory::{ElementaryRegion, PiecewiseLinear, SimpleSpace};

#[derive(Debug, Clone)]
pub enum SearchSpace {
    Network(Network),
    /// Planar union of elementary regions, Euclidean norm.
    Region(SimpleSpace),
    /// Finite point set.
    Points { points: Vec<Vec<f64>>, norm: Norm },
    Interval { lo: f64, hi: f64 },
    /// Axis-aligned box in ℝⁿ, Euclidean norm.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// The Cantor-type set `Q = ∩ Cₖ` kept at level-`depth` precision.
    Cantor { depth: u32 },
    /// Closed disc of the given radius centred at the origin.
    Disc { radius: f64 },
}

/// Serializable description of a [`SearchSpace`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceSpec {
    Network(NetworkFile),
    Region { regions: Vec<ElementaryRegion> },
    Points { points: Vec<Vec<f64>>, norm: Option<Norm> },
    Interval { lo: f64, hi: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Cantor { depth: Option<u32> },
    Disc { radius: f64 },
}

pub const DEFAULT_CANTOR_DEPTH: u32 = 8;

impl SpaceSpec {
    pub fn build(&self) -> Result<SearchSpace> {
        Ok(match self {
            SpaceSpec::Network(f) => SearchSpace::Network(Network::from_file(f)?),
            SpaceSpec::Region { regions } => {
                // Deserialized pieces skip their constructors; rebuild them.
                let checked = regions
                    .iter()
                    .map(|g| {
                        let b = PiecewiseLinear::new(g.bottom().xs().to_vec(), g.bottom().ys().to_vec())?;
                        let t = PiecewiseLinear::new(g.top().xs().to_vec(), g.top().ys().to_vec())?;
                        ElementaryRegion::new(b, t)
                    })
                    .collect::<Result<Vec<_>>>()?;
                SearchSpace::Region(SimpleSpace::new(checked)?)
            }
            SpaceSpec::Points { points, norm } => {
                let dim = points.first().map_or(0, Vec::len);
                if points.is_empty() || points.iter().any(|p| p.len() != dim) {
                    return Err(invalid("points must be nonempty and share a dimension"));
                }
                SearchSpace::Points { points: points.clone(), norm: norm.clone().unwrap_or(Norm::euclidean(dim)) }
            }
            &SpaceSpec::Interval { lo, hi } => {
                if !(hi >= lo) {
                    return Err(invalid("interval needs lo ≤ hi"));
                }
                SearchSpace::Interval { lo, hi }
            }
            SpaceSpec::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(b >= a)) {
                    return Err(invalid("box needs matching lo ≤ hi corners"));
                }
                SearchSpace::Box { lo: lo.clone(), hi: hi.clone() }
            }
            SpaceSpec::Cantor { depth } => SearchSpace::Cantor { depth: depth.unwrap_or(DEFAULT_CANTOR_DEPTH) },
            &SpaceSpec::Disc { radius } => {
                if !(radius >= 0.0) {
                    return Err(invalid("disc radius must be nonnegative"));
                }
                SearchSpace::Disc { radius }
            }
        })
    }
}

impl SearchSpace {
    pub fn kind(&self) -> &'static str {
        match self {
            SearchSpace::Network(_) => "network",
            SearchSpace::Region(_) => "region",
            SearchSpace::Points { .. } => "points",
            SearchSpace::Interval { .. } => "interval",
            SearchSpace::Box { .. } => "box",
            SearchSpace::Cantor { .. } => "cantor",
            SearchSpace::Disc { .. } => "disc",
        }
    }

    /// `λ(Q)`; the Cantor set and finite sets have measure zero.
    pub fn measure(&self) -> f64 {
        match self {
            SearchSpace::Network(n) => n.total_measure(),
            SearchSpace::Region(s) => s.area(),
            SearchSpace::Points { .. } | SearchSpace::Cantor { .. } => 0.0,
            SearchSpace::Interval { lo, hi } => hi - lo,
            SearchSpace::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).product(),
            SearchSpace::Disc { radius } => PI * radius * radius,
        }
    }

    /// Dimension of the ambient space (1 for networks, measured by arc length).
    pub fn dim(&self) -> usize {
        match self {
            SearchSpace::Network(_) | SearchSpace::Interval { .. } | SearchSpace::Cantor { .. } => 1,
            SearchSpace::Region(_) | SearchSpace::Disc { .. } => 2,
            SearchSpace::Points { norm, .. } => norm.dim,
            SearchSpace::Box { lo, .. } => lo.len(),
        }
    }

    /// `λ(B_r)` in the ambient space.
    pub fn ball_measure(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(invalid("r must be nonnegative"));
        }
        match self {
            SearchSpace::Network(_) => {
                if r == 0.0 {
                    Ok(0.0)
                } else {
                    Err(Error::UnsupportedGeometry("network games use r = 0".into()))
                }
            }
            SearchSpace::Points { norm, .. } => ball_volume(norm, r),
            _ => Ok(euclidean_ball_volume(self.dim(), r)),
        }
    }

    /// Closed-form maximum discovery rate `ρ`: 1 on networks and in ℝ, `2r`
    /// in the plane, `πr²` in ℝ³.
    pub fn discovery_rate(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(invalid("r must be nonnegative"));
        }
        let by_dim = |n: usize| match n {
            1 => Ok(1.0),
            2 => Ok(2.0 * r),
            3 => Ok(PI * r * r),
            _ => Err(Error::UnsupportedGeometry(format!("no closed-form discovery rate in dimension {n}"))),
        };
        match self {
            SearchSpace::Network(_) | SearchSpace::Interval { .. } => Ok(1.0),
            SearchSpace::Region(_) | SearchSpace::Disc { .. } => Ok(2.0 * r),
            SearchSpace::Box { lo, hi } => {
                if lo.iter().zip(hi).any(|(a, b)| b <= a) {
                    return Err(Error::UnsupportedGeometry("box has empty interior".into()));
                }
                by_dim(lo.len())
            }
            SearchSpace::Points { .. } | SearchSpace::Cantor { .. } => {
                Err(Error::UnsupportedGeometry(format!("no closed-form discovery rate on a {} space", self.kind())))
            }
        }
    }
}
