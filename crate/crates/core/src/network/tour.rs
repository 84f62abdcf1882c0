use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{EdgeId, Network, NetworkPoint, ALPHA_TOL};

/// Straight move along one edge from `from_alpha` to `to_alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub edge: EdgeId,
    pub from_alpha: f64,
    pub to_alpha: f64,
}

impl Leg {
    pub fn start(&self) -> NetworkPoint {
        NetworkPoint::new(self.edge, self.from_alpha)
    }

    pub fn end(&self) -> NetworkPoint {
        NetworkPoint::new(self.edge, self.to_alpha)
    }

    pub fn length(&self, net: &Network) -> f64 {
        net.edge(self.edge).len * (self.to_alpha - self.from_alpha).abs()
    }
}

/// Sequence of points joined along common edges, stored as legs. Closed when
/// the last leg ends where the first one starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    legs: Vec<Leg>,
}

impl Tour {
    pub fn new(legs: Vec<Leg>) -> Self {
        Self { legs }
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// The visited points `u_1, ..., u_n`.
    pub fn points(&self) -> Vec<NetworkPoint> {
        let mut pts: Vec<_> = self.legs.iter().map(Leg::start).collect();
        if let Some(last) = self.legs.last() {
            pts.push(last.end());
        }
        pts
    }

    pub fn is_contiguous(&self, net: &Network) -> bool {
        self.legs.windows(2).all(|w| net.same_point(&w[0].end(), &w[1].start()))
    }

    pub fn is_closed(&self, net: &Network) -> bool {
        match (self.legs.first(), self.legs.last()) {
            (Some(f), Some(l)) => self.is_contiguous(net) && net.same_point(&l.end(), &f.start()),
            _ => false,
        }
    }

    pub fn length(&self, net: &Network) -> f64 {
        self.legs.iter().map(|l| l.length(net)).sum()
    }

    /// Exact length; alphas and lengths are taken at their binary values.
    pub fn length_exact(&self, net: &Network) -> BigRational {
        self.legs.iter().fold(BigRational::zero(), |acc, l| {
            let len = BigRational::from_float(net.edge(l.edge).len).expect("finite");
            let d = BigRational::from_float((l.to_alpha - l.from_alpha).abs()).expect("finite");
            acc + len * d
        })
    }

    /// Whether the union of the traversed intervals is all of the network.
    pub fn covers(&self, net: &Network) -> bool {
        let mut spans: Vec<Vec<(f64, f64)>> = vec![Vec::new(); net.edge_count()];
        for l in &self.legs {
            spans[l.edge].push((l.from_alpha.min(l.to_alpha), l.from_alpha.max(l.to_alpha)));
        }
        spans.iter_mut().enumerate().all(|(e, s)| {
            if net.edge(e).len == 0.0 {
                return true;
            }
            s.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut reach = 0.0;
            for &(lo, hi) in s.iter() {
                if lo > reach + ALPHA_TOL {
                    return false;
                }
                reach = f64::max(reach, hi);
            }
            reach >= 1.0 - ALPHA_TOL
        })
    }
}
