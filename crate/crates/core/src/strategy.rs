use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Finite-support probability distribution over pure strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy<P> {
    atoms: Vec<(P, f64)>,
}

pub const WEIGHT_TOL: f64 = 1e-12;

impl<P: PartialEq> MixedStrategy<P> {
    /// Weights must be nonnegative and sum to 1 within [`WEIGHT_TOL`]; atoms
    /// must be distinct.
    pub fn new(atoms: Vec<(P, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("mixed strategy has no atoms"));
        }
        if atoms.iter().any(|(_, w)| !(*w >= 0.0) || !w.is_finite()) {
            return Err(invalid("weights must be finite and nonnegative"));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        for i in 0..atoms.len() {
            if atoms[i + 1..].iter().any(|(p, _)| *p == atoms[i].0) {
                return Err(invalid(format!("atom {i} is repeated")));
            }
        }
        Ok(Self { atoms })
    }

    pub fn uniform(items: Vec<P>) -> Result<Self> {
        let w = 1.0 / items.len() as f64;
        Self::new(items.into_iter().map(|p| (p, w)).collect())
    }

    pub fn point(p: P) -> Self {
        Self { atoms: vec![(p, 1.0)] }
    }

    /// `Σ cₖ μₖ`; atoms of different parts must be distinct.
    pub fn mix(parts: Vec<(f64, MixedStrategy<P>)>) -> Result<Self> {
        let atoms = parts.into_iter().flat_map(|(c, m)| m.atoms.into_iter().map(move |(p, w)| (p, c * w))).collect();
        Self::new(atoms)
    }
}

impl<P> MixedStrategy<P> {
    pub fn atoms(&self) -> &[(P, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn map<Q>(self, f: impl Fn(P) -> Q) -> MixedStrategy<Q> {
        MixedStrategy { atoms: self.atoms.into_iter().map(|(p, w)| (f(p), w)).collect() }
    }
}
