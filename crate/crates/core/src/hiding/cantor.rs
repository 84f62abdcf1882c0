//! The Cantor-type set `Q = ∩ Cₙ`, `C₀ = [0, 1]`,
//! `Cₙ = ¼Cₙ₋₁ ∪ (¾ + ¼Cₙ₋₁)`: the numbers with a base-4 expansion using
//! only the digits 0 and 3. Points are kept as digit strings and all ball
//! counts are exact.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Exact dyadic arithmetic for Cantor computations.
pub type Dyadic = Ratio<i128>;

/// Levels above this are refused when materializing atoms (`2ⁿ` points).
pub const MAX_STRATEGY_LEVEL: u32 = 16;
/// Deepest level for exact interval counts; keeps every denominator in `i128`.
pub const MAX_COUNT_LEVEL: u32 = 24;

/// `0.d₁d₂…dₖ ttt…` in base 4 with `dᵢ, t ∈ {0, 3}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CantorPoint {
    digits: Vec<u8>,
    tail: u8,
}

impl CantorPoint {
    pub fn new(mut digits: Vec<u8>, tail: u8) -> Result<Self> {
        if digits.iter().chain([&tail]).any(|&d| d != 0 && d != 3) {
            return Err(invalid("Cantor digits must be 0 or 3"));
        }
        while digits.last() == Some(&tail) {
            digits.pop();
        }
        Ok(Self { digits, tail })
    }

    pub fn zero() -> Self {
        Self { digits: vec![], tail: 0 }
    }

    pub fn one() -> Self {
        Self { digits: vec![], tail: 3 }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn tail(&self) -> u8 {
        self.tail
    }

    /// `x / 4`.
    pub fn quarter(&self) -> Self {
        self.prepend(0)
    }

    /// `3/4 + x / 4`.
    pub fn upper_quarter(&self) -> Self {
        self.prepend(3)
    }

    /// `1 − x`, which swaps the digits 0 and 3.
    pub fn reflect(&self) -> Self {
        let flip = |d: &u8| 3 - d;
        Self { digits: self.digits.iter().map(flip).collect(), tail: flip(&self.tail) }
    }

    fn prepend(&self, d: u8) -> Self {
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.push(d);
        digits.extend_from_slice(&self.digits);
        Self::new(digits, self.tail).expect("digits stay in {0, 3}")
    }

    pub fn value(&self) -> Dyadic {
        let mut v = Dyadic::zero();
        let mut scale = Dyadic::one();
        for &d in &self.digits {
            scale /= 4;
            v += scale * i128::from(d);
        }
        if self.tail == 3 {
            // 0.333…₄ = 1 at the current scale.
            v += scale;
        }
        v
    }

    pub fn to_f64(&self) -> f64 {
        dyadic_to_f64(self.value())
    }
}

pub fn dyadic_to_f64(v: Dyadic) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Exact conversion of a float with a power-of-two denominator of at most
/// `2¹²⁰`.
pub fn dyadic_from_f64(x: f64) -> Result<Dyadic> {
    if !x.is_finite() {
        return Err(invalid("non-finite value"));
    }
    if x == 0.0 {
        return Ok(Dyadic::zero());
    }
    let mut num = x;
    let mut shift = 0u32;
    while num.fract() != 0.0 {
        num *= 2.0;
        shift += 1;
        if shift > 120 {
            return Err(invalid(format!("{x} is below the dyadic resolution")));
        }
    }
    if num.abs() >= 2f64.powi(100) {
        return Err(invalid(format!("{x} is too large")));
    }
    Ok(Dyadic::new(num as i128, 1i128 << shift))
}

/// `Σ₁ = {0, 1}`, `Σₙ = ¼Σₙ₋₁ ∪ (¾ + ¼Σₙ₋₁)`; `2ⁿ` points.
pub fn sigma(n: u32) -> Result<Vec<CantorPoint>> {
    check_level(n)?;
    let mut s = vec![CantorPoint::zero(), CantorPoint::one()];
    for _ in 1..n {
        s = s.iter().map(CantorPoint::quarter).chain(s.iter().map(CantorPoint::upper_quarter)).collect();
    }
    Ok(s)
}

/// `Σ′₁ = {¼}`, `Σ′ₙ = ¼Σ′ₙ₋₁ ∪ (1 − ¼Σ′ₙ₋₁)`; `2ⁿ⁻¹` points.
pub fn sigma_prime(n: u32) -> Result<Vec<CantorPoint>> {
    check_level(n)?;
    let mut s = vec![CantorPoint::new(vec![0], 3).expect("valid digits")];
    for _ in 1..n {
        let q: Vec<CantorPoint> = s.iter().map(CantorPoint::quarter).collect();
        s = q.iter().cloned().chain(q.iter().map(CantorPoint::reflect)).collect();
    }
    Ok(s)
}

fn check_level(n: u32) -> Result<()> {
    if n == 0 {
        return Err(invalid("Cantor levels start at 1"));
    }
    if n > MAX_STRATEGY_LEVEL {
        return Err(Error::UnsupportedRegime(format!("level {n} would need 2^{n} atoms")));
    }
    Ok(())
}

/// The `2ᵏ` closed intervals of `Cₖ`, left to right.
pub fn level_intervals(k: u32) -> Result<Vec<(Dyadic, Dyadic)>> {
    if k > MAX_COUNT_LEVEL {
        return Err(Error::UnsupportedRegime(format!("level {k} is deeper than {MAX_COUNT_LEVEL}")));
    }
    let len = Dyadic::new(1, 1i128 << (2 * k));
    let mut lefts = vec![Dyadic::zero()];
    for level in 1..=k {
        let step = Dyadic::new(3, 1i128 << (2 * level));
        lefts = lefts.iter().cloned().chain(lefts.iter().map(|a| a + step)).collect();
    }
    lefts.sort();
    Ok(lefts.into_iter().map(|a| (a, a + len)).collect())
}

/// Endpoints of the intervals of `Cₖ`; all lie in `Q`.
pub fn level_endpoints(k: u32) -> Result<Vec<Dyadic>> {
    Ok(level_intervals(k)?.into_iter().flat_map(|(a, b)| [a, b]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BallCount {
    pub min: usize,
    pub max: usize,
}

impl BallCount {
    /// Exactly one atom within `r` of every point.
    pub fn is_exactly_one(&self) -> bool {
        self.min == 1 && self.max == 1
    }
}

/// Min and max over all `q ∈ Cₖ` of `#{s ∈ atoms : |q − s| ≤ r}`.
///
/// On each interval the count only changes at `s ± r`, so it is evaluated
/// at the endpoints, at those breakpoints and between consecutive ones.
pub fn ball_count(atoms: &[Dyadic], r: Dyadic, k: u32) -> Result<BallCount> {
    if atoms.is_empty() {
        return Err(Error::Empty("no atoms".into()));
    }
    let intervals = level_intervals(k)?;
    let count = |q: Dyadic| atoms.iter().filter(|&&s| (q - s).abs() <= r).count();
    let (min, max) = intervals
        .par_iter()
        .map(|&(a, b)| {
            let mut pts = vec![a, b];
            for &s in atoms {
                pts.extend([s - r, s + r].into_iter().filter(|p| *p > a && *p < b));
            }
            pts.sort();
            pts.dedup();
            let mids: Vec<Dyadic> = pts.windows(2).map(|w| (w[0] + w[1]) / 2).collect();
            pts.iter().chain(&mids).fold((usize::MAX, 0), |(lo, hi), &q| {
                let c = count(q);
                (lo.min(c), hi.max(c))
            })
        })
        .reduce(|| (usize::MAX, 0), |x, y| (x.0.min(y.0), x.1.max(y.1)));
    Ok(BallCount { min, max })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CantorBranch {
    /// `r ∈ [4⁻ⁿ, 3·4⁻ⁿ)`: value `2⁻ⁿ`, searcher on `Σₙ`.
    Sigma,
    /// `r ∈ [3·4⁻ⁿ, 4⁻⁽ⁿ⁻¹⁾)`: value `2⁻⁽ⁿ⁻¹⁾`, searcher on `Σ′ₙ`.
    SigmaPrime,
}

/// Level and branch containing `r`. Exact, since every boundary is a float.
/// `r = 1` is put on the `n = 1` second branch (a point mass at ¼ covers `Q`).
pub fn cantor_regime(r: f64) -> Result<(u32, CantorBranch)> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(invalid(format!("Cantor radius must lie in (0, 1], got {r}")));
    }
    let mut n = 1u32;
    loop {
        let unit = 0.25f64.powi(n as i32);
        if r >= 3.0 * unit {
            return Ok((n, CantorBranch::SigmaPrime));
        }
        if r >= unit {
            return Ok((n, CantorBranch::Sigma));
        }
        n += 1;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CantorSolution {
    pub value: f64,
    pub n: u32,
    pub branch: CantorBranch,
    /// Support of the uniform optimal searcher strategy.
    pub atoms: Vec<CantorPoint>,
}

pub fn cantor_value(r: f64) -> Result<f64> {
    let (n, branch) = cantor_regime(r)?;
    let exp = match branch {
        CantorBranch::Sigma => n,
        CantorBranch::SigmaPrime => n - 1,
    };
    Ok(0.5f64.powi(exp as i32))
}

/// Value together with the equalizing strategy.
pub fn cantor_solution(r: f64) -> Result<CantorSolution> {
    let (n, branch) = cantor_regime(r)?;
    let atoms = match branch {
        CantorBranch::Sigma => sigma(n)?,
        CantorBranch::SigmaPrime => sigma_prime(n)?,
    };
    Ok(CantorSolution { value: cantor_value(r)?, n, branch, atoms })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaPoint {
    pub k: u32,
    pub r: f64,
    pub value: f64,
    /// `V(r) / r^α`.
    pub ratio: f64,
}

/// `V(r)/r^α` along `r = 2⁻ᵏ`.
pub fn alpha_sweep(alpha: f64, ks: impl IntoIterator<Item = u32>) -> Result<Vec<AlphaPoint>> {
    ks.into_iter()
        .map(|k| {
            let r = 0.5f64.powi(k as i32);
            let value = cantor_value(r)?;
            Ok(AlphaPoint { k, r, value, ratio: value / r.powf(alpha) })
        })
        .collect()
}
