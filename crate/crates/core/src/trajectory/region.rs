use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Continuous piecewise-linear function through `(xs[i], ys[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(invalid("piecewise-linear function needs matching, nonempty breakpoints"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(invalid("breakpoints must be finite with strictly increasing x"));
        }
        Ok(Self { xs, ys })
    }

    pub fn constant(x0: f64, x1: f64, y: f64) -> Result<Self> {
        if x1 > x0 {
            Self::new(vec![x0, x1], vec![y, y])
        } else {
            Self::new(vec![x0], vec![y])
        }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 || x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.xs.partition_point(|&v| v <= x);
        let (x0, x1, y0, y1) = (self.xs[i - 1], self.xs[i], self.ys[i - 1], self.ys[i]);
        y0 + (x - x0) / (x1 - x0) * (y1 - y0)
    }

    /// Graph points between `a` and `b` (either order), breakpoints included.
    pub fn graph_between(&self, a: f64, b: f64) -> Vec<[f64; 2]> {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut pts = vec![[lo, self.eval(lo)]];
        for &x in &self.xs {
            if x > lo && x < hi {
                pts.push([x, self.eval(x)]);
            }
        }
        if hi > lo {
            pts.push([hi, self.eval(hi)]);
        }
        if a > b {
            pts.reverse();
        }
        pts
    }

    /// Arc length of the graph: total variation of the curve `x ↦ (x, f(x))`.
    pub fn graph_length(&self) -> f64 {
        self.xs.windows(2).zip(self.ys.windows(2)).map(|(x, y)| (x[1] - x[0]).hypot(y[1] - y[0])).sum()
    }

    pub fn lipschitz(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
            .fold(0.0, f64::max)
    }
}

/// `{(x, y) : x0 ≤ x ≤ x0 + a, f₂(x) ≤ y ≤ f₁(x)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementaryRegion {
    bottom: PiecewiseLinear,
    top: PiecewiseLinear,
}

impl ElementaryRegion {
    pub fn new(bottom: PiecewiseLinear, top: PiecewiseLinear) -> Result<Self> {
        let (b0, b1) = bottom.domain();
        let (t0, t1) = top.domain();
        if b0 != t0 || b1 != t1 {
            return Err(invalid("top and bottom must share their domain"));
        }
        let region = Self { bottom, top };
        if region.breakpoints().iter().any(|&x| region.top.eval(x) < region.bottom.eval(x)) {
            return Err(invalid("top boundary dips below the bottom boundary"));
        }
        Ok(region)
    }

    pub fn rectangle(x0: f64, y0: f64, width: f64, height: f64) -> Result<Self> {
        if !(width >= 0.0) || !(height >= 0.0) {
            return Err(invalid("rectangle sides must be nonnegative"));
        }
        Self::new(PiecewiseLinear::constant(x0, x0 + width, y0)?, PiecewiseLinear::constant(x0, x0 + width, y0 + height)?)
    }

    pub fn unit_square() -> Self {
        Self::rectangle(0.0, 0.0, 1.0, 1.0).expect("valid")
    }

    pub fn bottom(&self) -> &PiecewiseLinear {
        &self.bottom
    }

    pub fn top(&self) -> &PiecewiseLinear {
        &self.top
    }

    pub fn x0(&self) -> f64 {
        self.bottom.domain().0
    }

    pub fn width(&self) -> f64 {
        let (a, b) = self.bottom.domain();
        b - a
    }

    /// Union of both functions' breakpoints, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.bottom.xs.iter().chain(&self.top.xs).copied().collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    pub fn height_at(&self, x: f64) -> f64 {
        self.top.eval(x) - self.bottom.eval(x)
    }

    /// Lebesgue measure; exact since the height is linear between breakpoints.
    pub fn area(&self) -> f64 {
        self.breakpoints().windows(2).map(|w| 0.5 * (w[1] - w[0]) * (self.height_at(w[0]) + self.height_at(w[1]))).sum()
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let (a, b) = self.bottom.domain();
        p[0] >= a && p[0] <= b && p[1] >= self.bottom.eval(p[0]) && p[1] <= self.top.eval(p[0])
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let lo = self.bottom.ys.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.top.ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (a, b) = self.bottom.domain();
        ([a, lo], [b, hi])
    }

    /// Boundary polygon, counter-clockwise from the bottom-left corner.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        let (a, b) = self.bottom.domain();
        let mut pts = self.bottom.graph_between(a, b);
        pts.extend(self.top.graph_between(b, a));
        pts
    }

    /// Area-uniform cell centers: `k` columns, each cut into `k` pieces of
    /// equal height; weights are the represented areas normalized to 1.
    pub fn uniform_grid(&self, k: usize) -> Vec<([f64; 2], f64)> {
        let (a, b) = self.bottom.domain();
        let dx = (b - a) / k as f64;
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            let x = a + (i as f64 + 0.5) * dx;
            let (y0, h) = (self.bottom.eval(x), self.height_at(x));
            for j in 0..k {
                out.push(([x, y0 + (j as f64 + 0.5) * h / k as f64], h * dx / k as f64));
            }
        }
        let total: f64 = out.iter().map(|(_, w)| w).sum();
        if total > 0.0 {
            for (_, w) in &mut out {
                *w /= total;
            }
        }
        out
    }
}

/// Finite union of elementary regions placed left to right, each sharing its
/// right edge with the next one's left edge along an overlapping segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleSpace {
    regions: Vec<ElementaryRegion>,
}

impl SimpleSpace {
    pub fn new(regions: Vec<ElementaryRegion>) -> Result<Self> {
        if regions.is_empty() {
            return Err(invalid("a simple space needs at least one region"));
        }
        for (i, w) in regions.windows(2).enumerate() {
            let x = w[0].bottom.domain().1;
            if (w[1].x0() - x).abs() > 1e-12 {
                return Err(invalid(format!("region {} does not start where region {i} ends", i + 1)));
            }
            let (lo0, hi0) = (w[0].bottom.eval(x), w[0].top.eval(x));
            let (lo1, hi1) = (w[1].bottom.eval(x), w[1].top.eval(x));
            if lo0.max(lo1) > hi0.min(hi1) {
                return Err(invalid(format!("regions {i} and {} do not touch", i + 1)));
            }
        }
        Ok(Self { regions })
    }

    pub fn single(region: ElementaryRegion) -> Self {
        Self { regions: vec![region] }
    }

    pub fn regions(&self) -> &[ElementaryRegion] {
        &self.regions
    }

    /// Sum of the pieces' areas; neighbours share only a vertical segment.
    pub fn area(&self) -> f64 {
        self.regions.iter().map(ElementaryRegion::area).sum()
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.regions.iter().any(|r| r.contains(p))
    }

    /// Area-uniform grid over every piece, weights normalized over the union.
    pub fn uniform_grid(&self, k: usize) -> Vec<([f64; 2], f64)> {
        let total = self.area();
        let mut out = Vec::new();
        for r in &self.regions {
            let share = if total > 0.0 { r.area() / total } else { 1.0 / self.regions.len() as f64 };
            out.extend(r.uniform_grid(k).into_iter().map(|(p, w)| (p, w * share)));
        }
        out
    }
}
