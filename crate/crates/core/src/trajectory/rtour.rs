use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::region::{ElementaryRegion, SimpleSpace};
use super::{euclid, point_segment_distance};
use crate::error::{invalid, Error, Result};

/// Closed polyline whose `r`-neighbourhood covers a region. A single point
/// is a degenerate tour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RTour {
    points: Vec<[f64; 2]>,
    r: f64,
    total_variation: f64,
}

impl RTour {
    pub fn new(points: Vec<[f64; 2]>, r: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("r-tour has no points".into()));
        }
        if euclid(&points[0], &points[points.len() - 1]) > 1e-12 {
            return Err(invalid("r-tour must be closed"));
        }
        let total_variation = points.windows(2).map(|w| euclid(&w[0], &w[1])).sum();
        Ok(Self { points, r, total_variation })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn total_variation(&self) -> f64 {
        self.total_variation
    }

    /// `ε` in `TV = (1 + ε)·λ/(2r)`.
    pub fn measured_eps(&self, area: f64) -> f64 {
        self.total_variation * 2.0 * self.r / area - 1.0
    }
}

/// Tour of a union of regions plus the length spent on connectors between pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTour {
    pub tour: RTour,
    pub connector_length: f64,
}

/// Buckets segments on a square grid so that all segments within `r` of a
/// point are found in that point's cell.
struct SegmentIndex<'a> {
    pts: &'a [[f64; 2]],
    origin: [f64; 2],
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> SegmentIndex<'a> {
    fn new(pts: &'a [[f64; 2]], lo: [f64; 2], hi: [f64; 2], r: f64) -> Self {
        let cell = r.max((hi[0] - lo[0]).max(hi[1] - lo[1]) / 4096.0);
        let nx = ((hi[0] - lo[0]) / cell).floor() as usize + 1;
        let ny = ((hi[1] - lo[1]) / cell).floor() as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        let clampi = |v: f64, n: usize| (v.floor().max(0.0) as usize).min(n - 1);
        for i in 0..pts.len().saturating_sub(1) {
            let (a, b) = (pts[i], pts[i + 1]);
            let x0 = clampi((a[0].min(b[0]) - r - lo[0]) / cell, nx);
            let x1 = clampi((a[0].max(b[0]) + r - lo[0]) / cell, nx);
            let y0 = clampi((a[1].min(b[1]) - r - lo[1]) / cell, ny);
            let y1 = clampi((a[1].max(b[1]) + r - lo[1]) / cell, ny);
            for cx in x0..=x1 {
                for cy in y0..=y1 {
                    buckets[cx * ny + cy].push(i);
                }
            }
        }
        Self { pts, origin: lo, cell, nx, ny, buckets }
    }

    fn within(&self, p: [f64; 2], r: f64) -> bool {
        if self.pts.len() == 1 {
            return euclid(&p, &self.pts[0]) <= r;
        }
        let cx = (((p[0] - self.origin[0]) / self.cell).floor().max(0.0) as usize).min(self.nx - 1);
        let cy = (((p[1] - self.origin[1]) / self.cell).floor().max(0.0) as usize).min(self.ny - 1);
        self.buckets[cx * self.ny + cy]
            .iter()
            .any(|&i| point_segment_distance(&p, &self.pts[i], &self.pts[i + 1]) <= r * (1.0 + 1e-12))
    }
}

/// Checks every point of a grid of pitch `r/10` over `region` (boundary
/// included) plus the region's vertices. Returns an uncovered point if any.
fn uncovered_point(index: &SegmentIndex, region: &ElementaryRegion, r: f64) -> Option<[f64; 2]> {
    let h = r / 10.0;
    let (x0, w) = (region.x0(), region.width());
    let cols = (w / h).ceil() as usize;
    let vertex_miss = region.vertices().into_iter().find(|&v| !index.within(v, r));
    if vertex_miss.is_some() {
        return vertex_miss;
    }
    (0..=cols).into_par_iter().find_map_first(|i| {
        let x = (x0 + i as f64 * h).min(x0 + w);
        let (lo, hi) = (region.bottom().eval(x), region.top().eval(x));
        let rows = ((hi - lo) / h).ceil() as usize;
        (0..=rows).map(|j| [x, (lo + j as f64 * h).min(hi)]).find(|&p| !index.within(p, r))
    })
}

fn sweep_positions(x0: f64, a: f64, spacing: f64) -> Vec<f64> {
    if a <= spacing {
        return vec![x0 + a / 2.0];
    }
    let tol = 1e-12 * (1.0 + a);
    let mut xs: Vec<f64> = (0..)
        .map(|j| x0 + spacing * (j as f64 + 0.5))
        .take_while(|&x| x < x0 + a - tol)
        .collect();
    if xs[xs.len() - 1] + spacing / 2.0 < x0 + a - tol {
        xs.push(x0 + a);
    }
    xs
}

fn push_path(out: &mut Vec<[f64; 2]>, path: impl IntoIterator<Item = [f64; 2]>) {
    for p in path {
        if out.last().map_or(true, |q| euclid(q, &p) > 0.0) {
            out.push(p);
        }
    }
}

/// Vertical sweep lines at the given spacing joined along the boundaries,
/// closed by a return trip along the boundary it ends on.
fn sweep_polyline(region: &ElementaryRegion, spacing: f64) -> Vec<[f64; 2]> {
    let xs = sweep_positions(region.x0(), region.width(), spacing);
    let (bot, top) = (region.bottom(), region.top());
    let mut pts = Vec::new();
    for (j, &x) in xs.iter().enumerate() {
        let (lo, hi) = ([x, bot.eval(x)], [x, top.eval(x)]);
        if j % 2 == 0 {
            push_path(&mut pts, [lo, hi]);
        } else {
            push_path(&mut pts, [hi, lo]);
        }
        if let Some(&next) = xs.get(j + 1) {
            let edge = if j % 2 == 0 { top } else { bot };
            push_path(&mut pts, edge.graph_between(x, next));
        }
    }
    let (first, last) = (xs[0], xs[xs.len() - 1]);
    if xs.len() % 2 == 1 {
        push_path(&mut pts, top.graph_between(last, first));
        push_path(&mut pts, [[first, bot.eval(first)]]);
    } else {
        push_path(&mut pts, bot.graph_between(last, first));
    }
    if pts.len() == 1 {
        pts.push(pts[0]);
    }
    pts
}

/// Boustrophedon r-tour of an elementary region. Sweep lines start `2r`
/// apart; if the grid check finds a gap (steep boundaries) the spacing
/// shrinks until the check passes.
pub fn boustrophedon_rtour(region: &ElementaryRegion, r: f64) -> Result<RTour> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("r must be positive"));
    }
    let (lo, hi) = region.bounding_box();
    let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    if region.contains(center) && region.vertices().iter().all(|v| euclid(v, &center) <= r) {
        return RTour::new(vec![center], r);
    }
    let mut spacing = 2.0 * r;
    for attempt in 0..30 {
        let pts = sweep_polyline(region, spacing);
        let index = SegmentIndex::new(&pts, lo, hi, r);
        match uncovered_point(&index, region, r) {
            None => {
                let tour = RTour::new(pts, r)?;
                debug!(
                    "r-tour: r={r}, spacing={spacing}, attempts={}, TV={}, eps={}",
                    attempt + 1,
                    tour.total_variation(),
                    tour.measured_eps(region.area())
                );
                return Ok(tour);
            }
            Some(p) => debug!("spacing {spacing} leaves {p:?} uncovered"),
        }
        spacing *= 0.8;
    }
    let pts = sweep_polyline(region, spacing);
    let index = SegmentIndex::new(&pts, lo, hi, r);
    let p = uncovered_point(&index, region, r).unwrap_or(center);
    Err(Error::CoverageFailed(p[0], p[1]))
}

fn region_tour_start(tour: &RTour) -> [f64; 2] {
    tour.points()[0]
}

/// Connector inside the union from the start of piece `i`'s tour to the
/// start of piece `i + 1`'s tour, running along the bottoms.
fn connector(a: &ElementaryRegion, b: &ElementaryRegion, from: [f64; 2], to: [f64; 2]) -> Vec<[f64; 2]> {
    let x = b.x0();
    let mut pts = vec![from];
    push_path(&mut pts, [[from[0], a.bottom().eval(from[0])]]);
    push_path(&mut pts, a.bottom().graph_between(from[0], x));
    push_path(&mut pts, b.bottom().graph_between(x, to[0]));
    push_path(&mut pts, [to]);
    pts
}

/// r-tour of a union of regions: each piece is toured in turn, linked by
/// connectors travelled out and back.
pub fn simple_space_rtour(space: &SimpleSpace, r: f64) -> Result<SpaceTour> {
    let regions = space.regions();
    let tours = regions.iter().map(|g| boustrophedon_rtour(g, r)).collect::<Result<Vec<_>>>()?;
    if tours.len() == 1 {
        return Ok(SpaceTour { tour: tours[0].clone(), connector_length: 0.0 });
    }
    let links: Vec<Vec<[f64; 2]>> = (0..regions.len() - 1)
        .map(|i| connector(&regions[i], &regions[i + 1], region_tour_start(&tours[i]), region_tour_start(&tours[i + 1])))
        .collect();
    let mut pts = Vec::new();
    for (i, t) in tours.iter().enumerate() {
        push_path(&mut pts, t.points().iter().copied());
        if let Some(l) = links.get(i) {
            push_path(&mut pts, l.iter().copied());
        }
    }
    for l in links.iter().rev() {
        push_path(&mut pts, l.iter().rev().copied());
    }
    let connector_length =
        2.0 * links.iter().map(|l| l.windows(2).map(|w| euclid(&w[0], &w[1])).sum::<f64>()).sum::<f64>();
    let tour = RTour::new(pts, r)?;
    let (mut lo, mut hi) = regions[0].bounding_box();
    for g in regions {
        let (l, h) = g.bounding_box();
        lo = [lo[0].min(l[0]), lo[1].min(l[1])];
        hi = [hi[0].max(h[0]), hi[1].max(h[1])];
    }
    let index = SegmentIndex::new(tour.points(), lo, hi, r);
    for g in regions {
        if let Some(p) = uncovered_point(&index, g, r) {
            return Err(Error::CoverageFailed(p[0], p[1]));
        }
    }
    Ok(SpaceTour { tour, connector_length })
}
