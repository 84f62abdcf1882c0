//! Browser bindings for the static page in `www/`. Every export returns a
//! JSON string; the page parses it and draws on a canvas.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use patrol_games::hiding::{cantor_value, unit_interval_value};
use patrol_games::patrol::{simple_space_value_estimate, three_arc_bounds, value_upper_bound, PatrolGame};
use patrol_games::trajectory::{simple_space_rtour, ElementaryRegion, SimpleSpace};
use patrol_games::{presets, SearchSpace};

#[derive(Debug, Serialize)]
pub struct BoundsRow {
    pub m: f64,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    /// The general `min(1, m/λ)` bound.
    pub upper_bound: f64,
}

#[derive(Debug, Serialize)]
pub struct HidingRow {
    pub r: f64,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct SquareTour {
    pub r: f64,
    pub m: f64,
    pub points: Vec<[f64; 2]>,
    pub tour_length: f64,
    pub lower: f64,
    pub upper: f64,
}

fn grid(lo: f64, hi: f64, steps: u32) -> patrol_games::Result<Vec<f64>> {
    if steps == 0 || !(hi >= lo) {
        return Err(patrol_games::Error::InvalidArgument("need steps > 0 and lo ≤ hi".into()));
    }
    Ok((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect())
}

pub fn three_arc_rows(m_max: f64, steps: u32) -> patrol_games::Result<Vec<BoundsRow>> {
    let n2 = presets::n2();
    grid(0.0, m_max, steps)?
        .into_iter()
        .map(|m| {
            let b = three_arc_bounds(m)?;
            let upper_bound = value_upper_bound(&PatrolGame::new(SearchSpace::Network(n2.clone()), m, 0.0)?)?;
            Ok(BoundsRow { m, lower: b.lower, upper: b.upper, exact: b.exact, upper_bound })
        })
        .collect()
}

pub fn hiding_rows(space: &str, r_min: f64, r_max: f64, steps: u32) -> patrol_games::Result<Vec<HidingRow>> {
    let f: fn(f64) -> patrol_games::Result<f64> = match space {
        "unit-interval" => |r| Ok(unit_interval_value(r)?.value),
        "cantor" => cantor_value,
        other => return Err(patrol_games::Error::InvalidArgument(format!("unknown space {other:?}"))),
    };
    grid(r_min, r_max, steps)?.into_iter().map(|r| Ok(HidingRow { r, value: f(r)? })).collect()
}

pub fn square_tour_data(r: f64, m: f64) -> patrol_games::Result<SquareTour> {
    let sq = SimpleSpace::single(ElementaryRegion::unit_square());
    let tour = simple_space_rtour(&sq, r)?;
    let e = simple_space_value_estimate(&sq, m, r, None)?;
    Ok(SquareTour {
        r,
        m,
        points: tour.tour.points().to_vec(),
        tour_length: e.total_variation,
        lower: e.lower,
        upper: e.upper,
    })
}

fn js<T: Serialize>(v: patrol_games::Result<T>) -> Result<String, JsError> {
    let v = v.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Lower and upper bounds on the three-arc network for `m` in `[0, m_max]`.
#[wasm_bindgen]
pub fn three_arc_curve(m_max: f64, steps: u32) -> Result<String, JsError> {
    js(three_arc_rows(m_max, steps))
}

/// Hiding value on `"unit-interval"` or `"cantor"` for `r` in `[r_min, r_max]`.
#[wasm_bindgen]
pub fn hiding_curve(space: &str, r_min: f64, r_max: f64, steps: u32) -> Result<String, JsError> {
    js(hiding_rows(space, r_min, r_max, steps))
}

/// The r-tour of the unit square and the value bracket it gives.
#[wasm_bindgen]
pub fn square_tour(r: f64, m: f64) -> Result<String, JsError> {
    js(square_tour_data(r, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_arc_curve_matches_bounds() {
        let rows = three_arc_rows(5.0, 50).unwrap();
        assert_eq!(rows.len(), 51);
        let at3 = &rows[30];
        assert!((at3.m - 3.0).abs() < 1e-12);
        assert!((at3.lower - 13.0 / 15.0).abs() < 1e-12 && (at3.upper - 11.0 / 12.0).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.lower <= r.upper && r.upper <= r.upper_bound + 1e-15));
    }

    #[test]
    fn hiding_curves() {
        let rows = hiding_rows("unit-interval", 0.1, 0.5, 4).unwrap();
        let vals: Vec<f64> = rows.iter().map(|r| r.value).collect();
        assert_eq!(vals, vec![0.2, 1.0 / 3.0, 0.5, 0.5, 1.0]);
        let c = hiding_rows("cantor", 0.25, 0.75, 2).unwrap();
        assert_eq!(c.iter().map(|r| r.value).collect::<Vec<_>>(), vec![0.5, 0.5, 1.0]);
        assert!(hiding_rows("disc", 0.1, 0.2, 1).is_err());
    }

    #[test]
    fn square_tour_covers_and_brackets() {
        let t = square_tour_data(0.125, 1.0).unwrap();
        assert!(t.points.len() > 4);
        assert!(t.lower <= t.upper);
        assert!(t.points.iter().all(|p| (0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1])));
    }
}
