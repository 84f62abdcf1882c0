//! Game instances from presets or JSON files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use patrol_games::trajectory::{ElementaryRegion, SimpleSpace};
use patrol_games::{presets, SearchSpace, SpaceSpec};

pub const PRESETS: &[&str] = &["N1", "N2", "circle", "unit-interval", "cantor", "disc", "unit-square"];

/// Contents of a `--game` file. A game with `m` is a patrolling game,
/// one without is a hiding game.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub space: SpaceSpec,
    pub m: Option<f64>,
    pub r: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    /// Preset name, if any. `N2` unlocks the three-arc results.
    pub preset: Option<String>,
    pub space: SearchSpace,
    pub m: Option<f64>,
    pub r: Option<f64>,
}

impl Instance {
    pub fn is_n2(&self) -> bool {
        self.preset.as_deref() == Some("N2")
    }
}

pub fn preset(name: &str) -> Result<Instance> {
    let space = match name {
        "N1" => SearchSpace::Network(presets::n1()),
        "N2" => SearchSpace::Network(presets::n2()),
        "circle" => SearchSpace::Network(presets::circle(3.0)),
        "unit-interval" => SearchSpace::Interval { lo: 0.0, hi: 1.0 },
        "cantor" => SearchSpace::Cantor { depth: patrol_games::space::DEFAULT_CANTOR_DEPTH },
        "disc" => SearchSpace::Disc { radius: 1.0 },
        "unit-square" => SearchSpace::Region(SimpleSpace::single(ElementaryRegion::unit_square())),
        other => bail!("unknown preset {other:?}; expected one of {}", PRESETS.join(", ")),
    };
    Ok(Instance { preset: Some(name.to_string()), space, m: None, r: None })
}

pub fn load(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: GameFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Instance { preset: None, space: file.space.build()?, m: file.m, r: file.r })
}

/// `a:b:c` is MATLAB-style start, step, stop; a bare number is one value.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number {p:?} in {s:?}")))
        .collect::<Result<_>>()?;
    match parts[..] {
        [v] => Ok(vec![v]),
        [start, step, stop] => {
            if !(step > 0.0) || !(stop >= start) {
                bail!("range {s:?} needs a positive step and start ≤ stop");
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 1_000_000 {
                bail!("range {s:?} has more than a million points");
            }
            // Rounded to 12 digits so `0:0.1:5` prints as 0.3, not 0.30000000000000004.
            Ok((0..=n).map(|i| ((start + step * i as f64) * 1e12).round() / 1e12).collect())
        }
        _ => bail!("expected a number or start:step:stop, got {s:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1.5").unwrap(), vec![1.5]);
        assert_eq!(parse_range("0:0.5:2").unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let r = parse_range("0:0.1:5").unwrap();
        assert_eq!(r.len(), 51);
        assert_eq!(r[3], 0.3);
        assert!(parse_range("1:0:2").is_err());
        assert!(parse_range("a").is_err());
        assert!(parse_range("1:2").is_err());
    }

    #[test]
    fn every_preset_builds() {
        for p in PRESETS {
            preset(p).unwrap();
        }
        assert!(preset("N3").is_err());
    }

    #[test]
    fn game_file() {
        let f: GameFile =
            serde_json::from_str(r#"{"space": {"kind": "interval", "lo": 0, "hi": 2}, "r": 0.25}"#).unwrap();
        assert!(f.m.is_none());
        assert!(matches!(f.space.build().unwrap(), SearchSpace::Interval { hi, .. } if hi == 2.0));
    }
}
