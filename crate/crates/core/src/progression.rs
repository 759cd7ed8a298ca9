//! Single element through 8x8: model gain against published full-wave figures.

use serde::{Deserialize, Serialize};

use crate::array::{array_metrics, ArrayLayout};
use crate::circuit::{match_feed, s11_sweep, DEFAULT_Q};
use crate::error::Result;
use crate::geometry::{PatchGeometry, DEFAULT_Z0_OHM};
use crate::radiation::{AngularGrid, Obliquity};

/// Published full-wave gains of the 29 GHz design, by array side length.
pub const REFERENCE_GAINS_DB: [(usize, f64); 4] = [(1, 7.046), (2, 12.9), (4, 18.7), (8, 21.0)];

/// Rows whose model/reference gap exceeds this are flagged.
pub const FLAG_THRESHOLD_DB: f64 = 1.5;

/// Spacing used for every configuration, free-space wavelengths.
pub const PROGRESSION_SPACING_LAMBDA: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct ProgressionOptions {
    pub efficiency: f64,
    pub q: f64,
    pub z0_ohm: f64,
    pub grid: AngularGrid,
    pub obliquity: Obliquity,
}

impl Default for ProgressionOptions {
    fn default() -> Self {
        ProgressionOptions {
            efficiency: 1.0,
            q: DEFAULT_Q,
            z0_ohm: DEFAULT_Z0_OHM,
            grid: AngularGrid::default(),
            obliquity: Obliquity::Off,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressionRow {
    pub config: String,
    pub model_gain_dbi: f64,
    pub reference_gain_db: f64,
    pub delta_db: f64,
    pub model_s11_min_db: f64,
    pub flagged: bool,
}

pub fn progression(geo: &PatchGeometry, opts: &ProgressionOptions) -> Result<Vec<ProgressionRow>> {
    // identical matched elements without coupling: one S11 serves every row
    let feed = match_feed(geo, opts.z0_ohm, opts.q)?;
    let f0 = geo.f0_hz;
    let sweep = s11_sweep(&feed, geo, f0 * 27.0 / 29.0, f0 * 31.0 / 29.0, 401, opts.z0_ohm)?;
    let (_, s11_min) = sweep.minimum().expect("sweep has points");

    REFERENCE_GAINS_DB
        .iter()
        .map(|&(n, reference)| {
            let layout = ArrayLayout::uniform(n, n, PROGRESSION_SPACING_LAMBDA, PROGRESSION_SPACING_LAMBDA)?;
            let metrics = array_metrics(geo, &layout, opts.grid, opts.efficiency, opts.obliquity)?;
            let delta = metrics.gain_dbi - reference;
            Ok(ProgressionRow {
                config: format!("{n}x{n}"),
                model_gain_dbi: metrics.gain_dbi,
                reference_gain_db: reference,
                delta_db: delta,
                model_s11_min_db: s11_min,
                flagged: delta.abs() > FLAG_THRESHOLD_DB,
            })
        })
        .collect()
}

pub fn format_table(rows: &[ProgressionRow]) -> String {
    let mut out = format!(
        "{:<6} {:>14} {:>17} {:>9} {:>16}  {}\n",
        "config", "model_gain_dbi", "reference_gain_db", "delta_db", "model_s11_min_db", "flag"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<6} {:>14.3} {:>17.3} {:>+9.3} {:>16.2}  {}\n",
            r.config,
            r.model_gain_dbi,
            r.reference_gain_db,
            r.delta_db,
            r.model_s11_min_db,
            if r.flagged { "*" } else { "" }
        ));
    }
    out
}

pub fn to_json(rows: &[ProgressionRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

pub fn from_json(text: &str) -> Result<Vec<ProgressionRow>> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{design_patch, DesignSpec, Substrate};

    #[test]
    fn table_shape() {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        let rows = progression(&geo, &ProgressionOptions::default()).unwrap();
        let reference: Vec<f64> = rows.iter().map(|r| r.reference_gain_db).collect();
        assert_eq!(reference, [7.046, 12.9, 18.7, 21.0]);
        assert!(rows.windows(2).all(|w| w[1].model_gain_dbi > w[0].model_gain_dbi));
        assert!(rows.iter().all(|r| r.model_s11_min_db <= -60.0));
        let configs: Vec<&str> = rows.iter().map(|r| r.config.as_str()).collect();
        assert_eq!(configs, ["1x1", "2x2", "4x4", "8x8"]);

        let table = format_table(&rows);
        assert_eq!(table.lines().count(), 5);
        assert_eq!(from_json(&to_json(&rows)).unwrap(), rows);
    }
}
