//! Lumped input-impedance model of the patch and its 50 Ω feed.
//!
//! The patch near resonance behaves as a parallel RLC: the input resistance
//! follows the slot conductance and the inset position, the reactance
//! follows a single quality factor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PatchGeometry;

/// Quality factor assumed for a thin low-permittivity patch.
pub const DEFAULT_Q: f64 = 30.0;

/// Floor applied to S11 magnitudes expressed in dB.
pub const S11_FLOOR_DB: f64 = -100.0;

/// Bisection stops once the inset resistance is this close to the target.
pub const MATCH_TOLERANCE_OHM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedKind {
    Edge,
    Inset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedModel {
    pub kind: FeedKind,
    #[serde(rename = "y0_mm")]
    pub inset_depth_mm: f64,
    #[serde(rename = "q")]
    pub resonator_q: f64,
    #[serde(rename = "edge_resistance_ohm")]
    pub edge_resistance_ohm: f64,
}

impl FeedModel {
    /// Feed at the radiating edge of `geo`.
    pub fn edge(geo: &PatchGeometry, resonator_q: f64) -> Result<Self> {
        let feed = FeedModel {
            kind: FeedKind::Edge,
            inset_depth_mm: 0.0,
            resonator_q,
            edge_resistance_ohm: edge_resistance(geo),
        };
        feed.validate(geo)?;
        Ok(feed)
    }

    pub fn validate(&self, geo: &PatchGeometry) -> Result<()> {
        if !(self.resonator_q.is_finite() && self.resonator_q > 0.0) {
            return Err(Error::InvalidInput(format!("Q must be > 0, got {}", self.resonator_q)));
        }
        if !(self.edge_resistance_ohm.is_finite() && self.edge_resistance_ohm > 0.0) {
            return Err(Error::InvalidInput(format!(
                "edge resistance must be > 0 ohm, got {}",
                self.edge_resistance_ohm
            )));
        }
        if !(self.inset_depth_mm >= 0.0 && self.inset_depth_mm < geo.length_mm) {
            return Err(Error::InvalidInput(format!(
                "inset depth {} mm outside [0, {}) mm",
                self.inset_depth_mm, geo.length_mm
            )));
        }
        if self.kind == FeedKind::Edge && self.inset_depth_mm != 0.0 {
            return Err(Error::InvalidInput("edge feed must have y0_mm = 0".into()));
        }
        Ok(())
    }

    /// Resistance seen at the feed point at resonance.
    pub fn input_resistance(&self, geo: &PatchGeometry) -> Result<f64> {
        inset_impedance(self.edge_resistance_ohm, self.inset_depth_mm, geo.length_mm)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("feed serializes")
    }

    pub fn from_json(text: &str, geo: &PatchGeometry) -> Result<Self> {
        let feed: FeedModel = serde_json::from_str(text)?;
        feed.validate(geo)?;
        Ok(feed)
    }
}

/// True when `h/λ0 < 0.1`, the range where the slot model holds.
pub fn is_thin_substrate(geo: &PatchGeometry) -> bool {
    geo.substrate.height_mm / geo.wavelength_mm() < 0.1
}

/// Conductance of one radiating slot, siemens.
pub fn slot_conductance(geo: &PatchGeometry) -> f64 {
    let lambda0 = geo.wavelength_mm();
    let k0h = 2.0 * std::f64::consts::PI / lambda0 * geo.substrate.height_mm;
    geo.width_mm / (120.0 * lambda0) * (1.0 - k0h * k0h / 24.0)
}

/// Input resistance at the radiating edge; mutual slot conductance is ignored.
pub fn edge_resistance(geo: &PatchGeometry) -> f64 {
    1.0 / (2.0 * slot_conductance(geo))
}

/// `edge_r · cos²(π y0 / L)`, valid for `0 ≤ y0 < L/2`.
pub fn inset_impedance(edge_r: f64, y0_mm: f64, length_mm: f64) -> Result<f64> {
    if !(length_mm.is_finite() && length_mm > 0.0) {
        return Err(Error::InvalidInput(format!("patch length must be > 0, got {length_mm}")));
    }
    if !(y0_mm.is_finite() && y0_mm >= 0.0) {
        return Err(Error::InvalidInput(format!("inset depth must be >= 0, got {y0_mm}")));
    }
    if y0_mm >= length_mm / 2.0 {
        return Err(Error::DegenerateInput(format!(
            "inset depth {y0_mm} mm is past the patch midpoint {} mm",
            length_mm / 2.0
        )));
    }
    let c = (std::f64::consts::PI * y0_mm / length_mm).cos();
    Ok(edge_r * c * c)
}

/// Finds the inset depth that presents `target_ohm` at resonance.
pub fn match_feed(geo: &PatchGeometry, target_ohm: f64, resonator_q: f64) -> Result<FeedModel> {
    if !(target_ohm.is_finite() && target_ohm > 0.0) {
        return Err(Error::InvalidInput(format!("target impedance must be > 0, got {target_ohm}")));
    }
    let edge = edge_resistance(geo);
    if (target_ohm - edge).abs() < MATCH_TOLERANCE_OHM {
        return FeedModel::edge(geo, resonator_q);
    }
    if target_ohm > edge {
        return Err(Error::Unmatchable {
            target_ohm,
            edge_ohm: edge,
        });
    }

    let length = geo.length_mm;
    let residual = |y0: f64| edge * (std::f64::consts::PI * y0 / length).cos().powi(2) - target_ohm;
    // residual is strictly decreasing on [0, L/2]: positive at 0, -target at L/2.
    let (mut lo, mut hi) = (0.0, length / 2.0);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let r = residual(mid);
        if r.abs() < MATCH_TOLERANCE_OHM {
            break;
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let feed = FeedModel {
        kind: FeedKind::Inset,
        inset_depth_mm: mid,
        resonator_q,
        edge_resistance_ohm: edge,
    };
    feed.validate(geo)?;
    Ok(feed)
}

/// Parallel-resonator input impedance at `f_hz`.
pub fn input_impedance(feed: &FeedModel, geo: &PatchGeometry, f_hz: f64) -> Result<Complex64> {
    if !(f_hz.is_finite() && f_hz > 0.0) {
        return Err(Error::InvalidInput(format!("frequency must be > 0 Hz, got {f_hz}")));
    }
    let rin = feed.input_resistance(geo)?;
    let f0 = geo.resonant_frequency();
    let detuning = feed.resonator_q * (f_hz / f0 - f0 / f_hz);
    Ok(Complex64::new(rin, 0.0) / Complex64::new(1.0, detuning))
}

/// Reflection coefficient of `zin` against a real reference `z0`.
pub fn reflection(zin: Complex64, z0: f64) -> Complex64 {
    (zin - z0) / (zin + z0)
}

/// `20 log10 |Γ|`, floored at [`S11_FLOOR_DB`].
pub fn s11_db(gamma: Complex64) -> f64 {
    let mag = gamma.norm();
    if mag == 0.0 {
        return S11_FLOOR_DB;
    }
    (20.0 * mag.log10()).max(S11_FLOOR_DB)
}

/// `-20 log10 |Γ|`, capped at `-S11_FLOOR_DB`.
pub fn return_loss_db(gamma: Complex64) -> f64 {
    -s11_db(gamma)
}

/// S11 versus frequency at a fixed reference impedance.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    pub ref_impedance_ohm: f64,
    pub points: Vec<(f64, Complex64)>,
}

impl FrequencyResponse {
    pub fn new(ref_impedance_ohm: f64, points: Vec<(f64, Complex64)>) -> Result<Self> {
        if !(ref_impedance_ohm.is_finite() && ref_impedance_ohm > 0.0) {
            return Err(Error::InvalidInput(format!(
                "reference impedance must be > 0, got {ref_impedance_ohm}"
            )));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidRange("frequencies must be strictly increasing".into()));
        }
        if let Some((f, s)) = points.iter().find(|(_, s)| !(s.norm() <= 1.0 + 1e-12)) {
            return Err(Error::InvalidInput(format!("|S11| = {} > 1 at {f} Hz", s.norm())));
        }
        Ok(FrequencyResponse {
            ref_impedance_ohm,
            points,
        })
    }

    /// Frequency and S11 (dB) of the deepest point; first one wins on ties.
    pub fn minimum(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for &(f, s) in &self.points {
            let mag = s.norm();
            if best.is_none_or(|(_, m)| mag < m) {
                best = Some((f, mag));
            }
        }
        best.map(|(f, m)| (f, s11_db(Complex64::new(m, 0.0))))
    }

    /// Band edges where S11 crosses `threshold_db` around the minimum, by
    /// linear interpolation in dB. `None` if either edge lies outside the sweep.
    pub fn bandwidth(&self, threshold_db: f64) -> Option<(f64, f64)> {
        let db: Vec<f64> = self.points.iter().map(|&(_, s)| s11_db(s)).collect();
        let freqs: Vec<f64> = self.points.iter().map(|&(f, _)| f).collect();
        let (imin, _) = db
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))?;
        if db[imin] > threshold_db {
            return None;
        }
        let crossing = |a: usize, b: usize| {
            let t = (threshold_db - db[a]) / (db[b] - db[a]);
            freqs[a] + t * (freqs[b] - freqs[a])
        };
        let lo = (0..imin).rev().find(|&i| db[i] > threshold_db).map(|i| crossing(i + 1, i))?;
        let hi = (imin + 1..db.len()).find(|&i| db[i] > threshold_db).map(|i| crossing(i - 1, i))?;
        Some((lo, hi))
    }
}

/// Uniform frequency grid from `f_start` to `f_stop` inclusive.
pub fn frequency_grid(f_start: f64, f_stop: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(f_start.is_finite() && f_stop.is_finite() && f_start > 0.0) {
        return Err(Error::InvalidRange(format!("bad frequency bounds {f_start}..{f_stop}")));
    }
    if !(f_start < f_stop) {
        return Err(Error::InvalidRange(format!("start {f_start} Hz is not below stop {f_stop} Hz")));
    }
    if n_points < 2 {
        return Err(Error::InvalidRange(format!("need at least 2 points, got {n_points}")));
    }
    let step = (f_stop - f_start) / (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| if i + 1 == n_points { f_stop } else { f_start + step * i as f64 })
        .collect())
}

pub fn s11_sweep(
    feed: &FeedModel,
    geo: &PatchGeometry,
    f_start: f64,
    f_stop: f64,
    n_points: usize,
    z0: f64,
) -> Result<FrequencyResponse> {
    feed.validate(geo)?;
    let freqs = frequency_grid(f_start, f_stop, n_points)?;
    let points = freqs
        .into_iter()
        .map(|f| Ok((f, reflection(input_impedance(feed, geo, f)?, z0))))
        .collect::<Result<Vec<_>>>()?;
    FrequencyResponse::new(z0, points)
}
