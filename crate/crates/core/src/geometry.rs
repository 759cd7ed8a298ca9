//! Transmission-line sizing of a rectangular microstrip patch.
//!
//! All lengths are millimetres and all frequencies hertz. The patch lies in
//! the xy-plane with its resonant length along x and its width along y.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default design frequency, Hz.
pub const DEFAULT_F0_HZ: f64 = 29.0e9;

/// Default reference impedance, ohm.
pub const DEFAULT_Z0_OHM: f64 = 50.0;

/// Half of the free-space wavelength at `f_hz`, in millimetres.
fn half_wavelength_mm(f_hz: f64) -> f64 {
    SPEED_OF_LIGHT / (2.0 * f_hz) * 1e3
}

/// Free-space wavelength at `f_hz`, in millimetres.
pub fn wavelength_mm(f_hz: f64) -> f64 {
    SPEED_OF_LIGHT / f_hz * 1e3
}

/// Dielectric board the patch is etched on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Substrate {
    #[serde(rename = "eps_r")]
    pub epsilon_r: f64,
    #[serde(rename = "h_mm")]
    pub height_mm: f64,
    #[serde(rename = "tan_d")]
    pub loss_tangent: f64,
    pub label: String,
}

impl Substrate {
    pub fn new(epsilon_r: f64, height_mm: f64, loss_tangent: f64, label: impl Into<String>) -> Result<Self> {
        let sub = Substrate {
            epsilon_r,
            height_mm,
            loss_tangent,
            label: label.into(),
        };
        sub.validate()?;
        Ok(sub)
    }

    /// PTFE/glass-microfibre laminate, 0.784 mm.
    pub fn rt_duroid_5880() -> Self {
        Substrate {
            epsilon_r: 2.2,
            height_mm: 0.784,
            loss_tangent: 0.0009,
            label: "RT/duroid 5880".to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_r.is_finite() && self.epsilon_r >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "relative permittivity must be >= 1, got {}",
                self.epsilon_r
            )));
        }
        if !(self.height_mm.is_finite() && self.height_mm > 0.0) {
            return Err(Error::InvalidInput(format!(
                "substrate height must be > 0 mm, got {}",
                self.height_mm
            )));
        }
        if !(self.loss_tangent.is_finite() && self.loss_tangent >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "loss tangent must be >= 0, got {}",
                self.loss_tangent
            )));
        }
        Ok(())
    }
}

impl Default for Substrate {
    fn default() -> Self {
        Self::rt_duroid_5880()
    }
}

/// Closed form used for the patch width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthFormula {
    /// `W = c / (2 f) * sqrt(2 / (εr + 1))`, the width for efficient radiation.
    #[default]
    Standard,
    /// `W = c / (2 f sqrt(εr))`.
    Simplified,
}

impl std::str::FromStr for WidthFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(WidthFormula::Standard),
            "simplified" => Ok(WidthFormula::Simplified),
            other => Err(Error::InvalidInput(format!("unknown width formula '{other}'"))),
        }
    }
}

/// Target operating point of a design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpec {
    pub f0_hz: f64,
    pub width_formula: WidthFormula,
    pub z0_ohm: f64,
}

impl DesignSpec {
    pub fn new(f0_hz: f64) -> Result<Self> {
        let spec = DesignSpec {
            f0_hz,
            ..Default::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_width_formula(mut self, width_formula: WidthFormula) -> Self {
        self.width_formula = width_formula;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f0_hz.is_finite() && self.f0_hz > 0.0) {
            return Err(Error::InvalidInput(format!(
                "design frequency must be > 0 Hz, got {}",
                self.f0_hz
            )));
        }
        if !(self.z0_ohm.is_finite() && self.z0_ohm > 0.0) {
            return Err(Error::InvalidInput(format!(
                "reference impedance must be > 0 ohm, got {}",
                self.z0_ohm
            )));
        }
        Ok(())
    }
}

impl Default for DesignSpec {
    fn default() -> Self {
        DesignSpec {
            f0_hz: DEFAULT_F0_HZ,
            width_formula: WidthFormula::Standard,
            z0_ohm: DEFAULT_Z0_OHM,
        }
    }
}

/// Fully sized patch and ground plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchGeometry {
    pub f0_hz: f64,
    #[serde(rename = "w_mm")]
    pub width_mm: f64,
    #[serde(rename = "l_mm")]
    pub length_mm: f64,
    pub eps_eff: f64,
    #[serde(rename = "dl_mm")]
    pub length_extension_mm: f64,
    #[serde(rename = "leff_mm")]
    pub eff_length_mm: f64,
    #[serde(rename = "lg_mm")]
    pub ground_length_mm: f64,
    #[serde(rename = "wg_mm")]
    pub ground_width_mm: f64,
    pub substrate: Substrate,
    pub width_formula: WidthFormula,
}

/// Patch width for the given design frequency and substrate.
pub fn effective_width(spec: &DesignSpec, sub: &Substrate) -> Result<f64> {
    spec.validate()?;
    sub.validate()?;
    let half = half_wavelength_mm(spec.f0_hz);
    Ok(match spec.width_formula {
        WidthFormula::Standard => half * (2.0 / (sub.epsilon_r + 1.0)).sqrt(),
        WidthFormula::Simplified => half / sub.epsilon_r.sqrt(),
    })
}

/// Effective permittivity of a microstrip of width `width_mm` (Hammerstad, W/h ≥ 1 form).
pub fn effective_permittivity(sub: &Substrate, width_mm: f64) -> Result<f64> {
    sub.validate()?;
    positive("patch width", width_mm)?;
    let er = sub.epsilon_r;
    let correction = (1.0 + 12.0 * sub.height_mm / width_mm).powf(-0.5);
    Ok((er + 1.0) / 2.0 + (er - 1.0) / 2.0 * correction)
}

/// Electrical length of a half-wave resonator at `f0_hz`.
pub fn effective_length(f0_hz: f64, eps_eff: f64) -> Result<f64> {
    positive("frequency", f0_hz)?;
    if !(eps_eff.is_finite() && eps_eff >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "effective permittivity must be >= 1, got {eps_eff}"
        )));
    }
    Ok(half_wavelength_mm(f0_hz) / eps_eff.sqrt())
}

/// Fringing-field extension of each radiating edge.
pub fn length_extension(sub: &Substrate, width_mm: f64, eps_eff: f64) -> Result<f64> {
    sub.validate()?;
    positive("patch width", width_mm)?;
    if !eps_eff.is_finite() {
        return Err(Error::InvalidInput("effective permittivity is not finite".into()));
    }
    if eps_eff <= 0.258 {
        return Err(Error::DegenerateInput(format!(
            "effective permittivity {eps_eff} is at or below the 0.258 pole of the extension formula"
        )));
    }
    let h = sub.height_mm;
    let aspect = width_mm / h;
    Ok(0.412 * h * ((eps_eff + 0.3) * (aspect + 0.264)) / ((eps_eff - 0.258) * (aspect + 0.8)))
}

/// Sizes a patch for `spec` on `sub`.
pub fn design_patch(spec: &DesignSpec, sub: &Substrate) -> Result<PatchGeometry> {
    let width_mm = effective_width(spec, sub)?;
    let eps_eff = effective_permittivity(sub, width_mm)?;
    let eff_length_mm = effective_length(spec.f0_hz, eps_eff)?;
    let length_extension_mm = length_extension(sub, width_mm, eps_eff)?;
    let length_mm = eff_length_mm - 2.0 * length_extension_mm;
    if !(length_mm > 0.0) {
        return Err(Error::NonPhysicalGeometry(format!(
            "fringing correction {length_extension_mm} mm per edge exceeds half the effective length {eff_length_mm} mm"
        )));
    }
    let margin = 6.0 * sub.height_mm;
    Ok(PatchGeometry {
        f0_hz: spec.f0_hz,
        width_mm,
        length_mm,
        eps_eff,
        length_extension_mm,
        eff_length_mm,
        ground_length_mm: margin + length_mm,
        ground_width_mm: margin + width_mm,
        substrate: sub.clone(),
        width_formula: spec.width_formula,
    })
}

impl PatchGeometry {
    /// Half-wave resonance of the physical patch including fringing.
    pub fn resonant_frequency(&self) -> f64 {
        let radiating_length_m = (self.length_mm + 2.0 * self.length_extension_mm) * 1e-3;
        SPEED_OF_LIGHT / (2.0 * radiating_length_m * self.eps_eff.sqrt())
    }

    /// `L + 2ΔL`, the separation of the two radiating slots.
    pub fn radiating_length_mm(&self) -> f64 {
        self.length_mm + 2.0 * self.length_extension_mm
    }

    pub fn wavelength_mm(&self) -> f64 {
        wavelength_mm(self.f0_hz)
    }

    /// Checks every invariant; used on geometries read back from disk.
    pub fn validate(&self) -> Result<()> {
        self.substrate.validate()?;
        positive("design frequency", self.f0_hz)?;
        for (name, v) in [
            ("w_mm", self.width_mm),
            ("l_mm", self.length_mm),
            ("dl_mm", self.length_extension_mm),
            ("leff_mm", self.eff_length_mm),
            ("lg_mm", self.ground_length_mm),
            ("wg_mm", self.ground_width_mm),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPhysicalGeometry(format!("{name} must be > 0, got {v}")));
            }
        }
        let tol = 1e-9 * self.eff_length_mm.max(1.0);
        if (self.length_mm - (self.eff_length_mm - 2.0 * self.length_extension_mm)).abs() > tol {
            return Err(Error::NonPhysicalGeometry("l_mm != leff_mm - 2 dl_mm".into()));
        }
        if !(self.eps_eff >= 1.0 && self.eps_eff <= self.substrate.epsilon_r + 1e-12) {
            return Err(Error::NonPhysicalGeometry(format!(
                "eps_eff {} outside [1, eps_r]",
                self.eps_eff
            )));
        }
        let margin = 6.0 * self.substrate.height_mm;
        if (self.ground_length_mm - (margin + self.length_mm)).abs() > tol
            || (self.ground_width_mm - (margin + self.width_mm)).abs() > tol
        {
            return Err(Error::NonPhysicalGeometry("ground plane != 6h + patch".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("geometry serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let geo: PatchGeometry = serde_json::from_str(text)?;
        geo.validate()?;
        Ok(geo)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sub(er: f64, h: f64) -> Substrate {
        Substrate::new(er, h, 0.0, "test").unwrap()
    }

    fn spec(f0: f64, formula: WidthFormula) -> DesignSpec {
        DesignSpec::new(f0).unwrap().with_width_formula(formula)
    }

    #[test]
    fn width_variants() {
        let s = sub(2.2, 0.784);
        let w = effective_width(&spec(29e9, WidthFormula::Standard), &s).unwrap();
        assert_relative_eq!(w, 4.086323244053307, max_relative = 1e-12);
        let w = effective_width(&spec(29e9, WidthFormula::Simplified), &s).unwrap();
        assert_relative_eq!(w, 3.4848281715709875, max_relative = 1e-12);

        let air = sub(1.0, 0.784);
        for formula in [WidthFormula::Standard, WidthFormula::Simplified] {
            let w = effective_width(&spec(29e9, formula), &air).unwrap();
            assert_relative_eq!(w, 5.16883548275862, max_relative = 1e-12);
        }
    }

    #[test]
    fn permittivity_limits() {
        let eps = effective_permittivity(&sub(2.2, 0.784), 4.086323244053307).unwrap();
        assert_relative_eq!(eps, 1.9301733794085612, max_relative = 1e-12);
        assert_eq!(effective_permittivity(&sub(1.0, 3.0), 0.2).unwrap(), 1.0);
        let thin = effective_permittivity(&sub(2.2, 1e-12), 4.0).unwrap();
        assert_relative_eq!(thin, 2.2, max_relative = 1e-6);
    }

    #[test]
    fn effective_length_scaling() {
        assert_relative_eq!(effective_length(29e9, 1.9303).unwrap(), 3.720320060707513, max_relative = 1e-12);
        assert_relative_eq!(effective_length(29e9, 1.0).unwrap(), 5.16883548275862, max_relative = 1e-12);
        assert_relative_eq!(effective_length(14.5e9, 1.9303).unwrap(), 7.440640121415026, max_relative = 1e-12);
        assert!(effective_length(29e9, 0.9).is_err());
    }

    #[test]
    fn extension_values() {
        let dl = length_extension(&sub(2.2, 0.784), 4.086323244053307, 1.9301733794085612).unwrap();
        assert_relative_eq!(dl, 0.3923883528349555, max_relative = 1e-12);
        let dl = length_extension(&sub(2.2, 0.784), 0.784, 2.0).unwrap();
        assert_relative_eq!(dl, 0.2994797989539482, max_relative = 1e-12);
        let dl = length_extension(&sub(2.2, 1e-9), 4.0, 1.9).unwrap();
        assert!(dl < 1e-6);
    }

    #[test]
    fn extension_pole_rejected() {
        let err = length_extension(&sub(2.2, 0.784), 4.0, 0.258).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn default_design() {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        assert_relative_eq!(geo.width_mm, 4.086323244053307, max_relative = 1e-12);
        assert_relative_eq!(geo.length_mm, 2.9356653807079636, max_relative = 1e-12);
        assert_relative_eq!(geo.ground_length_mm, 7.639665380707964, max_relative = 1e-12);
        assert_relative_eq!(geo.ground_width_mm, 8.790323244053308, max_relative = 1e-12);
        geo.validate().unwrap();
        assert_relative_eq!(geo.resonant_frequency(), 29e9, max_relative = 1e-9);
    }

    #[test]
    fn free_space_limit_is_square() {
        let geo = design_patch(&spec(29e9, WidthFormula::Standard), &sub(1.0, 1e-9)).unwrap();
        assert_relative_eq!(geo.width_mm, 5.16883548275862, max_relative = 1e-9);
        assert_relative_eq!(geo.length_mm, 5.16883548275862, max_relative = 1e-6);
    }

    #[test]
    fn high_permittivity_round_trip() {
        let s = sub(10.2, 0.635);
        let geo = design_patch(&spec(29e9, WidthFormula::Standard), &s).unwrap();
        assert_relative_eq!(geo.width_mm, 2.184231650122587, max_relative = 1e-12);
        assert_relative_eq!(geo.eps_eff, 7.7712028360741705, max_relative = 1e-12);
        assert_relative_eq!(geo.resonant_frequency(), 29e9, max_relative = 1e-3);
    }

    #[test]
    fn half_frequency_round_trip() {
        let geo = design_patch(&spec(14.5e9, WidthFormula::Standard), &Substrate::default()).unwrap();
        assert_relative_eq!(geo.resonant_frequency(), 14.5e9, max_relative = 1e-9);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(DesignSpec::new(0.0).is_err());
        assert!(DesignSpec::new(-1.0).is_err());
        assert!(Substrate::new(0.5, 0.784, 0.0, "").is_err());
        assert!(Substrate::new(2.2, 0.0, 0.0, "").is_err());
        assert!(Substrate::new(2.2, 0.7, -0.1, "").is_err());
        assert!(Substrate::new(f64::NAN, 0.7, 0.0, "").is_err());
    }

    #[test]
    fn json_keys_and_round_trip() {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        let text = geo.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["f0_hz", "w_mm", "l_mm", "eps_eff", "dl_mm", "leff_mm", "lg_mm", "wg_mm", "width_formula"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["eps_r", "h_mm", "tan_d", "label"] {
            assert!(v["substrate"].get(key).is_some(), "missing substrate.{key}");
        }
        assert_eq!(v["width_formula"], "standard");
        assert_eq!(PatchGeometry::from_json(&text).unwrap(), geo);
    }

    #[test]
    fn tampered_json_rejected() {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&geo.to_json()).unwrap();
        v["l_mm"] = serde_json::json!(3.5);
        assert!(PatchGeometry::from_json(&v.to_string()).is_err());
    }
}
