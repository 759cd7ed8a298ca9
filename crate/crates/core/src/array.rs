//! Uniform planar arrays of identical patches: array factor, progressive-phase
//! steering and pattern multiplication.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PatchGeometry;
use crate::radiation::{
    directivity_dbi, gain_dbi, hpbw, sidelobe_level_db, AngularGrid, Cut, ElementPattern, FarFieldPattern,
    Obliquity,
};

/// Beamwidth reported when the pattern never falls to half power.
pub const NO_CROSSING_HPBW_DEG: f64 = 180.0;

/// `nx × ny` grid of elements in the xy-plane.
///
/// Excitations are row-major: element `(m, n)` at `(m·dx, n·dy)` is entry
/// `n·nx + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayLayout {
    pub nx: usize,
    pub ny: usize,
    pub dx_lambda: f64,
    pub dy_lambda: f64,
    pub excitations: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct ExcitationRepr {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct LayoutRepr {
    nx: usize,
    ny: usize,
    dx_lambda: f64,
    dy_lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    excitations: Option<Vec<ExcitationRepr>>,
}

impl ArrayLayout {
    pub fn uniform(nx: usize, ny: usize, dx_lambda: f64, dy_lambda: f64) -> Result<Self> {
        Self::new(nx, ny, dx_lambda, dy_lambda, vec![Complex64::new(1.0, 0.0); nx * ny])
    }

    pub fn new(nx: usize, ny: usize, dx_lambda: f64, dy_lambda: f64, excitations: Vec<Complex64>) -> Result<Self> {
        let layout = ArrayLayout {
            nx,
            ny,
            dx_lambda,
            dy_lambda,
            excitations,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidInput(format!(
                "element counts must be >= 1, got {}x{}",
                self.nx, self.ny
            )));
        }
        for (name, d) in [("dx_lambda", self.dx_lambda), ("dy_lambda", self.dy_lambda)] {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be > 0, got {d}")));
            }
        }
        if self.excitations.len() != self.nx * self.ny {
            return Err(Error::InvalidInput(format!(
                "{} excitations for a {}x{} layout",
                self.excitations.len(),
                self.nx,
                self.ny
            )));
        }
        if self.excitations.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidInput("excitations must be finite".into()));
        }
        Ok(())
    }

    pub fn excitation(&self, m: usize, n: usize) -> Complex64 {
        self.excitations[n * self.nx + m]
    }

    /// Total input power `Σ|a|²`.
    pub fn input_power(&self) -> f64 {
        self.excitations.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies progressive phase toward `(θ0, φ0)` on top of the current amplitudes.
    pub fn steer(&mut self, theta0_deg: f64, phi0_deg: f64) -> Result<()> {
        let phases = steering_phases(self, theta0_deg, phi0_deg)?;
        for (a, p) in self.excitations.iter_mut().zip(phases) {
            *a *= p;
        }
        Ok(())
    }

    /// Same elements with the x and y axes exchanged.
    pub fn transposed(&self) -> Self {
        let mut excitations = Vec::with_capacity(self.excitations.len());
        for m in 0..self.nx {
            for n in 0..self.ny {
                excitations.push(self.excitation(m, n));
            }
        }
        ArrayLayout {
            nx: self.ny,
            ny: self.nx,
            dx_lambda: self.dy_lambda,
            dy_lambda: self.dx_lambda,
            excitations,
        }
    }

    pub fn to_json(&self) -> String {
        let repr = LayoutRepr {
            nx: self.nx,
            ny: self.ny,
            dx_lambda: self.dx_lambda,
            dy_lambda: self.dy_lambda,
            excitations: Some(
                self.excitations
                    .iter()
                    .map(|a| ExcitationRepr { re: a.re, im: a.im })
                    .collect(),
            ),
        };
        serde_json::to_string_pretty(&repr).expect("layout serializes")
    }

    /// Parses `{nx, ny, dx_lambda, dy_lambda, excitations?: [{re, im}]}`;
    /// missing excitations mean uniform in-phase feeding.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: LayoutRepr = serde_json::from_str(text)?;
        let excitations = match repr.excitations {
            Some(list) => list.into_iter().map(|e| Complex64::new(e.re, e.im)).collect(),
            None => vec![Complex64::new(1.0, 0.0); repr.nx * repr.ny],
        };
        Self::new(repr.nx, repr.ny, repr.dx_lambda, repr.dy_lambda, excitations)
    }
}

fn direction_cosines(theta_deg: f64, phi_deg: f64) -> (f64, f64) {
    let st = theta_deg.to_radians().sin();
    let (sp, cp) = phi_deg.to_radians().sin_cos();
    (st * cp, st * sp)
}

/// Array factor at `(θ, φ)`; the reference element sits at the origin.
pub fn array_factor(layout: &ArrayLayout, theta_deg: f64, phi_deg: f64) -> Complex64 {
    let (ux, uy) = direction_cosines(theta_deg, phi_deg);
    let px = 2.0 * PI * layout.dx_lambda * ux;
    let py = 2.0 * PI * layout.dy_lambda * uy;
    let xs: Vec<Complex64> = (0..layout.nx).map(|m| Complex64::cis(px * m as f64)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (n, row) in layout.excitations.chunks_exact(layout.nx).enumerate() {
        let row_sum: Complex64 = row.iter().zip(&xs).map(|(a, x)| a * x).sum();
        total += row_sum * Complex64::cis(py * n as f64);
    }
    total
}

/// Unit-magnitude excitations that put the main beam at `(θ0, φ0)`.
pub fn steering_phases(layout: &ArrayLayout, theta0_deg: f64, phi0_deg: f64) -> Result<Vec<Complex64>> {
    if !(0.0..=90.0).contains(&theta0_deg) || !phi0_deg.is_finite() {
        return Err(Error::InvalidInput(format!(
            "scan direction ({theta0_deg}, {phi0_deg}) outside θ ∈ [0, 90]"
        )));
    }
    let (ux, uy) = direction_cosines(theta0_deg, phi0_deg);
    let px = -2.0 * PI * layout.dx_lambda * ux;
    let py = -2.0 * PI * layout.dy_lambda * uy;
    let mut out = Vec::with_capacity(layout.nx * layout.ny);
    for n in 0..layout.ny {
        for m in 0..layout.nx {
            out.push(Complex64::cis(px * m as f64 + py * n as f64));
        }
    }
    Ok(out)
}

/// `|AF|²` alone, as if the elements were isotropic over the hemisphere.
pub fn array_factor_pattern(layout: &ArrayLayout, grid: AngularGrid, f_hz: f64) -> Result<FarFieldPattern> {
    layout.validate()?;
    FarFieldPattern::from_fn(grid, f_hz, |t, p| array_factor(layout, t, p).norm_sqr())
}

/// Pattern multiplication: element intensity times `|AF|²`, coupling ignored.
pub fn total_pattern(
    geo: &PatchGeometry,
    layout: &ArrayLayout,
    grid: AngularGrid,
    obliquity: Obliquity,
) -> Result<FarFieldPattern> {
    layout.validate()?;
    let element = ElementPattern::new(geo, obliquity);
    FarFieldPattern::from_fn(grid, geo.f0_hz, |t, p| {
        element.intensity(t, p) * array_factor(layout, t, p).norm_sqr()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta_deg: f64,
    pub phi_deg: f64,
}

/// Figures of merit of an array pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayMetrics {
    pub gain_dbi: f64,
    pub directivity_dbi: f64,
    pub hpbw_e_deg: f64,
    pub hpbw_h_deg: f64,
    pub sll_e_db: Option<f64>,
    pub sll_h_db: Option<f64>,
    /// Worse (higher) of the two principal-plane sidelobe levels.
    pub sll_db: Option<f64>,
    /// Grid argmax of the total pattern.
    pub peak_direction: Direction,
    /// Grid argmax of `|AF|²`; differs from `peak_direction` by the element squint.
    pub beam_direction: Direction,
}

fn beamwidth_or_sentinel(p: &FarFieldPattern, cut: Cut) -> Result<f64> {
    match hpbw(p, cut) {
        Err(Error::NoCrossing) => Ok(NO_CROSSING_HPBW_DEG),
        other => other,
    }
}

/// Metrics of an already sampled total pattern of `layout`.
pub fn metrics_from_pattern(p: &FarFieldPattern, layout: &ArrayLayout, efficiency: f64) -> Result<ArrayMetrics> {
    let gain = gain_dbi(p, efficiency)?;
    let sll_e_db = sidelobe_level_db(p, Cut::E)?;
    let sll_h_db = sidelobe_level_db(p, Cut::H)?;
    let sll_db = match (sll_e_db, sll_h_db) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let af = array_factor_pattern(layout, p.grid, p.f_hz)?;
    Ok(ArrayMetrics {
        gain_dbi: gain,
        directivity_dbi: directivity_dbi(p)?,
        hpbw_e_deg: beamwidth_or_sentinel(p, Cut::E)?,
        hpbw_h_deg: beamwidth_or_sentinel(p, Cut::H)?,
        sll_e_db,
        sll_h_db,
        sll_db,
        peak_direction: Direction {
            theta_deg: p.peak.theta_deg,
            phi_deg: p.peak.phi_deg,
        },
        beam_direction: Direction {
            theta_deg: af.peak.theta_deg,
            phi_deg: af.peak.phi_deg,
        },
    })
}

pub fn array_metrics(
    geo: &PatchGeometry,
    layout: &ArrayLayout,
    grid: AngularGrid,
    efficiency: f64,
    obliquity: Obliquity,
) -> Result<ArrayMetrics> {
    let p = total_pattern(geo, layout, grid, obliquity)?;
    metrics_from_pattern(&p, layout, efficiency)
}

/// Positive when no grating lobe enters visible space while scanning to `θ0`.
pub fn grating_lobe_margin(layout: &ArrayLayout, theta0_deg: f64) -> f64 {
    1.0 / (1.0 + theta0_deg.to_radians().sin()) - layout.dx_lambda.max(layout.dy_lambda)
}
