//! Far-field pattern of a single patch, radiated power by quadrature over the
//! upper hemisphere, and the usual pattern figures of merit.
//!
//! Angles are degrees at the public boundary: θ from broadside (z) and φ from
//! the x axis, which is the resonant (E-plane) direction of the patch.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::PatchGeometry;

/// Default angular resolution in both θ and φ.
pub const DEFAULT_STEP_DEG: f64 = 0.5;

/// Floor for dB quantities derived from pattern samples.
pub const PATTERN_FLOOR_DB: f64 = -200.0;

/// Uniform θ/φ sampling of the upper hemisphere.
///
/// θ runs over `[0, 90]` including both ends; φ over `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularGrid {
    theta_step_deg: f64,
    phi_step_deg: f64,
    n_theta: usize,
    n_phi: usize,
}

fn divisions(range: f64, step: f64, what: &str) -> Result<usize> {
    if !(step.is_finite() && step > 0.0 && step <= range) {
        return Err(Error::InvalidInput(format!("{what} step must be in (0, {range}], got {step}")));
    }
    let n = range / step;
    let rounded = n.round();
    if (n - rounded).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::InvalidInput(format!("{what} step {step} does not divide {range}")));
    }
    Ok(rounded as usize)
}

impl AngularGrid {
    pub fn new(theta_step_deg: f64, phi_step_deg: f64) -> Result<Self> {
        let n_theta = divisions(90.0, theta_step_deg, "theta")? + 1;
        let n_phi = divisions(360.0, phi_step_deg, "phi")?;
        Ok(AngularGrid {
            theta_step_deg: 90.0 / (n_theta - 1) as f64,
            phi_step_deg: 360.0 / n_phi as f64,
            n_theta,
            n_phi,
        })
    }

    pub fn uniform(step_deg: f64) -> Result<Self> {
        Self::new(step_deg, step_deg)
    }

    pub fn theta_step_deg(&self) -> f64 {
        self.theta_step_deg
    }

    pub fn phi_step_deg(&self) -> f64 {
        self.phi_step_deg
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta_deg(&self, i: usize) -> f64 {
        if i + 1 == self.n_theta {
            90.0
        } else {
            i as f64 * self.theta_step_deg
        }
    }

    pub fn phi_deg(&self, j: usize) -> f64 {
        j as f64 * self.phi_step_deg
    }

    /// Index of `phi_deg` if it lies on the grid.
    pub fn phi_index(&self, phi_deg: f64) -> Option<usize> {
        let x = phi_deg.rem_euclid(360.0) / self.phi_step_deg;
        let j = x.round();
        ((x - j).abs() < 1e-9).then_some(j as usize % self.n_phi)
    }

    /// `(θ, φ)` of flat index `k` in row-major (θ outer, φ inner) order.
    pub fn angles(&self, k: usize) -> (f64, f64) {
        (self.theta_deg(k / self.n_phi), self.phi_deg(k % self.n_phi))
    }

    /// Composite Simpson weights for `n` equal intervals of width `h`, closing
    /// with a 3/8 panel when `n` is odd.
    fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
        let mut w = vec![0.0; n + 1];
        let add = |w: &mut [f64], start: usize, coeffs: &[f64], scale: f64| {
            for (k, c) in coeffs.iter().enumerate() {
                w[start + k] += c * scale;
            }
        };
        match n {
            0 => {}
            1 => add(&mut w, 0, &[0.5, 0.5], h),
            _ => {
                let simpson_end = if n % 2 == 0 { n } else { n - 3 };
                for start in (0..simpson_end).step_by(2) {
                    add(&mut w, start, &[1.0, 4.0, 1.0], h / 3.0);
                }
                if n % 2 == 1 {
                    add(&mut w, simpson_end, &[1.0, 3.0, 3.0, 1.0], 3.0 * h / 8.0);
                }
            }
        }
        w
    }

    /// Quadrature weights in θ including the `sin θ` Jacobian, radians.
    fn theta_weights(&self) -> Vec<f64> {
        let h = self.theta_step_deg.to_radians();
        Self::simpson_weights(self.n_theta - 1, h)
            .into_iter()
            .enumerate()
            .map(|(i, w)| w * self.theta_deg(i).to_radians().sin())
            .collect()
    }
}

impl Default for AngularGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_STEP_DEG).expect("default step divides the hemisphere")
    }
}

/// Optional `cos θ` factor on the element field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Obliquity {
    #[default]
    Off,
    Cosine,
}

/// Two-slot aperture model of the patch with constants folded in.
#[derive(Debug, Clone, Copy)]
pub struct ElementPattern {
    half_kw: f64,
    half_kh: f64,
    half_kl: f64,
    obliquity: Obliquity,
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

impl ElementPattern {
    pub fn new(geo: &PatchGeometry, obliquity: Obliquity) -> Self {
        let k0 = 2.0 * PI / geo.wavelength_mm();
        ElementPattern {
            half_kw: k0 * geo.width_mm / 2.0,
            half_kh: k0 * geo.substrate.height_mm / 2.0,
            half_kl: k0 * geo.radiating_length_mm() / 2.0,
            obliquity,
        }
    }

    /// Field amplitude at direction cosines `(ux, uy)` with `cos θ`.
    fn amplitude(&self, ux: f64, uy: f64, cos_theta: f64) -> f64 {
        let a = sinc(self.half_kw * uy) * sinc(self.half_kh * ux) * (self.half_kl * ux).cos();
        match self.obliquity {
            Obliquity::Off => a,
            Obliquity::Cosine => a * cos_theta,
        }
    }

    pub fn intensity(&self, theta_deg: f64, phi_deg: f64) -> f64 {
        let (st, ct) = theta_deg.to_radians().sin_cos();
        let (sp, cp) = phi_deg.to_radians().sin_cos();
        let a = self.amplitude(st * cp, st * sp, ct);
        a * a
    }
}

/// Unnormalized radiation intensity of the patch; 1 at broadside.
pub fn element_intensity(geo: &PatchGeometry, theta_deg: f64, phi_deg: f64) -> f64 {
    ElementPattern::new(geo, Obliquity::Off).intensity(theta_deg, phi_deg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub u_max: f64,
    pub theta_deg: f64,
    pub phi_deg: f64,
}

/// Radiation intensity sampled on an [`AngularGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    pub grid: AngularGrid,
    pub f_hz: f64,
    /// Row-major, θ outer and φ inner.
    pub intensity: Vec<f64>,
    pub prad: f64,
    pub peak: Peak,
}

#[cfg(feature = "parallel")]
fn evaluate<F>(grid: &AngularGrid, f: F) -> Vec<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    use rayon::prelude::*;
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (t, p) = grid.angles(k);
            f(t, p)
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate<F>(grid: &AngularGrid, f: F) -> Vec<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    (0..grid.len())
        .map(|k| {
            let (t, p) = grid.angles(k);
            f(t, p)
        })
        .collect()
}

impl FarFieldPattern {
    /// Samples `u(θ_deg, φ_deg)` over `grid`.
    pub fn from_fn<F>(grid: AngularGrid, f_hz: f64, u: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        Self::from_samples(grid, f_hz, evaluate(&grid, u))
    }

    pub fn from_samples(grid: AngularGrid, f_hz: f64, intensity: Vec<f64>) -> Result<Self> {
        if intensity.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples for a grid of {}",
                intensity.len(),
                grid.len()
            )));
        }
        if let Some(k) = intensity.iter().position(|u| !(u.is_finite() && *u >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "intensity must be finite and >= 0, got {} at sample {k}",
                intensity[k]
            )));
        }

        let n_phi = grid.n_phi();
        let dphi = grid.phi_step_deg().to_radians();
        let prad = grid
            .theta_weights()
            .iter()
            .zip(intensity.chunks_exact(n_phi))
            .map(|(w, row)| w * row.iter().sum::<f64>() * dphi)
            .sum();

        let mut best = 0;
        for (k, &u) in intensity.iter().enumerate() {
            if u > intensity[best] {
                best = k;
            }
        }
        let (theta_deg, phi_deg) = grid.angles(best);
        Ok(FarFieldPattern {
            grid,
            f_hz,
            peak: Peak {
                u_max: intensity[best],
                theta_deg,
                phi_deg,
            },
            intensity,
            prad,
        })
    }

    pub fn at(&self, i_theta: usize, j_phi: usize) -> f64 {
        self.intensity[i_theta * self.grid.n_phi() + j_phi]
    }

    /// Directive gain of sample `k` in dBi, floored at [`PATTERN_FLOOR_DB`].
    pub fn sample_dbi(&self, k: usize) -> f64 {
        to_db(4.0 * PI * self.intensity[k] / self.prad)
    }

    /// Principal cut as `(angle, U)` pairs for angles in `[-90, 90]`; negative
    /// angles come from the opposite half-plane (φ + 180°).
    pub fn cut(&self, cut: Cut) -> Result<Vec<(f64, f64)>> {
        let (fwd, back) = cut.half_planes();
        let missing = || Error::InvalidInput(format!("{cut:?}-plane is not on the φ grid"));
        let jf = self.grid.phi_index(fwd).ok_or_else(missing)?;
        let jb = self.grid.phi_index(back).ok_or_else(missing)?;
        let n = self.grid.n_theta();
        let mut out = Vec::with_capacity(2 * n - 1);
        out.extend((1..n).rev().map(|i| (-self.grid.theta_deg(i), self.at(i, jb))));
        out.extend((0..n).map(|i| (self.grid.theta_deg(i), self.at(i, jf))));
        Ok(out)
    }
}

pub(crate) fn to_db(x: f64) -> f64 {
    if x > 0.0 {
        (10.0 * x.log10()).max(PATTERN_FLOOR_DB)
    } else {
        PATTERN_FLOOR_DB
    }
}

/// Principal plane of the patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    /// φ = 0°/180°, along the resonant length.
    E,
    /// φ = 90°/270°, along the width.
    H,
}

impl Cut {
    fn half_planes(self) -> (f64, f64) {
        match self {
            Cut::E => (0.0, 180.0),
            Cut::H => (90.0, 270.0),
        }
    }
}

impl std::str::FromStr for Cut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E" => Ok(Cut::E),
            "H" => Ok(Cut::H),
            other => Err(Error::InvalidInput(format!("unknown cut '{other}'"))),
        }
    }
}

pub fn sample_pattern(geo: &PatchGeometry, grid: AngularGrid, obliquity: Obliquity) -> Result<FarFieldPattern> {
    let element = ElementPattern::new(geo, obliquity);
    FarFieldPattern::from_fn(grid, geo.f0_hz, |t, p| element.intensity(t, p))
}

pub fn directivity_dbi(p: &FarFieldPattern) -> Result<f64> {
    if !(p.peak.u_max > 0.0 && p.prad > 0.0) {
        return Err(Error::ZeroPattern);
    }
    Ok(10.0 * (4.0 * PI * p.peak.u_max / p.prad).log10())
}

pub fn gain_dbi(p: &FarFieldPattern, efficiency: f64) -> Result<f64> {
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::InvalidEfficiency(efficiency));
    }
    Ok(directivity_dbi(p)? + 10.0 * efficiency.log10())
}

fn cut_peak(points: &[(f64, f64)]) -> Result<(usize, f64)> {
    let mut best = 0;
    for (k, &(_, u)) in points.iter().enumerate() {
        if u > points[best].1 {
            best = k;
        }
    }
    let umax = points[best].1;
    if umax > 0.0 {
        Ok((best, umax))
    } else {
        Err(Error::ZeroPattern)
    }
}

/// Half-power beamwidth of the main lobe along `cut`, degrees.
pub fn hpbw(p: &FarFieldPattern, cut: Cut) -> Result<f64> {
    let pts = p.cut(cut)?;
    let (ipk, umax) = cut_peak(&pts)?;
    let half = umax / 2.0;
    // `above` is the sample still above half power, `below` the first at or under it.
    let crossing = |above: usize, below: usize| {
        let (ta, ua) = pts[above];
        let (tb, ub) = pts[below];
        ta + (ua - half) / (ua - ub) * (tb - ta)
    };
    let left = (0..ipk)
        .rev()
        .find(|&k| pts[k].1 <= half)
        .map(|k| crossing(k + 1, k))
        .ok_or(Error::NoCrossing)?;
    let right = (ipk + 1..pts.len())
        .find(|&k| pts[k].1 <= half)
        .map(|k| crossing(k - 1, k))
        .ok_or(Error::NoCrossing)?;
    Ok(right - left)
}

/// Highest lobe outside the main beam along `cut`, dB relative to the cut peak.
///
/// The main beam ends at the first local minimum below 1% of the peak on each
/// side. Returns `None` when neither side has such a null.
pub fn sidelobe_level_db(p: &FarFieldPattern, cut: Cut) -> Result<Option<f64>> {
    let pts = p.cut(cut)?;
    let (ipk, umax) = cut_peak(&pts)?;
    let threshold = umax / 100.0;
    let is_null = |k: usize| {
        let u = pts[k].1;
        u < threshold && u <= pts[k - 1].1 && u <= pts[k + 1].1
    };
    let left = (1..ipk).rev().find(|&k| is_null(k));
    let right = (ipk + 1..pts.len().saturating_sub(1)).find(|&k| is_null(k));
    if left.is_none() && right.is_none() {
        return Ok(None);
    }
    let outside = left
        .map(|l| &pts[..=l])
        .into_iter()
        .chain(right.map(|r| &pts[r..]))
        .flatten()
        .map(|&(_, u)| u)
        .fold(0.0, f64::max);
    Ok((outside > 0.0).then(|| 10.0 * (outside / umax).log10()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{design_patch, DesignSpec, Substrate};
    use approx::assert_relative_eq;

    fn default_geo() -> PatchGeometry {
        design_patch(&DesignSpec::default(), &Substrate::default()).unwrap()
    }

    fn injected(u: impl Fn(f64, f64) -> f64 + Sync) -> FarFieldPattern {
        FarFieldPattern::from_fn(AngularGrid::default(), 29e9, u).unwrap()
    }

    fn cos_deg(t: f64) -> f64 {
        t.to_radians().cos()
    }

    #[test]
    fn grid_validation() {
        let g = AngularGrid::default();
        assert_eq!(g.n_theta(), 181);
        assert_eq!(g.n_phi(), 720);
        assert_eq!(g.theta_deg(180), 90.0);
        assert_eq!(g.phi_index(180.0), Some(360));
        assert!(AngularGrid::uniform(0.7).is_err());
        assert!(AngularGrid::uniform(0.0).is_err());
        assert!(AngularGrid::uniform(-1.0).is_err());
        assert!(AngularGrid::new(1.0, 0.7).is_err());
        assert!(AngularGrid::uniform(2.0).is_ok());
    }

    #[test]
    fn simpson_weights_integrate_cubics() {
        for n in 1..8 {
            let h = 1.0 / n as f64;
            let w = AngularGrid::simpson_weights(n, h);
            let total: f64 = w.iter().sum();
            assert_relative_eq!(total, 1.0, max_relative = 1e-14);
            if n > 1 {
                let cubic: f64 = w.iter().enumerate().map(|(i, w)| w * (i as f64 * h).powi(3)).sum();
                assert_relative_eq!(cubic, 0.25, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn broadside_is_unity() {
        let geo = default_geo();
        for phi in [0.0, 37.0, 90.0, 200.0] {
            assert_eq!(element_intensity(&geo, 0.0, phi), 1.0);
        }
    }

    #[test]
    fn principal_plane_values() {
        let geo = default_geo();
        let k0 = 2.0 * PI / geo.wavelength_mm();
        // H-plane edge: sinc²(k0 W / 2)
        let x = k0 * geo.width_mm / 2.0;
        assert_relative_eq!(x, 1.2419, max_relative = 1e-4);
        let u = element_intensity(&geo, 90.0, 90.0);
        assert_relative_eq!(u, (x.sin() / x).powi(2), max_relative = 1e-12);
        assert_relative_eq!(u, 0.5807730760705848, max_relative = 1e-9);

        // E-plane has no null: k0 Le / 2 < π/2
        let half_kl = k0 * geo.radiating_length_mm() / 2.0;
        assert_relative_eq!(half_kl, 1.1306, max_relative = 1e-4);
        assert!(half_kl < PI / 2.0);
        let mut prev = f64::INFINITY;
        for i in 0..=900 {
            let u = element_intensity(&geo, i as f64 * 0.1, 0.0);
            assert!(u > 0.0 && u <= prev);
            prev = u;
        }
    }

    #[test]
    fn element_symmetry() {
        let geo = default_geo();
        let p = sample_pattern(&geo, AngularGrid::uniform(1.0).unwrap(), Obliquity::Off).unwrap();
        let n = p.grid.n_phi();
        for i in 0..p.grid.n_theta() {
            for j in 0..n {
                let mirrored = (n - j) % n;
                let flipped = (n / 2 + n - j) % n;
                assert!((p.at(i, j) - p.at(i, mirrored)).abs() < 1e-12);
                assert!((p.at(i, j) - p.at(i, flipped)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_analytic_patterns() {
        let uniform = injected(|_, _| 1.0);
        assert_relative_eq!(uniform.prad, 2.0 * PI, max_relative = 1e-6);
        assert_relative_eq!(directivity_dbi(&uniform).unwrap(), 3.010299956639812, epsilon = 1e-6);

        let cosine = injected(|t, _| cos_deg(t));
        assert_relative_eq!(cosine.prad, PI, max_relative = 1e-6);
        assert_relative_eq!(directivity_dbi(&cosine).unwrap(), 6.020599913279624, epsilon = 1e-6);

        let cos2 = injected(|t, _| cos_deg(t).powi(2));
        assert_relative_eq!(cos2.prad, 2.0 * PI / 3.0, max_relative = 1e-6);
    }

    #[test]
    fn odd_interval_quadrature() {
        // 45 θ intervals exercises the 3/8 closing panel.
        let p = FarFieldPattern::from_fn(AngularGrid::uniform(2.0).unwrap(), 29e9, |t, _| cos_deg(t)).unwrap();
        assert_relative_eq!(p.prad, PI, max_relative = 1e-6);
    }

    #[test]
    fn element_quadrature_converges() {
        let geo = default_geo();
        let coarse = sample_pattern(&geo, AngularGrid::uniform(0.5).unwrap(), Obliquity::Off).unwrap();
        let fine = sample_pattern(&geo, AngularGrid::uniform(0.25).unwrap(), Obliquity::Off).unwrap();
        assert!(((coarse.prad - fine.prad) / fine.prad).abs() < 1e-8);
        let dc = directivity_dbi(&coarse).unwrap();
        let df = directivity_dbi(&fine).unwrap();
        assert!((dc - df).abs() < 0.01);
    }

    #[test]
    fn element_directivity_in_band() {
        let p = sample_pattern(&default_geo(), AngularGrid::default(), Obliquity::Off).unwrap();
        let d = directivity_dbi(&p).unwrap();
        assert!((d - 7.0).abs() <= 1.5, "directivity {d}");
        assert_eq!((p.peak.theta_deg, p.peak.phi_deg), (0.0, 0.0));
    }

    #[test]
    fn gain_offsets() {
        let uniform = injected(|_, _| 1.0);
        let d = directivity_dbi(&uniform).unwrap();
        assert_eq!(gain_dbi(&uniform, 1.0).unwrap(), d);
        assert!(gain_dbi(&uniform, 0.5).unwrap().abs() < 1e-6);
        assert!(matches!(gain_dbi(&uniform, 0.0), Err(Error::InvalidEfficiency(_))));
        assert!(matches!(gain_dbi(&uniform, 1.2), Err(Error::InvalidEfficiency(_))));

        let p = sample_pattern(&default_geo(), AngularGrid::default(), Obliquity::Off).unwrap();
        let g = gain_dbi(&p, 0.9).unwrap();
        assert_relative_eq!(g, directivity_dbi(&p).unwrap() - 0.45757490560675, epsilon = 1e-9);
    }

    #[test]
    fn zero_pattern_rejected() {
        let zero = injected(|_, _| 0.0);
        assert_eq!(directivity_dbi(&zero), Err(Error::ZeroPattern));
    }

    #[test]
    fn negative_samples_rejected() {
        let grid = AngularGrid::uniform(10.0).unwrap();
        assert!(FarFieldPattern::from_fn(grid, 1.0, |_, _| -1.0).is_err());
        assert!(FarFieldPattern::from_samples(grid, 1.0, vec![1.0; 3]).is_err());
    }

    #[test]
    fn hpbw_cos_squared() {
        let p = injected(|t, _| cos_deg(t).powi(2));
        assert!((hpbw(&p, Cut::E).unwrap() - 90.0).abs() <= 0.5);
        assert!((hpbw(&p, Cut::H).unwrap() - 90.0).abs() <= 0.5);
    }

    #[test]
    fn hpbw_flat_has_no_crossing() {
        let p = injected(|_, _| 1.0);
        assert_eq!(hpbw(&p, Cut::E), Err(Error::NoCrossing));
        let element = sample_pattern(&default_geo(), AngularGrid::default(), Obliquity::Off).unwrap();
        assert_eq!(hpbw(&element, Cut::H), Err(Error::NoCrossing));
    }

    #[test]
    fn hpbw_element_e_plane_matches_dense_oracle() {
        let geo = default_geo();
        let k0 = 2.0 * PI / geo.wavelength_mm();
        let (a, b) = (k0 * geo.substrate.height_mm / 2.0, k0 * geo.radiating_length_mm() / 2.0);
        // E-plane closed form scanned at 0.01°
        let e_plane = |t: f64| {
            let s = t.to_radians().sin();
            let x = a * s;
            ((x.sin() / x) * (b * s).cos()).powi(2)
        };
        let theta_half = (1..=9000)
            .map(|i| i as f64 * 0.01)
            .find(|&t| e_plane(t) <= 0.5)
            .unwrap();
        let oracle = 2.0 * theta_half;
        let p = sample_pattern(&geo, AngularGrid::default(), Obliquity::Off).unwrap();
        let got = hpbw(&p, Cut::E).unwrap();
        assert!((got - oracle).abs() < 0.2, "hpbw {got} vs oracle {oracle}");
    }

    #[test]
    fn sidelobes_absent_for_monotone_patterns() {
        let element = sample_pattern(&default_geo(), AngularGrid::default(), Obliquity::Off).unwrap();
        assert_eq!(sidelobe_level_db(&element, Cut::E).unwrap(), None);
        let cos2 = injected(|t, _| cos_deg(t).powi(2));
        assert_eq!(sidelobe_level_db(&cos2, Cut::E).unwrap(), None);
    }

    #[test]
    fn sidelobe_of_uniform_line_source() {
        // |sin(4πu)/sin(πu/2)|² with u = sinθ along φ = 0: eight elements, half-wave spacing
        let p = injected(|t, ph| {
            let u = t.to_radians().sin() * ph.to_radians().cos();
            let psi = PI * u;
            let af = if psi.abs() < 1e-12 { 8.0 } else { (4.0 * psi).sin() / (psi / 2.0).sin() };
            af * af
        });
        let sll = sidelobe_level_db(&p, Cut::E).unwrap().unwrap();
        assert!((sll + 12.8).abs() <= 0.2, "sll {sll}");
    }

    #[test]
    fn scaling_invariance() {
        let geo = default_geo();
        let element = ElementPattern::new(&geo, Obliquity::Off);
        let base = FarFieldPattern::from_fn(AngularGrid::default(), 29e9, |t, p| element.intensity(t, p)).unwrap();
        let scaled = FarFieldPattern::from_fn(AngularGrid::default(), 29e9, |t, p| 8.0 * element.intensity(t, p)).unwrap();
        assert_eq!(directivity_dbi(&base).unwrap(), directivity_dbi(&scaled).unwrap());
        assert_eq!(hpbw(&base, Cut::E).unwrap(), hpbw(&scaled, Cut::E).unwrap());
    }

    #[test]
    fn cut_layout() {
        let p = injected(|t, ph| 1.0 + t + ph / 1000.0);
        let cut = p.cut(Cut::H).unwrap();
        assert_eq!(cut.len(), 361);
        assert_eq!(cut[0].0, -90.0);
        assert_eq!(cut[180].0, 0.0);
        assert_eq!(cut[360].0, 90.0);
        assert_relative_eq!(cut[0].1, 1.0 + 90.0 + 0.27);
        assert_relative_eq!(cut[360].1, 1.0 + 90.0 + 0.09);
        let coarse = FarFieldPattern::from_fn(AngularGrid::new(1.0, 120.0).unwrap(), 1.0, |_, _| 1.0).unwrap();
        assert!(coarse.cut(Cut::H).is_err());
    }

    #[test]
    fn obliquity_narrows_beam() {
        let geo = default_geo();
        let plain = sample_pattern(&geo, AngularGrid::default(), Obliquity::Off).unwrap();
        let oblique = sample_pattern(&geo, AngularGrid::default(), Obliquity::Cosine).unwrap();
        assert!(directivity_dbi(&oblique).unwrap() > directivity_dbi(&plain).unwrap());
        assert!(oblique.at(180, 180) < 1e-20);
    }
}
