//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Each export takes plain numbers and returns JSON or a flat `Vec<f64>`, so
//! the page needs no generated TypeScript types. The `*_impl` functions carry
//! the logic and are what the host-side tests call.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use patchkit::array::{grating_lobe_margin, metrics_from_pattern, ArrayMetrics};
use patchkit::circuit::{match_feed, s11_db, s11_sweep, FeedModel, DEFAULT_Q};
use patchkit::{design_patch, total_pattern, AngularGrid, ArrayLayout, Cut, DesignSpec, Obliquity, PatchGeometry, Substrate};

/// Angular step of the demo patterns; coarser than the CLI default to stay interactive.
pub const DEMO_STEP_DEG: f64 = 1.0;

fn geometry(f0_ghz: f64, eps_r: f64, h_mm: f64) -> Result<PatchGeometry, String> {
    let spec = DesignSpec::new(f0_ghz * 1e9).map_err(|e| e.to_string())?;
    let sub = Substrate::new(eps_r, h_mm, 0.0009, "custom").map_err(|e| e.to_string())?;
    design_patch(&spec, &sub).map_err(|e| e.to_string())
}

pub fn design_impl(f0_ghz: f64, eps_r: f64, h_mm: f64) -> Result<String, String> {
    let geo = geometry(f0_ghz, eps_r, h_mm)?;
    Ok(geo.to_json())
}

/// S11 over ±2 GHz around the design frequency, flattened as `[f_ghz, db, f_ghz, db, ...]`.
pub fn s11_curve_impl(f0_ghz: f64, eps_r: f64, h_mm: f64, z0: f64, edge_fed: bool) -> Result<Vec<f64>, String> {
    let geo = geometry(f0_ghz, eps_r, h_mm)?;
    let feed = if edge_fed {
        FeedModel::edge(&geo, DEFAULT_Q)
    } else {
        match_feed(&geo, z0, DEFAULT_Q)
    }
    .map_err(|e| e.to_string())?;
    let f0 = geo.f0_hz;
    let resp = s11_sweep(&feed, &geo, f0 - 2e9, f0 + 2e9, 401, z0).map_err(|e| e.to_string())?;
    Ok(resp.points.iter().flat_map(|&(f, s)| [f / 1e9, s11_db(s)]).collect())
}

#[derive(Serialize)]
struct ArrayCut {
    angles_deg: Vec<f64>,
    gain_dbi: Vec<f64>,
    grating_lobe_margin: f64,
    metrics: ArrayMetrics,
}

/// One principal-plane cut of an `nx` x `nx` half-wave array steered to `steer_deg` in that plane.
pub fn array_cut_impl(f0_ghz: f64, eps_r: f64, h_mm: f64, n: usize, steer_deg: f64, cut: &str) -> Result<String, String> {
    let geo = geometry(f0_ghz, eps_r, h_mm)?;
    let cut: Cut = cut.parse().map_err(|e: patchkit::Error| e.to_string())?;
    let mut layout = ArrayLayout::uniform(n, n, 0.5, 0.5).map_err(|e| e.to_string())?;
    let phi0 = match cut {
        Cut::E => 0.0,
        Cut::H => 90.0,
    };
    let (theta0, phi0) = if steer_deg < 0.0 { (-steer_deg, phi0 + 180.0) } else { (steer_deg, phi0) };
    layout.steer(theta0, phi0).map_err(|e| e.to_string())?;
    let grid = AngularGrid::uniform(DEMO_STEP_DEG).map_err(|e| e.to_string())?;
    let p = total_pattern(&geo, &layout, grid, Obliquity::Off).map_err(|e| e.to_string())?;
    let metrics = metrics_from_pattern(&p, &layout, 1.0).map_err(|e| e.to_string())?;
    let samples = p.cut(cut).map_err(|e| e.to_string())?;
    let gain_offset = metrics.directivity_dbi;
    let u_max = p.peak.u_max;
    let out = ArrayCut {
        angles_deg: samples.iter().map(|&(a, _)| a).collect(),
        gain_dbi: samples
            .iter()
            .map(|&(_, u)| gain_offset + 10.0 * (u / u_max).max(1e-20).log10())
            .collect(),
        grating_lobe_margin: grating_lobe_margin(&layout, theta0),
        metrics,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn design(f0_ghz: f64, eps_r: f64, h_mm: f64) -> Result<String, String> {
    design_impl(f0_ghz, eps_r, h_mm)
}

#[wasm_bindgen]
pub fn s11_curve(f0_ghz: f64, eps_r: f64, h_mm: f64, z0: f64, edge_fed: bool) -> Result<Vec<f64>, String> {
    s11_curve_impl(f0_ghz, eps_r, h_mm, z0, edge_fed)
}

#[wasm_bindgen]
pub fn array_cut(f0_ghz: f64, eps_r: f64, h_mm: f64, n: usize, steer_deg: f64, cut: &str) -> Result<String, String> {
    array_cut_impl(f0_ghz, eps_r, h_mm, n, steer_deg, cut)
}
