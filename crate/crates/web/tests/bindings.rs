use patchkit_web::{array_cut_impl, design_impl, s11_curve_impl};
use serde_json::Value;

#[test]
fn design_returns_geometry_json() {
    let g: Value = serde_json::from_str(&design_impl(29.0, 2.2, 0.784).unwrap()).unwrap();
    assert!((g["w_mm"].as_f64().unwrap() - 4.0863).abs() < 1e-4);
    assert!(design_impl(29.0, 0.5, 0.784).is_err());
}

#[test]
fn s11_curve_is_flat_pairs_with_dip_at_design_frequency() {
    let v = s11_curve_impl(29.0, 2.2, 0.784, 50.0, false).unwrap();
    assert_eq!(v.len(), 2 * 401);
    let (f, db) = v.chunks(2).map(|p| (p[0], p[1])).fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    assert!((f - 29.0).abs() < 0.02);
    assert!(db <= -40.0);

    let edge = s11_curve_impl(29.0, 2.2, 0.784, 50.0, true).unwrap();
    let min = edge.chunks(2).map(|p| p[1]).fold(f64::INFINITY, f64::min);
    assert!((min + 5.88).abs() < 0.01);
    assert!(s11_curve_impl(29.0, 2.2, 0.784, 500.0, false).is_err());
}

#[test]
fn array_cut_follows_steering() {
    let out: Value = serde_json::from_str(&array_cut_impl(29.0, 2.2, 0.784, 8, -20.0, "e").unwrap()).unwrap();
    let angles: Vec<f64> = serde_json::from_value(out["angles_deg"].clone()).unwrap();
    let gains: Vec<f64> = serde_json::from_value(out["gain_dbi"].clone()).unwrap();
    assert_eq!(angles.len(), gains.len());
    let k = (0..gains.len()).max_by(|&a, &b| gains[a].total_cmp(&gains[b])).unwrap();
    assert!((angles[k] + 20.0).abs() <= 1.5, "peak at {}", angles[k]);
    assert!((gains[k] - out["metrics"]["directivity_dbi"].as_f64().unwrap()).abs() < 1e-9);
    assert!(array_cut_impl(29.0, 2.2, 0.784, 2, 0.0, "x").is_err());
}
