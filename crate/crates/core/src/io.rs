//! Flat-file formats: Touchstone one-port, sweep CSV, pattern CSVs.
//!
//! Floating-point fields are written with 17 significant digits so every file
//! re-parses to the exact same values.

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;

use crate::circuit::{s11_db, FrequencyResponse};
use crate::error::{Error, Result};
use crate::radiation::{to_db, Cut, FarFieldPattern};

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("line {line}: '{field}': {e}")))
}

pub fn write_s1p<W: Write>(resp: &FrequencyResponse, mut w: W) -> Result<()> {
    writeln!(w, "! one-port S11, parallel-resonator patch model")?;
    writeln!(w, "# HZ S RI R {}", resp.ref_impedance_ohm)?;
    for &(f, s) in &resp.points {
        writeln!(w, "{} {} {}", sci(f), sci(s.re), sci(s.im))?;
    }
    Ok(())
}

/// Reads the subset written by [`write_s1p`]: Hz, S-parameters, RI format.
pub fn read_s1p<R: BufRead>(r: R) -> Result<FrequencyResponse> {
    let mut z0 = None;
    let mut points = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let body = line.split('!').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(opts) = body.strip_prefix('#') {
            let tokens: Vec<String> = opts.split_whitespace().map(|t| t.to_ascii_uppercase()).collect();
            let expect = ["HZ", "S", "RI", "R"];
            if tokens.len() != 5 || tokens[..4] != expect {
                return Err(Error::Parse(format!("line {}: unsupported option line '{body}'", i + 1)));
            }
            z0 = Some(parse_f64(&tokens[4], i + 1)?);
            continue;
        }
        if z0.is_none() {
            return Err(Error::Parse(format!("line {}: data before option line", i + 1)));
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected 3 columns, got {}", i + 1, fields.len())));
        }
        let f = parse_f64(fields[0], i + 1)?;
        let s = Complex64::new(parse_f64(fields[1], i + 1)?, parse_f64(fields[2], i + 1)?);
        points.push((f, s));
    }
    let z0 = z0.ok_or_else(|| Error::Parse("missing option line".into()))?;
    FrequencyResponse::new(z0, points)
}

pub const SWEEP_CSV_HEADER: [&str; 4] = ["f_hz", "s11_db", "s11_re", "s11_im"];

pub fn write_sweep_csv<W: Write>(resp: &FrequencyResponse, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_CSV_HEADER)?;
    for &(f, s) in &resp.points {
        out.write_record([sci(f), sci(s11_db(s)), sci(s.re), sci(s.im)])?;
    }
    out.flush()?;
    Ok(())
}

/// Sweep CSV carries no reference impedance; the caller supplies it.
pub fn read_sweep_csv<R: Read>(r: R, ref_impedance_ohm: f64) -> Result<FrequencyResponse> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(rdr.headers()?, &SWEEP_CSV_HEADER)?;
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let f = parse_f64(&rec[0], i + 2)?;
        points.push((f, Complex64::new(parse_f64(&rec[2], i + 2)?, parse_f64(&rec[3], i + 2)?)));
    }
    FrequencyResponse::new(ref_impedance_ohm, points)
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().eq(expected.iter().copied()) {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected header {}, got {}", expected.join(","), found.iter().collect::<Vec<_>>().join(","))))
    }
}

pub const PATTERN_CSV_HEADER: [&str; 4] = ["theta_deg", "phi_deg", "u_linear", "gain_dbi"];

/// Full-grid pattern, θ outer and φ inner.
pub fn write_pattern_csv<W: Write>(p: &FarFieldPattern, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(PATTERN_CSV_HEADER)?;
    for (k, &u) in p.intensity.iter().enumerate() {
        let (t, ph) = p.grid.angles(k);
        out.write_record([t.to_string(), ph.to_string(), sci(u), sci(p.sample_dbi(k))])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternRow {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub u_linear: f64,
    pub gain_dbi: f64,
}

pub fn read_pattern_csv<R: Read>(r: R) -> Result<Vec<PatternRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(rdr.headers()?, &PATTERN_CSV_HEADER)?;
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            Ok(PatternRow {
                theta_deg: parse_f64(&rec[0], i + 2)?,
                phi_deg: parse_f64(&rec[1], i + 2)?,
                u_linear: parse_f64(&rec[2], i + 2)?,
                gain_dbi: parse_f64(&rec[3], i + 2)?,
            })
        })
        .collect()
}

pub const CUT_CSV_HEADER: [&str; 3] = ["angle_deg", "gain_dbi", "normalized_db"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutRow {
    pub angle_deg: f64,
    pub gain_dbi: f64,
    pub normalized_db: f64,
}

/// Principal cut in dBi and relative to the cut maximum.
pub fn cut_rows(p: &FarFieldPattern, cut: Cut) -> Result<Vec<CutRow>> {
    let pts = p.cut(cut)?;
    let umax = pts.iter().map(|&(_, u)| u).fold(0.0, f64::max);
    if umax <= 0.0 || p.prad <= 0.0 {
        return Err(Error::ZeroPattern);
    }
    Ok(pts
        .into_iter()
        .map(|(angle_deg, u)| CutRow {
            angle_deg,
            gain_dbi: to_db(4.0 * std::f64::consts::PI * u / p.prad),
            normalized_db: to_db(u / umax),
        })
        .collect())
}

pub fn write_cut_csv<W: Write>(rows: &[CutRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CUT_CSV_HEADER)?;
    for r in rows {
        out.write_record([r.angle_deg.to_string(), sci(r.gain_dbi), sci(r.normalized_db)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_cut_csv<R: Read>(r: R) -> Result<Vec<CutRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(rdr.headers()?, &CUT_CSV_HEADER)?;
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            Ok(CutRow {
                angle_deg: parse_f64(&rec[0], i + 2)?,
                gain_dbi: parse_f64(&rec[1], i + 2)?,
                normalized_db: parse_f64(&rec[2], i + 2)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{match_feed, s11_sweep, FeedModel, DEFAULT_Q};
    use crate::geometry::{design_patch, DesignSpec, Substrate};
    use crate::radiation::{sample_pattern, AngularGrid, Obliquity};
    use proptest::prelude::*;

    fn sweep() -> FrequencyResponse {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        let feed = match_feed(&geo, 50.0, DEFAULT_Q).unwrap();
        s11_sweep(&feed, &geo, 27e9, 31e9, 41, 50.0).unwrap()
    }

    #[test]
    fn s1p_layout() {
        let mut buf = Vec::new();
        write_s1p(&sweep(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('!')).collect();
        assert_eq!(lines[0], "# HZ S RI R 50");
        assert_eq!(lines.len(), 42);
        let first: Vec<&str> = lines[1].split_whitespace().collect();
        assert_eq!(first.len(), 3);
        assert_eq!(first[0].parse::<f64>().unwrap(), 27e9);
    }

    #[test]
    fn s1p_round_trip_is_exact() {
        let resp = sweep();
        let mut buf = Vec::new();
        write_s1p(&resp, &mut buf).unwrap();
        assert_eq!(read_s1p(buf.as_slice()).unwrap(), resp);
    }

    #[test]
    fn s1p_rejects_other_formats() {
        assert!(read_s1p("# GHZ S MA R 50\n1 0.1 0\n".as_bytes()).is_err());
        assert!(read_s1p("1 0.1 0\n".as_bytes()).is_err());
        assert!(read_s1p("# HZ S RI R 50\n2 0.1 0\n1 0.1 0\n".as_bytes()).is_err());
        assert!(read_s1p("# HZ S RI R 50\n1 0.1\n".as_bytes()).is_err());
    }

    #[test]
    fn sweep_csv_round_trip() {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        let resp = s11_sweep(&FeedModel::edge(&geo, DEFAULT_Q).unwrap(), &geo, 28e9, 30e9, 11, 50.0).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&resp, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("f_hz,s11_db,s11_re,s11_im\n"));
        assert_eq!(read_sweep_csv(buf.as_slice(), 50.0).unwrap(), resp);
    }

    #[test]
    fn pattern_csv_round_trip() {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        let p = sample_pattern(&geo, AngularGrid::uniform(5.0).unwrap(), Obliquity::Off).unwrap();
        let mut buf = Vec::new();
        write_pattern_csv(&p, &mut buf).unwrap();
        let rows = read_pattern_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), p.grid.len());
        for (k, row) in rows.iter().enumerate() {
            let (t, ph) = p.grid.angles(k);
            assert_eq!((row.theta_deg, row.phi_deg, row.u_linear), (t, ph, p.intensity[k]));
            assert_eq!(row.gain_dbi, p.sample_dbi(k));
        }
        // row-major: φ varies fastest
        assert_eq!((rows[1].theta_deg, rows[1].phi_deg), (0.0, 5.0));
    }

    #[test]
    fn cut_csv_round_trip() {
        let geo = design_patch(&DesignSpec::default(), &Substrate::default()).unwrap();
        let p = sample_pattern(&geo, AngularGrid::default(), Obliquity::Off).unwrap();
        let rows = cut_rows(&p, Cut::H).unwrap();
        let edge = rows.last().unwrap();
        assert_eq!(edge.angle_deg, 90.0);
        assert!((edge.normalized_db - 10.0 * 0.5807730760705848f64.log10()).abs() < 1e-9);
        let mut buf = Vec::new();
        write_cut_csv(&rows, &mut buf).unwrap();
        assert_eq!(read_cut_csv(buf.as_slice()).unwrap(), rows);
    }

    proptest! {
        #[test]
        fn s1p_round_trips_arbitrary_points(raw in proptest::collection::vec((1.0f64..1e3, 0.0f64..1.0, -3.2f64..3.2), 1..40)) {
            let mut f = 1e9;
            let points: Vec<(f64, Complex64)> = raw.iter().map(|&(df, mag, arg)| { f += df * 1e6; (f, Complex64::from_polar(mag, arg)) }).collect();
            let resp = FrequencyResponse::new(50.0, points).unwrap();
            let mut buf = Vec::new();
            write_s1p(&resp, &mut buf).unwrap();
            prop_assert_eq!(read_s1p(buf.as_slice()).unwrap(), resp);
        }
    }
}
