//! `patchkit`: design, match, sweep and pattern commands over flat files.
//!
//! Exit codes: 0 success, 2 argument or validation error, 3 model error.
//! Data goes to stdout (or `--out`), diagnostics to stderr.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use patchkit::array::{grating_lobe_margin, metrics_from_pattern, total_pattern, ArrayLayout, ArrayMetrics, Direction};
use patchkit::circuit::{is_thin_substrate, match_feed, s11_sweep, FeedModel, DEFAULT_Q};
use patchkit::geometry::{design_patch, DesignSpec, PatchGeometry, Substrate, WidthFormula};
use patchkit::io;
use patchkit::progression::{self, ProgressionOptions};
use patchkit::radiation::{AngularGrid, Cut, Obliquity, DEFAULT_STEP_DEG};
use patchkit::Error;

#[derive(Parser)]
#[command(name = "patchkit", version, about = "Microstrip patch and planar array design toolkit")]
struct Cli {
    /// JSON object of flag defaults; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size a patch for a frequency and substrate.
    Design(DesignArgs),
    /// Find the inset feed depth that matches a reference impedance.
    Match(MatchArgs),
    /// Sweep S11 and write a Touchstone or CSV file.
    Sweep(SweepArgs),
    /// Sample the single-element far field.
    Pattern(PatternArgs),
    /// Sample a planar array pattern, optionally steered.
    Array(ArrayArgs),
    /// Tabulate 1x1, 2x2, 4x4 and 8x8 against reference gains.
    Progression(ProgressionArgs),
}

#[derive(Args)]
#[command(args_override_self = true)]
struct DesignArgs {
    /// Design frequency, Hz.
    #[arg(long, default_value_t = 29e9)]
    f0: f64,
    /// Relative permittivity of the substrate.
    #[arg(long, default_value_t = 2.2)]
    er: f64,
    /// Substrate height, mm.
    #[arg(long = "h-mm", default_value_t = 0.784)]
    h_mm: f64,
    /// Loss tangent.
    #[arg(long, default_value_t = 0.0009)]
    tand: f64,
    #[arg(long, default_value = "RT/duroid 5880")]
    label: String,
    #[arg(long = "width-formula", value_enum, default_value_t = WidthArg::Standard)]
    width_formula: WidthArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WidthArg {
    Standard,
    Simplified,
}

impl From<WidthArg> for WidthFormula {
    fn from(w: WidthArg) -> Self {
        match w {
            WidthArg::Standard => WidthFormula::Standard,
            WidthArg::Simplified => WidthFormula::Simplified,
        }
    }
}

#[derive(Args)]
struct GeometryArg {
    /// Geometry JSON from `design`; the default 29 GHz design when omitted.
    #[arg(long, value_name = "FILE")]
    geometry: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct MatchArgs {
    #[command(flatten)]
    geometry: GeometryArg,
    #[arg(long, default_value_t = 50.0)]
    z0: f64,
    /// Resonator quality factor stored with the feed.
    #[arg(long, default_value_t = DEFAULT_Q)]
    q: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct SweepArgs {
    #[command(flatten)]
    geometry: GeometryArg,
    /// Feed JSON from `match`; a feed matched to --z0 when omitted.
    #[arg(long, value_name = "FILE", conflicts_with = "edge")]
    feed: Option<PathBuf>,
    /// Use an unmatched edge feed.
    #[arg(long)]
    edge: bool,
    #[arg(long = "from")]
    from_hz: f64,
    #[arg(long = "to")]
    to_hz: f64,
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[arg(long, default_value_t = 50.0)]
    z0: f64,
    #[arg(long, default_value_t = DEFAULT_Q)]
    q: f64,
    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, value_enum)]
    format: Option<SweepFormat>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepFormat {
    S1p,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CutArg {
    E,
    H,
    Full,
}

#[derive(Args)]
struct PatternOptions {
    /// Angular step in θ and φ, degrees; must divide 90.
    #[arg(long, default_value_t = DEFAULT_STEP_DEG)]
    step: f64,
    #[arg(long, value_enum, default_value_t = CutArg::Full, ignore_case = true)]
    cut: CutArg,
    /// Apply a cos θ factor to the element field.
    #[arg(long)]
    obliquity: bool,
    /// Radiation efficiency in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    efficiency: f64,
    /// Pattern CSV destination.
    #[arg(long)]
    out: PathBuf,
    /// Metrics JSON destination; stdout when omitted.
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct PatternArgs {
    #[command(flatten)]
    geometry: GeometryArg,
    #[command(flatten)]
    pattern: PatternOptions,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct ArrayArgs {
    #[command(flatten)]
    geometry: GeometryArg,
    #[arg(long, default_value_t = 1)]
    nx: usize,
    #[arg(long, default_value_t = 1)]
    ny: usize,
    /// Element spacing along x, wavelengths.
    #[arg(long, default_value_t = 0.5)]
    dx: f64,
    #[arg(long, default_value_t = 0.5)]
    dy: f64,
    /// Layout JSON; replaces --nx/--ny/--dx/--dy.
    #[arg(long, value_name = "FILE")]
    layout: Option<PathBuf>,
    /// Scan angle from broadside, degrees.
    #[arg(long = "steer-theta")]
    steer_theta: Option<f64>,
    #[arg(long = "steer-phi")]
    steer_phi: Option<f64>,
    #[command(flatten)]
    pattern: PatternOptions,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Table,
    Json,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct ProgressionArgs {
    #[command(flatten)]
    geometry: GeometryArg,
    #[arg(long, value_enum, default_value_t = TableFormat::Table)]
    format: TableFormat,
    #[arg(long, default_value_t = 1.0)]
    efficiency: f64,
    #[arg(long, default_value_t = DEFAULT_Q)]
    q: f64,
    #[arg(long, default_value_t = DEFAULT_STEP_DEG)]
    step: f64,
    #[arg(long)]
    obliquity: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

type CmdResult = Result<(), Error>;

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out` or stdout.
fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load_geometry(arg: &GeometryArg) -> Result<PatchGeometry, Error> {
    let geo = match &arg.geometry {
        Some(path) => PatchGeometry::from_json(&read_text(path)?)?,
        None => design_patch(&DesignSpec::default(), &Substrate::default())?,
    };
    if !is_thin_substrate(&geo) {
        eprintln!("warning: h/λ0 >= 0.1, the slot conductance model is outside its range");
    }
    Ok(geo)
}

fn obliquity(flag: bool) -> Obliquity {
    if flag {
        Obliquity::Cosine
    } else {
        Obliquity::Off
    }
}

fn cmd_design(args: DesignArgs) -> CmdResult {
    let spec = DesignSpec::new(args.f0)?.with_width_formula(args.width_formula.into());
    let sub = Substrate::new(args.er, args.h_mm, args.tand, args.label)?;
    let geo = design_patch(&spec, &sub)?;
    if !is_thin_substrate(&geo) {
        eprintln!("warning: h/λ0 >= 0.1, the slot conductance model is outside its range");
    }
    emit(&to_json(&geo), args.out.as_deref())
}

fn cmd_match(args: MatchArgs) -> CmdResult {
    let geo = load_geometry(&args.geometry)?;
    let feed = match_feed(&geo, args.z0, args.q)?;
    emit(&to_json(&feed), args.out.as_deref())
}

#[derive(Serialize)]
struct SweepSummary {
    f_min_hz: f64,
    s11_min_db: f64,
    bandwidth_10db_hz: Option<f64>,
    points: usize,
    out: String,
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let geo = load_geometry(&args.geometry)?;
    let feed = if args.edge {
        FeedModel::edge(&geo, args.q)?
    } else if let Some(path) = &args.feed {
        FeedModel::from_json(&read_text(path)?, &geo)?
    } else {
        match_feed(&geo, args.z0, args.q)?
    };
    let resp = s11_sweep(&feed, &geo, args.from_hz, args.to_hz, args.points, args.z0)?;

    let format = args.format.unwrap_or_else(|| {
        match args.out.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => SweepFormat::Csv,
            _ => SweepFormat::S1p,
        }
    });
    let mut w = create(&args.out)?;
    match format {
        SweepFormat::S1p => io::write_s1p(&resp, &mut w)?,
        SweepFormat::Csv => io::write_sweep_csv(&resp, &mut w)?,
    }
    w.flush()?;

    let (f_min_hz, s11_min_db) = resp.minimum().expect("sweep has at least two points");
    let summary = SweepSummary {
        f_min_hz,
        s11_min_db,
        bandwidth_10db_hz: resp.bandwidth(-10.0).map(|(lo, hi)| hi - lo),
        points: resp.points.len(),
        out: args.out.display().to_string(),
    };
    emit(&to_json(&summary), None)
}

fn write_pattern(p: &patchkit::FarFieldPattern, cut: CutArg, out: &Path) -> CmdResult {
    let mut w = create(out)?;
    match cut {
        CutArg::Full => io::write_pattern_csv(p, &mut w)?,
        CutArg::E => io::write_cut_csv(&io::cut_rows(p, Cut::E)?, &mut w)?,
        CutArg::H => io::write_cut_csv(&io::cut_rows(p, Cut::H)?, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PatternMetrics {
    directivity_dbi: f64,
    gain_dbi: f64,
    hpbw_e_deg: f64,
    hpbw_h_deg: f64,
    sll_e_db: Option<f64>,
    sll_h_db: Option<f64>,
    peak_direction: Direction,
    prad: f64,
}

impl From<ArrayMetrics> for PatternMetrics {
    fn from(m: ArrayMetrics) -> Self {
        PatternMetrics {
            directivity_dbi: m.directivity_dbi,
            gain_dbi: m.gain_dbi,
            hpbw_e_deg: m.hpbw_e_deg,
            hpbw_h_deg: m.hpbw_h_deg,
            sll_e_db: m.sll_e_db,
            sll_h_db: m.sll_h_db,
            peak_direction: m.peak_direction,
            prad: 0.0,
        }
    }
}

fn cmd_pattern(args: PatternArgs) -> CmdResult {
    let geo = load_geometry(&args.geometry)?;
    let opts = &args.pattern;
    let grid = AngularGrid::uniform(opts.step)?;
    let single = ArrayLayout::uniform(1, 1, 0.5, 0.5)?;
    let p = total_pattern(&geo, &single, grid, obliquity(opts.obliquity))?;
    let metrics = metrics_from_pattern(&p, &single, opts.efficiency)?;
    write_pattern(&p, opts.cut, &opts.out)?;
    let metrics = PatternMetrics {
        prad: p.prad,
        ..metrics.into()
    };
    emit(&to_json(&metrics), opts.metrics.as_deref())
}

#[derive(Serialize)]
struct ArrayReport {
    nx: usize,
    ny: usize,
    dx_lambda: f64,
    dy_lambda: f64,
    steer: Option<Direction>,
    grating_lobe_margin: f64,
    #[serde(flatten)]
    metrics: ArrayMetrics,
}

fn cmd_array(args: ArrayArgs) -> CmdResult {
    let geo = load_geometry(&args.geometry)?;
    let mut layout = match &args.layout {
        Some(path) => ArrayLayout::from_json(&read_text(path)?)?,
        None => ArrayLayout::uniform(args.nx, args.ny, args.dx, args.dy)?,
    };
    let steer = match (args.steer_theta, args.steer_phi) {
        (None, None) => None,
        (t, p) => Some(Direction {
            theta_deg: t.unwrap_or(0.0),
            phi_deg: p.unwrap_or(0.0),
        }),
    };
    if let Some(d) = steer {
        layout.steer(d.theta_deg, d.phi_deg)?;
    }
    let opts = &args.pattern;
    let grid = AngularGrid::uniform(opts.step)?;
    let p = total_pattern(&geo, &layout, grid, obliquity(opts.obliquity))?;
    let metrics = metrics_from_pattern(&p, &layout, opts.efficiency)?;
    write_pattern(&p, opts.cut, &opts.out)?;
    let report = ArrayReport {
        nx: layout.nx,
        ny: layout.ny,
        dx_lambda: layout.dx_lambda,
        dy_lambda: layout.dy_lambda,
        grating_lobe_margin: grating_lobe_margin(&layout, steer.map_or(0.0, |d| d.theta_deg)),
        steer,
        metrics,
    };
    emit(&to_json(&report), opts.metrics.as_deref())
}

fn cmd_progression(args: ProgressionArgs) -> CmdResult {
    let geo = load_geometry(&args.geometry)?;
    let opts = ProgressionOptions {
        efficiency: args.efficiency,
        q: args.q,
        grid: AngularGrid::uniform(args.step)?,
        obliquity: obliquity(args.obliquity),
        ..Default::default()
    };
    let rows = progression::progression(&geo, &opts)?;
    let text = match args.format {
        TableFormat::Table => progression::format_table(&rows),
        TableFormat::Json => {
            let mut s = progression::to_json(&rows);
            s.push('\n');
            s
        }
    };
    emit(&text, args.out.as_deref())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Design(a) => cmd_design(a),
        Command::Match(a) => cmd_match(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Pattern(a) => cmd_pattern(a),
        Command::Array(a) => cmd_array(a),
        Command::Progression(a) => cmd_progression(a),
    }
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(args) => args,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Unmatchable { edge_ohm, .. } = e {
                eprintln!("hint: the edge resistance of this patch is {edge_ohm:.3} ohm");
            }
            ExitCode::from(if e.is_model_error() { 3 } else { 2 })
        }
    }
}
