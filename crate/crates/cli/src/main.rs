//! `ptscat` — batch workbench for multipoint-scatterer models.
//!
//! Verbs: `gen` (example configurations), `boundstates` (zero-energy
//! detection), `scan` (2m-gon multiplicity table), `scatter` (charges and
//! field grids), `decay` (far-field exponent fit), `verify` (contact-
//! condition residuals).
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerically singular
//! system, 4 empty result (nothing to analyze). All numeric output uses
//! 17 significant digits; every output file gets a `.manifest.json`
//! sidecar recording the resolved parameters.

// Validation sites use `!(x > 0.0)` on purpose: the negation treats NaN as
// out of range, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex;
use rayon::prelude::*;

use ptscat_core::farfield::{
    decay_curve, exponent_from_curve, fibonacci_sphere, log_spaced, multipole_coefficient,
    DEFAULT_DIRECTION_COUNT, DEFAULT_FIT_WINDOW,
};
use ptscat_core::greens::Energy;
use ptscat_core::model::{make_polygon, make_tetrahedron, Configuration, Point3};
use ptscat_core::scattering::{
    default_probe_radii, extract_bound_state_contact, extract_contact_expansion,
    solve_scattering, total_field, IncidentWave, ScatteringSolution,
};
use ptscat_core::spectral::{zero_energy_null_space, scan_polygon, BoundStateBasis, DEFAULT_RANK_RTOL};
use ptscat_core::Error as CoreError;

use ptscat_cli::configio::{parse_configuration, render_configuration};
use ptscat_cli::grid::parse_grid;
use ptscat_cli::json::{fmt_f64, Json};
use ptscat_cli::manifest::Manifest;

// ---------------------------------------------------------------------------
// Command line.
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "ptscat",
    version,
    about = "Multipoint-scatterer workbench: configurations, scattering solves, \
             zero-energy bound states, and far-field analysis"
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an example configuration as JSON.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },

    /// Detect zero-energy bound states of a configuration.
    Boundstates {
        /// Configuration JSON file.
        config: PathBuf,
        /// Rank tolerance: singular values ≤ rtol·σ_max count as zero.
        #[arg(long, default_value_t = DEFAULT_RANK_RTOL)]
        rtol: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Tabulate bound-state multiplicity across the 2m-gon family.
    Scan {
        /// Largest polygon parameter m (the scan runs m = 1..=m-max).
        #[arg(long = "m-max", value_name = "M")]
        m_max: u32,
        /// Circumradius of every polygon in the scan.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        #[arg(long, default_value_t = DEFAULT_RANK_RTOL)]
        rtol: f64,
        /// Write the CSV table here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Solve a scattering problem; export charges and optionally a field grid.
    Scatter {
        /// Configuration JSON file.
        config: PathBuf,
        /// Energy E ≥ 0 of the incident wave.
        #[arg(long, default_value_t = 0.0)]
        energy: f64,
        /// Plane-wave propagation direction "x,y,z" (normalized before use).
        #[arg(long, value_name = "X,Y,Z", conflicts_with = "constant")]
        dir: Option<String>,
        /// Constant incident field "re[,im]"; zero energy only.
        #[arg(long, value_name = "RE[,IM]")]
        constant: Option<String>,
        /// Evaluation grid "x0:x1:nx,y0:y1:ny,z0:z1:nz" for the field CSV.
        #[arg(long, value_name = "SPEC", requires = "field_out")]
        grid: Option<String>,
        /// Where to write the field CSV (requires --grid).
        #[arg(long = "field-out", value_name = "FILE", requires = "grid")]
        field_out: Option<PathBuf>,
        /// Write the charges JSON report here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Fit the far-field decay exponent of a detected bound state.
    Decay {
        /// Configuration JSON file (or use --polygon).
        #[arg(required_unless_present = "polygon", conflicts_with = "polygon")]
        config: Option<PathBuf>,
        /// Built-in 2m-gon "m,r0" instead of a configuration file.
        #[arg(long, value_name = "M,R0")]
        polygon: Option<String>,
        /// Smallest sample radius (default: 100 × configuration radius).
        #[arg(long, value_name = "R")]
        rmin: Option<f64>,
        /// Largest sample radius (default: 10000 × configuration radius).
        #[arg(long, value_name = "R")]
        rmax: Option<f64>,
        /// Number of log-spaced sample radii.
        #[arg(long, default_value_t = 25)]
        nr: usize,
        /// Number of directions in the RMS average.
        #[arg(long, default_value_t = DEFAULT_DIRECTION_COUNT)]
        ndirs: usize,
        #[arg(long, default_value_t = DEFAULT_RANK_RTOL)]
        rtol: f64,
        /// Write the decay CSV here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Also export multipole coefficients (2m-gon inputs only).
        #[arg(long = "multipole-out", value_name = "FILE")]
        multipole_out: Option<PathBuf>,
        /// Largest multipole order for --multipole-out (default: m + 2).
        #[arg(long, value_name = "L", requires = "multipole_out")]
        lmax: Option<u32>,
    },

    /// Check the contact condition on a bound state or a scattering solution.
    Verify {
        /// Configuration JSON file.
        config: PathBuf,
        /// Scattering mode: incident-wave energy E ≥ 0.
        #[arg(long)]
        energy: Option<f64>,
        /// Scattering mode: plane-wave direction "x,y,z".
        #[arg(long, value_name = "X,Y,Z", conflicts_with = "constant")]
        dir: Option<String>,
        /// Scattering mode: constant incident field "re[,im]" (zero energy).
        #[arg(long, value_name = "RE[,IM]")]
        constant: Option<String>,
        /// Rank tolerance for bound-state mode.
        #[arg(long, default_value_t = DEFAULT_RANK_RTOL)]
        rtol: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Regular tetrahedron at its critical strength α = −1/(4π·edge).
    Tetrahedron {
        /// Edge length (> 0).
        #[arg(long)]
        edge: f64,
        /// Write the configuration here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Regular 2m-gon at its critical strength.
    Polygon {
        /// Half the vertex count: the polygon has 2m vertices (m ≥ 1).
        #[arg(long)]
        m: u32,
        /// Circumradius (> 0).
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// Write the configuration here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------------------
// Failure handling: the exit-code contract.
// ---------------------------------------------------------------------------

enum Failure {
    /// Exit 2 — bad usage, bad parameters, unreadable or invalid input.
    Input(String),
    /// Exit 3 — the linear system is numerically singular (resonance).
    Singular(String),
    /// Exit 4 — structurally fine, but there is nothing to analyze.
    Empty(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Singular(_) => 3,
            Failure::Empty(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Singular(m) | Failure::Empty(m) => m,
        }
    }
}

fn from_core(err: CoreError) -> Failure {
    match err {
        CoreError::Resonance { .. } => Failure::Singular(err.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // The pool can only be sized once per process; later calls err
        // harmlessly and the existing pool is reused.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing.
// ---------------------------------------------------------------------------

fn read_config(path: &Path) -> Result<Configuration, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_configuration(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Sends `text` to stdout or to `out`; file outputs also get the manifest
/// sidecar.
fn emit(text: &str, out: Option<&Path>, manifest: &Manifest) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            write_file(path, text)?;
            write_file(&Manifest::sidecar_path(path), &manifest.render())
        }
    }
}

fn path_param(path: &Option<PathBuf>) -> Json {
    match path {
        Some(p) => Json::Str(p.display().to_string()),
        None => Json::Null,
    }
}

fn str_param(value: &Option<String>) -> Json {
    match value {
        Some(s) => Json::Str(s.clone()),
        None => Json::Null,
    }
}

/// Parses "x,y,z" into a unit vector (normalizing the input).
fn parse_direction(text: &str) -> Result<Point3, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::Input(format!(
            "--dir expects three comma-separated components, got {text:?}"
        )));
    }
    let mut v = [0.0f64; 3];
    for (i, part) in parts.iter().enumerate() {
        v[i] = part
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("--dir component {:?} is not a number", part)))?;
    }
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Failure::Input(
            "--dir must be a finite, nonzero vector".to_string(),
        ));
    }
    Ok(Point3::new(v[0] / norm, v[1] / norm, v[2] / norm))
}

/// Parses "re" or "re,im" into a complex number.
fn parse_complex(text: &str) -> Result<Complex<f64>, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() > 2 || parts.is_empty() {
        return Err(Failure::Input(format!(
            "--constant expects \"re\" or \"re,im\", got {text:?}"
        )));
    }
    let mut v = [0.0f64; 2];
    for (i, part) in parts.iter().enumerate() {
        v[i] = part.trim().parse().map_err(|_| {
            Failure::Input(format!("--constant component {:?} is not a number", part))
        })?;
    }
    Ok(Complex::new(v[0], v[1]))
}

/// Parses "m,r0" for `decay --polygon`.
fn parse_polygon_spec(text: &str) -> Result<(u32, f64), Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::Input(format!(
            "--polygon expects \"m,r0\", got {text:?}"
        )));
    }
    let m: u32 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("--polygon m {:?} is not a non-negative integer", parts[0])))?;
    let r0: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("--polygon r0 {:?} is not a number", parts[1])))?;
    Ok((m, r0))
}

/// Builds the incident wave shared by `scatter` and `verify`.
fn build_incident(
    energy: f64,
    dir: &Option<String>,
    constant: &Option<String>,
) -> Result<IncidentWave, Failure> {
    match (dir, constant) {
        (Some(d), None) => {
            let direction = parse_direction(d)?;
            let energy = Energy::new(energy).map_err(from_core)?;
            IncidentWave::plane_wave(direction, energy).map_err(from_core)
        }
        (None, Some(c)) => {
            if energy != 0.0 {
                return Err(Failure::Input(
                    "--constant incident fields exist at zero energy only; drop --energy or set it to 0"
                        .to_string(),
                ));
            }
            IncidentWave::constant(parse_complex(c)?).map_err(from_core)
        }
        (None, None) => Err(Failure::Input(
            "choose an incident wave: --dir x,y,z or --constant re[,im]".to_string(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects --dir with --constant"),
    }
}

fn incident_json(incident: &IncidentWave) -> Json {
    if let Some(d) = incident.direction() {
        Json::Obj(vec![
            ("kind", Json::Str("plane_wave".to_string())),
            ("direction", Json::floats([d.x, d.y, d.z])),
        ])
    } else {
        let c = incident
            .constant_value()
            .expect("incident wave is plane or constant");
        Json::Obj(vec![
            ("kind", Json::Str("constant".to_string())),
            ("value", Json::complex(c.re, c.im)),
        ])
    }
}

fn basis_json(basis: &BoundStateBasis) -> Json {
    Json::Arr(
        basis
            .basis()
            .iter()
            .map(|q| Json::floats(q.iter().copied()))
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Dispatch.
// ---------------------------------------------------------------------------

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { family } => cmd_gen(family),
        Command::Boundstates { config, rtol, out } => cmd_boundstates(&config, rtol, out.as_deref()),
        Command::Scan {
            m_max,
            r0,
            rtol,
            out,
        } => cmd_scan(m_max, r0, rtol, out.as_deref()),
        Command::Scatter {
            config,
            energy,
            dir,
            constant,
            grid,
            field_out,
            out,
        } => cmd_scatter(&config, energy, &dir, &constant, &grid, field_out.as_deref(), out.as_deref()),
        Command::Decay {
            config,
            polygon,
            rmin,
            rmax,
            nr,
            ndirs,
            rtol,
            out,
            multipole_out,
            lmax,
        } => cmd_decay(
            config.as_deref(),
            &polygon,
            rmin,
            rmax,
            nr,
            ndirs,
            rtol,
            out.as_deref(),
            multipole_out.as_deref(),
            lmax,
        ),
        Command::Verify {
            config,
            energy,
            dir,
            constant,
            rtol,
            out,
        } => cmd_verify(&config, energy, &dir, &constant, rtol, out.as_deref()),
    }
}

fn cmd_gen(family: GenFamily) -> Result<(), Failure> {
    let (config, manifest, out) = match family {
        GenFamily::Tetrahedron { edge, out } => {
            let manifest = Manifest::new(
                "gen",
                vec![
                    ("family", Json::Str("tetrahedron".to_string())),
                    ("edge", Json::Num(edge)),
                    ("out", path_param(&out)),
                ],
            );
            (make_tetrahedron(edge).map_err(from_core)?, manifest, out)
        }
        GenFamily::Polygon { m, r0, out } => {
            let manifest = Manifest::new(
                "gen",
                vec![
                    ("family", Json::Str("polygon".to_string())),
                    ("m", Json::Int(m as i64)),
                    ("r0", Json::Num(r0)),
                    ("out", path_param(&out)),
                ],
            );
            (make_polygon(m, r0).map_err(from_core)?, manifest, out)
        }
    };
    emit(&render_configuration(&config), out.as_deref(), &manifest)
}

fn cmd_boundstates(config_path: &Path, rtol: f64, out: Option<&Path>) -> Result<(), Failure> {
    let config = read_config(config_path)?;
    let basis = zero_energy_null_space(&config, rtol).map_err(from_core)?;
    let manifest = Manifest::new(
        "boundstates",
        vec![
            ("config", Json::Str(config_path.display().to_string())),
            ("rtol", Json::Num(rtol)),
            ("out", path_param(&out.map(Path::to_path_buf))),
        ],
    )
    .with_rank_tolerance(rtol);

    let report = Json::Obj(vec![
        ("manifest", manifest.to_json()),
        ("input", Json::Str(config_path.display().to_string())),
        ("scatterer_count", Json::Int(config.len() as i64)),
        ("multiplicity", Json::Int(basis.multiplicity() as i64)),
        (
            "singular_values",
            Json::floats(basis.singular_values().iter().copied()),
        ),
        ("sigma_min_retained", Json::num_or_null(basis.sigma_min_retained())),
        ("sigma_max_discarded", Json::num_or_null(basis.sigma_max_discarded())),
        ("margin", Json::num_or_null(basis.margin())),
        ("basis", basis_json(&basis)),
    ]);
    emit(&report.render(), out, &manifest)
}

fn cmd_scan(m_max: u32, r0: f64, rtol: f64, out: Option<&Path>) -> Result<(), Failure> {
    if m_max < 1 {
        return Err(Failure::Input(
            "scan needs --m-max at least 1".to_string(),
        ));
    }
    let rows: Result<Vec<_>, CoreError> = (1..=m_max)
        .into_par_iter()
        .map(|m| scan_polygon(m, r0, rtol))
        .collect();
    let rows = rows.map_err(from_core)?;

    let mut csv = String::from("m,multiplicity,sigma_min_retained,sigma_max_discarded,margin\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.m,
            row.multiplicity,
            fmt_f64(row.sigma_min_retained),
            fmt_f64(row.sigma_max_discarded),
            fmt_f64(row.margin),
        ));
    }
    let manifest = Manifest::new(
        "scan",
        vec![
            ("m_max", Json::Int(m_max as i64)),
            ("r0", Json::Num(r0)),
            ("rtol", Json::Num(rtol)),
            ("out", path_param(&out.map(Path::to_path_buf))),
        ],
    )
    .with_rank_tolerance(rtol);
    emit(&csv, out, &manifest)
}

fn cmd_scatter(
    config_path: &Path,
    energy: f64,
    dir: &Option<String>,
    constant: &Option<String>,
    grid: &Option<String>,
    field_out: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let config = read_config(config_path)?;
    // Validate the energy before anything else so `--energy -1` is a
    // usage error even when the incident flags are missing.
    let _ = Energy::new(energy).map_err(from_core)?;
    let incident = build_incident(energy, dir, constant)?;
    let solution = solve_scattering(&config, &incident).map_err(from_core)?;

    let manifest = Manifest::new(
        "scatter",
        vec![
            ("config", Json::Str(config_path.display().to_string())),
            ("energy", Json::Num(energy)),
            ("dir", str_param(dir)),
            ("constant", str_param(constant)),
            ("grid", str_param(grid)),
            ("field_out", path_param(&field_out.map(Path::to_path_buf))),
            ("out", path_param(&out.map(Path::to_path_buf))),
        ],
    );

    let charges = Json::Arr(
        solution
            .charges()
            .iter()
            .map(|q| Json::complex(q.re, q.im))
            .collect(),
    );
    let report = Json::Obj(vec![
        ("manifest", manifest.to_json()),
        ("input", Json::Str(config_path.display().to_string())),
        ("energy", Json::Num(energy)),
        ("incident", incident_json(&incident)),
        ("charges", charges),
        ("solve_residual", Json::Num(solution.residual())),
    ]);
    emit(&report.render(), out, &manifest)?;

    if let (Some(spec), Some(field_path)) = (grid, field_out) {
        let grid = parse_grid(spec).map_err(Failure::Input)?;
        let csv = field_csv(&solution, &grid.points())?;
        write_file(field_path, &csv)?;
        write_file(&Manifest::sidecar_path(field_path), &manifest.render())?;
    }
    Ok(())
}

/// Renders the field CSV, skipping (with a note on stderr) grid points
/// that coincide with a scatterer.
fn field_csv(solution: &ScatteringSolution, points: &[[f64; 3]]) -> Result<String, Failure> {
    let mut csv = String::from("x,y,z,re_psi,im_psi,abs_psi\n");
    for &[x, y, z] in points {
        match total_field(solution, Point3::new(x, y, z)) {
            Ok(value) => csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(z),
                fmt_f64(value.re),
                fmt_f64(value.im),
                fmt_f64(value.norm()),
            )),
            Err(CoreError::EvaluationAtScatterer { index, .. }) => {
                eprintln!(
                    "note: skipping grid point ({x}, {y}, {z}): coincides with scatterer {index}"
                );
            }
            Err(other) => return Err(from_core(other)),
        }
    }
    Ok(csv)
}

#[allow(clippy::too_many_arguments)]
fn cmd_decay(
    config_path: Option<&Path>,
    polygon: &Option<String>,
    rmin: Option<f64>,
    rmax: Option<f64>,
    nr: usize,
    ndirs: usize,
    rtol: f64,
    out: Option<&Path>,
    multipole_out: Option<&Path>,
    lmax: Option<u32>,
) -> Result<(), Failure> {
    let (config, polygon_m) = match (config_path, polygon) {
        (Some(path), None) => (read_config(path)?, None),
        (None, Some(spec)) => {
            let (m, r0) = parse_polygon_spec(spec)?;
            (make_polygon(m, r0).map_err(from_core)?, Some(m))
        }
        _ => unreachable!("clap enforces exactly one of CONFIG and --polygon"),
    };
    if multipole_out.is_some() && polygon_m.is_none() {
        return Err(Failure::Input(
            "--multipole-out needs --polygon: multipole orders are defined for the 2m-gon family"
                .to_string(),
        ));
    }

    let basis = zero_energy_null_space(&config, rtol).map_err(from_core)?;
    if !basis.has_bound_state() {
        return Err(Failure::Empty(format!(
            "no bound state to analyze: multiplicity 0 at rank tolerance {rtol:e}"
        )));
    }
    let q = &basis.basis()[0];

    let scale = config.max_radius();
    let rmin = rmin.unwrap_or(DEFAULT_FIT_WINDOW.0 * scale);
    let rmax = rmax.unwrap_or(DEFAULT_FIT_WINDOW.1 * scale);
    let radii = log_spaced(rmin, rmax, nr).map_err(from_core)?;
    let dirs = fibonacci_sphere(ndirs);
    let curve = decay_curve(&config, q, &radii, &dirs).map_err(from_core)?;
    let exponent = exponent_from_curve(&curve).map_err(from_core)?;

    let manifest = Manifest::new(
        "decay",
        vec![
            (
                "config",
                match config_path {
                    Some(p) => Json::Str(p.display().to_string()),
                    None => Json::Null,
                },
            ),
            ("polygon", str_param(polygon)),
            ("rmin", Json::Num(rmin)),
            ("rmax", Json::Num(rmax)),
            ("nr", Json::Int(nr as i64)),
            ("ndirs", Json::Int(ndirs as i64)),
            ("rtol", Json::Num(rtol)),
            ("out", path_param(&out.map(Path::to_path_buf))),
            (
                "multipole_out",
                path_param(&multipole_out.map(Path::to_path_buf)),
            ),
            (
                "lmax",
                match lmax {
                    Some(l) => Json::Int(l as i64),
                    None => Json::Null,
                },
            ),
        ],
    )
    .with_rank_tolerance(rtol);

    println!("fitted_exponent = {}", fmt_f64(exponent));

    let mut csv = String::from("R,F_R,log_R,log_F\n");
    for sample in &curve {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(sample.r),
            fmt_f64(sample.rms),
            fmt_f64(sample.r.ln()),
            fmt_f64(sample.rms.ln()),
        ));
    }
    emit(&csv, out, &manifest)?;

    if let Some(mp_path) = multipole_out {
        let m = polygon_m.expect("checked above");
        let l_top = lmax.unwrap_or(m + 2);
        let mut csv = String::from("l,theta,phi,C_l\n");
        for l in 0..=l_top {
            for dir in &dirs {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    l,
                    fmt_f64(dir.theta),
                    fmt_f64(dir.phi),
                    fmt_f64(multipole_coefficient(m, l, dir)),
                ));
            }
        }
        write_file(mp_path, &csv)?;
        write_file(&Manifest::sidecar_path(mp_path), &manifest.render())?;
    }
    Ok(())
}

fn cmd_verify(
    config_path: &Path,
    energy: Option<f64>,
    dir: &Option<String>,
    constant: &Option<String>,
    rtol: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let config = read_config(config_path)?;
    let radii = default_probe_radii(&config);
    let scattering_mode = energy.is_some() || dir.is_some() || constant.is_some();

    let manifest = Manifest::new(
        "verify",
        vec![
            ("config", Json::Str(config_path.display().to_string())),
            (
                "energy",
                match energy {
                    Some(e) => Json::Num(e),
                    None => Json::Null,
                },
            ),
            ("dir", str_param(dir)),
            ("constant", str_param(constant)),
            ("rtol", Json::Num(rtol)),
            ("out", path_param(&out.map(Path::to_path_buf))),
        ],
    )
    .with_rank_tolerance(rtol);

    let probe_radii = Json::floats(radii.iter().copied());
    let report = if scattering_mode {
        let energy = energy.unwrap_or(0.0);
        let _ = Energy::new(energy).map_err(from_core)?;
        let incident = build_incident(energy, dir, constant)?;
        let solution = solve_scattering(&config, &incident).map_err(from_core)?;
        let mut results = Vec::with_capacity(config.len());
        let mut max_residual = 0.0f64;
        for j in 0..config.len() {
            let ext = extract_contact_expansion(&solution, j, &radii).map_err(from_core)?;
            max_residual = max_residual.max(ext.residual);
            results.push(Json::Obj(vec![
                ("scatterer", Json::Int(j as i64)),
                ("pole", Json::complex(ext.pole_coeff.re, ext.pole_coeff.im)),
                (
                    "constant",
                    Json::complex(ext.const_coeff.re, ext.const_coeff.im),
                ),
                ("residual", Json::Num(ext.residual)),
            ]));
        }
        Json::Obj(vec![
            ("manifest", manifest.to_json()),
            ("input", Json::Str(config_path.display().to_string())),
            ("mode", Json::Str("scattering".to_string())),
            ("energy", Json::Num(energy)),
            ("incident", incident_json(&incident)),
            ("probe_radii", probe_radii),
            ("results", Json::Arr(results)),
            ("max_residual", Json::Num(max_residual)),
        ])
    } else {
        let basis = zero_energy_null_space(&config, rtol).map_err(from_core)?;
        if !basis.has_bound_state() {
            return Err(Failure::Empty(format!(
                "no bound state to verify: multiplicity 0 at rank tolerance {rtol:e}"
            )));
        }
        let mut vectors = Vec::with_capacity(basis.multiplicity());
        let mut max_residual = 0.0f64;
        for (v, q) in basis.basis().iter().enumerate() {
            let monopole = q.iter().sum::<f64>().abs() / (4.0 * std::f64::consts::PI);
            let mut results = Vec::with_capacity(config.len());
            for j in 0..config.len() {
                let ext =
                    extract_bound_state_contact(&config, q, j, &radii).map_err(from_core)?;
                max_residual = max_residual.max(ext.residual);
                results.push(Json::Obj(vec![
                    ("scatterer", Json::Int(j as i64)),
                    ("pole", Json::complex(ext.pole_coeff.re, ext.pole_coeff.im)),
                    (
                        "constant",
                        Json::complex(ext.const_coeff.re, ext.const_coeff.im),
                    ),
                    ("residual", Json::Num(ext.residual)),
                ]));
            }
            vectors.push(Json::Obj(vec![
                ("vector", Json::Int(v as i64)),
                ("monopole", Json::Num(monopole)),
                ("results", Json::Arr(results)),
            ]));
        }
        Json::Obj(vec![
            ("manifest", manifest.to_json()),
            ("input", Json::Str(config_path.display().to_string())),
            ("mode", Json::Str("bound_state".to_string())),
            ("multiplicity", Json::Int(basis.multiplicity() as i64)),
            ("probe_radii", probe_radii),
            ("vectors", Json::Arr(vectors)),
            ("max_residual", Json::Num(max_residual)),
        ])
    };
    emit(&report.render(), out, &manifest)
}
