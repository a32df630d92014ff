//! `polyperiod` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use polyperiod_core::conformal::{mesh_cells, mesh_weights, WeightScheme, DELAUNAY_TOLERANCE};
use polyperiod_core::dec::{energy_report, form_energy_report, Cochain0};
use polyperiod_core::linalg::CMatrix;
use polyperiod_core::periods::{compute_periods, PeriodOptions, PeriodResult};
use polyperiod_core::siegel::{compare, siegel_reduce};
use polyperiod_core::surfaces::{flat_form, reference_matrix};
use polyperiod_core::{DelaunayEdge, Error as CoreError, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{parse_scheme, Generator, InputSource, Loaded, OutputFormat, RunConfig, Surface};
use crate::error::{exit, CliError};
use crate::report::{CompareReport, DelaunayJson, EnergyJson, MatrixJson, PeriodReport, SourceJson, ValidateReport};

/// Default tolerance for Riemann relations and reference comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// `validate` warns about triangles with a smaller angle.
pub const THIN_ANGLE_DEG: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(name = "polyperiod", version, about = "Discrete period matrices of polyhedral and square-tiled surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topology, Delaunay margins and mesh quality of the input.
    Validate(InputArgs),
    /// Period matrices Π and Π* with residuals.
    Compute(InputArgs),
    /// Siegel-reduced distance between the computed Π and a reference.
    Compare(CompareArgs),
    /// Dirichlet energy, conformal energy and area of a function or form.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Closed triangle mesh in OBJ format.
    #[arg(long, value_name = "PATH")]
    pub mesh: Option<PathBuf>,
    /// Square-tiled gluing in JSON format.
    #[arg(long, value_name = "PATH")]
    pub spec: Option<PathBuf>,
    /// flat-torus:NxM[:RE,IM], square-torus, omega1, omega2, omega3 or torus:N,M,R,r.
    #[arg(long, value_name = "NAME:ARGS")]
    pub generate: Option<Generator>,
    #[arg(long, value_parser = parse_scheme, value_name = "intrinsic|extrinsic|unit")]
    pub scheme: Option<WeightScheme>,
    /// Subdivide every square (or flat torus cell) N × N times.
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub refine: usize,
    /// Vertex the homology basis is grown from.
    #[arg(long, value_name = "IDX")]
    pub root: Option<usize>,
    #[arg(long, value_name = "json|text")]
    pub out: Option<OutputFormat>,
    /// Tolerance for the Riemann relations and reference comparisons.
    #[arg(long, value_name = "X")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Use a matrix (reference name or JSON file) instead of computing one.
    #[arg(long, value_name = "NAME|PATH")]
    pub matrix: Option<String>,
    /// Reference name (omega1, omega2, omega3, wente, lawson) or JSON file
    /// holding a `compute` report or a bare `{re, im}` matrix.
    #[arg(long, value_name = "NAME|PATH")]
    pub reference: String,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Vertex function: one `re [im]` line per vertex of Γ, then per face.
    #[arg(long, value_name = "PATH")]
    pub function: Option<PathBuf>,
    /// Energies of dz on a translation surface instead of a function.
    #[arg(long)]
    pub flat_form: bool,
    /// Random function with values in the unit square, from this seed.
    #[arg(long, value_name = "SEED")]
    pub random: Option<u64>,
}

impl InputArgs {
    fn source(&self) -> Result<Option<InputSource>, CliError> {
        let mut sources = Vec::new();
        if let Some(p) = &self.mesh {
            sources.push(InputSource::Mesh(p.clone()));
        }
        if let Some(p) = &self.spec {
            sources.push(InputSource::Spec(p.clone()));
        }
        if let Some(g) = &self.generate {
            sources.push(InputSource::Generate(g.clone()));
        }
        if sources.len() > 1 {
            return Err(CliError::Usage("give only one of --mesh, --spec and --generate".into()));
        }
        Ok(sources.pop())
    }

    pub fn config(&self, default_out: OutputFormat) -> Result<RunConfig, CliError> {
        let input = self
            .source()?
            .ok_or_else(|| CliError::Usage("one of --mesh, --spec or --generate is required".into()))?;
        let cfg = RunConfig {
            input,
            scheme: self.scheme,
            refine: self.refine,
            root: self.root,
            out: self.out.unwrap_or(default_out),
            tol: self.tol,
        };
        cfg.check()?;
        Ok(cfg)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if code == 0 { exit::OK } else { exit::INVALID };
        }
    };
    match run(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Validate(a) => cmd_validate(&a.config(OutputFormat::Text)?, out),
        Command::Compute(a) => {
            let cfg = a.config(OutputFormat::Json)?;
            let report = cmd_compute(&cfg)?;
            emit(out, cfg.out, &report, || report.to_text())?;
            Ok(exit::OK)
        }
        Command::Compare(a) => {
            let report = cmd_compare(a)?;
            let format = a.input.out.unwrap_or(OutputFormat::Text);
            emit(out, format, &report, || report.to_text())?;
            Ok(exit::OK)
        }
        Command::Diagnose(a) => {
            let cfg = a.input.config(OutputFormat::Text)?;
            let report = cmd_diagnose(&cfg, a)?;
            emit(out, cfg.out, &report, || report.to_text())?;
            Ok(exit::OK)
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, format: OutputFormat, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
    match format {
        OutputFormat::Json => {
            let s = serde_json::to_string_pretty(value).expect("reports serialize");
            writeln!(out, "{s}")?;
        }
        OutputFormat::Text => write!(out, "{}", text())?,
    }
    Ok(())
}

/// Validation report; exits with [`exit::INVALID`] when the selected
/// scheme has Delaunay violations.
pub fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = cfg.load()?;
    let report = validate_report(cfg, &loaded)?;
    emit(out, cfg.out, &report, || report.to_text())?;
    if report.valid {
        return Ok(exit::OK);
    }
    let selected = report.delaunay.iter().find(|d| d.scheme == cfg.scheme().as_str());
    let edges = selected
        .map(|d| {
            d.violations
                .iter()
                .map(|&(edge, a, b, rho)| DelaunayEdge {
                    edge,
                    endpoints: [a, b],
                    rho,
                })
                .collect()
        })
        .unwrap_or_default();
    Err(CoreError::DelaunayViolation(edges).into())
}

pub fn validate_report(cfg: &RunConfig, loaded: &Loaded) -> Result<ValidateReport, CliError> {
    let Some(mesh) = loaded.mesh() else {
        let g = loaded.graph(WeightScheme::Unit, cfg.refine)?;
        let mut report = ValidateReport::new(g.topology_report());
        let (lo, _) = g.rho_range();
        report.delaunay.push(DelaunayJson {
            scheme: g.scheme().as_str().into(),
            min_rho: Some(lo),
            violations: Vec::new(),
        });
        return Ok(report);
    };
    let mut report = ValidateReport::new(mesh.topology_report());
    let lengths = mesh.edge_lengths()?;
    report.min_edge_length = lengths.iter().map(|l| l.1).reduce(f64::min);
    report.max_edge_length = lengths.iter().map(|l| l.1).reduce(f64::max);
    let angle = mesh.min_angle_deg();
    report.min_angle_deg = Some(angle);
    if angle < THIN_ANGLE_DEG {
        report
            .warnings
            .push(format!("thin triangles: smallest angle {angle:.3} deg is below {THIN_ANGLE_DEG} deg"));
    }
    let cells = mesh_cells(mesh);
    let selected = cfg.scheme();
    for scheme in [WeightScheme::Intrinsic, WeightScheme::Extrinsic] {
        match mesh_weights(mesh, scheme) {
            Ok(w) => {
                let violations: Vec<_> = w
                    .iter()
                    .enumerate()
                    .filter(|(_, &r)| r.is_nan() || r <= DELAUNAY_TOLERANCE)
                    .map(|(e, &r)| (e, cells.edges[e][0], cells.edges[e][1], r))
                    .collect();
                if scheme == selected && !violations.is_empty() {
                    report.valid = false;
                }
                report.delaunay.push(DelaunayJson {
                    scheme: scheme.as_str().into(),
                    min_rho: w.iter().copied().reduce(f64::min),
                    violations,
                });
            }
            Err(e) => {
                if scheme == selected {
                    return Err(e.into());
                }
                report.delaunay.push(DelaunayJson {
                    scheme: scheme.as_str().into(),
                    min_rho: None,
                    violations: Vec::new(),
                });
                report.warnings.push(format!("{} weights: {e}", scheme.as_str()));
            }
        }
    }
    Ok(report)
}

fn source_json(cfg: &RunConfig, loaded: &Loaded) -> SourceJson {
    SourceJson {
        kind: cfg.input.kind().into(),
        name: loaded.label.clone(),
        refine: cfg.refine,
        root: cfg.root.unwrap_or(0),
    }
}

/// Period result of the configured input, with mesh angle filled in.
pub fn compute_result(cfg: &RunConfig, loaded: &Loaded) -> Result<PeriodResult, CliError> {
    let g = loaded.graph(cfg.scheme(), cfg.refine)?;
    let root = cfg.root.unwrap_or(0);
    if root >= g.vertex_count() {
        return Err(CliError::Usage(format!(
            "--root {root} is out of range ({} vertices)",
            g.vertex_count()
        )));
    }
    let options = PeriodOptions {
        root,
        ..PeriodOptions::default()
    };
    let mut result = compute_periods(&g, options)?.result;
    result.mesh.min_angle_deg = loaded.mesh().map(|m| m.min_angle_deg());
    Ok(result)
}

pub fn cmd_compute(cfg: &RunConfig) -> Result<PeriodReport, CliError> {
    let loaded = cfg.load()?;
    let result = compute_result(cfg, &loaded)?;
    let reduced = siegel_reduce(&result.pi)?;
    Ok(PeriodReport::new(
        &result,
        &reduced,
        source_json(cfg, &loaded),
        cfg.tol.unwrap_or(DEFAULT_TOLERANCE),
    ))
}

/// Reference name or JSON file.
pub fn load_matrix(spec: &str) -> Result<(String, CMatrix), CliError> {
    if let Some(r) = reference_matrix(spec) {
        return Ok((r.name.to_string(), r.matrix));
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "`{spec}` is neither a reference name (omega1, omega2, omega3, wente, lawson) nor a file"
        )));
    }
    let bad = |message: String| CliError::BadFile {
        path: spec.to_string(),
        message,
    };
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path)?).map_err(|e| bad(e.to_string()))?;
    let matrix = value.get("pi").unwrap_or(&value);
    let m: MatrixJson = serde_json::from_value(matrix.clone()).map_err(|e| bad(e.to_string()))?;
    Ok((spec.to_string(), m.to_matrix().map_err(bad)?))
}

pub fn cmd_compare(args: &CompareArgs) -> Result<CompareReport, CliError> {
    let computed = match (&args.matrix, args.input.source()?) {
        (Some(m), None) => load_matrix(m)?.1,
        (None, Some(_)) => {
            let cfg = args.input.config(OutputFormat::Text)?;
            let loaded = cfg.load()?;
            compute_result(&cfg, &loaded)?.pi
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--matrix replaces --mesh, --spec and --generate".into()));
        }
        (None, None) => {
            return Err(CliError::Usage("one of --mesh, --spec, --generate or --matrix is required".into()));
        }
    };
    let (name, reference) = load_matrix(&args.reference)?;
    let distance = compare(&computed, &reference)?;
    let tolerance = args.input.tol.unwrap_or(DEFAULT_TOLERANCE);
    Ok(CompareReport {
        genus: computed.rows(),
        reference: name,
        computed: (&siegel_reduce(&computed)?).into(),
        expected: (&siegel_reduce(&reference)?).into(),
        distance,
        tolerance,
        within_tolerance: distance <= tolerance,
    })
}

/// Complex values, one per non-empty line: `re` or `re im`; `#` starts a comment.
pub fn parse_function(text: &str) -> Result<Vec<C64>, String> {
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parts: Vec<&str> = content.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("line {}: invalid number `{s}`", k + 1))
        };
        let z = match parts[..] {
            [re] => C64::new(parse(re)?, 0.0),
            [re, im] => C64::new(parse(re)?, parse(im)?),
            _ => return Err(format!("line {}: expected `re [im]`", k + 1)),
        };
        values.push(z);
    }
    Ok(values)
}

pub fn cmd_diagnose(cfg: &RunConfig, args: &DiagnoseArgs) -> Result<EnergyJson, CliError> {
    let chosen = usize::from(args.function.is_some()) + usize::from(args.flat_form) + usize::from(args.random.is_some());
    if chosen != 1 {
        return Err(CliError::Usage("give exactly one of --function, --flat-form and --random".into()));
    }
    let loaded = cfg.load()?;
    let g = loaded.graph(cfg.scheme(), cfg.refine)?;
    if args.flat_form {
        let Surface::Gluing(spec) = &loaded.surface else {
            return Err(CliError::Usage("--flat-form needs a square-tiled input".into()));
        };
        let alpha = flat_form(spec, cfg.refine)?
            .ok_or_else(|| CliError::Usage("--flat-form needs a translation surface (no half-turn gluings)".into()))?;
        return Ok(EnergyJson::new("flat form dz", &form_energy_report(&g, &alpha)));
    }
    let n = g.vertex_count() + g.face_count();
    let (subject, values) = if let Some(path) = &args.function {
        let text = std::fs::read_to_string(path)?;
        let values = parse_function(&text).map_err(|message| CliError::BadFile {
            path: path.display().to_string(),
            message,
        })?;
        (path.display().to_string(), values)
    } else {
        let seed = args.random.expect("one subject is set");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        (format!("random function (seed {seed})"), values)
    };
    let f = Cochain0::from_concatenated(&g, &values)?;
    Ok(EnergyJson::new(subject, &energy_report(&g, &f)))
}
