//! Command-line front end: loads a model file or a named preset, runs the
//! steady-state / spectral / decay analyses, and writes deterministic CSV or
//! JSON artifacts (figure-reproduction datasets included).
//!
//! Exit codes: 0 success, 2 model parse error, 3 solver error, 4 usage
//! error.  Failures emit a machine-readable error JSON on stderr.  Thread
//! count is controlled by the `RAYON_NUM_THREADS` environment variable.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use lindlat::decay::{
    build_difference_stencil, fit_exponential_decay, momentum_poles, pencil_poles,
    transfer_matrix, PoleOptions,
};
use lindlat::evolution::build_dense;
use lindlat::modelfile::{load_model, preset_stencil};
use lindlat::models::{
    critical_boson_asymptotics, critical_boson_exact_1d, critical_boson_stencil,
    xy_chain_exact_gamma, xy_chain_stencil, CriticalBosonParams, XYChainParams,
    CRITICAL_BOSON_OFFDIAG_GAPLESS_LIMIT,
};
use lindlat::report::{
    render_covariance, render_decay, render_error, render_gap_curve, render_table, DecayReport,
    Format, Metadata,
};
use lindlat::spectral::{append_aux_dissipator, dissipative_gap, gap_along_path, GapCurve, PathSpec};
use lindlat::steady::{
    axis_correlations, axis_correlations_extrapolated, solve_steady_dense, solve_steady_momentum,
    SingularPolicy,
};
use lindlat::stencil::CouplingStencil;
use lindlat::Error;

#[derive(Parser)]
#[command(name = "lindlat", version, about = "Steady states, dissipative gaps and correlation \
decay of translation-invariant quadratic Lindbladian lattice models")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the steady-state covariance matrix.
    Steady {
        #[command(flatten)]
        model: ModelArgs,
        /// Lattice grid, e.g. `200` or `64x64` (defaults to the model extent).
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dissipative gap swept over a preset parameter or the auxiliary rate.
    Gap {
        #[command(flatten)]
        model: ModelArgs,
        /// Sweep specification `key=start:end:samples`; `key` is a preset
        /// parameter, or `kappa` for the auxiliary on-site dissipator.
        #[arg(long)]
        sweep: String,
        /// Momentum grid for the gap search (defaults by dimension).
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Gap along a continuous path between two Liouvillians, with the
    /// auxiliary dissipator ramped to keep the path gapped.
    GapPath {
        #[command(flatten)]
        model: ModelArgs,
        /// Model file of the path endpoint.
        #[arg(long, conflicts_with = "target_preset")]
        target: Option<PathBuf>,
        /// Preset name of the path endpoint.
        #[arg(long)]
        target_preset: Option<String>,
        /// Endpoint preset parameter, repeatable: --target-param eta=1.5
        #[arg(long = "target-param", value_name = "KEY=VALUE")]
        target_params: Vec<String>,
        /// Auxiliary dissipation rate on the middle leg of the path.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Number of path samples.
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Spatial decay analysis: transfer-matrix/pencil modes, momentum-space
    /// poles with correlation-length bounds, optional fit to a dense solve.
    Decay {
        #[command(flatten)]
        model: ModelArgs,
        /// Finite lattice for the numerical decay fit (1D models only).
        #[arg(long)]
        grid: Option<String>,
        /// Largest displacement used in the fit window.
        #[arg(long, default_value_t = 40)]
        max_r: usize,
        /// Fit burn-in; defaults to 2d + 2 past the inhomogeneous region.
        #[arg(long)]
        burn_in: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Emit the dataset for one figure panel: fig1-left, fig1-right, or
    /// fig2-a … fig2-f.
    Figure {
        /// Panel name.
        name: String,
        /// Override the default grid (4096 in 1D, 1024² in 2D, 128³ in 3D).
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Model-definition file.
    #[arg(long, conflicts_with = "preset")]
    model: Option<PathBuf>,
    /// Built-in preset: `xy_chain` or `critical_boson`.
    #[arg(long)]
    preset: Option<String>,
    /// Preset parameter, repeatable: --param eta=1.5
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct OutArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: FormatArg,
    /// Requested tolerance, recorded in the artifact metadata (the solvers
    /// use the fixed internal tolerances documented in the library).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("{}", render_error(&Error::Invalid(msg)));
            std::process::exit(4);
        }
        Err(CliError::Lib(e)) => {
            eprintln!("{}", render_error(&e));
            let code = match e {
                Error::Parse { .. } | Error::Invalid(_) | Error::NegativeRate { .. } => 2,
                _ => 3,
            };
            std::process::exit(code);
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Steady { model, grid, out } => cmd_steady(model, grid, out),
        Cmd::Gap { model, sweep, grid, out } => cmd_gap(model, sweep, grid, out),
        Cmd::GapPath { model, target, target_preset, target_params, kappa, samples, grid, out } => {
            cmd_gap_path(model, target, target_preset, target_params, kappa, samples, grid, out)
        }
        Cmd::Decay { model, grid, max_r, burn_in, out } => {
            cmd_decay(model, grid, max_r, burn_in, out)
        }
        Cmd::Figure { name, grid, out } => cmd_figure(&name, grid, out),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_steady(model: ModelArgs, grid: Option<String>, out: OutArgs) -> Result<(), CliError> {
    let (stencil, desc) = model.resolve()?;
    let grid = resolve_grid(&stencil, grid.as_deref())?;
    let field = if stencil.is_quasifree() {
        solve_steady_momentum(&stencil, &grid)?
    } else {
        solve_steady_dense(&build_dense(&stencil, &grid)?)?
    };
    let mut meta = out.metadata("steady", &desc);
    meta.config.insert("route".to_string(), route_name(&stencil).to_string());
    let text = render_covariance(&field, &meta, out.format.into())?;
    out.write(&text)
}

fn cmd_gap(
    model: ModelArgs,
    sweep: String,
    grid: Option<String>,
    out: OutArgs,
) -> Result<(), CliError> {
    let (base, desc) = model.resolve()?;
    let (key, values) = parse_sweep(&sweep)?;
    let grid = gap_grid(base.lattice.dims, grid.as_deref())?;
    let mut curve = GapCurve { parameters: Vec::new(), gaps: Vec::new(), argmax_k: Vec::new() };
    for &v in &values {
        let stencil = if key == "kappa" {
            append_aux_dissipator(&base, v)?
        } else {
            let preset = model
                .preset
                .as_deref()
                .ok_or_else(|| usage("sweeping a model parameter requires --preset"))?;
            let mut params = model.param_map()?;
            params.insert(key.clone(), v);
            preset_stencil(preset, &params)?
        };
        let point = dissipative_gap(&stencil, &grid)?;
        curve.parameters.push(v);
        curve.gaps.push(point.gap);
        curve.argmax_k.push(point.argmax_k);
    }
    let mut meta = out.metadata("gap", &desc);
    meta.config.insert("sweep".to_string(), sweep.clone());
    meta.config.insert("grid".to_string(), grid_string(&grid));
    out.write(&render_gap_curve(&curve, &meta, out.format.into()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_gap_path(
    model: ModelArgs,
    target: Option<PathBuf>,
    target_preset: Option<String>,
    target_params: Vec<String>,
    kappa: f64,
    samples: usize,
    grid: Option<String>,
    out: OutArgs,
) -> Result<(), CliError> {
    let (start, desc) = model.resolve()?;
    let (end, end_desc) = match (target, target_preset) {
        (Some(path), None) => {
            let desc = format!("file:{}", path.display());
            (load_model(&path)?, desc)
        }
        (None, Some(name)) => {
            let params = parse_params(&target_params)?;
            let desc = describe_preset(&name, &params);
            (preset_stencil(&name, &params)?, desc)
        }
        _ => return Err(usage("provide the path endpoint via --target or --target-preset")),
    };
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let grid = gap_grid(start.lattice.dims, grid.as_deref())?;
    let path = PathSpec::new(start, end, PathSpec::default_schedule(kappa))?;
    let curve = gap_along_path(&path, &grid, samples)?;
    let mut meta = out.metadata("gap-path", &desc);
    meta.config.insert("target".to_string(), end_desc);
    meta.config.insert("kappa".to_string(), format!("{kappa}"));
    meta.config.insert("grid".to_string(), grid_string(&grid));
    out.write(&render_gap_curve(&curve, &meta, out.format.into()))
}

fn cmd_decay(
    model: ModelArgs,
    grid: Option<String>,
    max_r: usize,
    burn_in: Option<f64>,
    out: OutArgs,
) -> Result<(), CliError> {
    let (stencil, desc) = model.resolve()?;
    let dims = stencil.lattice.dims;

    let mut modes = Vec::new();
    if dims == 1 {
        let ds = build_difference_stencil(&stencil)?;
        modes = match transfer_matrix(&ds) {
            Ok(tm) => tm.modes,
            Err(Error::SingularLeadingBlock { .. }) => pencil_poles(&ds)?.modes,
            Err(e) => return Err(e.into()),
        };
    }

    let mut poles = Vec::new();
    let mut xi_bounds = Vec::new();
    if stencil.is_quasifree() {
        for axis in 0..dims {
            let mp = momentum_poles(&stencil, axis, &PoleOptions::default())?;
            xi_bounds.push(mp.xi);
            if axis == 0 {
                poles = mp.poles;
            }
        }
    }

    let fit = match (&grid, dims) {
        (Some(g), 1) => {
            let shape = parse_grid(g)?;
            let field = solve_steady_dense(&build_dense(&stencil, &shape)?)?;
            let top = (shape[0] / 2).saturating_sub(1).min(max_r);
            let samples: Vec<(f64, f64)> = (1..=top as i64)
                .map(|r| {
                    let blk = field.gamma(&[r]).expect("real-space field");
                    (r as f64, blk.amax())
                })
                .collect();
            let burn = burn_in.unwrap_or(2.0 * stencil.range() as f64 + 2.0);
            Some(fit_exponential_decay(&samples, burn)?)
        }
        (Some(_), _) => return Err(usage("--grid decay fits are implemented for 1D models")),
        (None, _) => None,
    };

    let report = DecayReport::new(modes, poles, xi_bounds, fit)?;
    let mut meta = out.metadata("decay", &desc);
    if let Some(g) = grid {
        meta.config.insert("grid".to_string(), g);
        meta.config.insert("max_r".to_string(), max_r.to_string());
    }
    out.write(&render_decay(&report, &meta, out.format.into()))
}

// ---------------------------------------------------------------------------
// Figure datasets
// ---------------------------------------------------------------------------

type Columns = Vec<(String, Vec<f64>)>;

fn cmd_figure(name: &str, grid: Option<String>, out: OutArgs) -> Result<(), CliError> {
    let grid = grid.as_deref().map(parse_grid).transpose()?;
    let columns = match name {
        "fig1-left" => fig1_left(first_or(&grid, 400))?,
        "fig1-right" => fig1_right(first_or(&grid, 2048))?,
        "fig2-a" => fig2_1d(first_or(&grid, 4096), false)?,
        "fig2-b" => fig2_1d(first_or(&grid, 4096), true)?,
        "fig2-c" => fig2_d2_diagonal(shape_or(&grid, 2, 1024))?,
        "fig2-d" => fig2_d2_offdiagonal(shape_or(&grid, 2, 1024))?,
        "fig2-e" => fig2_d3(shape_or(&grid, 3, 128), false)?,
        "fig2-f" => fig2_d3(shape_or(&grid, 3, 128), true)?,
        other => return Err(usage(format!("unknown figure `{other}`"))),
    };
    let mut meta = out.metadata("figure", name);
    if let Some(g) = &grid {
        meta.config.insert("grid".to_string(), grid_string(g));
    }
    let borrowed: Vec<(&str, Vec<f64>)> =
        columns.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    out.write(&render_table(&borrowed, &meta, out.format.into()))
}

/// Fig. 1 left: exponential decay of |γ(r)| for the XY chain at ζ = 0
/// (with the closed-form prediction) and ζ = 1/4 (with the fitted β^r line).
fn fig1_left(n: usize) -> Result<Columns, CliError> {
    let base = XYChainParams { mu: 0.0, alpha: 0.2, eta: 1.0, phi: 2.0 * PI / 5.0, zeta: 0.0 };
    let max_r = 40.min(n / 2 - 1);
    let rs: Vec<f64> = (1..=max_r as i64).map(|r| r as f64).collect();
    let mut columns: Columns = vec![("r".to_string(), rs.clone())];

    for &zeta in &[0.0, 0.25] {
        let p = XYChainParams { zeta, ..base };
        let field = solve_steady_dense(&build_dense(&xy_chain_stencil(&p), &[n])?)?;
        let values: Vec<f64> =
            (1..=max_r as i64).map(|r| field.gamma(&[r]).expect("real space").amax()).collect();
        let label = if zeta == 0.0 { "zeta0" } else { "zeta25" };
        columns.push((format!("gamma_abs_{label}"), values.clone()));
        let predicted: Vec<f64> = if zeta == 0.0 {
            (1..=max_r as i64)
                .map(|r| xy_chain_exact_gamma(r, p.phi, p.eta).value.abs())
                .collect()
        } else {
            let samples: Vec<(f64, f64)> = rs.iter().copied().zip(values).collect();
            let fit = fit_exponential_decay(&samples, 6.0)?;
            rs.iter().map(|&r| fit.prefactor * fit.rate.powf(r)).collect()
        };
        columns.push((format!("predicted_{label}"), predicted));
    }
    Ok(columns)
}

/// Fig. 1 right: dissipative gap Δ(φ) of the quasifree XY chain (α = 1/2,
/// η = 1) for auxiliary rates κ ∈ {0, 0.5, 1}.
fn fig1_right(momentum_grid: usize) -> Result<Columns, CliError> {
    let samples = 200usize;
    let phis: Vec<f64> = (0..=samples).map(|i| 2.0 * PI * i as f64 / samples as f64).collect();
    let mut columns: Columns = vec![("phi".to_string(), phis.clone())];
    for &kappa in &[0.0, 0.5, 1.0] {
        let mut gaps = Vec::with_capacity(phis.len());
        for &phi in &phis {
            let p = XYChainParams { mu: 0.0, alpha: 0.5, eta: 1.0, phi, zeta: 0.0 };
            let stencil = append_aux_dissipator(&xy_chain_stencil(&p), kappa)?;
            gaps.push(dissipative_gap(&stencil, &[momentum_grid])?.gap);
        }
        let label = format!("gap_kappa{}", (kappa * 10.0).round() as i64);
        columns.push((label, gaps));
    }
    Ok(columns)
}

/// Fig. 2(a)/(b): 1D boson correlations vs r for a sequence of gaps η − 1,
/// with the exact residue-integral values as the reference curves.
fn fig2_1d(grid: usize, off_diagonal: bool) -> Result<Columns, CliError> {
    let mut etas = vec![("em3", 1.0 + 1e-3), ("em4", 1.0 + 1e-4), ("em5", 1.0 + 1e-5), ("em6", 1.0 + 1e-6)];
    if off_diagonal {
        etas.push(("e0", 1.0));
    }
    let max_r = 60usize;
    let rs: Vec<f64> = (if off_diagonal { 1 } else { 0 }..=max_r as i64).map(|r| r as f64).collect();
    let mut columns: Columns = vec![("r".to_string(), rs.clone())];
    for (label, eta) in etas {
        let stencil = critical_boson_stencil(&CriticalBosonParams { dims: 1, eta });
        let corr = axis_correlations(&stencil, &[grid], 0, max_r, SingularPolicy::Omit)?;
        let entry = if off_diagonal { (0, 1) } else { (0, 0) };
        let numeric: Vec<f64> = rs.iter().map(|&r| corr.values[r as usize][entry]).collect();
        columns.push((format!("gamma_{label}"), numeric));
        let exact: Vec<f64> = rs
            .iter()
            .map(|&r| {
                if eta > 1.0 {
                    let e = critical_boson_exact_1d(r as i64, eta).expect("gapped");
                    if off_diagonal {
                        e.off_diagonal
                    } else {
                        e.diagonal
                    }
                } else {
                    CRITICAL_BOSON_OFFDIAG_GAPLESS_LIMIT
                }
            })
            .collect();
        columns.push((format!("exact_{label}"), exact));
    }
    Ok(columns)
}

/// Fig. 2(c): logarithmic decay of γ_{+,+} in D = 2 for small gaps, against
/// the asymptotic log law.
fn fig2_d2_diagonal(shape: Vec<usize>) -> Result<Columns, CliError> {
    let max_r = 100usize;
    let rs: Vec<f64> = (1..=max_r as i64).map(|r| r as f64).collect();
    let mut columns: Columns = vec![("r".to_string(), rs.clone())];
    for (label, eta) in [("em4", 1.0 + 1e-4), ("em6", 1.0 + 1e-6)] {
        let p = CriticalBosonParams { dims: 2, eta };
        let corr = axis_correlations(&critical_boson_stencil(&p), &shape, 0, max_r, SingularPolicy::Omit)?;
        columns.push((
            format!("gamma_pp_{label}"),
            rs.iter().map(|&r| corr.values[r as usize][(0, 0)]).collect(),
        ));
        let law: Vec<f64> = rs
            .iter()
            .map(|&r| {
                critical_boson_asymptotics(&p, r, &[1.0, 0.0], None)
                    .expect("D = 2")
                    .diagonal
                    .expect("gapped")
            })
            .collect();
        columns.push((format!("log_law_{label}"), law));
    }
    Ok(columns)
}

/// Fig. 2(d): 1/r decay of γ_{+,−} in D = 2 at η = 1 along the x axis.
fn fig2_d2_offdiagonal(shape: Vec<usize>) -> Result<Columns, CliError> {
    let p = CriticalBosonParams { dims: 2, eta: 1.0 };
    let max_r = 60usize;
    let rs: Vec<f64> = (1..=max_r as i64).map(|r| r as f64).collect();
    let corr = axis_correlations(&critical_boson_stencil(&p), &shape, 0, max_r, SingularPolicy::Omit)?;
    let numeric = rs.iter().map(|&r| corr.values[r as usize][(0, 1)]).collect();
    let law = rs
        .iter()
        .map(|&r| critical_boson_asymptotics(&p, r, &[1.0, 0.0], None).expect("D = 2").off_diagonal)
        .collect();
    Ok(vec![("r".to_string(), rs), ("gamma_pm".to_string(), numeric), ("law".to_string(), law)])
}

/// Fig. 2(e)/(f): D = 3 at η = 1; γ_{+,+}·r converging to 9/(4π), and
/// γ_{+,−}·r² against the 1/r² law.  Uses grid extrapolation (L, 2L, 4L) to
/// remove the periodic-image offset of the gapless momentum sum.
fn fig2_d3(shape: Vec<usize>, off_diagonal: bool) -> Result<Columns, CliError> {
    let p = CriticalBosonParams { dims: 3, eta: 1.0 };
    let max_r = 40usize.min(shape[0] / 2 - 1);
    let rs: Vec<f64> = (1..=max_r as i64).map(|r| r as f64).collect();
    let corr = axis_correlations_extrapolated(
        &critical_boson_stencil(&p),
        &shape,
        0,
        max_r,
        SingularPolicy::Omit,
    )?;
    let direction = [1.0, 0.0, 0.0];
    if off_diagonal {
        let numeric = rs.iter().map(|&r| corr.values[r as usize][(0, 1)] * r * r).collect();
        let law = rs
            .iter()
            .map(|&r| {
                critical_boson_asymptotics(&p, r, &direction, None).expect("D = 3").off_diagonal
                    * r
                    * r
            })
            .collect();
        Ok(vec![
            ("r".to_string(), rs),
            ("gamma_pm_r2".to_string(), numeric),
            ("law_r2".to_string(), law),
        ])
    } else {
        let numeric = rs.iter().map(|&r| corr.values[r as usize][(0, 0)] * r).collect();
        let law = rs
            .iter()
            .map(|&r| {
                critical_boson_asymptotics(&p, r, &direction, None)
                    .expect("D = 3")
                    .diagonal
                    .expect("D = 3 diagonal")
                    * r
            })
            .collect();
        Ok(vec![
            ("r".to_string(), rs),
            ("gamma_pp_r".to_string(), numeric),
            ("law_r".to_string(), law),
        ])
    }
}

// ---------------------------------------------------------------------------
// Plumbing
// ---------------------------------------------------------------------------

impl ModelArgs {
    fn param_map(&self) -> Result<BTreeMap<String, f64>, CliError> {
        parse_params(&self.params)
    }

    fn resolve(&self) -> Result<(CouplingStencil, String), CliError> {
        match (&self.model, &self.preset) {
            (Some(path), None) => {
                if !self.params.is_empty() {
                    return Err(usage("--param is only valid together with --preset"));
                }
                Ok((load_model(path)?, format!("file:{}", path.display())))
            }
            (None, Some(name)) => {
                let params = self.param_map()?;
                let desc = describe_preset(name, &params);
                Ok((preset_stencil(name, &params)?, desc))
            }
            _ => Err(usage("provide a model via --model <path> or --preset <name>")),
        }
    }
}

impl OutArgs {
    fn metadata(&self, command: &str, model: &str) -> Metadata {
        let mut meta = Metadata::new(command, model);
        if let Some(tol) = self.tol {
            meta.config.insert("requested_tol".to_string(), format!("{tol}"));
        }
        meta
    }

    fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut map = BTreeMap::new();
    for item in items {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("parameter `{item}` is not of the form key=value")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| usage(format!("parameter `{item}` has a non-numeric value")))?;
        if map.insert(key.to_string(), value).is_some() {
            return Err(usage(format!("parameter `{key}` given twice")));
        }
    }
    Ok(map)
}

fn describe_preset(name: &str, params: &BTreeMap<String, f64>) -> String {
    let mut desc = format!("preset:{name}");
    for (k, v) in params {
        desc.push_str(&format!(" {k}={v}"));
    }
    desc
}

fn parse_grid(text: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = text.split(['x', ',']).collect();
    let mut grid = Vec::with_capacity(parts.len());
    for p in parts {
        let l: usize = p
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad grid component `{p}`")))?;
        if l < 2 {
            return Err(usage("grid lengths must be at least 2"));
        }
        grid.push(l);
    }
    Ok(grid)
}

fn resolve_grid(stencil: &CouplingStencil, flag: Option<&str>) -> Result<Vec<usize>, CliError> {
    let grid = match flag {
        Some(text) => parse_grid(text)?,
        None => stencil
            .lattice
            .shape()
            .map_err(|_| usage("the model has no finite extent; provide --grid"))?
            .to_vec(),
    };
    if grid.len() != stencil.lattice.dims {
        return Err(usage(format!(
            "grid has {} components but the model is {}-dimensional",
            grid.len(),
            stencil.lattice.dims
        )));
    }
    Ok(grid)
}

/// Momentum grid used for gap searches, sized by dimension so a sweep stays
/// interactive: 2048 (1D), 256² (2D), 64³ (3D).
fn gap_grid(dims: usize, flag: Option<&str>) -> Result<Vec<usize>, CliError> {
    match flag {
        Some(text) => {
            let g = parse_grid(text)?;
            if g.len() != dims {
                return Err(usage(format!("grid needs {dims} components")));
            }
            Ok(g)
        }
        None => {
            let per_axis = match dims {
                1 => 2048,
                2 => 256,
                _ => 64,
            };
            Ok(vec![per_axis; dims])
        }
    }
}

fn parse_sweep(text: &str) -> Result<(String, Vec<f64>), CliError> {
    let (key, range) = text
        .split_once('=')
        .ok_or_else(|| usage("--sweep must be of the form key=start:end:samples"))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, end, samples] = parts[..] else {
        return Err(usage("--sweep must be of the form key=start:end:samples"));
    };
    let start: f64 = start.parse().map_err(|_| usage("bad sweep start"))?;
    let end: f64 = end.parse().map_err(|_| usage("bad sweep end"))?;
    let samples: usize = samples.parse().map_err(|_| usage("bad sweep sample count"))?;
    if samples < 2 {
        return Err(usage("sweep needs at least 2 samples"));
    }
    let values = (0..samples)
        .map(|i| start + (end - start) * i as f64 / (samples - 1) as f64)
        .collect();
    Ok((key.to_string(), values))
}

fn grid_string(grid: &[usize]) -> String {
    grid.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("x")
}

fn route_name(stencil: &CouplingStencil) -> &'static str {
    if stencil.is_quasifree() {
        "momentum"
    } else {
        "dense"
    }
}

fn first_or(grid: &Option<Vec<usize>>, default: usize) -> usize {
    grid.as_ref().and_then(|g| g.first().copied()).unwrap_or(default)
}

fn shape_or(grid: &Option<Vec<usize>>, dims: usize, default: usize) -> Vec<usize> {
    match grid {
        Some(g) if g.len() == dims => g.clone(),
        Some(g) if g.len() == 1 => vec![g[0]; dims],
        _ => vec![default; dims],
    }
}
