use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sclg::flow::{
    closed_form_discrepancy, closed_form_lines, flow_lines, stationary_points, symbol_p, FlowLine, LineEnd,
    PhaseSpaceState, POLE_WINDOW,
};
use sclg::grid::{Axis, GridSpec, SampledGrid};
use sclg::harness::{
    egorov_order, figure1_closed_form, figure1_frames, figure2_flowlines, DEFAULT_DT, DEFAULT_GRID_POINTS,
};
use sclg::modes::{hg_mode_2d, lg_mode, CoefficientMatrix, CoefficientVector, ModeIndex};
use sclg::operator::{evolved_lg_field, DEFAULT_TRUNCATION};
use sclg::wigner::{wigner_extended, wigner_standard};
use sclg::Complex64;

use crate::bundle::{stem_of, write_atomic, write_bundle, write_json};
use crate::error::{CliError, CliResult};
use crate::flowfile::{read_seeds, write_flow_lines};
use crate::gridarg::parse_grid;
use crate::svg::{contact_sheet, flow_portrait};

#[derive(Parser, Debug)]
#[command(name = "sclg", version, about = "Semiclassical HG/LG modes, Wigner transforms and Hamilton flow")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a Hermite-Gaussian or Laguerre-Gaussian mode on a grid.
    Modes(ModesArgs),
    /// Sample the standard Wigner transform W(h_m, h_n) or the extended transform of h_mn.
    Wigner(WignerArgs),
    /// Trace Hamilton flow lines of the cubic model symbol.
    Flow(FlowArgs),
    /// Sample the evolved LG mode (U_t* W~) h_mn.
    Evolve(EvolveArgs),
    /// Measure the transport error against h and fit its order.
    Egorov(EgorovArgs),
    /// Regenerate the figure data and plots.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeKind {
    Hg,
    Lg,
}

#[derive(Args, Debug)]
pub struct ModesArgs {
    #[arg(long, value_enum)]
    pub kind: ModeKind,
    /// HG index in x.
    #[arg(long, required_if_eq("kind", "hg"))]
    pub m: Option<usize>,
    /// HG index in y.
    #[arg(long, required_if_eq("kind", "hg"))]
    pub n: Option<usize>,
    /// First LG index.
    #[arg(long, required_if_eq("kind", "lg"))]
    pub j: Option<usize>,
    /// Second LG index.
    #[arg(long, required_if_eq("kind", "lg"))]
    pub k: Option<usize>,
    /// Semiclassical parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub h: f64,
    /// min:max:count for both axes, or min:max:count,min:max:count.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,
    /// Output stem; writes STEM.json and STEM.csv (or STEM_re.csv and STEM_im.csv).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WignerKind {
    Standard,
    Extended,
}

#[derive(Args, Debug)]
pub struct WignerArgs {
    #[arg(long, value_enum)]
    pub kind: WignerKind,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Implicit midpoint integration.
    Midpoint,
    /// Classified closed-form solutions.
    Closed,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub r2: f64,
    /// CSV of seed points (columns x, xi). Defaults to a square lattice on [-1, 1]².
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// Points per axis of the default seed lattice.
    #[arg(long, default_value_t = 9)]
    pub lattice: usize,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = DEFAULT_DT, allow_negative_numbers = true)]
    pub dt: f64,
    /// Keep every STRIDE-th step.
    #[arg(long, default_value_t = 20)]
    pub stride: usize,
    #[arg(long, value_enum, default_value_t = Method::Midpoint)]
    pub method: Method,
    /// Also report the largest closed-form vs integrator discrepancy.
    #[arg(long)]
    pub compare: bool,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,
    /// HG truncation of the propagator.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub dim: usize,
    /// Output stem; |field| goes to STEM_abs.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EgorovArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    /// Strictly decreasing values of h, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub h_list: Vec<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    /// Output JSON path.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Args, Debug)]
pub struct FiguresArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Grid of the figure 1 frames.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-4:4:256")]
    pub grid: GridSpec,
}

/// Caps the global thread pool at `SCLG_THREADS` when set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("SCLG_THREADS") else {
        return Ok(());
    };
    let n: usize = match value.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(CliError::usage(format!("SCLG_THREADS must be a positive integer, got `{value}`"))),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::usage(e.to_string()))
}

pub fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Modes(a) => cmd_modes(&a),
        Command::Wigner(a) => cmd_wigner(&a),
        Command::Flow(a) => cmd_flow(&a),
        Command::Evolve(a) => cmd_evolve(&a),
        Command::Egorov(a) => cmd_egorov(&a),
        Command::Figures(a) => cmd_figures(&a),
    }
}

pub fn cmd_modes(a: &ModesArgs) -> CliResult<()> {
    let grid = match a.kind {
        ModeKind::Hg => {
            let idx = ModeIndex::new(a.m.unwrap_or_default(), a.n.unwrap_or_default());
            SampledGrid::try_from_fn(a.h, a.grid, format!("hg_{}_{}", idx.m, idx.n), |x, y| {
                hg_mode_2d(idx, x, y, a.h).map(|v| Complex64::new(v, 0.0))
            })?
        }
        ModeKind::Lg => {
            let (j, k) = (a.j.unwrap_or_default(), a.k.unwrap_or_default());
            SampledGrid::try_from_fn(a.h, a.grid, format!("lg_{j}_{k}"), |x, y| lg_mode(j, k, x, y, a.h))?
        }
    };
    write_bundle(&stem_of(&a.out), &grid, ["x", "y"])?;
    println!("l2_norm {:.12}", grid.l2_norm());
    Ok(())
}

pub fn cmd_wigner(a: &WignerArgs) -> CliResult<()> {
    let (grid, axes) = match a.kind {
        WignerKind::Standard => {
            let f = CoefficientVector::basis(a.h, a.m)?;
            let g = CoefficientVector::basis(a.h, a.n)?;
            let mut w = wigner_standard(&f, &g, a.grid, a.h)?;
            w.quantity = format!("wigner_{}_{}", a.m, a.n);
            (w, ["x", "xi"])
        }
        WignerKind::Extended => {
            let f = CoefficientMatrix::basis(a.h, a.m, a.n)?;
            let mut w = wigner_extended(&f, a.grid, a.h)?;
            w.quantity = format!("wigner_extended_{}_{}", a.m, a.n);
            (w, ["x", "y"])
        }
    };
    write_bundle(&stem_of(&a.out), &grid, axes)?;
    println!("l2_norm {:.12}", grid.l2_norm());
    Ok(())
}

fn check_positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!("--{name} must be positive, got {v}")))
    }
}

fn default_lattice(n: usize) -> CliResult<Vec<(f64, f64)>> {
    let axis = Axis::symmetric(1.0, n)?;
    let pts = axis.points();
    Ok(pts.iter().flat_map(|&x| pts.iter().map(move |&xi| (x, xi))).collect())
}

pub fn cmd_flow(a: &FlowArgs) -> CliResult<()> {
    check_positive("t-max", a.t_max)?;
    check_positive("dt", a.dt)?;
    let points = match &a.seeds {
        Some(path) => read_seeds(path)?,
        None => default_lattice(a.lattice)?,
    };
    let seeds: Vec<PhaseSpaceState> =
        points.iter().map(|&(x, xi)| PhaseSpaceState::new(x, xi, a.h, a.r2)).collect::<sclg::Result<_>>()?;
    if seeds.is_empty() {
        return Err(CliError::usage("no seed points"));
    }

    let mut lines = match a.method {
        Method::Midpoint => flow_lines(&seeds, a.t_max, a.dt, a.stride)?,
        Method::Closed => closed_form_lines(&seeds, a.t_max, a.dt, a.stride)?,
    };
    for (x, xi) in stationary_points(a.h, a.r2) {
        let c = symbol_p(&PhaseSpaceState::new(x, xi, a.h, a.r2)?);
        lines.push(FlowLine { id: lines.len(), c, points: vec![[0.0, x, xi]], end: LineEnd::Completed });
    }
    write_flow_lines(&a.out, &lines)?;

    let escaped = lines.iter().filter(|l| l.escaped()).count();
    println!("lines {} escaped {}", lines.len(), escaped);
    if a.compare {
        use rayon::prelude::*;
        let worst = seeds
            .par_iter()
            .map(|s| closed_form_discrepancy(s, a.t_max, a.dt, POLE_WINDOW))
            .collect::<sclg::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("max_discrepancy {worst:.6e}");
    }
    Ok(())
}

fn suffixed(stem: &Path, suffix: &str) -> PathBuf {
    let mut name = stem.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    stem.with_file_name(name)
}

pub fn cmd_evolve(a: &EvolveArgs) -> CliResult<()> {
    let field = evolved_lg_field(a.m, a.n, a.t, a.h, a.grid, a.dim)?;
    let stem = stem_of(&a.out);
    write_bundle(&stem, &field, ["x", "y"])?;
    write_bundle(&suffixed(&stem, "_abs"), &field.abs(), ["x", "y"])?;
    println!("l2_norm {:.12}", field.l2_norm());
    if (a.m, a.n) == (0, 0) && a.h == 1.0 {
        let big_t = a.t / SQRT_2;
        let exact = SampledGrid::from_fn(1.0, a.grid, "closed_form", |x, y| {
            Complex64::new(figure1_closed_form(x, y, big_t), 0.0)
        });
        println!("closed_form_residual {:.6e}", field.sup_distance(&exact)?);
    }
    Ok(())
}

pub fn cmd_egorov(a: &EgorovArgs) -> CliResult<()> {
    if a.h_list.len() < 3 {
        return Err(CliError::usage(format!("--h-list needs at least 3 values, got {}", a.h_list.len())));
    }
    check_positive("dt", a.dt)?;
    let report = egorov_order(a.m, a.n, a.t, &a.h_list, a.points, a.dt)?;
    write_json(&a.report, &report)?;
    for (k, h) in report.h.iter().enumerate() {
        println!("h {h} sup {:.6e} l2 {:.6e}", report.sup_errors[k], report.l2_errors[k]);
    }
    println!("sup_order {:.4}", report.sup_order);
    println!("l2_order {:.4}", report.l2_order);
    Ok(())
}

pub fn cmd_figures(a: &FiguresArgs) -> CliResult<()> {
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    match a.which {
        1 => figure1(&a.out, a.grid),
        _ => figure2(&a.out),
    }
}

fn figure1(dir: &Path, spec: GridSpec) -> CliResult<()> {
    let frames = figure1_frames(spec)?;
    for f in &frames {
        write_bundle(&dir.join(format!("frame_k{}", f.k)), &f.field, ["x", "y"])?;
        println!("frame k={} T={:.6} residual {:.3e}", f.k, f.big_t, f.sup_residual);
    }
    let intensity: Vec<SampledGrid> = frames.iter().map(|f| f.intensity()).collect();
    let panels: Vec<(String, &SampledGrid)> =
        frames.iter().zip(&intensity).map(|(f, g)| (format!("T = {}π/8", f.k), g)).collect();
    write_atomic(&dir.join("frames.svg"), contact_sheet(&panels, 3).as_bytes())
}

fn figure2(dir: &Path) -> CliResult<()> {
    let fig = figure2_flowlines()?;
    write_flow_lines(&dir.join("flowlines.csv"), &fig.all_lines())?;
    let svg = flow_portrait(&fig.lines, &fig.separatrix, &fig.stationary, 1.5);
    write_atomic(&dir.join("flowlines.svg"), svg.as_bytes())?;
    let escaped = fig.lines.iter().filter(|l| l.escaped()).count();
    println!("lines {} escaped {} stationary {}", fig.lines.len(), escaped, fig.stationary.len());
    Ok(())
}
