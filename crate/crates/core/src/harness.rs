//! Transport-error studies and figure data.
//!
//! The transport comparison is
//!
//! (U_t⋆ W̃)(h_mn) = W̃(U_t h_m ⊗ conj(U_t h_n))  vs  W̃(h_mn) ∘ κ̃_{−t},
//!
//! with κ̃ the Hamilton flow of p̃ = −(1/√2)[½x(x² + ξ²) − 4hx]. The left side
//! is exact up to eigensolver roundoff; the right side is the classical
//! transport of the LG mode, evaluated in closed form at the transported
//! points so that only the flow is numerical.

use std::f64::consts::{FRAC_PI_8, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::flow::{self, flow_lines, stationary_points, FlowLine, LineEnd, PhaseSpaceState, Symbol, Trajectory};
use crate::grid::{Axis, GridSpec, SampledGrid};
use crate::modes::{check_h, lg_mode};
use crate::operator::{evolved_lg_field, DEFAULT_TRUNCATION};
use crate::{par, Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 256;
pub const DEFAULT_DT: f64 = 1e-3;
/// Largest tolerated fraction of grid points whose transport fails.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.01;

/// ±max(12√h, 2) per axis with `count` points.
pub fn egorov_grid(h: f64, count: usize) -> Result<GridSpec> {
    GridSpec::symmetric((12.0 * h.sqrt()).max(2.0), count)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EgorovError {
    pub sup: f64,
    pub l2: f64,
    /// Points whose backward trajectory ran off to infinity; the transported
    /// mode is taken as zero there.
    pub escaped: usize,
    /// Points whose transport failed while still near the grid; left out of
    /// both norms.
    pub excluded: usize,
    pub lhs_norm: f64,
    pub rhs_norm: f64,
}

#[derive(Debug, Clone, Copy)]
enum Transported {
    Value(Complex64),
    Escaped,
    Failed,
}

/// κ̃_{−t}(x, ξ), classifying failures by how far out they happened.
fn transport_back(x: f64, xi: f64, h: f64, t: f64, dt: f64, far: f64) -> std::result::Result<(f64, f64), bool> {
    let sym = Symbol::tilde(h);
    let mut last = (x, xi);
    match flow::integrate_symbol_with(&sym, x, xi, -t, dt, |_, _, u, v| last = (u, v)) {
        Ok(p) => Ok(p),
        Err(Error::Escaped { .. }) => Err(true),
        Err(_) => Err(last.0.abs() + last.1.abs() > far),
    }
}

/// Sup and L² norms of (U_t⋆W̃)h_mn − W̃(h_mn)∘κ̃_{−t} over `spec`, with the
/// backward flow integrated at step `dt`.
pub fn egorov_error(m: usize, n: usize, t: f64, h: f64, spec: GridSpec, dt: f64) -> Result<EgorovError> {
    check_h(h)?;
    if m > 1 || n > 1 {
        return Err(Error::invalid(format!("mode ({m},{n}) is outside the binary block")));
    }
    let lhs = evolved_lg_field(m, n, t, h, spec, DEFAULT_TRUNCATION)?;
    let extent = [spec.x.min, spec.x.max, spec.y.min, spec.y.max].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let far = 100.0 * extent;
    let ys = spec.y.points();
    let rows = par::map_range(spec.x.count, |i| {
        let x = spec.x.point(i);
        ys.iter()
            .map(|&xi| match transport_back(x, xi, h, t, dt, far) {
                Ok((u, v)) => lg_mode(m, n, u, v, h).map_or(Transported::Failed, Transported::Value),
                Err(true) => Transported::Escaped,
                Err(false) => Transported::Failed,
            })
            .collect::<Vec<_>>()
    });

    let total = spec.len();
    let (mut escaped, mut excluded) = (0, 0);
    let (mut sup, mut l2, mut lhs2, mut rhs2) = (0.0f64, 0.0, 0.0, 0.0);
    for (i, row) in rows.iter().enumerate() {
        for (j, sample) in row.iter().enumerate() {
            let rhs = match *sample {
                Transported::Value(v) => v,
                Transported::Escaped => {
                    escaped += 1;
                    Complex64::new(0.0, 0.0)
                }
                Transported::Failed => {
                    excluded += 1;
                    continue;
                }
            };
            let w = spec.x.weight(i) * spec.y.weight(j);
            let l = lhs.get(i, j);
            let d = (l - rhs).norm();
            sup = sup.max(d);
            l2 += w * d * d;
            lhs2 += w * l.norm_sqr();
            rhs2 += w * rhs.norm_sqr();
        }
    }
    if excluded as f64 > MAX_EXCLUDED_FRACTION * total as f64 {
        return Err(Error::TooManyExclusions { excluded, total });
    }
    Ok(EgorovError { sup, l2: l2.sqrt(), escaped, excluded, lhs_norm: lhs2.sqrt(), rhs_norm: rhs2.sqrt() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgorovReport {
    pub m: usize,
    pub n: usize,
    pub t: f64,
    pub dt: f64,
    pub h: Vec<f64>,
    pub grids: Vec<GridSpec>,
    pub sup_errors: Vec<f64>,
    pub l2_errors: Vec<f64>,
    pub escaped: Vec<usize>,
    pub excluded: Vec<usize>,
    pub sup_order: f64,
    pub l2_order: f64,
}

impl EgorovReport {
    /// The larger of the two fitted orders.
    pub fn best_order(&self) -> f64 {
        self.sup_order.max(self.l2_order)
    }
}

/// Least-squares slope of log(err) against log(h).
pub fn fitted_order(h: &[f64], err: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = h.iter().zip(err).map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Runs [`egorov_error`] for every h (grid from [`egorov_grid`] with
/// `points` per axis) and fits the convergence order in both norms.
pub fn egorov_order(m: usize, n: usize, t: f64, h_list: &[f64], points: usize, dt: f64) -> Result<EgorovReport> {
    if h_list.len() < 3 {
        return Err(Error::invalid(format!("need at least 3 values of h, got {}", h_list.len())));
    }
    if h_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("values of h must be strictly decreasing"));
    }
    let mut report = EgorovReport {
        m,
        n,
        t,
        dt,
        h: h_list.to_vec(),
        grids: Vec::new(),
        sup_errors: Vec::new(),
        l2_errors: Vec::new(),
        escaped: Vec::new(),
        excluded: Vec::new(),
        sup_order: f64::NAN,
        l2_order: f64::NAN,
    };
    for &h in h_list {
        let spec = egorov_grid(h, points)?;
        let e = egorov_error(m, n, t, h, spec, dt)?;
        report.grids.push(spec);
        report.sup_errors.push(e.sup);
        report.l2_errors.push(e.l2);
        report.escaped.push(e.escaped);
        report.excluded.push(e.excluded);
    }
    report.sup_order = fitted_order(h_list, &report.sup_errors);
    report.l2_order = fitted_order(h_list, &report.l2_errors);
    Ok(report)
}

/// π^{-1/2} e^{−(x²+y²)/2} [cos 2T − y sin 2T + (x² + y²) sin² T], the
/// evolved ground LG mode at h = 1 and t = T√2.
pub fn figure1_closed_form(x: f64, y: f64, big_t: f64) -> f64 {
    let r2 = x * x + y * y;
    let s = big_t.sin();
    (-0.5 * r2).exp() / PI.sqrt() * ((2.0 * big_t).cos() - y * (2.0 * big_t).sin() + r2 * s * s)
}

/// One frame of the evolved ground mode at h = 1.
#[derive(Debug, Clone)]
pub struct Figure1Frame {
    pub k: usize,
    /// T = kπ/8; the propagation time is T√2.
    pub big_t: f64,
    pub field: SampledGrid,
    pub sup_residual: f64,
}

impl Figure1Frame {
    pub fn intensity(&self) -> SampledGrid {
        self.field.abs()
    }
}

/// The nine frames T = kπ/8, k = 0…8, with their sup residual against
/// [`figure1_closed_form`].
pub fn figure1_frames(spec: GridSpec) -> Result<Vec<Figure1Frame>> {
    (0..=8)
        .map(|k| {
            let big_t = k as f64 * FRAC_PI_8;
            let field = evolved_lg_field(0, 0, big_t * SQRT_2, 1.0, spec, DEFAULT_TRUNCATION)?;
            let exact = SampledGrid::from_fn(1.0, spec, "closed_form", |x, y| {
                Complex64::new(figure1_closed_form(x, y, big_t), 0.0)
            });
            let sup_residual = field.sup_distance(&exact)?;
            Ok(Figure1Frame { k, big_t, field, sup_residual })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryKind {
    Hyperbolic,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub x: f64,
    pub xi: f64,
    pub kind: StationaryKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure2 {
    pub h: f64,
    pub r2: f64,
    /// Integrated lines from the seed lattice.
    pub lines: Vec<FlowLine>,
    /// The C = 0 level set, sampled from its closed forms.
    pub separatrix: Vec<FlowLine>,
    pub stationary: Vec<StationaryPoint>,
}

impl Figure2 {
    /// Every polyline, stationary points included as single-point lines,
    /// numbered consecutively.
    pub fn all_lines(&self) -> Vec<FlowLine> {
        let mut out: Vec<FlowLine> = Vec::new();
        let a = self.r2 * self.h;
        for l in self.lines.iter().chain(&self.separatrix) {
            out.push(FlowLine { id: out.len(), ..l.clone() });
        }
        for p in &self.stationary {
            let c = 0.5 * p.x * (p.x * p.x + p.xi * p.xi) - 0.5 * a * p.x;
            out.push(FlowLine { id: out.len(), c, points: vec![[0.0, p.x, p.xi]], end: LineEnd::Completed });
        }
        out
    }
}

pub const FIGURE2_H: f64 = 0.1;
pub const FIGURE2_R2: f64 = 4.0;

/// Closed-form samples of a separatrix arc over t ∈ [−span, span].
fn separatrix_arc(seed: PhaseSpaceState, span: f64, samples: usize) -> Result<FlowLine> {
    let traj = Trajectory::new(seed)?;
    let mut points = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = -span + 2.0 * span * i as f64 / samples as f64;
        let s = traj.state_at(t)?;
        points.push([t, s.x, s.xi]);
    }
    Ok(FlowLine { id: 0, c: traj.class.c, points, end: LineEnd::Completed })
}

/// Flow lines of p at h = 1/10, r² = 4 from an `n × n` seed lattice over
/// [−1, 1]², integrated to `t_max`, plus the separatrix and the four
/// stationary points.
pub fn figure2_flowlines_with(n: usize, t_max: f64, dt: f64, stride: usize) -> Result<Figure2> {
    let (h, r2) = (FIGURE2_H, FIGURE2_R2);
    let axis = Axis::symmetric(1.0, n.max(2))?;
    let seeds: Vec<PhaseSpaceState> = axis
        .points()
        .iter()
        .flat_map(|&x| axis.points().into_iter().map(move |xi| (x, xi)))
        .map(|(x, xi)| PhaseSpaceState::new(x, xi, h, r2))
        .collect::<Result<_>>()?;
    let lines = flow_lines(&seeds, t_max, dt, stride)?;

    let a = r2 * h;
    let sa = a.sqrt();
    let span = 15.0 / sa;
    let separatrix = vec![
        separatrix_arc(PhaseSpaceState::new(sa, 0.0, h, r2)?, span, 600)?,
        separatrix_arc(PhaseSpaceState::new(-sa, 0.0, h, r2)?, span, 600)?,
        separatrix_arc(PhaseSpaceState::new(0.0, 0.0, h, r2)?, 2.0 * span, 600)?,
    ];
    let kinds =
        [StationaryKind::Hyperbolic, StationaryKind::Hyperbolic, StationaryKind::Elliptic, StationaryKind::Elliptic];
    let stationary =
        stationary_points(h, r2).iter().zip(kinds).map(|(&(x, xi), kind)| StationaryPoint { x, xi, kind }).collect();
    Ok(Figure2 { h, r2, lines, separatrix, stationary })
}

/// [`figure2_flowlines_with`] with a 9 × 9 lattice, t_max = 20, dt = 1e-3
/// and every 20th step kept.
pub fn figure2_flowlines() -> Result<Figure2> {
    figure2_flowlines_with(9, 20.0, DEFAULT_DT, 20)
}
