//! Hamilton flow of p_r(x, ξ; h) = ½x(x² + ξ²) − ½r²h·x.
//!
//! Hamilton's equations are ẋ = xξ, ξ̇ = −(3/2)x² − ½ξ² + ½r²h, and C = p_r
//! is conserved. With a = r²h and P = ℘ − a/12, generic trajectories are
//! x = C/(2P), ξ = −℘′/P where ℘ has invariants g₂ = a²/12,
//! g₃ = C²/4 − a³/216. C = 0 splits into the x ≡ 0 axis (tanh/coth) and the
//! circle x² + ξ² = a (sech), plus the hyperbolic points (0, ±√a) and the
//! elliptic points (±√(a/3), 0).

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::special::{elliptic_invariants, Line, Weierstrass, POLE_EXCLUSION_RADIUS};
use crate::{Error, Result};

/// Relative threshold below which C is treated as zero.
pub const EPS_C: f64 = 1e-12;
/// Relative vector-field threshold for stationary points.
pub const FIXED_POINT_TOL: f64 = 1e-12;
/// Relative distance from the circle x² + ξ² = a accepted as separatrix.
pub const CIRCLE_TOL: f64 = 1e-9;
pub const ESCAPE_RADIUS: f64 = 1e6;
const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceState {
    pub x: f64,
    pub xi: f64,
    pub h: f64,
    pub r2: f64,
}

impl PhaseSpaceState {
    pub fn new(x: f64, xi: f64, h: f64, r2: f64) -> Result<Self> {
        if !x.is_finite() || !xi.is_finite() {
            return Err(Error::invalid(format!("non-finite state ({x}, {xi})")));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::invalid(format!("semiclassical parameter must be positive, got {h}")));
        }
        if !(r2 >= 0.0) || !r2.is_finite() {
            return Err(Error::invalid(format!("scale r² must be non-negative, got {r2}")));
        }
        Ok(Self { x, xi, h, r2 })
    }

    /// a = r²h.
    pub fn energy_scale(&self) -> f64 {
        self.r2 * self.h
    }

    pub fn with_point(&self, x: f64, xi: f64) -> Self {
        Self { x, xi, ..*self }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.xi - other.xi)
    }
}

/// p_r at the state.
pub fn symbol_p(s: &PhaseSpaceState) -> f64 {
    0.5 * s.x * (s.x * s.x + s.xi * s.xi) - 0.5 * s.energy_scale() * s.x
}

/// (ẋ, ξ̇) for p_r.
pub fn vector_field(s: &PhaseSpaceState) -> (f64, f64) {
    Symbol::new(s.h, s.r2, 1.0).field(s.x, s.xi)
}

/// λ·p_r: covers p (λ = 1, r² = 4) and p̃ = −(1/√2)p_{r²=8}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    pub h: f64,
    pub r2: f64,
    pub factor: f64,
}

impl Symbol {
    pub fn new(h: f64, r2: f64, factor: f64) -> Self {
        Self { h, r2, factor }
    }

    /// p = ½x(x² + ξ²) − 2hx.
    pub fn weyl(h: f64) -> Self {
        Self::new(h, 4.0, 1.0)
    }

    /// p̃ = −(1/√2)[½x(x² + ξ²) − 4hx].
    pub fn tilde(h: f64) -> Self {
        Self::new(h, 8.0, -FRAC_1_SQRT_2)
    }

    pub fn value(&self, x: f64, xi: f64) -> f64 {
        self.factor * (0.5 * x * (x * x + xi * xi) - 0.5 * self.r2 * self.h * x)
    }

    pub fn field(&self, x: f64, xi: f64) -> (f64, f64) {
        let a = self.r2 * self.h;
        (self.factor * x * xi, self.factor * (-1.5 * x * x - 0.5 * xi * xi + 0.5 * a))
    }

    /// ∂(field)/∂(x, ξ), row-major.
    pub fn jacobian(&self, x: f64, xi: f64) -> [[f64; 2]; 2] {
        let f = self.factor;
        [[f * xi, f * x], [-3.0 * f * x, -f * xi]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    GenericWeierstrass,
    SepCoth,
    SepTanh,
    SepSechPlus,
    SepSechMinus,
    HyperbolicFixed,
    EllipticFixed,
    AxisXZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryClass {
    pub kind: TrajectoryKind,
    pub c: f64,
    pub t0: f64,
    pub branch: Line,
}

fn natural_scale(s: &PhaseSpaceState) -> f64 {
    let a = s.energy_scale();
    1f64.max(s.x.abs().powi(3) + s.xi.abs().powi(3)).max(a.powf(1.5))
}

/// Sorts a seed into one of the trajectory families and fixes its phase t₀
/// (and, for generic orbits, the line of the ℘ lattice it lives on) so that
/// the closed form reproduces the seed at t = 0.
pub fn classify(s: &PhaseSpaceState) -> Result<TrajectoryClass> {
    let a = s.energy_scale();
    let c = symbol_p(s);
    let (dx, dxi) = vector_field(s);
    let fixed = |kind| TrajectoryClass { kind, c, t0: 0.0, branch: Line::Real };
    if dx.hypot(dxi) <= FIXED_POINT_TOL * a {
        let kind = if s.x.abs() < s.xi.abs() || (s.x == 0.0 && s.xi == 0.0) {
            TrajectoryKind::HyperbolicFixed
        } else {
            TrajectoryKind::EllipticFixed
        };
        return Ok(fixed(kind));
    }
    let sa = a.sqrt();
    if s.x == 0.0 {
        let (kind, t0) = if a == 0.0 {
            (TrajectoryKind::AxisXZero, 2.0 / s.xi)
        } else if s.xi.abs() < sa {
            (TrajectoryKind::SepTanh, 2.0 * (s.xi / sa).atanh() / sa)
        } else {
            (TrajectoryKind::SepCoth, 2.0 * (sa / s.xi).atanh() / sa)
        };
        return Ok(TrajectoryClass { kind, c, t0, branch: Line::Real });
    }
    let on_circle = (s.x * s.x + s.xi * s.xi - a).abs() <= CIRCLE_TOL * a;
    if c.abs() <= EPS_C * natural_scale(s) && on_circle {
        let kind = if s.x > 0.0 { TrajectoryKind::SepSechPlus } else { TrajectoryKind::SepSechMinus };
        let t0 = (-s.xi / s.x.abs()).asinh() / sa;
        return Ok(TrajectoryClass { kind, c, t0, branch: Line::Real });
    }
    let inv = elliptic_invariants(c, s.h, s.r2)?;
    let wp = Weierstrass::new(&inv);
    let q0 = c / (2.0 * s.x);
    let dq0 = -s.xi * q0;
    let branch = if q0 > 0.0 { Line::Real } else { Line::HalfPeriodShift };
    let t0 = wp.invert_shifted(branch, q0, dq0)?;
    Ok(TrajectoryClass { kind: TrajectoryKind::GenericWeierstrass, c, t0, branch })
}

/// A classified seed ready for repeated closed-form evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Trajectory {
    pub class: TrajectoryClass,
    pub seed: PhaseSpaceState,
    wp: Option<Weierstrass>,
}

impl Trajectory {
    pub fn new(seed: PhaseSpaceState) -> Result<Self> {
        let class = classify(&seed)?;
        Self::from_class(class, seed)
    }

    pub fn from_class(class: TrajectoryClass, seed: PhaseSpaceState) -> Result<Self> {
        let wp = if class.kind == TrajectoryKind::GenericWeierstrass {
            Some(Weierstrass::new(&elliptic_invariants(class.c, seed.h, seed.r2)?))
        } else {
            None
        };
        Ok(Self { class, seed, wp })
    }

    /// The state at time t.
    pub fn state_at(&self, t: f64) -> Result<PhaseSpaceState> {
        let s = &self.seed;
        let sa = s.energy_scale().sqrt();
        let u = t + self.class.t0;
        let (x, xi) = match self.class.kind {
            TrajectoryKind::HyperbolicFixed | TrajectoryKind::EllipticFixed => (s.x, s.xi),
            TrajectoryKind::AxisXZero => {
                if u.abs() < POLE_EXCLUSION_RADIUS {
                    return Err(Error::PoleProximity { t, pole: -self.class.t0 });
                }
                (0.0, 2.0 / u)
            }
            TrajectoryKind::SepTanh => (0.0, sa * (0.5 * sa * u).tanh()),
            TrajectoryKind::SepCoth => {
                if u.abs() < POLE_EXCLUSION_RADIUS {
                    return Err(Error::PoleProximity { t, pole: -self.class.t0 });
                }
                (0.0, sa / (0.5 * sa * u).tanh())
            }
            TrajectoryKind::SepSechPlus | TrajectoryKind::SepSechMinus => {
                let sign = if self.class.kind == TrajectoryKind::SepSechPlus { 1.0 } else { -1.0 };
                let w = sa * u;
                (sign * sa / w.cosh(), -sa * w.tanh())
            }
            TrajectoryKind::GenericWeierstrass => {
                let wp = self.wp.as_ref().expect("generic trajectories carry an evaluator");
                let (q, dq) = wp.eval_shifted(self.class.branch, u).map_err(|e| match e {
                    Error::PoleProximity { pole, .. } => Error::PoleProximity { t, pole: pole - self.class.t0 },
                    other => other,
                })?;
                (self.class.c / (2.0 * q), -dq / q)
            }
        };
        Ok(s.with_point(x, xi))
    }
}

/// Closed-form state at time t for a seed classified as `cls`.
pub fn closed_form_state(cls: &TrajectoryClass, seed: &PhaseSpaceState, t: f64) -> Result<PhaseSpaceState> {
    Trajectory::from_class(*cls, *seed)?.state_at(t)
}

/// One implicit-midpoint step z₁ = z₀ + dt·F((z₀ + z₁)/2), solved by Newton.
/// Returns `None` if Newton fails to converge.
pub fn midpoint_step(sym: &Symbol, x: f64, xi: f64, dt: f64) -> Option<(f64, f64)> {
    let (fx, fxi) = sym.field(x, xi);
    let (mut x1, mut xi1) = (x + dt * fx, xi + dt * fxi);
    if x == 0.0 {
        x1 = 0.0;
    }
    for _ in 0..NEWTON_MAX_ITER {
        let (mx, mxi) = (0.5 * (x + x1), 0.5 * (xi + xi1));
        let (gx, gxi) = sym.field(mx, mxi);
        let rx = x1 - x - dt * gx;
        let rxi = xi1 - xi - dt * gxi;
        let scale = 1f64.max(x1.abs().max(xi1.abs()));
        if rx.abs().max(rxi.abs()) <= NEWTON_TOL * scale {
            return Some((x1, xi1));
        }
        let j = sym.jacobian(mx, mxi);
        let (a, b, c, d) =
            (1.0 - 0.5 * dt * j[0][0], -0.5 * dt * j[0][1], -0.5 * dt * j[1][0], 1.0 - 0.5 * dt * j[1][1]);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (d * rx - b * rxi) / det;
        let dxi = (a * rxi - c * rx) / det;
        x1 -= dx;
        xi1 -= dxi;
        if !x1.is_finite() || !xi1.is_finite() {
            return None;
        }
    }
    None
}

/// Number of equal steps of size at most `dt` covering |t|.
pub fn step_count(t: f64, dt: f64) -> usize {
    ((t.abs() / dt) * (1.0 - 1e-12)).ceil().max(if t == 0.0 { 0.0 } else { 1.0 }) as usize
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("step must be positive, got {dt}")))
    }
}

/// Integrates the Hamilton field of `sym` from (x, ξ) over [0, t] with
/// implicit midpoint, calling `visit(k, t_k, x, ξ)` after every step.
pub fn integrate_symbol_with(
    sym: &Symbol,
    x: f64,
    xi: f64,
    t: f64,
    dt: f64,
    mut visit: impl FnMut(usize, f64, f64, f64),
) -> Result<(f64, f64)> {
    check_dt(dt)?;
    let n = step_count(t, dt);
    if n == 0 {
        return Ok((x, xi));
    }
    let h = t / n as f64;
    let (mut x, mut xi) = (x, xi);
    for k in 0..n {
        let (nx, nxi) = midpoint_step(sym, x, xi, h).ok_or(Error::NewtonDivergence { t: k as f64 * h })?;
        x = nx;
        xi = nxi;
        let tk = (k + 1) as f64 * h;
        if x.abs() + xi.abs() > ESCAPE_RADIUS {
            return Err(Error::Escaped { t: tk });
        }
        visit(k + 1, tk, x, xi);
    }
    Ok((x, xi))
}

pub fn integrate_symbol(sym: &Symbol, x: f64, xi: f64, t: f64, dt: f64) -> Result<(f64, f64)> {
    integrate_symbol_with(sym, x, xi, t, dt, |_, _, _, _| {})
}

/// κ_t(seed) for p_r by implicit midpoint with step at most dt.
pub fn integrate_flow(seed: &PhaseSpaceState, t: f64, dt: f64) -> Result<PhaseSpaceState> {
    let sym = Symbol::new(seed.h, seed.r2, 1.0);
    let (x, xi) = integrate_symbol(&sym, seed.x, seed.xi, t, dt)?;
    Ok(seed.with_point(x, xi))
}

/// Box |x| + |ξ| ≤ POLE_WINDOW outside which closed form and integrator are
/// no longer compared.
pub const POLE_WINDOW: f64 = 3.0;

/// Largest distance between the closed form and the integrator on
/// t ∈ [0, t_max], sampled every 0.01. The comparison ends at the first
/// sample where either side leaves the box |x| + |ξ| ≤ `window` or the
/// closed form reports a pole.
pub fn closed_form_discrepancy(seed: &PhaseSpaceState, t_max: f64, dt: f64, window: f64) -> Result<f64> {
    check_dt(dt)?;
    let traj = Trajectory::new(*seed)?;
    let sym = Symbol::new(seed.h, seed.r2, 1.0);
    let per = ((0.01 / dt).round() as usize).max(1);
    let mut worst: f64 = 0.0;
    let mut done = false;
    let _ = integrate_symbol_with(&sym, seed.x, seed.xi, t_max, dt, |k, t, x, xi| {
        if done || k % per != 0 {
            return;
        }
        match traj.state_at(t) {
            Ok(c) if c.x.abs() + c.xi.abs() <= window && x.abs() + xi.abs() <= window => {
                worst = worst.max((c.x - x).hypot(c.xi - xi));
            }
            _ => done = true,
        }
    });
    Ok(worst)
}

/// M(x, ξ) = (√2x, −√2ξ).
pub fn m_sqrt2(x: f64, xi: f64) -> (f64, f64) {
    (SQRT_2 * x, -SQRT_2 * xi)
}

pub fn m_sqrt2_inverse(x: f64, xi: f64) -> (f64, f64) {
    (FRAC_1_SQRT_2 * x, -FRAC_1_SQRT_2 * xi)
}

/// The three equivalent ways of computing κ̃_t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TildeRoute {
    /// Integrate the Hamilton field of p̃ directly.
    Direct,
    /// M ∘ κ_t ∘ M⁻¹ with κ the flow of p = p_{r²=4}.
    Conjugation,
    /// κ^{(8)}_{−t/√2}, the r² = 8 flow run backwards at rescaled time.
    Rescaled,
}

/// κ̃_t(x, ξ) for the symbol p̃ at parameter h.
pub fn tilde_flow_route(route: TildeRoute, x: f64, xi: f64, h: f64, t: f64, dt: f64) -> Result<(f64, f64)> {
    match route {
        TildeRoute::Direct => integrate_symbol(&Symbol::tilde(h), x, xi, t, dt),
        TildeRoute::Conjugation => {
            let (u, v) = m_sqrt2_inverse(x, xi);
            let (u, v) = integrate_symbol(&Symbol::weyl(h), u, v, t, dt)?;
            Ok(m_sqrt2(u, v))
        }
        TildeRoute::Rescaled => {
            integrate_symbol(&Symbol::new(h, 8.0, 1.0), x, xi, -t * FRAC_1_SQRT_2, dt * FRAC_1_SQRT_2)
        }
    }
}

/// κ̃_t(seed) by direct integration of p̃; `seed.r2` is ignored.
pub fn tilde_flow(seed: &PhaseSpaceState, t: f64, dt: f64) -> Result<PhaseSpaceState> {
    let (x, xi) = tilde_flow_route(TildeRoute::Direct, seed.x, seed.xi, seed.h, t, dt)?;
    Ok(seed.with_point(x, xi))
}

/// How an integrated flow line ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "t")]
pub enum LineEnd {
    Completed,
    Escaped(f64),
    NewtonFailed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowLine {
    pub id: usize,
    pub c: f64,
    /// (t, x, ξ) samples, starting with the seed.
    pub points: Vec<[f64; 3]>,
    pub end: LineEnd,
}

impl FlowLine {
    pub fn escaped(&self) -> bool {
        !matches!(self.end, LineEnd::Completed)
    }
}

/// Integrates every seed to `t_max`, keeping every `stride`-th step. Escapes
/// and Newton failures end the line but are not errors.
pub fn flow_lines(seeds: &[PhaseSpaceState], t_max: f64, dt: f64, stride: usize) -> Result<Vec<FlowLine>> {
    check_dt(dt)?;
    let stride = stride.max(1);
    Ok(crate::par::map_range(seeds.len(), |id| {
        let s = seeds[id];
        let sym = Symbol::new(s.h, s.r2, 1.0);
        let mut points = vec![[0.0, s.x, s.xi]];
        let mut last = (0usize, 0.0, s.x, s.xi);
        let res = integrate_symbol_with(&sym, s.x, s.xi, t_max, dt, |k, t, x, xi| {
            last = (k, t, x, xi);
            if k % stride == 0 {
                points.push([t, x, xi]);
            }
        });
        if last.0 % stride != 0 {
            points.push([last.1, last.2, last.3]);
        }
        let end = match res {
            Ok(_) => LineEnd::Completed,
            Err(Error::Escaped { t }) => LineEnd::Escaped(t),
            Err(Error::NewtonDivergence { t }) => LineEnd::NewtonFailed(t),
            Err(_) => LineEnd::NewtonFailed(0.0),
        };
        FlowLine { id, c: symbol_p(&s), points, end }
    }))
}

/// Whether the closed form passes through a singularity between the
/// samples at `t0 < t1` with states `a` and `b`.
fn blows_up_between(traj: &Trajectory, t0: f64, t1: f64, a: (f64, f64), b: (f64, f64)) -> bool {
    let (u0, u1) = (t0 + traj.class.t0, t1 + traj.class.t0);
    match traj.class.kind {
        TrajectoryKind::SepCoth | TrajectoryKind::AxisXZero => u0 * u1 <= 0.0,
        TrajectoryKind::GenericWeierstrass => {
            let wp = traj.wp.as_ref().expect("generic trajectories carry an evaluator");
            // x = C/(2P) changes sign only where P = ℘ − a/12 vanishes; ξ blows
            // up at the poles of ℘.
            let pole = wp.nearest_pole(traj.class.branch, 0.5 * (u0 + u1)).is_some_and(|p| u0 <= p && p <= u1);
            pole || a.0 * b.0 < 0.0
        }
        _ => false,
    }
}

/// Closed-form counterpart of [`flow_lines`] on the same time grid. The
/// closed form is evaluated at every step and a line ends, flagged as
/// escaped, at the first singularity or when it leaves the escape radius.
pub fn closed_form_lines(seeds: &[PhaseSpaceState], t_max: f64, dt: f64, stride: usize) -> Result<Vec<FlowLine>> {
    check_dt(dt)?;
    let stride = stride.max(1);
    let n = step_count(t_max, dt);
    let step = if n == 0 { 0.0 } else { t_max / n as f64 };
    crate::par::map_range(seeds.len(), |id| {
        let seed = seeds[id];
        let traj = Trajectory::new(seed)?;
        let mut points = vec![[0.0, seed.x, seed.xi]];
        let mut prev = (0.0, seed.x, seed.xi);
        let mut end = LineEnd::Completed;
        for k in 1..=n {
            let t = k as f64 * step;
            let s = match traj.state_at(t) {
                Ok(s) => s,
                Err(Error::PoleProximity { .. }) => {
                    end = LineEnd::Escaped(t);
                    break;
                }
                Err(e) => return Err(e),
            };
            let far = !(s.x.abs() + s.xi.abs() <= ESCAPE_RADIUS);
            if far || blows_up_between(&traj, prev.0, t, (prev.1, prev.2), (s.x, s.xi)) {
                end = LineEnd::Escaped(t);
                break;
            }
            prev = (t, s.x, s.xi);
            if k % stride == 0 || k == n {
                points.push([t, s.x, s.xi]);
            }
        }
        Ok(FlowLine { id, c: symbol_p(&seed), points, end })
    })
    .into_iter()
    .collect()
}

/// The four stationary points (0, ±√a) and (±√(a/3), 0) of p_r.
pub fn stationary_points(h: f64, r2: f64) -> [(f64, f64); 4] {
    let a = r2 * h;
    let (s, e) = (a.sqrt(), (a / 3.0).sqrt());
    [(0.0, s), (0.0, -s), (e, 0.0), (-e, 0.0)]
}
