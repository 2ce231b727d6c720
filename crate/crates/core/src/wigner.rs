//! Standard and extended semiclassical Wigner transforms.
//!
//! Standard: W(f,g)(x,ξ) = (2πh)^{-1/2} ∫ e^{−ipξ/h} f(x + p/2) ḡ(x − p/2) dp.
//!
//! Extended: W̃(F)(x,ξ) = (2πh)^{-1/2} ∫ e^{ipξ/h} F((x+p)/√2, (x−p)/√2) dp.
//!
//! W̃ maps h_{jk} to the (j,k) LG mode, so [`wigner_extended`] evaluates it
//! through the LG closed forms; [`wigner_extended_quadrature`] does the p
//! integral directly and serves as the independent check.

use std::f64::consts::{PI, SQRT_2};
use std::str::FromStr;

use num_complex::Complex64;

use crate::grid::{Axis, GridSpec, SampledGrid};
use crate::modes::{check_h, check_same_h, lower, raise, CoefficientMatrix, CoefficientVector, LgSynthesis};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Radius beyond which every Hermite function of index < `len` is below
/// roughly 1e-15 of its peak.
pub fn envelope_radius(len: usize, h: f64) -> f64 {
    h.sqrt() * ((2.0 * len.max(1) as f64 - 1.0).sqrt() + 8.5)
}

/// Trapezoid nodes p_k = (k − K) Δp covering [−extent, extent] with step at
/// most `max_step`.
fn symmetric_nodes(extent: f64, max_step: f64) -> (usize, f64) {
    let half = (extent / max_step).ceil().max(1.0) as usize;
    (half, extent / half as f64)
}

/// Σ_k w_k e^{i s p_k ξ/h} for p_k = (k − K)Δp, summed with a phase recurrence.
fn fourier_sum(weights: &[Complex64], half: usize, dp: f64, xi: f64, sign: f64, h: f64) -> Complex64 {
    let step = Complex64::from_polar(1.0, sign * dp * xi / h);
    let mut phase = Complex64::from_polar(1.0, -sign * half as f64 * dp * xi / h);
    let mut total = ZERO;
    for (k, w) in weights.iter().enumerate() {
        if k % 64 == 0 {
            phase = Complex64::from_polar(1.0, sign * (k as f64 - half as f64) * dp * xi / h);
        }
        total += w * phase;
        phase *= step;
    }
    total
}

fn max_abs(axis: &Axis) -> f64 {
    axis.min.abs().max(axis.max.abs())
}

/// W(f, g) sampled on `spec` by trapezoid quadrature in p along each row.
pub fn wigner_standard(f: &CoefficientVector, g: &CoefficientVector, spec: GridSpec, h: f64) -> Result<SampledGrid> {
    check_h(h)?;
    check_same_h(f.h(), h)?;
    check_same_h(g.h(), h)?;
    let radius = envelope_radius(f.len().max(g.len()), h);
    let xi_max = max_abs(&spec.y);
    let max_step = PI * h / (radius + xi_max);
    let prefactor = (2.0 * PI * h).powf(-0.5);
    let ys = spec.y.points();
    let rows = crate::par::map_range(spec.x.count, |i| {
        let x = spec.x.point(i);
        let extent = 2.0 * (radius - x.abs());
        if extent <= 0.0 {
            return vec![ZERO; ys.len()];
        }
        let (half, dp) = symmetric_nodes(extent, max_step);
        let weights: Vec<Complex64> = (0..=2 * half)
            .map(|k| {
                let p = (k as f64 - half as f64) * dp;
                let w = if k == 0 || k == 2 * half { 0.5 * dp } else { dp };
                f.eval(x + 0.5 * p) * g.eval(x - 0.5 * p).conj() * w
            })
            .collect();
        ys.iter().map(|&xi| prefactor * fourier_sum(&weights, half, dp, xi, -1.0, h)).collect()
    });
    SampledGrid::from_values(h, spec, "wigner", rows.concat())
}

/// W̃(F) sampled on `spec` via the LG closed forms.
pub fn wigner_extended(f: &CoefficientMatrix, spec: GridSpec, h: f64) -> Result<SampledGrid> {
    check_h(h)?;
    check_same_h(f.h(), h)?;
    let synth = LgSynthesis::new(f);
    Ok(SampledGrid::from_fn(h, spec, "extended_wigner", |x, y| synth.eval(x, y)))
}

/// W̃(F) sampled on `spec` by direct trapezoid quadrature of the p integral.
pub fn wigner_extended_quadrature(f: &CoefficientMatrix, spec: GridSpec, h: f64) -> Result<SampledGrid> {
    check_h(h)?;
    check_same_h(f.h(), h)?;
    let (rows, cols) = f.shape();
    let radius = envelope_radius(rows.max(cols), h);
    let xi_max = max_abs(&spec.y);
    let max_step = PI * h / (SQRT_2 * radius + xi_max);
    let prefactor = (2.0 * PI * h).powf(-0.5);
    let ys = spec.y.points();
    let out = crate::par::map_range(spec.x.count, |i| {
        let x = spec.x.point(i);
        let extent = SQRT_2 * radius - x.abs();
        if extent <= 0.0 {
            return vec![ZERO; ys.len()];
        }
        let (half, dp) = symmetric_nodes(extent, max_step);
        let weights: Vec<Complex64> = (0..=2 * half)
            .map(|k| {
                let p = (k as f64 - half as f64) * dp;
                let w = if k == 0 || k == 2 * half { 0.5 * dp } else { dp };
                f.eval((x + p) / SQRT_2, (x - p) / SQRT_2) * w
            })
            .collect();
        ys.iter().map(|&xi| prefactor * fourier_sum(&weights, half, dp, xi, 1.0, h)).collect()
    });
    SampledGrid::from_values(h, spec, "extended_wigner", out.concat())
}

/// Symbols whose Weyl quantization is exact in the ladder basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingSymbol {
    /// σ = x, quantized as √(h/2)(a + a†).
    X,
    /// σ = ξ, quantized as −i√(h/2)(a − a†).
    Xi,
    /// σ = x² + ξ², quantized as h(2N + 1).
    Energy,
}

impl PairingSymbol {
    pub fn eval(self, x: f64, xi: f64) -> f64 {
        match self {
            PairingSymbol::X => x,
            PairingSymbol::Xi => xi,
            PairingSymbol::Energy => x * x + xi * xi,
        }
    }

    /// Op_h^W(σ) applied in coefficient space.
    pub fn quantize(self, f: &CoefficientVector) -> CoefficientVector {
        let h = f.h();
        let s = (0.5 * h).sqrt();
        let up = raise(f);
        let down = lower(f).resized(up.len());
        let coeffs: Vec<Complex64> = match self {
            PairingSymbol::X => (0..up.len()).map(|n| s * (down.get(n) + up.get(n))).collect(),
            PairingSymbol::Xi => (0..up.len()).map(|n| Complex64::new(0.0, -s) * (down.get(n) - up.get(n))).collect(),
            PairingSymbol::Energy => (0..f.len()).map(|n| f.get(n) * (h * (2 * n + 1) as f64)).collect(),
        };
        CoefficientVector::new(h, coeffs).expect("h already validated")
    }
}

impl FromStr for PairingSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" => Ok(PairingSymbol::X),
            "xi" | "ξ" => Ok(PairingSymbol::Xi),
            "x2+xi2" | "x^2+xi^2" | "x²+ξ²" => Ok(PairingSymbol::Energy),
            other => Err(Error::UnsupportedSymbol(other.to_string())),
        }
    }
}

/// Both sides of the Weyl pairing identity, with the phase-space side
/// computed from the standard transform and from the extended transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingCheck {
    /// ⟨Op(σ) f | g⟩ from the coefficient-space action.
    pub lhs: Complex64,
    /// (2πh)^{-1/2} ∬ σ W(f,g).
    pub standard: Complex64,
    /// (πh)^{-1/2} ∬ σ(x,ξ) W̃(f⊗ḡ)(√2x, −√2ξ).
    pub extended: Complex64,
}

impl PairingCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.standard).norm().max((self.lhs - self.extended).norm())
    }
}

fn pairing_grid(len: usize, h: f64) -> Result<GridSpec> {
    let radius = envelope_radius(len, h);
    let step = 0.45 * PI * h / radius;
    let count = (2.0 * radius / step).ceil() as usize + 1;
    GridSpec::symmetric(radius, count.max(33))
}

pub fn weyl_pairing(
    symbol: PairingSymbol,
    f: &CoefficientVector,
    g: &CoefficientVector,
    h: f64,
) -> Result<PairingCheck> {
    check_h(h)?;
    check_same_h(f.h(), h)?;
    check_same_h(g.h(), h)?;
    let lhs = symbol.quantize(f).inner(g)?;

    let spec = pairing_grid(f.len().max(g.len()) + 1, h)?;
    let w = wigner_standard(f, g, spec, h)?;
    let weighted = SampledGrid::from_fn(h, spec, "sigma_w", |x, xi| {
        let (i, j) = (index_of(&spec.x, x), index_of(&spec.y, xi));
        w.get(i, j) * symbol.eval(x, xi)
    });
    let standard = weighted.integral() / (2.0 * PI * h).sqrt();

    let synth = LgSynthesis::new(&CoefficientMatrix::outer(f, g)?);
    let tilde =
        SampledGrid::from_fn(h, spec, "sigma_wt", |x, xi| synth.eval(SQRT_2 * x, -SQRT_2 * xi) * symbol.eval(x, xi));
    let extended = tilde.integral() / (PI * h).sqrt();

    Ok(PairingCheck { lhs, standard, extended })
}

fn index_of(axis: &Axis, v: f64) -> usize {
    ((v - axis.min) / axis.step()).round() as usize
}

/// |⟨Op(σ)f|g⟩ − phase-space side|, maximised over the standard and
/// extended forms of the phase-space side.
pub fn weyl_pairing_residual(
    symbol: PairingSymbol,
    f: &CoefficientVector,
    g: &CoefficientVector,
    h: f64,
) -> Result<f64> {
    Ok(weyl_pairing(symbol, f, g, h)?.residual())
}
