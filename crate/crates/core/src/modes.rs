//! Hermite-Gaussian and Laguerre-Gaussian modes, and ladder operators acting
//! on HG coefficient expansions.
//!
//! A [`CoefficientVector`] holds c₀…c_{N−1} of Σ c_n h_n(x); a
//! [`CoefficientMatrix`] holds c_{mn} of Σ c_{mn} h_m(x) h_n(y). Both carry
//! the semiclassical parameter h, and combining containers with different h
//! is an error.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::grid::{Axis, SampledGrid};
use crate::special::{fill_hermite_scaled, hermite_function, hermite_functions, laguerre_polynomial, ln_factorial};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub m: usize,
    pub n: usize,
}

impl ModeIndex {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }
}

pub(crate) fn check_h(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("semiclassical parameter must be finite and positive, got {h}")))
    }
}

pub(crate) fn check_same_h(left: f64, right: f64) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::ParameterMismatch { left, right })
    }
}

/// Coefficients in the 1D semiclassical Hermite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    h: f64,
    coeffs: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(h: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        check_h(h)?;
        Ok(Self { h, coeffs })
    }

    pub fn from_real(h: f64, coeffs: &[f64]) -> Result<Self> {
        Self::new(h, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zeros(h: f64, len: usize) -> Result<Self> {
        Self::new(h, vec![ZERO; len])
    }

    /// The basis vector h_n, stored with length n + 1.
    pub fn basis(h: f64, n: usize) -> Result<Self> {
        let mut c = vec![ZERO; n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::new(h, c)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// One past the largest index with a nonzero coefficient.
    pub fn support(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).map_or(0, |i| i + 1)
    }

    /// Zero-padded (or truncated) copy of length `len`.
    pub fn resized(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, ZERO);
        Self { h: self.h, coeffs }
    }

    /// ⟨self | other⟩ = Σ c_n d̄_n.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_same_h(self.h, other.h)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_h(self.h, other.h)?;
        let len = self.len().max(other.len());
        Ok(Self { h: self.h, coeffs: (0..len).map(|i| self.get(i) - other.get(i)).collect() })
    }

    /// Σ c_n h_n(x).
    pub fn eval(&self, x: f64) -> Complex64 {
        if self.coeffs.is_empty() {
            return ZERO;
        }
        let mut psi = vec![0.0; self.coeffs.len()];
        fill_hermite_scaled(x / self.h.sqrt(), &mut psi);
        let scale = self.h.powf(-0.25);
        self.coeffs.iter().zip(&psi).map(|(c, p)| c * (p * scale)).sum()
    }

    /// Coefficients of len `len` obtained by trapezoid projection of samples
    /// taken on `axis`.
    pub fn project(h: f64, len: usize, axis: &Axis, samples: &[Complex64]) -> Result<Self> {
        check_h(h)?;
        if samples.len() != axis.count {
            return Err(Error::invalid(format!("{} samples on a {}-point axis", samples.len(), axis.count)));
        }
        let mut coeffs = vec![ZERO; len];
        if len == 0 {
            return Self::new(h, coeffs);
        }
        for (i, s) in samples.iter().enumerate() {
            let basis = hermite_functions(len - 1, axis.point(i), h)?;
            let w = axis.weight(i);
            for (c, b) in coeffs.iter_mut().zip(&basis) {
                *c += s * (w * b);
            }
        }
        Self::new(h, coeffs)
    }
}

/// Coefficients c_{mn} in the 2D HG basis h_{mn}(x, y) = h_m(x) h_n(y).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    h: f64,
    coeffs: DMatrix<Complex64>,
}

impl CoefficientMatrix {
    pub fn new(h: f64, coeffs: DMatrix<Complex64>) -> Result<Self> {
        check_h(h)?;
        Ok(Self { h, coeffs })
    }

    pub fn zeros(h: f64, rows: usize, cols: usize) -> Result<Self> {
        Self::new(h, DMatrix::zeros(rows, cols))
    }

    /// The basis element h_{mn}, stored with shape (m + 1, n + 1).
    pub fn basis(h: f64, m: usize, n: usize) -> Result<Self> {
        let mut c = DMatrix::zeros(m + 1, n + 1);
        c[(m, n)] = Complex64::new(1.0, 0.0);
        Self::new(h, c)
    }

    /// The tensor f ⊗ ḡ, i.e. c_{mn} = f_m ḡ_n.
    pub fn outer(f: &CoefficientVector, g: &CoefficientVector) -> Result<Self> {
        check_same_h(f.h, g.h)?;
        let c = DMatrix::from_fn(f.len(), g.len(), |m, n| f.coeffs[m] * g.coeffs[n].conj());
        Self::new(f.h, c)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn coeffs(&self) -> &DMatrix<Complex64> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> DMatrix<Complex64> {
        self.coeffs
    }

    pub fn shape(&self) -> (usize, usize) {
        self.coeffs.shape()
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        let (r, c) = self.shape();
        if m < r && n < c {
            self.coeffs[(m, n)]
        } else {
            ZERO
        }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Zero-padded (or truncated) copy of the given shape.
    pub fn resized(&self, rows: usize, cols: usize) -> Self {
        Self { h: self.h, coeffs: DMatrix::from_fn(rows, cols, |m, n| self.get(m, n)) }
    }

    fn combine(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_same_h(self.h, other.h)?;
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let (rows, cols) = (r1.max(r2), c1.max(c2));
        Ok(Self { h: self.h, coeffs: DMatrix::from_fn(rows, cols, |m, n| f(self.get(m, n), other.get(m, n))) })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { h: self.h, coeffs: self.coeffs.map(|c| c * s) }
    }

    /// Σ c_{mn} h_m(x) h_n(y).
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let (rows, cols) = self.shape();
        if rows == 0 || cols == 0 {
            return ZERO;
        }
        let sh = self.h.sqrt();
        let mut px = vec![0.0; rows];
        let mut py = vec![0.0; cols];
        fill_hermite_scaled(x / sh, &mut px);
        fill_hermite_scaled(y / sh, &mut py);
        let mut total = ZERO;
        for (n, &pn) in py.iter().enumerate() {
            let col: Complex64 = px.iter().enumerate().map(|(m, &pm)| self.coeffs[(m, n)] * pm).sum();
            total += col * pn;
        }
        total / sh
    }

    /// Samples the HG synthesis on a grid.
    pub fn sample(&self, spec: crate::grid::GridSpec) -> SampledGrid {
        SampledGrid::from_fn(self.h, spec, "hg_field", |x, y| self.eval(x, y))
    }

    /// Trapezoid projection of a grid onto h_{mn}, m < rows, n < cols.
    pub fn project(grid: &SampledGrid, rows: usize, cols: usize) -> Result<Self> {
        let h = grid.h;
        check_h(h)?;
        let bx: Vec<Vec<f64>> =
            (0..grid.x_axis.count).map(|i| basis_row(rows, grid.x_axis.point(i), h)).collect::<Result<_>>()?;
        let by: Vec<Vec<f64>> =
            (0..grid.y_axis.count).map(|j| basis_row(cols, grid.y_axis.point(j), h)).collect::<Result<_>>()?;
        // First contract y: t[i][n] = Σ_j w_j v_ij h_n(y_j).
        let mut c = DMatrix::zeros(rows, cols);
        for (i, bxi) in bx.iter().enumerate() {
            let mut t = vec![ZERO; cols];
            for (j, v) in grid.row(i).iter().enumerate() {
                let w = grid.y_axis.weight(j);
                for (tn, byn) in t.iter_mut().zip(&by[j]) {
                    *tn += v * (w * byn);
                }
            }
            let wx = grid.x_axis.weight(i);
            for (m, &b) in bxi.iter().enumerate() {
                let f = wx * b;
                for (n, tn) in t.iter().enumerate() {
                    c[(m, n)] += tn * f;
                }
            }
        }
        Self::new(h, c)
    }
}

fn basis_row(len: usize, x: f64, h: f64) -> Result<Vec<f64>> {
    if len == 0 {
        Ok(Vec::new())
    } else {
        hermite_functions(len - 1, x, h)
    }
}

/// h_{mn}(x, y) = h_m(x) h_n(y).
pub fn hg_mode_2d(idx: ModeIndex, x: f64, y: f64, h: f64) -> Result<f64> {
    Ok(hermite_function(idx.m, x, h)? * hermite_function(idx.n, y, h)?)
}

/// (−1)^k √(k!/j!) for the LG normalisation, j ≥ k.
fn lg_weight(j: usize, k: usize) -> f64 {
    let sign = if k & 1 == 0 { 1.0 } else { -1.0 };
    sign * (0.5 * (ln_factorial(k) - ln_factorial(j))).exp()
}

/// The (j, k) Laguerre-Gaussian mode at (x, y), z = x + iy:
///
/// j ≥ k: (πh)^{-1/2} (k!/j!)^{1/2} (−1)^k (z/√h)^{j−k} e^{−|z|²/2h} L_k^{j−k}(|z|²/h)
///
/// and the conjugate-variable form with the roles of j and k swapped when
/// j < k.
pub fn lg_mode(j: usize, k: usize, x: f64, y: f64, h: f64) -> Result<Complex64> {
    check_h(h)?;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::invalid("non-finite coordinate"));
    }
    let sh = h.sqrt();
    let rho = (x * x + y * y) / h;
    let (hi, lo, w) = if j >= k { (j, k, Complex64::new(x, y) / sh) } else { (k, j, Complex64::new(x, -y) / sh) };
    let radial = lg_weight(hi, lo) * (-0.5 * rho).exp() * laguerre_polynomial(lo, hi - lo, rho);
    Ok(w.powu((hi - lo) as u32) * radial / (std::f64::consts::PI * h).sqrt())
}

/// Evaluates Σ c_{jk} LG_{jk}(x, y) for a fixed coefficient matrix, grouping
/// terms by j − k so each group shares one Laguerre recurrence.
#[derive(Debug, Clone)]
pub struct LgSynthesis {
    h: f64,
    // (d = j − k, weighted coefficients indexed by min(j, k)) for d ≥ 0 and d < 0.
    upper: Vec<(usize, Vec<Complex64>)>,
    lower: Vec<(usize, Vec<Complex64>)>,
}

impl LgSynthesis {
    pub fn new(f: &CoefficientMatrix) -> Self {
        let (rows, cols) = f.shape();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for d in 0..rows {
            let len = cols.min(rows - d);
            let w: Vec<Complex64> = (0..len).map(|k| f.coeffs[(k + d, k)] * lg_weight(k + d, k)).collect();
            if w.iter().any(|c| *c != ZERO) {
                upper.push((d, w));
            }
        }
        for e in 1..cols {
            let len = rows.min(cols - e);
            let w: Vec<Complex64> = (0..len).map(|j| f.coeffs[(j, j + e)] * lg_weight(j + e, j)).collect();
            if w.iter().any(|c| *c != ZERO) {
                lower.push((e, w));
            }
        }
        Self { h: f.h, upper, lower }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let sh = self.h.sqrt();
        let rho = (x * x + y * y) / self.h;
        let z = Complex64::new(x, y) / sh;
        let envelope = (-0.5 * rho).exp() / (std::f64::consts::PI * self.h).sqrt();
        let mut total = ZERO;
        for (d, w) in &self.upper {
            total += z.powu(*d as u32) * laguerre_sum(w, *d, rho);
        }
        for (e, w) in &self.lower {
            total += z.conj().powu(*e as u32) * laguerre_sum(w, *e, rho);
        }
        total * envelope
    }
}

/// Σ_k w_k L_k^α(ρ) by the three-term recurrence in k.
fn laguerre_sum(w: &[Complex64], alpha: usize, rho: f64) -> Complex64 {
    let a = alpha as f64;
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut total = ZERO;
    for (k, c) in w.iter().enumerate() {
        if k > 0 {
            let kf = (k - 1) as f64;
            let next = ((2.0 * kf + 1.0 + a - rho) * cur - (kf + a) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        total += c * cur;
    }
    total
}

/// Ladder operators. `Lower`/`Raise` act on vectors; the rest act on
/// matrices, `1` on the first (x) index and `2` on the second (y) index, and
/// the `Plus`/`Minus` kinds are the LG combinations
/// A₊† = (a₁† + i a₂†)/√2, A₋† = (a₁† − i a₂†)/√2, A₊ = (a₁ − i a₂)/√2,
/// A₋ = (a₁ + i a₂)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Lower,
    Raise,
    Lower1,
    Raise1,
    Lower2,
    Raise2,
    LowerPlus,
    RaisePlus,
    LowerMinus,
    RaiseMinus,
}

impl Ladder {
    pub fn name(self) -> &'static str {
        match self {
            Ladder::Lower => "a",
            Ladder::Raise => "a†",
            Ladder::Lower1 => "a₁",
            Ladder::Raise1 => "a₁†",
            Ladder::Lower2 => "a₂",
            Ladder::Raise2 => "a₂†",
            Ladder::LowerPlus => "A₊",
            Ladder::RaisePlus => "A₊†",
            Ladder::LowerMinus => "A₋",
            Ladder::RaiseMinus => "A₋†",
        }
    }

    fn acts_on_vectors(self) -> bool {
        matches!(self, Ladder::Lower | Ladder::Raise)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Vector(CoefficientVector),
    Matrix(CoefficientMatrix),
}

impl Coefficients {
    pub fn h(&self) -> f64 {
        match self {
            Coefficients::Vector(v) => v.h,
            Coefficients::Matrix(m) => m.h,
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Coefficients::Vector(v) => v.norm(),
            Coefficients::Matrix(m) => m.norm(),
        }
    }
}

/// a c: (a c)_n = √(n+1) c_{n+1}; the length is kept.
pub fn lower(c: &CoefficientVector) -> CoefficientVector {
    let len = c.len();
    let coeffs = (0..len).map(|n| c.get(n + 1) * ((n + 1) as f64).sqrt()).collect();
    CoefficientVector { h: c.h, coeffs }
}

/// a† c: (a† c)_n = √n c_{n−1}; the length grows by one.
pub fn raise(c: &CoefficientVector) -> CoefficientVector {
    let len = c.len() + 1;
    let coeffs = (0..len).map(|n| if n == 0 { ZERO } else { c.get(n - 1) * (n as f64).sqrt() }).collect();
    CoefficientVector { h: c.h, coeffs }
}

fn lower_rows(c: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (r, k) = c.shape();
    DMatrix::from_fn(r, k, |m, n| if m + 1 < r { c[(m + 1, n)] * ((m + 1) as f64).sqrt() } else { ZERO })
}

fn raise_rows(c: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (r, k) = c.shape();
    DMatrix::from_fn(r + 1, k, |m, n| if m == 0 { ZERO } else { c[(m - 1, n)] * (m as f64).sqrt() })
}

fn lower_cols(c: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    lower_rows(&c.transpose()).transpose()
}

fn raise_cols(c: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    raise_rows(&c.transpose()).transpose()
}

fn pad(c: DMatrix<Complex64>, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let (r, k) = c.shape();
    DMatrix::from_fn(rows, cols, |m, n| if m < r && n < k { c[(m, n)] } else { ZERO })
}

fn mix(a: DMatrix<Complex64>, b: DMatrix<Complex64>, sb: Complex64) -> DMatrix<Complex64> {
    let rows = a.nrows().max(b.nrows());
    let cols = a.ncols().max(b.ncols());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (pad(a, rows, cols) + pad(b, rows, cols) * sb) * Complex64::new(s, 0.0)
}

fn apply_matrix(kind: Ladder, c: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    match kind {
        Ladder::Lower1 => lower_rows(c),
        Ladder::Raise1 => raise_rows(c),
        Ladder::Lower2 => lower_cols(c),
        Ladder::Raise2 => raise_cols(c),
        Ladder::RaisePlus => mix(raise_rows(c), raise_cols(c), i),
        Ladder::RaiseMinus => mix(raise_rows(c), raise_cols(c), -i),
        Ladder::LowerPlus => mix(lower_rows(c), lower_cols(c), -i),
        Ladder::LowerMinus => mix(lower_rows(c), lower_cols(c), i),
        Ladder::Lower | Ladder::Raise => unreachable!(),
    }
}

/// Applies a ladder operator to a coefficient matrix.
pub fn ladder_matrix(kind: Ladder, c: &CoefficientMatrix) -> Result<CoefficientMatrix> {
    if kind.acts_on_vectors() {
        return Err(Error::ShapeMismatch { op: kind.name(), operand: "coefficient matrix" });
    }
    Ok(CoefficientMatrix { h: c.h, coeffs: apply_matrix(kind, &c.coeffs) })
}

/// Applies a ladder operator to a coefficient vector.
pub fn ladder_vector(kind: Ladder, c: &CoefficientVector) -> Result<CoefficientVector> {
    match kind {
        Ladder::Lower => Ok(lower(c)),
        Ladder::Raise => Ok(raise(c)),
        _ => Err(Error::ShapeMismatch { op: kind.name(), operand: "coefficient vector" }),
    }
}

/// Exact coefficient-space action of a ladder operator.
pub fn ladder_apply(kind: Ladder, c: &Coefficients) -> Result<Coefficients> {
    match c {
        Coefficients::Vector(v) => ladder_vector(kind, v).map(Coefficients::Vector),
        Coefficients::Matrix(m) => ladder_matrix(kind, m).map(Coefficients::Matrix),
    }
}
