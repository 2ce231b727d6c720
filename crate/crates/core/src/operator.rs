//! The cubic model operator T̂ = a† + a − a†a†a − a†aa.
//!
//! On Hermite functions T̂ h_n = β_n h_{n+1} + β_{n−1} h_{n−1} with
//! β_n = (1 − n)√(n + 1), so it is the Jacobi matrix with zero diagonal and
//! off-diagonal β. Because β₁ = 0, span{h₀, h₁} is invariant and the
//! propagator treats that block exactly; the remaining indices are handled
//! by an eigendecomposition of the truncated tail.
//!
//! The semiclassical operator is 𝔗 = −2^{-1/2} h^{3/2} T̂ with propagator
//! U_t = e^{−it𝔗/h} = exp(i t √(h/2) T̂).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::grid::{GridSpec, SampledGrid};
use crate::modes::{check_h, CoefficientMatrix, CoefficientVector, ModeIndex};
use crate::wigner::wigner_extended;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Extra indices required past the support of a state that leaves the
/// binary block.
pub const TRUNCATION_MARGIN: usize = 16;

pub const DEFAULT_TRUNCATION: usize = 64;

/// β_n = (1 − n)√(n + 1).
pub fn beta(n: usize) -> f64 {
    (1.0 - n as f64) * ((n + 1) as f64).sqrt()
}

/// The N×N truncation of the Jacobi matrix of T̂.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiOperator {
    pub dim: usize,
}

impl JacobiOperator {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    /// β₀ … β_{N−2}.
    pub fn off_diagonal(&self) -> Vec<f64> {
        (0..self.dim.saturating_sub(1)).map(beta).collect()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (n, b) in self.off_diagonal().into_iter().enumerate() {
            m[(n, n + 1)] = b;
            m[(n + 1, n)] = b;
        }
        m
    }
}

/// T̂ c; the output is one longer than the input.
pub fn apply_t(c: &CoefficientVector) -> CoefficientVector {
    let len = c.len() + 1;
    let out = (0..len)
        .map(|n| {
            let from_below = if n >= 1 { c.get(n - 1) * beta(n - 1) } else { ZERO };
            from_below + c.get(n + 1) * beta(n)
        })
        .collect();
    CoefficientVector::new(c.h(), out).expect("h already validated")
}

fn jacobi_rect(rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |i, j| {
        if i == j + 1 {
            Complex64::new(beta(j), 0.0)
        } else if j == i + 1 {
            Complex64::new(beta(i), 0.0)
        } else {
            ZERO
        }
    })
}

/// (T̂ ⊗ T̂) acting on f ⊗ ḡ, i.e. c ↦ J c Jᵀ; each dimension grows by one.
pub fn tensor_apply_t(f: &CoefficientMatrix) -> CoefficientMatrix {
    let (r, c) = f.shape();
    let left = jacobi_rect(r + 1, r);
    let right = jacobi_rect(c + 1, c).transpose();
    CoefficientMatrix::new(f.h(), left * f.coeffs() * right).expect("h already validated")
}

/// Image of one binary HG mode under T̂ ⊗ T̂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryImage {
    pub input: ModeIndex,
    pub output: ModeIndex,
    pub coefficient: Complex64,
}

/// T̂ ⊗ T̂ on h₀₀, h₁₁, h₁₀, h₀₁, each image reduced to its single basis
/// element. Fails if an image is not a single basis element.
pub fn binary_action_table() -> Result<Vec<BinaryImage>> {
    let inputs = [ModeIndex::new(0, 0), ModeIndex::new(1, 1), ModeIndex::new(1, 0), ModeIndex::new(0, 1)];
    inputs
        .iter()
        .map(|&input| {
            let img = tensor_apply_t(&CoefficientMatrix::basis(1.0, input.m, input.n)?);
            let nonzero: Vec<(usize, usize)> = (0..img.shape().0)
                .flat_map(|m| (0..img.shape().1).map(move |n| (m, n)))
                .filter(|&(m, n)| img.get(m, n) != ZERO)
                .collect();
            match nonzero.as_slice() {
                &[(m, n)] => Ok(BinaryImage { input, output: ModeIndex::new(m, n), coefficient: img.get(m, n) }),
                _ => Err(Error::invalid(format!("image of h{}{} is not a single mode", input.m, input.n))),
            }
        })
        .collect()
}

/// Smallest truncation accepted for a state with the given support.
pub fn required_truncation(support: usize) -> usize {
    if support <= 2 {
        2
    } else {
        support + TRUNCATION_MARGIN
    }
}

/// U_t on a fixed truncation: the binary block is a plane rotation, the
/// tail {2, …, N−1} is diagonalised once.
#[derive(Debug, Clone)]
pub struct Propagator {
    h: f64,
    dim: usize,
    // Tail eigenpairs, present when dim > 2.
    tail_values: DVector<f64>,
    tail_vectors: DMatrix<f64>,
}

impl Propagator {
    pub fn new(h: f64, dim: usize) -> Result<Self> {
        check_h(h)?;
        if dim < 2 {
            return Err(Error::TruncationTooSmall { dim, support: 0, required: 2 });
        }
        let tail = dim - 2;
        let (tail_values, tail_vectors) = if tail == 0 {
            (DVector::zeros(0), DMatrix::zeros(0, 0))
        } else {
            let mut m = DMatrix::zeros(tail, tail);
            for i in 0..tail - 1 {
                let b = beta(i + 2);
                m[(i, i + 1)] = b;
                m[(i + 1, i)] = b;
            }
            let eig = SymmetricEigen::new(m);
            (eig.eigenvalues, eig.eigenvectors)
        };
        Ok(Self { h, dim, tail_values, tail_vectors })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Frequency of the binary-block rotation, √(h/2).
    pub fn rate(&self) -> f64 {
        (0.5 * self.h).sqrt()
    }

    /// U_t c, returned with length N. The support of `c` must leave the
    /// truncation margin free.
    pub fn apply(&self, c: &CoefficientVector, t: f64) -> Result<CoefficientVector> {
        let support = c.support();
        let required = required_truncation(support);
        if self.dim < required {
            return Err(Error::TruncationTooSmall { dim: self.dim, support, required });
        }
        self.apply_truncated(c, t)
    }

    /// U_t c on the truncated space itself, for states already of length at
    /// most N (for instance the output of an earlier step).
    pub fn apply_truncated(&self, c: &CoefficientVector, t: f64) -> Result<CoefficientVector> {
        crate::modes::check_same_h(self.h, c.h())?;
        let support = c.support();
        if support > self.dim {
            return Err(Error::TruncationTooSmall { dim: self.dim, support, required: support });
        }
        let theta = t * self.rate();
        let (s, co) = theta.sin_cos();
        let i = Complex64::new(0.0, 1.0);
        let mut out = vec![ZERO; self.dim];
        let (c0, c1) = (c.get(0), c.get(1));
        out[0] = c0 * co + i * s * c1;
        out[1] = c1 * co + i * s * c0;

        let tail = self.dim - 2;
        if tail > 0 && support > 2 {
            let v = &self.tail_vectors;
            let input: Vec<Complex64> = (0..tail).map(|k| c.get(k + 2)).collect();
            // y = V diag(e^{iθλ}) Vᵀ x
            let mut spectral = vec![ZERO; tail];
            for (j, sj) in spectral.iter_mut().enumerate() {
                let mut acc = ZERO;
                for (k, x) in input.iter().enumerate() {
                    acc += x * v[(k, j)];
                }
                *sj = acc * Complex64::from_polar(1.0, theta * self.tail_values[j]);
            }
            for (k, o) in out[2..].iter_mut().enumerate() {
                let mut acc = ZERO;
                for (j, sj) in spectral.iter().enumerate() {
                    acc += sj * v[(k, j)];
                }
                *o = acc;
            }
        }
        CoefficientVector::new(self.h, out)
    }
}

/// U_t c with truncation `dim`.
pub fn propagate(c: &CoefficientVector, t: f64, h: f64, dim: usize) -> Result<CoefficientVector> {
    crate::modes::check_same_h(h, c.h())?;
    Propagator::new(h, dim)?.apply(c, t)
}

/// Drops coefficients below `tol` relative to the largest and trims the
/// trailing zero rows and columns.
fn prune(f: &CoefficientMatrix, tol: f64) -> CoefficientMatrix {
    let max = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let cut = tol * max;
    let (r, c) = f.shape();
    let mut rows = 0;
    let mut cols = 0;
    for m in 0..r {
        for n in 0..c {
            if f.get(m, n).norm() > cut {
                rows = rows.max(m + 1);
                cols = cols.max(n + 1);
            }
        }
    }
    let pruned = DMatrix::from_fn(rows, cols, |m, n| {
        let v = f.get(m, n);
        if v.norm() > cut {
            v
        } else {
            ZERO
        }
    });
    CoefficientMatrix::new(f.h(), pruned).expect("h already validated")
}

/// Coefficients of U_t h_m ⊗ conj(U_t h_n).
pub fn evolved_coefficients(m: usize, n: usize, t: f64, h: f64, dim: usize) -> Result<CoefficientMatrix> {
    let prop = Propagator::new(h, dim)?;
    let f = prop.apply(&CoefficientVector::basis(h, m)?, t)?;
    let g = prop.apply(&CoefficientVector::basis(h, n)?, t)?;
    Ok(prune(&CoefficientMatrix::outer(&f, &g)?, 1e-15))
}

/// (U_t⋆ W̃) h_{mn} = W̃(U_t h_m ⊗ conj(U_t h_n)) sampled on `spec`.
pub fn evolved_lg_field(m: usize, n: usize, t: f64, h: f64, spec: GridSpec, dim: usize) -> Result<SampledGrid> {
    let f = evolved_coefficients(m, n, t, h, dim)?;
    let mut grid = wigner_extended(&f, spec, h)?.with_time(t);
    grid.quantity = format!("evolved_lg_{m}{n}");
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert_eq!(beta(0), 1.0);
        assert_eq!(beta(1), 0.0);
        assert_eq!(beta(2), -(3.0f64).sqrt());
        assert_eq!(beta(3), -4.0);
    }

    #[test]
    fn t_on_low_modes() {
        let e = |n| CoefficientVector::basis(1.0, n).unwrap();
        assert_eq!(apply_t(&e(0)).resized(3), e(1).resized(3));
        assert_eq!(apply_t(&e(1)).resized(3), e(0).resized(3));
        let img = apply_t(&e(2));
        assert_eq!(img.get(3).re, -(3.0f64).sqrt());
        assert_eq!(img.get(1).re, 0.0);
    }

    #[test]
    fn jacobi_matrix_is_symmetric_with_decoupled_block() {
        let m = JacobiOperator::new(8).matrix();
        assert_eq!(m, m.transpose());
        assert_eq!(m[(1, 2)], 0.0);
        assert_eq!(m[(0, 1)], 1.0);
    }

    #[test]
    fn binary_table_matches_swaps() {
        let table = binary_action_table().unwrap();
        let pairs: Vec<_> =
            table.iter().map(|b| ((b.input.m, b.input.n), (b.output.m, b.output.n), b.coefficient.re)).collect();
        assert_eq!(
            pairs,
            vec![((0, 0), (1, 1), 1.0), ((1, 1), (0, 0), 1.0), ((1, 0), (0, 1), 1.0), ((0, 1), (1, 0), 1.0)]
        );
    }

    #[test]
    fn truncation_precondition() {
        let c = CoefficientVector::basis(1.0, 4).unwrap();
        assert!(matches!(propagate(&c, 1.0, 1.0, 20), Err(Error::TruncationTooSmall { required: 21, .. })));
        assert!(propagate(&c, 1.0, 1.0, 21).is_ok());
        assert!(propagate(&CoefficientVector::basis(1.0, 1).unwrap(), 1.0, 1.0, 2).is_ok());
    }
}
