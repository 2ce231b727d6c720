//! The eight two-mode generators T̂₁ … T̂₈ built from unit-h ladder
//! operators a_x, a_y on the 2D HG basis |m, n⟩, and their commutator
//! algebra on span{|0,0⟩, |1,0⟩, |0,1⟩}.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::modes::ModeIndex;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Ax,
    AxDag,
    Ay,
    AyDag,
}

type State = BTreeMap<(usize, usize), Complex64>;

fn apply_op(op: Op, s: &State) -> State {
    let mut out = State::new();
    for (&(m, n), &c) in s {
        let (key, f) = match op {
            Op::Ax if m > 0 => ((m - 1, n), (m as f64).sqrt()),
            Op::Ay if n > 0 => ((m, n - 1), (n as f64).sqrt()),
            Op::AxDag => ((m + 1, n), ((m + 1) as f64).sqrt()),
            Op::AyDag => ((m, n + 1), ((n + 1) as f64).sqrt()),
            _ => continue,
        };
        *out.entry(key).or_insert(ZERO) += c * f;
    }
    out
}

/// A product of ladder operators written left to right, applied right to left.
fn apply_word(word: &[Op], s: &State) -> State {
    word.iter().rev().fold(s.clone(), |acc, &op| apply_op(op, &acc))
}

fn terms(label: usize) -> Vec<(Complex64, Vec<Op>)> {
    use Op::*;
    let r = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match label {
        1 => vec![(r(0.5), vec![AxDag, Ay]), (r(0.5), vec![AyDag, Ax])],
        2 => vec![(im(-0.5), vec![AxDag, Ay]), (im(0.5), vec![AyDag, Ax])],
        3 => vec![(r(0.5), vec![AxDag, Ax]), (r(-0.5), vec![AyDag, Ay])],
        4 => vec![
            (r(0.5), vec![AxDag]),
            (r(0.5), vec![Ax]),
            (r(-0.5), vec![AxDag, AxDag, Ax]),
            (r(-0.5), vec![AxDag, Ax, Ax]),
            (r(-0.5), vec![AxDag, AyDag, Ay]),
            (r(-0.5), vec![Ax, AyDag, Ay]),
        ],
        5 => vec![
            (im(-0.5), vec![AxDag]),
            (im(0.5), vec![Ax]),
            (im(0.5), vec![AxDag, AxDag, Ax]),
            (im(-0.5), vec![AxDag, Ax, Ax]),
            (im(0.5), vec![AxDag, AyDag, Ay]),
            (im(-0.5), vec![Ax, AyDag, Ay]),
        ],
        6 => vec![
            (r(0.5), vec![AyDag]),
            (r(0.5), vec![Ay]),
            (r(-0.5), vec![AyDag, AyDag, Ay]),
            (r(-0.5), vec![AyDag, Ay, Ay]),
            (r(-0.5), vec![AyDag, AxDag, Ax]),
            (r(-0.5), vec![Ay, AxDag, Ax]),
        ],
        7 => vec![
            (im(-0.5), vec![AyDag]),
            (im(0.5), vec![Ay]),
            (im(0.5), vec![AyDag, AyDag, Ay]),
            (im(-0.5), vec![AyDag, Ay, Ay]),
            (im(0.5), vec![AyDag, AxDag, Ax]),
            (im(-0.5), vec![Ay, AxDag, Ax]),
        ],
        8 => {
            let s = 1.0 / (2.0 * 3.0f64.sqrt());
            vec![(r(-2.0 * s), vec![]), (r(3.0 * s), vec![AxDag, Ax]), (r(3.0 * s), vec![AyDag, Ay])]
        }
        _ => unreachable!(),
    }
}

/// 2D basis of total order ≤ `cutoff`, ordered by total order, then by m.
pub fn basis(cutoff: usize) -> Vec<ModeIndex> {
    (0..=cutoff).flat_map(|order| (0..=order).map(move |m| ModeIndex::new(m, order - m))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    pub label: usize,
    pub cutoff: usize,
    pub basis: Vec<ModeIndex>,
    pub matrix: DMatrix<Complex64>,
}

impl GeneratorMatrix {
    /// Matrix element ⟨out| T̂ |inp⟩, zero outside the basis.
    pub fn element(&self, out: ModeIndex, inp: ModeIndex) -> Complex64 {
        let pos = |k: ModeIndex| self.basis.iter().position(|&b| b == k);
        match (pos(out), pos(inp)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => ZERO,
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.adjoint()).iter().all(|c| c.norm() <= tol)
    }

    /// True when no entry couples states of different total order.
    pub fn conserves_order(&self) -> bool {
        let order = |k: ModeIndex| k.m + k.n;
        (0..self.basis.len()).all(|i| {
            (0..self.basis.len()).all(|j| order(self.basis[i]) == order(self.basis[j]) || self.matrix[(i, j)] == ZERO)
        })
    }
}

fn check_label(a: usize) -> Result<()> {
    if (1..=8).contains(&a) {
        Ok(())
    } else {
        Err(Error::invalid(format!("generator label must be in 1..=8, got {a}")))
    }
}

/// T̂_a on the basis of total order ≤ `cutoff`. Images are composed exactly
/// (intermediate states of order up to cutoff + 3 are kept) and restricted
/// to the basis at the end.
pub fn su3_generator(a: usize, cutoff: usize) -> Result<GeneratorMatrix> {
    check_label(a)?;
    if cutoff < 2 {
        return Err(Error::invalid(format!("cutoff must be at least 2, got {cutoff}")));
    }
    let basis = basis(cutoff);
    let index: BTreeMap<(usize, usize), usize> = basis.iter().enumerate().map(|(i, k)| ((k.m, k.n), i)).collect();
    let words = terms(a);
    let mut matrix = DMatrix::zeros(basis.len(), basis.len());
    for (j, k) in basis.iter().enumerate() {
        let input: State = [((k.m, k.n), Complex64::new(1.0, 0.0))].into_iter().collect();
        for (coef, word) in &words {
            for ((m, n), v) in apply_word(word, &input) {
                if let Some(&i) = index.get(&(m, n)) {
                    matrix[(i, j)] += coef * v;
                }
            }
        }
    }
    Ok(GeneratorMatrix { label: a, cutoff, basis, matrix })
}

/// Fully antisymmetric f_{abc} (1-based labels) generated from
/// f₁₂₃ = 1, f₁₄₇ = f₁₆₅ = f₂₄₆ = f₂₅₇ = f₃₄₅ = f₃₇₆ = 1/2,
/// f₄₅₈ = f₆₇₈ = √3/2.
pub fn structure_constant(a: usize, b: usize, c: usize) -> f64 {
    let half = 0.5;
    let r3 = 3.0f64.sqrt() / 2.0;
    let table: [([usize; 3], f64); 9] = [
        ([1, 2, 3], 1.0),
        ([1, 4, 7], half),
        ([1, 6, 5], half),
        ([2, 4, 6], half),
        ([2, 5, 7], half),
        ([3, 4, 5], half),
        ([3, 7, 6], half),
        ([4, 5, 8], r3),
        ([6, 7, 8], r3),
    ];
    for (idx, v) in table {
        for (perm, sign) in [
            ([0, 1, 2], 1.0),
            ([1, 2, 0], 1.0),
            ([2, 0, 1], 1.0),
            ([1, 0, 2], -1.0),
            ([0, 2, 1], -1.0),
            ([2, 1, 0], -1.0),
        ] {
            if [idx[perm[0]], idx[perm[1]], idx[perm[2]]] == [a, b, c] {
                return sign * v;
            }
        }
    }
    0.0
}

/// Positions of the order ≤ 1 states in [`basis`].
fn low_block() -> [usize; 3] {
    [0, 1, 2]
}

fn restrict(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let idx = low_block();
    DMatrix::from_fn(3, 3, |i, j| m[(idx[i], idx[j])])
}

/// ‖P([T̂_a, T̂_b] − i Σ_c f_{abc} T̂_c)P‖_F with P the projection onto
/// span{|0,0⟩, |1,0⟩, |0,1⟩}.
pub fn su3_commutator_residual(a: usize, b: usize, cutoff: usize) -> Result<f64> {
    check_label(a)?;
    check_label(b)?;
    if cutoff < 4 {
        return Err(Error::invalid(format!("cutoff must be at least 4, got {cutoff}")));
    }
    let gens: Vec<GeneratorMatrix> = (1..=8).map(|k| su3_generator(k, cutoff)).collect::<Result<_>>()?;
    let ta = &gens[a - 1].matrix;
    let tb = &gens[b - 1].matrix;
    let mut diff = ta * tb - tb * ta;
    for (k, g) in gens.iter().enumerate() {
        let f = structure_constant(a, b, k + 1);
        if f != 0.0 {
            diff -= &g.matrix * Complex64::new(0.0, f);
        }
    }
    Ok(restrict(&diff).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_ordering() {
        let b = basis(2);
        let pairs: Vec<_> = b.iter().map(|k| (k.m, k.n)).collect();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
    }

    #[test]
    fn diagonal_generators() {
        let t8 = su3_generator(8, 3).unwrap();
        let v = t8.element(ModeIndex::new(0, 0), ModeIndex::new(0, 0));
        assert!((v.re + 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
        let t3 = su3_generator(3, 3).unwrap();
        assert_eq!(t3.element(ModeIndex::new(0, 1), ModeIndex::new(0, 1)).re, -0.5);
        let t1 = su3_generator(1, 3).unwrap();
        assert_eq!(t1.element(ModeIndex::new(0, 1), ModeIndex::new(1, 0)).re, 0.5);
    }

    #[test]
    fn algebra_closes_on_low_block() {
        for a in 1..=8 {
            for b in 1..=8 {
                let r = su3_commutator_residual(a, b, 4).unwrap();
                assert!(r < 1e-12, "[T{a}, T{b}] residual {r}");
            }
        }
    }

    #[test]
    fn antisymmetry_of_constants() {
        assert_eq!(structure_constant(1, 2, 3), 1.0);
        assert_eq!(structure_constant(2, 1, 3), -1.0);
        assert_eq!(structure_constant(1, 5, 6), -0.5);
        assert_eq!(structure_constant(1, 1, 3), 0.0);
    }
}
