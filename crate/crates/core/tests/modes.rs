mod common;

use approx::assert_relative_eq;
use common::{c, gaussian_1d, ladder_on_samples, periodic_grid};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use sclg::grid::{Axis, GridSpec};
use sclg::modes::{
    hg_mode_2d, ladder_apply, ladder_matrix, ladder_vector, lg_mode, lower, raise, CoefficientMatrix,
    CoefficientVector, Coefficients, Ladder, ModeIndex,
};
use sclg::Error;
use std::f64::consts::PI;

#[test]
fn hg_ground_and_parity() {
    assert_relative_eq!(hg_mode_2d(ModeIndex::new(0, 0), 0.0, 0.0, 1.0).unwrap(), PI.powf(-0.5), max_relative = 1e-15);
    assert_eq!(hg_mode_2d(ModeIndex::new(1, 0), 0.0, 3.0, 1.0).unwrap(), 0.0);
    assert!(hg_mode_2d(ModeIndex::new(0, 0), 0.0, 0.0, 0.0).is_err());
}

#[test]
fn hg_23_matches_ladder_on_sampled_ground_state() {
    let h = 0.5;
    let (half, n) = (10.24, 512);
    let xs = periodic_grid(half, n);
    let ground: Vec<Complex64> = xs.iter().map(|&x| c(gaussian_1d(x, h))).collect();
    let mut states = vec![ground];
    for _ in 0..3 {
        let next = ladder_on_samples(states.last().unwrap(), &xs, half, h, true);
        states.push(next);
    }
    // h_n = (n!)^{-1/2} (a†)^n h_0
    let h2 = |k: usize| states[2][k].re / 2f64.sqrt();
    let h3 = |k: usize| states[3][k].re / 6f64.sqrt();
    let (ix, iy) = (266, 251);
    assert!((xs[ix] - 0.4).abs() < 1e-12 && (xs[iy] + 0.2).abs() < 1e-12);
    let expect = h2(ix) * h3(iy);
    let got = hg_mode_2d(ModeIndex::new(2, 3), 0.4, -0.2, h).unwrap();
    assert!((got - expect).abs() < 1e-10, "{got} vs {expect}");
}

#[test]
fn lg_examples() {
    for &h in &[0.1, 1.0] {
        for &(x, y) in &[(0.0, 0.0), (0.3, -0.7), (1.1, 0.4)] {
            let g = (PI * h).powf(-0.5) * (-(x * x + y * y) / (2.0 * h)).exp();
            assert_relative_eq!(lg_mode(0, 0, x, y, h).unwrap().re, g, max_relative = 1e-14);
            assert_eq!(lg_mode(0, 0, x, y, h).unwrap().im, 0.0);

            let (r, th) = ((x * x + y * y).sqrt(), y.atan2(x));
            let polar = Complex64::from_polar((PI * h).powf(-0.5) * (r / h.sqrt()) * (-r * r / (2.0 * h)).exp(), th);
            assert!((lg_mode(1, 0, x, y, h).unwrap() - polar).norm() < 1e-14);
        }
        let r = h.sqrt();
        for &th in &[0.0, 0.7, 2.5] {
            assert!(lg_mode(1, 1, r * f64::cos(th), r * f64::sin(th), h).unwrap().norm() < 1e-15);
        }
    }
}

#[test]
fn lg_modes_are_normalized() {
    for &h in &[0.1, 1.0] {
        let extent = 6.0 * (h * 17.0_f64).sqrt();
        let axis = Axis::symmetric(extent, 256).unwrap();
        for j in 0..=4 {
            for k in 0..=4 {
                let mut sum = 0.0;
                for i in 0..axis.count {
                    for l in 0..axis.count {
                        let v = lg_mode(j, k, axis.point(i), axis.point(l), h).unwrap();
                        sum += axis.weight(i) * axis.weight(l) * v.norm_sqr();
                    }
                }
                assert!((sum - 1.0).abs() < 1e-8, "h={h} ({j},{k}): {sum}");
            }
        }
    }
}

#[test]
fn lg_angular_structure() {
    let h = 0.3;
    for j in 0..=4 {
        for k in 0..=j {
            for &r in &[0.2, 0.55, 1.3] {
                let reference = lg_mode(j, k, r, 0.0, h).unwrap();
                assert!(reference.im.abs() < 1e-15);
                for s in 0..24 {
                    let th = 2.0 * PI * s as f64 / 24.0;
                    let v = lg_mode(j, k, r * th.cos(), r * th.sin(), h).unwrap();
                    let radial = v * Complex64::from_polar(1.0, -((j - k) as f64) * th);
                    assert!(radial.im.abs() < 1e-12, "({j},{k}) r={r} θ={th}");
                    assert!((radial.re - reference.re).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn ladder_examples() {
    let e0 = CoefficientVector::basis(0.2, 0).unwrap();
    let up = ladder_vector(Ladder::Raise, &e0).unwrap();
    assert_eq!(up.coeffs(), &[c(0.0), c(1.0)]);
    let down = ladder_vector(Ladder::Lower, &e0).unwrap();
    assert!(down.coeffs().iter().all(|v| *v == c(0.0)));

    assert!(matches!(ladder_vector(Ladder::RaisePlus, &e0), Err(Error::ShapeMismatch { .. })));
    let h00 = CoefficientMatrix::basis(0.2, 0, 0).unwrap();
    assert!(matches!(ladder_matrix(Ladder::Raise, &h00), Err(Error::ShapeMismatch { .. })));
    assert!(ladder_apply(Ladder::Lower1, &Coefficients::Vector(e0)).is_err());
}

/// Applies (a₁† ± i a₂†)/√2 to a 2D sampled field by spectral derivatives.
fn raise_lg_on_field(field: &DMatrix<Complex64>, xs: &[f64], half: f64, h: f64, sign: f64) -> DMatrix<Complex64> {
    let n = xs.len();
    let mut a1 = DMatrix::zeros(n, n);
    let mut a2 = DMatrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<Complex64> = field.column(j).iter().copied().collect();
        for (i, v) in ladder_on_samples(&col, xs, half, h, true).into_iter().enumerate() {
            a1[(i, j)] = v;
        }
    }
    for i in 0..n {
        let row: Vec<Complex64> = field.row(i).iter().copied().collect();
        for (j, v) in ladder_on_samples(&row, xs, half, h, true).into_iter().enumerate() {
            a2[(i, j)] = v;
        }
    }
    (a1 + a2 * Complex64::new(0.0, sign)) * c(std::f64::consts::FRAC_1_SQRT_2)
}

#[test]
fn lg_raising_pair_matches_field_oracle() {
    let h = 0.5;
    let (half, n) = (8.0, 128);
    let xs = periodic_grid(half, n);
    let h00 = CoefficientMatrix::basis(h, 0, 0).unwrap();
    let coeffs = ladder_matrix(Ladder::RaiseMinus, &ladder_matrix(Ladder::RaisePlus, &h00).unwrap()).unwrap();

    let s = 0.5 * 2f64.sqrt();
    for m in 0..coeffs.shape().0 {
        for k in 0..coeffs.shape().1 {
            let expect = if (m, k) == (2, 0) || (m, k) == (0, 2) { s } else { 0.0 };
            assert!((coeffs.get(m, k) - c(expect)).norm() < 1e-15, "({m},{k})");
        }
    }

    let field = DMatrix::from_fn(n, n, |i, j| c(gaussian_1d(xs[i], h) * gaussian_1d(xs[j], h)));
    let field = raise_lg_on_field(&field, &xs, half, h, 1.0);
    let field = raise_lg_on_field(&field, &xs, half, h, -1.0);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((field[(i, j)] - coeffs.eval(xs[i], xs[j])).norm());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn projection_is_faithful() {
    let h = 0.2;
    let coeffs: Vec<Complex64> =
        (0..9).map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64).cos() / 3.0)).collect();
    let v = CoefficientVector::new(h, coeffs).unwrap();
    let axis = Axis::symmetric(6.0 * (h * 17.0_f64).sqrt(), 256).unwrap();
    let samples: Vec<Complex64> = axis.points().iter().map(|&x| v.eval(x)).collect();
    let back = CoefficientVector::project(h, 9, &axis, &samples).unwrap();
    assert!(back.sub(&v).unwrap().norm() < 1e-8);
    assert_relative_eq!(v.norm(), v.coeffs().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());

    let m = CoefficientMatrix::new(
        h,
        DMatrix::from_fn(5, 4, |i, j| Complex64::new(1.0 / (1 + i + j) as f64, (i as f64 - j as f64) * 0.1)),
    )
    .unwrap();
    let spec = GridSpec::square(Axis::symmetric(6.0 * (h * 17.0_f64).sqrt(), 256).unwrap());
    let back = CoefficientMatrix::project(&m.sample(spec), 5, 4).unwrap();
    assert!(back.sub(&m).unwrap().norm() < 1e-8);
}

#[test]
fn mixed_h_is_rejected() {
    let a = CoefficientVector::basis(0.1, 1).unwrap();
    let b = CoefficientVector::basis(0.2, 1).unwrap();
    assert!(matches!(a.inner(&b), Err(Error::ParameterMismatch { .. })));
    assert!(CoefficientMatrix::outer(&a, &b).is_err());
}

fn coefficient_vector() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..12)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

proptest! {
    #[test]
    fn number_operator_scales_by_index(coeffs in coefficient_vector()) {
        let v = CoefficientVector::new(0.3, coeffs).unwrap();
        let n = raise(&lower(&v));
        for k in 0..v.len() {
            let expect = v.get(k) * k as f64;
            prop_assert!((n.get(k) - expect).norm() <= 4.0 * f64::EPSILON * expect.norm());
        }
        prop_assert_eq!(n.get(v.len()), c(0.0));
    }

    #[test]
    fn canonical_commutator(coeffs in coefficient_vector()) {
        let v = CoefficientVector::new(0.3, coeffs).unwrap();
        let ab = lower(&raise(&v));
        let ba = raise(&lower(&v));
        for k in 0..v.len() {
            let d = ab.get(k) - ba.get(k) - v.get(k);
            prop_assert!(d.norm() <= 64.0 * f64::EPSILON * (1.0 + v.get(k).norm() * k as f64));
        }
    }

    #[test]
    fn hg_2d_is_a_product(m in 0usize..8, n in 0usize..8, x in -3.0..3.0f64, y in -3.0..3.0f64, h in 0.05..2.0f64) {
        let v = hg_mode_2d(ModeIndex::new(m, n), x, y, h).unwrap();
        let p = sclg::special::hermite_function(m, x, h).unwrap() * sclg::special::hermite_function(n, y, h).unwrap();
        prop_assert_eq!(v, p);
    }
}
