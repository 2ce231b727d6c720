use std::f64::consts::PI;

use sclg::harness::figure1_closed_form;
use sclg::modes::lg_mode;
use sclg_web::{evolved_magnitudes, flow_paths, lg_magnitudes, stationary};

#[test]
fn lg_grid_is_x_major() {
    let v = lg_magnitudes(2, 0, 0.5, 2.0, 5).unwrap();
    assert_eq!(v.len(), 25);
    // Index 1 * 5 + 3 is (x, y) = (−1, 1).
    assert_eq!(v[8], lg_mode(2, 0, -1.0, 1.0, 0.5).unwrap().norm());
    assert!(lg_magnitudes(0, 0, -1.0, 2.0, 5).is_err());
    assert!(lg_magnitudes(0, 0, 1.0, 2.0, 1).is_err());
}

#[test]
fn evolved_grid_matches_closed_form() {
    let (count, big_t) = (33, PI / 4.0);
    let v = evolved_magnitudes(0, 0, big_t * 2f64.sqrt(), 1.0, 4.0, count, 64).unwrap();
    let step = 8.0 / (count - 1) as f64;
    for (i, j) in [(16, 16), (10, 20), (3, 30)] {
        let (x, y) = (-4.0 + i as f64 * step, -4.0 + j as f64 * step);
        assert!((v[i * count + j] - figure1_closed_form(x, y, big_t).abs()).abs() < 1e-8);
    }
}

fn polylines(flat: &[f64]) -> Vec<Vec<(f64, f64)>> {
    flat.chunks_exact(2).fold(vec![Vec::new()], |mut acc, p| {
        if p[0].is_nan() {
            acc.push(Vec::new());
        } else {
            acc.last_mut().unwrap().push((p[0], p[1]));
        }
        acc
    })
}

#[test]
fn flow_paths_are_separated_and_clipped() {
    let flat = flow_paths(&[0.25, 0.0, 0.8, -0.5], 0.1, 4.0, 10.0, 1.5).unwrap();
    assert_eq!(flat.len() % 2, 0);
    let lines: Vec<_> = polylines(&flat).into_iter().filter(|l| !l.is_empty()).collect();
    assert!(lines.len() >= 2);
    assert_eq!(lines[0][0], (0.25, 0.0));
    assert!(lines.iter().flatten().all(|&(x, xi)| x.abs() <= 1.5 && xi.abs() <= 1.5));
    // The pocket orbit stays near its conserved level.
    let c = |x: f64, xi: f64| 0.5 * x * (x * x + xi * xi) - 0.2 * x;
    assert!(lines[0].iter().all(|&(x, xi)| (c(x, xi) - c(0.25, 0.0)).abs() < 1e-8));
}

#[test]
fn flow_paths_reject_bad_input() {
    assert!(flow_paths(&[0.1], 0.1, 4.0, 1.0, 1.5).is_err());
    assert!(flow_paths(&[0.1, 0.0], 0.1, 4.0, 1.0, 0.0).is_err());
    assert!(flow_paths(&[0.1, f64::NAN], 0.1, 4.0, 1.0, 1.5).is_err());
    assert!(flow_paths(&[], 0.1, 4.0, 1.0, 1.5).unwrap().is_empty());
}

#[test]
fn stationary_points_are_flat_pairs() {
    let s = stationary(0.1, 4.0);
    let a: f64 = 0.4;
    assert_eq!(s, vec![0.0, a.sqrt(), 0.0, -a.sqrt(), (a / 3.0).sqrt(), 0.0, -(a / 3.0).sqrt(), 0.0]);
}
