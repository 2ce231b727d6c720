#![allow(dead_code)]

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Uniform periodic grid x_k = −L + k·2L/n.
pub fn periodic_grid(half_width: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| -half_width + 2.0 * half_width * k as f64 / n as f64).collect()
}

/// Spectral derivative of samples on [−L, L) with periodic extension.
pub fn spectral_derivative(values: &[Complex64], half_width: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    let base = std::f64::consts::PI / half_width;
    for (k, v) in buf.iter_mut().enumerate() {
        let freq = if k < n / 2 {
            k as f64
        } else if k == n / 2 {
            0.0
        } else {
            k as f64 - n as f64
        };
        *v *= Complex64::new(0.0, base * freq);
    }
    inv.process(&mut buf);
    buf.iter().map(|v| v / n as f64).collect()
}

/// (2h)^{-1/2}(x ∓ h d/dx) applied to samples; `raise` picks the minus sign.
pub fn ladder_on_samples(values: &[Complex64], xs: &[f64], half_width: f64, h: f64, raise: bool) -> Vec<Complex64> {
    let d = spectral_derivative(values, half_width);
    let sign = if raise { -1.0 } else { 1.0 };
    values.iter().zip(&d).zip(xs).map(|((v, dv), &x)| (v * x + dv * (sign * h)) / (2.0 * h).sqrt()).collect()
}

pub fn gaussian_1d(x: f64, h: f64) -> f64 {
    (std::f64::consts::PI * h).powf(-0.25) * (-x * x / (2.0 * h)).exp()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
