use crate::{Error, Result};

const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Fills `out[k]` with the unit-`h` Hermite function ψ_k(u), k = 0..out.len().
///
/// Uses the recurrence induced by the creation operator,
/// ψ_{k+1} = (√2 u ψ_k − √k ψ_{k−1}) / √(k+1).
pub(crate) fn fill_hermite_scaled(u: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = PI_POW_NEG_QUARTER * (-0.5 * u * u).exp();
    if out.len() == 1 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * u * out[0];
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = (std::f64::consts::SQRT_2 * u * out[k] - kf.sqrt() * out[k - 1]) / (kf + 1.0).sqrt();
    }
}

fn check(x: f64, h: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("non-finite abscissa {x}")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("semiclassical parameter must be positive, got {h}")));
    }
    Ok(())
}

/// The L²-normalised semiclassical Hermite function h_n(x) for parameter `h`.
///
/// h_0(x) = (πh)^(−1/4) e^(−x²/(2h)) and h_n = (n!)^(−1/2) (a†)^n h_0 with
/// a† = (2h)^(−1/2)(x − h d/dx).
pub fn hermite_function(n: usize, x: f64, h: f64) -> Result<f64> {
    Ok(hermite_functions(n, x, h)?[n])
}

/// All of h_0(x) … h_nmax(x) at once.
pub fn hermite_functions(nmax: usize, x: f64, h: f64) -> Result<Vec<f64>> {
    check(x, h)?;
    let mut out = vec![0.0; nmax + 1];
    fill_hermite_scaled(x / h.sqrt(), &mut out);
    let norm = h.powf(-0.25);
    out.iter_mut().for_each(|v| *v *= norm);
    Ok(out)
}

/// ln(n!) by direct accumulation; exact enough for the small orders used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
