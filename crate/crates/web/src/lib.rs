//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Grids come back as flat x-major arrays of |v|. Flow paths come back as
//! flat (x, ξ) pairs with a NaN pair between polylines.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use sclg::flow::{flow_lines, stationary_points, PhaseSpaceState};
use sclg::grid::{GridSpec, SampledGrid};
use sclg::modes::lg_mode;
use sclg::operator::evolved_lg_field;
use sclg::{Error, Result};
use wasm_bindgen::prelude::*;

pub const FLOW_DT: f64 = 1e-3;
pub const FLOW_STRIDE: usize = 10;

fn magnitudes(grid: &SampledGrid) -> Vec<f64> {
    grid.values().iter().map(|v| v.norm()).collect()
}

/// |lg_{jk}| on a `count`² grid over [−extent, extent]².
pub fn lg_magnitudes(j: usize, k: usize, h: f64, extent: f64, count: usize) -> Result<Vec<f64>> {
    let spec = GridSpec::symmetric(extent, count)?;
    let grid = SampledGrid::try_from_fn(h, spec, "lg", |x, y| lg_mode(j, k, x, y, h))?;
    Ok(magnitudes(&grid))
}

/// |U_t⋆ lg_{mn}| with the propagator truncated at `dim` modes.
pub fn evolved_magnitudes(
    m: usize,
    n: usize,
    t: f64,
    h: f64,
    extent: f64,
    count: usize,
    dim: usize,
) -> Result<Vec<f64>> {
    let spec = GridSpec::symmetric(extent, count)?;
    Ok(magnitudes(&evolved_lg_field(m, n, t, h, spec, dim)?))
}

/// Integrates each (x, ξ) seed in `seeds` to `t_max` and returns the paths
/// clipped to [−window, window]².
pub fn flow_paths(seeds: &[f64], h: f64, r2: f64, t_max: f64, window: f64) -> Result<Vec<f64>> {
    let pairs = seeds.chunks_exact(2);
    if !pairs.remainder().is_empty() {
        return Err(Error::InvalidArgument(format!("seeds need (x, ξ) pairs, got {} values", seeds.len())));
    }
    if !(window > 0.0) {
        return Err(Error::InvalidArgument(format!("window must be positive, got {window}")));
    }
    let states = pairs.map(|p| PhaseSpaceState::new(p[0], p[1], h, r2)).collect::<Result<Vec<_>>>()?;
    let lines = flow_lines(&states, t_max, FLOW_DT, FLOW_STRIDE)?;
    let mut out = Vec::new();
    for line in &lines {
        let mut open = false;
        for p in &line.points {
            if p[1].abs() <= window && p[2].abs() <= window {
                out.extend([p[1], p[2]]);
                open = true;
            } else if open {
                out.extend([f64::NAN, f64::NAN]);
                open = false;
            }
        }
        if open {
            out.extend([f64::NAN, f64::NAN]);
        }
    }
    Ok(out)
}

/// The four stationary points as flat (x, ξ) pairs: two hyperbolic, then
/// two elliptic.
pub fn stationary(h: f64, r2: f64) -> Vec<f64> {
    stationary_points(h, r2).iter().flat_map(|&(x, xi)| [x, xi]).collect()
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = lgMagnitudes)]
pub fn js_lg_magnitudes(
    j: usize,
    k: usize,
    h: f64,
    extent: f64,
    count: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(lg_magnitudes(j, k, h, extent, count))
}

#[wasm_bindgen(js_name = evolvedMagnitudes)]
pub fn js_evolved_magnitudes(
    m: usize,
    n: usize,
    t: f64,
    h: f64,
    extent: f64,
    count: usize,
    dim: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(evolved_magnitudes(m, n, t, h, extent, count, dim))
}

#[wasm_bindgen(js_name = flowPaths)]
pub fn js_flow_paths(
    seeds: &[f64],
    h: f64,
    r2: f64,
    t_max: f64,
    window: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    js(flow_paths(seeds, h, r2, t_max, window))
}

#[wasm_bindgen(js_name = stationaryPoints)]
pub fn js_stationary_points(h: f64, r2: f64) -> Vec<f64> {
    stationary(h, r2)
}
