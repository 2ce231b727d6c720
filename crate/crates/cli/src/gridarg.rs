//! The `--grid min:max:count[,min:max:count]` syntax.

use sclg::grid::{Axis, GridSpec};

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, count] = parts[..] else {
        return Err(format!("expected min:max:count, got `{s}`"));
    };
    let min: f64 = min.trim().parse().map_err(|_| format!("bad axis minimum `{min}`"))?;
    let max: f64 = max.trim().parse().map_err(|_| format!("bad axis maximum `{max}`"))?;
    let count: usize = count.trim().parse().map_err(|_| format!("bad point count `{count}`"))?;
    Axis::new(min, max, count).map_err(|e| e.to_string())
}

/// One axis is used for both coordinates; two give x then y.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let axes: Vec<&str> = s.split(',').collect();
    match axes[..] {
        [a] => Ok(GridSpec::square(parse_axis(a)?)),
        [a, b] => Ok(GridSpec::new(parse_axis(a)?, parse_axis(b)?)),
        _ => Err(format!("expected one or two comma-separated axes, got `{s}`")),
    }
}
