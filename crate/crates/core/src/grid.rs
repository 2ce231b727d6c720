//! Uniform rectangular sampling grids.
//!
//! Storage is x-major: row `i` holds the samples at `x_i`, and the second
//! coordinate (ξ or y) varies along the row.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{par, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || !(max > min) {
            return Err(Error::invalid(format!("axis bounds must satisfy min < max, got {min}..{max}")));
        }
        if count < 2 {
            return Err(Error::invalid(format!("axis needs at least 2 points, got {count}")));
        }
        Ok(Self { min, max, count })
    }

    /// [−extent, extent] with `count` points.
    pub fn symmetric(extent: f64, count: usize) -> Result<Self> {
        Self::new(-extent, extent, count)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }

    /// Trapezoid weight of sample `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.count {
            0.5 * self.step()
        } else {
            self.step()
        }
    }
}

/// A pair of axes: the first is x, the second ξ or y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
}

impl GridSpec {
    pub fn new(x: Axis, y: Axis) -> Self {
        Self { x, y }
    }

    pub fn square(axis: Axis) -> Self {
        Self { x: axis, y: axis }
    }

    /// [−extent, extent]² with `count` points per axis.
    pub fn symmetric(extent: f64, count: usize) -> Result<Self> {
        Ok(Self::square(Axis::symmetric(extent, count)?))
    }

    pub fn len(&self) -> usize {
        self.x.count * self.y.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A complex field sampled on a [`GridSpec`], with the metadata needed to
/// write it out.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    pub h: f64,
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub time: Option<f64>,
    pub quantity: String,
    values: Vec<Complex64>,
}

impl SampledGrid {
    pub fn from_values(h: f64, spec: GridSpec, quantity: impl Into<String>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::invalid(format!(
                "{} values for a {}x{} grid",
                values.len(),
                spec.x.count,
                spec.y.count
            )));
        }
        Ok(Self { h, x_axis: spec.x, y_axis: spec.y, time: None, quantity: quantity.into(), values })
    }

    /// Samples `f(x, y)` at every grid node; rows are evaluated in parallel.
    pub fn from_fn<F>(h: f64, spec: GridSpec, quantity: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync + Send,
    {
        let ys = spec.y.points();
        let rows = par::map_range(spec.x.count, |i| {
            let x = spec.x.point(i);
            ys.iter().map(|&y| f(x, y)).collect::<Vec<_>>()
        });
        Self { h, x_axis: spec.x, y_axis: spec.y, time: None, quantity: quantity.into(), values: rows.concat() }
    }

    /// Fallible variant of [`SampledGrid::from_fn`]; the first error in row
    /// order wins.
    pub fn try_from_fn<F>(h: f64, spec: GridSpec, quantity: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync + Send,
    {
        let ys = spec.y.points();
        let rows = par::map_range(spec.x.count, |i| {
            let x = spec.x.point(i);
            ys.iter().map(|&y| f(x, y)).collect::<Result<Vec<_>>>()
        });
        let mut values = Vec::with_capacity(spec.len());
        for row in rows {
            values.extend(row?);
        }
        Ok(Self { h, x_axis: spec.x, y_axis: spec.y, time: None, quantity: quantity.into(), values })
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec::new(self.x_axis, self.y_axis)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x_axis.count, self.y_axis.count)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.y_axis.count + j]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let n = self.y_axis.count;
        &self.values[i * n..(i + 1) * n]
    }

    /// Applies `f` to every value, keeping the axes and time.
    pub fn map(&self, quantity: impl Into<String>, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            h: self.h,
            x_axis: self.x_axis,
            y_axis: self.y_axis,
            time: self.time,
            quantity: quantity.into(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        self.map(format!("abs({})", self.quantity), |v| Complex64::new(v.norm(), 0.0))
    }

    /// ∫∫ g(|v|²) by the 2D trapezoid rule.
    fn quadrature(&self, g: impl Fn(usize, usize, Complex64) -> f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.x_axis.count {
            let wx = self.x_axis.weight(i);
            let mut row = 0.0;
            for j in 0..self.y_axis.count {
                row += self.y_axis.weight(j) * g(i, j, self.get(i, j));
            }
            total += wx * row;
        }
        total
    }

    /// ∫∫ v dx dy.
    pub fn integral(&self) -> Complex64 {
        let re = self.quadrature(|_, _, v| v.re);
        let im = self.quadrature(|_, _, v| v.im);
        Complex64::new(re, im)
    }

    pub fn l2_norm(&self) -> f64 {
        self.quadrature(|_, _, v| v.norm_sqr()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_same_axes(&self, other: &Self) -> Result<()> {
        if self.x_axis != other.x_axis || self.y_axis != other.y_axis {
            return Err(Error::invalid("grids have different axes"));
        }
        Ok(())
    }

    /// Pointwise difference `self − other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_same_axes(other)?;
        Ok(Self {
            h: self.h,
            x_axis: self.x_axis,
            y_axis: self.y_axis,
            time: self.time,
            quantity: format!("{} - {}", self.quantity, other.quantity),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.difference(other)?.sup_norm())
    }

    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.difference(other)?.l2_norm())
    }

    /// Largest |Im v|.
    pub fn max_imaginary(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}
