use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniformly spaced sample points `x_i = start + i * step` for one continuous
/// coordinate (a wavenumber, a mirror position or a mirror momentum).
///
/// Integrals over the coordinate are plain Riemann sums with weight `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::Grid(format!("start must be finite, got {start}")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Grid(format!("step must be positive, got {step}")));
        }
        if count < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {count}")));
        }
        Ok(Self { start, step, count })
    }

    /// `count` points spanning the closed interval `[lo, hi]`.
    pub fn from_range(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::Grid(format!("empty range [{lo}, {hi}]")));
        }
        if count < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {count}")));
        }
        Self::new(lo, (hi - lo) / (count - 1) as f64, count)
    }

    /// `count` points centered on `center` with spacing `2π / (count · dual.step)`.
    ///
    /// This is the reciprocal lattice of `dual`: together with a quadrature
    /// weight of `step` the Fourier sum between the two grids is an exact
    /// isometry whenever `count >= dual.count()`. The grid covers exactly one
    /// period `2π / dual.step` of the transform.
    pub fn reciprocal(dual: &Grid1D, count: usize, center: f64) -> Result<Self> {
        let step = 2.0 * PI / (count as f64 * dual.step);
        Self::new(center - step * (count as f64 - 1.0) / 2.0, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// Last sample point.
    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    /// Distance between the first and last sample points.
    pub fn span(&self) -> f64 {
        self.step * (self.count - 1) as f64
    }

    /// Width of the cell covered by the samples, `count * step`.
    pub fn extent(&self) -> f64 {
        self.step * self.count as f64
    }

    pub fn center(&self) -> f64 {
        self.start + 0.5 * self.span()
    }

    /// Period `2π / step` of a Fourier sum sampled on this grid.
    pub fn dual_period(&self) -> f64 {
        2.0 * PI / self.step
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.points().collect()
    }

    /// Same span, `factor` times as many intervals.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let intervals = (self.count - 1) * factor.max(1);
        Self::new(self.start, self.span() / intervals as f64, intervals + 1)
    }

    /// Every point multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.start * factor, self.step * factor, self.count)
    }

    /// Every point shifted by `offset`.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(self.start + offset, self.step, self.count)
    }

    /// Riemann sum of `f` sampled on the grid.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        values.into_iter().sum::<f64>() * self.step
    }
}
