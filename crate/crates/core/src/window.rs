//! Axis-aligned sampling windows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, DEFAULT_RESOLUTION};

#[derive(Debug, Error, PartialEq)]
pub enum WindowError {
    #[error("window bounds have {lo} lower and {hi} upper entries")]
    DimensionMismatch { lo: usize, hi: usize },
    #[error("window axis {axis} is empty: lower {lo} >= upper {hi}")]
    EmptyAxis { axis: usize, lo: f64, hi: f64 },
    #[error("window resolution {0} is below 2")]
    Resolution(usize),
}

/// An axis-aligned box sampled on a regular grid.
///
/// Grid pitch on axis `i` is `(hi[i] - lo[i]) / (resolution - 1)`, so both
/// bounds are grid nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub resolution: usize,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, resolution: usize) -> Result<Self, WindowError> {
        if lo.len() != hi.len() {
            return Err(WindowError::DimensionMismatch {
                lo: lo.len(),
                hi: hi.len(),
            });
        }
        for (axis, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !(l < h) {
                return Err(WindowError::EmptyAxis { axis, lo: l, hi: h });
            }
        }
        if resolution < 2 {
            return Err(WindowError::Resolution(resolution));
        }
        Ok(Window { lo, hi, resolution })
    }

    /// Cube `[lo, hi]^dim` at the default resolution.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Window::new(vec![lo; dim], vec![hi; dim], DEFAULT_RESOLUTION).expect("valid cube")
    }

    /// Box centred on `center` with half-width `half` on every axis.
    pub fn around(center: &Point, half: f64, resolution: usize) -> Self {
        let lo = center.coords().iter().map(|c| c - half).collect();
        let hi = center.coords().iter().map(|c| c + half).collect();
        Window::new(lo, hi, resolution).expect("positive half-width")
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn with_resolution(&self, resolution: usize) -> Self {
        Window {
            resolution,
            ..self.clone()
        }
    }

    pub fn axis_pitch(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.resolution - 1) as f64
    }

    /// Largest per-axis pitch.
    pub fn pitch(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.axis_pitch(i))
            .fold(0.0, f64::max)
    }

    /// Largest per-axis extent.
    pub fn extent(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| h - l)
            .fold(0.0, f64::max)
    }

    /// Sup-norm radius of the window about the origin.
    pub fn radius(&self) -> f64 {
        self.lo
            .iter()
            .chain(&self.hi)
            .map(|c| c.abs())
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| *c >= *l && *c <= *h)
    }

    /// Grid coordinate `k` on `axis`. The last node is exactly `hi`.
    pub fn node(&self, axis: usize, k: usize) -> f64 {
        if k + 1 == self.resolution {
            self.hi[axis]
        } else {
            self.lo[axis] + k as f64 * self.axis_pitch(axis)
        }
    }

    pub fn axis_values(&self, axis: usize) -> Vec<f64> {
        (0..self.resolution).map(|k| self.node(axis, k)).collect()
    }

    pub fn node_count(&self) -> usize {
        self.resolution.pow(self.dim() as u32)
    }

    /// Grid node with flat row-major index `flat` (first axis slowest).
    pub fn node_at(&self, flat: usize, out: &mut [f64]) {
        let mut rem = flat;
        for axis in (0..self.dim()).rev() {
            let k = rem % self.resolution;
            rem /= self.resolution;
            out[axis] = self.node(axis, k);
        }
    }

    /// Same resolution, scaled by `factor` about the window centre.
    pub fn scaled(&self, factor: f64) -> Window {
        let (lo, hi) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| {
                let c = 0.5 * (l + h);
                let half = 0.5 * (h - l) * factor;
                (c - half, c + half)
            })
            .unzip();
        Window {
            lo,
            hi,
            resolution: self.resolution,
        }
    }

    /// Scaled by the integer `factor` about the centre with the pitch kept,
    /// so every node of `self` is a node of the result.
    pub fn aligned_growth(&self, factor: usize) -> Window {
        let grown = self.scaled(factor as f64);
        Window {
            resolution: (self.resolution - 1) * factor + 1,
            ..grown
        }
    }

    /// Window of sup-radius `r` with the same orientation as `self`: axes
    /// whose bounds sit on one side of zero keep that bound.
    pub fn grown_to(&self, r: f64) -> Window {
        let lo = self
            .lo
            .iter()
            .map(|&l| if l >= 0.0 { l } else { -r })
            .collect();
        let hi = self
            .hi
            .iter()
            .map(|&h| if h <= 0.0 { h } else { r })
            .collect();
        Window {
            lo,
            hi,
            resolution: self.resolution,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_growth_keeps_nodes() {
        let w = Window::cube(2, 0.0, 1.0);
        let g = w.aligned_growth(3);
        assert_eq!(g.lo, vec![-1.0, -1.0]);
        assert!((g.axis_pitch(0) - w.axis_pitch(0)).abs() < 1e-15);
        assert!((g.node(0, 63 + 7) - w.node(0, 7)).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_windows() {
        assert!(matches!(
            Window::new(vec![0.0], vec![0.0], 8),
            Err(WindowError::EmptyAxis { .. })
        ));
        assert_eq!(
            Window::new(vec![0.0], vec![1.0], 1),
            Err(WindowError::Resolution(1))
        );
    }

    #[test]
    fn endpoints_are_nodes() {
        let w = Window::new(vec![-2.0, 0.1], vec![0.0, 0.7], 64).unwrap();
        assert_eq!(w.node(0, 0), -2.0);
        assert_eq!(w.node(0, 63), 0.0);
        assert_eq!(w.node(1, 63), 0.7);
        assert!((w.pitch() - 2.0 / 63.0).abs() < 1e-15);
    }

    #[test]
    fn flat_indexing_is_row_major() {
        let w = Window::new(vec![0.0, 0.0], vec![1.0, 1.0], 3).unwrap();
        let mut p = [0.0; 2];
        w.node_at(1, &mut p);
        assert_eq!(p, [0.0, 0.5]);
        w.node_at(3, &mut p);
        assert_eq!(p, [0.5, 0.0]);
    }

    #[test]
    fn growing_keeps_one_sided_axes() {
        let w = Window::cube(3, -2.0, 0.0).grown_to(10.0);
        assert_eq!(w.lo, vec![-10.0; 3]);
        assert_eq!(w.hi, vec![0.0; 3]);
        assert_eq!(w.radius(), 10.0);
    }
}
