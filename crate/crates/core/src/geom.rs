//! Points in R^n and the numeric tolerances shared by every module.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Slack applied to non-strict comparisons so closed sets keep their
/// boundaries under rounding. Strict comparisons stay exact.
pub const TAU_MEM: f64 = 1e-9;

/// Separation required between a miss set and a closed set before the two
/// are declared disjoint.
pub const TAU_SEP: f64 = 1e-6;

/// Windowed Hausdorff values above this are treated as divergent.
pub const H_DIV: f64 = 1e3;

/// Least-squares slope of H against window radius that counts as divergence.
pub const C_DIV: f64 = 0.05;

/// Log-log growth exponent of H against window radius that counts as
/// divergence. Scale-free companion to [`C_DIV`].
pub const GROWTH_EXPONENT_DIV: f64 = 0.5;

/// Default samples per window axis.
pub const DEFAULT_RESOLUTION: usize = 64;

/// Default seed for every seeded choice in the crate.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// A coordinate vector in R^n.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        Point(coords.into())
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }

    pub fn offset(&self, dir: &[f64], t: f64) -> Point {
        Point(self.0.iter().zip(dir).map(|(a, d)| a + t * d).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point(v.to_vec())
    }
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

/// How much slack comparisons get when a predicate is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Slack for `<=`, `>=` and `=` atoms and for cone comparisons.
    pub nonstrict: f64,
    /// Slack for `<` and `>` atoms.
    pub strict: f64,
}

impl Tolerance {
    /// Default membership semantics: closed atoms get `TAU_MEM`, open atoms
    /// are exact.
    pub const MEMBERSHIP: Tolerance = Tolerance {
        nonstrict: TAU_MEM,
        strict: 0.0,
    };

    /// No slack at all. Used by bisection routines that must locate the
    /// exact flip of a predicate.
    pub const EXACT: Tolerance = Tolerance {
        nonstrict: 0.0,
        strict: 0.0,
    };

    /// Uniform slack, e.g. `TAU_SEP` for disjointness tests.
    pub const fn uniform(eps: f64) -> Tolerance {
        Tolerance {
            nonstrict: eps,
            strict: eps,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::MEMBERSHIP
    }
}
