//! Hausdorff distance between clouds and its growth over windows.

use rayon::prelude::*;
use serde::Serialize;

use super::cloud::{CloudError, KdTree, PointCloud};
use super::{sample, ImplicitClosedSet};
use crate::geom::{Point, C_DIV, GROWTH_EXPONENT_DIV, H_DIV};
use crate::window::Window;

/// Thresholds for calling a sequence of windowed distances divergent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HausdorffConfig {
    /// Any value above this is divergent.
    pub h_div: f64,
    /// Least-squares slope of value against window radius.
    pub c_div: f64,
    /// Log-log growth exponent for strictly increasing positive values.
    pub growth_exponent: f64,
}

impl Default for HausdorffConfig {
    fn default() -> Self {
        HausdorffConfig {
            h_div: H_DIV,
            c_div: C_DIV,
            growth_exponent: GROWTH_EXPONENT_DIV,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DivergenceVerdict {
    Divergent,
    Bounded,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub radii: Vec<f64>,
    pub pitches: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: Option<f64>,
    pub growth_exponent: Option<f64>,
    pub verdict: DivergenceVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// `sup_{a in A} dist(a, B)`. Points for which `skip` holds count as 0.
fn directed(a: &[Point], b: &KdTree, skip: &(dyn Fn(&Point) -> bool + Sync)) -> f64 {
    a.par_chunks(2048)
        .map(|chunk| {
            let mut best2 = 0.0f64;
            for p in chunk {
                if skip(p) {
                    continue;
                }
                // Anything closer than the running maximum cannot raise it.
                if let Some((d2, _)) = b.nearest_until(p.coords(), best2) {
                    if d2 > best2 {
                        best2 = d2;
                    }
                }
            }
            best2
        })
        .reduce(|| 0.0, f64::max)
        .sqrt()
}

/// Exact Hausdorff distance between two finite clouds.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64, CloudError> {
    if a.is_empty() || b.is_empty() {
        return Err(CloudError::Empty);
    }
    if a.dim() != b.dim() {
        return Err(CloudError::Dimension(a.dim(), b.dim()));
    }
    let none = |_: &Point| false;
    let ab = directed(a.points(), &b.tree(), &none);
    let ba = directed(b.points(), &a.tree(), &none);
    Ok(ab.max(ba))
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

/// Hausdorff distance of `A ∩ W_k` and `B ∩ W_k` over growing windows.
///
/// A sample of one set that satisfies the other set's membership is at
/// distance zero from it and is not queried.
pub fn hausdorff_windowed(
    a: &ImplicitClosedSet,
    b: &ImplicitClosedSet,
    windows: &[Window],
    cfg: &HausdorffConfig,
) -> DivergenceReport {
    let radii: Vec<f64> = windows.iter().map(Window::radius).collect();
    let pitches: Vec<f64> = windows.iter().map(Window::pitch).collect();
    let mut report = DivergenceReport {
        radii: radii.clone(),
        pitches,
        values: Vec::new(),
        slope: None,
        growth_exponent: None,
        verdict: DivergenceVerdict::Inconclusive,
        note: None,
    };
    if windows.len() < 3 || windows.windows(2).any(|w| w[1].extent() <= w[0].extent()) {
        report.note = Some("need at least three windows of strictly growing extent".into());
        return report;
    }
    for w in windows {
        let ca = sample(a, w);
        let cb = sample(b, w);
        if ca.is_empty() || cb.is_empty() {
            report.note = Some(format!(
                "empty intersection with window of radius {}",
                w.radius()
            ));
            return report;
        }
        let in_b = |p: &Point| b.contains(p.coords());
        let in_a = |p: &Point| a.contains(p.coords());
        let ab = directed(ca.points(), &cb.tree(), &in_b);
        let ba = directed(cb.points(), &ca.tree(), &in_a);
        report.values.push(ab.max(ba));
    }
    let v = &report.values;
    report.slope = least_squares_slope(&radii, v);
    let increasing = v.iter().all(|x| *x > 0.0) && v.windows(2).all(|p| p[1] > p[0]);
    if increasing {
        let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let ly: Vec<f64> = v.iter().map(|x| x.ln()).collect();
        report.growth_exponent = least_squares_slope(&lx, &ly);
    }
    let n = v.len();
    report.verdict = if v.iter().any(|x| *x > cfg.h_div)
        || report.slope.is_some_and(|s| s >= cfg.c_div)
        || report.growth_exponent.is_some_and(|e| e >= cfg.growth_exponent)
    {
        DivergenceVerdict::Divergent
    } else if v.iter().all(|x| *x == 0.0)
        || (v[n - 1] - v[n - 2]).abs() <= 0.01 * v[n - 1].abs().max(v[n - 2].abs())
    {
        DivergenceVerdict::Bounded
    } else {
        DivergenceVerdict::Inconclusive
    };
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setrep::Provenance;

    fn cloud(pts: &[[f64; 2]]) -> PointCloud {
        PointCloud::new(
            pts.iter().map(|p| Point::from(*p)).collect(),
            2,
            Provenance {
                tag: "t".into(),
                window: Window::cube(2, 0.0, 1.0),
            },
        )
    }

    #[test]
    fn small_examples() {
        let a = cloud(&[[0.0, 0.0], [1.0, 0.0]]);
        let b = cloud(&[[0.0, 1.0]]);
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 2f64.sqrt());
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let c = cloud(&[[3.0, 4.0]]);
        let o = cloud(&[[0.0, 0.0]]);
        assert_eq!(hausdorff_distance(&o, &c).unwrap(), 5.0);
        assert!(matches!(hausdorff_distance(&o, &cloud(&[])), Err(CloudError::Empty)));
    }

    #[test]
    fn slope_of_a_line() {
        assert_eq!(least_squares_slope(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), Some(2.0));
        assert_eq!(least_squares_slope(&[1.0], &[2.0]), None);
    }
}
