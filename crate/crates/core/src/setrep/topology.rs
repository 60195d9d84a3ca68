//! Interiors, boundaries and compactness at grid resolution.

use rayon::prelude::*;
use serde::Serialize;

use super::cloud::{PointCloud, Provenance};
use super::{sample, ImplicitClosedSet};
use crate::geom::{Point, Tolerance};
use crate::window::Window;

/// Probe offsets of a ball of radius `pitch`: the axis points and the
/// corners of the inscribed cube.
fn ball_offsets(n: usize, pitch: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * n + (1 << n));
    for i in 0..n {
        for s in [-1.0, 1.0] {
            let mut d = vec![0.0; n];
            d[i] = s * pitch;
            out.push(d);
        }
    }
    let c = pitch / (n as f64).sqrt();
    for mask in 0..(1usize << n) {
        out.push(
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { c } else { -c })
                .collect(),
        );
    }
    out
}

/// Whether the one-pitch ball around `p` stays in `set`, ignoring points
/// outside the space.
pub fn is_interior_at(set: &ImplicitClosedSet, p: &[f64], pitch: f64, tol: Tolerance) -> bool {
    let mut q = p.to_vec();
    ball_offsets(p.len(), pitch).iter().all(|d| {
        for (k, (x, dx)) in p.iter().zip(d).enumerate() {
            q[k] = x + dx;
        }
        !set.scene.contains_tol(&q, tol) || set.contains_tol(&q, tol)
    })
}

/// Centers of grid cells whose corners inside the space disagree on
/// membership in `set`.
pub fn boundary_cloud(set: &ImplicitClosedSet, window: &Window) -> PointCloud {
    let n = window.dim();
    let res = window.resolution;
    // 0: outside the space, 1: in the space only, 2: in the set.
    let state: Vec<u8> = (0..window.node_count())
        .into_par_iter()
        .map(|flat| {
            let mut p = vec![0.0; n];
            window.node_at(flat, &mut p);
            if set.contains(&p) {
                2
            } else if set.scene.contains(&p) {
                1
            } else {
                0
            }
        })
        .collect();
    let cells = (res - 1).pow(n as u32);
    let points: Vec<Point> = (0..cells)
        .into_par_iter()
        .filter_map(|cell| {
            let mut idx = vec![0usize; n];
            let mut rem = cell;
            for axis in (0..n).rev() {
                idx[axis] = rem % (res - 1);
                rem /= res - 1;
            }
            let (mut seen_in, mut seen_out) = (false, false);
            for mask in 0..(1usize << n) {
                let mut flat = 0;
                for (axis, k) in idx.iter().enumerate() {
                    flat = flat * res + k + (mask >> axis & 1);
                }
                match state[flat] {
                    2 => seen_in = true,
                    1 => seen_out = true,
                    _ => {}
                }
            }
            (seen_in && seen_out).then(|| {
                Point(
                    (0..n)
                        .map(|a| window.node(a, idx[a]) + 0.5 * window.axis_pitch(a))
                        .collect(),
                )
            })
        })
        .collect();
    PointCloud::new(
        points,
        n,
        Provenance {
            tag: format!("boundary[{}]", set.tag),
            window: window.clone(),
        },
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactnessWitness {
    /// Set member next to the limit.
    pub member: Point,
    /// Limit point outside the space.
    pub limit: Point,
    /// Index of the window the witness was found in.
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CompactnessVerdict {
    CompactAtResolution { samples: usize },
    Unbounded { witness: Point },
    ClosureEscape { witness: CompactnessWitness },
}

impl CompactnessVerdict {
    pub fn is_compact(&self) -> bool {
        matches!(self, CompactnessVerdict::CompactAtResolution { .. })
    }
}

/// Faces `(axis, upper?)` whose bound changes across the windows.
fn moving_faces(windows: &[Window]) -> Vec<(usize, bool)> {
    let first = &windows[0];
    let mut out = Vec::new();
    for axis in 0..first.dim() {
        if windows.iter().any(|w| w.lo[axis] != first.lo[axis]) {
            out.push((axis, false));
        }
        if windows.iter().any(|w| w.hi[axis] != first.hi[axis]) {
            out.push((axis, true));
        }
    }
    out
}

fn shell_sample<'a>(cloud: &'a PointCloud, w: &Window, faces: &[(usize, bool)]) -> Option<&'a Point> {
    cloud.points().iter().find(|p| {
        faces.iter().any(|&(axis, upper)| {
            let band = 2.0 * w.axis_pitch(axis);
            if upper {
                p.0[axis] >= w.hi[axis] - band
            } else {
                p.0[axis] <= w.lo[axis] + band
            }
        })
    })
}

const BISECTION_STEPS: usize = 60;

/// Bisects the segment from a member to a non-member of `set` and reports
/// the flip point if it lies outside the space.
fn escape_along(set: &ImplicitClosedSet, member: &Point, outside: &Point) -> Option<Point> {
    let mut lo = member.clone();
    let mut hi = outside.clone();
    for _ in 0..BISECTION_STEPS {
        let mid = lo.lerp(&hi, 0.5);
        if set.contains_tol(mid.coords(), Tolerance::EXACT) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let scene = &set.scene;
    (!scene.contains(hi.coords()) && scene.membership.eval_relaxed(hi.coords(), 1e-9))
        .then_some(hi)
}

/// Compactness of a set at the resolution of `windows`.
///
/// Unbounded when samples reach the moving outer faces of every window.
/// Otherwise a closure escape is searched: a member sample with a grid
/// neighbour outside the space is bisected toward it, and if the set's
/// frontier there is a limit point missing from the space the set is not
/// compact.
pub fn compactness_probe(set: &ImplicitClosedSet, windows: &[Window]) -> CompactnessVerdict {
    let clouds: Vec<PointCloud> = windows.iter().map(|w| sample(set, w)).collect();
    let faces = if windows.len() >= 2 {
        moving_faces(windows)
    } else {
        Vec::new()
    };
    if !faces.is_empty() {
        let hits: Vec<Option<&Point>> = clouds
            .iter()
            .zip(windows)
            .map(|(c, w)| shell_sample(c, w, &faces))
            .collect();
        if hits.iter().all(Option::is_some) {
            return CompactnessVerdict::Unbounded {
                witness: hits.last().copied().flatten().cloned().expect("checked"),
            };
        }
    }
    for (k, (cloud, w)) in clouds.iter().zip(windows).enumerate() {
        for g in cloud.points() {
            if !set.contains_tol(g.coords(), Tolerance::EXACT) {
                continue;
            }
            for axis in 0..w.dim() {
                for s in [-1.0, 1.0] {
                    let mut nb = g.clone();
                    nb.0[axis] += s * w.axis_pitch(axis);
                    if set.scene.contains(nb.coords()) {
                        continue;
                    }
                    if let Some(limit) = escape_along(set, g, &nb) {
                        return CompactnessVerdict::ClosureEscape {
                            witness: CompactnessWitness {
                                member: g.clone(),
                                limit,
                                window: k,
                            },
                        };
                    }
                }
            }
        }
    }
    CompactnessVerdict::CompactAtResolution {
        samples: clouds.iter().map(PointCloud::len).sum(),
    }
}
