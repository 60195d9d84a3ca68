//! Continuity of the inverse map `x↓ ↦ x` at a point.
//!
//! A candidate Fell neighbourhood `N = O1⁻ ∩ (Y \ E)⁺` of `x0↓` is tested
//! by scanning points `y` of the space: an escape is a `y` outside the
//! target neighbourhood `V` whose ideal still lies in `N`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{hit_point, miss_violation};
use crate::geom::Point;
use crate::order::ConeOrder;
use crate::props::{classify_point, e1_set, ClassStatus, Classification, PropsError};
use crate::scene::Scene;
use crate::setrep::{sample, ImplicitClosedSet, PointCloud};
use crate::window::Window;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InverseStatus {
    ContinuousWitness,
    NotContinuous,
    Inconclusive,
}

/// One candidate neighbourhood `O1⁻ ∩ (Y \ E)⁺`, sampled on `window`.
#[derive(Clone, Debug)]
pub struct InverseCandidate {
    pub label: String,
    pub params: Vec<f64>,
    pub o1: ImplicitClosedSet,
    pub e: Option<ImplicitClosedSet>,
    pub window: Window,
}

#[derive(Clone, Debug)]
pub enum InverseCandidates {
    /// Built from the classification of `x0` within the given radius.
    Auto { radius: f64 },
    Explicit(Vec<InverseCandidate>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateOutcome {
    pub label: String,
    pub params: Vec<f64>,
    /// Escape of largest norm, if any.
    pub escape: Option<Point>,
    pub escapes: usize,
    pub revalidated: bool,
    pub scanned: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseReport {
    pub status: InverseStatus,
    pub x0: Point,
    pub v_tag: String,
    pub classification: Option<Classification>,
    pub candidates: Vec<CandidateOutcome>,
    pub note: Option<String>,
}

/// Resolution used for candidate clouds and the scan grid.
fn scan_resolution(dim: usize) -> usize {
    if dim <= 2 {
        33
    } else {
        13
    }
}

/// Per-axis scan values: the window grid plus offsets `±10^(j/4)` from
/// `x0`, reaching far outside the window on a log scale.
fn scan_points(scene: &Scene, x0: &Point, window: &Window) -> Vec<Point> {
    let n = x0.dim();
    let w = window.with_resolution(scan_resolution(n));
    let step = if n <= 2 { 1 } else { 2 };
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            let mut v = w.axis_values(a);
            for j in (-12..=16).step_by(step) {
                let o = 10f64.powf(f64::from(j) / 4.0);
                v.push(x0.0[a] + o);
                v.push(x0.0[a] - o);
            }
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect();
    let total: usize = axes.iter().map(Vec::len).product();
    (0..total)
        .map(|mut k| {
            let mut c = vec![0.0; n];
            for a in (0..n).rev() {
                c[a] = axes[a][k % axes[a].len()];
                k /= axes[a].len();
            }
            Point(c)
        })
        .filter(|p| scene.contains(p.coords()))
        .collect()
}

struct Clouds {
    o1: PointCloud,
    e: Option<PointCloud>,
    /// Coordinatewise lower bound of the `O1` samples, as a cheap filter.
    o1_floor: Option<Vec<f64>>,
}

impl Clouds {
    fn new(c: &InverseCandidate, window: &Window) -> Self {
        let o1 = sample(&c.o1, window);
        let e = c.e.as_ref().map(|e| sample(e, window));
        let o1_floor = (c.o1.scene.order == ConeOrder::Coordinatewise && !o1.is_empty()).then(|| {
            (0..o1.dim())
                .map(|a| o1.points().iter().map(|p| p.0[a]).fold(f64::INFINITY, f64::min))
                .collect()
        });
        Clouds { o1, e, o1_floor }
    }

    fn in_neighbourhood(&self, ideal: &ImplicitClosedSet, y: &Point) -> bool {
        if let Some(f) = &self.o1_floor {
            if f.iter().zip(&y.0).any(|(m, c)| c < m) {
                return false;
            }
        }
        hit_point(ideal, &self.o1).is_some()
            && self.e.as_ref().is_none_or(|e| miss_violation(ideal, e).is_none())
    }
}

fn run_candidate(
    scene: &Arc<Scene>,
    x0: &Point,
    v: &ImplicitClosedSet,
    c: &InverseCandidate,
    scan: &[Point],
) -> CandidateOutcome {
    let mut out = CandidateOutcome {
        label: c.label.clone(),
        params: c.params.clone(),
        escape: None,
        escapes: 0,
        revalidated: false,
        scanned: 0,
        note: None,
    };
    let w = c.window.with_resolution(scan_resolution(x0.dim()));
    let clouds = Clouds::new(c, &w);
    if clouds.o1.is_empty() {
        out.note = Some(format!("{} has no samples", c.o1.tag));
        return out;
    }
    if !clouds.in_neighbourhood(&ImplicitClosedSet::ideal(scene, x0), x0) {
        out.note = Some("not a neighbourhood of x0↓ at resolution".into());
        return out;
    }
    let outside: Vec<&Point> = scan.iter().filter(|y| !v.contains(y.coords())).collect();
    out.scanned = outside.len();
    let escapes: Vec<&Point> = outside
        .par_iter()
        .filter(|y| clouds.in_neighbourhood(&ImplicitClosedSet::ideal(scene, y), y))
        .copied()
        .collect();
    out.escapes = escapes.len();
    let best = escapes
        .iter()
        .fold(None::<&Point>, |b, y| match b {
            Some(b) if b.norm() >= y.norm() => Some(b),
            _ => Some(y),
        })
        .cloned();
    if let Some(y) = &best {
        let fine = Clouds::new(c, &w.with_resolution(2 * w.resolution - 1));
        out.revalidated = scene.contains(y.coords())
            && !v.contains(y.coords())
            && fine.in_neighbourhood(&ImplicitClosedSet::ideal(scene, y), y);
    }
    out.escape = best;
    out
}

fn auto_candidate(
    scene: &Arc<Scene>,
    x0: &Point,
    class: &Classification,
) -> Option<InverseCandidate> {
    let res = scan_resolution(x0.dim());
    match class.status {
        ClassStatus::UpperSingular => {
            let r1 = *class.singular.sub_radii.first()?;
            Some(InverseCandidate {
                label: "singular".into(),
                params: vec![r1],
                o1: ImplicitClosedSet::ball(scene, x0, r1),
                e: None,
                window: Window::around(x0, r1, res),
            })
        }
        ClassStatus::UpperCompactBounded => {
            let (a, b) = (class.compact.a.as_ref()?, class.compact.b.as_ref()?);
            let (e1, w) = e1_set(scene, a, b);
            let w = w.with_resolution(res);
            Some(InverseCandidate {
                label: "compact_bounded".into(),
                params: vec![class.compact.t0?],
                o1: ImplicitClosedSet::interval(scene, b, a).interior(w.pitch()),
                e: Some(e1),
                window: w,
            })
        }
        _ => None,
    }
}

/// Looks for a neighbourhood `N` of `x0↓` with `{y : y↓ ∈ N} ⊆ V`.
/// Candidates are built from the classification of `x0` or supplied
/// explicitly; points `y` are scanned on `window` and far outside it.
pub fn inverse_probe(
    scene: &Arc<Scene>,
    x0: &Point,
    v: &ImplicitClosedSet,
    candidates: &InverseCandidates,
    window: &Window,
) -> Result<InverseReport, PropsError> {
    if !scene.contains(x0.coords()) {
        return Err(PropsError::OutsideSpace(x0.clone()));
    }
    if !v.contains(x0.coords()) {
        return Err(PropsError::Precondition(format!("{x0} is not in {}", v.tag)));
    }
    let mut report = InverseReport {
        status: InverseStatus::Inconclusive,
        x0: x0.clone(),
        v_tag: v.tag.clone(),
        classification: None,
        candidates: Vec::new(),
        note: None,
    };
    let scan = scan_points(scene, x0, window);
    if scan.iter().all(|y| v.contains(y.coords())) {
        report.status = InverseStatus::ContinuousWitness;
        report.note = Some("V contains every scanned point of the space".into());
        return Ok(report);
    }
    let list = match candidates {
        InverseCandidates::Explicit(list) => list.clone(),
        InverseCandidates::Auto { radius } => {
            let class = classify_point(scene, x0, &[*radius], window)?;
            let cand = auto_candidate(scene, x0, &class);
            report.classification = Some(class);
            match cand {
                Some(c) => vec![c],
                None => {
                    report.note = Some(
                        "x0 is neither upper singular nor upper compact bounded; \
                         no candidate neighbourhood"
                            .into(),
                    );
                    return Ok(report);
                }
            }
        }
    };
    report.candidates = list
        .iter()
        .map(|c| run_candidate(scene, x0, v, c, &scan))
        .collect();
    let valid: Vec<&CandidateOutcome> =
        report.candidates.iter().filter(|c| c.note.is_none()).collect();
    report.status = if valid.is_empty() {
        report.note = Some("no valid candidate neighbourhood".into());
        InverseStatus::Inconclusive
    } else if valid.iter().any(|c| c.escape.is_none()) {
        InverseStatus::ContinuousWitness
    } else if valid.iter().all(|c| c.revalidated) {
        InverseStatus::NotContinuous
    } else {
        report.note = Some("an escape failed re-validation".into());
        InverseStatus::Inconclusive
    };
    Ok(report)
}
