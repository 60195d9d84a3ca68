//! Bounded order intervals, small order boxes and boundary points on
//! segments.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::sup_direction;
use crate::geom::{Point, Tolerance};
use crate::order::{ConeOrder, OrderError};
use crate::scene::{ConstraintExpr, Scene};
use crate::setrep::{compactness_probe, is_interior_at, sample, CompactnessVerdict, ImplicitClosedSet};
use crate::window::Window;

#[derive(Debug, Error, PartialEq)]
pub enum PropsError {
    #[error("point {0} is outside the space")]
    OutsideSpace(Point),
    #[error("point {0} is not in the cone")]
    NotInCone(Point),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// All of R^n with the given order.
pub fn ambient_scene(dim: usize, order: ConeOrder, window: Window) -> Scene {
    Scene::new("ambient", dim, ConstraintExpr::And(Vec::new()), order, window)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Lemma31Outcome {
    Bounded { r: f64, samples: usize },
    UnboundedEvidence { witness: Point },
}

/// Sup of the norm over `a↓ ∩ (−a)↑` in R^n, with the outer-shell test of
/// the compactness probe guarding against growth across windows.
pub fn lemma31_bound(
    a: &Point,
    order: &ConeOrder,
    windows: &[Window],
) -> Result<Lemma31Outcome, PropsError> {
    if !order.in_cone(a.coords()) {
        return Err(PropsError::NotInCone(a.clone()));
    }
    let Some(first) = windows.first() else {
        return Err(PropsError::Precondition("no windows".into()));
    };
    let scene = Arc::new(ambient_scene(a.dim(), order.clone(), first.clone()));
    let neg = Point(a.0.iter().map(|c| -c).collect());
    let set = ImplicitClosedSet::interval(&scene, &neg, a).with_extra_samples(vec![
        a.clone(),
        neg,
        Point::zeros(a.dim()),
    ]);
    if let CompactnessVerdict::Unbounded { witness } = compactness_probe(&set, windows) {
        return Ok(Lemma31Outcome::UnboundedEvidence { witness });
    }
    let cloud = sample(&set, windows.last().expect("nonempty"));
    let r = cloud.points().iter().map(Point::norm).fold(0.0, f64::max);
    Ok(Lemma31Outcome::Bounded {
        r,
        samples: cloud.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxWitness {
    pub a: Point,
    pub b: Point,
    /// `a = x + t0·d`, `b = x − t0·d` with `d` the sup-norm-one cone direction.
    pub t0: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxFailure {
    pub steps: usize,
    pub reason: String,
}

impl fmt::Display for BoxFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} after {} halvings", self.reason, self.steps)
    }
}

const MAX_STEPS: usize = 60;
const UNIT: f64 = 1.0 / (1u64 << MAX_STEPS) as f64;

/// Shrinks `t` from the ball radius by halving until `b = x − t d` and
/// `a = x + t d` lie in the space, the sampled interval `b↑ ∩ a↓` lies in
/// the open ball, and `x` is interior to the interval at
/// `min(pitch, t/2)`.
pub fn lemma32_box(
    scene: &Arc<Scene>,
    x: &Point,
    center: &Point,
    radius: f64,
    pitch: f64,
) -> Result<BoxWitness, BoxFailure> {
    let Some(d) = sup_direction(scene) else {
        return Err(BoxFailure {
            steps: 0,
            reason: "cone has no interior direction".into(),
        });
    };
    let coordinatewise = scene.order == ConeOrder::Coordinatewise;
    let mut t = radius;
    let mut reason = String::from("no step tried");
    let mut steps = MAX_STEPS;
    for step in 0..MAX_STEPS {
        steps = step;
        let a = x.offset(&d, t);
        let b = x.offset(&d, -t);
        let next = t * 0.5;
        if a.0.iter().zip(&b.0).any(|(p, q)| p <= q) {
            reason = format!("box degenerates at t = {t:e}; {reason}");
            break;
        }
        let exact = |p: &Point| scene.contains_tol(p.coords(), Tolerance::EXACT);
        if !exact(&a) || !exact(&b) {
            reason = "box corners leave the space".into();
            t = next;
            continue;
        }
        let interval = ImplicitClosedSet::interval(scene, &b, &a);
        let w = if coordinatewise {
            Window::new(b.0.clone(), a.0.clone(), 17).expect("t > 0")
        } else {
            Window::around(x, 4.0 * t, 33)
        };
        let mut pts = sample(&interval, &w).points().to_vec();
        pts.push(a.clone());
        pts.push(b.clone());
        if pts.iter().any(|p| p.dist(center) >= radius) {
            reason = "order box leaves the ball".into();
            t = next;
            continue;
        }
        let rho = pitch.min(0.5 * t);
        if !is_interior_at(&interval, x.coords(), rho, Tolerance::EXACT) {
            reason = "point is not interior to the box".into();
            t = next;
            continue;
        }
        return Ok(BoxWitness {
            a,
            b,
            t0: t,
            steps: step,
        });
    }
    Err(BoxFailure {
        steps,
        reason,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryPoint {
    /// Last point found inside the interval.
    pub u: Point,
    /// First point found outside it.
    pub outside: Point,
    pub segment_length: f64,
    /// Width of the final bisection bracket, as a length along the segment.
    pub flip_interval: f64,
}

/// Boundary point of `b↑ ∩ a↓` on the segment from the interior point `x`
/// to the exterior point `c`, by 60 bisection steps. For the
/// coordinatewise order the result is clamped into the segment's box, so
/// order chains with the endpoints hold exactly.
pub fn lemma33_boundary_point(
    c: &Point,
    x: &Point,
    a: &Point,
    b: &Point,
    scene: &Arc<Scene>,
) -> Result<BoundaryPoint, PropsError> {
    let set = ImplicitClosedSet::interval(scene, b, a);
    let inside = |p: &Point| set.contains_tol(p.coords(), Tolerance::EXACT);
    if !inside(x) {
        return Err(PropsError::Precondition(format!("{x} is not in the interval")));
    }
    if inside(c) {
        return Err(PropsError::Precondition(format!("{c} is in the interval")));
    }
    let ord = &scene.order;
    if !ord.leq_raw(c.coords(), x.coords()) && !ord.leq_raw(x.coords(), c.coords()) {
        return Err(PropsError::Precondition("endpoints are not comparable".into()));
    }
    let clamp = |p: Point| -> Point {
        if *ord != ConeOrder::Coordinatewise {
            return p;
        }
        Point(
            p.0.iter()
                .zip(x.0.iter().zip(&c.0))
                .map(|(v, (s, e))| v.clamp(s.min(*e), s.max(*e)))
                .collect(),
        )
    };
    // The bracket is kept as integers in units of 2^-60 of the segment so
    // its width is exact after the last step.
    let at = |k: u64| clamp(x.lerp(c, k as f64 * UNIT));
    let (mut lo, mut hi) = (0u64, 1u64 << MAX_STEPS);
    for _ in 0..MAX_STEPS {
        let mid = lo + (hi - lo) / 2;
        if inside(&at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let len = x.dist(c);
    Ok(BoundaryPoint {
        u: at(lo),
        outside: at(hi),
        segment_length: len,
        flip_interval: (hi - lo) as f64 * UNIT * len,
    })
}
