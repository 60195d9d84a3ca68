//! Closed sets given by membership predicates, and their point-cloud views.
//!
//! An [`ImplicitClosedSet`] pairs a membership test with optional
//! closed-form samplers. Sampling a set over a [`Window`] returns every grid
//! node that passes the membership test plus the closed-form samples, so thin
//! sets such as curves and segments are visible even though they contain no
//! grid nodes.

mod cloud;
mod curve;
mod hausdorff;
mod topology;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

pub use cloud::{distance_to_cloud, CloudError, KdTree, PointCloud, Provenance};
pub use curve::{CurveKind, GapCurve};
pub use hausdorff::{
    hausdorff_distance, hausdorff_windowed, DivergenceReport, DivergenceVerdict, HausdorffConfig,
};
pub use topology::{
    boundary_cloud, compactness_probe, is_interior_at, CompactnessVerdict, CompactnessWitness,
};

use crate::geom::{Point, Tolerance, TAU_MEM};
use crate::order::ConeOrder;
use crate::scene::{ConstraintExpr, Scene};
use crate::window::Window;

/// Extra samples for sets that grid sampling cannot see.
pub trait ClosedFormSampler: Send + Sync + fmt::Debug {
    /// Samples for `window`. Points outside the window may be included when
    /// they carry information the window would lose (curve tails).
    fn samples(&self, window: &Window) -> Vec<Point>;
}

pub type Predicate = dyn Fn(&[f64], Tolerance) -> bool + Send + Sync;

#[derive(Clone)]
enum SetKind {
    Ambient,
    Ideal(Point),
    Filter(Point),
    Interval { lower: Point, upper: Point },
    /// Open ball.
    Ball { center: Point, radius: f64 },
    /// Closed axis-aligned box.
    AxisBox { lo: Vec<f64>, hi: Vec<f64> },
    Region(ConstraintExpr),
    /// Points whose one-pitch ball stays inside `of`, relative to the space.
    Interior { of: Box<ImplicitClosedSet>, pitch: f64 },
    Diff(Box<ImplicitClosedSet>, Box<ImplicitClosedSet>),
    Inter(Vec<ImplicitClosedSet>),
    Union(Vec<ImplicitClosedSet>),
    Points(Vec<Point>),
    Curve(Arc<GapCurve>),
    /// Open tube of `radius` around the closed segment `[a, b]`.
    Tube { a: Point, b: Point, radius: f64 },
    Custom(Arc<Predicate>),
}

/// A subset of a scene described by a membership test.
#[derive(Clone)]
pub struct ImplicitClosedSet {
    pub tag: String,
    pub scene: Arc<Scene>,
    kind: SetKind,
    samplers: Vec<Arc<dyn ClosedFormSampler>>,
}

impl fmt::Debug for ImplicitClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitClosedSet")
            .field("tag", &self.tag)
            .field("scene", &self.scene.name)
            .finish()
    }
}

/// Order comparison used inside membership tests. Slack beyond the default
/// membership tolerance is applied to both order kinds.
#[inline]
fn order_leq(order: &ConeOrder, a: &[f64], b: &[f64], tol: Tolerance) -> bool {
    if tol.nonstrict <= TAU_MEM {
        order.leq_raw(a, b)
    } else {
        order.leq_within(a, b, tol.nonstrict)
    }
}

fn point_to_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|c| c * c).sum();
    let t = if len2 == 0.0 {
        0.0
    } else {
        let dot: f64 = p.iter().zip(a).zip(&ab).map(|((p, a), d)| (p - a) * d).sum();
        (dot / len2).clamp(0.0, 1.0)
    };
    p.iter()
        .zip(a)
        .zip(&ab)
        .map(|((p, a), d)| {
            let q = a + t * d;
            (p - q) * (p - q)
        })
        .sum::<f64>()
        .sqrt()
}

impl ImplicitClosedSet {
    fn with_kind(scene: &Arc<Scene>, tag: String, kind: SetKind) -> Self {
        ImplicitClosedSet {
            tag,
            scene: Arc::clone(scene),
            kind,
            samplers: Vec::new(),
        }
    }

    /// The whole space.
    pub fn ambient(scene: &Arc<Scene>) -> Self {
        Self::with_kind(scene, "Y".into(), SetKind::Ambient)
    }

    /// Principal ideal `x↓`.
    pub fn ideal(scene: &Arc<Scene>, x: &Point) -> Self {
        Self::with_kind(scene, format!("ideal{x}"), SetKind::Ideal(x.clone()))
    }

    /// Principal filter `x↑`.
    pub fn filter(scene: &Arc<Scene>, x: &Point) -> Self {
        Self::with_kind(scene, format!("filter{x}"), SetKind::Filter(x.clone()))
    }

    /// Order interval `b↑ ∩ a↓`.
    pub fn interval(scene: &Arc<Scene>, lower: &Point, upper: &Point) -> Self {
        Self::with_kind(
            scene,
            format!("interval({lower}, {upper})"),
            SetKind::Interval {
                lower: lower.clone(),
                upper: upper.clone(),
            },
        )
    }

    /// Open ball intersected with the space. The centre is kept as a closed-form sample so balls below grid
    /// pitch are still seen.
    pub fn ball(scene: &Arc<Scene>, center: &Point, radius: f64) -> Self {
        Self::with_kind(
            scene,
            format!("ball({center}, {radius})"),
            SetKind::Ball {
                center: center.clone(),
                radius,
            },
        )
        .with_sampler(Arc::new(FixedPoints(vec![center.clone()])))
    }

    /// Closed box intersected with the space.
    pub fn axis_box(scene: &Arc<Scene>, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        let tag = format!("box({}, {})", Point(lo.clone()), Point(hi.clone()));
        Self::with_kind(scene, tag, SetKind::AxisBox { lo, hi })
    }

    /// Polynomial region intersected with the space.
    pub fn region(scene: &Arc<Scene>, tag: impl Into<String>, expr: ConstraintExpr) -> Self {
        Self::with_kind(scene, tag.into(), SetKind::Region(expr))
    }

    pub fn points(scene: &Arc<Scene>, tag: impl Into<String>, pts: Vec<Point>) -> Self {
        Self::with_kind(scene, tag.into(), SetKind::Points(pts))
    }

    pub fn curve(scene: &Arc<Scene>, curve: GapCurve) -> Self {
        let tag = curve.tag();
        Self::with_kind(scene, tag, SetKind::Curve(Arc::new(curve)))
    }

    /// Open tube around a segment, intersected with the space.
    pub fn tube(scene: &Arc<Scene>, a: &Point, b: &Point, radius: f64) -> Self {
        Self::with_kind(
            scene,
            format!("tube({a}, {b}, {radius})"),
            SetKind::Tube {
                a: a.clone(),
                b: b.clone(),
                radius,
            },
        )
    }

    pub fn custom(
        scene: &Arc<Scene>,
        tag: impl Into<String>,
        pred: impl Fn(&[f64], Tolerance) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::with_kind(scene, tag.into(), SetKind::Custom(Arc::new(pred)))
    }

    /// Interior at resolution `pitch`, relative to the space.
    pub fn interior(&self, pitch: f64) -> Self {
        Self::with_kind(
            &self.scene,
            format!("int[{}]", self.tag),
            SetKind::Interior {
                of: Box::new(self.clone()),
                pitch,
            },
        )
    }

    pub fn minus(&self, other: &ImplicitClosedSet) -> Self {
        Self::with_kind(
            &self.scene,
            format!("{} \\ {}", self.tag, other.tag),
            SetKind::Diff(Box::new(self.clone()), Box::new(other.clone())),
        )
    }

    pub fn intersect(&self, other: &ImplicitClosedSet) -> Self {
        Self::with_kind(
            &self.scene,
            format!("{} ∩ {}", self.tag, other.tag),
            SetKind::Inter(vec![self.clone(), other.clone()]),
        )
    }

    pub fn union(&self, other: &ImplicitClosedSet) -> Self {
        Self::with_kind(
            &self.scene,
            format!("{} ∪ {}", self.tag, other.tag),
            SetKind::Union(vec![self.clone(), other.clone()]),
        )
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    /// Adds fixed points as closed-form samples; only members are kept.
    pub fn with_extra_samples(self, pts: Vec<Point>) -> Self {
        self.with_sampler(Arc::new(FixedPoints(pts)))
    }

    pub fn with_sampler(mut self, s: Arc<dyn ClosedFormSampler>) -> Self {
        self.samplers.push(s);
        self
    }

    pub fn dim(&self) -> usize {
        self.scene.dim
    }

    /// The ideal's or filter's anchor point, if this is one.
    pub fn anchor(&self) -> Option<&Point> {
        match &self.kind {
            SetKind::Ideal(x) | SetKind::Filter(x) => Some(x),
            _ => None,
        }
    }

    /// Membership with the default tolerance.
    #[inline]
    pub fn contains(&self, p: &[f64]) -> bool {
        self.contains_tol(p, Tolerance::MEMBERSHIP)
    }

    pub fn contains_tol(&self, p: &[f64], tol: Tolerance) -> bool {
        let scene = &*self.scene;
        let in_y = || scene.contains_tol(p, tol);
        match &self.kind {
            SetKind::Ambient => in_y(),
            SetKind::Ideal(x) => order_leq(&scene.order, p, x.coords(), tol) && in_y(),
            SetKind::Filter(x) => order_leq(&scene.order, x.coords(), p, tol) && in_y(),
            SetKind::Interval { lower, upper } => {
                order_leq(&scene.order, lower.coords(), p, tol)
                    && order_leq(&scene.order, p, upper.coords(), tol)
                    && in_y()
            }
            SetKind::Ball { center, radius } => {
                crate::geom::dist(p, center.coords()) < radius + tol.strict && in_y()
            }
            SetKind::AxisBox { lo, hi } => {
                p.iter()
                    .zip(lo.iter().zip(hi))
                    .all(|(c, (l, h))| *c >= l - tol.nonstrict && *c <= h + tol.nonstrict)
                    && in_y()
            }
            SetKind::Region(e) => e.eval(p, tol) && in_y(),
            SetKind::Interior { of, pitch } => {
                of.contains_tol(p, tol) && is_interior_at(of, p, *pitch, tol)
            }
            SetKind::Diff(a, b) => a.contains_tol(p, tol) && !b.contains_tol(p, tol),
            SetKind::Inter(items) => items.iter().all(|s| s.contains_tol(p, tol)),
            SetKind::Union(items) => items.iter().any(|s| s.contains_tol(p, tol)),
            SetKind::Points(pts) => {
                let eps = tol.nonstrict.max(1e-12);
                pts.iter()
                    .any(|q| q.coords().iter().zip(p).all(|(a, b)| (a - b).abs() <= eps))
            }
            SetKind::Curve(c) => c.contains(p, tol),
            SetKind::Tube { a, b, radius } => {
                point_to_segment(p, a.coords(), b.coords()) < radius + tol.strict && in_y()
            }
            SetKind::Custom(f) => f(p, tol),
        }
    }

    /// Whether grid nodes can represent the set. Finite point lists and
    /// curves have measure zero and rely on closed-form samples only.
    fn grid_sampled(&self) -> bool {
        match &self.kind {
            SetKind::Points(_) | SetKind::Curve(_) => false,
            SetKind::Inter(items) => items.iter().all(|s| s.grid_sampled()),
            SetKind::Diff(a, _) => a.grid_sampled(),
            SetKind::Interior { of, .. } => of.grid_sampled(),
            _ => true,
        }
    }

    /// Axis-aligned bounds known from the construction, used to restrict
    /// grid sampling. `None` means unknown.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.kind {
            SetKind::Ball { center, radius } => Some((
                center.coords().iter().map(|c| c - radius).collect(),
                center.coords().iter().map(|c| c + radius).collect(),
            )),
            SetKind::AxisBox { lo, hi } => Some((lo.clone(), hi.clone())),
            SetKind::Interval { lower, upper }
                if self.scene.order == ConeOrder::Coordinatewise =>
            {
                Some((lower.0.clone(), upper.0.clone()))
            }
            SetKind::Tube { a, b, radius } => Some((
                a.0.iter().zip(&b.0).map(|(x, y)| x.min(*y) - radius).collect(),
                a.0.iter().zip(&b.0).map(|(x, y)| x.max(*y) + radius).collect(),
            )),
            SetKind::Inter(items) => {
                let mut acc: Option<(Vec<f64>, Vec<f64>)> = None;
                for b in items.iter().filter_map(|s| s.bounding_box()) {
                    acc = Some(match acc {
                        None => b,
                        Some((lo, hi)) => (
                            lo.iter().zip(&b.0).map(|(x, y)| x.max(*y)).collect(),
                            hi.iter().zip(&b.1).map(|(x, y)| x.min(*y)).collect(),
                        ),
                    });
                }
                acc
            }
            SetKind::Diff(a, _) => a.bounding_box(),
            SetKind::Interior { of, .. } => of.bounding_box(),
            SetKind::Points(pts) if !pts.is_empty() => {
                let n = pts[0].dim();
                let lo = (0..n)
                    .map(|i| pts.iter().map(|p| p.0[i]).fold(f64::INFINITY, f64::min))
                    .collect();
                let hi = (0..n)
                    .map(|i| pts.iter().map(|p| p.0[i]).fold(f64::NEG_INFINITY, f64::max))
                    .collect();
                Some((lo, hi))
            }
            _ => None,
        }
    }

    fn collect_samplers(&self, out: &mut Vec<Arc<dyn ClosedFormSampler>>) {
        out.extend(self.samplers.iter().cloned());
        match &self.kind {
            SetKind::Curve(c) => out.push(c.clone()),
            SetKind::Points(pts) => out.push(Arc::new(FixedPoints(pts.clone()))),
            SetKind::Inter(items) | SetKind::Union(items) => {
                for s in items {
                    s.collect_samplers(out);
                }
            }
            SetKind::Diff(a, _) => a.collect_samplers(out),
            SetKind::Interior { of, .. } => of.collect_samplers(out),
            _ => {}
        }
    }

    /// Every closed-form sample, filtered by membership.
    pub fn closed_form_samples(&self, window: &Window) -> Vec<Point> {
        let mut samplers = Vec::new();
        self.collect_samplers(&mut samplers);
        let mut out = Vec::new();
        for s in samplers {
            out.extend(s.samples(window).into_iter().filter(|p| self.contains(p.coords())));
        }
        out
    }

    /// Grid nodes of `window` inside the set, in row-major order.
    pub fn grid_samples(&self, window: &Window) -> Vec<Point> {
        if !self.grid_sampled() || window.dim() != self.dim() {
            return Vec::new();
        }
        let n = window.dim();
        let res = window.resolution;
        // Index range per axis, narrowed by the bounding box.
        let ranges: Vec<(usize, usize)> = (0..n)
            .map(|axis| match self.bounding_box() {
                Some((lo, hi)) => {
                    let p = window.axis_pitch(axis);
                    let l = ((lo[axis] - window.lo[axis]) / p - 1e-9).ceil().max(0.0);
                    let h = ((hi[axis] - window.lo[axis]) / p + 1e-9).floor().min((res - 1) as f64);
                    if h < l {
                        (1, 0)
                    } else {
                        (l as usize, h as usize)
                    }
                }
                None => (0, res - 1),
            })
            .collect();
        if ranges.iter().any(|(l, h)| l > h) {
            return Vec::new();
        }
        let (first_lo, first_hi) = ranges[0];
        (first_lo..=first_hi)
            .into_par_iter()
            .map(|k0| {
                let mut out = Vec::new();
                let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
                idx[0] = k0;
                let mut p: Vec<f64> = (0..n).map(|a| window.node(a, idx[a])).collect();
                loop {
                    if self.contains(&p) {
                        out.push(Point(p.clone()));
                    }
                    let mut axis = n;
                    loop {
                        axis -= 1;
                        if axis == 0 {
                            return out;
                        }
                        if idx[axis] < ranges[axis].1 {
                            idx[axis] += 1;
                            p[axis] = window.node(axis, idx[axis]);
                            break;
                        }
                        idx[axis] = ranges[axis].0;
                        p[axis] = window.node(axis, idx[axis]);
                    }
                }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }
}

#[derive(Debug)]
struct FixedPoints(Vec<Point>);

impl ClosedFormSampler for FixedPoints {
    fn samples(&self, window: &Window) -> Vec<Point> {
        self.0
            .iter()
            .filter(|p| window.contains(p.coords()))
            .cloned()
            .collect()
    }
}

/// Grid nodes inside the set followed by closed-form samples.
///
/// Deterministic: grid nodes come in row-major order regardless of how the
/// work is split across threads.
pub fn sample(set: &ImplicitClosedSet, window: &Window) -> PointCloud {
    let mut points = set.grid_samples(window);
    points.extend(set.closed_form_samples(window));
    PointCloud::new(
        points,
        set.dim(),
        Provenance {
            tag: set.tag.clone(),
            window: window.clone(),
        },
    )
}

/// `n` points drawn uniformly from `window`, kept when they lie in the
/// scene and pass `accept`. Deterministic for a fixed seed.
pub fn seeded_points(
    scene: &Scene,
    window: &Window,
    n: usize,
    seed: u64,
    accept: impl Fn(&Point) -> bool,
) -> Vec<Point> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut tries = 0usize;
    while out.len() < n && tries < 1_000_000 {
        tries += 1;
        let p = Point(
            (0..window.dim())
                .map(|i| rng.gen_range(window.lo[i]..window.hi[i]))
                .collect(),
        );
        if scene.contains(p.coords()) && accept(&p) {
            out.push(p);
        }
    }
    out
}
