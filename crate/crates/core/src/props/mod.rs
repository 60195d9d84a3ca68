//! Order-topological predicates checked at grid resolution, and the
//! constructive box and boundary-point routines behind them.

mod lemmas;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use lemmas::{
    ambient_scene, lemma31_bound, lemma32_box, lemma33_boundary_point, BoundaryPoint, BoxFailure,
    BoxWitness, Lemma31Outcome, PropsError,
};

use crate::geom::{Point, Tolerance, TAU_MEM};
use crate::hyperspace::hit_point;
use crate::scene::Scene;
use crate::setrep::{
    compactness_probe, is_interior_at, sample, CompactnessVerdict, ImplicitClosedSet,
};
use crate::window::Window;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PredicateStatus {
    PassedAtResolution,
    Falsified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedPoint {
    pub role: String,
    pub point: Point,
}

fn named(role: &str, point: &Point) -> NamedPoint {
    NamedPoint {
        role: role.into(),
        point: point.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredicateReport {
    pub predicate: String,
    pub scene: String,
    pub samples_tested: usize,
    pub status: PredicateStatus,
    pub witness: Vec<NamedPoint>,
    pub revalidated: bool,
    pub resolution: usize,
    pub pitch: f64,
    pub notes: Vec<String>,
}

impl PredicateReport {
    fn new(predicate: &str, scene: &Scene, window: &Window) -> Self {
        PredicateReport {
            predicate: predicate.into(),
            scene: scene.name.clone(),
            samples_tested: 0,
            status: PredicateStatus::Inconclusive,
            witness: Vec::new(),
            revalidated: false,
            resolution: window.resolution,
            pitch: window.pitch(),
            notes: Vec::new(),
        }
    }
}

/// Sup-norm-one interior direction of the cone.
pub(crate) fn sup_direction(scene: &Scene) -> Option<Vec<f64>> {
    let d = scene.order.interior_direction(scene.dim).ok()?;
    let m = d.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    Some(d.iter().map(|c| c / m).collect())
}

/// Points near `x` at distance up to `delta`: grid nodes of `window` in the
/// ball plus axis and diagonal probes at `delta` and `delta / 2`.
fn neighbours(scene: &Scene, x: &Point, delta: f64, window: &Window) -> Vec<Point> {
    let n = x.dim();
    let mut out = Vec::new();
    let ranges: Vec<(usize, usize)> = (0..n)
        .map(|a| {
            let p = window.axis_pitch(a);
            let lo = ((x.0[a] - delta - window.lo[a]) / p).ceil().max(0.0) as usize;
            let hi = ((x.0[a] + delta - window.lo[a]) / p)
                .floor()
                .min((window.resolution - 1) as f64);
            if hi < 0.0 {
                (1, 0)
            } else {
                (lo, hi as usize)
            }
        })
        .collect();
    if ranges.iter().all(|(l, h)| l <= h) {
        let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            let p = Point((0..n).map(|a| window.node(a, idx[a])).collect());
            if p.dist(x) <= delta {
                out.push(p);
            }
            let mut axis = n;
            loop {
                if axis == 0 {
                    break 'outer;
                }
                axis -= 1;
                if idx[axis] < ranges[axis].1 {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = ranges[axis].0;
            }
        }
    }
    for r in [delta, 0.5 * delta] {
        for i in 0..n {
            for s in [-1.0, 1.0] {
                let mut p = x.clone();
                p.0[i] += s * r;
                out.push(p);
            }
        }
        let c = r / (n as f64).sqrt();
        for mask in 0..(1usize << n) {
            out.push(Point(
                (0..n)
                    .map(|i| x.0[i] + if mask >> i & 1 == 1 { c } else { -c })
                    .collect(),
            ));
        }
    }
    out.retain(|p| scene.contains(p.coords()));
    out
}

/// Default open sets for `x`: a ball of radius 0.05·extent centred a tenth
/// of the extent below `x` along the cone direction, when that centre is in
/// the space, and the whole space.
pub fn default_open_sets(scene: &Arc<Scene>, x: &Point, window: &Window) -> Vec<ImplicitClosedSet> {
    let mut out = Vec::new();
    if let Some(d) = sup_direction(scene) {
        let c = x.offset(&d, -0.1 * window.extent());
        if scene.contains(c.coords()) {
            out.push(ImplicitClosedSet::ball(scene, &c, 0.05 * window.extent()));
        }
    }
    out.push(ImplicitClosedSet::ambient(scene));
    out
}

/// Decreasing continuity: whenever `x↓` meets an open `O`, so does `y↓`
/// for every `y` near `x`. Radii `pitch·2^j`, `j = 4..0`, are tried from
/// large to small; failing even at one pitch falsifies.
pub fn check_decreasing_continuous(
    scene: &Arc<Scene>,
    points: &[Point],
    open_sets: &[ImplicitClosedSet],
    window: &Window,
) -> PredicateReport {
    let mut report = PredicateReport::new("decreasing_continuous", scene, window);
    let pitch = window.pitch();
    let clouds: Vec<_> = open_sets.iter().map(|o| sample(o, window)).collect();
    let mut pairs = 0;
    for x in points {
        let ix = ImplicitClosedSet::ideal(scene, x);
        for (o, cloud) in open_sets.iter().zip(&clouds) {
            if hit_point(&ix, cloud).is_none() {
                continue;
            }
            pairs += 1;
            let mut failure = None;
            for j in (0..=4).rev() {
                let delta = pitch * f64::from(1u32 << j);
                let near = neighbours(scene, x, delta, window);
                report.samples_tested += near.len();
                failure = near
                    .par_iter()
                    .find_first(|y| hit_point(&ImplicitClosedSet::ideal(scene, y), cloud).is_none())
                    .cloned();
                if failure.is_none() {
                    break;
                }
            }
            if let Some(y) = failure {
                let fine = sample(o, &window.with_resolution(2 * window.resolution - 1));
                report.revalidated = hit_point(&ImplicitClosedSet::ideal(scene, &y), &fine).is_none();
                report.status = PredicateStatus::Falsified;
                report.witness = vec![named("x", x), named("y", &y)];
                report.notes.push(format!("open set {}", o.tag));
                return report;
            }
        }
    }
    report.status = if pairs == 0 {
        report.notes.push("no pair with x↓ meeting O".into());
        PredicateStatus::Inconclusive
    } else {
        PredicateStatus::PassedAtResolution
    };
    report
}

/// Proper inclusion: `y ∈ int x↓` implies `y↓ ⊆ int x↓`, and dually for
/// filters. Interiors are one-pitch balls relative to the space.
pub fn check_proper_inclusion(
    scene: &Arc<Scene>,
    pairs: &[(Point, Point)],
    window: &Window,
) -> PredicateReport {
    let mut report = PredicateReport::new("proper_inclusion", scene, window);
    let pitch = window.pitch();
    let mut used = 0;
    for (x, y) in pairs {
        let clauses = [
            (
                ImplicitClosedSet::ideal(scene, x),
                ImplicitClosedSet::ideal(scene, y),
            ),
            (
                ImplicitClosedSet::filter(scene, y),
                ImplicitClosedSet::filter(scene, x),
            ),
        ];
        for (k, (outer, inner)) in clauses.iter().enumerate() {
            let anchor = if k == 0 { y } else { x };
            if !outer.contains(anchor.coords())
                || !is_interior_at(outer, anchor.coords(), pitch, Tolerance::MEMBERSHIP)
            {
                continue;
            }
            used += 1;
            let cloud = sample(inner, window);
            report.samples_tested += cloud.len();
            let bad = cloud.points().par_iter().find_first(|s| {
                !is_interior_at(outer, s.coords(), pitch, Tolerance::MEMBERSHIP)
            });
            if let Some(s) = bad {
                let fine = pitch / 2.0;
                report.revalidated = !is_interior_at(outer, s.coords(), fine, Tolerance::MEMBERSHIP);
                report.status = PredicateStatus::Falsified;
                report.witness = vec![named("x", x), named("y", y), named("sample", s)];
                return report;
            }
        }
    }
    report.status = if used == 0 {
        report.notes.push("no pair with y interior to x↓".into());
        PredicateStatus::Inconclusive
    } else {
        PredicateStatus::PassedAtResolution
    };
    report
}

/// Dense boundaries: between a point outside an order box and a comparable
/// point inside it there is a boundary point of the box. With `strict` the
/// box must fit in a small ball around the sample; otherwise any box from
/// the construction is used.
pub fn check_dense_boundaries(
    scene: &Arc<Scene>,
    points: &[Point],
    strict: bool,
    window: &Window,
) -> PredicateReport {
    let mut report = PredicateReport::new("dense_boundaries", scene, window);
    let pitch = window.pitch();
    let radius = if strict { 0.05 } else { 0.25 } * window.extent();
    let Some(d) = sup_direction(scene) else {
        report.notes.push("cone has no interior direction".into());
        return report;
    };
    let n = scene.dim;
    let mut comparisons = 0;
    for x in points {
        let Ok(bx) = lemma32_box(scene, x, x, radius, pitch) else {
            continue;
        };
        let boxed = ImplicitClosedSet::interval(scene, &bx.b, &bx.a);
        let t = bx.t0;
        let zs = [x.clone(), x.offset(&d, 0.25 * t), x.offset(&d, -0.25 * t)];
        let mut dirs: Vec<Vec<f64>> = vec![d.clone(), d.iter().map(|c| -c).collect()];
        if scene.order == crate::order::ConeOrder::Coordinatewise {
            for i in 0..n {
                for s in [-1.0, 1.0] {
                    let mut e = vec![0.0; n];
                    e[i] = s;
                    dirs.push(e);
                }
            }
        }
        for z in &zs {
            if !boxed.contains(z.coords())
                || !is_interior_at(&boxed, z.coords(), pitch.min(t / 4.0), Tolerance::MEMBERSHIP)
            {
                continue;
            }
            for dir in &dirs {
                for s in [1.5, 3.0] {
                    let y = z.offset(dir, s * t);
                    if !scene.contains(y.coords()) || boxed.contains(y.coords()) {
                        continue;
                    }
                    let up = scene.order.leq_raw(z.coords(), y.coords());
                    let down = scene.order.leq_raw(y.coords(), z.coords());
                    if !up && !down {
                        continue;
                    }
                    comparisons += 1;
                    report.samples_tested += 1;
                    let ok = match lemma33_boundary_point(&y, z, &bx.a, &bx.b, scene) {
                        Ok(bp) => {
                            let (lo, hi) = if down { (&y, z) } else { (z, &y) };
                            scene.order.leq_within(lo.coords(), bp.u.coords(), TAU_MEM)
                                && scene.order.leq_within(bp.u.coords(), hi.coords(), TAU_MEM)
                                && boxed.contains(bp.u.coords())
                                && !boxed.contains_tol(bp.outside.coords(), Tolerance::EXACT)
                        }
                        Err(_) => false,
                    };
                    if !ok {
                        report.status = PredicateStatus::Falsified;
                        report.witness = vec![named("x", x), named("y", &y), named("z", z)];
                        report.revalidated = true;
                        return report;
                    }
                }
            }
        }
    }
    report.status = if comparisons == 0 {
        report.notes.push("no comparable pairs across a box boundary".into());
        PredicateStatus::Inconclusive
    } else {
        PredicateStatus::PassedAtResolution
    };
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassStatus {
    UpperSingular,
    UpperCompactBounded,
    Neither,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularBranch {
    pub holds: bool,
    /// Sub-ball radius found for each neighbourhood, while the branch holds.
    pub sub_radii: Vec<f64>,
    /// `(u, y)` with `u` in the sub-ball, `y` outside it and `u ⪯ y`.
    pub dominating: Option<(Point, Point)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactBranch {
    pub holds: bool,
    pub a: Option<Point>,
    pub b: Option<Point>,
    pub t0: Option<f64>,
    pub e1_samples: usize,
    pub compactness: Option<CompactnessVerdict>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub scene: String,
    pub x: Point,
    pub status: ClassStatus,
    pub singular: SingularBranch,
    pub compact: CompactBranch,
}

/// `E1 = (b↑ ∩ a↓) \ int(a↓)` sampled on the local window `[b, a]` or on a
/// box around `x` for non-coordinatewise cones.
pub fn e1_set(scene: &Arc<Scene>, a: &Point, b: &Point) -> (ImplicitClosedSet, Window) {
    let w = local_window(scene, a, b);
    let ideal_a = ImplicitClosedSet::ideal(scene, a);
    let e1 = ImplicitClosedSet::interval(scene, b, a)
        .minus(&ideal_a.interior(w.pitch()))
        .with_tag(format!("E1({b}, {a})"));
    (e1, w)
}

/// Cap on local window resolution in three or more dimensions.
pub const LOCAL_RESOLUTION_3D: usize = 17;

/// Window covering the order interval `[b, a]`.
pub fn local_window(scene: &Scene, a: &Point, b: &Point) -> Window {
    let res = if scene.dim >= 3 {
        scene.default_window.resolution.min(LOCAL_RESOLUTION_3D)
    } else {
        scene.default_window.resolution
    };
    if scene.order == crate::order::ConeOrder::Coordinatewise {
        Window::new(b.0.clone(), a.0.clone(), res)
            .unwrap_or_else(|_| Window::around(&a.lerp(b, 0.5), a.dist(b).max(1e-9), res))
    } else {
        Window::around(&a.lerp(b, 0.5), 2.0 * a.dist(b), res)
    }
}

fn singular_branch(scene: &Arc<Scene>, x: &Point, radii: &[f64], window: &Window) -> SingularBranch {
    let mut branch = SingularBranch {
        holds: true,
        sub_radii: Vec::new(),
        dominating: None,
    };
    let d = sup_direction(scene);
    let height = |p: &Point| d.as_ref().map_or(0.0, |d| p.0.iter().zip(d).map(|(a, b)| a * b).sum());
    // Highest grid points first, so dominating points turn up early.
    let mut grid: Vec<Point> = sample(&ImplicitClosedSet::ambient(scene), window).points().to_vec();
    grid.sort_by(|a, b| height(b).total_cmp(&height(a)));
    // Upward probes: the cone direction and every axis inside the cone.
    let mut dirs: Vec<Vec<f64>> = d.iter().cloned().collect();
    for i in 0..x.dim() {
        let mut e = vec![0.0; x.dim()];
        e[i] = 1.0;
        if scene.order.in_cone(&e) {
            dirs.push(e);
        }
    }
    for &r in radii {
        let mut found = None;
        let mut last_pair = None;
        for k in 0..4 {
            let r1 = r / f64::from(1u32 << k);
            let o1 = ImplicitClosedSet::ball(scene, x, r1);
            let mut us: Vec<Point> = Vec::new();
            if let Some(d) = &d {
                let u = x.offset(d, 0.5 * r1 / (x.dim() as f64).sqrt());
                if o1.contains(u.coords()) {
                    us.push(u);
                }
            }
            let mut ball = sample(&o1, &Window::around(x, r1, 17)).points().to_vec();
            ball.sort_by(|a, b| height(a).total_cmp(&height(b)));
            us.extend(ball);
            let mut ys: Vec<Point> = Vec::new();
            for dir in &dirs {
                for j in [0, -1, -2, -3, -4, -5, -6, -7, -8, 1, 2] {
                    ys.push(x.offset(dir, 2f64.powi(j)));
                }
            }
            ys.extend(grid.iter().cloned());
            let pair = ys
                .iter()
                .filter(|y| scene.contains(y.coords()) && !o1.contains(y.coords()))
                .find_map(|y| {
                    us.iter()
                        .find(|u| scene.order.leq_raw(u.coords(), y.coords()))
                        .map(|u| (u.clone(), y.clone()))
                });
            match pair {
                None => {
                    found = Some(r1);
                    break;
                }
                Some(p) => {
                    if last_pair.is_none() {
                        last_pair = Some(p);
                    }
                }
            }
        }
        match found {
            Some(r1) => branch.sub_radii.push(r1),
            None => {
                branch.holds = false;
                branch.dominating = last_pair;
                break;
            }
        }
    }
    branch
}

fn compact_branch(scene: &Arc<Scene>, x: &Point, radii: &[f64], window: &Window) -> CompactBranch {
    let mut branch = CompactBranch {
        holds: false,
        a: None,
        b: None,
        t0: None,
        e1_samples: 0,
        compactness: None,
        note: None,
    };
    for &r in radii {
        let bx = match lemma32_box(scene, x, x, r, window.pitch()) {
            Ok(b) => b,
            Err(f) => {
                branch.note = Some(format!("no order box in ball of radius {r}: {f}"));
                return branch;
            }
        };
        let (e1, w) = e1_set(scene, &bx.a, &bx.b);
        let cloud = sample(&e1, &w);
        branch.a = Some(bx.a.clone());
        branch.b = Some(bx.b.clone());
        branch.t0 = Some(bx.t0);
        branch.e1_samples = cloud.len();
        if cloud.is_empty() {
            branch.note = Some("E1 is empty at resolution".into());
            return branch;
        }
        let cert = compactness_probe(&e1, &[w.clone(), w.scaled(2.0)]);
        let ok = cert.is_compact();
        branch.compactness = Some(cert);
        if !ok {
            branch.note = Some("E1 is not compact at resolution".into());
            return branch;
        }
    }
    branch.holds = true;
    branch
}

/// Classifies `x` as upper singular, upper compact bounded or neither,
/// for the balls of the given radii. Both branches are always evaluated.
pub fn classify_point(
    scene: &Arc<Scene>,
    x: &Point,
    radii: &[f64],
    window: &Window,
) -> Result<Classification, PropsError> {
    if !scene.contains(x.coords()) {
        return Err(PropsError::OutsideSpace(x.clone()));
    }
    let singular = singular_branch(scene, x, radii, window);
    let compact = compact_branch(scene, x, radii, window);
    let status = if singular.holds {
        ClassStatus::UpperSingular
    } else if compact.holds {
        ClassStatus::UpperCompactBounded
    } else {
        ClassStatus::Neither
    };
    Ok(Classification {
        scene: scene.name.clone(),
        x: x.clone(),
        status,
        singular,
        compact,
    })
}

/// Default neighbourhood radii: a tenth and a twentieth of the extent.
pub fn default_radii(window: &Window) -> Vec<f64> {
    vec![0.1 * window.extent(), 0.05 * window.extent()]
}
