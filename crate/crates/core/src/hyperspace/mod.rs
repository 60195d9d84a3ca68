//! Hit-and-miss tests and convergence probes for the map `x ↦ x↓`.
//!
//! A probe follows a path `x(α_m) → x0` with `α_m = α0·2^-m` and records,
//! per test set and per index, whether `x(α_m)↓` lies in the corresponding
//! basic neighbourhood of `x0↓`: `A ∩ O ≠ ∅` for hit sets and `A ∩ D = ∅`
//! for miss sets. A condition holds eventually when it holds on the last
//! five indices and fails when it fails on all of them.

mod inverse;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use inverse::{
    inverse_probe, CandidateOutcome, InverseCandidate, InverseCandidates, InverseReport,
    InverseStatus,
};

use crate::geom::{Point, Tolerance, DEFAULT_SEED, TAU_SEP};
use crate::scene::Scene;
use crate::setrep::{
    compactness_probe, hausdorff_windowed, sample, CompactnessVerdict, DivergenceReport,
    DivergenceVerdict, HausdorffConfig, ImplicitClosedSet, KdTree, PointCloud,
};
use crate::window::Window;

/// Number of trailing indices that decide a verdict.
pub const TAIL: usize = 5;

#[derive(Debug, Error, PartialEq)]
pub enum ProbeError {
    #[error("path point {index} = {point} lies outside the space")]
    PathLeavesSpace { index: usize, point: Point },
    #[error("path does not approach its limit")]
    PathNotConvergent,
    #[error("set `{0}` has no samples in the window")]
    EmptySamples(String),
    #[error("dimension mismatch: scene has {scene}, point has {point}")]
    Dimension { scene: usize, point: usize },
}

/// Maps a point to the closed set probed for it, normally its ideal.
pub type IdealMap = Arc<dyn Fn(&Point) -> ImplicitClosedSet + Send + Sync>;

pub fn ideal_map(scene: &Arc<Scene>) -> IdealMap {
    let scene = Arc::clone(scene);
    Arc::new(move |x: &Point| ImplicitClosedSet::ideal(&scene, x))
}

/// Linear path `x(α) = x0 + α (x1 - x0)` sampled at `α_m = α0·2^-m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSpec {
    pub x0: Point,
    pub x1: Point,
    pub alpha0: f64,
    pub steps: usize,
}

impl PathSpec {
    pub fn linear(x0: Point, x1: Point) -> Self {
        PathSpec {
            x0,
            x1,
            alpha0: 0.5,
            steps: 20,
        }
    }

    pub fn constant(x0: Point) -> Self {
        Self::linear(x0.clone(), x0)
    }

    pub fn point(&self, alpha: f64) -> Point {
        self.x0.lerp(&self.x1, alpha)
    }

    pub fn alphas(&self) -> Vec<f64> {
        (0..=self.steps)
            .map(|m| self.alpha0 * 0.5f64.powi(m as i32))
            .collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.alphas().into_iter().map(|a| self.point(a)).collect()
    }

    /// First index of the deciding tail.
    pub fn tail_start(&self) -> usize {
        self.steps.saturating_sub(TAIL)
    }

    /// Every path point lies in the space and the distance to the limit
    /// halves from step to step.
    pub fn validate(&self, scene: &Scene) -> Result<(), ProbeError> {
        if self.x0.dim() != scene.dim || self.x1.dim() != scene.dim {
            return Err(ProbeError::Dimension {
                scene: scene.dim,
                point: self.x0.dim(),
            });
        }
        let pts = self.points();
        for (index, p) in pts.iter().enumerate() {
            if !p.is_finite() || !scene.contains(p.coords()) {
                return Err(ProbeError::PathLeavesSpace {
                    index,
                    point: p.clone(),
                });
            }
        }
        let d: Vec<f64> = pts.iter().map(|p| p.dist(&self.x0)).collect();
        if d.windows(2).any(|w| w[1] > 0.5 * w[0] * (1.0 + 1e-9) + 1e-300) {
            return Err(ProbeError::PathNotConvergent);
        }
        Ok(())
    }

    /// A path into `x0` along `−1`, `+1` or a signed axis, whichever stays
    /// in the space. The start sits a tenth of the window extent away.
    pub fn default_for(scene: &Scene, x0: &Point, window: &Window) -> Option<PathSpec> {
        let n = scene.dim;
        let len = 0.1 * window.extent();
        let mut dirs: Vec<Vec<f64>> = vec![vec![-1.0; n], vec![1.0; n]];
        for i in 0..n {
            for s in [-1.0, 1.0] {
                let mut d = vec![0.0; n];
                d[i] = s;
                dirs.push(d);
            }
        }
        dirs.into_iter().find_map(|d| {
            let scale = len / (d.iter().map(|c| c * c).sum::<f64>()).sqrt();
            let path = PathSpec::linear(x0.clone(), x0.offset(&d, 2.0 * scale));
            path.validate(scene).is_ok().then_some(path)
        })
    }
}

/// Open set `O` used as `{A : A ∩ O ≠ ∅}`.
#[derive(Clone, Debug)]
pub struct HitSet {
    pub set: ImplicitClosedSet,
}

/// Closed set `D` used as `{A : A ∩ D = ∅}`.
#[derive(Clone, Debug)]
pub struct MissSet {
    pub set: ImplicitClosedSet,
    pub certificate: Option<CompactnessVerdict>,
}

impl HitSet {
    pub fn new(set: ImplicitClosedSet) -> Self {
        HitSet { set }
    }
}

impl MissSet {
    pub fn new(set: ImplicitClosedSet) -> Self {
        MissSet {
            set,
            certificate: None,
        }
    }

    pub fn certified(set: ImplicitClosedSet, certificate: CompactnessVerdict) -> Self {
        MissSet {
            set,
            certificate: Some(certificate),
        }
    }
}

/// First sample of `o` inside `a`.
pub fn hit_point(a: &ImplicitClosedSet, o: &PointCloud) -> Option<Point> {
    o.points().iter().find(|p| a.contains(p.coords())).cloned()
}

/// First sample of `d` inside `a` up to the separation tolerance.
pub fn miss_violation(a: &ImplicitClosedSet, d: &PointCloud) -> Option<Point> {
    let tol = Tolerance::uniform(TAU_SEP);
    d.points()
        .iter()
        .find(|p| a.contains_tol(p.coords(), tol))
        .cloned()
}

/// `A ∩ O ≠ ∅` at the resolution of `window`.
pub fn hits(a: &ImplicitClosedSet, o: &HitSet, window: &Window) -> Result<bool, ProbeError> {
    let cloud = sample(&o.set, window);
    if cloud.is_empty() {
        return Err(ProbeError::EmptySamples(o.set.tag.clone()));
    }
    Ok(hit_point(a, &cloud).is_some())
}

/// `A ∩ D = ∅`: no sample of `D` satisfies `A` within the separation
/// tolerance.
pub fn misses(a: &ImplicitClosedSet, d: &MissSet, window: &Window) -> Result<bool, ProbeError> {
    let cloud = sample(&d.set, window);
    if cloud.is_empty() {
        return Err(ProbeError::EmptySamples(d.set.tag.clone()));
    }
    Ok(miss_violation(a, &cloud).is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Hit,
    Miss,
    Hausdorff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    Fell,
    Vietoris,
    Hausdorff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProbeStatus {
    ConvergesAtResolution,
    Diverges,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestTrace {
    pub tag: String,
    pub kind: TestKind,
    pub per_index: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DroppedTest {
    pub tag: String,
    pub kind: TestKind,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeWitness {
    pub test: String,
    pub kind: TestKind,
    pub index: usize,
    pub alpha: f64,
    pub path_point: Point,
    /// Sample of the test set that shows the violation.
    pub point: Option<Point>,
    pub revalidated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeVerdict {
    pub probe: ProbeKind,
    pub scene: String,
    pub path: PathSpec,
    pub pitch: f64,
    pub tests: Vec<TestTrace>,
    pub dropped: Vec<DroppedTest>,
    pub status: ProbeStatus,
    pub witness: Option<ProbeWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hausdorff: Vec<DivergenceReport>,
    pub notes: Vec<String>,
}

impl ProbeVerdict {
    pub fn trace(&self, tag: &str) -> Option<&TestTrace> {
        self.tests.iter().find(|t| t.tag == tag)
    }
}

/// Verdict from per-index traces.
fn tail_status(traces: &[TestTrace], tail_start: usize) -> (ProbeStatus, Option<usize>) {
    if traces.is_empty() {
        return (ProbeStatus::Inconclusive, None);
    }
    for (i, t) in traces.iter().enumerate() {
        if t.per_index[tail_start..].iter().all(|b| !b) {
            return (ProbeStatus::Diverges, Some(i));
        }
    }
    if traces
        .iter()
        .all(|t| t.per_index[tail_start..].iter().all(|b| *b))
    {
        (ProbeStatus::ConvergesAtResolution, None)
    } else {
        (ProbeStatus::Inconclusive, None)
    }
}

/// Window with every node of `w` plus the midpoints.
fn doubled(w: &Window) -> Window {
    w.with_resolution(2 * w.resolution - 1)
}

enum Test {
    Hit(HitSet),
    Miss(MissSet),
}

impl Test {
    fn set(&self) -> &ImplicitClosedSet {
        match self {
            Test::Hit(h) => &h.set,
            Test::Miss(m) => &m.set,
        }
    }

    fn kind(&self) -> TestKind {
        match self {
            Test::Hit(_) => TestKind::Hit,
            Test::Miss(_) => TestKind::Miss,
        }
    }

    fn holds(&self, a: &ImplicitClosedSet, cloud: &PointCloud) -> bool {
        match self {
            Test::Hit(_) => hit_point(a, cloud).is_some(),
            Test::Miss(_) => miss_violation(a, cloud).is_none(),
        }
    }
}

fn compactness_windows(window: &Window) -> [Window; 2] {
    [window.clone(), window.scaled(2.0)]
}

#[allow(clippy::too_many_arguments)]
fn hit_miss_probe(
    probe: ProbeKind,
    scene: &Arc<Scene>,
    path: &PathSpec,
    map: &IdealMap,
    hit_sets: Vec<HitSet>,
    miss_sets: Vec<MissSet>,
    window: &Window,
) -> Result<ProbeVerdict, ProbeError> {
    path.validate(scene)?;
    let mut verdict = ProbeVerdict {
        probe,
        scene: scene.name.clone(),
        path: path.clone(),
        pitch: window.pitch(),
        tests: Vec::new(),
        dropped: Vec::new(),
        status: ProbeStatus::Inconclusive,
        witness: None,
        hausdorff: Vec::new(),
        notes: Vec::new(),
    };
    let base = map(&path.x0);
    let mut retained: Vec<(Test, PointCloud)> = Vec::new();
    let tests = hit_sets
        .into_iter()
        .map(Test::Hit)
        .chain(miss_sets.into_iter().map(Test::Miss));
    for mut test in tests {
        let kind = test.kind();
        let tag = test.set().tag.clone();
        let drop = |reason: String| DroppedTest {
            tag: tag.clone(),
            kind,
            reason,
        };
        if let (ProbeKind::Fell, Test::Miss(m)) = (probe, &mut test) {
            let cert = m
                .certificate
                .get_or_insert_with(|| compactness_probe(&m.set, &compactness_windows(window)));
            if !cert.is_compact() {
                verdict
                    .dropped
                    .push(drop("miss set is not compact at resolution".into()));
                continue;
            }
        }
        let cloud = sample(test.set(), window);
        if cloud.is_empty() {
            verdict.dropped.push(drop("no samples in the window".into()));
            continue;
        }
        if !test.holds(&base, &cloud) {
            let reason = match kind {
                TestKind::Hit => "limit ideal does not meet the hit set",
                _ => "limit ideal meets the miss set",
            };
            verdict.dropped.push(drop(reason.into()));
            continue;
        }
        retained.push((test, cloud));
    }
    if retained.is_empty() {
        verdict.notes.push("empty retained test family".into());
        return Ok(verdict);
    }

    let points = path.points();
    let ideals: Vec<ImplicitClosedSet> = points.iter().map(|p| map(p)).collect();
    verdict.tests = retained
        .par_iter()
        .map(|(test, cloud)| TestTrace {
            tag: test.set().tag.clone(),
            kind: test.kind(),
            per_index: ideals.iter().map(|a| test.holds(a, cloud)).collect(),
        })
        .collect();

    let (status, failing) = tail_status(&verdict.tests, path.tail_start());
    verdict.status = status;
    if let Some(i) = failing {
        let (test, cloud) = &retained[i];
        let m = path.steps;
        let a = &ideals[m];
        let (point, revalidated) = match test {
            Test::Hit(h) => {
                let fine = sample(&h.set, &doubled(window));
                (cloud.points().first().cloned(), hit_point(a, &fine).is_none())
            }
            Test::Miss(d) => {
                let p = miss_violation(a, cloud);
                let ok = p.as_ref().is_some_and(|p| {
                    d.set.contains(p.coords())
                        && a.contains_tol(p.coords(), Tolerance::uniform(TAU_SEP))
                });
                (p, ok)
            }
        };
        if !revalidated {
            verdict.status = ProbeStatus::Inconclusive;
            verdict
                .notes
                .push("witness did not survive re-validation at double resolution".into());
        }
        verdict.witness = Some(ProbeWitness {
            test: test.set().tag.clone(),
            kind: test.kind(),
            index: m,
            alpha: path.alphas()[m],
            path_point: points[m].clone(),
            point,
            revalidated,
        });
    }
    Ok(verdict)
}

/// Fell probe. Miss sets need a compactness certificate; one is computed
/// when absent and non-compact sets are dropped.
pub fn fell_probe(
    scene: &Arc<Scene>,
    path: &PathSpec,
    map: &IdealMap,
    hit_sets: Vec<HitSet>,
    miss_sets: Vec<MissSet>,
    window: &Window,
) -> Result<ProbeVerdict, ProbeError> {
    hit_miss_probe(ProbeKind::Fell, scene, path, map, hit_sets, miss_sets, window)
}

/// Vietoris probe. Any closed miss set is allowed.
pub fn vietoris_probe(
    scene: &Arc<Scene>,
    path: &PathSpec,
    map: &IdealMap,
    hit_sets: Vec<HitSet>,
    miss_sets: Vec<MissSet>,
    window: &Window,
) -> Result<ProbeVerdict, ProbeError> {
    hit_miss_probe(ProbeKind::Vietoris, scene, path, map, hit_sets, miss_sets, window)
}

/// Hausdorff probe over growing windows.
pub fn hausdorff_probe(
    scene: &Arc<Scene>,
    path: &PathSpec,
    map: &IdealMap,
    windows: &[Window],
    cfg: &HausdorffConfig,
) -> Result<ProbeVerdict, ProbeError> {
    path.validate(scene)?;
    let base = map(&path.x0);
    let points = path.points();
    let reports: Vec<DivergenceReport> = points
        .iter()
        .map(|p| hausdorff_windowed(&map(p), &base, windows, cfg))
        .collect();
    let min_pitch = windows.iter().map(Window::pitch).fold(f64::INFINITY, f64::min);
    let per_index: Vec<bool> = reports
        .iter()
        .map(|r| r.verdict == DivergenceVerdict::Bounded)
        .collect();
    let tail = path.tail_start();
    let mut notes: Vec<String> = reports.iter().filter_map(|r| r.note.clone()).collect();
    notes.dedup();
    let last_value = |r: &DivergenceReport| r.values.last().copied();
    let status = if reports[tail..]
        .iter()
        .all(|r| r.verdict == DivergenceVerdict::Divergent)
    {
        ProbeStatus::Diverges
    } else if per_index[tail..].iter().all(|b| *b)
        && last_value(&reports[path.steps]).is_some_and(|v| {
            v < min_pitch && reports[tail..].iter().all(|r| last_value(r).is_some_and(|u| u >= v))
        })
    {
        ProbeStatus::ConvergesAtResolution
    } else {
        ProbeStatus::Inconclusive
    };
    let witness = (status == ProbeStatus::Diverges).then(|| ProbeWitness {
        test: "hausdorff".into(),
        kind: TestKind::Hausdorff,
        index: path.steps,
        alpha: path.alphas()[path.steps],
        path_point: points[path.steps].clone(),
        point: None,
        revalidated: true,
    });
    Ok(ProbeVerdict {
        probe: ProbeKind::Hausdorff,
        scene: scene.name.clone(),
        path: path.clone(),
        pitch: min_pitch,
        tests: vec![TestTrace {
            tag: "hausdorff".into(),
            kind: TestKind::Hausdorff,
            per_index,
        }],
        dropped: Vec::new(),
        status,
        witness,
        hausdorff: reports,
        notes,
    })
}

/// Default test family around `x0↓`: open balls of radii 0.05, 0.1 and 0.2
/// times the window extent centred at seeded samples of `x0↓`, and up to
/// three closed boxes at least two pitches away from those samples that are
/// compact at resolution.
pub fn default_family(
    scene: &Arc<Scene>,
    map: &IdealMap,
    x0: &Point,
    window: &Window,
    seed: u64,
) -> (Vec<HitSet>, Vec<MissSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = sample(&map(x0), window);
    let extent = window.extent();
    let pitch = window.pitch();
    let hits = [0.05, 0.1, 0.2]
        .iter()
        .map(|f| {
            let c = if base.is_empty() {
                x0.clone()
            } else {
                base.points()[rng.gen_range(0..base.len())].clone()
            };
            HitSet::new(ImplicitClosedSet::ball(scene, &c, f * extent))
        })
        .collect();

    let tree: Option<KdTree> = (!base.is_empty()).then(|| base.tree());
    let half = 0.1 * extent;
    let mut misses = Vec::new();
    for _ in 0..64 {
        if misses.len() == 3 {
            break;
        }
        let c: Vec<f64> = (0..window.dim())
            .map(|i| rng.gen_range(window.lo[i]..=window.hi[i]))
            .collect();
        let set = ImplicitClosedSet::axis_box(
            scene,
            c.iter().map(|v| v - half).collect(),
            c.iter().map(|v| v + half).collect(),
        );
        let cloud = sample(&set, window);
        if cloud.is_empty() {
            continue;
        }
        let far = match &tree {
            Some(t) => cloud.points().iter().all(|p| {
                t.nearest(p.coords())
                    .is_some_and(|(d2, _)| d2.sqrt() >= 2.0 * pitch)
            }),
            None => true,
        };
        if !far {
            continue;
        }
        let cert = compactness_probe(&set, &compactness_windows(window));
        if cert.is_compact() {
            misses.push(MissSet::certified(set, cert));
        }
    }
    (hits, misses)
}

/// Seed used by default families.
pub const FAMILY_SEED: u64 = DEFAULT_SEED;

/// An open ball meeting exactly one of `x↓` and `y↓`, if one is found.
pub fn separating_hit_set(
    scene: &Arc<Scene>,
    map: &IdealMap,
    x: &Point,
    y: &Point,
    window: &Window,
) -> Option<HitSet> {
    let (ax, ay) = (map(x), map(y));
    for (p, own, other) in [(x, &ax, &ay), (y, &ay, &ax)] {
        if other.contains(p.coords()) {
            continue;
        }
        let mut r = 0.25 * window.extent();
        for _ in 0..40 {
            let o = HitSet::new(ImplicitClosedSet::ball(scene, p, r));
            let cloud = sample(&o.set, window);
            if hit_point(own, &cloud).is_some() && hit_point(other, &cloud).is_none() {
                return Some(o);
            }
            r *= 0.5;
        }
    }
    None
}
