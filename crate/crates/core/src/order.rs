//! Cone orders on R^n, principal ideals and filters, meets and joins.
//!
//! A cone order is `x <= y` iff `y - x` lies in a pointed closed convex cone
//! `K` with nonempty interior. Two families are supported: the coordinatewise
//! order (`K` is the nonnegative orthant) and polyhedral cones given by inward
//! normals, `K = {x : <n_i, x> >= 0 for all i}`.
//!
//! Meets and joins are computed two ways: by brute force over a sampling
//! grid ([`meet_brute`], [`join_brute`]), and by closed forms for the built-in
//! examples ([`meet_ex42`], [`join_ex35`]). The brute-force routines serve as
//! oracles for the closed forms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, TAU_MEM};
use crate::scene::Scene;
use crate::window::Window;

#[derive(Debug, Error, PartialEq)]
pub enum OrderError {
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("empty point set")]
    EmptySet,
    #[error("point {0} is outside the space")]
    OutsideSpace(Point),
    #[error("cone has no interior direction among the candidates tried")]
    NoInteriorDirection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeOrder {
    Coordinatewise,
    Halfspaces { normals: Vec<Vec<f64>> },
}

impl ConeOrder {
    /// Order test without a dimension check.
    #[inline]
    pub fn leq_raw(&self, x: &[f64], y: &[f64]) -> bool {
        self.leq_slack(x, y, TAU_MEM)
    }

    /// Order test with `slack` on each halfspace inequality. The
    /// coordinatewise branch is always exact.
    #[inline]
    pub fn leq_slack(&self, x: &[f64], y: &[f64], slack: f64) -> bool {
        match self {
            ConeOrder::Coordinatewise => x.iter().zip(y).all(|(a, b)| a <= b),
            ConeOrder::Halfspaces { normals } => normals.iter().all(|n| {
                let s: f64 = n.iter().zip(x.iter().zip(y)).map(|(ni, (a, b))| ni * (b - a)).sum();
                s >= -slack
            }),
        }
    }

    /// `x <= y` up to an additive slack on every defining inequality, for
    /// both order kinds.
    #[inline]
    pub fn leq_within(&self, x: &[f64], y: &[f64], eps: f64) -> bool {
        match self {
            ConeOrder::Coordinatewise => x.iter().zip(y).all(|(a, b)| *a <= *b + eps),
            ConeOrder::Halfspaces { .. } => self.leq_slack(x, y, eps.max(TAU_MEM)),
        }
    }

    /// A vector in the interior of the cone, normalised to unit length.
    pub fn interior_direction(&self, dim: usize) -> Result<Vec<f64>, OrderError> {
        let mut d = match self {
            ConeOrder::Coordinatewise => vec![1.0; dim],
            ConeOrder::Halfspaces { normals } => {
                let mut avg = vec![0.0; dim];
                for n in normals {
                    let norm = n.iter().map(|c| c * c).sum::<f64>().sqrt();
                    for (a, c) in avg.iter_mut().zip(n) {
                        *a += c / norm;
                    }
                }
                avg
            }
        };
        let norm = d.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(OrderError::NoInteriorDirection);
        }
        d.iter_mut().for_each(|c| *c /= norm);
        if let ConeOrder::Halfspaces { normals } = self {
            let inside = normals
                .iter()
                .all(|n| n.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() > 0.0);
            if !inside {
                return Err(OrderError::NoInteriorDirection);
            }
        }
        Ok(d)
    }

    /// True when `a` lies in the cone, i.e. `0 <= a`.
    pub fn in_cone(&self, a: &[f64]) -> bool {
        let zero = vec![0.0; a.len()];
        self.leq_raw(&zero, a)
    }
}

pub fn leq(x: &Point, y: &Point, order: &ConeOrder) -> Result<bool, OrderError> {
    if x.dim() != y.dim() {
        return Err(OrderError::Dimension(x.dim(), y.dim()));
    }
    Ok(order.leq_raw(x.coords(), y.coords()))
}

fn check_dims(scene: &Scene, pts: &[&Point]) -> Result<(), OrderError> {
    for p in pts {
        if p.dim() != scene.dim {
            return Err(OrderError::Dimension(p.dim(), scene.dim));
        }
    }
    Ok(())
}

/// `u` in the principal ideal of `x`: `u` in the space and `u <= x`.
pub fn ideal_membership(u: &Point, x: &Point, scene: &Scene) -> Result<bool, OrderError> {
    check_dims(scene, &[u, x])?;
    Ok(scene.contains(u.coords()) && scene.order.leq_raw(u.coords(), x.coords()))
}

/// `u` in the principal filter of `x`.
pub fn filter_membership(u: &Point, x: &Point, scene: &Scene) -> Result<bool, OrderError> {
    check_dims(scene, &[u, x])?;
    Ok(scene.contains(u.coords()) && scene.order.leq_raw(x.coords(), u.coords()))
}

/// `u` in the down-closure of the finite set `set`.
pub fn down_closure_membership(
    u: &Point,
    set: &[Point],
    scene: &Scene,
) -> Result<bool, OrderError> {
    if set.is_empty() {
        return Err(OrderError::EmptySet);
    }
    check_dims(scene, &[u])?;
    check_dims(scene, &set.iter().collect::<Vec<_>>())?;
    Ok(scene.contains(u.coords())
        && set.iter().any(|x| scene.order.leq_raw(u.coords(), x.coords())))
}

/// `u` in the up-closure of the finite set `set`.
pub fn up_closure_membership(u: &Point, set: &[Point], scene: &Scene) -> Result<bool, OrderError> {
    if set.is_empty() {
        return Err(OrderError::EmptySet);
    }
    check_dims(scene, &[u])?;
    check_dims(scene, &set.iter().collect::<Vec<_>>())?;
    Ok(scene.contains(u.coords())
        && set.iter().any(|x| scene.order.leq_raw(x.coords(), u.coords())))
}

/// Grid used by the brute-force lattice operations.
///
/// Every axis is the window's regular grid plus the coordinates of the
/// arguments that fall inside the window range, so closed-form answers built
/// from argument coordinates are representable exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub window: Window,
}

impl GridSpec {
    pub fn new(window: Window) -> Self {
        GridSpec { window }
    }

    fn axes(&self, anchors: &[&Point]) -> Vec<Vec<f64>> {
        let extra: Vec<f64> = anchors.iter().flat_map(|p| p.coords().iter().copied()).collect();
        (0..self.window.dim())
            .map(|axis| {
                let (lo, hi) = (self.window.lo[axis], self.window.hi[axis]);
                let mut vals = self.window.axis_values(axis);
                vals.extend(extra.iter().copied().filter(|c| *c >= lo && *c <= hi));
                vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                vals.dedup();
                vals
            })
            .collect()
    }
}

/// Outcome of a brute-force meet or join.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LatticeOutcome {
    /// The extremal bound, unique up to one grid pitch.
    Found { point: Point },
    /// The bound set is empty in the space.
    NoBound,
    /// Maximal (or minimal) candidates separated by more than a pitch.
    NotSemilatticeAtResolution { candidates: Vec<Point> },
    /// No bound on the grid, but the window may have cut them off.
    Inconclusive { note: String },
}

impl LatticeOutcome {
    pub fn point(&self) -> Option<&Point> {
        match self {
            LatticeOutcome::Found { point } => Some(point),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Extremum {
    Greatest,
    Least,
}

/// Greatest lower bound of `x` and `y` among grid samples of the space.
pub fn meet_brute(
    x: &Point,
    y: &Point,
    scene: &Scene,
    grid: &GridSpec,
) -> Result<LatticeOutcome, OrderError> {
    lattice_brute(x, y, scene, grid, Extremum::Greatest)
}

/// Least upper bound of `x` and `y` among grid samples of the space.
pub fn join_brute(
    x: &Point,
    y: &Point,
    scene: &Scene,
    grid: &GridSpec,
) -> Result<LatticeOutcome, OrderError> {
    lattice_brute(x, y, scene, grid, Extremum::Least)
}

fn lattice_brute(
    x: &Point,
    y: &Point,
    scene: &Scene,
    grid: &GridSpec,
    which: Extremum,
) -> Result<LatticeOutcome, OrderError> {
    check_dims(scene, &[x, y])?;
    if grid.window.dim() != scene.dim {
        return Err(OrderError::Dimension(grid.window.dim(), scene.dim));
    }
    let axes = grid.axes(&[x, y]);
    let order = &scene.order;
    let is_bound = |g: &[f64]| match which {
        Extremum::Greatest => order.leq_raw(g, x.coords()) && order.leq_raw(g, y.coords()),
        Extremum::Least => order.leq_raw(x.coords(), g) && order.leq_raw(y.coords(), g),
    };
    let candidates = match order {
        ConeOrder::Coordinatewise => column_extremes(&axes, |g| is_bound(g) && scene.contains(g), which),
        ConeOrder::Halfspaces { .. } => all_bounds(&axes, |g| is_bound(g) && scene.contains(g)),
    };
    if candidates.is_empty() {
        // Does the window cut off bounds that exist? Probe the space just
        // outside the window along the interior cone direction.
        return Ok(no_bound_outcome(x, y, scene, grid, which));
    }
    let dominated = |a: &[f64], b: &[f64]| match which {
        // a is strictly below b
        Extremum::Greatest => a != b && order.leq_raw(a, b),
        Extremum::Least => a != b && order.leq_raw(b, a),
    };
    let extremal: Vec<&Vec<f64>> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|o| dominated(c, o)))
        .collect();
    let pitch = grid.window.pitch();
    let spread_ok = extremal.iter().all(|a| {
        extremal
            .iter()
            .all(|b| a.iter().zip(b.iter()).all(|(p, q)| (p - q).abs() <= pitch * (1.0 + 1e-9)))
    });
    if !spread_ok {
        let mut pts: Vec<Point> = extremal.iter().map(|c| Point((*c).clone())).collect();
        pts.sort_by(|a, b| lex_cmp(&b.0, &a.0));
        return Ok(LatticeOutcome::NotSemilatticeAtResolution { candidates: pts });
    }
    let best = extremal
        .iter()
        .copied()
        .max_by(|a, b| match which {
            Extremum::Greatest => lex_cmp(a, b),
            Extremum::Least => lex_cmp(b, a),
        })
        .expect("nonempty");
    Ok(LatticeOutcome::Found {
        point: Point(best.clone()),
    })
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap() {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn no_bound_outcome(
    x: &Point,
    y: &Point,
    scene: &Scene,
    grid: &GridSpec,
    which: Extremum,
) -> LatticeOutcome {
    // Walk from the coordinatewise extreme of the arguments far beyond the
    // window, along the cone direction and (for the orthant) each axis. Any
    // space point found that is a bound means the window was too small.
    let Ok(dir) = scene.order.interior_direction(scene.dim) else {
        return LatticeOutcome::NoBound;
    };
    let mut dirs = vec![dir];
    if scene.order == ConeOrder::Coordinatewise {
        for i in 0..scene.dim {
            let mut e = vec![0.0; scene.dim];
            e[i] = 1.0;
            dirs.push(e);
        }
    }
    let sign = if which == Extremum::Greatest { -1.0 } else { 1.0 };
    let start: Vec<f64> = match which {
        Extremum::Greatest => x.0.iter().zip(&y.0).map(|(a, b)| a.min(*b)).collect(),
        Extremum::Least => x.0.iter().zip(&y.0).map(|(a, b)| a.max(*b)).collect(),
    };
    let reach = 1e3 * grid.window.extent().max(1.0);
    for d in &dirs {
        let mut t = 0.0;
        while t <= reach {
            let p: Vec<f64> = start.iter().zip(d).map(|(s, d)| s + sign * t * d).collect();
            let bound = match which {
                Extremum::Greatest => {
                    scene.order.leq_raw(&p, x.coords()) && scene.order.leq_raw(&p, y.coords())
                }
                Extremum::Least => {
                    scene.order.leq_raw(x.coords(), &p) && scene.order.leq_raw(y.coords(), &p)
                }
            };
            if bound && scene.contains(&p) {
                return LatticeOutcome::Inconclusive {
                    note: format!(
                        "no bound inside the window but {:?} is one; enlarge the window",
                        Point(p)
                    ),
                };
            }
            t = if t == 0.0 { grid.window.pitch() } else { t * 1.5 };
        }
    }
    LatticeOutcome::NoBound
}

/// Iterates the tensor grid given by `axes`, calling `f` on each node.
fn for_each_node(axes: &[Vec<f64>], mut f: impl FnMut(&[usize], &[f64])) {
    let n = axes.len();
    if axes.iter().any(|a| a.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; n];
    let mut p: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&idx, &p);
        let mut axis = n;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < axes[axis].len() {
                p[axis] = axes[axis][idx[axis]];
                break;
            }
            idx[axis] = 0;
            p[axis] = axes[axis][0];
        }
    }
}

fn all_bounds(axes: &[Vec<f64>], pred: impl Fn(&[f64]) -> bool) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for_each_node(axes, |_, p| {
        if pred(p) {
            out.push(p.to_vec());
        }
    });
    out
}

/// For coordinatewise orders only the top (or bottom) bound of each column
/// along the last axis can be extremal; returns those, further pruned by a
/// suffix (prefix) maximum sweep over the remaining axes.
fn column_extremes(
    axes: &[Vec<f64>],
    pred: impl Fn(&[f64]) -> bool,
    which: Extremum,
) -> Vec<Vec<f64>> {
    let n = axes.len();
    let last = n - 1;
    let col_axes = &axes[..last];
    let col_count: usize = col_axes.iter().map(|a| a.len()).product();
    let strides: Vec<usize> = (0..last)
        .map(|i| col_axes[i + 1..].iter().map(|a| a.len()).product())
        .collect();
    // Best last-axis index per column (or None).
    let mut best: Vec<Option<usize>> = vec![None; col_count];
    let mut p = vec![0.0; n];
    for (col, slot) in best.iter_mut().enumerate() {
        let mut rem = col;
        for i in 0..last {
            let k = rem / strides[i];
            rem %= strides[i];
            p[i] = col_axes[i][k];
        }
        let range: Box<dyn Iterator<Item = usize>> = match which {
            Extremum::Greatest => Box::new((0..axes[last].len()).rev()),
            Extremum::Least => Box::new(0..axes[last].len()),
        };
        for k in range {
            p[last] = axes[last][k];
            if pred(&p) {
                *slot = Some(k);
                break;
            }
        }
    }
    // Sweep: a column's extreme survives only if no column that is weakly
    // beyond it in every other axis has an equal-or-better extreme.
    let score = |k: Option<usize>| -> i64 {
        match (k, which) {
            (None, _) => i64::MIN,
            (Some(k), Extremum::Greatest) => k as i64,
            (Some(k), Extremum::Least) => -(k as i64),
        }
    };
    // beyond[col] = best score over columns weakly beyond col (inclusive).
    let mut beyond: Vec<i64> = best.iter().map(|k| score(*k)).collect();
    let order: Box<dyn Iterator<Item = usize>> = match which {
        Extremum::Greatest => Box::new((0..col_count).rev()),
        Extremum::Least => Box::new(0..col_count),
    };
    let order: Vec<usize> = order.collect();
    for &col in &order {
        let mut rem = col;
        let mut digits = vec![0usize; last];
        for i in 0..last {
            digits[i] = rem / strides[i];
            rem %= strides[i];
        }
        for i in 0..last {
            let next = match which {
                Extremum::Greatest if digits[i] + 1 < col_axes[i].len() => Some(col + strides[i]),
                Extremum::Least if digits[i] > 0 => Some(col - strides[i]),
                _ => None,
            };
            if let Some(nc) = next {
                beyond[col] = beyond[col].max(beyond[nc]);
            }
        }
    }
    let mut out = Vec::new();
    for &col in &order {
        let Some(k) = best[col] else { continue };
        let mut rem = col;
        let mut digits = vec![0usize; last];
        for i in 0..last {
            digits[i] = rem / strides[i];
            rem %= strides[i];
        }
        let mut strictly_beyond = i64::MIN;
        for i in 0..last {
            let next = match which {
                Extremum::Greatest if digits[i] + 1 < col_axes[i].len() => Some(col + strides[i]),
                Extremum::Least if digits[i] > 0 => Some(col - strides[i]),
                _ => None,
            };
            if let Some(nc) = next {
                strictly_beyond = strictly_beyond.max(beyond[nc]);
            }
        }
        if score(Some(k)) > strictly_beyond {
            let mut node: Vec<f64> = digits.iter().enumerate().map(|(i, &d)| col_axes[i][d]).collect();
            node.push(axes[last][k]);
            out.push(node);
        }
    }
    out
}

fn min_coords(x: &Point, y: &Point) -> (f64, f64, f64) {
    (x.0[0].min(y.0[0]), x.0[1].min(y.0[1]), x.0[2].min(y.0[2]))
}

/// Membership in the solid `{u, v, w <= 0, uv + w - 1 <= 0}` with the
/// default slack.
pub fn in_ex42_solid(p: &[f64]) -> bool {
    p.len() == 3
        && p.iter().all(|c| *c <= TAU_MEM)
        && p[0] * p[1] + p[2] - 1.0 <= TAU_MEM
}

/// Closed-form meet in the cubic-surface solid.
///
/// With `m` the componentwise minimum, the meet is `m` when `m` lies in the
/// solid and otherwise `m` with its third coordinate lowered onto the
/// surface `w = 1 - uv`.
pub fn meet_ex42(x: &Point, y: &Point) -> Result<Point, OrderError> {
    for p in [x, y] {
        if p.dim() != 3 {
            return Err(OrderError::Dimension(p.dim(), 3));
        }
        if !in_ex42_solid(p.coords()) {
            return Err(OrderError::OutsideSpace(p.clone()));
        }
    }
    let (u, v, w) = min_coords(x, y);
    if u * v + w - 1.0 <= 0.0 {
        Ok(Point(vec![u, v, w]))
    } else {
        Ok(Point(vec![u, v, 1.0 - u * v]))
    }
}

/// Which of the two triangles of the glued-triangle space a point lies on.
/// `T1 = {(u, v, 0) : -1 <= v <= u <= 0}`,
/// `T2 = {(s, s, w) : -1 <= s <= 0, s <= w <= 0}`.
pub fn ex35_triangles(p: &[f64]) -> (bool, bool) {
    let t = TAU_MEM;
    let t1 = p[2].abs() <= t && p[1] - p[0] <= t && p[0] <= t && -1.0 - p[1] <= t;
    let t2 = (p[0] - p[1]).abs() <= t && -1.0 - p[0] <= t && p[0] <= t && p[0] - p[2] <= t && p[2] <= t;
    (t1, t2)
}

/// Closed-form join in the glued-triangle space: componentwise maximum for
/// two points on a common triangle, `(u1 v u2, v1 v v2, 0)` across triangles.
pub fn join_ex35(x: &Point, y: &Point) -> Result<Point, OrderError> {
    for p in [x, y] {
        if p.dim() != 3 {
            return Err(OrderError::Dimension(p.dim(), 3));
        }
    }
    let (x1, x2) = ex35_triangles(x.coords());
    let (y1, y2) = ex35_triangles(y.coords());
    if !(x1 || x2) {
        return Err(OrderError::OutsideSpace(x.clone()));
    }
    if !(y1 || y2) {
        return Err(OrderError::OutsideSpace(y.clone()));
    }
    let max = |i: usize| x.0[i].max(y.0[i]);
    if (x1 && y1) || (x2 && y2) {
        Ok(Point(vec![max(0), max(1), max(2)]))
    } else {
        Ok(Point(vec![max(0), max(1), 0.0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::builtin_scene;

    fn p(v: &[f64]) -> Point {
        Point(v.to_vec())
    }

    #[test]
    fn coordinatewise_leq_examples() {
        let o = ConeOrder::Coordinatewise;
        assert!(leq(&p(&[0.0, -1.0, 0.0]), &p(&[0.0, 0.0, 0.0]), &o).unwrap());
        assert!(leq(&p(&[0.3, 0.3]), &p(&[0.3, 0.3]), &o).unwrap());
        assert!(!leq(&p(&[0.5, 0.6]), &p(&[0.5, 0.5]), &o).unwrap());
        assert_eq!(
            leq(&p(&[0.0]), &p(&[0.0, 1.0]), &o),
            Err(OrderError::Dimension(1, 2))
        );
    }

    #[test]
    fn halfspace_leq_uses_slack() {
        let o = ConeOrder::Halfspaces {
            normals: vec![vec![1.0, 1.0], vec![-1.0, 1.0]],
        };
        assert!(leq(&p(&[0.0, 0.0]), &p(&[0.0, 1.0]), &o).unwrap());
        assert!(leq(&p(&[0.0, 0.0]), &p(&[1.0, 1.0 - 1e-12]), &o).unwrap());
        assert!(!leq(&p(&[0.0, 0.0]), &p(&[1.0, 0.0]), &o).unwrap());
        let d = o.interior_direction(2).unwrap();
        assert!((d[0]).abs() < 1e-15 && (d[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ideal_membership_examples() {
        let ex36 = builtin_scene("ex36").unwrap();
        let x = p(&[1.0, 0.0]);
        assert!(ideal_membership(&p(&[0.5, -0.5]), &x, &ex36).unwrap());
        assert!(!ideal_membership(&p(&[2.0, 2.0]), &x, &ex36).unwrap());
        let ex25 = builtin_scene("ex25").unwrap();
        assert!(ideal_membership(&p(&[-1.0, -1.0]), &p(&[0.0, 0.0]), &ex25).unwrap());
        assert!(filter_membership(&p(&[1.0, 1.0]), &p(&[0.0, 0.0]), &ex25).unwrap());
    }

    #[test]
    fn down_closure_examples() {
        let ex41 = builtin_scene("ex41").unwrap();
        let set = vec![p(&[0.5, 0.5]), p(&[0.2, 0.9])];
        assert!(down_closure_membership(&p(&[0.1, 0.8]), &set, &ex41).unwrap());
        assert!(down_closure_membership(&p(&[0.2, 0.9]), &set, &ex41).unwrap());
        assert!(!down_closure_membership(&p(&[0.6, 0.1]), &set, &ex41).unwrap());
        let single = vec![p(&[0.5, 0.5])];
        for u in [p(&[0.1, 0.2]), p(&[0.7, 0.2])] {
            assert_eq!(
                down_closure_membership(&u, &single, &ex41).unwrap(),
                ideal_membership(&u, &single[0], &ex41).unwrap()
            );
        }
        assert_eq!(
            down_closure_membership(&p(&[0.1, 0.1]), &[], &ex41),
            Err(OrderError::EmptySet)
        );
    }

    #[test]
    fn meet_ex42_cases() {
        let m = meet_ex42(&p(&[-0.5, -0.5, 0.0]), &p(&[-1.0, -0.2, -0.1])).unwrap();
        assert_eq!(m, p(&[-1.0, -0.5, -0.1]));
        let m = meet_ex42(&p(&[-1.0, -0.5, 0.0]), &p(&[-0.25, -2.0, 0.0])).unwrap();
        assert_eq!(m, p(&[-1.0, -2.0, -1.0]));
        let x = p(&[-1.0, -1.0, -2.0]);
        assert_eq!(meet_ex42(&x, &x).unwrap(), x);
        assert!(matches!(
            meet_ex42(&p(&[1.0, 0.0, 0.0]), &x),
            Err(OrderError::OutsideSpace(_))
        ));
    }

    #[test]
    fn join_ex35_cases() {
        let j = join_ex35(&p(&[-0.5, -0.5, -0.25]), &p(&[-0.5, -1.0, 0.0])).unwrap();
        assert_eq!(j, p(&[-0.5, -0.5, 0.0]));
        let x = p(&[-0.3, -0.7, 0.0]);
        assert_eq!(join_ex35(&x, &x).unwrap(), x);
        assert_eq!(join_ex35(&x, &p(&[0.0, 0.0, 0.0])).unwrap(), p(&[0.0, 0.0, 0.0]));
    }

    #[test]
    fn meet_brute_matches_closed_form_examples() {
        let ex42 = builtin_scene("ex42").unwrap();
        let grid = GridSpec::new(ex42.default_window.clone());
        let pitch = grid.window.pitch();
        let cases = [
            ([-0.5, -0.5, 0.0], [-1.0, -0.2, -0.1]),
            ([-1.0, -0.5, 0.0], [-0.25, -2.0, 0.0]),
        ];
        for (a, b) in cases {
            let (a, b) = (p(&a), p(&b));
            let brute = meet_brute(&a, &b, &ex42, &grid).unwrap();
            let exact = meet_ex42(&a, &b).unwrap();
            let got = brute.point().expect("meet found");
            for i in 0..3 {
                assert!((got.0[i] - exact.0[i]).abs() <= pitch, "{got:?} vs {exact:?}");
            }
        }
    }

    #[test]
    fn meet_brute_idempotent() {
        let ex42 = builtin_scene("ex42").unwrap();
        let grid = GridSpec::new(ex42.default_window.clone());
        let x = p(&[-0.7, -0.3, -0.4]);
        assert_eq!(meet_brute(&x, &x, &ex42, &grid).unwrap().point(), Some(&x));
    }

    #[test]
    fn meet_brute_on_triangles() {
        let ex35 = builtin_scene("ex35").unwrap();
        let grid = GridSpec::new(ex35.default_window.clone());
        let got = meet_brute(&p(&[-0.25, -0.25, -0.125]), &p(&[0.0, -1.0, 0.0]), &ex35, &grid)
            .unwrap();
        let got = got.point().unwrap();
        let want = [-1.0, -1.0, -0.125];
        for (g, w) in got.0.iter().zip(want) {
            assert!((g - w).abs() <= grid.window.pitch());
        }
    }

    #[test]
    fn join_brute_top_element() {
        let ex35 = builtin_scene("ex35").unwrap();
        let grid = GridSpec::new(ex35.default_window.clone());
        let j = join_brute(&p(&[-0.5, -0.5, -0.25]), &p(&[-0.5, -1.0, 0.0]), &ex35, &grid).unwrap();
        assert_eq!(j.point(), Some(&p(&[-0.5, -0.5, 0.0])));
    }

    #[test]
    fn window_cutting_off_bounds_is_inconclusive() {
        let ex42 = builtin_scene("ex42").unwrap();
        // Lower bounds of these points need w <= -3, outside [-2, 0].
        let grid = GridSpec::new(Window::cube(3, -2.0, 0.0));
        let out = meet_brute(&p(&[-2.0, -0.1, -3.0]), &p(&[-0.1, -2.0, -3.0]), &ex42, &grid);
        // both arguments are outside the window in w, so nothing on the grid
        assert!(matches!(out, Ok(LatticeOutcome::Inconclusive { .. })), "{out:?}");
    }

    #[test]
    fn disconnected_lower_bounds_are_flagged() {
        // Lower bounds live on two arms whose tops are incomparable.
        let scene = crate::scene::parse_scene(
            "region v dim 2 { (x1 <= -1 and x2 <= 0 and x2 >= -0.1) or (x2 <= -1 and x1 <= 0 and x1 >= -0.1) or (x1 >= 0.5 and x2 >= 0.5 and x1 + x2 >= 1.5) } order coordinatewise window (-2, -2) .. (1.5, 1.5)",
        )
        .unwrap();
        let grid = GridSpec::new(scene.default_window.clone());
        let out = meet_brute(&p(&[1.0, 0.5]), &p(&[0.5, 1.0]), &scene, &grid).unwrap();
        assert!(matches!(out, LatticeOutcome::NotSemilatticeAtResolution { .. }), "{out:?}");
    }
}
