//! Closed-form geometry of the solid `{u, v, w ≤ 0, uv + w ≤ 1}`: top
//! edges of principal ideals, the edge-to-line distance and the curves
//! that break Vietoris continuity.

use std::sync::Arc;

use serde::Serialize;

use super::ReproError;
use crate::geom::Point;
use crate::hyperspace::IdealMap;
use crate::order::in_ex42_solid;
use crate::scene::Scene;
use crate::setrep::{ClosedFormSampler, GapCurve, ImplicitClosedSet};
use crate::window::Window;

/// Top edge of `x0↓` lying in the plane where one of `u`, `v` is fixed.
///
/// Along the free coordinate `t` running from its value at `x0` down to
/// `−∞`, the edge is flat at `w = w0` until the breakpoint, where it meets
/// the front face, and then follows `w = 1 − fixed·t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgePolyline {
    /// 0 when `u` is fixed (right top edge), 1 when `v` is fixed.
    pub fixed_axis: usize,
    pub fixed: f64,
    pub start: f64,
    pub w0: f64,
    /// Free coordinate of the breakpoint; `None` when the edge stays flat.
    pub breakpoint: Option<f64>,
    /// `dw/dt` on the tail.
    pub tail_slope: f64,
}

impl EdgePolyline {
    fn free_axis(&self) -> usize {
        1 - self.fixed_axis
    }

    /// Edge point at free coordinate `t ≤ start`.
    pub fn point(&self, t: f64) -> Point {
        let w = match self.breakpoint {
            Some(b) if t < b => 1.0 - self.fixed * t,
            _ => self.w0,
        };
        let mut c = [0.0, 0.0, w];
        c[self.fixed_axis] = self.fixed;
        c[self.free_axis()] = t;
        Point(c.to_vec())
    }

    pub fn breakpoint_point(&self) -> Option<Point> {
        self.breakpoint.map(|b| self.point(b))
    }
}

fn edge(x0: &Point, fixed_axis: usize) -> Result<EdgePolyline, ReproError> {
    if x0.dim() != 3 || !in_ex42_solid(x0.coords()) {
        return Err(ReproError::OutsideSolid(x0.clone()));
    }
    let fixed = x0.0[fixed_axis];
    let w0 = x0.0[2];
    let breakpoint = (fixed < 0.0).then(|| (1.0 - w0) / fixed);
    Ok(EdgePolyline {
        fixed_axis,
        fixed,
        start: x0.0[1 - fixed_axis],
        w0,
        breakpoint,
        tail_slope: -fixed,
    })
}

/// Right top edge of `x0↓`, in the plane `u = u0`.
pub fn ex42_right_top_edge(x0: &Point) -> Result<EdgePolyline, ReproError> {
    edge(x0, 0)
}

/// Back top edge of `x0↓`, in the plane `v = v0`.
pub fn ex42_back_top_edge(x0: &Point) -> Result<EdgePolyline, ReproError> {
    edge(x0, 1)
}

impl ClosedFormSampler for EdgePolyline {
    /// Points spaced by one pitch in arc length, with the breakpoint and
    /// the point where the edge leaves the window through the free axis.
    fn samples(&self, window: &Window) -> Vec<Point> {
        let free = self.free_axis();
        let h = (0..3).map(|a| window.axis_pitch(a)).fold(f64::INFINITY, f64::min);
        let end = window.lo[free];
        let mut ts = Vec::new();
        let mut t = self.start;
        while t >= end {
            ts.push(t);
            let sloped = self.breakpoint.is_some_and(|b| t <= b);
            t -= if sloped {
                h / (1.0 + self.tail_slope * self.tail_slope).sqrt()
            } else {
                h
            };
        }
        if self.start >= end {
            ts.push(end);
        }
        if let Some(b) = self.breakpoint {
            if b <= self.start && b >= end {
                ts.push(b);
            }
        }
        ts.sort_by(|a, b| b.total_cmp(a));
        ts.dedup();
        ts.into_iter()
            .map(|t| self.point(t))
            .filter(|p| window.contains(p.coords()))
            .collect()
    }
}

/// Face of `x0↓` in the plane where `u` or `v` is fixed, sampled on the
/// window grid of the two other axes.
#[derive(Clone, Debug)]
struct IdealFace {
    fixed_axis: usize,
    x0: Point,
}

impl ClosedFormSampler for IdealFace {
    fn samples(&self, window: &Window) -> Vec<Point> {
        let fa = self.fixed_axis;
        let free = 1 - fa;
        let fixed = self.x0.0[fa];
        if fixed < window.lo[fa] || fixed > window.hi[fa] {
            return Vec::new();
        }
        let ws = window.axis_values(2);
        let mut out = Vec::new();
        for t in window.axis_values(free).into_iter().filter(|t| *t <= self.x0.0[free]) {
            for &w in ws.iter().filter(|w| **w <= self.x0.0[2]) {
                let mut c = vec![0.0, 0.0, w];
                c[fa] = fixed;
                c[free] = t;
                if fixed * t + w <= 1.0 {
                    out.push(Point(c));
                }
            }
        }
        out
    }
}

/// Ideals of the solid with their top edges and the faces through `x0`
/// attached as closed-form samples, so the boundary of `x0↓` is resolved
/// even when `x0` is off the grid.
pub fn ex42_ideal_map(scene: &Arc<Scene>) -> IdealMap {
    let scene = Arc::clone(scene);
    Arc::new(move |x: &Point| {
        let mut set = ImplicitClosedSet::ideal(&scene, x);
        for e in [ex42_right_top_edge(x), ex42_back_top_edge(x)].into_iter().flatten() {
            set = set.with_sampler(Arc::new(e));
        }
        if in_ex42_solid(x.coords()) {
            for fixed_axis in [0, 1] {
                set = set.with_sampler(Arc::new(IdealFace {
                    fixed_axis,
                    x0: x.clone(),
                }));
            }
        }
        set
    })
}

/// Perpendicular distance in the plane `u = u0` from `z = (u0, v', w')`
/// to the line `w = 1 − uα·v`. Valid on the sloped tails, where
/// `v' < (1 − w0)/uα` and, for `u0 < 0`, `v' < (1 − w0)/u0`.
pub fn ex42_edge_distance(z: &Point, u_alpha: f64, w0: f64) -> Result<f64, ReproError> {
    if z.dim() != 3 {
        return Err(ReproError::Regime(format!("{z} is not a point of R^3")));
    }
    if !(u_alpha < 0.0) {
        return Err(ReproError::Regime(format!("u_alpha = {u_alpha} must be negative")));
    }
    let (u0, v, w) = (z.0[0], z.0[1], z.0[2]);
    let v3 = (1.0 - w0) / u_alpha;
    if !(v < v3) {
        return Err(ReproError::Regime(format!("v' = {v} is not below v3 = {v3}")));
    }
    if u0 < 0.0 {
        let v2 = (1.0 - w0) / u0;
        if !(v < v2) {
            return Err(ReproError::Regime(format!("v' = {v} is not below v2 = {v2}")));
        }
    }
    Ok((1.0 - u_alpha * v - w).abs() / (1.0 + u_alpha * u_alpha).sqrt())
}

/// Closed curve disjoint from `x0↓` that meets `y↓` for points `y`
/// approaching `x0` from above: `C(v0, 0]` when `v0 < 0` (or its
/// `u`-analogue when `u_branch` is set or `v0 = 0`), and `c(w0, 0]` when
/// `u0 = v0 = 0 > w0`.
pub fn ex42_vietoris_curve(
    scene: &Arc<Scene>,
    x0: &Point,
    u_branch: bool,
) -> Result<ImplicitClosedSet, ReproError> {
    if x0.dim() != 3 || !in_ex42_solid(x0.coords()) {
        return Err(ReproError::OutsideSolid(x0.clone()));
    }
    let (u0, v0, w0) = (x0.0[0], x0.0[1], x0.0[2]);
    let curve = if u_branch && u0 < 0.0 {
        GapCurve::ex42_u(u0, v0, w0)
    } else if v0 < 0.0 {
        GapCurve::ex42_v(u0, v0, w0)
    } else if u0 < 0.0 {
        GapCurve::ex42_u(u0, v0, w0)
    } else {
        GapCurve::ex42_w(w0)
    };
    curve
        .map(|c| ImplicitClosedSet::curve(scene, c))
        .ok_or(ReproError::NoCurve)
}

/// End point `x1` of a straight path into `x0` whose ideals all meet the
/// curve chosen by [`ex42_vietoris_curve`].
pub fn ex42_vietoris_path_end(x0: &Point, u_branch: bool) -> Point {
    let (u0, v0, w0) = (x0.0[0], x0.0[1], x0.0[2]);
    if u_branch && u0 < 0.0 || v0 >= 0.0 && u0 < 0.0 {
        Point(vec![0.0, v0, w0])
    } else if v0 < 0.0 {
        Point(vec![u0, 0.0, w0])
    } else {
        Point(vec![0.0, 0.0, 0.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Tolerance;
    use crate::scene::builtin_scene;

    #[test]
    fn edge_examples() {
        let e = ex42_right_top_edge(&Point::from([-1.0, 0.0, 0.0])).unwrap();
        assert_eq!(e.breakpoint, Some(-1.0));
        assert_eq!(e.breakpoint_point().unwrap(), Point::from([-1.0, -1.0, 0.0]));
        assert_eq!(e.point(-3.0), Point::from([-1.0, -3.0, -2.0]));

        let e = ex42_right_top_edge(&Point::from([0.0, -1.0, 0.0])).unwrap();
        assert_eq!(e.breakpoint, None);
        assert_eq!(e.point(-7.0), Point::from([0.0, -7.0, 0.0]));

        let e = ex42_right_top_edge(&Point::from([-0.5, 0.0, 0.0])).unwrap();
        assert_eq!(e.breakpoint, Some(-2.0));
        assert_eq!(e.tail_slope, 0.5);

        assert!(ex42_right_top_edge(&Point::from([0.5, 0.0, 0.0])).is_err());
    }

    #[test]
    fn edge_samples_lie_on_the_ideal_boundary() {
        let s = Arc::new(builtin_scene("ex42").unwrap());
        let x0 = Point::from([-0.5, -0.5, 0.0]);
        let ideal = ImplicitClosedSet::ideal(&s, &x0);
        let w = Window::new(vec![-10.0; 3], vec![0.0; 3], 32).unwrap();
        let h = w.pitch();
        for e in [ex42_right_top_edge(&x0).unwrap(), ex42_back_top_edge(&x0).unwrap()] {
            let pts = e.samples(&w);
            assert!(pts.len() > 20);
            assert!(pts.iter().any(|p| p.0[e.free_axis()] == -10.0));
            for p in &pts {
                assert!(ideal.contains(p.coords()), "{p}");
                let outside = (0..3).flat_map(|a| [-h, h].map(|s| (a, s))).any(|(a, s)| {
                    let mut q = p.clone();
                    q.0[a] += s;
                    !ideal.contains_tol(q.coords(), Tolerance::EXACT)
                });
                assert!(outside, "{p}");
            }
        }
    }

    #[test]
    fn edge_distance_examples() {
        let z = Point::from([-0.5, -10.0, 1.0 - 5.0]);
        let d = ex42_edge_distance(&z, -1.0, 0.0).unwrap();
        assert!((d - 10.0 * 0.5 / 2f64.sqrt()).abs() < 1e-12);
        let z = Point::from([0.0, -10.0, 0.0]);
        let d = ex42_edge_distance(&z, -1.0, 0.0).unwrap();
        assert!((d - 9.0 / 2f64.sqrt()).abs() < 1e-12);
        let z = Point::from([-0.5, -10.0, -4.0]);
        assert!(ex42_edge_distance(&z, -0.5, 0.0).unwrap().abs() < 1e-12);
        assert!(ex42_edge_distance(&Point::from([-0.5, -1.0, 0.0]), -1.0, 0.0).is_err());
    }

    #[test]
    fn vietoris_curves() {
        let s = Arc::new(builtin_scene("ex42").unwrap());
        let c = ex42_vietoris_curve(&s, &Point::from([-0.5, -0.5, 0.0]), false).unwrap();
        assert!(c.contains(&[-0.5, -0.25, -1.0]));
        let c = ex42_vietoris_curve(&s, &Point::from([0.0, 0.0, -0.5]), false).unwrap();
        assert!(c.contains(&[0.0, -1.0, -0.25]));
        assert_eq!(
            ex42_vietoris_curve(&s, &Point::from([0.0, 0.0, 0.0]), false).unwrap_err(),
            ReproError::NoCurve
        );
    }
}
