//! Thin sets parametrized by their offset ("gap") along one axis.
//!
//! The gap is measured from a reference value that the set approaches but
//! never reaches. Samples are spread by arc length inside the window and
//! refined geometrically toward the excluded end until the gap reaches the
//! separation tolerance, so a set resolved this way stays separated from
//! anything lying beyond its reference value.

use super::ClosedFormSampler;
use crate::geom::{Point, Tolerance, TAU_SEP};
use crate::window::Window;

#[derive(Clone, Debug, PartialEq)]
pub enum CurveKind {
    /// Open segment; both endpoints excluded.
    OpenSegment { from: Point, to: Point },
    /// `(u0, v, v/(v - v0) + w0)` for `v` in `(v0, 0]`.
    Ex42V { u0: f64, v0: f64, w0: f64 },
    /// `(u, v0, u/(u - u0) + w0)` for `u` in `(u0, 0]`.
    Ex42U { u0: f64, v0: f64, w0: f64 },
    /// `(0, w/(w - w0), w)` for `w` in `(w0, 0]`.
    Ex42W { w0: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapCurve {
    pub kind: CurveKind,
    gap_axis: usize,
    reference: f64,
    max_gap: f64,
    open_at_max: bool,
}

/// Ratio between consecutive refinement gaps.
const TAIL_RATIO: f64 = 0.957_603_280_698_573_6; // 2^(-1/16)
const FINE_STEPS: usize = 4096;

impl GapCurve {
    /// Open segment from `from` to `to`, with the gap measured along `axis`.
    /// Returns `None` unless `to` lies strictly above `from` on that axis.
    pub fn open_segment(from: Point, to: Point, axis: usize) -> Option<Self> {
        let span = to.0.get(axis)? - from.0.get(axis)?;
        if !(span > 0.0) || from.dim() != to.dim() {
            return None;
        }
        Some(GapCurve {
            gap_axis: axis,
            reference: from.0[axis],
            max_gap: span,
            open_at_max: true,
            kind: CurveKind::OpenSegment { from, to },
        })
    }

    /// Requires `v0 < 0`.
    pub fn ex42_v(u0: f64, v0: f64, w0: f64) -> Option<Self> {
        (v0 < 0.0).then_some(GapCurve {
            kind: CurveKind::Ex42V { u0, v0, w0 },
            gap_axis: 1,
            reference: v0,
            max_gap: -v0,
            open_at_max: false,
        })
    }

    /// Requires `u0 < 0`.
    pub fn ex42_u(u0: f64, v0: f64, w0: f64) -> Option<Self> {
        (u0 < 0.0).then_some(GapCurve {
            kind: CurveKind::Ex42U { u0, v0, w0 },
            gap_axis: 0,
            reference: u0,
            max_gap: -u0,
            open_at_max: false,
        })
    }

    /// Requires `w0 < 0`.
    pub fn ex42_w(w0: f64) -> Option<Self> {
        (w0 < 0.0).then_some(GapCurve {
            kind: CurveKind::Ex42W { w0 },
            gap_axis: 2,
            reference: w0,
            max_gap: -w0,
            open_at_max: false,
        })
    }

    pub fn tag(&self) -> String {
        match &self.kind {
            CurveKind::OpenSegment { from, to } => format!("segment({from}, {to})"),
            CurveKind::Ex42V { u0, v0, w0 } => format!("curve_v({u0}, {v0}, {w0})"),
            CurveKind::Ex42U { u0, v0, w0 } => format!("curve_u({u0}, {v0}, {w0})"),
            CurveKind::Ex42W { w0 } => format!("curve_w({w0})"),
        }
    }

    pub fn max_gap(&self) -> f64 {
        self.max_gap
    }

    /// Point at gap `g`, for `g` in `(0, max_gap]`.
    pub fn point(&self, g: f64) -> Point {
        match &self.kind {
            CurveKind::OpenSegment { from, to } => from.lerp(to, g / self.max_gap),
            CurveKind::Ex42V { u0, v0, w0 } => {
                let v = v0 + g;
                Point(vec![*u0, v, v / g + w0])
            }
            CurveKind::Ex42U { u0, v0, w0 } => {
                let u = u0 + g;
                Point(vec![u, *v0, u / g + w0])
            }
            CurveKind::Ex42W { w0 } => {
                let w = w0 + g;
                Point(vec![0.0, w / g, w])
            }
        }
    }

    /// Gap of a point on the curve.
    pub fn gap_of(&self, p: &[f64]) -> f64 {
        p[self.gap_axis] - self.reference
    }

    pub fn contains(&self, p: &[f64], tol: Tolerance) -> bool {
        if p.len() != self.point(self.max_gap).dim() {
            return false;
        }
        let g = self.gap_of(p);
        let eps = tol.nonstrict.max(1e-12);
        if !(g > 0.0) || g > self.max_gap + eps || (self.open_at_max && g >= self.max_gap) {
            return false;
        }
        let q = self.point(g.min(self.max_gap));
        q.0.iter()
            .zip(p)
            .all(|(a, b)| (a - b).abs() <= eps * (1.0 + a.abs()))
    }

    fn top_gap(&self) -> f64 {
        if self.open_at_max {
            self.max_gap * (1.0 - 1e-9)
        } else {
            self.max_gap
        }
    }

    /// Gaps of the refinement toward the excluded end: geometric, stopping
    /// at the last value above the separation tolerance.
    pub fn tail_gaps(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut g = self.top_gap();
        while g > TAU_SEP {
            out.push(g);
            g *= TAIL_RATIO;
        }
        out
    }
}

impl ClosedFormSampler for GapCurve {
    fn samples(&self, window: &Window) -> Vec<Point> {
        let top = self.top_gap();
        let h = (0..window.dim())
            .map(|a| window.axis_pitch(a))
            .fold(f64::INFINITY, f64::min);
        // Fine parameter list, descending: linear part plus a log part that
        // follows the fast end of the curve.
        let mut params: Vec<f64> = (0..FINE_STEPS)
            .map(|k| top * (1.0 - k as f64 / FINE_STEPS as f64))
            .collect();
        let mut g = top;
        while g > TAU_SEP {
            params.push(g);
            g *= 0.998;
        }
        params.sort_by(|a, b| b.total_cmp(a));
        params.dedup();

        let mut out = Vec::new();
        let mut last: Option<Point> = None;
        let mut prev: Option<Point> = None;
        let mut walked = 0.0;
        for &g in &params {
            let p = self.point(g);
            if let Some(q) = &prev {
                walked += p.dist(q);
            }
            prev = Some(p.clone());
            if !window.contains(p.coords()) {
                continue;
            }
            if last.is_none() || walked >= h {
                walked = 0.0;
                last = Some(p.clone());
                out.push(p);
            }
        }
        out.extend(self.tail_gaps().into_iter().map(|g| self.point(g)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_stops_just_above_separation() {
        let c = GapCurve::ex42_v(-0.5, -0.5, 0.0).unwrap();
        let tail = c.tail_gaps();
        let last = *tail.last().unwrap();
        assert!(last > TAU_SEP && last < TAU_SEP / TAIL_RATIO + 1e-18);
    }

    #[test]
    fn samples_lie_on_the_curve() {
        let c = GapCurve::ex42_v(-0.5, -0.5, 0.0).unwrap();
        let w = Window::cube(3, -2.0, 0.0);
        let s = c.samples(&w);
        assert!(s.len() > 50);
        for p in &s {
            assert!(c.contains(p.coords(), Tolerance::MEMBERSHIP), "{p}");
            assert!(c.gap_of(p.coords()) > TAU_SEP);
        }
    }

    #[test]
    fn open_segment_excludes_both_ends() {
        let c = GapCurve::open_segment(Point::from([0.0, 0.5]), Point::from([0.5, 1.0]), 1).unwrap();
        assert!(!c.contains(&[0.0, 0.5], Tolerance::MEMBERSHIP));
        assert!(!c.contains(&[0.5, 1.0], Tolerance::MEMBERSHIP));
        assert!(c.contains(&[0.25, 0.75], Tolerance::MEMBERSHIP));
        assert!(!c.contains(&[0.25, 0.7], Tolerance::MEMBERSHIP));
    }

    #[test]
    fn arc_length_spacing_is_about_one_pitch() {
        let c = GapCurve::open_segment(Point::from([0.0, 0.0]), Point::from([1.0, 1.0]), 1).unwrap();
        let w = Window::cube(2, 0.0, 1.0);
        let n_in = c.samples(&w).len() - c.tail_gaps().len();
        // sqrt(2) / (1/63) samples along the body.
        assert!((85..=95).contains(&n_in), "{n_in}");
    }
}
