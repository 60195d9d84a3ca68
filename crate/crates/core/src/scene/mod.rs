//! Ambient spaces: a polynomial constraint region, a cone order and a
//! default sampling window.
//!
//! Scenes have a small text format:
//!
//! ```text
//! region ex42 dim 3 {
//!   x1 <= 0 and x2 <= 0 and x3 <= 0 and x1*x2 + x3 - 1 <= 0
//! }
//! order coordinatewise
//! window (-2, -2, -2) .. (0, 0, 0)
//! ```
//!
//! `order halfspaces [ (1, 1); (-1, 1) ]` gives a polyhedral cone by inward
//! normals, and trailing `point (..)` lines add isolated points to the region.

mod builtin;
pub mod expr;
mod parse;

use std::fmt::Write as _;

use serde::Serialize;

pub use builtin::{builtin_ids, builtin_scene, open_box, BuiltinError};
pub use expr::{Atom, ConstraintExpr, Poly, Rel};
pub use parse::{parse_scene, ParseError, ParseErrorKind};

use crate::geom::{Point, Tolerance};
use crate::order::ConeOrder;
use crate::window::Window;

/// Named geometry attached to a scene.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Landmark {
    Point {
        name: String,
        point: Point,
        /// Set for reference points deliberately outside the space.
        exterior: bool,
    },
    Region {
        name: String,
        #[serde(serialize_with = "serialize_display")]
        expr: ConstraintExpr,
    },
}

fn serialize_display<S: serde::Serializer>(
    e: &ConstraintExpr,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

impl Landmark {
    pub fn name(&self) -> &str {
        match self {
            Landmark::Point { name, .. } | Landmark::Region { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub name: String,
    pub dim: usize,
    pub membership: ConstraintExpr,
    pub order: ConeOrder,
    pub default_window: Window,
    /// Whether the region is closed in R^n, decided syntactically.
    pub closed_in_rn: bool,
    pub landmarks: Vec<Landmark>,
}

impl Scene {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        membership: ConstraintExpr,
        order: ConeOrder,
        default_window: Window,
    ) -> Self {
        let closed_in_rn = membership.is_syntactically_closed();
        Scene {
            name: name.into(),
            dim,
            membership,
            order,
            default_window,
            closed_in_rn,
            landmarks: Vec::new(),
        }
    }

    pub fn with_landmarks(mut self, landmarks: Vec<Landmark>) -> Self {
        self.landmarks = landmarks;
        self
    }

    /// Membership with the default tolerance.
    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        self.membership.eval(x, Tolerance::MEMBERSHIP)
    }

    pub fn contains_tol(&self, x: &[f64], tol: Tolerance) -> bool {
        self.membership.eval(x, tol)
    }

    pub fn landmark_point(&self, name: &str) -> Option<&Point> {
        self.landmarks.iter().find_map(|l| match l {
            Landmark::Point { name: n, point, .. } if n == name => Some(point),
            _ => None,
        })
    }

    /// Equality of everything the text format carries.
    pub fn same_structure(&self, other: &Scene) -> bool {
        self.name == other.name
            && self.dim == other.dim
            && self.membership == other.membership
            && self.order == other.order
            && self.default_window.lo == other.default_window.lo
            && self.default_window.hi == other.default_window.hi
    }

    /// Splits off scene-level isolated points, if any.
    fn body_and_points(&self) -> (&ConstraintExpr, &[Point]) {
        if let ConstraintExpr::Or(items) = &self.membership {
            if let [body, ConstraintExpr::Points(pts)] = items.as_slice() {
                return (body, pts);
            }
        }
        (&self.membership, &[])
    }
}

fn write_tuple(out: &mut String, v: &[f64]) {
    out.push('(');
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{c}");
    }
    out.push(')');
}

/// Canonical text of a scene. Deterministic, and parses back to a scene
/// with the same structure.
pub fn print_scene(scene: &Scene) -> String {
    let (body, points) = scene.body_and_points();
    let mut out = String::new();
    let _ = writeln!(out, "region {} dim {} {{", scene.name, scene.dim);
    out.push_str("  ");
    body.write_to(&mut out);
    out.push_str("\n}\n");
    match &scene.order {
        ConeOrder::Coordinatewise => out.push_str("order coordinatewise\n"),
        ConeOrder::Halfspaces { normals } => {
            out.push_str("order halfspaces [ ");
            for (i, n) in normals.iter().enumerate() {
                if i > 0 {
                    out.push_str("; ");
                }
                write_tuple(&mut out, n);
            }
            out.push_str(" ]\n");
        }
    }
    out.push_str("window ");
    write_tuple(&mut out, &scene.default_window.lo);
    out.push_str(" .. ");
    write_tuple(&mut out, &scene.default_window.hi);
    out.push('\n');
    for p in points {
        out.push_str("point ");
        write_tuple(&mut out, p.coords());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip() {
        for id in builtin_ids() {
            let s = builtin_scene(id).unwrap();
            let text = print_scene(&s);
            let back = parse_scene(&text).unwrap_or_else(|e| panic!("{id}: {e}\n{text}"));
            assert!(s.same_structure(&back), "{id}:\n{text}\n{}", print_scene(&back));
            assert_eq!(text, print_scene(&back));
        }
    }

    #[test]
    fn print_is_deterministic_and_names_the_order() {
        let s = builtin_scene("ex41").unwrap();
        let a = print_scene(&s);
        assert_eq!(a, print_scene(&s));
        assert!(a.contains("coordinatewise"));
    }

    #[test]
    fn isolated_points_print_as_point_lines() {
        let s = builtin_scene("ex25").unwrap();
        let text = print_scene(&s);
        assert!(text.contains("point (0, 0)"), "{text}");
    }
}
