//! Set expressions used in flags.
//!
//! ```text
//! ideal(p)  filter(p)  interval(b, a)  ball(c, r)  box(lo, hi)  all
//! curve:l(p)  curve:vietoris(p)  curve:edge(p)
//! ```
//!
//! Points are comma-separated coordinates; the scene dimension splits the
//! argument list of `interval`, `ball` and `box`.

use std::sync::Arc;

use thiserror::Error;

use crate::geom::Point;
use crate::repro::{ex42_back_top_edge, ex42_right_top_edge, ex42_vietoris_curve};
use crate::scene::Scene;
use crate::setrep::{ClosedFormSampler, GapCurve, ImplicitClosedSet};

#[derive(Debug, Error, PartialEq)]
pub enum SetExprError {
    #[error("cannot parse `{0}`")]
    Syntax(String),
    #[error("`{name}` takes {expected} numbers, got {got}")]
    Arity {
        name: String,
        expected: String,
        got: usize,
    },
    #[error("unknown set form `{0}`")]
    Unknown(String),
    #[error("{0}")]
    Curve(String),
}

fn numbers(text: &str) -> Result<Vec<f64>, SetExprError> {
    let t = text.trim();
    let t = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(t);
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|s| {
            let s = s.trim().trim_matches(|c| c == '(' || c == ')').trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| SetExprError::Syntax(s.to_string()))
        })
        .collect()
}

/// A point of the given dimension: `a,b,c`, optionally parenthesised.
pub fn parse_point(text: &str, dim: usize) -> Result<Point, SetExprError> {
    let v = numbers(text)?;
    if v.len() != dim {
        return Err(SetExprError::Arity {
            name: "point".into(),
            expected: dim.to_string(),
            got: v.len(),
        });
    }
    Ok(Point(v))
}

fn arity(name: &str, v: &[f64], expected: usize) -> Result<(), SetExprError> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(SetExprError::Arity {
            name: name.into(),
            expected: expected.to_string(),
            got: v.len(),
        })
    }
}

pub fn parse_set(
    text: &str,
    scene: &Arc<Scene>,
    u_branch: bool,
) -> Result<ImplicitClosedSet, SetExprError> {
    let t = text.trim();
    if t == "all" {
        return Ok(ImplicitClosedSet::ambient(scene));
    }
    let open = t.find('(').ok_or_else(|| SetExprError::Syntax(t.into()))?;
    if !t.ends_with(')') {
        return Err(SetExprError::Syntax(t.into()));
    }
    let name = t[..open].trim();
    let v = numbers(&t[open + 1..t.len() - 1])?;
    let n = scene.dim;
    let set = match name {
        "ideal" => {
            arity(name, &v, n)?;
            ImplicitClosedSet::ideal(scene, &Point(v))
        }
        "filter" => {
            arity(name, &v, n)?;
            ImplicitClosedSet::filter(scene, &Point(v))
        }
        "interval" => {
            arity(name, &v, 2 * n)?;
            ImplicitClosedSet::interval(scene, &Point(v[..n].to_vec()), &Point(v[n..].to_vec()))
        }
        "ball" => {
            arity(name, &v, n + 1)?;
            ImplicitClosedSet::ball(scene, &Point(v[..n].to_vec()), v[n])
        }
        "box" => {
            arity(name, &v, 2 * n)?;
            ImplicitClosedSet::axis_box(scene, v[..n].to_vec(), v[n..].to_vec())
        }
        "curve:l" => {
            arity(name, &v, 2)?;
            if n != 2 {
                return Err(SetExprError::Curve("curve:l needs a planar scene".into()));
            }
            let w = &scene.default_window;
            let curve = GapCurve::open_segment(
                Point::from([w.lo[0], v[1]]),
                Point::from([v[0], w.hi[1]]),
                1,
            )
            .ok_or_else(|| SetExprError::Curve(format!("no segment above ({}, {})", v[0], v[1])))?;
            ImplicitClosedSet::curve(scene, curve)
        }
        "curve:vietoris" => {
            arity(name, &v, 3)?;
            ex42_vietoris_curve(scene, &Point(v), u_branch)
                .map_err(|e| SetExprError::Curve(e.to_string()))?
        }
        "curve:edge" => {
            arity(name, &v, 3)?;
            let x = Point(v);
            let err = |e: crate::repro::ReproError| SetExprError::Curve(e.to_string());
            let w = &scene.default_window;
            let mut pts = ex42_right_top_edge(&x).map_err(err)?.samples(w);
            pts.extend(ex42_back_top_edge(&x).map_err(err)?.samples(w));
            ImplicitClosedSet::points(scene, format!("edges({x})"), pts)
        }
        other => return Err(SetExprError::Unknown(other.into())),
    };
    Ok(set)
}
