//! Built-in scenes.

use thiserror::Error;

use super::{parse_scene, ConstraintExpr, Landmark, Scene};
use crate::geom::Point;

#[derive(Debug, Error, PartialEq)]
pub enum BuiltinError {
    #[error("unknown built-in scene `{0}`; known: ex25, ex35, ex36, ex41, ex42, open_box2, open_box3")]
    Unknown(String),
}

const EX25: &str = "region ex25 dim 2 { x1*x2 > 0 } order coordinatewise \
                    window (-2, -2) .. (2, 2) point (0, 0)";

const EX35: &str = "region ex35 dim 3 { \
    (x3 = 0 and x2 <= x1 and x1 <= 0 and x2 >= -1) \
    or (x1 = x2 and x1 >= -1 and x1 <= 0 and x1 <= x3 and x3 <= 0) \
    } order coordinatewise window (-1, -1, -1) .. (0, 0, 0)";

// The hyperbola branch is stored as x1*x2 >= 4 and x1 >= 0. On that branch
// x1 = 0 is impossible, so this equals the strict form x1 > 0 while keeping
// the expression syntactically closed.
const EX36: &str = "region ex36 dim 2 { \
    x1^2 + x2^2 <= 1 or (x1*x2 - 4 >= 0 and x1 >= 0) \
    } order coordinatewise window (-1.5, -1.5) .. (6, 6)";

const EX41: &str = "region ex41 dim 2 { 0 < x1 < 1 and 0 < x2 < 1 } order coordinatewise \
                    window (0, 0) .. (1, 1)";

const EX42: &str = "region ex42 dim 3 { \
    x1 <= 0 and x2 <= 0 and x3 <= 0 and x1*x2 + x3 - 1 <= 0 \
    } order coordinatewise window (-2, -2, -2) .. (0, 0, 0)";

pub fn builtin_ids() -> [&'static str; 5] {
    ["ex25", "ex35", "ex36", "ex41", "ex42"]
}

fn region(dim: usize, body: &str) -> ConstraintExpr {
    let text = format!("region r dim {dim} {{ {body} }} order coordinatewise");
    parse_scene(&text).expect("built-in region").membership
}

fn pt(name: &str, coords: &[f64]) -> Landmark {
    Landmark::Point {
        name: name.into(),
        point: Point(coords.to_vec()),
        exterior: false,
    }
}

fn exterior(name: &str, coords: &[f64]) -> Landmark {
    Landmark::Point {
        name: name.into(),
        point: Point(coords.to_vec()),
        exterior: true,
    }
}

fn named_region(name: &str, dim: usize, body: &str) -> Landmark {
    Landmark::Region {
        name: name.into(),
        expr: region(dim, body),
    }
}

pub fn builtin_scene(id: &str) -> Result<Scene, BuiltinError> {
    let parse = |t: &str| parse_scene(t).expect("built-in scene text");
    let scene = match id {
        "ex25" => parse(EX25).with_landmarks(vec![
            pt("theta", &[0.0, 0.0]),
            exterior("escape", &[1.0, 0.0]),
        ]),
        "ex35" => parse(EX35).with_landmarks(vec![
            pt("top", &[0.0, 0.0, 0.0]),
            pt("t1_corner", &[0.0, -1.0, 0.0]),
            pt("shared_corner", &[-1.0, -1.0, 0.0]),
            pt("t2_bottom", &[-1.0, -1.0, -1.0]),
            named_region("T1", 3, "x3 = 0 and x2 <= x1 and x1 <= 0 and x2 >= -1"),
            named_region(
                "T2",
                3,
                "x1 = x2 and x1 >= -1 and x1 <= 0 and x1 <= x3 and x3 <= 0",
            ),
        ]),
        "ex36" => parse(EX36).with_landmarks(vec![
            pt("disk_right", &[1.0, 0.0]),
            pt("hyperbola_vertex", &[2.0, 2.0]),
            named_region("unit_circle", 2, "x1^2 + x2^2 = 1"),
        ]),
        "ex41" => parse(EX41).with_landmarks(vec![pt("center", &[0.5, 0.5])]),
        "ex42" => parse(EX42).with_landmarks(vec![
            pt("origin", &[0.0, 0.0, 0.0]),
            pt("meet_corner", &[-1.0, -2.0, -1.0]),
            named_region("S1", 3, "x1*x2 + x3 - 1 = 0 and x1 < 0 and x2 < 0 and x3 <= 0"),
            named_region("S2", 3, "x2 = 0 and x1 <= 0 and x3 <= 0"),
            named_region("S3", 3, "x1 = 0 and x2 <= 0 and x3 <= 0"),
            named_region("S4", 3, "x3 = 0 and x1 <= 0 and x2 <= 0 and x1*x2 - 1 <= 0"),
        ]),
        "open_box2" => open_box(2, 0.0, 1.0),
        "open_box3" => open_box(3, 0.0, 1.0),
        other => return Err(BuiltinError::Unknown(other.to_string())),
    };
    Ok(scene)
}

/// The open box `(lo, hi)^n` with the coordinatewise order.
pub fn open_box(n: usize, lo: f64, hi: f64) -> Scene {
    let body: Vec<String> = (1..=n).map(|i| format!("{lo} < x{i} < {hi}")).collect();
    let lo_t = vec![lo.to_string(); n].join(", ");
    let hi_t = vec![hi.to_string(); n].join(", ");
    let text = format!(
        "region open_box{n} dim {n} {{ {} }} order coordinatewise window ({lo_t}) .. ({hi_t})",
        body.join(" and ")
    );
    let center = vec![(lo + hi) / 2.0; n];
    parse_scene(&text)
        .expect("open box text")
        .with_landmarks(vec![pt("center", &center)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landmarks_are_members_unless_exterior() {
        for id in builtin_ids().into_iter().chain(["open_box2", "open_box3"]) {
            let s = builtin_scene(id).unwrap();
            for l in &s.landmarks {
                if let Landmark::Point { point, exterior, name } = l {
                    assert_eq!(s.contains(point.coords()), !exterior, "{id}/{name}");
                    assert!(s.default_window.contains(point.coords()), "{id}/{name}");
                }
            }
        }
    }

    #[test]
    fn closedness_flags() {
        let closed: Vec<bool> = builtin_ids()
            .iter()
            .map(|id| builtin_scene(id).unwrap().closed_in_rn)
            .collect();
        assert_eq!(closed, vec![false, true, true, false, true]);
    }

    #[test]
    fn spot_memberships() {
        let ex35 = builtin_scene("ex35").unwrap();
        assert_eq!(ex35.landmark_point("t2_bottom"), Some(&Point(vec![-1.0, -1.0, -1.0])));
        assert!(builtin_scene("ex42").unwrap().contains(&[-1.0, -2.0, -1.0]));
        assert!(!builtin_scene("ex25").unwrap().contains(&[1.0, -1.0]));
        assert!(builtin_scene("ex25").unwrap().contains(&[0.0, 0.0]));
        assert_eq!(
            builtin_scene("ex99"),
            Err(BuiltinError::Unknown("ex99".into()))
        );
    }
}
