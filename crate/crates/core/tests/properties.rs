use std::sync::Arc;

use proptest::prelude::*;

use hyperfell::geom::{Point, Tolerance};
use hyperfell::hyperspace::{
    default_family, fell_probe, hits, ideal_map, misses, vietoris_probe, HitSet, MissSet, PathSpec,
    FAMILY_SEED,
};
use hyperfell::order::{ideal_membership, in_ex42_solid, meet_ex42, ConeOrder};
use hyperfell::repro::{ex42_edge_distance, ex42_right_top_edge};
use hyperfell::scene::{builtin_scene, parse_scene, print_scene, Scene};
use hyperfell::setrep::{
    distance_to_cloud, hausdorff_distance, sample, ClosedFormSampler, ImplicitClosedSet,
    PointCloud, Provenance,
};
use hyperfell::window::Window;

fn arc(id: &str) -> Arc<Scene> {
    Arc::new(builtin_scene(id).unwrap())
}

fn halfspace_cone() -> ConeOrder {
    ConeOrder::Halfspaces {
        normals: vec![vec![1.0, 2.0], vec![2.0, 1.0]],
    }
}

fn coords(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, n)
}

fn ex42_point() -> impl Strategy<Value = Point> {
    coords(3, -2.0, 0.0)
        .prop_filter("inside the solid", |p| in_ex42_solid(p))
        .prop_map(Point)
}

fn cloud(pts: Vec<Vec<f64>>) -> PointCloud {
    PointCloud::new(
        pts.into_iter().map(Point).collect(),
        2,
        Provenance {
            tag: "prop".into(),
            window: Window::cube(2, -5.0, 5.0),
        },
    )
}

fn cloud_strategy() -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(coords(2, -5.0, 5.0), 1..40).prop_map(cloud)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn coordinatewise_order_axioms(
        x in coords(3, -5.0, 5.0),
        d1 in coords(3, 0.0, 2.0),
        d2 in coords(3, 0.0, 2.0),
        z in coords(3, -5.0, 5.0),
    ) {
        let o = ConeOrder::Coordinatewise;
        let y: Vec<f64> = x.iter().zip(&d1).map(|(a, b)| a + b).collect();
        let w: Vec<f64> = y.iter().zip(&d2).map(|(a, b)| a + b).collect();
        prop_assert!(o.leq_raw(&x, &x));
        prop_assert!(o.leq_raw(&x, &y) && o.leq_raw(&y, &w) && o.leq_raw(&x, &w));
        if o.leq_raw(&x, &z) && o.leq_raw(&z, &x) {
            prop_assert_eq!(&x, &z);
        }
        if o.leq_raw(&x, &z) && o.leq_raw(&z, &w) {
            prop_assert!(o.leq_raw(&x, &w));
        }
    }

    #[test]
    fn halfspace_order_axioms(x in coords(2, -5.0, 5.0), y in coords(2, -5.0, 5.0), z in coords(2, -5.0, 5.0)) {
        let o = halfspace_cone();
        prop_assert!(o.leq_raw(&x, &x));
        if o.leq_raw(&x, &y) && o.leq_raw(&y, &z) {
            prop_assert!(o.leq_slack(&x, &z, 2e-9));
        }
        if o.leq_raw(&x, &y) && o.leq_raw(&y, &x) {
            prop_assert!(x.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-8));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn meet_ex42_is_a_commutative_lower_bound(x in ex42_point(), y in ex42_point(), z in ex42_point()) {
        let o = ConeOrder::Coordinatewise;
        let m = meet_ex42(&x, &y).unwrap();
        prop_assert!(in_ex42_solid(m.coords()));
        prop_assert!(o.leq_raw(m.coords(), x.coords()) && o.leq_raw(m.coords(), y.coords()));
        prop_assert_eq!(&m, &meet_ex42(&y, &x).unwrap());
        let left = meet_ex42(&m, &z).unwrap();
        let right = meet_ex42(&x, &meet_ex42(&y, &z).unwrap()).unwrap();
        prop_assert!(left.dist(&right) <= 1e-12, "{} vs {}", left, right);
    }

    #[test]
    fn hausdorff_metric_axioms(a in cloud_strategy(), b in cloud_strategy(), c in cloud_strategy()) {
        let h = |x: &PointCloud, y: &PointCloud| hausdorff_distance(x, y).unwrap();
        prop_assert_eq!(h(&a, &a), 0.0);
        prop_assert_eq!(h(&a, &b), h(&b, &a));
        prop_assert!(h(&a, &c) <= h(&a, &b) + h(&b, &c) + 1e-12);
    }

    #[test]
    fn edge_distance_matches_perpendicular_distance(
        u0 in -2.0f64..0.0,
        ua in -2.0f64..-0.05,
        w0 in -2.0f64..0.0,
        v in -40.0f64..-1.0,
        w in -40.0f64..0.0,
    ) {
        let z = Point::from([u0, v, w]);
        prop_assume!(v < (1.0 - w0) / ua && v < (1.0 - w0) / u0);
        let got = ex42_edge_distance(&z, ua, w0).unwrap();
        // Line w = 1 - ua v through (0, 1) and (1, 1 - ua) in the (v, w) plane.
        let (p1, p2) = ((0.0, 1.0), (1.0, 1.0 - ua));
        let (dx, dy) = (p2.0 - p1.0, p2.1 - p1.1);
        let cross = dx * (w - p1.1) - dy * (v - p1.0);
        let expected = cross.abs() / (dx * dx + dy * dy).sqrt();
        prop_assert!((got - expected).abs() <= 1e-12 * expected.max(1.0), "{} vs {}", got, expected);
    }
}

fn atom() -> impl Strategy<Value = String> {
    (
        prop::collection::vec((-9i32..10, 1usize..4, 0u32..3), 1..4),
        prop::sample::select(vec!["<", "<=", ">", ">=", "="]),
        -5i32..6,
    )
        .prop_map(|(terms, rel, rhs)| {
            let lhs: Vec<String> = terms
                .iter()
                .map(|(c, i, k)| match k {
                    0 => format!("{c}"),
                    1 => format!("{c}*x{i}"),
                    _ => format!("{c}*x{i}^{k}"),
                })
                .collect();
            format!("{} {rel} {rhs}", lhs.join(" + "))
        })
}

fn scene_text() -> impl Strategy<Value = String> {
    let leaf = atom();
    let expr = leaf.prop_recursive(3, 12, 3, |inner| {
        (inner.clone(), prop::sample::select(vec!["and", "or"]), inner)
            .prop_map(|(a, op, b)| format!("({a}) {op} ({b})"))
    });
    expr.prop_map(|e| format!("region gen dim 3 {{ {e} }} order coordinatewise"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip(text in scene_text()) {
        let s = parse_scene(&text).unwrap();
        let printed = print_scene(&s);
        let again = parse_scene(&printed).unwrap();
        prop_assert!(again.same_structure(&s), "{}\n{}", text, printed);
        prop_assert_eq!(print_scene(&again), printed);
    }

    #[test]
    fn parser_is_total(text in "\\PC{0,80}") {
        if let Err(e) = parse_scene(&text) {
            prop_assert!(e.line >= 1 && e.col >= 1);
        }
    }

    #[test]
    fn ex35_membership_matches_barycentric_hulls(
        plane in 0u8..2,
        a in -10i32..3,
        b in -10i32..3,
        c in -10i32..3,
    ) {
        let s = builtin_scene("ex35").unwrap();
        let (a, b, c) = (f64::from(a) / 8.0, f64::from(b) / 8.0, f64::from(c) / 8.0);
        let p = if plane == 0 { [a, b, 0.0] } else { [a, a, c] };
        // T1 = hull{(0,0,0), (0,-1,0), (-1,-1,0)}: weights 1 + v, u - v, -u.
        let t1 = p[2] == 0.0 && [1.0 + p[1], p[0] - p[1], -p[0]].iter().all(|w| *w >= 0.0);
        // T2 = hull{(0,0,0), (-1,-1,-1), (-1,-1,0)}: weights 1 + s, -w, w - s.
        let t2 = p[0] == p[1] && [1.0 + p[0], -p[2], p[2] - p[0]].iter().all(|w| *w >= 0.0);
        prop_assert_eq!(s.contains_tol(&p, Tolerance::EXACT), t1 || t2, "{:?}", p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideals_embed_the_order(x in coords(2, 0.02, 0.98), y in coords(2, 0.02, 0.98)) {
        let s = arc("ex41");
        let (x, y) = (Point(x), Point(y));
        let w = s.default_window.with_resolution(24);
        let yi = ImplicitClosedSet::ideal(&s, &y);
        if ConeOrder::Coordinatewise.leq_raw(x.coords(), y.coords()) {
            let xs = sample(&ImplicitClosedSet::ideal(&s, &x), &w);
            prop_assert!(xs.points().iter().all(|p| yi.contains(p.coords())));
        }
        prop_assert_eq!(yi.contains(x.coords()), ideal_membership(&x, &y, &s).unwrap());
    }

    #[test]
    fn sampling_is_deterministic_and_refines(c in coords(2, 0.2, 0.8), r in 0.05f64..0.3, z in coords(2, 0.0, 1.0)) {
        let s = arc("ex41");
        let set = ImplicitClosedSet::ball(&s, &Point(c), r);
        let coarse = s.default_window.with_resolution(17);
        let fine = coarse.with_resolution(33);
        let a = sample(&set, &coarse);
        let again = sample(&set, &coarse);
        prop_assert_eq!(a.points(), again.points());
        let dc = distance_to_cloud(&z, &a.tree());
        let df = distance_to_cloud(&z, &sample(&set, &fine).tree());
        if let (Some(dc), Some(df)) = (dc, df) {
            prop_assert!(df <= dc + coarse.pitch());
        }
    }

    #[test]
    fn hits_and_misses_are_monotone(x in coords(2, 0.1, 0.9), c in coords(2, 0.0, 1.0), r in 0.02f64..0.2, k in 1.0f64..3.0) {
        let s = arc("ex41");
        let w = s.default_window.with_resolution(33);
        let a = ImplicitClosedSet::ideal(&s, &Point(x));
        let c = Point(c);
        let small = ImplicitClosedSet::ball(&s, &c, r);
        let big = ImplicitClosedSet::ball(&s, &c, r * k);
        let hit_small = hits(&a, &HitSet::new(small.clone()), &w);
        let hit_big = hits(&a, &HitSet::new(big.clone()), &w);
        if let (Ok(true), Ok(b)) = (hit_small, hit_big) {
            prop_assert!(b);
        }
        let miss_big = misses(&a, &MissSet::new(big), &w);
        let miss_small = misses(&a, &MissSet::new(small), &w);
        if let (Ok(true), Ok(m)) = (miss_big, miss_small) {
            prop_assert!(m);
        }
    }

    #[test]
    fn ex42_edges_lie_on_the_ideal_boundary(u0 in -1.5f64..-0.1, v0 in -1.5f64..-0.1, w0 in -1.0f64..0.0) {
        let s = arc("ex42");
        let x0 = Point::from([u0, v0, w0]);
        prop_assume!(s.contains(x0.coords()));
        let w = s.default_window.with_resolution(33);
        let pitch = w.pitch();
        let ideal = ImplicitClosedSet::ideal(&s, &x0);
        let edge = ex42_right_top_edge(&x0).unwrap();
        for z in edge.samples(&w) {
            prop_assert!(ideal.contains_tol(z.coords(), Tolerance::uniform(1e-9)), "{}", z);
            let outside = (0..3).any(|i| {
                let mut q = z.clone();
                q.0[i] += pitch;
                !ideal.contains(q.coords())
            });
            prop_assert!(outside, "{} has no outside neighbour", z);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fell_and_vietoris_agree_on_compact_families(x in coords(2, 0.1, 0.7)) {
        let s = arc("ex41");
        let w = s.default_window.with_resolution(33);
        let map = ideal_map(&s);
        let x0 = Point(x);
        let path = PathSpec::linear(x0.clone(), Point::from([x0.0[0], x0.0[1] + 0.25]));
        let (h, m) = default_family(&s, &map, &x0, &w, FAMILY_SEED);
        prop_assert!(m.iter().all(|d| d.certificate.as_ref().is_some_and(|c| c.is_compact())));
        let f = fell_probe(&s, &path, &map, h.clone(), m.clone(), &w).unwrap();
        let v = vietoris_probe(&s, &path, &map, h, m, &w).unwrap();
        prop_assert_eq!(f.status, v.status);
    }
}
