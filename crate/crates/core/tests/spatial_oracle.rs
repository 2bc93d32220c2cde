mod common;

use common::*;
use imgql::spatial::{
    closure, connected_components, distance_transform, grow, interior, maxvol, may_reach_bwd,
    may_reach_fwd, smoothen, surrounded, touch,
};
use imgql::{Adjacency, BoolImage, GridDims};
use proptest::prelude::*;

fn adjacency() -> impl Strategy<Value = Adjacency> {
    prop_oneof![Just(Adjacency::Orthogonal), Just(Adjacency::Orthodiagonal)]
}

fn image_pair(max: usize) -> impl Strategy<Value = (BoolImage, BoolImage)> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        let dims = GridDims::new(w, h).unwrap();
        (
            proptest::collection::vec(any::<bool>(), w * h),
            proptest::collection::vec(any::<bool>(), w * h),
        )
            .prop_map(move |(a, b)| {
                (
                    BoolImage::new(dims, a).unwrap(),
                    BoolImage::new(dims, b).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reachability_matches_paths((a, b) in image_pair(6), adj in adjacency()) {
        prop_assert_eq!(may_reach_fwd(&a, &b, adj).unwrap(), reach_oracle(&a, &b, adj));
        prop_assert_eq!(may_reach_bwd(&a, &b, adj).unwrap(), reach_oracle(&a, &b, adj));
        prop_assert_eq!(surrounded(&a, &b, adj).unwrap(), surrounded_oracle(&a, &b, adj));
        prop_assert_eq!(touch(&a, &b, adj).unwrap(), touch_oracle(&a, &b, adj));
        prop_assert_eq!(grow(&a, &b, adj).unwrap(), grow_oracle(&a, &b, adj));
    }

    #[test]
    fn closure_matches_neighbourhoods((a, _) in image_pair(8), adj in adjacency()) {
        prop_assert_eq!(closure(&a, adj), closure_oracle(&a, adj));
        prop_assert_eq!(interior(&a, adj), closure(&a.not(), adj).not());
    }

    #[test]
    fn distances_match_brute_force((a, _) in image_pair(9)) {
        let dt = distance_transform(&a);
        prop_assert_eq!(dt.values(), &distance_oracle(&a)[..]);
    }

    #[test]
    fn derived_operator_laws((a, b) in image_pair(7), adj in adjacency()) {
        let all = BoolImage::filled(a.dims(), true);
        let none = BoolImage::filled(a.dims(), false);
        prop_assert_eq!(surrounded(&a, &all, adj).unwrap(), a.clone());
        prop_assert_eq!(touch(&a, &a, adj).unwrap(), a.clone());
        prop_assert_eq!(grow(&a, &none, adj).unwrap(), a.clone());
        prop_assert!(touch(&a, &b, adj).unwrap().is_subset(&a));
        prop_assert!(a.is_subset(&grow(&a, &b, adj).unwrap()));
        prop_assert!(surrounded(&a, &b, adj).unwrap().is_subset(&a));
    }

    #[test]
    fn maxvol_is_a_largest_component((a, _) in image_pair(8), adj in adjacency()) {
        let kept = maxvol(&a, adj);
        prop_assert!(kept.is_subset(&a));
        let labels = connected_components(&a, adj);
        let sizes = labels.sizes();
        let largest = sizes.iter().copied().max().unwrap_or(0);
        let ties = sizes.iter().filter(|&&s| s == largest && largest > 0).count();
        prop_assert_eq!(kept.count(), largest * ties);
    }

    #[test]
    fn smoothen_is_inside_dilated_erosion((a, _) in image_pair(9), r in 0.0f64..4.0) {
        let s = smoothen(r, &a).unwrap();
        let dt_out = distance_transform(&a.not());
        let core = BoolImage::from_fn(a.dims(), |x, y| dt_out.get(x, y) >= r);
        let dt_core = distance_transform(&core);
        for y in 0..a.dims().height() {
            for x in 0..a.dims().width() {
                prop_assert_eq!(s.get(x, y), dt_core.get(x, y) < r);
            }
        }
    }
}

#[test]
fn smoothen_removes_protrusion_from_disk() {
    let dims = GridDims::new(40, 40).unwrap();
    let disk = |x: usize, y: usize| (x as f64 - 15.0).hypot(y as f64 - 20.0) <= 10.0;
    let shape = BoolImage::from_fn(dims, |x, y| disk(x, y) || (y == 20 && (25..36).contains(&x)));
    let s = smoothen(3.0, &shape).unwrap();
    assert!((28..36).all(|x| !s.get(x, 20)));
    assert!(s.get(15, 20) && s.get(15, 12) && s.get(8, 20));
    assert!(s.is_subset(&shape));
}

#[test]
fn row_example_through_component_must_touch_target() {
    let target = mask(&["....#"]);
    let through = mask(&["..#.."]);
    let r = may_reach_fwd(&target, &through, Adjacency::Orthodiagonal).unwrap();
    assert_eq!(r, mask(&["...##"]));
    assert_eq!(r, reach_oracle(&target, &through, Adjacency::Orthodiagonal));
}
