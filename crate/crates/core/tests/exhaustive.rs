use std::collections::HashSet;

use dary::bijections::{add_root, add_root_inv, cut, cut_inv, enlarge, reduce, rotate, rotate_inv};
use dary::oracle::{self, DEFAULT_LIMIT};

#[test]
fn reduce_is_a_bijection_from_the_marked_side() {
    for (d, n) in [(2, 6), (3, 3), (4, 2), (5, 1)] {
        let targets = oracle::enumerate_leaf_marked(d, n + 1, d - 1, DEFAULT_LIMIT).unwrap();
        let mut seen = HashSet::new();
        for y in &targets {
            let (x, a) = reduce(y).unwrap();
            assert_eq!(x.tree().internal_count(), n);
            assert!(seen.insert((x.key(), a)));
            assert_eq!(enlarge(&x, a).unwrap(), *y);
        }
        assert_eq!(seen.len(), oracle::enumerate_inputs(d, n, DEFAULT_LIMIT).unwrap().len());
    }
}

#[test]
fn component_maps_round_trip() {
    for (d, n) in [(2, 5), (3, 3), (4, 2)] {
        for (x, a) in oracle::enumerate_inputs(d, n, DEFAULT_LIMIT).unwrap() {
            let (f, _) = cut(&x, a).unwrap();
            assert_eq!(cut_inv(&f, a).unwrap(), (x.clone(), a));
            let g = rotate(&f, a).unwrap();
            let (back, b) = rotate_inv(&g).unwrap();
            assert_eq!((back.key(), b), (f.key(), a));
            let t = add_root(&g).unwrap();
            assert_eq!(add_root_inv(&t).unwrap().key(), g.key());
        }
    }
}

#[test]
fn forest_cardinalities() {
    for n in 0..=2 {
        let r = oracle::verify_forest_counts(3, n, DEFAULT_LIMIT).unwrap();
        assert!(r.pass, "{}", r.to_json_line());
    }
}

#[test]
fn pushforward_d4() {
    for k in 0..=2 {
        let r = oracle::verify_pushforward(4, k, DEFAULT_LIMIT).unwrap();
        assert!(r.pass, "{}", r.to_json_line());
    }
}

#[test]
fn larger_bijection_suites() {
    for (d, n) in [(2, 6), (6, 1)] {
        let r = oracle::verify_enlarge_bijection(d, n, DEFAULT_LIMIT).unwrap();
        assert!(r.pass, "{}", r.to_json_line());
    }
}
