mod common;

use std::f64::consts::PI;

use kron_core::{alpha, alpha_n, best_point, CharacterSet, EngineConfig, GroupSpec, TargetMap};

fn ints(ks: &[i64]) -> CharacterSet {
    CharacterSet::integers(ks).unwrap()
}

#[test]
fn breakpoint_minimum_basics() {
    assert!(common::inner_min(&[1], &[2.0]).abs() < 1e-12);
    assert!((common::inner_min(&[0], &[PI]) - PI).abs() < 1e-12);
    assert!((common::inner_min(&[1, 2], &[0.0, PI]) - PI / 3.0).abs() < 1e-12);
}

#[test]
fn pairs_match_dense_grid() {
    let cfg = EngineConfig::with_tol(1e-3);
    for (pair, expected) in [([1, 2], PI / 3.0), ([1, -1], PI / 2.0), ([1, 3], PI / 4.0), ([2, 3], PI / 5.0)] {
        let dense = common::alpha_dense_pair(pair, 500);
        assert!(dense.lower <= expected + 1e-12 && expected <= dense.upper, "{pair:?}: oracle vs {expected}");
        assert!((dense.lower - expected).abs() < 1e-4, "{pair:?}: refined {} vs {expected}", dense.lower);
        let r = alpha(&ints(&pair), &cfg).unwrap();
        assert!(r.certified);
        assert!((r.alpha.lower - dense.lower).abs() <= 1e-3, "{pair:?}: {:?} vs {}", r.alpha, dense.lower);
        assert!(r.alpha.lower <= dense.upper + 1e-12 && dense.lower <= r.alpha.upper + 1e-12);
    }
}

#[test]
fn alpha_n_matches_enumeration_on_integers() {
    let cfg = EngineConfig::with_tol(1e-6);
    for ks in [&[1, 2][..], &[1, -1], &[0, 3], &[1, 4, 7], &[2, 3, 5], &[-3, 1, 6], &[1, 2, 3]] {
        let set = ints(ks);
        for n in [2, 3, 4, 5] {
            let want = common::alpha_n(&set, n);
            let r = alpha_n(&set, n, &cfg).unwrap();
            assert!(r.certified);
            assert!(r.alpha.lower - 1e-9 <= want && want <= r.alpha.upper + 1e-9, "{ks:?} n={n}: {:?} vs {want}", r.alpha);
        }
    }
}

#[test]
fn alpha_n_matches_enumeration_with_torsion() {
    let cfg = EngineConfig::with_tol(1e-6);
    let g = GroupSpec::new(1, vec![2, 3]).unwrap();
    let mk = |f: i64, t: [i64; 2]| g.character(vec![f], t.to_vec()).unwrap();
    let sets = [
        vec![mk(1, [1, 0]), mk(2, [0, 1])],
        vec![mk(1, [1, 1]), mk(-1, [1, 2]), mk(0, [0, 1])],
        vec![mk(0, [1, 0]), mk(0, [0, 1]), mk(0, [1, 1])],
    ];
    for els in sets {
        let set = CharacterSet::new(g.clone(), els).unwrap();
        for n in [2, 3, 4] {
            let want = common::alpha_n(&set, n);
            let r = alpha_n(&set, n, &cfg).unwrap();
            assert!(r.alpha.lower - 1e-9 <= want && want <= r.alpha.upper + 1e-9, "{set} n={n}: {:?} vs {want}", r.alpha);
        }
    }
}

#[test]
fn best_point_matches_breakpoints() {
    let cfg = EngineConfig::with_tol(1e-7);
    let set = ints(&[1, 3, 4]);
    for phi in [[0.3, 2.0, 5.1], [1.0, 1.0, 1.0], [PI, 0.0, PI / 2.0]] {
        let want = common::best_error(&set, &phi);
        let b = best_point(&set, &TargetMap::angles(&phi), &cfg).unwrap().bracket;
        assert!(b.lower - 1e-9 <= want && want <= b.upper + 1e-9, "{phi:?}: {b:?} vs {want}");
    }
}

#[test]
fn mixed_example_matches_grid() {
    for n in [1u64, 3, 5] {
        let (lo, hi) = common::mixed_grid(n, 200_000);
        let b = kron_core::gallery::mixed_sign_error(n, 1e-9).unwrap();
        assert!(b.lower <= hi + 1e-12 && lo <= b.upper + 1e-12, "N={n}: {b:?} vs [{lo}, {hi}]");
        let closed = PI * n as f64 / (n + 1) as f64;
        assert!((hi - closed).abs() < 1e-3);
    }
}
