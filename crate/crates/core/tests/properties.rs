use std::f64::consts::PI;

use kron_core::sidon::{classify_brackets, quasi_independent_direct};
use kron_core::{
    alpha_n, angular_distance, best_point, chordal_of_angle, evaluate_arg, maximal_separated_set, quasi_independent,
    Character, CharacterSet, ChordalBracket, EngineConfig, GroupSpec, TargetMap,
};
use proptest::prelude::*;

fn group() -> impl Strategy<Value = GroupSpec> {
    (0usize..=2, prop::collection::vec(2u64..=6, 0..=3))
        .prop_filter("nontrivial", |(r, t)| *r + t.len() > 0)
        .prop_map(|(r, t)| GroupSpec::new(r, t).unwrap())
}

fn character(g: &GroupSpec) -> impl Strategy<Value = Character> {
    let g = g.clone();
    (
        prop::collection::vec(-20i64..=20, g.free_rank()),
        prop::collection::vec(0i64..1000, g.torsion_orders().len()),
    )
        .prop_map(move |(f, t)| g.character(f, t).unwrap())
}

fn point(g: &GroupSpec) -> impl Strategy<Value = kron_core::DualPoint> {
    let g = g.clone();
    (
        prop::collection::vec(0.0..(2.0 * PI), g.free_rank()),
        prop::collection::vec(0i64..1000, g.torsion_orders().len()),
    )
        .prop_map(move |(a, s)| g.dual_point(a, s).unwrap())
}

fn int_set(max_len: usize) -> impl Strategy<Value = CharacterSet> {
    prop::collection::btree_set(-10i64..=10, 1..=max_len)
        .prop_map(|s| CharacterSet::integers(&s.into_iter().collect::<Vec<_>>()).unwrap())
}

const TOL: f64 = 1e-6;

fn cfg() -> EngineConfig {
    EngineConfig::with_tol(TOL)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn additivity((g, a, b, x) in group().prop_flat_map(|g| (Just(g.clone()), character(&g), character(&g), point(&g)))) {
        let s = g.add(&a, &b).unwrap();
        let lhs = evaluate_arg(&g, &s, &x).unwrap();
        let rhs = evaluate_arg(&g, &a, &x).unwrap() + evaluate_arg(&g, &b, &x).unwrap();
        prop_assert!(angular_distance(lhs, rhs) < 1e-9);
        prop_assert_eq!(evaluate_arg(&g, &g.identity(), &x).unwrap(), 0.0);
    }

    #[test]
    fn torsion_phases_are_exact((g, a, x) in (prop::collection::vec(2u64..=6, 1..=3))
        .prop_map(|t| GroupSpec::new(0, t).unwrap())
        .prop_flat_map(|g| (Just(g.clone()), character(&g), point(&g))))
    {
        let p = g.phase(&a, &x).unwrap();
        prop_assert_eq!(p.free, 0.0);
        prop_assert_eq!(g.torsion_lcm() % p.exact.den(), 0);
    }

    #[test]
    fn metric_axioms(a in 0.0..(2.0 * PI), b in 0.0..(2.0 * PI), c in 0.0..(2.0 * PI)) {
        let d = angular_distance;
        prop_assert!(d(a, b) <= PI + 1e-15);
        prop_assert!((d(a, b) - d(b, a)).abs() < 1e-15);
        prop_assert!(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if hi <= PI && hi - lo > 1e-9 {
            prop_assert!(chordal_of_angle(lo).unwrap() < chordal_of_angle(hi).unwrap());
        }
    }

    #[test]
    fn translation_invariance(set in int_set(3), steps in prop::collection::vec(0u64..8, 3), y in 0.0..(2.0 * PI)) {
        let phi = TargetMap::roots(8, &steps[..set.len()]).unwrap();
        let y = set.group().dual_point(vec![y], vec![]).unwrap();
        let a = best_point(&set, &phi, &cfg()).unwrap().bracket;
        let b = best_point(&set, &phi.shifted(&set, &y).unwrap(), &cfg()).unwrap().bracket;
        prop_assert!(a.lower <= b.upper + 1e-9 && b.lower <= a.upper + 1e-9, "{:?} vs {:?}", a, b);
    }

    #[test]
    fn negation_invariance(set in int_set(3), steps in prop::collection::vec(0u64..6, 3)) {
        let phi = TargetMap::roots(6, &steps[..set.len()]).unwrap();
        let a = best_point(&set, &phi, &cfg()).unwrap().bracket;
        let b = best_point(&set, &phi.negated(), &cfg()).unwrap().bracket;
        prop_assert!(a.lower <= b.upper + 1e-9 && b.lower <= a.upper + 1e-9);

        let neg = set.negated().unwrap();
        for n in [3, 4] {
            let x = alpha_n(&set, n, &cfg()).unwrap().alpha;
            let z = alpha_n(&neg, n, &cfg()).unwrap().alpha;
            prop_assert!(x.lower <= z.upper + 2.0 * TOL && z.lower <= x.upper + 2.0 * TOL);
        }
    }

    #[test]
    fn ladder_and_range(set in int_set(3)) {
        let mut prev: Option<kron_core::ErrorBracket> = None;
        for n in [2u64, 4, 8] {
            let r = alpha_n(&set, n, &cfg()).unwrap();
            prop_assert!(r.certified);
            prop_assert!(0.0 <= r.alpha.lower && r.alpha.upper <= PI);
            prop_assert!(0.0 <= r.kappa.lower && r.kappa.upper <= 2.0);
            if let Some(p) = prev {
                let half = PI / (n / 2) as f64;
                prop_assert!(p.lower <= r.alpha.upper + 2.0 * TOL);
                prop_assert!(r.alpha.lower <= p.upper + half + 2.0 * TOL);
            }
            prev = Some(r.alpha);
        }
    }

    #[test]
    fn subset_monotonicity(set in int_set(4), drop in 0usize..4) {
        prop_assume!(set.len() >= 2);
        let keep: Vec<usize> = (0..set.len()).filter(|&i| i != drop % set.len()).collect();
        let sub = set.subset(&keep).unwrap();
        for n in [3, 4] {
            let f = alpha_n(&sub, n, &cfg()).unwrap().alpha;
            let e = alpha_n(&set, n, &cfg()).unwrap().alpha;
            prop_assert!(f.lower <= e.upper + 2.0 * TOL, "n={}: {:?} vs {:?}", n, f, e);
        }
    }

    #[test]
    fn identity_forces_pi(set in int_set(3)) {
        let mut ks: Vec<i64> = set.elements().iter().map(|c| c.free_coords()[0]).collect();
        if !ks.contains(&0) {
            ks.push(0);
        }
        let r = alpha_n(&CharacterSet::integers(&ks).unwrap(), 2, &cfg()).unwrap();
        prop_assert_eq!(r.alpha.exact, Some(kron_core::Turns::HALF));
    }

    #[test]
    fn quasi_meet_in_middle_agrees(ks in prop::collection::btree_set(-30i64..=30, 1..=12)) {
        let set = CharacterSet::integers(&ks.into_iter().collect::<Vec<_>>()).unwrap();
        let a = quasi_independent(&set, 1 << 20).unwrap();
        let b = quasi_independent_direct(&set, 1 << 20).unwrap();
        prop_assert_eq!(a.independent, b.independent);
        if let Some(w) = a.witness {
            let coeffs: Vec<i64> = w.iter().map(|&c| c as i64).collect();
            prop_assert!(set.group().linear_combination(set.elements(), &coeffs).unwrap().is_identity());
            prop_assert!(w.iter().any(|&c| c != 0));
        }
    }

    #[test]
    fn quasi_agrees_with_torsion((g, els) in (prop::collection::vec(2u64..=5, 1..=3))
        .prop_map(|t| GroupSpec::new(1, t).unwrap())
        .prop_flat_map(|g| (Just(g.clone()), prop::collection::vec(character(&g), 1..=8))))
    {
        let set = CharacterSet::new(g, els.into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect()).unwrap();
        let a = quasi_independent(&set, 1 << 20).unwrap();
        let b = quasi_independent_direct(&set, 1 << 20).unwrap();
        prop_assert_eq!(a.independent, b.independent);
    }

    #[test]
    fn nets_are_separated_and_maximal(
        (g, els) in (prop::collection::vec(2u64..=4, 1..=3))
            .prop_map(|t| GroupSpec::new(0, t).unwrap())
            .prop_flat_map(|g| (Just(g.clone()), prop::collection::vec(character(&g), 1..=3))),
        eps in 0.1f64..2.0,
    ) {
        let els: Vec<_> = els.into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let set = CharacterSet::new(g, els).unwrap();
        let s = maximal_separated_set(&set, eps, 1, 1 << 20).unwrap();
        let again = maximal_separated_set(&set, eps, 1, 1 << 20).unwrap();
        prop_assert_eq!(&s, &again);
        for (i, x) in s.points.iter().enumerate() {
            for y in &s.points[i + 1..] {
                prop_assert!(kron_core::sidon::sup_chordal_distance(&set, x, y).unwrap() >= eps - 1e-12);
            }
        }
        prop_assert!(s.verify_maximality());
    }

    #[test]
    fn nets_on_torus_grid(k in 1i64..=4, grid in 4u64..=24, eps in 0.2f64..1.9) {
        let set = CharacterSet::integers(&[k]).unwrap();
        let s = maximal_separated_set(&set, eps, grid, 1 << 20).unwrap();
        prop_assert!(s.verify_separation());
        prop_assert!(s.verify_maximality());
    }

    #[test]
    fn shrinking_upper_bounds_only_adds_flags(
        lo in 0.0f64..2.0, hi in 0.0f64..2.0, cut in 0.0f64..1.0,
        n in 2u64..=6, a in 0.0f64..2.0, b in 0.0f64..2.0,
    ) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let wide = classify_brackets(Some(ChordalBracket { lower: lo, upper: hi }), &[(n, ChordalBracket { lower: a, upper: b })]);
        let hi2 = lo + (hi - lo) * cut;
        let b2 = a + (b - a) * cut;
        let narrow = classify_brackets(Some(ChordalBracket { lower: lo, upper: hi2 }), &[(n, ChordalBracket { lower: a, upper: b2 })]);
        prop_assert!(!wide.i0 || narrow.i0);
        prop_assert!(!wide.sidon_by_kappa || narrow.sidon_by_kappa);
        prop_assert!(!wide.sidon_by_kappa_n || narrow.sidon_by_kappa_n);
    }
}
