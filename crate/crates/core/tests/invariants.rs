use feqlab::families::{family_case_ii, family_case_iii, family_case_iv, SolutionPair};
use feqlab::feq::residual_wilson;
use feqlab::morphisms::{
    compatible_characters, enumerate_characters, enumerate_involutions, enumerate_multiplicative, AdditiveMap,
    Character, Involution, MorphismLaw,
};
use feqlab::stability::{perturb, BallCandidate, Growth, PerturbationConfig};
use feqlab::{BallDomain, Domain, FiniteGroup, GroupFunction, GroupKind, C, IDENTITY};
use proptest::prelude::*;

const GROUPS: &[&str] = &["Z2", "Z3", "Z4", "Z5", "Z6", "Z2xZ2", "Z2xZ4", "S3", "D4", "Q8"];

fn group() -> impl Strategy<Value = FiniteGroup> {
    prop::sample::select(GROUPS).prop_map(|n| FiniteGroup::catalog(n).unwrap())
}

fn complex() -> impl Strategy<Value = C> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C::new(re, im))
}

/// A group with one of its involutive automorphisms and a compatible
/// character, chosen by index.
fn inputs(g: &FiniteGroup, i: usize, j: usize) -> (Involution, Character) {
    let sigmas = enumerate_involutions(g, MorphismLaw::Automorphism).unwrap();
    let s = sigmas[i % sigmas.len()].clone();
    let chis = compatible_characters(g, &s, &enumerate_characters(g));
    let chi = chis[j % chis.len()].clone();
    (s, chi)
}

fn residual(g: &FiniteGroup, s: &Involution, chi: &Character, p: &SolutionPair) -> f64 {
    residual_wilson(g, s, chi.values(), &p.f, &p.g).unwrap().sup
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(g in group(), a in 0usize..8, b in 0usize..8, c in 0usize..8) {
        let n = g.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
        prop_assert_eq!(g.op(IDENTITY, a), a);
        prop_assert_eq!(g.op(a, g.inverse(a)), IDENTITY);
    }

    #[test]
    fn characters_are_multiplicative(g in group(), k in 0usize..16, a in 0usize..8, b in 0usize..8) {
        let chars = enumerate_characters(&g);
        let chi = &chars[k % chars.len()];
        let (a, b) = (a % g.order(), b % g.order());
        prop_assert!((chi.at(g.op(a, b)) - chi.at(a) * chi.at(b)).norm() < 1e-12);
    }

    #[test]
    fn involutions_are_involutive_morphisms(g in group(), i in 0usize..32, a in 0usize..8, b in 0usize..8) {
        let (s, _) = inputs(&g, i, 0);
        let (a, b) = (a % g.order(), b % g.order());
        prop_assert_eq!(s.apply(s.apply(a)), a);
        prop_assert_eq!(s.apply(g.op(a, b)), g.op(s.apply(a), s.apply(b)));
    }

    /// Off the sample grid: arbitrary `f(e)` and `c`.
    #[test]
    fn family_members_solve(
        g in group(), i in 0usize..32, j in 0usize..32, k in 0usize..16, fe in complex(), c in complex(),
    ) {
        let (s, chi) = inputs(&g, i, j);
        let ms = enumerate_multiplicative(&g);
        let m = &ms[k % ms.len()];
        let tol = 1e-12 * (1.0 + fe.norm() + c.norm());
        // constructors verify and reject; an Err here is a precondition
        if let Ok(p) = family_case_ii(&g, m, &chi, &s, fe) {
            prop_assert!(residual(&g, &s, &chi, &p) <= tol);
        }
        if let Ok(p) = family_case_iii(&g, m, &chi, &s, c, fe) {
            prop_assert!(residual(&g, &s, &chi, &p) <= tol);
        }
        if let Ok(p) = family_case_iv(&g, m, &chi, &s, &AdditiveMap::zero(), fe) {
            prop_assert!(residual(&g, &s, &chi, &p) <= tol);
        }
    }

    #[test]
    fn perturbation_is_seeded_and_bounded(g in group(), k in 0usize..16, eps in 1e-4..1.0f64, seed in any::<u64>()) {
        let s = Involution::identity(&g);
        let chi = Character::trivial(&g);
        let ms = enumerate_multiplicative(&g);
        let base = family_case_ii(&g, &ms[k % ms.len()], &chi, &s, C::new(1.0, 0.0)).unwrap();
        let config = PerturbationConfig { epsilon: eps, seed, ..Default::default() };
        let a = perturb(&g, &s, &chi, &base, &config).unwrap();
        let b = perturb(&g, &s, &chi, &base, &config).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.measured_delta <= a.triangle_bound + 1e-12);
        prop_assert!(a.pair.f.distance(&base.f) <= eps * (1.0 + 1e-12));
    }

    #[test]
    fn lattice_ball_products_match_coordinates(r in 1usize..5, x in 0usize..64, y in 0usize..64) {
        let ball = BallDomain::new(GroupKind::IntegerLattice(2), r).unwrap();
        let (x, y) = (x % ball.size(), y % ball.size());
        let (a, b) = (ball.normal_form(x), ball.normal_form(y));
        let sum = [a[0] + b[0], a[1] + b[1]];
        prop_assert_eq!(ball.mul(x, y), ball.find(&sum));
        prop_assert_eq!(ball.mul(x, ball.inv(x)), Some(IDENTITY));
    }

    #[test]
    fn heisenberg_ball_is_associative_where_defined(x in 0usize..200, y in 0usize..200, z in 0usize..200) {
        let ball = BallDomain::new(GroupKind::DiscreteHeisenberg, 3).unwrap();
        let n = ball.size();
        let (x, y, z) = (x % n, y % n, z % n);
        let left = ball.mul(x, y).and_then(|xy| ball.mul(xy, z));
        let right = ball.mul(y, z).and_then(|yz| ball.mul(x, yz));
        if let (Some(l), Some(r)) = (left, right) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn noise_depends_only_on_seed_and_element(seed in any::<u64>(), r in 1usize..4) {
        let cand = BallCandidate::Noise { seed, amplitude: 1.0, center: C::new(0.0, 0.0) };
        let small = BallDomain::new(GroupKind::FreeGroup(2), r).unwrap();
        let big = BallDomain::new(GroupKind::FreeGroup(2), r + 1).unwrap();
        let (fs, fb) = (cand.build(&small).unwrap(), cand.build(&big).unwrap());
        for x in 0..small.size() {
            let y = big.find(small.normal_form(x)).unwrap();
            prop_assert_eq!(fs[x], fb[y]);
            prop_assert!(fs[x].norm() <= 1.0);
        }
    }

    #[test]
    fn geometric_sups_grow_and_flat_sups_do_not(start in 1e-3..1e3f64, q in 1.5..4.0f64, wobble in prop::collection::vec(1.0..1.25f64, 3)) {
        let growing: Vec<f64> = (0..4).map(|k| start * q.powi(k)).collect();
        prop_assert_eq!(Growth::classify(&growing), Growth::Growing);
        let mut flat = vec![start];
        for w in &wobble {
            flat.push(flat.last().unwrap() * w);
        }
        prop_assert_eq!(Growth::classify(&flat), Growth::Bounded);
    }

    #[test]
    fn function_text_round_trips(values in prop::collection::vec(complex(), 1..12)) {
        let f = GroupFunction::new(values).unwrap();
        prop_assert_eq!(GroupFunction::from_text(&f.to_text()).unwrap(), f);
    }
}
