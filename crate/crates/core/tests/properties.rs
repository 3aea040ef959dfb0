use chabauty_core::classify::{classify_integral, classify_numeral};
use chabauty_core::duality::{dual, dual_defined};
use chabauty_core::grammar::{normalize, parse, render};
use chabauty_core::lab::matrix::{frac, q};
use chabauty_core::lab::{
    abelian_groups_up_to, annihilator, in_u, limit_threshold, phi_r, ClosedSubgroupRep, ConcreteGroup, Membership,
    NeighborhoodSpec, Radius, SubgroupSequence, Threshold, Q,
};
use chabauty_core::random::random_expr;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn expr_from(seed: u64) -> chabauty_core::grammar::GroupExpr {
    random_expr(&mut ChaCha8Rng::seed_from_u64(seed), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let n = normalize(&expr_from(seed));
        prop_assert_eq!(normalize(&n), n);
    }

    #[test]
    fn render_parses_back(seed in any::<u64>()) {
        let n = normalize(&expr_from(seed));
        let text = render(&n);
        prop_assert_eq!(normalize(&parse(&text).unwrap()), n, "{}", text);
    }

    #[test]
    fn numeral_implies_integral(seed in any::<u64>()) {
        let g = expr_from(seed);
        prop_assert!(!classify_numeral(&g).answer || classify_integral(&g).answer);
    }

    #[test]
    fn dual_twice_is_identity(seed in any::<u64>()) {
        let g = expr_from(seed);
        if dual_defined(&g) {
            let dd = dual(&dual(&g).unwrap()).unwrap();
            prop_assert_eq!(normalize(&dd), normalize(&g));
        } else {
            prop_assert!(dual(&g).is_err());
        }
    }
}

fn small_rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=7).prop_map(|(a, b)| frac(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn neighborhoods_contain_their_center(a in small_rational(), b in small_rational(), c in small_rational()) {
        // a discrete subgroup of R x T and a line through it
        let g = ConcreteGroup::new(1, 1, 0, vec![]).unwrap();
        prop_assume!(a != q(0));
        let h = ClosedSubgroupRep::generated_by(&g, vec![vec![a.clone(), b.clone()]]).unwrap();
        let nb = NeighborhoodSpec::ball(q(2), frac(1, 3)).unwrap();
        prop_assert_eq!(in_u(&h, &h, &nb, &g).unwrap(), Membership::Yes);
        let line = ClosedSubgroupRep::new(vec![vec![q(1), c]], vec![]);
        let line = chabauty_core::lab::canonicalize(&line, &g).unwrap();
        prop_assert_eq!(in_u(&line, &line, &nb, &g).unwrap(), Membership::Yes);
    }

    #[test]
    fn finite_annihilator_is_an_involution(
        pick in 0usize..1000,
        coeffs in proptest::collection::vec(0u64..60, 1..3),
    ) {
        let groups = abelian_groups_up_to(36);
        let moduli = groups[pick % groups.len()].clone();
        let g = ConcreteGroup::finite(moduli.clone()).unwrap();
        let gens: Vec<Vec<Q>> = coeffs
            .iter()
            .map(|&c| moduli.iter().enumerate().map(|(i, &m)| q(((c * (i as u64 + 1)) % m) as i64)).collect())
            .collect();
        let h = ClosedSubgroupRep::generated_by(&g, gens).unwrap();
        let perp = annihilator(&h, &g).unwrap();
        prop_assert_eq!(annihilator(&perp, &g.dual()).unwrap(), h.clone());
        let (oh, op) = (h.finite_order(&g).unwrap(), perp.finite_order(&g.dual()).unwrap());
        prop_assert_eq!(oh * op, g.finite_order());
    }
}

fn ball(rho: i64, eps: Q) -> NeighborhoodSpec {
    NeighborhoodSpec::ball(q(rho), eps).unwrap()
}

#[test]
fn phi_is_continuous_on_a_grid() {
    // Points k/r of (1/r)Z in [-ρ, ρ] move by at most ρ|r' - r|/min(r, r')
    // when r changes to r'; half of ε keeps them inside the margin.
    let rho = 3;
    let eps = frac(1, 5);
    let nb = ball(rho, eps.clone());
    let g = ConcreteGroup::reals();
    let grid: Vec<Q> = (1..=24).map(|k| frac(k, 4)).collect();
    for r in &grid {
        let h = phi_r(&Radius::Finite(r.clone())).unwrap();
        for s in &grid {
            let shift = q(rho) * (r - s).abs() / r.min(s);
            let l = phi_r(&Radius::Finite(s.clone())).unwrap();
            if shift <= &eps / q(2) {
                assert_eq!(in_u(&l, &h, &nb, &g).unwrap(), Membership::Yes, "r = {r}, r' = {s}");
            }
        }
    }
    // gaps 1/r ≤ ε/2 put (1/r)Z next to R
    let whole = phi_r(&Radius::Infinity).unwrap();
    for r in [10, 12, 20] {
        let l = phi_r(&Radius::Finite(q(r))).unwrap();
        assert_eq!(in_u(&l, &whole, &nb, &g).unwrap(), Membership::Yes);
    }
    // (1/r)Z misses the ball once 1/r > ρ + ε
    let trivial = phi_r(&Radius::Finite(q(0))).unwrap();
    for r in [frac(1, 4), frac(1, 5)] {
        let l = phi_r(&Radius::Finite(r)).unwrap();
        assert_eq!(in_u(&l, &trivial, &nb, &g).unwrap(), Membership::Yes);
    }
}

#[test]
fn sandwiched_lattices() {
    let g = ConcreteGroup::reals();
    for n in 1..=12 {
        let coarse = ClosedSubgroupRep::generated_by(&g, vec![vec![frac(2, n)]]).unwrap();
        let fine = ClosedSubgroupRep::generated_by(&g, vec![vec![frac(1, n)]]).unwrap();
        assert!(coarse.is_subgroup_of(&fine, &g));
        assert!(!fine.is_subgroup_of(&coarse, &g));
    }
    // (1/2n)Z ⊇ (1/n)Z, so once (1/n)Z is close to R, so is (1/2n)Z
    let nb = ball(4, frac(1, 6));
    let whole = ClosedSubgroupRep::whole(&g);
    let inv = SubgroupSequence::inv_lattice();
    let doubled = inv.subsequence(2, 0);
    let a = limit_threshold(&inv, &whole, &nb, 40).unwrap();
    let b = limit_threshold(&doubled, &whole, &nb, 40).unwrap();
    match (a.threshold, b.threshold) {
        (Threshold::FoundAt(x), Threshold::FoundAt(y)) => assert!(y <= x),
        other => panic!("{other:?}"),
    }
    // A_n = (2/n)Z ⊆ B_n = (1/n)Z; both reach R, and the limits are nested
    let evens = SubgroupSequence::custom(
        "(2/n)Z",
        g.clone(),
        std::sync::Arc::new(|n| (vec![], vec![vec![frac(2, n as i64)]])),
    );
    let la = limit_threshold(&evens, &whole, &nb, 40).unwrap();
    assert!(la.stable && a.stable);
    assert!(la.target.is_subgroup_of(&a.target, &g));
}

#[test]
fn limits_are_unique() {
    let g = ConcreteGroup::reals();
    let nb = ball(5, frac(1, 10));
    let whole = ClosedSubgroupRep::whole(&g);
    let trivial = ClosedSubgroupRep::trivial(&g);
    let inv = SubgroupSequence::inv_lattice();
    assert!(limit_threshold(&inv, &whole, &nb, 40).unwrap().stable);
    assert_eq!(limit_threshold(&inv, &trivial, &nb, 40).unwrap().threshold, Threshold::NotFound);
    let lat = SubgroupSequence::lattice();
    assert!(limit_threshold(&lat, &trivial, &nb, 40).unwrap().stable);
    assert_eq!(limit_threshold(&lat, &whole, &nb, 40).unwrap().threshold, Threshold::NotFound);
}
