//! Algebraic invariants on generated inputs.

use mfpush::chern::jacobi_frame;
use mfpush::groebner::{GroebnerBasis, QuotientAlgebra};
use mfpush::mf::MF;
use mfpush::perturb::PerturbationType;
use mfpush::residue::{residue_trace, residue_transform, ResidueQuery};
use mfpush::testkit::{random_conjugate, random_poly, random_retract};
use mfpush::{Poly, Ring, RingRef, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn xy() -> RingRef {
    Ring::new(&["x", "y"]).unwrap()
}

/// Polynomials in x, y of degree ≤ 4 with up to five terms.
fn poly2() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    prop::collection::vec((0u32..=4, 0u32..=4, -5i64..=5), 0..=5)
}

fn build(r: &RingRef, terms: &[(u32, u32, i64)]) -> Poly {
    Poly::from_terms(r, terms.iter().map(|&(a, b, c)| (vec![a, b], Q::from_integer(c.into()))))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly2(), b in poly2(), c in poly2()) {
        let r = xy();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn printing_parses_back(a in poly2()) {
        let r = xy();
        let a = build(&r, &a);
        prop_assert_eq!(Poly::parse(&a.to_string(), &r).unwrap(), a);
    }

    #[test]
    fn leibniz_rule(a in poly2(), b in poly2(), v in 0usize..2) {
        let r = xy();
        let (a, b) = (build(&r, &a), build(&r, &b));
        prop_assert_eq!((&a * &b).partial(v), &(&a.partial(v) * &b) + &(&a * &b.partial(v)));
    }

    #[test]
    fn ideal_membership_and_lifts(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = xy();
        let gens: Vec<Poly> = (0..2).map(|_| random_poly(&mut g, &r, &[0, 1], 3, 3)).collect();
        let gb = GroebnerBasis::new(&gens).unwrap();
        let p = random_poly(&mut g, &r, &[0, 1], 4, 4);
        let nf = gb.normal_form(&p).unwrap();
        prop_assert!(gb.contains(&(&p - &nf)).unwrap());
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf);
        let member = &(&gens[0] * &random_poly(&mut g, &r, &[0, 1], 2, 2))
            + &(&gens[1] * &random_poly(&mut g, &r, &[0, 1], 2, 2));
        let lift = gb.ideal_lift(&member).unwrap();
        let back = lift.iter().zip(&gens).fold(Poly::zero(&r), |s, (c, g)| &s + &(c * g));
        prop_assert_eq!(back, member);
    }

    #[test]
    fn jacobi_multiplication_is_a_representation(a in poly2(), b in poly2()) {
        let r = xy();
        let w = Poly::parse("x^3 + y^3 + x*y^2", &r).unwrap();
        let j = QuotientAlgebra::from_generators(&[w.partial(0), w.partial(1)]).unwrap();
        let (a, b) = (build(&r, &a), build(&r, &b));
        let ab = j.coords(&(&a * &b)).unwrap();
        prop_assert_eq!(j.mult_operator(&a).unwrap().mul_vec(&j.coords(&b).unwrap()), ab.clone());
        prop_assert_eq!(j.mult_operator(&a).unwrap().mul(&j.mult_operator(&b).unwrap()),
            j.mult_operator(&b).unwrap().mul(&j.mult_operator(&a).unwrap()));
    }

    #[test]
    fn residues_are_linear_and_agree(s1 in poly2(), s2 in poly2(), c in -4i64..=4) {
        let r = xy();
        let w = Poly::parse("x^3 + y^3", &r).unwrap();
        let f = jacobi_frame(&w).unwrap();
        let (s1, s2) = (build(&r, &s1), build(&r, &s2));
        let dy = |s: &Poly| residue_trace(&ResidueQuery::dy(&f, s.clone()).unwrap()).unwrap();
        let combo = &s1 + &s2.scale(&Q::from_integer(c.into()));
        prop_assert_eq!(dy(&combo), &dy(&s1) + &dy(&s2).scale(&Q::from_integer(c.into())));
        let q = ResidueQuery::dy(&f, combo).unwrap();
        prop_assert_eq!(residue_trace(&q).unwrap(), residue_transform(&q).unwrap());
    }

    #[test]
    fn constructions_stay_factorisations(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = xy();
        let p = |s: &str| Poly::parse(s, &r).unwrap();
        let k = MF::koszul(&r, &[(p("x"), p("x^2")), (p("y"), p("y^2"))]).unwrap();
        let l = MF::koszul(&r, &[(p("x + y"), p("x^2 - x*y + y^2"))]).unwrap();
        let (a, b) = (random_conjugate(&mut g, &k), random_conjugate(&mut g, &l));
        for x in [a.tensor(&b).unwrap(), a.dual(), a.hom(&b).unwrap(), a.direct_sum(&b).unwrap(), a.shift()] {
            prop_assert!(x.check().is_ok());
        }
        prop_assert!(a.hom(&b).unwrap().potential().is_zero());
        prop_assert_eq!(a.dual().potential().clone(), -a.potential());
    }

    #[test]
    fn perturbed_retracts_are_retracts(seed in any::<u64>(), two in any::<bool>()) {
        let kind = if two { PerturbationType::Two } else { PerturbationType::One };
        let (d, mu) = random_retract(&mut rng(seed), kind);
        let out = d.perturb(&mu, kind, 16).unwrap();
        prop_assert!(out.verify().is_ok());
        if kind == PerturbationType::One {
            prop_assert_eq!(&out.p, &d.p);
        }
    }
}
