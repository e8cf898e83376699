use proptest::prelude::*;

use ffmotive::algebra::apoly::divisor;
use ffmotive::algebra::factor::{factor, is_irreducible};
use ffmotive::algebra::field::Field;
use ffmotive::algebra::finite::{FfElem, FiniteField};
use ffmotive::algebra::newton::newton_polygon_at_infinity;
use ffmotive::algebra::poly::PolyRing;
use ffmotive::algebra::ratfunc::RatFuncField;
use ffmotive::twisted::TwistedRing;
use num_rational::Ratio;

fn field(which: usize) -> FiniteField {
    match which {
        0 => FiniteField::prime(5).unwrap(),
        1 => FiniteField::gf(2, 3).unwrap(),
        _ => FiniteField::gf(3, 2).unwrap(),
    }
}

fn elem(k: &FiniteField, i: u128) -> FfElem {
    k.element_from_index(i % k.order().unwrap())
}

fn poly(k: &FiniteField, idx: &[u128]) -> Vec<FfElem> {
    PolyRing::new(k.clone()).normalized(idx.iter().map(|&i| elem(k, i)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(w in 0usize..3, a in any::<u128>(), b in any::<u128>(), c in any::<u128>()) {
        let k = field(w);
        let (a, b, c) = (elem(&k, a), elem(&k, b), elem(&k, c));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.add(&a, &k.neg(&a)), k.zero());
        if let Some(inv) = k.inv(&a) {
            prop_assert!(k.is_one(&k.mul(&a, &inv)));
        } else {
            prop_assert!(k.is_zero(&a));
        }
        // Frobenius is additive
        let p = k.p() as u128;
        prop_assert_eq!(k.pow(&k.add(&a, &b), p), k.add(&k.pow(&a, p), &k.pow(&b, p)));
    }

    #[test]
    fn factor_round_trip(w in 0usize..3, idx in prop::collection::vec(any::<u128>(), 1..9), seed in any::<u64>()) {
        let k = field(w);
        let ring = PolyRing::new(k.clone());
        let f = poly(&k, &idx);
        prop_assume!(!f.is_empty());
        let fac = factor(&k, &f, seed).unwrap();
        let back = fac
            .factors
            .iter()
            .fold(ring.constant(fac.unit.clone()), |acc, (g, e)| ring.mul(&acc, &ring.pow(g, *e as u64)));
        prop_assert_eq!(&back, &f);
        for (g, _) in &fac.factors {
            prop_assert!(is_irreducible(&k, g).unwrap());
            prop_assert!(k.is_one(g.last().unwrap()));
        }
        // canonical order: the seed only changes the route
        prop_assert_eq!(factor(&k, &f, seed.wrapping_add(1)).unwrap(), fac);
    }

    #[test]
    fn product_formula(w in 0usize..3, n in prop::collection::vec(any::<u128>(), 1..7), d in prop::collection::vec(any::<u128>(), 1..7)) {
        let k = field(w);
        let q = RatFuncField::new(k.clone(), "t");
        let (num, den) = (poly(&k, &n), poly(&k, &d));
        prop_assume!(!num.is_empty() && !den.is_empty());
        let f = q.from_parts(num, den).unwrap();
        prop_assert_eq!(divisor(&q, &f, 0).unwrap().degree(), 0);
    }

    #[test]
    fn newton_recovers_planted_valuations(
        w in 0usize..3,
        roots in prop::collection::vec((prop::collection::vec(any::<u128>(), 1..4), prop::collection::vec(any::<u128>(), 1..4)), 1..5),
    ) {
        let k = field(w);
        let q = RatFuncField::new(k.clone(), "t");
        let xring = PolyRing::new(q.clone());
        let mut p = xring.one();
        let mut planted = Vec::new();
        for (n, d) in &roots {
            let (num, den) = (poly(&k, n), poly(&k, d));
            prop_assume!(!num.is_empty() && !den.is_empty());
            let alpha = q.from_parts(num, den).unwrap();
            planted.push(Ratio::from(q.inf_valuation(&alpha).unwrap()));
            p = xring.mul(&p, &[q.neg(&alpha), q.one()]);
        }
        planted.sort();
        prop_assert_eq!(newton_polygon_at_infinity(&q, &p).unwrap().root_valuations(), planted);
    }

    #[test]
    fn twisted_multiplication(
        w in 0usize..3,
        f in prop::collection::vec(any::<u128>(), 1..4),
        g in prop::collection::vec(any::<u128>(), 1..4),
        h in prop::collection::vec(any::<u128>(), 1..4),
        x in any::<u128>(),
    ) {
        let k = field(w);
        let q = k.p() as u128;
        let tw = TwistedRing::new(k.clone(), q);
        let (f, g, h) = (poly(&k, &f), poly(&k, &g), poly(&k, &h));
        prop_assert_eq!(tw.mul(&tw.mul(&f, &g), &h), tw.mul(&f, &tw.mul(&g, &h)));
        prop_assert_eq!(tw.mul(&f, &tw.add(&g, &h)), tw.add(&tw.mul(&f, &g), &tw.mul(&f, &h)));
        // multiplication is composition of F_q-linear maps
        let x = elem(&k, x);
        prop_assert_eq!(tw.evaluate(&tw.mul(&f, &g), &x), tw.evaluate(&f, &tw.evaluate(&g, &x)));
        // τ c = c^q τ
        let c = elem(&k, 7);
        prop_assert_eq!(tw.mul(&tw.tau(), &tw.constant(c.clone())), tw.scale_left(&k.pow(&c, q), &tw.tau()));
    }
}
