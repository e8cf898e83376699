use ffmotive::afield::AField;
use ffmotive::algebra::apoly::PrimeOfA;
use ffmotive::algebra::{Field, FiniteField};
use ffmotive::motive::Motive;
use ffmotive::shtuka::{localize_finite, localize_motive, Admissibility, LocalBase, LocalShtuka};

#[test]
fn carlitz_powers_localize_to_negative_twists() {
    let f3 = FiniteField::prime(3).unwrap();
    let af = AField::rational(&f3);
    for c in 0..3 {
        let cc = f3.from_int(c);
        let p = PrimeOfA::new(&f3, vec![f3.neg(&cc), f3.one()]).unwrap();
        let base = LocalBase::at_point(&f3, &cc);
        for n in 0..=4 {
            let m = Motive::carlitz(&af).tensor_power(n);
            let s = localize_motive(&m, &p, 16).unwrap();
            let anchor = LocalShtuka::one_twist(&base, -n, 16).unwrap();
            assert!(s.equivalent_up_to_unit(&anchor).unwrap(), "n = {n}, c = {c}");
            let hp = s.hodge_pink().unwrap();
            assert_eq!((hp.t_n, hp.t_h, hp.mu), (n, n, vec![-n]));
        }
    }
}

#[test]
fn dual_carlitz_needs_a_pole_exponent() {
    let f2 = FiniteField::prime(2).unwrap();
    let af = AField::rational(&f2);
    let p = PrimeOfA::new(&f2, vec![f2.zero(), f2.one()]).unwrap();
    let s = localize_motive(&Motive::carlitz(&af).dual(), &p, 8).unwrap();
    assert_eq!(s.h(), 1);
    assert_eq!(s.hodge_pink().unwrap().mu, vec![1]);
}

#[test]
fn sums_of_twists_are_admissible() {
    let f3 = FiniteField::prime(3).unwrap();
    let base = LocalBase::at_point(&f3, &f3.zero());
    for m in -3..=3 {
        for n in -3..=3 {
            let a = LocalShtuka::one_twist(&base, m, 16).unwrap();
            let b = LocalShtuka::one_twist(&base, n, 16).unwrap();
            let hp = a.direct_sum(&b).unwrap().hodge_pink().unwrap();
            assert_eq!(hp.mu, vec![m.max(n), m.min(n)]);
            assert_eq!(hp.t_h, -(m + n));
            assert_eq!(hp.weakly_admissible, Admissibility::Admissible, "m = {m}, n = {n}");
        }
    }
}

#[test]
fn finite_carlitz_over_degree_two_prime() {
    let f3 = FiniteField::prime(3).unwrap();
    let k = f3.extension(2).unwrap();
    let af = AField::finite(&f3, &k, k.relative_generator()).unwrap();
    let s = localize_finite(&Motive::carlitz(&af), 8).unwrap();
    // (t - θ)(t - θ^3) is the uniformizer itself
    let hp = s.hodge_pink().unwrap();
    assert_eq!((hp.t_n, hp.t_h, hp.mu), (1, 1, vec![-1]));
    assert_eq!(hp.weakly_admissible, Admissibility::Admissible);
}
