use ffmotive::afield::AField;
use ffmotive::algebra::apoly::PrimeOfA;
use ffmotive::algebra::{Field, FiniteField, RatFuncField};
use ffmotive::certify::*;
use ffmotive::drinfeld::DrinfeldModule;

fn rank_two(p: u64) -> DrinfeldModule<ffmotive::afield::RationalField> {
    // φ_t = θ + τ + τ^2: good reduction everywhere
    let fq = FiniteField::prime(p).unwrap();
    let af = AField::rational(&fq);
    let k = af.field().clone();
    DrinfeldModule::new(af.clone(), vec![af.theta().clone(), k.one(), k.one()]).unwrap()
}

fn prime(fq: &FiniteField, c: &[i64]) -> PrimeOfA {
    PrimeOfA::new(fq, c.iter().map(|&x| fq.from_int(x)).collect()).unwrap()
}

#[test]
fn rank_two_good_reduction_applies() {
    let f3 = FiniteField::prime(3).unwrap();
    let g = rank_two(3);
    let v = prime(&f3, &[0, 1]);
    let z = RatFuncField::new(f3.clone(), "t").gen();
    let cert = imai_check(&g, &v, &z, &v, 0).unwrap();
    assert_eq!(cert.verdict, APPLIES, "{cert:?}");
    assert_eq!(cert.weights, Some(vec!["1/2".to_string(), "1/2".to_string()]));
    assert!(cert.support.is_some());
}

#[test]
fn characteristic_two_fails_by_name() {
    let f2 = FiniteField::prime(2).unwrap();
    let g = rank_two(2);
    let v = prime(&f2, &[0, 1]);
    let z = RatFuncField::new(f2.clone(), "t").gen();
    let cert = imai_check(&g, &v, &z, &v, 0).unwrap();
    assert_eq!(cert.verdict, DOES_NOT_APPLY);
    assert_eq!(cert.failing, vec![H_P_NOT_2]);
}

#[test]
fn twist_pair_has_integral_weights() {
    let f3 = FiniteField::prime(3).unwrap();
    let r = twist_pair_example(&f3, 1, 2, 0).unwrap();
    assert_eq!(r.weights, vec!["1", "2"]);
    assert_eq!(r.certificate.verdict, DOES_NOT_APPLY);
    assert_eq!(r.certificate.failing, vec![H_NO_INTEGRAL_WEIGHTS]);
}

#[test]
fn rank_p_module_fails_rank() {
    let r = rank_p_example(3, 0, 512).unwrap();
    assert_eq!(r.rank, 3);
    assert_eq!(r.constant_term, "theta^3");
    assert_eq!(r.certificate.failing, vec![H_RANK_2]);
    assert_eq!(r.containment, Some(true));
}

#[test]
fn power_identity_for_three() {
    let r = verify_power_identity(3, 2, 2, 512).unwrap();
    assert_eq!(r.cases.len(), 1 + 3 + 9);
    assert!(r.all_hold, "{r:?}");
}

#[test]
fn twisted_supports_have_shifted_weights() {
    let f3 = FiniteField::prime(3).unwrap();
    let g = rank_two(3);
    let v = prime(&f3, &[1, 1]);
    let scan = ribet_twist_support(&g, &v, 3, 0).unwrap();
    for s in &scan {
        let w = format!("{}/2", 2 * s.n - 1);
        assert_eq!(s.weights, vec![w.clone(), w]);
        assert!(!s.support.primes.is_empty());
    }
}

#[test]
fn carlitz_support_is_one_linear_prime() {
    use ffmotive::motive::Motive;
    for q in [3u64, 5] {
        let fq = FiniteField::prime(q).unwrap();
        for c in fq.elements() {
            let af = AField::finite(&fq, &fq, c.clone()).unwrap();
            let s = prime_support(&Motive::carlitz(&af), 0).unwrap();
            // P(1) = 1 - (t - c)
            let expect = PrimeOfA::new(&fq, vec![fq.neg(&fq.add(&c, &fq.one())), fq.one()]).unwrap();
            let chr = PrimeOfA::new(&fq, vec![fq.neg(&c), fq.one()]).unwrap();
            assert!(s.contains(&expect) && s.contains(&chr));
            assert_eq!(s.primes.len(), 2);
        }
    }
}

#[test]
fn weight_zero_is_rejected() {
    use ffmotive::motive::Motive;
    let f3 = FiniteField::prime(3).unwrap();
    let k = f3.extension(2).unwrap();
    let af = AField::finite(&f3, &k, k.relative_generator()).unwrap();
    let err = prime_support(&Motive::unit(&af), 0).unwrap_err();
    assert!(err.to_string().contains("integral weight 0"));
}
