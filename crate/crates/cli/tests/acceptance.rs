//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p ffmotive-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffmotive::afield::{AField, RationalField};
use ffmotive::algebra::apoly::{divisor, primes_of_degree, PrimeOfA};
use ffmotive::algebra::factor::factor;
use ffmotive::algebra::field::Field;
use ffmotive::algebra::finite::{FfElem, FiniteField};
use ffmotive::algebra::matrix::{self, charpoly, Matrix};
use ffmotive::algebra::newton::newton_polygon_at_infinity;
use ffmotive::algebra::poly::{Poly, PolyRing};
use ffmotive::algebra::ratfunc::{RatFunc, RatFuncField};
use ffmotive::certify::{
    has_fixed_torsion, imai_check, prime_support, rank_p_example, ribet_twist_support, twist_pair_example,
    verify_power_identity, DOES_NOT_APPLY, H_NO_INTEGRAL_WEIGHTS, H_P_NOT_2, H_RANK_2,
};
use ffmotive::drinfeld::DrinfeldModule;
use ffmotive::motive::{CharPoly, Motive};
use ffmotive::shtuka::{localize_motive, Admissibility, IsocrystalHP, LocalBase, LocalShtuka};
use ffmotive::weights::{divisibility_condition, weight_of_tate_twist, weights_of};

const CAP: usize = 512;
const PRECISION: usize = 16;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_elem(k: &FiniteField, rng: &mut ChaCha8Rng) -> FfElem {
    let n = k.order().unwrap();
    k.element_from_index(rng.gen_range(0..n))
}

fn random_nonzero(k: &FiniteField, rng: &mut ChaCha8Rng) -> FfElem {
    let n = k.order().unwrap();
    k.element_from_index(rng.gen_range(1..n))
}

/// Random rank-`r` modules over `F_{q^d}`; for `q = 2` only `d = 3` with
/// θ outside `F_2`, so that three primes of degree ≤ 2 avoid the characteristic.
fn random_instances(seed: u64) -> Vec<DrinfeldModule<FiniteField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let shapes = [(3u64, 1usize), (3, 2), (3, 3), (2, 3)];
    for &(q, d) in &shapes {
        let fq = FiniteField::prime(q).unwrap();
        let k = if d == 1 { fq.clone() } else { fq.extension(d).unwrap() };
        for r in 1..=2usize {
            for _ in 0..3 {
                let theta = loop {
                    let x = random_elem(&k, &mut rng);
                    if q != 2 || k.restrict_to(&fq, &x).is_none() {
                        break x;
                    }
                };
                let mut phi = vec![theta.clone()];
                for _ in 1..r {
                    phi.push(random_elem(&k, &mut rng));
                }
                phi.push(random_nonzero(&k, &mut rng));
                let af = AField::finite(&fq, &k, theta).unwrap();
                out.push(DrinfeldModule::new(af, phi).unwrap());
            }
        }
    }
    out
}

fn coprime_primes(g: &DrinfeldModule<FiniteField>) -> Vec<PrimeOfA> {
    let fq = g.afield().fq();
    let chr = g.afield().characteristic().unwrap();
    (1..=2)
        .flat_map(|d| primes_of_degree(fq, d).unwrap())
        .filter(|l| l != chr)
        .collect()
}

fn criterion_charpoly_oracle() -> Outcome {
    let start = Instant::now();
    let instances = random_instances(11);
    let mut pairs = 0;
    for g in &instances {
        let fq = g.afield().fq().clone();
        let m = Motive::of_drinfeld(g);
        let p = m.frobenius_charpoly().map_err(err)?;
        // dual convention: P(X; M^∨) is the charpoly of the inverse Frobenius
        let dual = m
            .dual()
            .frobenius_charpoly()
            .and_then(|c| c.reciprocal())
            .map_err(err)?;
        let primes = coprime_primes(g);
        ensure(primes.len() >= 3, || "fewer than three primes".into())?;
        for l in primes {
            let fl = l.residue_field(&fq, "u").map_err(err)?;
            let frob = Matrix::from_rows(g.frobenius_on_torsion(&l, &fl, CAP).map_err(err)?);
            let direct = charpoly(&fl, &frob);
            let reduced = p.reduce_mod(&l, &fl).map_err(err)?;
            ensure(direct == reduced, || {
                format!(
                    "phi_t = {} at l = {}: torsion and motive disagree",
                    g.format_phi_t(),
                    l.format(&fq)
                )
            })?;
            ensure(dual.reduce_mod(&l, &fl).map_err(err)? == direct, || {
                format!(
                    "phi_t = {} at l = {}: dual convention fails",
                    g.format_phi_t(),
                    l.format(&fq)
                )
            })?;
            pairs += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} modules, {pairs} (module, l) pairs, {:.1?}",
        instances.len(),
        start.elapsed()
    ))
}

fn criterion_weight_law() -> Outcome {
    let start = Instant::now();
    let instances = random_instances(11);
    for g in &instances {
        let r = g.rank() as i64;
        let w = weights_of(&Motive::of_drinfeld(g).frobenius_charpoly().map_err(err)?).map_err(err)?;
        let expected = vec![Ratio::new(1, r); r as usize];
        ensure(w.weights == expected, || {
            format!("phi_t = {}: weights {:?}", g.format_phi_t(), w.format())
        })?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} modules, {:.1?}", instances.len(), start.elapsed()))
}

fn criterion_twist_weight() -> Outcome {
    let start = Instant::now();
    // (q, p, z, n, [k : F_p], hand-computed S, expected weight)
    let cases: &[(u64, &str, &str, i64, usize, i64, (i64, i64))] = &[
        (3, "t", "t", 1, 1, 0, (-1, 1)),
        (3, "t", "t", 2, 1, 0, (-2, 1)),
        (3, "t", "t", 0, 1, 0, (0, 1)),
        (3, "t", "t*(t-1)", 1, 1, 1, (-2, 1)),
        (3, "t", "t*(t-1)", 1, 2, 1, (-2, 1)),
        (3, "t", "t/(t+1)", 2, 1, -1, (0, 1)),
        (3, "t+1", "(t+1)*(t^2+1)", 1, 1, 2, (-3, 1)),
        (3, "t^2+1", "t^2+1", -1, 1, 0, (1, 1)),
        (2, "t^2+t+1", "(t^2+t+1)*(t+1)", 1, 1, 1, (-3, 2)),
        (2, "t^2+t+1", "(t^2+t+1)*t*(t+1)", 1, 1, 2, (-2, 1)),
        (2, "t^2+t+1", "(t^2+t+1)/t", 2, 1, -1, (-1, 1)),
    ];
    for &(q, p, z, n, k, s, (wn, wd)) in cases {
        let fq = FiniteField::prime(q).unwrap();
        let qf = RatFuncField::new(fq.clone(), "t");
        let p = ffmotive::input::parse_prime(&fq, p).map_err(err)?;
        let z = ffmotive::input::parse_q(&fq, z).map_err(err)?;
        let report = divisibility_condition(&qf, &z, &p, 0).map_err(err)?;
        let label = format!("p = {}, z = {}", p.format(&fq), qf.format_elem(&z));
        ensure(report.sum == s, || format!("{label}: S = {}, expected {s}", report.sum))?;
        ensure(report.holds == (s % p.degree() as i64 == 0), || {
            format!("{label}: wrong verdict")
        })?;
        let closed = weight_of_tate_twist(&qf, n, &p, &z, k, 0).map_err(err)?;
        // the Newton polygon of X - z^{-n k}
        let alpha = qf.pow_signed(&z, -n * k as i64).unwrap();
        let cp = CharPoly {
            q_field: qf.clone(),
            coeffs: vec![qf.neg(&alpha), qf.one()],
            d: k * p.degree(),
        };
        let polygon = weights_of(&cp).map_err(err)?.weights;
        let expected = Ratio::new(wn, wd);
        ensure(closed == expected && polygon == vec![expected], || {
            format!("{label}, n = {n}: closed {closed}, polygon {polygon:?}, expected {expected}")
        })?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} triples, {:.1?}", cases.len(), start.elapsed()))
}

fn criterion_carlitz_anchor() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for q in [2u64, 3, 5] {
        let fq = FiniteField::prime(q).unwrap();
        let carlitz = Motive::carlitz(&AField::rational(&fq));
        for c in fq.elements() {
            let p = PrimeOfA::new(&fq, vec![fq.neg(&c), fq.one()]).map_err(err)?;
            let local = localize_motive(&carlitz, &p, PRECISION).map_err(err)?;
            let one = LocalShtuka::one_twist(local.base(), -1, PRECISION).map_err(err)?;
            ensure(local.equivalent_up_to_unit(&one).map_err(err)?, || {
                format!("q = {q}, c = {}: not equivalent to 1(-1)", fq.format_elem(&c))
            })?;
            checks += 1;
        }
    }
    let f3 = FiniteField::prime(3).unwrap();
    let base = LocalBase::at_point(&f3, &f3.zero());
    for n in -5..=5i64 {
        let hp = LocalShtuka::one_twist(&base, n, PRECISION)
            .map_err(err)?
            .hodge_pink()
            .map_err(err)?;
        ensure((hp.t_n, hp.t_h, hp.mu.clone()) == (-n, -n, vec![n]), || {
            format!("1({n}): got ({}, {}, {:?})", hp.t_n, hp.t_h, hp.mu)
        })?;
        checks += 1;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{checks} checks, {:.1?}", start.elapsed()))
}

fn criterion_weak_admissibility() -> Outcome {
    let f3 = FiniteField::prime(3).unwrap();
    let base = LocalBase::at_point(&f3, &f3.one());
    let mut checks = 0;
    for m in -3..=3i64 {
        for n in -3..=3i64 {
            let a = LocalShtuka::one_twist(&base, m, PRECISION).map_err(err)?;
            let b = LocalShtuka::one_twist(&base, n, PRECISION).map_err(err)?;
            let hp = a.direct_sum(&b).map_err(err)?.hodge_pink().map_err(err)?;
            ensure(hp.weakly_admissible == Admissibility::Admissible, || {
                format!("1({m}) + 1({n}): {}", hp.weakly_admissible.label())
            })?;
            checks += 1;
        }
    }
    // τ_D = diag(z^-2, 1) with q_D = w p_D: the line spanned by e_1 has
    // Newton slope -2 but Hodge slope -1.
    let k = f3.clone();
    let kz = RatFuncField::new(k, "z");
    let lw = RatFuncField::new(base.field.clone(), "w");
    let tau = Matrix::from_rows(vec![
        vec![kz.pow_signed(&kz.gen(), -2).unwrap(), kz.zero()],
        vec![kz.zero(), kz.one()],
    ]);
    let q_basis = matrix::scale(&lw, &lw.gen(), &matrix::identity(&lw, 2));
    let iso = IsocrystalHP::new(base, tau, q_basis).map_err(err)?;
    let verdict = iso.weakly_admissible().map_err(err)?;
    ensure(verdict == Admissibility::NotAdmissible, || {
        format!("violating rank 2: {}", verdict.label())
    })?;
    Ok(format!("{checks} sums admissible, violating rank 2 rejected"))
}

fn criterion_power_identity() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for p in [3u64, 5] {
        let r = verify_power_identity(p, 2, 2, 4096).map_err(err)?;
        for c in &r.cases {
            ensure(c.symbolic, || format!("p = {p}, a = {}: symbolic identity fails", c.a))?;
            for s in &c.specializations {
                ensure(s.bijection, || {
                    format!("p = {p}, a = {}, d = {}: no bijection", c.a, s.d)
                })?;
            }
        }
        ensure(r.all_hold, || format!("p = {p}: report disagrees"))?;
        cases += r.cases.len();
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{cases} polynomials a, d <= 2, {:.1?}", start.elapsed()))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ffmotive"))
}

fn criterion_counterexamples() -> Outcome {
    let f3 = FiniteField::prime(3).unwrap();
    let r = twist_pair_example(&f3, 1, 2, 0).map_err(err)?;
    ensure(r.weights == ["1", "2"], || format!("weights {:?}", r.weights))?;
    ensure(r.certificate.verdict == DOES_NOT_APPLY, || {
        r.certificate.verdict.to_string()
    })?;
    ensure(r.certificate.failing == [H_NO_INTEGRAL_WEIGHTS], || {
        format!("failing {:?}", r.certificate.failing)
    })?;

    let out = bin()
        .args(["examples", "4.5", "--m", "1", "--n", "2"])
        .output()
        .map_err(err)?;
    ensure(out.status.code() == Some(0), || {
        format!("cli exit {:?}", out.status.code())
    })?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    ensure(
        v["weights"] == serde_json::json!(["1", "2"]) && v["certificate"]["verdict"] == DOES_NOT_APPLY,
        || "cli output for the twist-pair recipe".into(),
    )?;

    for p in [3u64, 5] {
        let r = rank_p_example(p, 0, 4096).map_err(err)?;
        ensure(r.rank == p as usize, || format!("p = {p}: rank {}", r.rank))?;
        ensure(r.certificate.verdict == DOES_NOT_APPLY, || {
            r.certificate.verdict.to_string()
        })?;
        ensure(r.certificate.failing == [H_RANK_2], || {
            format!("failing {:?}", r.certificate.failing)
        })?;
    }

    // p = 2: every route names the hypothesis
    let f2 = FiniteField::prime(2).unwrap();
    let r = twist_pair_example(&f2, 1, 2, 0).map_err(err)?;
    ensure(r.certificate.failing.contains(&H_P_NOT_2), || {
        "twist pair over F_2".into()
    })?;
    let r = rank_p_example(2, 0, 4096).map_err(err)?;
    ensure(r.certificate.failing == [H_P_NOT_2], || {
        format!("rank-p module at p = 2: {:?}", r.certificate.failing)
    })?;
    let af = AField::rational(&f2);
    let k = af.field().clone();
    let g = DrinfeldModule::new(af.clone(), vec![af.theta().clone(), k.one(), k.one()]).map_err(err)?;
    let t = PrimeOfA::new(&f2, vec![f2.zero(), f2.one()]).map_err(err)?;
    let z = RatFuncField::new(f2.clone(), "t").gen();
    let c = imai_check(&g, &t, &z, &t, 0).map_err(err)?;
    ensure(c.failing == [H_P_NOT_2], || format!("rank 2 over F_2: {:?}", c.failing))?;
    Ok("twist pair and rank-p module rejected on the named hypothesis; p = 2 rejected".into())
}

/// Rank-2 modules over `F_q(θ)` with polynomial coefficients, each paired
/// with a place of good reduction.
fn good_reduction_instances(seed: u64) -> Vec<(DrinfeldModule<RationalField>, PrimeOfA)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (q, count) in [(3u64, 8usize), (2, 4)] {
        let fq = FiniteField::prime(q).unwrap();
        let af = AField::rational(&fq);
        let k = af.field().clone();
        let ring = PolyRing::new(fq.clone());
        let places: Vec<PrimeOfA> = (1..=2).flat_map(|d| primes_of_degree(&fq, d).unwrap()).collect();
        while out
            .iter()
            .filter(|(g, _): &&(DrinfeldModule<RationalField>, PrimeOfA)| g.afield().q() == q as u128)
            .count()
            < count
        {
            let poly = |rng: &mut ChaCha8Rng, nonzero: bool| -> Poly<FfElem> {
                loop {
                    let f = ring.normalized(vec![random_elem(&fq, rng), random_elem(&fq, rng)]);
                    if !nonzero || !f.is_empty() {
                        return f;
                    }
                }
            };
            let g1 = poly(&mut rng, false);
            let g2 = poly(&mut rng, true);
            let v = places[rng.gen_range(0..places.len())].clone();
            if ring.rem(&g2, v.poly()).is_empty() {
                continue;
            }
            let phi = vec![af.theta().clone(), k.from_poly(g1), k.from_poly(g2)];
            out.push((DrinfeldModule::new(af.clone(), phi).unwrap(), v));
        }
    }
    out
}

fn criterion_support_soundness() -> Outcome {
    let start = Instant::now();
    let instances = good_reduction_instances(23);
    let mut outside = 0;
    for (g, v) in &instances {
        let gv = g.reduce_at(v).map_err(err)?;
        let support = prime_support(&Motive::of_drinfeld(&gv), 0).map_err(err)?;
        for l in coprime_primes(&gv) {
            if support.contains(&l) {
                continue;
            }
            outside += 1;
            ensure(!has_fixed_torsion(&gv, &l, CAP).map_err(err)?, || {
                format!(
                    "phi_t = {} at v = {}: fixed torsion at l outside the support",
                    g.format_phi_t(),
                    v.format(g.afield().fq())
                )
            })?;
        }
    }
    for (g, v) in instances.iter().take(4) {
        let scan = ribet_twist_support(g, v, 3, 0).map_err(err)?;
        for s in &scan {
            let w = Ratio::new(2 * s.n - 1, 2).to_string();
            ensure(s.weights == [w.clone(), w.clone()], || {
                format!("n' = {}: weights {:?}", s.n, s.weights)
            })?;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "{} instances, {outside} primes outside the support, {:.1?}",
        instances.len(),
        start.elapsed()
    ))
}

fn random_poly(fq: &FiniteField, ring: &PolyRing<FiniteField>, deg: usize, rng: &mut ChaCha8Rng) -> Poly<FfElem> {
    loop {
        let f = ring.normalized((0..=deg).map(|_| random_elem(fq, rng)).collect());
        if !f.is_empty() {
            return f;
        }
    }
}

fn criterion_substrate() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100u64 {
        let fq = FiniteField::prime([2, 3, 5][i as usize % 3]).unwrap();
        let ring = PolyRing::new(fq.clone());
        let qf = RatFuncField::new(fq.clone(), "t");
        let (dn, dd) = (rng.gen_range(0..7), rng.gen_range(0..7));
        let num = random_poly(&fq, &ring, dn, &mut rng);
        let den = random_poly(&fq, &ring, dd, &mut rng);
        let f = qf.from_parts(num.clone(), den).unwrap();
        let d = divisor(&qf, &f, i).map_err(err)?;
        ensure(d.degree() == 0, || {
            format!("product formula fails for {}", qf.format_elem(&f))
        })?;
        // round trip
        let fac = factor(&fq, &num, i).map_err(err)?;
        let back = fac.factors.iter().fold(ring.constant(fac.unit.clone()), |acc, (g, e)| {
            ring.mul(&acc, &ring.pow(g, *e as u64))
        });
        ensure(back == num, || {
            format!("factorization of {} does not multiply back", ring.format(&num, "t"))
        })?;
    }
    // planted roots α_i with known v_∞
    for trial in 0..30u64 {
        let fq = FiniteField::prime([2, 3][trial as usize % 2]).unwrap();
        let ring = PolyRing::new(fq.clone());
        let qf = RatFuncField::new(fq.clone(), "t");
        let xring = PolyRing::new(qf.clone());
        let r = rng.gen_range(1..5);
        let mut p: Poly<RatFunc<FfElem>> = xring.one();
        let mut planted = Vec::new();
        for _ in 0..r {
            let (a, b) = (rng.gen_range(0..4), rng.gen_range(0..4));
            let alpha = qf
                .from_parts(
                    random_poly(&fq, &ring, a, &mut rng),
                    random_poly(&fq, &ring, b, &mut rng),
                )
                .unwrap();
            planted.push(Ratio::from(qf.inf_valuation(&alpha).unwrap()));
            p = xring.mul(&p, &[qf.neg(&alpha), qf.one()]);
        }
        planted.sort();
        let np = newton_polygon_at_infinity(&qf, &p).map_err(err)?;
        ensure(np.root_valuations() == planted, || {
            format!("planted {planted:?}, got {:?}", np.root_valuations())
        })?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "100 elements of Q, 30 planted polygons, {:.1?}",
        start.elapsed()
    ))
}

const RANK2: &str = "kind = \"drinfeld\"\nfq = \"GF(3)\"\nphi_t = [\"theta\", \"1\", \"1\"]\n";
const RANK2_FINITE: &str =
    "kind = \"drinfeld\"\nfq = \"GF(3)\"\nfield = \"GF(3^2)\"\nphi_t = [\"theta\", \"1\", \"1\"]\n";
const CARLITZ: &str = "kind = \"carlitz\"\nfq = \"GF(3)\"\n";

fn criterion_determinism() -> Outcome {
    let runs: Vec<Vec<&str>> = vec![
        vec!["factor", "t^6 - 1"],
        vec!["ord", "t^2/(t+1)", "--prime", "t+1"],
        vec!["weights", RANK2, "--place", "theta"],
        vec!["check-condition", "--z", "t*(t-1)", "--p", "t", "--n", "1"],
        vec!["charpoly", CARLITZ, "--field", "GF(3^2)"],
        vec!["charpoly", RANK2_FINITE, "--dual"],
        vec!["torsion", RANK2_FINITE, "--prime", "t^2+t+2"],
        vec!["good-reduction", RANK2, "--place", "theta+1"],
        vec!["shtuka-hp", CARLITZ, "--prime", "t", "--twist", "-2"],
        vec!["tower-check", "--q", "3", "--levels", "2"],
        vec!["support", RANK2_FINITE],
        vec!["check-imai", RANK2, "--place", "theta", "--z", "t*(t-1)", "--p", "t"],
        vec!["ribet-scan", RANK2, "--place", "theta"],
        vec!["examples", "4.5", "--m", "1", "--n", "2"],
        vec!["examples", "4.6", "--p", "3"],
        vec!["examples", "4.8", "--p", "3"],
        vec!["--format", "table", "examples", "4.8", "--p", "3"],
    ];
    for args in &runs {
        let go = |jobs: &str| bin().args(["--seed", "7", "--jobs", jobs]).args(args).output();
        let a = go("1").map_err(err)?;
        let b = go("4").map_err(err)?;
        let name = args.iter().find(|s| !s.starts_with('-')).unwrap();
        ensure(a.status.success(), || {
            format!(
                "{name}: exit {:?}: {}",
                a.status.code(),
                String::from_utf8_lossy(&a.stderr)
            )
        })?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || {
            format!("{name}: outputs differ")
        })?;
    }
    Ok(format!(
        "{} invocations byte-identical across runs and thread counts",
        runs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("charpoly oracle equivalence", criterion_charpoly_oracle),
        ("rank-r weight law", criterion_weight_law),
        ("twist weight closed form vs polygon", criterion_twist_weight),
        ("carlitz localization anchor", criterion_carlitz_anchor),
        ("weak admissibility", criterion_weak_admissibility),
        ("p-power identity and kernel bijections", criterion_power_identity),
        ("counterexample verdicts", criterion_counterexamples),
        ("prime-support soundness", criterion_support_soundness),
        ("algebra substrate", criterion_substrate),
        ("cli determinism", criterion_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[{:>2}] PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[{:>2}] FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
