//! Hypothesis checklists for the finiteness criterion, prime supports of
//! `P(1; M)`, twisted supports, and the counterexample families.
//!
//! A certificate only records which hypotheses hold and the finite prime
//! bound; it never asserts the infinite-level conclusion.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::afield::{AField, RationalField};
use crate::algebra::apoly::{factor_apoly, PrimeOfA};
use crate::algebra::factor::canonical_cmp;
use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::matrix::{self, Matrix};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::drinfeld::{DrinfeldModule, ReductionVerdict};
use crate::error::{Error, Result};
use crate::motive::Motive;
use crate::twisted::TwistedRing;
use crate::weights::{divisibility_condition, has_no_integral_weights, weights_of, ConditionReport, WeightVector};

pub const APPLIES: &str = "APPLIES";
pub const DOES_NOT_APPLY: &str = "DOES-NOT-APPLY";

pub const H_P_NOT_2: &str = "p != 2";
pub const H_RANK_2: &str = "rank = 2";
pub const H_GOOD_REDUCTION: &str = "good reduction";
pub const H_CONDITION: &str = "condition 1.1";
pub const H_NO_INTEGRAL_WEIGHTS: &str = "no integral weights";

pub const CERTIFICATE_NOTE: &str = "certifies the hypotheses and the finite prime-support bound only; \
the finiteness of torsion over the infinite extension is not claimed by this output";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportEntry {
    pub prime: String,
    pub degree: usize,
    /// `ord_l P(1; M)`; zero only for the A-characteristic.
    pub ord: i64,
    pub characteristic: bool,
    #[serde(skip)]
    pub poly: Vec<FfElem>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeSupport {
    pub p_at_one: String,
    pub primes: Vec<SupportEntry>,
}

impl PrimeSupport {
    pub fn contains(&self, l: &PrimeOfA) -> bool {
        self.primes.iter().any(|e| e.poly == l.poly())
    }
}

/// Primes dividing `P(1; M)` together with the A-characteristic of the base.
pub fn prime_support(m: &Motive<FiniteField>, seed: u64) -> Result<PrimeSupport> {
    let cp = m.frobenius_charpoly()?;
    let w = weights_of(&cp)?;
    let unit_root = || Error::input("unit root present: integral weight 0");
    if w.weights.iter().any(|x| *x.numer() == 0) {
        return Err(unit_root());
    }
    let q = &cp.q_field;
    let p1 = cp.at_one();
    if q.is_zero(&p1) {
        return Err(unit_root());
    }
    let fq = q.base().clone();
    let mut primes: Vec<SupportEntry> = Vec::new();
    for (part, sign) in [(&p1.num, 1i64), (&p1.den, -1)] {
        let (_, fac) = factor_apoly(&fq, part, seed)?;
        for (l, e) in fac {
            primes.push(SupportEntry {
                prime: l.format(&fq),
                degree: l.degree(),
                ord: sign * e as i64,
                characteristic: false,
                poly: l.poly().to_vec(),
            });
        }
    }
    let chr = m.afield().characteristic().expect("finite A-field");
    match primes.iter_mut().find(|e| e.poly == chr.poly()) {
        Some(e) => e.characteristic = true,
        None => primes.push(SupportEntry {
            prime: chr.format(&fq),
            degree: chr.degree(),
            ord: 0,
            characteristic: true,
            poly: chr.poly().to_vec(),
        }),
    }
    primes.sort_by(|a, b| canonical_cmp(&fq, &a.poly, &b.poly));
    Ok(PrimeSupport {
        p_at_one: q.format_elem(&p1),
        primes,
    })
}

/// Whether the Frobenius on `G[l]` fixes a nonzero vector.
pub fn has_fixed_torsion(g: &DrinfeldModule<FiniteField>, l: &PrimeOfA, cap: usize) -> Result<bool> {
    let fl = l.residue_field(g.afield().fq(), "u")?;
    let mut f = Matrix::from_rows(g.frobenius_on_torsion(l, &fl, cap)?);
    for i in 0..f.rows() {
        let v = fl.sub(f.get(i, i), &fl.one());
        f.set(i, i, v);
    }
    Ok(fl.is_zero(&matrix::det(&fl, &f)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImaiCertificate {
    pub schema_note: &'static str,
    pub verdict: &'static str,
    pub failing: Vec<&'static str>,
    pub hypotheses: Vec<HypothesisCheck>,
    pub rank: usize,
    pub reduction: String,
    pub weights: Option<Vec<String>>,
    pub condition: Option<ConditionReport>,
    pub support: Option<PrimeSupport>,
}

fn check(name: &'static str, holds: bool, detail: impl Into<String>) -> HypothesisCheck {
    HypothesisCheck {
        name,
        holds,
        detail: detail.into(),
    }
}

fn q_field(fq: &FiniteField) -> RatFuncField<FiniteField> {
    RatFuncField::new(fq.clone(), "t")
}

/// The shared tail of both checks: a reduction (if good), the hypotheses
/// that do not depend on it, and the assembled verdict.
fn assemble(
    fq: &FiniteField,
    rank: usize,
    reduction: (bool, String, String),
    reduced: Option<Motive<FiniteField>>,
    z: &RatFunc<FfElem>,
    p: &PrimeOfA,
    seed: u64,
) -> Result<ImaiCertificate> {
    let mut hyps = vec![
        check(H_P_NOT_2, fq.p() != 2, format!("p = {}", fq.p())),
        check(H_RANK_2, rank == 2, format!("rank {rank}")),
        check(H_GOOD_REDUCTION, reduction.0, reduction.2),
    ];
    let condition = match divisibility_condition(&q_field(fq), z, p, seed) {
        Ok(c) => {
            hyps.push(check(
                H_CONDITION,
                c.holds,
                format!("S = {}, deg p = {}", c.sum, p.degree()),
            ));
            Some(c)
        }
        Err(Error::Input(msg)) => {
            hyps.push(check(H_CONDITION, false, msg));
            None
        }
        Err(e) => return Err(e),
    };
    let weights: Option<WeightVector> = match &reduced {
        Some(m) => Some(weights_of(&m.frobenius_charpoly()?)?),
        None => None,
    };
    match &weights {
        Some(w) => hyps.push(check(
            H_NO_INTEGRAL_WEIGHTS,
            has_no_integral_weights(w),
            format!("weights {{{}}}", w.format().join(", ")),
        )),
        None => hyps.push(check(
            H_NO_INTEGRAL_WEIGHTS,
            false,
            "weights need a place of good reduction",
        )),
    }
    let failing: Vec<&'static str> = hyps.iter().filter(|h| !h.holds).map(|h| h.name).collect();
    let support = match (&reduced, failing.is_empty()) {
        (Some(m), true) => Some(prime_support(m, seed)?),
        _ => None,
    };
    Ok(ImaiCertificate {
        schema_note: CERTIFICATE_NOTE,
        verdict: if failing.is_empty() { APPLIES } else { DOES_NOT_APPLY },
        failing,
        hypotheses: hyps,
        rank,
        reduction: reduction.1,
        weights: weights.map(|w| w.format()),
        condition,
        support,
    })
}

/// Checklist for a Drinfeld module over `F_q(θ)` reduced at `v`, with the
/// uniformizer `z` at `p`.
pub fn imai_check(
    g: &DrinfeldModule<RationalField>,
    v: &PrimeOfA,
    z: &RatFunc<FfElem>,
    p: &PrimeOfA,
    seed: u64,
) -> Result<ImaiCertificate> {
    let fq = g.afield().fq().clone();
    let verdict = g.good_reduction(v)?;
    let detail = match &verdict {
        ReductionVerdict::Good { e } => format!("good at {} after scaling by v^{e}", v.format(&fq)),
        ReductionVerdict::PotentiallyGoodOnly { e } => format!(
            "only potentially good at {}: needs ramification index {}",
            v.format(&fq),
            e.denom()
        ),
        ReductionVerdict::NotPotentiallyGood { witness, .. } => format!(
            "not potentially good at {}: coefficient of τ^{witness} stays non-integral",
            v.format(&fq)
        ),
    };
    let reduced = if verdict.is_good() {
        Some(Motive::of_drinfeld(&g.reduce_at(v)?))
    } else {
        None
    };
    assemble(
        &fq,
        g.rank(),
        (verdict.is_good(), verdict.label().to_string(), detail),
        reduced,
        z,
        p,
        seed,
    )
}

/// Checklist for a motive over `F_q(θ)`; good reduction means the
/// coefficients reduce at `v` and keep `det τ = c (t - θ)^n`.
pub fn imai_check_motive(
    m: &Motive<RationalField>,
    v: &PrimeOfA,
    z: &RatFunc<FfElem>,
    p: &PrimeOfA,
    seed: u64,
) -> Result<ImaiCertificate> {
    let fq = m.afield().fq().clone();
    let (reduced, reduction) = match m.reduce_at(v) {
        Ok(r) => (
            Some(r),
            (true, "GOOD".to_string(), format!("reduces at {}", v.format(&fq))),
        ),
        Err(Error::Input(msg)) => (None, (false, "BAD".to_string(), msg)),
        Err(e) => return Err(e),
    };
    assemble(&fq, m.rank(), reduction, reduced, z, p, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistSupport {
    pub n: i64,
    pub weights: Vec<String>,
    pub support: PrimeSupport,
}

/// Supports of `M(G)^∨ ⊗ M(C)^{⊗n}` at the reduction of `G` at `v`, for
/// `n = 0..=n_max`, in increasing `n`.
pub fn ribet_twist_support(
    g: &DrinfeldModule<RationalField>,
    v: &PrimeOfA,
    n_max: i64,
    seed: u64,
) -> Result<Vec<TwistSupport>> {
    if n_max < 0 {
        return Err(Error::input("n_max must be non-negative"));
    }
    let gv = g.reduce_at(v)?;
    let dual = Motive::of_drinfeld(&gv).dual();
    let carlitz = Motive::carlitz(gv.afield());
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let m = dual.tensor(&carlitz.tensor_power(n))?;
            let w = weights_of(&m.frobenius_charpoly()?)?;
            if w.weights.iter().any(|x| *x.numer() == 0) {
                return Err(Error::input(format!("twist n' = {n} has weight 0")));
            }
            Ok(TwistSupport {
                n,
                weights: w.format(),
                support: prime_support(&m, seed)?,
            })
        })
        .collect()
}

/// `M(C)^{⊗m} ⊕ M(C)^{⊗n}` over `F_q(θ)`.
pub fn build_twist_pair(fq: &FiniteField, m: i64, n: i64) -> Motive<RationalField> {
    let af = AField::rational(fq);
    let c = Motive::carlitz(&af);
    c.tensor_power(m).direct_sum(&c.tensor_power(n)).unwrap()
}

/// The constant field of the p-power identity family: `q = p`.
fn prime_constants(p: u64) -> Result<FiniteField> {
    FiniteField::prime(p)
}

/// `θ̃ + τ` over `F_p(s)` with `θ = s`, and the Carlitz module over the
/// same field with `θ = s^p`.
fn power_identity_pair(p: u64) -> Result<(DrinfeldModule<RationalField>, DrinfeldModule<RationalField>)> {
    let fp = prime_constants(p)?;
    let tilde = AField::rational(&fp);
    let s = tilde.field().gen();
    let theta = tilde.field().pow(&s, p as u128);
    let base = AField::rational_with_theta(&fp, "theta", theta)?;
    Ok((DrinfeldModule::carlitz(tilde), DrinfeldModule::carlitz(base)))
}

/// `G̃` with `φ_t = (θ̃ + τ)^p`, an A-module of rank `p` over `F_p(θ̃)` with
/// `θ = θ̃^p`.
pub fn build_rank_p_module(p: u64) -> Result<DrinfeldModule<RationalField>> {
    let (tilde, carlitz) = power_identity_pair(p)?;
    let ring = tilde.ring();
    let phi = ring.pow(tilde.phi_t(), p as u32);
    DrinfeldModule::new(carlitz.afield().clone(), phi)
}

/// Every monic `a` of degree exactly `n` over `fq`.
pub fn monic_of_degree(fq: &FiniteField, n: usize) -> Vec<Vec<FfElem>> {
    let q = fq.order().unwrap();
    (0..q.pow(n as u32))
        .map(|mut idx| {
            let mut a: Vec<FfElem> = (0..n)
                .map(|_| {
                    let c = fq.element_from_index(idx % q);
                    idx /= q;
                    c
                })
                .collect();
            a.push(fq.one());
            a
        })
        .collect()
}

/// All elements of `{x ∈ l : f(x) = 0}`.
fn kernel_set(ring: &TwistedRing<FiniteField>, f: &[FfElem], l: &FiniteField) -> Result<HashSet<FfElem>> {
    let basis = ring.linear_map(f, l)?.kernel();
    let p = l.p() as u128;
    let k = basis.len() as u32;
    Ok((0..p.pow(k))
        .map(|mut idx| {
            let mut acc = vec![0u32; l.degree()];
            for v in &basis {
                let c = (idx % p) as u64;
                idx /= p;
                for (a, b) in acc.iter_mut().zip(v) {
                    *a = ((*a as u64 + c * *b as u64) % p as u64) as u32;
                }
            }
            l.elem(acc)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecializationCheck {
    /// `[F_{p^d} : F_p]` of the specialization `θ̃ -> generator`.
    pub d: usize,
    /// `[L : F_p]` of the field holding both kernels.
    pub field_degree: usize,
    pub kernel_size: usize,
    /// `x -> x^p` maps the first kernel onto the second, as sets.
    pub bijection: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerIdentityCase {
    pub a: String,
    /// `φ̃_a` with coefficients raised to the `p`-th power equals `Φ_a`.
    pub symbolic: bool,
    pub specializations: Vec<SpecializationCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerIdentityReport {
    pub p: u64,
    pub cases: Vec<PowerIdentityCase>,
    pub all_hold: bool,
}

/// Kernel comparison for `x -> x^p` from `ker φ̃_a` to `ker Φ_a`, both
/// Carlitz-type over `F_{p^d}` with `θ̃ -> g`, `θ -> g^p`.
fn specialized_bijection(
    p: u64,
    d: usize,
    tilde_phi_t: impl Fn(&FiniteField, &FfElem) -> Vec<FfElem>,
    a_tilde: &[FfElem],
    a_target: &[FfElem],
    cap: usize,
) -> Result<SpecializationCheck> {
    let fp = prime_constants(p)?;
    let k = fp.extension(d)?;
    let g = k.primitive_element()?;
    let gp = k.pow(&g, p as u128);
    let phi = tilde_phi_t(&k, &g);
    let tilde = DrinfeldModule::new(AField::finite(&fp, &k, phi[0].clone())?, phi)?;
    let target = DrinfeldModule::carlitz(AField::finite(&fp, &k, gp)?);
    let m1 = tilde.torsion_field_degree(a_tilde)?;
    let m2 = target.torsion_field_degree(a_target)?;
    let m = num_integer::lcm(m1, m2);
    if d * m > cap {
        return Err(Error::Resource(format!(
            "kernel field of degree {} over F_p exceeds the cap {cap}",
            d * m
        )));
    }
    let l = k.extension(m)?;
    let ring = tilde.ring();
    let k1 = kernel_set(&ring, &tilde.phi_of(a_tilde), &l)?;
    let k2 = kernel_set(&ring, &target.phi_of(a_target), &l)?;
    let image: HashSet<FfElem> = k1.iter().map(|x| l.pow(x, p as u128)).collect();
    Ok(SpecializationCheck {
        d,
        field_degree: l.degree(),
        kernel_size: k2.len(),
        bijection: k1.len() == k2.len() && image == k2,
    })
}

/// For every monic `a` with `deg a ≤ deg_bound`: the symbolic identity
/// `φ̃_a^{(p)} = Φ_a`, and the kernel bijection over `F_{p^d}`, `d ≤ d_max`.
pub fn verify_power_identity(p: u64, deg_bound: usize, d_max: usize, cap: usize) -> Result<PowerIdentityReport> {
    let fp = prime_constants(p)?;
    let (tilde, target) = power_identity_pair(p)?;
    let ring = tilde.ring();
    let all_a: Vec<Vec<FfElem>> = (0..=deg_bound).flat_map(|n| monic_of_degree(&fp, n)).collect();
    let cases = all_a
        .par_iter()
        .map(|a| {
            let symbolic = ring.coefficient_frobenius(&tilde.phi_of(a), p as u128) == target.phi_of(a);
            let specializations = (1..=d_max)
                .map(|d| specialized_bijection(p, d, |k, g| vec![g.clone(), k.one()], a, a, cap))
                .collect::<Result<Vec<_>>>()?;
            Ok(PowerIdentityCase {
                a: crate::algebra::poly::format_poly(&fp, a, "t"),
                symbolic,
                specializations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_hold = cases
        .iter()
        .all(|c| c.symbolic && c.specializations.iter().all(|s| s.bijection));
    Ok(PowerIdentityReport { p, cases, all_hold })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankPReport {
    pub p: u64,
    pub rank: usize,
    pub phi_t: String,
    pub constant_term: String,
    pub certificate: ImaiCertificate,
    /// `x ∈ G̃[t] ⟹ x^p ∈ C[t^p]` on the model `θ̃ -> generator of F_p`;
    /// `None` when the kernel field exceeds the cap.
    pub containment: Option<bool>,
}

pub fn rank_p_example(p: u64, seed: u64, cap: usize) -> Result<RankPReport> {
    let fp = prime_constants(p)?;
    let g = build_rank_p_module(p)?;
    let k = g.field();
    // v = (t - 1), z = t at p = (t)
    let v = PrimeOfA::new(&fp, vec![fp.neg(&fp.one()), fp.one()])?;
    let pt = PrimeOfA::new(&fp, vec![fp.zero(), fp.one()])?;
    let z = q_field(&fp).gen();
    let certificate = imai_check(&g, &v, &z, &pt, seed)?;
    let t = vec![fp.zero(), fp.one()];
    let t_p = crate::algebra::poly::PolyRing::new(fp.clone()).pow(&t, p);
    let containment = match specialized_bijection(
        p,
        1,
        |k, g| {
            let tw = TwistedRing::new(k.clone(), p as u128);
            tw.pow(&[g.clone(), k.one()], p as u32)
        },
        &t,
        &t_p,
        cap,
    ) {
        // G̃_t = φ̃_{t^p}: the kernels agree in size, so containment is the bijection
        Ok(s) => Some(s.bijection),
        Err(Error::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(RankPReport {
        p,
        rank: g.rank(),
        phi_t: g.format_phi_t(),
        constant_term: k.format_elem(&g.coefficient(0)),
        certificate,
        containment,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistPairReport {
    pub m: i64,
    pub n: i64,
    pub weights: Vec<String>,
    pub certificate: ImaiCertificate,
}

/// `M_{m,n}` over `F_q(θ)`, checked at `v = (t)` with `z = t`.
pub fn twist_pair_example(fq: &FiniteField, m: i64, n: i64, seed: u64) -> Result<TwistPairReport> {
    let mot = build_twist_pair(fq, m, n);
    let pt = PrimeOfA::new(fq, vec![fq.zero(), fq.one()])?;
    let z = q_field(fq).gen();
    let certificate = imai_check_motive(&mot, &pt, &z, &pt, seed)?;
    let weights = certificate.weights.clone().unwrap_or_default();
    Ok(TwistPairReport {
        m,
        n,
        weights,
        certificate,
    })
}
