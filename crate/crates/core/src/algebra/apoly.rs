//! The coefficient ring `A = F_q[t]`, its primes, and valuations on
//! `Q = F_q(t)`.

use serde::Serialize;

use super::factor::{factor, is_irreducible};
use super::field::Field;
use super::finite::{FfElem, FiniteField};
use super::poly::{format_poly, Poly, PolyRing};
use super::ratfunc::{RatFunc, RatFuncField};
use crate::error::{Error, Result};

/// A monic irreducible polynomial of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeOfA {
    poly: Poly<FfElem>,
}

impl PrimeOfA {
    pub fn new(fq: &FiniteField, poly: Poly<FfElem>) -> Result<Self> {
        let ring = PolyRing::new(fq.clone());
        let poly = ring.normalized(poly);
        if poly.len() < 2 {
            return Err(Error::input("a prime of A must have positive degree"));
        }
        if !fq.is_one(poly.last().unwrap()) {
            return Err(Error::input("a prime of A must be monic"));
        }
        if !is_irreducible(fq, &poly)? {
            return Err(Error::input(format!(
                "{} is not irreducible",
                format_poly(fq, &poly, "t")
            )));
        }
        Ok(PrimeOfA { poly })
    }

    pub(crate) fn new_unchecked(poly: Poly<FfElem>) -> Self {
        PrimeOfA { poly }
    }

    pub fn poly(&self) -> &[FfElem] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// `F_l = F_q[t]/(z_l)`, with the class of `t` printed as `var`.
    pub fn residue_field(&self, fq: &FiniteField, var: &str) -> Result<FiniteField> {
        fq.extension_with_modulus_named(&self.poly, var)
    }

    /// Image of `a` in the residue field.
    pub fn reduce(&self, fl: &FiniteField, a: &[FfElem]) -> FfElem {
        let fq = fl.parent().expect("residue field has a parent").clone();
        let ring = PolyRing::new(fq);
        let r = ring.rem(a, &self.poly);
        fl.from_relative(&r)
    }

    pub fn format(&self, fq: &FiniteField) -> String {
        format_poly(fq, &self.poly, "t")
    }
}

/// Prime factorization in `A`: unit times sorted `(prime, multiplicity)`.
pub fn factor_apoly(fq: &FiniteField, f: &[FfElem], seed: u64) -> Result<(FfElem, Vec<(PrimeOfA, usize)>)> {
    let fac = factor(fq, f, seed)?;
    Ok((
        fac.unit,
        fac.factors
            .into_iter()
            .map(|(g, e)| (PrimeOfA::new_unchecked(g), e))
            .collect(),
    ))
}

/// Multiplicity of `l` in a nonzero polynomial.
pub fn ord_poly(fq: &FiniteField, f: &[FfElem], l: &PrimeOfA) -> usize {
    let ring = PolyRing::new(fq.clone());
    let mut f = f.to_vec();
    let mut k = 0;
    while let Some(q) = ring.div_exact(&f, &l.poly) {
        f = q;
        k += 1;
    }
    k
}

/// The normalized valuation `ord_l` on `Q`.
pub fn ord(q: &RatFuncField<FiniteField>, f: &RatFunc<FfElem>, l: &PrimeOfA) -> Result<i64> {
    if q.is_zero(f) {
        return Err(Error::input("valuation of zero is infinite"));
    }
    let fq = q.base();
    Ok(ord_poly(fq, &f.num, l) as i64 - ord_poly(fq, &f.den, l) as i64)
}

/// `v_inf(f) = deg den - deg num`.
pub fn infinity_valuation(q: &RatFuncField<FiniteField>, f: &RatFunc<FfElem>) -> Result<i64> {
    q.inf_valuation(f)
        .ok_or_else(|| Error::input("valuation of zero is infinite"))
}

/// Every place where `f` has nonzero valuation, with `(degree, ord)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divisor {
    pub finite: Vec<(String, usize, i64)>,
    pub infinity: i64,
}

impl Divisor {
    /// `sum deg(v) * ord_v(f)` over all places; zero by the product formula.
    pub fn degree(&self) -> i64 {
        self.finite.iter().map(|(_, d, o)| *d as i64 * o).sum::<i64>() + self.infinity
    }
}

pub fn divisor(q: &RatFuncField<FiniteField>, f: &RatFunc<FfElem>, seed: u64) -> Result<Divisor> {
    let fq = q.base();
    let v_inf = infinity_valuation(q, f)?;
    let (_, num) = factor_apoly(fq, &f.num, seed)?;
    let (_, den) = factor_apoly(fq, &f.den, seed)?;
    let mut finite: Vec<(PrimeOfA, i64)> = num.into_iter().map(|(l, e)| (l, e as i64)).collect();
    finite.extend(den.into_iter().map(|(l, e)| (l, -(e as i64))));
    finite.sort_by(|a, b| super::factor::canonical_cmp(fq, &a.0.poly, &b.0.poly));
    Ok(Divisor {
        finite: finite.into_iter().map(|(l, e)| (l.format(fq), l.degree(), e)).collect(),
        infinity: v_inf,
    })
}

/// Monic irreducibles of `A` of exact degree `d`, in canonical order.
pub fn primes_of_degree(fq: &FiniteField, d: usize) -> Result<Vec<PrimeOfA>> {
    let q = fq.order().ok_or_else(|| Error::Resource("field too large".into()))?;
    let total = q
        .checked_pow(d as u32)
        .filter(|&n| n <= 1 << 20)
        .ok_or_else(|| Error::Resource(format!("too many polynomials of degree {d}")))?;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(fq.element_from_index(rest % q));
            rest /= q;
        }
        coeffs.push(fq.one());
        if is_irreducible(fq, &coeffs)? {
            out.push(PrimeOfA::new_unchecked(coeffs));
        }
    }
    out.sort_by(|a, b| super::factor::canonical_cmp(fq, &a.poly, &b.poly));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_at_finite_places_and_infinity() {
        let f2 = FiniteField::prime(2).unwrap();
        let q = RatFuncField::new(f2.clone(), "t");
        let t = q.gen();
        let t1 = q.add(&t, &q.one());
        let f = q.div(&q.mul(&t, &t), &t1).unwrap();
        let pt = PrimeOfA::new(&f2, t.num.clone()).unwrap();
        let pt1 = PrimeOfA::new(&f2, t1.num.clone()).unwrap();
        assert_eq!(ord(&q, &f, &pt).unwrap(), 2);
        assert_eq!(ord(&q, &f, &pt1).unwrap(), -1);
        assert_eq!(infinity_valuation(&q, &f).unwrap(), -1);
        assert_eq!(divisor(&q, &f, 0).unwrap().degree(), 0);
        assert!(ord(&q, &q.zero(), &pt).is_err());
    }

    #[test]
    fn prime_counts() {
        let f2 = FiniteField::prime(2).unwrap();
        // number of monic irreducibles of degree 1..4 over F_2
        let counts: Vec<usize> = (1..=4).map(|d| primes_of_degree(&f2, d).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3]);
    }
}
