//! Weights from Frobenius characteristic polynomials, the divisibility
//! condition on a uniformizer, and the weight of the Tate twist `Q_p(n)`.

use num_rational::Ratio;

use crate::algebra::apoly::{divisor, ord, PrimeOfA};
use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::newton::newton_polygon_at_infinity;
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::error::{Error, Result};
use crate::motive::CharPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    /// Sorted, with multiplicity.
    pub weights: Vec<Ratio<i64>>,
    pub d: usize,
}

impl WeightVector {
    pub fn format(&self) -> Vec<String> {
        self.weights.iter().map(|w| w.to_string()).collect()
    }
}

/// `w_i = -v_inf(α_i) / d` read off the Newton polygon at infinity.
pub fn weights_of(p: &CharPoly) -> Result<WeightVector> {
    if p.q_field.is_zero(&p.coeffs[0]) {
        return Err(Error::input("P(0) = 0: a zero root has infinite weight"));
    }
    let np = newton_polygon_at_infinity(&p.q_field, &p.coeffs)?;
    let d = Ratio::from(p.d as i64);
    let mut weights: Vec<Ratio<i64>> = np.root_valuations().into_iter().map(|v| -v / d).collect();
    weights.sort();
    Ok(WeightVector { weights, d: p.d })
}

pub fn has_no_integral_weights(w: &WeightVector) -> bool {
    w.weights.iter().all(|x| !x.is_integer())
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ConditionReport {
    /// `S = sum_{l != p} deg l * ord_l(z)`
    pub sum: i64,
    pub holds: bool,
}

/// `deg p` divides `S` for a uniformizer `z` at `p`.
pub fn divisibility_condition(
    q: &RatFuncField<FiniteField>,
    z: &RatFunc<FfElem>,
    p: &PrimeOfA,
    seed: u64,
) -> Result<ConditionReport> {
    if ord(q, z, p)? != 1 {
        return Err(Error::input(format!(
            "z is not a uniformizer at {}: ord = {}",
            p.format(q.base()),
            ord(q, z, p)?
        )));
    }
    let div = divisor(q, z, seed)?;
    let name = p.format(q.base());
    let sum: i64 = div
        .finite
        .iter()
        .filter(|(l, _, _)| *l != name)
        .map(|(_, deg, o)| *deg as i64 * o)
        .sum();
    Ok(ConditionReport {
        sum,
        holds: sum % p.degree() as i64 == 0,
    })
}

/// Closed form `-n (1 + S / deg p)` for the weight of `Q_p(n)`, cross-checked
/// against the Newton polygon of `X - z^{-n [k : F_p]}`.
pub fn weight_of_tate_twist(
    q: &RatFuncField<FiniteField>,
    n: i64,
    p: &PrimeOfA,
    z: &RatFunc<FfElem>,
    k_over_fp: usize,
    seed: u64,
) -> Result<Ratio<i64>> {
    if k_over_fp == 0 {
        return Err(Error::input("[k : F_p] must be positive"));
    }
    let cond = divisibility_condition(q, z, p, seed)?;
    let deg_p = p.degree() as i64;
    let closed = -Ratio::from(n) * (Ratio::from(1) + Ratio::new(cond.sum, deg_p));
    let div = divisor(q, z, seed)?;
    if div.degree() != 0 {
        return Err(Error::internal("product formula fails for z"));
    }
    let alpha = q
        .pow_signed(z, -n * k_over_fp as i64)
        .ok_or_else(|| Error::input("z = 0"))?;
    let cp = CharPoly {
        q_field: q.clone(),
        coeffs: vec![q.neg(&alpha), q.one()],
        d: k_over_fp * p.degree(),
    };
    let w = weights_of(&cp)?;
    if w.weights != vec![closed] {
        return Err(Error::internal(format!(
            "closed-form weight {closed} disagrees with the Newton polygon weight {}",
            w.weights[0]
        )));
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_examples() {
        let f2 = FiniteField::prime(2).unwrap();
        let q = RatFuncField::new(f2.clone(), "t");
        let t = q.gen();
        let p = PrimeOfA::new(&f2, vec![f2.one(), f2.one(), f2.one()]).unwrap();
        let zp = q.from_poly(p.poly().to_vec());
        let z = q.mul(&zp, &q.add(&t, &q.one()));
        let rep = divisibility_condition(&q, &z, &p, 0).unwrap();
        assert_eq!(rep, ConditionReport { sum: 1, holds: false });
        assert!(divisibility_condition(&q, &q.mul(&zp, &zp), &p, 0).is_err());
    }
}
