//! A-fields: a field `K` with the structure map `γ: A -> K`, `γ(t) = θ`.

use crate::algebra::apoly::PrimeOfA;
use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::poly::PolyRing;
use crate::algebra::ratfunc::RatFuncField;
use crate::error::{Error, Result};
use crate::twisted::{PowerField, TwistedRing};

/// Coefficient fields that contain `F_q`.
pub trait CoefficientField: PowerField {
    fn embed_constant(&self, fq: &FiniteField, c: &FfElem) -> Self::Elem;
}

impl CoefficientField for FiniteField {
    fn embed_constant(&self, fq: &FiniteField, c: &FfElem) -> FfElem {
        self.embed_from(fq, c).expect("F_q is a subfield of every A-field")
    }
}

impl CoefficientField for RatFuncField<FiniteField> {
    fn embed_constant(&self, _fq: &FiniteField, c: &FfElem) -> Self::Elem {
        self.constant(c.clone())
    }
}

/// `F_q(θ)` with θ transcendental, the generic-characteristic A-field.
pub type RationalField = RatFuncField<FiniteField>;

#[derive(Clone, Debug, PartialEq)]
pub struct AField<F: CoefficientField> {
    fq: FiniteField,
    field: F,
    theta: F::Elem,
    characteristic: Option<PrimeOfA>,
}

impl AField<FiniteField> {
    /// A finite A-field `K ⊇ F_q` with `θ ∈ K`; the A-characteristic is the
    /// minimal polynomial of θ over F_q.
    pub fn finite(fq: &FiniteField, k: &FiniteField, theta: FfElem) -> Result<Self> {
        if !k.has_ancestor(fq) {
            return Err(Error::input(format!("{k:?} is not an extension of {fq:?}")));
        }
        let q = fq.order().unwrap();
        // conjugates θ, θ^q, ... until the orbit closes
        let mut conj = vec![theta.clone()];
        loop {
            let next = k.pow(conj.last().unwrap(), q);
            if next == theta {
                break;
            }
            conj.push(next);
        }
        let ring = PolyRing::new(k.clone());
        let mut mp = ring.one();
        for c in &conj {
            mp = ring.mul(&mp, &[k.neg(c), k.one()]);
        }
        let coeffs: Option<Vec<FfElem>> = mp.iter().map(|c| k.restrict_to(fq, c)).collect();
        let coeffs = coeffs.ok_or_else(|| Error::internal("minimal polynomial not over F_q"))?;
        Ok(AField {
            fq: fq.clone(),
            field: k.clone(),
            theta,
            characteristic: Some(PrimeOfA::new(fq, coeffs)?),
        })
    }

    /// `[K : F_q]`
    pub fn degree(&self) -> usize {
        self.field.degree_over(&self.fq).unwrap()
    }
}

impl AField<RationalField> {
    /// `F_q(θ)`
    pub fn rational(fq: &FiniteField) -> Self {
        let field = RatFuncField::new(fq.clone(), "theta");
        let theta = field.gen();
        AField {
            fq: fq.clone(),
            field,
            theta,
            characteristic: None,
        }
    }

    /// `F_q(s)` with `θ` a chosen non-constant element, e.g. `θ = s^p`.
    pub fn rational_with_theta(
        fq: &FiniteField,
        var: &str,
        theta: crate::algebra::ratfunc::RatFunc<FfElem>,
    ) -> Result<Self> {
        let field = RatFuncField::new(fq.clone(), var);
        if field.as_constant(&theta).is_some() {
            return Err(Error::input("θ must be transcendental over F_q"));
        }
        Ok(AField {
            fq: fq.clone(),
            field,
            theta,
            characteristic: None,
        })
    }
}

impl<F: CoefficientField> AField<F> {
    pub fn fq(&self) -> &FiniteField {
        &self.fq
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn theta(&self) -> &F::Elem {
        &self.theta
    }

    pub fn q(&self) -> u128 {
        self.fq.order().expect("small constant field")
    }

    /// The prime `ker γ`, or `None` when γ is injective.
    pub fn characteristic(&self) -> Option<&PrimeOfA> {
        self.characteristic.as_ref()
    }

    pub fn constant(&self, c: &FfElem) -> F::Elem {
        self.field.embed_constant(&self.fq, c)
    }

    /// `γ(a) = a(θ)`
    pub fn gamma(&self, a: &[FfElem]) -> F::Elem {
        a.iter().rev().fold(self.field.zero(), |acc, c| {
            self.field.add(&self.field.mul(&acc, &self.theta), &self.constant(c))
        })
    }

    pub fn twisted_ring(&self) -> TwistedRing<F> {
        TwistedRing::new(self.field.clone(), self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_of_finite_afield() {
        let f2 = FiniteField::prime(2).unwrap();
        let k = f2.extension(3).unwrap();
        let theta = k.relative_generator();
        let af = AField::finite(&f2, &k, theta).unwrap();
        let chr = af.characteristic().unwrap();
        assert_eq!(chr.degree(), 3);
        assert!(k.is_zero(&af.gamma(chr.poly())));
        let af0 = AField::finite(&f2, &k, k.zero()).unwrap();
        assert_eq!(af0.characteristic().unwrap().poly(), &[f2.zero(), f2.one()]);
    }
}
