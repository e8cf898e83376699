//! Rational function fields `F(x)` over any base field.

use super::field::Field;
use super::poly::{format_poly, Poly, PolyRing};

/// A reduced fraction with monic denominator; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc<E> {
    pub num: Vec<E>,
    pub den: Vec<E>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatFuncField<F: Field> {
    pub ring: PolyRing<F>,
    var: String,
}

impl<F: Field> RatFuncField<F> {
    pub fn new(base: F, var: &str) -> Self {
        RatFuncField {
            ring: PolyRing::new(base),
            var: var.to_string(),
        }
    }

    pub fn base(&self) -> &F {
        &self.ring.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// `num / den`; `None` when `den` is zero.
    pub fn from_parts(&self, num: Poly<F::Elem>, den: Poly<F::Elem>) -> Option<RatFunc<F::Elem>> {
        let r = &self.ring;
        let num = r.normalized(num);
        let den = r.normalized(den);
        if den.is_empty() {
            return None;
        }
        if num.is_empty() {
            return Some(self.zero());
        }
        let g = r.gcd(&num, &den);
        let mut num = r.div_exact(&num, &g).unwrap();
        let mut den = r.div_exact(&den, &g).unwrap();
        let lc_inv = r.field.inv(den.last().unwrap()).unwrap();
        if !r.field.is_one(&lc_inv) {
            num = r.scale(&lc_inv, &num);
            den = r.scale(&lc_inv, &den);
        }
        Some(RatFunc { num, den })
    }

    pub fn from_poly(&self, p: Poly<F::Elem>) -> RatFunc<F::Elem> {
        RatFunc {
            num: self.ring.normalized(p),
            den: self.ring.one(),
        }
    }

    pub fn constant(&self, c: F::Elem) -> RatFunc<F::Elem> {
        self.from_poly(vec![c])
    }

    /// The variable itself.
    pub fn gen(&self) -> RatFunc<F::Elem> {
        self.from_poly(self.ring.x())
    }

    pub fn is_poly(&self, a: &RatFunc<F::Elem>) -> bool {
        a.den.len() == 1
    }

    /// `a` as a polynomial, when its denominator is 1.
    pub fn as_poly(&self, a: &RatFunc<F::Elem>) -> Option<Poly<F::Elem>> {
        self.is_poly(a).then(|| a.num.clone())
    }

    /// The constant, when `a` lies in the base field.
    pub fn as_constant(&self, a: &RatFunc<F::Elem>) -> Option<F::Elem> {
        match (a.num.len(), a.den.len()) {
            (0, 1) => Some(self.ring.field.zero()),
            (1, 1) => Some(a.num[0].clone()),
            _ => None,
        }
    }

    /// `deg den - deg num`, the valuation at the place `1/x`; `None` for zero.
    pub fn inf_valuation(&self, a: &RatFunc<F::Elem>) -> Option<i64> {
        let dn = self.ring.degree(&a.num)? as i64;
        Some(self.ring.degree(&a.den).unwrap() as i64 - dn)
    }

    /// Applies a field map to every coefficient, re-normalizing.
    pub fn map_coeffs<G: Field>(
        &self,
        target: &RatFuncField<G>,
        a: &RatFunc<F::Elem>,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> RatFunc<G::Elem> {
        let num = a.num.iter().map(&f).collect();
        let den = a.den.iter().map(&f).collect();
        target
            .from_parts(num, den)
            .expect("coefficient map killed a denominator")
    }

    /// Evaluation at a point of the base field; `None` at a pole.
    pub fn eval(&self, a: &RatFunc<F::Elem>, x: &F::Elem) -> Option<F::Elem> {
        let d = self.ring.eval(&a.den, x);
        self.ring.field.div(&self.ring.eval(&a.num, x), &d)
    }
}

impl<F: Field> Field for RatFuncField<F> {
    type Elem = RatFunc<F::Elem>;

    fn zero(&self) -> Self::Elem {
        RatFunc {
            num: Vec::new(),
            den: self.ring.one(),
        }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.ring.field.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if a.den == b.den {
            return self.from_parts(r.add(&a.num, &b.num), a.den.clone()).unwrap();
        }
        let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
        self.from_parts(num, r.mul(&a.den, &b.den)).unwrap()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFunc {
            num: self.ring.neg(&a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        if a.den.len() == 1 && b.den.len() == 1 {
            return self.from_poly(r.mul(&a.num, &b.num));
        }
        self.from_parts(r.mul(&a.num, &b.num), r.mul(&a.den, &b.den)).unwrap()
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.num.is_empty() {
            return None;
        }
        self.from_parts(a.den.clone(), a.num.clone())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.ring.field.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.ring.field.characteristic()
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        let num = format_poly(&self.ring.field, &a.num, &self.var);
        if a.den.len() == 1 {
            return num;
        }
        let den = format_poly(&self.ring.field, &a.den, &self.var);
        let wrap = |s: String| if s.contains(' ') { format!("({s})") } else { s };
        format!("{}/{}", wrap(num), wrap(den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::FiniteField;

    #[test]
    fn canonical_form() {
        let f3 = FiniteField::prime(3).unwrap();
        let q = RatFuncField::new(f3.clone(), "t");
        let t = q.gen();
        let one = q.one();
        // (t^2 - 1) / (2t - 2) = (t + 1)/2 = 2t + 2
        let num = q.sub(&q.mul(&t, &t), &one);
        let den = q.sub(&q.mul(&q.from_int(2), &t), &q.from_int(2));
        let x = q.div(&num, &den).unwrap();
        assert_eq!(x, q.from_poly(vec![f3.from_int(2), f3.from_int(2)]));
        let y = q.inv(&q.add(&t, &one)).unwrap();
        assert_eq!(q.format_elem(&y), "1/(t + 1)");
        assert_eq!(q.inf_valuation(&y), Some(1));
    }
}
