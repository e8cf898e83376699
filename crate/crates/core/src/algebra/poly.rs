//! Dense univariate polynomials over any [`Field`].
//!
//! A polynomial is a `Vec` of coefficients, constant term first, with no
//! trailing zeros; the zero polynomial is the empty vector.

use super::field::Field;

pub type Poly<E> = Vec<E>;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<F: Field> {
    pub field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn normalized(&self, mut v: Poly<F::Elem>) -> Poly<F::Elem> {
        while v.last().is_some_and(|c| self.field.is_zero(c)) {
            v.pop();
        }
        v
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Vec::new()
    }

    pub fn one(&self) -> Poly<F::Elem> {
        vec![self.field.one()]
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.normalized(vec![c])
    }

    pub fn x(&self) -> Poly<F::Elem> {
        vec![self.field.zero(), self.field.one()]
    }

    /// `c * X^k`
    pub fn monomial(&self, c: F::Elem, k: usize) -> Poly<F::Elem> {
        if self.field.is_zero(&c) {
            return Vec::new();
        }
        let mut v = vec![self.field.zero(); k];
        v.push(c);
        v
    }

    pub fn degree(&self, a: &[F::Elem]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn is_zero(&self, a: &[F::Elem]) -> bool {
        a.is_empty()
    }

    pub fn is_one(&self, a: &[F::Elem]) -> bool {
        a.len() == 1 && self.field.is_one(&a[0])
    }

    pub fn lead<'a>(&self, a: &'a [F::Elem]) -> Option<&'a F::Elem> {
        a.last()
    }

    pub fn coeff(&self, a: &[F::Elem], i: usize) -> F::Elem {
        a.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => self.field.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.normalized(v)
    }

    pub fn neg(&self, a: &[F::Elem]) -> Poly<F::Elem> {
        a.iter().map(|c| self.field.neg(c)).collect()
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: &F::Elem, a: &[F::Elem]) -> Poly<F::Elem> {
        if self.field.is_zero(c) {
            return Vec::new();
        }
        self.normalized(a.iter().map(|x| self.field.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] = self.field.add(&v[i + j], &self.field.mul(x, y));
            }
        }
        self.normalized(v)
    }

    pub fn pow(&self, a: &[F::Elem], mut e: u64) -> Poly<F::Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lc_inv = self.field.inv(b.last().unwrap()).unwrap();
        let mut q = vec![self.field.zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.field.mul(r.last().unwrap(), &lc_inv);
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = self.field.sub(&r[shift + i], &self.field.mul(&c, bi));
            }
            q[shift] = c;
            r.pop();
            r = self.normalized(r);
        }
        (self.normalized(q), r)
    }

    pub fn rem(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
        self.divrem(a, b).1
    }

    /// Exact quotient; `None` when `b` does not divide `a`.
    pub fn div_exact(&self, a: &[F::Elem], b: &[F::Elem]) -> Option<Poly<F::Elem>> {
        let (q, r) = self.divrem(a, b);
        r.is_empty().then_some(q)
    }

    pub fn monic(&self, a: &[F::Elem]) -> Poly<F::Elem> {
        match a.last() {
            None => Vec::new(),
            Some(lc) => {
                let inv = self.field.inv(lc).unwrap();
                self.scale(&inv, a)
            }
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = std::mem::replace(&mut y, r);
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `s*a + t*b = g` and `g` the monic gcd.
    pub fn xgcd(&self, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = self.field.inv(lc).unwrap();
                (self.scale(&inv, &r0), self.scale(&inv, &s0), self.scale(&inv, &t0))
            }
        }
    }

    pub fn mul_mod(&self, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn pow_mod(&self, a: &[F::Elem], mut e: u128, m: &[F::Elem]) -> Poly<F::Elem> {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&self.one(), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, a: &[F::Elem], x: &F::Elem) -> F::Elem {
        a.iter()
            .rev()
            .fold(self.field.zero(), |acc, c| self.field.add(&self.field.mul(&acc, x), c))
    }

    pub fn derivative(&self, a: &[F::Elem]) -> Poly<F::Elem> {
        let v = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.field.mul(&self.field.from_int(i as i64), c))
            .collect();
        self.normalized(v)
    }

    /// `a(b(X))`
    pub fn compose(&self, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
        a.iter().rev().fold(self.zero(), |acc, c| {
            self.add(&self.mul(&acc, b), &self.constant(c.clone()))
        })
    }

    pub fn format(&self, a: &[F::Elem], var: &str) -> String {
        format_poly(&self.field, a, var)
    }
}

/// Prints highest degree first, e.g. `t^2 + 2*t + 1`.
pub fn format_poly<F: Field>(field: &F, a: &[F::Elem], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in a.iter().enumerate().rev() {
        if field.is_zero(c) {
            continue;
        }
        let cs = field.format_elem(c);
        let cs = if i > 0 && (cs.contains(' ') || cs.contains('/')) {
            format!("({cs})")
        } else {
            cs
        };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (i, cs.as_str()) {
            (0, _) => cs,
            (_, "1") => mono,
            _ => format!("{cs}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}
