//! The twisted polynomial ring `K{τ}` with `τ c = c^q τ`, additive
//! evaluation, and kernels of additive polynomials over finite fields.

use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::fp_linalg::{FpMatrix, FpSpan};
use crate::algebra::poly::format_poly;
use crate::algebra::ratfunc::RatFuncField;
use crate::error::{Error, Result};

/// Fields with a fast `x -> x^{p^k}`.
pub trait PowerField: Field {
    /// `x^e` where `e` is a power of the characteristic.
    fn frob_pow(&self, x: &Self::Elem, e: u128) -> Self::Elem {
        self.pow(x, e)
    }
}

impl PowerField for FiniteField {}

impl PowerField for RatFuncField<FiniteField> {
    fn frob_pow(&self, x: &Self::Elem, e: u128) -> Self::Elem {
        // (sum c_i s^i)^e = sum c_i^e s^{ie} for e a power of p
        let base = self.base();
        let e_us = e as usize;
        let spread = |v: &[FfElem]| -> Vec<FfElem> {
            let mut out = vec![base.zero(); (v.len().max(1) - 1) * e_us + 1];
            for (i, c) in v.iter().enumerate() {
                out[i * e_us] = base.pow(c, e);
            }
            out
        };
        if self.is_zero(x) {
            return self.zero();
        }
        self.from_parts(spread(&x.num), spread(&x.den)).unwrap()
    }
}

/// Coefficients of `τ^0, τ^1, ...`, no trailing zeros.
pub type TwistedPoly<E> = Vec<E>;

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedRing<F: PowerField> {
    pub field: F,
    q: u128,
}

impl<F: PowerField> TwistedRing<F> {
    /// `q` must be a power of the characteristic of `field`.
    pub fn new(field: F, q: u128) -> Self {
        TwistedRing { field, q }
    }

    pub fn q(&self) -> u128 {
        self.q
    }

    pub fn normalized(&self, mut f: TwistedPoly<F::Elem>) -> TwistedPoly<F::Elem> {
        while f.last().is_some_and(|c| self.field.is_zero(c)) {
            f.pop();
        }
        f
    }

    pub fn one(&self) -> TwistedPoly<F::Elem> {
        vec![self.field.one()]
    }

    pub fn tau(&self) -> TwistedPoly<F::Elem> {
        vec![self.field.zero(), self.field.one()]
    }

    pub fn constant(&self, c: F::Elem) -> TwistedPoly<F::Elem> {
        self.normalized(vec![c])
    }

    pub fn degree(&self, f: &[F::Elem]) -> Option<usize> {
        f.len().checked_sub(1)
    }

    pub fn add(&self, f: &[F::Elem], g: &[F::Elem]) -> TwistedPoly<F::Elem> {
        let n = f.len().max(g.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| self.field.add(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)))
            .collect();
        self.normalized(v)
    }

    pub fn sub(&self, f: &[F::Elem], g: &[F::Elem]) -> TwistedPoly<F::Elem> {
        let ng: Vec<F::Elem> = g.iter().map(|c| self.field.neg(c)).collect();
        self.add(f, &ng)
    }

    /// `c * f`
    pub fn scale_left(&self, c: &F::Elem, f: &[F::Elem]) -> TwistedPoly<F::Elem> {
        self.normalized(f.iter().map(|x| self.field.mul(c, x)).collect())
    }

    /// `f g`, with `τ^i c = c^{q^i} τ^i`.
    pub fn mul(&self, f: &[F::Elem], g: &[F::Elem]) -> TwistedPoly<F::Elem> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.field.zero(); f.len() + g.len() - 1];
        let mut g_tw: Vec<F::Elem> = g.to_vec();
        for (i, fi) in f.iter().enumerate() {
            if i > 0 {
                g_tw = g_tw.iter().map(|c| self.field.frob_pow(c, self.q)).collect();
            }
            if self.field.is_zero(fi) {
                continue;
            }
            for (j, gj) in g_tw.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(fi, gj));
            }
        }
        self.normalized(out)
    }

    pub fn pow(&self, f: &[F::Elem], e: u32) -> TwistedPoly<F::Elem> {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, f))
    }

    /// Raises every coefficient to the power `e` (a power of the characteristic).
    pub fn coefficient_frobenius(&self, f: &[F::Elem], e: u128) -> TwistedPoly<F::Elem> {
        f.iter().map(|c| self.field.frob_pow(c, e)).collect()
    }

    /// `sum c_i x^{q^i}` for `x` in the same field.
    pub fn evaluate(&self, f: &[F::Elem], x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        let mut xp = x.clone();
        for (i, c) in f.iter().enumerate() {
            if i > 0 {
                xp = self.field.frob_pow(&xp, self.q);
            }
            acc = self.field.add(&acc, &self.field.mul(c, &xp));
        }
        acc
    }

    pub fn format(&self, f: &[F::Elem]) -> String {
        format_poly(&self.field, f, "T")
    }
}

impl TwistedRing<FiniteField> {
    /// `f(x)` for `x` in an extension `l` of the coefficient field.
    pub fn evaluate_in(&self, f: &[FfElem], l: &FiniteField, x: &FfElem) -> Result<FfElem> {
        if !l.has_ancestor(&self.field) {
            return Err(Error::input(format!(
                "{l:?} is not an extension of {:?} in this tower",
                self.field
            )));
        }
        let mut acc = l.zero();
        let mut xp = x.clone();
        for (i, c) in f.iter().enumerate() {
            if i > 0 {
                xp = l.pow(&xp, self.q);
            }
            acc = l.add(&acc, &l.mul(&l.embed_from(&self.field, c)?, &xp));
        }
        Ok(acc)
    }

    /// Matrix over F_p of `x -> f(x)` on `l`, in the absolute basis of `l`.
    pub fn linear_map(&self, f: &[FfElem], l: &FiniteField) -> Result<FpMatrix> {
        let coeffs: Vec<FfElem> = f.iter().map(|c| l.embed_from(&self.field, c)).collect::<Result<_>>()?;
        let n = l.degree();
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let mut e = vec![0u32; n];
                e[j] = 1;
                let x = l.elem(e);
                let mut acc = l.zero();
                let mut xp = x;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        xp = l.pow(&xp, self.q);
                    }
                    acc = l.add(&acc, &l.mul(c, &xp));
                }
                acc.coords().to_vec()
            })
            .collect();
        Ok(FpMatrix::from_columns(l.p(), n, &cols))
    }

    /// F_q-basis of `{x in l : f(x) = 0}`, where `fq` is the field of
    /// constants (`|fq| = q`) and `l` an extension of the coefficient field.
    pub fn kernel_in(&self, f: &[FfElem], fq: &FiniteField, l: &FiniteField) -> Result<Vec<FfElem>> {
        if f.is_empty() {
            return Err(Error::input("kernel of the zero twisted polynomial"));
        }
        let m = self.linear_map(f, l)?;
        let fp_kernel = m.kernel();
        let scalars: Vec<FfElem> = (0..fq.degree())
            .map(|j| {
                let mut e = vec![0u32; fq.degree()];
                e[j] = 1;
                l.embed_from(fq, &fq.elem(e))
            })
            .collect::<Result<_>>()?;
        Ok(fq_basis(l, &scalars, fp_kernel.into_iter().map(|v| l.elem(v))))
    }

    /// `additive_kernel(f, m)`: kernel inside the degree-`m` extension.
    pub fn additive_kernel(&self, f: &[FfElem], fq: &FiniteField, m: usize) -> Result<(FiniteField, Vec<FfElem>)> {
        let l = self.field.extension(m)?;
        let basis = self.kernel_in(f, fq, &l)?;
        Ok((l, basis))
    }
}

/// Greedy basis over the field spanned by `scalars` (an F_p-basis of the
/// constants, embedded in `l`) of the span of `vectors`.
pub fn fq_basis(l: &FiniteField, scalars: &[FfElem], vectors: impl IntoIterator<Item = FfElem>) -> Vec<FfElem> {
    let mut span = FpSpan::new(l.p(), l.degree());
    let mut out = Vec::new();
    for v in vectors {
        if span.contains(v.coords()) {
            continue;
        }
        for s in scalars {
            span.insert(l.mul(s, &v).coords());
        }
        out.push(v);
    }
    out
}
