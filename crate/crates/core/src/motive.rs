//! A-motives as matrices of `τ_M` over `K(t)`, their tensor operations and
//! Frobenius characteristic polynomials over finite A-fields.

use crate::afield::{AField, CoefficientField, RationalField};
use crate::algebra::apoly::PrimeOfA;
use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::matrix::{self, Matrix};
use crate::algebra::poly::{format_poly, Poly, PolyRing};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};

/// `τ_M` on a fixed `K[t]`-basis, entries in `K(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Motive<F: CoefficientField> {
    afield: AField<F>,
    kt: RatFuncField<F>,
    matrix: Matrix<RatFunc<F::Elem>>,
}

impl<F: CoefficientField> Motive<F> {
    pub fn new(afield: AField<F>, matrix: Matrix<RatFunc<F::Elem>>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::input("τ_M must be a non-empty square matrix"));
        }
        let kt = RatFuncField::new(afield.field().clone(), "t");
        if kt.is_zero(&matrix::det(&kt, &matrix)) {
            return Err(Error::input("τ_M is singular"));
        }
        Ok(Motive { afield, kt, matrix })
    }

    /// The polynomial ring `K(t)` holding the entries.
    pub fn entry_field(&self) -> &RatFuncField<F> {
        &self.kt
    }

    pub fn afield(&self) -> &AField<F> {
        &self.afield
    }

    pub fn matrix(&self) -> &Matrix<RatFunc<F::Elem>> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// `t - θ` in `K[t]`.
    pub fn t_minus_theta(afield: &AField<F>) -> Poly<F::Elem> {
        let k = afield.field();
        vec![k.neg(afield.theta()), k.one()]
    }

    /// `M(G)` on the basis `1, τ, ..., τ^{r-1}` with `τ` acting on the left.
    pub fn of_drinfeld(g: &DrinfeldModule<F>) -> Self {
        let afield = g.afield().clone();
        let k = afield.field().clone();
        let kt = RatFuncField::new(k.clone(), "t");
        let r = g.rank();
        let gr_inv = k.inv(&g.coefficient(r)).unwrap();
        let t_theta = kt.from_poly(Self::t_minus_theta(&afield));
        let m = Matrix::from_fn(r, r, |i, j| {
            if j + 1 < r {
                if i == j + 1 {
                    kt.one()
                } else {
                    kt.zero()
                }
            } else if i == 0 {
                kt.mul(&kt.constant(gr_inv.clone()), &t_theta)
            } else {
                kt.constant(k.neg(&k.mul(&gr_inv, &g.coefficient(i))))
            }
        });
        Motive::new(afield, m).expect("motive of a Drinfeld module is invertible")
    }

    /// `M(C)`: the 1x1 matrix `t - θ`.
    pub fn carlitz(afield: &AField<F>) -> Self {
        let kt = RatFuncField::new(afield.field().clone(), "t");
        let m = Matrix::from_rows(vec![vec![kt.from_poly(Self::t_minus_theta(afield))]]);
        Motive::new(afield.clone(), m).unwrap()
    }

    /// The unit motive, `τ = 1` in rank one.
    pub fn unit(afield: &AField<F>) -> Self {
        let kt = RatFuncField::new(afield.field().clone(), "t");
        Motive::new(afield.clone(), matrix::identity(&kt, 1)).unwrap()
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.afield != other.afield {
            return Err(Error::input("motives over different A-fields"));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Motive::new(
            self.afield.clone(),
            matrix::block_diag(&self.kt, &self.matrix, &other.matrix),
        )
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Motive::new(self.afield.clone(), matrix::kron(&self.kt, &self.matrix, &other.matrix))
    }

    /// Inverse transpose of `τ_M`.
    pub fn dual(&self) -> Self {
        let inv = matrix::inverse(&self.kt, &self.matrix).expect("τ_M is invertible");
        Motive::new(self.afield.clone(), inv.transpose()).unwrap()
    }

    /// `M^{⊗n}`, through the dual for negative `n`.
    pub fn tensor_power(&self, n: i64) -> Self {
        let base = if n < 0 { self.dual() } else { self.clone() };
        let mut acc = Motive::new(self.afield.clone(), matrix::identity(&self.kt, 1)).unwrap();
        for _ in 0..n.unsigned_abs() {
            acc = acc.tensor(&base).unwrap();
        }
        acc
    }

    pub fn det(&self) -> RatFunc<F::Elem> {
        matrix::det(&self.kt, &self.matrix)
    }

    pub fn is_effective(&self) -> bool {
        self.matrix.entries().iter().all(|e| self.kt.is_poly(e))
    }

    /// For an effective motive with `det τ = unit * (t - θ)^n`, returns `n`.
    pub fn dimension(&self) -> Option<usize> {
        if !self.is_effective() {
            return None;
        }
        let ring = PolyRing::new(self.afield.field().clone());
        let mut d = self.det().num;
        let lin = Self::t_minus_theta(&self.afield);
        let mut n = 0;
        while let Some(q) = ring.div_exact(&d, &lin) {
            if d.len() == 1 {
                break;
            }
            d = q;
            n += 1;
        }
        (d.len() == 1).then_some(n)
    }

    /// `n` with `det τ = c (t - θ)^n`, `c ∈ K^×`, when `det τ` has that shape.
    pub fn det_exponent(&self) -> Option<i64> {
        let ring = PolyRing::new(self.afield.field().clone());
        let lin = Self::t_minus_theta(&self.afield);
        let power = |mut p: Poly<F::Elem>| -> Option<i64> {
            let mut n = 0;
            while p.len() > 1 {
                p = ring.div_exact(&p, &lin)?;
                n += 1;
            }
            Some(n)
        };
        let det = self.det();
        Some(power(det.num)? - power(det.den)?)
    }

    pub fn format_matrix(&self) -> Vec<Vec<String>> {
        self.matrix
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|e| self.kt.format_elem(e)).collect())
            .collect()
    }
}

/// `P(X; M)`, monic, coefficients in `Q = F_q(t)` from the constant term up.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    pub q_field: RatFuncField<FiniteField>,
    pub coeffs: Vec<RatFunc<FfElem>>,
    /// `[k : F_q]`
    pub d: usize,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `P(1)`
    pub fn at_one(&self) -> RatFunc<FfElem> {
        let q = &self.q_field;
        q.sum(self.coeffs.iter())
    }

    pub fn format(&self) -> String {
        format_poly(&self.q_field, &self.coeffs, "X")
    }

    pub fn format_coeffs(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| self.q_field.format_elem(c)).collect()
    }

    /// Coefficients reduced into `F_l = A/(l)`.
    pub fn reduce_mod(&self, l: &PrimeOfA, fl: &FiniteField) -> Result<Vec<FfElem>> {
        self.coeffs
            .iter()
            .map(|c| {
                let num = l.reduce(fl, &c.num);
                let den = l.reduce(fl, &c.den);
                fl.div(&num, &den)
                    .ok_or_else(|| Error::input(format!("P(X; M) has a pole at {}", l.format(fl.parent().unwrap()))))
            })
            .collect()
    }

    /// The monic reciprocal `X^r P(1/X) / P(0)`.
    pub fn reciprocal(&self) -> Result<CharPoly> {
        let q = &self.q_field;
        let c0 = &self.coeffs[0];
        let inv = q
            .inv(c0)
            .ok_or_else(|| Error::input("reciprocal of a polynomial with zero constant term"))?;
        let coeffs = self.coeffs.iter().rev().map(|c| q.mul(c, &inv)).collect();
        Ok(CharPoly {
            q_field: q.clone(),
            coeffs,
            d: self.d,
        })
    }
}

impl Motive<RationalField> {
    /// Reduction of the coefficients at a finite place `v` of `F_q(θ)`,
    /// over `F_v` with θ printed as `x`. Fails unless every coefficient is
    /// `v`-integral and the shape `det τ = c (t - θ)^n` survives.
    pub fn reduce_at(&self, v: &PrimeOfA) -> Result<Motive<FiniteField>> {
        let fq = self.afield.fq();
        let fv = v.residue_field(fq, "x")?;
        let reduce = |c: &RatFunc<FfElem>| -> Result<FfElem> {
            fv.div(&v.reduce(&fv, &c.num), &v.reduce(&fv, &c.den))
                .ok_or_else(|| Error::input(format!("coefficient has a pole at {}", v.format(fq))))
        };
        let theta = reduce(self.afield.theta())?;
        let af = AField::finite(fq, &fv, theta)?;
        let ft = RatFuncField::new(fv.clone(), "t");
        let mut entries = Vec::new();
        for e in self.matrix.entries() {
            let num = e.num.iter().map(&reduce).collect::<Result<Vec<_>>>()?;
            let den = e.den.iter().map(&reduce).collect::<Result<Vec<_>>>()?;
            entries.push(
                ft.from_parts(num, den)
                    .ok_or_else(|| Error::input("a denominator vanishes at the place"))?,
            );
        }
        let r = self.rank();
        let m = Matrix::from_fn(r, r, |i, j| entries[i * r + j].clone());
        let red = Motive::new(af, m).map_err(|_| Error::input("τ_M degenerates at the place"))?;
        if self.det_exponent().is_none() || red.det_exponent() != self.det_exponent() {
            return Err(Error::input(format!("bad reduction at {}", v.format(fq))));
        }
        Ok(red)
    }
}

impl Motive<FiniteField> {
    /// `σ`: q-th power on the K-coefficients of every entry, fixing `t`.
    fn sigma(&self, m: &Matrix<RatFunc<FfElem>>) -> Matrix<RatFunc<FfElem>> {
        let k = self.afield.field();
        let q = self.afield.q();
        m.map(|e| {
            self.kt
                .from_parts(
                    e.num.iter().map(|c| k.pow(c, q)).collect(),
                    e.den.iter().map(|c| k.pow(c, q)).collect(),
                )
                .unwrap()
        })
    }

    /// `T T^σ ... T^{σ^{d-1}}`, `d = [K : F_q]`.
    pub fn frobenius_product(&self) -> Matrix<RatFunc<FfElem>> {
        self.sigma_product(self.afield.degree())
    }

    /// `T T^σ ... T^{σ^{n-1}}`
    pub fn sigma_product(&self, n: usize) -> Matrix<RatFunc<FfElem>> {
        let mut acc = self.matrix.clone();
        let mut tw = self.matrix.clone();
        for _ in 1..n {
            tw = self.sigma(&tw);
            acc = matrix::mul(&self.kt, &acc, &tw);
        }
        acc
    }

    /// `P(X; M)`; checks that the coefficients descend to `F_q(t)`.
    pub fn frobenius_charpoly(&self) -> Result<CharPoly> {
        let prod = self.frobenius_product();
        let cp = matrix::charpoly(&self.kt, &prod);
        let fq = self.afield.fq().clone();
        let k = self.afield.field();
        let q_field = RatFuncField::new(fq.clone(), "t");
        let descend = |v: &[FfElem]| -> Result<Vec<FfElem>> {
            v.iter()
                .map(|c| {
                    k.restrict_to(&fq, c)
                        .ok_or_else(|| Error::internal("characteristic polynomial does not descend to F_q(t)"))
                })
                .collect()
        };
        let coeffs = cp
            .iter()
            .map(|c| Ok(q_field.from_parts(descend(&c.num)?, descend(&c.den)?).unwrap()))
            .collect::<Result<Vec<_>>>()?;
        Ok(CharPoly {
            q_field,
            coeffs,
            d: self.afield.degree(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carlitz_charpoly_over_f9() {
        let f3 = FiniteField::prime(3).unwrap();
        let k = f3.extension(2).unwrap();
        let af = AField::finite(&f3, &k, k.relative_generator()).unwrap();
        let m = Motive::carlitz(&af);
        let cp = m.frobenius_charpoly().unwrap();
        // X - p_θ(t) with p_θ the minimal polynomial of θ
        let mp = af.characteristic().unwrap().poly().to_vec();
        let q = &cp.q_field;
        assert_eq!(cp.coeffs, vec![q.neg(&q.from_poly(mp)), q.one()]);
    }

    #[test]
    fn rank_two_matrix_shape() {
        let f3 = FiniteField::prime(3).unwrap();
        let af = AField::rational(&f3);
        let k = af.field().clone();
        let th = af.theta().clone();
        let g = DrinfeldModule::new(af.clone(), vec![th.clone(), k.one(), k.from_int(2)]).unwrap();
        let m = Motive::of_drinfeld(&g);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.dimension(), Some(1));
        let kt = m.entry_field();
        assert!(kt.is_zero(m.matrix().get(0, 0)));
        assert!(kt.is_one(m.matrix().get(1, 0)));
        // dual has inverse determinant
        let dd = m.dual().det();
        assert!(kt.is_one(&kt.mul(&dd, &m.det())));
    }
}
