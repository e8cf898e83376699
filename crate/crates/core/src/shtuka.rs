//! Local shtukas `τ = Mat · (z - ζ)^{-h}` over `R[[z]]`, their Hodge-Pink
//! invariants and weak admissibility in rank at most two.
//!
//! Two models are supported. An *exact* model has polynomial entries in `z`
//! and arbitrary `ζ` reducing to zero in the residue field; orders at `z = ζ`
//! are computed after the shift `z = w + ζ`. A *truncated* model keeps
//! entries modulo `z^N` and needs `ζ = 0`; every order it reports is checked
//! to lie below `N`.

use crate::afield::{AField, CoefficientField, RationalField};
use crate::algebra::apoly::PrimeOfA;
use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::matrix::{self, Matrix};
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::error::{Error, Result};
use crate::motive::Motive;

pub const DEFAULT_PRECISION: usize = 16;

/// How an element of `R` is sent to the residue field `k`.
#[derive(Clone, Debug, PartialEq)]
pub enum ResidueMap {
    /// `θ -> c` on `F_q(θ)`.
    AtPoint(FfElem),
    /// `R = k` already.
    Identity,
}

pub trait ShtukaBase: CoefficientField {
    fn residue_field(&self) -> FiniteField;
    fn residue(&self, map: &ResidueMap, x: &Self::Elem) -> Option<FfElem>;
    /// A section `k -> R`, used to compare lines over `k((z))` with `q_D`.
    fn lift_residue(&self, x: &FfElem) -> Self::Elem;
}

impl ShtukaBase for FiniteField {
    fn residue_field(&self) -> FiniteField {
        self.clone()
    }

    fn residue(&self, map: &ResidueMap, x: &FfElem) -> Option<FfElem> {
        match map {
            ResidueMap::Identity => Some(x.clone()),
            ResidueMap::AtPoint(_) => None,
        }
    }

    fn lift_residue(&self, x: &FfElem) -> FfElem {
        x.clone()
    }
}

impl ShtukaBase for RationalField {
    fn residue_field(&self) -> FiniteField {
        self.base().clone()
    }

    fn residue(&self, map: &ResidueMap, x: &RatFunc<FfElem>) -> Option<FfElem> {
        match map {
            ResidueMap::AtPoint(c) => self.eval(x, c),
            ResidueMap::Identity => self.as_constant(x),
        }
    }

    fn lift_residue(&self, x: &FfElem) -> RatFunc<FfElem> {
        self.constant(x.clone())
    }
}

/// The coefficient ring `R`, the point `ζ`, and `q̂ = #F_𝔭`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBase<F: ShtukaBase> {
    pub field: F,
    pub zeta: F::Elem,
    pub residue: ResidueMap,
    pub q_hat: u128,
}

impl LocalBase<RationalField> {
    /// `R = F_q(θ)` localized at `θ = c`, `z = t - c`, `ζ = θ - c`.
    pub fn at_point(fq: &FiniteField, c: &FfElem) -> Self {
        let af = AField::rational(fq);
        let field = af.field().clone();
        let zeta = field.sub(af.theta(), &field.constant(c.clone()));
        LocalBase {
            field,
            zeta,
            residue: ResidueMap::AtPoint(c.clone()),
            q_hat: af.q(),
        }
    }
}

impl LocalBase<FiniteField> {
    /// `R = k` with `ζ = 0`.
    pub fn finite(k: &FiniteField, q_hat: u128) -> Self {
        LocalBase {
            field: k.clone(),
            zeta: k.zero(),
            residue: ResidueMap::Identity,
            q_hat,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    NotAdmissible,
    /// The precision or the line search did not settle the question.
    Undecided,
}

impl Admissibility {
    pub fn label(&self) -> &'static str {
        match self {
            Admissibility::Admissible => "ADMISSIBLE",
            Admissibility::NotAdmissible => "NOT-ADMISSIBLE",
            Admissibility::Undecided => "UNDECIDED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HodgePinkData {
    pub t_n: i64,
    pub t_h: i64,
    /// `μ_1 ≥ ... ≥ μ_r`
    pub mu: Vec<i64>,
    pub weakly_admissible: Admissibility,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalShtuka<F: ShtukaBase> {
    base: LocalBase<F>,
    mat: Matrix<Poly<F::Elem>>,
    h: i64,
    precision: usize,
    exact: bool,
}

fn low_order<F: Field>(f: &F, a: &[F::Elem]) -> Option<usize> {
    a.iter().position(|c| !f.is_zero(c))
}

fn truncated<F: Field>(ring: &PolyRing<F>, mut a: Poly<F::Elem>, n: Option<usize>) -> Poly<F::Elem> {
    if let Some(n) = n {
        a.truncate(n);
    }
    ring.normalized(a)
}

/// Laplace expansion along the first row, division-free so that it also
/// works modulo `z^n`.
fn poly_det<F: Field>(ring: &PolyRing<F>, m: &[Vec<Poly<F::Elem>>], n: Option<usize>) -> Poly<F::Elem> {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        k => {
            let mut acc = ring.zero();
            for j in 0..k {
                if m[0][j].is_empty() {
                    continue;
                }
                let minor: Vec<Vec<Poly<F::Elem>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = truncated(ring, ring.mul(&m[0][j], &poly_det(ring, &minor, n)), n);
                acc = if j % 2 == 0 {
                    ring.add(&acc, &term)
                } else {
                    ring.sub(&acc, &term)
                };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `ord` of a nonzero rational function at the origin of its variable.
fn ratfunc_ord<F: Field>(f: &F, a: &RatFunc<F::Elem>) -> Option<i64> {
    let n = low_order(f, &a.num)? as i64;
    Some(n - low_order(f, &a.den).expect("nonzero denominator") as i64)
}

/// Elementary-divisor exponents of a square matrix over `L(w)` at `w = 0`,
/// from the determinantal divisors `D_j = min ord_w(j x j minors)`.
fn elementary_exponents<F: Field>(lw: &RatFuncField<F>, m: &Matrix<RatFunc<F::Elem>>) -> Result<Vec<i64>> {
    let r = m.rows();
    let base = lw.base();
    let mut prev = 0i64;
    let mut out = Vec::with_capacity(r);
    for j in 1..=r {
        let mut best: Option<i64> = None;
        for rows in subsets(r, j) {
            for cols in subsets(r, j) {
                let sub = Matrix::from_fn(j, j, |a, b| m.get(rows[a], cols[b]).clone());
                if let Some(o) = ratfunc_ord(base, &matrix::det(lw, &sub)) {
                    best = Some(best.map_or(o, |x| x.min(o)));
                }
            }
        }
        let d = best.ok_or_else(|| Error::input("singular matrix has no elementary divisors"))?;
        out.push(d - prev);
        prev = d;
    }
    Ok(out)
}

impl<F: ShtukaBase> LocalShtuka<F> {
    /// `τ = mat · (z - ζ)^{-h}`. A truncated model keeps entries mod `z^N`.
    pub fn new(
        base: LocalBase<F>,
        rows: Vec<Vec<Poly<F::Elem>>>,
        h: i64,
        precision: usize,
        exact: bool,
    ) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::input("a local shtuka needs a non-empty square matrix"));
        }
        if precision == 0 {
            return Err(Error::input("precision must be positive"));
        }
        let f = &base.field;
        if base.residue_field_zeta() != Some(base.residue_field().zero()) {
            return Err(Error::input("ζ must reduce to 0 in the residue field"));
        }
        if !exact && !f.is_zero(&base.zeta) {
            return Err(Error::input("truncated models need ζ = 0"));
        }
        let ring = PolyRing::new(f.clone());
        let n = (!exact).then_some(precision);
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(|e| truncated(&ring, e, n)).collect())
            .collect();
        Ok(LocalShtuka {
            base,
            mat: Matrix::from_rows(rows),
            h,
            precision,
            exact,
        })
    }

    /// `𝟙(n)`: rank one with `τ = (z - ζ)^{-n}`.
    pub fn one_twist(base: &LocalBase<F>, n: i64, precision: usize) -> Result<Self> {
        if precision as u64 <= n.unsigned_abs() {
            return Err(Error::Precision(format!(
                "precision {precision} does not exceed |n| = {}",
                n.unsigned_abs()
            )));
        }
        let f = &base.field;
        let ring = PolyRing::new(f.clone());
        let (entry, h) = if n >= 0 {
            (ring.one(), n)
        } else {
            let lin = vec![f.neg(&base.zeta), f.one()];
            (ring.pow(&lin, n.unsigned_abs()), 0)
        };
        LocalShtuka::new(base.clone(), vec![vec![entry]], h, precision, true)
    }

    pub fn base(&self) -> &LocalBase<F> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Matrix<Poly<F::Elem>> {
        &self.mat
    }

    /// The exponent `h` in `τ = mat · (z - ζ)^{-h}`.
    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn ring(&self) -> PolyRing<F> {
        PolyRing::new(self.base.field.clone())
    }

    fn trunc_bound(&self) -> Option<usize> {
        (!self.exact).then_some(self.precision)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.base != other.base {
            return Err(Error::input("local shtukas over different bases"));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let ring = self.ring();
        let (r, s) = (self.rank(), other.rank());
        let h = self.h.max(other.h);
        let lin = vec![self.base.field.neg(&self.base.zeta), self.base.field.one()];
        // bring both blocks to the common exponent h
        let lift = |m: &Matrix<Poly<F::Elem>>, hh: i64, i: usize, j: usize| {
            ring.mul(m.get(i, j), &ring.pow(&lin, (h - hh) as u64))
        };
        let rows = (0..r + s)
            .map(|i| {
                (0..r + s)
                    .map(|j| match (i < r, j < r) {
                        (true, true) => lift(&self.mat, self.h, i, j),
                        (false, false) => lift(&other.mat, other.h, i - r, j - r),
                        _ => ring.zero(),
                    })
                    .collect()
            })
            .collect();
        LocalShtuka::new(
            self.base.clone(),
            rows,
            h,
            self.precision.min(other.precision),
            self.exact && other.exact,
        )
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let ring = self.ring();
        let (r, s) = (self.rank(), other.rank());
        let rows = (0..r * s)
            .map(|i| {
                (0..r * s)
                    .map(|j| ring.mul(self.mat.get(i / s, j / s), other.mat.get(i % s, j % s)))
                    .collect()
            })
            .collect();
        LocalShtuka::new(
            self.base.clone(),
            rows,
            self.h + other.h,
            self.precision.min(other.precision),
            self.exact && other.exact,
        )
    }

    /// Order at `z = ζ`; `None` for zero, or beyond the precision of a
    /// truncated model.
    fn ord_at_zeta(&self, a: &[F::Elem]) -> Option<usize> {
        let f = &self.base.field;
        if self.exact {
            let shifted = self.ring().compose(a, &[self.base.zeta.clone(), f.one()]);
            low_order(f, &shifted)
        } else {
            low_order(f, a).filter(|o| *o < self.precision)
        }
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> Poly<F::Elem> {
        let m: Vec<Vec<Poly<F::Elem>>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.mat.get(i, j).clone()).collect())
            .collect();
        poly_det(&self.ring(), &m, self.trunc_bound())
    }

    /// Elementary divisors `(z - ζ)^{e_i}` of `mat`, `e_1 ≤ ... ≤ e_r`.
    fn elementary_divisors(&self) -> Result<Vec<i64>> {
        let r = self.rank();
        let mut prev = 0i64;
        let mut out = Vec::with_capacity(r);
        for j in 1..=r {
            let mut best: Option<usize> = None;
            for rows in subsets(r, j) {
                for cols in subsets(r, j) {
                    if let Some(o) = self.ord_at_zeta(&self.minor(&rows, &cols)) {
                        best = Some(best.map_or(o, |x| x.min(o)));
                    }
                }
            }
            let d = match best {
                Some(d) => d as i64,
                None if self.exact => return Err(Error::input("τ is not invertible")),
                None => {
                    return Err(Error::Precision(format!(
                        "every {j}x{j} minor vanishes modulo z^{}",
                        self.precision
                    )))
                }
            };
            if d >= self.precision as i64 {
                return Err(Error::Precision(format!(
                    "order {d} of the {j}x{j} minors is not below the precision {}",
                    self.precision
                )));
            }
            out.push(d - prev);
            prev = d;
        }
        Ok(out)
    }

    /// `ord_z det τ_D`
    fn newton_slope(&self) -> Result<i64> {
        let f = &self.base.field;
        let k = f.residue_field();
        let all: Vec<usize> = (0..self.rank()).collect();
        let det = self.minor(&all, &all);
        let red = det
            .iter()
            .map(|c| f.residue(&self.base.residue, c))
            .collect::<Option<Vec<FfElem>>>()
            .ok_or_else(|| Error::input("needs good model: det τ is not integral at the place"))?;
        let o = match low_order(&k, &red) {
            Some(o) if o < self.precision => o as i64,
            Some(o) => {
                return Err(Error::Precision(format!(
                    "z-order {o} of det τ_D is not below the precision {}",
                    self.precision
                )))
            }
            None if self.exact => return Err(Error::input("det τ_D vanishes")),
            None => {
                return Err(Error::Precision(format!(
                    "det τ_D vanishes modulo z^{}",
                    self.precision
                )))
            }
        };
        Ok(o - self.h * self.rank() as i64)
    }

    /// `(t_N, t_H, μ)` and the weak-admissibility verdict (rank ≤ 2; larger
    /// ranks report `Undecided`).
    pub fn hodge_pink(&self) -> Result<HodgePinkData> {
        let mut mu: Vec<i64> = self.elementary_divisors()?.iter().map(|e| self.h - e).collect();
        mu.sort_by(|a, b| b.cmp(a));
        let t_h = -mu.iter().sum::<i64>();
        let t_n = self.newton_slope()?;
        let weakly_admissible = if self.rank() == 1 {
            if t_h == t_n {
                Admissibility::Admissible
            } else {
                Admissibility::NotAdmissible
            }
        } else if t_h != t_n {
            Admissibility::NotAdmissible
        } else if self.exact && self.rank() == 2 {
            self.isocrystal()?.weakly_admissible()?
        } else {
            Admissibility::Undecided
        };
        Ok(HodgePinkData {
            t_n,
            t_h,
            mu,
            weakly_admissible,
        })
    }

    /// `(D, τ_D, q_D)` with `τ_D = mat(k) z^{-h}` and `q_D` spanned by the
    /// columns of `w^h mat(w + ζ)^{-1}`.
    pub fn isocrystal(&self) -> Result<IsocrystalHP<F>> {
        if !self.exact {
            return Err(Error::input("the isocrystal needs an exact model"));
        }
        let f = &self.base.field;
        let k = f.residue_field();
        let kz = RatFuncField::new(k.clone(), "z");
        let z_h = kz.pow_signed(&kz.gen(), -self.h).expect("z is invertible");
        let tau = self
            .mat
            .to_rows()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| {
                        let red = e
                            .iter()
                            .map(|c| f.residue(&self.base.residue, c))
                            .collect::<Option<Vec<FfElem>>>()
                            .ok_or_else(|| Error::input("needs good model: coefficient not integral"))?;
                        Ok(kz.mul(&kz.from_poly(red), &z_h))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let lw = RatFuncField::new(f.clone(), "w");
        let ring = self.ring();
        let shift = [self.base.zeta.clone(), f.one()];
        let mw = self.mat.map(|e| lw.from_poly(ring.compose(e, &shift)));
        let inv = matrix::inverse(&lw, &mw).ok_or_else(|| Error::input("τ is not invertible"))?;
        let w_h = lw.pow_signed(&lw.gen(), self.h).unwrap();
        let q_basis = matrix::scale(&lw, &w_h, &inv);
        IsocrystalHP::new(self.base.clone(), Matrix::from_rows(tau), q_basis)
    }

    /// `τ_self = U τ_other` with `U` and `U^{-1}` regular at `z = 0` and at
    /// `z = ζ`.
    pub fn equivalent_up_to_unit(&self, other: &Self) -> Result<bool> {
        self.compatible(other)?;
        if !self.exact || !other.exact {
            return Err(Error::input("unit comparison needs exact models"));
        }
        if self.rank() != other.rank() {
            return Ok(false);
        }
        let f = &self.base.field;
        let lz = RatFuncField::new(f.clone(), "z");
        let a = self.mat.map(|e| lz.from_poly(e.clone()));
        let b = other.mat.map(|e| lz.from_poly(e.clone()));
        let b_inv = matrix::inverse(&lz, &b).ok_or_else(|| Error::input("τ is not invertible"))?;
        let lin = lz.from_poly(vec![f.neg(&self.base.zeta), f.one()]);
        let shift = lz.pow_signed(&lin, other.h - self.h).unwrap();
        let u = matrix::scale(&lz, &shift, &matrix::mul(&lz, &a, &b_inv));
        let ring = self.ring();
        let regular_at = |x: &RatFunc<F::Elem>, pt: &F::Elem| {
            let den = ring.compose(&x.den, &[pt.clone(), f.one()]);
            !f.is_zero(&ring.coeff(&den, 0))
        };
        let unit_at = |x: &RatFunc<F::Elem>, pt: &F::Elem| {
            let num = ring.compose(&x.num, &[pt.clone(), f.one()]);
            regular_at(x, pt) && !f.is_zero(&ring.coeff(&num, 0))
        };
        let det = matrix::det(&lz, &u);
        Ok([f.zero(), self.base.zeta.clone()]
            .iter()
            .all(|pt| u.entries().iter().all(|x| regular_at(x, pt)) && unit_at(&det, pt)))
    }

    pub fn format_matrix(&self) -> Vec<Vec<String>> {
        let f = &self.base.field;
        self.mat
            .to_rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| crate::algebra::poly::format_poly(f, e, "z"))
                    .collect()
            })
            .collect()
    }
}

impl<F: ShtukaBase> LocalBase<F> {
    fn residue_field(&self) -> FiniteField {
        self.field.residue_field()
    }

    fn residue_field_zeta(&self) -> Option<FfElem> {
        self.field.residue(&self.residue, &self.zeta)
    }
}

/// A rank-`r` isocrystal `(D, τ_D)` over `k((z))` with a Hodge-Pink lattice
/// `q_D` over `L[[w]]`, `w = z - ζ`, given by a basis relative to `p_D`.
#[derive(Clone, Debug)]
pub struct IsocrystalHP<F: ShtukaBase> {
    base: LocalBase<F>,
    k: FiniteField,
    kz: RatFuncField<FiniteField>,
    tau: Matrix<RatFunc<FfElem>>,
    lw: RatFuncField<F>,
    q_basis: Matrix<RatFunc<F::Elem>>,
}

impl<F: ShtukaBase> IsocrystalHP<F> {
    pub fn new(base: LocalBase<F>, tau: Matrix<RatFunc<FfElem>>, q_basis: Matrix<RatFunc<F::Elem>>) -> Result<Self> {
        let k = base.field.residue_field();
        let kz = RatFuncField::new(k.clone(), "z");
        let lw = RatFuncField::new(base.field.clone(), "w");
        if !tau.is_square() || !q_basis.is_square() || tau.rows() != q_basis.rows() || tau.rows() == 0 {
            return Err(Error::input("τ_D and q_D must be square of the same rank"));
        }
        if kz.is_zero(&matrix::det(&kz, &tau)) || lw.is_zero(&matrix::det(&lw, &q_basis)) {
            return Err(Error::input("τ_D and the q_D basis must be invertible"));
        }
        Ok(IsocrystalHP {
            base,
            k,
            kz,
            tau,
            lw,
            q_basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.tau.rows()
    }

    pub fn t_n(&self) -> i64 {
        ratfunc_ord(&self.k, &matrix::det(&self.kz, &self.tau)).unwrap()
    }

    /// Hodge-Pink weights, descending.
    pub fn mu(&self) -> Result<Vec<i64>> {
        let mut mu = elementary_exponents(&self.lw, &self.q_basis)?;
        mu.sort_by(|a, b| b.cmp(a));
        Ok(mu)
    }

    pub fn t_h(&self) -> Result<i64> {
        Ok(-self.mu()?.iter().sum::<i64>())
    }

    /// `t_H` of the line through `v`: `v` is embedded via `z = w + ζ`, made
    /// primitive, and `t_H' = min_i ord_w (B^{-1} v)_i`.
    pub fn line_hodge(&self, v: &[RatFunc<FfElem>]) -> Result<i64> {
        let f = &self.base.field;
        let ring = PolyRing::new(f.clone());
        let shift = [self.base.zeta.clone(), f.one()];
        let lift = |p: &[FfElem]| -> Poly<F::Elem> {
            let lifted: Vec<F::Elem> = p.iter().map(|c| f.lift_residue(c)).collect();
            ring.compose(&lifted, &shift)
        };
        let vw: Vec<RatFunc<F::Elem>> = v
            .iter()
            .map(|x| self.lw.from_parts(lift(&x.num), lift(&x.den)).unwrap())
            .collect();
        let m0 = vw
            .iter()
            .filter_map(|x| ratfunc_ord(f, x))
            .min()
            .ok_or_else(|| Error::input("the zero vector spans no line"))?;
        let b_inv = matrix::inverse(&self.lw, &self.q_basis).unwrap();
        let u = matrix::mul_vec(&self.lw, &b_inv, &vw);
        Ok(u.iter().filter_map(|x| ratfunc_ord(f, x)).min().unwrap() - m0)
    }

    /// Whether `σ̂` acts trivially on `k`, so `τ_D` is `k((z))`-linear.
    fn is_linear(&self) -> bool {
        self.k.order() == Some(self.base.q_hat)
    }

    /// Tri-state weak admissibility, rank ≤ 2.
    pub fn weakly_admissible(&self) -> Result<Admissibility> {
        use Admissibility::*;
        let r = self.rank();
        if r > 2 {
            return Err(Error::input("weak admissibility is implemented for rank ≤ 2"));
        }
        let t_n = self.t_n();
        let mu = self.mu()?;
        let t_h = -mu.iter().sum::<i64>();
        if t_h != t_n {
            return Ok(NotAdmissible);
        }
        if r == 1 {
            return Ok(Admissible);
        }
        let kz = &self.kz;
        let (a, b, c, d) = (
            self.tau.get(0, 0),
            self.tau.get(0, 1),
            self.tau.get(1, 0),
            self.tau.get(1, 1),
        );
        let e1 = vec![kz.one(), kz.zero()];
        let e2 = vec![kz.zero(), kz.one()];
        let ord = |x: &RatFunc<FfElem>| ratfunc_ord(&self.k, x).unwrap();
        // exactly known stable lines with their eigenvalues
        let mut lines: Vec<(Vec<RatFunc<FfElem>>, RatFunc<FfElem>)> = Vec::new();
        let mut complete = false;
        let linear = self.is_linear();
        if kz.is_zero(b) && kz.is_zero(c) && a != d {
            lines.push((e1.clone(), a.clone()));
            lines.push((e2.clone(), d.clone()));
            complete = true;
        } else if kz.is_zero(c) && !kz.is_zero(b) {
            lines.push((e1.clone(), a.clone()));
            if a == d {
                complete = true;
            } else if linear {
                lines.push((vec![b.clone(), kz.sub(d, a)], d.clone()));
                complete = true;
            }
        } else if kz.is_zero(b) && !kz.is_zero(c) {
            lines.push((e2.clone(), d.clone()));
            if a == d {
                complete = true;
            } else if linear {
                lines.push((vec![kz.sub(a, d), c.clone()], a.clone()));
                complete = true;
            }
        }
        for (v, lambda) in &lines {
            if self.line_hodge(v)? > ord(lambda) {
                return Ok(NotAdmissible);
            }
        }
        if complete {
            return Ok(Admissible);
        }
        if !linear {
            return Ok(Undecided);
        }
        // t_H' of any line lies in [-μ_max, -μ_min]
        let (hi, lo) = (-mu[1], -mu[0]);
        if kz.is_zero(b) && kz.is_zero(c) {
            // scalar: every line is stable with t_N' = ord a
            let s = ord(a);
            for v in [e1, e2, vec![kz.one(), kz.one()]] {
                if self.line_hodge(&v)? > s {
                    return Ok(NotAdmissible);
                }
            }
            return Ok(if hi <= s { Admissible } else { Undecided });
        }
        // general τ_D: z-adic slopes of X^2 - tr X + det
        let tr = kz.add(a, d);
        let det = matrix::det(kz, &self.tau);
        let od = ord(&det);
        let slopes: Vec<num_rational::Ratio<i64>> = if kz.is_zero(&tr) || 2 * ord(&tr) >= od {
            vec![num_rational::Ratio::new(od, 2); 2]
        } else {
            let ot = ord(&tr);
            vec![ot.into(), (od - ot).into()]
        };
        let integral: Vec<i64> = slopes
            .iter()
            .filter(|s| s.is_integer())
            .map(|s| s.to_integer())
            .collect();
        if integral.is_empty() {
            // a stable line would give an eigenvalue of integral order
            return Ok(Admissible);
        }
        if integral.iter().all(|&s| hi <= s) {
            return Ok(Admissible);
        }
        if slopes[0] != slopes[1] && integral.iter().any(|&s| lo > s) {
            return Ok(NotAdmissible);
        }
        Ok(Undecided)
    }
}

/// `M̂_𝔭(M)` for `M` over `F_q(θ)` and `𝔭 = (t - c)`: substitutes `t = z + c`.
/// Denominators must be powers of `t - θ` times constants.
pub fn localize_motive(
    m: &Motive<RationalField>,
    p: &PrimeOfA,
    precision: usize,
) -> Result<LocalShtuka<RationalField>> {
    let fq = m.afield().fq().clone();
    if p.degree() != 1 {
        return Err(Error::input(
            "localization over F_q(θ) is implemented for primes of degree 1",
        ));
    }
    let c = fq.neg(&p.poly()[0]);
    let base = LocalBase::at_point(&fq, &c);
    let k = base.field.clone();
    let ring = PolyRing::new(k.clone());
    let lin = Motive::t_minus_theta(m.afield());
    let mut parts = Vec::new();
    for e in m.matrix().entries() {
        let mut den = e.den.clone();
        let mut a = 0i64;
        while let Some(q) = ring.div_exact(&den, &lin) {
            den = q;
            a += 1;
        }
        if den.len() != 1 {
            return Err(Error::input(format!(
                "denominator {} is not a power of t - θ",
                ring.format(&e.den, "t")
            )));
        }
        let u_inv = k.inv(&den[0]).unwrap();
        parts.push((ring.scale(&u_inv, &e.num), a));
    }
    let h = parts.iter().map(|(_, a)| *a).max().unwrap_or(0);
    let shift = [k.constant(c.clone()), k.one()];
    let r = m.rank();
    let mut rows = vec![Vec::with_capacity(r); r];
    for (idx, (num, a)) in parts.into_iter().enumerate() {
        let entry = ring.mul(&num, &ring.pow(&lin, (h - a) as u64));
        let entry = ring.compose(&entry, &shift);
        if entry.iter().any(|x| k.residue(&base.residue, x).is_none()) {
            return Err(Error::input(format!(
                "needs good model: a coefficient has a pole at θ = {}",
                fq.format_elem(&c)
            )));
        }
        rows[idx / r].push(entry);
    }
    LocalShtuka::new(base, rows, h, precision, true)
}

fn series_mul(ring: &PolyRing<FiniteField>, a: &[FfElem], b: &[FfElem], n: usize) -> Poly<FfElem> {
    truncated(ring, ring.mul(a, b), Some(n))
}

fn series_inv(k: &FiniteField, a: &[FfElem], n: usize) -> Option<Poly<FfElem>> {
    let a0_inv = k.inv(a.first()?)?;
    let mut b = vec![a0_inv.clone()];
    for i in 1..n {
        let mut s = k.zero();
        for j in 1..=i.min(a.len() - 1) {
            s = k.add(&s, &k.mul(&a[j], &b[i - j]));
        }
        b.push(k.neg(&k.mul(&a0_inv, &s)));
    }
    Some(PolyRing::new(k.clone()).normalized(b))
}

fn series_eval(ring: &PolyRing<FiniteField>, p: &[FfElem], x: &[FfElem], n: usize) -> Poly<FfElem> {
    p.iter().rev().fold(ring.zero(), |acc, c| {
        ring.add(&series_mul(ring, &acc, x, n), &ring.constant(c.clone()))
    })
}

/// `M̂_𝔭(M)` for `M` over a finite A-field of characteristic `𝔭`, modulo
/// `z^N` with `z = 𝔭(t)`: the `deg 𝔭`-fold product `τ τ^σ ⋯` on the
/// component where `t -> θ`, with `t` expanded as the series `t̂` solving
/// `𝔭(t̂) = z`, `t̂ ≡ θ`.
pub fn localize_finite(m: &Motive<FiniteField>, precision: usize) -> Result<LocalShtuka<FiniteField>> {
    let af = m.afield();
    let k = af.field().clone();
    let p = af.characteristic().expect("finite A-fields have a characteristic");
    let f = p.degree();
    let n = precision;
    let ring = PolyRing::new(k.clone());
    let pi: Vec<FfElem> = p.poly().iter().map(|c| af.constant(c)).collect();
    let dpi = ring.derivative(&pi);
    let z = ring.x();
    // Newton iteration for 𝔭(t̂) = z
    let mut t_hat = ring.constant(af.theta().clone());
    for _ in 0..=n {
        let resid = ring.sub(&series_eval(&ring, &pi, &t_hat, n), &z);
        let resid = truncated(&ring, resid, Some(n));
        if resid.is_empty() {
            break;
        }
        let d = series_inv(&k, &series_eval(&ring, &dpi, &t_hat, n), n)
            .ok_or_else(|| Error::internal("𝔭 is not separable at θ"))?;
        t_hat = ring.sub(&t_hat, &series_mul(&ring, &resid, &d, n));
    }
    let s = ring.sub(&t_hat, &ring.constant(af.theta().clone()));
    // t̂ - θ = z v with v a unit
    let v = if s.is_empty() { Vec::new() } else { s[1..].to_vec() };
    let v_inv = series_inv(&k, &ring.normalized(v), n).ok_or_else(|| Error::internal("t̂ - θ is not a uniformizer"))?;
    let lin = Motive::t_minus_theta(af);
    let prod = m.sigma_product(f);
    let mut parts = Vec::new();
    for e in prod.entries() {
        let mut den = e.den.clone();
        let mut a = 0i64;
        while let Some(q) = ring.div_exact(&den, &lin) {
            den = q;
            a += 1;
        }
        parts.push((e.num.clone(), den, a));
    }
    let h = parts.iter().map(|(_, _, a)| *a).max().unwrap_or(0);
    let r = m.rank();
    let mut rows = vec![Vec::with_capacity(r); r];
    for (idx, (num, u, a)) in parts.into_iter().enumerate() {
        let u_inv = series_inv(&k, &series_eval(&ring, &u, &t_hat, n), n)
            .ok_or_else(|| Error::input("denominator vanishes at θ"))?;
        let mut entry = series_mul(&ring, &series_eval(&ring, &num, &t_hat, n), &u_inv, n);
        for _ in 0..a {
            entry = series_mul(&ring, &entry, &v_inv, n);
        }
        let entry = series_mul(&ring, &entry, &ring.pow(&z, (h - a) as u64), n);
        rows[idx / r].push(entry);
    }
    let q_hat = af.q().pow(f as u32);
    LocalShtuka::new(LocalBase::finite(&k, q_hat), rows, h, precision, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base3() -> LocalBase<RationalField> {
        let f3 = FiniteField::prime(3).unwrap();
        LocalBase::at_point(&f3, &f3.one())
    }

    #[test]
    fn one_twist_anchor() {
        let b = base3();
        for n in -5..=5 {
            let hp = LocalShtuka::one_twist(&b, n, 16).unwrap().hodge_pink().unwrap();
            assert_eq!((hp.t_n, hp.t_h, hp.mu.clone()), (-n, -n, vec![n]));
            assert_eq!(hp.weakly_admissible, Admissibility::Admissible);
        }
        assert!(LocalShtuka::one_twist(&b, 3, 3).is_err());
    }

    #[test]
    fn tensor_law() {
        let b = base3();
        let x = LocalShtuka::one_twist(&b, 2, 16).unwrap();
        let y = LocalShtuka::one_twist(&b, -3, 16).unwrap();
        let xy = x.tensor(&y).unwrap();
        assert!(xy
            .equivalent_up_to_unit(&LocalShtuka::one_twist(&b, -1, 16).unwrap())
            .unwrap());
        assert_eq!(xy.hodge_pink().unwrap().mu, vec![-1]);
    }

    #[test]
    fn violating_rank_two() {
        let b = base3();
        let k = b.field.residue_field();
        let kz = RatFuncField::new(k.clone(), "z");
        let lw = RatFuncField::new(b.field.clone(), "w");
        let tau = Matrix::from_rows(vec![
            vec![kz.pow_signed(&kz.gen(), -2).unwrap(), kz.zero()],
            vec![kz.zero(), kz.one()],
        ]);
        let q = matrix::scale(&lw, &lw.gen(), &matrix::identity(&lw, 2));
        let iso = IsocrystalHP::new(b, tau, q).unwrap();
        assert_eq!((iso.t_n(), iso.t_h().unwrap()), (-2, -2));
        assert_eq!(iso.weakly_admissible().unwrap(), Admissibility::NotAdmissible);
    }
}
