//! Drinfeld modules `φ: A -> K{τ}` given by `φ_t`, torsion over finite
//! A-fields, and good reduction over `F_q(θ)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::Ratio;

use crate::afield::{AField, CoefficientField, RationalField};
use crate::algebra::apoly::{factor_apoly, ord, PrimeOfA};
use crate::algebra::factor::splitting_degree;
use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::fp_linalg::FpMatrix;
use crate::algebra::poly::{Poly, PolyRing};
use crate::error::{Error, Result};
use crate::twisted::{TwistedPoly, TwistedRing};

/// Default bound on `[L : F_q]` for the field holding a torsion module.
pub const DEFAULT_DEGREE_CAP: usize = 32;

#[derive(Clone, Debug)]
pub struct DrinfeldModule<F: CoefficientField> {
    afield: AField<F>,
    phi_t: TwistedPoly<F::Elem>,
    cache: Arc<Mutex<HashMap<Vec<FfElem>, TwistedPoly<F::Elem>>>>,
}

impl<F: CoefficientField> PartialEq for DrinfeldModule<F> {
    fn eq(&self, other: &Self) -> bool {
        self.afield == other.afield && self.phi_t == other.phi_t
    }
}

impl<F: CoefficientField> DrinfeldModule<F> {
    pub fn new(afield: AField<F>, phi_t: TwistedPoly<F::Elem>) -> Result<Self> {
        let ring = afield.twisted_ring();
        let phi_t = ring.normalized(phi_t);
        if phi_t.len() < 2 {
            return Err(Error::input("φ_t must have positive τ-degree"));
        }
        if phi_t[0] != *afield.theta() {
            return Err(Error::input(format!(
                "constant term of φ_t is {}, expected θ = {}",
                afield.field().format_elem(&phi_t[0]),
                afield.field().format_elem(afield.theta())
            )));
        }
        Ok(DrinfeldModule {
            afield,
            phi_t,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// `Φ_t = θ + τ`
    pub fn carlitz(afield: AField<F>) -> Self {
        let f = afield.field();
        let phi_t = vec![afield.theta().clone(), f.one()];
        DrinfeldModule::new(afield, phi_t).expect("Carlitz module is well formed")
    }

    pub fn afield(&self) -> &AField<F> {
        &self.afield
    }

    pub fn field(&self) -> &F {
        self.afield.field()
    }

    pub fn ring(&self) -> TwistedRing<F> {
        self.afield.twisted_ring()
    }

    pub fn phi_t(&self) -> &[F::Elem] {
        &self.phi_t
    }

    pub fn rank(&self) -> usize {
        self.phi_t.len() - 1
    }

    /// `g_i`, the coefficient of `τ^i` in `φ_t`.
    pub fn coefficient(&self, i: usize) -> F::Elem {
        self.phi_t.get(i).cloned().unwrap_or_else(|| self.field().zero())
    }

    /// `φ_a` by Horner's rule in `K{τ}`.
    pub fn phi_of(&self, a: &[FfElem]) -> TwistedPoly<F::Elem> {
        let fq = self.afield.fq();
        let a = PolyRing::new(fq.clone()).normalized(a.to_vec());
        if let Some(v) = self.cache.lock().unwrap().get(&a) {
            return v.clone();
        }
        let ring = self.ring();
        let out = a.iter().rev().fold(Vec::new(), |acc, c| {
            ring.add(&ring.mul(&acc, &self.phi_t), &ring.constant(self.afield.constant(c)))
        });
        self.cache.lock().unwrap().insert(a, out.clone());
        out
    }

    pub fn format_phi_t(&self) -> String {
        self.ring().format(&self.phi_t)
    }
}

/// `G[a]` inside the smallest extension of a finite `K` containing it.
#[derive(Clone, Debug)]
pub struct TorsionModule {
    pub a: Poly<FfElem>,
    /// `L`, the field holding the kernel.
    pub field: FiniteField,
    /// `[L : K]`
    pub extension_degree: usize,
    /// F_q-basis of the kernel.
    pub basis: Vec<FfElem>,
    /// F_p-basis `β_s v_j` of the kernel, `β_s` an F_p-basis of F_q.
    pub fp_basis: Vec<FfElem>,
    /// `φ_t` on the F_p-basis.
    pub phi_t_matrix: FpMatrix,
    /// `x -> x^{q^d}` on the F_p-basis.
    pub frobenius_matrix: FpMatrix,
}

impl TorsionModule {
    /// F_q-dimension.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x` on the F_p-basis, if `x` lies in the kernel.
    pub fn fp_coordinates(&self, x: &FfElem) -> Option<Vec<u32>> {
        let cols: Vec<Vec<u32>> = self.fp_basis.iter().map(|v| v.coords().to_vec()).collect();
        FpMatrix::from_columns(self.field.p(), self.field.degree(), &cols).solve(x.coords())
    }

    /// Every element of the kernel; only for small modules.
    pub fn elements(&self) -> Vec<FfElem> {
        let l = &self.field;
        let p = l.p() as u128;
        let k = self.fp_basis.len() as u32;
        (0..p.pow(k))
            .map(|mut idx| {
                let mut acc = l.zero();
                for v in &self.fp_basis {
                    let c = l.from_int((idx % p) as i64);
                    idx /= p;
                    acc = l.add(&acc, &l.mul(&c, v));
                }
                acc
            })
            .collect()
    }
}

fn fp_scalars(fq: &FiniteField, l: &FiniteField) -> Result<Vec<FfElem>> {
    (0..fq.degree())
        .map(|j| {
            let mut e = vec![0u32; fq.degree()];
            e[j] = 1;
            l.embed_from(fq, &fq.elem(e))
        })
        .collect()
}

impl DrinfeldModule<FiniteField> {
    /// `[K : F_q]`
    pub fn degree(&self) -> usize {
        self.afield.degree()
    }

    /// The degree over `K` of the field generated by `G[a]`.
    pub fn torsion_field_degree(&self, a: &[FfElem]) -> Result<usize> {
        let k = self.field();
        let phi_a = self.phi_of(a);
        let q = self.afield.q();
        // φ_a(X)/X as an ordinary polynomial
        let top = q.pow(phi_a.len() as u32 - 1) as usize;
        let mut ord = vec![k.zero(); top];
        let mut qi = 1usize;
        for c in &phi_a {
            ord[qi - 1] = c.clone();
            qi *= q as usize;
        }
        splitting_degree(k, &ord)
    }

    /// `G[a]` as an A/(a)-module with its Frobenius action.
    pub fn torsion(&self, a: &[FfElem], cap: usize) -> Result<TorsionModule> {
        let fq = self.afield.fq().clone();
        let ring = PolyRing::new(fq.clone());
        let a = ring.normalized(a.to_vec());
        if a.is_empty() {
            return Err(Error::input("torsion of a = 0 is not finite"));
        }
        let chr = self.afield.characteristic().unwrap();
        if !ring.is_one(&ring.gcd(&a, chr.poly())) {
            return Err(Error::input(format!(
                "étale hypothesis violated: {} shares a factor with the A-characteristic {}",
                ring.format(&a, "t"),
                chr.format(&fq)
            )));
        }
        let d = self.degree();
        let m = if a.len() == 1 {
            1
        } else {
            self.torsion_field_degree(&a)?
        };
        if d * m > cap {
            return Err(Error::Resource(format!(
                "torsion field has degree {} over F_q, above the cap {cap}",
                d * m
            )));
        }
        let k = self.field();
        let l = k.extension(m)?;
        let phi_a = self.phi_of(&a);
        let tw = self.ring();
        let basis = if a.len() == 1 {
            Vec::new()
        } else {
            tw.kernel_in(&phi_a, &fq, &l)?
        };
        let expected = self.rank() * (a.len() - 1);
        if basis.len() != expected {
            return Err(Error::internal(format!(
                "kernel has F_q-dimension {} but rank·deg a = {expected}",
                basis.len()
            )));
        }
        let scalars = fp_scalars(&fq, &l)?;
        let fp_basis: Vec<FfElem> = basis
            .iter()
            .flat_map(|v| scalars.iter().map(|s| l.mul(s, v)).collect::<Vec<_>>())
            .collect();
        let mut module = TorsionModule {
            a,
            field: l.clone(),
            extension_degree: m,
            basis,
            fp_basis,
            phi_t_matrix: FpMatrix::zeros(l.p(), 0, 0),
            frobenius_matrix: FpMatrix::zeros(l.p(), 0, 0),
        };
        let qd = self.afield.q().pow(d as u32);
        let n = module.fp_basis.len();
        let mut phi_cols = Vec::with_capacity(n);
        let mut frob_cols = Vec::with_capacity(n);
        for v in &module.fp_basis {
            let img = tw.evaluate_in(&self.phi_t, &l, v)?;
            phi_cols.push(
                module
                    .fp_coordinates(&img)
                    .ok_or_else(|| Error::internal("kernel is not φ_t-stable"))?,
            );
            let fr = l.pow(v, qd);
            frob_cols.push(
                module
                    .fp_coordinates(&fr)
                    .ok_or_else(|| Error::internal("kernel is not Frobenius-stable"))?,
            );
        }
        module.phi_t_matrix = FpMatrix::from_columns(l.p(), n, &phi_cols);
        module.frobenius_matrix = FpMatrix::from_columns(l.p(), n, &frob_cols);
        if module.phi_t_matrix.mul(&module.frobenius_matrix) != module.frobenius_matrix.mul(&module.phi_t_matrix) {
            return Err(Error::internal("Frobenius does not commute with φ_t"));
        }
        self.check_free(&module)?;
        Ok(module)
    }

    /// `G[a]` is free of rank r over A/(a) iff `G[a][l]` has F_q-dimension
    /// `r deg l` for each prime `l | a`.
    fn check_free(&self, t: &TorsionModule) -> Result<()> {
        if t.a.len() <= 2 {
            return Ok(());
        }
        let fq = self.afield.fq();
        let (_, primes) = factor_apoly(fq, &t.a, 0)?;
        let tw = self.ring();
        for (l, _) in primes {
            let phi_l = self.phi_of(l.poly());
            let images: Vec<Vec<u32>> = t
                .fp_basis
                .iter()
                .map(|v| {
                    let img = tw.evaluate_in(&phi_l, &t.field, v)?;
                    Ok(t.fp_coordinates(&img).unwrap())
                })
                .collect::<Result<_>>()?;
            let mat = FpMatrix::from_columns(t.field.p(), t.fp_basis.len(), &images);
            let dim = mat.kernel().len() / fq.degree();
            if dim != self.rank() * l.degree() {
                return Err(Error::internal(format!(
                    "G[a] is not free: the {}-torsion has dimension {dim}",
                    l.format(fq)
                )));
            }
        }
        Ok(())
    }

    /// Matrix of the `q^d`-Frobenius on `G[l]` over `F_l = A/(l)`, in an
    /// `F_l`-basis of the torsion. `fl` must be the residue field of `l`.
    pub fn frobenius_on_torsion(&self, l: &PrimeOfA, fl: &FiniteField, cap: usize) -> Result<Vec<Vec<FfElem>>> {
        let fq = self.afield.fq().clone();
        let t = self.torsion(l.poly(), cap)?;
        let lf = &t.field;
        let tw = self.ring();
        let scalars = fp_scalars(&fq, lf)?;
        let deg_l = l.degree();
        // greedy F_l-basis: F_l v = span_{F_p}{β_s φ_t^i v}
        let mut span = crate::algebra::fp_linalg::FpSpan::new(lf.p(), lf.degree());
        let mut gens: Vec<FfElem> = Vec::new();
        let mut spanning: Vec<FfElem> = Vec::new();
        for v in &t.basis {
            if span.contains(v.coords()) {
                continue;
            }
            let mut orbit = vec![v.clone()];
            for _ in 1..deg_l {
                let next = tw.evaluate_in(&self.phi_t, lf, orbit.last().unwrap())?;
                orbit.push(next);
            }
            for w in &orbit {
                for s in &scalars {
                    let sw = lf.mul(s, w);
                    span.insert(sw.coords());
                    spanning.push(sw);
                }
            }
            gens.push(v.clone());
        }
        let r = gens.len();
        if r != self.rank() {
            return Err(Error::internal("torsion is not free of rank r over F_l"));
        }
        let cols: Vec<Vec<u32>> = spanning.iter().map(|v| v.coords().to_vec()).collect();
        let sys = FpMatrix::from_columns(lf.p(), lf.degree(), &cols);
        let qd = self.afield.q().pow(self.degree() as u32);
        let e = fq.degree();
        let mut mat = vec![vec![fl.zero(); r]; r];
        for (j, g) in gens.iter().enumerate() {
            let img = lf.pow(g, qd);
            let c = sys
                .solve(img.coords())
                .ok_or_else(|| Error::internal("Frobenius image outside the torsion"))?;
            // c is indexed by (generator k, power i, scalar s)
            for (k, row) in mat.iter_mut().enumerate() {
                let blocks: Vec<FfElem> = (0..deg_l)
                    .map(|i| fq.elem((0..e).map(|s| c[(k * deg_l + i) * e + s]).collect()))
                    .collect();
                row[j] = fl.from_relative(&blocks);
            }
        }
        Ok(mat)
    }
}

/// Outcome of the good-reduction test at a finite place of `F_q(θ)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ReductionVerdict {
    /// Conjugating by `λ` with `v(λ) = e` gives integral coefficients and a
    /// unit leading coefficient.
    Good { e: i64 },
    /// Only the rational exponent `e` works: good reduction after a
    /// ramified extension.
    PotentiallyGoodOnly { e: Ratio<i64> },
    /// Even the rational exponent leaves coefficient `τ^witness` non-integral.
    NotPotentiallyGood { e: Ratio<i64>, witness: usize },
}

impl ReductionVerdict {
    pub fn is_good(&self) -> bool {
        matches!(self, ReductionVerdict::Good { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ReductionVerdict::Good { .. } => "GOOD",
            ReductionVerdict::PotentiallyGoodOnly { .. } => "POTENTIALLY-GOOD-ONLY",
            ReductionVerdict::NotPotentiallyGood { .. } => "NOT-POTENTIALLY-GOOD",
        }
    }
}

impl DrinfeldModule<RationalField> {
    /// Valuations `v(g_i)` for the nonzero `g_i`, `i >= 1`.
    fn coefficient_valuations(&self, v: &PrimeOfA) -> Result<Vec<(usize, i64)>> {
        let k = self.field();
        (1..self.phi_t.len())
            .filter(|&i| !k.is_zero(&self.phi_t[i]))
            .map(|i| Ok((i, ord(k, &self.phi_t[i], v)?)))
            .collect()
    }

    pub fn good_reduction(&self, v: &PrimeOfA) -> Result<ReductionVerdict> {
        let q = self.afield.q() as i64;
        let r = self.rank();
        let vals = self.coefficient_valuations(v)?;
        let v_r = vals.last().unwrap().1;
        let qr1 = q.pow(r as u32) - 1;
        let e = Ratio::new(-v_r, qr1);
        for &(i, vi) in &vals {
            let scaled = Ratio::from(vi) + e * Ratio::from(q.pow(i as u32) - 1);
            if scaled < Ratio::from(0) {
                return Ok(ReductionVerdict::NotPotentiallyGood { e, witness: i });
            }
        }
        if e.is_integer() {
            Ok(ReductionVerdict::Good { e: e.to_integer() })
        } else {
            Ok(ReductionVerdict::PotentiallyGoodOnly { e })
        }
    }

    /// The reduction of the normalized model at a place of good reduction,
    /// as a Drinfeld module over `F_v = F_q[θ]/(v)` with θ printed as `x`.
    pub fn reduce_at(&self, v: &PrimeOfA) -> Result<DrinfeldModule<FiniteField>> {
        let ReductionVerdict::Good { e } = self.good_reduction(v)? else {
            return Err(Error::input("no good reduction at this place"));
        };
        let fq = self.afield.fq();
        let k = self.field();
        let fv = v.residue_field(fq, "x")?;
        let q = self.afield.q() as i64;
        let vpoly = k.from_poly(v.poly().to_vec());
        let lambda = k.pow_signed(&vpoly, e).unwrap();
        let reduce = |c: &crate::algebra::ratfunc::RatFunc<FfElem>| -> Result<FfElem> {
            let num = v.reduce(&fv, &c.num);
            let den = v.reduce(&fv, &c.den);
            fv.div(&num, &den)
                .ok_or_else(|| Error::internal("denominator vanishes at a place of good reduction"))
        };
        let theta = reduce(self.afield.theta())?;
        let af = AField::finite(fq, &fv, theta.clone())?;
        let mut phi = vec![theta];
        for i in 1..self.phi_t.len() {
            let scale = k.pow_signed(&lambda, q.pow(i as u32) - 1).unwrap();
            phi.push(reduce(&k.mul(&self.phi_t[i], &scale))?);
        }
        DrinfeldModule::new(af, phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carlitz_square() {
        let f3 = FiniteField::prime(3).unwrap();
        let af = AField::rational(&f3);
        let c = DrinfeldModule::carlitz(af.clone());
        let k = af.field();
        let th = af.theta().clone();
        let t2 = c.phi_of(&[f3.zero(), f3.zero(), f3.one()]);
        let th3 = k.pow(&th, 3);
        assert_eq!(t2, vec![k.mul(&th, &th), k.add(&th, &th3), k.one()]);
    }

    #[test]
    fn carlitz_torsion_over_f2() {
        let f2 = FiniteField::prime(2).unwrap();
        let af = AField::finite(&f2, &f2, f2.zero()).unwrap();
        let c = DrinfeldModule::carlitz(af);
        let t = c.torsion(&[f2.one(), f2.one()], DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(t.dimension(), 1);
        assert_eq!(t.elements().len(), 2);
        assert!(c.torsion(&[f2.zero(), f2.one()], DEFAULT_DEGREE_CAP).is_err());
    }
}
