//! The z-adic cyclotomic tower over `F_q̂(ζ)`:
//! `x_0^{q̂-1} = -ζ`, `x_n^{q̂} + ζ x_n = x_{n-1}`, checked as identities in
//! the triangular quotient rings.

use serde::Serialize;

use crate::algebra::field::Field;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::poly::{format_poly, Poly, PolyRing};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::error::{Error, Result};

pub const MAX_LEVEL: usize = 2;

/// `F[x]/(m)` for a monic irreducible `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleExtension<F: Field> {
    pub ring: PolyRing<F>,
    modulus: Poly<F::Elem>,
    var: String,
}

impl<F: Field> SimpleExtension<F> {
    pub fn new(base: F, modulus: Poly<F::Elem>, var: &str) -> Result<Self> {
        let ring = PolyRing::new(base);
        let modulus = ring.normalized(modulus);
        if modulus.len() < 2 || !ring.field.is_one(modulus.last().unwrap()) {
            return Err(Error::input("the modulus must be monic of positive degree"));
        }
        Ok(SimpleExtension {
            ring,
            modulus,
            var: var.to_string(),
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[F::Elem] {
        &self.modulus
    }

    pub fn gen(&self) -> Poly<F::Elem> {
        self.ring.rem(&self.ring.x(), &self.modulus)
    }

    pub fn embed(&self, c: F::Elem) -> Poly<F::Elem> {
        self.ring.constant(c)
    }
}

impl<F: Field> Field for SimpleExtension<F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        self.ring.zero()
    }

    fn one(&self) -> Self::Elem {
        self.ring.one()
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.ring.add(a, b)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.ring.sub(a, b)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.ring.neg(a)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.ring.mul_mod(a, b, &self.modulus)
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.is_empty() {
            return None;
        }
        let (g, s, _) = self.ring.xgcd(a, &self.modulus);
        self.ring.is_one(&g).then(|| self.ring.rem(&s, &self.modulus))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.ring.constant(self.ring.field.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.ring.field.characteristic()
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        format_poly(&self.ring.field, a, &self.var)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    /// `[E_n : E_{n-1}]`
    pub relative_degree: usize,
    pub separable: bool,
    /// The defining relation holds for the class of `x_n`.
    pub recursion: bool,
    /// Every `u ∈ F_q̂^×` sends `x_n` to another root of its relation.
    pub action_permutes_roots: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerReport {
    pub q_hat: u128,
    pub levels: Vec<LevelReport>,
    /// `[E_N : F_q̂(ζ)] = (q̂ - 1) q̂^N`
    pub total_degree: usize,
    /// Coefficients of `σ̂(ℓ⁺)` and `(z - ζ) ℓ⁺` agree up to `z^N`.
    pub sigma_law: bool,
    /// `u ↦ (x_0 ↦ u x_0)` is multiplicative and injective on `F_q̂^×`.
    pub character_multiplicative: bool,
    pub all_hold: bool,
}

/// Level-`n` data shared by the generic checks: the new field, the class of
/// `x_n`, the image of `x_{n-1}` (or `None` at level 0), and `ζ`.
fn check_level<F: Field>(
    e: &SimpleExtension<F>,
    level: usize,
    q_hat: u128,
    prev: Option<&F::Elem>,
    zeta: &F::Elem,
    units: &[F::Elem],
) -> LevelReport {
    let base = &e.ring.field;
    let ring = &e.ring;
    let f = e.modulus();
    let g = ring.gcd(f, &ring.derivative(f));
    let separable = ring.degree(&g) == Some(0);
    let x = e.gen();
    let z = e.embed(zeta.clone());
    let relation = |y: &Poly<F::Elem>| match prev {
        None => e.add(&e.pow(y, q_hat - 1), &z),
        Some(p) => e.sub(&e.add(&e.pow(y, q_hat), &e.mul(&z, y)), &e.embed(p.clone())),
    };
    let recursion = e.is_zero(&relation(&x));
    let mut images: Vec<Poly<F::Elem>> = Vec::new();
    let mut permutes = true;
    for u in units {
        let ux = e.mul(&e.embed(u.clone()), &x);
        // at higher levels u also moves x_{n-1}, so compare against u·x_{n-1}
        let ok = match prev {
            None => e.is_zero(&relation(&ux)),
            Some(p) => {
                let up = base.mul(u, p);
                let r = e.sub(&e.add(&e.pow(&ux, q_hat), &e.mul(&z, &ux)), &e.embed(up));
                e.is_zero(&r)
            }
        };
        permutes &= ok && !images.contains(&ux);
        images.push(ux);
    }
    LevelReport {
        level,
        relative_degree: e.degree(),
        separable,
        recursion,
        action_permutes_roots: permutes,
    }
}

/// `σ̂(ℓ⁺) = (z - ζ) ℓ⁺` up to `z^N`, given `ℓ_0, ..., ℓ_N` in one field.
fn sigma_law<F: Field>(e: &F, q_hat: u128, ells: &[F::Elem], zeta: &F::Elem) -> bool {
    let ring = PolyRing::new(e.clone());
    let lhs: Vec<F::Elem> = ells.iter().map(|l| e.pow(l, q_hat)).collect();
    let rhs = ring.mul(&[e.neg(zeta), e.one()], ells);
    (0..ells.len()).all(|n| lhs[n] == ring.coeff(&rhs, n))
}

/// Builds `E_0 ⊂ ... ⊂ E_N` over `F_q̂(ζ)` and verifies the tower identities.
pub fn cyclotomic_tower_check(fq_hat: &FiniteField, levels: usize) -> Result<TowerReport> {
    if levels > MAX_LEVEL {
        return Err(Error::Resource(format!(
            "tower level {levels} exceeds the supported maximum {MAX_LEVEL}"
        )));
    }
    let q_hat = fq_hat
        .order()
        .ok_or_else(|| Error::Resource("constant field too large".into()))?;
    let k = RatFuncField::new(fq_hat.clone(), "zeta");
    let zeta = k.gen();
    let units: Vec<_> = fq_hat.elements().filter(|u| !fq_hat.is_zero(u)).collect();
    let k_units: Vec<_> = units.iter().map(|u| k.constant(u.clone())).collect();

    let mut f0 = vec![k.zero(); q_hat as usize];
    f0[0] = zeta.clone();
    f0[q_hat as usize - 1] = k.one();
    let e0 = SimpleExtension::new(k.clone(), f0, "x0")?;
    let x0 = e0.gen();
    let mut reports = vec![check_level(&e0, 0, q_hat, None, &zeta, &k_units)];

    // the character at level 0: g_u g_v = g_{uv}, and u ↦ g_u injective
    let act = |u: &FfElem, y: &Poly<RatFunc<FfElem>>| e0.mul(&e0.embed(k.constant(u.clone())), y);
    let mut character = true;
    let mut seen = Vec::new();
    for u in &units {
        let gu = act(u, &x0);
        character &= !seen.contains(&gu);
        seen.push(gu);
        for v in &units {
            character &= act(u, &act(v, &x0)) == act(&fq_hat.mul(u, v), &x0);
        }
    }

    let q = q_hat as usize;
    let mut degree = e0.degree();
    let law;
    if levels == 0 {
        law = sigma_law(&e0, q_hat, std::slice::from_ref(&x0), &e0.embed(zeta.clone()));
    } else {
        let z1 = e0.embed(zeta.clone());
        let mut f1 = vec![e0.zero(); q + 1];
        f1[0] = e0.neg(&x0);
        f1[1] = z1.clone();
        f1[q] = e0.one();
        let e1 = SimpleExtension::new(e0.clone(), f1, "x1")?;
        let e0_units: Vec<_> = k_units.iter().map(|u| e0.embed(u.clone())).collect();
        reports.push(check_level(&e1, 1, q_hat, Some(&x0), &z1, &e0_units));
        degree *= e1.degree();
        let x1 = e1.gen();
        if levels == 1 {
            law = sigma_law(&e1, q_hat, &[e1.embed(x0.clone()), x1], &e1.embed(z1));
        } else {
            let z2 = e1.embed(z1.clone());
            let mut f2 = vec![e1.zero(); q + 1];
            f2[0] = e1.neg(&x1);
            f2[1] = z2.clone();
            f2[q] = e1.one();
            let e2 = SimpleExtension::new(e1.clone(), f2, "x2")?;
            let e1_units: Vec<_> = e0_units.iter().map(|u| e1.embed(u.clone())).collect();
            reports.push(check_level(&e2, 2, q_hat, Some(&x1), &z2, &e1_units));
            degree *= e2.degree();
            let ells = [e2.embed(e1.embed(x0.clone())), e2.embed(x1.clone()), e2.gen()];
            law = sigma_law(&e2, q_hat, &ells, &e2.embed(z2));
        }
    }
    let all_hold = law
        && character
        && reports
            .iter()
            .all(|r| r.separable && r.recursion && r.action_permutes_roots);
    Ok(TowerReport {
        q_hat,
        levels: reports,
        total_degree: degree,
        sigma_law: law,
        character_multiplicative: character,
        all_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_zero_over_f3() {
        let f3 = FiniteField::prime(3).unwrap();
        let rep = cyclotomic_tower_check(&f3, 0).unwrap();
        assert_eq!(rep.total_degree, 2);
        assert!(rep.all_hold);
    }

    #[test]
    fn two_levels_over_f3() {
        let f3 = FiniteField::prime(3).unwrap();
        let rep = cyclotomic_tower_check(&f3, 2).unwrap();
        assert_eq!(rep.total_degree, 18);
        assert!(rep.all_hold, "{rep:?}");
        assert!(cyclotomic_tower_check(&f3, 3).is_err());
    }
}
