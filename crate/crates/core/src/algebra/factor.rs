//! Factorization of univariate polynomials over finite fields: square-free
//! decomposition, distinct-degree and equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::finite::{FfElem, FiniteField};
use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

fn field_order(f: &FiniteField) -> Result<u128> {
    f.order()
        .ok_or_else(|| Error::Resource(format!("{f:?} is too large for factorization")))
}

/// `X^(Q^k) mod m`, with `Q = |F|`, by repeated Q-th powering.
fn frobenius_power(ring: &PolyRing<FiniteField>, x: &[FfElem], q: u128, m: &[FfElem]) -> Poly<FfElem> {
    ring.pow_mod(x, q, m)
}

/// Ben-Or irreducibility test for `f` over `F`.
pub fn is_irreducible(field: &FiniteField, f: &[FfElem]) -> Result<bool> {
    let ring = PolyRing::new(field.clone());
    let f = ring.monic(f);
    let n = match ring.degree(&f) {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let q = field_order(field)?;
    let x = ring.x();
    let mut h = x.clone();
    for _ in 0..n / 2 {
        h = frobenius_power(&ring, &h, q, &f);
        let g = ring.gcd(&f, &ring.sub(&h, &x));
        if !ring.is_one(&g) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic factorization `f = unit * prod g_i^{e_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: FfElem,
    pub factors: Vec<(Poly<FfElem>, usize)>,
}

/// p-th root of a polynomial all of whose exponents are multiples of p.
fn pth_root(field: &FiniteField, f: &[FfElem]) -> Poly<FfElem> {
    let p = field.p() as usize;
    // c^(1/p) = c^(p^(n-1)) in a field of order p^n
    let n = field.degree();
    let root = |c: &FfElem| {
        let mut r = c.clone();
        for _ in 1..n {
            r = field.pow(&r, p as u128);
        }
        r
    };
    f.iter().step_by(p).map(root).collect()
}

/// Square-free decomposition of a monic polynomial: pairs `(g, e)` with the
/// `g` square-free, pairwise coprime, and `f = prod g^e`.
pub fn squarefree_decomposition(field: &FiniteField, f: &[FfElem]) -> Vec<(Poly<FfElem>, usize)> {
    let ring = PolyRing::new(field.clone());
    let p = field.p() as usize;
    let mut out = Vec::new();
    if ring.degree(f).unwrap_or(0) == 0 {
        return out;
    }
    let df = ring.derivative(f);
    if df.is_empty() {
        for (g, e) in squarefree_decomposition(field, &pth_root(field, f)) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = ring.gcd(f, &df);
    let mut w = ring.div_exact(f, &c).unwrap();
    let mut i = 1;
    while !ring.is_one(&w) {
        let y = ring.gcd(&w, &c);
        let z = ring.div_exact(&w, &y).unwrap();
        if !ring.is_one(&z) {
            out.push((z, i));
        }
        i += 1;
        c = ring.div_exact(&c, &y).unwrap();
        w = y;
    }
    if !ring.is_one(&c) {
        for (g, e) in squarefree_decomposition(field, &pth_root(field, &c)) {
            out.push((g, e * p));
        }
    }
    out
}

/// Splits a square-free monic polynomial into the products of its
/// irreducible factors of each degree.
pub fn distinct_degree(field: &FiniteField, f: &[FfElem]) -> Result<Vec<(Poly<FfElem>, usize)>> {
    let ring = PolyRing::new(field.clone());
    let q = field_order(field)?;
    let x = ring.x();
    let mut rest = ring.monic(f);
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while ring.degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = frobenius_power(&ring, &h, q, &rest);
        let g = ring.gcd(&rest, &ring.sub(&h, &x));
        if !ring.is_one(&g) {
            rest = ring.div_exact(&rest, &g).unwrap();
            h = ring.rem(&h, &rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = ring.degree(&rest) {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    Ok(out)
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(field: &FiniteField, f: &[FfElem], d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly<FfElem>>> {
    let ring = PolyRing::new(field.clone());
    let q = field_order(field)?;
    let n = ring.degree(f).unwrap_or(0);
    if n == d {
        return Ok(vec![ring.monic(f)]);
    }
    let p = field.p();
    loop {
        let a: Poly<FfElem> = ring.normalized((0..n).map(|_| field.element_from_index(rng.gen_range(0..q))).collect());
        if ring.degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        // trace from F_{Q^d} down to F_Q
        let mut tr = a.clone();
        let mut cur = a.clone();
        for _ in 1..d {
            cur = frobenius_power(&ring, &cur, q, f);
            tr = ring.add(&tr, &cur);
        }
        let b = if p == 2 {
            // further trace F_Q -> F_2
            let mut acc = tr.clone();
            let mut cur = tr;
            for _ in 1..field.degree() {
                cur = ring.mul_mod(&cur, &cur, f);
                acc = ring.add(&acc, &cur);
            }
            acc
        } else {
            ring.sub(&ring.pow_mod(&tr, (q - 1) / 2, f), &ring.one())
        };
        let g = ring.gcd(f, &b);
        let dg = ring.degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = ring.div_exact(f, &g).unwrap();
            let mut out = equal_degree(field, &g, d, rng)?;
            out.extend(equal_degree(field, &h, d, rng)?);
            return Ok(out);
        }
    }
}

/// Canonical order: by degree, then lexicographically by coefficient
/// indices from the top.
pub fn canonical_cmp(field: &FiniteField, a: &[FfElem], b: &[FfElem]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        let ka: Vec<u128> = a.iter().rev().map(|c| field.index_of(c)).collect();
        let kb: Vec<u128> = b.iter().rev().map(|c| field.index_of(c)).collect();
        ka.cmp(&kb)
    })
}

/// Full factorization with a seeded equal-degree step.
pub fn factor(field: &FiniteField, f: &[FfElem], seed: u64) -> Result<Factorization> {
    let ring = PolyRing::new(field.clone());
    let f = ring.normalized(f.to_vec());
    let Some(lc) = f.last().cloned() else {
        return Err(Error::input("cannot factor the zero polynomial"));
    };
    let monic = ring.monic(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<(Poly<FfElem>, usize)> = Vec::new();
    for (g, e) in squarefree_decomposition(field, &monic) {
        for (h, d) in distinct_degree(field, &g)? {
            for irr in equal_degree(field, &h, d, &mut rng)? {
                match factors.iter_mut().find(|(x, _)| *x == irr) {
                    Some(slot) => slot.1 += e,
                    None => factors.push((irr, e)),
                }
            }
        }
    }
    factors.sort_by(|a, b| canonical_cmp(field, &a.0, &b.0));
    Ok(Factorization { unit: lc, factors })
}

/// Least common multiple of the degrees of the irreducible factors of a
/// square-free polynomial: the degree of its splitting field.
pub fn splitting_degree(field: &FiniteField, f: &[FfElem]) -> Result<usize> {
    let ring = PolyRing::new(field.clone());
    let sf = squarefree_decomposition(field, &ring.monic(f));
    let mut m = 1usize;
    for (g, _) in sf {
        for (_, d) in distinct_degree(field, &g)? {
            m = num_integer::lcm(m, d);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &FiniteField, v: &[i64]) -> Poly<FfElem> {
        PolyRing::new(f.clone()).normalized(v.iter().map(|&c| f.from_int(c)).collect())
    }

    #[test]
    fn irreducibility() {
        let f3 = FiniteField::prime(3).unwrap();
        assert!(is_irreducible(&f3, &p(&f3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&f3, &p(&f3, &[2, 0, 1])).unwrap());
        let f2 = FiniteField::prime(2).unwrap();
        assert!(is_irreducible(&f2, &p(&f2, &[1, 1, 0, 0, 1])).unwrap());
        assert!(!is_irreducible(&f2, &p(&f2, &[1, 0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn factor_with_multiplicities_and_inseparable_part() {
        let f2 = FiniteField::prime(2).unwrap();
        let r = PolyRing::new(f2.clone());
        // t^2 (t+1)^3 (t^2+t+1)
        let target = r.mul(
            &r.mul(&r.pow(&p(&f2, &[0, 1]), 2), &r.pow(&p(&f2, &[1, 1]), 3)),
            &p(&f2, &[1, 1, 1]),
        );
        let fac = factor(&f2, &target, 0).unwrap();
        assert_eq!(
            fac.factors,
            vec![(p(&f2, &[0, 1]), 2), (p(&f2, &[1, 1]), 3), (p(&f2, &[1, 1, 1]), 1)]
        );
    }

    #[test]
    fn splitting_degree_of_product() {
        let f3 = FiniteField::prime(3).unwrap();
        let r = PolyRing::new(f3.clone());
        // (t^2+1)(t^3 - t + 1): lcm(2,3) = 6
        let g = r.mul(&p(&f3, &[1, 0, 1]), &p(&f3, &[1, 2, 0, 1]));
        assert_eq!(splitting_degree(&f3, &g).unwrap(), 6);
    }
}
