//! Finite fields and towers of finite fields.
//!
//! Every field is stored in absolute form `F_p[X]/(f)`, so multiplication is
//! always plain polynomial arithmetic over the prime field. A field built as
//! an extension of another keeps a link to its parent together with the
//! change-of-basis matrices between its absolute basis and the relative
//! basis `1, y, ..., y^{m-1}` over the parent. Embeddings only ever travel
//! along these parent links, so any two routes between the same pair of
//! fields agree by construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::factor::is_irreducible;
use super::field::Field;
use super::fp_linalg::{add_mod, inv_mod, mul_mod, reduce_i64, sub_mod, FpMatrix};
use super::poly::PolyRing;
use crate::error::{Error, Result};

/// Element of a finite field: absolute coordinates over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FfElem(pub(crate) Vec<u32>);

impl FfElem {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

struct Inner {
    p: u32,
    degree: usize,
    modulus: Vec<u32>,
    var: String,
    parent: Option<ParentLink>,
    extensions: Mutex<HashMap<usize, FiniteField>>,
    custom: Mutex<HashMap<Vec<FfElem>, FiniteField>>,
}

struct ParentLink {
    field: FiniteField,
    rel_degree: usize,
    rel_modulus: Vec<FfElem>,
    abs_to_rel: FpMatrix,
    rel_to_abs: FpMatrix,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(Error::input(format!("{p} is not a supported prime")));
        }
        Ok(FiniteField(Arc::new(Inner {
            p: p as u32,
            degree: 1,
            modulus: vec![0, 1],
            var: String::new(),
            parent: None,
            extensions: Mutex::new(HashMap::new()),
            custom: Mutex::new(HashMap::new()),
        })))
    }

    /// F_{p^e} defined by the lowest lexicographic irreducible of degree `e`
    /// over F_p; its generator prints as `a`.
    pub fn gf(p: u64, e: usize) -> Result<Self> {
        let base = Self::prime(p)?;
        if e == 0 {
            return Err(Error::input("extension degree must be positive"));
        }
        if e == 1 {
            return Ok(base);
        }
        let g = find_irreducible(&base, e)?;
        base.extension_with_modulus_named(&g, "a")
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Absolute degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Number of elements, when it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.0.degree as u32)
    }

    pub fn parent(&self) -> Option<&FiniteField> {
        self.0.parent.as_ref().map(|l| &l.field)
    }

    pub fn relative_degree(&self) -> usize {
        self.0.parent.as_ref().map_or(1, |l| l.rel_degree)
    }

    pub fn relative_modulus(&self) -> Option<&[FfElem]> {
        self.0.parent.as_ref().map(|l| l.rel_modulus.as_slice())
    }

    pub fn var(&self) -> &str {
        &self.0.var
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.degree == 1 && self.0.parent.is_none()
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The prime field at the bottom of the tower.
    pub fn prime_field(&self) -> FiniteField {
        let mut f = self.clone();
        while let Some(par) = f.parent().cloned() {
            f = par;
        }
        f
    }

    pub fn elem(&self, coords: Vec<u32>) -> FfElem {
        assert_eq!(coords.len(), self.0.degree, "coordinate length");
        FfElem(coords.into_iter().map(|c| c % self.0.p).collect())
    }

    /// The class of `X` in `F_p[X]/(f)`.
    pub fn absolute_generator(&self) -> FfElem {
        let mut v = vec![0; self.0.degree];
        if self.0.degree > 1 {
            v[1] = 1;
        } else {
            // F_p itself: the root of the linear modulus
            v[0] = sub_mod(0, self.0.modulus[0], self.0.p);
        }
        FfElem(v)
    }

    /// The class of `y` over the parent (the root of the relative modulus).
    pub fn relative_generator(&self) -> FfElem {
        match &self.0.parent {
            None => self.one(),
            Some(link) => {
                let pf = &link.field;
                let mut blocks = vec![pf.zero(); link.rel_degree];
                if link.rel_degree > 1 {
                    blocks[1] = pf.one();
                } else {
                    blocks[0] = pf.neg(&link.rel_modulus[0]);
                }
                self.from_relative(&blocks)
            }
        }
    }

    /// Coordinates over the parent in the basis `1, y, ..., y^{m-1}`.
    pub fn to_relative(&self, x: &FfElem) -> Vec<FfElem> {
        let link = self.0.parent.as_ref().expect("prime field has no parent");
        let np = link.field.degree();
        let rel = link.abs_to_rel.mul_vec(&x.0);
        rel.chunks(np).map(|c| FfElem(c.to_vec())).collect()
    }

    pub fn from_relative(&self, blocks: &[FfElem]) -> FfElem {
        let link = self.0.parent.as_ref().expect("prime field has no parent");
        assert!(blocks.len() <= link.rel_degree, "too many relative coordinates");
        let np = link.field.degree();
        let mut flat = vec![0u32; self.0.degree];
        for (i, b) in blocks.iter().enumerate() {
            flat[i * np..(i + 1) * np].copy_from_slice(&b.0);
        }
        FfElem(link.rel_to_abs.mul_vec(&flat))
    }

    /// Whether `other` is this field or one of its ancestors.
    pub fn has_ancestor(&self, other: &FiniteField) -> bool {
        self.degree_over(other).is_some()
    }

    /// `[self : other]` when `other` is on the parent chain.
    pub fn degree_over(&self, other: &FiniteField) -> Option<usize> {
        let mut f = self.clone();
        let mut deg = 1;
        loop {
            if f == *other {
                return Some(deg);
            }
            deg *= f.relative_degree();
            {
                let p = f.parent().cloned()?;
                f = p
            }
        }
    }

    /// Image of `x` under the tower embedding `ancestor -> self`.
    pub fn embed_from(&self, ancestor: &FiniteField, x: &FfElem) -> Result<FfElem> {
        if self == ancestor {
            return Ok(x.clone());
        }
        let link = self
            .0
            .parent
            .as_ref()
            .ok_or_else(|| Error::input(format!("{ancestor:?} is not a subfield of {self:?} in this tower")))?;
        let y = link.field.embed_from(ancestor, x)?;
        Ok(self.from_relative(&[y]))
    }

    /// Preimage of `x` in `ancestor`, or `None` when `x` lies outside it.
    pub fn restrict_to(&self, ancestor: &FiniteField, x: &FfElem) -> Option<FfElem> {
        if self == ancestor {
            return Some(x.clone());
        }
        let link = self.0.parent.as_ref()?;
        let rel = self.to_relative(x);
        if rel[1..].iter().any(|b| !link.field.is_zero(b)) {
            return None;
        }
        link.field.restrict_to(ancestor, &rel[0])
    }

    /// Element with the given index: absolute coordinates are the base-p
    /// digits of `idx`, least significant first.
    pub fn element_from_index(&self, mut idx: u128) -> FfElem {
        let p = self.0.p as u128;
        let mut v = vec![0u32; self.0.degree];
        for c in v.iter_mut() {
            *c = (idx % p) as u32;
            idx /= p;
        }
        FfElem(v)
    }

    pub fn index_of(&self, x: &FfElem) -> u128 {
        x.0.iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.0.p as u128 + c as u128)
    }

    /// All elements in index order; only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FfElem> + '_ {
        let n = self.order().expect("field too large to enumerate");
        (0..n).map(move |i| self.element_from_index(i))
    }

    /// The multiplicative generator of smallest index.
    pub fn primitive_element(&self) -> Result<FfElem> {
        let order = self
            .order()
            .filter(|&o| o <= u64::MAX as u128)
            .ok_or_else(|| Error::Resource("field too large for a primitive element search".into()))?;
        let n = (order - 1) as u64;
        let mut primes = Vec::new();
        let mut m = n;
        let mut d = 2u64;
        while d * d <= m {
            if m.is_multiple_of(d) {
                primes.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for idx in 1..order {
            let g = self.element_from_index(idx);
            if primes.iter().all(|&r| !self.is_one(&self.pow(&g, (n / r) as u128))) {
                return Ok(g);
            }
        }
        Err(Error::internal("no primitive element found"))
    }

    /// The degree-`m` extension over this field, defined by the lowest
    /// lexicographic monic irreducible of degree `m`. Cached.
    pub fn extension(&self, m: usize) -> Result<FiniteField> {
        if m == 0 {
            return Err(Error::input("extension degree must be positive"));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        if let Some(f) = self.0.extensions.lock().unwrap().get(&m) {
            return Ok(f.clone());
        }
        let g = find_irreducible(self, m)?;
        let var = format!("y{}", self.depth() + 1);
        let ext = build_extension(self, &g, &var)?;
        let mut cache = self.0.extensions.lock().unwrap();
        Ok(cache.entry(m).or_insert(ext).clone())
    }

    /// Extension defined by a caller-supplied monic irreducible polynomial.
    pub fn extension_with_modulus(&self, g: &[FfElem]) -> Result<FiniteField> {
        let var = format!("y{}", self.depth() + 1);
        self.extension_with_modulus_named(g, &var)
    }

    pub fn extension_with_modulus_named(&self, g: &[FfElem], var: &str) -> Result<FiniteField> {
        let ring = PolyRing::new(self.clone());
        let g = ring.normalized(g.to_vec());
        if g.len() < 2 || !self.is_one(g.last().unwrap()) {
            return Err(Error::input("extension modulus must be monic of positive degree"));
        }
        let key = g.clone();
        {
            let cache = self.0.custom.lock().unwrap();
            if let Some(f) = cache.get(&key) {
                if f.var() == var {
                    return Ok(f.clone());
                }
            }
        }
        if !is_irreducible(self, &g)? {
            return Err(Error::input(format!(
                "modulus {} is not irreducible over {self:?}",
                ring.format(&g, "X")
            )));
        }
        let ext = build_extension(self, &g, var)?;
        let mut cache = self.0.custom.lock().unwrap();
        cache.insert(key, ext.clone());
        Ok(ext)
    }

    /// Builds an equivalent field with a different display name.
    pub fn renamed(&self, var: &str) -> Result<FiniteField> {
        match &self.0.parent {
            None => Ok(self.clone()),
            Some(link) => link.field.extension_with_modulus_named(&link.rel_modulus, var),
        }
    }

    fn depth(&self) -> usize {
        let mut d = 0;
        let mut f = self.clone();
        while let Some(p) = f.parent().cloned() {
            d += 1;
            f = p;
        }
        d
    }

    fn mul_slices(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.0.degree;
        let p = self.0.p;
        if n == 1 {
            return vec![mul_mod(a[0], b[0], p)];
        }
        let p64 = p as u64;
        let mut prod = vec![0u64; 2 * n - 1];
        if p < (1 << 16) && n < (1 << 14) {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let ai = ai as u64;
                for (slot, &bj) in prod[i..i + n].iter_mut().zip(b) {
                    *slot += ai * bj as u64;
                }
            }
            prod.iter_mut().for_each(|x| *x %= p64);
        } else {
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p64;
                }
            }
        }
        let f = &self.0.modulus;
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            let neg = p64 - c;
            for i in 0..n {
                let idx = k - n + i;
                prod[idx] = (prod[idx] + neg * f[i] as u64) % p64;
            }
            prod[k] = 0;
        }
        prod.truncate(n);
        prod.into_iter().map(|x| x as u32).collect()
    }

    fn inv_slice(&self, a: &[u32]) -> Option<Vec<u32>> {
        let p = self.0.p;
        if a.iter().all(|&x| x == 0) {
            return None;
        }
        if self.0.degree == 1 {
            return Some(vec![inv_mod(a[0], p)]);
        }
        // extended Euclid in F_p[X] on (f, a)
        let trim = |mut v: Vec<u32>| {
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        let mut r0 = trim(self.0.modulus.clone());
        let mut r1 = trim(a.to_vec());
        let mut s0: Vec<u32> = vec![];
        let mut s1: Vec<u32> = vec![1];
        while !r1.is_empty() {
            let (q, r) = fp_divrem(&r0, &r1, p);
            let qs = fp_mul(&q, &s1, p);
            let s2 = fp_sub(&s0, &qs, p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant
        let c = inv_mod(r0[0], p);
        let mut out: Vec<u32> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
        out.resize(self.0.degree, 0);
        Some(out)
    }
}

fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut v: Vec<u32> = (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    fp_trim(&mut v);
    v
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = add_mod(v[i + j], mul_mod(x, y, p), p);
        }
    }
    fp_trim(&mut v);
    v
}

fn fp_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lc_inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mul_mod(*r.last().unwrap(), lc_inv, p);
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, bi, p), p);
        }
        fp_trim(&mut r);
    }
    fp_trim(&mut q);
    (q, r)
}

/// Lowest lexicographic monic irreducible polynomial of degree `m` over `base`.
///
/// Candidates `X^m + c_{m-1}X^{m-1} + ... + c_0` are enumerated by the
/// integer whose base-`|base|` digits are `(c_0, c_1, ...)`, with `c_0` the
/// least significant digit and each digit an element index.
pub fn find_irreducible(base: &FiniteField, m: usize) -> Result<Vec<FfElem>> {
    let q = base
        .order()
        .ok_or_else(|| Error::Resource("base field too large for an irreducible search".into()))?;
    let total = q.checked_pow(m as u32);
    let mut idx: u128 = 0;
    loop {
        if let Some(t) = total {
            if idx >= t {
                return Err(Error::internal("no irreducible polynomial found"));
            }
        }
        let mut rest = idx;
        let mut coeffs = Vec::with_capacity(m + 1);
        for _ in 0..m {
            coeffs.push(base.element_from_index(rest % q));
            rest /= q;
        }
        coeffs.push(base.one());
        idx += 1;
        if m > 1 && base.is_zero(&coeffs[0]) {
            continue;
        }
        if is_irreducible(base, &coeffs)? {
            return Ok(coeffs);
        }
    }
}

fn build_extension(parent: &FiniteField, g: &[FfElem], var: &str) -> Result<FiniteField> {
    let m = g.len() - 1;
    let np = parent.degree();
    let n = np * m;
    let p = parent.p();
    if m == 1 {
        return Ok(FiniteField(Arc::new(Inner {
            p,
            degree: np,
            modulus: parent.0.modulus.clone(),
            var: var.to_string(),
            parent: Some(ParentLink {
                field: parent.clone(),
                rel_degree: 1,
                rel_modulus: g.to_vec(),
                abs_to_rel: FpMatrix::identity(p, n),
                rel_to_abs: FpMatrix::identity(p, n),
            }),
            extensions: Mutex::new(HashMap::new()),
            custom: Mutex::new(HashMap::new()),
        })));
    }
    let ring = PolyRing::new(parent.clone());
    let flatten = |v: &[FfElem]| -> Vec<u32> {
        let mut flat = vec![0u32; n];
        for (i, c) in v.iter().enumerate() {
            flat[i * np..(i + 1) * np].copy_from_slice(&c.0);
        }
        flat
    };
    let unflatten = |idx: u128| -> Vec<FfElem> {
        let mut rest = idx;
        let mut blocks = Vec::with_capacity(m);
        for _ in 0..m {
            let mut c = vec![0u32; np];
            for slot in c.iter_mut() {
                *slot = (rest % p as u128) as u32;
                rest /= p as u128;
            }
            blocks.push(FfElem(c));
        }
        ring.normalized(blocks)
    };
    // y + beta for beta in the parent come first in this order
    let mut idx: u128 = (p as u128).pow(np as u32);
    loop {
        let alpha = unflatten(idx);
        idx += 1;
        let mut powers = Vec::with_capacity(n + 1);
        let mut cur = ring.one();
        for _ in 0..=n {
            powers.push(flatten(&cur));
            cur = ring.rem(&ring.mul(&cur, &alpha), g);
        }
        let b = FpMatrix::from_columns(p, n, &powers[..n]);
        let Some(b_inv) = b.inverse() else {
            continue;
        };
        let c = b_inv.mul_vec(&powers[n]);
        let mut modulus: Vec<u32> = c.iter().map(|&x| sub_mod(0, x, p)).collect();
        modulus.push(1);
        return Ok(FiniteField(Arc::new(Inner {
            p,
            degree: n,
            modulus,
            var: var.to_string(),
            parent: Some(ParentLink {
                field: parent.clone(),
                rel_degree: m,
                rel_modulus: g.to_vec(),
                abs_to_rel: b,
                rel_to_abs: b_inv,
            }),
            extensions: Mutex::new(HashMap::new()),
            custom: Mutex::new(HashMap::new()),
        })));
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.p == other.0.p
            && self.0.degree == other.0.degree
            && self.0.modulus == other.0.modulus
            && match (&self.0.parent, &other.0.parent) {
                (None, None) => true,
                (Some(a), Some(b)) => a.rel_modulus == b.rel_modulus && a.field == b.field,
                _ => false,
            }
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.degree == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.degree)
        }
    }
}

impl Field for FiniteField {
    type Elem = FfElem;

    fn zero(&self) -> FfElem {
        FfElem(vec![0; self.0.degree])
    }

    fn one(&self) -> FfElem {
        let mut v = vec![0; self.0.degree];
        v[0] = 1 % self.0.p;
        FfElem(v)
    }

    fn is_zero(&self, a: &FfElem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let p = self.0.p;
        FfElem(a.0.iter().zip(&b.0).map(|(&x, &y)| add_mod(x, y, p)).collect())
    }

    fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let p = self.0.p;
        FfElem(a.0.iter().zip(&b.0).map(|(&x, &y)| sub_mod(x, y, p)).collect())
    }

    fn neg(&self, a: &FfElem) -> FfElem {
        let p = self.0.p;
        FfElem(a.0.iter().map(|&x| sub_mod(0, x, p)).collect())
    }

    fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        FfElem(self.mul_slices(&a.0, &b.0))
    }

    fn inv(&self, a: &FfElem) -> Option<FfElem> {
        self.inv_slice(&a.0).map(FfElem)
    }

    fn from_int(&self, n: i64) -> FfElem {
        let mut v = vec![0; self.0.degree];
        v[0] = reduce_i64(n, self.0.p);
        FfElem(v)
    }

    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    fn format_elem(&self, a: &FfElem) -> String {
        match &self.0.parent {
            None => a.0[0].to_string(),
            Some(link) if link.rel_degree == 1 => link.field.format_elem(&self.to_relative(a)[0]),
            Some(link) => {
                let blocks = self.to_relative(a);
                let pf = &link.field;
                let mut terms = Vec::new();
                for (i, b) in blocks.iter().enumerate().rev() {
                    if pf.is_zero(b) {
                        continue;
                    }
                    let c = pf.format_elem(b);
                    let c = if c.contains(' ') { format!("({c})") } else { c };
                    let mono = match i {
                        0 => String::new(),
                        1 => self.0.var.clone(),
                        _ => format!("{}^{}", self.0.var, i),
                    };
                    terms.push(match (i, c.as_str()) {
                        (0, _) => c,
                        (_, "1") => mono,
                        _ => format!("{c}*{mono}"),
                    });
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                }
            }
        }
    }
}
