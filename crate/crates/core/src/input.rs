//! Input files and inline objects.
//!
//! A module or motive is described in TOML:
//!
//! ```toml
//! kind = "drinfeld"          # or "motive", "carlitz"
//! fq = "GF(3)"               # constants; a non-prime field has generator `a`
//! field = "rational"         # K = F_q(theta), or "GF(3^2)" for a finite K
//! theta = "b"                # finite K only: γ(t), default the generator `b`
//! phi_t = ["theta", "1", "theta^2 + 1"]
//! # matrix = [["t - theta"]]  for kind = "motive", entries in K(t)
//! ```
//!
//! Identifiers: `a` (generator of F_q), `b` (generator of a finite K over
//! F_q), `theta`, and `t` in motive entries and in elements of A and Q.

use serde::Deserialize;

use crate::afield::CoefficientField;
use crate::afield::{AField, RationalField};
use crate::algebra::apoly::PrimeOfA;
use crate::algebra::finite::{FfElem, FiniteField};
use crate::algebra::matrix::Matrix;
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::motive::Motive;
use crate::parse::{parse_expr, parse_field_spec};

/// `F_q` from `GF(p^e)`, generator `a`.
pub fn constant_field(spec: &str) -> Result<FiniteField> {
    let (p, e) = parse_field_spec(spec)?;
    FiniteField::gf(p, e)
}

fn fq_var(fq: &FiniteField, name: &str) -> Option<FfElem> {
    (name == "a" && fq.degree() > 1).then(|| fq.absolute_generator())
}

/// An element of `Q = F_q(t)`.
pub fn parse_q(fq: &FiniteField, src: &str) -> Result<RatFunc<FfElem>> {
    let q = RatFuncField::new(fq.clone(), "t");
    let vars = |s: &str| match s {
        "t" => Some(q.gen()),
        _ => fq_var(fq, s).map(|c| q.constant(c)),
    };
    parse_expr(&q, src, &vars)
}

/// A finite place of `F_q(θ)`, written in `theta` (or `t`) and made monic.
pub fn parse_place(fq: &FiniteField, src: &str) -> Result<PrimeOfA> {
    let q = RatFuncField::new(fq.clone(), "t");
    let vars = |s: &str| match s {
        "t" | "theta" => Some(q.gen()),
        _ => fq_var(fq, s).map(|c| q.constant(c)),
    };
    let f = parse_expr(&q, src, &vars)?;
    let f = q
        .as_poly(&f)
        .filter(|f| !f.is_empty())
        .ok_or_else(|| Error::input(format!("'{src}' is not a nonzero polynomial")))?;
    PrimeOfA::new(fq, PolyRing::new(fq.clone()).monic(&f))
}

/// An element of `A = F_q[t]`.
pub fn parse_a(fq: &FiniteField, src: &str) -> Result<Poly<FfElem>> {
    let f = parse_q(fq, src)?;
    RatFuncField::new(fq.clone(), "t")
        .as_poly(&f)
        .ok_or_else(|| Error::input(format!("'{src}' is not a polynomial in t")))
}

/// A prime of `A`, made monic.
pub fn parse_prime(fq: &FiniteField, src: &str) -> Result<PrimeOfA> {
    let f = parse_a(fq, src)?;
    if f.is_empty() {
        return Err(Error::input("0 is not a prime"));
    }
    PrimeOfA::new(fq, PolyRing::new(fq.clone()).monic(&f))
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    kind: String,
    fq: String,
    field: Option<String>,
    theta: Option<String>,
    phi_t: Option<Vec<String>>,
    matrix: Option<Vec<Vec<String>>>,
}

/// Command-line overrides of the file's `field` and `theta`.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub field: Option<String>,
    pub theta: Option<String>,
}

#[derive(Clone, Debug)]
pub enum Object<F: CoefficientField> {
    Drinfeld(DrinfeldModule<F>),
    Motive(Motive<F>),
}

impl<F: CoefficientField> Object<F> {
    /// `M(G)` for a module, the motive itself otherwise.
    pub fn motive(&self) -> Motive<F> {
        match self {
            Object::Drinfeld(g) => Motive::of_drinfeld(g),
            Object::Motive(m) => m.clone(),
        }
    }

    pub fn afield(&self) -> &AField<F> {
        match self {
            Object::Drinfeld(g) => g.afield(),
            Object::Motive(m) => m.afield(),
        }
    }

    pub fn drinfeld(&self) -> Result<&DrinfeldModule<F>> {
        match self {
            Object::Drinfeld(g) => Ok(g),
            Object::Motive(_) => Err(Error::input("this operation needs a Drinfeld module, not a motive")),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Loaded {
    Rational(Object<RationalField>),
    Finite(Object<FiniteField>),
}

impl Loaded {
    pub fn fq(&self) -> &FiniteField {
        match self {
            Loaded::Rational(o) => o.afield().fq(),
            Loaded::Finite(o) => o.afield().fq(),
        }
    }
}

fn build<F: CoefficientField>(
    raw: &RawObject,
    af: AField<F>,
    k_vars: &dyn Fn(&str) -> Option<F::Elem>,
) -> Result<Object<F>> {
    let k = af.field().clone();
    let theta = af.theta().clone();
    let vars = |s: &str| {
        if s == "theta" {
            Some(theta.clone())
        } else {
            k_vars(s)
        }
    };
    match raw.kind.as_str() {
        "carlitz" => Ok(Object::Drinfeld(DrinfeldModule::carlitz(af))),
        "drinfeld" => {
            let coeffs = raw
                .phi_t
                .as_ref()
                .ok_or_else(|| Error::input("a drinfeld object needs phi_t"))?;
            let phi = coeffs
                .iter()
                .map(|c| parse_expr(&k, c, &vars))
                .collect::<Result<Vec<_>>>()?;
            Ok(Object::Drinfeld(DrinfeldModule::new(af, phi)?))
        }
        "motive" => {
            let rows = raw
                .matrix
                .as_ref()
                .ok_or_else(|| Error::input("a motive object needs matrix"))?;
            let kt = RatFuncField::new(k.clone(), "t");
            let tvars = |s: &str| {
                if s == "t" {
                    Some(kt.gen())
                } else {
                    vars(s).map(|c| kt.constant(c))
                }
            };
            let parsed = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| parse_expr(&kt, e, &tvars))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let r = parsed.len();
            if parsed.iter().any(|row| row.len() != r) {
                return Err(Error::input("matrix must be square"));
            }
            Ok(Object::Motive(Motive::new(af, Matrix::from_rows(parsed))?))
        }
        other => Err(Error::input(format!(
            "unknown kind '{other}' (expected drinfeld, motive or carlitz)"
        ))),
    }
}

/// Parses a TOML object description.
pub fn load_str(src: &str, overrides: &Overrides) -> Result<Loaded> {
    let raw: RawObject = toml::from_str(src).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|s| {
                let before = &src[..s.start];
                (
                    before.matches('\n').count() + 1,
                    before.rsplit('\n').next().unwrap().chars().count() + 1,
                )
            })
            .unwrap_or((1, 1));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let fq = constant_field(&raw.fq)?;
    let field = overrides
        .field
        .clone()
        .or_else(|| raw.field.clone())
        .unwrap_or_else(|| "rational".to_string());
    let theta_src = overrides.theta.clone().or_else(|| raw.theta.clone());
    if field == "rational" {
        if theta_src.is_some() {
            return Err(Error::input("theta is the variable of F_q(theta); do not set it"));
        }
        let af = AField::rational(&fq);
        let k = af.field().clone();
        let vars = |s: &str| fq_var(&fq, s).map(|c| k.constant(c));
        return Ok(Loaded::Rational(build(&raw, af, &vars)?));
    }
    let (p, e) = parse_field_spec(&field)?;
    if p != fq.p() as u64 || e % fq.degree() != 0 {
        return Err(Error::input(format!("{field} is not an extension of {}", raw.fq)));
    }
    let m = e / fq.degree();
    let k = if m == 1 {
        fq.clone()
    } else {
        fq.extension(m)?.renamed("b")?
    };
    let kvars = |s: &str| match s {
        "b" if m > 1 => Some(k.relative_generator()),
        _ => fq_var(&fq, s).map(|c| k.embed_from(&fq, &c).unwrap()),
    };
    let theta = match &theta_src {
        Some(src) => parse_expr(&k, src, &kvars)?,
        None if m > 1 => k.relative_generator(),
        None => return Err(Error::input("a finite K = F_q needs an explicit theta")),
    };
    let af = AField::finite(&fq, &k, theta)?;
    Ok(Loaded::Finite(build(&raw, af, &kvars)?))
}

pub fn load_file(path: &std::path::Path, overrides: &Overrides) -> Result<Loaded> {
    let src =
        std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    load_str(&src, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_drinfeld() {
        let src = "kind = \"drinfeld\"\nfq = \"GF(3)\"\nphi_t = [\"theta\", \"1\", \"theta^2 + 1\"]\n";
        let Loaded::Rational(Object::Drinfeld(g)) = load_str(src, &Overrides::default()).unwrap() else {
            panic!()
        };
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn finite_carlitz_with_override() {
        let src = "kind = \"carlitz\"\nfq = \"GF(3)\"\n";
        let o = Overrides {
            field: Some("GF(3^2)".into()),
            theta: None,
        };
        let Loaded::Finite(obj) = load_str(src, &o).unwrap() else {
            panic!()
        };
        assert_eq!(obj.afield().degree(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let src = "kind = \"drinfeld\"\nfq = \"GF(3)\"\nphi_t = [\"theta\", \"1 +\"]\n";
        assert!(matches!(load_str(src, &Overrides::default()), Err(Error::Parse { .. })));
        let src = "kind = \"drinfeld\"\nfq = GF(3)\n";
        assert!(matches!(
            load_str(src, &Overrides::default()),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
