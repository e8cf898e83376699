use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ffmotive::afield::RationalField;
use ffmotive::algebra::apoly::{factor_apoly, infinity_valuation, ord, PrimeOfA};
use ffmotive::algebra::field::Field;
use ffmotive::algebra::finite::FiniteField;
use ffmotive::algebra::matrix::{charpoly, Matrix};
use ffmotive::algebra::poly::format_poly;
use ffmotive::algebra::ratfunc::RatFuncField;
use ffmotive::certify::{self, prime_support};
use ffmotive::cyclotomic::cyclotomic_tower_check;
use ffmotive::drinfeld::{DrinfeldModule, ReductionVerdict};
use ffmotive::input::{constant_field, load_file, load_str, parse_a, parse_place, parse_q, Loaded, Object, Overrides};
use ffmotive::motive::Motive;
use ffmotive::shtuka::{localize_finite, localize_motive, HodgePinkData, LocalShtuka, ShtukaBase, DEFAULT_PRECISION};
use ffmotive::weights::{divisibility_condition, has_no_integral_weights, weight_of_tate_twist, weights_of};
use ffmotive::{Error, Result};

use crate::output::{Format, SCHEMA_VERSION};

/// Exact computations with Drinfeld modules, A-motives and local shtukas.
#[derive(Debug, Parser)]
#[command(name = "ffmotive", version)]
pub struct Cli {
    /// Seed for the randomized factorization steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

/// An object file, or an inline TOML description.
#[derive(Debug, Args)]
pub struct ObjectArgs {
    /// Path to a TOML object file (or the TOML text itself).
    pub file: String,
    /// Override the A-field: `rational` or `GF(p^e)`.
    #[arg(long)]
    pub field: Option<String>,
    /// Override θ for a finite A-field.
    #[arg(long)]
    pub theta: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor an element of A = F_q[t].
    Factor {
        poly: String,
        #[arg(long, default_value = "GF(3)")]
        fq: String,
    },
    /// Valuation of an element of Q = F_q(t) at a prime or at infinity.
    Ord {
        f: String,
        /// A monic irreducible in t, or `inf`.
        #[arg(long)]
        prime: String,
        #[arg(long, default_value = "GF(3)")]
        fq: String,
    },
    /// Weights of the Frobenius characteristic polynomial.
    Weights {
        #[command(flatten)]
        obj: ObjectArgs,
        /// Place of good reduction, for objects over F_q(θ).
        #[arg(long)]
        place: Option<String>,
    },
    /// The divisibility condition on a uniformizer z at p.
    CheckCondition {
        #[arg(long)]
        z: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "GF(3)")]
        fq: String,
        /// Also report the weight of the n-th Tate twist.
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        /// Residue degree [k : F_p] used with --n.
        #[arg(long, default_value_t = 1)]
        residue_degree: usize,
    },
    /// Characteristic polynomial of the semilinear Frobenius product.
    Charpoly {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long)]
        place: Option<String>,
        /// Use the dual motive.
        #[arg(long)]
        dual: bool,
    },
    /// Frobenius on l-torsion, compared with P(X; M) mod l.
    Torsion {
        #[command(flatten)]
        obj: ObjectArgs,
        /// The prime l of A.
        #[arg(long)]
        prime: String,
        #[arg(long)]
        place: Option<String>,
        /// Largest torsion field degree to construct.
        #[arg(long, default_value_t = 512)]
        cap: usize,
    },
    /// Good-reduction test at a place of F_q(θ).
    GoodReduction {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long)]
        place: String,
    },
    /// Hodge-Pink invariants of the local shtuka at a prime.
    ShtukaHp {
        #[command(flatten)]
        obj: ObjectArgs,
        /// The prime p of A (defaults to the characteristic for finite K).
        #[arg(long)]
        prime: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
        /// Tensor with the twist 1(n); repeatable.
        #[arg(long = "twist", allow_hyphen_values = true)]
        twists: Vec<i64>,
        /// Permit a characteristic of degree > 1 over a finite K.
        #[arg(long)]
        allow_higher_degree: bool,
    },
    /// Ring identities of the z-adic cyclotomic tower.
    TowerCheck {
        /// Order of the residue field F_q̂.
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        levels: usize,
    },
    /// Primes where Frobenius may have eigenvalue 1.
    Support {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long)]
        place: Option<String>,
    },
    /// Hypothesis checklist and prime-support certificate.
    CheckImai {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long)]
        place: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        p: String,
    },
    /// Supports of the twists M(G)^∨ ⊗ M(C)^{⊗n} for n ≤ nmax.
    RibetScan {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long)]
        place: String,
        /// Default: the characteristic of F_q.
        #[arg(long)]
        nmax: Option<i64>,
    },
    /// Named recipes for the worked examples.
    Examples {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Debug, Subcommand)]
pub enum Example {
    /// Carlitz twists with integral weights m, n.
    #[command(name = "4.5")]
    TwoTwists {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "GF(3)")]
        fq: String,
    },
    /// Coefficient p-power identity and torsion bijections.
    #[command(name = "4.6")]
    PowerIdentity {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        deg_bound: usize,
        #[arg(long, default_value_t = 2)]
        d_max: usize,
        #[arg(long, default_value_t = 4096)]
        cap: usize,
    },
    /// A rank-p module whose torsion grows in the tower.
    #[command(name = "4.8")]
    RankP {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4096)]
        cap: usize,
    },
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = match body {
        Value::Object(map) => map,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    v.insert("schema_version".into(), json!(SCHEMA_VERSION));
    v.insert("command".into(), json!(command));
    Value::Object(v)
}

fn to_json<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::internal(format!("serialization: {e}")))
}

fn load(obj: &ObjectArgs) -> Result<Loaded> {
    let overrides = Overrides {
        field: obj.field.clone(),
        theta: obj.theta.clone(),
    };
    let path = PathBuf::from(&obj.file);
    if !path.exists() && obj.file.contains("kind") {
        return load_str(&obj.file, &overrides);
    }
    load_file(&path, &overrides)
}

fn rational_place(o: &Object<RationalField>, place: Option<&str>) -> Result<PrimeOfA> {
    let src = place.ok_or_else(|| Error::input("objects over F_q(θ) need --place to reduce"))?;
    parse_place(o.afield().fq(), src)
}

/// The motive over a finite A-field: as given, or reduced at `place`.
fn finite_motive(loaded: &Loaded, place: Option<&str>) -> Result<Motive<FiniteField>> {
    match loaded {
        Loaded::Finite(o) => Ok(o.motive()),
        Loaded::Rational(o) => {
            let v = rational_place(o, place)?;
            match o {
                Object::Drinfeld(g) => Ok(Motive::of_drinfeld(&g.reduce_at(&v)?)),
                Object::Motive(m) => m.reduce_at(&v),
            }
        }
    }
}

fn finite_drinfeld(loaded: &Loaded, place: Option<&str>) -> Result<DrinfeldModule<FiniteField>> {
    match loaded {
        Loaded::Finite(o) => Ok(o.drinfeld()?.clone()),
        Loaded::Rational(o) => {
            let v = rational_place(o, place)?;
            o.drinfeld()?.reduce_at(&v)
        }
    }
}

fn rational(loaded: Loaded) -> Result<Object<RationalField>> {
    match loaded {
        Loaded::Rational(o) => Ok(o),
        Loaded::Finite(_) => Err(Error::input("this command needs an object over F_q(θ)")),
    }
}

fn hp_json<F: ShtukaBase>(s: &LocalShtuka<F>, hp: &HodgePinkData) -> Value {
    json!({
        "rank": s.rank(),
        "precision": s.precision(),
        "exact": s.is_exact(),
        "t_N": hp.t_n,
        "t_H": hp.t_h,
        "mu": hp.mu,
        "weakly_admissible": hp.weakly_admissible.label(),
    })
}

fn with_twists<F: ShtukaBase>(mut s: LocalShtuka<F>, twists: &[i64]) -> Result<LocalShtuka<F>> {
    for &n in twists {
        let one = LocalShtuka::one_twist(s.base(), n, s.precision())?;
        s = s.tensor(&one)?;
    }
    Ok(s)
}

pub fn run(cli: &Cli) -> Result<Value> {
    let seed = cli.seed;
    match &cli.command {
        Command::Factor { poly, fq } => {
            let fq = constant_field(fq)?;
            let f = parse_a(&fq, poly)?;
            if f.is_empty() {
                return Err(Error::input("cannot factor 0"));
            }
            let (unit, factors) = factor_apoly(&fq, &f, seed)?;
            let factors: Vec<Value> = factors
                .iter()
                .map(|(l, e)| json!({"factor": l.format(&fq), "degree": l.degree(), "multiplicity": e}))
                .collect();
            Ok(envelope(
                "factor",
                json!({"input": format_poly(&fq, &f, "t"), "unit": fq.format_elem(&unit), "factors": factors}),
            ))
        }
        Command::Ord { f, prime, fq } => {
            let fq = constant_field(fq)?;
            let q = RatFuncField::new(fq.clone(), "t");
            let x = parse_q(&fq, f)?;
            let (place, v) = if prime == "inf" {
                ("inf".to_string(), infinity_valuation(&q, &x)?)
            } else {
                let l = ffmotive::input::parse_prime(&fq, prime)?;
                (l.format(&fq), ord(&q, &x, &l)?)
            };
            Ok(envelope(
                "ord",
                json!({"f": q.format_elem(&x), "place": place, "ord": v}),
            ))
        }
        Command::Weights { obj, place } => {
            let m = finite_motive(&load(obj)?, place.as_deref())?;
            let w = weights_of(&m.frobenius_charpoly()?)?;
            Ok(envelope(
                "weights",
                json!({"rank": m.rank(), "d": w.d, "weights": w.format(), "integral": !has_no_integral_weights(&w)}),
            ))
        }
        Command::CheckCondition {
            z,
            p,
            fq,
            n,
            residue_degree,
        } => {
            let fq = constant_field(fq)?;
            let q = RatFuncField::new(fq.clone(), "t");
            let z = parse_q(&fq, z)?;
            let p = ffmotive::input::parse_prime(&fq, p)?;
            let report = divisibility_condition(&q, &z, &p, seed)?;
            let mut body = json!({
                "z": q.format_elem(&z),
                "p": p.format(&fq),
                "deg_p": p.degree(),
                "sum": report.sum,
                "holds": report.holds,
            });
            if let Some(n) = n {
                let w = weight_of_tate_twist(&q, *n, &p, &z, *residue_degree, seed)?;
                body["n"] = json!(n);
                body["twist_weight"] = json!(w.to_string());
            }
            Ok(envelope("check-condition", body))
        }
        Command::Charpoly { obj, place, dual } => {
            let mut m = finite_motive(&load(obj)?, place.as_deref())?;
            if *dual {
                m = m.dual();
            }
            let cp = m.frobenius_charpoly()?;
            Ok(envelope(
                "charpoly",
                json!({
                    "rank": m.rank(),
                    "d": cp.d,
                    "dual": dual,
                    "coefficients": cp.format_coeffs(),
                    "polynomial": cp.format(),
                }),
            ))
        }
        Command::Torsion { obj, prime, place, cap } => {
            let g = finite_drinfeld(&load(obj)?, place.as_deref())?;
            let fq = g.afield().fq().clone();
            let l = ffmotive::input::parse_prime(&fq, prime)?;
            if g.afield().characteristic() == Some(&l) {
                return Err(Error::input("l must differ from the characteristic"));
            }
            let fl = l.residue_field(&fq, "t")?;
            let frob = Matrix::from_rows(g.frobenius_on_torsion(&l, &fl, *cap)?);
            let direct = charpoly(&fl, &frob);
            let expected = Motive::of_drinfeld(&g).frobenius_charpoly()?.reduce_mod(&l, &fl)?;
            let rows: Vec<Vec<String>> = frob
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| fl.format_elem(x)).collect())
                .collect();
            Ok(envelope(
                "torsion",
                json!({
                    "prime": l.format(&fq),
                    "dimension": frob.rows(),
                    "frobenius": rows,
                    "charpoly_on_torsion": format_poly(&fl, &direct, "X"),
                    "motive_charpoly_mod_l": format_poly(&fl, &expected, "X"),
                    "agree": direct == expected,
                }),
            ))
        }
        Command::GoodReduction { obj, place } => {
            let o = rational(load(obj)?)?;
            let v = rational_place(&o, Some(place))?;
            let fq = o.afield().fq().clone();
            let body = match &o {
                Object::Drinfeld(g) => {
                    let verdict = g.good_reduction(&v)?;
                    let mut body = json!({"place": format_poly(&fq, v.poly(), "theta"), "verdict": verdict.label()});
                    match &verdict {
                        ReductionVerdict::Good { e } => body["scaling_exponent"] = json!(e.to_string()),
                        ReductionVerdict::PotentiallyGoodOnly { e } => {
                            body["scaling_exponent"] = json!(e.to_string());
                            body["ramification_index"] = json!(e.denom());
                        }
                        ReductionVerdict::NotPotentiallyGood { e, witness } => {
                            body["scaling_exponent"] = json!(e.to_string());
                            body["witness"] = json!(witness);
                        }
                    }
                    if verdict.is_good() {
                        body["reduction"] = json!(g.reduce_at(&v)?.format_phi_t());
                    }
                    body
                }
                Object::Motive(m) => match m.reduce_at(&v) {
                    Ok(_) => json!({"place": format_poly(&fq, v.poly(), "theta"), "verdict": "GOOD"}),
                    Err(Error::Input(msg)) => {
                        json!({"place": format_poly(&fq, v.poly(), "theta"), "verdict": "BAD", "detail": msg})
                    }
                    Err(e) => return Err(e),
                },
            };
            Ok(envelope("good-reduction", body))
        }
        Command::ShtukaHp {
            obj,
            prime,
            precision,
            twists,
            allow_higher_degree,
        } => {
            let body = match load(obj)? {
                Loaded::Rational(o) => {
                    let src = prime
                        .as_deref()
                        .ok_or_else(|| Error::input("objects over F_q(θ) need --prime"))?;
                    let p = ffmotive::input::parse_prime(o.afield().fq(), src)?;
                    let s = with_twists(localize_motive(&o.motive(), &p, *precision)?, twists)?;
                    let mut b = hp_json(&s, &s.hodge_pink()?);
                    b["prime"] = json!(p.format(o.afield().fq()));
                    b
                }
                Loaded::Finite(o) => {
                    let fq = o.afield().fq();
                    let chr = o
                        .afield()
                        .characteristic()
                        .expect("finite A-fields have a characteristic");
                    if let Some(src) = prime {
                        if &ffmotive::input::parse_prime(fq, src)? != chr {
                            return Err(Error::input(
                                "over a finite K only the characteristic place is supported",
                            ));
                        }
                    }
                    if chr.degree() > 1 && !allow_higher_degree {
                        return Err(Error::input(
                            "the characteristic has degree > 1; pass --allow-higher-degree",
                        ));
                    }
                    let s = with_twists(localize_finite(&o.motive(), *precision)?, twists)?;
                    let mut b = hp_json(&s, &s.hodge_pink()?);
                    b["prime"] = json!(chr.format(fq));
                    b
                }
            };
            let mut body = body;
            body["twists"] = json!(twists);
            Ok(envelope("shtuka-hp", body))
        }
        Command::TowerCheck { q, levels } => {
            let fq_hat = constant_field(&format!("GF({q})"))?;
            let report = cyclotomic_tower_check(&fq_hat, *levels)?;
            Ok(envelope("tower-check", to_json(&report)?))
        }
        Command::Support { obj, place } => {
            let m = finite_motive(&load(obj)?, place.as_deref())?;
            let s = prime_support(&m, seed)?;
            Ok(envelope("support", to_json(&s)?))
        }
        Command::CheckImai { obj, place, z, p } => {
            let o = rational(load(obj)?)?;
            let fq = o.afield().fq().clone();
            let v = rational_place(&o, Some(place))?;
            let z = parse_q(&fq, z)?;
            let p = ffmotive::input::parse_prime(&fq, p)?;
            let cert = match &o {
                Object::Drinfeld(g) => certify::imai_check(g, &v, &z, &p, seed)?,
                Object::Motive(m) => certify::imai_check_motive(m, &v, &z, &p, seed)?,
            };
            Ok(envelope("check-imai", to_json(&cert)?))
        }
        Command::RibetScan { obj, place, nmax } => {
            let o = rational(load(obj)?)?;
            let g = o.drinfeld()?;
            let fq = o.afield().fq().clone();
            let v = rational_place(&o, Some(place))?;
            let nmax = nmax.unwrap_or(fq.p() as i64);
            let scan = certify::ribet_twist_support(g, &v, nmax, seed)?;
            Ok(envelope(
                "ribet-scan",
                json!({"place": format_poly(&fq, v.poly(), "theta"), "nmax": nmax, "twists": to_json(&scan)?}),
            ))
        }
        Command::Examples { which } => match which {
            Example::TwoTwists { m, n, fq } => {
                let fq = constant_field(fq)?;
                let r = certify::twist_pair_example(&fq, *m, *n, seed)?;
                Ok(envelope("examples 4.5", to_json(&r)?))
            }
            Example::PowerIdentity {
                p,
                deg_bound,
                d_max,
                cap,
            } => {
                let r = certify::verify_power_identity(*p, *deg_bound, *d_max, *cap)?;
                Ok(envelope("examples 4.6", to_json(&r)?))
            }
            Example::RankP { p, cap } => {
                let r = certify::rank_p_example(*p, seed, *cap)?;
                Ok(envelope("examples 4.8", to_json(&r)?))
            }
        },
    }
}
