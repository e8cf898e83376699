//! Exact arithmetic substrate: finite fields and towers, polynomials,
//! factorization, `A = F_q[t]` and its fraction field, Newton polygons and
//! matrices.

pub mod apoly;
pub mod factor;
pub mod field;
pub mod finite;
pub mod fp_linalg;
pub mod matrix;
pub mod newton;
pub mod poly;
pub mod ratfunc;

pub use apoly::PrimeOfA;
pub use field::Field;
pub use finite::{FfElem, FiniteField};
pub use poly::{Poly, PolyRing};
pub use ratfunc::{RatFunc, RatFuncField};
