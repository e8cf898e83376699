//! Exact arithmetic for Drinfeld modules, A-motives, Frobenius weights and
//! local shtukas over `A = F_q[t]`.

pub mod afield;
pub mod algebra;
pub mod certify;
pub mod cyclotomic;
pub mod drinfeld;
pub mod error;
pub mod input;
pub mod motive;
pub mod parse;
pub mod shtuka;
pub mod twisted;
pub mod weights;

pub use error::{Error, Result};
