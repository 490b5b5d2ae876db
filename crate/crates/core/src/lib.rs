//! Sumset and product-set calculus over prime fields, Plünnecke-type witness
//! extraction, Glibichuk-Konyagin quadruple selection, and a harness that
//! certifies the sum-product inequality chain on concrete sets.

pub mod arith;
pub mod bits;
pub mod error;
pub mod field;
pub mod gk;
pub mod harness;
pub mod naive;
pub mod plunnecke;
pub mod set;

pub use error::{Error, Result};
pub use field::{build_dlog, make_field, Field, PrimeField};
pub use set::{set_from_elements, FpSet};
