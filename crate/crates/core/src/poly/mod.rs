//! Polynomials over an algebra: commutative ones with coefficient lists and
//! noncommutative ones as explicitly parenthesized expression trees.

mod comm;
mod nc;
mod parse;

pub use comm::{CoefSide, CommPoly, POWER_TOL};
pub use nc::{expand_in_scalar, NCPoly, Node, EXPAND_TOL};
pub use parse::{parse_comm, parse_nc};
