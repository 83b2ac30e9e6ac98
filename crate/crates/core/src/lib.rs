//! Computations in finite-dimensional real and complex algebras that need not
//! be associative: identity certification, algebra norms, singular elements of
//! polynomials over embedded copies of the complex numbers, and eigenvalues of
//! matrices with entries in such algebras.
//!
//! ```
//! use altfta::algebra::builtin;
//!
//! let h = builtin("H").unwrap();
//! let ij = h.basis(1).mul(&h.basis(2)).unwrap();
//! assert_eq!(ij, h.basis(3));
//! ```

pub mod algebra;
pub mod eigen;
pub mod error;
pub mod fta;
pub mod identities;
pub mod linalg;
pub mod norms;
pub mod poly;
pub mod scalar;

pub use algebra::{Algebra, ComplexCopy, Element, Field, Subspace};
pub use error::{Error, ParseError, Result};
