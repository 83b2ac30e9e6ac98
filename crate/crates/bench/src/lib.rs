//! Fixed inputs shared by the benchmarks.

use altfta::algebra::builtin;
use altfta::eigen::AlgebraMatrix;
use altfta::{Algebra, Element};

/// Deterministic, well-spread coordinates: `sin(1 + 0.731 k)`.
pub fn spread(a: &Algebra, offset: usize) -> Element {
    let v = (0..a.real_dim())
        .map(|k| (1.0 + 0.731 * (offset * a.real_dim() + k) as f64).sin())
        .collect();
    a.element(v).expect("length matches")
}

pub fn quaternion_matrix(n: usize) -> AlgebraMatrix {
    let h = builtin("H").expect("builtin");
    AlgebraMatrix::new(&h, n, (0..n * n).map(|k| spread(&h, k)).collect()).expect("square")
}
