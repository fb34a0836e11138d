//! Dense symmetric linear algebra for graph matrices.
//!
//! Everything here is desk-scale and dense: the matrices are built from a
//! [`Graph`] and solved in `O(N³)`.

mod eigen;
mod resistance;
mod spanning;

pub use eigen::{eigen_decomposition, eigenvalues_sym, EigenDecomposition, EigenResult};
pub use resistance::{kf_star_direct, resistance_distances};
pub use spanning::{spanning_trees_chung, spanning_trees_chung_ln, spanning_trees_matrix_tree};

use thiserror::Error;

use crate::graph::Graph;

/// Default eigensolver residual tolerance.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("eigensolver did not converge after {rotations} rotations (off-diagonal residual {residual:e})")]
    NonConvergence { rotations: usize, residual: f64 },
    #[error("eigenpair residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("Laplacian has {kernel} near-zero eigenvalues; a connected graph has exactly one")]
    SingularLaplacian { kernel: usize },
    #[error("eigenvalue #{index} is {value:e}; only the first eigenvalue may vanish")]
    NonPositiveEigenvalue { index: usize, value: f64 },
    #[error("degree list has {degrees} entries but the spectrum has {eigenvalues}")]
    LengthMismatch { degrees: usize, eigenvalues: usize },
}

/// Dense real symmetric matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize) -> Self {
        SymmetricMatrix { order, entries: vec![0.0; order * order] }
    }

    /// Fills the upper triangle from `f(i, j)` (`i ≤ j`) and mirrors it, so
    /// the result is exactly symmetric.
    pub fn from_upper(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                m.entries[i * order + j] = v;
                m.entries[j * order + i] = v;
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Sets `(i, j)` and `(j, i)` together.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.order + j] = value;
        self.entries[j * self.order + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

/// Adjacency matrix `A`.
pub fn adjacency_matrix(g: &Graph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.num_vertices());
    for &(u, v) in g.edges() {
        m.set(u, v, 1.0);
    }
    m
}

/// Combinatorial Laplacian `L = D − A`.
pub fn combinatorial_laplacian(g: &Graph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.num_vertices());
    for v in 0..g.num_vertices() {
        m.set(v, v, g.degree(v) as f64);
    }
    for &(u, v) in g.edges() {
        m.set(u, v, -1.0);
    }
    m
}

/// Normalized Laplacian `I − D^{-1/2} A D^{-1/2}`: unit diagonal and
/// `−1/√(d_i d_j)` on edges.
pub fn normalized_laplacian(g: &Graph) -> SymmetricMatrix {
    let n = g.num_vertices();
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let mut m = SymmetricMatrix::zeros(n);
    for v in 0..n {
        m.set(v, v, 1.0);
    }
    for &(u, v) in g.edges() {
        m.set(u, v, -inv_sqrt[u] * inv_sqrt[v]);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    #[test]
    fn normalized_laplacian_entries() {
        let k2 = normalized_laplacian(&generate(GraphKind::Complete, 2).unwrap());
        assert_eq!(k2.entries(), &[1.0, -1.0, -1.0, 1.0]);

        let k3 = normalized_laplacian(&generate(GraphKind::Complete, 3).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { -0.5 };
                assert!((k3.get(i, j) - expected).abs() < 1e-15);
            }
        }

        let p3 = normalized_laplacian(&generate(GraphKind::Path, 3).unwrap());
        assert!((p3.get(0, 1) + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(p3.get(0, 2), 0.0);
    }

    #[test]
    fn combinatorial_laplacian_rows_sum_to_zero() {
        let g = generate(GraphKind::Petersen, 10).unwrap().triangulate().unwrap();
        let l = combinatorial_laplacian(&g);
        for i in 0..l.order() {
            assert_eq!(l.row(i).iter().sum::<f64>(), 0.0);
        }
        let a = adjacency_matrix(&g);
        assert_eq!(a.entries().iter().sum::<f64>(), 2.0 * g.num_edges() as f64);
    }

    #[test]
    fn from_upper_is_exactly_symmetric() {
        let m = SymmetricMatrix::from_upper(4, |i, j| (i * 10 + j) as f64 * 0.1);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
        assert!((m.trace() - (0.0 + 1.1 + 2.2 + 3.3)).abs() < 1e-12);
    }
}
