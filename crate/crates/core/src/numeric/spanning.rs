use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use super::{EigenResult, NumericError};
use crate::count::BigCount;
use crate::graph::Graph;

/// Eigenvalues below this (after the first) are rejected by Chung's formula.
const CHUNG_ZERO_TOL: f64 = 1e-9;

/// Number of spanning trees by the matrix-tree theorem: the determinant of the
/// combinatorial Laplacian with the last row and column removed, computed
/// exactly with fraction-free (Bareiss) elimination.
pub fn spanning_trees_matrix_tree(g: &Graph) -> BigCount {
    spanning_trees_deleting(g, g.num_vertices() - 1)
}

pub(crate) fn spanning_trees_deleting(g: &Graph, deleted: usize) -> BigCount {
    let n = g.num_vertices();
    let keep: Vec<usize> = (0..n).filter(|&v| v != deleted).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let size = keep.len();
    let mut m = vec![BigInt::zero(); size * size];
    for (i, &v) in keep.iter().enumerate() {
        m[i * size + i] = BigInt::from(g.degree(v));
    }
    for &(u, v) in g.edges() {
        let (iu, iv) = (index[u], index[v]);
        if iu != usize::MAX && iv != usize::MAX {
            m[iu * size + iv] = BigInt::from(-1);
            m[iv * size + iu] = BigInt::from(-1);
        }
    }
    let det = bareiss_determinant(size, m);
    match det.sign() {
        Sign::Minus => unreachable!("Laplacian minors are positive semidefinite"),
        _ => BigCount(det.magnitude().clone()),
    }
}

// Fraction-free Gaussian elimination; every division is exact.
fn bareiss_determinant(n: usize, mut m: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign_flip = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let Some(pivot_row) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                m.swap(k * n + c, pivot_row * n + c);
            }
            sign_flip = !sign_flip;
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            let factor = m[i * n + k].clone();
            for j in k + 1..n {
                let updated = (&m[i * n + j] * &pivot - &factor * &m[k * n + j]) / &prev;
                m[i * n + j] = updated;
            }
            m[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = m[n * n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Natural log of `Π d_i · Π_{i≥2} λ_i / Σ d_i` for the normalized Laplacian
/// spectrum `eigs` of a connected graph with degree sequence `degrees`.
pub fn spanning_trees_chung_ln(eigs: &EigenResult, degrees: &[usize]) -> Result<f64, NumericError> {
    if eigs.len() != degrees.len() {
        return Err(NumericError::LengthMismatch { degrees: degrees.len(), eigenvalues: eigs.len() });
    }
    let mut ln = 0.0;
    for (index, &lambda) in eigs.eigenvalues.iter().enumerate().skip(1) {
        if lambda <= CHUNG_ZERO_TOL {
            return Err(NumericError::NonPositiveEigenvalue { index: index + 1, value: lambda });
        }
        ln += lambda.ln();
    }
    ln += degrees.iter().map(|&d| (d as f64).ln()).sum::<f64>();
    ln -= (degrees.iter().sum::<usize>() as f64).ln();
    Ok(ln)
}

/// Chung's spectral spanning-tree formula, evaluated in log space. The result
/// is a float; round it before comparing with an exact count.
pub fn spanning_trees_chung(eigs: &EigenResult, degrees: &[usize]) -> Result<f64, NumericError> {
    spanning_trees_chung_ln(eigs, degrees).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::numeric::{eigenvalues_sym, normalized_laplacian, DEFAULT_EIGEN_TOL};

    // Counts edge subsets of size N-1 that form a spanning tree.
    fn brute_force_spanning_trees(g: &Graph) -> u64 {
        let n = g.num_vertices();
        let edges = g.edges();
        let m = edges.len();
        assert!(m <= 20);
        let mut count = 0;
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != n - 1 {
                continue;
            }
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut x = x;
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            let mut acyclic = true;
            for (k, &(u, v)) in edges.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    if a == b {
                        acyclic = false;
                        break;
                    }
                    parent[a] = b;
                }
            }
            if acyclic {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn matrix_tree_examples() {
        let k3 = generate(GraphKind::Complete, 3).unwrap();
        assert_eq!(spanning_trees_matrix_tree(&k3).to_u64(), Some(3));
        let p3 = generate(GraphKind::Path, 3).unwrap();
        assert_eq!(spanning_trees_matrix_tree(&p3.triangulate().unwrap()).to_u64(), Some(9));
        assert_eq!(spanning_trees_matrix_tree(&k3.triangulate().unwrap()).to_u64(), Some(54));
        let pet = generate(GraphKind::Petersen, 10).unwrap();
        assert_eq!(spanning_trees_matrix_tree(&pet).to_u64(), Some(2000));
    }

    #[test]
    fn matrix_tree_matches_enumeration() {
        let graphs = [
            generate(GraphKind::Complete, 3).unwrap().triangulate().unwrap(),
            generate(GraphKind::Path, 3).unwrap().triangulate().unwrap(),
            generate(GraphKind::Cycle, 4).unwrap().triangulate().unwrap(),
            generate(GraphKind::Complete, 5).unwrap(),
            generate(GraphKind::Star, 5).unwrap().triangulate().unwrap(),
        ];
        for g in &graphs {
            assert_eq!(spanning_trees_matrix_tree(g).to_u64(), Some(brute_force_spanning_trees(g)));
        }
    }

    #[test]
    fn deleted_row_does_not_matter() {
        let g = generate(GraphKind::Petersen, 10).unwrap().triangulate().unwrap();
        let reference = spanning_trees_matrix_tree(&g);
        for v in 0..g.num_vertices() {
            assert_eq!(spanning_trees_deleting(&g, v), reference);
        }
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        // [[0,1],[1,0]] has determinant -1 and needs a row swap
        let m = vec![BigInt::from(0), BigInt::from(1), BigInt::from(1), BigInt::from(0)];
        assert_eq!(bareiss_determinant(2, m), BigInt::from(-1));
        let singular = vec![BigInt::from(1), BigInt::from(2), BigInt::from(2), BigInt::from(4)];
        assert_eq!(bareiss_determinant(2, singular), BigInt::zero());
    }

    fn chung(kind: GraphKind, size: usize) -> f64 {
        let g = generate(kind, size).unwrap();
        let eigs = eigenvalues_sym(&normalized_laplacian(&g), DEFAULT_EIGEN_TOL).unwrap();
        spanning_trees_chung(&eigs, &g.degrees()).unwrap()
    }

    #[test]
    fn chung_examples() {
        assert!((chung(GraphKind::Complete, 3) - 3.0).abs() < 1e-9);
        assert!((chung(GraphKind::Complete, 2) - 1.0).abs() < 1e-9);
        assert!((chung(GraphKind::Path, 3) - 1.0).abs() < 1e-9);
        assert!((chung(GraphKind::Petersen, 10) - 2000.0).abs() < 1e-6);
    }

    #[test]
    fn chung_rejects_extra_zero_eigenvalue() {
        let eigs = EigenResult { eigenvalues: vec![0.0, 0.0, 1.5], residual: 0.0 };
        assert!(matches!(
            spanning_trees_chung(&eigs, &[2, 2, 2]),
            Err(NumericError::NonPositiveEigenvalue { index: 2, .. })
        ));
        let eigs = EigenResult { eigenvalues: vec![0.0, 2.0], residual: 0.0 };
        assert!(matches!(spanning_trees_chung(&eigs, &[1]), Err(NumericError::LengthMismatch { .. })));
    }
}
