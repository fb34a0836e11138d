use super::{combinatorial_laplacian, eigen_decomposition, NumericError, SymmetricMatrix, DEFAULT_EIGEN_TOL};
use crate::graph::Graph;

/// Eigenvalues at or below this fraction of the largest are treated as kernel.
const PSEUDOINVERSE_CUTOFF: f64 = 1e-9;

/// Effective resistance between every pair of vertices of the unit-resistor
/// network on `g`, via `r_ij = L⁺_ii + L⁺_jj − 2 L⁺_ij`.
///
/// `L⁺` comes from the eigendecomposition of the combinatorial Laplacian with
/// the single kernel direction dropped.
pub fn resistance_distances(g: &Graph) -> Result<SymmetricMatrix, NumericError> {
    let n = g.num_vertices();
    let dec = eigen_decomposition(&combinatorial_laplacian(g), DEFAULT_EIGEN_TOL)?;
    let lambda_max = dec.eigenvalues.last().copied().unwrap_or(0.0);
    let cutoff = PSEUDOINVERSE_CUTOFF * lambda_max;
    let kept: Vec<usize> = (0..n).filter(|&k| dec.eigenvalues[k] > cutoff).collect();
    if kept.len() + 1 != n {
        return Err(NumericError::SingularLaplacian { kernel: n - kept.len() });
    }
    let inverse: Vec<f64> = kept.iter().map(|&k| 1.0 / dec.eigenvalues[k]).collect();
    let pinv = SymmetricMatrix::from_upper(n, |i, j| {
        kept.iter()
            .zip(&inverse)
            .map(|(&k, w)| w * dec.vector_component(i, k) * dec.vector_component(j, k))
            .sum()
    });
    Ok(SymmetricMatrix::from_upper(n, |i, j| {
        if i == j {
            0.0
        } else {
            pinv.get(i, i) + pinv.get(j, j) - 2.0 * pinv.get(i, j)
        }
    }))
}

/// `Σ_{i<j} d_i d_j r_ij`, straight from the definition.
pub fn kf_star_direct(g: &Graph) -> Result<f64, NumericError> {
    let r = resistance_distances(g)?;
    let d = g.degrees();
    let mut total = 0.0;
    for i in 0..g.num_vertices() {
        for j in i + 1..g.num_vertices() {
            total += (d[i] * d[j]) as f64 * r.get(i, j);
        }
    }
    Ok(total)
}
