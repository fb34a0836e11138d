//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by implicit QL iterations with Wilkinson-style shifts (the EISPACK
//! `tred2`/`tql2` pair). Deterministic for a fixed input.

use super::{NumericError, SymmetricMatrix};

/// Ascending eigenvalues plus the residual the solver achieved.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// `max |A v − λ v|` over all computed pairs.
    pub residual: f64,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of eigenvalues within `window` of `value`.
    pub fn count_near(&self, value: f64, window: f64) -> usize {
        self.eigenvalues.iter().filter(|&&x| (x - value).abs() <= window).count()
    }
}

/// Full decomposition `A = V diag(λ) Vᵀ`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Row-major `order × order`; column `k` is the unit eigenvector of
    /// `eigenvalues[k]`.
    pub vectors: Vec<f64>,
    pub residual: f64,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    #[inline]
    pub fn vector_component(&self, row: usize, k: usize) -> f64 {
        self.vectors[row * self.order() + k]
    }
}

/// Eigenvalues of `m` in ascending order.
///
/// The residual test is scaled by the matrix magnitude: the call fails when
/// `max |A v − λ v| > tol · max(1, max|a_ij|)`.
pub fn eigenvalues_sym(m: &SymmetricMatrix, tol: f64) -> Result<EigenResult, NumericError> {
    let decomposition = eigen_decomposition(m, tol)?;
    Ok(EigenResult { eigenvalues: decomposition.eigenvalues, residual: decomposition.residual })
}

pub fn eigen_decomposition(
    m: &SymmetricMatrix,
    tol: f64,
) -> Result<EigenDecomposition, NumericError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(NumericError::InvalidTolerance(tol));
    }
    let n = m.order();
    if n == 0 {
        return Ok(EigenDecomposition { eigenvalues: vec![], vectors: vec![], residual: 0.0 });
    }
    let mut v = m.entries().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    tridiagonal_ql(n, &mut v, &mut d, &mut e, 100 * n * n)?;

    // sort ascending, permuting eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![0.0; n * n];
    for row in 0..n {
        for (col, &k) in order.iter().enumerate() {
            vectors[row * n + col] = v[row * n + k];
        }
    }

    let residual = max_residual(m, &eigenvalues, &vectors);
    let tolerance = tol * m.max_abs().max(1.0);
    if residual > tolerance {
        return Err(NumericError::ResidualTooLarge { residual, tolerance });
    }
    Ok(EigenDecomposition { eigenvalues, vectors, residual })
}

fn max_residual(m: &SymmetricMatrix, values: &[f64], vectors: &[f64]) -> f64 {
    let n = values.len();
    let mut worst = 0.0f64;
    let mut col = vec![0.0; n];
    for k in 0..n {
        for (row, c) in col.iter_mut().enumerate() {
            *c = vectors[row * n + k];
        }
        for i in 0..n {
            let av: f64 = m.row(i).iter().zip(&col).map(|(a, x)| a * x).sum();
            worst = worst.max((av - values[k] * col[i]).abs());
        }
    }
    worst
}

// Householder reduction of the symmetric matrix held in `v` (row-major) to
// tridiagonal form. On return `d` is the diagonal, `e[1..]` the subdiagonal
// and `v` the accumulated orthogonal transform.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for x in &d[..i] {
            scale += x.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e), rotating the columns of `v`.
// `max_rotations` bounds the total number of plane rotations.
fn tridiagonal_ql(
    n: usize,
    v: &mut [f64],
    d: &mut [f64],
    e: &mut [f64],
    max_rotations: usize,
) -> Result<(), NumericError> {
    let at = |i: usize, j: usize| i * n + j;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    let mut rotations = 0usize;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[at(k, i + 1)];
                        v[at(k, i + 1)] = s * v[at(k, i)] + c * h;
                        v[at(k, i)] = c * v[at(k, i)] - s * h;
                    }
                }
                rotations += m - l;
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
                if rotations > max_rotations {
                    let residual = e.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
                    return Err(NumericError::NonConvergence { rotations, residual });
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
