//! Dense symmetric generalized eigensolve with diagonal mass, built on
//! nalgebra. Used for the effective operator's full eigenbasis (propagation)
//! and for small reference-domain oracles.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

pub struct DenseEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Eigenvectors, M-orthonormal, one per eigenvalue (columns of the
    /// original problem K x = lambda M x).
    pub vectors: Vec<Vec<f64>>,
}

/// Solve K x = lambda M x for symmetric K and diagonal positive M.
pub fn dense_generalized_eigen(k: &DMatrix<f64>, m_diag: &[f64]) -> Result<DenseEigen> {
    let n = k.nrows();
    assert_eq!(k.ncols(), n);
    assert_eq!(m_diag.len(), n);
    let minv_sqrt: Vec<f64> = m_diag
        .iter()
        .map(|&m| {
            debug_assert!(m > 0.0);
            1.0 / m.sqrt()
        })
        .collect();
    let mut s = k.clone();
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] *= minv_sqrt[i] * minv_sqrt[j];
        }
    }
    // enforce exact symmetry before the QL sweep
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    let eig = s
        .try_symmetric_eigen(f64::EPSILON, 100_000)
        .ok_or_else(|| Error::SolverFailure {
            what: "dense symmetric eigensolve did not converge".into(),
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &idx in &order {
        values.push(eig.eigenvalues[idx]);
        let col = eig.eigenvectors.column(idx);
        vectors.push((0..n).map(|i| col[i] * minv_sqrt[i]).collect());
    }
    Ok(DenseEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn matches_analytic_chain() {
        let n = 24;
        let mut k = DMatrix::zeros(n, n);
        for i in 0..n {
            k[(i, i)] = 2.0;
            if i + 1 < n {
                k[(i + 1, i)] = -1.0;
                k[(i, i + 1)] = -1.0;
            }
        }
        let m = vec![1.0; n];
        let eig = dense_generalized_eigen(&k, &m).unwrap();
        for (j, &v) in eig.values.iter().enumerate() {
            let kk = (j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0);
            assert_abs_diff_eq!(v, 2.0 - 2.0 * kk.cos(), epsilon = 1e-12);
        }
        // M-orthonormality
        for a in 0..3 {
            for b in 0..3 {
                let dot: f64 = (0..n)
                    .map(|i| eig.vectors[a][i] * eig.vectors[b][i] * m[i])
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, expect, epsilon = 1e-12);
            }
        }
    }
}
