//! Shift-invert Lanczos for the lowest eigenpairs of K x = lambda M x with
//! diagonal positive M.
//!
//! The operator (K - sigma M)^{-1} M is symmetric in the M inner product, so
//! a Lanczos recurrence with M-orthonormal basis and full reorthogonalization
//! gives the eigenvalues nearest (above) the shift. The shift is placed below
//! the spectrum, which keeps the factorization positive definite; clusters
//! are resolved by growing the Krylov space until the requested pairs have
//! residual norm below tolerance.

use super::banded::BorderedSolver;
use super::sparse::SymmetricSparse;
use crate::error::{Error, Result};
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// ||K x - lambda M x||_2 / ||x||_2
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Number of eigenpairs requested. If `upto` is set, all pairs below it
    /// are returned (at least one), up to `count` as a hard cap.
    pub count: usize,
    /// Optional energy ceiling: converge everything below this value.
    pub upto: Option<f64>,
    pub tol: f64,
    pub max_krylov: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            count: 10,
            upto: None,
            tol: 1e-8,
            max_krylov: 600,
            seed: 0x5eed_1234,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Lowest eigenpairs of K x = lambda M x, M diagonal positive.
///
/// `solver` must be a factorization of K - sigma M with sigma strictly below
/// the smallest eigenvalue; use [`shift_invert_lowest`] to get the shift
/// retry loop for free.
pub fn shift_invert_with_solver(
    k: &SymmetricSparse,
    m_diag: &[f64],
    sigma: f64,
    solver: &BorderedSolver,
    opts: &LanczosOptions,
) -> Result<Vec<EigenPair>> {
    let n = k.n();
    assert_eq!(m_diag.len(), n);

    // deterministic start vector, M-normalized
    let mut state = opts.seed ^ (n as u64).wrapping_mul(0x9e37);
    let mut v: Vec<f64> = (0..n)
        .map(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    m_normalize(&mut v, m_diag);

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let max_k = opts.max_krylov.min(n);
    let mut converged: Option<Vec<EigenPair>> = None;

    // grow the Krylov space in chunks, testing convergence periodically
    let mut j = 0usize;
    while j < max_k {
        // w = (K - sigma M)^{-1} M v_j
        let vj = basis[j].clone();
        let mut w: Vec<f64> = vj.iter().zip(m_diag).map(|(x, m)| x * m).collect();
        solver.solve_in_place(&mut w);

        let alpha = m_dot(&w, &vj, m_diag);
        alphas.push(alpha);
        for (wi, vi) in w.iter_mut().zip(&vj) {
            *wi -= alpha * vi;
        }
        if j > 0 {
            let beta_prev = betas[j - 1];
            for (wi, vi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= beta_prev * vi;
            }
        }
        // full reorthogonalization, twice
        for _ in 0..2 {
            for b in &basis {
                let c = m_dot(&w, b, m_diag);
                if c != 0.0 {
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= c * bi;
                    }
                }
            }
        }
        let beta = m_norm(&w, m_diag);
        if beta < 1e-300 {
            // exhausted the invariant subspace
            break;
        }
        betas.push(beta);
        for wi in w.iter_mut() {
            *wi /= beta;
        }
        basis.push(w);
        j += 1;

        let dim = alphas.len();
        let enough_dim = dim >= opts.count.min(n).max(2) + 2 || dim == n;
        if enough_dim && (dim % 10 == 0 || j == max_k || dim == n) {
            if let Some(plan) = converged_plan(&alphas, &betas, sigma, opts, dim == n) {
                if let Some(pairs) = extract_pairs(k, m_diag, &basis, &alphas, &betas, sigma, &plan, opts) {
                    converged = Some(pairs);
                    break;
                }
            }
        }
    }

    if converged.is_none() {
        if let Some(plan) = converged_plan(&alphas, &betas, sigma, opts, alphas.len() == n) {
            converged = extract_pairs(k, m_diag, &basis, &alphas, &betas, sigma, &plan, opts);
        }
    }
    converged.ok_or_else(|| Error::SolverFailure {
        what: format!(
            "Lanczos did not converge {} pairs in {} iterations (tol {:.1e})",
            opts.count,
            alphas.len(),
            opts.tol
        ),
    })
}

fn tridiag_eig(alphas: &[f64], betas: &[f64]) -> nalgebra::SymmetricEigen<f64, nalgebra::Dyn> {
    let dim = alphas.len();
    let mut t = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        t[(i, i)] = alphas[i];
        if i + 1 < dim {
            t[(i + 1, i)] = betas[i];
            t[(i, i + 1)] = betas[i];
        }
    }
    t.symmetric_eigen()
}

/// Cheap convergence test on the tridiagonal problem. Returns the indices of
/// the Ritz values to extract (sorted by ascending lambda) if every needed
/// pair passes the last-component residual bound, None otherwise.
fn converged_plan(
    alphas: &[f64],
    betas: &[f64],
    sigma: f64,
    opts: &LanczosOptions,
    full_space: bool,
) -> Option<Vec<usize>> {
    let dim = alphas.len();
    if dim == 0 {
        return None;
    }
    let eig = tridiag_eig(alphas, betas);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let beta_last = if betas.len() >= dim { betas[dim - 1] } else { 0.0 };

    let mut plan = Vec::new();
    for &idx in &order {
        let theta = eig.eigenvalues[idx];
        if theta <= 0.0 {
            break;
        }
        let lambda = sigma + 1.0 / theta;
        // residual of the shift-inverted operator; eigenvalue perturbation of
        // lambda is r_op / theta^2 to first order.
        let r_op = beta_last * eig.eigenvectors[(dim - 1, idx)].abs();
        let lam_err = r_op / (theta * theta);
        let ok = lam_err <= 0.1 * opts.tol * (1.0 + lambda.abs());
        match opts.upto {
            Some(upto) => {
                if lambda > upto {
                    // a converged value above the ceiling certifies completeness
                    return if ok { Some(plan) } else { None };
                }
                if !ok {
                    return None;
                }
                plan.push(idx);
                if plan.len() >= opts.count {
                    return Some(plan);
                }
            }
            None => {
                if !ok {
                    return None;
                }
                plan.push(idx);
                if plan.len() >= opts.count {
                    return Some(plan);
                }
            }
        }
    }
    // exhausted positive Ritz values
    if full_space {
        return Some(plan);
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn extract_pairs(
    k: &SymmetricSparse,
    m_diag: &[f64],
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
    sigma: f64,
    plan: &[usize],
    opts: &LanczosOptions,
) -> Option<Vec<EigenPair>> {
    let dim = alphas.len();
    let n = k.n();
    let eig = tridiag_eig(alphas, betas);
    let mut pairs = Vec::with_capacity(plan.len());
    let mut kx = vec![0.0; n];
    for &idx in plan {
        let theta = eig.eigenvalues[idx];
        let lambda = sigma + 1.0 / theta;
        let mut x = vec![0.0; n];
        for (b, vecs) in basis.iter().take(dim).enumerate() {
            let c = eig.eigenvectors[(b, idx)];
            if c != 0.0 {
                for (xi, vi) in x.iter_mut().zip(vecs) {
                    *xi += c * vi;
                }
            }
        }
        k.mul_vec(&x, &mut kx);
        let mut rss = 0.0;
        let mut xss = 0.0;
        for i in 0..n {
            let r = kx[i] - lambda * m_diag[i] * x[i];
            rss += r * r;
            xss += x[i] * x[i];
        }
        let residual = (rss / xss).sqrt();
        if residual > opts.tol * (1.0 + lambda.abs()) {
            return None;
        }
        pairs.push(EigenPair {
            value: lambda,
            vector: x,
            residual,
        });
    }
    pairs.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    Some(pairs)
}

/// Factor K - sigma M with a retry loop lowering sigma if the factorization
/// detects indefiniteness, then run shift-invert Lanczos.
pub fn shift_invert_lowest(
    k: &SymmetricSparse,
    m_diag: &[f64],
    sigma0: f64,
    bw: usize,
    border: usize,
    opts: &LanczosOptions,
) -> Result<Vec<EigenPair>> {
    let n = k.n();
    let mut sigma = sigma0;
    for _attempt in 0..6 {
        let mut shifted: Vec<(usize, usize, f64)> = k.lower_entries().collect();
        for i in 0..n {
            shifted.push((i, i, -sigma * m_diag[i]));
        }
        let shifted = SymmetricSparse::from_triplets(n, &shifted);
        match BorderedSolver::factor(&shifted, bw, border) {
            Ok(solver) => {
                return shift_invert_with_solver(k, m_diag, sigma, &solver, opts);
            }
            Err(_) => {
                // shift not below the spectrum; back off
                sigma = if sigma > 0.0 { sigma * 0.5 } else { sigma * 2.0 - 1.0 };
            }
        }
    }
    Err(Error::SolverFailure {
        what: "could not find a shift below the spectrum".into(),
    })
}

fn m_dot(a: &[f64], b: &[f64], m: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(m)
        .map(|((x, y), w)| x * y * w)
        .sum()
}

fn m_norm(a: &[f64], m: &[f64]) -> f64 {
    m_dot(a, a, m).sqrt()
}

fn m_normalize(a: &mut [f64], m: &[f64]) {
    let nrm = m_norm(a, m);
    for x in a.iter_mut() {
        *x /= nrm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// 1D Dirichlet Laplacian: exact eigenvalues (4/h^2) sin^2(k pi h / 2).
    #[test]
    fn dirichlet_chain_eigenvalues() {
        let n = 200;
        let h = 1.0 / (n as f64 + 1.0);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 / (h * h)));
            if i + 1 < n {
                t.push((i + 1, i, -1.0 / (h * h)));
            }
        }
        let k = SymmetricSparse::from_triplets(n, &t);
        let m = vec![1.0; n];
        let opts = LanczosOptions {
            count: 5,
            ..Default::default()
        };
        let pairs = shift_invert_lowest(&k, &m, 2.0, 1, 0, &opts).unwrap();
        for (j, p) in pairs.iter().enumerate() {
            let kk = (j + 1) as f64;
            let exact = (4.0 / (h * h)) * (kk * std::f64::consts::PI * h / 2.0).sin().powi(2);
            assert_abs_diff_eq!(p.value, exact, epsilon = 1e-7 * exact);
            assert!(p.residual <= 1e-8 * (1.0 + p.value));
        }
    }

    #[test]
    fn generalized_problem_with_mass() {
        // K tridiag, M = diag(2): eigenvalues halved
        let n = 80;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i + 1, i, -1.0));
            }
        }
        let k = SymmetricSparse::from_triplets(n, &t);
        let m = vec![2.0; n];
        let opts = LanczosOptions {
            count: 3,
            ..Default::default()
        };
        let pairs = shift_invert_lowest(&k, &m, 0.0, 1, 0, &opts).unwrap();
        for (j, p) in pairs.iter().enumerate() {
            let kk = (j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0);
            let exact = (2.0 - 2.0 * kk.cos()) / 2.0;
            assert_abs_diff_eq!(p.value, exact, epsilon = 1e-9);
        }
    }

    #[test]
    fn upto_mode_returns_all_below_ceiling() {
        let n = 60;
        let h = 1.0 / (n as f64 + 1.0);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 / (h * h)));
            if i + 1 < n {
                t.push((i + 1, i, -1.0 / (h * h)));
            }
        }
        let k = SymmetricSparse::from_triplets(n, &t);
        let m = vec![1.0; n];
        let ceiling = 250.0;
        let opts = LanczosOptions {
            count: 30,
            upto: Some(ceiling),
            ..Default::default()
        };
        let pairs = shift_invert_lowest(&k, &m, 5.0, 1, 0, &opts).unwrap();
        let exact_count = (1..=n)
            .filter(|&kk| {
                (4.0 / (h * h)) * (kk as f64 * std::f64::consts::PI * h / 2.0).sin().powi(2)
                    <= ceiling
            })
            .count();
        assert_eq!(pairs.len(), exact_count);
        assert!(pairs.iter().all(|p| p.value <= ceiling));
    }
}
