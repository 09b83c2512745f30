//! Banded Cholesky factorization, optionally with a dense border block.
//!
//! The tube discretizations produce symmetric positive definite matrices that
//! are banded after a suitable node ordering, except for seam couplings that
//! tie the last longitudinal slab back to the first. Those rows are split off
//! into a border and eliminated through a dense Schur complement.

use super::sparse::SymmetricSparse;
use crate::error::{Error, Result};
use nalgebra::{Cholesky, DMatrix, DVector};

/// Lower-triangular banded Cholesky L with A = L L^T.
/// Storage is column-major within the band: `data[j * (bw + 1) + d] = L[j + d, j]`.
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedCholesky {
    /// Factor a symmetric positive definite banded matrix given as lower
    /// triplets. Fails with `SolverFailure` if a pivot is not positive.
    pub fn factor(n: usize, bw: usize, lower: &[(usize, usize, f64)]) -> Result<Self> {
        let stride = bw + 1;
        let mut data = vec![0.0f64; n * stride];
        for &(i, j, v) in lower {
            debug_assert!(i >= j && i - j <= bw);
            data[j * stride + (i - j)] += v;
        }
        // Right-looking band Cholesky.
        for j in 0..n {
            let pivot = data[j * stride];
            if pivot <= 0.0 || !pivot.is_finite() {
                return Err(Error::SolverFailure {
                    what: format!("banded Cholesky pivot {pivot:.3e} at column {j}"),
                });
            }
            let ljj = pivot.sqrt();
            data[j * stride] = ljj;
            let dmax = bw.min(n - 1 - j);
            for d in 1..=dmax {
                data[j * stride + d] /= ljj;
            }
            // Update trailing columns j+1 ..= j+dmax.
            for d in 1..=dmax {
                let ljd = data[j * stride + d]; // L[j+d, j]
                if ljd == 0.0 {
                    continue;
                }
                let col = j + d;
                // A[col + e, col] -= L[col + e, j] * L[col, j] for e where col+e-j <= bw
                let emax = (bw - d).min(n - 1 - col);
                let src = j * stride + d;
                let dst = col * stride;
                for e in 0..=emax {
                    data[dst + e] -= data[src + e] * ljd;
                }
            }
        }
        Ok(BandedCholesky { n, bw, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solve A x = b in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let stride = self.bw + 1;
        // forward: L y = b
        for j in 0..self.n {
            let yj = b[j] / self.data[j * stride];
            b[j] = yj;
            let dmax = self.bw.min(self.n - 1 - j);
            for d in 1..=dmax {
                b[j + d] -= self.data[j * stride + d] * yj;
            }
        }
        // backward: L^T x = y
        for j in (0..self.n).rev() {
            let mut s = b[j];
            let dmax = self.bw.min(self.n - 1 - j);
            for d in 1..=dmax {
                s -= self.data[j * stride + d] * b[j + d];
            }
            b[j] = s / self.data[j * stride];
        }
    }
}

/// Solver for A = [[B, C], [C^T, D]] where B is banded SPD over indices
/// `0..n-w` and the border covers the trailing `w` indices. When `w == 0`
/// this is just the banded factorization.
pub struct BorderedSolver {
    core: BandedCholesky,
    /// Border columns C (dense, n_core x w), stored column-wise.
    border: Vec<DVector<f64>>,
    /// B^{-1} C, column-wise.
    core_inv_border: Vec<DVector<f64>>,
    schur: Option<Cholesky<f64, nalgebra::Dyn>>,
    n: usize,
    w: usize,
}

impl BorderedSolver {
    /// Factor a symmetric positive definite matrix with the trailing `w`
    /// indices treated as a dense border. `bw` is the bandwidth of the
    /// leading (n - w) x (n - w) core block.
    pub fn factor(matrix: &SymmetricSparse, bw: usize, w: usize) -> Result<Self> {
        let n = matrix.n();
        assert!(w < n || n == 0);
        let nc = n - w;
        let mut core_lower = Vec::new();
        let mut border_cols = vec![DVector::<f64>::zeros(nc); w];
        let mut dblock = DMatrix::<f64>::zeros(w, w);
        for (i, j, v) in matrix.lower_entries() {
            // i >= j by storage convention
            if i < nc {
                if i - j > bw {
                    return Err(Error::SolverFailure {
                        what: format!("entry ({i},{j}) outside declared core bandwidth {bw}"),
                    });
                }
                core_lower.push((i, j, v));
            } else if j < nc {
                border_cols[i - nc][j] += v;
            } else {
                dblock[(i - nc, j - nc)] += v;
                if i != j {
                    dblock[(j - nc, i - nc)] += v;
                }
            }
        }
        let core = BandedCholesky::factor(nc, bw.min(nc.saturating_sub(1)), &core_lower)?;
        if w == 0 {
            return Ok(BorderedSolver {
                core,
                border: Vec::new(),
                core_inv_border: Vec::new(),
                schur: None,
                n,
                w,
            });
        }
        let mut core_inv_border = Vec::with_capacity(w);
        for col in &border_cols {
            let mut x = col.clone();
            core.solve_in_place(x.as_mut_slice());
            core_inv_border.push(x);
        }
        // Schur complement D - C^T B^{-1} C
        let mut schur = dblock;
        for a in 0..w {
            for b in 0..w {
                schur[(a, b)] -= border_cols[a].dot(&core_inv_border[b]);
            }
        }
        // enforce exact symmetry against rounding
        for a in 0..w {
            for b in 0..a {
                let m = 0.5 * (schur[(a, b)] + schur[(b, a)]);
                schur[(a, b)] = m;
                schur[(b, a)] = m;
            }
        }
        let schur = Cholesky::new(schur).ok_or_else(|| Error::SolverFailure {
            what: "border Schur complement not positive definite".into(),
        })?;
        Ok(BorderedSolver {
            core,
            border: border_cols,
            core_inv_border,
            schur: Some(schur),
            n,
            w,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solve A x = b in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let nc = self.n - self.w;
        if self.w == 0 {
            self.core.solve_in_place(b);
            return;
        }
        let (b1, b2) = b.split_at_mut(nc);
        // y1 = B^{-1} b1
        self.core.solve_in_place(b1);
        // rhs2 = b2 - C^T y1
        let y1 = DVector::from_column_slice(b1);
        let mut rhs2 = DVector::from_column_slice(b2);
        for a in 0..self.w {
            rhs2[a] -= self.border[a].dot(&y1);
        }
        // x2 = S^{-1} rhs2
        let x2 = self.schur.as_ref().unwrap().solve(&rhs2);
        // x1 = y1 - B^{-1} C x2
        for a in 0..self.w {
            let xa = x2[a];
            if xa != 0.0 {
                for i in 0..nc {
                    b1[i] -= self.core_inv_border[a][i] * xa;
                }
            }
        }
        b2.copy_from_slice(x2.as_slice());
    }
}
