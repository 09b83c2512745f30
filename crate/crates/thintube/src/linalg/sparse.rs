//! Symmetric sparse matrix assembled from coordinate triplets.
//!
//! Only the lower triangle is stored; duplicate entries accumulate. Row/col
//! lookups are through sorted CSR-like arrays built once after assembly.

#[derive(Debug, Clone)]
pub struct SymmetricSparse {
    n: usize,
    // CSR of the lower triangle (row >= col), sorted, deduplicated.
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymmetricSparse {
    /// Build from triplets; (i, j, v) and (j, i, v) are the same entry.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = triplets
            .iter()
            .map(|&(i, j, v)| if i >= j { (i, j, v) } else { (j, i, v) })
            .collect();
        entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut rows = Vec::with_capacity(entries.len());
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            debug_assert!(i < n && j < n);
            if rows.last() == Some(&i) && cols.last() == Some(&j) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(i);
                cols.push(j);
                vals.push(v);
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &i in &rows {
            row_ptr[i + 1] += 1;
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        SymmetricSparse {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// y = A x using the symmetric structure.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.fill(0.0);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k];
                let v = self.vals[k];
                y[i] += v * x[j];
                if i != j {
                    y[j] += v * x[i];
                }
            }
        }
    }

    /// Iterate lower-triangle entries (i >= j).
    pub fn lower_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.cols[k], self.vals[k]))
        })
    }

    /// Maximum |i - j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.lower_entries()
            .map(|(i, j, _)| i - j)
            .max()
            .unwrap_or(0)
    }

    pub fn nnz_lower(&self) -> usize {
        self.vals.len()
    }

    /// Dense copy (tests and small oracles only).
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.lower_entries() {
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates_duplicates_and_multiplies() {
        let t = vec![
            (0, 0, 2.0),
            (1, 1, 3.0),
            (0, 1, -1.0),
            (1, 0, -0.5),
            (2, 2, 1.0),
        ];
        let a = SymmetricSparse::from_triplets(3, &t);
        let x = [1.0, 2.0, 3.0];
        let mut y = [0.0; 3];
        a.mul_vec(&x, &mut y);
        // A = [[2, -1.5, 0], [-1.5, 3, 0], [0, 0, 1]]
        assert_eq!(y, [2.0 - 3.0, -1.5 + 6.0, 3.0]);
        assert_eq!(a.bandwidth(), 1);
    }
}
