//! Minimal CSR matrix used for adjacency/Laplacian matrix-vector products.

use nalgebra::DMatrix;

/// Symmetric sparse matrix in compressed sparse row form.
///
/// Only the operations the spectral kernels need: matvec and densification.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    offsets: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row (column, value) pairs. Rows must be indexed 0..n.
    pub fn from_rows(n: usize, rows: Vec<Vec<(u32, f64)>>) -> Self {
        assert_eq!(rows.len(), n);
        let mut offsets = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(j, _)| j);
            for (j, v) in row {
                indices.push(j);
                values.push(v);
            }
            offsets.push(indices.len());
        }
        CsrMatrix {
            n,
            offsets,
            indices,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// y = M x
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.offsets[i]..self.offsets[i + 1] {
                acc += self.values[k] * x[self.indices[k] as usize];
            }
            y[i] = acc;
        }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        (self.offsets[i]..self.offsets[i + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j as usize)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_matches_dense() {
        let m = CsrMatrix::from_rows(
            3,
            vec![
                vec![(1, 2.0), (2, -1.0)],
                vec![(0, 2.0)],
                vec![(0, -1.0)],
            ],
        );
        let x = [1.0, 2.0, 3.0];
        let mut y = [0.0; 3];
        m.matvec(&x, &mut y);
        assert_eq!(y, [1.0, 2.0, -1.0]);
        let d = m.to_dense();
        assert_eq!(d[(0, 1)], 2.0);
        assert_eq!(d[(1, 0)], 2.0);
        assert_eq!(d[(2, 2)], 0.0);
    }
}
