//! Sparse symmetric storage and a banded Cholesky factorization.

use nalgebra::DMatrix;

use crate::error::{Result, SteklovError};

/// Compressed-row matrix assembled from (row, col, value) triplets;
/// duplicate entries are summed.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            assert!(i < n && j < n, "triplet ({i}, {j}) outside a {n}x{n} matrix");
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `xᵀ A y`
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A_ij − A_ji|`
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite band
/// matrix with half-bandwidth `bw`, stored row-wise: row `i` keeps columns
/// `i−bw ..= i`.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandCholesky {
    /// Factorizes the principal submatrix of `a` selected by `index`
    /// (`index[k]` is the row of `a` that becomes row `k`).
    pub fn factor(a: &CsrMatrix, index: &[usize], matrix: &'static str) -> Result<Self> {
        let n = index.len();
        let mut local = vec![usize::MAX; a.dim()];
        for (k, &g) in index.iter().enumerate() {
            local[g] = k;
        }
        let mut bw = 0;
        for (k, &g) in index.iter().enumerate() {
            for (j, _) in a.row(g) {
                let l = local[j];
                if l != usize::MAX && l <= k {
                    bw = bw.max(k - l);
                }
            }
        }
        let w = bw + 1;
        let mut data = vec![0.0; n * w];
        let mut max_diag: f64 = 0.0;
        for (k, &g) in index.iter().enumerate() {
            for (j, v) in a.row(g) {
                let l = local[j];
                if l != usize::MAX && l <= k {
                    data[k * w + (l + bw - k)] = v;
                }
            }
            max_diag = max_diag.max(data[k * w + bw].abs());
        }

        for i in 0..n {
            let row_start = i.saturating_sub(bw);
            for j in row_start..=i {
                let k0 = row_start.max(j.saturating_sub(bw));
                let ri = i * w + bw - i;
                let rj = j * w + bw - j;
                let mut s = data[ri + j];
                let li = &data[ri + k0..ri + j];
                let lj = &data[rj + k0..rj + j];
                s -= li.iter().zip(lj).map(|(x, y)| x * y).sum::<f64>();
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(SteklovError::Factorization {
                            matrix,
                            pivot: i,
                            value: s,
                            condition: if s.abs() > 0.0 { max_diag / s.abs() } else { f64::INFINITY },
                        });
                    }
                    data[ri + j] = s.sqrt();
                } else {
                    data[ri + j] = s / data[rj + j];
                }
            }
        }
        Ok(Self { n, bw, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.bw + 1) + j + self.bw - i]
    }

    /// Solves `L y = b` in place; entries of `b` before `start` must be zero.
    pub fn forward_from(&self, b: &mut [f64], start: usize) {
        let w = self.bw + 1;
        for i in start..self.n {
            let k0 = i.saturating_sub(self.bw).max(start);
            let ri = i * w + self.bw - i;
            let s: f64 = self.data[ri + k0..ri + i].iter().zip(&b[k0..i]).map(|(l, y)| l * y).sum();
            b[i] = (b[i] - s) / self.data[ri + i];
        }
    }

    /// Solves `Lᵀ x = y` in place.
    pub fn backward(&self, y: &mut [f64]) {
        for i in (0..self.n).rev() {
            y[i] /= self.at(i, i);
            let xi = y[i];
            for k in i.saturating_sub(self.bw)..i {
                y[k] -= self.at(i, k) * xi;
            }
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.forward_from(&mut x, 0);
        self.backward(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 0, 2.0), (1, 0, 0.5)]);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 0), 0.5);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.asymmetry(), 0.5);
    }

    #[test]
    fn band_solve_matches_dense() {
        let n = 30;
        let a = laplacian_1d(n);
        let idx: Vec<usize> = (0..n).collect();
        let chol = BandCholesky::factor(&a, &idx, "test").unwrap();
        assert_eq!(chol.bandwidth(), 1);
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = chol.solve(&b);
        let r = a.mul_vec(&x);
        for i in 0..n {
            assert!((r[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn submatrix_selection_and_failure() {
        let a = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(BandCholesky::factor(&a, &[1], "sub").is_ok());
        let err = BandCholesky::factor(&a, &[0, 1], "indefinite").unwrap_err();
        assert!(matches!(err, SteklovError::Factorization { matrix: "indefinite", pivot: 1, .. }));
    }
}
