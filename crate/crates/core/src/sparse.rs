//! Compressed sparse column matrices and an LDLᵀ factorization for
//! symmetric quasi-definite systems.
//!
//! The factorization performs symbolic analysis (elimination tree and
//! column counts) once; numeric refactorization with unchanged sparsity
//! reuses it. No pivoting is performed, which is valid for the two matrix
//! classes used in this crate: symmetric positive definite implicit-Euler
//! operators and quasi-definite KKT matrices.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("sparse matrix structure invalid: {0}")]
    Structure(String),
    #[error("LDL factorization failed: {0}")]
    Factorization(String),
}

/// Sparse matrix in compressed sparse column format.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix {
    pub nrows: usize,
    pub ncols: usize,
    /// Column pointers, length `ncols + 1`.
    pub col_ptr: Vec<usize>,
    /// Row indices, sorted within each column.
    pub row_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CscMatrix {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self, SparseError> {
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(SparseError::Structure(format!(
                    "triplet ({r}, {c}) outside {nrows}x{ncols}"
                )));
            }
        }
        let mut entries: Vec<(usize, usize, f64)> = triplets.to_vec();
        entries.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));

        let mut col_ptr = vec![0usize; ncols + 1];
        let mut row_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for &(r, c, v) in &entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_idx.push(r);
                values.push(v);
                col_ptr[c + 1] += 1;
                last = Some((r, c));
            }
        }
        for c in 0..ncols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Ok(Self {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        })
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// y = A x without allocating.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        y.fill(0.0);
        for c in 0..self.ncols {
            let xc = x[c];
            if xc == 0.0 {
                continue;
            }
            for p in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.row_idx[p]] += self.values[p] * xc;
            }
        }
    }

    /// y = Aᵀ x without allocating.
    pub fn mul_transpose_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.nrows);
        debug_assert_eq!(y.len(), self.ncols);
        for c in 0..self.ncols {
            let mut acc = 0.0;
            for p in self.col_ptr[c]..self.col_ptr[c + 1] {
                acc += self.values[p] * x[self.row_idx[p]];
            }
            y[c] = acc;
        }
    }

    pub fn mul_transpose_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.ncols];
        self.mul_transpose_vec_into(x, &mut y);
        y
    }

    /// Infinity norms of every column.
    pub fn col_inf_norms(&self, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.ncols);
        for c in 0..self.ncols {
            let mut m = 0.0f64;
            for p in self.col_ptr[c]..self.col_ptr[c + 1] {
                m = m.max(self.values[p].abs());
            }
            out[c] = m;
        }
    }

    /// Infinity norms of every row.
    pub fn row_inf_norms(&self, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.nrows);
        out.fill(0.0);
        for p in 0..self.nnz() {
            let r = self.row_idx[p];
            out[r] = out[r].max(self.values[p].abs());
        }
    }

    /// Scale as D_r A D_c in place.
    pub fn scale(&mut self, row_scale: &[f64], col_scale: &[f64]) {
        for c in 0..self.ncols {
            for p in self.col_ptr[c]..self.col_ptr[c + 1] {
                self.values[p] *= row_scale[self.row_idx[p]] * col_scale[c];
            }
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for c in 0..self.ncols {
            for p in self.col_ptr[c]..self.col_ptr[c + 1] {
                m[(self.row_idx[p], c)] += self.values[p];
            }
        }
        m
    }
}

/// LDLᵀ factorization of a symmetric matrix given by its upper triangle in
/// CSC form. Every diagonal entry must be structurally present and, with
/// sorted rows, is the last entry of its column.
#[derive(Debug, Clone)]
pub struct LdlFactorization {
    n: usize,
    // symbolic data, reused across refactorizations
    etree: Vec<isize>,
    // numeric factor
    l_colptr: Vec<usize>,
    l_rowidx: Vec<usize>,
    l_values: Vec<f64>,
    d: Vec<f64>,
    d_inv: Vec<f64>,
    /// Number of strictly positive entries of D from the last factorization.
    pub n_positive_d: usize,
    // workspaces
    y_vals: Vec<f64>,
    y_markers: Vec<bool>,
    y_idx: Vec<usize>,
    elim_buffer: Vec<usize>,
    l_next: Vec<usize>,
}

impl LdlFactorization {
    /// Symbolic analysis plus a first numeric factorization.
    pub fn new(upper: &CscMatrix) -> Result<Self, SparseError> {
        if upper.nrows != upper.ncols {
            return Err(SparseError::Structure("matrix not square".into()));
        }
        let n = upper.ncols;
        if n == 0 {
            return Err(SparseError::Structure("empty matrix".into()));
        }
        // check upper-triangularity, sorted rows, and diagonal presence
        for c in 0..n {
            let lo = upper.col_ptr[c];
            let hi = upper.col_ptr[c + 1];
            if lo == hi || upper.row_idx[hi - 1] != c {
                return Err(SparseError::Structure(format!(
                    "diagonal entry missing in column {c}"
                )));
            }
            for p in lo..hi {
                if upper.row_idx[p] > c {
                    return Err(SparseError::Structure("matrix not upper triangular".into()));
                }
                if p > lo && upper.row_idx[p] <= upper.row_idx[p - 1] {
                    return Err(SparseError::Structure("row indices not sorted".into()));
                }
            }
        }

        // elimination tree and column counts of L
        let mut etree = vec![-1isize; n];
        let mut l_nz = vec![0usize; n];
        let mut work = vec![usize::MAX; n];
        for j in 0..n {
            work[j] = j;
            for p in upper.col_ptr[j]..upper.col_ptr[j + 1] {
                let mut i = upper.row_idx[p];
                while work[i] != j {
                    if etree[i] == -1 {
                        etree[i] = j as isize;
                    }
                    l_nz[i] += 1;
                    work[i] = j;
                    i = etree[i] as usize;
                }
            }
        }

        let mut l_colptr = vec![0usize; n + 1];
        for (i, &count) in l_nz.iter().enumerate() {
            l_colptr[i + 1] = l_colptr[i] + count;
        }
        let lnnz = l_colptr[n];

        let mut fact = Self {
            n,
            etree,
            l_colptr,
            l_rowidx: vec![0; lnnz],
            l_values: vec![0.0; lnnz],
            d: vec![0.0; n],
            d_inv: vec![0.0; n],
            n_positive_d: 0,
            y_vals: vec![0.0; n],
            y_markers: vec![false; n],
            y_idx: vec![0; n],
            elim_buffer: vec![0; n],
            l_next: vec![0; n],
        };
        fact.refactor(upper)?;
        Ok(fact)
    }

    /// Numeric refactorization with the sparsity pattern fixed at `new`.
    pub fn refactor(&mut self, upper: &CscMatrix) -> Result<(), SparseError> {
        let n = self.n;
        if upper.ncols != n || upper.nrows != n {
            return Err(SparseError::Structure("dimension changed".into()));
        }
        for i in 0..n {
            self.y_markers[i] = false;
            self.y_vals[i] = 0.0;
            self.d[i] = 0.0;
            self.l_next[i] = self.l_colptr[i];
        }
        self.n_positive_d = 0;

        // first column holds only its diagonal
        self.d[0] = upper.values[upper.col_ptr[1] - 1];
        if self.d[0] == 0.0 {
            return Err(SparseError::Factorization("zero pivot at column 0".into()));
        }
        if self.d[0] > 0.0 {
            self.n_positive_d += 1;
        }
        self.d_inv[0] = 1.0 / self.d[0];

        for k in 1..n {
            let lo = upper.col_ptr[k];
            let hi = upper.col_ptr[k + 1];
            // diagonal is the last entry of the column
            self.d[k] = upper.values[hi - 1];

            // nonzero pattern of row k of L via elimination-tree walks
            let mut nnz_y = 0usize;
            for p in lo..hi - 1 {
                let bidx = upper.row_idx[p];
                self.y_vals[bidx] = upper.values[p];
                let next = bidx;
                if !self.y_markers[next] {
                    self.y_markers[next] = true;
                    self.elim_buffer[0] = next;
                    let mut nnz_e = 1usize;
                    let mut t = self.etree[bidx];
                    while t != -1 && (t as usize) < k {
                        let tu = t as usize;
                        if self.y_markers[tu] {
                            break;
                        }
                        self.y_markers[tu] = true;
                        self.elim_buffer[nnz_e] = tu;
                        nnz_e += 1;
                        t = self.etree[tu];
                    }
                    while nnz_e > 0 {
                        nnz_e -= 1;
                        self.y_idx[nnz_y] = self.elim_buffer[nnz_e];
                        nnz_y += 1;
                    }
                }
            }

            // process in topological order (reverse of the stack)
            for i in (0..nnz_y).rev() {
                let cidx = self.y_idx[i];
                let tmp = self.l_next[cidx];
                let yv = self.y_vals[cidx];
                for j in self.l_colptr[cidx]..tmp {
                    self.y_vals[self.l_rowidx[j]] -= self.l_values[j] * yv;
                }
                self.l_rowidx[tmp] = k;
                let lkj = yv * self.d_inv[cidx];
                self.l_values[tmp] = lkj;
                self.d[k] -= yv * lkj;
                self.l_next[cidx] += 1;
                self.y_vals[cidx] = 0.0;
                self.y_markers[cidx] = false;
            }

            if self.d[k] == 0.0 {
                return Err(SparseError::Factorization(format!(
                    "zero pivot at column {k}"
                )));
            }
            if self.d[k] > 0.0 {
                self.n_positive_d += 1;
            }
            self.d_inv[k] = 1.0 / self.d[k];
        }
        Ok(())
    }

    /// Solve A x = b in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        // L y = b
        for k in 0..self.n {
            let xk = x[k];
            if xk != 0.0 {
                for p in self.l_colptr[k]..self.l_colptr[k + 1] {
                    x[self.l_rowidx[p]] -= self.l_values[p] * xk;
                }
            }
        }
        // D z = y
        for k in 0..self.n {
            x[k] *= self.d_inv[k];
        }
        // Lᵀ x = z
        for k in (0..self.n).rev() {
            let mut acc = x[k];
            for p in self.l_colptr[k]..self.l_colptr[k + 1] {
                acc -= self.l_values[p] * x[self.l_rowidx[p]];
            }
            x[k] = acc;
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}
