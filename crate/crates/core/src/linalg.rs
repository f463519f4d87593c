//! Sparse column storage and the handful of dense kernels the solvers need.

use serde::{Deserialize, Serialize};

/// Compressed sparse column matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CscMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CscMatrix {
    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed,
    /// explicit zeros are dropped, and rows within a column are sorted.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ncols];
        for &(r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of range");
            cols[c].push((r, v));
        }
        Self::from_columns(nrows, cols)
    }

    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, f64)>>) -> Self {
        let ncols = cols.len();
        let mut col_ptr = Vec::with_capacity(ncols + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for mut col in cols {
            col.sort_by_key(|&(r, _)| r);
            let mut i = 0;
            while i < col.len() {
                let r = col[i].0;
                assert!(r < nrows, "row {r} out of range");
                let mut v = 0.0;
                while i < col.len() && col[i].0 == r {
                    v += col[i].1;
                    i += 1;
                }
                if v != 0.0 {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        CscMatrix {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn col_nnz(&self, j: usize) -> usize {
        self.col_ptr[j + 1] - self.col_ptr[j]
    }

    pub fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        self.col(j).map(|(r, v)| v * y[r]).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.col(c).find(|&(i, _)| i == r).map_or(0.0, |(_, v)| v)
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut out = vec![0.0; self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (r, v) in self.col(j) {
                    out[r] += v * xj;
                }
            }
        }
        out
    }

    /// `Aᵀ y`
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.nrows);
        (0..self.ncols).map(|j| self.col_dot(j, y)).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> CscMatrix {
        let columns = cols.iter().map(|&j| self.col(j).collect()).collect();
        CscMatrix::from_columns(self.nrows, columns)
    }

    pub fn dense_col(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows];
        for (r, v) in self.col(j) {
            out[r] = v;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.ncols]; self.nrows];
        for j in 0..self.ncols {
            for (r, v) in self.col(j) {
                rows[r][j] = v;
            }
        }
        rows
    }
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inverts a dense row-major `n × n` matrix by LU with partial pivoting.
/// Returns `None` when a pivot falls below `tol` relative to the column scale.
pub fn invert(mat: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    let mut a = mat.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, a[i * n + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= tol {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
                inv.swap(k * n + j, p * n + j);
            }
        }
        let piv = a[k * n + k];
        // Pivot rows stay sparse for network bases; update only their nonzeros.
        let a_nz: Vec<(usize, f64)> = (k..n)
            .filter(|&j| a[k * n + j] != 0.0)
            .map(|j| (j, a[k * n + j] / piv))
            .collect();
        let inv_nz: Vec<(usize, f64)> = (0..n)
            .filter(|&j| inv[k * n + j] != 0.0)
            .map(|j| (j, inv[k * n + j] / piv))
            .collect();
        for &(j, v) in &a_nz {
            a[k * n + j] = v;
        }
        for &(j, v) in &inv_nz {
            inv[k * n + j] = v;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i * n + k];
            if f == 0.0 {
                continue;
            }
            let row = &mut a[i * n..(i + 1) * n];
            for &(j, v) in &a_nz {
                row[j] -= f * v;
            }
            let row = &mut inv[i * n..(i + 1) * n];
            for &(j, v) in &inv_nz {
                row[j] -= f * v;
            }
        }
    }
    Some(inv)
}

/// In-place Cholesky of a symmetric positive semidefinite row-major matrix.
///
/// Pivots below `tol · max_diag` are treated as dependent directions: the pivot
/// is replaced by a huge value so the corresponding solution component vanishes.
/// This keeps consistent rank-deficient systems (network incidence rows) solvable.
pub fn cholesky_semidefinite(m: &mut [f64], n: usize, tol: f64) {
    let max_diag = (0..n).map(|i| m[i * n + i]).fold(0.0_f64, f64::max).max(1e-300);
    for k in 0..n {
        let (head, tail) = m.split_at_mut((k + 1) * n);
        let row_k = &mut head[k * n..];
        let d = row_k[k] - fast_dot(&row_k[..k], &row_k[..k]);
        if d <= tol * max_diag {
            row_k[k] = 1e64;
            for i in k + 1..n {
                tail[(i - k - 1) * n + k] = 0.0;
            }
            continue;
        }
        let d = d.sqrt();
        row_k[k] = d;
        let row_k = &head[k * n..k * n + k];
        for i in k + 1..n {
            let row_i = &mut tail[(i - k - 1) * n..(i - k) * n];
            let s = row_i[k] - fast_dot(&row_i[..k], row_k);
            row_i[k] = s / d;
        }
    }
}

/// Dot product with four independent accumulators so the loop vectorizes.
pub fn fast_dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

/// Solves `L Lᵀ x = rhs` with the factor produced by [`cholesky_semidefinite`].
pub fn cholesky_solve(l: &[f64], n: usize, rhs: &mut [f64]) {
    for i in 0..n {
        let s = rhs[i] - fast_dot(&l[i * n..i * n + i], &rhs[..i]);
        rhs[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for p in i + 1..n {
            s -= l[p * n + i] * rhs[p];
        }
        rhs[i] = s / l[i * n + i];
    }
}

/// Fill-reducing ordering and the nonzero structure of the Cholesky factor of
/// `A D Aᵀ` (the pattern does not depend on the positive diagonal `D`).
#[derive(Clone, Debug)]
pub struct NormalSymbolic {
    n: usize,
    /// `perm[k]` is the original row eliminated at step `k`.
    perm: Vec<usize>,
    inv: Vec<usize>,
    /// Rows (in eliminated order, ascending) below the diagonal of column `k`.
    structure: Vec<Vec<usize>>,
}

impl NormalSymbolic {
    /// Minimum-degree ordering computed on the explicit elimination graph.
    pub fn new(a: &CscMatrix) -> Self {
        let n = a.nrows();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        let set = |adj: &mut [u64], i: usize, j: usize| adj[i * words + j / 64] |= 1 << (j % 64);
        for j in 0..a.ncols() {
            let rows: Vec<usize> = a.col(j).map(|(r, _)| r).collect();
            for &r in &rows {
                for &k in &rows {
                    if r != k {
                        set(&mut adj, r, k);
                    }
                }
            }
        }
        let mut degree: Vec<u32> = (0..n)
            .map(|i| adj[i * words..(i + 1) * words].iter().map(|w| w.count_ones()).sum())
            .collect();
        let mut done = vec![false; n];
        let mut perm = Vec::with_capacity(n);
        let mut neighbours_of = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n).filter(|&i| !done[i]).min_by_key(|&i| degree[i]).unwrap();
            done[v] = true;
            let row: Vec<u64> = adj[v * words..(v + 1) * words].to_vec();
            let nbrs: Vec<usize> = (0..n).filter(|&i| row[i / 64] >> (i % 64) & 1 == 1).collect();
            for &u in &nbrs {
                let target = &mut adj[u * words..(u + 1) * words];
                for (t, r) in target.iter_mut().zip(&row) {
                    *t |= r;
                }
                target[u / 64] &= !(1 << (u % 64));
                target[v / 64] &= !(1 << (v % 64));
                degree[u] = target.iter().map(|w| w.count_ones()).sum();
            }
            perm.push(v);
            neighbours_of.push(nbrs);
        }
        let mut inv = vec![0; n];
        for (k, &v) in perm.iter().enumerate() {
            inv[v] = k;
        }
        let structure = neighbours_of
            .into_iter()
            .map(|nb| {
                let mut s: Vec<usize> = nb.into_iter().map(|u| inv[u]).collect();
                s.sort_unstable();
                s
            })
            .collect();
        NormalSymbolic { n, perm, inv, structure }
    }

    /// Nonzeros strictly below the diagonal of the factor.
    pub fn fill(&self) -> usize {
        self.structure.iter().map(Vec::len).sum()
    }
}

/// Cholesky factor of `A D Aᵀ` in the ordering of a [`NormalSymbolic`].
/// Dependent directions are handled as in [`cholesky_semidefinite`].
#[derive(Clone, Debug)]
pub struct NormalFactor<'s> {
    sym: &'s NormalSymbolic,
    /// Lower triangle, row-major, permuted.
    l: Vec<f64>,
}

impl<'s> NormalFactor<'s> {
    pub fn new(sym: &'s NormalSymbolic, a: &CscMatrix, d: &[f64], tol: f64) -> Self {
        let n = sym.n;
        let mut l = vec![0.0; n * n];
        for (j, &dj) in d.iter().enumerate() {
            let col: Vec<(usize, f64)> = a.col(j).map(|(r, v)| (sym.inv[r], v)).collect();
            for &(r, v) in &col {
                for &(k, w) in &col {
                    if k <= r {
                        l[r * n + k] += dj * v * w;
                    }
                }
            }
        }
        let max_diag = (0..n).map(|i| l[i * n + i]).fold(0.0_f64, f64::max).max(1e-300);
        for k in 0..n {
            let st = &sym.structure[k];
            let dk = l[k * n + k];
            if dk <= tol * max_diag {
                l[k * n + k] = 1e64;
                for &i in st {
                    l[i * n + k] = 0.0;
                }
                continue;
            }
            let dk = dk.sqrt();
            l[k * n + k] = dk;
            for &i in st {
                l[i * n + k] /= dk;
            }
            for (p, &i) in st.iter().enumerate() {
                let lik = l[i * n + k];
                if lik == 0.0 {
                    continue;
                }
                for &j in &st[..=p] {
                    let ljk = l[j * n + k];
                    l[i * n + j] -= lik * ljk;
                }
            }
        }
        NormalFactor { sym, l }
    }

    /// Solves `A D Aᵀ x = rhs` in place.
    pub fn solve(&self, rhs: &mut [f64]) {
        let (n, sym, l) = (self.sym.n, self.sym, &self.l);
        let mut y: Vec<f64> = sym.perm.iter().map(|&v| rhs[v]).collect();
        for k in 0..n {
            y[k] /= l[k * n + k];
            let yk = y[k];
            for &i in &sym.structure[k] {
                y[i] -= l[i * n + k] * yk;
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for &i in &sym.structure[k] {
                s -= l[i * n + k] * y[i];
            }
            y[k] = s / l[k * n + k];
        }
        for (k, &v) in sym.perm.iter().enumerate() {
            rhs[v] = y[k];
        }
    }
}

/// Incrementally tests vectors for linear independence (modified Gram–Schmidt
/// with one reorthogonalization pass).
pub struct IndependentSet {
    basis: Vec<Vec<f64>>,
    tol: f64,
}

impl IndependentSet {
    pub fn new(tol: f64) -> Self {
        IndependentSet {
            basis: Vec::new(),
            tol,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v` if it is independent of the vectors accepted so far.
    pub fn try_add(&mut self, v: &[f64]) -> bool {
        let scale = norm2(v);
        if scale == 0.0 {
            return false;
        }
        let mut w: Vec<f64> = v.iter().map(|x| x / scale).collect();
        for _ in 0..2 {
            for q in &self.basis {
                let p = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= p * qi;
                }
            }
        }
        let r = norm2(&w);
        if r <= self.tol {
            return false;
        }
        w.iter_mut().for_each(|x| *x /= r);
        self.basis.push(w);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_normal(a: &CscMatrix, d: &[f64]) -> Vec<f64> {
        let m = a.nrows();
        let mut out = vec![0.0; m * m];
        for (j, &dj) in d.iter().enumerate() {
            for (r, v) in a.col(j) {
                for (k, w) in a.col(j) {
                    out[r * m + k] += dj * v * w;
                }
            }
        }
        out
    }

    #[test]
    fn sparse_normal_factor_matches_dense_solve() {
        let trip = [
            (0, 0, 2.0), (1, 0, -1.0), (1, 1, 3.0), (2, 2, 1.0), (3, 2, 4.0),
            (0, 3, 1.0), (3, 3, -2.0), (2, 4, 5.0), (4, 4, 1.0), (4, 5, 2.0), (0, 5, 1.0),
        ];
        let a = CscMatrix::from_triplets(5, 6, &trip);
        let d = [1.0, 0.5, 2.0, 3.0, 0.25, 1.5];
        let sym = NormalSymbolic::new(&a);
        let f = NormalFactor::new(&sym, &a, &d, 1e-13);
        let mut x = vec![1.0, -2.0, 0.5, 3.0, -1.0];
        let rhs = x.clone();
        f.solve(&mut x);
        let mut dense = dense_normal(&a, &d);
        cholesky_semidefinite(&mut dense, 5, 1e-13);
        let mut xd = rhs.clone();
        cholesky_solve(&dense, 5, &mut xd);
        for (u, v) in x.iter().zip(&xd) {
            assert!((u - v).abs() < 1e-10, "{u} vs {v}");
        }
    }

    #[test]
    fn sparse_normal_factor_handles_incidence_rank_deficiency() {
        // Cycle 0→1→2→3→0 plus chord 0→2; rows sum to zero.
        let arcs = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)];
        let mut trip = Vec::new();
        for (j, &(t, h)) in arcs.iter().enumerate() {
            trip.push((t, j, -1.0));
            trip.push((h, j, 1.0));
        }
        let a = CscMatrix::from_triplets(4, 5, &trip);
        let d = [1.0, 2.0, 0.5, 1.0, 3.0];
        let sym = NormalSymbolic::new(&a);
        let f = NormalFactor::new(&sym, &a, &d, 1e-13);
        // Consistent right-hand side: A D Aᵀ t for some t.
        let t = [0.3, -1.0, 2.0, 0.0];
        let m = dense_normal(&a, &d);
        let rhs: Vec<f64> = (0..4).map(|i| (0..4).map(|k| m[i * 4 + k] * t[k]).sum()).collect();
        let mut x = rhs.clone();
        f.solve(&mut x);
        let back: Vec<f64> = (0..4).map(|i| (0..4).map(|k| m[i * 4 + k] * x[k]).sum()).collect();
        for (u, v) in back.iter().zip(&rhs) {
            assert!((u - v).abs() < 1e-9);
        }
        assert!(sym.fill() <= 6);
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let a = CscMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 1, 0.0)]);
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.col_nnz(1), 0);
    }

    #[test]
    fn transpose_product_matches_dense() {
        let a = CscMatrix::from_triplets(2, 3, &[(0, 0, 1.0), (1, 0, -2.0), (1, 2, 4.0)]);
        assert_eq!(a.mul_vec(&[1.0, 5.0, 0.5]), vec![1.0, 0.0]);
        assert_eq!(a.tr_mul_vec(&[1.0, 1.0]), vec![-1.0, 0.0, 4.0]);
    }

    #[test]
    fn invert_small_matrix() {
        let inv = invert(&[0.0, 2.0, 1.0, 1.0], 2, 1e-12).unwrap();
        let expect = [-0.5, 1.0, 0.5, 0.0];
        for (a, b) in inv.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(invert(&[1.0, 2.0, 2.0, 4.0], 2, 1e-12).is_none());
    }

    #[test]
    fn semidefinite_cholesky_solves_consistent_singular_system() {
        // Laplacian of a path on three nodes: rank 2, rhs orthogonal to ones.
        let mut m = vec![1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0];
        let orig = m.clone();
        cholesky_semidefinite(&mut m, 3, 1e-12);
        let mut x = vec![1.0, 0.0, -1.0];
        cholesky_solve(&m, 3, &mut x);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| orig[i * 3 + j] * x[j]).sum();
            assert!((r - [1.0, 0.0, -1.0][i]).abs() < 1e-9);
        }
    }

    #[test]
    fn independent_set_detects_dependency() {
        let mut s = IndependentSet::new(1e-10);
        assert!(s.try_add(&[1.0, 0.0, 1.0]));
        assert!(s.try_add(&[0.0, 1.0, 0.0]));
        assert!(!s.try_add(&[2.0, 3.0, 2.0]));
        assert_eq!(s.rank(), 2);
    }
}
