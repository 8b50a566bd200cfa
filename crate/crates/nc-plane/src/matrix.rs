//! Dense exact matrices over a [`Field`], with deterministic row reduction.
//!
//! Pivots are chosen as the first nonzero entry scanning left to right, so
//! echelon forms, kernels and quotient bases are reproducible across runs.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(f: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![f.zero(); rows * cols],
        }
    }

    pub fn identity(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m[(i, i)] = f.one();
        }
        m
    }

    pub fn from_fn(f: &F, rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let _ = f;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Integer-entry constructor, mostly for tests and fixtures.
    pub fn from_i64(f: &F, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|n| f.from_i64(*n)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, &other[(k, j)]);
                    out[(i, j)] = f.add(&out[(i, j)], &t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    let t = f.mul(&self[(i, j)], &v[j]);
                    acc = f.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self, f: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.neg(a)).collect(),
        }
    }

    pub fn scale(&self, f: &F, c: &F::Elem) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn is_zero(&self, f: &F) -> bool {
        self.data.iter().all(|a| f.is_zero(a))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity((self.cols + other.cols) * self.rows);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn from_rows(f: &F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().cloned());
        }
        let _ = f;
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_cols(f: &F, rows: usize, cols: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(f, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref(&self, f: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // First nonzero entry in column c at or below row r.
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(&m[(r, c)]).expect("pivot nonzero");
            for j in c..m.cols {
                m[(r, j)] = f.mul(&m[(r, j)], &inv);
            }
            for i in 0..m.rows {
                if i != r && !f.is_zero(&m[(i, c)]) {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = f.mul(&factor, &m[(r, j)]);
                        m[(i, j)] = f.sub(&m[(i, j)], &t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &F) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the right null space, as column vectors in free-column order.
    pub fn kernel_basis(&self, f: &F) -> Vec<Vec<F::Elem>> {
        let (r, pivots) = self.rref(f);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&r[(row, free)]);
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * X = rhs` exactly; `None` when inconsistent.
    pub fn solve(&self, f: &F, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref(f);
        // Inconsistent iff a pivot lands in the rhs block.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F::Elem;
    fn index(&self, (i, j): (usize, usize)) -> &F::Elem {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F::Elem {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// A subspace of k^n held in reduced row-echelon form. The complement of the
/// pivot coordinates gives a canonical basis of the quotient.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    ambient: usize,
    rref: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Subspace spanned by the rows of `m`.
    pub fn from_rows(f: &F, m: &Matrix<F>) -> Self {
        let ambient = m.cols();
        let (r, pivots) = m.rref(f);
        let rows = pivots.len();
        let mut data = Vec::with_capacity(rows * ambient);
        for i in 0..rows {
            data.extend(r.row(i).iter().cloned());
        }
        Subspace {
            ambient,
            rref: Matrix::new(rows, ambient, data),
            pivots,
        }
    }

    /// Subspace spanned by the columns of `m`.
    pub fn from_cols(f: &F, m: &Matrix<F>) -> Self {
        Self::from_rows(f, &m.transpose())
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn basis_rows(&self) -> &Matrix<F> {
        &self.rref
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Indices carrying the canonical quotient coordinates.
    pub fn complement(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Canonical representative of `v` modulo the subspace: pivot
    /// coordinates are eliminated.
    pub fn reduce(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ambient);
        let mut out = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            if f.is_zero(&out[pc]) {
                continue;
            }
            let factor = out[pc].clone();
            for j in 0..self.ambient {
                let t = f.mul(&factor, &self.rref[(row, j)]);
                out[j] = f.sub(&out[j], &t);
            }
        }
        out
    }

    /// Coordinates of `v + subspace` on the complement basis.
    pub fn quotient_coords(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        let red = self.reduce(f, v);
        self.complement().iter().map(|&c| red[c].clone()).collect()
    }

    pub fn contains(&self, f: &F, v: &[F::Elem]) -> bool {
        self.reduce(f, v).iter().all(|x| f.is_zero(x))
    }
}

/// dim(U ∩ W) for column spans `u`, `w` in the same ambient space.
pub fn intersection_dim<F: Field>(f: &F, u: &Matrix<F>, w: &Matrix<F>) -> usize {
    assert_eq!(u.rows(), w.rows());
    let ru = u.rank(f);
    let rw = w.rank(f);
    let joint = u.hstack(w).rank(f);
    ru + rw - joint
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num::BigRational;
    use proptest::prelude::*;

    #[test]
    fn kernel_of_identity_is_empty() {
        let f = Rationals;
        let m = Matrix::identity(&f, 3);
        assert!(m.kernel_basis(&f).is_empty());
        assert_eq!(m.rank(&f), 3);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::zeros(&f, 1, 1);
        let k = m.kernel_basis(&f);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![1]);
        // Kernel of the 0 x c matrix is all of the c-space.
        let m = Matrix::zeros(&f, 0, 4);
        assert_eq!(m.kernel_basis(&f).len(), 4);
        assert_eq!(m.rank(&f), 0);
    }

    #[test]
    fn rank_one_kernel_matches_row_reduction_oracle() {
        // Independent oracle: [[1,2],[2,4]] row-reduces to [[1,2],[0,0]],
        // so the kernel is spanned by (-2, 1), proportional to (2, -1).
        let f = Rationals;
        let m = Matrix::from_i64(&f, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rank(&f), 1);
        let k = m.kernel_basis(&f);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // v proportional to (2, -1): 2*v[1] + v[0]*1 ... check v0 * (-1) = v1 * 2.
        let lhs = f.mul(&v[0], &f.from_i64(-1));
        let rhs = f.mul(&v[1], &f.from_i64(2));
        assert_eq!(lhs, rhs);
        assert!(!f.is_zero(&v[0]) || !f.is_zero(&v[1]));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_i64(&f, 2, 2, &[1, 1, 0, 1]);
        let b = Matrix::from_i64(&f, 2, 1, &[3, 5]);
        let x = a.solve(&f, &b).unwrap();
        assert_eq!(a.mul(&f, &x), b);
        let sing = Matrix::from_i64(&f, 2, 2, &[1, 2, 2, 4]);
        let bad = Matrix::from_i64(&f, 2, 1, &[1, 0]);
        assert!(sing.solve(&f, &bad).is_none());
    }

    #[test]
    fn subspace_quotient_coords() {
        let f = Rationals;
        // Span of (1,0,1) in Q^3; quotient has complement coords {1,2} after
        // pivot at column 0.
        let m = Matrix::from_i64(&f, 1, 3, &[1, 0, 1]);
        let s = Subspace::from_rows(&f, &m);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.complement(), vec![1, 2]);
        let q = s.quotient_coords(&f, &[f.from_i64(2), f.from_i64(3), f.from_i64(2)]);
        assert_eq!(q, vec![f.from_i64(3), f.from_i64(0)]);
        assert!(s.contains(&f, &[f.from_i64(5), f.from_i64(0), f.from_i64(5)]));
    }

    fn arb_matrix_fp(rows: usize, cols: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(0i64..101, rows * cols)
    }

    proptest! {
        #[test]
        fn rank_nullity_fp(entries in arb_matrix_fp(5, 7)) {
            let f = PrimeField::new(101).unwrap();
            let m = Matrix::from_i64(&f, 5, 7, &entries);
            let k = m.kernel_basis(&f);
            prop_assert_eq!(m.rank(&f) + k.len(), 7);
            for v in &k {
                let image = m.mul_vec(&f, v);
                prop_assert!(image.iter().all(|x| *x == 0));
            }
        }

        #[test]
        fn rank_nullity_rationals(entries in proptest::collection::vec(-6i64..=6, 12)) {
            let f = Rationals;
            let m = Matrix::from_i64(&f, 3, 4, &entries);
            let k = m.kernel_basis(&f);
            prop_assert_eq!(m.rank(&f) + k.len(), 4);
            for v in &k {
                let image = m.mul_vec(&f, v);
                prop_assert!(image.iter().all(|x| <Rationals as crate::field::Field>::is_zero(&f, x)));
            }
        }

        #[test]
        fn rref_is_projector_like(entries in arb_matrix_fp(4, 4)) {
            let f = PrimeField::new(101).unwrap();
            let m = Matrix::from_i64(&f, 4, 4, &entries);
            let (r, pivots) = m.rref(&f);
            // Row space is preserved: every original row reduces to zero.
            let s = Subspace::from_rows(&f, &r);
            prop_assert_eq!(s.dim(), pivots.len());
            for i in 0..4 {
                prop_assert!(s.contains(&f, m.row(i)));
            }
        }
    }

    #[test]
    fn intersection_dims() {
        let f = Rationals;
        let u = Matrix::from_i64(&f, 3, 2, &[1, 0, 0, 1, 0, 0]); // span(e1,e2)
        let w = Matrix::from_i64(&f, 3, 2, &[0, 0, 1, 0, 0, 1]); // span(e2,e3)
        assert_eq!(intersection_dim(&f, &u, &w), 1);
    }

    #[test]
    fn bigrational_entries_stay_reduced() {
        let f = Rationals;
        let m = Matrix::from_i64(&f, 2, 2, &[2, 4, 3, 6]);
        let (r, pivots) = m.rref(&f);
        assert_eq!(pivots, vec![0]);
        assert_eq!(r[(0, 1)], BigRational::from(num::BigInt::from(2)));
    }
}
