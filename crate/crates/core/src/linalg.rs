//! Exact dense linear algebra over a [`Field`].
//!
//! Row reduction always pivots on the first nonzero entry, scanning
//! top-to-bottom and left-to-right, so every basis produced here is
//! reproducible bit-for-bit.

use crate::error::{Error, Result};
use crate::field::Field;

pub type Vector<F> = Vec<<F as Field>::Elem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Reduced row-echelon form with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution<F: Field> {
    pub particular: Vector<F>,
    /// Columns span the null space.
    pub kernel: Matrix<F>,
}

/// `dst += c * src`.
#[inline]
pub fn axpy<F: Field>(field: &F, dst: &mut [F::Elem], c: &F::Elem, src: &[F::Elem]) {
    if field.is_zero(c) {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !field.is_zero(s) {
            *d = field.add(d, &field.mul(c, s));
        }
    }
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !field.is_zero(x) && !field.is_zero(y) {
            acc = field.add(&acc, &field.mul(x, y));
        }
    }
    acc
}

pub fn is_zero_vec<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| field.is_zero(x))
}

pub fn unit_vector<F: Field>(field: &F, n: usize, i: usize) -> Vector<F> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn scale_vec<F: Field>(field: &F, c: &F::Elem, v: &[F::Elem]) -> Vector<F> {
    v.iter().map(|x| field.mul(c, x)).collect()
}

pub fn add_vec<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| field.add(x, y)).collect()
}

pub fn sub_vec<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| field.sub(x, y)).collect()
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self { data: vec![field.zero(); rows * cols], field: field.clone(), rows, cols }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &F, rows: Vec<Vector<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(field: &F, rows: usize, cols: &[Vector<F>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn column(field: &F, v: &[F::Elem]) -> Self {
        Self { field: field.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vector<F>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.field, &self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.field, self.rows)
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DomainMismatch(self.field.tag().to_string(), other.field.tag().to_string()));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if !f.is_zero(a) {
                    axpy(f, dst, a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    /// Panics on shape or domain mismatch; use [`Matrix::try_mul`] for untrusted input.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix product")
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vector<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(&self.field, self.row(i), v)).collect()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("sum of differently shaped matrices".into()));
        }
        let f = &self.field;
        Ok(Self {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("matrix sum")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| self.field.neg(x))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        self.map(|x| self.field.mul(c, x))
    }

    fn map(&self, f: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(&self.field, self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => self.field.zero(),
            }
        })
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(&self.field, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(&self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        Self::from_fn(f, self.rows * other.rows, self.cols * other.cols, |i, j| {
            f.mul(self.get(i / other.rows, j / other.cols), other.get(i % other.rows, j % other.cols))
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn rref(&self) -> Rref<F> {
        let mut space = RowSpace::new(&self.field, self.cols);
        for i in 0..self.rows {
            space.insert(self.row(i).to_vec());
        }
        let rank = space.rank();
        let mut reduced = Self::zeros(&self.field, self.rows, self.cols);
        for (k, row) in space.rows().iter().enumerate() {
            reduced.data[k * self.cols..(k + 1) * self.cols].clone_from_slice(row);
        }
        Rref { reduced, rank, pivots: space.pivots() }
    }

    pub fn rank(&self) -> usize {
        let mut space = RowSpace::new(&self.field, self.cols);
        for i in 0..self.rows {
            space.insert(self.row(i).to_vec());
            if space.rank() == self.cols {
                break;
            }
        }
        space.rank()
    }

    /// Columns form a basis of `{x : A x = 0}`, one per free column in increasing order.
    pub fn kernel_basis(&self) -> Self {
        let mut space = RowSpace::new(&self.field, self.cols);
        for i in 0..self.rows {
            space.insert(self.row(i).to_vec());
        }
        space.kernel_basis()
    }

    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Solution<F>>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!("system has {} rows but rhs has length {}", self.rows, b.len())));
        }
        let f = &self.field;
        let n = self.cols;
        let mut space = RowSpace::new(f, n + 1);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.push(b[i].clone());
            space.insert(row);
        }
        if space.pivots().last() == Some(&n) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); n];
        for (row, &p) in space.rows().iter().zip(space.pivots().iter()) {
            x[p] = row[n].clone();
        }
        let coeffs = RowSpace { field: f.clone(), width: n, rows: space.rows.iter().map(|r| r[..n].to_vec()).collect(), pivots: space.pivots.clone() };
        Ok(Some(Solution { particular: x, kernel: coeffs.kernel_basis() }))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let r = aug.rref();
        if r.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) || r.rank < n {
            return None;
        }
        Some(r.reduced.block(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// `X` with `X * self = I`, for matrices of full column rank.
    pub fn left_inverse(&self) -> Option<Self> {
        let n = self.cols;
        let r = self.rref();
        if r.rank < n {
            return None;
        }
        // rows of self at its first independent rows give an invertible square block
        let t = self.transpose().rref();
        let sq = self.select_rows(&t.pivots);
        let inv = sq.inverse()?;
        let mut out = Self::zeros(&self.field, n, self.rows);
        for (k, &row) in t.pivots.iter().enumerate() {
            for i in 0..n {
                out.set(i, row, inv.get(i, k).clone());
            }
        }
        Some(out)
    }

    /// Pivot columns of `self`, i.e. a basis of the column space drawn from the columns.
    pub fn column_space(&self) -> Self {
        let p = self.rref().pivots;
        self.select_cols(&p)
    }

    /// Canonical basis of the column space: transposed RREF of the transpose.
    pub fn canonical_column_space(&self) -> Self {
        let r = self.transpose().rref();
        r.reduced.block(0, r.rank, 0, self.rows).transpose()
    }
}

/// An incrementally built row space kept in reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct RowSpace<F: Field> {
    field: F,
    width: usize,
    rows: Vec<Vector<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(field: &F, width: usize) -> Self {
        Self { field: field.clone(), width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by(field: &F, width: usize, vectors: impl IntoIterator<Item = Vector<F>>) -> Self {
        let mut s = Self::new(field, width);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[Vector<F>] {
        &self.rows
    }
    pub fn pivots(&self) -> Vec<usize> {
        self.pivots.clone()
    }

    /// Reduce `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&v[p]) {
                let c = f.neg(&v[p]);
                axpy(f, v, &c, row);
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vec(&self.field, &w)
    }

    /// Returns whether `v` enlarged the space.
    pub fn insert(&mut self, mut v: Vector<F>) -> bool {
        assert_eq!(v.len(), self.width, "row width");
        self.reduce(&mut v);
        let f = self.field.clone();
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(&inv, x);
        }
        for row in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let c = f.neg(&row[p]);
                axpy(&f, row, &c, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Columns not carrying a pivot, increasing.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut free = Vec::with_capacity(self.width - self.rank());
        let mut k = 0;
        for j in 0..self.width {
            if k < self.pivots.len() && self.pivots[k] == j {
                k += 1;
            } else {
                free.push(j);
            }
        }
        free
    }

    pub fn kernel_basis(&self) -> Matrix<F> {
        let f = &self.field;
        let free = self.free_columns();
        let mut out = Matrix::zeros(f, self.width, free.len());
        for (k, &j) in free.iter().enumerate() {
            out.set(j, k, f.one());
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !f.is_zero(&row[j]) {
                    out.set(p, k, f.neg(&row[j]));
                }
            }
        }
        out
    }

    /// Coordinates of `v` in the quotient by this space, indexed by [`RowSpace::free_columns`].
    pub fn quotient_coords(&self, v: &[F::Elem]) -> Vector<F> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        self.free_columns().into_iter().map(|j| w[j].clone()).collect()
    }

    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_cols(&self.field, self.width, &self.rows)
    }
}

/// Canonical quotient `F^n / U` with basis given by the non-pivot unit vectors.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    space: RowSpace<F>,
    free: Vec<usize>,
}

impl<F: Field> Quotient<F> {
    pub fn new(space: RowSpace<F>) -> Self {
        let free = space.free_columns();
        Self { space, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.width()
    }

    pub fn relations(&self) -> &RowSpace<F> {
        &self.space
    }

    /// Ambient index of the `k`-th quotient basis vector.
    pub fn lift_index(&self, k: usize) -> usize {
        self.free[k]
    }

    pub fn lift(&self, coords: &[F::Elem]) -> Vector<F> {
        let f = &self.space.field;
        let mut v = vec![f.zero(); self.space.width()];
        for (c, &j) in coords.iter().zip(&self.free) {
            v[j] = c.clone();
        }
        v
    }

    pub fn project(&self, v: &[F::Elem]) -> Vector<F> {
        let mut w = v.to_vec();
        self.space.reduce(&mut w);
        self.free.iter().map(|&j| w[j].clone()).collect()
    }

    /// Matrix of the map induced on the quotient by an ambient map that preserves `U`.
    pub fn induced(&self, ambient: &Matrix<F>) -> Matrix<F> {
        let f = &self.space.field;
        let cols: Vec<_> = self.free.iter().map(|&j| self.project(&ambient.col(j))).collect();
        Matrix::from_cols(f, self.dim(), &cols)
    }

    /// Matrix of the projection `F^n -> F^n / U`.
    pub fn projection(&self) -> Matrix<F> {
        let f = &self.space.field;
        let n = self.space.width();
        let cols: Vec<_> = (0..n).map(|j| self.project(&unit_vector(f, n, j))).collect();
        Matrix::from_cols(f, self.dim(), &cols)
    }

    /// Matrix of the lift `F^n / U -> F^n`.
    pub fn lifting(&self) -> Matrix<F> {
        let f = &self.space.field;
        let cols: Vec<_> = (0..self.dim()).map(|k| unit_vector(f, self.space.width(), self.free[k])).collect();
        Matrix::from_cols(f, self.space.width(), &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn q_mat(rows: &[&[i64]]) -> Matrix<Rationals> {
        let q = Rationals;
        Matrix::from_rows(&q, rows.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = f2();
        let id = Matrix::identity(&f, 2);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!((r.rank, r.pivots.clone()), (2, vec![0, 1]));

        let ones = Matrix::from_rows(&f, vec![vec![1, 1], vec![1, 1]]).unwrap();
        let r = ones.rref();
        assert_eq!(r.reduced, Matrix::from_rows(&f, vec![vec![1, 1], vec![0, 0]]).unwrap());
        assert_eq!(r.rank, 1);

        let m = q_mat(&[&[2, 4], &[1, 2]]);
        let r = m.rref();
        assert_eq!(r.reduced, q_mat(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn solve_examples() {
        let f = f2();
        let a = Matrix::from_rows(&f, vec![vec![1, 1]]).unwrap();
        let s = a.solve(&[1]).unwrap().unwrap();
        assert_eq!(s.particular, vec![1, 0]);
        assert_eq!(s.kernel.col_vectors(), vec![vec![1, 1]]);

        let id = Matrix::identity(&f, 3);
        let s = id.solve(&[1, 0, 1]).unwrap().unwrap();
        assert_eq!(s.particular, vec![1, 0, 1]);
        assert_eq!(s.kernel.cols(), 0);

        let q = Rationals;
        let a = q_mat(&[&[1], &[1]]);
        assert!(a.solve(&[q.from_i64(1), q.from_i64(2)]).unwrap().is_none());
        assert!(a.solve(&[q.from_i64(1)]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(Matrix::zeros(&f3, 2, 2).kernel_basis(), Matrix::identity(&f3, 2));
        let f = f2();
        assert_eq!(Matrix::from_rows(&f, vec![vec![1, 1]]).unwrap().kernel_basis().col_vectors(), vec![vec![1, 1]]);
        let inv = q_mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(inv.kernel_basis().cols(), 0);
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let a = Matrix::identity(&PrimeField::new(2).unwrap(), 2);
        let b = Matrix::identity(&PrimeField::new(3).unwrap(), 2);
        // same Rust type, different p
        let b2: Matrix<PrimeField> = b;
        assert!(matches!(a.try_mul(&b2), Err(Error::DomainMismatch(..))));
    }

    #[test]
    fn inverse_and_left_inverse() {
        let m = q_mat(&[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let tall = q_mat(&[&[0, 0], &[1, 2], &[0, 0], &[3, 4]]);
        let li = tall.left_inverse().unwrap();
        assert!(li.mul(&tall).is_identity());
    }

    #[test]
    fn quotient_projection() {
        let f = f2();
        let u = RowSpace::spanned_by(&f, 3, [vec![1, 1, 0]]);
        let q = Quotient::new(u);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&[1, 1, 0]), vec![0, 0]);
        assert_eq!(q.project(&[0, 1, 0]), vec![1, 0]);
    }
}
