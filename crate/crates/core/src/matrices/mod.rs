//! Dense exact matrices over a [`Field`].

mod echelon;
mod subspace;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Range, Sub};

use crate::error::{Error, Result};
use crate::fields::{Elem, EmbeddingMap, Field};

pub use echelon::RowEchelon;
pub(crate) use echelon::Echelon;
pub use subspace::Subspace;

/// Row-major dense matrix. All entries belong to `field`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from rows, validating shape and entries.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for e in &row {
                field.check(e)?;
            }
            data.extend(row);
        }
        Ok(Matrix { field: field.clone(), rows: nrows, cols, data })
    }

    /// Convenience constructor from small integers (reduced into the field).
    pub fn from_ints<const C: usize>(field: &Field, rows: &[[i64; C]]) -> Self {
        Self::from_fn(field, rows.len(), C, |r, c| field.from_i64(rows[r][c]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vec<Elem>]) -> Self {
        Self::from_fn(field, rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.field, self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, s: &Elem) -> Self {
        self.map(|e| self.field.mul(e, s))
    }

    fn map(&self, f: impl Fn(&Elem) -> Elem) -> Self {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn compatible(&self, other: &Matrix, what: &str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{what}: {} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other, "product")?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !f.is_zero(b) {
                        out[(i, j)] = f.add(&out[(i, j)], &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other, "sum")?;
        if self.shape() != other.shape() {
            return Err(Error::Dimension("sum of differently shaped matrices".into()));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Basis of `{x : M x = 0}`, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Subspace {
        let ech = self.row_reduce();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let vectors: Vec<Vec<Elem>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = f.neg(&ech.rref[(r, fc)]);
                }
                v
            })
            .collect();
        Subspace::from_independent(f, self.cols, &vectors)
    }

    /// A solution of `M x = v`, or `None` when the system is inconsistent.
    pub fn solve(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(v.len(), self.rows, "right-hand side length");
        let f = &self.field;
        let aug = self.hstack(&Matrix::from_columns(f, self.rows, &[v.to_vec()])).expect("same field");
        let ech = aug.row_reduce();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.rref[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        Ok(echelon::determinant(self))
    }

    /// `Ok(None)` for singular matrices.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("inverse of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n)).expect("same field");
        let ech = aug.row_reduce();
        if ech.pivots.len() < n || (n > 0 && ech.pivots[n - 1] != n - 1) {
            return Ok(None);
        }
        Ok(Some(ech.rref.slice(0..n, n..2 * n).expect("in range")))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse of a matrix the caller knows to be invertible.
    pub(crate) fn inverse_known(&self, what: &str) -> Result<Matrix> {
        self.inverse()?.ok_or_else(|| crate::error::violation(format!("{what} is singular")))
    }

    /// Block-diagonal assembly; rectangular blocks are allowed.
    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert!(&b.field == field, "block over a different field");
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn slice(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Matrix> {
        if rows.start > rows.end || cols.start > cols.end || rows.end > self.rows || cols.end > self.cols {
            return Err(Error::Dimension(format!(
                "slice {rows:?} x {cols:?} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(&self.field, rows.len(), cols.len(), |r, c| {
            self[(rows.start + r, cols.start + c)].clone()
        }))
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other, "hstack")?;
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack with different row counts".into()));
        }
        Ok(Self::from_fn(&self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other, "vstack")?;
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Reorders rows: row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Matrix {
        Self::from_fn(&self.field, self.rows, self.cols, |r, c| self[(perm[r], c)].clone())
    }

    /// Reorders columns: column `j` of the result is column `perm[j]`.
    pub fn permute_cols(&self, perm: &[usize]) -> Matrix {
        Self::from_fn(&self.field, self.rows, self.cols, |r, c| self[(r, perm[c])].clone())
    }

    /// Entry-wise image under a field embedding.
    pub fn apply_embedding(&self, e: &EmbeddingMap) -> Result<Matrix> {
        if e.source() != &self.field {
            return Err(Error::FieldMismatch(format!("embedding from {} applied to a matrix over {}", e.source(), self.field)));
        }
        Ok(Matrix {
            field: e.target().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| e.apply_unchecked(x)).collect(),
        })
    }

    /// Canonical image in a field whose tower contains this matrix's field.
    pub fn include_into(&self, target: &Field) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|x| target.include(x, &self.field))
            .collect::<Result<_>>()?;
        Ok(Matrix { field: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Characteristic polynomial `det(x·I - M)`, little-endian, computed
    /// division-free (Berkowitz).
    pub fn charpoly(&self) -> Result<Vec<Elem>> {
        if !self.is_square() {
            return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
        }
        let f = &self.field;
        // coefficients from the leading one down
        let mut vect = vec![f.one()];
        for r in 0..self.rows {
            let a_r = self.slice(0..r, 0..r)?;
            let col: Vec<Elem> = (0..r).map(|i| self[(i, r)].clone()).collect();
            let row: Vec<Elem> = (0..r).map(|j| self[(r, j)].clone()).collect();
            let mut toeplitz = vec![f.one(), f.neg(&self[(r, r)])];
            let mut krylov = col;
            for _ in 0..r {
                let dot = row.iter().zip(&krylov).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                toeplitz.push(f.neg(&dot));
                krylov = a_r.mul_vec(&krylov);
            }
            vect = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(&toeplitz[i - j], &vect[j])))
                })
                .collect();
        }
        vect.reverse();
        Ok(vect)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (r, c): (usize, usize)) -> &Elem {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Elem {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Panics on shape or field mismatch; see [`Matrix::checked_mul`].
impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self + &(-rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|e| self.field.neg(e))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {}: {}", self.rows, self.cols, self.field, self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = self.row(r).iter().map(|e| self.field.format(e)).collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        write!(f, "[{}]", rows.join(" "))
    }
}
