use super::{Echelon, Matrix};
use crate::fields::{Elem, Field};

/// A subspace of `field^ambient` given by a basis of independent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, basis: Vec::new() }
    }

    pub fn full(field: &Field, ambient: usize) -> Self {
        Self::from_independent(field, ambient, &standard_basis(field, ambient))
    }

    /// Span of arbitrary vectors, with the canonical (RREF) basis.
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<Elem>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let m = Matrix::from_rows(field, vectors.to_vec()).expect("vectors of equal length over the field");
        assert_eq!(m.cols(), ambient, "vector length");
        let ech = m.row_reduce();
        let basis = (0..ech.rank).map(|r| ech.rref.row(r).to_vec()).collect();
        Subspace { field: field.clone(), ambient, basis }
    }

    /// Column space of a matrix, canonical basis.
    pub fn column_space(m: &Matrix) -> Self {
        Self::span(m.field(), m.rows(), &m.columns())
    }

    /// Takes `vectors` as the basis as-is; the caller guarantees independence.
    pub fn from_independent(field: &Field, ambient: usize, vectors: &[Vec<Elem>]) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        debug_assert_eq!(Echelon::seeded(field, vectors).rank(), vectors.len());
        Subspace { field: field.clone(), ambient, basis: vectors.to_vec() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(&self.field, self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        Echelon::seeded(&self.field, &self.basis).contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let e = Echelon::seeded(&self.field, &self.basis);
        other.basis.iter().all(|v| e.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let all: Vec<Vec<Elem>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::span(&self.field, self.ambient, &all)
    }

    /// `M(self)`, canonical basis.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let imgs: Vec<Vec<Elem>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Self::span(&self.field, m.rows(), &imgs)
    }

    /// `M⁻¹(self) = {x : M x ∈ self}`: kernel of `[M | -S]` projected onto
    /// the first block of coordinates.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "preimage dimension");
        let stacked = m.hstack(&(-&self.matrix())).expect("same field");
        let kernel = stacked.kernel_basis();
        let proj: Vec<Vec<Elem>> = kernel.basis.iter().map(|v| v[..m.cols()].to_vec()).collect();
        Self::span(&self.field, m.cols(), &proj)
    }

    /// Standard basis vectors completing `self` to the whole space, chosen
    /// greedily in index order.
    pub fn complement(&self) -> Vec<Vec<Elem>> {
        extend_basis(&self.field, &self.basis, &standard_basis(&self.field, self.ambient))
    }
}

/// Vectors of `candidates` that, taken greedily in order, are independent
/// modulo `seed` and each other.
pub(crate) fn extend_basis(field: &Field, seed: &[Vec<Elem>], candidates: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut e = Echelon::seeded(field, seed);
    candidates.iter().filter(|v| e.insert(v)).cloned().collect()
}

pub(crate) fn standard_basis(field: &Field, n: usize) -> Vec<Vec<Elem>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect()
}
