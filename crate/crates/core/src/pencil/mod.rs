//! Weak Kronecker form of a pencil `A + X·B`.
//!
//! The reduction splits off common kernels, then the chains living in the
//! stabilized kernel tower, then (on the transpose) the column chains, and
//! finishes with a Fitting decomposition of what remains.

mod regular;
mod tower;

use std::cmp::Reverse;
use std::fmt;

use crate::error::{violation, Error, Result};
use crate::fields::Field;
use crate::matrices::Matrix;

pub use regular::{regular_reduce, weierstrass_normalize, RegularReduction, WeierstrassForm};
pub use tower::{build_towers, singular_part_basis, split_complements, ChainBasis, KernelTower};

/// The pencil `A + X·B`, both `n × p` over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    a: Matrix,
    b: Matrix,
}

impl Pencil {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if a.field() != b.field() {
            return Err(Error::FieldMismatch(format!("pencil over {} and {}", a.field(), b.field())));
        }
        if a.shape() != b.shape() {
            return Err(Error::Dimension(format!("pencil parts {:?} and {:?}", a.shape(), b.shape())));
        }
        Ok(Pencil { a, b })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.a.shape()
    }

    pub fn transpose(&self) -> Pencil {
        Pencil { a: self.a.transpose(), b: self.b.transpose() }
    }

    /// `(L·A·R, L·B·R)`.
    pub fn transform(&self, left: &Matrix, right: &Matrix) -> Pencil {
        Pencil { a: &(left * &self.a) * right, b: &(left * &self.b) * right }
    }
}

/// One diagonal block of a Kronecker form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PencilBlock {
    Zero { rows: usize, cols: usize },
    /// `P + X·I`.
    Regular(Matrix),
    /// `J_r(1,X) = I_r + X·N_r`.
    JordanOneX(usize),
    /// `J_r(X,1) = N_r + X·I_r`.
    JordanXOne(usize),
    /// `L_r + X·K_r`, of shape `r × (r+1)`.
    SingularRow(usize),
    /// `(L_r + X·K_r)^t`.
    SingularCol(usize),
}

impl PencilBlock {
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            PencilBlock::Zero { rows, cols } => (rows, cols),
            PencilBlock::Regular(ref p) => p.shape(),
            PencilBlock::JordanOneX(r) | PencilBlock::JordanXOne(r) => (r, r),
            PencilBlock::SingularRow(r) => (r, r + 1),
            PencilBlock::SingularCol(r) => (r + 1, r),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PencilBlock::Zero { .. } => "zero",
            PencilBlock::Regular(_) => "regular",
            PencilBlock::JordanOneX(_) => "jordan-1x",
            PencilBlock::JordanXOne(_) => "jordan-x1",
            PencilBlock::SingularRow(_) => "singular-row",
            PencilBlock::SingularCol(_) => "singular-col",
        }
    }

    fn rank_order(&self) -> u8 {
        match self {
            PencilBlock::Zero { .. } => 0,
            PencilBlock::SingularRow(_) => 1,
            PencilBlock::SingularCol(_) => 2,
            PencilBlock::JordanOneX(_) => 3,
            PencilBlock::JordanXOne(_) => 4,
            PencilBlock::Regular(_) => 5,
        }
    }

    fn size(&self) -> usize {
        let (r, c) = self.shape();
        r.max(c)
    }

    /// The `(A-part, B-part)` pair of the block.
    pub fn render(&self, field: &Field) -> (Matrix, Matrix) {
        let (rows, cols) = self.shape();
        let shift = |r: usize, c: usize, off: usize| {
            Matrix::from_fn(field, r, c, |i, j| if j == i + off { field.one() } else { field.zero() })
        };
        match *self {
            PencilBlock::Zero { .. } => (Matrix::zeros(field, rows, cols), Matrix::zeros(field, rows, cols)),
            PencilBlock::Regular(ref p) => (p.clone(), Matrix::identity(field, rows)),
            PencilBlock::JordanOneX(r) => (Matrix::identity(field, r), shift(r, r, 1)),
            PencilBlock::JordanXOne(r) => (shift(r, r, 1), Matrix::identity(field, r)),
            PencilBlock::SingularRow(r) => (shift(r, r + 1, 0), shift(r, r + 1, 1)),
            PencilBlock::SingularCol(r) => (shift(r, r + 1, 0).transpose(), shift(r, r + 1, 1).transpose()),
        }
    }

    /// The block whose rendering is the transpose of this one's, up to
    /// reversing the basis for Jordan blocks.
    fn transposed(&self) -> PencilBlock {
        match *self {
            PencilBlock::Zero { rows, cols } => PencilBlock::Zero { rows: cols, cols: rows },
            PencilBlock::Regular(ref p) => PencilBlock::Regular(p.transpose()),
            PencilBlock::SingularRow(r) => PencilBlock::SingularCol(r),
            PencilBlock::SingularCol(r) => PencilBlock::SingularRow(r),
            ref other => other.clone(),
        }
    }
}

impl fmt::Display for PencilBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PencilBlock::Zero { rows, cols } => write!(f, "0 ({rows}x{cols})"),
            PencilBlock::Regular(p) => write!(f, "P + X*I_{} with P = {p}", p.rows()),
            PencilBlock::JordanOneX(r) => write!(f, "J_{r}(1,X)"),
            PencilBlock::JordanXOne(r) => write!(f, "J_{r}(X,1)"),
            PencilBlock::SingularRow(r) => write!(f, "L_{r} + X*K_{r}"),
            PencilBlock::SingularCol(r) => write!(f, "(L_{r} + X*K_{r})^t"),
        }
    }
}

/// Blocks with witnesses: `P1·(A + X·B)·Q1` is the block-diagonal
/// assembly of the rendered blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerForm {
    pub blocks: Vec<PencilBlock>,
    pub p1: Matrix,
    pub q1: Matrix,
}

impl KroneckerForm {
    /// The block-diagonal `(A-part, B-part)` the witnesses should produce.
    pub fn rendered(&self, field: &Field) -> (Matrix, Matrix) {
        let (a, b): (Vec<Matrix>, Vec<Matrix>) = self.blocks.iter().map(|blk| blk.render(field)).unzip();
        (Matrix::block_diag(field, &a), Matrix::block_diag(field, &b))
    }

    /// Exact check of every structural claim against the original pencil.
    pub fn verify(&self, pencil: &Pencil) -> bool {
        let f = pencil.field();
        let (n, p) = pencil.shape();
        if self.p1.field() != f || self.q1.field() != f || self.p1.shape() != (n, n) || self.q1.shape() != (p, p) {
            return false;
        }
        let regular = self.blocks.iter().filter(|b| matches!(b, PencilBlock::Regular(_))).count();
        let payloads_ok = self.blocks.iter().all(|b| match b {
            PencilBlock::Regular(m) => m.field() == f && m.is_invertible(),
            _ => true,
        });
        let (ra, rb) = self.rendered(f);
        regular <= 1
            && payloads_ok
            && ra.shape() == (n, p)
            && self.p1.is_invertible()
            && self.q1.is_invertible()
            && pencil.transform(&self.p1, &self.q1) == Pencil { a: ra, b: rb }
    }
}

/// Output of [`deflate_common_kernels`]: `left·A·right = diag(0, reduced.a)`
/// and likewise for `B`, with a `zero_rows × zero_cols` zero corner.
#[derive(Clone, Debug)]
pub struct Deflation {
    pub reduced: Pencil,
    pub left: Matrix,
    pub right: Matrix,
    pub zero_rows: usize,
    pub zero_cols: usize,
}

/// Splits off `Ker A ∩ Ker B` (as leading zero columns) and a complement of
/// `im A + im B` (as leading zero rows).
pub fn deflate_common_kernels(pencil: &Pencil) -> Deflation {
    let f = pencil.field();
    let (n, p) = pencil.shape();
    let (a, b) = (pencil.a(), pencil.b());
    let common = a.vstack(b).expect("same field").kernel_basis();
    let domain: Vec<_> = common.basis().iter().cloned().chain(common.complement()).collect();
    let right = Matrix::from_columns(f, p, &domain);
    let image = crate::matrices::Subspace::column_space(&a.hstack(b).expect("same field"));
    let codomain: Vec<_> = image.complement().into_iter().chain(image.basis().iter().cloned()).collect();
    let left = Matrix::from_columns(f, n, &codomain).inverse_known("codomain basis").expect("basis");
    let (zr, zc) = (n - image.dim(), common.dim());
    let moved = pencil.transform(&left, &right);
    let reduced = Pencil {
        a: moved.a.slice(zr..n, zc..p).expect("in range"),
        b: moved.b.slice(zr..n, zc..p).expect("in range"),
    };
    Deflation { reduced, left, right, zero_rows: zr, zero_cols: zc }
}

/// `left·(A + X·B)·right = diag(rendered blocks, rest)`.
struct Split {
    left: Matrix,
    right: Matrix,
    blocks: Vec<PencilBlock>,
    rest: Pencil,
}

fn split_off_chains(pencil: &Pencil) -> Result<Split> {
    let f = pencil.field();
    let (n, p) = pencil.shape();
    let tower = build_towers(pencil);
    let chains = singular_part_basis(pencil, &tower)?;
    let (e_rest, f_rest) = split_complements(pencil, &tower)?;
    let right = Matrix::from_columns(f, p, &[chains.domain.as_slice(), e_rest.basis()].concat());
    let left = Matrix::from_columns(f, n, &[chains.codomain.as_slice(), f_rest.basis()].concat())
        .inverse_known("chain and complement basis")?;
    let moved = pencil.transform(&left, &right);
    let (h, w) = (chains.codomain.len(), chains.domain.len());
    for m in [&moved.a, &moved.b] {
        if !m.slice(0..h, w..p)?.is_zero() || !m.slice(h..n, 0..w)?.is_zero() {
            return Err(violation("complements are not invariant under the pencil"));
        }
    }
    let rest = Pencil { a: moved.a.slice(h..n, w..p)?, b: moved.b.slice(h..n, w..p)? };
    Ok(Split { left, right, blocks: chains.blocks, rest })
}

fn total_shape(blocks: &[PencilBlock]) -> (usize, usize) {
    blocks.iter().fold((0, 0), |(r, c), b| (r + b.shape().0, c + b.shape().1))
}

fn reverse_range(len: usize, start: usize, width: usize) -> Vec<usize> {
    (0..len).map(|i| if i >= start && i < start + width { 2 * start + width - 1 - i } else { i }).collect()
}

/// Reduction of a pencil with trivial common kernel and full joint image.
fn reduce_deflated(pencil: &Pencil) -> Result<(Matrix, Matrix, Vec<PencilBlock>)> {
    let f = pencil.field();
    let first = split_off_chains(pencil)?;
    let second = split_off_chains(&first.rest.transpose())?;
    let mut left2 = second.right.transpose();
    let mut right2 = second.left.transpose();
    let mut blocks2 = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    for blk in &second.blocks {
        let t = blk.transposed();
        let (h, w) = t.shape();
        if matches!(t, PencilBlock::JordanOneX(_)) {
            // (I, N^t) becomes (I, N) after reversing the chain
            left2 = left2.permute_rows(&reverse_range(left2.rows(), r0, h));
            right2 = right2.permute_cols(&reverse_range(right2.cols(), c0, w));
        }
        blocks2.push(t);
        r0 += h;
        c0 += w;
    }
    let remainder = second.rest.transpose();
    let reg = regular_reduce(remainder.a(), remainder.b())?;
    let (h1, w1) = total_shape(&first.blocks);
    let (h2, w2) = total_shape(&blocks2);
    let inner_left = &Matrix::block_diag(f, &[Matrix::identity(f, h2), reg.left]) * &left2;
    let inner_right = &right2 * &Matrix::block_diag(f, &[Matrix::identity(f, w2), reg.right]);
    let left = &Matrix::block_diag(f, &[Matrix::identity(f, h1), inner_left]) * &first.left;
    let right = &first.right * &Matrix::block_diag(f, &[Matrix::identity(f, w1), inner_right]);
    let blocks = first.blocks.into_iter().chain(blocks2).chain(reg.blocks).collect();
    Ok((left, right, blocks))
}

/// Sorts blocks into the canonical order (Zero, SingularRow, SingularCol,
/// JordanOneX, JordanXOne, Regular; larger first) and permutes witnesses.
fn reorder(blocks: Vec<PencilBlock>, p1: Matrix, q1: Matrix) -> KroneckerForm {
    let mut spans = Vec::with_capacity(blocks.len());
    let (mut r, mut c) = (0, 0);
    for b in &blocks {
        let (h, w) = b.shape();
        spans.push((r..r + h, c..c + w));
        r += h;
        c += w;
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| (blocks[i].rank_order(), Reverse(blocks[i].size())));
    let rows: Vec<usize> = order.iter().flat_map(|&i| spans[i].0.clone()).collect();
    let cols: Vec<usize> = order.iter().flat_map(|&i| spans[i].1.clone()).collect();
    KroneckerForm {
        blocks: order.iter().map(|&i| blocks[i].clone()).collect(),
        p1: p1.permute_rows(&rows),
        q1: q1.permute_cols(&cols),
    }
}

/// Weak Kronecker form of any pencil, with witnesses checked before return.
pub fn kronecker_reduce(pencil: &Pencil) -> Result<KroneckerForm> {
    let f = pencil.field();
    let d = deflate_common_kernels(pencil);
    let (left, right, inner) = reduce_deflated(&d.reduced)?;
    let p1 = &Matrix::block_diag(f, &[Matrix::identity(f, d.zero_rows), left]) * &d.left;
    let q1 = &d.right * &Matrix::block_diag(f, &[Matrix::identity(f, d.zero_cols), right]);
    let mut blocks = Vec::new();
    if d.zero_rows + d.zero_cols > 0 {
        blocks.push(PencilBlock::Zero { rows: d.zero_rows, cols: d.zero_cols });
    }
    blocks.extend(inner);
    let form = reorder(blocks, p1, q1);
    if !form.verify(pencil) {
        return Err(violation("Kronecker witnesses do not reproduce the block form"));
    }
    Ok(form)
}
