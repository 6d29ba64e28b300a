use super::{kronecker_reduce, Pencil, PencilBlock};
use crate::error::{Error, Result};
use crate::matrices::{Matrix, Subspace};

/// `left·A·right` and `left·B·right` are the rendered `blocks`.
#[derive(Clone, Debug)]
pub struct RegularReduction {
    pub left: Matrix,
    pub right: Matrix,
    pub blocks: Vec<PencilBlock>,
}

/// Reduces `A + X·B` with `B` invertible through `T = B⁻¹A`: a Jordan basis
/// of `Ker T^k` gives `J_r(X,1)` blocks and `im T^k` one regular block.
pub fn regular_reduce(a: &Matrix, b: &Matrix) -> Result<RegularReduction> {
    let f = a.field();
    let b_inv = b.inverse()?.ok_or_else(|| Error::Precondition("B is singular".into()))?;
    let t = &b_inv * a;
    let k = t.rows();
    let stable = Subspace::column_space(&t.pow(k as u32));
    // the chains of the pencil (I, T) are Jordan chains of T: T v_j = v_{j-1}
    let nil = Pencil::new(Matrix::identity(f, k), t.clone())?;
    let chains = super::singular_part_basis(&nil, &super::build_towers(&nil))?;
    let s = Matrix::from_columns(f, k, &[chains.domain.as_slice(), stable.basis()].concat());
    let s_inv = s.inverse_known("Fitting basis")?;
    let reduced = &(&s_inv * &t) * &s;
    let m = chains.domain.len();
    let mut blocks: Vec<PencilBlock> = chains
        .blocks
        .iter()
        .map(|blk| match *blk {
            PencilBlock::JordanOneX(r) => Ok(PencilBlock::JordanXOne(r)),
            _ => Err(crate::error::violation("singular chain in a nilpotent part")),
        })
        .collect::<Result<_>>()?;
    if m < k {
        blocks.push(PencilBlock::Regular(reduced.slice(m..k, m..k)?));
    }
    Ok(RegularReduction { left: &s_inv * &b_inv, right: s, blocks })
}

/// `P1·Q·P2⁻¹ = diag(M, I)` and `P1·R·P2⁻¹ = diag(I, N)` with `M` of size
/// `q` and `N` nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassForm {
    pub p1: Matrix,
    pub p2: Matrix,
    pub q: usize,
    pub m: Matrix,
    pub n: Matrix,
}

/// Weierstrass form of a regular pencil `Q + X·R`, read off its Kronecker
/// form: regular and `J_r(X,1)` blocks make up `M`, `J_r(1,X)` blocks `N`.
pub fn weierstrass_normalize(q: &Matrix, r: &Matrix) -> Result<WeierstrassForm> {
    let f = q.field();
    let pencil = Pencil::new(q.clone(), r.clone())?;
    if !q.is_square() {
        return Err(Error::Precondition("pencil is not square".into()));
    }
    let form = kronecker_reduce(&pencil)?;
    let mut spans = Vec::new();
    let mut start = 0;
    for blk in &form.blocks {
        let size = blk.shape().0;
        match blk {
            PencilBlock::Regular(_) | PencilBlock::JordanXOne(_) => spans.push((0, start..start + size)),
            PencilBlock::JordanOneX(_) => spans.push((1, start..start + size)),
            other => {
                return Err(Error::Precondition(format!("pencil is not regular: it has a {} block", other.kind())));
            }
        }
        start += size;
    }
    spans.sort_by_key(|(group, _)| *group);
    let perm: Vec<usize> = spans.iter().flat_map(|(_, r)| r.clone()).collect();
    let qdim: usize = spans.iter().filter(|(g, _)| *g == 0).map(|(_, r)| r.len()).sum();
    let n = q.rows();
    let p1 = form.p1.permute_rows(&perm);
    let q1 = form.q1.permute_cols(&perm);
    let p2 = q1.inverse_known("Kronecker column witness")?;
    let moved_q = &(&p1 * q) * &q1;
    let moved_r = &(&p1 * r) * &q1;
    let m = moved_q.slice(0..qdim, 0..qdim)?;
    let nil = moved_r.slice(qdim..n, qdim..n)?;
    let expect_q = Matrix::block_diag(f, &[m.clone(), Matrix::identity(f, n - qdim)]);
    let expect_r = Matrix::block_diag(f, &[Matrix::identity(f, qdim), nil.clone()]);
    if moved_q != expect_q || moved_r != expect_r {
        return Err(crate::error::violation("Weierstrass blocks do not separate"));
    }
    Ok(WeierstrassForm { p1, p2, q: qdim, m, n: nil })
}
