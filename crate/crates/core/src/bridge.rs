//! Simultaneous equivalence of `n×p` families as simultaneous similarity of
//! `(n+p)×(n+p)` families.
//!
//! Each `A_i` becomes `C_i = [[0, A_i], [0, 0]]`, and one extra member
//! `C_a = diag(I_n, 0)` under a reserved label pins any conjugating matrix
//! to block-diagonal form `diag(P, Q)`. Conjugation then reads
//! `P·A_i·Q⁻¹ = B_i`, so certificates cross the bridge as `(P, Q⁻¹)`.

use crate::descent::descend_tower;
use crate::error::{violation, Error, Result};
use crate::fields::Field;
use crate::intertwine::{decide_similarity, verify_equivalence, EquivalenceCertificate, MatrixFamily};
use crate::matrices::Matrix;

/// Label of the marker member `C_a`.
pub const MARKER_LABEL: &str = "@a";

/// A family of bridged matrices together with the block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgedFamily {
    pub family: MatrixFamily,
    pub n: usize,
    pub p: usize,
}

impl BridgedFamily {
    pub fn marker(field: &Field, n: usize, p: usize) -> Matrix {
        Matrix::block_diag(field, &[Matrix::identity(field, n), Matrix::zeros(field, p, p)])
    }

    fn new(source: &MatrixFamily) -> Result<Self> {
        let f = source.field();
        let (n, p) = source.shape();
        let mut labels = source.labels().to_vec();
        let mut matrices = Vec::with_capacity(source.len() + 1);
        for a in source.matrices() {
            let mut c = Matrix::zeros(f, n + p, n + p);
            c.set_block(0, n, a);
            matrices.push(c);
        }
        labels.push(MARKER_LABEL.to_string());
        matrices.push(Self::marker(f, n, p));
        let family = MatrixFamily::with_any_labels(f, n + p, n + p, labels, matrices)?;
        Ok(BridgedFamily { family, n, p })
    }
}

/// The bridged families `(C, D)` of two `n×p` families.
pub fn embed_equiv_as_sim(a: &MatrixFamily, b: &MatrixFamily) -> Result<(BridgedFamily, BridgedFamily)> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!("families over {} and {}", a.field(), b.field())));
    }
    if a.shape() != b.shape() || a.len() != b.len() {
        return Err(Error::Dimension("families differ in shape or size".into()));
    }
    Ok((BridgedFamily::new(a)?, BridgedFamily::new(b)?))
}

/// The diagonal blocks `(P, Q)` of `R = diag(P, Q)`.
pub fn extract_equiv_certificate(r: &Matrix, n: usize, p: usize) -> Result<(Matrix, Matrix)> {
    if r.shape() != (n + p, n + p) {
        return Err(Error::Dimension(format!("expected {0}x{0}, found {1:?}", n + p, r.shape())));
    }
    if !r.slice(0..n, n..n + p)?.is_zero() || !r.slice(n..n + p, 0..n)?.is_zero() {
        return Err(Error::Precondition("R does not commute with the marker: off-diagonal blocks are nonzero".into()));
    }
    let pb = r.slice(0..n, 0..n)?;
    let qb = r.slice(n..n + p, n..n + p)?;
    if !pb.is_invertible() || !qb.is_invertible() {
        return Err(Error::Precondition("R is singular".into()));
    }
    Ok((pb, qb))
}

/// `R = diag(P, Q⁻¹)` for a pair with `P·A_i·Q = B_i`.
pub fn bridge_certificate(p: &Matrix, q: &Matrix) -> Result<Matrix> {
    let qi = q.inverse()?.ok_or_else(|| Error::Precondition("Q is singular".into()))?;
    Ok(Matrix::block_diag(p.field(), &[p.clone(), qi]))
}

/// Reads `(P, Q)` with `P·A_i·Q = B_i` back from a bridged similarity.
pub fn certificate_from_bridge(r: &Matrix, n: usize, p: usize) -> Result<EquivalenceCertificate> {
    let (pb, qb) = extract_equiv_certificate(r, n, p)?;
    let q = qb.inverse_known("Q block")?;
    Ok(EquivalenceCertificate { field: r.field().clone(), p: pb, q })
}

/// Decides whether `P·A_i·Q = B_i` for some invertible `P`, `Q` over the
/// families' field.
pub fn decide_equivalence(a: &MatrixFamily, b: &MatrixFamily) -> Result<Option<EquivalenceCertificate>> {
    let (c, d) = embed_equiv_as_sim(a, b)?;
    let Some(sim) = decide_similarity(&c.family, &d.family)? else {
        return Ok(None);
    };
    let cert = certificate_from_bridge(&sim.p, c.n, c.p)?;
    if !verify_equivalence(a, b, &cert.p, &cert.q) {
        return Err(violation("bridged equivalence certificate failed verification"));
    }
    Ok(Some(cert))
}

/// Turns an equivalence pair over an extension into one over the
/// families' field.
pub fn descend_equivalence(
    p: &Matrix,
    q: &Matrix,
    a: &MatrixFamily,
    b: &MatrixFamily,
) -> Result<EquivalenceCertificate> {
    let (c, d) = embed_equiv_as_sim(a, b)?;
    let r = bridge_certificate(p, q)?;
    let down = descend_tower(&r, &c.family, &d.family)?;
    let cert = certificate_from_bridge(&down.p, c.n, c.p)?;
    if !verify_equivalence(a, b, &cert.p, &cert.q) {
        return Err(violation("descended equivalence certificate failed verification"));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests;
