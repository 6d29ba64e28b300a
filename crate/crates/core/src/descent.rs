//! Transport of similarity witnesses from an extension `L` down to `K`.
//!
//! Large or infinite `K` is handled by splitting the witness along a
//! `K`-basis of `L` and searching the resulting span. Small finite `K` is
//! first widened by a tower of quadratic steps until it has at least `n`
//! elements; the witness is pushed into a common extension, descended to
//! the top of the tower by span search, and brought down one quadratic
//! step at a time by pencil normalization.

use crate::error::{violation, Error, Result};
use crate::fields::{build_quadratic_tower, compositum_embed, EmbeddingMap, Field, QuadraticExtension};
use crate::intertwine::{
    independent_subset, intertwiner_basis, search_nonsingular, verify_similarity, IntertwinerSpace, MatrixFamily,
    SearchOutcome, SimilarityCertificate,
};
use crate::matrices::Matrix;
use crate::pencil::weierstrass_normalize;

/// The fields involved in descending from `extension` to `base`.
#[derive(Clone, Debug)]
pub struct DescentPlan {
    pub base: Field,
    pub extension: Field,
    /// `K ⊂ K_1 ⊂ … ⊂ K_N`, empty when `K` is already large enough.
    pub tower: Vec<QuadraticExtension>,
    /// A field containing both `K_N` and `L`; `L` itself when the tower is
    /// empty.
    pub compositum: Field,
    pub top_embedding: EmbeddingMap,
    pub extension_embedding: EmbeddingMap,
}

impl DescentPlan {
    pub fn new(base: &Field, extension: &Field, n: usize) -> Result<Self> {
        if !base.is_subfield_of(extension) {
            return Err(Error::Precondition(format!("{extension} is not built over {base}")));
        }
        let tower = match base.order() {
            Some(q) if q < n as u64 => build_quadratic_tower(base, n as u64)?,
            _ => Vec::new(),
        };
        let (compositum, top_embedding, extension_embedding) = match tower.last() {
            Some(top) => compositum_embed(top.field(), extension)?,
            None => (
                extension.clone(),
                EmbeddingMap::inclusion(base, extension)?,
                EmbeddingMap::inclusion(extension, extension)?,
            ),
        };
        Ok(DescentPlan {
            base: base.clone(),
            extension: extension.clone(),
            tower,
            compositum,
            top_embedding,
            extension_embedding,
        })
    }

    pub fn top(&self) -> &Field {
        self.tower.last().map_or(&self.base, QuadraticExtension::field)
    }
}

/// One intermediate witness, recorded for tracing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub stage: String,
    pub field: Field,
    pub p: Matrix,
}

/// Splits each entry of `p` along the tower coordinates over `k`, giving
/// matrices `P_j` over `k` with `p = Σ x_j P_j`.
fn coordinate_matrices(p: &Matrix, k: &Field) -> Result<Vec<Matrix>> {
    let l = p.field();
    let d = l.degree_over(k)?;
    let coords: Vec<Vec<_>> = p.entries().iter().map(|x| l.coordinates_over(x, k)).collect::<Result<_>>()?;
    Ok((0..d)
        .map(|j| Matrix::from_fn(k, p.rows(), p.cols(), |r, c| coords[r * p.cols() + c][j].clone()))
        .collect())
}

/// Descent by span search: each coordinate matrix of `p` over `K` is itself
/// an intertwiner, and some combination of them is invertible when `|K|`
/// is at least `n` (or the span is small enough to enumerate).
pub fn descend_span(p: &Matrix, a: &MatrixFamily, b: &MatrixFamily) -> Result<Matrix> {
    let k = a.field();
    let parts = coordinate_matrices(p, k)?;
    for part in &parts {
        for (ai, bi) in a.matrices().iter().zip(b.matrices()) {
            if part * ai != bi * part {
                return Err(Error::Precondition("extension witness does not intertwine the families".into()));
            }
        }
    }
    let span = independent_subset(k, parts.into_iter().filter(|m| !m.is_zero()).collect());
    match search_nonsingular(&span, k) {
        SearchOutcome::Found(m) => Ok(m),
        SearchOutcome::Absent => Err(violation("span of the witness coordinates has no invertible element")),
        SearchOutcome::Inconclusive => Err(Error::Unsupported("span descent search was inconclusive".into())),
    }
}

/// One quadratic step: with `P = Q + ε·R`, normalize `(Q, R)` to
/// Weierstrass form by `(P1, P2)`; the conjugated families then coincide and
/// `P1⁻¹·P2` is a witness over the base.
pub fn descend_quadratic(p: &Matrix, a: &MatrixFamily, b: &MatrixFamily, ext: &QuadraticExtension) -> Result<Matrix> {
    let k = ext.base();
    if p.field() != ext.field() || a.field() != k {
        return Err(Error::FieldMismatch(format!("quadratic step {} over {}", ext.field(), k)));
    }
    let n = p.rows();
    let mut q = Matrix::zeros(k, n, n);
    let mut r = Matrix::zeros(k, n, n);
    for i in 0..n {
        for j in 0..n {
            let (x0, x1) = ext.split(&p[(i, j)]);
            q[(i, j)] = x0;
            r[(i, j)] = x1;
        }
    }
    let w = weierstrass_normalize(&q, &r)?;
    let p1_inv = w.p1.inverse_known("P1")?;
    let p2_inv = w.p2.inverse_known("P2")?;
    let a2 = a.transform(&w.p2, &p2_inv)?;
    let b2 = b.transform(&w.p1, &p1_inv)?;
    if a2.matrices() != b2.matrices() {
        return Err(violation("normalized families differ after a quadratic step"));
    }
    Ok(&p1_inv * &w.p2)
}

/// Full descent from the witness's field to the families' field, with every
/// intermediate witness recorded.
pub fn descend_tower_traced(p: &Matrix, a: &MatrixFamily, b: &MatrixFamily) -> Result<(Matrix, Vec<TraceStep>)> {
    let k = a.field();
    let l = p.field();
    let mut trace = vec![TraceStep { stage: "input".into(), field: l.clone(), p: p.clone() }];
    let check = |fam_a: &MatrixFamily, fam_b: &MatrixFamily, m: &Matrix, stage: &str| {
        if verify_similarity(fam_a, fam_b, m) {
            Ok(())
        } else {
            Err(violation(format!("witness fails after {stage}")))
        }
    };
    check(&a.include_into(l)?, &b.include_into(l)?, p, "input").map_err(|_| {
        Error::Precondition("input witness does not verify over its field".into())
    })?;
    if l == k {
        return Ok((p.clone(), trace));
    }
    let plan = DescentPlan::new(k, l, p.rows())?;
    if plan.tower.is_empty() {
        let out = descend_span(p, &a.include_into(k)?, &b.include_into(k)?)?;
        check(a, b, &out, "span descent")?;
        trace.push(TraceStep { stage: "span descent".into(), field: k.clone(), p: out.clone() });
        return Ok((out, trace));
    }
    let m_field = &plan.compositum;
    let pm = p.apply_embedding(&plan.extension_embedding)?;
    trace.push(TraceStep { stage: "compositum".into(), field: m_field.clone(), p: pm.clone() });
    check(&a.include_into(m_field)?, &b.include_into(m_field)?, &pm, "embedding into the compositum")?;
    let top = plan.top().clone();
    let mut cur = descend_span(&pm, &a.include_into(&top)?, &b.include_into(&top)?)?;
    check(&a.include_into(&top)?, &b.include_into(&top)?, &cur, "span descent")?;
    trace.push(TraceStep { stage: "span descent".into(), field: top.clone(), p: cur.clone() });
    for (depth, ext) in plan.tower.iter().enumerate().rev() {
        let below = ext.base();
        let (fa, fb) = (a.include_into(below)?, b.include_into(below)?);
        cur = descend_quadratic(&cur, &fa, &fb, ext)?;
        check(&fa, &fb, &cur, "a quadratic step")?;
        trace.push(TraceStep { stage: format!("quadratic step {}", depth + 1), field: below.clone(), p: cur.clone() });
    }
    Ok((cur, trace))
}

pub fn descend_tower(p: &Matrix, a: &MatrixFamily, b: &MatrixFamily) -> Result<SimilarityCertificate> {
    let (p, _) = descend_tower_traced(p, a, b)?;
    Ok(SimilarityCertificate { field: a.field().clone(), p })
}

/// `K`-matrices commuting with `x`, where `x` lives in an extension of `K`:
/// the intertwiner space of the coordinate matrices of `x` with themselves.
pub fn base_commutant(x: &Matrix, k: &Field) -> Result<IntertwinerSpace> {
    let n = x.rows();
    let parts = coordinate_matrices(x, k)?;
    let fam = MatrixFamily::from_matrices(k, n, n, parts)?;
    intertwiner_basis(&fam, &fam)
}

#[cfg(test)]
mod tests;
