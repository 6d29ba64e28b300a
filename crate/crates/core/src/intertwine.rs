//! Intertwiner spaces `{P : P·A_i = B_i·P}`, the search for invertible
//! elements in a matrix span, and simultaneous similarity decisions.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{violation, Error, Result};
use crate::fields::{build_quadratic_tower, Elem, EmbeddingMap, Field};
use crate::matrices::{Echelon, Matrix};

/// Labels starting with this character are reserved for internal use.
pub const RESERVED_LABEL_PREFIX: char = '@';

/// Matrices of one shape over one field, indexed by distinct labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFamily {
    field: Field,
    rows: usize,
    cols: usize,
    labels: Vec<String>,
    matrices: Vec<Matrix>,
}

impl MatrixFamily {
    pub fn new(field: &Field, rows: usize, cols: usize, labels: Vec<String>, matrices: Vec<Matrix>) -> Result<Self> {
        if let Some(l) = labels.iter().find(|l| l.starts_with(RESERVED_LABEL_PREFIX)) {
            return Err(Error::Precondition(format!("label {l:?} uses the reserved prefix '{RESERVED_LABEL_PREFIX}'")));
        }
        Self::with_any_labels(field, rows, cols, labels, matrices)
    }

    pub(crate) fn with_any_labels(
        field: &Field,
        rows: usize,
        cols: usize,
        labels: Vec<String>,
        matrices: Vec<Matrix>,
    ) -> Result<Self> {
        if labels.len() != matrices.len() {
            return Err(Error::Dimension(format!("{} labels for {} matrices", labels.len(), matrices.len())));
        }
        let mut seen = HashSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Precondition(format!("duplicate label {l:?}")));
        }
        for m in &matrices {
            if m.field() != field {
                return Err(Error::FieldMismatch(format!("family over {field} holds a matrix over {}", m.field())));
            }
            if m.shape() != (rows, cols) {
                return Err(Error::Dimension(format!("expected {rows}x{cols}, found {:?}", m.shape())));
            }
        }
        Ok(MatrixFamily { field: field.clone(), rows, cols, labels, matrices })
    }

    /// Labels `"1"`, `"2"`, … in order.
    pub fn from_matrices(field: &Field, rows: usize, cols: usize, matrices: Vec<Matrix>) -> Result<Self> {
        let labels = (1..=matrices.len()).map(|i| i.to_string()).collect();
        Self::new(field, rows, cols, labels, matrices)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    fn map(&self, field: &Field, f: impl Fn(&Matrix) -> Result<Matrix>) -> Result<MatrixFamily> {
        let matrices = self.matrices.iter().map(f).collect::<Result<_>>()?;
        Ok(MatrixFamily { field: field.clone(), rows: self.rows, cols: self.cols, labels: self.labels.clone(), matrices })
    }

    /// The same family seen in a field whose tower contains this one.
    pub fn include_into(&self, field: &Field) -> Result<MatrixFamily> {
        self.map(field, |m| m.include_into(field))
    }

    pub fn apply_embedding(&self, e: &EmbeddingMap) -> Result<MatrixFamily> {
        self.map(e.target(), |m| m.apply_embedding(e))
    }

    /// `{L·M·R}` for every member `M`.
    pub fn transform(&self, left: &Matrix, right: &Matrix) -> Result<MatrixFamily> {
        let rows = left.rows();
        let cols = right.cols();
        let matrices = self
            .matrices
            .iter()
            .map(|m| left.checked_mul(m)?.checked_mul(right))
            .collect::<Result<_>>()?;
        Ok(MatrixFamily { field: self.field.clone(), rows, cols, labels: self.labels.clone(), matrices })
    }

    fn ensure_pair(&self, other: &MatrixFamily) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("families over {} and {}", self.field, other.field)));
        }
        if self.shape() != other.shape() || self.len() != other.len() {
            return Err(Error::Dimension("families differ in shape or size".into()));
        }
        Ok(())
    }
}

/// A basis of `{P : P·A_i = B_i·P for all i}` over the families' field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinerSpace {
    pub field: Field,
    pub n: usize,
    pub basis: Vec<Matrix>,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityCertificate {
    pub field: Field,
    pub p: Matrix,
}

/// `P·A_i·Q = B_i` for all `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub field: Field,
    pub p: Matrix,
    pub q: Matrix,
}

/// Solves the `n²`-unknown linear system `P·A_i - B_i·P = 0`.
pub fn intertwiner_basis(a: &MatrixFamily, b: &MatrixFamily) -> Result<IntertwinerSpace> {
    a.ensure_pair(b)?;
    let (n, cols) = a.shape();
    if n != cols {
        return Err(Error::Dimension(format!("intertwiners need square matrices, got {n}x{cols}")));
    }
    let f = a.field();
    let unknowns = n * n;
    let mut system = Matrix::zeros(f, a.len() * unknowns, unknowns);
    for (i, (ai, bi)) in a.matrices().iter().zip(b.matrices()).enumerate() {
        for r in 0..n {
            for c in 0..n {
                let row = i * unknowns + r * n + c;
                for k in 0..n {
                    // (P A_i)[r][c] gets P[r][k]·A_i[k][c]; (B_i P)[r][c] gets B_i[r][k]·P[k][c]
                    let at = r * n + k;
                    system[(row, at)] = f.add(&system[(row, at)], &ai[(k, c)]);
                    let bt = k * n + c;
                    system[(row, bt)] = f.sub(&system[(row, bt)], &bi[(r, k)]);
                }
            }
        }
    }
    let basis = system
        .kernel_basis()
        .basis()
        .iter()
        .map(|v| Matrix::from_fn(f, n, n, |r, c| v[r * n + c].clone()))
        .collect();
    Ok(IntertwinerSpace { field: f.clone(), n, basis })
}

/// Exhaustive enumeration is used while `|K|^dim` stays below this.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
/// Largest grid the deterministic grid phase will walk.
pub const GRID_LIMIT: u64 = 1 << 20;
const GRID_PREFIX: u64 = 1 << 12;
const PROBES: usize = 64;
const PROBE_SEED: u64 = 0x6b72_6f6e;

/// Result of searching a matrix span for an invertible element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Matrix),
    /// The search was complete: no invertible element exists.
    Absent,
    /// Nothing found, but the policy could not rule one out.
    Inconclusive,
}

fn combination(field: &Field, basis: &[Matrix], coeffs: &[Elem]) -> Matrix {
    let (n, m) = basis[0].shape();
    let mut out = Matrix::zeros(field, n, m);
    for (b, c) in basis.iter().zip(coeffs) {
        if field.is_zero(c) {
            continue;
        }
        for r in 0..n {
            for k in 0..m {
                if !field.is_zero(&b[(r, k)]) {
                    out[(r, k)] = field.add(&out[(r, k)], &field.mul(c, &b[(r, k)]));
                }
            }
        }
    }
    out
}

fn invertible(m: &Matrix) -> bool {
    !m.field().is_zero(&m.det().expect("square"))
}

/// Walks `sample^dim` in mixed-radix order (first coordinate fastest),
/// visiting at most `budget` points. The flag tells whether the whole grid
/// was covered.
fn walk_grid(field: &Field, basis: &[Matrix], sample: &[Elem], budget: u64) -> (Option<Matrix>, bool) {
    let s = sample.len() as u64;
    let total = (0..basis.len()).try_fold(1u64, |acc, _| acc.checked_mul(s)).unwrap_or(u64::MAX);
    let mut digits = vec![0usize; basis.len()];
    for _ in 0..total.min(budget) {
        let coeffs: Vec<Elem> = digits.iter().map(|&d| sample[d].clone()).collect();
        let m = combination(field, basis, &coeffs);
        if invertible(&m) {
            return (Some(m), true);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < sample.len() {
                break;
            }
            *d = 0;
        }
    }
    (None, total <= budget)
}

/// Searches `span(basis)` for an invertible matrix.
///
/// 1. If `|K|^dim ≤ 2^16`, every element is tried: the answer is exact.
/// 2. Otherwise the grid `S^dim` is walked, with `S` the first
///    `min(|K|, n+1)` elements of `K` (or `{0, …, n}` over infinite
///    fields). A short prefix of the grid goes first, then a fixed-seed
///    batch of random combinations, then the rest of the grid when it has
///    at most `2^20` points. When `|S| ≥ n+1` the grid cannot miss a
///    nonzero determinant, so finishing it is conclusive. The same holds
///    when `S = K` and `|K| ≥ n`, the determinant being homogeneous of
///    degree `n`.
pub fn search_nonsingular(basis: &[Matrix], field: &Field) -> SearchOutcome {
    let Some(first) = basis.first() else {
        return SearchOutcome::Absent;
    };
    let n = first.rows();
    if n == 0 {
        return SearchOutcome::Found(first.clone());
    }
    let dim = basis.len();
    if field.is_finite() {
        let all: Vec<Elem> = field.elements().collect();
        let total = (all.len() as u64).checked_pow(dim as u32);
        if total.is_some_and(|t| t <= EXHAUSTIVE_LIMIT) {
            return match walk_grid(field, basis, &all, EXHAUSTIVE_LIMIT).0 {
                Some(m) => SearchOutcome::Found(m),
                None => SearchOutcome::Absent,
            };
        }
    }
    let sample: Vec<Elem> = match field.order() {
        Some(q) => field.elements().take(q.min(n as u64 + 1) as usize).collect(),
        None => (0..=n as i64).map(|i| field.from_i64(i)).collect(),
    };
    if let (Some(m), _) = walk_grid(field, basis, &sample, GRID_PREFIX) {
        return SearchOutcome::Found(m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED ^ dim as u64);
    let spread = 4 * n as i64 + 4;
    for _ in 0..PROBES {
        let coeffs: Vec<Elem> = (0..dim)
            .map(|_| match field.order() {
                Some(_) => field.random(&mut rng),
                None => field.from_i64(rand::Rng::gen_range(&mut rng, -spread..=spread)),
            })
            .collect();
        let m = combination(field, basis, &coeffs);
        if invertible(&m) {
            return SearchOutcome::Found(m);
        }
    }
    let conclusive = sample.len() > n || (field.order() == Some(sample.len() as u64) && sample.len() >= n);
    match walk_grid(field, basis, &sample, GRID_LIMIT) {
        (Some(m), _) => SearchOutcome::Found(m),
        (None, true) if conclusive => SearchOutcome::Absent,
        _ => SearchOutcome::Inconclusive,
    }
}

/// An invertible element of the span, if the search finds one.
pub fn find_nonsingular(basis: &[Matrix], field: &Field) -> Option<Matrix> {
    match search_nonsingular(basis, field) {
        SearchOutcome::Found(m) => Some(m),
        _ => None,
    }
}

/// Independent members of `mats`, in order.
pub(crate) fn independent_subset(field: &Field, mats: Vec<Matrix>) -> Vec<Matrix> {
    let mut ech = Echelon::new(field);
    mats.into_iter().filter(|m| ech.insert(m.entries())).collect()
}

pub fn verify_similarity(a: &MatrixFamily, b: &MatrixFamily, p: &Matrix) -> bool {
    if a.ensure_pair(b).is_err() || p.field() != a.field() || !p.is_square() || p.rows() != a.shape().0 {
        return false;
    }
    a.shape().0 == a.shape().1
        && p.is_invertible()
        && a.matrices().iter().zip(b.matrices()).all(|(ai, bi)| (p * ai) == (bi * p))
}

pub fn verify_equivalence(a: &MatrixFamily, b: &MatrixFamily, p: &Matrix, q: &Matrix) -> bool {
    let (n, m) = a.shape();
    if a.ensure_pair(b).is_err() || p.field() != a.field() || q.field() != a.field() {
        return false;
    }
    p.shape() == (n, n)
        && q.shape() == (m, m)
        && p.is_invertible()
        && q.is_invertible()
        && a.matrices().iter().zip(b.matrices()).all(|(ai, bi)| &(&(p * ai) * q) == bi)
}

/// Cheap invariants that already rule similarity out.
fn obviously_dissimilar(a: &MatrixFamily, b: &MatrixFamily) -> Result<bool> {
    for (ai, bi) in a.matrices().iter().zip(b.matrices()) {
        if ai.rank() != bi.rank() || ai.charpoly()? != bi.charpoly()? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Decides whether a single `P ∈ GL_n(K)` conjugates every `A_i` to `B_i`,
/// returning a verified certificate when it does.
///
/// `Ok(None)` is a definitive "no". When the field is too small for the
/// grid to be conclusive and exhaustive search is too large, the search
/// runs over an extension with at least `n+1` elements and any witness
/// found there is carried back down to `K`. An error is returned only if
/// even that search cannot settle the question.
pub fn decide_similarity(a: &MatrixFamily, b: &MatrixFamily) -> Result<Option<SimilarityCertificate>> {
    a.ensure_pair(b)?;
    let (n, cols) = a.shape();
    if n != cols {
        return Err(Error::Dimension(format!("similarity needs square matrices, got {n}x{cols}")));
    }
    let k = a.field();
    if a.is_empty() {
        return Ok(Some(SimilarityCertificate { field: k.clone(), p: Matrix::identity(k, n) }));
    }
    if obviously_dissimilar(a, b)? {
        return Ok(None);
    }
    let w = intertwiner_basis(a, b)?;
    if w.dim() == 0 {
        return Ok(None);
    }
    let small = k.order().is_some_and(|q| q <= n as u64);
    let exhaustive = k.order().is_some_and(|q| q.checked_pow(w.dim() as u32).is_some_and(|t| t <= EXHAUSTIVE_LIMIT));
    let p = if small && !exhaustive {
        let tower = build_quadratic_tower(k, n as u64 + 1)?;
        let top = tower.last().expect("small field needs a nontrivial tower").field().clone();
        let lifted: Vec<Matrix> = w.basis.iter().map(|m| m.include_into(&top)).collect::<Result<_>>()?;
        match search_nonsingular(&lifted, &top) {
            SearchOutcome::Found(pl) => crate::descent::descend_tower(&pl, a, b)?.p,
            SearchOutcome::Absent => return Ok(None),
            SearchOutcome::Inconclusive => return Err(inconclusive(w.dim())),
        }
    } else {
        match search_nonsingular(&w.basis, k) {
            SearchOutcome::Found(p) => p,
            SearchOutcome::Absent => return Ok(None),
            SearchOutcome::Inconclusive => return Err(inconclusive(w.dim())),
        }
    };
    if !verify_similarity(a, b, &p) {
        return Err(violation("similarity witness failed verification"));
    }
    Ok(Some(SimilarityCertificate { field: k.clone(), p }))
}

fn inconclusive(dim: usize) -> Error {
    Error::Unsupported(format!("intertwiner space of dimension {dim} is too large to search conclusively"))
}
