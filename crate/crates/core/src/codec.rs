//! JSON encodings of fields, elements, matrices, families, pencils,
//! certificates and Kronecker forms.
//!
//! Decoding errors carry the path of the offending value so that callers can
//! point at it in the source text.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::fields::{Elem, Field, FieldKind};
use crate::intertwine::{EquivalenceCertificate, MatrixFamily, SimilarityCertificate};
use crate::matrices::Matrix;
use crate::pencil::{KroneckerForm, Pencil, PencilBlock};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSeg {
    Key(String),
    Index(usize),
}

/// A decoding failure at `path` (from the document root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeError {
    pub path: Vec<PathSeg>,
    pub message: String,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", render_path(&self.path), self.message)
    }
}

impl std::error::Error for DecodeError {}

pub fn render_path(path: &[PathSeg]) -> String {
    let mut s = String::from("$");
    for seg in path {
        match seg {
            PathSeg::Key(k) => {
                s.push('.');
                s.push_str(k);
            }
            PathSeg::Index(i) => s.push_str(&format!("[{i}]")),
        }
    }
    s
}

pub type DecodeResult<T> = std::result::Result<T, DecodeError>;

/// A position inside a document being decoded.
#[derive(Clone)]
pub struct Cursor<'a> {
    value: &'a Value,
    path: Vec<PathSeg>,
}

impl<'a> Cursor<'a> {
    pub fn root(value: &'a Value) -> Self {
        Cursor { value, path: Vec::new() }
    }

    pub fn value(&self) -> &'a Value {
        self.value
    }

    pub fn path(&self) -> &[PathSeg] {
        &self.path
    }

    pub fn error(&self, message: impl Into<String>) -> DecodeError {
        DecodeError { path: self.path.clone(), message: message.into() }
    }

    fn object(&self) -> DecodeResult<&'a Map<String, Value>> {
        self.value.as_object().ok_or_else(|| self.error("expected an object"))
    }

    pub fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some_and(|v| !v.is_null())
    }

    pub fn get(&self, key: &str) -> DecodeResult<Cursor<'a>> {
        let v = self.object()?.get(key).ok_or_else(|| self.error(format!("missing key {key:?}")))?;
        let mut path = self.path.clone();
        path.push(PathSeg::Key(key.to_string()));
        Ok(Cursor { value: v, path })
    }

    pub fn opt(&self, key: &str) -> DecodeResult<Option<Cursor<'a>>> {
        if self.has(key) {
            self.get(key).map(Some)
        } else {
            self.object().map(|_| None)
        }
    }

    pub fn items(&self) -> DecodeResult<Vec<Cursor<'a>>> {
        let arr = self.value.as_array().ok_or_else(|| self.error("expected an array"))?;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut path = self.path.clone();
                path.push(PathSeg::Index(i));
                Cursor { value: v, path }
            })
            .collect())
    }

    pub fn str(&self) -> DecodeResult<&'a str> {
        self.value.as_str().ok_or_else(|| self.error("expected a string"))
    }

    pub fn usize(&self) -> DecodeResult<usize> {
        self.value
            .as_u64()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| self.error("expected a non-negative integer"))
    }

    pub fn kind(&self) -> DecodeResult<&'a str> {
        self.get("kind")?.str()
    }
}

/// Decodes field descriptors, reusing fields already seen in the document so
/// that identical descriptors share their arithmetic tables.
#[derive(Default)]
pub struct Decoder {
    fields: HashMap<String, Field>,
}

impl Decoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(&mut self, cur: &Cursor) -> DecodeResult<Field> {
        let key = cur.value().to_string();
        if let Some(f) = self.fields.get(&key) {
            return Ok(f.clone());
        }
        let f = match cur.kind()? {
            "rationals" => Field::rationals(),
            "prime" => {
                let p = cur.get("p")?;
                Field::prime(p.value().as_u64().ok_or_else(|| p.error("expected a prime"))?)
                    .map_err(|e| p.error(e.to_string()))?
            }
            "extension" => {
                let base = self.field(&cur.get("base")?)?;
                let m = cur.get("modulus")?;
                let modulus = m.items()?.iter().map(|c| element(&base, c)).collect::<DecodeResult<_>>()?;
                Field::extension(&base, modulus).map_err(|e| m.error(e.to_string()))?
            }
            other => return Err(cur.get("kind")?.error(format!("unknown field kind {other:?}"))),
        };
        self.fields.insert(key, f.clone());
        Ok(f)
    }
}

pub fn encode_field(f: &Field) -> Value {
    match f.kind() {
        FieldKind::Rationals => json!({"kind": "rationals"}),
        FieldKind::Prime(p) => json!({"kind": "prime", "p": p}),
        FieldKind::Extension { base, modulus } => json!({
            "kind": "extension",
            "base": encode_field(base),
            "modulus": modulus.iter().map(|c| encode_element(base, c)).collect::<Vec<_>>(),
        }),
    }
}

pub fn decode_field(cur: &Cursor) -> DecodeResult<Field> {
    Decoder::new().field(cur)
}

/// Rationals as `"num/den"` strings, residues as integers, extension
/// elements as coefficient arrays over the immediate base.
pub fn encode_element(f: &Field, x: &Elem) -> Value {
    match (f.kind(), x) {
        (FieldKind::Rationals, Elem::Rat(r)) => Value::String(format!("{}/{}", r.numer(), r.denom())),
        (FieldKind::Prime(_), Elem::Fin(v)) => json!(v),
        (FieldKind::Extension { base, .. }, _) => {
            Value::Array(f.coefficients(x).iter().map(|c| encode_element(base, c)).collect())
        }
        _ => panic!("element {x:?} does not belong to {f}"),
    }
}

pub fn element(f: &Field, cur: &Cursor) -> DecodeResult<Elem> {
    match f.kind() {
        FieldKind::Rationals => {
            let r = match cur.value() {
                Value::String(s) => parse_rational(s).ok_or_else(|| cur.error(format!("invalid rational {s:?}")))?,
                Value::Number(n) => n
                    .as_i64()
                    .map(|v| BigRational::from_integer(BigInt::from(v)))
                    .ok_or_else(|| cur.error("rationals must be integers or \"num/den\" strings"))?,
                _ => return Err(cur.error("expected a rational")),
            };
            Ok(Elem::Rat(r))
        }
        FieldKind::Prime(p) => {
            let v = cur.value().as_u64().ok_or_else(|| cur.error(format!("expected a residue in 0..{p}")))?;
            if v >= *p {
                return Err(cur.error(format!("residue {v} is not in 0..{p}")));
            }
            Ok(Elem::Fin(v))
        }
        FieldKind::Extension { base, .. } => {
            let items = cur.items()?;
            if items.len() != f.degree() {
                return Err(cur.error(format!("expected {} coefficients, found {}", f.degree(), items.len())));
            }
            let coeffs = items.iter().map(|c| element(base, c)).collect::<DecodeResult<_>>()?;
            Ok(f.from_coefficients(coeffs))
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub fn encode_matrix(m: &Matrix) -> Value {
    let f = m.field();
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| encode_element(f, &m[(r, c)])).collect()))
            .collect(),
    )
}

/// Rows of elements; `shape` is checked when given and needed when the
/// matrix has no rows.
pub fn matrix(f: &Field, cur: &Cursor, shape: Option<(usize, usize)>) -> DecodeResult<Matrix> {
    let rows = cur.items()?;
    let mut data = Vec::with_capacity(rows.len());
    let mut width = None;
    for row in &rows {
        let cells = row.items()?;
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => return Err(row.error(format!("expected {w} entries, found {}", cells.len()))),
            _ => {}
        }
        data.push(cells.iter().map(|c| element(f, c)).collect::<DecodeResult<Vec<_>>>()?);
    }
    let found = (rows.len(), width.unwrap_or(0));
    match shape {
        Some((r, c)) if rows.is_empty() && r == 0 => return Ok(Matrix::zeros(f, 0, c)),
        Some(s) if s != found => return Err(cur.error(format!("expected a {}x{} matrix, found {}x{}", s.0, s.1, found.0, found.1))),
        _ => {}
    }
    Matrix::from_rows(f, data).map_err(|e| cur.error(e.to_string()))
}

pub fn encode_family(fam: &MatrixFamily) -> Value {
    Value::Array(fam.matrices().iter().map(encode_matrix).collect())
}

/// A family under key `key` of `cur`, labelled by `labels`.
pub fn family(
    f: &Field,
    cur: &Cursor,
    shape: (usize, usize),
    labels: Option<Vec<String>>,
) -> DecodeResult<MatrixFamily> {
    let mats = cur.items()?.iter().map(|m| matrix(f, m, Some(shape))).collect::<DecodeResult<Vec<_>>>()?;
    let labels = labels.unwrap_or_else(|| (1..=mats.len()).map(|i| i.to_string()).collect());
    MatrixFamily::new(f, shape.0, shape.1, labels, mats).map_err(|e| cur.error(e.to_string()))
}

pub fn encode_pencil(p: &Pencil) -> Value {
    let (rows, cols) = p.shape();
    json!({
        "kind": "pencil",
        "field": encode_field(p.field()),
        "rows": rows,
        "cols": cols,
        "A": encode_matrix(p.a()),
        "B": encode_matrix(p.b()),
    })
}

pub fn pencil(dec: &mut Decoder, cur: &Cursor) -> DecodeResult<Pencil> {
    let f = dec.field(&cur.get("field")?)?;
    let shape = shape_of(cur, "rows", "cols")?;
    let a = matrix(&f, &cur.get("A")?, shape)?;
    let b = matrix(&f, &cur.get("B")?, shape.or(Some(a.shape())))?;
    Pencil::new(a, b).map_err(|e| cur.error(e.to_string()))
}

fn shape_of(cur: &Cursor, rows: &str, cols: &str) -> DecodeResult<Option<(usize, usize)>> {
    match (cur.opt(rows)?, cur.opt(cols)?) {
        (Some(r), Some(c)) => Ok(Some((r.usize()?, c.usize()?))),
        (None, None) => Ok(None),
        _ => Err(cur.error(format!("give both {rows:?} and {cols:?} or neither"))),
    }
}

pub fn encode_similarity(c: &SimilarityCertificate) -> Value {
    json!({"kind": "similarity", "field": encode_field(&c.field), "P": encode_matrix(&c.p)})
}

pub fn similarity_certificate(dec: &mut Decoder, cur: &Cursor, n: usize) -> DecodeResult<SimilarityCertificate> {
    expect_kind(cur, "similarity")?;
    let field = dec.field(&cur.get("field")?)?;
    let p = matrix(&field, &cur.get("P")?, Some((n, n)))?;
    Ok(SimilarityCertificate { field, p })
}

pub fn encode_equivalence(c: &EquivalenceCertificate) -> Value {
    json!({
        "kind": "equivalence",
        "field": encode_field(&c.field),
        "P": encode_matrix(&c.p),
        "Q": encode_matrix(&c.q),
    })
}

/// `field` is used when the certificate carries no field of its own.
pub fn equivalence_certificate(
    dec: &mut Decoder,
    cur: &Cursor,
    field: &Field,
    shape: (usize, usize),
) -> DecodeResult<EquivalenceCertificate> {
    expect_kind(cur, "equivalence")?;
    let field = match cur.opt("field")? {
        Some(f) => dec.field(&f)?,
        None => field.clone(),
    };
    let p = matrix(&field, &cur.get("P")?, Some((shape.0, shape.0)))?;
    let q = matrix(&field, &cur.get("Q")?, Some((shape.1, shape.1)))?;
    Ok(EquivalenceCertificate { field, p, q })
}

pub fn expect_kind(cur: &Cursor, kind: &str) -> DecodeResult<()> {
    let found = cur.kind()?;
    if found != kind {
        return Err(cur.get("kind")?.error(format!("expected kind {kind:?}, found {found:?}")));
    }
    Ok(())
}

pub fn encode_block(b: &PencilBlock) -> Value {
    match b {
        PencilBlock::Zero { rows, cols } => json!({"kind": b.kind(), "rows": rows, "cols": cols}),
        PencilBlock::Regular(m) => json!({"kind": b.kind(), "size": m.rows(), "payload": encode_matrix(m)}),
        PencilBlock::JordanOneX(s) | PencilBlock::JordanXOne(s) | PencilBlock::SingularRow(s) | PencilBlock::SingularCol(s) => {
            json!({"kind": b.kind(), "size": s})
        }
    }
}

pub fn block(f: &Field, cur: &Cursor) -> DecodeResult<PencilBlock> {
    let size = || cur.get("size")?.usize();
    Ok(match cur.kind()? {
        "zero" => PencilBlock::Zero { rows: cur.get("rows")?.usize()?, cols: cur.get("cols")?.usize()? },
        "regular" => {
            let s = size()?;
            PencilBlock::Regular(matrix(f, &cur.get("payload")?, Some((s, s)))?)
        }
        "jordan-1x" => PencilBlock::JordanOneX(size()?),
        "jordan-x1" => PencilBlock::JordanXOne(size()?),
        "singular-row" => PencilBlock::SingularRow(size()?),
        "singular-col" => PencilBlock::SingularCol(size()?),
        other => return Err(cur.get("kind")?.error(format!("unknown block kind {other:?}"))),
    })
}

/// Blocks, witnesses, and the blocks written out as `A-part + X*B-part`.
pub fn encode_kronecker(form: &KroneckerForm, field: &Field) -> Value {
    json!({
        "kind": "kronecker-form",
        "blocks": form.blocks.iter().map(encode_block).collect::<Vec<_>>(),
        "notation": form.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "P1": encode_matrix(&form.p1),
        "Q1": encode_matrix(&form.q1),
        "field": encode_field(field),
    })
}

pub fn kronecker(dec: &mut Decoder, cur: &Cursor, shape: (usize, usize)) -> DecodeResult<KroneckerForm> {
    expect_kind(cur, "kronecker-form")?;
    let f = dec.field(&cur.get("field")?)?;
    let blocks = cur.get("blocks")?.items()?.iter().map(|b| block(&f, b)).collect::<DecodeResult<_>>()?;
    let p1 = matrix(&f, &cur.get("P1")?, Some((shape.0, shape.0)))?;
    let q1 = matrix(&f, &cur.get("Q1")?, Some((shape.1, shape.1)))?;
    Ok(KroneckerForm { blocks, p1, q1 })
}
