use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use kron_core::codec::{self, Cursor};
use kron_core::{random, Field, SimilarityCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Pencil,
    SimilarPair,
    EquivalentPair,
    LCertifiedPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub field: String,
    /// Field of the witness for `l-certified-pair`.
    pub extension: Option<String>,
    pub n: usize,
    /// Column count for pencils and equivalence pairs; `n` when absent.
    pub p: Option<usize>,
    /// Matrices per family.
    pub len: usize,
    pub count: usize,
}

/// `Q`, `Q(sqrt d)`, `F<q>` for a prime power `q`, or a JSON descriptor.
pub fn parse_field_spec(spec: &str) -> Result<Field, String> {
    let s = spec.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| format!("field descriptor: {e}"))?;
        return codec::decode_field(&Cursor::root(&v)).map_err(|e| e.to_string());
    }
    if s == "Q" {
        return Ok(Field::rationals());
    }
    if let Some(rest) = s.strip_prefix("Q(sqrt") {
        let d: i64 = rest
            .trim_end_matches(')')
            .trim_matches(|c: char| c == '(' || c.is_whitespace())
            .parse()
            .map_err(|_| format!("bad square root in {spec:?}"))?;
        return Field::quadratic_rational(d).map_err(|e| e.to_string());
    }
    if let Some(q) = s.strip_prefix('F').and_then(|q| q.parse::<u64>().ok()) {
        let (p, k) = prime_power(q).ok_or_else(|| format!("{q} is not a prime power"))?;
        return Field::galois(p, k).map_err(|e| e.to_string());
    }
    Err(format!("unknown field {spec:?}; use Q, Q(sqrt d), F<q> or a JSON descriptor"))
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub(crate) fn generate(spec: &GenSpec, seed: u64) -> Result<Value, String> {
    let field = parse_field_spec(&spec.field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, p) = (spec.n, spec.p.unwrap_or(spec.n));
    let extension = match (spec.kind, &spec.extension) {
        (GenKind::LCertifiedPair, Some(e)) => Some(parse_field_spec(e)?),
        (GenKind::LCertifiedPair, None) => return Err("l-certified-pair needs --extension".into()),
        _ => None,
    };
    let fe = codec::encode_field(&field);
    let mut docs = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let doc = match spec.kind {
            GenKind::Pencil => codec::encode_pencil(&random::pencil(&field, n, p, &mut rng)),
            GenKind::SimilarPair => {
                let (a, b) = random::similar_pair(&field, n, spec.len, &mut rng);
                json!({"kind": "similarity-instance", "field": fe, "n": n, "labels": a.labels(),
                       "A": codec::encode_family(&a), "B": codec::encode_family(&b)})
            }
            GenKind::EquivalentPair => {
                let (a, b) = random::equivalent_pair(&field, n, p, spec.len, &mut rng);
                json!({"kind": "equivalence-instance", "field": fe, "rows": n, "cols": p, "labels": a.labels(),
                       "A": codec::encode_family(&a), "B": codec::encode_family(&b)})
            }
            GenKind::LCertifiedPair => {
                let l = extension.as_ref().expect("checked above");
                let (a, b, w) = random::l_certified_pair(&field, l, n, spec.len, &mut rng).map_err(|e| e.to_string())?;
                let cert = SimilarityCertificate { field: l.clone(), p: w };
                json!({"kind": "similarity-instance", "field": fe, "n": n, "labels": a.labels(),
                       "A": codec::encode_family(&a), "B": codec::encode_family(&b),
                       "certificate": codec::encode_similarity(&cert)})
            }
        };
        docs.push(doc);
    }
    Ok(if docs.len() == 1 { docs.pop().expect("one document") } else { Value::Array(docs) })
}
