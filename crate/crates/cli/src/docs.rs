//! Document kinds and the command handlers that consume them.
//!
//! * `pencil`: `field`, `rows`, `cols`, `A`, `B`, and after reduction `form`.
//! * `similarity-instance`: `field`, `n`, optional `labels`, families `A`
//!   and `B`, optional `certificate`, `verdict` and `trace`.
//! * `equivalence-instance`: as above with `rows` and `cols` instead of `n`.

use serde_json::{json, Map, Value};

use kron_core::bridge::{bridge_certificate, certificate_from_bridge, embed_equiv_as_sim};
use kron_core::codec::{self, Cursor, DecodeError, Decoder};
use kron_core::{
    decide_equivalence, decide_similarity, descend_tower_traced, kronecker_reduce, verify_equivalence,
    verify_similarity, EquivalenceCertificate, Error, Field, MatrixFamily, Pencil, SimilarityCertificate,
};

use crate::{locate, render, Command, JobSpec, Report, EXIT_INPUT, EXIT_NO, EXIT_OK, EXIT_VERIFY, EXIT_VIOLATION};

enum Failure {
    Decode(DecodeError),
    Input(String),
    Violation(String),
    Verification(String),
}

impl From<DecodeError> for Failure {
    fn from(e: DecodeError) -> Self {
        Failure::Decode(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Failure::Violation(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Handled = Result<(Value, u8), Failure>;

pub(crate) fn process(cmd: &Command, job: &JobSpec, text: &str, source: &str) -> Report {
    let root: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            return Report {
                code: EXIT_INPUT,
                output: None,
                diagnostics: vec![format!("error: {source}:{}:{}: {e}", e.line(), e.column())],
            };
        }
    };
    let cur = Cursor::root(&root);
    let mut dec = Decoder::new();
    let docs = match root.as_array() {
        Some(_) => cur.items().expect("array"),
        None => vec![cur.clone()],
    };
    let mut outputs = Vec::new();
    let mut diagnostics = Vec::new();
    let mut code = EXIT_OK;
    for doc in &docs {
        match handle(cmd, job, doc, &mut dec) {
            Ok((v, c)) => {
                outputs.push(v);
                code = code.max(c);
            }
            Err(f) => {
                let (c, msg) = match f {
                    Failure::Decode(e) => {
                        let (line, col) = locate(text, &e.path);
                        (EXIT_INPUT, format!("{source}:{line}:{col}: {e}"))
                    }
                    Failure::Input(m) => (EXIT_INPUT, format!("{source}: {}: {m}", codec::render_path(doc.path()))),
                    Failure::Violation(m) => (EXIT_VIOLATION, m),
                    Failure::Verification(m) => (EXIT_VERIFY, m),
                };
                diagnostics.push(format!("error: {msg}"));
                code = code.max(c);
                outputs.push(json!({"kind": "error", "exit": c, "message": msg}));
            }
        }
    }
    let output = if root.is_array() { Value::Array(outputs) } else { outputs.pop().expect("one document") };
    Report { code, output: Some(render(&output)), diagnostics }
}

fn handle(cmd: &Command, job: &JobSpec, doc: &Cursor, dec: &mut Decoder) -> Handled {
    match cmd {
        Command::ReducePencil => reduce(doc, dec),
        Command::DecideSim => decide_sim(doc, dec),
        Command::DecideEquiv => decide_equiv(doc, dec),
        Command::Descend => descend(doc, dec, job.trace),
        Command::DescendEquiv => descend_equiv(doc, dec, job.trace),
        Command::Verify => match doc.kind()? {
            "pencil" => verify_pencil(doc, dec),
            "similarity-instance" => verify_sim(doc, dec),
            "equivalence-instance" => verify_equiv(doc, dec),
            other => Err(doc.get("kind")?.error(format!("nothing to verify in a {other:?} document")).into()),
        },
        Command::GenRandom(_) => unreachable!("generation takes no input"),
    }
}

fn reduce(doc: &Cursor, dec: &mut Decoder) -> Handled {
    codec::expect_kind(doc, "pencil")?;
    let pencil = codec::pencil(dec, doc)?;
    let form = kronecker_reduce(&pencil)?;
    let mut out = codec::encode_pencil(&pencil);
    out["form"] = codec::encode_kronecker(&form, pencil.field());
    Ok((out, EXIT_OK))
}

fn verify_pencil(doc: &Cursor, dec: &mut Decoder) -> Handled {
    let pencil = codec::pencil(dec, doc)?;
    let form = codec::kronecker(dec, &doc.get("form")?, pencil.shape())?;
    if !form.verify(&pencil) {
        return Err(Failure::Verification("Kronecker form does not match the pencil".into()));
    }
    Ok((verification(&pencil_summary(&pencil)), EXIT_OK))
}

fn pencil_summary(p: &Pencil) -> String {
    format!("{}x{} pencil over {}", p.shape().0, p.shape().1, p.field())
}

fn verification(what: &str) -> Value {
    json!({"kind": "verification", "verified": true, "subject": what})
}

struct Instance {
    field: Field,
    a: MatrixFamily,
    b: MatrixFamily,
}

impl Instance {
    fn parse(doc: &Cursor, dec: &mut Decoder, kind: &str) -> Result<Self, Failure> {
        codec::expect_kind(doc, kind)?;
        let field = dec.field(&doc.get("field")?)?;
        let shape = if kind == "similarity-instance" {
            let n = doc.get("n")?.usize()?;
            (n, n)
        } else {
            (doc.get("rows")?.usize()?, doc.get("cols")?.usize()?)
        };
        let labels = match doc.opt("labels")? {
            Some(l) => Some(l.items()?.iter().map(|s| s.str().map(str::to_string)).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        let a = codec::family(&field, &doc.get("A")?, shape, labels.clone())?;
        let b = codec::family(&field, &doc.get("B")?, shape, labels)?;
        if a.len() != b.len() {
            return Err(doc.get("B")?.error(format!("expected {} matrices, found {}", a.len(), b.len())).into());
        }
        Ok(Instance { field, a, b })
    }

    fn encode(&self, kind: &str) -> Map<String, Value> {
        let (rows, cols) = self.a.shape();
        let mut m = Map::new();
        m.insert("kind".into(), json!(kind));
        m.insert("field".into(), codec::encode_field(&self.field));
        if kind == "similarity-instance" {
            m.insert("n".into(), json!(rows));
        } else {
            m.insert("rows".into(), json!(rows));
            m.insert("cols".into(), json!(cols));
        }
        m.insert("labels".into(), json!(self.a.labels()));
        m.insert("A".into(), codec::encode_family(&self.a));
        m.insert("B".into(), codec::encode_family(&self.b));
        m
    }

    /// The families seen over the certificate's field, which must contain
    /// the instance's field.
    fn over(&self, field: &Field) -> Result<(MatrixFamily, MatrixFamily), Failure> {
        if !self.field.is_subfield_of(field) {
            return Err(Failure::Input(format!("certificate over {field} is not over an extension of {}", self.field)));
        }
        Ok((self.a.include_into(field)?, self.b.include_into(field)?))
    }
}

const SIM: &str = "similarity-instance";
const EQUIV: &str = "equivalence-instance";

fn verdict(mut m: Map<String, Value>, certificate: Option<Value>) -> (Value, u8) {
    let yes = certificate.is_some();
    m.insert("verdict".into(), json!(if yes { "yes" } else { "no" }));
    if let Some(c) = certificate {
        m.insert("certificate".into(), c);
    }
    (Value::Object(m), if yes { EXIT_OK } else { EXIT_NO })
}

fn decide_sim(doc: &Cursor, dec: &mut Decoder) -> Handled {
    let inst = Instance::parse(doc, dec, SIM)?;
    let cert = decide_similarity(&inst.a, &inst.b)?;
    Ok(verdict(inst.encode(SIM), cert.as_ref().map(codec::encode_similarity)))
}

fn decide_equiv(doc: &Cursor, dec: &mut Decoder) -> Handled {
    let inst = Instance::parse(doc, dec, EQUIV)?;
    let cert = decide_equivalence(&inst.a, &inst.b)?;
    Ok(verdict(inst.encode(EQUIV), cert.as_ref().map(codec::encode_equivalence)))
}

fn sim_certificate(doc: &Cursor, dec: &mut Decoder, inst: &Instance) -> Result<SimilarityCertificate, Failure> {
    Ok(codec::similarity_certificate(dec, &doc.get("certificate")?, inst.a.shape().0)?)
}

fn equiv_certificate(doc: &Cursor, dec: &mut Decoder, inst: &Instance) -> Result<EquivalenceCertificate, Failure> {
    Ok(codec::equivalence_certificate(dec, &doc.get("certificate")?, &inst.field, inst.a.shape())?)
}

fn check_sim(inst: &Instance, cert: &SimilarityCertificate) -> Result<(), Failure> {
    let (a, b) = inst.over(&cert.field)?;
    if !verify_similarity(&a, &b, &cert.p) {
        return Err(Failure::Verification(format!("similarity certificate over {} does not verify", cert.field)));
    }
    Ok(())
}

fn check_equiv(inst: &Instance, cert: &EquivalenceCertificate) -> Result<(), Failure> {
    let (a, b) = inst.over(&cert.field)?;
    if !verify_equivalence(&a, &b, &cert.p, &cert.q) {
        return Err(Failure::Verification(format!("equivalence certificate over {} does not verify", cert.field)));
    }
    Ok(())
}

fn verify_sim(doc: &Cursor, dec: &mut Decoder) -> Handled {
    let inst = Instance::parse(doc, dec, SIM)?;
    let cert = sim_certificate(doc, dec, &inst)?;
    check_sim(&inst, &cert)?;
    Ok((verification(&format!("similarity certificate over {}", cert.field)), EXIT_OK))
}

fn verify_equiv(doc: &Cursor, dec: &mut Decoder) -> Handled {
    let inst = Instance::parse(doc, dec, EQUIV)?;
    let cert = equiv_certificate(doc, dec, &inst)?;
    check_equiv(&inst, &cert)?;
    Ok((verification(&format!("equivalence certificate over {}", cert.field)), EXIT_OK))
}

fn trace_value(steps: &[kron_core::TraceStep]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|s| {
                let c = SimilarityCertificate { field: s.field.clone(), p: s.p.clone() };
                json!({"stage": s.stage, "certificate": codec::encode_similarity(&c)})
            })
            .collect(),
    )
}

fn descend(doc: &Cursor, dec: &mut Decoder, trace: bool) -> Handled {
    let inst = Instance::parse(doc, dec, SIM)?;
    let cert = sim_certificate(doc, dec, &inst)?;
    check_sim(&inst, &cert)?;
    let (p, steps) = descend_tower_traced(&cert.p, &inst.a, &inst.b)?;
    let down = SimilarityCertificate { field: inst.field.clone(), p };
    let mut m = inst.encode(SIM);
    m.insert("verdict".into(), json!("yes"));
    m.insert("certificate".into(), codec::encode_similarity(&down));
    if trace {
        m.insert("trace".into(), trace_value(&steps));
    }
    Ok((Value::Object(m), EXIT_OK))
}

/// Descends through the bridged similarity problem; the trace shows the
/// bridged witnesses `diag(P, Q⁻¹)`.
fn descend_equiv(doc: &Cursor, dec: &mut Decoder, trace: bool) -> Handled {
    let inst = Instance::parse(doc, dec, EQUIV)?;
    let cert = equiv_certificate(doc, dec, &inst)?;
    check_equiv(&inst, &cert)?;
    let (c, d) = embed_equiv_as_sim(&inst.a, &inst.b)?;
    let r = bridge_certificate(&cert.p, &cert.q)?;
    let (down, steps) = descend_tower_traced(&r, &c.family, &d.family)?;
    let out = certificate_from_bridge(&down, c.n, c.p)?;
    if !verify_equivalence(&inst.a, &inst.b, &out.p, &out.q) {
        return Err(Failure::Violation("descended equivalence certificate failed verification".into()));
    }
    let mut m = inst.encode(EQUIV);
    m.insert("verdict".into(), json!("yes"));
    m.insert("certificate".into(), codec::encode_equivalence(&out));
    if trace {
        m.insert("trace".into(), trace_value(&steps));
    }
    Ok((Value::Object(m), EXIT_OK))
}
