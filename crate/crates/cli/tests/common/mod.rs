//! Independent oracles shared by the integration tests: definitional
//! determinants, group enumeration, and an entry-by-entry check of
//! Kronecker forms.
#![allow(dead_code)]

use kron_core::{random, Elem, Field, KroneckerForm, Matrix, MatrixFamily, Pencil, PencilBlock};
use rand::Rng;

pub fn leibniz(m: &Matrix) -> Elem {
    let f = m.field();
    let n = m.rows();
    let mut total = f.zero();
    let mut perm: Vec<usize> = (0..n).collect();
    visit_permutations(&mut perm, 0, &mut |p| {
        let mut term = f.one();
        for (r, &c) in p.iter().enumerate() {
            term = f.mul(&term, &m[(r, c)]);
        }
        let odd = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count() % 2;
        total = if odd == 0 { f.add(&total, &term) } else { f.sub(&total, &term) };
    });
    total
}

fn visit_permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        visit_permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

pub fn nonsingular(m: &Matrix) -> bool {
    m.is_square() && !m.field().is_zero(&leibniz(m))
}

/// Every invertible `n×n` matrix over a finite field.
pub fn general_linear(f: &Field, n: usize) -> Vec<Matrix> {
    let q = f.order().expect("finite field");
    (0..q.pow((n * n) as u32))
        .map(|mut idx| {
            Matrix::from_fn(f, n, n, |_, _| {
                let e = f.element(idx % q);
                idx /= q;
                e
            })
        })
        .filter(nonsingular)
        .collect()
}

pub fn brute_similar(group: &[Matrix], a: &MatrixFamily, b: &MatrixFamily) -> bool {
    group.iter().any(|p| a.matrices().iter().zip(b.matrices()).all(|(ai, bi)| (p * ai) == (bi * p)))
}

pub fn brute_equivalent(gn: &[Matrix], gp: &[Matrix], a: &MatrixFamily, b: &MatrixFamily) -> bool {
    gn.iter().any(|p| {
        let pa: Vec<Matrix> = a.matrices().iter().map(|m| p * m).collect();
        gp.iter().any(|q| pa.iter().zip(b.matrices()).all(|(m, bi)| &(m * q) == bi))
    })
}

fn family(f: &Field, rows: usize, cols: usize, ms: Vec<Matrix>) -> MatrixFamily {
    MatrixFamily::from_matrices(f, rows, cols, ms).unwrap()
}

/// One or two matrices per family; conjugate by construction two times in
/// three, with one entry perturbed a quarter of the time.
pub fn similarity_sample(f: &Field, n: usize, rng: &mut impl Rng) -> (MatrixFamily, MatrixFamily) {
    let len = rng.gen_range(1..=2);
    let a: Vec<Matrix> = (0..len).map(|_| random::matrix(f, n, n, rng)).collect();
    let mut b: Vec<Matrix> = if rng.gen_range(0..3) == 0 {
        (0..len).map(|_| random::matrix(f, n, n, rng)).collect()
    } else {
        let s = random::invertible(f, n, rng);
        let si = s.inverse().unwrap().unwrap();
        a.iter().map(|m| &(&s * m) * &si).collect()
    };
    if rng.gen_bool(0.25) {
        let i = rng.gen_range(0..len);
        let (r, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        b[i][(r, c)] = f.add(&b[i][(r, c)], &f.one());
    }
    (family(f, n, n, a), family(f, n, n, b))
}

pub fn equivalence_sample(f: &Field, n: usize, p: usize, rng: &mut impl Rng) -> (MatrixFamily, MatrixFamily) {
    let len = rng.gen_range(1..=2);
    if rng.gen_bool(0.5) {
        return random::equivalent_pair(f, n, p, len, rng);
    }
    let a = (0..len).map(|_| random::matrix(f, n, p, rng)).collect();
    let b = (0..len).map(|_| random::low_rank(f, n, p, rng.gen_range(0..=n.min(p)), rng)).collect();
    (family(f, n, p, a), family(f, n, p, b))
}

fn expected_entry(f: &Field, blk: &PencilBlock, i: usize, j: usize) -> (Elem, Elem) {
    let bit = |c: bool| if c { f.one() } else { f.zero() };
    match blk {
        PencilBlock::Zero { .. } => (f.zero(), f.zero()),
        PencilBlock::Regular(p) => (p[(i, j)].clone(), bit(i == j)),
        PencilBlock::JordanOneX(_) => (bit(i == j), bit(j == i + 1)),
        PencilBlock::JordanXOne(_) => (bit(j == i + 1), bit(i == j)),
        PencilBlock::SingularRow(_) => (bit(j == i), bit(j == i + 1)),
        PencilBlock::SingularCol(_) => (bit(i == j), bit(i == j + 1)),
    }
}

fn block_shape(blk: &PencilBlock) -> (usize, usize) {
    match blk {
        PencilBlock::Zero { rows, cols } => (*rows, *cols),
        PencilBlock::Regular(p) => (p.rows(), p.rows()),
        PencilBlock::JordanOneX(r) | PencilBlock::JordanXOne(r) => (*r, *r),
        PencilBlock::SingularRow(r) => (*r, r + 1),
        PencilBlock::SingularCol(r) => (r + 1, *r),
    }
}

/// Checks `P1·(A + X·B)·Q1` entry by entry against the claimed blocks.
pub fn check_form(pencil: &Pencil, form: &KroneckerForm) -> Result<(), String> {
    let f = pencil.field();
    let (n, p) = pencil.shape();
    if form.p1.shape() != (n, n) || form.q1.shape() != (p, p) {
        return Err("witness shapes".into());
    }
    if !nonsingular(&form.p1) || !nonsingular(&form.q1) {
        return Err("singular witness".into());
    }
    if form.blocks.iter().filter(|b| matches!(b, PencilBlock::Regular(_))).count() > 1 {
        return Err("more than one regular block".into());
    }
    let a = &(&form.p1 * pencil.a()) * &form.q1;
    let b = &(&form.p1 * pencil.b()) * &form.q1;
    let mut spans = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    for blk in &form.blocks {
        let (h, w) = block_shape(blk);
        spans.push((blk, r0..r0 + h, c0..c0 + w));
        r0 += h;
        c0 += w;
    }
    if (r0, c0) != (n, p) {
        return Err(format!("blocks cover {r0}x{c0}, pencil is {n}x{p}"));
    }
    for i in 0..n {
        for j in 0..p {
            let owner = spans.iter().find(|(_, rs, cs)| rs.contains(&i) && cs.contains(&j));
            let (ea, eb) = match owner {
                Some((blk, rs, cs)) => expected_entry(f, blk, i - rs.start, j - cs.start),
                None => (f.zero(), f.zero()),
            };
            if a[(i, j)] != ea || b[(i, j)] != eb {
                return Err(format!("entry ({i},{j}) differs from the block layout"));
            }
        }
    }
    Ok(())
}

pub struct Run {
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub code: u8,
}

/// Runs the built binary with `stdin` piped in.
pub fn kron(args: &[&str], stdin: Option<&[u8]>) -> Run {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let mut child = Command::new(env!("CARGO_BIN_EXE_kron"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    {
        let mut pipe = child.stdin.take().expect("piped stdin");
        pipe.write_all(stdin.unwrap_or_default()).expect("stdin accepts input");
    }
    let out = child.wait_with_output().expect("binary finishes");
    Run { stdout: out.stdout, stderr: out.stderr, code: out.status.code().expect("exit code") as u8 }
}

pub struct Golden {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub input: Option<&'static str>,
    pub code: u8,
}

const fn g(name: &'static str, args: &'static [&'static str], input: Option<&'static str>, code: u8) -> Golden {
    Golden { name, args, input, code }
}

pub const GOLDEN: &[Golden] = &[
    g("reduce_lk", &["reduce-pencil"], Some("lk_pencil.json"), 0),
    g("reduce_mixed_f3", &["reduce-pencil"], Some("mixed_pencil_f3.json"), 0),
    g("reduce_rational", &["reduce-pencil"], Some("rational_pencil.json"), 0),
    g("sim_nilpotent_f2", &["decide-sim"], Some("sim_nilpotent_f2.json"), 0),
    g("sim_pair_no_q", &["decide-sim"], Some("sim_pair_no_q.json"), 1),
    g("sim_f4_family", &["decide-sim"], Some("sim_f4_family.json"), 1),
    g("equiv_row_f2", &["decide-equiv"], Some("equiv_row_f2.json"), 0),
    g("verify_equiv_f3", &["verify"], Some("equiv_cert_f3.json"), 0),
    g("descend_f2_f8", &["descend", "--trace"], Some("lcert_f2_f8.json"), 0),
    g("descend_q_sqrt2", &["descend"], Some("lcert_q_sqrt2.json"), 0),
    g("batch_f3", &["decide-sim"], Some("batch_f3.json"), 1),
    g("bad_rational", &["decide-sim"], Some("bad_rational.json"), 2),
    g("bad_coefficients", &["decide-sim"], Some("bad_coefficients.json"), 2),
    g("gen_pencil_f5", &["gen-random", "--kind", "pencil", "--field", "F5", "-n", "3", "-p", "4", "--seed", "7"], None, 0),
    g("gen_similar_q", &["gen-random", "--kind", "similar-pair", "--field", "Q", "-n", "2", "--count", "2", "--seed", "3"], None, 0),
];

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Standard output, then standard error under a marker line when present.
pub fn golden_transcript(case: &Golden) -> (Vec<u8>, u8) {
    let input = case.input.map(|f| std::fs::read(golden_dir().join(f)).expect("golden input exists"));
    let run = kron(case.args, input.as_deref());
    let mut text = run.stdout;
    if !run.stderr.is_empty() {
        text.extend_from_slice(b"--- stderr ---\n");
        text.extend_from_slice(&run.stderr);
    }
    (text, run.code)
}

/// Compares one case against its stored transcript; with `KRON_BLESS` set
/// the transcript is rewritten instead.
pub fn check_golden(case: &Golden) -> Result<(), String> {
    let (first, code) = golden_transcript(case);
    let (second, _) = golden_transcript(case);
    if first != second {
        return Err(format!("{}: two runs differ", case.name));
    }
    if code != case.code {
        return Err(format!("{}: exit {code}, expected {}", case.name, case.code));
    }
    let path = golden_dir().join(format!("{}.out", case.name));
    if std::env::var_os("KRON_BLESS").is_some() {
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let stored = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if stored != first {
        return Err(format!("{}: output differs from {}", case.name, path.display()));
    }
    Ok(())
}
