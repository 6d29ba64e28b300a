use super::*;
use crate::fields::Elem;
use crate::random;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fam(f: &Field, ms: Vec<Matrix>) -> MatrixFamily {
    let n = ms.first().map_or(0, Matrix::rows);
    MatrixFamily::from_matrices(f, n, n, ms).unwrap()
}

fn quad(l: &Field) -> QuadraticExtension {
    QuadraticExtension::new(l).unwrap()
}

fn over(m: &Matrix, k: &Field) -> bool {
    m.field() == k
}

#[test]
fn span_examples() {
    let f3 = Field::prime(3).unwrap();
    let a = fam(&f3, vec![Matrix::from_ints(&f3, &[[1, 2], [0, 1]])]);
    let p = Matrix::from_ints(&f3, &[[1, 1], [0, 1]]);
    assert_eq!(descend_span(&p, &a, &a).unwrap(), p);

    let f9 = Field::galois(3, 2).unwrap();
    let u = f9.generator();
    let p = Matrix::identity(&f9, 2).scale(&u);
    assert_eq!(descend_span(&p, &a, &a).unwrap(), Matrix::identity(&f3, 2));

    let q = Field::rationals();
    let l = Field::quadratic_rational(2).unwrap();
    let nil = Matrix::from_ints(&q, &[[0, 1], [0, 0]]);
    let p = &Matrix::identity(&l, 2) + &nil.include_into(&l).unwrap().scale(&l.generator());
    let a = fam(&q, vec![nil]);
    let out = descend_span(&p, &a, &a).unwrap();
    assert_eq!(out, Matrix::identity(&q, 2));
}

#[test]
fn span_rejects_non_witness() {
    let f3 = Field::prime(3).unwrap();
    let f9 = Field::galois(3, 2).unwrap();
    let a = fam(&f3, vec![Matrix::from_ints(&f3, &[[1, 1], [0, 1]])]);
    let b = fam(&f3, vec![Matrix::from_ints(&f3, &[[1, 0], [1, 1]])]);
    assert!(descend_span(&Matrix::identity(&f9, 2), &a, &b).is_err());
}

#[test]
fn quadratic_examples() {
    let f2 = Field::prime(2).unwrap();
    let f4 = Field::galois(2, 2).unwrap();
    let ext = quad(&f4);
    let eps = ext.epsilon();

    let a = fam(&f2, vec![Matrix::from_ints(&f2, &[[0, 1], [1, 1]])]);
    let p = Matrix::identity(&f4, 2).scale(&eps);
    assert_eq!(descend_quadratic(&p, &a, &a, &ext).unwrap(), Matrix::identity(&f2, 2));

    let a1 = Matrix::from_ints(&f2, &[[1, 0], [1, 0]]);
    let s = Matrix::from_ints(&f2, &[[1, 1], [0, 1]]);
    let si = s.inverse().unwrap().unwrap();
    let a = fam(&f2, vec![a1.clone()]);
    let b = fam(&f2, vec![&(&s * &a1) * &si]);
    let p = s.include_into(&f4).unwrap().scale(&eps);
    let out = descend_quadratic(&p, &a, &b, &ext).unwrap();
    assert_eq!(out, s);
    assert!(verify_similarity(&a, &b, &out));

    let empty = MatrixFamily::from_matrices(&f2, 3, 3, vec![]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random::invertible(&f4, 3, &mut rng);
    let out = descend_quadratic(&p, &empty, &empty, &ext).unwrap();
    assert!(over(&out, &f2) && out.is_invertible());
}

#[test]
fn quadratic_rejects_bad_witness() {
    let f2 = Field::prime(2).unwrap();
    let f4 = Field::galois(2, 2).unwrap();
    let ext = quad(&f4);
    let a = fam(&f2, vec![Matrix::from_ints(&f2, &[[0, 1], [0, 0]])]);
    let b = fam(&f2, vec![Matrix::from_ints(&f2, &[[1, 0], [0, 0]])]);
    let err = descend_quadratic(&Matrix::identity(&f4, 2), &a, &b, &ext).unwrap_err();
    assert!(matches!(err, Error::InvariantViolation(_)));
}

#[test]
fn tower_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f5 = Field::prime(5).unwrap();
    let f25 = Field::galois(5, 2).unwrap();
    let plan = DescentPlan::new(&f5, &f25, 2).unwrap();
    assert!(plan.tower.is_empty());
    let (a, b, p) = random::l_certified_pair(&f5, &f25, 2, 2, &mut rng).unwrap();
    let (out, trace) = descend_tower_traced(&p, &a, &b).unwrap();
    assert!(verify_similarity(&a, &b, &out));
    assert_eq!(trace.len(), 2);

    let f2 = Field::prime(2).unwrap();
    let f8 = Field::galois(2, 3).unwrap();
    let plan = DescentPlan::new(&f2, &f8, 3).unwrap();
    assert_eq!(plan.tower.len(), 1);
    assert_eq!(plan.top().order(), Some(4));
    assert_eq!(plan.compositum.order(), Some(64));
    let (a, b, p) = random::l_certified_pair(&f2, &f8, 3, 2, &mut rng).unwrap();
    let (out, trace) = descend_tower_traced(&p, &a, &b).unwrap();
    assert!(verify_similarity(&a, &b, &out));
    let stages: Vec<&str> = trace.iter().map(|s| s.stage.as_str()).collect();
    assert_eq!(stages, ["input", "compositum", "span descent", "quadratic step 1"]);
    assert_eq!(trace[2].field.order(), Some(4));

    let s = random::invertible(&f2, 3, &mut rng);
    let a = fam(&f2, vec![random::matrix(&f2, 3, 3, &mut rng)]);
    let b = a.transform(&s, &s.inverse().unwrap().unwrap()).unwrap();
    assert_eq!(descend_tower(&s, &a, &b).unwrap().p, s);
}

#[test]
fn tower_rejects_unrelated_fields_and_bad_input() {
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let f9 = Field::galois(3, 2).unwrap();
    let a = fam(&f2, vec![Matrix::identity(&f2, 2)]);
    assert!(matches!(descend_tower(&Matrix::identity(&f9, 2), &a, &a), Err(Error::FieldMismatch(_) | Error::Precondition(_))));
    let a3 = fam(&f3, vec![Matrix::from_ints(&f3, &[[0, 1], [0, 0]])]);
    let b3 = fam(&f3, vec![Matrix::zeros(&f3, 2, 2)]);
    assert!(matches!(descend_tower(&Matrix::identity(&f9, 2), &a3, &b3), Err(Error::Precondition(_))));
}

fn soundness(k: &Field, l: &Field, count: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(1..=2);
        let (a, b, p) = random::l_certified_pair(k, l, n, len, &mut rng).unwrap();
        let cert = descend_tower(&p, &a, &b).unwrap_or_else(|e| panic!("{e} on {a:?} {b:?} {p:?}"));
        assert_eq!(&cert.field, k);
        assert!(cert.p.entries().iter().all(|x| k.check(x).is_ok()));
        assert!(verify_similarity(&a, &b, &cert.p));
    }
}

#[test]
fn descent_is_sound_over_f2_f4() {
    soundness(&Field::prime(2).unwrap(), &Field::galois(2, 2).unwrap(), 60, 21);
}

#[test]
fn descent_is_sound_over_f2_f8() {
    soundness(&Field::prime(2).unwrap(), &Field::galois(2, 3).unwrap(), 60, 22);
}

#[test]
fn descent_is_sound_over_f3_f9() {
    soundness(&Field::prime(3).unwrap(), &Field::galois(3, 2).unwrap(), 60, 23);
}

#[test]
fn descent_is_sound_over_rationals() {
    soundness(&Field::rationals(), &Field::quadratic_rational(2).unwrap(), 60, 24);
}

fn conjugate(ext: &QuadraticExtension, p: &Matrix) -> Matrix {
    Matrix::from_fn(ext.field(), p.rows(), p.cols(), |r, c| ext.conjugate(&p[(r, c)]).unwrap())
}

/// `diag(M, I) + ε·diag(I, N)` with `N` nilpotent (strictly upper
/// triangular with random entries), redrawn until invertible.
fn normalized_pair(k: &Field, ext: &QuadraticExtension, n: usize, rng: &mut impl Rng) -> (Matrix, Matrix, Matrix) {
    loop {
        let q = rng.gen_range(0..=n);
        let m = match rng.gen_range(0..3) {
            0 => Matrix::identity(k, q).scale(&k.random(rng)),
            _ => random::matrix(k, q, q, rng),
        };
        let nil = Matrix::from_fn(k, n - q, n - q, |r, c| if c > r && rng.gen_bool(0.6) { k.random(rng) } else { k.zero() });
        let qm = Matrix::block_diag(k, &[m, Matrix::identity(k, n - q)]);
        let rm = Matrix::block_diag(k, &[Matrix::identity(k, q), nil]);
        let l = ext.field();
        let p = &qm.include_into(l).unwrap() + &rm.include_into(l).unwrap().scale(&ext.epsilon());
        if p.is_invertible() {
            return (qm, rm, p);
        }
    }
}

#[test]
fn commutant_of_conjugate_quotient_commutes_with_witness() {
    let f2 = Field::prime(2).unwrap();
    let tower = crate::fields::build_quadratic_tower(&f2, 16).unwrap();
    let exts = [
        tower[0].clone(),
        tower[1].clone(),
        quad(&Field::galois(3, 2).unwrap()),
        quad(&Field::galois(5, 2).unwrap()),
        quad(&Field::quadratic_rational(2).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut nontrivial = 0;
    for i in 0..200 {
        let ext = &exts[i % exts.len()];
        let k = ext.base();
        let n = rng.gen_range(1..=4);
        let (_, _, p) = normalized_pair(k, ext, n, &mut rng);
        let x = &conjugate(ext, &p).inverse().unwrap().unwrap() * &p;
        let w = base_commutant(&x, k).unwrap();
        if w.dim() > 1 {
            nontrivial += 1;
        }
        let mut combo = Matrix::zeros(k, n, n);
        for c in &w.basis {
            let cl = c.include_into(ext.field()).unwrap();
            assert_eq!(&cl * &x, &x * &cl);
            assert_eq!(&cl * &p, &p * &cl);
            combo = &combo + &c.scale(&k.random(&mut rng));
        }
        let cl = combo.include_into(ext.field()).unwrap();
        assert_eq!(&cl * &p, &p * &cl);
    }
    assert!(nontrivial > 50);
}

#[test]
fn coordinate_matrices_recombine() {
    let f2 = Field::prime(2).unwrap();
    let tower = crate::fields::build_quadratic_tower(&f2, 16).unwrap();
    let l = tower[1].field();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let p = random::matrix(l, 3, 3, &mut rng);
    let parts = coordinate_matrices(&p, &f2).unwrap();
    assert_eq!(parts.len(), 4);
    // the coordinate basis of 𝔽_16 over 𝔽_2 along the tower: 1, ε1, ε2, ε1·ε2
    let e1 = l.include(&tower[0].epsilon(), tower[0].field()).unwrap();
    let e2 = l.generator();
    let basis: Vec<Elem> = vec![l.one(), e1.clone(), e2.clone(), l.mul(&e1, &e2)];
    let mut sum = Matrix::zeros(l, 3, 3);
    for (part, x) in parts.iter().zip(&basis) {
        sum = &sum + &part.include_into(l).unwrap().scale(x);
    }
    assert_eq!(sum, p);
}
