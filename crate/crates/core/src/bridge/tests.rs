use super::*;
use crate::random;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rows(f: &Field, n: usize, p: usize, ms: Vec<Matrix>) -> MatrixFamily {
    MatrixFamily::from_matrices(f, n, p, ms).unwrap()
}

fn general_linear(f: &Field, n: usize) -> Vec<Matrix> {
    let q = f.order().unwrap();
    (0..q.pow((n * n) as u32))
        .map(|mut idx| {
            Matrix::from_fn(f, n, n, |_, _| {
                let e = f.element(idx % q);
                idx /= q;
                e
            })
        })
        .filter(|m| m.rank() == n)
        .collect()
}

fn brute_equivalent(gn: &[Matrix], gp: &[Matrix], a: &MatrixFamily, b: &MatrixFamily) -> bool {
    gn.iter().any(|p| {
        let pa: Vec<Matrix> = a.matrices().iter().map(|m| p * m).collect();
        gp.iter().any(|q| pa.iter().zip(b.matrices()).all(|(m, bi)| &(m * q) == bi))
    })
}

#[test]
fn embedding_examples() {
    let f = Field::rationals();
    let one = rows(&f, 1, 1, vec![Matrix::from_ints(&f, &[[1]])]);
    let (c, d) = embed_equiv_as_sim(&one, &one).unwrap();
    assert_eq!(c, d);
    assert_eq!(c.family.labels(), ["1", MARKER_LABEL]);
    assert_eq!(c.family.matrices()[0], Matrix::from_ints(&f, &[[0, 1], [0, 0]]));
    assert_eq!(c.family.matrices()[1], Matrix::from_ints(&f, &[[1, 0], [0, 0]]));

    let empty = rows(&f, 2, 3, vec![]);
    let (c, _) = embed_equiv_as_sim(&empty, &empty).unwrap();
    assert_eq!(c.family.len(), 1);
    assert_eq!(c.family.matrices()[0], BridgedFamily::marker(&f, 2, 3));

    let f2 = Field::prime(2).unwrap();
    let a = rows(&f2, 1, 2, vec![Matrix::from_ints(&f2, &[[1, 0]])]);
    let b = rows(&f2, 1, 2, vec![Matrix::from_ints(&f2, &[[0, 1]])]);
    let (c, d) = embed_equiv_as_sim(&a, &b).unwrap();
    assert_eq!(c.family.matrices()[0], Matrix::from_ints(&f2, &[[0, 1, 0], [0, 0, 0], [0, 0, 0]]));
    assert_eq!(d.family.matrices()[0], Matrix::from_ints(&f2, &[[0, 0, 1], [0, 0, 0], [0, 0, 0]]));
    let marker = &c.family.matrices()[1];
    assert_eq!(&(marker * marker), marker);
    assert_eq!(marker.rank(), 1);

    let wide = rows(&f2, 2, 1, vec![Matrix::from_ints(&f2, &[[1], [0]])]);
    assert!(embed_equiv_as_sim(&a, &wide).is_err());
}

#[test]
fn extraction_examples() {
    let f = Field::rationals();
    let (p, q) = extract_equiv_certificate(&Matrix::identity(&f, 3), 1, 2).unwrap();
    assert_eq!((p, q), (Matrix::identity(&f, 1), Matrix::identity(&f, 2)));
    let r = Matrix::from_ints(&f, &[[2, 0], [0, 3]]);
    let (p, q) = extract_equiv_certificate(&r, 1, 1).unwrap();
    assert_eq!((p, q), (Matrix::from_ints(&f, &[[2]]), Matrix::from_ints(&f, &[[3]])));
    let mixed = Matrix::from_ints(&f, &[[1, 1], [0, 1]]);
    assert!(matches!(extract_equiv_certificate(&mixed, 1, 1), Err(Error::Precondition(_))));
}

#[test]
fn round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for f in [Field::prime(3).unwrap(), Field::galois(2, 2).unwrap(), Field::rationals()] {
        for _ in 0..30 {
            let (n, p) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let pm = random::invertible(&f, n, &mut rng);
            let qm = random::invertible(&f, p, &mut rng);
            let r = bridge_certificate(&pm, &qm).unwrap();
            let cert = certificate_from_bridge(&r, n, p).unwrap();
            assert_eq!((cert.p, cert.q), (pm.clone(), qm.clone()));
            let a = rows(&f, n, p, vec![random::matrix(&f, n, p, &mut rng)]);
            let b = a.transform(&pm, &qm).unwrap();
            let (c, d) = embed_equiv_as_sim(&a, &b).unwrap();
            assert!(crate::intertwine::verify_similarity(&c.family, &d.family, &r));
        }
    }
}

#[test]
fn decide_examples() {
    let f = Field::prime(2).unwrap();
    let z = rows(&f, 1, 1, vec![Matrix::from_ints(&f, &[[0]])]);
    let o = rows(&f, 1, 1, vec![Matrix::from_ints(&f, &[[1]])]);
    assert!(decide_equivalence(&z, &o).unwrap().is_none());

    let a = rows(&f, 1, 2, vec![Matrix::from_ints(&f, &[[1, 0]])]);
    let b = rows(&f, 1, 2, vec![Matrix::from_ints(&f, &[[0, 1]])]);
    let cert = decide_equivalence(&a, &b).unwrap().unwrap();
    assert_eq!(cert.p, Matrix::identity(&f, 1));
    assert!(verify_equivalence(&a, &b, &cert.p, &cert.q));
    let swaps: Vec<Matrix> = general_linear(&f, 2)
        .into_iter()
        .filter(|q| (&a.matrices()[0] * q) == b.matrices()[0])
        .collect();
    assert!(swaps.contains(&cert.q));

    let c = rows(&f, 2, 2, vec![Matrix::from_ints(&f, &[[1, 1], [0, 1]])]);
    let cert = decide_equivalence(&c, &c).unwrap().unwrap();
    assert!(verify_equivalence(&c, &c, &cert.p, &cert.q));
}

fn sample_pair(f: &Field, n: usize, p: usize, rng: &mut impl Rng) -> (MatrixFamily, MatrixFamily) {
    let len = rng.gen_range(1..=2);
    if rng.gen_bool(0.5) {
        return random::equivalent_pair(f, n, p, len, rng);
    }
    let a = rows(f, n, p, (0..len).map(|_| random::matrix(f, n, p, rng)).collect());
    let b = rows(f, n, p, (0..len).map(|_| random::low_rank(f, n, p, rng.gen_range(0..=n.min(p)), rng)).collect());
    (a, b)
}

#[test]
fn bridged_decision_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for f in [Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
        let groups = [general_linear(&f, 1), general_linear(&f, 2)];
        let (mut yes, mut no) = (0, 0);
        for _ in 0..100 {
            let (n, p) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let (a, b) = sample_pair(&f, n, p, &mut rng);
            let expected = brute_equivalent(&groups[n - 1], &groups[p - 1], &a, &b);
            let got = decide_equivalence(&a, &b).unwrap();
            assert_eq!(got.is_some(), expected, "{a:?} vs {b:?}");
            match got {
                Some(c) => {
                    assert!(verify_equivalence(&a, &b, &c.p, &c.q));
                    yes += 1;
                }
                None => no += 1,
            }
        }
        assert!(yes > 20 && no > 20);
    }
}

#[test]
fn verdict_is_stable_under_field_extension() {
    let f2 = Field::prime(2).unwrap();
    let f4 = Field::galois(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..80 {
        let (n, p) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (a, b) = sample_pair(&f2, n, p, &mut rng);
        let base = decide_equivalence(&a, &b).unwrap().is_some();
        let up = decide_equivalence(&a.include_into(&f4).unwrap(), &b.include_into(&f4).unwrap()).unwrap();
        assert_eq!(up.is_some(), base);
    }
}

#[test]
fn equivalence_descends() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let pairs = [
        (Field::prime(2).unwrap(), Field::galois(2, 2).unwrap()),
        (Field::prime(2).unwrap(), Field::galois(2, 3).unwrap()),
        (Field::prime(3).unwrap(), Field::galois(3, 2).unwrap()),
        (Field::rationals(), Field::quadratic_rational(2).unwrap()),
    ];
    for (k, l) in &pairs {
        for _ in 0..15 {
            let (n, p) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
            let len = rng.gen_range(1..=2);
            let (a, b) = random::equivalent_pair(k, n, p, len, &mut rng);
            let (al, bl) = (a.include_into(l).unwrap(), b.include_into(l).unwrap());
            let up = decide_equivalence(&al, &bl).unwrap().unwrap();
            let lambda = loop {
                let x = l.random(&mut rng);
                if !l.is_zero(&x) {
                    break x;
                }
            };
            let pl = up.p.scale(&lambda);
            let ql = up.q.scale(&l.inv(&lambda).unwrap());
            assert!(verify_equivalence(&al, &bl, &pl, &ql));
            let down = descend_equivalence(&pl, &ql, &a, &b).unwrap();
            assert_eq!(&down.field, k);
            assert!(verify_equivalence(&a, &b, &down.p, &down.q));
        }
    }
}
