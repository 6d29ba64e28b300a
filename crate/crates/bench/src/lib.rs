//! Shared fixtures for the criterion benches.

use kron_core::{random, Field, Matrix, MatrixFamily, Pencil};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Named fields in benchmark order.
pub fn fields() -> Vec<(&'static str, Field)> {
    vec![
        ("F2", Field::prime(2).unwrap()),
        ("F5", Field::prime(5).unwrap()),
        ("F16", Field::galois(2, 4).unwrap()),
        ("Q", Field::rationals()),
    ]
}

pub fn pencils(field: &Field, n: usize, p: usize, count: usize, seed: u64) -> Vec<Pencil> {
    let mut r = rng(seed);
    (0..count).map(|_| random::pencil(field, n, p, &mut r)).collect()
}

pub fn similar_pairs(field: &Field, n: usize, len: usize, count: usize, seed: u64) -> Vec<(MatrixFamily, MatrixFamily)> {
    let mut r = rng(seed);
    (0..count).map(|_| random::similar_pair(field, n, len, &mut r)).collect()
}

/// Similar families over `base` with witnesses over `extension`.
pub fn certified_pairs(
    base: &Field,
    extension: &Field,
    n: usize,
    count: usize,
    seed: u64,
) -> Vec<(MatrixFamily, MatrixFamily, Matrix)> {
    let mut r = rng(seed);
    (0..count).map(|_| random::l_certified_pair(base, extension, n, 2, &mut r).unwrap()).collect()
}
