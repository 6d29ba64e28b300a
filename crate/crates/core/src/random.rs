//! Seeded generators for matrices and test instances.

use rand::Rng;

use crate::error::Result;
use crate::fields::Field;
use crate::intertwine::{intertwiner_basis, MatrixFamily};
use crate::matrices::Matrix;

pub fn matrix<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| field.random(rng))
}

/// Uniform-ish invertible matrix by rejection.
pub fn invertible<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Matrix of rank at most `rank`, as a product of thin random factors.
pub fn low_rank<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rank: usize, rng: &mut R) -> Matrix {
    &matrix(field, rows, rank, rng) * &matrix(field, rank, cols, rng)
}

/// A random pencil of the given shape. Each part is full random, of low
/// rank, or built from scrambled canonical blocks, so that every block kind
/// shows up often.
pub fn pencil<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> crate::pencil::Pencil {
    use crate::pencil::{Pencil, PencilBlock};
    let part = |rng: &mut R| match rng.gen_range(0..4) {
        0 => matrix(field, rows, cols, rng),
        1 => Matrix::zeros(field, rows, cols),
        _ => low_rank(field, rows, cols, rng.gen_range(0..=rows.min(cols)), rng),
    };
    if rng.gen_bool(0.4) {
        // assemble blocks until the shape is filled, then scramble
        let mut blocks = Vec::new();
        let (mut r, mut c) = (0, 0);
        while r < rows || c < cols {
            let (dr, dc) = (rows - r, cols - c);
            let blk = match rng.gen_range(0..6) {
                0 if dc > dr && dr > 0 => PencilBlock::SingularRow(rng.gen_range(1..=dr.min(dc - 1))),
                1 if dr > dc && dc > 0 => PencilBlock::SingularCol(rng.gen_range(1..=dc.min(dr - 1))),
                2 if dr > 0 && dc > 0 => PencilBlock::JordanOneX(rng.gen_range(1..=dr.min(dc))),
                3 if dr > 0 && dc > 0 => PencilBlock::JordanXOne(rng.gen_range(1..=dr.min(dc))),
                4 if dr > 0 && dc > 0 => PencilBlock::Regular(invertible(field, rng.gen_range(1..=dr.min(dc)), rng)),
                _ => {
                    let zr = if dr > 0 { rng.gen_range(0..=1.min(dr)) } else { 0 };
                    let zc = if dc > 0 { rng.gen_range(0..=1.min(dc)) } else { 0 };
                    if zr + zc == 0 {
                        continue;
                    }
                    PencilBlock::Zero { rows: zr, cols: zc }
                }
            };
            let (h, w) = blk.shape();
            r += h;
            c += w;
            blocks.push(blk);
        }
        let (a, b): (Vec<Matrix>, Vec<Matrix>) = blocks.iter().map(|blk| blk.render(field)).unzip();
        let core = Pencil::new(Matrix::block_diag(field, &a), Matrix::block_diag(field, &b)).expect("same shape");
        return core.transform(&invertible(field, rows, rng), &invertible(field, cols, rng));
    }
    Pencil::new(part(rng), part(rng)).expect("same shape")
}

/// A family member: full random, low rank or zero, so that intertwiner
/// spaces are not always trivial.
fn member<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    match rng.gen_range(0..5) {
        0 => Matrix::zeros(field, rows, cols),
        1 | 2 => low_rank(field, rows, cols, rng.gen_range(0..=rows.min(cols)), rng),
        _ => matrix(field, rows, cols, rng),
    }
}

fn family<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, len: usize, rng: &mut R) -> MatrixFamily {
    let ms = (0..len).map(|_| member(field, rows, cols, rng)).collect();
    MatrixFamily::from_matrices(field, rows, cols, ms).expect("uniform family")
}

/// `B_i = S·A_i·S⁻¹` for a random invertible `S`.
pub fn similar_pair<R: Rng + ?Sized>(field: &Field, n: usize, len: usize, rng: &mut R) -> (MatrixFamily, MatrixFamily) {
    let a = family(field, n, n, len, rng);
    let s = invertible(field, n, rng);
    let si = s.inverse().expect("square").expect("invertible");
    let b = a.transform(&s, &si).expect("shapes agree");
    (a, b)
}

/// `B_i = P·A_i·Q` for random invertible `P`, `Q`.
pub fn equivalent_pair<R: Rng + ?Sized>(
    field: &Field,
    n: usize,
    p: usize,
    len: usize,
    rng: &mut R,
) -> (MatrixFamily, MatrixFamily) {
    let a = family(field, n, p, len, rng);
    let b = a.transform(&invertible(field, n, rng), &invertible(field, p, rng)).expect("shapes agree");
    (a, b)
}

/// Families over `base` that are similar, with a witness over `extension`:
/// `P = S·Z` where `Z` is a random invertible element of the commutant of
/// the `A_i` over the extension.
pub fn l_certified_pair<R: Rng + ?Sized>(
    base: &Field,
    extension: &Field,
    n: usize,
    len: usize,
    rng: &mut R,
) -> Result<(MatrixFamily, MatrixFamily, Matrix)> {
    let a = family(base, n, n, len, rng);
    let s = invertible(base, n, rng);
    let b = a.transform(&s, &s.inverse()?.expect("invertible"))?;
    let al = a.include_into(extension)?;
    let commutant = intertwiner_basis(&al, &al)?;
    let mut z = Matrix::identity(extension, n);
    for _ in 0..1000 {
        let mut cand = Matrix::zeros(extension, n, n);
        for w in &commutant.basis {
            cand = &cand + &w.scale(&extension.random(rng));
        }
        if cand.is_invertible() {
            z = cand;
            break;
        }
    }
    Ok((a, b, &s.include_into(extension)? * &z))
}
