use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::fields::{Elem, Field, FieldKind};

/// Reduced row echelon form with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct RowEchelon {
    pub rref: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    /// Exact RREF. Pivots are the first nonzero entry of each column, scanning
    /// rows top-down, so results are reproducible.
    pub fn row_reduce(&self) -> RowEchelon {
        match self.field().kind() {
            FieldKind::Rationals => fraction_free(self),
            _ => gauss(self),
        }
    }

    /// Plain Gauss-Jordan elimination with field division, whatever the field.
    pub fn row_reduce_gauss(&self) -> RowEchelon {
        gauss(self)
    }
}

fn gauss(m: &Matrix) -> RowEchelon {
    let f = m.field().clone();
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&a[(i, c)])) else {
            continue;
        };
        swap_rows(&mut a, r, pr);
        let inv = f.inv(&a[(r, c)]).expect("nonzero pivot");
        for j in c..cols {
            a[(r, j)] = f.mul(&a[(r, j)], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[(i, c)]) {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                let t = f.mul(&factor, &a[(r, j)]);
                a[(i, j)] = f.sub(&a[(i, j)], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    RowEchelon { rref: a, rank: r, pivots }
}

fn swap_rows(a: &mut Matrix, i: usize, j: usize) {
    if i != j {
        for c in 0..a.cols() {
            let t = a[(i, c)].clone();
            a[(i, c)] = std::mem::replace(&mut a[(j, c)], t);
        }
    }
}

fn rat(e: &Elem) -> &BigRational {
    match e {
        Elem::Rat(r) => r,
        _ => unreachable!("rational matrix holds rational entries"),
    }
}

/// Bareiss forward elimination on integer-scaled rows, then rational
/// back-substitution on the (few) pivot rows.
fn fraction_free(m: &Matrix) -> RowEchelon {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, e| acc.lcm(rat(e).denom()));
            row.iter().map(|e| rat(e).numer() * (&lcm / rat(e).denom())).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let rank = r;
    let mut q: Vec<Vec<BigRational>> = a
        .into_iter()
        .take(rank)
        .zip(&pivots)
        .map(|(row, &pc)| {
            let mut piv = row[pc].clone();
            let mut row = row;
            if piv.is_negative() {
                piv = -piv;
                row.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            row.into_iter().map(|x| BigRational::new(x, piv.clone())).collect()
        })
        .collect();
    for k in (0..rank).rev() {
        let pc = pivots[k];
        for i in 0..k {
            if q[i][pc].is_zero() {
                continue;
            }
            let factor = q[i][pc].clone();
            #[allow(clippy::needless_range_loop)]
            for j in pc..cols {
                if !q[k][j].is_zero() {
                    let t = &factor * &q[k][j];
                    q[i][j] -= t;
                }
            }
        }
    }
    let f = m.field();
    let mut rref = Matrix::zeros(f, rows, cols);
    for (i, row) in q.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            rref[(i, j)] = Elem::Rat(x);
        }
    }
    RowEchelon { rref, rank, pivots }
}

pub(super) fn determinant(m: &Matrix) -> Elem {
    let f = m.field().clone();
    let n = m.rows();
    let mut a = m.clone();
    let mut det = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(&a[(i, c)])) else {
            return f.zero();
        };
        if pr != c {
            swap_rows(&mut a, c, pr);
            det = f.neg(&det);
        }
        let p = a[(c, c)].clone();
        det = f.mul(&det, &p);
        let inv = f.inv(&p).expect("nonzero pivot");
        for i in c + 1..n {
            if f.is_zero(&a[(i, c)]) {
                continue;
            }
            let factor = f.mul(&a[(i, c)], &inv);
            for j in c..n {
                let t = f.mul(&factor, &a[(c, j)]);
                a[(i, j)] = f.sub(&a[(i, j)], &t);
            }
        }
    }
    det
}

/// Incrementally built row echelon basis. Rows are stored normalized at
/// their pivot and reduced against every earlier row, so a vector is
/// reduced by one pass in insertion order.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    field: Field,
    rows: Vec<(usize, Vec<Elem>)>,
}

impl Echelon {
    pub fn new(field: &Field) -> Self {
        Echelon { field: field.clone(), rows: Vec::new() }
    }

    pub fn seeded<'a>(field: &Field, vectors: impl IntoIterator<Item = &'a Vec<Elem>>) -> Self {
        let mut e = Self::new(field);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` if it is independent of the stored rows; reports whether it was.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let f = &self.field;
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero pivot");
        r.iter_mut().for_each(|x| *x = f.mul(x, &inv));
        self.rows.push((p, r));
        true
    }
}
