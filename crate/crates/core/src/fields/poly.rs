//! Dense univariate polynomials over a [`Field`], as little-endian
//! coefficient lists. Only what the field tower and the searches need.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::{Elem, Field, FieldKind};
use crate::error::{Error, Result};

/// Caps the number of candidate factors tried by the trial-division test.
const MAX_TRIAL_FACTORS: u64 = 1 << 20;

pub fn trim(f: &Field, p: &mut Vec<Elem>) {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
}

/// `None` for the zero polynomial.
pub fn degree(f: &Field, p: &[Elem]) -> Option<usize> {
    p.iter().rposition(|c| !f.is_zero(c))
}

pub fn add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let mut out: Vec<Elem> = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, &mut out);
    out
}

pub fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let nb: Vec<Elem> = b.iter().map(|c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

pub fn scale(f: &Field, a: &[Elem], s: &Elem) -> Vec<Elem> {
    let mut out: Vec<Elem> = a.iter().map(|c| f.mul(c, s)).collect();
    trim(f, &mut out);
    out
}

pub fn eval(f: &Field, p: &[Elem], x: &Elem) -> Elem {
    p.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative(f: &Field, p: &[Elem]) -> Vec<Elem> {
    let mut out: Vec<Elem> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
        .collect();
    trim(f, &mut out);
    out
}

/// Quotient and remainder; the divisor must be nonzero.
pub fn divrem(f: &Field, a: &[Elem], b: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let db = degree(f, b).ok_or(Error::DivisionByZero)?;
    let lead_inv = f.inv(&b[db]).ok_or(Error::DivisionByZero)?;
    let mut r: Vec<Elem> = a.to_vec();
    trim(f, &mut r);
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![f.zero(); r.len() - db];
    while let Some(dr) = degree(f, &r).filter(|&d| d >= db) {
        let c = f.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b[..=db].iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, bc));
        }
        q[shift] = c;
        trim(f, &mut r);
    }
    trim(f, &mut q);
    Ok((q, r))
}

/// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic
/// (or zero when both inputs vanish).
pub fn xgcd(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>, Vec<Elem>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(f, &mut r0);
    trim(f, &mut r1);
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1).expect("nonzero divisor");
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(d) = degree(f, &r0) {
        let inv = f.inv(&r0[d]).expect("nonzero leading coefficient");
        return (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv));
    }
    (r0, s0, t0)
}

/// Monic polynomials of a fixed degree over a finite field, in enumeration
/// order (constant coefficient varying fastest).
pub fn monic_polys(f: &Field, degree: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let q = f.order().expect("finite field");
    let count = q.checked_pow(degree as u32).unwrap_or(u64::MAX);
    (0..count).map(move |mut idx| {
        let mut p: Vec<Elem> = (0..degree)
            .map(|_| {
                let c = idx % q;
                idx /= q;
                f.element(c)
            })
            .collect();
        p.push(f.one());
        p
    })
}

/// Exhaustive irreducibility test: root search up to degree 3, trial
/// division by every monic polynomial of degree at most `deg/2` beyond.
pub fn is_irreducible(f: &Field, p: &[Elem]) -> Result<bool> {
    let d = degree(f, p).ok_or_else(|| Error::InvalidField("zero polynomial".into()))?;
    if d == 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    match f.kind() {
        FieldKind::Rationals if d == 2 => Ok(find_root(f, p)?.is_none()),
        _ if !f.is_finite() => Err(Error::Unsupported(format!("irreducibility of degree {d} over {f}"))),
        _ if d <= 3 => Ok(find_root(f, p)?.is_none()),
        _ => {
            let q = f.order().unwrap();
            let work: u64 = (1..=d / 2).map(|k| q.saturating_pow(k as u32)).sum();
            if work > MAX_TRIAL_FACTORS {
                return Err(Error::Unsupported(format!("trial factoring degree {d} over {f}")));
            }
            for k in 1..=d / 2 {
                for g in monic_polys(f, k) {
                    let (_, r) = divrem(f, p, &g)?;
                    if r.is_empty() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// First monic irreducible polynomial of the given degree in enumeration
/// order, optionally also requiring separability (`gcd(p, p') = 1`).
pub fn first_irreducible(f: &Field, degree: usize, separable: bool) -> Result<Vec<Elem>> {
    for p in monic_polys(f, degree) {
        if is_irreducible(f, &p)? && (!separable || is_separable(f, &p)) {
            return Ok(p);
        }
    }
    Err(Error::InvariantViolation(format!("no irreducible polynomial of degree {degree} over {f}")))
}

pub fn is_separable(f: &Field, p: &[Elem]) -> bool {
    let (g, _, _) = xgcd(f, p, &derivative(f, p));
    degree(f, &g) == Some(0)
}

/// A root of `p` in `f`, if any.
///
/// Finite fields are scanned in enumeration order, so the answer is the
/// first root in that order. Over ℚ, degrees up to two are solved in closed
/// form (the smaller root is returned). Degree at most one works anywhere.
pub fn find_root(f: &Field, p: &[Elem]) -> Result<Option<Elem>> {
    let Some(d) = degree(f, p) else {
        return Ok(Some(f.zero()));
    };
    if d == 0 {
        return Ok(None);
    }
    if f.is_finite() {
        return Ok(f.elements().find(|x| f.is_zero(&eval(f, p, x))));
    }
    if d == 1 {
        return Ok(Some(f.neg(&f.div(&p[0], &p[1])?)));
    }
    match (f.kind(), &p[..=d]) {
        (FieldKind::Rationals, [Elem::Rat(c), Elem::Rat(b), Elem::Rat(a)]) if d == 2 => {
            let disc = b * b - BigRational::from_integer(4.into()) * a * c;
            let Some(s) = rational_sqrt(&disc) else {
                return Ok(None);
            };
            let two_a = BigRational::from_integer(2.into()) * a;
            let r1 = (-b - &s) / &two_a;
            let r2 = (-b + &s) / &two_a;
            Ok(Some(Elem::Rat(r1.min(r2))))
        }
        _ => Err(Error::Unsupported(format!("root finding for degree {d} over {f}"))),
    }
}

pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let exact = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(exact(x.numer())?, exact(x.denom())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_search_follows_enumeration_order() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::galois(2, 2).unwrap();
        let t2t1 = |f: &Field| vec![f.one(), f.one(), f.one()];
        assert_eq!(find_root(&f2, &t2t1(&f2)).unwrap(), None);
        // roots in F4 are t and t+1; t comes first
        assert_eq!(find_root(&f4, &t2t1(&f4)).unwrap(), Some(f4.generator()));
        let q = Field::rationals();
        for f in [&f2, &f4, &q] {
            let linear = vec![f.neg(&f.one()), f.one()];
            assert_eq!(find_root(f, &linear).unwrap(), Some(f.one()));
        }
    }

    #[test]
    fn rational_quadratics() {
        let q = Field::rationals();
        // t^2 - 2 has no rational root, t^2 - 1/4 has ±1/2
        assert_eq!(find_root(&q, &[q.from_i64(-2), q.zero(), q.one()]).unwrap(), None);
        let r = find_root(&q, &[q.rational(-1, 4).unwrap(), q.zero(), q.one()]).unwrap();
        assert_eq!(r, Some(q.rational(-1, 2).unwrap()));
        let cubic = [q.one(), q.zero(), q.zero(), q.one()];
        assert!(matches!(find_root(&q, &cubic), Err(Error::Unsupported(_))));
    }

    #[test]
    fn divrem_reconstructs() {
        let f = Field::prime(5).unwrap();
        let a: Vec<Elem> = [3, 1, 4, 1, 2].iter().map(|&v| f.from_i64(v)).collect();
        let b: Vec<Elem> = [2, 0, 3].iter().map(|&v| f.from_i64(v)).collect();
        let (q, r) = divrem(&f, &a, &b).unwrap();
        assert!(degree(&f, &r).is_none_or(|d| d < 2));
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }

    #[test]
    fn quartic_irreducibility_by_trial_division() {
        let f2 = Field::prime(2).unwrap();
        let p = |v: &[i64]| v.iter().map(|&c| f2.from_i64(c)).collect::<Vec<_>>();
        // t^4 + t + 1 is irreducible; t^4 + t^2 + 1 = (t^2 + t + 1)^2 is not
        assert!(is_irreducible(&f2, &p(&[1, 1, 0, 0, 1])).unwrap());
        assert!(!is_irreducible(&f2, &p(&[1, 0, 1, 0, 1])).unwrap());
    }
}
