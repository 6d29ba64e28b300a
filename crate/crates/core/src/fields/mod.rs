//! Exact fields: the rationals, prime fields and towers of simple
//! extensions `base[t]/(f)`.
//!
//! A [`Field`] is a cheap, shareable descriptor. Elements ([`Elem`]) are
//! plain values that do not carry their field; every operation goes through
//! the descriptor. The checked wrapper [`FieldElement`] pairs the two for
//! callers that want descriptor-mismatch errors instead of panics.
//!
//! Finite fields (prime or extension) code an element by its index in the
//! deterministic enumeration order: for an extension of degree `d` over a
//! base with `q` elements the coefficient list `(c0, .., c_{d-1})` has index
//! `idx(c0) + idx(c1)·q + ... + idx(c_{d-1})·q^{d-1}`. Extensions of ℚ store
//! explicit coefficient lists.

mod element;
mod embed;
pub mod poly;
mod quadratic;
mod tables;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use tables::Tables;

pub use element::FieldElement;
pub use embed::{compositum_embed, EmbeddingMap};
pub use poly::find_root;
pub use quadratic::{build_quadratic_tower, QuadraticExtension};

/// Largest finite extension field we are willing to tabulate.
pub const MAX_FINITE_ORDER: u64 = 1 << 16;

/// A field element value. Which variant is valid depends on the field:
/// `Rat` for ℚ, `Fin` for any finite field, `Poly` for extensions of ℚ.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Elem {
    Rat(BigRational),
    Fin(u64),
    Poly(Vec<Elem>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
    /// `base[t]/(modulus)`; the modulus is monic, little-endian.
    Extension { base: Field, modulus: Vec<Elem> },
}

struct Inner {
    kind: FieldKind,
    characteristic: u64,
    order: Option<u64>,
    abs_degree: usize,
    tables: Option<Tables>,
}

/// Field descriptor. Clones share the same allocation.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
            FieldKind::Extension { base, modulus } => {
                let terms: Vec<String> = modulus
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !base.is_zero(c))
                    .map(|(i, c)| {
                        let c = base.format(c);
                        match i {
                            0 => c,
                            1 if c == "1" => "t".to_string(),
                            1 => format!("({c})t"),
                            _ if c == "1" => format!("t^{i}"),
                            _ => format!("({c})t^{i}"),
                        }
                    })
                    .collect();
                write!(f, "{base}[t]/({})", terms.join("+"))
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    fn from_inner(inner: Inner) -> Self {
        Field(Arc::new(inner))
    }

    pub fn rationals() -> Self {
        Self::from_inner(Inner {
            kind: FieldKind::Rationals,
            characteristic: 0,
            order: None,
            abs_degree: 1,
            tables: None,
        })
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Self::from_inner(Inner {
            kind: FieldKind::Prime(p),
            characteristic: p,
            order: Some(p),
            abs_degree: 1,
            tables: None,
        }))
    }

    /// Builds `base[t]/(modulus)`, rejecting non-monic or reducible moduli.
    ///
    /// Irreducibility is decided by exhaustive search, so finite bases are
    /// limited to desk-scale sizes and ℚ to moduli of degree at most two.
    pub fn extension(base: &Field, modulus: Vec<Elem>) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree at least 1".into()));
        }
        for c in &modulus {
            base.check(c)?;
        }
        if !base.is_one(modulus.last().unwrap()) {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let degree = modulus.len() - 1;
        if base.characteristic() == 0 {
            if base.base().is_some() {
                return Err(Error::Unsupported("extensions of extensions of Q".into()));
            }
            if degree > 2 {
                return Err(Error::Unsupported("extensions of Q of degree above 2".into()));
            }
        }
        if !poly::is_irreducible(base, &modulus)? {
            return Err(Error::Reducible);
        }
        let (order, tables) = match base.order() {
            None => (None, None),
            Some(qb) => {
                let q = qb
                    .checked_pow(degree as u32)
                    .filter(|&q| q <= MAX_FINITE_ORDER)
                    .ok_or_else(|| {
                        Error::Unsupported(format!("finite fields above {MAX_FINITE_ORDER} elements"))
                    })?;
                let p = base.characteristic();
                let digits = (base.absolute_degree() * degree) as u32;
                let tables = Tables::build(p, digits, q, |a, b| {
                    let prod = poly::mul(base, &decode(a, qb, degree), &decode(b, qb, degree));
                    match encode(&reduce_monic(base, prod, &modulus), qb) {
                        Elem::Fin(i) => i,
                        _ => unreachable!(),
                    }
                })?;
                (Some(q), Some(tables))
            }
        };
        Ok(Self::from_inner(Inner {
            characteristic: base.characteristic(),
            order,
            abs_degree: base.absolute_degree() * degree,
            tables,
            kind: FieldKind::Extension { base: base.clone(), modulus },
        }))
    }

    /// `F_{p^k}` as a single extension of `F_p` by the first irreducible
    /// monic polynomial of degree `k` in enumeration order.
    pub fn galois(p: u64, k: usize) -> Result<Self> {
        let fp = Field::prime(p)?;
        if k <= 1 {
            return Ok(fp);
        }
        let modulus = poly::first_irreducible(&fp, k, false)?;
        Field::extension(&fp, modulus)
    }

    /// `ℚ[t]/(t² - d)` for a non-square rational `d`.
    pub fn quadratic_rational(d: i64) -> Result<Self> {
        let q = Field::rationals();
        let modulus = vec![q.from_i64(-d), q.zero(), q.one()];
        Field::extension(&q, modulus)
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    /// 0 for ℚ and its extensions.
    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        self.0.order
    }

    pub fn is_finite(&self) -> bool {
        self.0.order.is_some()
    }

    /// Degree over the immediate base (1 for ℚ and prime fields).
    pub fn degree(&self) -> usize {
        match &self.0.kind {
            FieldKind::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        self.0.abs_degree
    }

    pub fn base(&self) -> Option<&Field> {
        match &self.0.kind {
            FieldKind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&[Elem]> {
        match &self.0.kind {
            FieldKind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// The field at the bottom of the tower.
    pub fn prime_field(&self) -> Field {
        let mut f = self.clone();
        while let Some(b) = f.base() {
            f = b.clone();
        }
        f
    }

    /// True when `self` occurs in the tower of `other` (including `other` itself).
    pub fn is_subfield_of(&self, other: &Field) -> bool {
        let mut f = Some(other);
        while let Some(g) = f {
            if g == self {
                return true;
            }
            f = g.base();
        }
        false
    }

    /// Degree of `self` over a field in its tower.
    pub fn degree_over(&self, sub: &Field) -> Result<usize> {
        let mut f = self;
        let mut d = 1;
        while f != sub {
            d *= f.degree();
            f = f.base().ok_or_else(|| not_in_tower(sub, self))?;
        }
        Ok(d)
    }

    fn tables(&self) -> &Tables {
        self.0.tables.as_ref().expect("finite extension without tables")
    }

    fn base_order(&self) -> u64 {
        self.base().and_then(Field::order).expect("finite extension")
    }

    pub fn zero(&self) -> Elem {
        self.from_i64(0)
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match &self.0.kind {
            FieldKind::Rationals => Elem::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Prime(p) => Elem::Fin(v.rem_euclid(*p as i64) as u64),
            FieldKind::Extension { base, .. } => match base.from_i64(v) {
                Elem::Fin(i) => Elem::Fin(i),
                c => {
                    let mut coeffs = vec![base.zero(); self.degree()];
                    coeffs[0] = c;
                    Elem::Poly(coeffs)
                }
            },
        }
    }

    pub fn rational(&self, num: i64, den: i64) -> Result<Elem> {
        match &self.0.kind {
            FieldKind::Rationals if den != 0 => Ok(Elem::Rat(BigRational::new(num.into(), den.into()))),
            _ => self.div(&self.from_i64(num), &self.from_i64(den)),
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(x) => x.is_zero(),
            Elem::Fin(i) => *i == 0,
            Elem::Poly(c) => {
                let base = self.base().expect("polynomial element over a base field");
                c.iter().all(|x| base.is_zero(x))
            }
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (FieldKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (FieldKind::Prime(p), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(((*x as u128 + *y as u128) % *p as u128) as u64),
            (FieldKind::Extension { .. }, Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(self.tables().add(*x, *y)),
            (FieldKind::Extension { base, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            _ => mismatch(self, a),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.0.kind, a) {
            (FieldKind::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldKind::Prime(p), Elem::Fin(x)) => Elem::Fin((p - x % p) % p),
            (FieldKind::Extension { .. }, Elem::Fin(x)) => Elem::Fin(self.tables().neg(*x)),
            (FieldKind::Extension { base, .. }, Elem::Poly(x)) => Elem::Poly(x.iter().map(|u| base.neg(u)).collect()),
            _ => mismatch(self, a),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (FieldKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x - y),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (FieldKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (FieldKind::Prime(p), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(((*x as u128 * *y as u128) % *p as u128) as u64),
            (FieldKind::Extension { .. }, Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(self.tables().mul(*x, *y)),
            (FieldKind::Extension { base, modulus }, Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(reduce_monic(base, poly::mul(base, x, y), modulus))
            }
            _ => mismatch(self, a),
        }
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (&self.0.kind, a) {
            (FieldKind::Rationals, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (FieldKind::Prime(p), Elem::Fin(x)) => Elem::Fin(pow_mod(*x, p - 2, *p)),
            (FieldKind::Extension { .. }, Elem::Fin(x)) => Elem::Fin(self.tables().inv(*x)?),
            (FieldKind::Extension { base, modulus }, Elem::Poly(x)) => {
                let (g, s, _) = poly::xgcd(base, x, modulus);
                // g is a nonzero constant since the modulus is irreducible
                let ginv = base.inv(&g[0])?;
                let mut s = poly::scale(base, &s, &ginv);
                s.resize(self.degree(), base.zero());
                Elem::Poly(s)
            }
            _ => mismatch(self, a),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a.clone(), self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Coefficients over the immediate base (`degree()` entries). For ℚ and
    /// prime fields this is the element itself.
    pub fn coefficients(&self, a: &Elem) -> Vec<Elem> {
        match (&self.0.kind, a) {
            (FieldKind::Extension { .. }, Elem::Fin(i)) => decode(*i, self.base_order(), self.degree()),
            (FieldKind::Extension { .. }, Elem::Poly(c)) => c.clone(),
            _ => vec![a.clone()],
        }
    }

    /// Inverse of [`Field::coefficients`]; shorter lists are zero-padded,
    /// longer ones are reduced modulo the defining polynomial.
    pub fn from_coefficients(&self, coeffs: Vec<Elem>) -> Elem {
        match &self.0.kind {
            FieldKind::Extension { base, modulus } => {
                let c = reduce_monic(base, coeffs, modulus);
                if self.is_finite() {
                    encode(&c, self.base_order())
                } else {
                    Elem::Poly(c)
                }
            }
            _ => coeffs.into_iter().next().unwrap_or_else(|| self.zero()),
        }
    }

    /// The class of `t` in `base[t]/(f)`.
    pub fn generator(&self) -> Elem {
        match self.base() {
            Some(base) => self.from_coefficients(vec![base.zero(), base.one()]),
            None => self.one(),
        }
    }

    /// Element with the given index in the enumeration order.
    pub fn element(&self, index: u64) -> Elem {
        debug_assert!(self.order().is_some_and(|q| index < q));
        Elem::Fin(index)
    }

    pub fn index_of(&self, a: &Elem) -> Option<u64> {
        match a {
            Elem::Fin(i) if self.is_finite() => Some(*i),
            _ => None,
        }
    }

    /// All elements in enumeration order (finite fields only).
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order().unwrap_or(0)).map(Elem::Fin)
    }

    /// Canonical image of an element of a subfield in the tower.
    pub fn include(&self, a: &Elem, sub: &Field) -> Result<Elem> {
        if self == sub {
            return Ok(a.clone());
        }
        let base = self.base().ok_or_else(|| not_in_tower(sub, self))?;
        let c = base.include(a, sub)?;
        Ok(match c {
            Elem::Fin(i) => Elem::Fin(i),
            c => {
                let mut coeffs = vec![base.zero(); self.degree()];
                coeffs[0] = c;
                Elem::Poly(coeffs)
            }
        })
    }

    /// Coordinates of `a` over a subfield, in the tower basis
    /// `t_top^i · (basis of the level below)`; length `degree_over(sub)`.
    pub fn coordinates_over(&self, a: &Elem, sub: &Field) -> Result<Vec<Elem>> {
        if self == sub {
            return Ok(vec![a.clone()]);
        }
        let base = self.base().ok_or_else(|| not_in_tower(sub, self))?;
        let mut out = Vec::with_capacity(self.degree_over(sub)?);
        for c in self.coefficients(a) {
            out.extend(base.coordinates_over(&c, sub)?);
        }
        Ok(out)
    }

    /// Checks that `a` is a well-formed element of this field.
    pub fn check(&self, a: &Elem) -> Result<()> {
        let ok = match (&self.0.kind, a) {
            (FieldKind::Rationals, Elem::Rat(x)) => x.denom().is_positive() && x.numer().gcd(x.denom()).is_one(),
            (FieldKind::Prime(p), Elem::Fin(x)) => x < p,
            (FieldKind::Extension { .. }, Elem::Fin(x)) => self.order().is_some_and(|q| *x < q),
            (FieldKind::Extension { base, .. }, Elem::Poly(c)) if !self.is_finite() => {
                c.len() == self.degree() && c.iter().all(|x| base.check(x).is_ok())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidElement(format!("{a:?} is not an element of {self}")))
        }
    }

    /// Uniform over finite fields; small numerators and denominators over ℚ.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &self.0.kind {
            FieldKind::Rationals => {
                let num: i64 = rng.gen_range(-4..=4);
                let den: i64 = if rng.gen_bool(0.75) { 1 } else { rng.gen_range(2..=3) };
                Elem::Rat(BigRational::new(num.into(), den.into()))
            }
            _ if self.is_finite() => Elem::Fin(rng.gen_range(0..self.order().unwrap())),
            FieldKind::Extension { base, .. } => Elem::Poly((0..self.degree()).map(|_| base.random(rng)).collect()),
            FieldKind::Prime(_) => unreachable!(),
        }
    }

    /// Human-readable rendering, used by displays and the CLI.
    pub fn format(&self, a: &Elem) -> String {
        match (&self.0.kind, a) {
            (FieldKind::Rationals, Elem::Rat(x)) => x.to_string(),
            (FieldKind::Prime(_), Elem::Fin(x)) => x.to_string(),
            (FieldKind::Extension { base, .. }, _) => {
                let coeffs = self.coefficients(a);
                if coeffs[1..].iter().all(|c| base.is_zero(c)) {
                    return base.format(&coeffs[0]);
                }
                let parts: Vec<String> = coeffs.iter().map(|c| base.format(c)).collect();
                format!("[{}]", parts.join(","))
            }
            _ => format!("{a:?}"),
        }
    }
}

fn mismatch(field: &Field, a: &Elem) -> ! {
    panic!("element {a:?} does not belong to {field}")
}

fn not_in_tower(sub: &Field, f: &Field) -> Error {
    Error::FieldMismatch(format!("{sub} is not a subfield in the tower of {f}"))
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let (m, mut b, mut acc) = (m as u128, b as u128 % m as u128, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

fn decode(mut idx: u64, qb: u64, degree: usize) -> Vec<Elem> {
    (0..degree)
        .map(|_| {
            let c = idx % qb;
            idx /= qb;
            Elem::Fin(c)
        })
        .collect()
}

fn encode(coeffs: &[Elem], qb: u64) -> Elem {
    let mut idx = 0u64;
    for c in coeffs.iter().rev() {
        match c {
            Elem::Fin(i) => idx = idx * qb + i,
            _ => unreachable!("finite tower with non-finite coefficient"),
        }
    }
    Elem::Fin(idx)
}

/// Reduces a coefficient list modulo a monic polynomial; the result has
/// exactly `deg(modulus)` entries.
fn reduce_monic(base: &Field, mut c: Vec<Elem>, modulus: &[Elem]) -> Vec<Elem> {
    let d = modulus.len() - 1;
    while c.len() > d {
        let lead = c.pop().unwrap();
        if base.is_zero(&lead) {
            continue;
        }
        let shift = c.len() - d;
        for (i, m) in modulus[..d].iter().enumerate() {
            c[shift + i] = base.sub(&c[shift + i], &base.mul(&lead, m));
        }
    }
    c.resize(d, base.zero());
    c
}
