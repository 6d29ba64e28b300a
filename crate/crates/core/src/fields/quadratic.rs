use super::{poly, Elem, Field};
use crate::error::{violation, Error, Result};

/// A separable degree-two extension `L = K[t]/(t² + b·t + c)` together with
/// its conjugation `σ(t) = -b - t`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticExtension {
    field: Field,
    b: Elem,
    c: Elem,
}

impl QuadraticExtension {
    /// Wraps an existing degree-two extension; fails unless it is separable.
    pub fn new(field: &Field) -> Result<Self> {
        let (Some(base), Some(m)) = (field.base(), field.modulus()) else {
            return Err(Error::Precondition(format!("{field} is not an extension")));
        };
        if m.len() != 3 {
            return Err(Error::Precondition(format!("{field} is not quadratic")));
        }
        let (c, b) = (m[0].clone(), m[1].clone());
        let separable = if base.characteristic() == 2 {
            !base.is_zero(&b)
        } else {
            let disc = base.sub(&base.mul(&b, &b), &base.mul(&base.from_i64(4), &c));
            !base.is_zero(&disc)
        };
        if !separable {
            return Err(Error::Precondition(format!("{field} is not separable")));
        }
        Ok(QuadraticExtension { field: field.clone(), b, c })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn base(&self) -> &Field {
        self.field.base().expect("quadratic extension has a base")
    }

    /// The generator `ε = t`.
    pub fn epsilon(&self) -> Elem {
        self.field.generator()
    }

    /// Coefficients `(x0, x1)` with `x = x0 + x1·ε`.
    pub fn split(&self, x: &Elem) -> (Elem, Elem) {
        let mut c = self.field.coefficients(x).into_iter();
        (c.next().unwrap(), c.next().unwrap())
    }

    /// The non-trivial automorphism fixing the base.
    pub fn conjugate(&self, x: &Elem) -> Result<Elem> {
        self.field.check(x)?;
        let k = self.base();
        let (x0, x1) = self.split(x);
        // σ(x0 + x1 t) = x0 + x1(-b - t)
        let c0 = k.sub(&x0, &k.mul(&x1, &self.b));
        Ok(self.field.from_coefficients(vec![c0, k.neg(&x1)]))
    }

    /// The constant term of the modulus.
    pub fn norm_constant(&self) -> &Elem {
        &self.c
    }
}

/// Tower `K ⊂ K_1 ⊂ … ⊂ K_N` of separable quadratic extensions with `N`
/// minimal such that `|K_N| ≥ n`. Each step uses the first irreducible
/// separable monic quadratic in enumeration order.
pub fn build_quadratic_tower(k: &Field, n: u64) -> Result<Vec<QuadraticExtension>> {
    let mut order = k
        .order()
        .ok_or_else(|| Error::Precondition(format!("{k} is infinite")))?;
    let mut top = k.clone();
    let mut tower = Vec::new();
    while order < n {
        let modulus = poly::first_irreducible(&top, 2, true)
            .map_err(|e| violation(format!("tower step over {top}: {e}")))?;
        let next = Field::extension(&top, modulus)?;
        let step = QuadraticExtension::new(&next).map_err(|e| violation(e.to_string()))?;
        order = next.order().expect("finite");
        tower.push(step);
        top = next;
    }
    Ok(tower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn tower_lengths() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(build_quadratic_tower(&f2, 3).unwrap().len(), 1);
        let t = build_quadratic_tower(&f2, 5).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].field().order(), Some(16));
        assert_eq!(t[0].field().order(), Some(4));
        let f7 = Field::prime(7).unwrap();
        assert!(build_quadratic_tower(&f7, 7).unwrap().is_empty());
        assert!(build_quadratic_tower(&Field::rationals(), 3).is_err());
    }

    #[test]
    fn f4_conjugation() {
        let f2 = Field::prime(2).unwrap();
        let ext = build_quadratic_tower(&f2, 4).unwrap().remove(0);
        let f4 = ext.field().clone();
        let e = ext.epsilon();
        assert_eq!(ext.conjugate(&f4.one()).unwrap(), f4.one());
        let se = ext.conjugate(&e).unwrap();
        assert_eq!(se, f4.add(&e, &f4.one()));
        assert_eq!(ext.conjugate(&se).unwrap(), e);
    }

    #[test]
    fn conjugation_is_an_automorphism_fixing_exactly_the_base() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let exts = [
            build_quadratic_tower(&Field::prime(2).unwrap(), 16).unwrap().pop().unwrap(),
            build_quadratic_tower(&Field::prime(3).unwrap(), 9).unwrap().pop().unwrap(),
            QuadraticExtension::new(&Field::quadratic_rational(2).unwrap()).unwrap(),
        ];
        for ext in &exts {
            let l = ext.field();
            let sigma = |x: &Elem| ext.conjugate(x).unwrap();
            for _ in 0..200 {
                let (x, y) = (l.random(&mut rng), l.random(&mut rng));
                assert_eq!(sigma(&l.mul(&x, &y)), l.mul(&sigma(&x), &sigma(&y)));
                assert_eq!(sigma(&l.add(&x, &y)), l.add(&sigma(&x), &sigma(&y)));
                assert_eq!(sigma(&sigma(&x)), x);
                let fixed = sigma(&x) == x;
                let in_base = ext.base().is_zero(&ext.split(&x).1);
                assert_eq!(fixed, in_base);
            }
        }
    }

    #[test]
    fn inseparable_or_wrong_degree_is_rejected() {
        let f8 = Field::galois(2, 3).unwrap();
        assert!(QuadraticExtension::new(&f8).is_err());
        assert!(QuadraticExtension::new(&Field::prime(5).unwrap()).is_err());
    }
}
