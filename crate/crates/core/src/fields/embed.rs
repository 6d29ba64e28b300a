use super::{poly, Elem, Field};
use crate::error::{violation, Error, Result};

/// A field homomorphism `source → target`.
///
/// The source tower is walked down to the first field (the anchor) that is
/// also a subfield of the target; below the anchor the map is the canonical
/// inclusion. Each source level above the anchor is fixed by the image of
/// its generator, listed bottom-up in `images`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMap {
    source: Field,
    target: Field,
    anchor: Field,
    images: Vec<Elem>,
}

impl EmbeddingMap {
    /// The canonical inclusion of a subfield of `target`'s tower.
    pub fn inclusion(source: &Field, target: &Field) -> Result<Self> {
        if !source.is_subfield_of(target) {
            return Err(Error::FieldMismatch(format!("{source} is not a subfield of {target}")));
        }
        Ok(EmbeddingMap {
            source: source.clone(),
            target: target.clone(),
            anchor: source.clone(),
            images: Vec::new(),
        })
    }

    /// Finds an embedding by root search: each source modulus, pushed
    /// through the embedding of the level below, must acquire a root in
    /// `target`. The first root in enumeration order is taken.
    pub fn find(source: &Field, target: &Field) -> Result<Self> {
        let mut levels = Vec::new();
        let mut anchor = source.clone();
        while !anchor.is_subfield_of(target) {
            levels.push(anchor.clone());
            anchor = match anchor.base() {
                Some(b) => b.clone(),
                None => {
                    return Err(Error::FieldMismatch(format!("{source} and {target} share no prime field")));
                }
            };
        }
        let mut map = EmbeddingMap {
            source: anchor.clone(),
            target: target.clone(),
            anchor,
            images: Vec::new(),
        };
        for level in levels.into_iter().rev() {
            let modulus = level.modulus().expect("extension level");
            let pushed: Vec<Elem> = modulus.iter().map(|c| map.apply_unchecked(c)).collect();
            let root = poly::find_root(target, &pushed)?
                .ok_or_else(|| violation(format!("modulus of {level} has no root in {target}")))?;
            map.images.push(root);
            map.source = level;
        }
        Ok(map)
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    /// Images of the generators of the source levels above the anchor.
    pub fn generator_images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        self.source.check(x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Elem) -> Elem {
        self.apply_level(&self.source, self.images.len(), x)
    }

    fn apply_level(&self, level: &Field, depth: usize, x: &Elem) -> Elem {
        if depth == 0 {
            return self.target.include(x, level).expect("anchor lies in the target tower");
        }
        let base = level.base().expect("level above the anchor");
        let img = &self.images[depth - 1];
        let t = &self.target;
        level
            .coefficients(x)
            .iter()
            .rev()
            .fold(t.zero(), |acc, c| t.add(&t.mul(&acc, img), &self.apply_level(base, depth - 1, c)))
    }
}

/// A common extension `M` of `top` and `other` with both embeddings.
///
/// For finite fields `M` has absolute degree `lcm(d1, d2)`; it is `top`
/// itself when that suffices, otherwise `top[t]/(g)` with `g` the first
/// irreducible monic polynomial of the missing degree. `top → M` is always
/// the inclusion; `other → M` comes from root search.
pub fn compositum_embed(top: &Field, other: &Field) -> Result<(Field, EmbeddingMap, EmbeddingMap)> {
    if top.characteristic() != other.characteristic() {
        return Err(Error::FieldMismatch(format!("{top} and {other} have different characteristic")));
    }
    if !top.is_finite() || !other.is_finite() {
        if other.is_subfield_of(top) {
            return Ok((top.clone(), EmbeddingMap::inclusion(top, top)?, EmbeddingMap::inclusion(other, top)?));
        }
        return Err(Error::Unsupported("compositum of two extensions of Q".into()));
    }
    let (d1, d2) = (top.absolute_degree(), other.absolute_degree());
    let m = num_integer::lcm(d1, d2);
    let big = if m == d1 {
        top.clone()
    } else {
        let g = poly::first_irreducible(top, m / d1, false)?;
        Field::extension(top, g)?
    };
    let up = EmbeddingMap::inclusion(top, &big)?;
    let across = EmbeddingMap::find(other, &big)?;
    Ok((big, up, across))
}
