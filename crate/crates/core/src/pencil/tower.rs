use super::{Pencil, PencilBlock};
use crate::error::{violation, Result};
use crate::fields::{Elem, Field};
use crate::matrices::{Echelon, Subspace};

/// `E_0 = F_0 = 0`, `E_{k+1} = B⁻¹(F_k)`, `F_{k+1} = A(E_{k+1})`, computed
/// until `E` stabilizes. Index `k` of each list holds `E_k` / `F_k`.
#[derive(Clone, Debug)]
pub struct KernelTower {
    pub e: Vec<Subspace>,
    pub f: Vec<Subspace>,
}

impl KernelTower {
    /// The stabilization index `N`.
    pub fn n(&self) -> usize {
        self.e.len() - 1
    }

    pub fn top_domain(&self) -> &Subspace {
        &self.e[self.n()]
    }

    pub fn top_codomain(&self) -> &Subspace {
        &self.f[self.n()]
    }
}

pub fn build_towers(pencil: &Pencil) -> KernelTower {
    let fld = pencil.field();
    let (n, p) = pencil.shape();
    let mut e = vec![Subspace::zero(fld, p)];
    let mut f = vec![Subspace::zero(fld, n)];
    loop {
        let next = f.last().unwrap().preimage(pencil.b());
        if next.dim() == e.last().unwrap().dim() {
            return KernelTower { e, f };
        }
        f.push(next.image(pencil.a()));
        e.push(next);
    }
}

fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

/// Complements `E = E_N ⊕ E'`, `F = F_N ⊕ F'` with `A(E') ⊆ F'` and
/// `B(E') ⊆ F'`, by correcting an arbitrary complement one tower level at
/// a time from the top down.
pub fn split_complements(pencil: &Pencil, tower: &KernelTower) -> Result<(Subspace, Subspace)> {
    let fld = pencil.field();
    let (n, p) = pencil.shape();
    let (a, b) = (pencil.a(), pencil.b());
    let top_f = tower.top_codomain();
    let mut e_rest = tower.top_domain().complement();
    let mut f_rest = top_f.complement();
    for k in (1..=tower.n()).rev() {
        // F'' contains B(E') and still complements F_N
        let mut ech = Echelon::seeded(fld, top_f.basis());
        let mut f_new = Vec::with_capacity(f_rest.len());
        for e in &e_rest {
            let be = b.mul_vec(e);
            if !ech.insert(&be) {
                return Err(violation("B(E') meets F_N"));
            }
            f_new.push(be);
        }
        f_new.extend(f_rest.iter().filter(|v| ech.insert(v)).cloned());
        if f_new.len() != f_rest.len() {
            return Err(violation("replacement complement has the wrong dimension"));
        }
        let fk = &tower.f[k];
        let fk_mat = fk.matrix();
        let system = crate::Matrix::from_columns(fld, n, &[f_new.as_slice(), fk.basis()].concat());
        let ek = tower.e[k].matrix();
        let a_ek = a * &ek;
        for e in e_rest.iter_mut() {
            let x = system
                .solve(&a.mul_vec(e))
                .ok_or_else(|| violation("A(E') escapes F'' + F_k"))?;
            let in_fk = fk_mat.mul_vec(&x[f_new.len()..]);
            let c = a_ek.solve(&in_fk).ok_or_else(|| violation("F_k is not A(E_k)"))?;
            *e = sub(fld, e, &ek.mul_vec(&c));
        }
        f_rest = f_new;
    }
    let e_space = Subspace::from_independent(fld, p, &e_rest);
    let f_space = Subspace::from_independent(fld, n, &f_rest);
    for v in &e_rest {
        if !f_space.contains(&a.mul_vec(v)) || !f_space.contains(&b.mul_vec(v)) {
            return Err(violation("complement not invariant"));
        }
    }
    Ok((e_space, f_space))
}

/// Bases of `E_N` and `F_N` made of chains, with the block each chain gives.
///
/// `domain` and `codomain` are ambient vectors; chain `j` occupies a
/// contiguous run in each, ordered from tower level 1 upwards.
#[derive(Clone, Debug)]
pub struct ChainBasis {
    pub domain: Vec<Vec<Elem>>,
    pub codomain: Vec<Vec<Elem>>,
    pub blocks: Vec<PencilBlock>,
}

struct Chain {
    singular: bool,
    vs: Vec<Vec<Elem>>,
    ws: Vec<Vec<Elem>>,
}

/// Chain bases of `(E_N, F_N)` built by downward induction on the tower.
///
/// At level `k`, images `B v` carried down from level `k+1` are joined by
/// fresh vectors completing `F_{k-1}` inside `F_k`; every one of them gets
/// an `A`-preimage in `E_k`. Vectors of `E_k ∩ Ker A` independent modulo
/// `E_{k-1}` start singular chains. A chain that starts with an `F` vector
/// renders as `J_r(1,X)`; one that starts in `Ker A` as `L_s + X·K_s`.
pub fn singular_part_basis(pencil: &Pencil, tower: &KernelTower) -> Result<ChainBasis> {
    let fld = pencil.field();
    let (a, b) = (pencil.a(), pencil.b());
    let mut chains: Vec<Chain> = Vec::new();
    let mut carried: Vec<(usize, Vec<Elem>)> = Vec::new();
    for k in (1..=tower.n()).rev() {
        let mut fech = Echelon::seeded(fld, tower.f[k - 1].basis());
        for (_, w) in &carried {
            if !fech.insert(w) {
                return Err(violation(format!("carried images dependent at level {k}")));
            }
        }
        for w in tower.f[k].basis() {
            if fech.insert(w) {
                chains.push(Chain { singular: false, vs: Vec::new(), ws: Vec::new() });
                carried.push((chains.len() - 1, w.clone()));
            }
        }
        let ek = tower.e[k].matrix();
        let a_ek = a * &ek;
        let mut eech = Echelon::seeded(fld, tower.e[k - 1].basis());
        let mut level = Vec::new();
        for (id, w) in carried.drain(..) {
            let c = a_ek.solve(&w).ok_or_else(|| violation(format!("no A-preimage in E_{k}")))?;
            let v = ek.mul_vec(&c);
            if !eech.insert(&v) {
                return Err(violation(format!("preimages dependent at level {k}")));
            }
            chains[id].ws.push(w);
            chains[id].vs.push(v.clone());
            level.push((id, v));
        }
        for c in a_ek.kernel_basis().basis() {
            let v = ek.mul_vec(c);
            if eech.insert(&v) {
                chains.push(Chain { singular: true, vs: vec![v.clone()], ws: Vec::new() });
                level.push((chains.len() - 1, v));
            }
        }
        if eech.rank() != tower.e[k].dim() {
            return Err(violation(format!("level {k} vectors do not fill E_{k}")));
        }
        for (id, v) in level {
            let w = b.mul_vec(&v);
            if k == 1 {
                if !w.iter().all(|x| fld.is_zero(x)) {
                    return Err(violation("E_1 is not Ker B"));
                }
            } else {
                carried.push((id, w));
            }
        }
    }
    let mut out = ChainBasis { domain: Vec::new(), codomain: Vec::new(), blocks: Vec::new() };
    for mut ch in chains {
        ch.vs.reverse();
        ch.ws.reverse();
        out.blocks.push(if ch.singular {
            PencilBlock::SingularRow(ch.vs.len() - 1)
        } else {
            PencilBlock::JordanOneX(ch.vs.len())
        });
        out.domain.extend(ch.vs);
        out.codomain.extend(ch.ws);
    }
    Ok(out)
}
