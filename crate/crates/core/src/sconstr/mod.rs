//! The `S_p`-construction at levels `p ≤ 3`: diagrams, the extended
//! bimodule `S_pM`, the embedding `Ψ` and straightening.

mod bimodule;
mod straighten;

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::abgrp::Int;
use crate::cat::{exact_sequences, AbCat, AddFunctor, EnumOrder, ExactCategory, ExactSeq, Morphism, ObjId};
use crate::error::{Error, Result};

pub use bimodule::{psi_compose, psi_embed, sp_bimodule_group, sp_simplicial_action, Compatibility, SPBimoduleGroup};
pub use straighten::{straighten, Straightened};

/// Highest level the enumerators accept.
pub const MAX_LEVEL: usize = 3;

/// A position `(i, j)` with `0 ≤ i ≤ j ≤ p`.
pub type Pos = (usize, usize);

pub(crate) fn positions(p: usize) -> Vec<Pos> {
    (0..=p).flat_map(|i| (i..=p).map(move |j| (i, j))).collect()
}

fn pos_index(p: usize, (i, j): Pos) -> usize {
    // rows 0..i hold (p+1) + p + ... + (p+2-i) positions
    i * (p + 1) - i * (i.saturating_sub(1)) / 2 + (j - i)
}

/// Covering relations of the index poset, lexicographic.
pub(crate) fn covers(p: usize) -> Vec<(Pos, Pos)> {
    let mut out = Vec::new();
    for (i, j) in positions(p) {
        if j < p {
            out.push(((i, j), (i, j + 1)));
        }
        if i < j {
            out.push(((i, j), (i + 1, j)));
        }
    }
    out.sort();
    out
}

/// Positions `(i, j)` with `i < j`, i.e. injective maps `[1] → [p]`.
pub fn injective_positions(p: usize) -> Vec<Pos> {
    positions(p).into_iter().filter(|(i, j)| i < j).collect()
}

/// A triangular diagram `X_{(i,j)}`, zero on the diagonal, with exact
/// sequences `X_{(i,j)} ↣ X_{(i,k)} ↠ X_{(j,k)}`.
#[derive(Clone, Debug)]
pub struct SPDiagram {
    p: usize,
    cat: Arc<AbCat>,
    objects: Vec<ObjId>,
    covers: Vec<Morphism>,
}

impl SPDiagram {
    /// Builds and validates a diagram. `cover(ρ, θ)` returning `None` means
    /// the zero morphism.
    pub fn from_fn<O, C>(e: &dyn ExactCategory, p: usize, mut object: O, mut cover: C) -> Result<SPDiagram>
    where
        O: FnMut(Pos) -> ObjId,
        C: FnMut(Pos, Pos) -> Option<Morphism>,
    {
        let cat = e.cat().clone();
        let objects: Vec<ObjId> = positions(p)
            .into_iter()
            .map(|(i, j)| if i == j { cat.zero_object() } else { object((i, j)) })
            .collect();
        let covers = covers(p)
            .into_iter()
            .map(|(r, t)| {
                let (a, b) = (objects[pos_index(p, r)], objects[pos_index(p, t)]);
                cover(r, t).unwrap_or_else(|| cat.zero_morphism(a, b))
            })
            .collect();
        let d = SPDiagram { p, cat, objects, covers };
        d.validate(e)?;
        Ok(d)
    }

    fn validate(&self, e: &dyn ExactCategory) -> Result<()> {
        let cat = &self.cat;
        if !Arc::ptr_eq(cat, e.cat()) {
            return Err(Error::Invalid("diagram lives in another category".into()));
        }
        for ((r, t), f) in covers(self.p).iter().zip(&self.covers) {
            if f.source != self.object(*r) || f.target != self.object(*t) {
                return Err(Error::Dimension(format!("cover {r:?} → {t:?} has the wrong type")));
            }
            cat.morphism(f.source, f.target, f.coords.clone())?;
        }
        for k in 0..=self.p {
            if !cat.hom(self.object((k, k)), self.object((k, k))).is_trivial() {
                return Err(Error::Invalid(format!("X({k},{k}) is not a zero object")));
            }
        }
        for (i, j) in positions(self.p) {
            if i < j && j < self.p {
                let top = cat.compose(self.cover((i, j + 1), (i + 1, j + 1)), self.cover((i, j), (i, j + 1)))?;
                let bottom = cat.compose(self.cover((i + 1, j), (i + 1, j + 1)), self.cover((i, j), (i + 1, j)))?;
                if !cat.equal(&top, &bottom) {
                    return Err(Error::Invalid(format!("square at ({i},{j}) does not commute")));
                }
            }
        }
        for i in 0..=self.p {
            for j in i + 1..=self.p {
                for k in j + 1..=self.p {
                    let mono = self.map((i, j), (i, k))?;
                    let epi = self.map((i, k), (j, k))?;
                    if !e.is_exact(&mono, &epi) {
                        return Err(Error::NotExact(format!("X({i},{j}) → X({i},{k}) → X({j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn level(&self) -> usize {
        self.p
    }

    pub fn cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    pub fn object(&self, pos: Pos) -> ObjId {
        self.objects[pos_index(self.p, pos)]
    }

    pub fn cover(&self, r: Pos, t: Pos) -> &Morphism {
        let k = covers(self.p)
            .binary_search(&(r, t))
            .unwrap_or_else(|_| panic!("{r:?} → {t:?} is not a covering relation"));
        &self.covers[k]
    }

    pub fn cover_list(&self) -> Vec<((Pos, Pos), &Morphism)> {
        covers(self.p).into_iter().zip(&self.covers).collect()
    }

    /// The structure map `X_ρ → X_θ` for `ρ ≤ θ`.
    pub fn map(&self, (i, j): Pos, (k, l): Pos) -> Result<Morphism> {
        if i > k || j > l || k > l || i > j || l > self.p {
            return Err(Error::Invalid(format!("({i},{j}) ≰ ({k},{l})")));
        }
        let mut f = self.cat.identity(self.object((i, j)));
        for m in j..l {
            f = self.cat.compose(self.cover((i, m), (i, m + 1)), &f)?;
        }
        for m in i..k {
            f = self.cat.compose(self.cover((m, l), (m + 1, l)), &f)?;
        }
        Ok(f)
    }

    /// Hashable description: objects and canonical cover coordinates.
    pub fn key(&self) -> (Vec<ObjId>, Vec<Vec<Int>>) {
        (self.objects.clone(), self.covers.iter().map(|f| self.cat.key(f).2).collect())
    }

    /// `σ^*X` for a monotone `σ: [q] → [p]`, given by its values.
    pub fn pullback_along(&self, e: &dyn ExactCategory, sigma: &[usize]) -> Result<SPDiagram> {
        check_monotone(sigma, self.p)?;
        let q = sigma.len() - 1;
        SPDiagram::from_fn(
            e,
            q,
            |(i, j)| self.object((sigma[i], sigma[j])),
            |(i, j), (k, l)| self.map((sigma[i], sigma[j]), (sigma[k], sigma[l])).ok(),
        )
    }

    /// `F_*X` for an exact functor `F`.
    pub fn push_forward(&self, f: &AddFunctor, e: &dyn ExactCategory) -> Result<SPDiagram> {
        if !Arc::ptr_eq(f.source(), &self.cat) || !Arc::ptr_eq(f.target(), e.cat()) {
            return Err(Error::Invalid("functor does not match the diagram".into()));
        }
        SPDiagram::from_fn(e, self.p, |pos| f.object(self.object(pos)), |r, t| Some(f.apply(self.cover(r, t))))
    }

    /// `X_θ ↦ φ_θ X_θ`: replaces each cover `f: ρ → θ` by `φ_θ f φ_ρ⁻¹`,
    /// where `autos[k]` is `(φ, φ⁻¹)` at position `k`.
    fn act(&self, autos: &HashMap<Pos, (Morphism, Morphism)>) -> SPDiagram {
        let covers = covers(self.p)
            .into_iter()
            .zip(&self.covers)
            .map(|((r, t), f)| {
                let mut g = f.clone();
                if let Some((_, inv)) = autos.get(&r) {
                    g = self.cat.compose(&g, inv).expect("composable");
                }
                if let Some((phi, _)) = autos.get(&t) {
                    g = self.cat.compose(phi, &g).expect("composable");
                }
                g
            })
            .collect();
        SPDiagram {
            p: self.p,
            cat: self.cat.clone(),
            objects: self.objects.clone(),
            covers,
        }
    }
}

fn check_monotone(sigma: &[usize], p: usize) -> Result<()> {
    if sigma.is_empty() || sigma.iter().any(|&s| s > p) || sigma.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invalid(format!("{sigma:?} is not a monotone map into [{p}]")));
    }
    Ok(())
}

/// Exact sequences indexed for building level-3 diagrams.
struct SequenceIndex<'a> {
    seqs: &'a [ExactSeq],
    by_mono: HashMap<(ObjId, ObjId, Vec<Int>), Vec<usize>>,
    by_mono_source: HashMap<ObjId, Vec<usize>>,
}

impl<'a> SequenceIndex<'a> {
    fn new(cat: &AbCat, seqs: &'a [ExactSeq]) -> Self {
        let mut by_mono: HashMap<_, Vec<usize>> = HashMap::new();
        let mut by_mono_source: HashMap<_, Vec<usize>> = HashMap::new();
        for (k, s) in seqs.iter().enumerate() {
            by_mono.entry(cat.key(&s.i)).or_default().push(k);
            by_mono_source.entry(s.i.source).or_default().push(k);
        }
        SequenceIndex {
            seqs,
            by_mono,
            by_mono_source,
        }
    }

    fn with_mono(&self, cat: &AbCat, i: &Morphism) -> &[usize] {
        self.by_mono.get(&cat.key(i)).map(Vec::as_slice).unwrap_or(&[])
    }

    fn with_source(&self, a: ObjId) -> &[usize] {
        self.by_mono_source.get(&a).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn level_two(e: &dyn ExactCategory, s: &ExactSeq) -> Result<SPDiagram> {
    let (a, b, c) = s.objects();
    SPDiagram::from_fn(
        e,
        2,
        |pos| match pos {
            (0, 1) => a,
            (0, 2) => b,
            _ => c,
        },
        |r, t| match (r, t) {
            ((0, 1), (0, 2)) => Some(s.i.clone()),
            ((0, 2), (1, 2)) => Some(s.q.clone()),
            _ => None,
        },
    )
}

/// Level-3 diagram from `X01 ↣ X02 ↠ X12`, `X02 ↣ X03 ↠ X23` and
/// `X01 ↣ X03 ↠ X13`; the remaining maps are forced.
fn level_three(e: &dyn ExactCategory, a: &ExactSeq, b: &ExactSeq, c: &ExactSeq) -> Result<SPDiagram> {
    let cat = e.cat();
    let (x12, x13, x23) = (a.q.target, c.q.target, b.q.target);
    let target = cat.compose(&c.q, &b.i)?;
    let u = cat
        .precompose_hom(&a.q, x13)
        .preimage(&target.coords)
        .ok_or_else(|| Error::Unsolvable("X12 → X13 does not exist".into()))?;
    let u = Morphism::new(x12, x13, u);
    let v = cat
        .precompose_hom(&c.q, x23)
        .preimage(&b.q.coords)
        .ok_or_else(|| Error::Unsolvable("X13 → X23 does not exist".into()))?;
    let v = Morphism::new(x13, x23, v);
    SPDiagram::from_fn(
        e,
        3,
        |pos| match pos {
            (0, 1) => a.i.source,
            (0, 2) => a.i.target,
            (0, 3) => b.i.target,
            (1, 2) => x12,
            (1, 3) => x13,
            _ => x23,
        },
        |r, t| match (r, t) {
            ((0, 1), (0, 2)) => Some(a.i.clone()),
            ((0, 2), (0, 3)) => Some(b.i.clone()),
            ((0, 2), (1, 2)) => Some(a.q.clone()),
            ((0, 3), (1, 3)) => Some(c.q.clone()),
            ((1, 2), (1, 3)) => Some(u.clone()),
            ((1, 3), (2, 3)) => Some(v.clone()),
            _ => None,
        },
    )
}

fn budget_error(limit: usize, context: &str) -> Error {
    Error::Budget {
        limit,
        context: context.to_string(),
    }
}

/// Every `S_p`-diagram of a finite exact category, `p ≤ 3`.
pub fn enumerate_sp_diagrams(e: &dyn ExactCategory, p: usize, budget: usize) -> Result<Vec<SPDiagram>> {
    let cat = e.cat();
    match p {
        0 => Ok(vec![SPDiagram::from_fn(e, 0, |_| cat.zero_object(), |_, _| None)?]),
        1 => cat.objects().map(|a| SPDiagram::from_fn(e, 1, |_| a, |_, _| None)).collect(),
        2 => {
            let seqs = exact_sequences(e, EnumOrder::MonoFirst, budget)?;
            seqs.iter().map(|s| level_two(e, s)).collect()
        }
        3 => {
            let seqs = exact_sequences(e, EnumOrder::MonoFirst, budget)?;
            let index = SequenceIndex::new(cat, &seqs);
            let mut out = Vec::new();
            for a in &seqs {
                for &kb in index.with_source(a.i.target) {
                    let b = &seqs[kb];
                    let ba = cat.compose(&b.i, &a.i)?;
                    for &kc in index.with_mono(cat, &ba) {
                        if out.len() >= budget {
                            return Err(budget_error(budget, "enumerating level-3 diagrams"));
                        }
                        out.push(level_three(e, a, b, &seqs[kc])?);
                    }
                }
            }
            Ok(out)
        }
        _ => Err(budget_error(MAX_LEVEL, "enumerating diagrams above level 3")),
    }
}

/// Random `S_p`-diagrams, `p ≤ 3`, drawn by choosing the defining exact
/// sequences uniformly at each step (not uniform over diagrams).
pub fn sample_sp_diagrams<R: Rng>(e: &dyn ExactCategory, p: usize, count: usize, budget: usize, rng: &mut R) -> Result<Vec<SPDiagram>> {
    if p < 3 {
        let all = enumerate_sp_diagrams(e, p, budget)?;
        return Ok((0..count).filter_map(|_| all.choose(rng).cloned()).collect());
    }
    if p > MAX_LEVEL {
        return Err(budget_error(MAX_LEVEL, "sampling diagrams above level 3"));
    }
    let cat = e.cat();
    let seqs = exact_sequences(e, EnumOrder::MonoFirst, budget)?;
    let index = SequenceIndex::new(cat, &seqs);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > budget {
            return Err(budget_error(budget, "sampling level-3 diagrams"));
        }
        let Some(a) = seqs.choose(rng) else { break };
        let Some(&kb) = index.with_source(a.i.target).choose(rng) else { continue };
        let b = &index.seqs[kb];
        let ba = cat.compose(&b.i, &a.i)?;
        let Some(&kc) = index.with_mono(cat, &ba).choose(rng) else { continue };
        out.push(level_three(e, a, b, &index.seqs[kc])?);
    }
    Ok(out)
}

/// A generating set of `Aut(a)` as `(φ, φ⁻¹)` pairs.
pub fn automorphism_generators(cat: &AbCat, a: ObjId) -> Result<Vec<(Morphism, Morphism)>> {
    let mut group: Vec<(Morphism, Morphism)> = Vec::new();
    for f in cat.elements(a, a)? {
        if let Some(inv) = cat.inverse(&f) {
            group.push((f, inv));
        }
    }
    let mut gens: Vec<(Morphism, Morphism)> = Vec::new();
    let mut reached = std::collections::HashSet::new();
    reached.insert(cat.key(&cat.identity(a)));
    for (f, inv) in &group {
        if reached.contains(&cat.key(f)) {
            continue;
        }
        gens.push((f.clone(), inv.clone()));
        // closure of the generated subgroup
        let mut frontier: Vec<Morphism> = vec![cat.identity(a)];
        reached.clear();
        reached.insert(cat.key(&frontier[0]));
        while let Some(x) = frontier.pop() {
            for (g, _) in &gens {
                let y = cat.compose(g, &x)?;
                if reached.insert(cat.key(&y)) {
                    frontier.push(y);
                }
            }
        }
    }
    Ok(gens)
}

/// Partitions `diagrams` (a complete list at one level) into isomorphism
/// classes, returned as sorted index lists.
pub fn sp_iso_classes(diagrams: &[SPDiagram]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = diagrams.first() else {
        return Ok(Vec::new());
    };
    let cat = first.cat.clone();
    let index: HashMap<_, usize> = diagrams.iter().enumerate().map(|(k, d)| (d.key(), k)).collect();
    let mut parent: Vec<usize> = (0..diagrams.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut gens: HashMap<ObjId, Vec<(Morphism, Morphism)>> = HashMap::new();
    for (k, d) in diagrams.iter().enumerate() {
        for pos in injective_positions(d.p) {
            let a = d.object(pos);
            if let Entry::Vacant(slot) = gens.entry(a) {
                slot.insert(automorphism_generators(&cat, a)?);
            }
            for g in &gens[&a] {
                let moved = d.act(&HashMap::from([(pos, g.clone())]));
                let j = *index
                    .get(&moved.key())
                    .ok_or_else(|| Error::Invalid("diagram list is not closed under isomorphism".into()))?;
                let (x, y) = (find(&mut parent, k), find(&mut parent, j));
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..diagrams.len() {
        let r = find(&mut parent, k);
        classes.entry(r).or_default().push(k);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests;
