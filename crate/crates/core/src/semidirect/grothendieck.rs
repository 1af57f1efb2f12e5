use std::collections::{HashSet, VecDeque};

use crate::abgrp::{FinAbGroup, GroupHom, Int};
use crate::cat::{grothendieck, iso_groupoid, GrothendieckArrow, GrothendieckGroupoid, GroupValuedFunctor, IsoGroupoid, Morphism, ObjId};
use crate::error::{Error, Result};

use super::SemidirectCat;

/// The comparison `iso(C ⋉ M) → iso(C) ≀ F` with `F(a) = M(a, a)` and
/// `F(f)(m) = f m f⁻¹`, checked to be a bijective functor.
pub struct GrothendieckComparison<'s> {
    sd: &'s SemidirectCat,
    base: IsoGroupoid,
    total: IsoGroupoid,
    /// Size of the generating set used for the functoriality check.
    pub generators: usize,
    /// Number of composites `Φ(s ∘ x) = Φ(s) ∘ Φ(x)` verified.
    pub checked_pairs: usize,
}

fn conjugation_functor(sd: &SemidirectCat, g: &IsoGroupoid) -> Result<GroupValuedFunctor> {
    let c = sd.base_cat();
    let m = sd.bimodule();
    let fibers: Vec<FinAbGroup> = c.objects().map(|a| m.value(a, a).clone()).collect();
    GroupValuedFunctor::new(g, fibers, |f| {
        let inv = c
            .inverse(f)
            .ok_or_else(|| Error::Invalid(format!("{f:?} is not invertible")))?;
        m.push(f, f.target).compose(&m.pull(&inv, f.source))
    })
}

/// A set of arrows generating `g` under composition, chosen greedily.
fn generating_set(g: &IsoGroupoid) -> Vec<Morphism> {
    let cat = g.cat();
    let n = cat.object_count();
    let mut gens: Vec<Morphism> = Vec::new();
    let mut reached: HashSet<(ObjId, ObjId, Vec<Int>)> = HashSet::new();
    let closure = |gens: &[Morphism]| {
        let mut seen: HashSet<(ObjId, ObjId, Vec<Int>)> = HashSet::new();
        let mut queue: VecDeque<Morphism> = VecDeque::new();
        for a in 0..n {
            let id = cat.identity(a);
            if seen.insert(cat.key(&id)) {
                queue.push_back(id);
            }
        }
        while let Some(x) = queue.pop_front() {
            for s in gens.iter().filter(|s| s.source == x.target) {
                let y = cat.compose(s, &x).expect("composable");
                if seen.insert(cat.key(&y)) {
                    queue.push_back(y);
                }
            }
        }
        seen
    };
    for a in 0..n {
        for b in 0..n {
            for arrow in g.arrows(a, b) {
                if a == b && cat.equal(&arrow.morphism, &cat.identity(a)) {
                    continue;
                }
                if reached.is_empty() || !reached.contains(&cat.key(&arrow.morphism)) {
                    gens.push(arrow.morphism.clone());
                    reached = closure(&gens);
                }
            }
        }
    }
    gens
}

pub fn grothendieck_comparison(sd: &SemidirectCat) -> Result<GrothendieckComparison<'_>> {
    let base = iso_groupoid(sd.base_cat().clone())?;
    let total = iso_groupoid(sd.semidirect_cat().clone())?;
    let mut cmp = GrothendieckComparison {
        sd,
        base,
        total,
        generators: 0,
        checked_pairs: 0,
    };
    let groth = cmp.grothendieck()?;
    let cat = sd.semidirect_cat();
    let n = cat.object_count();

    // Φ lands in the Grothendieck groupoid and is injective with the right count on each hom-set.
    for a in 0..n {
        for b in 0..n {
            let arrows = cmp.total.arrows(a, b);
            let mut images = HashSet::new();
            for arrow in arrows {
                let (f, _) = sd.split(&arrow.morphism);
                if !cmp.base.contains(&f) {
                    return Err(Error::NotWellDefined(format!("{:?} lies over a non-isomorphism", arrow.morphism)));
                }
                let x = cmp.phi(&arrow.morphism)?;
                images.insert((sd.base_cat().key(&x.base), sd.bimodule().value(b, b).canonical(&x.fiber)));
            }
            let expected = groth
                .hom_size(a, b)
                .ok_or_else(|| Error::Infinite("fiber of the comparison".into()))?;
            if images.len() != arrows.len() || images.len() as u64 != expected {
                return Err(Error::NotWellDefined(format!(
                    "Φ is not bijective from {} to {}: {} arrows, {} images, {} expected",
                    cat.object_name(a),
                    cat.object_name(b),
                    arrows.len(),
                    images.len(),
                    expected
                )));
            }
        }
    }

    for a in 0..n {
        if !groth.equal(&cmp.phi(&cat.identity(a))?, &groth.identity(a)) {
            return Err(Error::NotWellDefined(format!("Φ(id) ≠ id at {}", cat.object_name(a))));
        }
    }
    let gens = generating_set(&cmp.total);
    let mut checked = 0;
    for s in &gens {
        let phi_s = cmp.phi(s)?;
        for a in 0..n {
            for x in cmp.total.arrows(a, s.source) {
                let lhs = cmp.phi(&cat.compose(s, &x.morphism)?)?;
                let rhs = groth.compose(&phi_s, &cmp.phi(&x.morphism)?)?;
                if !groth.equal(&lhs, &rhs) {
                    return Err(Error::NotWellDefined(format!("Φ fails on {s:?} ∘ {:?}", x.morphism)));
                }
                checked += 1;
            }
        }
    }
    drop(groth);
    cmp.generators = gens.len();
    cmp.checked_pairs = checked;
    Ok(cmp)
}

impl<'s> GrothendieckComparison<'s> {
    pub fn base_groupoid(&self) -> &IsoGroupoid {
        &self.base
    }

    pub fn total_groupoid(&self) -> &IsoGroupoid {
        &self.total
    }

    pub fn grothendieck(&self) -> Result<GrothendieckGroupoid<'_>> {
        grothendieck(&self.base, conjugation_functor(self.sd, &self.base)?)
    }

    /// `Φ(f, m) = (f, m f⁻¹)`.
    pub fn phi(&self, arrow: &Morphism) -> Result<GrothendieckArrow> {
        let (f, m) = self.sd.split(arrow);
        let inv = self
            .sd
            .base_cat()
            .inverse(&f)
            .ok_or_else(|| Error::Invalid(format!("{f:?} is not invertible")))?;
        let fiber = self.sd.bimodule().pull_elem(&inv, f.target, &m);
        Ok(GrothendieckArrow { base: f, fiber })
    }

    /// The action `F(f)` of the conjugation functor.
    pub fn action(&self, f: &Morphism) -> Result<GroupHom> {
        let inv = self
            .sd
            .base_cat()
            .inverse(f)
            .ok_or_else(|| Error::Invalid(format!("{f:?} is not invertible")))?;
        let m = self.sd.bimodule();
        m.push(f, f.target).compose(&m.pull(&inv, f.source))
    }
}
