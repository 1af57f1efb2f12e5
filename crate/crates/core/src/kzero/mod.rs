//! Grothendieck groups of finite exact categories and the comparison along
//! the projection `C ⋉ M → C`.

use std::sync::Arc;

use num_traits::Zero;

use crate::abgrp::{FinAbGroup, GroupHom, Int, IntMatrix};
use crate::cat::{exact_sequences, AbCat, AddFunctor, EnumOrder, ExactCategory, ObjId};
use crate::error::{Error, Result};
use crate::semidirect::SemidirectCat;

/// `K₀` presented on isomorphism classes of objects, one relation
/// `[a] − [b] + [c]` per exact sequence.
#[derive(Clone, Debug)]
pub struct K0Presentation {
    /// A representative object per isomorphism class.
    pub generators: Vec<ObjId>,
    /// Class index of each object.
    pub class_of: Vec<usize>,
    /// One column per distinct relation.
    pub relations: IntMatrix,
    pub group: FinAbGroup,
    /// Coordinates of `[a]` on the generators, for each object `a`.
    pub class_map: Vec<Vec<Int>>,
    pub sequences: usize,
}

/// Isomorphism classes of objects by explicit search for an invertible
/// morphism.
pub fn object_iso_classes(cat: &AbCat) -> Result<Vec<usize>> {
    let n = cat.object_count();
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<ObjId> = Vec::new();
    for a in 0..n {
        for (k, &r) in reps.iter().enumerate() {
            let plausible = cat.hom(a, a).invariant_factors() == cat.hom(r, r).invariant_factors();
            if plausible && cat.elements(r, a)?.any(|f| cat.is_iso(&f)) {
                class_of[a] = k;
                break;
            }
        }
        if class_of[a] == usize::MAX {
            class_of[a] = reps.len();
            reps.push(a);
        }
    }
    Ok(class_of)
}

pub fn grothendieck_group(e: &dyn ExactCategory, order: EnumOrder, budget: usize) -> Result<K0Presentation> {
    let cat = e.cat();
    let class_of = object_iso_classes(cat)?;
    let g = class_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut generators = vec![0; g];
    for a in (0..cat.object_count()).rev() {
        generators[class_of[a]] = a;
    }
    let seqs = exact_sequences(e, order, budget)?;
    let mut cols: Vec<Vec<Int>> = seqs
        .iter()
        .map(|s| {
            let (a, b, c) = s.objects();
            let mut v = vec![0i64; g];
            v[class_of[a]] += 1;
            v[class_of[b]] -= 1;
            v[class_of[c]] += 1;
            v.into_iter().map(Int::from).collect()
        })
        .collect();
    cols.sort();
    cols.dedup();
    let relations = IntMatrix::from_columns(g, &cols)?;
    let group = FinAbGroup::new(g, relations.clone())?;
    let class_map = class_of
        .iter()
        .map(|&k| {
            let mut v = vec![Int::zero(); g];
            v[k] = Int::from(1);
            v
        })
        .collect();
    Ok(K0Presentation {
        generators,
        class_of,
        relations,
        group,
        class_map,
        sequences: seqs.len(),
    })
}

/// The map `K₀(source) → K₀(target)` induced by an exact functor.
pub fn induced_map(f: &AddFunctor, source: &K0Presentation, target: &K0Presentation) -> Result<GroupHom> {
    let cols: Vec<Vec<Int>> = source
        .generators
        .iter()
        .map(|&a| target.class_map[f.object(a)].clone())
        .collect();
    let mat = IntMatrix::from_columns(target.group.generator_count(), &cols)?;
    GroupHom::new(source.group.clone(), target.group.clone(), mat)
}

/// Whether two presentations on the same objects define the same quotient,
/// i.e. the identity on classes is an isomorphism.
pub fn same_group(a: &K0Presentation, b: &K0Presentation) -> bool {
    if a.class_of != b.class_of {
        return false;
    }
    let g = a.group.generator_count();
    GroupHom::new(a.group.clone(), b.group.clone(), IntMatrix::identity(g))
        .map(|h| h.is_iso())
        .unwrap_or(false)
}

#[derive(Clone, Debug)]
pub struct K0Comparison {
    pub source: K0Presentation,
    pub target: K0Presentation,
    /// Induced by `p: C ⋉ M → C`.
    pub induced: GroupHom,
    /// Induced by the zero section.
    pub section: GroupHom,
    pub is_isomorphism: bool,
    /// `K₀(p) ∘ K₀(s) = id`.
    pub section_is_inverse: bool,
}

pub fn compare_k0(sd: &SemidirectCat, order: EnumOrder, budget: usize) -> Result<K0Comparison> {
    let base: &Arc<dyn ExactCategory> = sd.base();
    compare_k0_along(sd, base.as_ref(), sd.projection(), sd.section(), order, budget)
}

/// Compares `K₀` across an exact functor `p` with a section `s`.
pub fn compare_k0_along(
    source: &dyn ExactCategory,
    target: &dyn ExactCategory,
    p: &AddFunctor,
    s: &AddFunctor,
    order: EnumOrder,
    budget: usize,
) -> Result<K0Comparison> {
    if !Arc::ptr_eq(p.source(), source.cat()) || !Arc::ptr_eq(p.target(), target.cat()) {
        return Err(Error::Invalid("p does not run between the given categories".into()));
    }
    let source = grothendieck_group(source, order, budget)?;
    let target = grothendieck_group(target, order, budget)?;
    let induced = induced_map(p, &source, &target)?;
    let section = induced_map(s, &target, &source)?;
    let is_isomorphism = induced.is_iso();
    let section_is_inverse = induced
        .compose(&section)
        .map(|h| h.equals(&GroupHom::identity(&target.group)))
        .map_err(|e| Error::Invalid(format!("K₀(p) ∘ K₀(s): {e}")))?;
    Ok(K0Comparison {
        source,
        target,
        induced,
        section,
        is_isomorphism,
        section_is_inverse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::Bimodule;
    use crate::cat::{AbCat, SplitExact, DEFAULT_BUDGET};
    use crate::model::{build_free_module_category, FiniteRing};

    fn int(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn trivial_category_has_trivial_k0() {
        let t = FinAbGroup::trivial();
        let cat = Arc::new(
            AbCat::from_generators("0", vec!["0".into()], 0, vec![vec![t]], vec![vec![]], |_, _, _, _, _| vec![]).unwrap(),
        );
        let e = SplitExact::new(cat);
        let k = grothendieck_group(&e, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        assert!(k.group.is_trivial());
    }

    #[test]
    fn free_modules_have_k0_z() {
        for n in [2u64, 4] {
            let c = build_free_module_category(FiniteRing::zn(n).unwrap(), 2).unwrap();
            let k = grothendieck_group(c.exact().as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
            assert_eq!(k.group.invariant_factors(), int(&[0]));
            // [R^r] = r [R]
            let r1 = &k.class_map[1];
            assert!(k.group.is_zero(&k.class_map[0]));
            let twice: Vec<Int> = r1.iter().map(|x| x * 2).collect();
            assert!(k.group.elems_equal(&k.class_map[2], &twice));
            let epi = grothendieck_group(c.exact().as_ref(), EnumOrder::EpiFirst, DEFAULT_BUDGET).unwrap();
            assert!(same_group(&k, &epi));
        }
    }

    #[test]
    fn zero_bimodule_gives_identity() {
        let c = build_free_module_category(FiniteRing::zn(2).unwrap(), 2).unwrap();
        let sd = SemidirectCat::new(c.exact(), Arc::new(Bimodule::zero(c.cat().clone()))).unwrap();
        let cmp = compare_k0(&sd, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        assert!(cmp.is_isomorphism && cmp.section_is_inverse);
        assert!(cmp.induced.matrix().is_square());
    }

    #[test]
    fn semidirect_k0_agrees() {
        let c = build_free_module_category(FiniteRing::zn(4).unwrap(), 2).unwrap();
        let sd = SemidirectCat::new(c.exact(), Arc::new(Bimodule::hom_tensor(&c, 2).unwrap())).unwrap();
        let cmp = compare_k0(&sd, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        assert_eq!(cmp.source.group.invariant_factors(), int(&[0]));
        assert!(cmp.is_isomorphism && cmp.section_is_inverse);
    }

    #[test]
    fn relation_saturation() {
        let c = build_free_module_category(FiniteRing::zn(2).unwrap(), 2).unwrap();
        let k = grothendieck_group(c.exact().as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        let doubled = k.relations.hstack(&k.relations.scale(&Int::from(3))).unwrap();
        let g = FinAbGroup::new(k.group.generator_count(), doubled).unwrap();
        assert_eq!(g.invariant_factors(), k.group.invariant_factors());
    }
}
