use std::sync::Arc;

use crate::abgrp::{GroupHom, Int, IntMatrix};
use crate::error::{Error, Result};

use super::{AbCat, Morphism, ObjId};

/// An additive functor between finite Ab-categories, stored as an object
/// map and one group homomorphism per hom-group.
#[derive(Clone)]
pub struct AddFunctor {
    source: Arc<AbCat>,
    target: Arc<AbCat>,
    object_map: Vec<ObjId>,
    hom_maps: Vec<GroupHom>,
}

impl std::fmt::Debug for AddFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AddFunctor({} -> {}, {:?})", self.source.name(), self.target.name(), self.object_map)
    }
}

#[derive(Clone, Debug, Default)]
pub struct FunctorReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl FunctorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl AddFunctor {
    /// Builds a functor from the images of hom-group generators. `image(a, b, u)`
    /// gives coordinates in `hom(F a, F b)` of the image of generator `u`.
    pub fn from_generator_images<F>(
        source: Arc<AbCat>,
        target: Arc<AbCat>,
        object_map: Vec<ObjId>,
        mut image: F,
    ) -> Result<AddFunctor>
    where
        F: FnMut(ObjId, ObjId, usize) -> Vec<Int>,
    {
        let n = source.object_count();
        if object_map.len() != n || object_map.iter().any(|&x| x >= target.object_count()) {
            return Err(Error::Dimension("object map does not fit the categories".into()));
        }
        let mut hom_maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let src = source.hom(a, b);
                let tgt = target.hom(object_map[a], object_map[b]);
                let cols: Vec<Vec<Int>> = (0..src.generator_count()).map(|u| image(a, b, u)).collect();
                let m = IntMatrix::from_columns(tgt.generator_count(), &cols)?;
                hom_maps.push(GroupHom::new(src.clone(), tgt.clone(), m)?);
            }
        }
        Ok(AddFunctor {
            source,
            target,
            object_map,
            hom_maps,
        })
    }

    pub fn identity(cat: Arc<AbCat>) -> AddFunctor {
        let n = cat.object_count();
        let hom_maps = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| GroupHom::identity(cat.hom(a, b)))
            .collect();
        AddFunctor {
            source: cat.clone(),
            target: cat,
            object_map: (0..n).collect(),
            hom_maps,
        }
    }

    pub fn source(&self) -> &Arc<AbCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AbCat> {
        &self.target
    }

    pub fn object(&self, a: ObjId) -> ObjId {
        self.object_map[a]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.object_map
    }

    pub fn hom_map(&self, a: ObjId, b: ObjId) -> &GroupHom {
        &self.hom_maps[a * self.source.object_count() + b]
    }

    pub fn apply(&self, f: &Morphism) -> Morphism {
        let coords = self.hom_map(f.source, f.target).apply(&f.coords);
        Morphism::new(self.object(f.source), self.object(f.target), coords)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AddFunctor) -> Result<AddFunctor> {
        if !Arc::ptr_eq(other.target(), self.source()) {
            return Err(Error::NotComposable("functor target and source differ".into()));
        }
        let n = other.source.object_count();
        let mut hom_maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let inner = other.hom_map(a, b);
                let outer = self.hom_map(other.object(a), other.object(b));
                hom_maps.push(outer.compose(inner)?);
            }
        }
        Ok(AddFunctor {
            source: other.source.clone(),
            target: self.target.clone(),
            object_map: other.object_map.iter().map(|&x| self.object(x)).collect(),
            hom_maps,
        })
    }

    /// Extensional equality on objects and generators.
    pub fn equals(&self, other: &AddFunctor) -> bool {
        self.object_map == other.object_map
            && self.hom_maps.len() == other.hom_maps.len()
            && self.hom_maps.iter().zip(&other.hom_maps).all(|(x, y)| x.equals(y))
    }

    /// Checks preservation of identities and of composition on generator pairs.
    pub fn check(&self) -> FunctorReport {
        let (src, tgt) = (&self.source, &self.target);
        let mut report = FunctorReport::default();
        for a in src.objects() {
            report.checked += 1;
            let fid = self.apply(&src.identity(a));
            if !tgt.equal(&fid, &tgt.identity(self.object(a))) {
                report.violations.push(format!("identity of {} not preserved", src.object_name(a)));
            }
        }
        for a in src.objects() {
            for b in src.objects() {
                for c in src.objects() {
                    for v in 0..src.hom(a, b).generator_count() {
                        let f = src.generator(a, b, v);
                        let ff = self.apply(&f);
                        for u in 0..src.hom(b, c).generator_count() {
                            let g = src.generator(b, c, u);
                            report.checked += 1;
                            let lhs = self.apply(&src.compose_unchecked(&g, &f));
                            let rhs = tgt.compose_unchecked(&self.apply(&g), &ff);
                            if !tgt.equal(&lhs, &rhs) {
                                report.violations.push(format!(
                                    "composition not preserved on generators ({a},{b},{c}) u={u} v={v}"
                                ));
                            }
                        }
                    }
                }
            }
        }
        report
    }
}

/// Checks that `f` is an isomorphism of categories: a functor, bijective on
/// objects, and an isomorphism on every hom-group.
pub fn check_isomorphism(f: &AddFunctor) -> FunctorReport {
    let mut report = f.check();
    let mut seen = vec![false; f.target.object_count()];
    for &x in &f.object_map {
        seen[x] = true;
    }
    report.checked += 1;
    if f.object_map.len() != f.target.object_count() || seen.iter().any(|s| !s) {
        report.violations.push("object map is not a bijection".into());
    }
    for a in f.source.objects() {
        for b in f.source.objects() {
            report.checked += 1;
            if !f.hom_map(a, b).is_iso() {
                report.violations.push(format!(
                    "hom({},{}) is not mapped isomorphically",
                    f.source.object_name(a),
                    f.source.object_name(b)
                ));
            }
        }
    }
    report
}

/// A natural isomorphism `F ⇒ G` between parallel functors.
#[derive(Clone, Debug)]
pub struct NatIso {
    components: Vec<Morphism>,
    inverses: Vec<Morphism>,
}

impl NatIso {
    /// Validates invertibility of each component and naturality on
    /// generators.
    pub fn new(f: &AddFunctor, g: &AddFunctor, components: Vec<Morphism>) -> Result<NatIso> {
        let (src, tgt) = (f.source(), f.target());
        if !Arc::ptr_eq(src, g.source()) || !Arc::ptr_eq(tgt, g.target()) {
            return Err(Error::Invalid("natural transformation between non-parallel functors".into()));
        }
        if components.len() != src.object_count() {
            return Err(Error::Dimension("one component per object is required".into()));
        }
        let mut inverses = Vec::with_capacity(components.len());
        for (a, eta) in components.iter().enumerate() {
            if eta.source != f.object(a) || eta.target != g.object(a) {
                return Err(Error::Invalid(format!("component at {} has the wrong type", src.object_name(a))));
            }
            let inv = tgt
                .inverse(eta)
                .ok_or_else(|| Error::Invalid(format!("component at {} is not invertible", src.object_name(a))))?;
            inverses.push(inv);
        }
        for a in src.objects() {
            for b in src.objects() {
                for u in 0..src.hom(a, b).generator_count() {
                    let h = src.generator(a, b, u);
                    let lhs = tgt.compose_unchecked(&g.apply(&h), &components[a]);
                    let rhs = tgt.compose_unchecked(&components[b], &f.apply(&h));
                    if !tgt.equal(&lhs, &rhs) {
                        return Err(Error::Invalid(format!(
                            "naturality fails at generator {u} of hom({},{})",
                            src.object_name(a),
                            src.object_name(b)
                        )));
                    }
                }
            }
        }
        Ok(NatIso { components, inverses })
    }

    /// The identity transformation of `f`.
    pub fn identity(f: &AddFunctor) -> NatIso {
        let comps: Vec<Morphism> = f.source().objects().map(|a| f.target().identity(f.object(a))).collect();
        NatIso {
            inverses: comps.clone(),
            components: comps,
        }
    }

    pub fn component(&self, a: ObjId) -> &Morphism {
        &self.components[a]
    }

    pub fn inverse(&self, a: ObjId) -> &Morphism {
        &self.inverses[a]
    }

    pub fn components(&self) -> &[Morphism] {
        &self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::{int_vec, FinAbGroup};

    // One object category Z/n plus a zero object.
    pub(crate) fn ring_cat(n: u64) -> Arc<AbCat> {
        let t = FinAbGroup::trivial();
        let r = FinAbGroup::cyclic(n);
        let hom = vec![vec![t.clone(), t.clone()], vec![t, r]];
        Arc::new(
            AbCat::from_generators("Z/n", vec!["0".into(), "R".into()], 0, hom, vec![vec![], int_vec(&[1])], |_, _, _, _, _| {
                int_vec(&[1])
            })
            .unwrap(),
        )
    }

    #[test]
    fn identity_functor_checks() {
        let c = ring_cat(4);
        let id = AddFunctor::identity(c.clone());
        assert!(id.check().passed());
        assert!(check_isomorphism(&id).passed());
        assert!(id.compose(&id).unwrap().equals(&id));
    }

    #[test]
    fn multiplication_by_three_is_not_a_functor() {
        let c = ring_cat(4);
        let f = AddFunctor::from_generator_images(c.clone(), c.clone(), vec![0, 1], |_, _, _| int_vec(&[3])).unwrap();
        let report = f.check();
        assert!(!report.passed());
    }

    #[test]
    fn natural_isomorphism_by_unit() {
        let c = ring_cat(4);
        let id = AddFunctor::identity(c.clone());
        let comps = vec![c.identity(0), Morphism::new(1, 1, int_vec(&[3]))];
        let eta = NatIso::new(&id, &id, comps).unwrap();
        assert_eq!(eta.inverse(1).coords, int_vec(&[3]));
        let bad = vec![c.identity(0), Morphism::new(1, 1, int_vec(&[2]))];
        assert!(NatIso::new(&id, &id, bad).is_err());
    }
}
