use std::collections::HashMap;
use std::sync::Arc;

use crate::abgrp::{add_vec, FinAbGroup, GroupHom, Int};
use crate::error::{Error, Result};

use super::{AbCat, Morphism, ObjId};

type MorKey = (ObjId, ObjId, Vec<Int>);

/// An invertible morphism together with its inverse.
#[derive(Clone, Debug)]
pub struct IsoArrow {
    pub morphism: Morphism,
    pub inverse: Morphism,
}

/// The groupoid of isomorphisms of a finite category, listed exhaustively.
pub struct IsoGroupoid {
    cat: Arc<AbCat>,
    arrows: Vec<Vec<IsoArrow>>,
    index: HashMap<MorKey, usize>,
}

/// Enumerates every invertible morphism of `cat`. Fails on infinite homs.
pub fn iso_groupoid(cat: Arc<AbCat>) -> Result<IsoGroupoid> {
    let n = cat.object_count();
    let mut arrows = Vec::with_capacity(n * n);
    let mut index = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if !cat.hom(a, b).is_finite() {
                return Err(Error::Infinite(format!(
                    "hom({},{}) is infinite",
                    cat.object_name(a),
                    cat.object_name(b)
                )));
            }
            let mut list = Vec::new();
            // Isomorphic objects have isomorphic endomorphism groups.
            let plausible = a == b || cat.hom(a, a).invariant_factors() == cat.hom(b, b).invariant_factors();
            if plausible {
                for f in cat.elements(a, b)? {
                    if let Some(inv) = cat.inverse(&f) {
                        index.insert(cat.key(&f), list.len());
                        list.push(IsoArrow {
                            morphism: f,
                            inverse: inv,
                        });
                    }
                }
            }
            arrows.push(list);
        }
    }
    Ok(IsoGroupoid { cat, arrows, index })
}

impl IsoGroupoid {
    pub fn cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    pub fn arrows(&self, a: ObjId, b: ObjId) -> &[IsoArrow] {
        &self.arrows[a * self.cat.object_count() + b]
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, f: &Morphism) -> bool {
        self.index.contains_key(&self.cat.key(f))
    }

    pub fn are_isomorphic(&self, a: ObjId, b: ObjId) -> bool {
        !self.arrows(a, b).is_empty()
    }

    /// Isomorphism classes, each sorted, ordered by least member.
    pub fn iso_classes(&self) -> Vec<Vec<ObjId>> {
        let mut classes: Vec<Vec<ObjId>> = Vec::new();
        for a in self.cat.objects() {
            match classes.iter_mut().find(|c| self.are_isomorphic(c[0], a)) {
                Some(c) => c.push(a),
                None => classes.push(vec![a]),
            }
        }
        classes
    }

    /// Verifies closure under composition and inverses by enumeration.
    pub fn check_closure(&self) -> bool {
        let cat = &self.cat;
        for a in cat.objects() {
            for b in cat.objects() {
                for f in self.arrows(a, b) {
                    if !self.contains(&f.inverse) {
                        return false;
                    }
                    for c in cat.objects() {
                        for g in self.arrows(b, c) {
                            if !self.contains(&cat.compose_unchecked(&g.morphism, &f.morphism)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// A functor from an isomorphism groupoid to abelian groups.
pub struct GroupValuedFunctor {
    fibers: Vec<FinAbGroup>,
    actions: HashMap<MorKey, GroupHom>,
}

impl GroupValuedFunctor {
    /// Tabulates `action` on every arrow of `g`.
    pub fn new<F>(g: &IsoGroupoid, fibers: Vec<FinAbGroup>, mut action: F) -> Result<Self>
    where
        F: FnMut(&Morphism) -> Result<GroupHom>,
    {
        let cat = g.cat();
        if fibers.len() != cat.object_count() {
            return Err(Error::Dimension("one fiber per object is required".into()));
        }
        let mut actions = HashMap::new();
        for a in cat.objects() {
            for b in cat.objects() {
                for arrow in g.arrows(a, b) {
                    let h = action(&arrow.morphism)?;
                    if !h.source().same_presentation(&fibers[a]) || !h.target().same_presentation(&fibers[b]) {
                        return Err(Error::GroupMismatch(format!("action of {:?} has the wrong type", arrow.morphism)));
                    }
                    actions.insert(cat.key(&arrow.morphism), h);
                }
            }
        }
        Ok(GroupValuedFunctor { fibers, actions })
    }

    /// The functor with every fiber trivial.
    pub fn zero(g: &IsoGroupoid) -> Self {
        let t = FinAbGroup::trivial();
        let fibers = vec![t.clone(); g.cat().object_count()];
        GroupValuedFunctor::new(g, fibers, |_| Ok(GroupHom::zero(&t, &t))).expect("trivial fibers")
    }

    pub fn fiber(&self, a: ObjId) -> &FinAbGroup {
        &self.fibers[a]
    }

    pub fn action(&self, cat: &AbCat, f: &Morphism) -> Option<&GroupHom> {
        self.actions.get(&cat.key(f))
    }
}

/// A morphism `(f, x)` of the Grothendieck construction, `x ∈ F(target)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrothendieckArrow {
    pub base: Morphism,
    pub fiber: Vec<Int>,
}

/// The Grothendieck construction `G ≀ F`, with each group `F(x)` viewed as
/// a one-object category: objects are those of `G`, morphisms `x → y` are
/// pairs `(f, a)` with `a ∈ F(y)`, and `(g, b) ∘ (f, a) = (g f, b + F(g) a)`.
pub struct GrothendieckGroupoid<'g> {
    groupoid: &'g IsoGroupoid,
    functor: GroupValuedFunctor,
}

fn check_functorial(g: &IsoGroupoid, functor: &GroupValuedFunctor) -> Result<()> {
    let cat = g.cat();
    for a in cat.objects() {
        let id = functor
            .action(cat, &cat.identity(a))
            .ok_or_else(|| Error::NotWellDefined("identity missing from the groupoid".into()))?;
        if !id.equals(&GroupHom::identity(functor.fiber(a))) {
            return Err(Error::NotWellDefined(format!("F(id) is not the identity at {}", cat.object_name(a))));
        }
    }
    for a in cat.objects() {
        for b in cat.objects() {
            for f in g.arrows(a, b) {
                let ff = &functor.actions[&cat.key(&f.morphism)];
                for c in cat.objects() {
                    for h in g.arrows(b, c) {
                        let fh = &functor.actions[&cat.key(&h.morphism)];
                        let hf = cat.compose_unchecked(&h.morphism, &f.morphism);
                        let lhs = &functor.actions[&cat.key(&hf)];
                        if !lhs.equals(&fh.compose(ff)?) {
                            return Err(Error::NotWellDefined(format!(
                                "F does not respect the composite of {:?} and {:?}",
                                f.morphism, h.morphism
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Builds `G ≀ F`, rejecting non-functorial `F`.
pub fn grothendieck(g: &IsoGroupoid, functor: GroupValuedFunctor) -> Result<GrothendieckGroupoid<'_>> {
    check_functorial(g, &functor)?;
    Ok(GrothendieckGroupoid { groupoid: g, functor })
}

impl<'g> GrothendieckGroupoid<'g> {
    pub fn groupoid(&self) -> &IsoGroupoid {
        self.groupoid
    }

    pub fn functor(&self) -> &GroupValuedFunctor {
        &self.functor
    }

    pub fn identity(&self, a: ObjId) -> GrothendieckArrow {
        GrothendieckArrow {
            base: self.groupoid.cat().identity(a),
            fiber: self.functor.fiber(a).zero(),
        }
    }

    pub fn hom_size(&self, a: ObjId, b: ObjId) -> Option<u64> {
        Some(self.groupoid.arrows(a, b).len() as u64 * self.functor.fiber(b).order_u64()?)
    }

    pub fn arrows(&self, a: ObjId, b: ObjId) -> Result<Vec<GrothendieckArrow>> {
        let fib = self.functor.fiber(b);
        let mut out = Vec::new();
        for f in self.groupoid.arrows(a, b) {
            for x in fib.elements()? {
                out.push(GrothendieckArrow {
                    base: f.morphism.clone(),
                    fiber: x,
                });
            }
        }
        Ok(out)
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &GrothendieckArrow, f: &GrothendieckArrow) -> Result<GrothendieckArrow> {
        let cat = self.groupoid.cat();
        let base = cat.compose(&g.base, &f.base)?;
        let act = self
            .functor
            .action(cat, &g.base)
            .ok_or_else(|| Error::Invalid(format!("{:?} is not invertible", g.base)))?;
        let fib = self.functor.fiber(g.base.target);
        Ok(GrothendieckArrow {
            base,
            fiber: fib.reduce(&add_vec(&g.fiber, &act.apply(&f.fiber))),
        })
    }

    pub fn equal(&self, f: &GrothendieckArrow, g: &GrothendieckArrow) -> bool {
        self.groupoid.cat().equal(&f.base, &g.base) && self.functor.fiber(f.base.target).elems_equal(&f.fiber, &g.fiber)
    }
}

/// The category of elements of `F`: objects are pairs `(x, e)` with
/// `e ∈ F(x)`, morphisms `(x, e) → (y, e')` are arrows `f` with `F(f) e = e'`.
pub struct ElementsCategory {
    objects: Vec<(ObjId, Vec<Int>)>,
    arrows: Vec<Vec<Morphism>>,
}

pub fn category_of_elements(g: &IsoGroupoid, functor: &GroupValuedFunctor) -> Result<ElementsCategory> {
    check_functorial(g, functor)?;
    let cat = g.cat();
    let mut objects = Vec::new();
    for a in cat.objects() {
        for e in functor.fiber(a).elements()? {
            objects.push((a, functor.fiber(a).canonical(&e)));
        }
    }
    let n = objects.len();
    let mut arrows = vec![Vec::new(); n * n];
    for (i, (a, e)) in objects.iter().enumerate() {
        for (j, (b, e2)) in objects.iter().enumerate() {
            for f in g.arrows(*a, *b) {
                let img = functor.actions[&cat.key(&f.morphism)].apply(e);
                if functor.fiber(*b).elems_equal(&img, e2) {
                    arrows[i * n + j].push(f.morphism.clone());
                }
            }
        }
    }
    Ok(ElementsCategory { objects, arrows })
}

impl ElementsCategory {
    pub fn objects(&self) -> &[(ObjId, Vec<Int>)] {
        &self.objects
    }

    pub fn arrows(&self, i: usize, j: usize) -> &[Morphism] {
        &self.arrows[i * self.objects.len() + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::{int_vec, IntMatrix};

    fn ring_cat(n: u64) -> Arc<AbCat> {
        let t = FinAbGroup::trivial();
        let r = FinAbGroup::cyclic(n);
        let hom = vec![vec![t.clone(), t.clone()], vec![t, r]];
        Arc::new(
            AbCat::from_generators("ring", vec!["0".into(), "R".into()], 0, hom, vec![vec![], int_vec(&[1])], |_, _, _, _, _| {
                int_vec(&[1])
            })
            .unwrap(),
        )
    }

    fn zero_cat() -> Arc<AbCat> {
        let t = FinAbGroup::trivial();
        Arc::new(AbCat::from_generators("zero", vec!["0".into()], 0, vec![vec![t]], vec![vec![]], |_, _, _, _, _| vec![]).unwrap())
    }

    #[test]
    fn zero_category_has_one_arrow() {
        let g = iso_groupoid(zero_cat()).unwrap();
        assert_eq!(g.arrow_count(), 1);
        assert!(g.check_closure());
    }

    #[test]
    fn units_of_z4() {
        let g = iso_groupoid(ring_cat(4)).unwrap();
        let units: Vec<Vec<Int>> = g.arrows(1, 1).iter().map(|a| a.morphism.coords.clone()).collect();
        assert_eq!(units, vec![int_vec(&[1]), int_vec(&[3])]);
        assert!(g.check_closure());
        assert_eq!(g.iso_classes(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn zero_functor_gives_the_groupoid_back() {
        let g = iso_groupoid(ring_cat(5)).unwrap();
        let gr = grothendieck(&g, GroupValuedFunctor::zero(&g)).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(gr.hom_size(a, b).unwrap(), g.arrows(a, b).len() as u64);
            }
        }
    }

    // The units of Z/3 form a group of order two; let it act trivially on Z/2.
    fn trivial_z2_action(g: &IsoGroupoid) -> GroupValuedFunctor {
        let fibers = vec![FinAbGroup::trivial(), FinAbGroup::cyclic(2)];
        let fib = fibers.clone();
        GroupValuedFunctor::new(g, fibers, |f| Ok(GroupHom::identity(&fib[f.source]))).unwrap()
    }

    #[test]
    fn trivial_action_unfolds() {
        let g = iso_groupoid(ring_cat(3)).unwrap();
        assert_eq!(g.arrows(1, 1).len(), 2);
        let f = trivial_z2_action(&g);
        let els = category_of_elements(&g, &f).unwrap();
        let over_r: Vec<usize> = (0..els.objects().len()).filter(|&i| els.objects()[i].0 == 1).collect();
        assert_eq!(over_r.len(), 2);
        for &i in &over_r {
            for &j in &over_r {
                assert_eq!(els.arrows(i, j).len(), if i == j { 2 } else { 0 });
            }
        }
        let gr = grothendieck(&g, f).unwrap();
        let homs = gr.arrows(1, 1).unwrap();
        assert_eq!(homs.len(), 4);
        for x in &homs {
            for y in &homs {
                let xy = gr.compose(x, y).unwrap();
                assert!(homs.iter().any(|z| gr.equal(z, &xy)));
            }
        }
    }

    #[test]
    fn non_functorial_action_is_rejected() {
        let g = iso_groupoid(ring_cat(3)).unwrap();
        let fibers = vec![FinAbGroup::trivial(), FinAbGroup::free(1)];
        let fib = fibers.clone();
        // Multiplication by 2 everywhere violates F(id) = id.
        let f = GroupValuedFunctor::new(&g, fibers, |m| {
            Ok(GroupHom::new(fib[m.source].clone(), fib[m.target].clone(), IntMatrix::diagonal(&vec![Int::from(2); fib[m.source].generator_count()])).unwrap())
        })
        .unwrap();
        assert!(matches!(grothendieck(&g, f), Err(Error::NotWellDefined(_))));
    }
}
