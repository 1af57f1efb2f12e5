//! Finite Ab-enriched categories.
//!
//! Hom-groups are [`FinAbGroup`]s and composition is stored as a bilinear
//! table on generator pairs; composing two morphisms expands bilinearly.

mod axioms;
mod exact;
mod functor;
mod groupoid;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::abgrp::{add_vec, neg_vec, sub_vec, FinAbGroup, GroupHom, Int, IntMatrix};
use crate::error::{Error, Result};

pub use axioms::{check_category_axioms, AxiomReport, AxiomViolation};
pub use exact::{
    cokernel_of, exact_sequences, is_exact_sequence, is_split_exact, kernel_of, EnumOrder, ExactCategory, ExactSeq,
    OppositeExact, SplitExact, DEFAULT_BUDGET,
};
pub use functor::{check_isomorphism, AddFunctor, FunctorReport, NatIso};
pub use groupoid::{
    category_of_elements, grothendieck, iso_groupoid, ElementsCategory, GrothendieckArrow, GrothendieckGroupoid,
    GroupValuedFunctor, IsoArrow, IsoGroupoid,
};

pub type ObjId = usize;

/// A morphism `source → target`, as coordinates in `hom(source, target)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub source: ObjId,
    pub target: ObjId,
    pub coords: Vec<Int>,
}

impl Morphism {
    pub fn new(source: ObjId, target: ObjId, coords: Vec<Int>) -> Self {
        Morphism { source, target, coords }
    }

    /// The same coordinates read in the opposite category.
    pub fn reversed(&self) -> Morphism {
        Morphism {
            source: self.target,
            target: self.source,
            coords: self.coords.clone(),
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "{}->{}[{}]", self.source, self.target, c.join(","))
    }
}

/// Biproduct data `a ⊕ b` with injections and projections.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub object: ObjId,
    pub in1: Morphism,
    pub in2: Morphism,
    pub pr1: Morphism,
    pub pr2: Morphism,
}

/// Bilinear composition `hom(b,c) × hom(a,b) → hom(a,c)` on generators,
/// indexed by the left generator.
#[derive(Clone, Debug, Default)]
struct GeneratorProducts {
    by_left: Vec<Vec<(usize, usize, Int)>>,
}

/// A finite category enriched in abelian groups, with an explicit zero
/// object.
pub struct AbCat {
    name: String,
    objects: Vec<String>,
    zero: ObjId,
    hom: Vec<FinAbGroup>,
    identity: Vec<Vec<Int>>,
    products: Vec<GeneratorProducts>,
    biproducts: HashMap<(ObjId, ObjId), Biproduct>,
}

impl fmt::Debug for AbCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbCat({}, objects={:?})", self.name, self.objects)
    }
}

impl AbCat {
    /// Builds a category from hom-groups, identities and a function giving
    /// the composite `e_u ∘ e_v` of generator `u` of `hom(b,c)` with
    /// generator `v` of `hom(a,b)`, as coordinates in `hom(a,c)`.
    pub fn from_generators<F>(
        name: impl Into<String>,
        objects: Vec<String>,
        zero: ObjId,
        hom: Vec<Vec<FinAbGroup>>,
        identity: Vec<Vec<Int>>,
        mut generator_product: F,
    ) -> Result<AbCat>
    where
        F: FnMut(ObjId, ObjId, ObjId, usize, usize) -> Vec<Int>,
    {
        let n = objects.len();
        if zero >= n || hom.len() != n || hom.iter().any(|row| row.len() != n) || identity.len() != n {
            return Err(Error::Dimension("category tables do not match the object count".into()));
        }
        let hom: Vec<FinAbGroup> = hom.into_iter().flatten().collect();
        for a in 0..n {
            if !hom[a * n + zero].is_trivial() || !hom[zero * n + a].is_trivial() {
                return Err(Error::Invalid(format!(
                    "object {} must have trivial homs to and from the zero object",
                    objects[a]
                )));
            }
            if identity[a].len() != hom[a * n + a].generator_count() {
                return Err(Error::Dimension(format!("identity of {} has the wrong length", objects[a])));
            }
        }
        let mut products = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = hom[b * n + c].generator_count();
                    let right = hom[a * n + b].generator_count();
                    let out = hom[a * n + c].generator_count();
                    let mut by_left = vec![Vec::new(); left];
                    for (u, entries) in by_left.iter_mut().enumerate() {
                        for v in 0..right {
                            let w = generator_product(a, b, c, u, v);
                            if w.len() != out {
                                return Err(Error::Dimension(format!(
                                    "generator product ({a},{b},{c}) has length {}, expected {out}",
                                    w.len()
                                )));
                            }
                            for (k, x) in w.into_iter().enumerate() {
                                if !x.is_zero() {
                                    entries.push((v, k, x));
                                }
                            }
                        }
                    }
                    products.push(GeneratorProducts { by_left });
                }
            }
        }
        Ok(AbCat {
            name: name.into(),
            objects,
            zero,
            hom,
            identity,
            products,
            biproducts: HashMap::new(),
        })
    }

    pub fn with_biproducts(mut self, biproducts: HashMap<(ObjId, ObjId), Biproduct>) -> Self {
        self.biproducts = biproducts;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn zero_object(&self) -> ObjId {
        self.zero
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &FinAbGroup {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn biproduct(&self, a: ObjId, b: ObjId) -> Option<&Biproduct> {
        self.biproducts.get(&(a, b))
    }

    pub fn biproducts(&self) -> &HashMap<(ObjId, ObjId), Biproduct> {
        &self.biproducts
    }

    pub fn identity(&self, a: ObjId) -> Morphism {
        Morphism::new(a, a, self.identity[a].clone())
    }

    pub fn zero_morphism(&self, a: ObjId, b: ObjId) -> Morphism {
        Morphism::new(a, b, self.hom(a, b).zero())
    }

    /// The `u`-th generator of `hom(a, b)` as a morphism.
    pub fn generator(&self, a: ObjId, b: ObjId, u: usize) -> Morphism {
        Morphism::new(a, b, self.hom(a, b).basis_vector(u))
    }

    pub fn morphism(&self, a: ObjId, b: ObjId, coords: Vec<Int>) -> Result<Morphism> {
        if coords.len() != self.hom(a, b).generator_count() {
            return Err(Error::Dimension(format!(
                "{} coordinates for hom({},{})",
                coords.len(),
                self.objects[a],
                self.objects[b]
            )));
        }
        Ok(Morphism::new(a, b, self.hom(a, b).reduce(&coords)))
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if f.target != g.source {
            return Err(Error::NotComposable(format!("{f:?} then {g:?}")));
        }
        Ok(self.compose_unchecked(g, f))
    }

    pub(crate) fn compose_unchecked(&self, g: &Morphism, f: &Morphism) -> Morphism {
        let (a, b, c) = (f.source, f.target, g.target);
        let raw = self.compose_raw(a, b, c, &g.coords, &f.coords);
        Morphism::new(a, c, self.hom(a, c).reduce(&raw))
    }

    fn compose_raw(&self, a: ObjId, b: ObjId, c: ObjId, g: &[Int], f: &[Int]) -> Vec<Int> {
        let n = self.objects.len();
        let table = &self.products[(a * n + b) * n + c];
        let mut out = vec![Int::zero(); self.hom(a, c).generator_count()];
        for (u, gu) in g.iter().enumerate() {
            if gu.is_zero() {
                continue;
            }
            for (v, w, x) in &table.by_left[u] {
                let fv = &f[*v];
                if !fv.is_zero() {
                    out[*w] += gu * fv * x;
                }
            }
        }
        out
    }

    /// Composes a path given in diagrammatic order `f₁, f₂, …` as `… ∘ f₂ ∘ f₁`.
    pub fn compose_path(&self, path: &[&Morphism]) -> Result<Morphism> {
        let (first, rest) = path
            .split_first()
            .ok_or_else(|| Error::Invalid("empty composition path".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, f| self.compose(f, &acc))
    }

    fn check_parallel(&self, f: &Morphism, g: &Morphism) -> Result<()> {
        if f.source != g.source || f.target != g.target {
            return Err(Error::NotComposable(format!("{f:?} and {g:?} are not parallel")));
        }
        Ok(())
    }

    pub fn add(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        self.check_parallel(f, g)?;
        let h = self.hom(f.source, f.target);
        Ok(Morphism::new(f.source, f.target, h.reduce(&add_vec(&f.coords, &g.coords))))
    }

    pub fn sub(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        self.check_parallel(f, g)?;
        let h = self.hom(f.source, f.target);
        Ok(Morphism::new(f.source, f.target, h.reduce(&sub_vec(&f.coords, &g.coords))))
    }

    pub fn neg(&self, f: &Morphism) -> Morphism {
        let h = self.hom(f.source, f.target);
        Morphism::new(f.source, f.target, h.reduce(&neg_vec(&f.coords)))
    }

    pub fn is_zero(&self, f: &Morphism) -> bool {
        self.hom(f.source, f.target).is_zero(&f.coords)
    }

    pub fn equal(&self, f: &Morphism, g: &Morphism) -> bool {
        f.source == g.source && f.target == g.target && self.hom(f.source, f.target).elems_equal(&f.coords, &g.coords)
    }

    /// Hashable normal form of a morphism.
    pub fn key(&self, f: &Morphism) -> (ObjId, ObjId, Vec<Int>) {
        (f.source, f.target, self.hom(f.source, f.target).canonical(&f.coords))
    }

    /// `x ↦ f ∘ x` as a map `hom(a, b) → hom(a, c)` for `f: b → c`.
    pub fn postcompose_hom(&self, f: &Morphism, a: ObjId) -> GroupHom {
        let (b, c) = (f.source, f.target);
        let src = self.hom(a, b);
        let cols: Vec<Vec<Int>> = (0..src.generator_count())
            .map(|v| self.compose_raw(a, b, c, &f.coords, &src.basis_vector(v)))
            .collect();
        let m = IntMatrix::from_columns(self.hom(a, c).generator_count(), &cols).expect("column lengths agree");
        GroupHom::new_unchecked(src.clone(), self.hom(a, c).clone(), m)
    }

    /// `x ↦ x ∘ f` as a map `hom(b, c) → hom(a, c)` for `f: a → b`.
    pub fn precompose_hom(&self, f: &Morphism, c: ObjId) -> GroupHom {
        let (a, b) = (f.source, f.target);
        let src = self.hom(b, c);
        let cols: Vec<Vec<Int>> = (0..src.generator_count())
            .map(|u| self.compose_raw(a, b, c, &src.basis_vector(u), &f.coords))
            .collect();
        let m = IntMatrix::from_columns(self.hom(a, c).generator_count(), &cols).expect("column lengths agree");
        GroupHom::new_unchecked(src.clone(), self.hom(a, c).clone(), m)
    }

    /// All morphisms `a → b` (finite hom-groups only).
    pub fn elements(&self, a: ObjId, b: ObjId) -> Result<impl Iterator<Item = Morphism> + '_> {
        Ok(self.hom(a, b).elements()?.map(move |c| Morphism::new(a, b, c)))
    }

    /// Some `r` with `r ∘ f = id`.
    pub fn left_inverse(&self, f: &Morphism) -> Option<Morphism> {
        let id = self.identity(f.source);
        self.precompose_hom(f, f.source)
            .preimage(&id.coords)
            .map(|c| Morphism::new(f.target, f.source, c))
    }

    /// Some `t` with `f ∘ t = id`.
    pub fn right_inverse(&self, f: &Morphism) -> Option<Morphism> {
        let id = self.identity(f.target);
        self.postcompose_hom(f, f.target)
            .preimage(&id.coords)
            .map(|c| Morphism::new(f.target, f.source, c))
    }

    /// The two-sided inverse, if `f` is an isomorphism.
    pub fn inverse(&self, f: &Morphism) -> Option<Morphism> {
        // A left inverse of an isomorphism is unique, so it suffices to test one.
        let g = self.left_inverse(f)?;
        let fg = self.compose_unchecked(f, &g);
        self.equal(&fg, &self.identity(f.target)).then_some(g)
    }

    pub fn is_iso(&self, f: &Morphism) -> bool {
        self.inverse(f).is_some()
    }

    /// The opposite category, with the same coordinates on reversed homs.
    pub fn opposite(&self) -> AbCat {
        let n = self.objects.len();
        let hom: Vec<Vec<FinAbGroup>> = (0..n).map(|a| (0..n).map(|b| self.hom(b, a).clone()).collect()).collect();
        let identity = self.identity.clone();
        let mut op = AbCat::from_generators(
            format!("{}^op", self.name),
            self.objects.clone(),
            self.zero,
            hom,
            identity,
            |a, b, c, u, v| {
                // g: b→c in op is g: c→b here, f: a→b in op is f: b→a here; g∘f in op is f∘g.
                let g = self.hom(c, b).basis_vector(u);
                let f = self.hom(b, a).basis_vector(v);
                self.compose_raw(c, b, a, &f, &g)
            },
        )
        .expect("opposite tables mirror a valid category");
        op.biproducts = self
            .biproducts
            .iter()
            .map(|(&k, bp)| {
                (
                    k,
                    Biproduct {
                        object: bp.object,
                        in1: bp.pr1.reversed(),
                        in2: bp.pr2.reversed(),
                        pr1: bp.in1.reversed(),
                        pr2: bp.in2.reversed(),
                    },
                )
            })
            .collect();
        op
    }

    #[cfg(test)]
    pub(crate) fn corrupt_generator_product(&mut self, a: ObjId, b: ObjId, c: ObjId, u: usize, entries: Vec<(usize, usize, Int)>) {
        let n = self.objects.len();
        self.products[(a * n + b) * n + c].by_left[u] = entries;
    }
}

/// Convenience for wrapping freshly built categories.
pub fn shared(cat: AbCat) -> Arc<AbCat> {
    Arc::new(cat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::int_vec;

    fn ring_cat(n: u64) -> AbCat {
        let t = FinAbGroup::trivial();
        let r = FinAbGroup::cyclic(n);
        let hom = vec![vec![t.clone(), t.clone()], vec![t, r]];
        AbCat::from_generators("ring", vec!["0".into(), "R".into()], 0, hom, vec![vec![], int_vec(&[1])], |_, _, _, _, _| {
            int_vec(&[1])
        })
        .unwrap()
    }

    #[test]
    fn ring_category_satisfies_axioms() {
        let c = ring_cat(4);
        let report = check_category_axioms(&c);
        assert!(report.passed());
        assert!(report.checked > 0);
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut c = ring_cat(4);
        // e·e = 2 breaks both unit laws
        c.corrupt_generator_product(1, 1, 1, 0, vec![(0, 0, Int::from(2))]);
        let report = check_category_axioms(&c);
        assert!(!report.passed());
        let v = &report.violations[0];
        assert_eq!(v.law, "left-unit");
        assert_eq!(v.objects, vec![1, 1]);
    }

    #[test]
    fn zero_object_homs_must_be_trivial() {
        let r = FinAbGroup::cyclic(2);
        let hom = vec![vec![r.clone(), r.clone()], vec![r.clone(), r]];
        let err = AbCat::from_generators("bad", vec!["0".into(), "R".into()], 0, hom, vec![int_vec(&[1]); 2], |_, _, _, _, _| {
            int_vec(&[1])
        });
        assert!(err.is_err());
    }

    #[test]
    fn composition_and_inverses() {
        let c = ring_cat(4);
        let three = c.morphism(1, 1, int_vec(&[3])).unwrap();
        assert_eq!(c.compose(&three, &three).unwrap().coords, int_vec(&[1]));
        assert!(c.is_iso(&three));
        assert!(!c.is_iso(&c.morphism(1, 1, int_vec(&[2])).unwrap()));
        assert!(c.compose(&c.identity(0), &three).is_err());
    }

    #[test]
    fn opposite_is_a_category() {
        let c = ring_cat(6);
        assert!(check_category_axioms(&c.opposite()).passed());
    }

    #[test]
    fn split_sequences_in_ring_category() {
        // Only 0 → R → R → 0 style sequences with an iso in the middle exist.
        let c = shared(ring_cat(4));
        let e = SplitExact::new(c.clone());
        let seqs = exact_sequences(&e, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        let epi_first = exact_sequences(&e, EnumOrder::EpiFirst, DEFAULT_BUDGET).unwrap();
        assert_eq!(seqs, epi_first);
        // 0→0→0, 0→R→R (2 units), R→R→0 (2 units)
        assert_eq!(seqs.len(), 5);
        let unit = c.identity(1);
        let q = cokernel_of(&e, &unit).unwrap();
        assert_eq!(q.target, 0);
        let i = kernel_of(&e, &unit).unwrap();
        assert_eq!(i.source, 0);
        assert!(is_exact_sequence(&e, &c.identity(1), &c.identity(1)).is_ok());
        assert!(is_exact_sequence(&e, &c.identity(0), &c.identity(1)).is_err());
    }

    #[test]
    fn opposite_exact_structure_reverses_sequences() {
        let c = shared(ring_cat(4));
        let e: Arc<dyn ExactCategory> = Arc::new(SplitExact::new(c));
        let op = OppositeExact::new(e.clone());
        let a = exact_sequences(e.as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        let b = exact_sequences(&op, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.len(), b.len());
    }

    #[test]
    fn budget_is_enforced() {
        let c = shared(ring_cat(4));
        let e = SplitExact::new(c);
        assert!(matches!(exact_sequences(&e, EnumOrder::MonoFirst, 3), Err(Error::Budget { .. })));
    }
}
