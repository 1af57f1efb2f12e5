//! The semidirect product `C ⋉ M` of an exact category with a bimodule,
//! its exact structure and the constructive algorithms around it.

mod extension;
mod grothendieck;
mod ops;
mod wedge;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::abgrp::{add_vec, Int};
use crate::bimod::{check_biexact, Bimodule};
use crate::cat::{
    exact_sequences, AbCat, AddFunctor, Biproduct, EnumOrder, ExactCategory, ExactSeq, Morphism, ObjId, OppositeExact,
    DEFAULT_BUDGET,
};
use crate::error::{Error, Result};

pub use extension::{
    classify_extension, dual_numbers_block_form, dual_numbers_extension, dual_numbers_iso, dual_numbers_kernel_iso, Classification,
    SplitExtension,
};
pub use grothendieck::{grothendieck_comparison, GrothendieckComparison};
pub use ops::{
    cokernel_in_semidirect, kernel_in_semidirect, CokernelSolution, normalize_sequence, pullback_along_epi, PullbackMediator, KernelSolution, Normalized,
    PullbackSquare,
};
pub use wedge::{semidirect_wedge_iso, WedgeIso};

/// `C ⋉ M`: objects of `C`, `hom(a,b) = C(a,b) ⊕ M(a,b)` with coordinates
/// `[base | bimodule]`, and `(f,m) ∘ (g,n) = (f∘g, f_*n + g^*m)`.
pub struct SemidirectCat {
    base: Arc<dyn ExactCategory>,
    bimodule: Arc<Bimodule>,
    cat: Arc<AbCat>,
    p: AddFunctor,
    s: AddFunctor,
    memo: RwLock<HashMap<(Vec<Int>, Vec<Int>, [ObjId; 3]), bool>>,
}

impl std::fmt::Debug for SemidirectCat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SemidirectCat({})", self.cat.name())
    }
}

/// Builds `C ⋉ M` after checking biexactness of `M` on every exact
/// sequence of `C`.
pub fn build_semidirect(base: Arc<dyn ExactCategory>, bimodule: Arc<Bimodule>) -> Result<SemidirectCat> {
    SemidirectCat::new(base, bimodule)
}

impl SemidirectCat {
    pub fn new(base: Arc<dyn ExactCategory>, bimodule: Arc<Bimodule>) -> Result<SemidirectCat> {
        let witnesses = exact_sequences(base.as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET)?;
        Self::with_witnesses(base, bimodule, &witnesses)
    }

    /// Checks biexactness against the given witnesses only.
    pub fn with_witnesses(base: Arc<dyn ExactCategory>, bimodule: Arc<Bimodule>, witnesses: &[ExactSeq]) -> Result<SemidirectCat> {
        let report = check_biexact(&bimodule, base.as_ref(), witnesses)?;
        if let Some(f) = report.failures.first() {
            return Err(Error::NotBiexact(format!(
                "{} is not exact in the {:?} variable on witness {} at object {}",
                bimodule.name(),
                f.variable,
                f.sequence,
                base.cat().object_name(f.object)
            )));
        }
        Self::unchecked(base, bimodule)
    }

    /// Builds the category without the biexactness check.
    pub(crate) fn unchecked(base: Arc<dyn ExactCategory>, bimodule: Arc<Bimodule>) -> Result<SemidirectCat> {
        let c = base.cat().clone();
        if !Arc::ptr_eq(&c, bimodule.base()) {
            return Err(Error::Invalid("bimodule is not defined over the base category".into()));
        }
        let n = c.object_count();
        let gb = |a: ObjId, b: ObjId| c.hom(a, b).generator_count();
        let hom: Vec<Vec<_>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| crate::abgrp::FinAbGroup::direct_sum(&[c.hom(a, b).clone(), bimodule.value(a, b).clone()]))
                    .collect()
            })
            .collect();
        let identity: Vec<Vec<Int>> = (0..n)
            .map(|a| {
                let mut v = c.identity(a).coords;
                v.extend(bimodule.value(a, a).zero());
                v
            })
            .collect();
        let m = bimodule.clone();
        let cc = c.clone();
        let sd = AbCat::from_generators(
            format!("{}⋉{}", c.name(), bimodule.name()),
            c.object_names().to_vec(),
            c.zero_object(),
            hom,
            identity,
            move |a, b, d, u, v| {
                // u indexes hom(b,d) ⊕ M(b,d), v indexes hom(a,b) ⊕ M(a,b)
                let (ub, vb) = (gb(b, d), gb(a, b));
                let mut out = vec![Int::zero(); gb(a, d) + m.value(a, d).generator_count()];
                match (u < ub, v < vb) {
                    (true, true) => {
                        let prod = cc.compose(&cc.generator(b, d, u), &cc.generator(a, b, v)).expect("composable");
                        out[..prod.coords.len()].clone_from_slice(&prod.coords);
                    }
                    (true, false) => {
                        let x = m.push_elem(&cc.generator(b, d, u), a, &m.value(a, b).basis_vector(v - vb));
                        out[gb(a, d)..].clone_from_slice(&x);
                    }
                    (false, true) => {
                        let x = m.pull_elem(&cc.generator(a, b, v), d, &m.value(b, d).basis_vector(u - ub));
                        out[gb(a, d)..].clone_from_slice(&x);
                    }
                    (false, false) => {}
                }
                out
            },
        )?;
        let biproducts = c
            .biproducts()
            .iter()
            .map(|(&k, bp)| {
                let lift = |f: &Morphism| {
                    let mut v = f.coords.clone();
                    v.extend(bimodule.value(f.source, f.target).zero());
                    Morphism::new(f.source, f.target, v)
                };
                (
                    k,
                    Biproduct {
                        object: bp.object,
                        in1: lift(&bp.in1),
                        in2: lift(&bp.in2),
                        pr1: lift(&bp.pr1),
                        pr2: lift(&bp.pr2),
                    },
                )
            })
            .collect();
        let cat = Arc::new(sd.with_biproducts(biproducts));
        let objects: Vec<ObjId> = (0..n).collect();
        let p = AddFunctor::from_generator_images(cat.clone(), c.clone(), objects.clone(), |a, b, u| {
            let mut v = c.hom(a, b).zero();
            if u < gb(a, b) {
                v[u] = Int::from(1);
            }
            v
        })?;
        let s = AddFunctor::from_generator_images(c.clone(), cat.clone(), objects, |a, b, u| {
            let mut v = cat.hom(a, b).zero();
            v[u] = Int::from(1);
            v
        })?;
        Ok(SemidirectCat {
            base,
            bimodule,
            cat,
            p,
            s,
            memo: RwLock::default(),
        })
    }

    pub fn base(&self) -> &Arc<dyn ExactCategory> {
        &self.base
    }

    pub fn base_cat(&self) -> &Arc<AbCat> {
        self.base.cat()
    }

    pub fn bimodule(&self) -> &Arc<Bimodule> {
        &self.bimodule
    }

    pub fn semidirect_cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    /// The projection `p: C ⋉ M → C`.
    pub fn projection(&self) -> &AddFunctor {
        &self.p
    }

    /// The zero section `s: C → C ⋉ M`.
    pub fn section(&self) -> &AddFunctor {
        &self.s
    }

    fn base_len(&self, a: ObjId, b: ObjId) -> usize {
        self.base.cat().hom(a, b).generator_count()
    }

    /// `(f, m) ↦ f` and `m`.
    pub fn split(&self, f: &Morphism) -> (Morphism, Vec<Int>) {
        let k = self.base_len(f.source, f.target);
        (
            Morphism::new(f.source, f.target, f.coords[..k].to_vec()),
            f.coords[k..].to_vec(),
        )
    }

    /// `(f, m)` as a morphism of `C ⋉ M`.
    pub fn join(&self, f: &Morphism, m: &[Int]) -> Morphism {
        let mut v = self.base.cat().hom(f.source, f.target).reduce(&f.coords);
        v.extend(self.bimodule.value(f.source, f.target).reduce(m));
        Morphism::new(f.source, f.target, v)
    }

    /// `q_* m + i^* n ∈ M(a, c)` for `(i, m): a → b` and `(q, n): b → c`.
    pub fn obstruction(&self, i: &Morphism, q: &Morphism) -> Vec<Int> {
        let (bi, m) = self.split(i);
        let (bq, n) = self.split(q);
        let x = self.bimodule.push_elem(&bq, i.source, &m);
        let y = self.bimodule.pull_elem(&bi, q.target, &n);
        self.bimodule.value(i.source, q.target).reduce(&add_vec(&x, &y))
    }

    /// The opposite `C^op ⋉ M^op`, whose coordinates agree with those of
    /// `(C ⋉ M)^op`.
    pub fn opposite(&self) -> Result<SemidirectCat> {
        let op_base: Arc<dyn ExactCategory> = Arc::new(OppositeExact::new(self.base.clone()));
        let op_m = Arc::new(self.bimodule.opposite(op_base.cat().clone())?);
        SemidirectCat::unchecked(op_base, op_m)
    }

    /// The canonical split extension `(p, s, id)`.
    pub fn canonical_extension(&self) -> Result<SplitExtension> {
        SplitExtension::new(self.base.clone(), self.p.clone(), self.s.clone())
    }
}

impl ExactCategory for SemidirectCat {
    fn cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    fn is_exact(&self, i: &Morphism, q: &Morphism) -> bool {
        let key = (
            self.cat.key(i).2,
            self.cat.key(q).2,
            [i.source, i.target, q.target],
        );
        if let Some(&v) = self.memo.read().expect("memo lock").get(&key) {
            return v;
        }
        let (bi, _) = self.split(i);
        let (bq, _) = self.split(q);
        let v = self.base.is_exact(&bi, &bq)
            && self.bimodule.value(i.source, q.target).is_zero(&self.obstruction(i, q));
        self.memo.write().expect("memo lock").insert(key, v);
        v
    }

    fn mono_candidate(&self, i: &Morphism) -> bool {
        self.base.mono_candidate(&self.split(i).0)
    }

    fn epi_candidate(&self, q: &Morphism) -> bool {
        self.base.epi_candidate(&self.split(q).0)
    }
}

#[cfg(test)]
mod tests;
