use std::sync::Arc;

use num_traits::Zero;

use crate::abgrp::Int;
use crate::bimod::Bimodule;
use crate::cat::{check_isomorphism, exact_sequences, AddFunctor, EnumOrder, ExactCategory, FunctorReport, DEFAULT_BUDGET};
use crate::error::{Error, Result};

use super::SemidirectCat;

/// `C ⋉ M(B ∨ X)` against `(C ⋉ M(B)) ⋉ p^*M(X)`, with the comparison
/// functor between them.
pub struct WedgeIso {
    pub lhs: SemidirectCat,
    pub inner: Arc<SemidirectCat>,
    pub rhs: SemidirectCat,
    pub functor: AddFunctor,
}

/// Pointed sets `B` and `X` have `b` and `x` points, basepoint first.
pub fn semidirect_wedge_iso(base: Arc<dyn ExactCategory>, m: &Bimodule, b: usize, x: usize) -> Result<WedgeIso> {
    if b == 0 || x == 0 {
        return Err(Error::Invalid("a pointed set needs a basepoint".into()));
    }
    if !Arc::ptr_eq(base.cat(), m.base()) {
        return Err(Error::Invalid("bimodule is not defined over the base category".into()));
    }
    let lhs = SemidirectCat::unchecked(base.clone(), Arc::new(m.smash(b + x - 1)?))?;
    let inner = Arc::new(SemidirectCat::unchecked(base.clone(), Arc::new(m.smash(b)?))?);
    let outer = m.smash(x)?.restrict_along(inner.projection())?;
    let rhs = SemidirectCat::unchecked(inner.clone(), Arc::new(outer))?;
    let c = base.cat().clone();
    let functor = AddFunctor::from_generator_images(
        lhs.semidirect_cat().clone(),
        rhs.semidirect_cat().clone(),
        c.objects().collect(),
        |s, t, u| {
            let gb = c.hom(s, t).generator_count();
            let g = m.value(s, t).generator_count();
            let mut v = vec![Int::zero(); gb + (b + x) * g];
            let pos = if u < gb {
                u
            } else {
                let (p, k) = ((u - gb) / g, (u - gb) % g);
                if p < b {
                    gb + p * g + k
                } else {
                    gb + (p + 1) * g + k
                }
            };
            v[pos] = Int::from(1);
            v
        },
    )?;
    Ok(WedgeIso {
        lhs,
        inner,
        rhs,
        functor,
    })
}

impl WedgeIso {
    pub fn check(&self) -> FunctorReport {
        check_isomorphism(&self.functor)
    }

    /// The functor maps the exact sequences of the left side bijectively
    /// onto those of the right side.
    pub fn exact_sequences_correspond(&self) -> Result<bool> {
        let ours = exact_sequences(&self.lhs, EnumOrder::MonoFirst, DEFAULT_BUDGET)?;
        let theirs = exact_sequences(&self.rhs, EnumOrder::MonoFirst, DEFAULT_BUDGET)?;
        let mapped = ours
            .iter()
            .all(|s| self.rhs.is_exact(&self.functor.apply(&s.i), &self.functor.apply(&s.q)));
        Ok(mapped && ours.len() == theirs.len())
    }
}
