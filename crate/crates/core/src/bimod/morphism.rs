use num_traits::One;

use crate::abgrp::{GroupHom, Int, IntMatrix};
use crate::cat::ObjId;
use crate::error::{Error, Result};

use super::Bimodule;

/// A natural transformation of bimodules over the same category, one group
/// homomorphism per object pair.
#[derive(Clone, Debug)]
pub struct BimoduleMorphism {
    components: Vec<GroupHom>,
    n: usize,
}

impl BimoduleMorphism {
    /// Validates types and naturality in both variables on generators.
    pub fn new(source: &Bimodule, target: &Bimodule, components: Vec<GroupHom>) -> Result<BimoduleMorphism> {
        let cat = source.base();
        if !std::sync::Arc::ptr_eq(cat, target.base()) {
            return Err(Error::Invalid("bimodules over different categories".into()));
        }
        let n = cat.object_count();
        if components.len() != n * n {
            return Err(Error::Dimension("one component per object pair is required".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let h = &components[a * n + b];
                if h.source() != source.value(a, b) || h.target() != target.value(a, b) {
                    return Err(Error::GroupMismatch(format!("component at ({a},{b}) has the wrong type")));
                }
            }
        }
        let eta = |a: ObjId, b: ObjId| &components[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for u in 0..cat.hom(a, b).generator_count() {
                    let f = cat.generator(a, b, u);
                    for c in 0..n {
                        let lhs = eta(c, b).compose(&source.push(&f, c))?;
                        let rhs = target.push(&f, c).compose(eta(c, a))?;
                        if !lhs.equals(&rhs) {
                            return Err(Error::Invalid(format!("not natural in the second variable at ({a},{b}), u={u}")));
                        }
                        let lhs = eta(a, c).compose(&source.pull(&f, c))?;
                        let rhs = target.pull(&f, c).compose(eta(b, c))?;
                        if !lhs.equals(&rhs) {
                            return Err(Error::Invalid(format!("not natural in the first variable at ({a},{b}), u={u}")));
                        }
                    }
                }
            }
        }
        Ok(BimoduleMorphism { components, n })
    }

    pub fn component(&self, a: ObjId, b: ObjId) -> &GroupHom {
        &self.components[a * self.n + b]
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(GroupHom::is_iso)
    }
}

/// The natural isomorphism `M(X) ⊕ M(Y) → M(X ∨ Y)` for pointed sets with
/// `x` and `y` points, identifying the basepoints.
pub fn smash_wedge_iso(m: &Bimodule, x: usize, y: usize) -> Result<(Bimodule, Bimodule, BimoduleMorphism)> {
    let mx = m.smash(x)?;
    let my = m.smash(y)?;
    let sum = mx.direct_sum(&my)?;
    let wedge = m.smash(x + y - 1)?;
    let n = m.base().object_count();
    let mut comps = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let g = m.value(a, b).generator_count();
            let mut mat = IntMatrix::zeros(g * (x + y - 1), g * (x + y));
            for t in 0..g {
                for p in 0..x {
                    mat[(p * g + t, p * g + t)] = Int::one();
                }
                for q in 0..y {
                    let dst = if q == 0 { 0 } else { x - 1 + q };
                    mat[(dst * g + t, (x + q) * g + t)] = Int::one();
                }
            }
            comps.push(GroupHom::new(sum.value(a, b).clone(), wedge.value(a, b).clone(), mat)?);
        }
    }
    let iso = BimoduleMorphism::new(&sum, &wedge, comps)?;
    Ok((sum, wedge, iso))
}
