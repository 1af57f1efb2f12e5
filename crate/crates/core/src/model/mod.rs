//! Concrete models: finite rings, free module categories over them, and
//! a small non-split exact category of cyclic groups.

mod cyclic;
mod free;
mod ring;

pub use cyclic::CyclicGroupCat;
pub use free::{build_free_module_category, integer_matrix, FreeModuleCat};
pub(crate) use free::entry_index;
pub use ring::{FiniteRing, RingHom, RingKind};

use crate::abgrp::{FinAbGroup, GroupHom};
use crate::cat::Morphism;

/// `A ⋉ Z/m` for `A = Z/n`.
pub fn build_dual_numbers(base: &FiniteRing, m: u64) -> crate::Result<FiniteRing> {
    FiniteRing::dual(base, m)
}

/// The underlying map `(Z/n)^r → (Z/n)^s` of a morphism of free `Z/n`-modules.
pub fn underlying_hom(n: u64, f: &Morphism) -> GroupHom {
    GroupHom::new(
        FinAbGroup::zn_power(n, f.source),
        FinAbGroup::zn_power(n, f.target),
        integer_matrix(f),
    )
    .expect("matrices over Z/n are well defined")
}
