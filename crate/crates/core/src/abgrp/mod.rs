//! Exact integer linear algebra and finitely generated abelian groups.
//!
//! Every hom-group, bimodule value and K₀ presentation in the crate is a
//! [`FinAbGroup`]; every "a solution exists" step reduces to [`solve`].

mod group;
mod hom;
mod matrix;
mod snf;

pub use group::{Elements, FinAbGroup, GroupElement};
pub use hom::{hom_is_epi, hom_is_mono, image_order, is_short_exact, pullback, GroupHom, Pullback};
pub(crate) use hom::PreimageSolver;
pub use matrix::{int_vec, Int, IntMatrix};
pub(crate) use matrix::{add_vec, neg_vec, sub_vec};
pub use snf::{kernel_generators, smith_normal_form, solve, solve_with, SmithForm};
