//! Exact categories with bimodules, computed exactly over finite rings.
//!
//! The crate builds finite Ab-enriched categories (free modules over `Z/n`
//! and over square-zero extensions of it), bimodules over them, the
//! semidirect product `C⋉M` with its exact structure, the `S_p`-construction
//! with the extended bimodule `S_pM`, and Grothendieck groups. Every
//! existence claim is decided by integer linear algebra.

pub mod abgrp;
pub mod cat;
pub mod model;
pub mod bimod;
pub mod semidirect;
pub mod sconstr;
pub mod kzero;
mod error;

pub use error::{Error, Result};
