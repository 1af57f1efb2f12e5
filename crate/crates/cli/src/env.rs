//! Builds library values from a parsed model file.

use std::collections::HashMap;
use std::sync::Arc;

use exactkit::bimod::{smash_with_pointed_set, Bimodule};
use exactkit::cat::{AbCat, ExactCategory};
use exactkit::model::{build_free_module_category, FiniteRing, FreeModuleCat};
use exactkit::semidirect::SemidirectCat;

use crate::dsl::{BimoduleExpr, CategoryExpr, Decl, ModelSpec, RingExpr};
use crate::error::CliError;

#[derive(Clone)]
pub enum CategoryValue {
    Free(FreeModuleCat),
    Semidirect(Arc<SemidirectCat>),
}

impl CategoryValue {
    pub fn exact(&self) -> Arc<dyn ExactCategory> {
        match self {
            CategoryValue::Free(c) => c.exact(),
            CategoryValue::Semidirect(sd) => sd.clone(),
        }
    }

    pub fn cat(&self) -> &Arc<AbCat> {
        match self {
            CategoryValue::Free(c) => c.cat(),
            CategoryValue::Semidirect(sd) => sd.semidirect_cat(),
        }
    }
}

pub struct BimoduleValue {
    pub bimodule: Arc<Bimodule>,
    /// Name of the category it lives over.
    pub category: String,
}

#[derive(Default)]
pub struct Env {
    pub rings: HashMap<String, FiniteRing>,
    pub categories: HashMap<String, CategoryValue>,
    pub bimodules: HashMap<String, BimoduleValue>,
}

fn at(line: usize, e: exactkit::Error) -> CliError {
    CliError::Build { line, source: e }
}

impl Env {
    pub fn build(spec: &ModelSpec) -> Result<Env, CliError> {
        let mut env = Env::default();
        for s in &spec.decls {
            match &s.decl {
                Decl::Ring { name, expr } => {
                    let ring = match expr {
                        RingExpr::Zn { n } => FiniteRing::zn(*n),
                        RingExpr::Dual { base, m } => FiniteRing::dual(&env.rings[base], *m),
                    }
                    .map_err(|e| at(s.line, e))?;
                    env.rings.insert(name.clone(), ring);
                }
                Decl::Category { name, expr } => {
                    let value = match expr {
                        CategoryExpr::FreeModules { ring, max_rank } => CategoryValue::Free(
                            build_free_module_category(env.rings[ring].clone(), *max_rank).map_err(|e| at(s.line, e))?,
                        ),
                        CategoryExpr::Semidirect { base, bimodule } => {
                            let bm = &env.bimodules[bimodule];
                            if bm.category != *base {
                                return Err(CliError::Model {
                                    line: s.line,
                                    message: format!("`{bimodule}` lives over `{}`, not `{base}`", bm.category),
                                });
                            }
                            let sd = SemidirectCat::new(env.categories[base].exact(), bm.bimodule.clone())
                                .map_err(|e| at(s.line, e))?;
                            CategoryValue::Semidirect(Arc::new(sd))
                        }
                    };
                    env.categories.insert(name.clone(), value);
                }
                Decl::Bimodule { name, expr } => {
                    let value = match expr {
                        BimoduleExpr::HomTensor { category, m } => match &env.categories[category] {
                            CategoryValue::Free(c) => BimoduleValue {
                                bimodule: Arc::new(Bimodule::hom_tensor(c, *m).map_err(|e| at(s.line, e))?),
                                category: category.clone(),
                            },
                            CategoryValue::Semidirect(_) => {
                                return Err(CliError::Model {
                                    line: s.line,
                                    message: format!("hom_tensor needs a category of free modules, `{category}` is a semidirect product"),
                                })
                            }
                        },
                        BimoduleExpr::Zero { category } => BimoduleValue {
                            bimodule: Arc::new(Bimodule::zero(env.categories[category].cat().clone())),
                            category: category.clone(),
                        },
                        BimoduleExpr::Smash { bimodule, points } => {
                            let inner = &env.bimodules[bimodule];
                            BimoduleValue {
                                bimodule: Arc::new(smash_with_pointed_set(&inner.bimodule, *points).map_err(|e| at(s.line, e))?),
                                category: inner.category.clone(),
                            }
                        }
                    };
                    env.bimodules.insert(name.clone(), value);
                }
                Decl::Run { .. } => {}
            }
        }
        Ok(env)
    }
}
