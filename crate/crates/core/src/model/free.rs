use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::abgrp::{FinAbGroup, Int, IntMatrix};
use crate::cat::{AbCat, AddFunctor, Biproduct, ExactCategory, Morphism, ObjId, SplitExact};
use crate::error::{Error, Result};

use super::ring::{FiniteRing, RingHom};

/// Free modules `R^0, …, R^max_rank` over a finite ring, with the split
/// exact structure. Object `r` is `R^r`; a morphism `R^r → R^s` is an
/// `s × r` matrix acting on column vectors.
#[derive(Clone)]
pub struct FreeModuleCat {
    ring: FiniteRing,
    max_rank: usize,
    cat: Arc<AbCat>,
    exact: Arc<SplitExact>,
}

impl std::fmt::Debug for FreeModuleCat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FreeModuleCat({:?}, max_rank={})", self.ring, self.max_rank)
    }
}

/// Coordinate of ring generator `k` at entry `(i, j)` of an `s × r` matrix.
pub(crate) fn entry_index(r: usize, g: usize, i: usize, j: usize, k: usize) -> usize {
    (i * r + j) * g + k
}

pub fn build_free_module_category(ring: FiniteRing, max_rank: usize) -> Result<FreeModuleCat> {
    FreeModuleCat::new(ring, max_rank)
}

impl FreeModuleCat {
    pub fn new(ring: FiniteRing, max_rank: usize) -> Result<FreeModuleCat> {
        if max_rank == 0 {
            return Err(Error::Invalid("max_rank must be at least 1".into()));
        }
        let n = max_rank + 1;
        let g = ring.generator_count();
        let rank_group = |r: usize, s: usize| -> FinAbGroup {
            let copies = vec![ring.additive().clone(); r * s];
            FinAbGroup::direct_sum(&copies)
        };
        let hom: Vec<Vec<FinAbGroup>> = (0..n).map(|a| (0..n).map(|b| rank_group(a, b)).collect()).collect();
        let identity: Vec<Vec<Int>> = (0..n)
            .map(|r| {
                let mut v = vec![Int::zero(); r * r * g];
                for i in 0..r {
                    for (k, x) in ring.one().into_iter().enumerate() {
                        v[entry_index(r, g, i, i, k)] = x;
                    }
                }
                v
            })
            .collect();
        let objects: Vec<String> = (0..n)
            .map(|r| match r {
                0 => "0".to_string(),
                1 => "R".to_string(),
                _ => format!("R^{r}"),
            })
            .collect();
        // generator u of hom(b,c) is entry (i,l) with ring gen k1 (a (c×b) matrix),
        // generator v of hom(a,b) is entry (l',j) with ring gen k2 (a (b×a) matrix).
        let cat = AbCat::from_generators(
            format!("free({}, {max_rank})", ring.name()),
            objects,
            0,
            hom,
            identity,
            |a, b, c, u, v| {
                let mut out = vec![Int::zero(); c * a * g];
                let (k1, il) = (u % g, u / g);
                let (i, l) = (il / b, il % b);
                let (k2, lj) = (v % g, v / g);
                let (l2, j) = (lj / a, lj % a);
                if l == l2 {
                    for (k, x) in ring.generator_product(k1, k2).iter().enumerate() {
                        out[entry_index(a, g, i, j, k)] = x.clone();
                    }
                }
                out
            },
        )?;
        let mut biproducts = HashMap::new();
        for r in 0..n {
            for s in 0..n - r {
                let t = r + s;
                // in1: R^r → R^t is [I; 0], in2: R^s → R^t is [0; I]
                let in1 = Morphism::new(r, t, diag_block(&ring, t, r, 0, 0, r));
                let in2 = Morphism::new(s, t, diag_block(&ring, t, s, r, 0, s));
                let pr1 = Morphism::new(t, r, diag_block(&ring, r, t, 0, 0, r));
                let pr2 = Morphism::new(t, s, diag_block(&ring, s, t, 0, r, s));
                biproducts.insert(
                    (r, s),
                    Biproduct {
                        object: t,
                        in1,
                        in2,
                        pr1,
                        pr2,
                    },
                );
            }
        }
        let cat = Arc::new(cat.with_biproducts(biproducts));
        let exact = Arc::new(SplitExact::new(cat.clone()));
        Ok(FreeModuleCat {
            ring,
            max_rank,
            cat,
            exact,
        })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    pub fn exact(&self) -> Arc<dyn ExactCategory> {
        self.exact.clone()
    }

    /// Ring-element entries of a morphism, row-major.
    pub fn entries(&self, f: &Morphism) -> Vec<Vec<Vec<Int>>> {
        let g = self.ring.generator_count();
        let (r, s) = (f.source, f.target);
        (0..s)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let start = entry_index(r, g, i, j, 0);
                        self.ring.additive().reduce(&f.coords[start..start + g])
                    })
                    .collect()
            })
            .collect()
    }

    /// The morphism `R^r → R^s` with the given ring-element entries.
    pub fn from_entries(&self, r: ObjId, s: ObjId, entries: &[Vec<Vec<Int>>]) -> Result<Morphism> {
        let g = self.ring.generator_count();
        if entries.len() != s || entries.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension(format!("expected a {s}×{r} matrix")));
        }
        let mut v = vec![Int::zero(); r * s * g];
        for (i, row) in entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.len() != g {
                    return Err(Error::Dimension("ring element of the wrong length".into()));
                }
                for (k, c) in x.iter().enumerate() {
                    v[entry_index(r, g, i, j, k)] = c.clone();
                }
            }
        }
        self.cat.morphism(r, s, v)
    }

    /// For `Z/n`: the morphism with row-major integer entries.
    pub fn from_ints(&self, r: ObjId, s: ObjId, rows: &[i64]) -> Result<Morphism> {
        if self.ring.generator_count() != 1 {
            return Err(Error::Invalid("integer entries need a cyclic ring".into()));
        }
        if rows.len() != r * s {
            return Err(Error::Dimension(format!("expected {} entries", r * s)));
        }
        self.cat.morphism(r, s, rows.iter().map(|&x| Int::from(x)).collect())
    }

    /// The functor applying a ring homomorphism entrywise.
    pub fn base_change(&self, h: &RingHom, target: &FreeModuleCat) -> Result<AddFunctor> {
        if h.source() != &self.ring || h.target() != &target.ring || self.max_rank != target.max_rank {
            return Err(Error::Invalid("base change between mismatched module categories".into()));
        }
        let (g, g2) = (self.ring.generator_count(), target.ring.generator_count());
        AddFunctor::from_generator_images(
            self.cat.clone(),
            target.cat.clone(),
            (0..=self.max_rank).collect(),
            |a, b, u| {
                let (k, ij) = (u % g, u / g);
                let (i, j) = (ij / a, ij % a);
                let img = h.apply(&self.ring.additive().basis_vector(k));
                let mut v = vec![Int::zero(); a * b * g2];
                for (k2, x) in img.into_iter().enumerate() {
                    v[entry_index(a, g2, i, j, k2)] = x;
                }
                v
            },
        )
    }
}

/// The `rows × cols` matrix with `count` ones at `(row0 + d, col0 + d)`.
fn diag_block(ring: &FiniteRing, rows: usize, cols: usize, row0: usize, col0: usize, count: usize) -> Vec<Int> {
    let g = ring.generator_count();
    let mut v = vec![Int::zero(); rows * cols * g];
    for d in 0..count {
        for (k, x) in ring.one().into_iter().enumerate() {
            v[entry_index(cols, g, row0 + d, col0 + d, k)] = x;
        }
    }
    v
}

/// The `s × r` matrix over `Z` of a morphism between free `Z/n`-modules.
pub fn integer_matrix(f: &Morphism) -> IntMatrix {
    IntMatrix::from_row_major(f.target, f.source, f.coords.clone()).expect("cyclic ring coordinates")
}
