use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::abgrp::{is_short_exact, FinAbGroup, GroupHom, Int, IntMatrix};
use crate::cat::{AbCat, ExactCategory, Morphism, ObjId};
use crate::error::{Error, Result};

use super::ring::gcd;

/// Finite cyclic groups `Z/d` and all group homomorphisms between them,
/// with the abelian exact structure (all short exact sequences). It is not
/// split exact: `Z/2 ↣ Z/4 ↠ Z/2` is exact.
///
/// A morphism `Z/a → Z/b` has one coordinate `x mod gcd(a,b)` and sends
/// `1` to `x · b / gcd(a,b)`.
pub struct CyclicGroupCat {
    orders: Vec<u64>,
    cat: Arc<AbCat>,
}

impl CyclicGroupCat {
    /// Object 0 is the trivial group; `orders` lists the others.
    pub fn new(orders: &[u64]) -> Result<CyclicGroupCat> {
        if orders.iter().any(|&d| d < 2) {
            return Err(Error::Invalid("cyclic orders must be at least 2".into()));
        }
        let mut all = vec![1];
        all.extend_from_slice(orders);
        let n = all.len();
        let group = |a: u64, b: u64| match gcd(a, b) {
            1 => FinAbGroup::trivial(),
            g => FinAbGroup::cyclic(g),
        };
        let hom: Vec<Vec<FinAbGroup>> = (0..n).map(|i| (0..n).map(|j| group(all[i], all[j])).collect()).collect();
        let identity = all
            .iter()
            .map(|&d| if d == 1 { vec![] } else { vec![Int::from(1)] })
            .collect();
        let names = all.iter().map(|&d| if d == 1 { "0".into() } else { format!("Z/{d}") }).collect();
        let cat = AbCat::from_generators("cyclic groups", names, 0, hom, identity, |i, j, k, _, _| {
            let (a, b, c) = (all[i], all[j], all[k]);
            let gac = gcd(a, c);
            if gac == 1 {
                return vec![];
            }
            let v = (b / gcd(a, b)) * (c / gcd(b, c)) % c;
            vec![Int::from(v / (c / gac) % gac)]
        })?;
        Ok(CyclicGroupCat {
            orders: all,
            cat: Arc::new(cat),
        })
    }

    pub fn cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    pub fn order(&self, a: ObjId) -> u64 {
        self.orders[a]
    }

    /// The object `Z/d`, if present.
    pub fn object(&self, d: u64) -> Option<ObjId> {
        self.orders.iter().position(|&x| x == d)
    }

    /// The underlying homomorphism of abelian groups.
    pub fn underlying(&self, f: &Morphism) -> GroupHom {
        let (a, b) = (self.orders[f.source], self.orders[f.target]);
        let src = FinAbGroup::cyclic(a);
        let tgt = FinAbGroup::cyclic(b);
        let x = f.coords.first().cloned().unwrap_or_else(Int::zero);
        let m = IntMatrix::from_row_major(1, 1, vec![x * Int::from(b / gcd(a, b))]).expect("1×1");
        GroupHom::new(src, tgt, m).expect("hom between cyclic groups is well defined")
    }

    /// The morphism `Z/a → Z/b` sending `1` to `image`, if that is a homomorphism.
    pub fn morphism(&self, a: ObjId, b: ObjId, image: u64) -> Result<Morphism> {
        let (oa, ob) = (self.orders[a], self.orders[b]);
        let step = ob / gcd(oa, ob);
        if !image.is_multiple_of(step) {
            return Err(Error::NotWellDefined(format!("1 ↦ {image} is not a map Z/{oa} → Z/{ob}")));
        }
        let coords = if gcd(oa, ob) == 1 {
            vec![]
        } else {
            vec![Int::from(image / step)]
        };
        self.cat.morphism(a, b, coords)
    }

    pub fn image_of_one(&self, f: &Morphism) -> u64 {
        self.underlying(f).matrix()[(0, 0)].to_u64().unwrap_or(0) % self.orders[f.target]
    }
}

impl ExactCategory for CyclicGroupCat {
    fn cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    fn is_exact(&self, i: &Morphism, q: &Morphism) -> bool {
        is_short_exact(&self.underlying(i), &self.underlying(q)).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{check_category_axioms, exact_sequences, is_split_exact, EnumOrder, DEFAULT_BUDGET};

    #[test]
    fn cyclic_category_is_a_category() {
        let c = CyclicGroupCat::new(&[2, 4]).unwrap();
        assert!(check_category_axioms(c.cat()).passed());
    }

    #[test]
    fn non_split_sequence_is_exact() {
        let c = CyclicGroupCat::new(&[2, 4]).unwrap();
        let (z2, z4) = (c.object(2).unwrap(), c.object(4).unwrap());
        let i = c.morphism(z2, z4, 2).unwrap();
        let q = c.morphism(z4, z2, 1).unwrap();
        assert!(c.is_exact(&i, &q));
        assert!(!is_split_exact(c.cat(), &i, &q));
        assert!(c.morphism(z2, z4, 1).is_err());
    }

    #[test]
    fn composition_matches_underlying_maps() {
        let c = CyclicGroupCat::new(&[2, 4, 6]).unwrap();
        let cat = c.cat();
        for a in cat.objects() {
            for b in cat.objects() {
                for d in cat.objects() {
                    for f in cat.elements(a, b).unwrap() {
                        for g in cat.elements(b, d).unwrap() {
                            let gf = cat.compose(&g, &f).unwrap();
                            let direct = c.underlying(&g).compose(&c.underlying(&f)).unwrap();
                            assert!(direct.equals(&c.underlying(&gf)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn abelian_structure_has_more_sequences() {
        let c = CyclicGroupCat::new(&[2, 4]).unwrap();
        let all = exact_sequences(&c, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        let split = all.iter().filter(|s| is_split_exact(c.cat(), &s.i, &s.q)).count();
        assert!(all.len() > split);
    }
}
