use std::sync::Arc;

use super::*;
use crate::abgrp::int_vec;
use crate::cat::check_isomorphism;
use crate::model::{build_free_module_category, CyclicGroupCat, FiniteRing, FreeModuleCat};

fn free(n: u64, rank: usize) -> FreeModuleCat {
    build_free_module_category(FiniteRing::zn(n).unwrap(), rank).unwrap()
}

fn sd_hom_tensor(n: u64, m: u64, rank: usize) -> (FreeModuleCat, SemidirectCat) {
    let c = free(n, rank);
    let bm = Arc::new(Bimodule::hom_tensor(&c, m).unwrap());
    let sd = SemidirectCat::new(c.exact(), bm).unwrap();
    (c, sd)
}

fn all_exact(sd: &SemidirectCat) -> Vec<ExactSeq> {
    exact_sequences(sd, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap()
}

#[test]
fn zero_bimodule_changes_nothing() {
    let c = free(4, 2);
    let sd = SemidirectCat::new(c.exact(), Arc::new(Bimodule::zero(c.cat().clone()))).unwrap();
    let base = exact_sequences(c.exact().as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
    assert_eq!(all_exact(&sd).len(), base.len());
    assert!(crate::cat::check_category_axioms(sd.semidirect_cat()).passed());
}

#[test]
fn composition_follows_the_semidirect_rule() {
    let (c, sd) = sd_hom_tensor(4, 4, 2);
    let cat = sd.semidirect_cat();
    assert!(crate::cat::check_category_axioms(cat).passed());
    // f = [1 2] : R² → R with m = [3], g = [[1],[1]] : R → R² with n = (1, 0)
    let f = sd.join(&c.from_ints(2, 1, &[1, 2]).unwrap(), &int_vec(&[3, 0]));
    let g = sd.join(&c.from_ints(1, 2, &[1, 1]).unwrap(), &int_vec(&[1, 0]));
    let fg = cat.compose(&f, &g).unwrap();
    // fg = 3, f n + m g = 1 + 3 = 0 mod 4
    assert_eq!(fg.coords, int_vec(&[3, 0]));
    let gf = cat.compose(&g, &f).unwrap();
    // base [[1,2],[1,2]]; g m + n f = [[3,0],[3,0]] + [[1,2],[0,0]] = [[0,2],[3,0]]
    assert_eq!(gf.coords, int_vec(&[1, 2, 1, 2, 0, 2, 3, 0]));
}

#[test]
fn decorations_square_to_zero() {
    let (c, sd) = sd_hom_tensor(2, 2, 2);
    let cat = sd.semidirect_cat();
    for a in 0..3 {
        for b in 0..3 {
            for m in sd.bimodule().value(a, b).elements().unwrap() {
                let x = sd.join(&c.cat().zero_morphism(a, b), &m);
                for n in sd.bimodule().value(b, a).elements().unwrap() {
                    let y = sd.join(&c.cat().zero_morphism(b, a), &n);
                    assert!(cat.is_zero(&cat.compose(&y, &x).unwrap()));
                }
            }
        }
    }
}

#[test]
fn exactness_matches_the_obstruction() {
    let (c, sd) = sd_hom_tensor(2, 2, 2);
    let i = c.from_ints(1, 2, &[1, 0]).unwrap();
    let q = c.from_ints(2, 1, &[0, 1]).unwrap();
    // decorations (0, m) on q: exact iff q_* 0 + i^* n = n·i = 0, i.e. n = (0, *)
    for (n, expected) in [([0, 0], true), ([0, 1], true), ([1, 0], false), ([1, 1], false)] {
        let ti = sd.join(&i, &int_vec(&[0, 0]));
        let tq = sd.join(&q, &int_vec(&n));
        assert_eq!(sd.is_exact(&ti, &tq), expected, "{n:?}");
    }
}

#[test]
fn non_biexact_bimodule_is_rejected() {
    let c = CyclicGroupCat::new(&[2, 4]).unwrap();
    let m = Arc::new(Bimodule::hom(c.cat().clone()));
    let base: Arc<dyn ExactCategory> = Arc::new(c);
    assert!(matches!(SemidirectCat::new(base, m), Err(Error::NotBiexact(_))));
}

#[test]
fn kernels_exist_and_mediate_uniquely() {
    let (_, sd) = sd_hom_tensor(2, 2, 2);
    let cat = sd.semidirect_cat().clone();
    for s in all_exact(&sd) {
        let k = kernel_in_semidirect(&sd, &s.q).unwrap();
        assert!(sd.is_exact(&k.kernel, &s.q));
        for d in 0..3 {
            assert!(k.mediator_is_unique(&sd, d));
            for f in cat.elements(d, s.q.source).unwrap() {
                let zero = cat.is_zero(&cat.compose(&s.q, &f).unwrap());
                match k.mediate(&sd, &f) {
                    Ok(u) => {
                        assert!(zero);
                        assert!(cat.equal(&cat.compose(&k.kernel, &u).unwrap(), &f));
                    }
                    Err(e) => {
                        assert!(!zero);
                        assert!(matches!(e, Error::NotZeroComposite(_)));
                    }
                }
            }
        }
    }
}

#[test]
fn cokernels_exist_and_mediate() {
    let (_, sd) = sd_hom_tensor(2, 2, 2);
    let cat = sd.semidirect_cat().clone();
    for s in all_exact(&sd).iter().take(20) {
        let ck = cokernel_in_semidirect(&sd, &s.i).unwrap();
        assert!(sd.is_exact(&s.i, &ck.cokernel));
        for d in 0..3 {
            for g in cat.elements(s.i.target, d).unwrap() {
                if !cat.is_zero(&cat.compose(&g, &s.i).unwrap()) {
                    continue;
                }
                let v = ck.mediate(&g).unwrap();
                assert!(cat.equal(&cat.compose(&v, &ck.cokernel).unwrap(), &g));
            }
        }
    }
}

#[test]
fn pullbacks_along_epis() {
    let (_, sd) = sd_hom_tensor(2, 2, 2);
    let cat = sd.semidirect_cat().clone();
    let mut inside = 0;
    let mut outside = 0;
    for s in all_exact(&sd) {
        let f = &s.q;
        for d in 0..3 {
            for g in cat.elements(d, f.target).unwrap() {
                match pullback_along_epi(&sd, &g, f) {
                    Ok(sq) => {
                        inside += 1;
                        assert!(sq.commutes(&sd));
                        if inside % 7 == 0 {
                            for e in 0..2 {
                                assert!(sq.mediator_is_unique(&sd, e));
                                for x in cat.elements(e, f.source).unwrap() {
                                    for y in cat.elements(e, d).unwrap() {
                                        let fx = cat.compose(f, &x).unwrap();
                                        let gy = cat.compose(&g, &y).unwrap();
                                        if !cat.equal(&fx, &gy) {
                                            continue;
                                        }
                                        let u = sq.mediate(&sd, &x, &y).unwrap();
                                        assert!(cat.equal(&cat.compose(&sq.gbar, &u).unwrap(), &x));
                                        assert!(cat.equal(&cat.compose(&sq.fbar, &u).unwrap(), &y));
                                    }
                                }
                            }
                        }
                    }
                    Err(Error::OutsideModel(_)) => outside += 1,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    assert!(inside > 0 && outside > 0);
}

#[test]
fn every_exact_sequence_normalizes() {
    let (_, sd) = sd_hom_tensor(4, 2, 2);
    for s in all_exact(&sd) {
        let nz = normalize_sequence(&sd, &s.i, &s.q).unwrap();
        assert!(nz.solves(&sd, &s.i, &s.q));
        assert!(nz.verify(&sd, &s.i, &s.q));
    }
}

#[test]
fn canonical_extension_classifies_to_itself() {
    let (_, sd) = sd_hom_tensor(2, 2, 2);
    let ext = sd.canonical_extension().unwrap();
    assert!(ext.is_square_zero());
    let cl = classify_extension(&ext).unwrap();
    assert_eq!(cl.round_trip_failure(), None);
    assert!(check_isomorphism(&cl.functor).passed());
}

#[test]
fn dual_numbers_are_a_semidirect_product() {
    for (n, m) in [(2u64, 2u64), (4, 2)] {
        let ring = FiniteRing::dual(&FiniteRing::zn(n).unwrap(), m).unwrap();
        let (big, small, ext) = dual_numbers_extension(&ring, 2).unwrap();
        let cl = classify_extension(&ext).unwrap();
        assert_eq!(cl.round_trip_failure(), None);
        assert!(cl.preserves_and_reflects_exactness(big.exact().as_ref()).unwrap());
        let ht = Bimodule::hom_tensor(&small, m).unwrap();
        assert!(dual_numbers_kernel_iso(&big, &ht, &cl).unwrap().is_iso());
        let sd = SemidirectCat::new(small.exact(), Arc::new(ht)).unwrap();
        let iso = dual_numbers_iso(&big, &sd).unwrap();
        assert!(check_isomorphism(&iso).passed());
        for f in big.cat().elements(2, 1).unwrap() {
            let (actual, block) = dual_numbers_block_form(&big, &f).unwrap();
            assert_eq!(actual, block);
        }
    }
}

#[test]
fn truncated_polynomials_are_not_square_zero() {
    let ring = FiniteRing::truncated_polynomial(2, 3).unwrap();
    let (_, _, ext) = dual_numbers_extension(&ring, 1).unwrap();
    assert!(!ext.is_square_zero());
    assert!(matches!(classify_extension(&ext), Err(Error::NotSquareZero(_))));
}

#[test]
fn grothendieck_comparison_is_bijective() {
    let (_, sd) = sd_hom_tensor(3, 3, 1);
    let cmp = grothendieck_comparison(&sd).unwrap();
    assert!(cmp.generators > 0);
    // R has units {1, 2} and M(R, R) = Z/3: six isos
    assert_eq!(cmp.total_groupoid().arrows(1, 1).len(), 6);
    // exhaustive functoriality on this small case
    let g = cmp.grothendieck().unwrap();
    let cat = sd.semidirect_cat();
    for x in cmp.total_groupoid().arrows(1, 1) {
        for y in cmp.total_groupoid().arrows(1, 1) {
            let lhs = cmp.phi(&cat.compose(&x.morphism, &y.morphism).unwrap()).unwrap();
            let rhs = g.compose(&cmp.phi(&x.morphism).unwrap(), &cmp.phi(&y.morphism).unwrap()).unwrap();
            assert!(g.equal(&lhs, &rhs));
        }
    }
}

#[test]
fn wedge_of_pointed_sets() {
    let c = free(2, 1);
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    for (b, x) in [(1, 2), (2, 2), (2, 3)] {
        let w = semidirect_wedge_iso(c.exact(), &m, b, x).unwrap();
        assert!(w.check().passed(), "{b} ∨ {x}");
        assert!(w.exact_sequences_correspond().unwrap());
    }
}
