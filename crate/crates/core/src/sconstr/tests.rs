use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::abgrp::add_vec;
use crate::bimod::Bimodule;
use crate::cat::{is_split_exact, DEFAULT_BUDGET};
use crate::model::{build_free_module_category, FiniteRing, FreeModuleCat};
use crate::semidirect::{normalize_sequence, SemidirectCat};

fn free(n: u64, rank: usize) -> FreeModuleCat {
    build_free_module_category(FiniteRing::zn(n).unwrap(), rank).unwrap()
}

fn model(n: u64, m: u64) -> (FreeModuleCat, SemidirectCat) {
    let c = free(n, 2);
    let bm = Arc::new(Bimodule::hom_tensor(&c, m).unwrap());
    let sd = SemidirectCat::new(c.exact(), bm).unwrap();
    (c, sd)
}

#[test]
fn low_levels() {
    let c = free(2, 1);
    assert_eq!(enumerate_sp_diagrams(c.exact().as_ref(), 0, DEFAULT_BUDGET).unwrap().len(), 1);
    assert_eq!(enumerate_sp_diagrams(c.exact().as_ref(), 1, DEFAULT_BUDGET).unwrap().len(), 2);
    assert!(matches!(
        enumerate_sp_diagrams(c.exact().as_ref(), 4, DEFAULT_BUDGET),
        Err(Error::Budget { .. })
    ));
}

#[test]
fn level_two_matches_brute_force_pairs() {
    let c = free(2, 2);
    let cat = c.cat();
    let mut brute = 0;
    for a in cat.objects() {
        for b in cat.objects() {
            for d in cat.objects() {
                for i in cat.elements(a, b).unwrap() {
                    for q in cat.elements(b, d).unwrap() {
                        if is_split_exact(cat, &i, &q) {
                            brute += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(enumerate_sp_diagrams(c.exact().as_ref(), 2, DEFAULT_BUDGET).unwrap().len(), brute);
}

#[test]
fn level_three_diagrams_are_valid_and_consistent() {
    let c = free(2, 2);
    let all = enumerate_sp_diagrams(c.exact().as_ref(), 3, DEFAULT_BUDGET).unwrap();
    assert!(!all.is_empty());
    for d in &all {
        for j in 0..3 {
            for i in j + 1..3 {
                assert!(c.cat().is_zero(&d.map((j, j + 1), (i, i + 1)).unwrap()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sample = sample_sp_diagrams(c.exact().as_ref(), 3, 50, DEFAULT_BUDGET, &mut rng).unwrap();
    let keys: std::collections::HashSet<_> = all.iter().map(SPDiagram::key).collect();
    assert!(sample.iter().all(|d| keys.contains(&d.key())));
}

#[test]
fn sp_bimodule_group_basics() {
    let c = free(4, 2);
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    let e = c.exact();
    let lvl1 = enumerate_sp_diagrams(e.as_ref(), 1, DEFAULT_BUDGET).unwrap();
    for x in &lvl1 {
        for y in &lvl1 {
            let g = sp_bimodule_group(x, y, &m, Compatibility::Covering).unwrap();
            let expected = m.value(x.object((0, 1)), y.object((0, 1)));
            assert_eq!(g.group.invariant_factors(), expected.invariant_factors());
        }
    }
    let zero = &lvl1[0];
    let two = enumerate_sp_diagrams(e.as_ref(), 2, DEFAULT_BUDGET).unwrap();
    let zero2 = two.iter().find(|d| d.object((0, 2)) == 0).unwrap();
    for y in two.iter().take(40) {
        assert!(sp_bimodule_group(zero2, y, &m, Compatibility::Covering).unwrap().group.is_trivial());
    }
    assert!(sp_bimodule_group(zero, &two[0], &m, Compatibility::Covering).is_err());
}

fn same_subgroup(a: &SPBimoduleGroup, b: &SPBimoduleGroup) -> bool {
    let inside = |x: &SPBimoduleGroup, y: &SPBimoduleGroup| {
        (0..x.group.generator_count()).all(|k| y.embedding.preimage(&x.embedding.apply(&x.group.basis_vector(k))).is_some())
    };
    inside(a, b) && inside(b, a)
}

#[test]
fn covering_relations_suffice() {
    let c = free(4, 2);
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    let e = c.exact();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2, 3] {
        let ds = sample_sp_diagrams(e.as_ref(), p, 12, DEFAULT_BUDGET, &mut rng).unwrap();
        for x in &ds {
            for y in &ds {
                let cov = sp_bimodule_group(x, y, &m, Compatibility::Covering).unwrap();
                let all = sp_bimodule_group(x, y, &m, Compatibility::All).unwrap();
                assert!(same_subgroup(&cov, &all));
            }
        }
    }
}

#[test]
fn simplicial_action_is_functorial() {
    let c = free(4, 2);
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    let e = c.exact();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ds = sample_sp_diagrams(e.as_ref(), 3, 6, DEFAULT_BUDGET, &mut rng).unwrap();
    let maps: [(&[usize], &[usize]); 4] = [(&[0, 1, 3], &[0, 2]), (&[0, 2, 3], &[1, 2]), (&[1, 1, 2], &[0, 1]), (&[0, 1, 2], &[0, 2])];
    for x in &ds {
        for y in &ds {
            let g3 = sp_bimodule_group(x, y, &m, Compatibility::Covering).unwrap();
            for (b, a) in maps {
                let (xb, yb) = (x.pullback_along(e.as_ref(), b).unwrap(), y.pullback_along(e.as_ref(), b).unwrap());
                let g2 = sp_bimodule_group(&xb, &yb, &m, Compatibility::Covering).unwrap();
                let ba: Vec<usize> = a.iter().map(|&t| b[t]).collect();
                let (xba, yba) = (x.pullback_along(e.as_ref(), &ba).unwrap(), y.pullback_along(e.as_ref(), &ba).unwrap());
                let g1 = sp_bimodule_group(&xba, &yba, &m, Compatibility::Covering).unwrap();
                let via = sp_simplicial_action(&g2, &g1, a)
                    .unwrap()
                    .compose(&sp_simplicial_action(&g3, &g2, b).unwrap())
                    .unwrap();
                assert!(via.equals(&sp_simplicial_action(&g3, &g1, &ba).unwrap()));
            }
        }
    }
}

#[test]
fn straightening_zero_section_images_gives_zero() {
    let (c, sd) = model(2, 2);
    for d in enumerate_sp_diagrams(c.exact().as_ref(), 2, DEFAULT_BUDGET).unwrap() {
        let sd_d = d.push_forward(sd.section(), &sd).unwrap();
        let st = straighten(&sd, &sd_d).unwrap();
        for pos in injective_positions(2) {
            let a = sd_d.object(pos);
            assert!(sd.bimodule().value(a, a).is_zero(st.get(pos)));
        }
    }
}

#[test]
fn straightening_at_level_two_is_normalization() {
    let (_, sd) = model(2, 2);
    for d in enumerate_sp_diagrams(&sd, 2, DEFAULT_BUDGET).unwrap() {
        let st = straighten(&sd, &d).unwrap();
        let (i, q) = (d.cover((0, 1), (0, 2)), d.cover((0, 2), (1, 2)));
        let nz = normalize_sequence(&sd, i, q).unwrap();
        assert_eq!(st.get((0, 2)), nz.x.as_slice());
        assert!(st.naturality_failures(&sd, &d, true).unwrap().1.is_empty());
    }
}

#[test]
fn straightening_at_level_three() {
    let (_, sd) = model(4, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in sample_sp_diagrams(&sd, 3, 30, DEFAULT_BUDGET, &mut rng).unwrap() {
        let st = straighten(&sd, &d).unwrap();
        let (checked, failures) = st.naturality_failures(&sd, &d, true).unwrap();
        assert!(checked >= 6);
        assert!(failures.is_empty(), "{failures:?}");
    }
}

#[test]
fn psi_embeds_additively() {
    let (c, sd) = model(4, 2);
    let e = c.exact();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in sample_sp_diagrams(e.as_ref(), 2, 5, DEFAULT_BUDGET, &mut rng).unwrap() {
        let g = sp_bimodule_group(&d, &d, sd.bimodule(), Compatibility::Covering).unwrap();
        let cat = sd.semidirect_cat();
        let id = psi_embed(&sd, &d, &g.ambient().zero()).unwrap();
        assert!(id.iter().all(|f| cat.equal(f, &cat.identity(f.source))));
        let elems: Vec<Vec<Int>> = g.group.elements().unwrap().take(6).map(|v| g.embedding.apply(&v)).collect();
        for x in &elems {
            for y in &elems {
                let lhs = psi_compose(&sd, &psi_embed(&sd, &d, x).unwrap(), &psi_embed(&sd, &d, y).unwrap()).unwrap();
                let rhs = psi_embed(&sd, &d, &add_vec(x, y)).unwrap();
                assert!(lhs.iter().zip(&rhs).all(|(a, b)| cat.equal(a, b)));
            }
        }
        if !g.conditions.as_ref().map(|h| h.is_zero()).unwrap_or(true) {
            let bad = (0..g.ambient().generator_count())
                .map(|k| g.ambient().basis_vector(k))
                .find(|v| !g.contains(v))
                .unwrap();
            assert!(psi_embed(&sd, &d, &bad).is_err());
        }
    }
}

#[test]
fn iso_classes_at_level_two_agree() {
    let (c, sd) = model(2, 2);
    let base = sp_iso_classes(&enumerate_sp_diagrams(c.exact().as_ref(), 2, DEFAULT_BUDGET).unwrap()).unwrap();
    let total = sp_iso_classes(&enumerate_sp_diagrams(&sd, 2, DEFAULT_BUDGET).unwrap()).unwrap();
    assert_eq!(base.len(), 6);
    assert_eq!(total.len(), base.len());
}
