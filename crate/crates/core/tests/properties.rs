//! Property tests over the desk-scale models.

use std::sync::{Arc, LazyLock};

use num_traits::ToPrimitive;
use proptest::prelude::*;

use exactkit::abgrp::{image_order, pullback, FinAbGroup, GroupHom, Int, IntMatrix};
use exactkit::bimod::{smash_with_pointed_set, Bimodule};
use exactkit::cat::{exact_sequences, is_exact_sequence, AbCat, EnumOrder, ExactSeq, Morphism, DEFAULT_BUDGET};
use exactkit::kzero::grothendieck_group;
use exactkit::model::{build_free_module_category, FiniteRing, FreeModuleCat};
use exactkit::semidirect::{normalize_sequence, SemidirectCat};

struct Model {
    base: FreeModuleCat,
    sd: SemidirectCat,
    seqs: Vec<ExactSeq>,
}

static Z4: LazyLock<Model> = LazyLock::new(|| {
    let base = build_free_module_category(FiniteRing::zn(4).unwrap(), 2).unwrap();
    let m = Arc::new(Bimodule::hom_tensor(&base, 2).unwrap());
    let sd = SemidirectCat::new(base.exact(), m).unwrap();
    let seqs = exact_sequences(&sd, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
    Model { base, sd, seqs }
});

fn ints(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

fn morphism(cat: &AbCat, a: usize, b: usize, seed: &[i64]) -> Morphism {
    let n = cat.hom(a, b).generator_count();
    let coords: Vec<i64> = (0..n).map(|k| seed[k % seed.len()]).collect();
    cat.morphism(a, b, ints(&coords)).unwrap()
}

/// A random automorphism of `a`, found by walking from a seed until an
/// invertible element turns up; the identity if none does.
fn automorphism(cat: &AbCat, a: usize, seed: &[i64]) -> Morphism {
    for shift in 0..seed.len() {
        let rotated: Vec<i64> = seed.iter().cycle().skip(shift).take(seed.len()).copied().collect();
        let f = morphism(cat, a, a, &rotated);
        if cat.is_iso(&f) {
            return f;
        }
    }
    cat.identity(a)
}

fn seed() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-5i64..6, 1..17)
}

fn random_group() -> impl Strategy<Value = FinAbGroup> {
    proptest::collection::vec(prop_oneof![Just(1u64), Just(2), Just(3), Just(4)], 1..4)
        .prop_map(|d| FinAbGroup::from_invariant_factors(&d))
}

fn random_hom(src: FinAbGroup, tgt: FinAbGroup) -> impl Strategy<Value = GroupHom> {
    let (r, c) = (tgt.generator_count(), src.generator_count());
    proptest::collection::vec(-4i64..5, r * c).prop_filter_map("not well defined", move |xs| {
        let m = IntMatrix::from_row_major(r, c, ints(&xs)).ok()?;
        GroupHom::new(src.clone(), tgt.clone(), m).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semidirect_composition_is_associative(objs in proptest::collection::vec(0usize..3, 4), s in seed(), t in seed(), u in seed()) {
        let cat = Z4.sd.semidirect_cat();
        let f = morphism(cat, objs[0], objs[1], &s);
        let g = morphism(cat, objs[1], objs[2], &t);
        let h = morphism(cat, objs[2], objs[3], &u);
        let left = cat.compose(&h, &cat.compose(&g, &f).unwrap()).unwrap();
        let right = cat.compose(&cat.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert!(cat.equal(&left, &right));
    }

    #[test]
    fn semidirect_composition_rule(objs in proptest::collection::vec(0usize..3, 3), s in seed(), t in seed()) {
        let sd = &Z4.sd;
        let cat = sd.semidirect_cat();
        let g = morphism(cat, objs[0], objs[1], &s);
        let f = morphism(cat, objs[1], objs[2], &t);
        let (fb, m) = sd.split(&f);
        let (gb, n) = sd.split(&g);
        let base = sd.base_cat();
        let bm = sd.bimodule();
        let dec: Vec<Int> = bm.push_elem(&fb, g.source, &n).iter().zip(bm.pull_elem(&gb, f.target, &m)).map(|(x, y)| x + y).collect();
        let expected = sd.join(&base.compose(&fb, &gb).unwrap(), &dec);
        prop_assert!(cat.equal(&cat.compose(&f, &g).unwrap(), &expected));
    }

    #[test]
    fn decorations_compose_to_zero(objs in proptest::collection::vec(0usize..3, 3), s in seed(), t in seed()) {
        let sd = &Z4.sd;
        let base = sd.base_cat();
        let m = sd.bimodule();
        let x = sd.join(&base.zero_morphism(objs[0], objs[1]), &morphism_coords(m.value(objs[0], objs[1]), &s));
        let y = sd.join(&base.zero_morphism(objs[1], objs[2]), &morphism_coords(m.value(objs[1], objs[2]), &t));
        let cat = sd.semidirect_cat();
        prop_assert!(cat.is_zero(&cat.compose(&y, &x).unwrap()));
    }

    #[test]
    fn exactness_is_invariant_under_isomorphism(k in 0usize..10_000, s in seed(), t in seed(), u in seed()) {
        let sd = &Z4.sd;
        let seq = &Z4.seqs[k % Z4.seqs.len()];
        let cat = sd.semidirect_cat();
        let (a, b, c) = seq.objects();
        let (al, be, ga) = (automorphism(cat, a, &s), automorphism(cat, b, &t), automorphism(cat, c, &u));
        let i = cat.compose_path(&[&cat.inverse(&al).unwrap(), &seq.i, &be]).unwrap();
        let q = cat.compose_path(&[&cat.inverse(&be).unwrap(), &seq.q, &ga]).unwrap();
        prop_assert!(is_exact_sequence(sd, &i, &q).unwrap());
    }

    #[test]
    fn normalization_is_idempotent(k in 0usize..10_000) {
        let sd = &Z4.sd;
        let seq = &Z4.seqs[k % Z4.seqs.len()];
        let once = normalize_sequence(sd, &seq.i, &seq.q).unwrap();
        prop_assert!(once.verify(sd, &seq.i, &seq.q));
        let twice = normalize_sequence(sd, &once.normalized.i, &once.normalized.q).unwrap();
        let b = seq.i.target;
        prop_assert!(sd.bimodule().value(b, b).is_zero(&twice.x));
    }

    #[test]
    fn kernel_and_image_orders_multiply(h in (random_group(), random_group()).prop_flat_map(|(a, b)| random_hom(a, b))) {
        let (ker, _) = h.kernel();
        let im = image_order(&h).unwrap();
        prop_assert_eq!(Int::from(ker.order_u64().unwrap()) * im, Int::from(h.source().order_u64().unwrap()));
    }

    #[test]
    fn pullback_order(
        (f, g) in (random_group(), random_group(), random_group())
            .prop_flat_map(|(a, b, c)| (random_hom(a, c.clone()), random_hom(b, c)))
    ) {
        let pb = pullback(&f, &g).unwrap();
        // |P| = |A|·|B| / |im(f) + im(g)|
        let both = GroupHom::copair(&[f.clone(), g.neg()]).unwrap();
        let joint = image_order(&both).unwrap();
        let expected = Int::from(f.source().order_u64().unwrap() * g.source().order_u64().unwrap()) / joint;
        prop_assert_eq!(pb.group.order().unwrap(), expected);
    }

    #[test]
    fn smash_with_k_points_is_a_sum_of_k_minus_one(k in 1usize..5) {
        let m = Z4.sd.bimodule();
        let mk = smash_with_pointed_set(m, k).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let base = m.value(a, b).order_u64().unwrap();
                prop_assert_eq!(mk.value(a, b).order_u64().unwrap(), base.pow(k as u32 - 1));
            }
        }
        prop_assert!(mk.check_axioms().passed());
    }

    #[test]
    fn bimodule_actions_are_functorial(objs in proptest::collection::vec(0usize..3, 4), s in seed(), t in seed()) {
        let base = Z4.base.cat();
        let m = Z4.sd.bimodule();
        let f = morphism(base, objs[0], objs[1], &s);
        let g = morphism(base, objs[1], objs[2], &t);
        let gf = base.compose(&g, &f).unwrap();
        let c = objs[3];
        prop_assert!(m.push(&gf, c).equals(&m.push(&g, c).compose(&m.push(&f, c)).unwrap()));
        prop_assert!(m.pull(&gf, c).equals(&m.pull(&f, c).compose(&m.pull(&g, c)).unwrap()));
    }
}

fn morphism_coords(g: &FinAbGroup, seed: &[i64]) -> Vec<Int> {
    g.reduce(&ints(&(0..g.generator_count()).map(|k| seed[k % seed.len()]).collect::<Vec<_>>()))
}

#[test]
fn k0_is_additive_and_saturated() {
    let base = &Z4.base;
    let k = grothendieck_group(base.exact().as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
    let cat = base.cat();
    // [a ⊕ c] = [a] + [c]
    for ((a, c), bp) in cat.biproducts() {
        let sum: Vec<Int> = k.class_map[*a].iter().zip(&k.class_map[*c]).map(|(x, y)| x + y).collect();
        assert!(k.group.elems_equal(&k.class_map[bp.object], &sum));
    }
    assert!(k.group.is_zero(&k.class_map[cat.zero_object()]));
    // every relation already holds, so repeating them changes nothing
    let again = FinAbGroup::new(k.group.generator_count(), k.relations.hstack(&k.relations).unwrap()).unwrap();
    assert_eq!(again.invariant_factors(), k.group.invariant_factors());
    let order = k.group.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
    assert_eq!(order, vec![0]);
}
