use std::sync::Arc;

use super::*;
use crate::abgrp::int_vec;
use crate::cat::{exact_sequences, AddFunctor, EnumOrder, ExactSeq, DEFAULT_BUDGET};
use crate::model::{build_free_module_category, CyclicGroupCat, FiniteRing};

fn z4() -> FreeModuleCat {
    build_free_module_category(FiniteRing::zn(4).unwrap(), 2).unwrap()
}

fn iso_into_smash(m: &Bimodule, x: &Bimodule) -> BimoduleMorphism {
    // M → M(S⁰): include into the non-base copy
    let n = m.base().object_count();
    let comps = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| {
            let g = m.value(a, b).generator_count();
            let mat = IntMatrix::zeros(g, g).vstack(&IntMatrix::identity(g)).unwrap();
            GroupHom::new(m.value(a, b).clone(), x.value(a, b).clone(), mat).unwrap()
        })
        .collect();
    BimoduleMorphism::new(m, x, comps).unwrap()
}

#[test]
fn zero_bimodule_is_biexact() {
    let c = z4();
    let m = Bimodule::zero(c.cat().clone());
    assert!(m.check_axioms().passed());
    let seqs = exact_sequences(c.exact().as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
    assert!(check_biexact(&m, c.exact().as_ref(), &seqs).unwrap().passed());
}

#[test]
fn hom_tensor_values_and_actions() {
    let c = z4();
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    assert!(m.check_axioms().passed());
    for s in 0..3 {
        assert!(m.value(0, s).is_trivial());
    }
    assert_eq!(m.value(1, 1).invariant_factors(), vec![Int::from(2)]);
    let two = c.from_ints(1, 1, &[2]).unwrap();
    assert!(m.push(&two, 1).is_zero());
    assert!(m.pull(&two, 1).is_zero());
    let three = c.from_ints(1, 1, &[3]).unwrap();
    assert!(m.push(&three, 1).is_iso());
    assert!(matches!(Bimodule::hom_tensor(&c, 3), Err(Error::IncompatibleModuli(_))));
}

#[test]
fn hom_tensor_on_matrices() {
    let c = z4();
    let m = Bimodule::hom_tensor(&c, 4).unwrap();
    // f = [[1,2],[0,1]] on R², x ∈ M(1,2) the column (1,3)
    let f = c.from_ints(2, 2, &[1, 2, 0, 1]).unwrap();
    assert_eq!(m.push_elem(&f, 1, &int_vec(&[1, 3])), int_vec(&[3, 3]));
    // y ∈ M(2,1) the row (1,3); y·f = (1, 1)
    assert_eq!(m.pull_elem(&f, 1, &int_vec(&[1, 3])), int_vec(&[1, 1]));
}

#[test]
fn hom_tensor_is_biexact_on_every_split_sequence() {
    for (n, m) in [(2u64, 2u64), (4, 2), (4, 4)] {
        let c = build_free_module_category(FiniteRing::zn(n).unwrap(), 2).unwrap();
        let bm = Bimodule::hom_tensor(&c, m).unwrap();
        let seqs = exact_sequences(c.exact().as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap();
        let report = check_biexact(&bm, c.exact().as_ref(), &seqs).unwrap();
        assert!(report.passed(), "Z/{n} with Z/{m}");
        assert_eq!(report.checked, seqs.len() * 2 * 3);
    }
}

#[test]
fn hom_fails_on_non_split_sequence() {
    let c = CyclicGroupCat::new(&[2, 4]).unwrap();
    let (z2, z4) = (c.object(2).unwrap(), c.object(4).unwrap());
    let seq = ExactSeq::new(c.morphism(z2, z4, 2).unwrap(), c.morphism(z4, z2, 1).unwrap());
    let m = Bimodule::hom(c.cat().clone());
    assert!(m.check_axioms().passed());
    let report = check_biexact(&m, &c, &[seq]).unwrap();
    assert!(!report.passed());
    assert!(report.failures.contains(&BiexactFailure {
        sequence: 0,
        object: z2,
        variable: Variable::Second,
    }));
}

#[test]
fn witnesses_must_be_exact() {
    let c = z4();
    let m = Bimodule::zero(c.cat().clone());
    let bad = ExactSeq::new(c.from_ints(1, 1, &[2]).unwrap(), c.from_ints(1, 1, &[2]).unwrap());
    assert!(check_biexact(&m, c.exact().as_ref(), &[bad]).is_err());
}

#[test]
fn smash_small_pointed_sets() {
    let c = z4();
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    let point = m.smash(1).unwrap();
    assert!(point.check_axioms().passed());
    for a in 0..3 {
        for b in 0..3 {
            assert!(point.value(a, b).is_trivial());
        }
    }
    let s0 = m.smash(2).unwrap();
    assert!(s0.check_axioms().passed());
    assert!(iso_into_smash(&m, &s0).is_iso());
    let three = m.smash(3).unwrap();
    assert_eq!(three.value(2, 2).invariant_factors(), vec![Int::from(2); 8]);
    assert!(m.smash(0).is_err());
}

#[test]
fn smash_distributes_over_wedge() {
    let c = z4();
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    for (x, y) in [(1, 1), (1, 3), (2, 2), (3, 2)] {
        let (sum, wedge, iso) = smash_wedge_iso(&m, x, y).unwrap();
        assert!(sum.check_axioms().passed());
        assert!(wedge.check_axioms().passed());
        assert!(iso.is_iso(), "{x} ∨ {y}");
    }
}

#[test]
fn kernel_of_identity_is_zero() {
    let c = z4();
    let id = AddFunctor::identity(c.cat().clone());
    let (k, _) = Bimodule::kernel_of_projection(&id, &id).unwrap();
    assert!(k.check_axioms().passed());
    for a in 0..3 {
        for b in 0..3 {
            assert!(k.value(a, b).is_trivial());
        }
    }
}

#[test]
fn opposite_and_restriction() {
    let c = z4();
    let m = Bimodule::hom_tensor(&c, 2).unwrap();
    let op = Arc::new(c.cat().opposite());
    let mop = m.opposite(op).unwrap();
    assert!(mop.check_axioms().passed());
    let r = m.restrict_along(&AddFunctor::identity(c.cat().clone())).unwrap();
    assert!(r.check_axioms().passed());
    let same = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .map(|(a, b)| GroupHom::identity(m.value(a, b)))
        .collect();
    assert!(BimoduleMorphism::new(&r, &m, same).unwrap().is_iso());
}

#[test]
fn corrupted_action_breaks_axioms() {
    let c = z4();
    let good = Bimodule::hom_tensor(&c, 2).unwrap();
    let base = c.cat().clone();
    let n = base.object_count();
    let values = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| good.value(a, b).clone())
        .collect();
    // every generator acts as zero on the left, so identities fail
    let bad = Bimodule::from_generators(
        "bad",
        base,
        values,
        |c, a, b, _| Ok(IntMatrix::zeros(b * c, a * c)),
        |a, b, c, u| Ok(good.right[(a * n + b) * n + c][u].clone()),
    )
    .unwrap();
    assert!(!bad.check_axioms().passed());
}
