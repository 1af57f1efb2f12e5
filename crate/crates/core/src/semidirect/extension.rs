use std::sync::Arc;

use num_traits::Zero;

use crate::abgrp::{sub_vec, GroupHom, Int, IntMatrix};
use crate::bimod::{Bimodule, BimoduleMorphism};
use crate::cat::{
    exact_sequences, AddFunctor, EnumOrder, ExactCategory, Morphism, NatIso, ObjId, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::model::{entry_index, FiniteRing, FreeModuleCat, RingKind};

use super::SemidirectCat;

/// A split extension `p: C' → C`, `s: C → C'` with `U: p∘s ⇒ id` and `s`
/// essentially surjective.
pub struct SplitExtension {
    base: Arc<dyn ExactCategory>,
    p: AddFunctor,
    s: AddFunctor,
    unit: NatIso,
    /// For each object `x` of `C'`: some `a` and an isomorphism `s(a) → x`.
    witnesses: Vec<(ObjId, Morphism)>,
}

impl SplitExtension {
    /// An extension with `p ∘ s = id` on the nose.
    pub fn new(base: Arc<dyn ExactCategory>, p: AddFunctor, s: AddFunctor) -> Result<SplitExtension> {
        let ps = p.compose(&s)?;
        if !ps.equals(&AddFunctor::identity(base.cat().clone())) {
            return Err(Error::Invalid("p ∘ s is not the identity; supply a unit isomorphism".into()));
        }
        let unit = NatIso::identity(&ps);
        Self::with_unit(base, p, s, unit)
    }

    pub fn with_unit(base: Arc<dyn ExactCategory>, p: AddFunctor, s: AddFunctor, unit: NatIso) -> Result<SplitExtension> {
        if !Arc::ptr_eq(base.cat(), p.target()) || !Arc::ptr_eq(base.cat(), s.source()) || !Arc::ptr_eq(p.source(), s.target()) {
            return Err(Error::Invalid("p and s do not form a pair C' ⇄ C".into()));
        }
        for (name, r) in [("p", p.check()), ("s", s.check())] {
            if let Some(v) = r.violations.first() {
                return Err(Error::Invalid(format!("{name} is not a functor: {v}")));
            }
        }
        let big = p.source();
        let mut witnesses = Vec::with_capacity(big.object_count());
        for x in big.objects() {
            let found = base.cat().objects().find_map(|a| {
                let sa = s.object(a);
                if sa == x {
                    return Some((a, big.identity(x)));
                }
                big.elements(sa, x).ok()?.find(|f| big.is_iso(f)).map(|f| (a, f))
            });
            let w = found.ok_or_else(|| {
                Error::Invalid(format!("s is not essentially surjective: nothing maps onto {}", big.object_name(x)))
            })?;
            witnesses.push(w);
        }
        Ok(SplitExtension {
            base,
            p,
            s,
            unit,
            witnesses,
        })
    }

    pub fn base(&self) -> &Arc<dyn ExactCategory> {
        &self.base
    }

    pub fn p(&self) -> &AddFunctor {
        &self.p
    }

    pub fn s(&self) -> &AddFunctor {
        &self.s
    }

    pub fn unit(&self) -> &NatIso {
        &self.unit
    }

    pub fn essential_surjectivity_witnesses(&self) -> &[(ObjId, Morphism)] {
        &self.witnesses
    }

    /// Two composable generators of `ker p` whose composite is nonzero, if any.
    pub fn square_zero_violation(&self) -> Option<(Morphism, Morphism)> {
        let big = self.p.source();
        let kers: Vec<Vec<Morphism>> = big
            .objects()
            .flat_map(|x| big.objects().map(move |y| (x, y)))
            .map(|(x, y)| {
                let (k, incl) = self.p.hom_map(x, y).kernel();
                (0..k.generator_count())
                    .map(|t| Morphism::new(x, y, incl.matrix().column(t)))
                    .collect()
            })
            .collect();
        let n = big.object_count();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for f in &kers[x * n + y] {
                        for g in &kers[y * n + z] {
                            let gf = big.compose(g, f).expect("composable");
                            if !big.is_zero(&gf) {
                                return Some((f.clone(), g.clone()));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_square_zero(&self) -> bool {
        self.square_zero_violation().is_none()
    }
}

/// The comparison `F: C ⋉ ker p → C'` and its inverse on hom-groups.
pub struct Classification {
    pub kernel: Arc<Bimodule>,
    pub inclusions: Vec<GroupHom>,
    pub semidirect: Arc<SemidirectCat>,
    /// `F(c) = s(c)`, `F(f, m) = s(f) + m`.
    pub functor: AddFunctor,
    /// `φ ↦ (U_b ∘ p(φ) ∘ U_a⁻¹, φ − s(U_b ∘ p(φ) ∘ U_a⁻¹))`, indexed `a·n + b`.
    pub inverse_on_homs: Vec<GroupHom>,
}

pub fn classify_extension(ext: &SplitExtension) -> Result<Classification> {
    if let Some((f, g)) = ext.square_zero_violation() {
        return Err(Error::NotSquareZero(format!("{g:?} ∘ {f:?} ≠ 0 although both lie in ker p")));
    }
    let (kernel, inclusions) = Bimodule::kernel_of_projection(&ext.p, &ext.s)?;
    let kernel = Arc::new(kernel);
    let semidirect = Arc::new(SemidirectCat::unchecked(ext.base.clone(), kernel.clone())?);
    let base = ext.base.cat();
    let big = ext.p.source().clone();
    let n = base.object_count();
    let functor = AddFunctor::from_generator_images(
        semidirect.semidirect_cat().clone(),
        big.clone(),
        ext.s.object_map().to_vec(),
        |a, b, u| {
            let gb = base.hom(a, b).generator_count();
            if u < gb {
                ext.s.apply(&base.generator(a, b, u)).coords
            } else {
                inclusions[a * n + b].apply(&kernel.value(a, b).basis_vector(u - gb))
            }
        },
    )?;
    if let Some(v) = functor.check().violations.first() {
        return Err(Error::NotSquareZero(format!("F does not preserve composition: {v}")));
    }
    let mut inverse_on_homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (sa, sb) = (ext.s.object(a), ext.s.object(b));
            let src = big.hom(sa, sb);
            let solver = inclusions[a * n + b].preimage_solver();
            let mut cols = Vec::with_capacity(src.generator_count());
            for t in 0..src.generator_count() {
                let phi = big.generator(sa, sb, t);
                let g = base.compose_path(&[ext.unit.inverse(a), &ext.p.apply(&phi), ext.unit.component(b)])?;
                let rest = sub_vec(&phi.coords, &ext.s.apply(&g).coords);
                let m = solver
                    .solve(&rest)
                    .ok_or_else(|| Error::NotWellDefined("φ − s(g) is not in ker p".into()))?;
                let mut col = g.coords;
                col.extend(m);
                cols.push(col);
            }
            let tgt = semidirect.semidirect_cat().hom(a, b);
            let mat = IntMatrix::from_columns(tgt.generator_count(), &cols)?;
            inverse_on_homs.push(GroupHom::new(src.clone(), tgt.clone(), mat)?);
        }
    }
    Ok(Classification {
        kernel,
        inclusions,
        semidirect,
        functor,
        inverse_on_homs,
    })
}

impl Classification {
    /// `F ∘ inv = id` and `inv ∘ F = id` on every hom-group; returns the
    /// first failing pair.
    pub fn round_trip_failure(&self) -> Option<(ObjId, ObjId)> {
        let cat = self.semidirect.semidirect_cat();
        let n = cat.object_count();
        for a in 0..n {
            for b in 0..n {
                let f = self.functor.hom_map(a, b);
                let inv = &self.inverse_on_homs[a * n + b];
                let ok = f.compose(inv).map(|h| h.equals(&GroupHom::identity(inv.source()))).unwrap_or(false)
                    && inv.compose(f).map(|h| h.equals(&GroupHom::identity(f.source()))).unwrap_or(false);
                if !ok {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// With `F` bijective on objects: `F` maps exact sequences of `C ⋉ ker p`
    /// exactly onto those of `target`.
    pub fn preserves_and_reflects_exactness(&self, target: &dyn ExactCategory) -> Result<bool> {
        if !Arc::ptr_eq(target.cat(), self.functor.target()) {
            return Err(Error::Invalid("exact structure on a different category".into()));
        }
        let mut seen = vec![false; target.cat().object_count()];
        for &x in self.functor.object_map() {
            seen[x] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("F is not bijective on objects".into()));
        }
        let ours = exact_sequences(self.semidirect.as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET)?;
        let theirs = exact_sequences(target, EnumOrder::MonoFirst, DEFAULT_BUDGET)?;
        let preserved = ours.iter().all(|s| target.is_exact(&self.functor.apply(&s.i), &self.functor.apply(&s.q)));
        Ok(preserved && ours.len() == theirs.len())
    }
}

/// The extension `P_{A⋉M} → P_A` induced by the augmentation of a ring
/// with one (square-zero or not).
pub fn dual_numbers_extension(ring: &FiniteRing, max_rank: usize) -> Result<(FreeModuleCat, FreeModuleCat, SplitExtension)> {
    let (a, p, s) = ring
        .augmentation()
        .ok_or_else(|| Error::Invalid(format!("{} has no augmentation", ring.name())))?;
    let big = FreeModuleCat::new(ring.clone(), max_rank)?;
    let small = FreeModuleCat::new(a, max_rank)?;
    let pf = big.base_change(&p, &small)?;
    let sf = small.base_change(&s, &big)?;
    let ext = SplitExtension::new(small.exact(), pf, sf)?;
    Ok((big, small, ext))
}

fn square_zero_moduli(big: &FreeModuleCat) -> Result<(u64, u64)> {
    match *big.ring().kind() {
        RingKind::SquareZero { n, m } => Ok((n, m)),
        _ => Err(Error::Invalid("expected modules over a ring A ⋉ M".into())),
    }
}

/// The functor `P_A ⋉ hom(−, − ⊗ M) → P_{A⋉M}`, `(φ, f) ↦ φ + εf`.
pub fn dual_numbers_iso(big: &FreeModuleCat, sd: &SemidirectCat) -> Result<AddFunctor> {
    square_zero_moduli(big)?;
    let base = sd.base_cat().clone();
    AddFunctor::from_generator_images(
        sd.semidirect_cat().clone(),
        big.cat().clone(),
        (0..=big.max_rank()).collect(),
        |a, b, u| {
            let gb = base.hom(a, b).generator_count();
            let (idx, k) = if u < gb { (u, 0) } else { (u - gb, 1) };
            let (i, j) = (idx / a, idx % a);
            let mut v = vec![Int::zero(); a * b * 2];
            v[entry_index(a, 2, i, j, k)] = Int::from(1);
            v
        },
    )
}

/// The natural isomorphism `hom(−, − ⊗ M) ≅ ker p` for `P_{A⋉M} → P_A`.
pub fn dual_numbers_kernel_iso(
    big: &FreeModuleCat,
    hom_tensor: &Bimodule,
    classification: &Classification,
) -> Result<BimoduleMorphism> {
    square_zero_moduli(big)?;
    let base = hom_tensor.base();
    let n = base.object_count();
    let mut comps = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let incl = &classification.inclusions[a * n + b];
            let solver = incl.preimage_solver();
            let cols = (0..a * b)
                .map(|idx| {
                    let (i, j) = (idx / a, idx % a);
                    let mut v = vec![Int::zero(); a * b * 2];
                    v[entry_index(a, 2, i, j, 1)] = Int::from(1);
                    solver.solve(&v).ok_or_else(|| Error::NotWellDefined("ε-matrix outside ker p".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let k = classification.kernel.value(a, b);
            let mat = IntMatrix::from_columns(k.generator_count(), &cols)?;
            comps.push(GroupHom::new(hom_tensor.value(a, b).clone(), k.clone(), mat)?);
        }
    }
    BimoduleMorphism::new(hom_tensor, &classification.kernel, comps)
}

/// For an `(A⋉M)`-matrix `f: R^r → R^s`, the additive map it induces on
/// `A^r ⊕ M^r → A^s ⊕ M^s`, together with the block matrix
/// `[[φ, 0], [f_M, φ ⊗ M]]` built from its two parts. Rows are reduced
/// modulo `n` (first `s`) and `m` (last `s`).
pub fn dual_numbers_block_form(big: &FreeModuleCat, f: &Morphism) -> Result<(IntMatrix, IntMatrix)> {
    let (n, m) = square_zero_moduli(big)?;
    let ring = big.ring();
    let (r, s) = (f.source, f.target);
    let entries = big.entries(f);
    let mut actual = IntMatrix::zeros(2 * s, 2 * r);
    for col in 0..2 * r {
        let (j, part) = (col % r, col / r);
        for i in 0..s {
            let x = ring.mul(&entries[i][j], &ring.additive().basis_vector(part));
            actual[(i, col)] = x[0].clone();
            actual[(s + i, col)] = x[1].clone();
        }
    }
    let mut block = IntMatrix::zeros(2 * s, 2 * r);
    for i in 0..s {
        for j in 0..r {
            let e = &entries[i][j];
            block[(i, j)] = e[0].clone();
            block[(s + i, j)] = e[1].clone();
            block[(s + i, r + j)] = e[0].clone();
        }
    }
    let reduce = |mut mat: IntMatrix| {
        for i in 0..2 * s {
            let modulus = Int::from(if i < s { n } else { m });
            for j in 0..2 * r {
                let v = ((&mat[(i, j)] % &modulus) + &modulus) % &modulus;
                mat[(i, j)] = v;
            }
        }
        mat
    };
    Ok((reduce(actual), reduce(block)))
}
