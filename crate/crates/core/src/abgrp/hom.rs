use std::fmt;


use super::group::FinAbGroup;
use super::matrix::{Int, IntMatrix};
use super::snf::{kernel_generators, smith_normal_form, solve_with, SmithForm};
use crate::error::{Error, Result};

/// A homomorphism of finitely generated abelian groups, given by the images
/// of the source generators (the columns of `matrix`).
#[derive(Clone)]
pub struct GroupHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Builds a homomorphism, checking that every source relation maps into
    /// the relation span of the target.
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.generator_count(), source.generator_count()) {
            return Err(Error::Dimension(format!(
                "hom matrix {:?} between groups on {} and {} generators",
                matrix.shape(),
                source.generator_count(),
                target.generator_count()
            )));
        }
        let h = GroupHom::new_unchecked(source, target, matrix);
        if let Some(j) = h.ill_defined_relation() {
            return Err(Error::NotWellDefined(format!("source relation {j} does not map to zero")));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Self {
        GroupHom { source, target, matrix }
    }

    fn ill_defined_relation(&self) -> Option<usize> {
        (0..self.source.relations().cols()).find(|&j| !self.target.is_zero(&self.matrix.apply(&self.source.relations().column(j))))
    }

    pub fn is_well_defined(&self) -> bool {
        self.ill_defined_relation().is_none()
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        GroupHom::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.generator_count()))
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        GroupHom::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.generator_count(), source.generator_count()),
        )
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        debug_assert_eq!(x.len(), self.source.generator_count());
        self.target.reduce(&self.matrix.apply(x))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.source != other.target {
            return Err(Error::GroupMismatch("composing homs with mismatched groups".into()));
        }
        Ok(GroupHom::new_unchecked(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix)?,
        ))
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        self.check_parallel(other)?;
        Ok(GroupHom::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix)?,
        ))
    }

    pub fn neg(&self) -> GroupHom {
        GroupHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn scale(&self, c: &Int) -> GroupHom {
        GroupHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    fn check_parallel(&self, other: &GroupHom) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::GroupMismatch("homs between different groups".into()));
        }
        Ok(())
    }

    /// Extensional equality: agree on every source generator.
    pub fn equals(&self, other: &GroupHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.source.generator_count()).all(|j| {
                let diff: Vec<Int> = (0..self.target.generator_count())
                    .map(|i| &self.matrix[(i, j)] - &other.matrix[(i, j)])
                    .collect();
                self.target.is_zero(&diff)
            })
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.generator_count()).all(|j| self.target.is_zero(&self.matrix.column(j)))
    }

    /// `[M | R_target]`, whose integer kernel describes preimages.
    fn augmented(&self) -> IntMatrix {
        self.matrix.hstack(self.target.relations()).expect("row counts agree")
    }

    pub(crate) fn preimage_solver(&self) -> PreimageSolver {
        PreimageSolver {
            snf: smith_normal_form(&self.augmented()),
            source_gens: self.source.generator_count(),
        }
    }

    /// Some `x` with `self(x) = y`, or `None`. The choice is the canonical
    /// particular solution of the underlying integer system.
    pub fn preimage(&self, y: &[Int]) -> Option<Vec<Int>> {
        self.preimage_solver().solve(y).map(|x| self.source.reduce(&x))
    }

    /// Kernel as a subgroup of the source.
    pub fn kernel(&self) -> (FinAbGroup, GroupHom) {
        let gs = self.source.generator_count();
        let ker = kernel_generators(&self.augmented());
        let gens = ker.select_rows(0..gs);
        let nonzero: Vec<usize> = (0..gens.cols()).filter(|&j| !self.source.is_zero(&gens.column(j))).collect();
        self.source.subgroup(&gens.select_columns(&nonzero)).expect("kernel generators have source length")
    }

    /// Image as a subgroup of the target.
    pub fn image(&self) -> (FinAbGroup, GroupHom) {
        self.target.subgroup(&self.matrix).expect("columns have target length")
    }

    pub fn cokernel(&self) -> (FinAbGroup, GroupHom) {
        self.target.quotient(&self.matrix).expect("columns have target length")
    }

    pub fn is_mono(&self) -> bool {
        let gs = self.source.generator_count();
        let ker = kernel_generators(&self.augmented());
        (0..ker.cols()).all(|j| self.source.is_zero(&ker.column(j)[..gs]))
    }

    pub fn is_epi(&self) -> bool {
        let (c, _) = self.cokernel();
        c.is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// The homomorphism into `⊕ targets` whose components are `homs`.
    pub fn stack(homs: &[GroupHom]) -> Result<GroupHom> {
        let first = homs.first().ok_or_else(|| Error::Invalid("stacking no homs".into()))?;
        let mut matrix = IntMatrix::zeros(0, first.source.generator_count());
        let mut targets = Vec::with_capacity(homs.len());
        for h in homs {
            if h.source != first.source {
                return Err(Error::GroupMismatch("stacked homs must share a source".into()));
            }
            matrix = matrix.vstack(&h.matrix)?;
            targets.push(h.target.clone());
        }
        Ok(GroupHom::new_unchecked(
            first.source.clone(),
            FinAbGroup::direct_sum(&targets),
            matrix,
        ))
    }

    /// The homomorphism out of `⊕ sources` whose restrictions are `homs`.
    pub fn copair(homs: &[GroupHom]) -> Result<GroupHom> {
        let first = homs.first().ok_or_else(|| Error::Invalid("copairing no homs".into()))?;
        let mut matrix = IntMatrix::zeros(first.target.generator_count(), 0);
        let mut sources = Vec::with_capacity(homs.len());
        for h in homs {
            if h.target != first.target {
                return Err(Error::GroupMismatch("copaired homs must share a target".into()));
            }
            matrix = matrix.hstack(&h.matrix)?;
            sources.push(h.source.clone());
        }
        Ok(GroupHom::new_unchecked(
            FinAbGroup::direct_sum(&sources),
            first.target.clone(),
            matrix,
        ))
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({:?} -> {:?}, {:?})", self.source, self.target, self.matrix)
    }
}

/// A reusable solver for `f(x) = y` against a fixed homomorphism.
pub(crate) struct PreimageSolver {
    snf: SmithForm,
    source_gens: usize,
}

impl PreimageSolver {
    pub(crate) fn solve(&self, y: &[Int]) -> Option<Vec<Int>> {
        let mut x = solve_with(&self.snf, y)?;
        x.truncate(self.source_gens);
        Some(x)
    }
}

/// `0 → A →f→ B →g→ C → 0` is exact: `f` injective, `g` surjective and
/// `im f = ker g`.
pub fn is_short_exact(f: &GroupHom, g: &GroupHom) -> Result<bool> {
    if f.target != g.source {
        return Err(Error::GroupMismatch("f.target must equal g.source".into()));
    }
    if !g.compose(f)?.is_zero() || !f.is_mono() || !g.is_epi() {
        return Ok(false);
    }
    let (ker, incl) = g.kernel();
    let solver = f.preimage_solver();
    Ok((0..ker.generator_count()).all(|k| solver.solve(&incl.matrix().column(k)).is_some()))
}

pub fn hom_is_mono(f: &GroupHom) -> bool {
    f.is_mono()
}

pub fn hom_is_epi(f: &GroupHom) -> bool {
    f.is_epi()
}

/// The pullback `P = {(a, b) : f(a) = g(b)}` of `A →f→ C ←g← B`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub group: FinAbGroup,
    pub pr_first: GroupHom,
    pub pr_second: GroupHom,
    embedding: GroupHom,
}

pub fn pullback(f: &GroupHom, g: &GroupHom) -> Result<Pullback> {
    if f.target != g.target {
        return Err(Error::GroupMismatch("pullback legs must share a target".into()));
    }
    let (ga, gb) = (f.source.generator_count(), g.source.generator_count());
    let system = f.matrix.hstack(&g.matrix.neg())?.hstack(f.target.relations())?;
    let ker = kernel_generators(&system);
    let gens = ker.select_rows(0..ga + gb);
    let sum = FinAbGroup::direct_sum(&[f.source.clone(), g.source.clone()]);
    let (group, embedding) = sum.subgroup(&gens)?;
    let pr_first = GroupHom::new_unchecked(group.clone(), f.source.clone(), gens.select_rows(0..ga));
    let pr_second = GroupHom::new_unchecked(group.clone(), g.source.clone(), gens.select_rows(ga..ga + gb));
    Ok(Pullback {
        group,
        pr_first,
        pr_second,
        embedding,
    })
}

impl Pullback {
    /// The unique map `D → P` induced by a commuting cone `(h, k)`.
    pub fn mediate(&self, h: &GroupHom, k: &GroupHom) -> Result<GroupHom> {
        if h.target != self.pr_first.target || k.target != self.pr_second.target || h.source != k.source {
            return Err(Error::GroupMismatch("cone does not match the pullback".into()));
        }
        let solver = self.embedding.preimage_solver();
        let d = h.source.generator_count();
        let mut columns = Vec::with_capacity(d);
        for j in 0..d {
            let mut target = h.matrix.column(j);
            target.extend(k.matrix.column(j));
            let x = solver
                .solve(&target)
                .ok_or_else(|| Error::Unsolvable("cone does not factor through the pullback".into()))?;
            columns.push(x);
        }
        let m = IntMatrix::from_columns(self.group.generator_count(), &columns)?;
        GroupHom::new(h.source.clone(), self.group.clone(), m)
    }
}

/// Number of elements of `group` in the image of `f`; finite groups only.
pub fn image_order(f: &GroupHom) -> Option<Int> {
    f.image().0.order()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::matrix::int_vec;

    fn hom(src: &FinAbGroup, tgt: &FinAbGroup, rows: &[&[i64]]) -> GroupHom {
        GroupHom::new(src.clone(), tgt.clone(), IntMatrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn well_definedness_is_checked() {
        let z2 = FinAbGroup::cyclic(2);
        let z4 = FinAbGroup::cyclic(4);
        assert!(GroupHom::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[[1]])).is_err());
        assert!(GroupHom::new(z2, z4, IntMatrix::from_rows(&[[2]])).is_ok());
    }

    #[test]
    fn identity_sequence_is_exact() {
        let g = FinAbGroup::zn_power(3, 2);
        let zero = FinAbGroup::trivial();
        assert!(is_short_exact(&GroupHom::identity(&g), &GroupHom::zero(&g, &zero)).unwrap());
    }

    #[test]
    fn biproduct_is_exact() {
        let z2 = FinAbGroup::cyclic(2);
        let z22 = FinAbGroup::zn_power(2, 2);
        let i = hom(&z2, &z22, &[&[1], &[0]]);
        let q = hom(&z22, &z2, &[&[0, 1]]);
        assert!(is_short_exact(&i, &q).unwrap());
        assert!(!is_short_exact(&i, &hom(&z22, &z2, &[&[1, 1]])).unwrap());
    }

    #[test]
    fn doubling_into_z4_is_exact() {
        let z2 = FinAbGroup::cyclic(2);
        let z4 = FinAbGroup::cyclic(4);
        let i = hom(&z2, &z4, &[&[2]]);
        let q = hom(&z4, &z2, &[&[1]]);
        assert!(is_short_exact(&i, &q).unwrap());
        assert!(is_short_exact(&q, &i).is_err() || !is_short_exact(&q, &i).unwrap());
    }

    #[test]
    fn pullback_examples() {
        let z = FinAbGroup::free(1);
        let z2 = FinAbGroup::cyclic(2);
        let f = hom(&z, &z2, &[&[1]]);
        let pb = pullback(&f, &f).unwrap();
        // {(a, b) : a ≡ b mod 2} ≅ Z²
        assert_eq!(pb.group.invariant_factors(), int_vec(&[0, 0]));
        let fa = pb.pr_first.clone();
        assert!(f.compose(&fa).unwrap().equals(&f.compose(&pb.pr_second).unwrap()));
        // (1,1) is in P, (1,0) is not
        let e = pb.embedding.preimage_solver();
        assert!(e.solve(&int_vec(&[1, 1])).is_some());
        assert!(e.solve(&int_vec(&[1, 0])).is_none());

        let g = FinAbGroup::cyclic(6);
        let id = GroupHom::identity(&g);
        let diag = pullback(&id, &id).unwrap();
        assert_eq!(diag.group.order_u64(), Some(6));
        let zero = FinAbGroup::trivial();
        let h = FinAbGroup::cyclic(4);
        let pb = pullback(&GroupHom::zero(&g, &zero), &GroupHom::zero(&h, &zero)).unwrap();
        assert_eq!(pb.group.order_u64(), Some(24));
    }

    #[test]
    fn pullback_mediator() {
        let g = FinAbGroup::cyclic(4);
        let id = GroupHom::identity(&g);
        let pb = pullback(&id, &id).unwrap();
        let m = pb.mediate(&id, &id).unwrap();
        assert!(pb.pr_first.compose(&m).unwrap().equals(&id));
        let twice = id.scale(&Int::from(2));
        assert!(pb.mediate(&id, &twice).is_err());
    }
}
