use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::hom::GroupHom;
use super::matrix::{add_vec, neg_vec, sub_vec, Int, IntMatrix};
use super::snf::{kernel_generators, smith_normal_form};
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^g / im(R)`, where the columns of the
/// relation matrix `R` are relations among the `g` generators.
///
/// Cloning is cheap. Elements are plain coordinate vectors over the
/// generators; equality of elements is decided through the Smith basis.
#[derive(Clone)]
pub struct FinAbGroup(Arc<Presentation>);

struct Presentation {
    gens: usize,
    relations: IntMatrix,
    /// Computed on first use.
    smith: OnceLock<Smith>,
    /// `Some(n_k)` when every relation is `n_k·e_k` for distinct generators,
    /// allowing direct reduction without a change of basis.
    diagonal: Option<Vec<Int>>,
}

struct Smith {
    /// Rows of the Smith change of basis that survive (invariant factor ≠ 1).
    canon: IntMatrix,
    /// Invariant factor per canonical coordinate; zero marks a free coordinate.
    moduli: Vec<Int>,
    /// Columns map canonical basis vectors back to generator coordinates.
    lift: IntMatrix,
}

impl Smith {
    fn of(gens: usize, relations: &IntMatrix) -> Smith {
        let snf = smith_normal_form(relations);
        let mut keep = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..gens {
            let d = if i < snf.rank() {
                snf.d[(i, i)].clone()
            } else {
                Int::zero()
            };
            if !d.is_one() {
                keep.push(i);
                moduli.push(d);
            }
        }
        let canon = {
            let mut m = IntMatrix::zeros(keep.len(), gens);
            for (r, &i) in keep.iter().enumerate() {
                for j in 0..gens {
                    m[(r, j)] = snf.u_inv[(i, j)].clone();
                }
            }
            m
        };
        let lift = snf.u.select_columns(&keep);
        Smith { canon, moduli, lift }
    }
}

impl FinAbGroup {
    /// Group on `gens` generators with relation columns `relations`.
    pub fn new(gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::Dimension(format!(
                "relation matrix has {} rows for {gens} generators",
                relations.rows()
            )));
        }
        let diagonal = diagonal_moduli(gens, &relations);
        Ok(FinAbGroup(Arc::new(Presentation {
            gens,
            relations,
            smith: OnceLock::new(),
            diagonal,
        })))
    }

    fn smith(&self) -> &Smith {
        self.0.smith.get_or_init(|| Smith::of(self.0.gens, &self.0.relations))
    }

    pub fn trivial() -> Self {
        Self::new(0, IntMatrix::zeros(0, 0)).expect("empty presentation")
    }

    /// `Z^n`.
    pub fn free(n: usize) -> Self {
        Self::new(n, IntMatrix::zeros(n, 0)).expect("free presentation")
    }

    /// `Z/n`; `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Self {
        Self::zn_power(n, 1)
    }

    /// `(Z/n)^k`.
    pub fn zn_power(n: u64, k: usize) -> Self {
        Self::new(k, IntMatrix::diagonal(&vec![Int::from(n); k])).expect("diagonal presentation")
    }

    /// Group with the given invariant factors as a diagonal presentation.
    pub fn from_invariant_factors(factors: &[u64]) -> Self {
        let d: Vec<Int> = factors.iter().map(|&f| Int::from(f)).collect();
        Self::new(d.len(), IntMatrix::diagonal(&d)).expect("diagonal presentation")
    }

    pub fn generator_count(&self) -> usize {
        self.0.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// Invariant factors: torsion coefficients in divisibility order,
    /// followed by one `0` per free summand. The trivial group gives `[]`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let moduli = &self.smith().moduli;
        let mut torsion: Vec<Int> = moduli.iter().filter(|m| !m.is_zero()).cloned().collect();
        torsion.sort();
        let free = moduli.iter().filter(|m| m.is_zero()).count();
        torsion.extend(std::iter::repeat_n(Int::zero(), free));
        torsion
    }

    pub fn free_rank(&self) -> usize {
        if let Some(d) = &self.0.diagonal {
            return d.iter().filter(|m| m.is_zero()).count();
        }
        self.smith().moduli.iter().filter(|m| m.is_zero()).count()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        if let Some(d) = &self.0.diagonal {
            return d.iter().all(|m| m.is_one());
        }
        self.smith().moduli.is_empty()
    }

    /// Order of the group, or `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        if let Some(d) = &self.0.diagonal {
            return Some(d.iter().product());
        }
        Some(self.smith().moduli.iter().product())
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|o| o.to_u64())
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.0.gens]
    }

    pub fn basis_vector(&self, k: usize) -> Vec<Int> {
        let mut v = self.zero();
        v[k] = Int::one();
        v
    }

    /// Canonical coordinates: reduced coordinates in the Smith basis.
    /// Two coordinate vectors represent the same element iff their canonical
    /// forms agree.
    pub fn canonical(&self, coords: &[Int]) -> Vec<Int> {
        debug_assert_eq!(coords.len(), self.0.gens);
        if let Some(d) = &self.0.diagonal {
            // Diagonal presentations are their own Smith basis up to order.
            return self.reduce_diagonal(d, coords);
        }
        let smith = self.smith();
        let mut c = smith.canon.apply(coords);
        for (x, m) in c.iter_mut().zip(&smith.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
        c
    }

    fn reduce_diagonal(&self, d: &[Int], coords: &[Int]) -> Vec<Int> {
        coords
            .iter()
            .zip(d)
            .map(|(x, m)| if m.is_zero() { x.clone() } else { x.mod_floor(m) })
            .collect()
    }

    /// Returns coordinates for the same element with small entries.
    pub fn reduce(&self, coords: &[Int]) -> Vec<Int> {
        if let Some(d) = &self.0.diagonal {
            return self.reduce_diagonal(d, coords);
        }
        self.smith().lift.apply(&self.canonical(coords))
    }

    pub fn is_zero(&self, coords: &[Int]) -> bool {
        if let Some(d) = &self.0.diagonal {
            return coords
                .iter()
                .zip(d)
                .all(|(x, m)| if m.is_zero() { x.is_zero() } else { x.is_multiple_of(m) });
        }
        self.canonical(coords).iter().all(Zero::is_zero)
    }

    pub fn elems_equal(&self, a: &[Int], b: &[Int]) -> bool {
        self.is_zero(&sub_vec(a, b))
    }

    /// Generator coordinates of the canonical basis element `k`.
    pub fn canonical_generator(&self, k: usize) -> Vec<Int> {
        if self.0.diagonal.is_some() {
            // canonical coordinates coincide with generator coordinates
            return self.basis_vector(k);
        }
        self.smith().lift.column(k)
    }

    /// Moduli of the canonical coordinates (0 for free ones).
    pub fn canonical_moduli(&self) -> Vec<Int> {
        match &self.0.diagonal {
            Some(d) => d.clone(),
            None => self.smith().moduli.clone(),
        }
    }

    fn from_canonical(&self, c: &[Int]) -> Vec<Int> {
        if self.0.diagonal.is_some() {
            return c.to_vec();
        }
        self.smith().lift.apply(c)
    }

    /// Iterates over all elements of a finite group in a fixed order, each
    /// represented by reduced generator coordinates.
    pub fn elements(&self) -> Result<Elements> {
        if !self.is_finite() {
            return Err(Error::Infinite("cannot enumerate an infinite group".into()));
        }
        let moduli = self.canonical_moduli();
        let limits: Vec<u64> = moduli
            .iter()
            .map(|m| {
                if m.is_zero() {
                    // free diagonal generator cannot occur in a finite group
                    1
                } else {
                    m.to_u64().expect("modulus fits in u64")
                }
            })
            .collect();
        Ok(Elements {
            group: self.clone(),
            limits,
            counter: Some(vec![0; moduli.len()]),
        })
    }

    /// `G₁ ⊕ … ⊕ Gₙ`.
    pub fn direct_sum(groups: &[FinAbGroup]) -> FinAbGroup {
        let rels: Vec<&IntMatrix> = groups.iter().map(|g| g.relations()).collect();
        let gens = groups.iter().map(FinAbGroup::generator_count).sum();
        FinAbGroup::new(gens, IntMatrix::block_diagonal(&rels)).expect("block presentation")
    }

    /// Presents the subgroup generated by the columns of `gens` (generator
    /// coordinates in `self`), together with its inclusion.
    pub fn subgroup(&self, gens: &IntMatrix) -> Result<(FinAbGroup, GroupHom)> {
        if gens.rows() != self.0.gens {
            return Err(Error::Dimension("subgroup generators of the wrong length".into()));
        }
        let k = gens.cols();
        let stacked = gens.hstack(&self.0.relations)?;
        let ker = kernel_generators(&stacked);
        let rels = ker.select_rows(0..k);
        let nonzero: Vec<usize> = (0..rels.cols()).filter(|&j| (0..k).any(|i| !rels[(i, j)].is_zero())).collect();
        let sub = FinAbGroup::new(k, rels.select_columns(&nonzero))?;
        let incl = GroupHom::new_unchecked(sub.clone(), self.clone(), gens.clone());
        Ok((sub, incl))
    }

    /// Quotient by the subgroup generated by the columns of `extra`,
    /// together with the projection.
    pub fn quotient(&self, extra: &IntMatrix) -> Result<(FinAbGroup, GroupHom)> {
        let rels = self.0.relations.hstack(extra)?;
        let q = FinAbGroup::new(self.0.gens, rels)?;
        let proj = GroupHom::new_unchecked(self.clone(), q.clone(), IntMatrix::identity(self.0.gens));
        Ok((q, proj))
    }

    pub fn element(&self, coords: Vec<Int>) -> Result<GroupElement> {
        GroupElement::new(self.clone(), coords)
    }

    pub fn same_presentation(&self, other: &FinAbGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.gens == other.0.gens && self.0.relations == other.0.relations)
    }
}

fn diagonal_moduli(gens: usize, relations: &IntMatrix) -> Option<Vec<Int>> {
    let mut d = vec![Int::zero(); gens];
    let mut seen = vec![false; gens];
    for j in 0..relations.cols() {
        let nz: Vec<usize> = (0..gens).filter(|&i| !relations[(i, j)].is_zero()).collect();
        match nz.as_slice() {
            [] => {}
            [i] => {
                if seen[*i] {
                    return None;
                }
                seen[*i] = true;
                d[*i] = num_traits::Signed::abs(&relations[(*i, j)]);
            }
            _ => return None,
        }
    }
    Some(d)
}

impl PartialEq for FinAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_presentation(other)
    }
}

impl Eq for FinAbGroup {}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.invariant_factors().iter().map(ToString::to_string).collect();
        write!(f, "FinAbGroup(gens={}, invariants=[{}])", self.0.gens, factors.join(","))
    }
}

/// Element iterator of a finite group (mixed-radix counter over the
/// canonical coordinates).
pub struct Elements {
    group: FinAbGroup,
    limits: Vec<u64>,
    counter: Option<Vec<u64>>,
}

impl Iterator for Elements {
    type Item = Vec<Int>;

    fn next(&mut self) -> Option<Vec<Int>> {
        let current = self.counter.as_mut()?;
        let canonical: Vec<Int> = current.iter().map(|&c| Int::from(c)).collect();
        let out = self.group.from_canonical(&canonical);
        let mut k = 0;
        loop {
            if k == current.len() {
                self.counter = None;
                break;
            }
            current[k] += 1;
            if current[k] < self.limits[k] {
                break;
            }
            current[k] = 0;
            k += 1;
        }
        Some(out)
    }
}

/// An element of a [`FinAbGroup`].
#[derive(Clone)]
pub struct GroupElement {
    group: FinAbGroup,
    coords: Vec<Int>,
}

impl GroupElement {
    pub fn new(group: FinAbGroup, coords: Vec<Int>) -> Result<Self> {
        if coords.len() != group.generator_count() {
            return Err(Error::Dimension(format!(
                "{} coordinates for a group on {} generators",
                coords.len(),
                group.generator_count()
            )));
        }
        Ok(GroupElement { group, coords })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn canonical(&self) -> Vec<Int> {
        self.group.canonical(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero(&self.coords)
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.group.elems_equal(&self.coords, &other.coords)
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", c.join(","))
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: &GroupElement) -> GroupElement {
        assert!(self.group == rhs.group, "adding elements of different groups");
        GroupElement {
            group: self.group.clone(),
            coords: self.group.reduce(&add_vec(&self.coords, &rhs.coords)),
        }
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        assert!(self.group == rhs.group, "subtracting elements of different groups");
        GroupElement {
            group: self.group.clone(),
            coords: self.group.reduce(&sub_vec(&self.coords, &rhs.coords)),
        }
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        GroupElement {
            group: self.group.clone(),
            coords: self.group.reduce(&neg_vec(&self.coords)),
        }
    }
}
