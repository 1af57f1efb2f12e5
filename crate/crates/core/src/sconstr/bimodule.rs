use std::sync::Arc;

use num_traits::Zero;

use crate::abgrp::{FinAbGroup, GroupHom, Int, IntMatrix};
use crate::bimod::Bimodule;
use crate::cat::Morphism;
use crate::error::{Error, Result};
use crate::semidirect::SemidirectCat;

use super::{covers, injective_positions, positions, Pos, SPDiagram};

/// Which relations `ρ ≤ θ` the compatibility conditions range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compatibility {
    Covering,
    All,
}

/// `S_pM(X, Y) ⊂ ⊕_θ M(X_θ, Y_θ)`, `θ` ranging over injective positions.
#[derive(Clone, Debug)]
pub struct SPBimoduleGroup {
    pub group: FinAbGroup,
    /// Inclusion into the ambient sum.
    pub embedding: GroupHom,
    /// The stacked conditions `X(a)^* m_θ − Y(a)_* m_ρ`, whose kernel is `group`.
    pub conditions: Option<GroupHom>,
    p: usize,
    blocks: Vec<(Pos, FinAbGroup)>,
}

impl SPBimoduleGroup {
    pub fn level(&self) -> usize {
        self.p
    }

    pub fn ambient(&self) -> &FinAbGroup {
        self.embedding.target()
    }

    /// Offsets of each injective position in the ambient coordinates.
    fn offset(&self, pos: Pos) -> Option<(usize, usize)> {
        let mut off = 0;
        for (q, g) in &self.blocks {
            if *q == pos {
                return Some((off, g.generator_count()));
            }
            off += g.generator_count();
        }
        None
    }

    /// The `θ`-component of an ambient vector.
    pub fn component(&self, ambient: &[Int], pos: Pos) -> Vec<Int> {
        let (off, len) = self.offset(pos).expect("injective position");
        ambient[off..off + len].to_vec()
    }

    /// Whether an ambient vector satisfies every condition.
    pub fn contains(&self, ambient: &[Int]) -> bool {
        match &self.conditions {
            Some(c) => c.target().is_zero(&c.apply(ambient)),
            None => true,
        }
    }
}

pub fn sp_bimodule_group(x: &SPDiagram, y: &SPDiagram, m: &Bimodule, mode: Compatibility) -> Result<SPBimoduleGroup> {
    if x.level() != y.level() {
        return Err(Error::Invalid(format!("levels {} and {} differ", x.level(), y.level())));
    }
    if !Arc::ptr_eq(x.cat(), m.base()) || !Arc::ptr_eq(y.cat(), m.base()) {
        return Err(Error::Invalid("diagrams and bimodule live over different categories".into()));
    }
    let p = x.level();
    let inj = injective_positions(p);
    let blocks: Vec<(Pos, FinAbGroup)> = inj.iter().map(|&t| (t, m.value(x.object(t), y.object(t)).clone())).collect();
    let ambient = FinAbGroup::direct_sum(&blocks.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>());
    let relations: Vec<(Pos, Pos)> = match mode {
        Compatibility::Covering => covers(p).into_iter().filter(|(r, t)| inj.contains(r) && inj.contains(t)).collect(),
        Compatibility::All => inj
            .iter()
            .flat_map(|&r| inj.iter().map(move |&t| (r, t)))
            .filter(|&(r, t)| r != t && r.0 <= t.0 && r.1 <= t.1)
            .collect(),
    };
    if relations.is_empty() {
        return Ok(SPBimoduleGroup {
            group: ambient.clone(),
            embedding: GroupHom::identity(&ambient),
            conditions: None,
            p,
            blocks,
        });
    }
    let mut rows = Vec::with_capacity(relations.len());
    for &(r, t) in &relations {
        let xa = x.map(r, t)?;
        let ya = y.map(r, t)?;
        let target = m.value(x.object(r), y.object(t));
        let parts = blocks
            .iter()
            .map(|(q, g)| {
                if *q == t {
                    m.pull(&xa, y.object(t))
                } else if *q == r {
                    m.push(&ya, x.object(r)).neg()
                } else {
                    GroupHom::zero(g, target)
                }
            })
            .collect::<Vec<_>>();
        rows.push(GroupHom::copair(&parts)?);
    }
    let conditions = GroupHom::stack(&rows)?;
    let (group, embedding) = conditions.kernel();
    Ok(SPBimoduleGroup {
        group,
        embedding,
        conditions: Some(conditions),
        p,
        blocks,
    })
}

/// `σ^*: S_pM(X, Y) → S_qM(σ^*X, σ^*Y)` for monotone `σ: [q] → [p]`.
pub fn sp_simplicial_action(source: &SPBimoduleGroup, target: &SPBimoduleGroup, sigma: &[usize]) -> Result<GroupHom> {
    super::check_monotone(sigma, source.p)?;
    if sigma.len() != target.p + 1 {
        return Err(Error::Dimension(format!("σ has {} values, target level is {}", sigma.len(), target.p)));
    }
    let solver_target = &target.embedding;
    let mut cols = Vec::with_capacity(source.group.generator_count());
    for k in 0..source.group.generator_count() {
        let amb = source.embedding.apply(&source.group.basis_vector(k));
        let mut restricted = Vec::with_capacity(target.ambient().generator_count());
        for (q, g) in &target.blocks {
            let s = (sigma[q.0], sigma[q.1]);
            if s.0 < s.1 {
                restricted.extend(source.component(&amb, s));
            } else {
                restricted.extend(vec![Int::zero(); g.generator_count()]);
            }
        }
        let col = solver_target
            .preimage(&restricted)
            .ok_or_else(|| Error::NotWellDefined("σ^* leaves the compatible subgroup".into()))?;
        cols.push(col);
    }
    let mat = IntMatrix::from_columns(target.group.generator_count(), &cols)?;
    GroupHom::new(source.group.clone(), target.group.clone(), mat)
}

/// `Ψ(m)`: the automorphism `(id, m_θ)_θ` of `s_*c`, listed over all
/// positions (the diagonal ones are identities of the zero object).
pub fn psi_embed(sd: &SemidirectCat, c: &SPDiagram, m: &[Int]) -> Result<Vec<Morphism>> {
    let group = sp_bimodule_group(c, c, sd.bimodule(), Compatibility::Covering)?;
    if m.len() != group.ambient().generator_count() {
        return Err(Error::Dimension("element has the wrong number of coordinates".into()));
    }
    if !group.contains(m) {
        return Err(Error::NotWellDefined("family fails the compatibility conditions".into()));
    }
    let base = sd.base_cat();
    Ok(positions(c.level())
        .into_iter()
        .map(|pos| {
            let a = c.object(pos);
            let dec = if pos.0 < pos.1 {
                group.component(m, pos)
            } else {
                sd.bimodule().value(a, a).zero()
            };
            sd.join(&base.identity(a), &dec)
        })
        .collect())
}

/// Componentwise composite `f ∘ g` of two morphisms of `S_p(C ⋉ M)`.
pub fn psi_compose(sd: &SemidirectCat, f: &[Morphism], g: &[Morphism]) -> Result<Vec<Morphism>> {
    if f.len() != g.len() {
        return Err(Error::Dimension("morphisms of different levels".into()));
    }
    f.iter().zip(g).map(|(a, b)| sd.semidirect_cat().compose(a, b)).collect()
}
