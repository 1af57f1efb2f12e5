use std::sync::Arc;

use crate::abgrp::{add_vec, GroupHom, Int};
use crate::cat::ExactCategory;
use crate::error::{Error, Result};
use crate::semidirect::SemidirectCat;

use super::{covers, positions, Pos, SPDiagram};

/// A family `x_θ ∈ M(X_θ, X_θ)` making `(id, x_θ): X → s_*p_*X` natural.
#[derive(Clone, Debug)]
pub struct Straightened {
    pub level: usize,
    /// Indexed like [`positions`]; diagonal entries are empty vectors.
    pub x: Vec<Vec<Int>>,
}

impl Straightened {
    pub fn get(&self, pos: Pos) -> &[Int] {
        let k = positions(self.level).iter().position(|&q| q == pos).expect("valid position");
        &self.x[k]
    }

    /// Checks `f^* x_θ + m = f_* x_ρ` for every `(f, m): X_ρ → X_θ`, over
    /// covers or over all comparable pairs; returns the failing pairs.
    pub fn naturality_failures(&self, sd: &SemidirectCat, d: &SPDiagram, all_pairs: bool) -> Result<(usize, Vec<(Pos, Pos)>)> {
        let pairs: Vec<(Pos, Pos)> = if all_pairs {
            let ps = positions(d.level());
            ps.iter()
                .flat_map(|&r| ps.iter().map(move |&t| (r, t)))
                .filter(|&(r, t)| r != t && r.0 <= t.0 && r.1 <= t.1)
                .collect()
        } else {
            covers(d.level())
        };
        let m = sd.bimodule();
        let mut failures = Vec::new();
        for &(r, t) in &pairs {
            let (f, dec) = sd.split(&d.map(r, t)?);
            let (a, b) = (f.source, f.target);
            let lhs = add_vec(&m.pull_elem(&f, b, &self.value(sd, d, t)), &dec);
            let rhs = m.push_elem(&f, a, &self.value(sd, d, r));
            if !m.value(a, b).elems_equal(&lhs, &rhs) {
                failures.push((r, t));
            }
        }
        Ok((pairs.len(), failures))
    }

    fn value(&self, sd: &SemidirectCat, d: &SPDiagram, pos: Pos) -> Vec<Int> {
        if pos.0 == pos.1 {
            let z = d.object(pos);
            sd.bimodule().value(z, z).zero()
        } else {
            self.get(pos).to_vec()
        }
    }
}

/// Solves for `x_{(j,j+k)}` by induction on `k`, with `x_{(j,j+1)} = 0` and
/// `i^*x = −m + i_*x_{(j,j+k−1)}`, `q_*x = n + q^*x_{(j+1,j+k)}` for the
/// covers `(i, m)` into and `(q, n)` out of `(j, j+k)`.
pub fn straighten(sd: &SemidirectCat, d: &SPDiagram) -> Result<Straightened> {
    if !Arc::ptr_eq(d.cat(), sd.cat()) {
        return Err(Error::Invalid("diagram does not live in the semidirect product".into()));
    }
    let p = d.level();
    let ps = positions(p);
    let idx = |pos: Pos| ps.iter().position(|&q| q == pos).expect("valid position");
    let m = sd.bimodule();
    let mut x: Vec<Vec<Int>> = vec![Vec::new(); ps.len()];
    for j in 0..p {
        let a = d.object((j, j + 1));
        x[idx((j, j + 1))] = m.value(a, a).zero();
    }
    for k in 2..=p {
        for j in 0..=p - k {
            let (rho, theta, tau) = ((j, j + k - 1), (j, j + k), (j + 1, j + k));
            let (i, mi) = sd.split(d.cover(rho, theta));
            let (q, nq) = sd.split(d.cover(theta, tau));
            let (a, b, c) = (i.source, i.target, q.target);
            let rhs_i = add_vec(&crate::abgrp::neg_vec(&mi), &m.push_elem(&i, a, &x[idx(rho)]));
            let rhs_q = add_vec(&nq, &m.pull_elem(&q, c, &x[idx(tau)]));
            let stacked = GroupHom::stack(&[m.pull(&i, b), m.push(&q, b)])?;
            let mut target = rhs_i;
            target.extend(rhs_q);
            let sol = stacked.preimage(&target).ok_or_else(|| {
                Error::Unsolvable(format!("no x at ({j},{}) satisfies both conditions", j + k))
            })?;
            x[idx(theta)] = sol;
        }
    }
    Ok(Straightened { level: p, x })
}
