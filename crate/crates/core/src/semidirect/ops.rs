use crate::abgrp::{neg_vec, sub_vec, FinAbGroup, GroupHom, Int, PreimageSolver};
use crate::cat::{kernel_of, ExactCategory, ExactSeq, Morphism, ObjId};
use crate::error::{Error, Result};

use super::SemidirectCat;

/// A kernel `(i, m)` of an admissible epi `(q, n)` in `C ⋉ M`.
#[derive(Clone, Debug)]
pub struct KernelSolution {
    pub epi: Morphism,
    pub kernel: Morphism,
    base_kernel: Morphism,
    m: Vec<Int>,
}

/// Computes a kernel of `(q, n)`: the base kernel `i` with `m` solving
/// `q_* m = −i^* n`.
pub fn kernel_in_semidirect(sd: &SemidirectCat, q: &Morphism) -> Result<KernelSolution> {
    let (bq, n) = sd.split(q);
    let bi = kernel_of(sd.base().as_ref(), &bq)
        .ok_or_else(|| Error::NotExact(format!("{bq:?} is not an admissible epi")))?;
    let m_mod = sd.bimodule();
    let (a, c) = (bi.source, q.target);
    let rhs = neg_vec(&m_mod.pull_elem(&bi, c, &n));
    let m = m_mod
        .push(&bq, a)
        .preimage(&rhs)
        .ok_or_else(|| Error::Unsolvable("q_* m = -i^* n has no solution; the bimodule is not exact".into()))?;
    let kernel = sd.join(&bi, &m);
    if !sd.is_exact(&kernel, q) {
        return Err(Error::NotExact("computed kernel does not give an exact sequence".into()));
    }
    Ok(KernelSolution {
        epi: q.clone(),
        kernel,
        base_kernel: bi,
        m,
    })
}

impl KernelSolution {
    /// The unique `(u, x)` with `(i, m) ∘ (u, x) = (f, l)`, for `(f, l)` with
    /// `(q, n) ∘ (f, l) = 0`.
    pub fn mediate(&self, sd: &SemidirectCat, f: &Morphism) -> Result<Morphism> {
        let cat = sd.semidirect_cat();
        if f.target != self.epi.source || !cat.is_zero(&cat.compose(&self.epi, f)?) {
            return Err(Error::NotZeroComposite(format!("{f:?} does not compose to zero with the epi")));
        }
        let (bf, l) = sd.split(f);
        let d = f.source;
        let base = sd.base_cat();
        let u = base
            .postcompose_hom(&self.base_kernel, d)
            .preimage(&bf.coords)
            .ok_or_else(|| Error::Unsolvable("base kernel does not factor the map".into()))?;
        let u = Morphism::new(d, self.base_kernel.source, u);
        let m_mod = sd.bimodule();
        let rhs = sub_vec(&l, &m_mod.pull_elem(&u, self.base_kernel.target, &self.m));
        let x = m_mod
            .push(&self.base_kernel, d)
            .preimage(&rhs)
            .ok_or_else(|| Error::Unsolvable("i_* x = l - u^* m has no solution".into()))?;
        Ok(sd.join(&u, &x))
    }

    /// Whether mediators out of `d` are unique, i.e. `(i,m) ∘ −` is injective.
    pub fn mediator_is_unique(&self, sd: &SemidirectCat, d: ObjId) -> bool {
        sd.semidirect_cat().postcompose_hom(&self.kernel, d).is_mono()
    }
}

/// A cokernel of an admissible mono, computed as a kernel in the opposite.
pub struct CokernelSolution {
    op: SemidirectCat,
    inner: KernelSolution,
    pub mono: Morphism,
    pub cokernel: Morphism,
}

pub fn cokernel_in_semidirect(sd: &SemidirectCat, i: &Morphism) -> Result<CokernelSolution> {
    let op = sd.opposite()?;
    let inner = kernel_in_semidirect(&op, &i.reversed())?;
    let cokernel = inner.kernel.reversed();
    Ok(CokernelSolution {
        op,
        inner,
        mono: i.clone(),
        cokernel,
    })
}

impl CokernelSolution {
    /// The unique `v` with `v ∘ (q, n) = g`, for `g` with `g ∘ (i, m) = 0`.
    pub fn mediate(&self, g: &Morphism) -> Result<Morphism> {
        Ok(self.inner.mediate(&self.op, &g.reversed())?.reversed())
    }
}

/// A pullback square of `(f, m): b ↠ c` along `(g, n): d → c`, with legs
/// `ḡ = (ḡ, n̄): P → b` and `f̄ = (f̄, 0): P → d`.
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pub epi: Morphism,
    pub along: Morphism,
    pub object: ObjId,
    pub gbar: Morphism,
    pub fbar: Morphism,
}

pub fn pullback_along_epi(sd: &SemidirectCat, g: &Morphism, f: &Morphism) -> Result<PullbackSquare> {
    if g.target != f.target {
        return Err(Error::NotComposable("pullback of maps with different targets".into()));
    }
    let base = sd.base_cat();
    let (bf, m) = sd.split(f);
    let (bg, n) = sd.split(g);
    let bi = kernel_of(sd.base().as_ref(), &bf)
        .ok_or_else(|| Error::NotExact(format!("{bf:?} is not an admissible epi")))?;
    let t = base
        .right_inverse(&bf)
        .ok_or_else(|| Error::NotExact(format!("{bf:?} has no section")))?;
    let (k, d, c) = (bi.source, g.source, f.target);
    let bp = base.biproduct(k, d).ok_or_else(|| {
        Error::OutsideModel(format!(
            "the pullback {} ⊕ {} is not an object of the model",
            base.object_name(k),
            base.object_name(d)
        ))
    })?;
    let p = bp.object;
    let gbar_b = base.add(
        &base.compose(&bi, &bp.pr1)?,
        &base.compose_path(&[&bp.pr2, &bg, &t])?,
    )?;
    let fbar_b = bp.pr2.clone();
    let bm = sd.bimodule();
    let rhs = sub_vec(&bm.pull_elem(&fbar_b, c, &n), &bm.pull_elem(&gbar_b, c, &m));
    let nbar = bm
        .push(&bf, p)
        .preimage(&rhs)
        .ok_or_else(|| Error::Unsolvable("no preimage for the decoration; the bimodule is not exact".into()))?;
    Ok(PullbackSquare {
        epi: f.clone(),
        along: g.clone(),
        object: p,
        gbar: sd.join(&gbar_b, &nbar),
        fbar: sd.join(&fbar_b, &bm.value(p, d).zero()),
    })
}

impl PullbackSquare {
    pub fn commutes(&self, sd: &SemidirectCat) -> bool {
        let cat = sd.semidirect_cat();
        let lhs = cat.compose(&self.epi, &self.gbar);
        let rhs = cat.compose(&self.along, &self.fbar);
        matches!((lhs, rhs), (Ok(l), Ok(r)) if cat.equal(&l, &r))
    }

    /// The mediator `e → P` of a cone `x: e → b`, `y: e → d` with `f x = g y`.
    pub fn mediate(&self, sd: &SemidirectCat, x: &Morphism, y: &Morphism) -> Result<Morphism> {
        self.mediator(sd, x.source).mediate(sd, x, y)
    }

    /// Mediators out of a fixed `e`, solving each cone against one factorization.
    pub fn mediator(&self, sd: &SemidirectCat, e: ObjId) -> PullbackMediator<'_> {
        let base = sd.base_cat();
        let bm = sd.bimodule();
        let (gb, nbar) = sd.split(&self.gbar);
        let (fb, _) = sd.split(&self.fbar);
        let stack = |hs: &[GroupHom]| GroupHom::stack(hs).expect("both maps leave hom(e, P)");
        let on_base = stack(&[base.postcompose_hom(&gb, e), base.postcompose_hom(&fb, e)]);
        let on_decoration = stack(&[bm.push(&gb, e), bm.push(&fb, e)]);
        PullbackMediator {
            square: self,
            e,
            base: on_base.preimage_solver(),
            base_source: on_base.source().clone(),
            decoration: on_decoration.preimage_solver(),
            decoration_source: on_decoration.source().clone(),
            gb,
            nbar,
        }
    }

    /// Whether mediators out of `e` are unique.
    pub fn mediator_is_unique(&self, sd: &SemidirectCat, e: ObjId) -> bool {
        let cat = sd.semidirect_cat();
        GroupHom::stack(&[cat.postcompose_hom(&self.gbar, e), cat.postcompose_hom(&self.fbar, e)])
            .map(|h| h.is_mono())
            .unwrap_or(false)
    }
}

pub struct PullbackMediator<'a> {
    square: &'a PullbackSquare,
    e: ObjId,
    base: PreimageSolver,
    base_source: FinAbGroup,
    decoration: PreimageSolver,
    decoration_source: FinAbGroup,
    gb: Morphism,
    nbar: Vec<Int>,
}

impl PullbackMediator<'_> {
    pub fn mediate(&self, sd: &SemidirectCat, x: &Morphism, y: &Morphism) -> Result<Morphism> {
        let cat = sd.semidirect_cat();
        let sq = self.square;
        if x.source != self.e || y.source != self.e || !cat.equal(&cat.compose(&sq.epi, x)?, &cat.compose(&sq.along, y)?) {
            return Err(Error::NotZeroComposite("the cone does not commute".into()));
        }
        let (xb, xm) = sd.split(x);
        let (yb, ym) = sd.split(y);
        let mut target = xb.coords;
        target.extend(yb.coords);
        let u = self
            .base
            .solve(&target)
            .ok_or_else(|| Error::Unsolvable("base cone does not factor".into()))?;
        let u = Morphism::new(self.e, sq.object, self.base_source.reduce(&u));
        let bm = sd.bimodule();
        let mut target = sub_vec(&xm, &bm.pull_elem(&u, self.gb.target, &self.nbar));
        target.extend(ym);
        let z = self
            .decoration
            .solve(&target)
            .ok_or_else(|| Error::Unsolvable("decoration of the mediator has no solution".into()))?;
        Ok(sd.join(&u, &self.decoration_source.reduce(&z)))
    }
}

/// An exact sequence together with an isomorphism to `(i, 0), (q, 0)`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub x: Vec<Int>,
    /// `(id, 0)`, `(id, x)`, `(id, 0)` on `a`, `b`, `c`.
    pub components: [Morphism; 3],
    pub normalized: ExactSeq,
}

/// Finds `x ∈ M(b, b)` with `i^* x = −m` and `q_* x = n`.
pub fn normalize_sequence(sd: &SemidirectCat, i: &Morphism, q: &Morphism) -> Result<Normalized> {
    if i.target != q.source {
        return Err(Error::NotComposable(format!("{i:?} then {q:?}")));
    }
    if !sd.is_exact(i, q) {
        return Err(Error::NotExact("normalization needs an exact sequence".into()));
    }
    let (bi, m) = sd.split(i);
    let (bq, n) = sd.split(q);
    let (a, b, c) = (i.source, i.target, q.target);
    let bm = sd.bimodule();
    let stacked = GroupHom::stack(&[bm.pull(&bi, b), bm.push(&bq, b)])?;
    let mut target = neg_vec(&m);
    target.extend(n);
    let x = stacked
        .preimage(&target)
        .ok_or_else(|| Error::Unsolvable("(i^*, q_*) does not reach (-m, n)".into()))?;
    let base = sd.base_cat();
    let components = [
        sd.join(&base.identity(a), &bm.value(a, a).zero()),
        sd.join(&base.identity(b), &x),
        sd.join(&base.identity(c), &bm.value(c, c).zero()),
    ];
    let normalized = ExactSeq::new(
        sd.join(&bi, &bm.value(a, b).zero()),
        sd.join(&bq, &bm.value(b, c).zero()),
    );
    Ok(Normalized { x, components, normalized })
}

impl Normalized {
    /// Both squares commute, the components are isomorphisms and the target
    /// sequence is exact.
    pub fn verify(&self, sd: &SemidirectCat, i: &Morphism, q: &Morphism) -> bool {
        let cat = sd.semidirect_cat();
        let [ca, cb, cc] = &self.components;
        let sq1 = cat.compose(cb, i).ok().zip(cat.compose(&self.normalized.i, ca).ok());
        let sq2 = cat.compose(cc, q).ok().zip(cat.compose(&self.normalized.q, cb).ok());
        let squares = matches!(sq1, Some((l, r)) if cat.equal(&l, &r)) && matches!(sq2, Some((l, r)) if cat.equal(&l, &r));
        squares
            && self.components.iter().all(|f| cat.is_iso(f))
            && sd.is_exact(&self.normalized.i, &self.normalized.q)
    }

    /// `i^* x = −m` and `q_* x = n`.
    pub fn solves(&self, sd: &SemidirectCat, i: &Morphism, q: &Morphism) -> bool {
        let (bi, m) = sd.split(i);
        let (bq, n) = sd.split(q);
        let bm = sd.bimodule();
        let b = i.target;
        bm.value(i.source, b).elems_equal(&bm.pull_elem(&bi, b, &self.x), &neg_vec(&m))
            && bm.value(b, q.target).elems_equal(&bm.push_elem(&bq, b, &self.x), &n)
    }
}
