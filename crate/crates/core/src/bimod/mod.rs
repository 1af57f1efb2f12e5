//! Bimodules over finite Ab-categories: additive functors
//! `C^op ⊗ C → Ab`, stored through the actions of hom-group generators.

mod biexact;
mod morphism;

use std::sync::Arc;

use num_traits::Zero;

use crate::abgrp::{FinAbGroup, GroupHom, Int, IntMatrix};
use crate::cat::{AbCat, AddFunctor, Morphism, ObjId};
use crate::error::{Error, Result};
use crate::model::{FreeModuleCat, RingKind};

pub use biexact::{check_biexact, BiexactFailure, BiexactReport, Variable};
pub use morphism::{smash_wedge_iso, BimoduleMorphism};

/// A bimodule `M` over `base`. For `f: a → b`, `f_*: M(c,a) → M(c,b)` and
/// `f^*: M(b,c) → M(a,c)`.
#[derive(Clone)]
pub struct Bimodule {
    name: String,
    base: Arc<AbCat>,
    values: Vec<FinAbGroup>,
    /// `[(c·n + a)·n + b][u]`: generator `u` of `hom(a,b)` acting `M(c,a) → M(c,b)`.
    left: Vec<Vec<IntMatrix>>,
    /// `[(a·n + b)·n + c][u]`: generator `u` of `hom(a,b)` acting `M(b,c) → M(a,c)`.
    right: Vec<Vec<IntMatrix>>,
}

impl std::fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bimodule({} over {})", self.name, self.base.name())
    }
}

#[derive(Clone, Debug, Default)]
pub struct BimoduleReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl BimoduleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn scaled_sum(rows: usize, cols: usize, mats: &[IntMatrix], coeffs: &[Int]) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for (m, c) in mats.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        out = out.add(&m.scale(c)).expect("action matrices share a shape");
    }
    out
}

impl Bimodule {
    /// Builds a bimodule from values and generator actions.
    /// `left(c, a, b, u)` is the matrix of `(e_u)_*: M(c,a) → M(c,b)`;
    /// `right(a, b, c, u)` is the matrix of `(e_u)^*: M(b,c) → M(a,c)`.
    pub fn from_generators<L, R>(
        name: impl Into<String>,
        base: Arc<AbCat>,
        values: Vec<FinAbGroup>,
        mut left: L,
        mut right: R,
    ) -> Result<Bimodule>
    where
        L: FnMut(ObjId, ObjId, ObjId, usize) -> Result<IntMatrix>,
        R: FnMut(ObjId, ObjId, ObjId, usize) -> Result<IntMatrix>,
    {
        let n = base.object_count();
        if values.len() != n * n {
            return Err(Error::Dimension("one value per object pair is required".into()));
        }
        let z = base.zero_object();
        for a in 0..n {
            if !values[a * n + z].is_trivial() || !values[z * n + a].is_trivial() {
                return Err(Error::Invalid(format!(
                    "values at the zero object must vanish (object {})",
                    base.object_name(a)
                )));
            }
        }
        let val = |a: usize, b: usize| &values[a * n + b];
        let mut lt = Vec::with_capacity(n * n * n);
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut per = Vec::new();
                    for u in 0..base.hom(a, b).generator_count() {
                        let m = left(c, a, b, u)?;
                        GroupHom::new(val(c, a).clone(), val(c, b).clone(), m.clone())?;
                        per.push(m);
                    }
                    lt.push(per);
                }
            }
        }
        let mut rt = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut per = Vec::new();
                    for u in 0..base.hom(a, b).generator_count() {
                        let m = right(a, b, c, u)?;
                        GroupHom::new(val(b, c).clone(), val(a, c).clone(), m.clone())?;
                        per.push(m);
                    }
                    rt.push(per);
                }
            }
        }
        Ok(Bimodule {
            name: name.into(),
            base,
            values,
            left: lt,
            right: rt,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<AbCat> {
        &self.base
    }

    pub fn value(&self, a: ObjId, b: ObjId) -> &FinAbGroup {
        &self.values[a * self.base.object_count() + b]
    }

    /// `f_*: M(c, a) → M(c, b)` for `f: a → b`.
    pub fn push(&self, f: &Morphism, c: ObjId) -> GroupHom {
        let n = self.base.object_count();
        let (a, b) = (f.source, f.target);
        let (src, tgt) = (self.value(c, a), self.value(c, b));
        let mats = &self.left[(c * n + a) * n + b];
        let m = scaled_sum(tgt.generator_count(), src.generator_count(), mats, &f.coords);
        GroupHom::new_unchecked(src.clone(), tgt.clone(), m)
    }

    /// `g^*: M(b, c) → M(a, c)` for `g: a → b`.
    pub fn pull(&self, g: &Morphism, c: ObjId) -> GroupHom {
        let n = self.base.object_count();
        let (a, b) = (g.source, g.target);
        let (src, tgt) = (self.value(b, c), self.value(a, c));
        let mats = &self.right[(a * n + b) * n + c];
        let m = scaled_sum(tgt.generator_count(), src.generator_count(), mats, &g.coords);
        GroupHom::new_unchecked(src.clone(), tgt.clone(), m)
    }

    /// `f_* m` for `m ∈ M(c, f.source)`.
    pub fn push_elem(&self, f: &Morphism, c: ObjId, m: &[Int]) -> Vec<Int> {
        let n = self.base.object_count();
        let (a, b) = (f.source, f.target);
        let tgt = self.value(c, b);
        let mut out = vec![Int::zero(); tgt.generator_count()];
        for (coef, mat) in f.coords.iter().zip(&self.left[(c * n + a) * n + b]) {
            if coef.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(mat.apply(m)) {
                *o += coef * x;
            }
        }
        tgt.reduce(&out)
    }

    /// `g^* m` for `m ∈ M(g.target, c)`.
    pub fn pull_elem(&self, g: &Morphism, c: ObjId, m: &[Int]) -> Vec<Int> {
        let n = self.base.object_count();
        let (a, b) = (g.source, g.target);
        let tgt = self.value(a, c);
        let mut out = vec![Int::zero(); tgt.generator_count()];
        for (coef, mat) in g.coords.iter().zip(&self.right[(a * n + b) * n + c]) {
            if coef.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(mat.apply(m)) {
                *o += coef * x;
            }
        }
        tgt.reduce(&out)
    }

    /// Checks bifunctoriality on generators: unit laws, compatibility with
    /// relations, compatibility with composition, and `f_* g^* = g^* f_*`.
    pub fn check_axioms(&self) -> BimoduleReport {
        let cat = &self.base;
        let mut rep = BimoduleReport::default();
        let objs: Vec<ObjId> = cat.objects().collect();
        for &a in &objs {
            for &c in &objs {
                rep.checked += 2;
                if !self.push(&cat.identity(a), c).equals(&GroupHom::identity(self.value(c, a))) {
                    rep.violations.push(format!("id_{}_* is not the identity on M({c},{a})", cat.object_name(a)));
                }
                if !self.pull(&cat.identity(a), c).equals(&GroupHom::identity(self.value(a, c))) {
                    rep.violations.push(format!("id_{}^* is not the identity on M({a},{c})", cat.object_name(a)));
                }
            }
        }
        for &a in &objs {
            for &b in &objs {
                let rels = cat.hom(a, b).relations();
                for j in 0..rels.cols() {
                    let r = Morphism::new(a, b, rels.column(j));
                    for &c in &objs {
                        rep.checked += 2;
                        if !self.push(&r, c).is_zero() || !self.pull(&r, c).is_zero() {
                            rep.violations.push(format!("relation {j} of hom({a},{b}) acts nontrivially"));
                        }
                    }
                }
            }
        }
        for &a in &objs {
            for &b in &objs {
                for v in 0..cat.hom(a, b).generator_count() {
                    let f = cat.generator(a, b, v);
                    for &d in &objs {
                        for u in 0..cat.hom(b, d).generator_count() {
                            let g = cat.generator(b, d, u);
                            let gf = cat.compose(&g, &f).expect("composable");
                            for &c in &objs {
                                rep.checked += 2;
                                let lhs = self.push(&gf, c);
                                let rhs = self.push(&g, c).compose(&self.push(&f, c)).expect("types agree");
                                if !lhs.equals(&rhs) {
                                    rep.violations
                                        .push(format!("(g∘f)_* ≠ g_* f_* for generators ({a},{b},{d}) v={v} u={u}, c={c}"));
                                }
                                let lhs = self.pull(&gf, c);
                                let rhs = self.pull(&f, c).compose(&self.pull(&g, c)).expect("types agree");
                                if !lhs.equals(&rhs) {
                                    rep.violations
                                        .push(format!("(g∘f)^* ≠ f^* g^* for generators ({a},{b},{d}) v={v} u={u}, c={c}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        // f: a→b acting on the right variable, g: c→d on the left, on M(d, a).
        for &a in &objs {
            for &b in &objs {
                for v in 0..cat.hom(a, b).generator_count() {
                    let f = cat.generator(a, b, v);
                    for &c in &objs {
                        for &d in &objs {
                            for u in 0..cat.hom(c, d).generator_count() {
                                let g = cat.generator(c, d, u);
                                rep.checked += 1;
                                let lhs = self.push(&f, c).compose(&self.pull(&g, a)).expect("types agree");
                                let rhs = self.pull(&g, b).compose(&self.push(&f, d)).expect("types agree");
                                if !lhs.equals(&rhs) {
                                    rep.violations.push(format!(
                                        "f_* g^* ≠ g^* f_* for f generator {v} of hom({a},{b}), g generator {u} of hom({c},{d})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    /// The zero bimodule.
    pub fn zero(base: Arc<AbCat>) -> Bimodule {
        let n = base.object_count();
        let values = vec![FinAbGroup::trivial(); n * n];
        Bimodule::from_generators(
            "0",
            base,
            values,
            |_, _, _, _| Ok(IntMatrix::zeros(0, 0)),
            |_, _, _, _| Ok(IntMatrix::zeros(0, 0)),
        )
        .expect("zero bimodule")
    }

    /// `Hom(−, −)` with actions by composition.
    pub fn hom(base: Arc<AbCat>) -> Bimodule {
        let n = base.object_count();
        let values = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| base.hom(a, b).clone()).collect();
        let cat = base.clone();
        let cat2 = base.clone();
        Bimodule::from_generators(
            "Hom",
            base,
            values,
            move |c, a, b, u| Ok(cat.postcompose_hom(&cat.generator(a, b, u), c).matrix().clone()),
            move |a, b, c, u| Ok(cat2.precompose_hom(&cat2.generator(a, b, u), c).matrix().clone()),
        )
        .expect("hom bimodule")
    }

    /// `hom(−, − ⊗ Z/m)` on free `Z/n`-modules: `M(r, s)` is the group of
    /// `s × r` matrices over `Z/m`, acted on by matrix multiplication.
    pub fn hom_tensor(c: &FreeModuleCat, m: u64) -> Result<Bimodule> {
        let RingKind::Cyclic { n } = *c.ring().kind() else {
            return Err(Error::Invalid("hom_tensor needs a ring of the form Z/n".into()));
        };
        if m == 0 || n % m != 0 {
            return Err(Error::IncompatibleModuli(format!("Z/{m} is not a Z/{n}-module")));
        }
        let base = c.cat().clone();
        let k = base.object_count();
        let values = (0..k)
            .flat_map(|r| (0..k).map(move |s| (r, s)))
            .map(|(r, s)| FinAbGroup::zn_power(m, r * s))
            .collect();
        Bimodule::from_generators(
            format!("hom_tensor(Z/{m})"),
            base,
            values,
            |c, a, b, u| {
                // E_ij (i < b, j < a) sends an a×c matrix to the b×c matrix with row j moved to row i.
                let (i, j) = (u / a, u % a);
                let mut mat = IntMatrix::zeros(b * c, a * c);
                for l in 0..c {
                    mat[(i * c + l, j * c + l)] = Int::from(1);
                }
                Ok(mat)
            },
            |a, b, c, u| {
                // m · E_ij for a c×b matrix m: column i moves to column j.
                let (i, j) = (u / a, u % a);
                let mut mat = IntMatrix::zeros(c * a, c * b);
                for l in 0..c {
                    mat[(l * a + j, l * b + i)] = Int::from(1);
                }
                Ok(mat)
            },
        )
    }

    /// `M(X) = (⊕_{x ∈ X} M) / M_basepoint` for a pointed set with `points`
    /// elements, basepoint first.
    pub fn smash(&self, points: usize) -> Result<Bimodule> {
        if points == 0 {
            return Err(Error::Invalid("a pointed set needs a basepoint".into()));
        }
        let n = self.base.object_count();
        let mut values = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let v = self.value(a, b);
                let g = v.generator_count();
                let blocks = vec![v.relations(); points];
                let mut rels = IntMatrix::block_diagonal(&blocks);
                let mut base_copy = IntMatrix::zeros(g * points, g);
                for t in 0..g {
                    base_copy[(t, t)] = Int::from(1);
                }
                rels = rels.hstack(&base_copy)?;
                values.push(FinAbGroup::new(g * points, rels)?);
            }
        }
        let repeat = |m: &IntMatrix| IntMatrix::block_diagonal(&vec![m; points]);
        Bimodule::from_generators(
            format!("{}({points})", self.name),
            self.base.clone(),
            values,
            |c, a, b, u| Ok(repeat(&self.left[(c * n + a) * n + b][u])),
            |a, b, c, u| Ok(repeat(&self.right[(a * n + b) * n + c][u])),
        )
    }

    /// `M ⊕ N`.
    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if !Arc::ptr_eq(&self.base, &other.base) {
            return Err(Error::Invalid("direct sum of bimodules over different categories".into()));
        }
        let n = self.base.object_count();
        let values = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| FinAbGroup::direct_sum(&[self.value(a, b).clone(), other.value(a, b).clone()]))
            .collect();
        Bimodule::from_generators(
            format!("{}+{}", self.name, other.name),
            self.base.clone(),
            values,
            |c, a, b, u| {
                let k = (c * n + a) * n + b;
                Ok(IntMatrix::block_diagonal(&[&self.left[k][u], &other.left[k][u]]))
            },
            |a, b, c, u| {
                let k = (a * n + b) * n + c;
                Ok(IntMatrix::block_diagonal(&[&self.right[k][u], &other.right[k][u]]))
            },
        )
    }

    /// The bimodule `M^op(a, b) = M(b, a)` over `op`, the opposite of the base.
    pub fn opposite(&self, op: Arc<AbCat>) -> Result<Bimodule> {
        let n = self.base.object_count();
        if op.object_count() != n {
            return Err(Error::Invalid("opposite category has a different object set".into()));
        }
        let values = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.value(b, a).clone()).collect();
        // f: a→b in op is f: b→a in the base; f_* on M^op(c,a) = M(a,c) is the base f^*.
        Bimodule::from_generators(
            format!("{}^op", self.name),
            op,
            values,
            |c, a, b, u| Ok(self.right[(b * n + a) * n + c][u].clone()),
            |a, b, c, u| Ok(self.left[(c * n + b) * n + a][u].clone()),
        )
    }

    /// `F^*M(a, b) = M(Fa, Fb)` along a functor into the base.
    pub fn restrict_along(&self, f: &AddFunctor) -> Result<Bimodule> {
        if !Arc::ptr_eq(f.target(), &self.base) {
            return Err(Error::Invalid("functor does not land in the base category".into()));
        }
        let src = f.source().clone();
        let n = src.object_count();
        let values = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.value(f.object(a), f.object(b)).clone())
            .collect();
        Bimodule::from_generators(
            format!("{}|{}", self.name, src.name()),
            src.clone(),
            values,
            |c, a, b, u| Ok(self.push(&f.apply(&src.generator(a, b, u)), f.object(c)).matrix().clone()),
            |a, b, c, u| Ok(self.pull(&f.apply(&src.generator(a, b, u)), f.object(c)).matrix().clone()),
        )
    }

    /// `ker p(a, b) = ker(C'(sa, sb) → C(psa, psb))` over the base of `s`,
    /// with actions `f_* x = s(f) ∘ x` and `f^* x = x ∘ s(f)`. Also returns
    /// the inclusions into `C'(sa, sb)`, indexed `a·n + b`.
    pub fn kernel_of_projection(p: &AddFunctor, s: &AddFunctor) -> Result<(Bimodule, Vec<GroupHom>)> {
        if !Arc::ptr_eq(s.target(), p.source()) || !Arc::ptr_eq(p.target(), s.source()) {
            return Err(Error::Invalid("p and s are not opposite functors".into()));
        }
        let base = s.source().clone();
        let big = p.source().clone();
        let n = base.object_count();
        let mut values = Vec::with_capacity(n * n);
        let mut incls = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (k, incl) = p.hom_map(s.object(a), s.object(b)).kernel();
                values.push(k);
                incls.push(incl);
            }
        }
        let act = |x: &GroupHom, y: &GroupHom, image: &dyn Fn(Vec<Int>) -> Morphism| -> Result<IntMatrix> {
            // columns: preimages in y of the image of each generator of x's source
            let solver = y.preimage_solver();
            let cols = (0..x.source().generator_count())
                .map(|t| {
                    let img = image(x.matrix().column(t));
                    solver
                        .solve(&img.coords)
                        .map(|v| y.source().reduce(&v))
                        .ok_or_else(|| Error::NotWellDefined("action leaves ker p".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            IntMatrix::from_columns(y.source().generator_count(), &cols)
        };
        let bim = Bimodule::from_generators(
            "ker p",
            base.clone(),
            values,
            |c, a, b, u| {
                let sf = s.apply(&base.generator(a, b, u));
                let (x, y) = (&incls[c * n + a], &incls[c * n + b]);
                act(x, y, &|v| big.compose(&sf, &Morphism::new(s.object(c), s.object(a), v)).expect("composable"))
            },
            |a, b, c, u| {
                let sf = s.apply(&base.generator(a, b, u));
                let (x, y) = (&incls[b * n + c], &incls[a * n + c]);
                act(x, y, &|v| big.compose(&Morphism::new(s.object(b), s.object(c), v), &sf).expect("composable"))
            },
        )?;
        Ok((bim, incls))
    }
}

/// `smash_with_pointed_set(M, X)` for a pointed set of `points` elements.
pub fn smash_with_pointed_set(m: &Bimodule, points: usize) -> Result<Bimodule> {
    m.smash(points)
}

pub fn hom_tensor_bimodule(c: &FreeModuleCat, m: u64) -> Result<Bimodule> {
    Bimodule::hom_tensor(c, m)
}

#[cfg(test)]
mod tests;
