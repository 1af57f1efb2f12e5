use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::abgrp::Int;
use crate::error::{Error, Result};

use super::{AbCat, Morphism, ObjId};

/// Default cap on the number of candidate checks in an enumeration.
pub const DEFAULT_BUDGET: usize = 20_000_000;

/// A finite Ab-enriched category with a decidable class of exact sequences.
pub trait ExactCategory: Send + Sync {
    fn cat(&self) -> &Arc<AbCat>;

    /// Whether the composable pair `a →i→ b →q→ c` is a declared exact
    /// sequence. Callers guarantee composability.
    fn is_exact(&self, i: &Morphism, q: &Morphism) -> bool;

    /// Cheap necessary condition for `i` to be an admissible mono, used to
    /// prune enumerations.
    fn mono_candidate(&self, _i: &Morphism) -> bool {
        true
    }

    /// Cheap necessary condition for `q` to be an admissible epi.
    fn epi_candidate(&self, _q: &Morphism) -> bool {
        true
    }
}

/// A short exact sequence `a ↣ b ↠ c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactSeq {
    pub i: Morphism,
    pub q: Morphism,
}

impl ExactSeq {
    pub fn new(i: Morphism, q: Morphism) -> Self {
        ExactSeq { i, q }
    }

    pub fn objects(&self) -> (ObjId, ObjId, ObjId) {
        (self.i.source, self.i.target, self.q.target)
    }

    pub fn key(&self, cat: &AbCat) -> (ObjId, ObjId, ObjId, Vec<Int>, Vec<Int>) {
        let (a, b, c) = self.objects();
        (a, b, c, cat.key(&self.i).2, cat.key(&self.q).2)
    }
}

/// Checked entry point: errors on a non-composable pair.
pub fn is_exact_sequence(e: &dyn ExactCategory, i: &Morphism, q: &Morphism) -> Result<bool> {
    if i.target != q.source {
        return Err(Error::NotComposable(format!("{i:?} then {q:?}")));
    }
    Ok(e.is_exact(i, q))
}

/// Decides whether `(i, q)` is split exact, i.e. isomorphic to a biproduct
/// inclusion followed by a projection.
///
/// With `r ∘ i = id` and `q ∘ t = id`, set `t' = t − i∘r∘t`. The sequence is
/// split exact iff additionally `q ∘ i = 0` and `i∘r + t'∘q = id`.
pub fn is_split_exact(cat: &AbCat, i: &Morphism, q: &Morphism) -> bool {
    if i.target != q.source {
        return false;
    }
    if !cat.is_zero(&cat.compose_unchecked(q, i)) {
        return false;
    }
    let Some(r) = cat.left_inverse(i) else {
        return false;
    };
    let Some(t) = cat.right_inverse(q) else {
        return false;
    };
    let irt = cat.compose_unchecked(i, &cat.compose_unchecked(&r, &t));
    let t2 = cat.sub(&t, &irt).expect("parallel");
    let sum = cat
        .add(&cat.compose_unchecked(i, &r), &cat.compose_unchecked(&t2, q))
        .expect("parallel");
    cat.equal(&sum, &cat.identity(i.target))
}

type SeqKey = (ObjId, ObjId, ObjId, Vec<Int>, Vec<Int>);
type MorKey = (ObjId, ObjId, Vec<Int>);

/// The split exact structure on a finite category. Decisions are memoized.
pub struct SplitExact {
    cat: Arc<AbCat>,
    exact: RwLock<HashMap<SeqKey, bool>>,
    monos: RwLock<HashMap<MorKey, bool>>,
    epis: RwLock<HashMap<MorKey, bool>>,
}

impl SplitExact {
    pub fn new(cat: Arc<AbCat>) -> Self {
        SplitExact {
            cat,
            exact: RwLock::default(),
            monos: RwLock::default(),
            epis: RwLock::default(),
        }
    }
}

fn memo<K: std::hash::Hash + Eq, F: FnOnce() -> bool>(map: &RwLock<HashMap<K, bool>>, key: K, f: F) -> bool {
    if let Some(&v) = map.read().expect("memo lock").get(&key) {
        return v;
    }
    let v = f();
    map.write().expect("memo lock").insert(key, v);
    v
}

impl ExactCategory for SplitExact {
    fn cat(&self) -> &Arc<AbCat> {
        &self.cat
    }

    fn is_exact(&self, i: &Morphism, q: &Morphism) -> bool {
        let key = ExactSeq::new(i.clone(), q.clone()).key(&self.cat);
        memo(&self.exact, key, || is_split_exact(&self.cat, i, q))
    }

    fn mono_candidate(&self, i: &Morphism) -> bool {
        memo(&self.monos, self.cat.key(i), || self.cat.left_inverse(i).is_some())
    }

    fn epi_candidate(&self, q: &Morphism) -> bool {
        memo(&self.epis, self.cat.key(q), || self.cat.right_inverse(q).is_some())
    }
}

/// The opposite exact category: `(q^op, i^op)` is exact iff `(i, q)` is.
pub struct OppositeExact {
    inner: Arc<dyn ExactCategory>,
    op: Arc<AbCat>,
}

impl OppositeExact {
    pub fn new(inner: Arc<dyn ExactCategory>) -> Self {
        let op = Arc::new(inner.cat().opposite());
        OppositeExact { inner, op }
    }
}

impl ExactCategory for OppositeExact {
    fn cat(&self) -> &Arc<AbCat> {
        &self.op
    }

    fn is_exact(&self, i: &Morphism, q: &Morphism) -> bool {
        self.inner.is_exact(&q.reversed(), &i.reversed())
    }

    fn mono_candidate(&self, i: &Morphism) -> bool {
        self.inner.epi_candidate(&i.reversed())
    }

    fn epi_candidate(&self, q: &Morphism) -> bool {
        self.inner.mono_candidate(&q.reversed())
    }
}

/// Which leg an enumeration fixes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumOrder {
    /// Every candidate mono `i`, then every `q` with `q ∘ i = 0`.
    MonoFirst,
    /// Every candidate epi `q`, then every `i` with `q ∘ i = 0`.
    EpiFirst,
}

struct Counter {
    used: usize,
    limit: usize,
}

impl Counter {
    fn tick(&mut self, n: usize, context: &str) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            return Err(Error::Budget {
                limit: self.limit,
                context: context.to_string(),
            });
        }
        Ok(())
    }
}

/// Enumerates every exact sequence of a finite exact category, sorted by
/// object triple and canonical coordinates.
pub fn exact_sequences(e: &dyn ExactCategory, order: EnumOrder, budget: usize) -> Result<Vec<ExactSeq>> {
    let cat = e.cat();
    let mut counter = Counter { used: 0, limit: budget };
    let mut out = Vec::new();
    let objs: Vec<ObjId> = cat.objects().collect();
    match order {
        EnumOrder::MonoFirst => {
            for &a in &objs {
                for &b in &objs {
                    counter.tick(1, "enumerating admissible monos")?;
                    for i in cat.elements(a, b)? {
                        counter.tick(1, "enumerating admissible monos")?;
                        if !e.mono_candidate(&i) {
                            continue;
                        }
                        for &c in &objs {
                            let (ker, incl) = cat.precompose_hom(&i, c).kernel();
                            for x in ker.elements()? {
                                counter.tick(1, "enumerating exact sequences")?;
                                let q = Morphism::new(b, c, cat.hom(b, c).reduce(&incl.apply(&x)));
                                if e.is_exact(&i, &q) {
                                    out.push(ExactSeq::new(i.clone(), q));
                                }
                            }
                        }
                    }
                }
            }
        }
        EnumOrder::EpiFirst => {
            for &b in &objs {
                for &c in &objs {
                    for q in cat.elements(b, c)? {
                        counter.tick(1, "enumerating admissible epis")?;
                        if !e.epi_candidate(&q) {
                            continue;
                        }
                        for &a in &objs {
                            let (ker, incl) = cat.postcompose_hom(&q, a).kernel();
                            for x in ker.elements()? {
                                counter.tick(1, "enumerating exact sequences")?;
                                let i = Morphism::new(a, b, cat.hom(a, b).reduce(&incl.apply(&x)));
                                if e.is_exact(&i, &q) {
                                    out.push(ExactSeq::new(i, q.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_cached_key(|s| s.key(cat));
    out.dedup_by(|x, y| x.key(cat) == y.key(cat));
    Ok(out)
}

/// A kernel `i` of the admissible epi `q`: the first `i` (in enumeration
/// order) with `(i, q)` exact.
pub fn kernel_of(e: &dyn ExactCategory, q: &Morphism) -> Option<Morphism> {
    let cat = e.cat();
    let b = q.source;
    for a in cat.objects() {
        let (ker, incl) = cat.postcompose_hom(q, a).kernel();
        for x in ker.elements().ok()? {
            let i = Morphism::new(a, b, cat.hom(a, b).reduce(&incl.apply(&x)));
            if e.mono_candidate(&i) && e.is_exact(&i, q) {
                return Some(i);
            }
        }
    }
    None
}

/// A cokernel `q` of the admissible mono `i`.
pub fn cokernel_of(e: &dyn ExactCategory, i: &Morphism) -> Option<Morphism> {
    let cat = e.cat();
    let b = i.target;
    for c in cat.objects() {
        let (ker, incl) = cat.precompose_hom(i, c).kernel();
        for x in ker.elements().ok()? {
            let q = Morphism::new(b, c, cat.hom(b, c).reduce(&incl.apply(&x)));
            if e.epi_candidate(&q) && e.is_exact(i, &q) {
                return Some(q);
            }
        }
    }
    None
}
