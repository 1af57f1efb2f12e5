use crate::abgrp::is_short_exact;
use crate::cat::{ExactCategory, ExactSeq, ObjId};
use crate::error::{Error, Result};

use super::Bimodule;

/// Which variable of the bimodule failed to be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    /// `0 → M(d,a) → M(d,b) → M(d,c) → 0`.
    Second,
    /// `0 → M(c,d) → M(b,d) → M(a,d) → 0`.
    First,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiexactFailure {
    /// Index into the witness list.
    pub sequence: usize,
    pub object: ObjId,
    pub variable: Variable,
}

#[derive(Clone, Debug, Default)]
pub struct BiexactReport {
    pub checked: usize,
    pub failures: Vec<BiexactFailure>,
}

impl BiexactReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Applies `M(d, −)` and `M(−, d)` to every witness sequence and every
/// object `d`, testing short exactness of the results.
pub fn check_biexact(m: &Bimodule, e: &dyn ExactCategory, witnesses: &[ExactSeq]) -> Result<BiexactReport> {
    if !std::sync::Arc::ptr_eq(m.base(), e.cat()) {
        return Err(Error::Invalid("bimodule and exact structure live on different categories".into()));
    }
    let mut report = BiexactReport::default();
    for (k, s) in witnesses.iter().enumerate() {
        if s.i.target != s.q.source || !e.is_exact(&s.i, &s.q) {
            return Err(Error::NotExact(format!("witness {k} is not an exact sequence")));
        }
        for d in m.base().objects() {
            report.checked += 2;
            if !is_short_exact(&m.push(&s.i, d), &m.push(&s.q, d))? {
                report.failures.push(BiexactFailure {
                    sequence: k,
                    object: d,
                    variable: Variable::Second,
                });
            }
            if !is_short_exact(&m.pull(&s.q, d), &m.pull(&s.i, d))? {
                report.failures.push(BiexactFailure {
                    sequence: k,
                    object: d,
                    variable: Variable::First,
                });
            }
        }
    }
    Ok(report)
}
