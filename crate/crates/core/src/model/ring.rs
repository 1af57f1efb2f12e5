use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::abgrp::{add_vec, FinAbGroup, GroupHom, Int, IntMatrix};
use crate::error::{Error, Result};

/// How a [`FiniteRing`] was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// `Z/n`.
    Cyclic { n: u64 },
    /// `Z/n ⋉ Z/m` with `(a, x)(b, y) = (ab, ay + xb)`.
    SquareZero { n: u64, m: u64 },
    /// `Z/n[t]/(t^k)`.
    Truncated { n: u64, k: usize },
}

/// A finite commutative ring given by its additive group and the products
/// of additive generators.
#[derive(Clone)]
pub struct FiniteRing {
    name: String,
    additive: FinAbGroup,
    products: Vec<Vec<Vec<Int>>>,
    one: Vec<Int>,
    kind: RingKind,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.name)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn ints(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

impl FiniteRing {
    pub fn zn(n: u64) -> Result<FiniteRing> {
        if n < 2 {
            return Err(Error::Invalid(format!("Z/{n} is not a ring with 1 ≠ 0")));
        }
        Ok(FiniteRing {
            name: format!("Z/{n}"),
            additive: FinAbGroup::cyclic(n),
            products: vec![vec![ints(&[1])]],
            one: ints(&[1]),
            kind: RingKind::Cyclic { n },
        })
    }

    /// `A ⋉ Z/m` for `A = Z/n`; requires `m | n`.
    pub fn dual(base: &FiniteRing, m: u64) -> Result<FiniteRing> {
        let RingKind::Cyclic { n } = base.kind else {
            return Err(Error::Invalid(format!("{} is not of the form Z/n", base.name)));
        };
        if m == 0 || n % m != 0 {
            return Err(Error::IncompatibleModuli(format!("Z/{m} is not a Z/{n}-bimodule")));
        }
        // generators: a = (1, 0), e = (0, 1)
        let products = vec![vec![ints(&[1, 0]), ints(&[0, 1])], vec![ints(&[0, 1]), ints(&[0, 0])]];
        Ok(FiniteRing {
            name: format!("Z/{n}[Z/{m}]"),
            additive: FinAbGroup::direct_sum(&[FinAbGroup::cyclic(n), FinAbGroup::cyclic(m)]),
            products,
            one: ints(&[1, 0]),
            kind: RingKind::SquareZero { n, m },
        })
    }

    /// `Z/n[t]/(t^k)`, used where a non-square-zero augmentation is needed.
    pub fn truncated_polynomial(n: u64, k: usize) -> Result<FiniteRing> {
        if n < 2 || k == 0 {
            return Err(Error::Invalid("truncated polynomial ring needs n ≥ 2 and k ≥ 1".into()));
        }
        let products = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let mut v = vec![Int::zero(); k];
                        if i + j < k {
                            v[i + j] = Int::from(1);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut one = vec![Int::zero(); k];
        one[0] = Int::from(1);
        Ok(FiniteRing {
            name: format!("Z/{n}[t]/t^{k}"),
            additive: FinAbGroup::zn_power(n, k),
            products,
            one,
            kind: RingKind::Truncated { n, k },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn additive(&self) -> &FinAbGroup {
        &self.additive
    }

    pub fn generator_count(&self) -> usize {
        self.additive.generator_count()
    }

    pub fn order(&self) -> u64 {
        self.additive.order_u64().expect("finite ring")
    }

    pub fn one(&self) -> Vec<Int> {
        self.one.clone()
    }

    pub fn zero(&self) -> Vec<Int> {
        self.additive.zero()
    }

    /// Products of additive generators, `e_u · e_v`.
    pub fn generator_product(&self, u: usize, v: usize) -> &[Int] {
        &self.products[u][v]
    }

    pub fn mul(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let mut out = self.zero();
        for (u, xu) in x.iter().enumerate() {
            if xu.is_zero() {
                continue;
            }
            for (v, yv) in y.iter().enumerate() {
                if yv.is_zero() {
                    continue;
                }
                let c = xu * yv;
                for (o, p) in out.iter_mut().zip(&self.products[u][v]) {
                    *o += &c * p;
                }
            }
        }
        self.additive.reduce(&out)
    }

    pub fn add(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        self.additive.reduce(&add_vec(x, y))
    }

    pub fn elements(&self) -> Vec<Vec<Int>> {
        self.additive.elements().expect("finite ring").collect()
    }

    /// The characteristic `n` of the coefficient ring `Z/n`.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            RingKind::Cyclic { n } | RingKind::SquareZero { n, .. } | RingKind::Truncated { n, .. } => n,
        }
    }

    /// Exhaustively checks associativity, distributivity, commutativity and
    /// the unit law. Returns the first failing triple of elements.
    pub fn check_ring_axioms(&self) -> std::result::Result<(), (Vec<Int>, Vec<Int>, Vec<Int>)> {
        let els = self.elements();
        let g = &self.additive;
        for x in &els {
            if !g.elems_equal(&self.mul(&self.one, x), x) {
                return Err((x.clone(), self.one(), self.one()));
            }
            for y in &els {
                let xy = self.mul(x, y);
                if !g.elems_equal(&xy, &self.mul(y, x)) {
                    return Err((x.clone(), y.clone(), self.zero()));
                }
                for z in &els {
                    let l = self.mul(&xy, z);
                    let r = self.mul(x, &self.mul(y, z));
                    let d1 = self.mul(x, &self.add(y, z));
                    let d2 = self.add(&xy, &self.mul(x, z));
                    if !g.elems_equal(&l, &r) || !g.elems_equal(&d1, &d2) {
                        return Err((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// For `A ⋉ M` or `A[t]/t^k`: the base ring `A = Z/n`, the augmentation
    /// `p` and the inclusion `s` with `p ∘ s = id`.
    pub fn augmentation(&self) -> Option<(FiniteRing, RingHom, RingHom)> {
        let n = match self.kind {
            RingKind::SquareZero { n, .. } | RingKind::Truncated { n, .. } => n,
            RingKind::Cyclic { .. } => return None,
        };
        let base = FiniteRing::zn(n).ok()?;
        let g = self.generator_count();
        let mut proj = IntMatrix::zeros(1, g);
        proj[(0, 0)] = Int::from(1);
        let mut incl = IntMatrix::zeros(g, 1);
        incl[(0, 0)] = Int::from(1);
        let p = RingHom::new(self.clone(), base.clone(), proj).ok()?;
        let s = RingHom::new(base.clone(), self.clone(), incl).ok()?;
        Some((base, p, s))
    }

    /// The additive group of the augmentation ideal, with its products.
    /// Square-zero iff every product of two ideal elements vanishes.
    pub fn augmentation_ideal_squares_to_zero(&self) -> bool {
        let Some((_, p, _)) = self.augmentation() else {
            return true;
        };
        let (ker, incl) = p.additive().kernel();
        (0..ker.generator_count()).all(|u| {
            (0..ker.generator_count()).all(|v| {
                let x = incl.matrix().column(u);
                let y = incl.matrix().column(v);
                self.additive.is_zero(&self.mul(&x, &y))
            })
        })
    }
}

/// A unital ring homomorphism, as a map of additive groups.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: FiniteRing,
    target: FiniteRing,
    additive: GroupHom,
}

impl RingHom {
    pub fn new(source: FiniteRing, target: FiniteRing, matrix: IntMatrix) -> Result<RingHom> {
        let additive = GroupHom::new(source.additive.clone(), target.additive.clone(), matrix)?;
        let h = RingHom {
            source,
            target,
            additive,
        };
        let t = &h.target;
        if !t.additive.elems_equal(&h.apply(&h.source.one), &t.one) {
            return Err(Error::Invalid("ring map does not preserve 1".into()));
        }
        for u in 0..h.source.generator_count() {
            for v in 0..h.source.generator_count() {
                let eu = h.source.additive.basis_vector(u);
                let ev = h.source.additive.basis_vector(v);
                let lhs = h.apply(&h.source.mul(&eu, &ev));
                let rhs = t.mul(&h.apply(&eu), &h.apply(&ev));
                if !t.additive.elems_equal(&lhs, &rhs) {
                    return Err(Error::Invalid("ring map does not preserve products".into()));
                }
            }
        }
        Ok(h)
    }

    pub fn source(&self) -> &FiniteRing {
        &self.source
    }

    pub fn target(&self) -> &FiniteRing {
        &self.target
    }

    pub fn additive(&self) -> &GroupHom {
        &self.additive
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.additive.apply(x)
    }
}

/// `gcd(a, b)` on machine integers.
pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::int_vec;

    #[test]
    fn dual_numbers_over_z2() {
        let a = FiniteRing::zn(2).unwrap();
        let d = FiniteRing::dual(&a, 2).unwrap();
        assert_eq!(d.order(), 4);
        let eps = int_vec(&[0, 1]);
        assert!(d.additive().is_zero(&d.mul(&eps, &eps)));
        assert_eq!(d.mul(&int_vec(&[1, 1]), &int_vec(&[1, 1])), int_vec(&[1, 0]));
        assert!(d.check_ring_axioms().is_ok());
        assert!(d.augmentation_ideal_squares_to_zero());
    }

    #[test]
    fn z4_with_z2_coefficients() {
        let a = FiniteRing::zn(4).unwrap();
        let d = FiniteRing::dual(&a, 2).unwrap();
        assert_eq!(d.mul(&int_vec(&[2, 1]), &int_vec(&[2, 1])), int_vec(&[0, 0]));
        assert!(d.check_ring_axioms().is_ok());
        assert!(matches!(FiniteRing::dual(&a, 3), Err(Error::IncompatibleModuli(_))));
    }

    #[test]
    fn truncated_cube_is_not_square_zero() {
        let r = FiniteRing::truncated_polynomial(2, 3).unwrap();
        assert!(r.check_ring_axioms().is_ok());
        assert!(!r.augmentation_ideal_squares_to_zero());
        let r2 = FiniteRing::truncated_polynomial(2, 2).unwrap();
        assert!(r2.augmentation_ideal_squares_to_zero());
    }

    #[test]
    fn augmentation_splits() {
        let d = FiniteRing::dual(&FiniteRing::zn(4).unwrap(), 2).unwrap();
        let (base, p, s) = d.augmentation().unwrap();
        assert_eq!(base.order(), 4);
        for x in base.elements() {
            assert!(base.additive().elems_equal(&p.apply(&s.apply(&x)), &x));
        }
    }
}
