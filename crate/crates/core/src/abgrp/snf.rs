//! Smith normal form and the linear solvers built on it.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{Int, IntMatrix};
use crate::error::{Error, Result};

/// `A = U·D·V` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
///
/// The inverses of both transforms are tracked alongside, so that
/// `u_inv·A·v_inv = D`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    rank: usize,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Computes the Smith normal form, pivoting on the entry of least absolute
/// value to keep intermediate coefficients small.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    small::smith_normal_form(a).unwrap_or_else(|| smith_normal_form_big(a))
}

fn smith_normal_form_big(a: &IntMatrix) -> SmithForm {
    let (m, n) = a.shape();
    let mut d = a.clone();
    // p·A·q = d throughout; p_inv, q_inv track the inverses.
    let mut p = IntMatrix::identity(m);
    let mut p_inv = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut q_inv = IntMatrix::identity(n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&d, t) else {
                return finish(p, p_inv, q, q_inv, d, rank);
            };
            d.swap_rows(t, pi);
            p.swap_rows(t, pi);
            p_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            q.swap_cols(t, pj);
            q_inv.swap_rows(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let c = -d[(i, t)].div_floor(&pivot);
                d.add_row_multiple(i, t, &c);
                p.add_row_multiple(i, t, &c);
                p_inv.add_col_multiple(t, i, &-&c);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let c = -d[(t, j)].div_floor(&pivot);
                d.add_col_multiple(j, t, &c);
                q.add_col_multiple(j, t, &c);
                q_inv.add_row_multiple(t, j, &-&c);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce d_t | every remaining entry.
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                let one = Int::from(1);
                d.add_row_multiple(t, i, &one);
                p.add_row_multiple(t, i, &one);
                p_inv.add_col_multiple(i, t, &-&one);
                continue;
            }
            if pivot.is_negative() {
                d.negate_row(t);
                p.negate_row(t);
                p_inv.negate_col(t);
            }
            rank += 1;
            break;
        }
    }
    finish(p, p_inv, q, q_inv, d, rank)
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn finish(
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
    d: IntMatrix,
    rank: usize,
) -> SmithForm {
    SmithForm {
        u: p_inv,
        d,
        v: q_inv,
        u_inv: p,
        v_inv: q,
        rank,
    }
}

/// The same elimination on `i128` entries, giving up on overflow.
mod small {
    use num_integer::Integer;

    use super::{finish, SmithForm};
    use crate::abgrp::matrix::{Int, IntMatrix};

    struct Mat {
        rows: usize,
        cols: usize,
        data: Vec<i128>,
    }

    impl Mat {
        fn identity(n: usize) -> Mat {
            let mut data = vec![0; n * n];
            for i in 0..n {
                data[i * n + i] = 1;
            }
            Mat { rows: n, cols: n, data }
        }

        fn at(&self, i: usize, j: usize) -> i128 {
            self.data[i * self.cols + j]
        }

        fn swap_rows(&mut self, a: usize, b: usize) {
            if a != b {
                for j in 0..self.cols {
                    self.data.swap(a * self.cols + j, b * self.cols + j);
                }
            }
        }

        fn swap_cols(&mut self, a: usize, b: usize) {
            if a != b {
                for i in 0..self.rows {
                    self.data.swap(i * self.cols + a, i * self.cols + b);
                }
            }
        }

        /// row `dst` += c · row `src`
        fn add_row(&mut self, dst: usize, src: usize, c: i128) -> Option<()> {
            for j in 0..self.cols {
                let v = self.at(src, j).checked_mul(c)?;
                let x = &mut self.data[dst * self.cols + j];
                *x = x.checked_add(v).filter(|y| y.abs() <= BOUND)?;
            }
            Some(())
        }

        /// col `dst` += c · col `src`
        fn add_col(&mut self, dst: usize, src: usize, c: i128) -> Option<()> {
            for i in 0..self.rows {
                let v = self.at(i, src).checked_mul(c)?;
                let x = &mut self.data[i * self.cols + dst];
                *x = x.checked_add(v).filter(|y| y.abs() <= BOUND)?;
            }
            Some(())
        }

        fn negate_row(&mut self, i: usize) {
            for j in 0..self.cols {
                self.data[i * self.cols + j] = -self.data[i * self.cols + j];
            }
        }

        fn negate_col(&mut self, j: usize) {
            for i in 0..self.rows {
                self.data[i * self.cols + j] = -self.data[i * self.cols + j];
            }
        }

        fn to_big(&self) -> IntMatrix {
            let mut m = IntMatrix::zeros(self.rows, self.cols);
            for i in 0..self.rows {
                for j in 0..self.cols {
                    m[(i, j)] = Int::from(self.at(i, j));
                }
            }
            m
        }
    }

    // Entries beyond this bound make the next step risk overflow anyway.
    const BOUND: i128 = 1 << 62;

    pub(super) fn smith_normal_form(a: &IntMatrix) -> Option<SmithForm> {
        let (m, n) = a.shape();
        let mut data = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let x = i128::try_from(&a[(i, j)]).ok()?;
                if x.abs() > BOUND {
                    return None;
                }
                data.push(x);
            }
        }
        let mut d = Mat { rows: m, cols: n, data };
        let mut p = Mat::identity(m);
        let mut p_inv = Mat::identity(m);
        let mut q = Mat::identity(n);
        let mut q_inv = Mat::identity(n);
        let mut rank = 0;
        let done = |p: Mat, p_inv: Mat, q: Mat, q_inv: Mat, d: Mat, rank| {
            Some(finish(p.to_big(), p_inv.to_big(), q.to_big(), q_inv.to_big(), d.to_big(), rank))
        };

        for t in 0..m.min(n) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        let x = d.at(i, j);
                        if x == 0 {
                            continue;
                        }
                        match best {
                            Some((bi, bj)) if d.at(bi, bj).abs() <= x.abs() => {}
                            _ => best = Some((i, j)),
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return done(p, p_inv, q, q_inv, d, rank);
                };
                d.swap_rows(t, pi);
                p.swap_rows(t, pi);
                p_inv.swap_cols(t, pi);
                d.swap_cols(t, pj);
                q.swap_cols(t, pj);
                q_inv.swap_rows(t, pj);

                let pivot = d.at(t, t);
                let mut clean = true;
                for i in t + 1..m {
                    if d.at(i, t) == 0 {
                        continue;
                    }
                    let c = -Integer::div_floor(&d.at(i, t), &pivot);
                    d.add_row(i, t, c)?;
                    p.add_row(i, t, c)?;
                    p_inv.add_col(t, i, -c)?;
                    if d.at(i, t) != 0 {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    if d.at(t, j) == 0 {
                        continue;
                    }
                    let c = -Integer::div_floor(&d.at(t, j), &pivot);
                    d.add_col(j, t, c)?;
                    q.add_col(j, t, c)?;
                    q_inv.add_row(t, j, -c)?;
                    if d.at(t, j) != 0 {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| d.at(i, j) % pivot != 0));
                if let Some(i) = offender {
                    d.add_row(t, i, 1)?;
                    p.add_row(t, i, 1)?;
                    p_inv.add_col(i, t, -1)?;
                    continue;
                }
                if pivot < 0 {
                    d.negate_row(t);
                    p.negate_row(t);
                    p_inv.negate_col(t);
                }
                rank += 1;
                break;
            }
        }
        done(p, p_inv, q, q_inv, d, rank)
    }
}

/// Finds an integer `x` with `A·x = b`, or `None` when no solution exists.
///
/// The returned solution is the canonical particular one: all free
/// coordinates in the Smith basis are set to zero, so the output is a pure
/// function of `A` and `b`.
pub fn solve(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(solve_with(&smith_normal_form(a), b))
}

/// Same as [`solve`] against a precomputed Smith form of `A`.
pub fn solve_with(snf: &SmithForm, b: &[Int]) -> Option<Vec<Int>> {
    let c = snf.u_inv.apply(b);
    let n = snf.v_inv.rows();
    let mut y = vec![Int::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let di = &snf.d[(i, i)];
            let (quo, rem) = ci.div_rem(di);
            if !rem.is_zero() {
                return None;
            }
            y[i] = quo;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v_inv.apply(&y))
}

/// Columns generating the integer kernel `{x : A·x = 0}`.
pub fn kernel_generators(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let free: Vec<usize> = (snf.rank..a.cols()).collect();
    snf.v_inv.select_columns(&free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::matrix::int_vec;
    use proptest::prelude::*;

    #[test]
    fn huge_entries_fall_back() {
        let big = Int::from(1u64 << 62) * Int::from(1u64 << 62);
        let a = IntMatrix::from_row_major(2, 2, vec![big.clone(), Int::from(3), Int::from(5), big]).unwrap();
        assert!(small::smith_normal_form(&a).is_none());
        check_snf(&a);
    }

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), *a);
        assert_eq!(s.u_inv.mul(a).unwrap().mul(&s.v_inv).unwrap(), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let (m, n) = a.shape();
        for i in 0..m {
            for j in 0..n {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(f.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn identity_is_fixed() {
        let s = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn zero_one_by_one() {
        let s = smith_normal_form(&IntMatrix::zeros(1, 1));
        assert_eq!(s.d, IntMatrix::zeros(1, 1));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn two_four_six_eight() {
        // d₁ = gcd of entries = 2, d₁·d₂ = |det| = 8
        let a = IntMatrix::from_rows(&[[2, 4], [6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors(), int_vec(&[2, 4]));
        check_snf(&a);
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(solve(&id, &int_vec(&[5, -1, 2])).unwrap(), Some(int_vec(&[5, -1, 2])));
        assert_eq!(solve(&IntMatrix::from_rows(&[[2]]), &int_vec(&[3])).unwrap(), None);
        let a = IntMatrix::from_rows(&[[2, 3]]);
        let x = solve(&a, &int_vec(&[1])).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), int_vec(&[1]));
        assert!(solve(&a, &int_vec(&[1, 2])).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_generators(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_generators(&IntMatrix::zeros(1, 2));
        assert_eq!(k.cols(), 2);
        assert!(k.is_unimodular());
        let a = IntMatrix::from_rows(&[[2, 4]]);
        let k = kernel_generators(&a);
        assert_eq!(k.cols(), 1);
        let g = k.column(0);
        assert!(a.mul_vec(&g).unwrap().iter().all(Zero::is_zero));
        // every small solution is a multiple of g = ±(-2, 1)
        assert_eq!(g[1].abs(), Int::from(1));
        assert_eq!(&g[0] * &g[1], Int::from(-2));
    }

    proptest! {
        #[test]
        fn snf_round_trip(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
            let data: Vec<Int> = (0..rows * cols).map(|k| Int::from(seed[k % seed.len()] * (1 + (k as i64 % 3)))).collect();
            let a = IntMatrix::from_row_major(rows, cols, data).unwrap();
            check_snf(&a);
        }

        #[test]
        fn small_path_matches_big(rows in 1usize..6, cols in 1usize..7, seed in proptest::collection::vec(-40i64..41, 42)) {
            let data: Vec<Int> = (0..rows * cols).map(|k| Int::from(seed[k])).collect();
            let a = IntMatrix::from_row_major(rows, cols, data).unwrap();
            let slow = smith_normal_form_big(&a);
            // overflow falls back, nothing to compare
            let Some(fast) = small::smith_normal_form(&a) else { return Ok(()) };
            prop_assert_eq!((fast.u, fast.d, fast.v, fast.u_inv, fast.v_inv, fast.rank), (slow.u, slow.d, slow.v, slow.u_inv, slow.v_inv, slow.rank));
        }

        #[test]
        fn solve_is_sound(entries in proptest::collection::vec(-6i64..7, 6), x in proptest::collection::vec(-5i64..6, 3)) {
            let a = IntMatrix::from_row_major(2, 3, entries.iter().map(|&e| Int::from(e)).collect()).unwrap();
            let b = a.mul_vec(&int_vec(&x)).unwrap();
            let sol = solve(&a, &b).unwrap().expect("b lies in the image");
            prop_assert_eq!(a.mul_vec(&sol).unwrap(), b);
        }
    }
}
