//! Exact conic feasibility via phase-one simplex over arbitrary
//! precision rationals.
//!
//! This is the independent route for membership and generation
//! questions: the cone engine answers them through canonical inequality
//! systems, this module answers them by solving for an explicit
//! combination.  Keeping both routes separate is deliberate.

use num::BigRational;
use num::{Signed, Zero};

/// Decides whether `target` equals a nonnegative combination of the
/// `cone` vectors plus an arbitrary integer-free combination of the
/// `free` vectors.  Exact arithmetic throughout; Bland's rule makes the
/// simplex terminate even on degenerate systems.
pub(crate) fn in_cone_hull(
    cone: &[Vec<BigRational>],
    free: &[Vec<BigRational>],
    target: &[BigRational],
) -> bool {
    let n = target.len();
    let mut cols: Vec<Vec<BigRational>> = cone.to_vec();
    let mut frees: Vec<Vec<BigRational>> = free.to_vec();
    let mut t = target.to_vec();
    let mut active: Vec<usize> = (0..n).collect();

    // Eliminate each free direction against a pivot row, then drop the
    // row: the free coefficient can absorb whatever that row demands.
    for fi in 0..frees.len() {
        let Some(pos) = active.iter().position(|&r| !frees[fi][r].is_zero()) else {
            continue;
        };
        let row = active.remove(pos);
        let (head, tail) = frees.split_at_mut(fi + 1);
        let piv = &head[fi];
        let piv_val = piv[row].clone();
        for v in cols.iter_mut().chain(tail.iter_mut()) {
            let factor = &v[row] / &piv_val;
            if factor.is_zero() {
                continue;
            }
            for &r in &active {
                v[r] = &v[r] - &(&factor * &piv[r]);
            }
        }
        let factor = &t[row] / &piv_val;
        if !factor.is_zero() {
            for &r in &active {
                t[r] = &t[r] - &(&factor * &piv[r]);
            }
        }
    }

    // Phase-one simplex on the remaining rows: minimize the sum of
    // artificial variables; the target is reachable iff the minimum is
    // zero.  Rows are flipped so the right-hand side starts nonnegative.
    let m = active.len();
    let k = cols.len();
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut b: Vec<BigRational> = Vec::with_capacity(m);
    for &r in &active {
        let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
        let mut rhs = t[r].clone();
        if rhs.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            rhs = -rhs;
        }
        a.push(row);
        b.push(rhs);
    }
    let mut d: Vec<BigRational> = (0..k)
        .map(|j| a.iter().map(|row| row[j].clone()).sum())
        .collect();
    let mut w0: BigRational = b.iter().cloned().sum();
    let mut basis: Vec<usize> = (0..m).map(|i| k + i).collect();
    loop {
        // Bland: smallest structural column with positive reduced cost.
        let Some(j) = (0..k).find(|&j| d[j].is_positive()) else {
            break;
        };
        let mut pick: Option<usize> = None;
        for i in 0..m {
            if !a[i][j].is_positive() {
                continue;
            }
            let better = match pick {
                None => true,
                Some(pi) => {
                    // b[i]/a[i][j] < b[pi]/a[pi][j], cross-multiplied;
                    // ties broken by smallest leaving basis label.
                    let lhs = &b[i] * &a[pi][j];
                    let rhs = &b[pi] * &a[i][j];
                    lhs < rhs || (lhs == rhs && basis[i] < basis[pi])
                }
            };
            if better {
                pick = Some(i);
            }
        }
        let Some(pi) = pick else {
            // The objective is a sum of nonnegative variables, hence
            // bounded below; an unbounded improving ray cannot exist.
            unreachable!("phase-one objective is bounded below");
        };
        let pv = a[pi][j].clone();
        for x in a[pi].iter_mut() {
            *x = &*x / &pv;
        }
        b[pi] = &b[pi] / &pv;
        for i in 0..m {
            if i == pi || a[i][j].is_zero() {
                continue;
            }
            let f = a[i][j].clone();
            for col in 0..k {
                a[i][col] = &a[i][col] - &(&f * &a[pi][col]);
            }
            b[i] = &b[i] - &(&f * &b[pi]);
        }
        let f = d[j].clone();
        for col in 0..k {
            d[col] = &d[col] - &(&f * &a[pi][col]);
        }
        w0 = &w0 - &(&f * &b[pi]);
        basis[pi] = j;
    }
    w0.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn rat(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn orthant_membership() {
        let gens = vec![rat(&[1, 0]), rat(&[0, 1])];
        assert!(in_cone_hull(&gens, &[], &rat(&[2, 3])));
        assert!(in_cone_hull(&gens, &[], &rat(&[0, 0])));
        assert!(!in_cone_hull(&gens, &[], &rat(&[-1, 0])));
        assert!(!in_cone_hull(&gens, &[], &rat(&[1, -1])));
    }

    #[test]
    fn free_directions_absorb_their_span() {
        let gens = vec![rat(&[1, 0, 0])];
        let free = vec![rat(&[0, 1, 1])];
        assert!(in_cone_hull(&gens, &free, &rat(&[5, -7, -7])));
        assert!(!in_cone_hull(&gens, &free, &rat(&[5, -7, 0])));
        assert!(!in_cone_hull(&gens, &free, &rat(&[-1, 2, 2])));
    }

    #[test]
    fn combination_requires_every_generator() {
        // (1,1) needs both (2,1) and (1,2) scaled by 1/3.
        let gens = vec![rat(&[2, 1]), rat(&[1, 2])];
        assert!(in_cone_hull(&gens, &[], &rat(&[1, 1])));
        assert!(!in_cone_hull(&gens, &[], &rat(&[1, -1])));
    }

    #[test]
    fn no_generators_means_only_the_free_span() {
        assert!(in_cone_hull(&[], &[], &rat(&[0, 0])));
        assert!(!in_cone_hull(&[], &[], &rat(&[1, 0])));
        let free = vec![rat(&[1, 1])];
        assert!(in_cone_hull(&[], &free, &rat(&[-4, -4])));
        assert!(!in_cone_hull(&[], &free, &rat(&[-4, 4])));
    }

    #[test]
    fn lower_dimensional_targets() {
        // Cone spanned by one vector: membership is a half-line test.
        let gens = vec![rat(&[3, -6, 9])];
        assert!(in_cone_hull(&gens, &[], &rat(&[1, -2, 3])));
        assert!(!in_cone_hull(&gens, &[], &rat(&[-1, 2, -3])));
        assert!(!in_cone_hull(&gens, &[], &rat(&[1, -2, 4])));
    }
}
