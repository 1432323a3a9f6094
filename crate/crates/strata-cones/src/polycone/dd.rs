//! Double-description conversion from an inequality system to extreme
//! rays plus a lineality basis.
//!
//! Forms are processed one at a time against a running generator pair
//! `(rays, lineality)`.  Two invariants hold after every step: the
//! lineality basis spans exactly the rational kernel of the processed
//! forms, and every ray is extreme modulo that lineality (its tight
//! forms have rank one less than the quotient dimension).

use num::bigint::BigInt;
use num::{Signed, Zero};

use super::linalg;

pub(crate) struct RawCone {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

/// Generators of `{x : f(x) <= 0 for every form f}`.  Rays come back
/// primitive but otherwise unnormalized; the lineality basis is the
/// saturated integer kernel of the forms in row-HNF.
pub(crate) fn double_description(n: usize, forms: &[Vec<BigInt>]) -> RawCone {
    let mut lin: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    // tights[r][k] holds iff forms[k] vanishes on rays[r]; rebuilt from
    // scratch after each form, which keeps the bookkeeping trivially
    // correct at a cost that is negligible at the sizes seen here.
    let mut tights: Vec<Vec<bool>> = Vec::new();

    for (fi, f) in forms.iter().enumerate() {
        if let Some(i0) = lin.iter().position(|l| !linalg::dot(f, l).is_zero()) {
            // The form cuts the lineality space: one basis vector leaves
            // the space and becomes a ray on the strict side, the rest
            // are adjusted into the kernel of f, and every existing ray
            // is shifted along it without losing any tight form.
            let mut l0 = lin.remove(i0);
            if linalg::dot(f, &l0).is_positive() {
                l0 = linalg::neg_vec(&l0);
            }
            let fl0 = linalg::dot(f, &l0);
            for w in lin.iter_mut() {
                let fw = linalg::dot(f, w);
                if fw.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let t = &fl0 * &w[c] - &fw * &l0[c];
                    w[c] = t;
                }
                linalg::primitive_in_place(w);
            }
            for r in rays.iter_mut() {
                let fr = linalg::dot(f, r);
                if fr.is_zero() {
                    continue;
                }
                for c in 0..n {
                    // Positive multiple of r plus a kernel-of-f shift.
                    let t = -(&fl0) * &r[c] + &fr * &l0[c];
                    r[c] = t;
                }
                linalg::primitive_in_place(r);
            }
            rays.push(l0);
        } else {
            // Cut step: the form vanishes on the lineality space.  Rays
            // on the violating side are dropped; each adjacent pair
            // across the hyperplane contributes one new ray on it.
            let vals: Vec<BigInt> = rays.iter().map(|r| linalg::dot(f, r)).collect();
            let d_cur = n - lin.len();
            let processed = &forms[..fi];
            let mut fresh: Vec<Vec<BigInt>> = Vec::new();
            for (pi, p) in rays.iter().enumerate() {
                if !vals[pi].is_positive() {
                    continue;
                }
                for (mi, m) in rays.iter().enumerate() {
                    if !vals[mi].is_negative() {
                        continue;
                    }
                    if !adjacent(&tights[pi], &tights[mi], processed, d_cur) {
                        continue;
                    }
                    let mut c: Vec<BigInt> = (0..n)
                        .map(|k| &vals[pi] * &m[k] - &vals[mi] * &p[k])
                        .collect();
                    linalg::primitive_in_place(&mut c);
                    if !fresh.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            let mut keep = Vec::with_capacity(rays.len());
            for (i, r) in rays.into_iter().enumerate() {
                if !vals[i].is_positive() {
                    keep.push(r);
                }
            }
            keep.extend(fresh);
            rays = keep;
        }
        let upto = &forms[..fi + 1];
        tights = rays
            .iter()
            .map(|r| upto.iter().map(|g| linalg::dot(g, r).is_zero()).collect())
            .collect();
    }

    RawCone {
        rays,
        lineality: linalg::integer_kernel(forms, n),
    }
}

/// Rays are adjacent iff their common tight forms span a space of rank
/// exactly two below the quotient dimension.
fn adjacent(t1: &[bool], t2: &[bool], processed: &[Vec<BigInt>], d_cur: usize) -> bool {
    if d_cur < 2 {
        return false;
    }
    let common: Vec<Vec<BigInt>> = processed
        .iter()
        .enumerate()
        .filter(|&(k, _)| t1[k] && t2[k])
        .map(|(_, g)| g.clone())
        .collect();
    linalg::rank(&common) == d_cur - 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        v.sort();
        v
    }

    #[test]
    fn no_forms_leaves_the_whole_lattice() {
        let c = double_description(3, &[]);
        assert!(c.rays.is_empty());
        assert_eq!(c.lineality, mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn orthant_from_coordinate_forms() {
        let c = double_description(3, &mat(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]));
        assert!(c.lineality.is_empty());
        assert_eq!(
            sorted(c.rays),
            mat(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
        );
    }

    #[test]
    fn opposite_forms_produce_lineality() {
        let c = double_description(3, &mat(&[&[1, 0, 0], &[-1, 0, 0]]));
        assert!(c.rays.is_empty());
        assert_eq!(c.lineality, mat(&[&[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn square_pyramid_over_the_diagonal() {
        // x3 >= |x1|, x3 >= |x2|: four extreme rays (+-1, +-1, 1).
        let c = double_description(
            3,
            &mat(&[&[1, 0, -1], &[-1, 0, -1], &[0, 1, -1], &[0, -1, -1]]),
        );
        assert!(c.lineality.is_empty());
        assert_eq!(
            sorted(c.rays),
            mat(&[&[-1, -1, 1], &[-1, 1, 1], &[1, -1, 1], &[1, 1, 1]])
        );
    }

    #[test]
    fn redundant_and_repeated_forms_are_harmless() {
        let c = double_description(
            2,
            &mat(&[&[-1, 0], &[-1, 0], &[0, -1], &[-1, -1]]),
        );
        assert!(c.lineality.is_empty());
        assert_eq!(sorted(c.rays), mat(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn infeasible_strict_directions_collapse_to_origin() {
        let forms = mat(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        let c = double_description(2, &forms);
        assert!(c.rays.is_empty());
        assert!(c.lineality.is_empty());
    }

    #[test]
    fn halfspace_keeps_a_lineality_and_one_ray() {
        let c = double_description(2, &mat(&[&[1, 2]]));
        assert_eq!(c.lineality, mat(&[&[2, -1]]));
        assert_eq!(c.rays.len(), 1);
        assert!(linalg::dot(&mat(&[&[1, 2]])[0], &c.rays[0]).is_negative());
    }
}
