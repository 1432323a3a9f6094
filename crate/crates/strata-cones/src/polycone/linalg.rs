//! Exact integer linear algebra: row echelon (HNF) with unimodular
//! tracking, integer kernels, lattice saturation, rank, and determinants.
//!
//! All matrices are dense row-major `Vec<Vec<BigInt>>`.  The kernel and
//! saturation routines return bases in row-HNF form (positive pivots,
//! entries above a pivot reduced into `[0, pivot)`), which makes their
//! output canonical: two calls agree bit for bit whenever the spanned
//! lattices agree.

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn neg_vec(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

/// Divides through by the gcd of the entries, keeping the sign pattern.
/// The zero vector is left unchanged.
pub fn primitive_in_place(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

/// Result of `row_echelon`: `rows` is in row-HNF (zero rows dropped),
/// `transform` (when requested) is a unimodular `U` with
/// `U * input = rows ++ zero rows`, and `pivots[k]` is the pivot column
/// of row `k`.
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub transform: Option<Vec<Vec<BigInt>>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Integer row reduction to Hermite normal form by gcd elimination.
/// Row operations are unimodular (swap, negate, add integer multiple),
/// so the lattice spanned by the rows is preserved exactly.
pub fn row_echelon(mut a: Vec<Vec<BigInt>>, track: bool) -> Echelon {
    let m = a.len();
    let w = a.first().map_or(0, Vec::len);
    let mut u: Option<Vec<Vec<BigInt>>> = track.then(|| {
        (0..m)
            .map(|i| {
                let mut row = vec![BigInt::zero(); m];
                row[i] = BigInt::from(1);
                row
            })
            .collect()
    });
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..w {
        if r == m {
            break;
        }
        // Repeatedly reduce by the smallest nonzero entry until one remains.
        loop {
            let best = (r..m)
                .filter(|&i| !a[i][col].is_zero())
                .min_by_key(|&i| a[i][col].abs());
            let Some(best) = best else { break };
            a.swap(r, best);
            if let Some(u) = u.as_mut() {
                u.swap(r, best);
            }
            let mut done = true;
            for i in r + 1..m {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                row_sub_mul(&mut a, i, r, &q);
                if let Some(u) = u.as_mut() {
                    row_sub_mul(u, i, r, &q);
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            a[r] = neg_vec(&a[r]);
            if let Some(u) = u.as_mut() {
                u[r] = neg_vec(&u[r]);
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..r {
            if a[i][col].is_zero() {
                continue;
            }
            let q = a[i][col].div_floor(&a[r][col]);
            if q.is_zero() {
                continue;
            }
            row_sub_mul(&mut a, i, r, &q);
            if let Some(u) = u.as_mut() {
                row_sub_mul(u, i, r, &q);
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        transform: u,
        pivots,
    }
}

fn row_sub_mul(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for k in 0..a[dst].len() {
        let t = &a[src][k] * q;
        a[dst][k] -= t;
    }
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    row_echelon(rows.to_vec(), false).rank()
}

/// Basis of `{x in Z^n : f(x) = 0 for every row f of `forms`}`, in
/// canonical row-HNF form.  The returned lattice is saturated: it is the
/// full integer kernel, not a finite-index sublattice.
pub fn integer_kernel(forms: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    // Row-reduce the transpose with a unimodular transform U; the rows of
    // U matched with zero rows of the echelon are exactly the kernel.
    let transpose: Vec<Vec<BigInt>> = (0..n)
        .map(|i| forms.iter().map(|f| f[i].clone()).collect())
        .collect();
    let ech = row_echelon(transpose, true);
    let rank = ech.rank();
    let u = ech.transform.expect("transform requested");
    let basis: Vec<Vec<BigInt>> = u.into_iter().skip(rank).collect();
    row_echelon(basis, false).rows
}

/// Saturation of the lattice spanned by `gens` inside `Z^n`: the set of
/// integer points of its rational span, in canonical row-HNF form.
pub fn saturate(gens: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let vanishing = integer_kernel(gens, n);
    integer_kernel(&vanishing, n)
}

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Classical adjugate by cofactor expansion: `adj[i][j]` is `(-1)^{i+j}`
/// times the minor obtained by deleting row `j` and column `i`.  Serves
/// as the independent oracle for the closed-product adjugate formula.
pub fn cofactor_adjugate(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| a[r][c].clone())
                        .collect()
                })
                .collect();
            let m = determinant(minor);
            adj[i][j] = if (i + j) % 2 == 0 { m } else { -m };
        }
    }
    adj
}
