//! Integer polynomials in one indeterminate, used for identities that
//! must hold for every characteristic at once.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{Signed, Zero};

/// A polynomial with `BigInt` coefficients; `coeffs[k]` multiplies the
/// k-th power of the indeterminate.  No trailing zero coefficients are
/// stored, so equality of values is equality of representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> IntPoly {
        IntPoly::constant(BigInt::from(1))
    }

    pub fn constant(c: BigInt) -> IntPoly {
        IntPoly::monomial(c, 0)
    }

    /// `c` times the `deg`-th power of the indeterminate.
    pub fn monomial(c: BigInt, deg: usize) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        IntPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, e: usize) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division; `None` when `other` does not divide `self` over
    /// the integers.
    pub fn exact_div(&self, other: &IntPoly) -> Option<IntPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dd = other.coeffs.len() - 1;
        let lead = other.coeffs.last().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        if rem.len() < other.coeffs.len() {
            return None;
        }
        let qlen = rem.len() - dd;
        let mut q = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            if !(&top % lead).is_zero() {
                return None;
            }
            let qc = &top / lead;
            for (i, oc) in other.coeffs.iter().enumerate() {
                let t = &qc * oc;
                rem[k + i] -= t;
            }
            q[k] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(q))
    }

    fn from_coeffs(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, other: &IntPoly) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, other: &IntPoly) -> IntPoly {
        self + &(-other)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let one = mag == BigInt::from(1);
            match (deg, one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "p")?,
                (1, false) => write!(f, "{mag} p")?,
                (_, true) => write!(f, "p^{deg}")?,
                (_, false) => write!(f, "{mag} p^{deg}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn arithmetic_and_normalization() {
        let a = p(&[1, 2]);
        let b = p(&[-1, 1]);
        assert_eq!(&a + &b, p(&[0, 3]));
        assert_eq!(&a - &a, IntPoly::zero());
        assert_eq!(&a * &b, p(&[-1, -1, 2]));
        assert_eq!(p(&[0, 0, 1]).degree(), Some(2));
        assert!(IntPoly::zero().is_zero());
        assert_eq!(IntPoly::monomial(BigInt::zero(), 5), IntPoly::zero());
    }

    #[test]
    fn evaluation_uses_horner() {
        let f = p(&[1, -3, 0, 2]);
        assert_eq!(f.eval(&BigInt::from(2)), BigInt::from(1 - 6 + 16));
        assert_eq!(f.eval(&BigInt::from(0)), BigInt::from(1));
    }

    #[test]
    fn powers_expand_binomials() {
        // (p + 1)^3 = p^3 + 3p^2 + 3p + 1.
        assert_eq!(p(&[1, 1]).pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[2, 0, 1]).pow(0), IntPoly::one());
    }

    #[test]
    fn exact_division_detects_divisibility() {
        // (p^2 - 1) / (p - 1) = p + 1.
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[-1, 1])), None);
        // Divisibility fails over the integers even when it would hold
        // over the rationals.
        assert_eq!(p(&[0, 1]).exact_div(&p(&[0, 2])), None);
        assert_eq!(p(&[0, 2]).exact_div(&p(&[0, 2])), Some(IntPoly::one()));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[1, -3, 0, 2]).to_string(), "2 p^3 - 3 p + 1");
        assert_eq!(p(&[0, 1]).to_string(), "p");
        assert_eq!(p(&[-1, -1]).to_string(), "-p - 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }
}
