//! Canonical sparse multivariate polynomial arithmetic over Q and F_p.
//!
//! Polynomials live in a fixed [`VarSpace`] with the total variable order
//! z < a1 < a2 < ... < b. Term order is graded reverse-lexicographic and
//! terms are stored in descending canonical order.

mod gcd;
mod modp;
mod parse;
mod poly;
mod resultant;

pub use gcd::gcd_in_beta;
pub use modp::{univariate_irreducible_mod_p, ModPPoly};
pub use poly::{Part, Poly};
pub use resultant::resultant_in_beta;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactnum::NumError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MpolyError {
    #[error("polynomials live in different variable spaces")]
    VarSpaceMismatch,
    #[error("not divisible: leading term {lead} is not reducible by the divisor")]
    NotDivisible { lead: String },
    #[error("polynomial is not monic as a polynomial in b")]
    NotMonicInBeta,
    #[error("resultant requires positive degree in b on both sides")]
    ZeroDegree,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("elementary symmetric index {0} out of range for {1} variables")]
    SymmetricIndexOutOfRange(usize, usize),
    #[error("phi requires n >= 1, got {0}")]
    PhiIndex(i64),
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("coefficient of {monomial} is not p-integral at p = {p}")]
    NegativeValuation { monomial: String, p: u64 },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A variable of the ambient polynomial ring, in the fixed total order
/// z < a1 < a2 < ... < b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z,
    A(u32),
    B,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => write!(f, "z"),
            Var::A(i) => write!(f, "a{i}"),
            Var::B => write!(f, "b"),
        }
    }
}

/// Ordered variable universe. Two polynomials are comparable only when they
/// share one `VarSpace`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VarSpace {
    vars: Vec<Var>,
}

pub const MAX_VARS: usize = 12;
pub const MAX_EXPONENT: u32 = 1023; // 10-bit packed fields

impl VarSpace {
    /// Builds a space from a strictly increasing variable list.
    pub fn custom(vars: Vec<Var>) -> Arc<VarSpace> {
        assert!(!vars.is_empty() && vars.len() <= MAX_VARS);
        assert!(vars.windows(2).all(|w| w[0] < w[1]), "variables out of order");
        Arc::new(VarSpace { vars })
    }

    /// {z, a1, ..., a_{d-1}, b} for degree d.
    pub fn unhatted(d: u32) -> Arc<VarSpace> {
        assert!(d >= 2);
        let mut vars = vec![Var::Z];
        vars.extend((1..d).map(Var::A));
        vars.push(Var::B);
        Self::custom(vars)
    }

    /// {z, a1, ..., a_{d-2}, b}: the image space of the hat map.
    pub fn hatted(d: u32) -> Arc<VarSpace> {
        assert!(d >= 3);
        let mut vars = vec![Var::Z];
        vars.extend((1..d - 1).map(Var::A));
        vars.push(Var::B);
        Self::custom(vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index_of(v).is_some()
    }

    /// Alpha variables of the space (everything except z and b).
    pub fn alphas(&self) -> Vec<Var> {
        self.vars
            .iter()
            .copied()
            .filter(|v| matches!(v, Var::A(_)))
            .collect()
    }
}

/// Exponent vector packed into a u128, 10 bits per variable. Earlier
/// variables occupy more significant lanes so the grevlex tie-break (from
/// the least variable upward, smaller exponent wins) is one reversed
/// integer comparison. Total degree is cached for fast graded comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    packed: u128,
}

#[inline]
fn lane(index: usize) -> u32 {
    debug_assert!(index < MAX_VARS);
    10 * (MAX_VARS - 1 - index) as u32
}

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial { deg: 0, packed: 0 }
    }

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS);
        let mut packed = 0u128;
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "exponent {e} exceeds packing limit");
            packed |= (e as u128) << lane(i);
            deg += e;
        }
        Monomial { deg, packed }
    }

    pub fn var(index: usize) -> Monomial {
        Monomial {
            deg: 1,
            packed: 1u128 << lane(index),
        }
    }

    pub fn exponent(&self, index: usize) -> u32 {
        ((self.packed >> lane(index)) & 0x3FF) as u32
    }

    pub fn exponents(&self, arity: usize) -> Vec<u32> {
        (0..arity).map(|i| self.exponent(i)).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.deg
    }

    pub fn is_unit(&self) -> bool {
        self.packed == 0
    }

    /// Monomial product. Packed fields cannot carry at desk scale; checked
    /// in debug builds.
    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let m = Monomial {
            deg: self.deg + rhs.deg,
            packed: self.packed + rhs.packed,
        };
        debug_assert!((0..MAX_VARS).all(|i| m.exponent(i) == self.exponent(i) + rhs.exponent(i)));
        m
    }

    pub fn divides(&self, rhs: &Monomial) -> bool {
        if self.deg > rhs.deg {
            return false;
        }
        // field-wise comparison; borrows cannot hide inside 10-bit lanes
        // when every lane of self is <= the corresponding lane of rhs
        (0..MAX_VARS).all(|i| self.exponent(i) <= rhs.exponent(i))
    }

    /// rhs / self, assuming `self.divides(rhs)`.
    pub fn div_into(&self, rhs: &Monomial) -> Monomial {
        debug_assert!(self.divides(rhs));
        Monomial {
            deg: rhs.deg - self.deg,
            packed: rhs.packed - self.packed,
        }
    }

    pub fn pow(&self, n: u32) -> Monomial {
        let mut packed = 0u128;
        for i in 0..MAX_VARS {
            let e = self.exponent(i) * n;
            assert!(e <= MAX_EXPONENT, "exponent overflow in monomial power");
            packed |= (e as u128) << lane(i);
        }
        Monomial {
            deg: self.deg * n,
            packed,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded reverse-lexicographic with b the greatest variable: higher
    /// total degree wins; ties go to the monomial with the smaller exponent
    /// in the least variable where they differ, i.e. the smaller packed key.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| other.packed.cmp(&self.packed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_order() {
        // space (a1, b): a1 index 0, b index 1
        let a1 = Monomial::from_exponents(&[1, 0]);
        let b = Monomial::from_exponents(&[0, 1]);
        let a1b = a1.mul(&b);
        let b2 = b.pow(2);
        let a1sq = a1.pow(2);
        // degree first
        assert!(b2 > a1);
        // same degree: b^2 > a1*b > a1^2 (smaller exponent in the lesser var wins)
        assert!(b2 > a1b);
        assert!(a1b > a1sq);
    }

    #[test]
    fn divides_and_quotient() {
        let m = Monomial::from_exponents(&[2, 3]);
        let n = Monomial::from_exponents(&[1, 3]);
        assert!(n.divides(&m));
        assert!(!m.divides(&n));
        assert_eq!(n.div_into(&m), Monomial::from_exponents(&[1, 0]));
    }

    #[test]
    fn spaces() {
        let s = VarSpace::unhatted(3);
        assert_eq!(s.vars(), &[Var::Z, Var::A(1), Var::A(2), Var::B]);
        let h = VarSpace::hatted(3);
        assert_eq!(h.vars(), &[Var::Z, Var::A(1), Var::B]);
        assert_eq!(h.alphas(), vec![Var::A(1)]);
    }
}
