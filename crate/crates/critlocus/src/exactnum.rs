//! Exact coefficient arithmetic: arbitrary-precision rationals with p-adic
//! valuation queries, and reduction into small prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("negative p-adic valuation: {0} is not p-integral at p = {1}")]
    NegativeValuation(String, u64),
    #[error("invalid rational literal `{0}`")]
    BadLiteral(String),
}

/// Deterministic trial division; the primes in play are desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_odd_prime(p: u64) -> Result<(), NumError> {
    if p >= 3 && p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(NumError::NotOddPrime(p))
    }
}

/// Arbitrary-precision rational, always stored fully reduced with positive
/// denominator. Zero is 0/1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

/// p-adic valuation result; `Infinite` is the valuation of zero and orders
/// above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

fn bigint_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return v;
        }
    }
}

impl Rational {
    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    /// num/den, reduced on construction. Panics on zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Rational {
        Rational(self.0.recip())
    }

    /// v_p(numerator) - v_p(denominator); `Infinite` for zero.
    pub fn padic_valuation(&self, p: u64) -> Result<Valuation, NumError> {
        check_odd_prime(p)?;
        if self.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let v = bigint_valuation(self.numer(), p) - bigint_valuation(self.denom(), p);
        Ok(Valuation::Finite(v))
    }

    /// numerator * denominator^{-1} in F_p; errors when p divides the
    /// denominator (the value is not in Z_(p)).
    pub fn reduce_mod_p(&self, p: u64) -> Result<PrimeFieldElem, NumError> {
        check_odd_prime(p)?;
        let pb = BigInt::from(p);
        let den = num_integer::Integer::mod_floor(self.denom(), &pb);
        let den: u64 = den.try_into().expect("residue fits u64");
        if den == 0 {
            return Err(NumError::NegativeValuation(self.to_string(), p));
        }
        let num = num_integer::Integer::mod_floor(self.numer(), &pb);
        let num: u64 = num.try_into().expect("residue fits u64");
        let inv = mod_inverse(den, p);
        PrimeFieldElem::new(num * inv % p, p)
    }
}

/// Inverse mod an odd prime via Fermat.
pub fn mod_inverse(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Rational {
    /// "num/den" with den omitted when 1: "3", "-5/2".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumError::BadLiteral(s.to_string());
        match s.split_once('/') {
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational::from_bigint(n))
            }
            Some((num, den)) => {
                let n: BigInt = num.parse().map_err(|_| bad())?;
                let d: BigInt = den.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::from_big(n, d))
            }
        }
    }
}

/// Element of the prime field F_p, p an odd prime checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeFieldElem {
    residue: u64,
    modulus: u64,
}

impl PrimeFieldElem {
    pub fn new(residue: u64, p: u64) -> Result<Self, NumError> {
        check_odd_prime(p)?;
        Ok(PrimeFieldElem {
            residue: residue % p,
            modulus: p,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn add(self, rhs: Self) -> Self {
        assert_eq!(self.modulus, rhs.modulus);
        PrimeFieldElem {
            residue: (self.residue + rhs.residue) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.modulus, rhs.modulus);
        PrimeFieldElem {
            residue: self.residue * rhs.residue % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn neg(self) -> Self {
        PrimeFieldElem {
            residue: (self.modulus - self.residue) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Self {
        assert!(self.residue != 0, "inverse of zero in F_p");
        PrimeFieldElem {
            residue: mod_inverse(self.residue, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for PrimeFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        let p = 3;
        assert_eq!(
            Rational::new(9, 2).padic_valuation(p).unwrap(),
            Valuation::Finite(2)
        );
        assert_eq!(
            Rational::zero().padic_valuation(5).unwrap(),
            Valuation::Infinite
        );
        assert_eq!(
            Rational::new(5, 3).padic_valuation(3).unwrap(),
            Valuation::Finite(-1)
        );
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Rational::new(5, 2).reduce_mod_p(3).unwrap().residue(), 1);
        assert_eq!(Rational::new(3, 1).reduce_mod_p(3).unwrap().residue(), 0);
        assert!(matches!(
            Rational::new(1, 3).reduce_mod_p(3),
            Err(NumError::NegativeValuation(..))
        ));
    }

    #[test]
    fn rejects_non_primes() {
        assert!(check_odd_prime(2).is_err());
        assert!(check_odd_prime(9).is_err());
        assert!(check_odd_prime(1).is_err());
        assert!(check_odd_prime(7).is_ok());
    }

    #[test]
    fn serialization_round_trip() {
        for s in ["3", "-5/2", "0", "7/3"] {
            let q: Rational = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        // non-canonical input still normalizes
        let q: Rational = "4/6".parse().unwrap();
        assert_eq!(q.to_string(), "2/3");
    }

    #[test]
    fn valuation_is_additive_and_ultrametric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = Rational::new(rng.gen_range(-200..200), rng.gen_range(1..60));
            let b = Rational::new(rng.gen_range(-200..200), rng.gen_range(1..60));
            for p in [3u64, 5, 7] {
                let va = a.padic_valuation(p).unwrap();
                let vb = b.padic_valuation(p).unwrap();
                let prod = (&a * &b).padic_valuation(p).unwrap();
                match (va, vb) {
                    (Valuation::Finite(x), Valuation::Finite(y)) => {
                        assert_eq!(prod, Valuation::Finite(x + y));
                    }
                    _ => assert_eq!(prod, Valuation::Infinite),
                }
                let sum = (&a + &b).padic_valuation(p).unwrap();
                assert!(sum >= va.min(vb));
            }
        }
    }

    #[test]
    fn reduction_is_ring_homomorphism() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let p = 5u64;
        for _ in 0..500 {
            let a = Rational::new(rng.gen_range(-100..100), *[1, 2, 3, 4, 6].get(rng.gen_range(0..5)).unwrap());
            let b = Rational::new(rng.gen_range(-100..100), *[1, 2, 3, 4, 6].get(rng.gen_range(0..5)).unwrap());
            let ra = a.reduce_mod_p(p).unwrap();
            let rb = b.reduce_mod_p(p).unwrap();
            assert_eq!((&a + &b).reduce_mod_p(p).unwrap(), ra.add(rb));
            assert_eq!((&a * &b).reduce_mod_p(p).unwrap(), ra.mul(rb));
        }
    }
}
