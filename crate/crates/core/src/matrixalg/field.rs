//! Exact scalar arithmetic: arbitrary-precision rationals and prime
//! fields of odd characteristic. Characteristic 2 is rejected at
//! construction.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("invalid field spec `{0}`: expected `Q` or `F<p>` with p an odd prime")]
    Spec(String),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse `{0}` as a field element")]
    Parse(String),
}

/// An exact field. Implementations carry whatever runtime data they
/// need (the modulus, for prime fields); elements are canonical so
/// equality is plain `==`.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn parse(&self, literal: &str) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;
    fn random(&self, rng: &mut dyn rand::RngCore) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The rational numbers with arbitrary-precision integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse(&self, literal: &str) -> Result<BigRational, FieldError> {
        let literal = literal.trim();
        let bad = || FieldError::Parse(literal.to_string());
        match literal.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(num, den))
            }
            None => Ok(BigRational::from_integer(
                BigInt::from_str(literal).map_err(|_| bad())?,
            )),
        }
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn random(&self, rng: &mut dyn rand::RngCore) -> BigRational {
        // small numerators and denominators keep intermediate sizes sane
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=9);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// The prime field F_p for an odd prime p; elements are least
/// nonnegative residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// All residues 0..p in canonical order.
    pub fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }

    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn parse(&self, literal: &str) -> Result<u64, FieldError> {
        let v = i128::from_str(literal.trim())
            .map_err(|_| FieldError::Parse(literal.to_string()))?;
        Ok(v.rem_euclid(self.p as i128) as u64)
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn random(&self, rng: &mut dyn rand::RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// Parsed field spec: `Q` or `F<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(digits) = s.strip_prefix('F') {
            let p: u64 = digits.parse().map_err(|_| FieldError::Spec(s.to_string()))?;
            PrimeField::new(p)?;
            return Ok(FieldSpec::Prime(p));
        }
        Err(FieldError::Spec(s.to_string()))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("F7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert!(matches!(
            "F2".parse::<FieldSpec>(),
            Err(FieldError::CharacteristicTwo)
        ));
        assert!(matches!("F9".parse::<FieldSpec>(), Err(FieldError::NotPrime(9))));
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let f = Rationals;
        let a = f.parse("2/3").unwrap();
        let b = f.parse("-1/6").unwrap();
        assert_eq!(f.format(&f.add(&a, &b)), "1/2");
        assert_eq!(f.format(&f.mul(&a, &b)), "-1/9");
        assert_eq!(f.format(&f.inv(&a).unwrap()), "3/2");
        assert!(f.inv(&f.zero()).is_none());
        assert_eq!(f.format(&f.parse("4/2").unwrap()), "2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.add(&3, &4), 2);
        assert_eq!(f.neg(&2), 3);
        assert_eq!(f.mul(&3, &4), 2);
        assert_eq!(f.inv(&3).unwrap(), 2);
        assert!(f.inv(&0).is_none());
        assert_eq!(f.parse("-1").unwrap(), 4);
        for a in 1..5 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
    }
}
