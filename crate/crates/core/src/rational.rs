//! Exact arithmetic on the rational points of the circle R/Z.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An element of Q/Z, stored as a reduced fraction `num/den` with
/// `0 <= num < den`. Coefficients use arbitrary-precision integers so
/// denominators growing like k! can never overflow.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitRational {
    num: BigUint,
    den: BigUint,
}

impl UnitRational {
    pub fn zero() -> Self {
        UnitRational {
            num: BigUint::zero(),
            den: BigUint::from(1u8),
        }
    }

    /// `num/den` reduced into [0,1). `den` must be nonzero.
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Self {
        let num = num.into();
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        let den = den.abs();
        let num = num.mod_floor(&den);
        let g = num.gcd(&den);
        UnitRational {
            num: (num / &g).to_biguint().unwrap(),
            den: (den / g).to_biguint().unwrap(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn denominator_u64(&self) -> Option<u64> {
        self.den.to_u64()
    }

    /// Integer multiple `n * self` in Q/Z.
    pub fn scale<N: Into<BigInt>>(&self, n: N) -> Self {
        UnitRational::new(n.into() * BigInt::from(self.num.clone()), BigInt::from(self.den.clone()))
    }

    /// Representative in [0,1) as a float. Exact for denominators < 2^53.
    pub fn to_f64(&self) -> f64 {
        self.num.to_f64().unwrap() / self.den.to_f64().unwrap()
    }

    /// All solutions x of `n*x = self` in Q/Z: `self/n + j/n` for j < n.
    pub fn divided_by(&self, n: u64) -> Vec<UnitRational> {
        assert!(n > 0);
        let base = UnitRational::new(
            BigInt::from(self.num.clone()),
            BigInt::from(self.den.clone()) * BigInt::from(n),
        );
        (0..n)
            .map(|j| &base + &UnitRational::new(j, n))
            .collect()
    }
}

impl Add for &UnitRational {
    type Output = UnitRational;
    fn add(self, rhs: &UnitRational) -> UnitRational {
        let den = self.den.lcm(&rhs.den);
        let num = &self.num * (&den / &self.den) + &rhs.num * (&den / &rhs.den);
        UnitRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Sub for &UnitRational {
    type Output = UnitRational;
    fn sub(self, rhs: &UnitRational) -> UnitRational {
        self + &(-rhs)
    }
}

impl Neg for &UnitRational {
    type Output = UnitRational;
    fn neg(self) -> UnitRational {
        if self.num.is_zero() {
            return self.clone();
        }
        UnitRational {
            num: &self.den - &self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Wire form used by table and form JSON: `{"num": .., "den": ..}`.
#[derive(Serialize, Deserialize)]
struct Wire {
    num: u64,
    den: u64,
}

impl Serialize for UnitRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let num = self.num.to_u64().ok_or_else(|| {
            serde::ser::Error::custom("numerator exceeds u64; not representable in wire form")
        })?;
        let den = self.den.to_u64().ok_or_else(|| {
            serde::ser::Error::custom("denominator exceeds u64; not representable in wire form")
        })?;
        Wire { num, den }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.den == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(UnitRational::new(w.num, w.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_mod_one() {
        assert_eq!(UnitRational::new(5, 4), UnitRational::new(1, 4));
        assert_eq!(UnitRational::new(-1, 4), UnitRational::new(3, 4));
        assert_eq!(UnitRational::new(2, 4), UnitRational::new(1, 2));
        assert_eq!(UnitRational::new(4, 4), UnitRational::zero());
    }

    #[test]
    fn group_laws() {
        let a = UnitRational::new(1, 2);
        let b = UnitRational::new(2, 3);
        assert_eq!(&a + &b, UnitRational::new(1, 6));
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&a + &(-&a), UnitRational::zero());
    }

    #[test]
    fn scaling() {
        let a = UnitRational::new(1, 6);
        assert_eq!(a.scale(6), UnitRational::zero());
        assert_eq!(a.scale(4), UnitRational::new(2, 3));
        assert_eq!(a.scale(-1), UnitRational::new(5, 6));
    }

    #[test]
    fn division_classes() {
        let a = UnitRational::new(1, 4);
        let roots = a.divided_by(2);
        assert_eq!(roots, vec![UnitRational::new(1, 8), UnitRational::new(5, 8)]);
        for r in &roots {
            assert_eq!(r.scale(2), a);
        }
    }

    #[test]
    fn wire_roundtrip() {
        let a = UnitRational::new(3, 8);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"num":3,"den":8}"#);
        let back: UnitRational = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }
}
