//! Exact rationals with the literal syntax `p/q` (lowest terms, optional
//! leading `-`, denominator omitted when 1).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ContinuumError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rat {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn half() -> Rat {
        Rat::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Panics on zero.
    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    /// `(a + c) / (b + d)` for `a/b` and `c/d` in lowest terms with positive
    /// denominators; strictly between the two when they differ.
    pub fn mediant(&self, other: &Rat) -> Rat {
        Rat(BigRational::new(
            self.numer() + other.numer(),
            self.denom() + other.denom(),
        ))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rat {
    type Err = ContinuumError;

    /// Accepts `n` or `n/d` with an optional leading `-` on the numerator.
    /// Non-reduced input (`2/4`) is accepted and reduced; a zero or signed
    /// denominator is rejected.
    fn from_str(s: &str) -> Result<Rat, ContinuumError> {
        let bad = |why: &str| ContinuumError::RatParse {
            literal: s.to_string(),
            reason: why.to_string(),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let unsigned = num.strip_prefix('-').unwrap_or(num);
        if !digits(unsigned) {
            return Err(bad("numerator must be an integer"));
        }
        let num: BigInt = num
            .parse()
            .map_err(|_| bad("numerator must be an integer"))?;
        let den: BigInt = match den {
            None => BigInt::one(),
            Some(d) if digits(d) => d
                .parse()
                .map_err(|_| bad("denominator must be a positive integer"))?,
            Some(_) => return Err(bad("denominator must be a positive integer")),
        };
        if den.is_zero() {
            return Err(bad("denominator is zero"));
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::from_bigint(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}
