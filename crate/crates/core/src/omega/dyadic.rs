//! Exact dyadic rationals `numerator / 2^denom_exp`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// A non-negative dyadic rational kept in lowest terms: either zero with
/// exponent 0, or an odd numerator (or exponent 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    numerator: BigUint,
    denom_exp: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(BigUint::one(), 0)
    }

    /// `2^(-exp)`.
    pub fn pow2_neg(exp: u32) -> Self {
        Self::new(BigUint::one(), exp)
    }

    pub fn new(numerator: BigUint, denom_exp: u32) -> Self {
        let mut value = Self {
            numerator,
            denom_exp,
        };
        value.reduce();
        value
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.denom_exp = 0;
            return;
        }
        let twos = self
            .numerator
            .trailing_zeros()
            .unwrap_or(0)
            .min(self.denom_exp as u64) as u32;
        self.numerator >>= twos;
        self.denom_exp -= twos;
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Nearest `f64`; exact whenever the numerator fits in 53 bits.
    pub fn to_f64(&self) -> f64 {
        let num = self.numerator.to_f64().unwrap_or(f64::INFINITY);
        num * 2f64.powi(-(self.denom_exp as i32))
    }

    /// Binary expansion with exactly `digits` fractional digits, truncated.
    /// `0.875` with 3 digits renders as `0.111`.
    pub fn binary_digits(&self, digits: u32) -> String {
        let scaled = if digits >= self.denom_exp {
            &self.numerator << (digits - self.denom_exp)
        } else {
            &self.numerator >> (self.denom_exp - digits)
        };
        let integer = &scaled >> digits;
        let fraction = scaled - (&integer << digits);
        let mut out = integer.to_str_radix(2);
        if digits > 0 {
            let bits = fraction.to_str_radix(2);
            out.push('.');
            out.push_str(&"0".repeat(digits as usize - bits.len()));
            out.push_str(&bits);
        }
        out
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.denom_exp.max(rhs.denom_exp);
        let a = &self.numerator << (exp - self.denom_exp);
        let b = &rhs.numerator << (exp - rhs.denom_exp);
        Dyadic::new(a + b, exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.denom_exp.max(other.denom_exp);
        let a = &self.numerator << (exp - self.denom_exp);
        let b = &other.numerator << (exp - other.denom_exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.denom_exp)
    }
}

/// Numerators that fit in `u64` serialize as JSON numbers, larger ones as
/// decimal strings.
pub(crate) fn serialize_numerator<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_str_radix(10)),
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Num<'a>(&'a BigUint);
        impl Serialize for Num<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_numerator(self.0, s)
            }
        }
        let mut st = s.serialize_struct("Dyadic", 2)?;
        st.serialize_field("numerator", &Num(&self.numerator))?;
        st.serialize_field("denom_exp", &self.denom_exp)?;
        st.end()
    }
}
