use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact dyadic rational `mant * 2^exp`.
///
/// Kept normalized: the mantissa is odd, or zero with `exp == 0`, so that
/// structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(BigInt::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^exp`.
    pub fn pow2(exp: i64) -> Self {
        Dyadic::new(BigInt::one(), exp)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Mantissa rescaled to exponent `e` (requires `e <= self.exp` or zero).
    fn mant_at(&self, e: i64) -> BigInt {
        debug_assert!(e <= self.exp || self.is_zero());
        if self.is_zero() {
            BigInt::zero()
        } else {
            &self.mant << ((self.exp - e) as usize)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as usize)
        } else {
            self.mant.div_floor(&(BigInt::one() << ((-self.exp) as usize)))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0
    }

    /// Largest multiple of `2^-bits` that is `<= self`.
    pub fn round_down(&self, bits: u32) -> Self {
        if self.exp >= -(bits as i64) {
            return self.clone();
        }
        let scaled = self * &Dyadic::pow2(bits as i64);
        Dyadic::new(scaled.floor(), -(bits as i64))
    }

    /// Smallest multiple of `2^-bits` that is `>= self`.
    pub fn round_up(&self, bits: u32) -> Self {
        -(-self).round_down(bits)
    }

    /// Largest multiple of `2^-bits` that is `<= r`.
    pub fn floor_rational(r: &BigRational, bits: u32) -> Self {
        let scaled = r.numer() << (bits as usize);
        Dyadic::new(scaled.div_floor(r.denom()), -(bits as i64))
    }

    /// Smallest multiple of `2^-bits` that is `>= r`.
    pub fn ceil_rational(r: &BigRational, bits: u32) -> Self {
        -Dyadic::floor_rational(&-r, bits)
    }

    /// Exact conversion when `r` has a power-of-two denominator.
    pub fn from_rational_exact(r: &BigRational) -> Option<Self> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> (tz as usize)).is_one() {
            Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Rough magnitude: an integer `k` with `|self| < 2^k` (for nonzero values).
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn pow(&self, k: u32) -> Self {
        Dyadic::new(num_traits::pow(self.mant.clone(), k as usize), self.exp * k as i64)
    }

    /// Approximate value, for diagnostics and human-facing summaries only.
    pub fn to_f64_lossy(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m: f64 = (&self.mant >> (shift as usize)).to_string().parse().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exp + shift) as i32)
    }
}

impl fmt::Display for Dyadic {
    /// Exact rational rendering, `p` or `p/2^k` written out as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", &self.mant << (self.exp as usize))
        } else {
            write!(f, "{}/{}", self.mant, BigInt::one() << ((-self.exp) as usize))
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        let e = self.exp.min(other.exp);
        self.mant_at(e).cmp(&other.mant_at(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        Dyadic::new(self.mant_at(e) + rhs.mant_at(e), e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}
