use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use super::Dyadic;

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        Enclosure { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Enclosure::point(Dyadic::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Enclosure::point(Dyadic::from_int(n))
    }

    /// Outward-rounded enclosure of a rational at grid `2^-bits`.
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        match Dyadic::from_rational_exact(r) {
            Some(d) => Enclosure::point(d),
            None => Enclosure {
                lo: Dyadic::floor_rational(r, bits),
                hi: Dyadic::ceil_rational(r, bits),
            },
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `true` when the width is at most `2^-bits`.
    pub fn width_within(&self, bits: u32) -> bool {
        self.width() <= Dyadic::pow2(-(bits as i64))
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certainly strictly below `other`.
    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn neg(&self) -> Self {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, other: &Enclosure) -> Self {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Enclosure) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = c.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Enclosure { lo, hi }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        if k.is_negative() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    /// Multiplication by an exact rational, rounded outward to grid `2^-bits`.
    pub fn mul_rational(&self, r: &BigRational, bits: u32) -> Self {
        if let Some(d) = Dyadic::from_rational_exact(r) {
            return self.mul(&Enclosure::point(d));
        }
        let a = self.lo.to_rational() * r;
        let b = self.hi.to_rational() * r;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Enclosure {
            lo: Dyadic::floor_rational(&a, bits),
            hi: Dyadic::ceil_rational(&b, bits),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Enclosure::point(Dyadic::one());
        }
        let a = self.lo.pow(k);
        let b = self.hi.pow(k);
        if k % 2 == 1 || !self.lo.is_negative() {
            Enclosure { lo: a, hi: b }
        } else if !self.hi.is_positive() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure {
                lo: Dyadic::zero(),
                hi: a.max(b),
            }
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Enclosure {
                lo: Dyadic::zero(),
                hi: self.hi.clone().max(-&self.lo),
            }
        }
    }

    pub fn max(&self, other: &Enclosure) -> Self {
        Enclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn min(&self, other: &Enclosure) -> Self {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Enclosure) -> Self {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Outward rounding of both endpoints to grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Self {
        Enclosure {
            lo: self.lo.round_down(bits),
            hi: self.hi.round_up(bits),
        }
    }

    /// Image of the interval under `x -> min_k |x - k|`.
    ///
    /// The map is 1-Lipschitz with minima at integers and maxima at
    /// half-integers, so the image is determined by the endpoints and by
    /// which of those critical points the interval contains.
    pub fn dist_nearest_int(&self) -> Self {
        let d = |x: &Dyadic| {
            let f = Dyadic::from_int(x.floor());
            let up = &(&f + &Dyadic::one()) - x;
            let down = x - &f;
            down.min(up)
        };
        let contains_int = self.lo.ceil() <= self.hi.floor();
        let half = Dyadic::pow2(-1);
        let shifted_lo = &self.lo - &half;
        let shifted_hi = &self.hi - &half;
        let contains_half = shifted_lo.ceil() <= shifted_hi.floor();
        let (a, b) = (d(&self.lo), d(&self.hi));
        let lo = if contains_int {
            Dyadic::zero()
        } else {
            a.clone().min(b.clone())
        };
        let hi = if contains_half { half } else { a.max(b) };
        Enclosure { lo, hi }
    }

    /// Division by a strictly positive interval, rounded outward to `2^-bits`.
    pub fn div_positive(&self, den: &Enclosure, bits: u32) -> Option<Self> {
        if !den.lo.is_positive() {
            return None;
        }
        let cands = [
            self.lo.to_rational() / den.lo.to_rational(),
            self.lo.to_rational() / den.hi.to_rational(),
            self.hi.to_rational() / den.lo.to_rational(),
            self.hi.to_rational() / den.hi.to_rational(),
        ];
        let lo = cands.iter().min()?;
        let hi = cands.iter().max()?;
        Some(Enclosure {
            lo: Dyadic::floor_rational(lo, bits),
            hi: Dyadic::ceil_rational(hi, bits),
        })
    }
}

/// Enclosure of the real `k`-th root of a non-negative integer, width `<= 2^-bits`.
pub fn int_root(value: &BigInt, k: u32, bits: u32) -> Enclosure {
    assert!(!value.is_negative() && k >= 1);
    let scaled: BigInt = value << ((bits as usize) * (k as usize));
    let r = scaled.nth_root(k);
    let lo = Dyadic::new(r.clone(), -(bits as i64));
    if num_traits::pow(r.clone(), k as usize) == scaled {
        Enclosure::point(lo)
    } else {
        Enclosure::new(lo, Dyadic::new(r + BigInt::one(), -(bits as i64)))
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 2)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.end()
    }
}

impl Default for Enclosure {
    fn default() -> Self {
        Enclosure::zero()
    }
}
