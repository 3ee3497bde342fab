//! Exact values in the ring generated over Q by square roots and
//! Liouville series.
//!
//! A [`Sym`] is a finite Q-linear combination of monomials
//! `sqrt(r) * L_{b1}^{e1} * ... ` with `r` squarefree. Square roots of
//! distinct squarefree integers are linearly independent over Q and every
//! `liouville(b)` is transcendental, so a combination that mentions at most
//! one Liouville base is zero exactly when all its coefficients vanish. That
//! makes equality decidable for everything the parser can build, and sign
//! determination reduces to refining enclosures until they leave zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enclosure::int_root;
use super::{Dyadic, Enclosure};
use crate::error::{Error, Result};

/// `sqrt(root) * prod L_base^exp`; `root == 1` means no square root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    root: BigInt,
    liou: Vec<(u64, u32)>,
}

impl Monomial {
    fn unit() -> Self {
        Monomial {
            root: BigInt::one(),
            liou: Vec::new(),
        }
    }

    fn is_unit(&self) -> bool {
        self.root.is_one() && self.liou.is_empty()
    }

    /// Product of two monomials together with the rational factor pulled
    /// out of `sqrt(a) * sqrt(b)`.
    fn mul(&self, other: &Monomial) -> (BigInt, Monomial) {
        let g = self.root.gcd(&other.root);
        let root = (&self.root / &g) * (&other.root / &g);
        let mut exps: BTreeMap<u64, u32> = BTreeMap::new();
        for &(b, e) in self.liou.iter().chain(other.liou.iter()) {
            *exps.entry(b).or_default() += e;
        }
        (
            g,
            Monomial {
                root,
                liou: exps.into_iter().collect(),
            },
        )
    }

    fn enclose(&self, bits: u32) -> Enclosure {
        let mut acc = if self.root.is_one() {
            Enclosure::point(Dyadic::one())
        } else {
            int_root(&self.root, 2, bits)
        };
        for &(b, e) in &self.liou {
            acc = acc.mul(&liouville_enclosure(b, bits).pow(e));
        }
        acc
    }
}

/// An exact real number (see module docs).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Sym {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Sym {
    pub fn zero() -> Self {
        Sym::default()
    }

    pub fn one() -> Self {
        Sym::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Sym::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut s = Sym::zero();
        s.push(Monomial::unit(), r);
        s
    }

    /// `k * sqrt(d)` for a positive `d`; square factors are extracted.
    pub fn sqrt(d: &BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::InvalidInput(format!("sqrt of negative {d}")));
        }
        let (k, r) = squarefree_split(d)?;
        let mut s = Sym::zero();
        s.push(
            Monomial {
                root: r,
                liou: Vec::new(),
            },
            BigRational::from_integer(k),
        );
        Ok(s)
    }

    /// `sum_{k>=1} base^(-k!)`.
    pub fn liouville(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::LiouvilleBase(base.to_string()));
        }
        let mut s = Sym::zero();
        s.push(
            Monomial {
                root: BigInt::one(),
                liou: vec![(base, 1)],
            },
            BigRational::one(),
        );
        Ok(s)
    }

    fn push(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value, when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Number of distinct Liouville bases mentioned.
    fn liouville_bases(&self) -> usize {
        let mut bases: Vec<u64> = self.terms.keys().flat_map(|m| m.liou.iter().map(|&(b, _)| b)).collect();
        bases.sort_unstable();
        bases.dedup();
        bases.len()
    }

    /// `true` when zero-testing is exact for this value; see module docs.
    pub fn zero_test_is_exact(&self) -> bool {
        self.liouville_bases() <= 1
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Sym::zero();
        }
        Sym {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Sym::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclose(&self, bits: u32) -> Enclosure {
        if let Some(r) = self.as_rational() {
            return Enclosure::from_rational(&r, bits + 1);
        }
        let target = Dyadic::pow2(-(bits as i64) - 1);
        let mut work = bits + 16 + (self.terms.len() as u32).ilog2() + 1;
        loop {
            let mut acc = Enclosure::zero();
            for (m, c) in &self.terms {
                acc = acc.add(&m.enclose(work).mul_rational(c, work + 4));
            }
            let w = acc.width();
            if w <= target {
                return acc.round_outward(bits + 2);
            }
            let excess = (w.magnitude_bits() - target.magnitude_bits()).max(1) as u32;
            work += excess + 8;
        }
    }

    /// Certified sign, refining up to `cap_bits`.
    pub fn sign(&self, cap_bits: u32) -> Result<Ordering> {
        if let Some(r) = self.as_rational() {
            return Ok(r.cmp(&BigRational::zero()));
        }
        let mut bits = 48;
        loop {
            let e = self.enclose(bits);
            if e.lo().is_positive() {
                return Ok(Ordering::Greater);
            }
            if e.hi().is_negative() {
                return Ok(Ordering::Less);
            }
            if bits >= cap_bits {
                return Err(Error::cap(cap_bits, "determining a sign"));
            }
            bits = (bits * 2).min(cap_bits);
        }
    }

    /// Certified comparison `self` vs `other`.
    pub fn cmp_certified(&self, other: &Sym, cap_bits: u32) -> Result<Ordering> {
        (self - other).sign(cap_bits)
    }

    pub fn floor(&self, cap_bits: u32) -> Result<BigInt> {
        if let Some(r) = self.as_rational() {
            return Ok(r.floor().to_integer());
        }
        let mut f = self.enclose(32).lo().floor();
        while (self - &Sym::from_int(f.clone())).sign(cap_bits)? == Ordering::Less {
            f -= 1;
        }
        while (self - &Sym::from_int(&f + 1)).sign(cap_bits)? != Ordering::Less {
            f += 1;
        }
        Ok(f)
    }

    /// `|self|`, exactly.
    pub fn abs(&self, cap_bits: u32) -> Result<Sym> {
        Ok(match self.sign(cap_bits)? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    /// `min_k |self - k|`, exactly.
    pub fn dist_nearest_int(&self, cap_bits: u32) -> Result<Sym> {
        let half = Sym::from_rational(BigRational::new(1.into(), 2.into()));
        let k = (self + &half).floor(cap_bits)?;
        (self - &Sym::from_int(k)).abs(cap_bits)
    }

    /// Larger of two values (ties return `self`).
    pub fn max_certified(&self, other: &Sym, cap_bits: u32) -> Result<Sym> {
        Ok(match self.cmp_certified(other, cap_bits)? {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        })
    }
}

impl Add for &Sym {
    type Output = Sym;
    fn add(self, rhs: &Sym) -> Sym {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Sym {
    type Output = Sym;
    fn sub(self, rhs: &Sym) -> Sym {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Sym {
    type Output = Sym;
    fn mul(self, rhs: &Sym) -> Sym {
        let mut out = Sym::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let (g, m) = ma.mul(mb);
                out.push(m, ca * cb * BigRational::from_integer(g));
            }
        }
        out
    }
}

impl Neg for &Sym {
    type Output = Sym;
    fn neg(self) -> Sym {
        self.scale(&-BigRational::one())
    }
}

/// Splits `d = k^2 * r` with `r` squarefree. Requires `0 < d <= 10^18`.
fn squarefree_split(d: &BigInt) -> Result<(BigInt, BigInt)> {
    let mut rem = d
        .to_u64()
        .filter(|&v| v > 0 && v <= 1_000_000_000_000_000_000)
        .ok_or_else(|| Error::InvalidInput(format!("sqrt argument {d} outside 1..=10^18")))?;
    let (mut k, mut r) = (1u64, 1u64);
    let mut p = 2u64;
    while p <= 1_000_000 && p * p <= rem {
        if rem % p == 0 {
            let mut e = 0;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                r *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // every prime factor left in `rem` exceeds 10^6 and rem <= 10^18
    if rem > 1 {
        let s = rem.isqrt();
        if s * s == rem {
            k *= s;
        } else {
            r *= rem;
        }
    }
    Ok((BigInt::from(k), BigInt::from(r)))
}

/// Enclosure `[f, f+1] * 2^-bits` with `f = floor(L * 2^bits)` for
/// `L = liouville(base)`.
pub(crate) fn liouville_enclosure(base: u64, bits: u32) -> Enclosure {
    let b = BigInt::from(base);
    let scale = BigInt::one() << (bits as usize);
    let mut sum = BigRational::zero();
    let mut fact: usize = 1;
    let mut k: usize = 1;
    loop {
        fact *= k;
        sum += BigRational::new(BigInt::one(), num_traits::pow(b.clone(), fact));
        let next_fact = fact * (k + 1);
        // tail < 2 * base^-(k+1)!; skip the exact check until it can succeed
        let tail_bits = next_fact as f64 * (base as f64).log2();
        if tail_bits > bits as f64 + 2.0 {
            let tail = BigRational::new(BigInt::from(2), num_traits::pow(b.clone(), next_fact));
            let lo = (&sum * &scale).floor().to_integer();
            let hi = ((&sum + &tail) * &scale).floor().to_integer();
            if lo == hi {
                return Enclosure::new(
                    Dyadic::new(lo.clone(), -(bits as i64)),
                    Dyadic::new(lo + 1, -(bits as i64)),
                );
            }
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn squarefree_extraction() {
        assert_eq!(squarefree_split(&BigInt::from(72)).unwrap(), (6.into(), 2.into()));
        assert_eq!(squarefree_split(&BigInt::from(5)).unwrap(), (1.into(), 5.into()));
        let big = BigInt::from(1_000_003u64 * 1_000_003u64 * 3);
        assert_eq!(squarefree_split(&big).unwrap(), (1_000_003.into(), 3.into()));
    }

    #[test]
    fn roots_multiply_exactly() {
        let s2 = Sym::sqrt(&2.into()).unwrap();
        let s3 = Sym::sqrt(&3.into()).unwrap();
        let s6 = Sym::sqrt(&6.into()).unwrap();
        assert_eq!(&s2 * &s3, s6);
        assert_eq!((&s2 * &s2).as_rational(), Some(q(2, 1)));
        assert_eq!(Sym::sqrt(&8.into()).unwrap(), s2.scale_int(&2.into()));
    }

    #[test]
    fn signs_of_near_cancellations() {
        // 17/12 - sqrt(2) > 0 by about 0.00245
        let v = &Sym::from_rational(q(17, 12)) - &Sym::sqrt(&2.into()).unwrap();
        assert_eq!(v.sign(4096).unwrap(), Ordering::Greater);
        let s5 = Sym::sqrt(&5.into()).unwrap();
        let golden = (&s5 - &Sym::one()).scale(&q(1, 2));
        assert_eq!(golden.floor(4096).unwrap(), BigInt::zero());
        let d = golden.scale_int(&3.into()).dist_nearest_int(4096).unwrap();
        // 3 * 0.6180339887... = 1.8541019662..., nearest integer 2
        let e = d.enclose(40);
        assert!(e.lo().to_rational() > q(1458980337, 10_000_000_000));
        assert!(e.hi().to_rational() < q(1458980338, 10_000_000_000));
    }

    #[test]
    fn liouville_is_bracketed() {
        let e = liouville_enclosure(10, 60);
        assert!(e.width_within(60));
        // L lies in (s, s + 2 * 10^-24) with s the partial sum through 3!
        let partial = q(110001, 1_000_000);
        let tail = q(2, 1_000_000_000_000) * q(1, 1_000_000_000_000);
        assert!(e.lo().to_rational() < &partial + &tail);
        assert!(e.hi().to_rational() > partial);
    }

    #[test]
    fn identical_liouville_combinations_cancel() {
        let l = Sym::liouville(10).unwrap();
        let a = l.scale_int(&4.into());
        let b = &l.scale_int(&2.into()) + &l.scale_int(&2.into());
        assert!((&a - &b).is_zero());
        assert_eq!(a.cmp_certified(&b, 256).unwrap(), Ordering::Equal);
    }

    #[test]
    fn two_liouville_bases_hit_the_cap_only_when_equal() {
        let a = Sym::liouville(10).unwrap();
        let b = Sym::liouville(100).unwrap();
        assert_eq!(a.cmp_certified(&b, 512).unwrap(), Ordering::Greater);
        assert!(!(&a - &b).zero_test_is_exact());
    }
}
