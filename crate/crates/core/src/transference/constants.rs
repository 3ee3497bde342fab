use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::rational_string;
use crate::error::{Error, Result};

fn ser_q<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

/// Exact constants of the transference argument for `n` forms in `m`
/// variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferenceConstants {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    #[serde(serialize_with = "ser_q")]
    pub r0: BigRational,
    /// `max over 0<r<1 of r^n (1-r)^m`.
    #[serde(rename = "R", serialize_with = "ser_q")]
    pub big_r: BigRational,
    /// Normalized central section volume of the cube.
    #[serde(rename = "K", serialize_with = "ser_q")]
    pub k: BigRational,
    #[serde(serialize_with = "ser_q")]
    pub epsilon: BigRational,
    #[serde(rename = "G", serialize_with = "ser_q")]
    pub g: BigRational,
}

pub(crate) fn qpow(q: &BigRational, k: usize) -> BigRational {
    num_traits::pow(q.clone(), k)
}

fn qint(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `m^m n^n`.
pub(crate) fn mm_nn(m: usize, n: usize) -> BigRational {
    qpow(&qint(m), m) * qpow(&qint(n), n)
}

/// `vol_{d-1}([-1,1]^d ∩ {z_1 + ... + z_d = 0}) / (2^{d-1} sqrt(d))`, which is
/// the density at 0 of a sum of `d` uniforms on `[-1/2, 1/2]`.
pub fn cube_section_constant(d: usize) -> BigRational {
    assert!(d >= 2, "section constant needs d >= 2");
    let half_d = BigRational::new(BigInt::from(d), BigInt::from(2));
    let mut sum = BigRational::zero();
    for k in 0..=d / 2 {
        let term = qint(binomial(BigInt::from(d), BigInt::from(k))) * qpow(&(&half_d - qint(k)), d - 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let fact: BigInt = (1..d).map(BigInt::from).product();
    sum / qint(fact)
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("m and n must be at least 1".into()));
    }
    Ok(())
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || eps > &BigRational::new(1.into(), 2.into()) {
        return Err(Error::InvalidInput(format!(
            "epsilon must lie in (0, 1/2], got {}",
            rational_string(eps)
        )));
    }
    Ok(())
}

pub fn constants(m: usize, n: usize, eps: &BigRational) -> Result<TransferenceConstants> {
    check_dims(m, n)?;
    check_eps(eps)?;
    let d = m + n;
    let r0 = BigRational::new(BigInt::from(n), BigInt::from(d));
    let big_r = mm_nn(m, n) / qpow(&qint(d), d);
    let k = cube_section_constant(d);
    let e = d * (d - 1);
    let g = qpow(&qint(d), d) * qpow(&mm_nn(m, n), e) / qpow(&(qpow(eps, d) * &k * &big_r), e);
    Ok(TransferenceConstants {
        m,
        n,
        d,
        r0,
        big_r,
        k,
        epsilon: eps.clone(),
        g,
    })
}

/// `eps^d R / (m^m n^n delta)`.
pub fn omega(m: usize, n: usize, eps: &BigRational, delta: &BigRational) -> Result<BigRational> {
    check_dims(m, n)?;
    if !eps.is_positive() || !delta.is_positive() {
        return Err(Error::InvalidInput("epsilon and delta must be positive".into()));
    }
    let d = m + n;
    let big_r = mm_nn(m, n) / qpow(&qint(d), d);
    Ok(qpow(eps, d) * big_r / (mm_nn(m, n) * delta))
}

/// `d / (K^d omega^{d-1})`, the dilation taking the dual box to one that
/// covers a fundamental domain.
pub fn cover_scale(k: &BigRational, omega: &BigRational, d: usize) -> BigRational {
    qint(d) / (qpow(k, d) * qpow(omega, d - 1))
}

/// `G delta^{d(d-1)}`.
pub fn product_bound(c: &TransferenceConstants, delta: &BigRational) -> BigRational {
    &c.g * qpow(delta, c.d * (c.d - 1))
}
