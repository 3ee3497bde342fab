//! Windowed diagnostics: normalized profiles `t^{m/n} psi(t)` and minima of
//! the inhomogeneous product `(max_j ||L_j(x) - alpha_j||)^n (|x|_inf)^m`.
//!
//! Nothing here claims an asymptotic statement; every value is a certified
//! statement about a finite window.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::approx::best_approximations;
use crate::arith::forms::{compare_candidates, int_pow, ordered_shell, Candidate, Evaluator};
use crate::arith::{int_root, Enclosure, ExactReal, FormSystem, Sym};
use crate::error::{Error, Result};
use crate::Settings;

#[derive(Clone, Debug, Serialize)]
pub struct ProfileSample {
    pub t: u64,
    pub value: Enclosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityProfile {
    pub samples: Vec<ProfileSample>,
    pub verdict_hint: String,
}

impl RegularityProfile {
    /// `t,lo,hi` rows with exact endpoints.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,lo,hi\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{}", s.t, s.value.lo(), s.value.hi());
        }
        out
    }

    pub fn min_lo(&self) -> Option<&crate::arith::Dyadic> {
        self.samples.iter().map(|s| s.value.lo()).min()
    }
}

/// Enclosure of `t^{m/n} * psi(t)` for each sample, read off a single
/// best-approximation chain.
pub fn regularity_profile(system: &FormSystem, t_samples: &[u64], settings: &Settings) -> Result<RegularityProfile> {
    if t_samples.is_empty() || t_samples[0] == 0 {
        return Err(Error::InvalidInput("t samples must be nonempty and positive".into()));
    }
    if t_samples.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("t samples must be strictly increasing".into()));
    }
    let t_max = *t_samples.last().unwrap();
    let chain = best_approximations(system, t_max, settings)?;
    let (m, n) = (system.m(), system.n() as u32);
    let bits = settings.precision_bits;

    let mut samples = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let rec = chain.record_at(t).expect("the first record has Y = 1");
        let tm = int_pow(t, m);
        let value = if n == 1 {
            rec.zeta_exact.scale_int(&tm).enclose(bits)
        } else {
            let guard = bits + 16 + tm.bits() as u32;
            let root = int_root(&tm, n, guard);
            rec.zeta_exact.enclose(guard).mul(&root).round_outward(bits + 1)
        };
        samples.push(ProfileSample { t, value });
    }

    let half = samples.len().div_ceil(2);
    let first = samples[..half].iter().map(|s| s.value.lo()).min().cloned();
    let second = samples[half..].iter().map(|s| s.value.hi()).min().cloned();
    let verdict_hint = match (first, second) {
        (Some(a), Some(b)) if &b + &b < a => "decaying over window",
        _ => "bounded-below over window",
    }
    .to_string();
    Ok(RegularityProfile { samples, verdict_hint })
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordLow {
    #[serde(rename = "X")]
    pub sup: u64,
    pub value: Enclosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductEstimate {
    pub window: (u64, u64),
    pub min_value: Enclosure,
    pub min_witness: Vec<i64>,
    pub record_lows: Vec<RecordLow>,
    #[serde(skip)]
    pub min_exact: Sym,
}

/// Minimum of the inhomogeneous product over `x_min <= |x|_inf <= x_max`.
///
/// This is an upper estimate for the liminf at target `alpha` once the
/// window is pushed right; `record_lows` lists the running minima shell by
/// shell.
pub fn product_min(
    system: &FormSystem,
    alpha: &[ExactReal],
    x_min: u64,
    x_max: u64,
    settings: &Settings,
) -> Result<ProductEstimate> {
    if x_min == 0 || x_min > x_max {
        return Err(Error::EmptyWindow(x_min, x_max));
    }
    let m = system.m();
    let n = system.n() as u32;
    let outer = (2 * x_max as u128 + 1).saturating_pow(m as u32);
    let inner = (2 * x_min as u128 - 1).saturating_pow(m as u32);
    settings.check_budget(outer - inner)?;
    let ev = Evaluator::new(system, alpha, settings)?;
    let cap = settings.cap_bits;
    let value = |x: &[i64]| -> Result<Sym> {
        let s = crate::arith::forms::sup_norm(x);
        Ok(ev.exact(x)?.pow(n).scale_int(&int_pow(s, m)))
    };

    let mut best: Option<Candidate> = None;
    let mut record_lows: Vec<RecordLow> = Vec::new();
    for s in x_min..=x_max {
        let weight = int_pow(s, m);
        let mut improved = false;
        for x in ordered_shell(m, s, ev.is_homogeneous()) {
            let approx = ev.approx(&x).map(|e| e.pow(n).mul_int(&weight));
            let mut c = Candidate { x, approx, exact: None };
            let better = match best.as_mut() {
                None => true,
                Some(b) => compare_candidates(&mut c, b, cap, value)? == Ordering::Less,
            };
            if better {
                best = Some(c);
                improved = true;
            }
        }
        if improved {
            let b = best.as_mut().unwrap();
            let v = b.exact_value(value)?.enclose(settings.precision_bits);
            record_lows.push(RecordLow { sup: s, value: v });
            if b.exact.as_ref().is_some_and(Sym::is_zero) {
                break;
            }
        }
    }
    let mut best = best.expect("window is nonempty");
    let exact = best.exact_value(value)?.clone();
    Ok(ProductEstimate {
        window: (x_min, x_max),
        min_value: exact.enclose(settings.precision_bits),
        min_witness: best.x,
        record_lows,
        min_exact: exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn golden() -> FormSystem {
        FormSystem::scalar("(sqrt(5)-1)/2").unwrap()
    }

    #[test]
    fn golden_profile_is_bounded_below() {
        let s = Settings::default();
        let ts: Vec<u64> = (2..=100).collect();
        let p = regularity_profile(&golden(), &ts, &s).unwrap();
        assert_eq!(p.samples.len(), 99);
        assert!(p.min_lo().unwrap().to_rational() >= q(38, 100));
        assert_eq!(p.verdict_hint, "bounded-below over window");
        assert!(p.to_csv().starts_with("t,lo,hi\n2,"));
    }

    #[test]
    fn rational_profile_hits_zero() {
        let s = Settings::default();
        let p = regularity_profile(&FormSystem::scalar("1/2").unwrap(), &[2], &s).unwrap();
        assert_eq!(p.samples[0].value, Enclosure::zero());
    }

    #[test]
    fn profile_rejects_unsorted_samples() {
        let s = Settings::default();
        assert!(regularity_profile(&golden(), &[5, 3], &s).is_err());
        assert!(regularity_profile(&golden(), &[], &s).is_err());
    }

    #[test]
    fn product_examples() {
        let s = Settings::default();
        let zero = [ExactReal::zero()];
        let p = product_min(&golden(), &zero, 1, 100, &s).unwrap();
        assert_eq!(p.min_witness, vec![1]);
        assert!(p.min_value.lo().to_rational() > q(38196, 100_000));
        assert!(p.min_value.hi().to_rational() < q(38197, 100_000));

        let half = [ExactReal::parse("1/2").unwrap()];
        let p = product_min(&golden(), &half, 1, 1, &s).unwrap();
        assert_eq!(p.min_witness, vec![1]);
        assert!(p.min_value.lo().to_rational() > q(11803, 100_000));
        assert!(p.min_value.hi().to_rational() < q(11804, 100_000));

        let p = product_min(&FormSystem::scalar("1/2").unwrap(), &zero, 2, 2, &s).unwrap();
        assert_eq!(p.min_value, Enclosure::zero());
        assert_eq!(p.min_witness, vec![2]);

        assert!(matches!(
            product_min(&golden(), &zero, 5, 4, &s),
            Err(Error::EmptyWindow(5, 4))
        ));
    }

    #[test]
    fn record_lows_do_not_increase() {
        let s = Settings::default();
        let alpha = [ExactReal::parse("sqrt(2)-1").unwrap()];
        let p = product_min(&golden(), &alpha, 1, 300, &s).unwrap();
        assert!(p.record_lows.windows(2).all(|w| w[1].value.hi() <= w[0].value.lo()));
        assert_eq!(p.record_lows.last().unwrap().value, p.min_value);
    }
}
