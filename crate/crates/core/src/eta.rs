//! Anchor vectors `eta` whose pairings with all best approximations of the
//! transposed system stay away from the integers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::BestApproxChain;
use crate::arith::{Dyadic, Enclosure, ExactReal, Sym};
use crate::error::{Error, Result};
use crate::Settings;

/// A candidate anchor with its margin over the examined records.
#[derive(Clone, Debug, Serialize)]
pub struct EtaCandidate {
    #[serde(serialize_with = "ser_reals")]
    pub eta: Vec<ExactReal>,
    pub margin: Enclosure,
    /// Number of records the margin was certified over.
    pub nu_examined: usize,
}

fn ser_reals<S: serde::Serializer>(v: &[ExactReal], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.source().to_string()))
}

#[derive(Clone, Debug)]
pub struct Margin {
    pub value: Enclosure,
    pub exact: Sym,
    /// 1-based index of the record attaining the minimum.
    pub nu: usize,
}

/// `min over records y of ||sum_j eta_j y_j||`.
pub fn eta_margin(eta: &[ExactReal], chain: &BestApproxChain, settings: &Settings) -> Result<Margin> {
    if chain.records.is_empty() {
        return Err(Error::InvalidInput("chain has no records".into()));
    }
    if eta.len() != chain.system.m() {
        return Err(Error::InvalidInput(format!(
            "eta has length {}, records have length {}",
            eta.len(),
            chain.system.m()
        )));
    }
    let cap = settings.cap_bits;
    let mut best: Option<(Sym, usize)> = None;
    for (idx, rec) in chain.records.iter().enumerate() {
        let mut v = Sym::zero();
        for (e, &y) in eta.iter().zip(&rec.y) {
            v = &v + &e.value().scale_int(&BigInt::from(y));
        }
        let d = v.dist_nearest_int(cap)?;
        let replace = match &best {
            None => true,
            Some((b, _)) => d.cmp_certified(b, cap)? == Ordering::Less,
        };
        if replace {
            best = Some((d, idx + 1));
        }
    }
    let (exact, nu) = best.expect("nonempty chain");
    Ok(Margin {
        value: exact.enclose(settings.precision_bits),
        exact,
        nu,
    })
}

/// Scans the cell centers `(k + 1/2) 2^-grid_bits` of `[0,1)^n` and
/// returns the `top_k` anchors by margin, best first (ties by grid order).
pub fn eta_search(
    chain: &BestApproxChain,
    grid_bits: u32,
    top_k: usize,
    settings: &Settings,
) -> Result<Vec<EtaCandidate>> {
    if chain.records.is_empty() {
        return Err(Error::InvalidInput("chain has no records".into()));
    }
    let n = chain.system.m();
    let total_bits = grid_bits as u64 * n as u64;
    if total_bits > 20 {
        return Err(Error::BudgetExceeded {
            needed: format!("2^{total_bits} grid points"),
            budget: 1 << 20,
        });
    }
    let points: u64 = 1 << total_bits;
    settings.check_budget(points as u128 * chain.records.len() as u128)?;

    // centers are (2k+1) / 2^(grid_bits+1); work with numerators mod 2^(grid_bits+1)
    let den_bits = grid_bits + 1;
    let den: i128 = 1 << den_bits;
    let per_axis: u64 = 1 << grid_bits;
    let records: Vec<Vec<i128>> = chain
        .records
        .iter()
        .map(|r| r.y.iter().map(|&v| v as i128).collect())
        .collect();
    let coords = |idx: u64| -> Vec<i128> {
        (0..n)
            .map(|j| {
                let k = (idx / per_axis.pow((n - 1 - j) as u32)) % per_axis;
                2 * k as i128 + 1
            })
            .collect()
    };

    let mut scored: Vec<(i128, u64)> = (0..points)
        .into_par_iter()
        .map(|idx| {
            let c = coords(idx);
            let margin = records
                .iter()
                .map(|y| {
                    let r = c.iter().zip(y).map(|(a, b)| a * b).sum::<i128>().rem_euclid(den);
                    r.min(den - r)
                })
                .min()
                .unwrap_or(0);
            (margin, idx)
        })
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    Ok(scored
        .into_iter()
        .take(top_k)
        .map(|(margin, idx)| EtaCandidate {
            eta: coords(idx)
                .into_iter()
                .map(|num| ExactReal::from_rational(BigRational::new(num.into(), den.into())))
                .collect(),
            margin: Enclosure::point(Dyadic::new(margin.into(), -(den_bits as i64))),
            nu_examined: chain.records.len(),
        })
        .collect())
}
