//! Best-approximation chains and the irrationality functions `psi`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::arith::forms::{compare_candidates, int_pow, ordered_shell, Candidate, Evaluator};
use crate::arith::{Enclosure, ExactReal, FormSystem, Sym};
use crate::error::{Error, Result};
use crate::Settings;

/// One best approximation: vector `y`, its sup-norm `Y`, and its
/// max-residual `zeta`.
#[derive(Clone, Debug, Serialize)]
pub struct BestApproxRecord {
    pub y: Vec<i64>,
    #[serde(rename = "Y")]
    pub sup: u64,
    pub zeta: Enclosure,
    #[serde(skip)]
    pub zeta_exact: Sym,
}

#[derive(Clone, Debug)]
pub struct BestApproxChain {
    pub system: FormSystem,
    pub records: Vec<BestApproxRecord>,
    pub t_max: u64,
    /// A zero residual was reached; the chain is finite.
    pub exhausted: bool,
}

impl BestApproxChain {
    pub fn sups(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.sup).collect()
    }

    /// Index of the last record with `Y <= t`.
    pub fn record_at(&self, t: u64) -> Option<&BestApproxRecord> {
        let idx = self.records.partition_point(|r| r.sup <= t);
        idx.checked_sub(1).map(|i| &self.records[i])
    }
}

/// `psi(t)` with the vector attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct PsiSample {
    pub t: u64,
    pub value: Enclosure,
    pub witness: Vec<i64>,
    #[serde(skip)]
    pub value_exact: Sym,
}

fn finish(c: &mut Candidate, ev: &Evaluator) -> Result<Sym> {
    Ok(c.exact_value(|x| ev.exact(x))?.clone())
}

/// `min over 0 < |x|_inf <= t of max_j ||L_j(x) - alpha_j||`.
///
/// Ties go to the smaller sup-norm, then to the sign-normalized vector,
/// then to the lexicographically smaller one. Pass the transposed system to
/// evaluate the dual function.
pub fn psi(system: &FormSystem, alpha: &[ExactReal], t: u64, settings: &Settings) -> Result<PsiSample> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    settings.check_budget((2 * t as u128 + 1).saturating_pow(system.m() as u32))?;
    let ev = Evaluator::new(system, alpha, settings)?;
    let cap = settings.cap_bits;
    let mut best: Option<Candidate> = None;
    'shells: for s in 1..=t {
        for x in ordered_shell(system.m(), s, ev.is_homogeneous()) {
            let mut c = ev.candidate(x);
            match best.as_mut() {
                None => best = Some(c),
                Some(b) => {
                    if compare_candidates(&mut c, b, cap, |x| ev.exact(x))? == Ordering::Less {
                        *b = c;
                    }
                }
            }
            let b = best.as_mut().unwrap();
            if b.approx.as_ref().is_some_and(|e| e.hi().is_zero()) {
                break 'shells;
            }
        }
    }
    let mut best = best.expect("at least one shell");
    let exact = finish(&mut best, &ev)?;
    Ok(PsiSample {
        t,
        value: exact.enclose(settings.precision_bits),
        witness: best.x,
        value_exact: exact,
    })
}

/// The strict-record vectors of `t -> psi(t)` for `t <= t_max`.
///
/// Stops at the first record with zero residual and marks the chain
/// exhausted.
pub fn best_approximations(system: &FormSystem, t_max: u64, settings: &Settings) -> Result<BestApproxChain> {
    if t_max == 0 {
        return Err(Error::InvalidInput("T_max must be at least 1".into()));
    }
    settings.check_budget((2 * t_max as u128 + 1).saturating_pow(system.m() as u32) / 2)?;
    let zeros = vec![ExactReal::zero(); system.n()];
    let ev = Evaluator::new(system, &zeros, settings)?;
    let cap = settings.cap_bits;
    let mut records = Vec::new();
    let mut current: Option<Candidate> = None;
    let mut exhausted = false;

    for t in 1..=t_max {
        let mut shell_best: Option<Candidate> = None;
        for x in ordered_shell(system.m(), t, true) {
            let mut c = ev.candidate(x);
            let bar = shell_best.as_mut().or(current.as_mut());
            match bar {
                None => shell_best = Some(c),
                Some(b) => {
                    if compare_candidates(&mut c, b, cap, |x| ev.exact(x))? == Ordering::Less {
                        shell_best = Some(c);
                    }
                }
            }
        }
        if let Some(mut rec) = shell_best {
            let zeta = finish(&mut rec, &ev)?;
            records.push(BestApproxRecord {
                y: rec.x.clone(),
                sup: t,
                zeta: zeta.enclose(settings.precision_bits),
                zeta_exact: zeta.clone(),
            });
            current = Some(rec);
            if zeta.is_zero() {
                exhausted = true;
                break;
            }
        }
    }

    Ok(BestApproxChain {
        system: system.clone(),
        records,
        t_max,
        exhausted,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiEntry {
    pub nu: usize,
    pub product: Enclosure,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiReport {
    pub entries: Vec<MinkowskiEntry>,
    pub pass: bool,
}

/// Checks `zeta_nu^p * Y_{nu+1}^q <= 1` for consecutive records, where `p`
/// is the number of forms and `q` the number of variables of the chain's
/// system.
pub fn verify_minkowski_chain(chain: &BestApproxChain, settings: &Settings) -> Result<MinkowskiReport> {
    if chain.records.len() < 2 {
        return Err(Error::InvalidInput("chain needs at least two records".into()));
    }
    let p = chain.system.n() as u32;
    let q = chain.system.m();
    let one = Sym::one();
    let mut entries = Vec::new();
    for (nu, pair) in chain.records.windows(2).enumerate() {
        let product = pair[0].zeta_exact.pow(p).scale_int(&int_pow(pair[1].sup, q));
        let pass = one.cmp_certified(&product, settings.cap_bits)? != Ordering::Less;
        entries.push(MinkowskiEntry {
            nu: nu + 1,
            product: product.enclose(settings.precision_bits),
            pass,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(MinkowskiReport { entries, pass })
}
