use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use super::constants::{constants, cover_scale, omega, product_bound, qpow};
use super::minima::Parallelepiped;
use crate::approx::BestApproxChain;
use crate::arith::forms::{int_pow, ordered_shell, sup_norm, Evaluator};
use crate::arith::{rational_string, Enclosure, ExactReal, FormSystem, Sym};
use crate::error::{Error, Result};
use crate::eta::eta_margin;
use crate::spectrum::product_min;
use crate::Settings;

fn ser_q<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

/// The 1-based index `nu` with `(R0 Y_nu)^{n/m} <= X < (R0 Y_{nu+1})^{n/m}`,
/// where `R0 = n delta^{1/n} / (eps r0)`.
///
/// Raising both sides to the power `m n` turns the bracket into the exact
/// rational test `n^n delta Y^n / (eps r0)^n <= X^m`.
pub fn choose_nu(
    chain: &BestApproxChain,
    x: u64,
    eps: &BigRational,
    delta: &BigRational,
    n_forms: usize,
    m_vars: usize,
) -> Result<usize> {
    if chain.records.is_empty() {
        return Err(Error::InvalidInput("chain has no records".into()));
    }
    if !eps.is_positive() || !delta.is_positive() {
        return Err(Error::InvalidInput("epsilon and delta must be positive".into()));
    }
    let (m, n) = (m_vars, n_forms);
    let r0 = BigRational::new(BigInt::from(n), BigInt::from(m + n));
    let bracket_scale = qpow(&BigRational::from_integer(n.into()), n) * delta / qpow(&(eps * &r0), n);
    let target = BigRational::from_integer(int_pow(x, m));
    let below = |y: u64| &bracket_scale * BigRational::from_integer(int_pow(y, n)) <= target;
    let count = chain.records.partition_point(|r| below(r.sup));
    if count == 0 {
        return Err(Error::BelowFirstBracket { x });
    }
    if count == chain.records.len() {
        return Err(if chain.exhausted {
            Error::ChainExhausted
        } else {
            Error::ChainTooShort { x }
        });
    }
    Ok(count)
}

#[derive(Clone, Debug, Serialize)]
pub struct InhomSolution {
    pub x: Vec<i64>,
    pub residual: Enclosure,
    pub box_bound: u64,
    pub product: Enclosure,
    pub nu_used: usize,
    /// Dilation factor `d / (K^d omega^{d-1})`.
    #[serde(serialize_with = "ser_q")]
    pub scale: BigRational,
    #[serde(rename = "A")]
    pub a: Enclosure,
    #[serde(rename = "B")]
    pub b: Enclosure,
    /// `scale * A`, the bound on `|x|_inf`.
    pub x_limit: Enclosure,
    /// `scale * B`, the bound on the residual.
    pub residual_limit: Enclosure,
    /// `G delta^{d(d-1)}`.
    #[serde(serialize_with = "ser_q")]
    pub product_limit: BigRational,
    /// All three bounds hold exactly.
    pub bounds_hold: bool,
    #[serde(skip)]
    pub residual_exact: Sym,
    #[serde(skip)]
    pub product_exact: Sym,
    #[serde(skip)]
    pub residual_limit_exact: Sym,
    #[serde(skip)]
    pub x_limit_exact: Sym,
}

fn check_dual(system: &FormSystem, chain_t: &BestApproxChain) -> Result<()> {
    if chain_t.system.m() != system.n() || chain_t.system.n() != system.m() {
        return Err(Error::InvalidInput("chain must belong to the transposed system".into()));
    }
    if chain_t.exhausted {
        return Err(Error::ChainExhausted);
    }
    Ok(())
}

/// Finds `x` in `Z^m` with `|x| <= sA` and `max_j ||L_j(x) - alpha_j|| <= sB`,
/// following the dilated dual box of the record pair selected by
/// `choose_nu` at `X = x_target`.
///
/// The search visits `x` by sup-norm shell, sign-normalized vectors first,
/// then lexicographically.
pub fn solve_inhom(
    system: &FormSystem,
    chain_t: &BestApproxChain,
    eps: &BigRational,
    delta: &BigRational,
    alpha: &[ExactReal],
    x_target: u64,
    settings: &Settings,
) -> Result<InhomSolution> {
    check_dual(system, chain_t)?;
    let (m, n) = (system.m(), system.n());
    let d = m + n;
    let consts = constants(m, n, eps)?;
    let nu = match choose_nu(chain_t, x_target, eps, delta, n, m) {
        Ok(nu) => nu,
        Err(Error::ChainTooShort { x }) => {
            return Err(Error::NoPointFound(format!(
                "the chain ends before bracketing X = {x}; delta or epsilon is off, or T_max is too small"
            )))
        }
        Err(e) => return Err(e),
    };
    let w = omega(m, n, eps, delta)?;
    let s = cover_scale(&consts.k, &w, d);
    let (zeta, y_next) = (&chain_t.records[nu - 1].zeta_exact, chain_t.records[nu].sup);
    let dual = Parallelepiped::dual_of_records(system, &consts.k, y_next, zeta);
    let cover = dual.scaled(&s);
    let cap = settings.cap_bits;
    let bits = settings.precision_bits;

    let x_max = cover.a.floor(cap)?;
    if x_max < BigInt::from(1) {
        return Err(Error::NoPointFound(format!(
            "the dilated box admits no nonzero x (sA = {})",
            cover.a.enclose(32)
        )));
    }
    let x_max = x_max
        .to_u64()
        .filter(|&v| v < i64::MAX as u64 / 4)
        .ok_or_else(|| Error::BudgetExceeded {
            needed: "sA beyond 64-bit range".into(),
            budget: settings.budget,
        })?;
    settings.check_budget((x_max as u128).saturating_pow(m as u32))?;

    let ev = Evaluator::new(system, alpha, settings)?;
    let limit_enc = cover.b.enclose(80);
    let mut found = None;
    'search: for t in 1..=x_max {
        for x in ordered_shell(m, t, false) {
            let inside = match ev.approx(&x) {
                Some(e) if e.hi() <= limit_enc.lo() => true,
                Some(e) if e.lo() > limit_enc.hi() => false,
                _ => ev.exact(&x)?.cmp_certified(&cover.b, cap)? != Ordering::Greater,
            };
            if inside {
                found = Some(x);
                break 'search;
            }
        }
    }
    let Some(x) = found else {
        return Err(Error::NoPointFound(format!(
            "no x with |x| <= {x_max} meets the residual bound; delta may lie below the true product liminf or epsilon may be overstated"
        )));
    };

    let residual = ev.exact(&x)?;
    let sup = sup_norm(&x);
    let product = residual.pow(n as u32).scale_int(&int_pow(sup, m));
    let product_limit = product_bound(&consts, delta);
    let bounds_hold = Sym::from_int(sup).cmp_certified(&cover.a, cap)? != Ordering::Greater
        && residual.cmp_certified(&cover.b, cap)? != Ordering::Greater
        && product.cmp_certified(&Sym::from_rational(product_limit.clone()), cap)? != Ordering::Greater;
    Ok(InhomSolution {
        residual: residual.enclose(bits),
        box_bound: sup,
        product: product.enclose(bits),
        nu_used: nu,
        scale: s,
        a: dual.a.enclose(bits),
        b: dual.b.enclose(bits),
        x_limit: cover.a.enclose(bits),
        residual_limit: cover.b.enclose(bits),
        product_limit,
        bounds_hold,
        residual_exact: residual,
        product_exact: product,
        residual_limit_exact: cover.b,
        x_limit_exact: cover.a,
        x,
    })
}

/// Per-target outcome of the verifier.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaCheck {
    pub alpha: Vec<String>,
    #[serde(serialize_with = "ser_q")]
    pub delta: BigRational,
    #[serde(rename = "G", serialize_with = "ser_q")]
    pub g: BigRational,
    pub product_lo: String,
    pub product_hi: String,
    #[serde(serialize_with = "ser_q")]
    pub bound: BigRational,
    /// Windowed product minimum is at most the bound.
    pub pass: bool,
    /// Minimizer of the windowed product.
    pub window_witness: Vec<i64>,
    /// Point produced by the constructive solver, when it succeeds.
    pub witness: Option<Vec<i64>>,
    pub solution: Option<InhomSolution>,
    /// Set when a precondition fails; a failed precondition is not a
    /// counterexample.
    pub precondition: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub eta: Vec<String>,
    #[serde(serialize_with = "ser_q")]
    pub epsilon: BigRational,
    pub eta_margin: Enclosure,
    #[serde(serialize_with = "ser_q")]
    pub delta: BigRational,
    #[serde(rename = "G", serialize_with = "ser_q")]
    pub g: BigRational,
    #[serde(serialize_with = "ser_q")]
    pub bound: BigRational,
    pub window: (u64, u64),
    pub x_target: u64,
    pub records_examined: usize,
    pub results: Vec<AlphaCheck>,
    pub all_pass: bool,
    /// Targets that fail the bound while every precondition holds.
    pub violations: usize,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Use this `delta` instead of the windowed product at `eta`.
    pub delta_override: Option<BigRational>,
    /// Bracketing target for the solver; defaults to the right end of the
    /// window.
    pub x_target: Option<u64>,
}

/// Checks the product bound `G delta^{d(d-1)}` on sampled targets, with
/// `delta` read off the windowed product at `eta`, and runs the
/// constructive solver on each target.
#[allow(clippy::too_many_arguments)]
pub fn verify_theorem1(
    system: &FormSystem,
    chain_t: &BestApproxChain,
    eta: &[ExactReal],
    eps: &BigRational,
    alpha_samples: &[Vec<ExactReal>],
    window: (u64, u64),
    options: &VerifyOptions,
    settings: &Settings,
) -> Result<Theorem1Report> {
    check_dual(system, chain_t)?;
    let (m, n) = (system.m(), system.n());
    let consts = constants(m, n, eps)?;
    let margin = eta_margin(eta, chain_t, settings)?;
    let margin_ok = margin
        .exact
        .cmp_certified(&Sym::from_rational(eps.clone()), settings.cap_bits)?
        != Ordering::Less;

    let delta = match &options.delta_override {
        Some(dl) => dl.clone(),
        None => product_min(system, eta, window.0, window.1, settings)?
            .min_value
            .hi()
            .to_rational(),
    };
    if !delta.is_positive() {
        return Err(Error::InvalidInput(
            "windowed product at eta is zero; delta must be positive".into(),
        ));
    }
    let bound = product_bound(&consts, &delta);
    let x_target = options.x_target.unwrap_or(window.1);

    let mut results = Vec::with_capacity(alpha_samples.len());
    for alpha in alpha_samples {
        let est = product_min(system, alpha, window.0, window.1, settings)?;
        let pass = est.min_value.lo().to_rational() <= bound;
        let (solution, mut precondition) = match solve_inhom(system, chain_t, eps, &delta, alpha, x_target, settings) {
            Ok(sol) => (Some(sol), None),
            Err(e @ (Error::NoPointFound(_) | Error::BelowFirstBracket { .. })) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        if !margin_ok {
            precondition.get_or_insert_with(|| "epsilon exceeds the certified eta margin".into());
        }
        results.push(AlphaCheck {
            alpha: alpha.iter().map(|a| a.source().to_string()).collect(),
            delta: delta.clone(),
            g: consts.g.clone(),
            product_lo: est.min_value.lo().to_string(),
            product_hi: est.min_value.hi().to_string(),
            bound: bound.clone(),
            pass,
            window_witness: est.min_witness,
            witness: solution.as_ref().map(|s| s.x.clone()),
            solution,
            precondition,
        });
    }
    let violations = results.iter().filter(|r| !r.pass && r.precondition.is_none()).count();
    Ok(Theorem1Report {
        eta: eta.iter().map(|e| e.source().to_string()).collect(),
        epsilon: eps.clone(),
        eta_margin: margin.value,
        delta,
        g: consts.g.clone(),
        bound,
        window,
        x_target,
        records_examined: chain_t.records.len(),
        all_pass: results.iter().all(|r| r.pass),
        violations,
        results,
    })
}
