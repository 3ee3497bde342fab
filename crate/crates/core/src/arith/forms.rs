use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{Dyadic, Enclosure, ExactReal, Sym};
use crate::error::{Error, Result};
use crate::Settings;

/// `n` linear forms in `m` integer variables: `L_j(x) = sum_i theta[j][i] x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSystem {
    m: usize,
    n: usize,
    entries: Vec<Vec<ExactReal>>,
}

/// On-disk matrix description; row `j` holds the coefficients of form `j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl FormSystem {
    pub fn new(m: usize, n: usize, entries: Vec<Vec<ExactReal>>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("m and n must be positive".into()));
        }
        if entries.len() != n || entries.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidInput(format!("expected {n} rows of {m} entries")));
        }
        Ok(FormSystem { m, n, entries })
    }

    /// Builds a system from entry strings, `rows[j][i]`.
    pub fn parse(m: usize, n: usize, rows: &[Vec<&str>]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|s| ExactReal::parse(s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        FormSystem::new(m, n, entries)
    }

    /// One form in one variable.
    pub fn scalar(theta: &str) -> Result<Self> {
        FormSystem::parse(1, 1, &[vec![theta]])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("matrix file: {e}")))?;
        file.try_into()
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            m: self.m,
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.source().to_string()).collect())
                .collect(),
        }
    }

    /// Number of variables.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of forms.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.m + self.n
    }

    pub fn entry(&self, form: usize, var: usize) -> &ExactReal {
        &self.entries[form][var]
    }

    /// The system of the transposed matrix: `m` forms in `n` variables.
    pub fn transposed(&self) -> FormSystem {
        let entries = (0..self.m)
            .map(|i| (0..self.n).map(|j| self.entries[j][i].clone()).collect())
            .collect();
        FormSystem {
            m: self.n,
            n: self.m,
            entries,
        }
    }

    /// `L_j(x)` exactly.
    pub fn form_value(&self, form: usize, x: &[i64]) -> Sym {
        let mut acc = Sym::zero();
        for (theta, &xi) in self.entries[form].iter().zip(x) {
            if xi != 0 {
                acc = &acc + &theta.value().scale_int(&BigInt::from(xi));
            }
        }
        acc
    }
}

impl TryFrom<MatrixFile> for FormSystem {
    type Error = Error;
    fn try_from(file: MatrixFile) -> Result<Self> {
        let rows: Vec<Vec<&str>> = file
            .entries
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        FormSystem::parse(file.m, file.n, &rows)
    }
}

/// Per-form residuals `||L_j(x) - alpha_j||` and their maximum.
#[derive(Clone, Debug)]
pub struct Residuals {
    pub values: Vec<Enclosure>,
    pub max: Enclosure,
    pub exact: Vec<Sym>,
    pub max_exact: Sym,
}

pub fn eval_residuals(system: &FormSystem, x: &[i64], alpha: &[ExactReal], settings: &Settings) -> Result<Residuals> {
    let eval = Evaluator::new(system, alpha, settings)?;
    let exact = eval.exact_per_form(x)?;
    let mut max_exact = exact[0].clone();
    for r in &exact[1..] {
        max_exact = max_exact.max_certified(r, settings.cap_bits)?;
    }
    let bits = settings.precision_bits;
    Ok(Residuals {
        values: exact.iter().map(|s| s.enclose(bits)).collect(),
        max: max_exact.enclose(bits),
        exact,
        max_exact,
    })
}

/// `||x||` for a single real.
pub fn dist_nearest_int(x: &ExactReal, settings: &Settings) -> Result<Enclosure> {
    Ok(x.value()
        .dist_nearest_int(settings.cap_bits)?
        .enclose(settings.precision_bits))
}

const FRAC: u32 = 64;
const ONE: i128 = 1 << FRAC;
const HALF: i128 = 1 << (FRAC - 1);
const MAX_FAST_ENTRY: i128 = 1 << (24 + FRAC);
const MAX_FAST_COORD: i64 = 1 << 31;

#[derive(Clone, Debug)]
struct FastRow {
    lo: Vec<i128>,
    hi: Vec<i128>,
    alpha_lo: i128,
    alpha_hi: i128,
}

/// Evaluates max-residuals of candidate integer vectors against a fixed
/// system and target, with a cheap fixed-point filter in front of the exact
/// route.
#[derive(Clone, Debug)]
pub struct Evaluator<'a> {
    system: &'a FormSystem,
    alpha: Vec<Sym>,
    alpha_is_zero: bool,
    fast: Option<Vec<FastRow>>,
    cap_bits: u32,
}

fn fixed_bounds(v: &Sym) -> Option<(i128, i128)> {
    let e = v.enclose(FRAC + 2);
    let scale = Dyadic::pow2(FRAC as i64);
    let lo = (e.lo() * &scale).floor().to_i128()?;
    let hi = (e.hi() * &scale).ceil().to_i128()?;
    (lo.abs() < MAX_FAST_ENTRY && hi.abs() < MAX_FAST_ENTRY).then_some((lo, hi))
}

fn dist_fixed(lo: i128, hi: i128) -> (i128, i128) {
    let d = |v: i128| {
        let r = v.rem_euclid(ONE);
        r.min(ONE - r)
    };
    let ceil_div = |v: i128| -((-v).div_euclid(ONE));
    let contains_int = ceil_div(lo) <= hi.div_euclid(ONE);
    let contains_half = ceil_div(lo - HALF) <= (hi - HALF).div_euclid(ONE);
    let (a, b) = (d(lo), d(hi));
    (
        if contains_int { 0 } else { a.min(b) },
        if contains_half { HALF } else { a.max(b) },
    )
}

impl<'a> Evaluator<'a> {
    pub fn new(system: &'a FormSystem, alpha: &[ExactReal], settings: &Settings) -> Result<Self> {
        if alpha.len() != system.n() {
            return Err(Error::InvalidInput(format!(
                "target has length {}, system has {} forms",
                alpha.len(),
                system.n()
            )));
        }
        let alpha: Vec<Sym> = alpha.iter().map(|a| a.value().clone()).collect();
        let fast = (0..system.n())
            .map(|j| {
                let mut lo = Vec::with_capacity(system.m());
                let mut hi = Vec::with_capacity(system.m());
                for i in 0..system.m() {
                    let (l, h) = fixed_bounds(system.entry(j, i).value())?;
                    lo.push(l);
                    hi.push(h);
                }
                let (alpha_lo, alpha_hi) = fixed_bounds(&alpha[j])?;
                Some(FastRow {
                    lo,
                    hi,
                    alpha_lo,
                    alpha_hi,
                })
            })
            .collect::<Option<Vec<_>>>();
        Ok(Evaluator {
            system,
            alpha_is_zero: alpha.iter().all(Sym::is_zero),
            alpha,
            fast,
            cap_bits: settings.cap_bits,
        })
    }

    pub fn system(&self) -> &FormSystem {
        self.system
    }

    /// Whether the residual is invariant under `x -> -x`.
    pub fn is_homogeneous(&self) -> bool {
        self.alpha_is_zero
    }

    /// Fixed-point bounds on the max-residual, in units of `2^-64`.
    fn fast_bounds(&self, x: &[i64]) -> Option<(i128, i128)> {
        let rows = self.fast.as_ref()?;
        if x.iter().any(|v| v.abs() >= MAX_FAST_COORD) {
            return None;
        }
        let (mut best_lo, mut best_hi) = (0i128, 0i128);
        for row in rows {
            let (mut lo, mut hi) = (-row.alpha_hi, -row.alpha_lo);
            for ((&l, &h), &xi) in row.lo.iter().zip(&row.hi).zip(x) {
                let xi = xi as i128;
                if xi >= 0 {
                    lo += l * xi;
                    hi += h * xi;
                } else {
                    lo += h * xi;
                    hi += l * xi;
                }
            }
            let (dl, dh) = dist_fixed(lo, hi);
            best_lo = best_lo.max(dl);
            best_hi = best_hi.max(dh);
        }
        Some((best_lo, best_hi))
    }

    /// Cheap enclosure of the max-residual, when available.
    pub fn approx(&self, x: &[i64]) -> Option<Enclosure> {
        self.fast_bounds(x).map(|(lo, hi)| {
            Enclosure::new(
                Dyadic::new(lo.into(), -(FRAC as i64)),
                Dyadic::new(hi.into(), -(FRAC as i64)),
            )
        })
    }

    pub fn exact_per_form(&self, x: &[i64]) -> Result<Vec<Sym>> {
        if x.len() != self.system.m() {
            return Err(Error::InvalidInput(format!(
                "vector has length {}, system has {} variables",
                x.len(),
                self.system.m()
            )));
        }
        (0..self.system.n())
            .map(|j| (&self.system.form_value(j, x) - &self.alpha[j]).dist_nearest_int(self.cap_bits))
            .collect()
    }

    /// Exact max-residual.
    pub fn exact(&self, x: &[i64]) -> Result<Sym> {
        let per = self.exact_per_form(x)?;
        let mut best = per[0].clone();
        for r in &per[1..] {
            best = best.max_certified(r, self.cap_bits)?;
        }
        Ok(best)
    }

    pub fn candidate(&self, x: Vec<i64>) -> Candidate {
        let approx = self.approx(&x);
        Candidate { x, approx, exact: None }
    }
}

/// An integer vector with a lazily computed exact value and an optional
/// cheap enclosure of that value.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub x: Vec<i64>,
    pub approx: Option<Enclosure>,
    pub exact: Option<Sym>,
}

impl Candidate {
    pub fn sup_norm(&self) -> u64 {
        sup_norm(&self.x)
    }
}

pub fn sup_norm(x: &[i64]) -> u64 {
    x.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
}

/// First nonzero coordinate positive.
pub fn is_sign_normalized(x: &[i64]) -> bool {
    x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

/// Compares the values of two candidates, refining to exact values only
/// when the cheap enclosures do not separate them. `value` computes the
/// exact value of a vector.
pub fn compare_candidates<F>(a: &mut Candidate, b: &mut Candidate, cap_bits: u32, value: F) -> Result<Ordering>
where
    F: Fn(&[i64]) -> Result<Sym>,
{
    if let (Some(ea), Some(eb)) = (&a.approx, &b.approx) {
        if ea.certainly_lt(eb) {
            return Ok(Ordering::Less);
        }
        if eb.certainly_lt(ea) {
            return Ok(Ordering::Greater);
        }
    }
    if a.exact.is_none() {
        a.exact = Some(value(&a.x)?);
    }
    if b.exact.is_none() {
        b.exact = Some(value(&b.x)?);
    }
    let (va, vb) = (a.exact.as_ref().unwrap(), b.exact.as_ref().unwrap());
    va.cmp_certified(vb, cap_bits).map_err(|e| match e {
        Error::PrecisionCap { cap_bits, context, .. } => Error::PrecisionCap {
            cap_bits,
            context: format!("{context} (separating two candidate minima)"),
            witnesses: Some((a.x.clone(), b.x.clone())),
        },
        other => other,
    })
}

impl Candidate {
    pub fn exact_value<F>(&mut self, value: F) -> Result<&Sym>
    where
        F: Fn(&[i64]) -> Result<Sym>,
    {
        if self.exact.is_none() {
            self.exact = Some(value(&self.x)?);
        }
        Ok(self.exact.as_ref().unwrap())
    }
}

/// Vectors of `Z^dim` with sup-norm exactly `t`, in lexicographic order.
pub fn shell(dim: usize, t: u64) -> Vec<Vec<i64>> {
    let t = t as i64;
    let mut out = Vec::new();
    let mut cur = vec![0i64; dim];
    fn rec(pos: usize, hit: bool, t: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let dim = cur.len();
        if pos == dim {
            if hit {
                out.push(cur.clone());
            }
            return;
        }
        if pos == dim - 1 && !hit {
            for v in [-t, t] {
                cur[pos] = v;
                out.push(cur.clone());
            }
            return;
        }
        for v in -t..=t {
            cur[pos] = v;
            rec(pos + 1, hit || v.abs() == t, t, cur, out);
        }
    }
    if t == 0 {
        return vec![cur];
    }
    rec(0, false, t, &mut cur, &mut out);
    out
}

/// The shell of sup-norm `t` in candidate order: sign-normalized vectors
/// first, then (unless `normalized_only`) the rest, each group
/// lexicographic.
pub fn ordered_shell(dim: usize, t: u64, normalized_only: bool) -> Vec<Vec<i64>> {
    let (mut norm, rest): (Vec<_>, Vec<_>) = shell(dim, t).into_iter().partition(|x| is_sign_normalized(x));
    if !normalized_only {
        norm.extend(rest);
    }
    norm
}

/// `|x|^k` for the integer `x`.
pub fn int_pow(x: u64, k: usize) -> BigInt {
    num_traits::pow(BigInt::from(x), k)
}
