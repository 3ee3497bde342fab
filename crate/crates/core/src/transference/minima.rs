use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::forms::{is_sign_normalized, sup_norm};
use crate::arith::{Dyadic, Enclosure, FormSystem, Sym};
use crate::error::{Error, Result};
use crate::Settings;

/// Independent lattice vectors with their gauge values.
type Picked = Vec<(Vec<i64>, Sym)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxKind {
    /// `|y_j| <= A`, `|tL_i(y) - x_i| <= B`.
    Primal,
    /// `|x_i| <= A`, `|L_j(x) - y_j| <= B`.
    Transposed,
    /// A dilate of the transposed box.
    Scaled,
}

/// Symmetric parallelepiped in `z = (x, y)`, `x` in `R^m`, `y` in `R^n`.
///
/// One block of coordinates (the free block) is bounded by `a`; the other
/// block is bounded by `b` after subtracting the forms of the free block.
#[derive(Clone, Debug)]
pub struct Parallelepiped {
    pub kind: BoxKind,
    pub system: FormSystem,
    pub a: Sym,
    pub b: Sym,
}

impl Parallelepiped {
    pub fn primal(system: &FormSystem, y_next: u64, zeta: &Sym) -> Self {
        Parallelepiped {
            kind: BoxKind::Primal,
            system: system.clone(),
            a: Sym::from_int(y_next),
            b: zeta.clone(),
        }
    }

    pub fn transposed(system: &FormSystem, a: Sym, b: Sym) -> Self {
        Parallelepiped {
            kind: BoxKind::Transposed,
            system: system.clone(),
            a,
            b,
        }
    }

    /// The dual box of a consecutive record pair of the transposed chain:
    /// `A = K Y^n zeta^{m-1}`, `B = K Y^{n-1} zeta^m`.
    pub fn dual_of_records(system: &FormSystem, k: &BigRational, y_next: u64, zeta: &Sym) -> Self {
        let (m, n) = (system.m() as u32, system.n() as u32);
        let y = Sym::from_int(y_next);
        let a = (&y.pow(n) * &zeta.pow(m - 1)).scale(k);
        let b = (&y.pow(n - 1) * &zeta.pow(m)).scale(k);
        Parallelepiped::transposed(system, a, b)
    }

    pub fn scaled(&self, s: &BigRational) -> Self {
        Parallelepiped {
            kind: BoxKind::Scaled,
            system: self.system.clone(),
            a: self.a.scale(s),
            b: self.b.scale(s),
        }
    }

    /// The system whose variables form the free block.
    fn free_system(&self) -> FormSystem {
        match self.kind {
            BoxKind::Primal => self.system.transposed(),
            _ => self.system.clone(),
        }
    }

    /// Block sizes `(free, residual)`.
    pub fn blocks(&self) -> (usize, usize) {
        match self.kind {
            BoxKind::Primal => (self.system.n(), self.system.m()),
            _ => (self.system.m(), self.system.n()),
        }
    }

    /// `2^d a^p b^q`.
    pub fn volume(&self) -> Sym {
        let (p, q) = self.blocks();
        (&self.a.pow(p as u32) * &self.b.pow(q as u32)).scale_int(&(BigInt::from(1) << (p + q)))
    }

    /// Coordinates in `(x, y)` order from free and residual blocks.
    fn canonical_order(&self, free: &[i64], res: &[i64]) -> Vec<i64> {
        match self.kind {
            BoxKind::Primal => res.iter().chain(free).copied().collect(),
            _ => free.iter().chain(res).copied().collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuccessiveMinima {
    pub kind: BoxKind,
    pub lambdas: Vec<Enclosure>,
    /// Independent integer points, in `(x, y)` order, with `witnesses[k]`
    /// on the boundary of `lambdas[k]` times the box.
    pub witnesses: Vec<Vec<i64>>,
    pub volume: Enclosure,
    /// `lambda_1 ... lambda_d vol`.
    pub minkowski_product: Enclosure,
    /// Exact check of `lambda_1 ... lambda_d vol <= 2^d`.
    pub minkowski_ok: bool,
    /// `lambda_k a b`, exactly.
    #[serde(skip)]
    pub gauges: Vec<Sym>,
    #[serde(skip)]
    pub ab: Sym,
}

impl SuccessiveMinima {
    /// Certified comparison of `lambda_k` (0-based) with a rational.
    pub fn compare_lambda(&self, k: usize, r: &BigRational, cap_bits: u32) -> Result<Ordering> {
        self.gauges[k].cmp_certified(&self.ab.scale(r), cap_bits)
    }
}

const WORK: u32 = 128;

struct Point {
    z: Vec<i64>,
    free: Vec<i64>,
    res: Vec<i64>,
    approx: Enclosure,
    exact: Option<Sym>,
    l1: u64,
}

struct Gauge<'a> {
    bx: &'a Parallelepiped,
    free: FormSystem,
    coeffs: Vec<Vec<Enclosure>>,
    a: Enclosure,
    b: Enclosure,
    cap: u32,
}

impl Gauge<'_> {
    /// `max(|u| b, res(u, w) a)`, which is the gauge times `a b`.
    fn exact(&self, u: &[i64], w: &[i64]) -> Result<Sym> {
        let mut res = Sym::zero();
        for (j, &wj) in w.iter().enumerate() {
            let r = (&self.free.form_value(j, u) - &Sym::from_int(wj)).abs(self.cap)?;
            res = res.max_certified(&r, self.cap)?;
        }
        let su = Sym::from_int(sup_norm(u));
        (&su * &self.bx.b).max_certified(&(&res * &self.bx.a), self.cap)
    }

    fn form_enc(&self, j: usize, u: &[i64]) -> Enclosure {
        self.coeffs[j].iter().zip(u).fold(Enclosure::zero(), |acc, (c, &ui)| {
            acc.add(&c.mul_int(&BigInt::from(ui)))
        })
    }

    fn approx(&self, u: &[i64], w: &[i64], forms: &[Enclosure]) -> Enclosure {
        let mut res = Enclosure::zero();
        for (f, &wj) in forms.iter().zip(w) {
            res = res.max(&f.sub(&Enclosure::from_int(wj)).abs());
        }
        Enclosure::from_int(sup_norm(u)).mul(&self.b).max(&res.mul(&self.a))
    }
}

fn try_merge_sort<T, F>(mut v: Vec<T>, cmp: &mut F) -> Result<Vec<T>>
where
    F: FnMut(&mut T, &mut T) -> Result<Ordering>,
{
    if v.len() <= 1 {
        return Ok(v);
    }
    let right = v.split_off(v.len() / 2);
    let left = try_merge_sort(v, cmp)?;
    let right = try_merge_sort(right, cmp)?;
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut l = left.into_iter().peekable();
    let mut r = right.into_iter().peekable();
    loop {
        let take_left = match (l.peek_mut(), r.peek_mut()) {
            (Some(a), Some(b)) => cmp(a, b)? != Ordering::Greater,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        out.push(if take_left { l.next() } else { r.next() }.unwrap());
    }
    Ok(out)
}

/// Rank-tracking row echelon form over the rationals.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn try_add(&mut self, v: &[i64]) -> bool {
        let mut r: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        for (piv, row) in &self.rows {
            if !r[*piv].is_zero() {
                let f = &r[*piv] / &row[*piv];
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Successive minima of a box with respect to `Z^d`, by exhaustive
/// enumeration of lattice points in dilates of the box.
///
/// Ties between points with equal gauge go to the smaller l1-norm, then to
/// the point whose nonzero coordinates come first.
pub fn successive_minima(bx: &Parallelepiped, settings: &Settings) -> Result<SuccessiveMinima> {
    let cap = settings.cap_bits;
    if bx.a.sign(cap)? != Ordering::Greater || bx.b.sign(cap)? != Ordering::Greater {
        return Err(Error::InvalidInput(
            "degenerate box: both bounds must be positive".into(),
        ));
    }
    let free = bx.free_system();
    let (p, q) = bx.blocks();
    let d = p + q;
    let coeffs = (0..q)
        .map(|j| (0..p).map(|i| free.entry(j, i).value().enclose(WORK)).collect())
        .collect();
    let g = Gauge {
        bx,
        free,
        coeffs,
        a: bx.a.enclose(WORK),
        b: bx.b.enclose(WORK),
        cap,
    };
    let ab = &bx.a * &bx.b;
    let ab_enc = ab.enclose(WORK);

    // gauges of the unit vectors bound every minimum from above
    let mut unit_levels = Vec::with_capacity(d);
    for k in 0..d {
        let mut u = vec![0i64; p];
        let mut w = vec![0i64; q];
        if k < p {
            u[k] = 1;
        } else {
            w[k - p] = 1;
        }
        let forms: Vec<Enclosure> = (0..q).map(|j| g.form_enc(j, &u)).collect();
        let lam = g
            .approx(&u, &w, &forms)
            .div_positive(&ab_enc, 64)
            .ok_or_else(|| Error::cap(WORK, "bounding a degenerate box"))?;
        unit_levels.push(lam.hi().clone());
    }
    let top = unit_levels.iter().max().unwrap().clone();
    let mut level = unit_levels.iter().min().unwrap().clone();

    loop {
        if let Some(found) = attempt(bx, &g, &ab, &ab_enc, &level, settings)? {
            return finish(bx, &ab, found, settings);
        }
        if level >= top {
            return Err(Error::cap(cap, "enumerating successive minima"));
        }
        level = (&level + &level).min(top.clone());
    }
}

fn attempt(
    bx: &Parallelepiped,
    g: &Gauge,
    ab: &Sym,
    ab_enc: &Enclosure,
    level: &Dyadic,
    settings: &Settings,
) -> Result<Option<Picked>> {
    let (p, q) = bx.blocks();
    let d = p + q;
    let f_bound = (level * g.a.hi())
        .floor()
        .to_i64()
        .ok_or_else(|| Error::BudgetExceeded {
            needed: "free block beyond 64-bit range".into(),
            budget: settings.budget,
        })?;
    let rb = level * g.b.hi();
    let w_width = (&rb + &rb).floor().to_u128().unwrap_or(u128::MAX).saturating_add(2);
    let needed = (2 * f_bound as u128 + 1)
        .saturating_pow(p as u32)
        .saturating_mul(w_width.saturating_pow(q as u32));
    settings.check_budget(needed)?;
    let limit = Enclosure::point(level.clone()).mul(ab_enc);

    let mut points = Vec::new();
    let mut u = vec![-f_bound; p];
    loop {
        let forms: Vec<Enclosure> = (0..q).map(|j| g.form_enc(j, &u)).collect();
        let ranges: Vec<(i64, i64)> = forms
            .iter()
            .map(|f| {
                let lo = (f.lo() - &rb).ceil().to_i64().unwrap_or(i64::MIN);
                let hi = (f.hi() + &rb).floor().to_i64().unwrap_or(i64::MAX);
                (lo, hi)
            })
            .collect();
        if ranges.iter().all(|(lo, hi)| lo <= hi) {
            let mut w: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            loop {
                let z = bx.canonical_order(&u, &w);
                if is_sign_normalized(&z) {
                    let approx = g.approx(&u, &w, &forms);
                    if approx.lo() <= limit.hi() {
                        points.push(Point {
                            l1: z.iter().map(|v| v.unsigned_abs()).sum(),
                            z,
                            free: u.clone(),
                            res: w.clone(),
                            approx,
                            exact: None,
                        });
                    }
                }
                if !odometer(&mut w, &ranges) {
                    break;
                }
            }
        }
        if !odometer(&mut u, &vec![(-f_bound, f_bound); p]) {
            break;
        }
    }

    let mut cmp = |a: &mut Point, b: &mut Point| -> Result<Ordering> {
        let by_gauge = if a.approx.certainly_lt(&b.approx) {
            Ordering::Less
        } else if b.approx.certainly_lt(&a.approx) {
            Ordering::Greater
        } else {
            for pt in [&mut *a, &mut *b] {
                if pt.exact.is_none() {
                    pt.exact = Some(g.exact(&pt.free, &pt.res)?);
                }
            }
            a.exact
                .as_ref()
                .unwrap()
                .cmp_certified(b.exact.as_ref().unwrap(), g.cap)?
        };
        Ok(by_gauge.then(a.l1.cmp(&b.l1)).then_with(|| b.z.cmp(&a.z)))
    };
    let sorted = try_merge_sort(points, &mut cmp)?;

    let mut ech = Echelon::default();
    let mut picked = Vec::with_capacity(d);
    for mut pt in sorted {
        if ech.try_add(&pt.z) {
            let exact = match pt.exact.take() {
                Some(e) => e,
                None => g.exact(&pt.free, &pt.res)?,
            };
            picked.push((pt.z, exact));
            if picked.len() == d {
                break;
            }
        }
    }
    if picked.len() < d {
        return Ok(None);
    }
    // complete only if the last minimum lies inside the enumerated dilate
    let bound = ab.scale(&level.to_rational());
    if picked[d - 1].1.cmp_certified(&bound, g.cap)? == Ordering::Greater {
        return Ok(None);
    }
    Ok(Some(picked))
}

/// Advances `v` through the box `ranges` in lexicographic order.
fn odometer(v: &mut [i64], ranges: &[(i64, i64)]) -> bool {
    for k in (0..v.len()).rev() {
        if v[k] < ranges[k].1 {
            v[k] += 1;
            return true;
        }
        v[k] = ranges[k].0;
    }
    false
}

fn finish(bx: &Parallelepiped, ab: &Sym, found: Vec<(Vec<i64>, Sym)>, settings: &Settings) -> Result<SuccessiveMinima> {
    let bits = settings.precision_bits;
    let guard = bits + 32;
    let ab_enc = ab.enclose(guard);
    let d = found.len();
    let mut lambdas = Vec::with_capacity(d);
    let mut witnesses = Vec::with_capacity(d);
    let mut prod = Sym::one();
    let mut gauges = Vec::with_capacity(d);
    for (z, num) in found {
        let lambda = match (num.as_rational(), ab.as_rational()) {
            (Some(g), Some(h)) => Enclosure::from_rational(&(g / h), bits + 1),
            _ => num
                .enclose(guard)
                .div_positive(&ab_enc, bits + 1)
                .expect("positive box bounds"),
        };
        lambdas.push(lambda);
        prod = &prod * &num;
        gauges.push(num);
        witnesses.push(z);
    }
    let (p, q) = bx.blocks();
    let vol = bx.volume();
    let lhs = &prod * &(&bx.a.pow(p as u32) * &bx.b.pow(q as u32));
    let minkowski_ok = lhs.cmp_certified(&ab.pow(d as u32), settings.cap_bits)? != Ordering::Greater;
    let vol_enc = vol.enclose(guard);
    let minkowski_product = lambdas
        .iter()
        .fold(vol_enc.clone(), |acc, l| acc.mul(l))
        .round_outward(bits + 1);
    Ok(SuccessiveMinima {
        kind: bx.kind,
        lambdas,
        witnesses,
        volume: vol.enclose(bits),
        minkowski_product,
        minkowski_ok,
        gauges,
        ab: ab.clone(),
    })
}
