//! Test ideals on the regular chart via stabilizing Frobenius-root
//! chains, the left-limit variant, F-jumping numbers over the
//! representable candidate family, base-q truncations, and the orbit
//! discreteness checker.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::One;

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::frobenius::frobenius_root;
use crate::groebner::IdealHandle;
use crate::poly::{Poly, PrimeChar};
use crate::rat::Rat;

/// A formal divisor Delta = multiplier * div(f). The zero divisor is
/// encoded by `f = None` (equivalently multiplier 0).
#[derive(Debug, Clone)]
pub struct DivisorSpec {
    pub f: Option<Poly>,
    /// Level e with q = p^e controlling both the intended denominator
    /// p^e - 1 of the multiplier and the perturbation scale.
    pub e: u32,
    pub multiplier: Rat,
}

impl DivisorSpec {
    pub fn zero() -> Self {
        DivisorSpec {
            f: None,
            e: 1,
            multiplier: Rat::zero(),
        }
    }

    pub fn new(f: Poly, e: u32, multiplier: Rat) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::Precondition("divisor polynomial must be nonzero".into()));
        }
        if multiplier.is_negative() {
            return Err(Error::Precondition("divisor multiplier must be >= 0".into()));
        }
        if e < 1 {
            return Err(Error::Precondition("divisor level e must be >= 1".into()));
        }
        Ok(DivisorSpec {
            f: Some(f),
            e,
            multiplier,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_none() || self.multiplier.is_zero()
    }
}

/// One factor of a formal product a^t b^s ...
#[derive(Debug, Clone)]
pub enum Factor {
    Principal(Poly),
    Ideal(IdealHandle),
}

impl Factor {
    fn is_zero(&self) -> bool {
        match self {
            Factor::Principal(f) => f.is_zero(),
            Factor::Ideal(i) => i.is_zero_ideal(),
        }
    }
}

/// A formal product of factors with nonnegative rational exponents.
/// At most one factor may be a non-principal ideal.
#[derive(Debug, Clone)]
pub struct MixedExponent {
    entries: Vec<(Factor, Rat)>,
}

impl MixedExponent {
    pub fn new(entries: Vec<(Factor, Rat)>) -> Result<Self> {
        let ideals = entries
            .iter()
            .filter(|(f, _)| matches!(f, Factor::Ideal(i) if i.generators().len() > 1))
            .count();
        if ideals > 1 {
            return Err(Error::Precondition(
                "at most one non-principal ideal factor is supported".into(),
            ));
        }
        if entries.iter().any(|(_, t)| t.is_negative()) {
            return Err(Error::Precondition("exponents must be >= 0".into()));
        }
        Ok(MixedExponent { entries })
    }

    pub fn principal(f: Poly, t: Rat) -> Result<Self> {
        MixedExponent::new(vec![(Factor::Principal(f), t)])
    }

    pub fn entries(&self) -> &[(Factor, Rat)] {
        &self.entries
    }

    fn has_zero_entry(&self) -> bool {
        self.entries.iter().any(|(f, t)| f.is_zero() && !t.is_zero())
    }

    fn ambient(&self) -> Option<(PrimeChar, usize)> {
        self.entries.iter().map(|(f, _)| match f {
            Factor::Principal(p) => (p.char(), p.nvars()),
            Factor::Ideal(i) => (i.char(), i.nvars()),
        }).next()
    }
}

/// Result of a stabilizing test-ideal chain. `stable` means two
/// consecutive chain levels agreed within the budget; an unstable result
/// is never the certified test ideal.
#[derive(Debug, Clone)]
pub struct TestIdealResult {
    pub ideal: IdealHandle,
    pub level: u32,
    pub stable: bool,
}

/// The l-th base-q truncation factor (q^l - 1)/(q^l (q - 1)).
pub fn truncation(q: u64, l: u32) -> Result<Rat> {
    if q < 2 {
        return Err(Error::Precondition("truncation requires q >= 2".into()));
    }
    let ql = BigInt::from(q).pow(l);
    let num = &ql - BigInt::one();
    let den = ql * BigInt::from(q - 1);
    Ok(Rat::from_big(num, den))
}

/// Block structure of a set of rational exponents: every exponent can be
/// written a_i/(p^c(p^d - 1)). At chain levels e = c + k*d the fractional
/// parts of t_i * p^e are constant, so one agreement of consecutive block
/// levels certifies stabilization; at unaligned levels an agreement can
/// be a transient coincidence.
fn block_structure(mix: &MixedExponent, p: u64) -> Result<(u32, u32)> {
    let mut c = 0u32;
    let mut d = 1u32;
    for (_, t) in mix.entries() {
        if t.is_zero() {
            continue;
        }
        let (ci, di) = rat_block_structure(t, p)?;
        c = c.max(ci);
        d = num::integer::lcm(d, di);
    }
    Ok((c, d))
}

/// Block structure (c, d) of a single exponent t = a/(p^c m) with m prime
/// to p and d the multiplicative order of p modulo m.
pub(crate) fn rat_block_structure(t: &Rat, p: u64) -> Result<(u32, u32)> {
    let mut v = t.denom().clone();
    let big_p = BigInt::from(p);
    let mut c = 0u32;
    while (&v % &big_p) == BigInt::from(0u32) {
        v /= &big_p;
        c += 1;
    }
    use num::ToPrimitive;
    let m = v
        .to_u64()
        .ok_or_else(|| Error::Precondition("exponent denominator too large".into()))?;
    let mut d = 1u32;
    if m > 1 {
        // multiplicative order of p modulo m
        let mut pw = (p % m) as u128;
        while pw != 1 {
            pw = pw * (p as u128) % (m as u128);
            d += 1;
            if d > 64 {
                return Err(Error::ExponentCap {
                    cap: crate::poly::DEFAULT_EXPONENT_CAP,
                });
            }
        }
    }
    Ok((c, d))
}

/// Whether the stabilizing chain for exponent t can reach its first two
/// block-aligned levels c + d and c + 2d within the exponent cap.
/// `weight` is the total degree the factors contribute per unit exponent
/// (monomial exponents reach roughly weight * p^(c+2d)). Chains at
/// infeasible exponents cannot be certified and are excluded from
/// candidate enumeration up front.
pub(crate) fn chain_feasible(t: &Rat, p: u64, weight: u64, budgets: &Budgets) -> bool {
    match rat_block_structure(t, p) {
        Ok((c, d)) => p
            .checked_pow(c + 2 * d)
            .and_then(|q| q.checked_mul(weight.max(1)))
            .map_or(false, |q| q <= budgets.exponent_cap as u64),
        Err(_) => false,
    }
}

/// The degree weight of a divisor/ideal pair at top exponent `hi`:
/// ceil(multiplier * deg f + hi * max deg a) + 1.
fn degree_weight(div: &DivisorSpec, a: &IdealHandle, hi: &Rat) -> u64 {
    let mut w = Rat::zero();
    if !div.is_zero() {
        if let Some(f) = &div.f {
            w = &w + &(&div.multiplier * &Rat::from_int(f.total_degree() as i64));
        }
    }
    let dega = a
        .generators()
        .iter()
        .map(|g| g.total_degree())
        .max()
        .unwrap_or(0);
    w = &w + &(hi * &Rat::from_int(dega as i64));
    w.ceil_u64().unwrap_or(1).max(1) + 1
}

/// tau(A, prod_i a_i^{t_i}) by the ascending chain
/// J_e = frobenius_root(prod_i a_i^{ceil(t_i p^e)}, p^e) evaluated at
/// denominator-aligned levels e = c + k*d, returned at the least such
/// level where two consecutive block levels agree. `e_max` caps the
/// number of block steps.
pub fn test_ideal(mix: &MixedExponent, e_max: u32, budgets: &Budgets) -> Result<TestIdealResult> {
    let (char, nvars) = mix
        .ambient()
        .ok_or_else(|| Error::Precondition("empty mixed exponent".into()))?;
    if mix.has_zero_entry() {
        // convention: the test ideal of the zero ideal is the zero ideal
        return Ok(TestIdealResult {
            ideal: IdealHandle::zero(char, nvars),
            level: 0,
            stable: true,
        });
    }
    if e_max < 1 {
        return Err(Error::Precondition("e_max must be >= 1".into()));
    }
    let p = char.get();
    let (c, d) = block_structure(mix, p)?;
    // monomial exponents at level q reach sum_i deg_i * ceil(t_i q)
    // <= slope * q + intercept, and the polynomial layer hard-errors past
    // the exponent cap, so levels are admitted by that bound, not q alone
    let (slope, intercept) = mix_degree_line(mix);
    let cap = Rat::from_int(budgets.exponent_cap as i64);
    let fits = |q: u64| -> bool {
        &(&slope * &Rat::from_int(q as i64)) + &intercept <= cap
    };
    let mut prev: Option<IdealHandle> = None;
    let mut prev_level = 0;
    for k in 1..=e_max {
        let e = c + k * d;
        let q = match p.checked_pow(e).filter(|&q| fits(q)) {
            Some(q) => q,
            None => {
                // out of room: unstable if we at least saw two levels
                if k > 2 {
                    break;
                }
                return Err(Error::ExponentCap {
                    cap: budgets.exponent_cap,
                });
            }
        };
        let current = chain_level(mix, char, nvars, q, budgets)?;
        if let Some(prev_ideal) = &prev {
            if prev_ideal.ideal_equal(&current, budgets)? {
                return Ok(TestIdealResult {
                    ideal: current,
                    level: prev_level,
                    stable: true,
                });
            }
        }
        prev = Some(current);
        prev_level = e;
    }
    Ok(TestIdealResult {
        ideal: prev.expect("at least one level computed"),
        level: prev_level,
        stable: false,
    })
}

/// Bound the chain-level monomial exponents as an affine function of q:
/// sum_i deg_i * ceil(t_i q) <= slope * q + intercept with
/// slope = sum t_i deg_i and intercept = sum deg_i.
fn mix_degree_line(mix: &MixedExponent) -> (Rat, Rat) {
    let mut slope = Rat::zero();
    let mut intercept = Rat::zero();
    for (factor, t) in mix.entries() {
        if t.is_zero() {
            continue;
        }
        let deg = match factor {
            Factor::Principal(f) => f.total_degree(),
            Factor::Ideal(i) => i
                .generators()
                .iter()
                .map(|g| g.total_degree())
                .max()
                .unwrap_or(0),
        };
        let deg = Rat::from_int(deg as i64);
        slope = &slope + &(t * &deg);
        intercept = &intercept + &deg;
    }
    (slope, intercept)
}

fn chain_level(
    mix: &MixedExponent,
    char: PrimeChar,
    nvars: usize,
    q: u64,
    budgets: &Budgets,
) -> Result<IdealHandle> {
    let mut product = IdealHandle::unit(char, nvars);
    for (factor, t) in mix.entries() {
        if t.is_zero() {
            continue;
        }
        let n = (t * &Rat::from_int(q as i64))
            .ceil_u64()
            .ok_or_else(|| Error::Precondition("exponent must be >= 0".into()))?;
        match factor {
            Factor::Principal(f) => {
                if n as usize * f.num_terms() > budgets.max_poly_terms {
                    return Err(Error::BudgetExceeded {
                        what: format!("chain power terms > {}", budgets.max_poly_terms),
                    });
                }
                let power = f.pow(n)?;
                product = product.scale_by_poly(&power)?;
            }
            Factor::Ideal(i) => {
                let power = i.ideal_power(n, budgets)?;
                product = product.ideal_product(&power, budgets)?;
            }
        }
    }
    frobenius_root(&product, q)
}

/// Result of the left-limit sweep. `epsilon_level` is the first level l
/// (epsilon = 1/q^l) at which the agreeing window began.
#[derive(Debug, Clone)]
pub struct NtauResult {
    pub ideal: IdealHandle,
    pub epsilon_level: Option<u32>,
    pub stable: bool,
}

/// The left-limit test ideal tau_-(A, Delta, a^t): tau at divisor
/// exponents multiplier*(1 - 1/q^l) for l = 1, 2, ..., declared once
/// `sweep` consecutive levels agree.
pub fn ntau(div: &DivisorSpec, a: &IdealHandle, t: &Rat, budgets: &Budgets) -> Result<NtauResult> {
    if t.is_negative() {
        return Err(Error::Precondition("exponent t must be >= 0".into()));
    }
    if div.is_zero() {
        // no perturbation: tau itself
        let mix = MixedExponent::new(vec![(Factor::Ideal(a.clone()), t.clone())])?;
        let r = test_ideal(&mix, budgets.e_max, budgets)?;
        return Ok(NtauResult {
            ideal: r.ideal,
            epsilon_level: None,
            stable: r.stable,
        });
    }
    let f = div.f.as_ref().expect("nonzero divisor");
    let p = f.char().get();
    let q = p
        .checked_pow(div.e)
        .filter(|&v| v <= budgets.exponent_cap as u64)
        .ok_or(Error::ExponentCap {
            cap: budgets.exponent_cap,
        })?;
    let sweep = budgets.sweep.max(2);
    let mut values: Vec<IdealHandle> = Vec::new();
    let mut run_start = 0usize;
    let mut ql = BigInt::one();
    for l in 1..=budgets.ntau_levels {
        ql *= BigInt::from(q);
        // multiplier * (q^l - 1)/q^l
        let scale = Rat::from_big(&ql - BigInt::one(), ql.clone());
        let exponent = &div.multiplier * &scale;
        let mix = MixedExponent::new(vec![
            (Factor::Principal(f.clone()), exponent),
            (Factor::Ideal(a.clone()), t.clone()),
        ])?;
        let r = test_ideal(&mix, budgets.e_max, budgets)?;
        if !r.stable {
            return Ok(NtauResult {
                ideal: r.ideal,
                epsilon_level: Some(l),
                stable: false,
            });
        }
        if let Some(last) = values.last() {
            if !last.ideal_equal(&r.ideal, budgets)? {
                run_start = values.len();
            }
        }
        values.push(r.ideal);
        let run_len = values.len() - run_start;
        if run_len >= sweep as usize {
            return Ok(NtauResult {
                ideal: values.pop().expect("nonempty"),
                epsilon_level: Some(run_start as u32 + 1),
                stable: true,
            });
        }
        let _ = l;
    }
    Ok(NtauResult {
        ideal: values.pop().expect("ntau_levels >= 1"),
        epsilon_level: None,
        stable: false,
    })
}

/// One detected F-jumping number, with side flags: `left` when the ideal
/// drops arriving at t from below, `right` when it drops leaving t.
#[derive(Debug, Clone)]
pub struct Jump {
    pub t: Rat,
    pub left: bool,
    pub right: bool,
    pub ideal_before: IdealHandle,
    pub ideal_at_or_after: IdealHandle,
}

/// Report of a jumping-number search over an interval. Changes that
/// cannot be pinned to a representable candidate are listed in
/// `unresolved`; the rest of the interval is certified jump-free.
#[derive(Debug, Clone)]
pub struct JumpReport {
    pub interval: (Rat, Rat),
    pub jumps: Vec<Jump>,
    pub unresolved: Vec<(Rat, Rat)>,
}

/// All t in [lo, hi] at which the left-limit test ideal of
/// (Delta, a^t) changes, searched over candidates with denominators of
/// the form q^a (q^b - 1) up to `denom_bound`, refined by monotone
/// bisection. t = 0 is never reported as a jump.
pub fn jumping_numbers(
    div: &DivisorSpec,
    a: &IdealHandle,
    lo: &Rat,
    hi: &Rat,
    budgets: &Budgets,
) -> Result<JumpReport> {
    if lo.is_negative() || lo >= hi {
        return Err(Error::Precondition(
            "jump search requires 0 <= lo < hi".into(),
        ));
    }
    let p = a.char().get();
    let q = p
        .checked_pow(div.e.max(1))
        .ok_or(Error::ExponentCap {
            cap: budgets.exponent_cap,
        })?;
    let weight = degree_weight(div, a, hi);
    let mut candidates: BTreeSet<Rat> =
        candidate_points(q, budgets.denom_bound, lo, hi, p, weight, budgets);
    candidates.insert(lo.clone());
    candidates.insert(hi.clone());
    let candidates: Vec<Rat> = candidates.into_iter().collect();

    let mut search = JumpSearch {
        div,
        a,
        q,
        p,
        weight,
        budgets,
        cache: BTreeMap::new(),
        jumps: Vec::new(),
        unresolved: Vec::new(),
    };
    // lazy bisection over candidate indices: by monotonicity a constant
    // pair of endpoints certifies the whole stretch jump-free
    search.scan(&candidates, 0, candidates.len() - 1)?;

    let JumpSearch {
        mut jumps,
        mut unresolved,
        ..
    } = search;
    jumps.retain(|j| !j.t.is_zero());
    jumps.sort_by(|a, b| a.t.cmp(&b.t));
    unresolved.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(JumpReport {
        interval: (lo.clone(), hi.clone()),
        jumps,
        unresolved,
    })
}

struct JumpSearch<'a> {
    div: &'a DivisorSpec,
    a: &'a IdealHandle,
    q: u64,
    p: u64,
    weight: u64,
    budgets: &'a Budgets,
    cache: BTreeMap<Rat, IdealHandle>,
    jumps: Vec<Jump>,
    unresolved: Vec<(Rat, Rat)>,
}

impl JumpSearch<'_> {
    fn eval(&mut self, t: &Rat) -> Result<IdealHandle> {
        if let Some(v) = self.cache.get(t) {
            return Ok(v.clone());
        }
        let v = ntau(self.div, self.a, t, self.budgets)?.ideal;
        // precompute the basis so later equality checks are cheap
        v.reduced_basis(self.budgets)?;
        self.cache.insert(t.clone(), v.clone());
        Ok(v)
    }

    /// Recursively scan candidate indices [i, j].
    fn scan(&mut self, cands: &[Rat], i: usize, j: usize) -> Result<()> {
        if i >= j {
            return Ok(());
        }
        let vi = self.eval(&cands[i])?;
        let vj = self.eval(&cands[j])?;
        if vi.ideal_equal(&vj, self.budgets)? {
            return Ok(()); // constant on the whole stretch
        }
        if j == i + 1 {
            return self.localize_gap(&cands[i], &cands[j], vi, vj);
        }
        let mid = i + (j - i) / 2;
        self.scan(cands, i, mid)?;
        self.scan(cands, mid, j)
    }

    /// The largest q-adic step 1/q^k strictly below `w` (k >= 1).
    fn q_step(&self, w: &Rat) -> Rat {
        let mut qk = BigInt::from(self.q);
        loop {
            let step = Rat::from_big(BigInt::one(), qk.clone());
            if &step < w {
                return step;
            }
            qk *= BigInt::from(self.q);
        }
    }

    /// Localize every change inside an adjacent candidate gap (ca, cb].
    /// Probes are offset from the endpoints by q-adic steps so their
    /// denominators stay block-feasible.
    fn localize_gap(&mut self, ca: &Rat, cb: &Rat, va: IdealHandle, vb: IdealHandle) -> Result<()> {
        const DEPTH: u32 = 3;
        let mut stack: Vec<(Rat, Rat, IdealHandle, IdealHandle, u32)> =
            vec![(ca.clone(), cb.clone(), va, vb, DEPTH)];
        while let Some((x, y, vx, vy, depth)) = stack.pop() {
            if depth == 0 {
                if x == *ca {
                    self.push_jump(ca, false, true, &vx, &vy);
                } else if y == *cb {
                    self.push_jump(cb, true, false, &vx, &vy);
                } else {
                    self.unresolved.push((x, y));
                }
                continue;
            }
            let width = &y - &x;
            let step = self.q_step(&width);
            // probe just below y first: tau-type maps drop arriving at a
            // jump from the left, so this resolves the common case with
            // one evaluation
            let pb = &y - &step;
            if !chain_feasible(&pb, self.p, self.weight, self.budgets) {
                self.unresolved.push((x, y));
                continue;
            }
            let vpb = self.eval(&pb)?;
            if vpb.ideal_equal(&vx, self.budgets)? {
                // constant on [x, pb]: the change clusters at y
                if y == *cb {
                    self.push_jump(cb, true, false, &vx, &vy);
                } else {
                    stack.push((pb, y, vpb, vy, depth - 1));
                }
                continue;
            }
            // probe just above x
            let inner = &pb - &x;
            let step2 = self.q_step(&inner);
            let pa = &x + &step2;
            if !chain_feasible(&pa, self.p, self.weight, self.budgets) {
                // the change inside (x, pb] cannot be probed further
                self.unresolved.push((x, pb.clone()));
                if !vpb.ideal_equal(&vy, self.budgets)? {
                    stack.push((pb, y, vpb, vy, depth - 1));
                }
                continue;
            }
            let vpa = self.eval(&pa)?;
            if vpa.ideal_equal(&vy, self.budgets)? {
                // the whole change happens immediately after x
                if x == *ca {
                    self.push_jump(ca, false, true, &vx, &vpa);
                } else {
                    stack.push((x, pa, vx, vpa, depth - 1));
                }
                continue;
            }
            if !vx.ideal_equal(&vpa, self.budgets)? {
                stack.push((x, pa.clone(), vx.clone(), vpa.clone(), depth - 1));
            }
            if !vpa.ideal_equal(&vpb, self.budgets)? {
                stack.push((pa.clone(), pb.clone(), vpa.clone(), vpb.clone(), depth - 1));
            }
            if !vpb.ideal_equal(&vy, self.budgets)? {
                stack.push((pb, y, vpb, vy, depth - 1));
            }
        }
        Ok(())
    }

    fn push_jump(&mut self, t: &Rat, left: bool, right: bool, before: &IdealHandle, after: &IdealHandle) {
        push_jump(&mut self.jumps, t, left, right, before, after)
    }
}

fn push_jump(
    jumps: &mut Vec<Jump>,
    t: &Rat,
    left: bool,
    right: bool,
    before: &IdealHandle,
    after: &IdealHandle,
) {
    if let Some(j) = jumps.iter_mut().find(|j| j.t == *t) {
        j.left |= left;
        j.right |= right;
        if left {
            j.ideal_before = before.clone();
        }
        if right {
            j.ideal_at_or_after = after.clone();
        }
        return;
    }
    jumps.push(Jump {
        t: t.clone(),
        left,
        right,
        ideal_before: before.clone(),
        ideal_at_or_after: after.clone(),
    });
}

/// Candidate jump locations in [lo, hi]: rationals with denominator of
/// the form q^a (q^b - 1) bounded by denom_bound.
fn candidate_points(
    q: u64,
    denom_bound: u64,
    lo: &Rat,
    hi: &Rat,
    p: u64,
    weight: u64,
    budgets: &Budgets,
) -> BTreeSet<Rat> {
    let mut denoms: BTreeSet<u64> = BTreeSet::new();
    let mut qb = q;
    loop {
        let base = qb - 1; // q^b - 1
        if base > denom_bound {
            break;
        }
        let mut d = base.max(1);
        while d <= denom_bound {
            denoms.insert(d);
            match d.checked_mul(q) {
                Some(next) => d = next,
                None => break,
            }
        }
        match qb.checked_mul(q) {
            Some(next) => qb = next,
            None => break,
        }
    }
    // pure powers q^a (b = 0 edge of the family: integer translates)
    let mut d = 1u64;
    while d <= denom_bound {
        denoms.insert(d);
        match d.checked_mul(q) {
            Some(next) => d = next,
            None => break,
        }
    }
    let mut out = BTreeSet::new();
    for d in denoms {
        let dd = Rat::from_int(d as i64);
        let from = (lo * &dd).ceil_int();
        let to = (hi * &dd).floor_int();
        let mut u = from;
        while u <= to {
            let cand = Rat::from_big(u.clone(), BigInt::from(d));
            if chain_feasible(&cand, p, weight, budgets) {
                out.insert(cand);
            }
            u += 1;
        }
    }
    out
}

/// Orbit of t under x -> qx followed by subtracting 1 while the result
/// exceeds l. Every rational orbit is eventually periodic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub preperiod: u64,
    pub period: u64,
    pub cycle: Vec<Rat>,
    /// True when the cycle was longer than the materialization cap and
    /// only a prefix of its elements is listed.
    pub truncated: bool,
}

/// Detects the eventual cycle of the orbit of t > 0 using Brent's
/// algorithm on exact fixed-denominator arithmetic.
pub fn orbit_discreteness(t: &Rat, q: u64, l: u64, budgets: &Budgets) -> Result<OrbitReport> {
    if t.is_zero() || t.is_negative() {
        return Err(Error::Precondition("orbit requires t > 0".into()));
    }
    if q < 2 || l < 1 {
        return Err(Error::Precondition("orbit requires q >= 2 and l >= 1".into()));
    }
    use num::ToPrimitive;
    let d = t
        .denom()
        .to_u128()
        .ok_or_else(|| Error::Precondition("orbit denominator too large".into()))?;
    let x0 = t
        .numer()
        .to_u128()
        .ok_or_else(|| Error::Precondition("orbit numerator too large".into()))?;
    let cap = (l as u128)
        .checked_mul(d)
        .and_then(|ld| ld.checked_mul(q as u128))
        .ok_or_else(|| Error::Precondition("orbit parameters too large".into()))?;
    let _ = cap;
    let big_l = l as u128 * d;
    let step = |n: u128| -> u128 {
        let m = n * q as u128;
        if m > big_l {
            // subtract d (i.e. 1) until the value is at most l
            let k = (m - big_l).div_ceil(d);
            m - k * d
        } else {
            m
        }
    };

    let mut steps_used = 0u64;
    let budget = |used: &mut u64| -> Result<()> {
        *used += 1;
        if *used > budgets.orbit_steps {
            return Err(Error::BudgetExceeded {
                what: format!("orbit steps > {}", budgets.orbit_steps),
            });
        }
        Ok(())
    };

    // Brent: find the period
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = x0;
    let mut hare = step(x0);
    budget(&mut steps_used)?;
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = step(hare);
        budget(&mut steps_used)?;
        lam += 1;
    }
    // find the preperiod
    let mut tortoise = x0;
    let mut hare = x0;
    for _ in 0..lam {
        hare = step(hare);
        budget(&mut steps_used)?;
    }
    let mut mu = 0u64;
    while tortoise != hare {
        tortoise = step(tortoise);
        hare = step(hare);
        budget(&mut steps_used)?;
        budget(&mut steps_used)?;
        mu += 1;
    }
    // materialize the cycle (possibly truncated)
    let take = (lam as usize).min(budgets.orbit_cycle_cap);
    let mut cycle = Vec::with_capacity(take);
    let mut x = tortoise;
    for _ in 0..take {
        cycle.push(Rat::from_big(BigInt::from(x), BigInt::from(d)));
        x = step(x);
    }
    Ok(OrbitReport {
        preperiod: mu,
        period: lam,
        cycle,
        truncated: lam as usize > budgets.orbit_cycle_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn pc(v: u64) -> PrimeChar {
        PrimeChar::new(v).unwrap()
    }

    fn poly(s: &str, nvars: usize, p: u64) -> Poly {
        parse_poly(s, nvars, pc(p)).unwrap()
    }

    fn ideal(gens: &[&str], nvars: usize, p: u64) -> IdealHandle {
        IdealHandle::new(
            pc(p),
            nvars,
            gens.iter().map(|s| poly(s, nvars, p)).collect(),
        )
    }

    fn b() -> Budgets {
        Budgets::default()
    }

    fn rat(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn truncations() {
        assert_eq!(truncation(2, 1).unwrap(), rat("1/2"));
        assert_eq!(truncation(2, 3).unwrap(), rat("7/8"));
        assert_eq!(truncation(3, 2).unwrap(), rat("4/9"));
        assert_eq!(truncation(5, 0).unwrap(), Rat::zero());
        assert!(truncation(1, 1).is_err());
    }

    #[test]
    fn test_ideal_principal_examples() {
        let x = poly("x", 2, 7);
        let r = test_ideal(
            &MixedExponent::principal(x.clone(), rat("1/2")).unwrap(),
            4,
            &b(),
        )
        .unwrap();
        assert!(r.stable);
        assert!(r.ideal.is_unit_ideal(&b()).unwrap());

        let r = test_ideal(&MixedExponent::principal(x, Rat::one()).unwrap(), 4, &b()).unwrap();
        assert!(r.stable);
        assert!(r.ideal.ideal_equal(&ideal(&["x"], 2, 7), &b()).unwrap());

        let cusp = poly("x^2 + y^3", 2, 7);
        let r = test_ideal(
            &MixedExponent::principal(cusp, rat("5/6")).unwrap(),
            4,
            &b(),
        )
        .unwrap();
        assert!(r.stable);
        assert!(r.ideal.ideal_equal(&ideal(&["x", "y"], 2, 7), &b()).unwrap());
    }

    #[test]
    fn test_ideal_zero_entry() {
        let zero = Poly::zero(pc(5), 2);
        let r = test_ideal(
            &MixedExponent::principal(zero, Rat::one()).unwrap(),
            4,
            &b(),
        )
        .unwrap();
        assert!(r.ideal.is_zero_ideal());
        assert!(r.stable);
    }

    #[test]
    fn skoda() {
        // for principal a and t >= 1: tau(a^t) = a * tau(a^{t-1})
        for (s, p, t) in [("x*y", 5, "3/2"), ("x^2", 2, "3/2"), ("x^2 + y^3", 7, "11/6")] {
            let f = poly(s, 2, p);
            let lhs = test_ideal(
                &MixedExponent::principal(f.clone(), rat(t)).unwrap(),
                4,
                &b(),
            )
            .unwrap();
            let tm1 = &rat(t) - &Rat::one();
            let inner = test_ideal(&MixedExponent::principal(f.clone(), tm1).unwrap(), 4, &b())
                .unwrap();
            assert!(lhs.stable && inner.stable);
            let rhs = inner.ideal.scale_by_poly(&f).unwrap();
            assert!(lhs.ideal.ideal_equal(&rhs, &b()).unwrap(), "{s} t={t}");
        }
    }

    #[test]
    fn power_compatibility() {
        // tau(a^{rt}) = tau((a^r)^t) for r in {2,3}
        for (s, p, t) in [("x*y", 5, "1/3"), ("x^2 + y^3", 7, "1/4")] {
            let f = poly(s, 2, p);
            for r in [2u32, 3] {
                let rt = &rat(t) * &Rat::from_int(r as i64);
                let lhs = test_ideal(&MixedExponent::principal(f.clone(), rt).unwrap(), 4, &b())
                    .unwrap();
                let fr = f.pow(r as u64).unwrap();
                let rhs = test_ideal(&MixedExponent::principal(fr, rat(t)).unwrap(), 4, &b())
                    .unwrap();
                assert!(lhs.stable && rhs.stable);
                assert!(lhs.ideal.ideal_equal(&rhs.ideal, &b()).unwrap(), "{s} r={r}");
            }
        }
    }

    #[test]
    fn trace_transform() {
        // frobenius_root(tau(f^{pt}), p) = tau(f^t)
        for (s, p, t) in [("x*y", 3, "1/2"), ("x^2 + y^3", 7, "2/3")] {
            let f = poly(s, 2, p);
            let pt = &rat(t) * &Rat::from_int(p as i64);
            let big = test_ideal(&MixedExponent::principal(f.clone(), pt).unwrap(), 4, &b())
                .unwrap();
            let small = test_ideal(&MixedExponent::principal(f, rat(t)).unwrap(), 4, &b())
                .unwrap();
            assert!(big.stable && small.stable);
            let rooted = frobenius_root(&big.ideal, p).unwrap();
            assert!(rooted.ideal_equal(&small.ideal, &b()).unwrap(), "{s}");
        }
    }

    #[test]
    fn ntau_exhibits_left_limit() {
        // tau(x^{1-eps}) = (1) for all eps > 0 although tau(x^1) = (x)
        let div = DivisorSpec::new(poly("x", 2, 2), 1, Rat::one()).unwrap();
        let a = ideal(&["y"], 2, 2);
        let r = ntau(&div, &a, &Rat::zero(), &b()).unwrap();
        assert!(r.stable);
        assert!(r.ideal.is_unit_ideal(&b()).unwrap());

        // zero divisor: ntau is tau itself
        let r = ntau(&DivisorSpec::zero(), &ideal(&["x"], 2, 2), &Rat::one(), &b()).unwrap();
        assert!(r.stable);
        assert!(r.ideal.ideal_equal(&ideal(&["x"], 2, 2), &b()).unwrap());
    }

    #[test]
    fn ntau_matches_truncated_exponents() {
        // left limit at the cusp: agrees with tau at exponent 1 - 1/7^l
        let f = poly("x^2 + y^3", 2, 7);
        let div = DivisorSpec::new(f.clone(), 1, Rat::one()).unwrap();
        let a = ideal(&["x", "y"], 2, 7);
        let r = ntau(&div, &a, &Rat::zero(), &b()).unwrap();
        assert!(r.stable);
        let l = r.epsilon_level.unwrap();
        let exponent = &Rat::one() - &Rat::from_big(BigInt::one(), BigInt::from(7u64).pow(l));
        let direct = test_ideal(&MixedExponent::principal(f, exponent).unwrap(), 4, &b())
            .unwrap();
        assert!(direct.stable);
        assert!(r.ideal.ideal_equal(&direct.ideal, &b()).unwrap());
    }

    #[test]
    fn jumps_of_a_coordinate() {
        let a = ideal(&["x"], 2, 2);
        let report = jumping_numbers(
            &DivisorSpec::zero(),
            &a,
            &Rat::zero(),
            &Rat::from_int(3),
            &b(),
        )
        .unwrap();
        let ts: Vec<String> = report.jumps.iter().map(|j| j.t.to_string()).collect();
        assert_eq!(ts, vec!["1", "2", "3"]);
        assert!(report.unresolved.is_empty());
        for j in &report.jumps {
            assert!(j.left);
        }
    }

    #[test]
    fn first_jump_of_the_cusp() {
        let a = ideal(&["x^2 + y^3"], 2, 7);
        let report = jumping_numbers(
            &DivisorSpec::zero(),
            &a,
            &Rat::zero(),
            &Rat::one(),
            &b(),
        )
        .unwrap();
        assert!(!report.jumps.is_empty());
        assert_eq!(report.jumps[0].t, rat("5/6"));
    }

    #[test]
    fn first_jump_of_xy() {
        for p in [2u64, 5] {
            let a = ideal(&["x*y"], 2, p);
            let report = jumping_numbers(
                &DivisorSpec::zero(),
                &a,
                &Rat::zero(),
                &Rat::one(),
                &b(),
            )
            .unwrap();
            assert!(!report.jumps.is_empty(), "p={p}");
            assert_eq!(report.jumps[0].t, Rat::one(), "p={p}");
        }
    }

    #[test]
    fn jump_scaling_under_p() {
        // if t is a jump of a then pt is a jump within the searched window
        let a = ideal(&["x"], 2, 2);
        let report = jumping_numbers(
            &DivisorSpec::zero(),
            &a,
            &Rat::zero(),
            &Rat::from_int(2),
            &b(),
        )
        .unwrap();
        let ts: BTreeSet<Rat> = report.jumps.iter().map(|j| j.t.clone()).collect();
        assert!(ts.contains(&Rat::one()));
        assert!(ts.contains(&Rat::from_int(2)));
    }

    #[test]
    fn orbit_examples() {
        let r = orbit_discreteness(&rat("1/2"), 2, 1, &b()).unwrap();
        assert_eq!((r.preperiod, r.period), (1, 1));
        assert_eq!(r.cycle, vec![Rat::one()]);

        let r = orbit_discreteness(&rat("5/6"), 7, 1, &b()).unwrap();
        assert_eq!((r.preperiod, r.period), (0, 1));
        assert_eq!(r.cycle, vec![rat("5/6")]);

        let r = orbit_discreteness(&rat("1/3"), 3, 1, &b()).unwrap();
        assert_eq!((r.preperiod, r.period), (1, 1));
        assert_eq!(r.cycle, vec![Rat::one()]);

        assert!(orbit_discreteness(&Rat::zero(), 2, 1, &b()).is_err());
    }

    #[test]
    fn orbit_is_eventually_periodic_on_random_inputs() {
        for (u, v, q, l) in [(7u64, 13u64, 2u64, 1u64), (22, 41, 3, 2), (999, 1000, 5, 1)] {
            let t = Rat::new(u as i64, v as i64);
            let r = orbit_discreteness(&t, q, l, &b()).unwrap();
            assert!(r.period >= 1);
            for c in &r.cycle {
                assert!(!c.is_negative());
            }
        }
    }
}
