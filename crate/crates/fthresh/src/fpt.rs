//! Certified bounds and, where the certificate structure allows, exact
//! values for F-pure thresholds of principal ideals and of pairs; the
//! pair-to-ideal reduction; strong F-regularity; and the first-jump
//! cross-check.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::frobenius::{
    fedder_pair_check, mu_invariant, mu_invariant_zero_divisor, nu_invariant, FedderDecision,
};
use crate::groebner::IdealHandle;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::testideal::{chain_feasible, jumping_numbers, test_ideal, DivisorSpec, MixedExponent};

/// Evidence for a certified lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerWitness {
    /// nu_f(q)/(q - 1) with survival witnessing sharp F-purity at the bound.
    Nu { n: u32, q: u64, nu: u64 },
    /// mu_n/(q^n - 1) from the pair criterion.
    Mu { n: u32, mu: i64 },
    /// The test ideal at this exponent is still trivial.
    TrivialTau { t: Rat },
}

/// Evidence for a certified upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpperWitness {
    /// (nu + 1)/q with f^{nu+1} in m^{[q]}.
    Bracket { q: u64, nu: u64 },
    /// A localized test-ideal jump at this exponent.
    TauJump { t: Rat },
    /// The level-n purity check fails at this representable exponent.
    MuRefuted { n: u32, t: Rat },
    /// The crude pair bound fpt(A; m) = dim A.
    Dim { dim: u64 },
}

/// Certified two-sided bounds on an F-pure threshold. `exact` is present
/// only when the certificates close the gap; then lower = upper = exact.
#[derive(Debug, Clone)]
pub struct FptBounds {
    pub lower: Rat,
    pub upper: Rat,
    pub exact: Option<Rat>,
    pub lower_witness: LowerWitness,
    pub upper_witness: UpperWitness,
}

/// Bounds on fpt(A; (f)) from the nu-sweep, tightened to an exact value
/// when the certificate protocol closes the gap:
/// 1. lower = upper;
/// 2. sharp F-purity holds at the lower bound and no rational with
///    representable denominator lies in (lower, upper];
/// 3. a test-ideal jump is localized exactly at a representable candidate.
pub fn fpt_bounds(f: &Poly, n_max: u32, budgets: &Budgets) -> Result<FptBounds> {
    if f.is_zero() || !f.in_maximal_ideal() {
        return Err(Error::Precondition(
            "fpt requires nonzero f without constant term".into(),
        ));
    }
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be >= 1".into()));
    }
    let p = f.char().get();
    let mut lower = Rat::zero();
    let mut upper: Option<Rat> = None;
    let mut lower_witness = LowerWitness::Nu { n: 0, q: 1, nu: 0 };
    let mut upper_witness = UpperWitness::Bracket { q: 1, nu: 0 };
    let mut q = 1u64;
    for n in 1..=n_max {
        q = q
            .checked_mul(p)
            .filter(|&v| v <= budgets.exponent_cap as u64)
            .ok_or(Error::ExponentCap {
                cap: budgets.exponent_cap,
            })?;
        let (nu, _witness) = nu_invariant(f, q)?;
        let lo = Rat::new(nu as i64, (q - 1) as i64);
        if lo > lower {
            lower = lo;
            lower_witness = LowerWitness::Nu { n, q, nu };
        }
        let up = Rat::new((nu + 1) as i64, q as i64);
        if upper.as_ref().map_or(true, |u| &up < u) {
            upper = Some(up);
            upper_witness = UpperWitness::Bracket { q, nu };
        }
    }
    let mut upper = upper.expect("n_max >= 1");
    if lower > upper {
        lower = upper.clone();
    }

    if lower == upper {
        return Ok(FptBounds {
            exact: Some(lower.clone()),
            lower,
            upper,
            lower_witness,
            upper_witness,
        });
    }

    // candidates with representable denominators inside (lower, upper]
    let weight = (&upper * &Rat::from_int(f.total_degree() as i64))
        .ceil_u64()
        .unwrap_or(1)
        .max(1)
        + 1;
    let cands = family_candidates(p, budgets.denom_bound, &lower, &upper, weight, budgets);
    if cands.is_empty() {
        // sharp F-purity holds at `lower` by the survival witness, the
        // threshold has a representable denominator and must lie in
        // [lower, upper]; an empty open-closed window pins it to lower
        return Ok(FptBounds {
            exact: Some(lower.clone()),
            upper: lower.clone(),
            lower,
            lower_witness,
            upper_witness,
        });
    }

    // test-ideal jump search over the candidate window
    let trivial = |t: &Rat| -> Result<bool> {
        let mix = MixedExponent::principal(f.clone(), t.clone())?;
        let r = test_ideal(&mix, budgets.e_max, budgets)?;
        if !r.stable {
            return Err(Error::Unstable);
        }
        r.ideal.is_unit_ideal(budgets)
    };
    match locate_first_nontrivial(&cands, &lower, p, weight, budgets, &trivial)? {
        JumpLocation::Exact(c) => Ok(FptBounds {
            lower: c.clone(),
            upper: c.clone(),
            exact: Some(c.clone()),
            lower_witness,
            upper_witness: UpperWitness::TauJump { t: c },
        }),
        JumpLocation::AtFloor => {
            // the change clusters immediately above `lower`, where purity
            // holds and no representable point separates them
            Ok(FptBounds {
                exact: Some(lower.clone()),
                upper: lower.clone(),
                upper_witness: UpperWitness::TauJump { t: lower.clone() },
                lower,
                lower_witness,
            })
        }
        JumpLocation::Bracketed { below, at } => {
            if below > lower {
                lower = below.clone();
                lower_witness = LowerWitness::TrivialTau { t: below };
            }
            if at < upper {
                upper = at.clone();
                upper_witness = UpperWitness::TauJump { t: at };
            }
            Ok(FptBounds {
                lower,
                upper,
                exact: None,
                lower_witness,
                upper_witness,
            })
        }
        JumpLocation::AllTrivial => {
            // every candidate is still trivial: the threshold sits in
            // (last candidate, upper], which holds no representable point,
            // but purity at the open left end cannot be asserted
            let last = cands.last().expect("nonempty").clone();
            if last >= lower {
                lower_witness = LowerWitness::TrivialTau { t: last.clone() };
                lower = last;
            }
            Ok(FptBounds {
                lower,
                upper,
                exact: None,
                lower_witness,
                upper_witness,
            })
        }
    }
}

enum JumpLocation {
    /// First nontrivial candidate, with triviality re-verified just below
    /// it and no representable point in between: the threshold exactly.
    Exact(Rat),
    /// Nontriviality persists arbitrarily close to the window floor.
    AtFloor,
    /// Nontrivial at `at` but the change could not be pinned down.
    Bracketed { below: Rat, at: Rat },
    AllTrivial,
}

/// Binary search over the sorted candidates (all inside (floor, hi]) for
/// the first t where the predicate flips from trivial to nontrivial, then
/// localize the flip with q-adic probes.
fn locate_first_nontrivial(
    cands: &[Rat],
    floor: &Rat,
    q: u64,
    weight: u64,
    budgets: &Budgets,
    trivial: &dyn Fn(&Rat) -> Result<bool>,
) -> Result<JumpLocation> {
    let mut lo = 0usize;
    let mut hi = cands.len();
    // invariant: everything before index lo is trivial, everything from
    // index hi on is nontrivial
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if trivial(&cands[mid])? {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if lo == cands.len() {
        return Ok(JumpLocation::AllTrivial);
    }
    let at = cands[lo].clone();
    let gap_floor = if lo > 0 {
        cands[lo - 1].clone()
    } else {
        floor.clone()
    };
    let width = &at - &gap_floor;
    let step = q_step(q, &width);
    let below_probe = &at - &step;
    if !chain_feasible(&below_probe, q, weight, budgets) {
        return Ok(JumpLocation::Bracketed {
            below: gap_floor,
            at,
        });
    }
    if trivial(&below_probe)? {
        // trivial just below, nontrivial at `at`, nothing representable in
        // (gap_floor, at): the jump is at `at`
        return Ok(JumpLocation::Exact(at));
    }
    if lo == 0 {
        // probe just above the floor: if still nontrivial there, the jump
        // clusters at the floor itself
        let above_probe = floor + &step;
        if above_probe < at
            && chain_feasible(&above_probe, q, weight, budgets)
            && !trivial(&above_probe)?
        {
            return Ok(JumpLocation::AtFloor);
        }
    }
    Ok(JumpLocation::Bracketed {
        below: gap_floor,
        at,
    })
}

/// The largest power 1/q^k strictly smaller than `width`.
fn q_step(q: u64, width: &Rat) -> Rat {
    let inv = Rat::new(1, q as i64);
    let mut step = inv.clone();
    while &step >= width {
        step = &step * &inv;
    }
    step
}

/// All rationals in (lo, hi] whose reduced denominator divides some
/// q^a(q^b - 1) <= denom_bound and whose stabilizing chain is feasible
/// within the exponent cap, sorted ascending.
fn family_candidates(
    q: u64,
    denom_bound: u64,
    lo: &Rat,
    hi: &Rat,
    weight: u64,
    budgets: &Budgets,
) -> Vec<Rat> {
    let mut denoms = std::collections::BTreeSet::new();
    let mut d = 1u64;
    while d <= denom_bound {
        denoms.insert(d);
        match d.checked_mul(q) {
            Some(n) => d = n,
            None => break,
        }
    }
    let mut qb = q;
    while qb - 1 <= denom_bound {
        let mut d = qb - 1;
        while d > 0 && d <= denom_bound {
            denoms.insert(d);
            match d.checked_mul(q) {
                Some(n) => d = n,
                None => break,
            }
        }
        match qb.checked_mul(q) {
            Some(n) => qb = n,
            None => break,
        }
    }
    let mut set = std::collections::BTreeSet::new();
    for d in denoms {
        let dd = Rat::from_int(d as i64);
        let mut u: num::BigInt = (lo * &dd).floor_int() + 1;
        let top = (hi * &dd).floor_int();
        while u <= top {
            let cand = Rat::from_big(u.clone(), num::BigInt::from(d));
            if &cand > lo && &cand <= hi && chain_feasible(&cand, q, weight, budgets) {
                set.insert(cand);
            }
            u += 1;
        }
    }
    set.into_iter().collect()
}

/// Bounds on the pair threshold fpt(A, Delta; a). Requires the pair
/// (A, Delta) itself to be verifiably sharply F-pure.
pub fn fpt_pair_bounds(
    div: &DivisorSpec,
    a: &IdealHandle,
    n_max: u32,
    budgets: &Budgets,
) -> Result<FptBounds> {
    if a.is_zero_ideal() {
        return Err(Error::Precondition(
            "pair threshold requires a nonzero ideal".into(),
        ));
    }
    if a.is_unit_ideal(budgets)? {
        return Err(Error::Precondition(
            "pair threshold requires a proper ideal".into(),
        ));
    }
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be >= 1".into()));
    }
    let p = a.char().get();
    let e = div.e.max(1);
    let q = p
        .checked_pow(e)
        .filter(|&v| v <= budgets.exponent_cap as u64)
        .ok_or(Error::ExponentCap {
            cap: budgets.exponent_cap,
        })?;

    // sharp F-purity of (A, Delta) itself
    if !div.is_zero() {
        let f = div.f.as_ref().expect("nonzero divisor");
        let purity = fedder_pair_check(f, e, a, &Rat::zero(), n_max, budgets)?;
        if matches!(purity, FedderDecision::Unknown) {
            return Err(Error::PairNotFPure);
        }
    }

    // mu-invariants, cached per level: sweep levels n <= n_max feed the
    // lower bound; additional small levels sharpen candidate decisions
    let pair_mu = |n: u32| -> Result<i64> {
        match &div.f {
            Some(f) if !div.is_zero() => mu_invariant(f, e, a, n, budgets),
            _ => mu_invariant_zero_divisor(a, e, n, budgets),
        }
    };
    let mut mu_levels: Vec<(u32, u64, i64)> = Vec::new();
    let mut qn: u64 = 1;
    let mut n = 0u32;
    loop {
        n += 1;
        qn = match qn.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
        let within_sweep = n <= n_max && qn <= budgets.exponent_cap as u64;
        let within_extension = qn <= PAIR_LEVEL_CAP;
        if !within_sweep && !within_extension {
            break;
        }
        let mu = match pair_mu(n) {
            Ok(mu) => mu,
            Err(err) if within_sweep => return Err(err),
            Err(_) => break,
        };
        mu_levels.push((n, qn, mu));
    }

    // lower bound: sup over sweep levels of mu_n/(q^n - 1)
    let mut lower = Rat::zero();
    let mut lower_witness = LowerWitness::Mu { n: 0, mu: 0 };
    for &(n, qn, mu) in &mu_levels {
        if n <= n_max && mu >= 0 {
            let lo = Rat::new(mu, (qn - 1) as i64);
            if lo > lower {
                lower = lo;
                lower_witness = LowerWitness::Mu { n, mu };
            }
        }
    }

    let dim = a.nvars() as u64;
    let mut upper = Rat::from_int(dim as i64);
    let mut upper_witness = UpperWitness::Dim { dim };

    // Candidates t in (lower, dim] with t(q^n - 1) integral at a cached
    // level are decided there: mu_n >= t(q^n - 1) certifies sharp F-purity
    // at t, hence t <= fpt; a level with integral exponent refuting every
    // compatible check certifies t > fpt up to the level cap, because
    // mu_n/(q^n - 1) is non-decreasing along compatible levels and
    // converges to fpt.
    let decided = |t: &Rat| -> Option<(bool, u32)> {
        let mut compatible: Option<u32> = None;
        for &(n, qn, mu) in &mu_levels {
            if mu < 0 {
                continue;
            }
            let needed = t * &Rat::from_int((qn - 1) as i64);
            if !needed.is_integer() {
                continue;
            }
            if compatible.is_none() {
                compatible = Some(n);
            }
            if needed <= Rat::from_int(mu) {
                return Some((true, n));
            }
        }
        compatible.map(|n| (false, n))
    };

    let mut candidates = std::collections::BTreeSet::new();
    for &(_, qn, mu) in &mu_levels {
        if mu < 0 {
            continue;
        }
        let m = qn - 1;
        for dnm in 1..=budgets.denom_bound.min(m.max(1)) {
            if m % dnm != 0 {
                continue;
            }
            let dd = Rat::from_int(dnm as i64);
            let mut u: num::BigInt = (&lower * &dd).floor_int() + 1;
            let top = (&upper * &dd).floor_int();
            while u <= top {
                let cand = Rat::from_big(u.clone(), num::BigInt::from(dnm));
                if cand > lower && cand <= upper {
                    candidates.insert(cand);
                }
                u += 1;
            }
        }
    }

    let mut best_true: Option<(Rat, u32)> = None;
    let mut first_false_above: Option<(Rat, u32)> = None;
    for t in &candidates {
        match decided(t) {
            Some((true, n)) => {
                best_true = Some((t.clone(), n));
                first_false_above = None;
            }
            Some((false, n)) => {
                if first_false_above.is_none() {
                    first_false_above = Some((t.clone(), n));
                }
            }
            None => {}
        }
    }

    if let Some((ct, n)) = best_true {
        if ct > lower {
            let mu = mu_levels.iter().find(|l| l.0 == n).map_or(0, |l| l.2);
            lower = ct;
            lower_witness = LowerWitness::Mu { n, mu };
        }
    }
    if let Some((tf, n)) = first_false_above {
        if lower > Rat::zero() {
            // purity attained at `lower`, refuted at the next representable
            // point: the threshold is `lower`
            return Ok(FptBounds {
                exact: Some(lower.clone()),
                upper: lower.clone(),
                upper_witness: UpperWitness::MuRefuted { n, t: tf },
                lower,
                lower_witness,
            });
        }
        if tf < upper {
            upper = tf.clone();
            upper_witness = UpperWitness::MuRefuted { n, t: tf };
        }
    }
    if lower > upper {
        lower = upper.clone();
    }
    let exact = (lower == upper).then(|| lower.clone());
    Ok(FptBounds {
        lower,
        upper,
        exact,
        lower_witness,
        upper_witness,
    })
}

/// Cap on q^n for the extended mu-levels used to decide pair candidates;
/// the frontier walk is quadratic in this bound.
const PAIR_LEVEL_CAP: u64 = 4096;

/// The reduction of a pair threshold question to a plain ideal: for
/// t = u/v > 0, b = (f^v) * a^{u(p^e - 1)} with threshold 1/(v(p^e - 1)).
pub fn reduce_pair_to_ideal(
    f: &Poly,
    e: u32,
    a: &IdealHandle,
    t: &Rat,
    budgets: &Budgets,
) -> Result<(IdealHandle, Rat)> {
    use num::ToPrimitive;
    if t.is_zero() || t.is_negative() {
        return Err(Error::Precondition("reduction requires t = u/v > 0".into()));
    }
    let u = t
        .numer()
        .to_u64()
        .ok_or_else(|| Error::Precondition("numerator too large".into()))?;
    let v = t
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Precondition("denominator too large".into()))?;
    let p = f.char().get();
    let pe1 = p
        .checked_pow(e)
        .and_then(|x| x.checked_sub(1))
        .ok_or(Error::ExponentCap {
            cap: budgets.exponent_cap,
        })?;
    let fv = f.pow(v)?;
    let au = a.ideal_power(
        u.checked_mul(pe1).ok_or(Error::ExponentCap {
            cap: budgets.exponent_cap,
        })?,
        budgets,
    )?;
    let b = au.scale_by_poly(&fv)?;
    let threshold = Rat::from_big(
        num::BigInt::from(1u32),
        num::BigInt::from(v) * num::BigInt::from(pe1),
    );
    Ok((b, threshold))
}

/// Strong F-regularity of the pair encoded by `mix`: the test ideal must
/// be trivial with a stable chain; an unstable chain is an error, never
/// a boolean.
pub fn strongly_fregular(mix: &MixedExponent, budgets: &Budgets) -> Result<bool> {
    let r = test_ideal(mix, budgets.e_max, budgets)?;
    if !r.stable {
        return Err(Error::Unstable);
    }
    r.ideal.is_unit_ideal(budgets)
}

/// fpt(A; (f)) as the first jumping number of t -> tau(f^t); independent
/// of the nu-sweep, used as a cross-check.
pub fn fpt_via_first_jump(f: &Poly, budgets: &Budgets) -> Result<Rat> {
    if f.is_zero() || !f.in_maximal_ideal() {
        return Err(Error::Precondition(
            "fpt requires nonzero f without constant term".into(),
        ));
    }
    let a = IdealHandle::principal(f.clone());
    let report = jumping_numbers(&DivisorSpec::zero(), &a, &Rat::zero(), &Rat::one(), budgets)?;
    let first = match report.jumps.first() {
        Some(j) => j,
        None => return Err(Error::Unresolved),
    };
    // an unresolved interval below the first detected jump leaves the
    // first jumping number uncertified
    if report.unresolved.iter().any(|(a, _)| a < &first.t) {
        return Err(Error::Unresolved);
    }
    Ok(first.t.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, PrimeChar};
    use crate::testideal::Factor;

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
    fn fpt_of_a_coordinate() {
        let r = fpt_bounds(&poly("x", 2, 5), 2, &b()).unwrap();
        assert_eq!(r.exact, Some(Rat::one()));
        assert_eq!(r.lower, Rat::one());
        assert_eq!(r.upper, Rat::one());
    }

    #[test]
    fn fpt_of_the_cusp() {
        let r = fpt_bounds(&poly("x^2 + y^3", 2, 7), 3, &b()).unwrap();
        assert_eq!(r.exact, Some(rat("5/6")));
    }

    #[test]
    fn fpt_of_a_square() {
        let r = fpt_bounds(&poly("x^2", 1, 2), 3, &b()).unwrap();
        assert_eq!(r.exact, Some(rat("1/2")));
        assert!(matches!(r.upper_witness, UpperWitness::TauJump { .. }));
    }

    #[test]
    fn bounds_tighten_with_depth() {
        let f = poly("x^2 + y^3", 2, 5);
        let mut prev_lower = Rat::zero();
        let mut prev_upper = Rat::from_int(10);
        for n_max in 1..=3 {
            let r = fpt_bounds(&f, n_max, &b()).unwrap();
            assert!(r.lower >= prev_lower);
            assert!(r.upper <= prev_upper);
            assert!(r.lower <= r.upper);
            prev_lower = r.lower;
            prev_upper = r.upper;
        }
    }

    #[test]
    fn candidate_window_enumeration() {
        let c = family_candidates(2, 10, &rat("1/3"), &rat("1/2"), 2, &b());
        assert!(c.contains(&rat("1/2")));
        assert!(c.contains(&rat("3/7")));
        assert!(!c.contains(&rat("1/3")));
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        for x in &c {
            assert!(x > &rat("1/3") && x <= &rat("1/2"));
        }
    }

    #[test]
    fn pair_bounds_examples() {
        // Delta = div(xy)/2, p=3, a = (x,y): exact 1
        let div = DivisorSpec::new(poly("x*y", 2, 3), 1, rat("1/2")).unwrap();
        let a = ideal(&["x", "y"], 2, 3);
        let r = fpt_pair_bounds(&div, &a, 3, &b()).unwrap();
        assert_eq!(r.exact, Some(Rat::one()));

        // Delta = div(x), a = (y), p=2: exact 1
        let div = DivisorSpec::new(poly("x", 2, 2), 1, Rat::one()).unwrap();
        let a = ideal(&["y"], 2, 2);
        let r = fpt_pair_bounds(&div, &a, 3, &b()).unwrap();
        assert_eq!(r.exact, Some(Rat::one()));

        // Delta = div(x^2), p=2, a=(y): not sharply F-pure
        let div = DivisorSpec::new(poly("x^2", 2, 2), 1, Rat::one()).unwrap();
        let a = ideal(&["y"], 2, 2);
        match fpt_pair_bounds(&div, &a, 3, &b()) {
            Err(Error::PairNotFPure) => {}
            other => panic!("expected PairNotFPure, got {other:?}"),
        }
    }

    #[test]
    fn pair_bounds_zero_divisor_maximal_ideal() {
        // fpt(A; m) = dim A = 2
        let a = ideal(&["x", "y"], 2, 2);
        let r = fpt_pair_bounds(&DivisorSpec::zero(), &a, 3, &b()).unwrap();
        assert_eq!(r.exact, Some(Rat::from_int(2)));
    }

    #[test]
    fn reduction_examples() {
        let (bi, th) = reduce_pair_to_ideal(
            &poly("x", 2, 2),
            1,
            &ideal(&["y"], 2, 2),
            &Rat::one(),
            &b(),
        )
        .unwrap();
        assert!(bi.ideal_equal(&ideal(&["x*y"], 2, 2), &b()).unwrap());
        assert_eq!(th, Rat::one());

        let (bi, th) = reduce_pair_to_ideal(
            &poly("x*y", 2, 3),
            1,
            &ideal(&["x", "y"], 2, 3),
            &rat("1/2"),
            &b(),
        )
        .unwrap();
        assert!(bi
            .ideal_equal(&ideal(&["x^4*y^2", "x^3*y^3", "x^2*y^4"], 2, 3), &b())
            .unwrap());
        assert_eq!(th, rat("1/4"));

        assert!(reduce_pair_to_ideal(
            &poly("x", 2, 2),
            1,
            &ideal(&["y"], 2, 2),
            &Rat::zero(),
            &b()
        )
        .is_err());
    }

    #[test]
    fn strong_fregularity() {
        let x = poly("x", 2, 5);
        assert!(strongly_fregular(
            &MixedExponent::principal(x.clone(), rat("1/2")).unwrap(),
            &b()
        )
        .unwrap());
        assert!(!strongly_fregular(
            &MixedExponent::principal(x, Rat::one()).unwrap(),
            &b()
        )
        .unwrap());
        let cusp = poly("x^2 + y^3", 2, 7);
        assert!(!strongly_fregular(
            &MixedExponent::principal(cusp, rat("5/6")).unwrap(),
            &b()
        )
        .unwrap());
    }

    #[test]
    fn first_jump_cross_check() {
        assert_eq!(
            fpt_via_first_jump(&poly("x", 2, 3), &b()).unwrap(),
            Rat::one()
        );
        assert_eq!(
            fpt_via_first_jump(&poly("x^2", 1, 2), &b()).unwrap(),
            rat("1/2")
        );
        assert_eq!(
            fpt_via_first_jump(&poly("x^2 + y^3", 2, 7), &b()).unwrap(),
            rat("5/6")
        );
    }

    #[test]
    fn first_jump_agrees_with_bounds() {
        for (s, p) in [("x*y", 5), ("x^3", 3), ("x^2 + y^3", 7)] {
            let f = poly(s, 2, p);
            let bounds = fpt_bounds(&f, 3, &b()).unwrap();
            let jump = fpt_via_first_jump(&f, &b()).unwrap();
            assert!(jump >= bounds.lower && jump <= bounds.upper, "{s}");
            if let Some(e) = bounds.exact {
                assert_eq!(jump, e, "{s}");
            }
        }
    }

    #[test]
    fn reduction_connects_pair_to_ideal_triviality() {
        // t is at most the pair threshold exactly when the reduced ideal b
        // keeps a trivial test ideal just below its companion threshold
        let f = poly("x", 2, 2);
        let a = ideal(&["y"], 2, 2);
        let div = DivisorSpec::new(f.clone(), 1, Rat::one()).unwrap();
        let pair = fpt_pair_bounds(&div, &a, 3, &b()).unwrap();
        let fpt_pair = pair.exact.unwrap();
        for t in ["1/2", "1", "2"] {
            let t = rat(t);
            let (bi, th) = reduce_pair_to_ideal(&f, 1, &a, &t, &b()).unwrap();
            let just_below = &th * &rat("63/64");
            let mix = MixedExponent::new(vec![(Factor::Ideal(bi), just_below)]).unwrap();
            let r = test_ideal(&mix, b().e_max, &b()).unwrap();
            assert!(r.stable);
            let right = r.ideal.is_unit_ideal(&b()).unwrap();
            let left = t <= fpt_pair;
            assert_eq!(left, right, "t = {t:?}");
        }
    }
}
