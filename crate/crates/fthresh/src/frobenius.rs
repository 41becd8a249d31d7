//! Frobenius machinery: bracket powers, Frobenius roots, the nu- and
//! mu-invariants, and the sharp F-purity check for pairs, together with
//! the complete-intersection purity test.

use std::collections::BTreeSet;

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::groebner::IdealHandle;
use crate::poly::{Monomial, Poly};
use crate::rat::Rat;

/// Witness for a nu-invariant value: a monomial of the reduced power
/// f^r mod (x_1^q, ..., x_n^q) with every exponent below q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuWitness {
    pub q: u64,
    pub r: u64,
    pub surviving_monomial: Monomial,
}

/// Outcome of the sharp F-purity check for a pair. The criterion is
/// existential over all levels n, so exhausting the cap is never a
/// refutation: the negative outcome is `Unknown`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FedderDecision {
    Pure { n: u32, witness: Option<Monomial> },
    Unknown,
}

/// The bracket power I^{[q]}, generated by q-th powers of the generators.
pub fn bracket_power(ideal: &IdealHandle, q: u64) -> Result<IdealHandle> {
    ideal.char().log_q(q)?;
    let gens = ideal
        .generators()
        .iter()
        .map(|g| g.pow(q))
        .collect::<Result<Vec<_>>>()?;
    Ok(IdealHandle::with_order(
        ideal.char(),
        ideal.nvars(),
        gens,
        ideal.order(),
    ))
}

/// Membership of f in m^{[q]} = (x_1^q, ..., x_n^q): every monomial must
/// have some exponent at least q. The zero polynomial is a member.
pub fn in_bracket_m(f: &Poly, q: u64) -> bool {
    f.surviving_monomial(q).is_none()
}

/// The largest r with f^r not in m^{[q]}, plus a surviving monomial.
/// Requires f in m and nonzero; then r < nvars*(q-1)+1 and survival is
/// monotone in r, so doubling followed by binary search applies.
pub fn nu_invariant(f: &Poly, q: u64) -> Result<(u64, NuWitness)> {
    f.char().log_q(q)?;
    if f.is_zero() {
        return Err(Error::Precondition("nu-invariant of the zero polynomial".into()));
    }
    if !f.in_maximal_ideal() {
        return Err(Error::Precondition(
            "nu-invariant requires f without constant term".into(),
        ));
    }
    let survives = |r: u64| -> Result<Option<Monomial>> {
        Ok(f.power_reduced(r, q)?.surviving_monomial(q).cloned())
    };
    // doubling until death
    let hard_cap = f.nvars() as u64 * (q - 1) + 1;
    let mut hi = 1u64;
    while hi <= hard_cap && survives(hi)?.is_some() {
        hi *= 2;
    }
    let mut lo = hi / 2; // survives (or 0)
    // binary search on the death boundary: survives(lo), dies at hi
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if survives(mid)?.is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let surviving_monomial = survives(lo)?.expect("boundary survives");
    Ok((
        lo,
        NuWitness {
            q,
            r: lo,
            surviving_monomial,
        },
    ))
}

/// mu_n for the pair data (f, e, a): with q = p^e and Q = q^n, the largest
/// r such that f^{(Q-1)/(q-1)} times some r-fold product of the generators
/// of a survives in A/(x_1^Q, ..., x_n^Q). Returns -1 when the f-part is
/// already inside m^{[Q]}.
pub fn mu_invariant(
    f: &Poly,
    e: u32,
    a: &IdealHandle,
    n: u32,
    budgets: &Budgets,
) -> Result<i64> {
    Ok(mu_invariant_with_witnesses(f, e, a, n, budgets)?.0)
}

/// As `mu_invariant`, also returning one surviving monomial per level
/// r = 0..=mu (used to produce purity witnesses).
pub fn mu_invariant_with_witnesses(
    f: &Poly,
    e: u32,
    a: &IdealHandle,
    n: u32,
    budgets: &Budgets,
) -> Result<(i64, Vec<Monomial>)> {
    if f.is_zero() || !f.in_maximal_ideal() {
        return Err(Error::Precondition(
            "mu-invariant requires nonzero f without constant term".into(),
        ));
    }
    if e < 1 || n < 1 {
        return Err(Error::Precondition("mu-invariant requires e, n >= 1".into()));
    }
    if a.is_zero_ideal() {
        return Err(Error::Precondition("mu-invariant requires a nonzero ideal".into()));
    }
    let p = f.char().get();
    let q = checked_pow(p, e, budgets)?;
    let big_q = checked_pow(q, n, budgets)?;
    // (Q - 1)/(q - 1) = 1 + q + ... + q^{n-1}
    let exponent = (0..n).try_fold(0u64, |acc, i| {
        checked_pow(q, i, budgets).map(|t| acc + t)
    })?;

    let base = f.power_reduced(exponent, big_q)?;
    if base.is_zero() {
        return Ok((-1, Vec::new()));
    }
    let mut witnesses = vec![base
        .surviving_monomial(big_q)
        .expect("nonzero reduced poly")
        .clone()];
    let mut frontier: BTreeSet<Poly> = BTreeSet::new();
    frontier.insert(base);
    let mut r: i64 = 0;
    loop {
        let mut next: BTreeSet<Poly> = BTreeSet::new();
        for h in &frontier {
            for g in a.generators() {
                let prod = h.mul_reduced(g, big_q)?;
                if !prod.is_zero() {
                    next.insert(prod);
                }
            }
            if next.len() > budgets.max_frontier {
                return Err(Error::BudgetExceeded {
                    what: format!("mu-invariant frontier > {}", budgets.max_frontier),
                });
            }
        }
        if next.is_empty() {
            return Ok((r, witnesses));
        }
        witnesses.push(
            next.iter()
                .next()
                .unwrap()
                .surviving_monomial(big_q)
                .expect("nonzero reduced poly")
                .clone(),
        );
        frontier = next;
        r += 1;
    }
}

/// mu_n for a pair with zero divisor part: the largest r such that some
/// r-fold product of the generators of a survives in A/(x_1^Q, ..., x_n^Q)
/// with Q = (p^e)^n. Always >= 0 for a nonzero proper ideal a.
pub fn mu_invariant_zero_divisor(
    a: &IdealHandle,
    e: u32,
    n: u32,
    budgets: &Budgets,
) -> Result<i64> {
    if e < 1 || n < 1 {
        return Err(Error::Precondition("mu-invariant requires e, n >= 1".into()));
    }
    if a.is_zero_ideal() {
        return Err(Error::Precondition("mu-invariant requires a nonzero ideal".into()));
    }
    let p = a.char().get();
    let q = checked_pow(p, e, budgets)?;
    let big_q = checked_pow(q, n, budgets)?;
    let base = Poly::one(a.char(), a.nvars());
    let mut frontier: BTreeSet<Poly> = BTreeSet::new();
    frontier.insert(base);
    let mut r: i64 = 0;
    loop {
        let mut next: BTreeSet<Poly> = BTreeSet::new();
        for h in &frontier {
            for g in a.generators() {
                let prod = h.mul_reduced(g, big_q)?;
                if !prod.is_zero() {
                    next.insert(prod);
                }
            }
            if next.len() > budgets.max_frontier {
                return Err(Error::BudgetExceeded {
                    what: format!("mu-invariant frontier > {}", budgets.max_frontier),
                });
            }
        }
        if next.is_empty() {
            return Ok(r);
        }
        frontier = next;
        r += 1;
    }
}

/// Sharp F-purity of the pair ((A, f^{t'} with a-part), a^t) via the
/// level-n criterion: PURE at the least n <= n_max with
/// ceil(t (q^n - 1)) <= mu_n; otherwise UNKNOWN.
pub fn fedder_pair_check(
    f: &Poly,
    e: u32,
    a: &IdealHandle,
    t: &Rat,
    n_max: u32,
    budgets: &Budgets,
) -> Result<FedderDecision> {
    if t.is_negative() {
        return Err(Error::Precondition("exponent t must be nonnegative".into()));
    }
    let p = f.char().get();
    for n in 1..=n_max {
        let q = checked_pow(p, e, budgets)?;
        let big_q = checked_pow(q, n, budgets)?;
        let needed = (t * &Rat::from_int((big_q - 1) as i64)).ceil_u64().ok_or_else(|| {
            Error::Precondition("t(q^n - 1) must be nonnegative".into())
        })?;
        let (mu, witnesses) = mu_invariant_with_witnesses(f, e, a, n, budgets)?;
        if mu >= 0 && needed as i64 <= mu {
            let witness = witnesses.get(needed as usize).cloned();
            return Ok(FedderDecision::Pure { n, witness });
        }
    }
    Ok(FedderDecision::Unknown)
}

/// The Frobenius root I^{[1/q]}: the smallest J with I contained in
/// J^{[q]}. Each generator h splits uniquely as sum of g_b^q x^b over the
/// monomial basis {x^b : exponents < q}; the root is generated by all g_b.
pub fn frobenius_root(ideal: &IdealHandle, q: u64) -> Result<IdealHandle> {
    ideal.char().log_q(q)?;
    let char = ideal.char();
    let nvars = ideal.nvars();
    let mut gens: BTreeSet<Poly> = BTreeSet::new();
    for h in ideal.generators() {
        let mut parts: std::collections::BTreeMap<Monomial, Vec<(Monomial, u64)>> =
            Default::default();
        for (m, c) in h.terms() {
            let mut beta = Vec::with_capacity(nvars);
            let mut alpha = Vec::with_capacity(nvars);
            for &exp in m.exponents() {
                beta.push((exp as u64 % q) as u32);
                alpha.push((exp as u64 / q) as u32);
            }
            // coefficients of F_p are fixed by the q-th power map
            parts
                .entry(Monomial::new(beta))
                .or_default()
                .push((Monomial::new(alpha), c));
        }
        for (_, terms) in parts {
            let g = Poly::from_terms(char, nvars, terms);
            if !g.is_zero() {
                gens.insert(g);
            }
        }
    }
    Ok(IdealHandle::with_order(
        char,
        nvars,
        gens.into_iter().collect(),
        ideal.order(),
    ))
}

/// Report of the complete-intersection purity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiReport {
    pub is_fpure_ci: bool,
    pub emb_bound: i64,
    pub witness: Option<Monomial>,
}

/// Sharp F-purity of a complete intersection cut out by the given factors:
/// the product to the (p-1)-st power must survive modulo m^{[p]}. The
/// regular-sequence hypothesis on the factors is not verified here.
pub fn ci_check(factors: &[Poly], budgets: &Budgets) -> Result<CiReport> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Precondition("empty factor list".into()))?;
    let char = first.char();
    let p = char.get();
    let nvars = first.nvars();
    let mut product = Poly::one(char, nvars);
    for f in factors {
        if f.is_zero() || !f.in_m_squared() {
            return Err(Error::Precondition(
                "each factor must be nonzero and lie in m^2".into(),
            ));
        }
        product = product.mul(f)?;
    }
    let _ = budgets;
    let reduced = product.power_reduced(p - 1, p)?;
    let witness = reduced.surviving_monomial(p).cloned();
    Ok(CiReport {
        is_fpure_ci: witness.is_some(),
        emb_bound: 2 * (nvars as i64 - factors.len() as i64),
        witness,
    })
}

fn checked_pow(base: u64, exp: u32, budgets: &Budgets) -> Result<u64> {
    let v = base
        .checked_pow(exp)
        .ok_or(Error::ExponentCap {
            cap: budgets.exponent_cap,
        })?;
    if v > budgets.exponent_cap as u64 {
        return Err(Error::ExponentCap {
            cap: budgets.exponent_cap,
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, PrimeChar};

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

    #[test]
    fn bracket_powers() {
        let m = ideal(&["x", "y"], 2, 2);
        let m4 = bracket_power(&m, 4).unwrap();
        assert!(m4
            .ideal_equal(&ideal(&["x^4", "y^4"], 2, 2), &b())
            .unwrap());
        let s = ideal(&["x+y"], 2, 3);
        let s3 = bracket_power(&s, 3).unwrap();
        assert!(s3.ideal_equal(&ideal(&["x^3+y^3"], 2, 3), &b()).unwrap());
        let u = IdealHandle::unit(pc(3), 2);
        assert!(bracket_power(&u, 9)
            .unwrap()
            .is_unit_ideal(&b())
            .unwrap());
        assert!(bracket_power(&m, 6).is_err());
    }

    #[test]
    fn bracket_membership() {
        let q = 8;
        assert!(!in_bracket_m(&poly("x^7*y^7", 2, 2), q));
        assert!(in_bracket_m(&poly("x^8", 2, 2), q));
        assert!(in_bracket_m(&Poly::zero(pc(2), 2), q));
    }

    #[test]
    fn nu_values() {
        let (r, w) = nu_invariant(&poly("x", 1, 2), 8).unwrap();
        assert_eq!(r, 7);
        assert_eq!(w.surviving_monomial, Monomial::new(vec![7]));
        let (r, _) = nu_invariant(&poly("x*y", 2, 3), 9).unwrap();
        assert_eq!(r, 8);
        let (r, _) = nu_invariant(&poly("x^2 + y^3", 2, 7), 7).unwrap();
        assert_eq!(r, 5);
        assert!(nu_invariant(&poly("x + 1", 1, 2), 2).is_err());
        assert!(nu_invariant(&Poly::zero(pc(2), 1), 2).is_err());
    }

    #[test]
    fn nu_scaling() {
        // nu(p^{e+1}) >= p * nu(p^e)
        for s in ["x^2 + y^3", "x*y", "x^3 + x*y^2"] {
            for p in [2u64, 3, 5] {
                let f = poly(s, 2, p);
                let (n1, _) = nu_invariant(&f, p).unwrap();
                let (n2, _) = nu_invariant(&f, p * p).unwrap();
                assert!(n2 >= p * n1, "{s} p={p}: {n2} < {p}*{n1}");
            }
        }
    }

    #[test]
    fn mu_values() {
        let mu = mu_invariant(&poly("x*y", 2, 3), 1, &ideal(&["x", "y"], 2, 3), 1, &b()).unwrap();
        assert_eq!(mu, 2);
        let mu = mu_invariant(&poly("x^2", 2, 2), 1, &ideal(&["y"], 2, 2), 1, &b()).unwrap();
        assert_eq!(mu, -1);
        let mu = mu_invariant(&poly("x", 2, 2), 1, &ideal(&["y"], 2, 2), 2, &b()).unwrap();
        assert_eq!(mu, 3);
    }

    #[test]
    fn fedder_examples() {
        let d = fedder_pair_check(
            &poly("x*y", 2, 2),
            1,
            &ideal(&["x", "y"], 2, 2),
            &Rat::zero(),
            1,
            &b(),
        )
        .unwrap();
        match d {
            FedderDecision::Pure { n: 1, witness } => {
                assert_eq!(witness, Some(Monomial::new(vec![1, 1])));
            }
            other => panic!("expected PURE(1), got {other:?}"),
        }

        let d = fedder_pair_check(
            &poly("x^2", 2, 2),
            1,
            &ideal(&["y"], 2, 2),
            &Rat::zero(),
            5,
            &b(),
        )
        .unwrap();
        assert_eq!(d, FedderDecision::Unknown);

        let d = fedder_pair_check(
            &poly("x*y", 2, 3),
            1,
            &ideal(&["x", "y"], 2, 3),
            &Rat::one(),
            2,
            &b(),
        )
        .unwrap();
        assert!(matches!(d, FedderDecision::Pure { n: 1, .. }));
    }

    #[test]
    fn roots() {
        let q = 8;
        let r = frobenius_root(&ideal(&["x^8"], 1, 2), q).unwrap();
        assert!(r.ideal_equal(&ideal(&["x"], 1, 2), &b()).unwrap());
        let r = frobenius_root(&ideal(&["x^7"], 1, 2), q).unwrap();
        assert!(r.is_unit_ideal(&b()).unwrap());
        let r = frobenius_root(&ideal(&["x^9"], 1, 2), q).unwrap();
        assert!(r.ideal_equal(&ideal(&["x"], 1, 2), &b()).unwrap());
    }

    #[test]
    fn root_monomial_formula() {
        for a in 0u32..20 {
            for q in [2u64, 4, 8] {
                let f = Poly::from_terms(pc(2), 1, vec![(Monomial::new(vec![a]), 1)]);
                let root = frobenius_root(&IdealHandle::principal(f), q).unwrap();
                let expect_exp = a as u64 / q;
                let expect = Poly::from_terms(
                    pc(2),
                    1,
                    vec![(Monomial::new(vec![expect_exp as u32]), 1)],
                );
                assert!(root
                    .ideal_equal(&IdealHandle::principal(expect), &b())
                    .unwrap());
            }
        }
    }

    #[test]
    fn root_adjunction_and_composition() {
        let samples = [
            ideal(&["x^3 + y^5", "x*y^2"], 2, 3),
            ideal(&["x^2*y^4"], 2, 3),
            ideal(&["x + y", "y^7"], 2, 3),
        ];
        for i in &samples {
            for q in [3u64, 9] {
                let root = frobenius_root(i, q).unwrap();
                let back = bracket_power(&root, q).unwrap();
                assert!(back.contains_ideal(i, &b()).unwrap(), "adjunction fails");
            }
            let twice = frobenius_root(&frobenius_root(i, 3).unwrap(), 9).unwrap();
            let once = frobenius_root(i, 27).unwrap();
            assert!(twice.ideal_equal(&once, &b()).unwrap(), "composition fails");
        }
    }

    #[test]
    fn ci_reports() {
        let r = ci_check(&[poly("x*y", 2, 2)], &b()).unwrap();
        assert!(r.is_fpure_ci);
        assert_eq!(r.emb_bound, 2);
        let r = ci_check(&[poly("x^2", 2, 2)], &b()).unwrap();
        assert!(!r.is_fpure_ci);
        let r = ci_check(&[poly("x*y + z^2", 3, 3)], &b()).unwrap();
        assert!(r.is_fpure_ci);
        assert_eq!(r.emb_bound, 4);
        assert!(ci_check(&[], &b()).is_err());
        assert!(ci_check(&[poly("x", 2, 2)], &b()).is_err());
    }
}
