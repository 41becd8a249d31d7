//! Canonical ideal arithmetic over F_p[x_1..x_n] via reduced Groebner
//! bases, so containment and equality of ideals are decidable.
//!
//! Buchberger's algorithm with the Gebauer-Moeller pair-elimination
//! criteria. All canonical forms are relative to a fixed monomial order;
//! the order tag travels with the handle and is part of every report.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, PrimeChar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (default).
    #[default]
    #[serde(rename = "grevlex")]
    GrevLex,
    #[serde(rename = "lex")]
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self {
            MonomialOrder::Lex => a.exponents().cmp(b.exponents()),
            MonomialOrder::GrevLex => {
                let da = a.total_degree();
                let db = b.total_degree();
                if da != db {
                    return da.cmp(&db);
                }
                for (x, y) in a.exponents().iter().rev().zip(b.exponents().iter().rev()) {
                    if x != y {
                        // smaller trailing exponent is larger in grevlex
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Finitely generated ideal with a lazily computed reduced Groebner basis.
///
/// The basis cache behaves as a write-once cell: handles are otherwise
/// immutable and safe to share across threads.
#[derive(Debug)]
pub struct IdealHandle {
    char: PrimeChar,
    nvars: usize,
    generators: Vec<Poly>,
    order: MonomialOrder,
    basis: OnceLock<Vec<Poly>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        IdealHandle {
            char: self.char,
            nvars: self.nvars,
            generators: self.generators.clone(),
            order: self.order,
            basis,
        }
    }
}

impl IdealHandle {
    pub fn new(char: PrimeChar, nvars: usize, generators: Vec<Poly>) -> Self {
        Self::with_order(char, nvars, generators, MonomialOrder::default())
    }

    pub fn with_order(
        char: PrimeChar,
        nvars: usize,
        generators: Vec<Poly>,
        order: MonomialOrder,
    ) -> Self {
        let generators: Vec<Poly> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        debug_assert!(generators
            .iter()
            .all(|g| g.char() == char && g.nvars() == nvars));
        IdealHandle {
            char,
            nvars,
            generators,
            order,
            basis: OnceLock::new(),
        }
    }

    pub fn zero(char: PrimeChar, nvars: usize) -> Self {
        IdealHandle::new(char, nvars, vec![])
    }

    pub fn unit(char: PrimeChar, nvars: usize) -> Self {
        IdealHandle::new(char, nvars, vec![Poly::one(char, nvars)])
    }

    pub fn principal(f: Poly) -> Self {
        let char = f.char();
        let nvars = f.nvars();
        IdealHandle::new(char, nvars, vec![f])
    }

    pub fn char(&self) -> PrimeChar {
        self.char
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// The unique reduced Groebner basis under the handle's order.
    /// Idempotent; caches on success. The zero ideal has an empty basis,
    /// the unit ideal the basis {1}.
    pub fn reduced_basis(&self, budgets: &Budgets) -> Result<&[Poly]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let computed = buchberger(self.char, self.nvars, &self.generators, self.order, budgets)?;
        let _ = self.basis.set(computed);
        Ok(self.basis.get().expect("just set"))
    }

    /// Ideal membership by multivariate division against the reduced basis.
    pub fn contains(&self, f: &Poly, budgets: &Budgets) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let basis = self.reduced_basis(budgets)?;
        Ok(normal_form(f, basis, self.order).is_zero())
    }

    pub fn contains_ideal(&self, other: &IdealHandle, budgets: &Budgets) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g, budgets)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff the reduced bases coincide termwise.
    pub fn ideal_equal(&self, other: &IdealHandle, budgets: &Budgets) -> Result<bool> {
        if self.order != other.order {
            return Ok(self.contains_ideal(other, budgets)?
                && other.contains_ideal(self, budgets)?);
        }
        Ok(self.reduced_basis(budgets)? == other.reduced_basis(budgets)?)
    }

    pub fn is_unit_ideal(&self, budgets: &Budgets) -> Result<bool> {
        let b = self.reduced_basis(budgets)?;
        Ok(b.len() == 1 && b[0].is_constant() && !b[0].is_zero())
    }

    /// Ideal generated by all r-fold products of the generators; I^0 = (1).
    pub fn ideal_power(&self, r: u64, budgets: &Budgets) -> Result<IdealHandle> {
        if r == 0 {
            return Ok(IdealHandle::unit(self.char, self.nvars));
        }
        if self.generators.is_empty() {
            return Ok(IdealHandle::zero(self.char, self.nvars));
        }
        let mut level: Vec<Poly> = self.generators.clone();
        for _ in 1..r {
            let mut next: std::collections::BTreeSet<Poly> = Default::default();
            for f in &level {
                for g in &self.generators {
                    next.insert(f.mul(g)?);
                }
                if next.len() > budgets.max_ideal_gens {
                    return Err(Error::BudgetExceeded {
                        what: format!("ideal power generators > {}", budgets.max_ideal_gens),
                    });
                }
            }
            level = next.into_iter().collect();
        }
        Ok(IdealHandle::with_order(
            self.char, self.nvars, level, self.order,
        ))
    }

    /// Product ideal I*J, generated by pairwise products of generators.
    pub fn ideal_product(&self, other: &IdealHandle, budgets: &Budgets) -> Result<IdealHandle> {
        let mut gens: std::collections::BTreeSet<Poly> = Default::default();
        for f in &self.generators {
            for g in &other.generators {
                gens.insert(f.mul(g)?);
                if gens.len() > budgets.max_ideal_gens {
                    return Err(Error::BudgetExceeded {
                        what: format!("ideal product generators > {}", budgets.max_ideal_gens),
                    });
                }
            }
        }
        Ok(IdealHandle::with_order(
            self.char,
            self.nvars,
            gens.into_iter().collect(),
            self.order,
        ))
    }

    /// Generators scaled by a single polynomial: f * I.
    pub fn scale_by_poly(&self, f: &Poly) -> Result<IdealHandle> {
        let gens = self
            .generators
            .iter()
            .map(|g| f.mul(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealHandle::with_order(
            self.char, self.nvars, gens, self.order,
        ))
    }
}

fn leading(f: &Poly, order: MonomialOrder) -> (Monomial, u64) {
    let (m, c) = f
        .terms()
        .max_by(|a, b| order.cmp(a.0, b.0))
        .expect("nonzero polynomial");
    (m.clone(), c)
}

/// Full normal form: every term of the remainder is reduced against every
/// leading term of the basis.
pub fn normal_form(f: &Poly, basis: &[Poly], order: MonomialOrder) -> Poly {
    let char = f.char();
    let nvars = f.nvars();
    let leads: Vec<(Monomial, u64)> = basis.iter().map(|g| leading(g, order)).collect();
    let mut work = f.clone();
    let mut remainder = Poly::zero(char, nvars);
    while !work.is_zero() {
        let (lt, lc) = leading(&work, order);
        let mut reduced = false;
        for (g, (gm, gc)) in basis.iter().zip(&leads) {
            if gm.divides(&lt) {
                let quot = gm.quotient(&lt);
                let coef = char.mul(lc, char.inv(*gc));
                let sub = g.mul_monomial(&quot, coef).expect("reduction product");
                work = work.sub(&sub).expect("compatible");
                reduced = true;
                break;
            }
        }
        if !reduced {
            // move the leading term to the remainder
            let t = Poly::from_terms(char, nvars, vec![(lt.clone(), lc)]);
            remainder = remainder.add(&t).expect("compatible");
            work = work.sub(&t).expect("compatible");
        }
    }
    remainder
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger with the Gebauer-Moeller update, returning the unique
/// reduced Groebner basis (monic, self-reduced, sorted by leading term).
pub fn buchberger(
    char: PrimeChar,
    nvars: usize,
    generators: &[Poly],
    order: MonomialOrder,
    budgets: &Budgets,
) -> Result<Vec<Poly>> {
    let mut basis: Vec<Poly> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0u64;

    for g in generators {
        if !g.is_zero() {
            add_generator(char, nvars, &mut basis, &mut pairs, g.clone(), order)?;
        }
    }

    while let Some(pos) = pick_pair(&pairs) {
        let pair = pairs.swap_remove(pos);
        processed += 1;
        if processed > budgets.max_pairs {
            return Err(Error::BudgetExceeded {
                what: format!("Buchberger pairs > {}", budgets.max_pairs),
            });
        }
        let s = s_polynomial(&basis[pair.i], &basis[pair.j], &pair.lcm, order)?;
        let reduced = normal_form(&s, &basis, order);
        if reduced.is_zero() {
            continue;
        }
        if reduced.total_degree() > budgets.max_degree as u64 {
            return Err(Error::BudgetExceeded {
                what: format!("Buchberger degree > {}", budgets.max_degree),
            });
        }
        add_generator(char, nvars, &mut basis, &mut pairs, reduced, order)?;
    }

    Ok(interreduce(char, nvars, basis, order))
}

fn pick_pair(pairs: &[Pair]) -> Option<usize> {
    // normal selection: smallest lcm degree first
    pairs
        .iter()
        .enumerate()
        .min_by_key(|(_, p)| p.lcm.total_degree())
        .map(|(i, _)| i)
}

fn s_polynomial(f: &Poly, g: &Poly, lcm: &Monomial, order: MonomialOrder) -> Result<Poly> {
    let char = f.char();
    let (fm, fc) = leading(f, order);
    let (gm, gc) = leading(g, order);
    let a = f.mul_monomial(&fm.quotient(lcm), char.inv(fc))?;
    let b = g.mul_monomial(&gm.quotient(lcm), char.inv(gc))?;
    a.sub(&b)
}

/// Gebauer-Moeller update: prune the pending pair set against the new
/// element, then add the surviving new pairs.
fn add_generator(
    _char: PrimeChar,
    _nvars: usize,
    basis: &mut Vec<Poly>,
    pairs: &mut Vec<Pair>,
    h: Poly,
    order: MonomialOrder,
) -> Result<()> {
    let (hm, _) = leading(&h, order);
    let t = basis.len();

    // drop old pairs strictly dominated by the newcomer
    pairs.retain(|p| {
        let (im, _) = leading(&basis[p.i], order);
        let (jm, _) = leading(&basis[p.j], order);
        !(hm.divides(&p.lcm) && p.lcm != im.lcm(&hm) && p.lcm != jm.lcm(&hm))
    });

    // candidate pairs with the newcomer
    let mut fresh: Vec<Pair> = (0..t)
        .map(|i| {
            let (im, _) = leading(&basis[i], order);
            Pair {
                i,
                j: t,
                lcm: im.lcm(&hm),
            }
        })
        .collect();

    // first Gebauer-Moeller criterion: keep a pair only if no other new
    // pair has a properly dividing lcm; among equal lcms keep one
    let mut keep = vec![true; fresh.len()];
    for a in 0..fresh.len() {
        if !keep[a] {
            continue;
        }
        for b in 0..fresh.len() {
            if a == b || !keep[a] {
                continue;
            }
            if keep[b] && fresh[b].lcm.divides(&fresh[a].lcm) && fresh[b].lcm != fresh[a].lcm {
                keep[a] = false;
            }
        }
    }
    let mut seen_lcms: Vec<Monomial> = Vec::new();
    for (idx, p) in fresh.iter().enumerate() {
        if keep[idx] && seen_lcms.contains(&p.lcm) {
            keep[idx] = false;
        } else if keep[idx] {
            seen_lcms.push(p.lcm.clone());
        }
    }

    // Buchberger's coprimality criterion
    for (idx, p) in fresh.iter().enumerate() {
        if !keep[idx] {
            continue;
        }
        let (im, _) = leading(&basis[p.i], order);
        let product = im.try_mul(&hm, u32::MAX).unwrap_or_else(|_| p.lcm.clone());
        if p.lcm == product {
            keep[idx] = false;
        }
    }

    let mut idx = 0;
    fresh.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
    pairs.extend(fresh);
    basis.push(h);
    Ok(())
}

/// Minimalize and tail-reduce to the unique reduced basis.
fn interreduce(
    char: PrimeChar,
    nvars: usize,
    mut basis: Vec<Poly>,
    order: MonomialOrder,
) -> Vec<Poly> {
    basis.retain(|g| !g.is_zero());
    if basis.is_empty() {
        return basis;
    }
    // minimal: no leading term divides another
    let leads: Vec<Monomial> = basis.iter().map(|g| leading(g, order).0).collect();
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let dominated = leads
            .iter()
            .enumerate()
            .any(|(j, l)| j != i && l.divides(&leads[i]) && (l != &leads[i] || j < i));
        if !dominated {
            minimal.push(g.clone());
        }
    }
    // tail-reduce each against the others and normalize to monic
    let mut reduced: Vec<Poly> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let nf = normal_form(&minimal[i], &others, order);
        if nf.is_zero() {
            continue;
        }
        let (_, lc) = leading(&nf, order);
        reduced.push(nf.scale(char.inv(lc)));
    }
    let _ = nvars;
    reduced.sort_by(|a, b| order.cmp(&leading(a, order).0, &leading(b, order).0));
    reduced
}
