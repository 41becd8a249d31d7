//! Sparse multivariate polynomials over a prime field F_p.
//!
//! Coefficients are least nonnegative residues, normalized at every step;
//! a stored coefficient is never 0 mod p and no monomial appears twice, so
//! structural equality is mathematical equality. The reduced-multiplication
//! kernel (`mul_reduced` / `power_reduced`) works in the quotient
//! A/(x_1^q, ..., x_n^q) and is the workhorse of every Frobenius
//! computation.

mod parser;

pub use parser::parse_poly;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on monomial exponents; exceeding it is an error, never
/// wraparound.
pub const DEFAULT_EXPONENT_CAP: u32 = 1 << 20;

/// A verified prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeChar(u64);

impl PrimeChar {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeChar(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Checks that q is a positive power p^k, k >= 1, and returns k.
    pub fn log_q(self, q: u64) -> Result<u32> {
        let mut v = q;
        let mut k = 0u32;
        while v > 1 && v % self.0 == 0 {
            v /= self.0;
            k += 1;
        }
        if v == 1 && k >= 1 {
            Ok(k)
        } else {
            Err(Error::NotPowerOfChar(q, self.0))
        }
    }

    #[inline]
    pub fn reduce(self, c: i64) -> u64 {
        c.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.0 != 0);
        // Fermat
        self.pow(a % self.0, self.0 - 2)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent vector; ordering is lexicographic on the exponents, used only
/// as the canonical storage key (monomial *orders* for Groebner bases live
/// in the `groebner` module).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn try_mul(&self, other: &Monomial, cap: u32) -> Result<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            let s = a.checked_add(b).ok_or(Error::ExponentCap { cap })?;
            if s > cap {
                return Err(Error::ExponentCap { cap });
            }
            out.push(s);
        }
        Ok(Monomial(out))
    }

    /// Componentwise divisibility: self | other.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    /// True when some exponent reaches q, i.e. the monomial lies in
    /// (x_1^q, ..., x_n^q).
    pub fn in_bracket(&self, q: u64) -> bool {
        self.0.iter().any(|&e| e as u64 >= q)
    }

    pub fn pow(&self, k: u32, cap: u32) -> Result<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for &a in &self.0 {
            let s = a.checked_mul(k).ok_or(Error::ExponentCap { cap })?;
            if s > cap {
                return Err(Error::ExponentCap { cap });
            }
            out.push(s);
        }
        Ok(Monomial(out))
    }
}

/// Sparse polynomial over F_p in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    char: PrimeChar,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl Poly {
    pub fn zero(char: PrimeChar, nvars: usize) -> Self {
        Poly {
            char,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(char: PrimeChar, nvars: usize) -> Self {
        Poly::constant(char, nvars, 1)
    }

    pub fn constant(char: PrimeChar, nvars: usize, c: i64) -> Self {
        let mut p = Poly::zero(char, nvars);
        let c = char.reduce(c);
        if c != 0 {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn variable(char: PrimeChar, nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Poly::from_terms(char, nvars, vec![(Monomial::new(exps), 1)])
    }

    pub fn from_terms(char: PrimeChar, nvars: usize, terms: Vec<(Monomial, u64)>) -> Self {
        let mut p = Poly::zero(char, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, c % char.get());
        }
        p
    }

    #[inline]
    pub fn char(&self) -> PrimeChar {
        self.char
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// True when f has no constant term, i.e. f lies in m = (x_1..x_n).
    pub fn in_maximal_ideal(&self) -> bool {
        !self.terms.keys().any(|m| m.is_one())
    }

    /// True when every monomial has total degree >= 2, i.e. f lies in m^2.
    pub fn in_m_squared(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() >= 2)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let p = self.char;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = p.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &Poly) -> Result<()> {
        if self.char != other.char {
            return Err(Error::CharMismatch(self.char.get(), other.char.get()));
        }
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.char, self.nvars);
        for (m, &c) in &self.terms {
            out.terms.insert(m.clone(), self.char.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Poly {
        let c = c % self.char.get();
        let mut out = Poly::zero(self.char, self.nvars);
        if c == 0 {
            return out;
        }
        for (m, &a) in &self.terms {
            out.terms.insert(m.clone(), self.char.mul(a, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Result<Poly> {
        let mut out = Poly::zero(self.char, self.nvars);
        let c = c % self.char.get();
        if c == 0 {
            return Ok(out);
        }
        for (mm, &a) in &self.terms {
            out.add_term(mm.try_mul(m, DEFAULT_EXPONENT_CAP)?, self.char.mul(a, c));
        }
        Ok(out)
    }

    /// Full product f*g.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.mul_impl(other, None)
    }

    /// Product in A/(x_1^q, ..., x_n^q): every monomial with an exponent
    /// reaching q is dropped.
    pub fn mul_reduced(&self, other: &Poly, q: u64) -> Result<Poly> {
        self.char.log_q(q)?;
        self.mul_impl(other, Some(q))
    }

    fn mul_impl(&self, other: &Poly, q: Option<u64>) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = Poly::zero(self.char, self.nvars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let m = m1.try_mul(m2, DEFAULT_EXPONENT_CAP)?;
                if let Some(q) = q {
                    if m.in_bracket(q) {
                        continue;
                    }
                }
                out.add_term(m, self.char.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// f^r by square-and-multiply; f^0 = 1.
    pub fn pow(&self, r: u64) -> Result<Poly> {
        self.pow_impl(r, None)
    }

    /// f^r in A/(x_1^q, ..., x_n^q), reducing at every step.
    pub fn power_reduced(&self, r: u64, q: u64) -> Result<Poly> {
        self.char.log_q(q)?;
        self.pow_impl(r, Some(q))
    }

    fn pow_impl(&self, r: u64, q: Option<u64>) -> Result<Poly> {
        let mut acc = Poly::one(self.char, self.nvars);
        if r == 0 {
            return Ok(acc);
        }
        let mut base = self.clone();
        if let Some(q) = q {
            base.terms.retain(|m, _| !m.in_bracket(q));
        }
        let mut exp = r;
        loop {
            if exp & 1 == 1 {
                acc = acc.mul_impl(&base, q)?;
                if acc.is_zero() {
                    return Ok(acc);
                }
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            base = base.mul_impl(&base, q)?;
        }
        Ok(acc)
    }

    /// Some monomial of f with all exponents < q, if any.
    pub fn surviving_monomial(&self, q: u64) -> Option<&Monomial> {
        self.terms.keys().find(|m| !m.in_bracket(q))
    }

    /// Variable names used for printing: x, y, z for up to three
    /// variables, x1..xn beyond.
    pub fn var_name(nvars: usize, index: usize) -> String {
        if nvars <= 3 {
            ["x", "y", "z"][index].to_string()
        } else {
            format!("x{}", index + 1)
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest degree first, ties broken by the storage order
        let mut terms: Vec<(&Monomial, u64)> = self.terms.iter().map(|(m, &c)| (m, c)).collect();
        terms.sort_by(|a, b| {
            b.0.total_degree()
                .cmp(&a.0.total_degree())
                .then_with(|| b.0.cmp(a.0))
        });
        for (i, (m, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(Poly::var_name(self.nvars, v)),
                    _ => factors.push(format!("{}^{}", Poly::var_name(self.nvars, v), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> PrimeChar {
        PrimeChar::new(v).unwrap()
    }

    #[test]
    fn prime_verification() {
        assert!(PrimeChar::new(2).is_ok());
        assert!(PrimeChar::new(97).is_ok());
        assert!(PrimeChar::new(1).is_err());
        assert!(PrimeChar::new(4).is_err());
        assert!(PrimeChar::new(91).is_err()); // 7*13
    }

    #[test]
    fn q_validation() {
        let p7 = p(7);
        assert_eq!(p7.log_q(49).unwrap(), 2);
        assert!(p7.log_q(1).is_err());
        assert!(p7.log_q(14).is_err());
    }

    #[test]
    fn mul_reduced_drops_high_exponents() {
        // (x, x^{q-1}, q) -> 0
        let p2 = p(2);
        let q = 8;
        let x = Poly::variable(p2, 1, 0);
        let x7 = x.pow(7).unwrap();
        assert!(x.mul_reduced(&x7, q).unwrap().is_zero());
    }

    #[test]
    fn frobenius_in_char_2() {
        // (x+y)^2 = x^2 + y^2 mod 2
        let p2 = p(2);
        let x = Poly::variable(p2, 2, 0);
        let y = Poly::variable(p2, 2, 1);
        let s = x.add(&y).unwrap();
        let sq = s.mul_reduced(&s, 4).unwrap();
        let expected = x.pow(2).unwrap().add(&y.pow(2).unwrap()).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn mul_reduced_by_one_truncates() {
        let p3 = p(3);
        let one = Poly::one(p3, 2);
        let f = parse_poly("x^5 + x*y + 2", 2, p3).unwrap();
        let g = one.mul_reduced(&f, 3).unwrap();
        assert_eq!(g, parse_poly("x*y + 2", 2, p3).unwrap());
    }

    #[test]
    fn power_reduced_edges() {
        let p5 = p(5);
        let x = Poly::variable(p5, 1, 0);
        let q = 25;
        assert_eq!(x.power_reduced(24, q).unwrap(), x.pow(24).unwrap());
        assert!(x.power_reduced(25, q).unwrap().is_zero());
        assert_eq!(x.power_reduced(0, q).unwrap(), Poly::one(p5, 1));
    }

    #[test]
    fn cusp_power_survives() {
        // (x^2+y^3)^5 mod (x^7, y^7) is nonzero
        let p7 = p(7);
        let f = parse_poly("x^2 + y^3", 2, p7).unwrap();
        assert!(!f.power_reduced(5, 7).unwrap().is_zero());
        assert!(f.power_reduced(6, 7).unwrap().is_zero());
    }

    #[test]
    fn display_round_trip() {
        let p7 = p(7);
        let f = parse_poly("(x+y)^3 - 2*x*y^2", 2, p7).unwrap();
        let printed = f.to_string();
        let back = parse_poly(&printed, 2, p7).unwrap();
        assert_eq!(back, f);
    }
}
