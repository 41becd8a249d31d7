//! Recursive-descent parser for the polynomial grammar:
//! variables `x`, `y`, `z` or `x1..x99`, integer coefficients, operators
//! `+ - * ^`, parentheses, insignificant whitespace.

use num::bigint::BigInt;
use num::ToPrimitive;

use super::{Poly, PrimeChar};
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, nvars: usize, char: PrimeChar) -> Result<Poly> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        nvars,
        char,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    nvars: usize,
    char: PrimeChar,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        let byte = self
            .chars
            .get(self.pos)
            .map(|&(b, _)| b)
            .unwrap_or_else(|| self.chars.last().map(|&(b, c)| b + c.len_utf8()).unwrap_or(0));
        Error::Syntax {
            pos: byte,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        self.skip_ws();
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            let _ = self.eat('+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.integer_literal()?;
            let e = e
                .to_u64()
                .ok_or_else(|| self.err("exponent must be a nonnegative integer"))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer_literal()?;
                let c = (n % BigInt::from(self.char.get()))
                    .to_i64()
                    .expect("residue fits");
                Ok(Poly::constant(self.char, self.nvars, c))
            }
            Some('-') => {
                self.pos += 1;
                let inner = self.factor()?;
                Ok(inner.neg())
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            _ => Err(self.err("expected a variable, number or `(`")),
        }
    }

    fn variable(&mut self) -> Result<Poly> {
        self.skip_ws();
        let start = self.pos;
        let letter = self.bump().unwrap();
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        let unknown = |p: &Parser| {
            let byte = p.chars[start].0;
            Error::UnknownVariable {
                name: format!("{letter}{digits}"),
                pos: byte,
            }
        };
        let index = if digits.is_empty() {
            match letter {
                'x' => 0,
                'y' => 1,
                'z' => 2,
                _ => return Err(unknown(self)),
            }
        } else {
            if letter != 'x' || digits.len() > 2 {
                return Err(unknown(self));
            }
            let k: usize = digits.parse().map_err(|_| unknown(self))?;
            if k == 0 {
                return Err(unknown(self));
            }
            k - 1
        };
        if index >= self.nvars {
            return Err(unknown(self));
        }
        Ok(Poly::variable(self.char, self.nvars, index))
    }

    fn integer_literal(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let mut digits = String::new();
        if self.peek() == Some('-') {
            digits.push('-');
            self.pos += 1;
            self.skip_ws();
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() || digits == "-" {
            return Err(self.err("expected an integer"));
        }
        digits
            .parse()
            .map_err(|_| self.err("invalid integer literal"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn pc(v: u64) -> PrimeChar {
        PrimeChar::new(v).unwrap()
    }

    #[test]
    fn reads_terms_directly() {
        let f = parse_poly("x^2*y + 3*y^5", 2, pc(7)).unwrap();
        let terms: Vec<_> = f.terms().map(|(m, c)| (m.exponents().to_vec(), c)).collect();
        assert!(terms.contains(&(vec![2, 1], 1)));
        assert!(terms.contains(&(vec![0, 5], 3)));
        assert_eq!(terms.len(), 2);
    }

    #[test]
    fn cancellation_mod_2() {
        let f = parse_poly("x + x", 1, pc(2)).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn negative_coefficients_reduce() {
        let f = parse_poly("y^3 - x^2", 2, pc(5)).unwrap();
        let terms: Vec<_> = f.terms().map(|(m, c)| (m.exponents().to_vec(), c)).collect();
        assert!(terms.contains(&(vec![0, 3], 1)));
        assert!(terms.contains(&(vec![2, 0], 4)));
    }

    #[test]
    fn large_coefficients_reduce() {
        // the literal is 0 mod 7 and 7 mod 11
        let f = parse_poly("123456789012345678901234567890*x", 1, pc(7)).unwrap();
        assert!(f.is_zero());
        let g = parse_poly("123456789012345678901234567890*x", 1, pc(11)).unwrap();
        assert_eq!(g, Poly::variable(pc(11), 1, 0).scale(7));
    }

    #[test]
    fn parentheses_and_powers() {
        let p5 = pc(5);
        let f = parse_poly("(x+y)^3 - 2*x*y^2", 2, p5).unwrap();
        let x = Poly::variable(p5, 2, 0);
        let y = Poly::variable(p5, 2, 1);
        let expect = x
            .add(&y)
            .unwrap()
            .pow(3)
            .unwrap()
            .sub(&x.mul(&y.pow(2).unwrap()).unwrap().scale(2))
            .unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn indexed_variables() {
        let f = parse_poly("x1*x4 + x2^2", 4, pc(3)).unwrap();
        assert!(f
            .terms()
            .any(|(m, _)| m == &Monomial::new(vec![1, 0, 0, 1])));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x + w", 2, pc(5)) {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "w");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unknown-variable error, got {other:?}"),
        }
        match parse_poly("x + ", 2, pc(5)) {
            Err(Error::Syntax { .. }) => {}
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_poly("z", 2, pc(5)).is_err());
    }

    #[test]
    fn print_parse_fixed_point() {
        for s in ["0", "1", "x", "x^2*y + 3*y^5", "2*x + 4", "x1 + x2 + 1"] {
            let nv = 2;
            let f = parse_poly(s, nv, pc(5)).unwrap();
            let g = parse_poly(&f.to_string(), nv, pc(5)).unwrap();
            assert_eq!(f, g);
        }
    }
}
