//! Text syntax for coefficients and e-word polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := INT ['/' INT] | 'pi' ['^' INT] | SYMBOL ['^' INT] | 'e(' [INT (',' INT)*] ')'
//! ```
//!
//! `pi` stands for `2*pi*i`; symbols are `z3`, `z5`, `z3_5`, ...; a term
//! carries at most one `e(...)` word factor.

use num_bigint::BigInt;
use num_traits::One;

use super::{CoeffElem, MzvMonomial, MzvSymbol, Rational};
use crate::Error;

/// One parsed summand: `coeff * monomial * e(word)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Rational,
    pub monomial: MzvMonomial,
    pub word: Option<Vec<u32>>,
}

pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { s: src.as_bytes(), pos: 0, src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn integer(&mut self) -> crate::Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits parse"))
    }

    fn small(&mut self) -> crate::Result<u32> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.err("integer too large"))
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        (start != self.pos).then(|| &self.src[start..self.pos])
    }

    fn exponent(&mut self) -> crate::Result<u32> {
        if self.eat(b'^') {
            self.small()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self, sign: bool) -> crate::Result<Term> {
        let mut coeff = if sign { -Rational::one() } else { Rational::one() };
        let mut pi = 0u32;
        let mut symbols = Vec::new();
        let mut word: Option<Vec<u32>> = None;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    let r = if self.eat(b'/') {
                        let d = self.integer()?;
                        if d == BigInt::from(0) {
                            return Err(self.err("zero denominator"));
                        }
                        Rational::new(n, d)
                    } else {
                        Rational::from_integer(n)
                    };
                    coeff *= r;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let id = self.ident().expect("alphabetic start");
                    if id == "e" && self.eat(b'(') {
                        if word.is_some() {
                            return Err(self.err("two word factors in one term"));
                        }
                        let mut letters = Vec::new();
                        if !self.eat(b')') {
                            loop {
                                letters.push(self.small()?);
                                if self.eat(b')') {
                                    break;
                                }
                                if !self.eat(b',') {
                                    return Err(self.err("expected ',' or ')'"));
                                }
                            }
                        }
                        word = Some(letters);
                    } else if id == "pi" {
                        pi += self.exponent()?;
                    } else {
                        let sym = MzvSymbol::parse(id)
                            .ok_or_else(|| Error::Parse(format!("unknown symbol {id:?} in {:?}", self.src)))?;
                        let k = self.exponent()?;
                        symbols.extend(std::iter::repeat_n(sym, k as usize));
                    }
                }
                _ => return Err(self.err("expected factor")),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(Term { coeff, monomial: MzvMonomial::new(pi, symbols), word })
    }
}

/// Parses a sum of terms; the caller decides whether word factors are allowed.
pub fn parse_terms(src: &str) -> crate::Result<Vec<Term>> {
    let mut lx = Lexer::new(src);
    let mut out = Vec::new();
    let mut sign = if lx.eat(b'-') {
        true
    } else {
        lx.eat(b'+');
        false
    };
    loop {
        out.push(lx.term(sign)?);
        match lx.peek() {
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                sign = false;
            }
            Some(b'-') => {
                lx.pos += 1;
                sign = true;
            }
            Some(_) => return Err(lx.err("unexpected character")),
        }
    }
    Ok(out)
}

/// Parses a coefficient expression such as `-1/24*pi^2 + 3*z3`.
pub fn parse_coeff(src: &str) -> crate::Result<CoeffElem> {
    let mut out = CoeffElem::zero();
    for t in parse_terms(src)? {
        if t.word.is_some() {
            return Err(Error::Parse(format!("word factor not allowed in coefficient {src:?}")));
        }
        out.add_term(t.monomial, t.coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;

    #[test]
    fn parse_and_render() {
        for s in ["-1/24*pi^2", "z3", "2*z5 + 1/24*pi^2*z3", "0", "-691/2730", "z3^2 - 1/2*pi", "pi^3*z3_5"] {
            let c = parse_coeff(s).unwrap();
            let again = parse_coeff(&c.to_string()).unwrap();
            assert_eq!(c, again, "{s}");
        }
        assert_eq!(parse_coeff("2*z5 + 1/24*pi^2*z3").unwrap().to_string(), "1/24*pi^2*z3 + 2*z5");
    }

    #[test]
    fn zero_literal() {
        assert!(parse_coeff("0").unwrap().is_zero());
        assert!(parse_coeff("z3 - z3").unwrap().is_zero());
    }

    #[test]
    fn words() {
        let t = parse_terms("-2*pi*e(0,4) + e()").unwrap();
        assert_eq!(t[0].coeff, rat(-2, 1));
        assert_eq!(t[0].word, Some(vec![0, 4]));
        assert_eq!(t[1].word, Some(vec![]));
    }

    #[test]
    fn errors() {
        assert!(parse_coeff("1/0").is_err());
        assert!(parse_coeff("q3").is_err());
        assert!(parse_coeff("e(0)").is_err());
        assert!(parse_coeff("2 +").is_err());
        assert!(parse_coeff("").is_err());
    }
}
