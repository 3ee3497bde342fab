use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Dyadic, Enclosure, Sym};
use crate::error::{Error, Result};

/// A real number given by one of the supported constructors: rationals,
/// quadratic surds and Liouville series, and exact Q-combinations of them.
///
/// Keeps the source text for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    source: String,
    value: Sym,
}

impl ExactReal {
    pub fn parse(spec: &str) -> Result<Self> {
        let value = Parser::new(spec).parse()?;
        Ok(ExactReal {
            source: spec.trim().to_string(),
            value,
        })
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal {
            source: rational_string(&r),
            value: Sym::from_rational(r),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExactReal::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactReal::from_int(0)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn value(&self) -> &Sym {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Nested dyadic enclosure of width at most `2^-bits`:
    /// `[floor(x 2^p), floor(x 2^p) + 1] / 2^p`, collapsed to a point when
    /// `x 2^p` is an integer.
    pub fn refine(&self, bits: u32, cap_bits: u32) -> Result<Enclosure> {
        let scaled = self
            .value
            .scale(&BigRational::from_integer(BigInt::one() << (bits as usize)));
        let f = scaled.floor(cap_bits)?;
        let exact = (&scaled - &Sym::from_int(f.clone())).is_zero();
        let lo = Dyadic::new(f.clone(), -(bits as i64));
        Ok(if exact {
            Enclosure::point(lo)
        } else {
            Enclosure::new(lo, Dyadic::new(f + 1, -(bits as i64)))
        })
    }
}

impl FromStr for ExactReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExactReal::parse(s)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// `p/q`, or `p` when the denominator is one.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a decimal `1.25` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let v = Parser::new(s).parse()?;
    v.as_rational().ok_or_else(|| Error::Parse {
        input: s.to_string(),
        reason: "expected a rational number".into(),
    })
}

// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor | factor)*
//   factor := NUMBER | 'sqrt(' INT ')' | 'liouville(' INT ')' | '(' expr ')'
// Division only by nonzero rationals.
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            reason: reason.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Sym> {
        if self.src.trim().is_empty() {
            return Err(self.err("empty input"));
        }
        let v = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err(format!("unexpected trailing input `{}`", self.rest())));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Sym> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Sym> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                let r = d
                    .as_rational()
                    .ok_or_else(|| self.err("division by an irrational value"))?;
                if r.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&r.recip());
            } else if matches!(self.peek(), Some(c) if c == '(' || c.is_ascii_alphabetic()) {
                // juxtaposition: `2sqrt(5)`
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Sym> {
        if self.eat('(') {
            let v = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("missing `)`"));
            }
            return Ok(v);
        }
        if self.eat_word("sqrt") {
            let arg = self.call_arg()?;
            if arg < BigInt::zero() {
                return Err(self.err("sqrt of a negative number"));
            }
            let r = arg.sqrt();
            if &r * &r == arg {
                return Err(Error::PerfectSquare(arg.to_string()));
            }
            return Sym::sqrt(&arg);
        }
        if self.eat_word("liouville") {
            let arg = self.call_arg()?;
            let base = arg
                .to_u64()
                .filter(|&b| b >= 2)
                .ok_or_else(|| Error::LiouvilleBase(arg.to_string()))?;
            return Sym::liouville(base);
        }
        self.number()
    }

    fn call_arg(&mut self) -> Result<BigInt> {
        if !self.eat('(') {
            return Err(self.err("expected `(`"));
        }
        let neg = self.eat('-');
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected an integer argument"));
        }
        if !self.eat(')') {
            return Err(self.err("missing `)`"));
        }
        let v: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.rest().chars().next() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Sym> {
        let int = self.digits();
        if int.is_empty() {
            return Err(self.err(format!("expected a number at `{}`", self.rest())));
        }
        let mut value = BigRational::from_integer(int.parse().map_err(|_| self.err("bad integer"))?);
        if self.rest().starts_with('.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() {
                return Err(self.err("expected digits after `.`"));
            }
            let num: BigInt = frac.parse().map_err(|_| self.err("bad decimal"))?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            value += BigRational::new(num, den);
        }
        Ok(Sym::from_rational(value))
    }
}
