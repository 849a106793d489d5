//! Textual form of rationals, polynomials and rational functions.
//!
//! Rationals print as `p/q`, polynomials as sums of `c*t1^a*t2^b` terms
//! (leading term first), fractions as `num/(den)` with the numerator
//! parenthesised when it has several terms. The parser accepts the full
//! printed grammar plus arbitrary arithmetic expressions in `+ - * / ^`
//! and parentheses, so printer output round-trips exactly through the
//! canonical form.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed as _};

use super::poly::{leading_is_negative, MPoly};
use super::{Parameters, Rational, Scalar, ScalarError};

impl MPoly {
    pub fn to_text(&self, params: &Parameters) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, e) in m.iter_vars() {
                let name = if v.0 < params.len() {
                    params.name(v).to_owned()
                } else {
                    v.to_string()
                };
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl Scalar {
    pub fn to_text(&self, params: &Parameters) -> String {
        let num = self.numerator().to_text(params);
        if self.denominator().is_one() {
            return num;
        }
        let num = if self.numerator().num_terms() > 1 || leading_is_negative(self.numerator()) {
            format!("({num})")
        } else {
            num
        };
        format!("{num}/({})", self.denominator().to_text(params))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&Parameters::none()))
    }
}

/// Parse a rational number written as `p/q` or `p`.
pub fn parse_rational(input: &str) -> Result<Rational, ScalarError> {
    let s = parse_scalar(input, &Parameters::none())?;
    s.as_rational().ok_or_else(|| ScalarError::Parse {
        at: 0,
        message: "expected a rational constant".into(),
    })
}

/// Parse an arithmetic expression over the declared parameters.
pub fn parse_scalar(input: &str, params: &Parameters) -> Result<Scalar, ScalarError> {
    let mut p = Parser {
        input: input.as_bytes(),
        pos: 0,
        params,
    };
    p.skip_ws();
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.error("trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    params: &'a Parameters,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ScalarError {
        ScalarError::Parse {
            at: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        self.skip_ws();
        let negate = self.eat(b'-');
        let mut acc = self.mulexpr()?;
        if negate {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.mulexpr()?;
                    acc = &acc + &rhs;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.mulexpr()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn mulexpr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            let e = e
                .to_integer()
                .try_into()
                .map_err(|_| self.error("exponent out of range"))?;
            Ok(pow_scalar(&base, e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(Scalar::from_rational(n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|c| c.is_ascii_alphanumeric() || c == b'_')
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.input[start..self.pos]).expect("ascii");
                let id = self
                    .params
                    .lookup(name)
                    .ok_or_else(|| ScalarError::UnknownParameter(name.into()))?;
                Ok(Scalar::var(id))
            }
            _ => Err(self.error("expected a number, parameter or '('")),
        }
    }

    fn uint(&mut self) -> Result<Rational, ScalarError> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).expect("ascii");
        let n = num::BigInt::from_str(text).map_err(|_| self.error("bad integer"))?;
        Ok(Rational::from_integer(n))
    }
}

fn pow_scalar(x: &Scalar, e: u16) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..e {
        acc = &acc * x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, ParamId};

    fn params() -> Parameters {
        Parameters::new(["t1", "t2", "t3"])
    }

    #[test]
    fn rational_round_trip() {
        for s in ["3/4", "-2/5", "7", "0", "-1"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
    }

    #[test]
    fn scalar_round_trip() {
        let ps = params();
        let cases = [
            "1/(t1 - t2)",
            "(t1 + t2)/(t1 - t2)",
            "2/3*t1^2*t2 + 1/3",
            "-1/(t1^2 - 2*t1*t2 + t2^2)",
            "t1*t2*t3 - 4",
            "0",
        ];
        for c in cases {
            let v = parse_scalar(c, &ps).unwrap();
            let printed = v.to_text(&ps);
            let rev = parse_scalar(&printed, &ps).unwrap();
            assert_eq!(v, rev, "round trip through {printed:?}");
        }
    }

    #[test]
    fn expression_forms() {
        let ps = params();
        let a = parse_scalar("1/(t1-t2)", &ps).unwrap();
        let b = parse_scalar("(t2 - t1)^2", &ps).unwrap();
        assert_eq!(
            &a * &a,
            b.inverse().unwrap(),
            "1/(t1-t2)^2 equals ((t2-t1)^2)^-1"
        );
        assert_eq!(
            parse_scalar("1/2 * 4", &ps).unwrap(),
            Scalar::from_rational(rat(2, 1))
        );
    }

    #[test]
    fn unknown_parameter_rejected() {
        let ps = params();
        assert!(matches!(
            parse_scalar("t9 + 1", &ps),
            Err(ScalarError::UnknownParameter(_))
        ));
    }

    #[test]
    fn printed_leading_order_is_descending() {
        let ps = params();
        let v = parse_scalar("1 + t1^2 + t2", &ps).unwrap();
        assert_eq!(v.to_text(&ps), "t1^2 + t2 + 1");
        let _ = ParamId(0);
    }
}
