//! Text form of polynomials: `3.5*x1^2*x3 - x2 + 1`.
//!
//! Variables are `x1..xn`, powers use `^`, and every product needs an explicit
//! `*`. Problem files additionally allow a single decision-variable factor
//! `u<k>` per term, which makes a body affine in the decision vector.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Result, SosError};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::Scalar;

/// Polynomial whose coefficients are affine in decision variables:
/// `constant + Σ_k u_k * linear[k]`. Decision indices are zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePolynomial<T: Scalar> {
    pub constant: Polynomial<T>,
    pub linear: BTreeMap<usize, Polynomial<T>>,
}

impl<T: Scalar> AffinePolynomial<T> {
    pub fn num_decision_vars(&self) -> usize {
        self.linear.keys().next_back().map_or(0, |k| k + 1)
    }
}

/// Parse a polynomial in `num_vars` variables. Column numbers in errors are
/// 1-based; `line` is reported as given.
pub fn parse_polynomial<T: Scalar>(src: &str, num_vars: usize) -> Result<Polynomial<T>> {
    parse_polynomial_at(src, num_vars, 1, 1)
}

pub(crate) fn parse_polynomial_at<T: Scalar>(
    src: &str,
    num_vars: usize,
    line: usize,
    column: usize,
) -> Result<Polynomial<T>> {
    let affine = Parser::new(src, num_vars, false, line, column).parse()?;
    Ok(affine.constant)
}

pub(crate) fn parse_affine_at<T: Scalar>(
    src: &str,
    num_vars: usize,
    line: usize,
    column: usize,
) -> Result<AffinePolynomial<T>> {
    Parser::new(src, num_vars, true, line, column).parse()
}

/// Render in descending graded-lex order. `parse_polynomial(&format_polynomial(p))`
/// reproduces `p` exactly.
pub fn format_polynomial<T: Scalar>(p: &Polynomial<T>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (alpha, &c)) in p.terms().iter().rev().enumerate() {
        let neg = c < T::zero();
        let mag = if neg { -c } else { c };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if alpha.is_zero() {
            let _ = write!(out, "{mag}");
        } else if mag == T::one() {
            let _ = write!(out, "{alpha}");
        } else {
            let _ = write!(out, "{mag}*{alpha}");
        }
    }
    out
}

impl<T: Scalar> std::fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_polynomial(self))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
    allow_decision: bool,
    line: usize,
    column: usize,
}

enum Factor<T> {
    Number(T),
    Var(usize, u32),
    Decision(usize),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, num_vars: usize, allow_decision: bool, line: usize, column: usize) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            num_vars,
            allow_decision,
            line,
            column,
        }
    }

    /// Bodies may span lines; positions after a newline restart at column 1.
    fn err(&self, at: usize, message: impl Into<String>) -> SosError {
        let before = &self.src[..at.min(self.src.len())];
        let newlines = before.iter().filter(|&&c| c == b'\n').count();
        let column = match before.iter().rposition(|&c| c == b'\n') {
            Some(nl) => at - nl,
            None => self.column + at,
        };
        SosError::Parse {
            line: self.line + newlines,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn parse<T: Scalar>(mut self) -> Result<AffinePolynomial<T>> {
        let mut out = AffinePolynomial {
            constant: Polynomial::zero(self.num_vars),
            linear: BTreeMap::new(),
        };
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err(0, "empty polynomial"));
        }
        let mut sign = T::one();
        if let Some(b @ (b'+' | b'-')) = self.peek() {
            if b == b'-' {
                sign = -T::one();
            }
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let (coeff, alpha, decision) = self.term::<T>()?;
            let target = match decision {
                None => &mut out.constant,
                Some(k) => out
                    .linear
                    .entry(k)
                    .or_insert_with(|| Polynomial::zero(self.num_vars)),
            };
            target.add_term(alpha, sign * coeff);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => sign = T::one(),
                Some(b'-') => sign = -T::one(),
                Some(b) => {
                    let msg = if b.is_ascii_alphanumeric() || b == b'.' {
                        "implicit multiplication is not allowed; use '*'".to_string()
                    } else {
                        format!("unexpected character '{}'", b as char)
                    };
                    return Err(self.err(self.pos, msg));
                }
            }
            self.pos += 1;
        }
        out.linear.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    fn term<T: Scalar>(&mut self) -> Result<(T, MultiIndex, Option<usize>)> {
        let mut coeff = T::one();
        let mut exps = vec![0u32; self.num_vars];
        let mut decision = None;
        loop {
            self.skip_ws();
            let start = self.pos;
            match self.factor::<T>()? {
                Factor::Number(v) => coeff *= v,
                Factor::Var(i, e) => exps[i] += e,
                Factor::Decision(k) => {
                    if decision.is_some() {
                        return Err(self.err(start, "term is not affine in decision variables"));
                    }
                    decision = Some(k);
                }
            }
            let save = self.pos;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                self.pos = save;
                break;
            }
        }
        Ok((coeff, MultiIndex::new(exps), decision))
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn index(&mut self, what: &str) -> Result<usize> {
        let at = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return Err(self.err(at, format!("expected {what} index")));
        }
        let s = std::str::from_utf8(d).unwrap();
        s.parse::<usize>()
            .map_err(|_| self.err(at, format!("bad {what} index '{s}'")))
    }

    fn factor<T: Scalar>(&mut self) -> Result<Factor<T>> {
        let start = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let i = self.index("variable")?;
                if i == 0 || i > self.num_vars {
                    return Err(self.err(
                        start,
                        format!("variable x{i} out of range x1..x{}", self.num_vars),
                    ));
                }
                let mut e = 1;
                let save = self.pos;
                self.skip_ws();
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let p = self.index("exponent")?;
                    e = u32::try_from(p).map_err(|_| self.err(at, "exponent too large"))?;
                } else {
                    self.pos = save;
                }
                Ok(Factor::Var(i - 1, e))
            }
            Some(b'u') if self.allow_decision => {
                self.pos += 1;
                let k = self.index("decision variable")?;
                if k == 0 {
                    return Err(self.err(start, "decision variables are numbered from u1"));
                }
                Ok(Factor::Decision(k - 1))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                self.digits();
                if self.peek() == Some(b'.') {
                    self.pos += 1;
                    self.digits();
                }
                if let Some(b'e' | b'E') = self.peek() {
                    let save = self.pos;
                    self.pos += 1;
                    if let Some(b'+' | b'-') = self.peek() {
                        self.pos += 1;
                    }
                    if self.digits().is_empty() {
                        self.pos = save;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                text.parse::<T>()
                    .map(Factor::Number)
                    .map_err(|_| self.err(start, format!("bad number '{text}'")))
            }
            Some(b) => Err(self.err(start, format!("unexpected character '{}'", b as char))),
            None => Err(self.err(start, "unexpected end of input")),
        }
    }
}
