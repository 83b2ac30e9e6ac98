//! Text forms.
//!
//! Commutative: `(1,0,0,0) + (0,1,0,0)*x^2`, `x^2 + 1`, `2*k*x - j`.
//! Coefficients are coordinate vectors in parentheses or element expressions,
//! written to the left of the power.
//!
//! Noncommutative: S-expressions `(+ (* (c 0,1,0,0) x) (* x (c 0,1,0,0)))`
//! with `+`, `-`, binary-or-longer `*` (folded to the left), `x`, constants
//! `(c ...)` and bare numbers or labels.

use super::{CommPoly, NCPoly, Node};
use crate::algebra::io::parse_element;
use crate::algebra::{Algebra, Element};
use crate::error::{Error, ParseError, Result};

fn err(text: &str, pos: usize, reason: impl Into<String>) -> Error {
    Error::Parse(ParseError::Poly {
        text: text.to_string(),
        pos,
        reason: reason.into(),
    })
}

/// Splits at top-level `+`/`-`, keeping number exponents such as `1e-3` intact.
fn split_terms(s: &str) -> Vec<(usize, f64, &str)> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut sign = 1.0;
    let mut seen = false;
    for (i, &c) in b.iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                // A sign right after `<digits>e` belongs to a number.
                let word_start = s[..i]
                    .rfind(|ch: char| !ch.is_ascii_alphanumeric() && ch != '.')
                    .map_or(0, |k| k + 1);
                let exponent = i > word_start + 1
                    && matches!(b[i - 1], b'e' | b'E')
                    && (b[word_start].is_ascii_digit() || b[word_start] == b'.');
                if exponent {
                    continue;
                }
                if seen {
                    out.push((start, sign, &s[start..i]));
                }
                sign = if c == b'-' { -1.0 } else { 1.0 };
                start = i + 1;
                seen = false;
                continue;
            }
            _ => {}
        }
        if !c.is_ascii_whitespace() {
            seen = true;
        }
    }
    if seen {
        out.push((start, sign, &s[start..]));
    }
    out
}

fn parse_coef(a: &Algebra, text: &str) -> Result<Element> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(a.unit());
    }
    if t.starts_with('(') && t.ends_with(')') && !t.contains(',') {
        return parse_element(a, &t[1..t.len() - 1]);
    }
    parse_element(a, t)
}

/// Parses the commutative text form.
pub fn parse_comm(a: &Algebra, text: &str) -> Result<CommPoly> {
    let terms = split_terms(text);
    if terms.is_empty() {
        return Err(err(text, 0, "empty polynomial"));
    }
    let mut coeffs: Vec<Vec<f64>> = Vec::new();
    for (pos, sign, body) in terms {
        let body = body.trim();
        let (coef, power) = split_power(body).map_err(|r| err(text, pos, r))?;
        let c = parse_coef(a, coef).map_err(|e| err(text, pos, e.to_string()))?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, vec![0.0; a.real_dim()]);
        }
        for (s, v) in coeffs[power].iter_mut().zip(c.coords()) {
            *s += sign * v;
        }
    }
    CommPoly::from_coords(a, coeffs)
}

/// `coef*x^k` into `(coef, k)`.
fn split_power(body: &str) -> std::result::Result<(&str, usize), String> {
    let Some(idx) = body.rfind('x') else {
        return Ok((body, 0));
    };
    let rest = body[idx + 1..].trim();
    let before = body[..idx].trim_end();
    let standalone = before.is_empty() || before.ends_with(['*', ')', ' ']) || body[..idx].ends_with(char::is_whitespace);
    if !standalone {
        return Ok((body, 0));
    }
    let power = if rest.is_empty() {
        1
    } else if let Some(p) = rest.strip_prefix('^') {
        p.trim().parse::<usize>().map_err(|_| format!("bad exponent `{p}`"))?
    } else {
        return Err(format!("unexpected `{rest}` after x"));
    };
    let coef = before.trim_end_matches('*').trim();
    Ok((coef, power))
}

enum Expr {
    Var,
    Const(Element),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Neg(Vec<Expr>),
}

struct Parser<'a> {
    alg: &'a Algebra,
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn fail(&self, reason: impl Into<String>) -> Error {
        err(self.text, self.pos, reason)
    }

    fn atom(&mut self) -> &'a str {
        let rest = &self.text[self.pos..];
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.pos >= self.text.len() {
            return Err(self.fail("unexpected end"));
        }
        if !self.text[self.pos..].starts_with('(') {
            let start = self.pos;
            let a = self.atom();
            if a == "x" {
                return Ok(Expr::Var);
            }
            return parse_element(self.alg, a)
                .map(Expr::Const)
                .map_err(|e| err(self.text, start, e.to_string()));
        }
        self.pos += 1;
        self.skip_ws();
        let op_pos = self.pos;
        let op = self.atom();
        if op == "c" {
            let rest = &self.text[self.pos..];
            let close = rest.find(')').ok_or_else(|| self.fail("unclosed constant"))?;
            let body = &rest[..close];
            let e = parse_element(self.alg, body.trim()).map_err(|e| err(self.text, self.pos, e.to_string()))?;
            self.pos += close + 1;
            return Ok(Expr::Const(e));
        }
        let mut args = Vec::new();
        loop {
            self.skip_ws();
            if self.text[self.pos..].starts_with(')') {
                self.pos += 1;
                break;
            }
            if self.pos >= self.text.len() {
                return Err(self.fail("missing `)`"));
            }
            args.push(self.expr()?);
        }
        match op {
            "+" => Ok(Expr::Sum(args)),
            "*" if args.len() >= 2 => Ok(Expr::Prod(args)),
            "*" => Err(err(self.text, op_pos, "`*` needs at least two factors")),
            "-" if !args.is_empty() => Ok(Expr::Neg(args)),
            _ => Err(err(self.text, op_pos, format!("unknown operator `{op}`"))),
        }
    }
}

fn expand(alg: &Algebra, e: Expr) -> Vec<Node> {
    match e {
        Expr::Var => vec![Node::Var],
        Expr::Const(c) => vec![Node::Const(c)],
        Expr::Sum(xs) => xs.into_iter().flat_map(|x| expand(alg, x)).collect(),
        Expr::Prod(xs) => {
            let mut it = xs.into_iter();
            let mut acc = expand(alg, it.next().expect("two factors"));
            for x in it {
                let rhs = expand(alg, x);
                acc = acc
                    .iter()
                    .flat_map(|l| rhs.iter().map(move |r| Node::mul(l.clone(), r.clone())))
                    .collect();
            }
            acc
        }
        Expr::Neg(xs) => {
            let single = xs.len() == 1;
            let mut out = Vec::new();
            for (k, x) in xs.into_iter().enumerate() {
                let s = if single || k > 0 { -1.0 } else { 1.0 };
                out.extend(expand(alg, x).into_iter().map(|n| if s < 0.0 { n.scaled(-1.0, alg) } else { n }));
            }
            out
        }
    }
}

/// Parses the S-expression form, distributing products over sums.
pub fn parse_nc(a: &Algebra, text: &str) -> Result<NCPoly> {
    let mut p = Parser {
        alg: a,
        text,
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.fail("trailing input"));
    }
    NCPoly::new(a, expand(a, e))
}
