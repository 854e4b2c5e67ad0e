//! Parser for the text form of polynomials and holomorphic forms.
//!
//! Accepts the canonical output of `Display` (`3*z^(1,0) dz{2}`) as well as
//! the shorthand `z1^2 z3 dz2 dz3`. Juxtaposition multiplies; `dz` factors
//! are wedged left to right.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::ExteriorForm;
use crate::poly::{coeff, Coeff, ExponentVector, SparsePoly};

#[derive(Debug, Clone)]
struct RawTerm {
    c: Coeff,
    // 1-based index -> power; or a full exponent vector
    powers: Vec<(usize, u32)>,
    full: Option<Vec<u32>>,
    dz: Vec<usize>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer overflow"))
    }

    fn int_list(&mut self, open: u8, close: u8) -> Result<Vec<u64>> {
        self.expect(open)?;
        let mut v = Vec::new();
        if self.eat(close) {
            return Ok(v);
        }
        loop {
            v.push(self.uint()?);
            if self.eat(close) {
                return Ok(v);
            }
            self.expect(b',')?;
        }
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.uint()?;
        let den = if self.eat(b'/') { self.uint()? } else { 1 };
        if den == 0 {
            return self.err("zero denominator");
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn expr(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = 1i64;
        if self.eat(b'-') {
            sign = -1;
        } else {
            self.eat(b'+');
        }
        loop {
            let mut t = self.term()?;
            if sign < 0 {
                t.c = -t.c;
            }
            terms.push(t);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(terms),
            }
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut t = RawTerm { c: coeff(1), powers: vec![], full: None, dz: vec![] };
        if self.eat(b'-') {
            t.c = coeff(-1);
        }
        let mut any = false;
        loop {
            match self.peek() {
                Some(b'*') if any => {
                    self.pos += 1;
                    self.factor(&mut t)?;
                }
                Some(c) if c.is_ascii_digit() || c == b'(' || c == b'i' || c == b'z' || c == b'd' => {
                    self.factor(&mut t)?;
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return self.err("expected a term");
        }
        Ok(t)
    }

    fn factor(&mut self, t: &mut RawTerm) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let q = self.rational()?;
                t.c = &t.c * Complex::new(q, BigRational::zero());
            }
            Some(b'i') => {
                self.pos += 1;
                t.c = &t.c * Complex::new(BigRational::zero(), BigRational::from_integer(1.into()));
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                let mut c = coeff(0);
                for r in inner {
                    if !r.powers.is_empty() || r.full.is_some() || !r.dz.is_empty() {
                        return self.err("parenthesized factors must be constants");
                    }
                    c = c + r.c;
                }
                t.c = &t.c * c;
            }
            Some(b'z') => {
                self.pos += 1;
                if self.eat(b'^') {
                    if t.full.is_some() {
                        return self.err("repeated z^(..) factor");
                    }
                    let v = self.int_list(b'(', b')')?;
                    t.full = Some(v.into_iter().map(|x| x as u32).collect());
                } else {
                    let idx = self.uint()? as usize;
                    if idx == 0 {
                        return self.err("coordinates are numbered from 1");
                    }
                    let p = if self.eat(b'^') { self.uint()? as u32 } else { 1 };
                    t.powers.push((idx, p));
                }
            }
            Some(b'd') => {
                self.pos += 1;
                if !(self.s.get(self.pos) == Some(&b'z')) {
                    return self.err("expected `dz`");
                }
                self.pos += 1;
                if self.peek() == Some(b'{') {
                    for k in self.int_list(b'{', b'}')? {
                        if k == 0 {
                            return self.err("coordinates are numbered from 1");
                        }
                        t.dz.push(k as usize);
                    }
                } else {
                    let k = self.uint()? as usize;
                    if k == 0 {
                        return self.err("coordinates are numbered from 1");
                    }
                    t.dz.push(k);
                }
            }
            _ => return self.err("unexpected character"),
        }
        Ok(())
    }
}

fn parse_terms(text: &str) -> Result<Vec<RawTerm>> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    if p.peek() == Some(b'0') && text.trim() == "0" {
        return Ok(vec![]);
    }
    let terms = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(terms)
}

fn infer_dim(terms: &[RawTerm]) -> Option<usize> {
    let mut n = 0;
    for t in terms {
        if let Some(f) = &t.full {
            n = n.max(f.len());
        }
        for &(i, _) in &t.powers {
            n = n.max(i);
        }
        for &k in &t.dz {
            n = n.max(k);
        }
    }
    if n == 0 {
        None
    } else {
        Some(n)
    }
}

fn exponent(t: &RawTerm, n: usize) -> Result<ExponentVector> {
    let mut e = vec![0u32; n];
    if let Some(f) = &t.full {
        if f.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.len() });
        }
        e.copy_from_slice(f);
    }
    for &(i, p) in &t.powers {
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        e[i - 1] += p;
    }
    Ok(ExponentVector(e))
}

/// Parses a holomorphic form. `dim` fixes the ambient dimension; when absent
/// it is inferred from the largest index that appears.
pub fn parse_form(text: &str, dim: Option<usize>) -> Result<ExteriorForm> {
    let terms = parse_terms(text)?;
    let n = match dim.or_else(|| infer_dim(&terms)) {
        Some(n) => n,
        None => 1,
    };
    let k = terms.first().map(|t| t.dz.len()).unwrap_or(0);
    let mut form = ExteriorForm::zero(n, k);
    for t in &terms {
        if t.dz.len() != k {
            return Err(Error::Parse { pos: 0, msg: "terms of mixed degree".into() });
        }
        for &d in &t.dz {
            if d > n {
                return Err(Error::IndexOutOfRange { index: d, dim: n });
            }
        }
        let e = exponent(t, n)?;
        let idx: Vec<usize> = t.dz.iter().map(|d| d - 1).collect();
        let b = ExteriorForm::basis(n, &idx);
        let piece = b.scale_poly(&SparsePoly::monomial(n, e, t.c.clone()));
        form = form.add(&piece)?;
    }
    Ok(form)
}

/// Parses a polynomial (no `dz` factors allowed).
pub fn parse_poly(text: &str, dim: Option<usize>) -> Result<SparsePoly> {
    let f = parse_form(text, dim)?;
    if f.degree() != 0 {
        return Err(Error::Parse { pos: 0, msg: "expected a polynomial, found a form".into() });
    }
    Ok(f.component(&[]).cloned().unwrap_or_else(|| SparsePoly::zero(f.dim())))
}
