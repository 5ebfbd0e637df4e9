//! Text polynomials: `2/3*x0^2 - x1*x2 + (x3 - x4)^2`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::linalg::Mat;
use crate::poly::Poly;

/// Names `x0, …, x{n−1}`.
pub fn coordinate_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Parses a polynomial in the given variables. Division is allowed by
/// nonzero constants only.
pub fn parse_poly(text: &str, names: &[&str]) -> Result<Poly> {
    let mut p = Parser {
        src: text,
        pos: 0,
        names,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a homogeneous quadric in `x0..x{n−1}` into its symmetric matrix;
/// the coefficient of `xi*xj` is split evenly between the two off-diagonal
/// entries.
pub fn parse_quadric(text: &str, n: usize) -> Result<Mat<Rational>> {
    let names = coordinate_names(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let p = parse_poly(text, &refs)?;
    if p.is_zero() {
        return Err(Error::Parse(format!("`{text}` is the zero polynomial")));
    }
    if p.terms().any(|(m, _)| m.iter().sum::<u32>() != 2) {
        return Err(Error::Parse(format!(
            "`{text}` is not a homogeneous quadric"
        )));
    }
    Ok(quadric_matrix(&p))
}

/// Symmetric matrix of a quadratic form given as a polynomial.
pub fn quadric_matrix(p: &Poly) -> Mat<Rational> {
    let n = p.nvars();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut a = Mat::zeros(n, n);
    for (m, c) in p.terms() {
        let idx: Vec<usize> = m
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            a.set(i, i, c.clone());
        } else {
            let v = c * &half;
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    a
}

/// The quadratic form `xᵀ A x` as a polynomial.
pub fn quadric_poly(a: &Mat<Rational>) -> Poly {
    let n = a.rows();
    let mut p = Poly::zero(n);
    for i in 0..n {
        for j in i..n {
            let c = if i == j {
                a.get(i, i).clone()
            } else {
                a.get(i, j).clone() + a.get(j, i)
            };
            let mut m = vec![0; n];
            m[i] += 1;
            m[j] += 1;
            p.add_term(m, c);
        }
    }
    p
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        Error::Parse(format!("line {line}, column {col}: {msg}"))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') || self.eat('\u{2212}') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = constant_value(&d).ok_or_else(|| self.err("division by a non-constant"))?;
                if c.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') || self.eat('\u{2212}') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.primary()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.err("expected exponent"))?;
            if e > 64 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("bad integer"))?;
                Ok(Poly::constant(self.nvars(), Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Poly::var(self.nvars(), i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable `{name}`")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn constant_value(p: &Poly) -> Option<Rational> {
    match p.num_terms() {
        0 => Some(Rational::zero()),
        1 => {
            let (m, c) = p.terms().next()?;
            m.iter().all(|&e| e == 0).then(|| c.clone())
        }
        _ => None,
    }
}
