//! Parsing of polynomials in `x`, and in `t` with `k[x]` coefficients.
//!
//! Grammar: sums and differences of products of powers, where a primary is
//! a decimal integer, `x`, `t` (or `y`), or a parenthesized expression.
//! Juxtaposition such as `3x^2` is read as multiplication.

use thiserror::Error;

use super::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Bivariate polynomial: entry `i` is the coefficient of `t^i`.
type Bi = Vec<Poly>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    q: u32,
    allow_t: bool,
}

const MAX_EXP: u64 = 1 << 16;

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = 1 + before.iter().filter(|&&b| b == b'\n').count();
        let column = 1 + before.iter().rev().take_while(|&&b| b != b'\n').count();
        Err(ParseError { line, column, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match s.parse::<u64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("integer too large")
            }
        }
    }

    fn expr(&mut self) -> Result<Bi, ParseError> {
        let mut acc: Bi = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { bi_add(self.q, &acc, &t) } else { bi_sub(self.q, &acc, &t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Bi, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = bi_mul(self.q, &acc, &f);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    let f = self.factor()?;
                    acc = bi_mul(self.q, &acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Bi, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.number()?;
            if e > MAX_EXP {
                self.pos = at;
                return self.err("exponent too large");
            }
            let mut r: Bi = vec![Poly::one(self.q)];
            for _ in 0..e {
                r = bi_mul(self.q, &r, &base);
            }
            return Ok(r);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Bi, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                Ok(bi_trim(vec![Poly::constant(self.q, (v % self.q as u64) as u32)]))
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(vec![Poly::x(self.q)])
            }
            Some(b't') | Some(b'y') if self.allow_t => {
                self.pos += 1;
                Ok(vec![Poly::zero(self.q), Poly::one(self.q)])
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn bi_trim(mut a: Bi) -> Bi {
    while a.last().is_some_and(|p| p.is_zero()) {
        a.pop();
    }
    a
}

fn bi_add(q: u32, a: &Bi, b: &Bi) -> Bi {
    let n = a.len().max(b.len());
    let z = Poly::zero(q);
    bi_trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn bi_sub(q: u32, a: &Bi, b: &Bi) -> Bi {
    let n = a.len().max(b.len());
    let z = Poly::zero(q);
    bi_trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn bi_mul(q: u32, a: &Bi, b: &Bi) -> Bi {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Poly::zero(q); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = &r[i + j] + &(x * y);
        }
    }
    bi_trim(r)
}

fn run(src: &str, q: u32, allow_t: bool) -> Result<Bi, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, q, allow_t };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let r = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Parse a polynomial in `x` over `F_q`.
pub fn parse_poly(src: &str, q: u32) -> Result<Poly, ParseError> {
    Ok(run(src, q, false)?.pop().unwrap_or_else(|| Poly::zero(q)))
}

/// Parse a polynomial in `t` with coefficients in `F_q[x]`; entry `i` of the
/// result is the coefficient of `t^i`.
pub fn parse_bivariate(src: &str, q: u32) -> Result<Vec<Poly>, ParseError> {
    run(src, q, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate() {
        let p = parse_poly("x^3 + x + 1", 3).unwrap();
        assert_eq!(p, Poly::new(3, vec![1, 1, 0, 1]));
        assert_eq!(parse_poly("x+4", 5).unwrap(), Poly::new(5, vec![4, 1]));
        assert_eq!(parse_poly("-1", 5).unwrap(), Poly::constant(5, 4));
        assert_eq!(parse_poly("3x^2 - 2*x", 7).unwrap(), Poly::new(7, vec![0, 5, 3]));
        assert_eq!(parse_poly("(x+1)^2", 3).unwrap(), Poly::new(3, vec![1, 2, 1]));
        assert!(parse_poly("5", 5).unwrap().is_zero());
    }

    #[test]
    fn bivariate() {
        let f = parse_bivariate("t^3+(4x^3+3x^2+1)t^2+(3x^3+4x^2+4x+2)t+2x^3+x", 5).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f[3], Poly::one(5));
        assert_eq!(f[2], Poly::new(5, vec![1, 0, 3, 4]));
        assert_eq!(f[1], Poly::new(5, vec![2, 4, 4, 3]));
        assert_eq!(f[0], Poly::new(5, vec![0, 1, 0, 2]));
        let g = parse_bivariate("t^2 - (x^3+x+1)", 3).unwrap();
        assert_eq!(g[0], Poly::new(3, vec![2, 2, 0, 2]));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_poly("x + * 2", 5).unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_poly("x + t", 5).unwrap_err();
        assert_eq!(e.column, 5);
        assert!(parse_poly("(x+1", 5).is_err());
        assert!(parse_poly("", 5).is_err());
        assert!(parse_poly("x 1)", 5).is_err());
    }
}
