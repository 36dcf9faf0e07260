//! Recursive-descent parser for rational expressions over a chart.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | "+" unary | power
//! power  := atom ("^" ["-"] integer)?
//! atom   := integer | coordinate | "(" expr ")"
//! ```
//!
//! Rational literals are written as quotients (`3/4`), coordinates by their
//! chart names, and negative exponents are allowed for nonzero bases.

use super::chart::Chart;
use super::field::Field;
use super::ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unknown coordinate `{name}` at position {pos}")]
    UnknownCoordinate { name: String, pos: usize },
    #[error("malformed expression at position {pos}: {message}")]
    Malformed { pos: usize, message: String },
    #[error("division by the zero polynomial at position {pos}")]
    DivisionByZero { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnknownCoordinate { pos, .. }
            | ParseError::Malformed { pos, .. }
            | ParseError::DivisionByZero { pos } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::Malformed {
                pos: i,
                message: format!("unexpected character `{}`", c),
            });
        }
    }
    Ok(out)
}

struct Parser<'a, C: Field> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    chart: &'a Chart,
    _c: std::marker::PhantomData<C>,
}

impl<'a, C: Field> Parser<'a, C> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction<C>, ParseError> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<RationalFunction<C>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.here();
                self.pos += 1;
                let d = self.unary()?;
                acc = acc
                    .checked_div(&d)
                    .map_err(|_| ParseError::DivisionByZero { pos })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction<C>, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction<C>, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        let pos = self.here();
        self.pos += 1;
        let neg = self.eat('-');
        let e = match self.toks.get(self.pos) {
            Some((Tok::Num(d), p)) => {
                let p = *p;
                let v: i32 = d.parse().map_err(|_| ParseError::Malformed {
                    pos: p,
                    message: "exponent too large".into(),
                })?;
                self.pos += 1;
                if neg {
                    -v
                } else {
                    v
                }
            }
            _ => {
                return Err(ParseError::Malformed {
                    pos: self.here(),
                    message: "expected an integer exponent".into(),
                })
            }
        };
        base.powi(e).map_err(|_| ParseError::DivisionByZero { pos })
    }

    fn atom(&mut self) -> Result<RationalFunction<C>, ParseError> {
        let here = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Num(d), p)) => {
                self.pos += 1;
                let n = d.parse::<i64>().ok().and_then(C::from_i64).ok_or_else(|| {
                    ParseError::Malformed {
                        pos: p,
                        message: "integer literal out of range".into(),
                    }
                })?;
                Ok(RationalFunction::constant(n))
            }
            Some((Tok::Ident(name), p)) => {
                self.pos += 1;
                match self.chart.index_of(&name) {
                    Some(i) => Ok(RationalFunction::var(i)),
                    None => Err(ParseError::UnknownCoordinate { name, pos: p }),
                }
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::Malformed {
                        pos: self.here(),
                        message: "expected `)`".into(),
                    });
                }
                Ok(e)
            }
            Some((Tok::Op(c), p)) => Err(ParseError::Malformed {
                pos: p,
                message: format!("unexpected `{}`", c),
            }),
            None => Err(ParseError::Malformed {
                pos: here,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parse `text` into canonical form over `chart`.
pub fn parse_expr<C: Field>(text: &str, chart: &Chart) -> Result<RationalFunction<C>, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser::<C> {
        toks,
        pos: 0,
        end: text.chars().count(),
        chart,
        _c: std::marker::PhantomData,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::Malformed {
            pos: p.here(),
            message: "trailing input".into(),
        });
    }
    Ok(e)
}
