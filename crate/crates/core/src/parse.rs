//! Text input for polynomials in X over F_p(t).
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/')? factor)*
//! factor := '-' factor | atom ('^' power)?
//! atom   := integer | 't' | 'X' | '(' expr ')'
//! power  := integer | '-' integer | '(' '-'? integer ')'
//! ```
//!
//! Integers are reduced mod p and juxtaposition multiplies. Only X-free
//! expressions may divide or carry negative powers.

use crate::ffield::{FieldCtx, FieldError, FieldRef};
use crate::hasse::Poly;
use crate::ratfun::RatFun;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{message} at column {}", .pos + 1)]
    Syntax { pos: usize, message: String },
    #[error("division by zero at column {}", .pos + 1)]
    DivisionByZero { pos: usize },
    #[error("invalid characteristic: {0}")]
    Field(#[from] FieldError),
}

impl ParseError {
    /// Character offset of the error, when it has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::DivisionByZero { pos } => Some(*pos),
            ParseError::Field(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    T,
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) => format!("'{s}'"),
        Tok::T => "'t'".into(),
        Tok::X => "'X'".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(chars[start..i].iter().collect())));
                continue;
            }
            't' => Tok::T,
            'X' | 'x' => Tok::X,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError::Syntax { pos: i, message: format!("unknown symbol '{other}'") })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    ctx: FieldRef,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(&tok), describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = match self.peek() {
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            Tok::Minus => {
                self.bump();
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.factor()?;
                    acc = acc.scale(&self.invert(&d, pos)?);
                }
                Tok::Int(_) | Tok::T | Tok::X | Tok::LParen => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn invert(&self, d: &Poly, pos: usize) -> Result<RatFun, ParseError> {
        match d.degree() {
            None => Err(ParseError::DivisionByZero { pos }),
            Some(0) => Ok(d.coeff(0).inv().expect("nonzero constant")),
            Some(_) => Err(ParseError::Syntax { pos, message: "cannot divide by a polynomial in X".into() }),
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let e = self.power()?;
        if e >= 0 {
            let e = u32::try_from(e).or_else(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        let inv = self.invert(&base, pos)?;
        let e = u64::try_from(-e).or_else(|_| self.error("exponent too large"))?;
        Ok(Poly::constant(inv.pow(e)))
    }

    fn power(&mut self) -> Result<i64, ParseError> {
        let parens = *self.peek() == Tok::LParen;
        if parens {
            self.bump();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let Tok::Int(digits) = self.peek().clone() else {
            return self.error(format!("expected an integer exponent, found {}", describe(self.peek())));
        };
        let n: i64 = digits.parse().or_else(|_| self.error("exponent too large"))?;
        self.bump();
        if parens {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let ctx = self.ctx.clone();
        match self.bump() {
            Tok::Int(digits) => {
                let p = ctx.characteristic() as u64;
                let r = digits.bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Poly::constant(RatFun::from_int(ctx, r as i64)))
            }
            Tok::T => Ok(Poly::constant(RatFun::t(ctx))),
            Tok::X => Ok(Poly::x(ctx)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => {
                self.at -= usize::from(other != Tok::End);
                self.error(format!("expected a number, 't', 'X' or '(', found {}", describe(&other)))
            }
        }
    }
}

/// Parse a polynomial in X with coefficients in F_p(t).
pub fn parse_polynomial(text: &str, p: u64) -> Result<Poly, ParseError> {
    let ctx = FieldCtx::prime_field(p)?;
    parse_over(text, &ctx)
}

/// Parse over an existing prime field.
pub fn parse_over(text: &str, ctx: &FieldRef) -> Result<Poly, ParseError> {
    let mut parser = Parser { ctx: ctx.clone(), toks: lex(text)?, at: 0 };
    let poly = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.error(format!("unexpected {}", describe(parser.peek())));
    }
    Ok(poly)
}
