//! A small expression language for elements of `𝒪ₙ`.
//!
//! ```text
//! element := term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := "-" factor | atom "'"*
//! atom    := integer ("/" integer)? | "i" | "r2" | "s" digits | "(" element ")"
//! ```
//!
//! `'` is the adjoint and binds tighter than `*`; `r2` is `√2`. Leading
//! minus signs are accepted anywhere a factor may start. Sub-expressions that
//! are pure scalars are folded while parsing.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{CuntzAlgebra, CuntzElement, ExactScalar, Gaussian};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Expr {
    Scalar(ExactScalar),
    Gen(usize),
    Sum(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Adjoint(Box<Expr>),
}

impl Expr {
    fn sum(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Scalar(x), Expr::Scalar(y)) => Expr::Scalar(&x + &y),
            (a, b) => Expr::Sum(Box::new(a), Box::new(b)),
        }
    }

    fn diff(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Scalar(x), Expr::Scalar(y)) => Expr::Scalar(&x - &y),
            (a, b) => Expr::Diff(Box::new(a), Box::new(b)),
        }
    }

    fn prod(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Scalar(x), Expr::Scalar(y)) => Expr::Scalar(&x * &y),
            (a, b) => Expr::Prod(Box::new(a), Box::new(b)),
        }
    }

    fn neg(a: Expr) -> Expr {
        match a {
            Expr::Scalar(x) => Expr::Scalar(-x),
            a => Expr::Neg(Box::new(a)),
        }
    }

    fn adjoint(a: Expr) -> Expr {
        match a {
            Expr::Scalar(x) => Expr::Scalar(x.conj()),
            a => Expr::Adjoint(Box::new(a)),
        }
    }

    pub fn eval(&self, alg: CuntzAlgebra) -> Result<CuntzElement> {
        Ok(match self {
            Expr::Scalar(c) => alg.scalar(c.clone()),
            Expr::Gen(k) => alg.generator(*k)?,
            Expr::Sum(a, b) => a.eval(alg)?.add(&b.eval(alg)?)?,
            Expr::Diff(a, b) => a.eval(alg)?.sub(&b.eval(alg)?)?,
            Expr::Prod(a, b) => a.eval(alg)?.mul(&b.eval(alg)?)?,
            Expr::Neg(a) => a.eval(alg)?.neg(),
            Expr::Adjoint(a) => a.eval(alg)?.adjoint(),
        })
    }
}

/// Fully parenthesized rendering; parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Scalar(c) => write!(f, "({c})"),
            Expr::Gen(k) => write!(f, "s{k}"),
            Expr::Sum(a, b) => write!(f, "({a} + {b})"),
            Expr::Diff(a, b) => write!(f, "({a} - {b})"),
            Expr::Prod(a, b) => write!(f, "({a} * {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Adjoint(a) => write!(f, "{a}'"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Gen(usize),
    I,
    R2,
    Plus,
    Minus,
    Star,
    Slash,
    Quote,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(k) => write!(f, "{k}"),
            Tok::Gen(k) => write!(f, "s{k}"),
            Tok::I => f.write_str("i"),
            Tok::R2 => f.write_str("r2"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Quote => f.write_str("'"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, column);
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '\'' => Some(Tok::Quote),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            k += 1;
            column += 1;
            continue;
        }
        if c == '\n' {
            line += 1;
            column = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            column += 1;
            continue;
        }
        let start = k;
        if c.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            let value: BigInt = digits.parse().expect("ascii digits");
            out.push(Spanned {
                tok: Tok::Int(value),
                line: l0,
                column: c0,
            });
            column += k - start;
            continue;
        }
        if c.is_ascii_alphabetic() {
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            let word: String = chars[start..k].iter().collect();
            let tok = match word.as_str() {
                "i" => Tok::I,
                "r2" => Tok::R2,
                w if w.len() > 1
                    && w.starts_with('s')
                    && w[1..].bytes().all(|b| b.is_ascii_digit()) =>
                {
                    let index: usize = w[1..].parse().map_err(|_| {
                        syntax(l0, c0, format!("generator index too large in {w:?}"))
                    })?;
                    Tok::Gen(index)
                }
                w => return Err(syntax(l0, c0, format!("unknown identifier {w:?}"))),
            };
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            column += k - start;
            continue;
        }
        return Err(syntax(l0, c0, format!("unexpected character {c:?}")));
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    n: u8,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn element(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::sum(acc, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::diff(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = Expr::prod(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.factor()?));
        }
        let mut x = self.atom()?;
        while self.peek().tok == Tok::Quote {
            self.bump();
            x = Expr::adjoint(x);
        }
        Ok(x)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Int(p) => {
                let mut r = BigRational::from_integer(p);
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let d = self.bump();
                    match d.tok {
                        Tok::Int(q) if !q.is_zero() => r /= BigRational::from_integer(q),
                        Tok::Int(_) => return Err(syntax(d.line, d.column, "zero denominator")),
                        other => {
                            return Err(syntax(
                                d.line,
                                d.column,
                                format!("expected a denominator, found {other}"),
                            ))
                        }
                    }
                }
                Ok(Expr::Scalar(ExactScalar::from_gaussian(Gaussian::new(
                    r,
                    BigRational::zero(),
                ))))
            }
            Tok::I => Ok(Expr::Scalar(ExactScalar::i())),
            Tok::R2 => Ok(Expr::Scalar(ExactScalar::sqrt2())),
            Tok::Gen(k) => {
                if k == 0 || k > self.n as usize {
                    return Err(Error::IndexOutOfRange {
                        index: k,
                        n: self.n,
                    });
                }
                Ok(Expr::Gen(k))
            }
            Tok::LParen => {
                let inner = self.element()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(syntax(
                        close.line,
                        close.column,
                        format!("expected ')', found {}", close.tok),
                    ));
                }
                Ok(inner)
            }
            other => Err(syntax(t.line, t.column, format!("unexpected {other}"))),
        }
    }
}

/// Parses `text` for the alphabet `1..=n`.
pub fn parse(text: &str, n: u8) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        n,
    };
    let e = p.element()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(
            t.line,
            t.column,
            format!("unexpected {} after expression", t.tok),
        ));
    }
    Ok(e)
}

/// Parses and evaluates in `alg`.
pub fn eval_str(text: &str, alg: CuntzAlgebra) -> Result<CuntzElement> {
    parse(text, alg.n())?.eval(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::classify;

    fn o(n: usize) -> CuntzAlgebra {
        CuntzAlgebra::new(n).unwrap()
    }

    #[test]
    fn swap_unitary() {
        let a = o(2);
        let x = eval_str("s1*s2' + s2*s1'", a).unwrap();
        let expected = a.unit(1, 2).unwrap().add(&a.unit(2, 1).unwrap()).unwrap();
        assert!(x.equals(&expected).unwrap());
        assert!(classify(&x).unwrap().involution);
    }

    #[test]
    fn scalar_arithmetic() {
        let a = o(2);
        let x = eval_str("1/2 - (1/2)*s1*s1'", a).unwrap();
        let e11 = a.unit(1, 1).unwrap();
        let expected = a
            .one()
            .sub(&e11)
            .unwrap()
            .scale(&ExactScalar::rational(1, 2));
        assert!(x.equals(&expected).unwrap());
        assert_eq!(
            parse("1/2*r2 + 3*i", 2).unwrap(),
            parse("i*3 + (1/2)*r2", 2).unwrap()
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("s3", 2).unwrap_err(),
            Error::IndexOutOfRange { index: 3, n: 2 }
        );
        assert!(matches!(
            parse("s1 +\n  * s2", 2),
            Err(Error::Syntax {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            parse("(s1", 2),
            Err(Error::Syntax {
                line: 1,
                column: 4,
                ..
            })
        ));
        assert!(matches!(
            parse("s1 s2", 2),
            Err(Error::Syntax {
                line: 1,
                column: 4,
                ..
            })
        ));
        assert!(matches!(parse("x", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1/0", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse("", 2), Err(Error::Syntax { .. })));
    }

    #[test]
    fn adjoint_binds_tightest() {
        let a = o(2);
        let x = eval_str("s1*s2'", a).unwrap();
        assert!(x.equals(&a.unit(1, 2).unwrap()).unwrap());
        let y = eval_str("(s1*s2)'", a).unwrap();
        assert!(y
            .equals(
                &a.generator(1)
                    .unwrap()
                    .mul(&a.generator(2).unwrap())
                    .unwrap()
                    .adjoint()
            )
            .unwrap());
        let z = eval_str("s1''", a).unwrap();
        assert!(z.equals(&a.generator(1).unwrap()).unwrap());
    }

    #[test]
    fn printing_roundtrips() {
        for text in [
            "s1*s2' + s2*s1'",
            "1/2 - (1/2)*s1*s1'",
            "-(i*s1)' + r2*s2*s2'",
            "(1/2 + i*r2)*s1''*s2 - 3",
        ] {
            let e = parse(text, 2).unwrap();
            let printed = e.to_string();
            let again = parse(&printed, 2).unwrap();
            assert_eq!(again, e, "{text}");
            assert_eq!(again.to_string(), printed);
        }
    }

    #[test]
    fn element_display_parses_back() {
        let a = o(3);
        let x = eval_str("(1/2 - i*r2)*s1*s2' - 1/3*s3 + s2'*s2'", a).unwrap();
        let back = eval_str(&x.to_string(), a).unwrap();
        assert!(back.equals(&x).unwrap());
        let back = eval_str(&x.contract().to_string(), a).unwrap();
        assert!(back.equals(&x).unwrap());
    }
}
