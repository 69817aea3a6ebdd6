//! Reader for the polynomial text grammar and the stanza-based data files.
//!
//! ```text
//! value   := list | expr
//! list    := '[' expr (',' expr)* ']'
//! expr    := ('+' | '-')? term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ('^' INT)?
//! primary := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Whitespace and newlines are insignificant, `#` starts a comment that runs to
//! the end of the line. A data file is a sequence of stanzas, each opened by a
//! header line `name: vars = v1 v2 ...` and followed by one value.

use num_bigint::BigInt;

use super::poly::{Coeff, Context, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, first_line: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if ch == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                col: c0,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if "+-*^/()[],".contains(ch) {
            out.push(Spanned {
                tok: Tok::Sym(ch),
                line: l0,
                col: c0,
            });
            col += 1;
            i += 1;
            continue;
        }
        return Err(Error::Parse {
            line: l0,
            column: c0,
            message: format!("unexpected character `{ch}`"),
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

/// A parsed stanza value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value<C: Coeff> {
    Poly(Poly<C>),
    List(Vec<Poly<C>>),
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ctx: &'a Context,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Parse {
            line: s.line,
            column: s.col,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn value<C: Coeff>(&mut self) -> Result<Value<C>> {
        if self.eat('[') {
            let mut items = vec![self.expr()?];
            while self.eat(',') {
                items.push(self.expr()?);
            }
            if !self.eat(']') {
                return self.err("expected `,` or `]`");
            }
            Ok(Value::List(items))
        } else {
            Ok(Value::Poly(self.expr()?))
        }
    }

    fn expr<C: Coeff>(&mut self) -> Result<Poly<C>> {
        let mut acc = Poly::zero(self.ctx);
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<Poly<C>> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = acc.try_mul(&f).or_else(|e| self.err(e.to_string()))?;
        }
        Ok(acc)
    }

    fn factor<C: Coeff>(&mut self) -> Result<Poly<C>> {
        let base = self.primary()?;
        if self.eat('^') {
            match self.bump() {
                Tok::Int(n) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e <= super::monomial::MAX_EXP => e,
                        _ => return self.err(format!("exponent {n} out of range")),
                    };
                    Ok(base.pow(e))
                }
                _ => {
                    self.pos -= 1;
                    self.err("expected an integer exponent after `^`")
                }
            }
        } else {
            Ok(base)
        }
    }

    fn primary<C: Coeff>(&mut self) -> Result<Poly<C>> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let mut c = C::from_bigint(n);
                if self.eat('/') {
                    match self.bump() {
                        Tok::Int(d) => match c.div_exact(&C::from_bigint(d)) {
                            Some(q) => c = q,
                            None => {
                                self.pos -= 1;
                                return self.err("fraction not representable in the coefficient ring");
                            }
                        },
                        _ => {
                            self.pos -= 1;
                            return self.err("expected an integer denominator");
                        }
                    }
                }
                Ok(Poly::constant(self.ctx, c))
            }
            Tok::Ident(name) => match self.ctx.index(&name) {
                Some(i) => {
                    self.bump();
                    Ok(Poly::var_at(self.ctx, i))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            t => self.err(format!("unexpected token {t:?}")),
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }
}

fn parse_value_at<C: Coeff>(src: &str, ctx: &Context, first_line: usize) -> Result<Value<C>> {
    let mut p = Parser {
        toks: lex(src, first_line)?,
        pos: 0,
        ctx,
    };
    let v = p.value()?;
    p.finish()?;
    Ok(v)
}

/// Parses one polynomial expression.
pub fn parse_poly<C: Coeff>(src: &str, ctx: &Context) -> Result<Poly<C>> {
    match parse_value_at(src, ctx, 1)? {
        Value::Poly(p) => Ok(p),
        Value::List(_) => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "expected a polynomial, found a list".into(),
        }),
    }
}

/// Parses a polynomial or a bracketed list of polynomials.
pub fn parse_value<C: Coeff>(src: &str, ctx: &Context) -> Result<Value<C>> {
    parse_value_at(src, ctx, 1)
}

/// One named constant of a data file.
#[derive(Clone, Debug)]
pub struct Stanza<C: Coeff> {
    pub name: String,
    pub ctx: Context,
    pub value: Value<C>,
    pub line: usize,
}

fn header(line: &str) -> Option<(String, String)> {
    let code = line.split('#').next().unwrap_or("");
    let (name, rest) = code.split_once(':')?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("vars")?.trim_start();
    let vars = rest.strip_prefix('=')?;
    Some((name.to_string(), vars.trim().to_string()))
}

/// Parses a whole data file; errors carry file line and column.
pub fn parse_data_file<C: Coeff>(src: &str) -> Result<Vec<Stanza<C>>> {
    let lines: Vec<&str> = src.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let trimmed = lines[i].split('#').next().unwrap_or("").trim();
        if trimmed.is_empty() {
            i += 1;
            continue;
        }
        let (name, vars) = match header(lines[i]) {
            Some(h) => h,
            None => {
                return Err(Error::Parse {
                    line: i + 1,
                    column: 1,
                    message: "expected a stanza header `name: vars = ...`".into(),
                })
            }
        };
        let ctx = Context::parse(&vars).map_err(|e| Error::Parse {
            line: i + 1,
            column: 1,
            message: e.to_string(),
        })?;
        let start = i + 1;
        let mut j = start;
        while j < lines.len() && header(lines[j]).is_none() {
            j += 1;
        }
        let body = lines[start..j].join("\n");
        let value = parse_value_at(&body, &ctx, start + 1)?;
        out.push(Stanza {
            name,
            ctx,
            value,
            line: i + 1,
        });
        i = j;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::MPoly;

    fn abcd() -> Context {
        Context::parse("a b c d").unwrap()
    }

    #[test]
    fn sum_of_squares() {
        let p: MPoly = parse_poly("a^2+b^2+c^2+d^2", &abcd()).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.homogeneous_degree(), Some(2));
    }

    #[test]
    fn zero_and_cancellation() {
        let z: MPoly = parse_poly("0", &abcd()).unwrap();
        assert!(z.is_zero());
        let c: MPoly = parse_poly("2*a - a - a", &abcd()).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn groups_and_powers() {
        let p: MPoly = parse_poly("-(a - b)^2 + 3*(a*b)", &abcd()).unwrap();
        assert_eq!(p.to_string(), "-a^2 + 5*a*b - b^2");
    }

    #[test]
    fn error_position() {
        let e = parse_poly::<num_bigint::BigInt>("a +\n  b * $", &abcd()).unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                column: 7,
                message: "unexpected character `$`".into()
            }
        );
        let e = parse_poly::<num_bigint::BigInt>("a + e", &abcd()).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 5, .. }));
        let e = parse_poly::<num_bigint::BigInt>("(a + b", &abcd()).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }

    #[test]
    fn rational_coefficients_need_a_field() {
        let q = parse_poly::<num_rational::BigRational>("1/2*a", &abcd()).unwrap();
        assert_eq!(q.to_string(), "1/2*a");
        assert!(parse_poly::<num_bigint::BigInt>("1/2*a", &abcd()).is_err());
        assert!(parse_poly::<num_bigint::BigInt>("4/2*a", &abcd()).is_ok());
    }

    #[test]
    fn stanzas() {
        let src = "# comment\nP2: vars = a b c d\na^2 + b^2\n + c^2 + d^2\n\nv: vars = x y\n[x, -y, 2]\n";
        let st = parse_data_file::<num_bigint::BigInt>(src).unwrap();
        assert_eq!(st.len(), 2);
        assert_eq!(st[0].name, "P2");
        assert!(matches!(&st[1].value, Value::List(v) if v.len() == 3));
        let bad = "P: vars = a\na + + \n";
        let e = parse_data_file::<num_bigint::BigInt>(bad).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
