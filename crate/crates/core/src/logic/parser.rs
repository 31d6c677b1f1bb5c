//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := "!" unary | ("A" | "E") var "." imp | primary
//! primary := "(" imp ")" | Name "(" var ("," var)* ")" | var "=" var
//! ```
//!
//! A quantifier body extends as far right as possible. `A` and `E` are
//! quantifiers only when followed by a variable, so relations may be named
//! `A` or `E`.

use super::signature::{is_identifier, parse_var_name};
use super::{Formula, LogicError, Signature, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Equals,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'=' => Tok::Equals,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(LogicError::Syntax {
                    position: start,
                    expected: vec!["a formula token".into()],
                    found: format!("`{}`", &text[start..].chars().next().unwrap_or(' ')),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// How atoms are checked against relation symbols while parsing.
enum SymbolCheck<'a> {
    Fixed(&'a Signature),
    Infer(Signature),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: SymbolCheck<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, LogicError> {
        Err(LogicError::Syntax {
            position: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LogicError> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            let d = tok.describe();
            self.error(&[&d])
        }
    }

    fn var(&mut self) -> Result<Var, LogicError> {
        if let Tok::Ident(name) = self.peek() {
            if let Some(k) = parse_var_name(name) {
                self.pos += 1;
                return Ok(Var::new(k));
            }
        }
        self.error(&["a variable `x<k>`"])
    }

    fn imp(&mut self) -> Result<Formula, LogicError> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.pos += 1;
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.pos += 1;
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.pos += 1;
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(name) if (name == "A" || name == "E") && self.quantifier_follows() => {
                self.pos += 1;
                let v = self.var()?;
                self.expect(Tok::Dot)?;
                let body = self.imp()?;
                Ok(if name == "A" {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn quantifier_follows(&self) -> bool {
        matches!(self.peek_at(1), Tok::Ident(v) if parse_var_name(v).is_some())
    }

    fn primary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.pos += 1;
                let f = self.imp()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if parse_var_name(&name).is_some() => {
                let left = self.var()?;
                self.expect(Tok::Equals)?;
                let right = self.var()?;
                Ok(Formula::eq(left, right))
            }
            Tok::Ident(name) if is_identifier(&name) && *self.peek_at(1) == Tok::LParen => {
                self.pos += 2;
                let mut args = vec![self.var()?];
                while *self.peek() == Tok::Comma {
                    self.pos += 1;
                    args.push(self.var()?);
                }
                self.expect(Tok::RParen)?;
                self.check_symbol(&name, args.len())?;
                Ok(Formula::atom(name, args))
            }
            _ => self.error(&["`(`", "`!`", "a quantifier", "an atom", "an equality"]),
        }
    }

    fn check_symbol(&mut self, name: &str, found: usize) -> Result<(), LogicError> {
        match &mut self.symbols {
            SymbolCheck::Fixed(sig) => match sig.arity(name) {
                None => Err(LogicError::UnknownSymbol(name.to_string())),
                Some(expected) if expected != found => Err(LogicError::ArityMismatch {
                    name: name.to_string(),
                    expected,
                    found,
                }),
                Some(_) => Ok(()),
            },
            SymbolCheck::Infer(sig) => match sig.arity(name) {
                Some(expected) if expected != found => Err(LogicError::ArityMismatch {
                    name: name.to_string(),
                    expected,
                    found,
                }),
                Some(_) => Ok(()),
                None => sig.push(name, found),
            },
        }
    }

    fn parse_all(&mut self) -> Result<Formula, LogicError> {
        let f = self.imp()?;
        if *self.peek() != Tok::End {
            return self.error(&["end of input", "`&`", "`|`", "`->`"]);
        }
        Ok(f)
    }
}

/// Parses `text` against `sig`: every relation must be declared with the
/// arity it is used at.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        symbols: SymbolCheck::Fixed(sig),
    };
    parser.parse_all()
}

/// Parses `text` without a declared signature, inferring one from usage.
/// Using a symbol at two different arities is an [`LogicError::ArityMismatch`].
pub fn parse_formula_inferred(text: &str) -> Result<(Formula, Signature), LogicError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        symbols: SymbolCheck::Infer(Signature::empty()),
    };
    let f = parser.parse_all()?;
    match parser.symbols {
        SymbolCheck::Infer(sig) => Ok((f, sig)),
        SymbolCheck::Fixed(_) => unreachable!("parser was built in inference mode"),
    }
}
