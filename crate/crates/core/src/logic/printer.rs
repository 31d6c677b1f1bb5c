//! Canonical printer. Output re-parses to the same AST.
//!
//! Parentheses are emitted only where precedence or associativity needs
//! them, with two exceptions: a binary quantifier body is always
//! parenthesized, and a quantifier not in tail position is wrapped because
//! its body would otherwise swallow whatever follows.

use std::fmt::{self, Write};

use super::{BinOp, Formula, Quantifier};

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn prec(op: BinOp) -> u8 {
    match op {
        BinOp::Implies => PREC_IMP,
        BinOp::Or => PREC_OR,
        BinOp::And => PREC_AND,
    }
}

fn symbol(op: BinOp) -> &'static str {
    match op {
        BinOp::Implies => "->",
        BinOp::Or => "|",
        BinOp::And => "&",
    }
}

fn write_formula(out: &mut impl Write, f: &Formula, min_prec: u8, tail: bool) -> fmt::Result {
    match f {
        Formula::Atom { rel, args } => {
            write!(out, "{rel}(")?;
            for (i, v) in args.iter().enumerate() {
                if i > 0 {
                    out.write_char(',')?;
                }
                write!(out, "{v}")?;
            }
            out.write_char(')')
        }
        Formula::Eq(l, r) => write!(out, "{l} = {r}"),
        Formula::Not(sub) => {
            out.write_char('!')?;
            write_formula(out, sub, PREC_UNARY, tail)
        }
        Formula::Bin(op, l, r) => {
            let p = prec(*op);
            let parens = p < min_prec;
            let tail = tail || parens;
            let (lp, rp) = match op {
                BinOp::Implies => (p + 1, p),
                BinOp::And | BinOp::Or => (p, p + 1),
            };
            if parens {
                out.write_char('(')?;
            }
            write_formula(out, l, lp, false)?;
            write!(out, " {} ", symbol(*op))?;
            write_formula(out, r, rp, tail)?;
            if parens {
                out.write_char(')')?;
            }
            Ok(())
        }
        Formula::Quant(q, v, body) => {
            if !tail {
                out.write_char('(')?;
            }
            let kw = match q {
                Quantifier::Exists => 'E',
                Quantifier::Forall => 'A',
            };
            write!(out, "{kw} {v} . ")?;
            if matches!(**body, Formula::Bin(..)) {
                out.write_char('(')?;
                write_formula(out, body, 0, true)?;
                out.write_char(')')?;
            } else {
                write_formula(out, body, 0, true)?;
            }
            if !tail {
                out.write_char(')')?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, true)
    }
}

impl Formula {
    /// The canonical text form; same as `to_string`.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, Signature, Var};
    use super::*;

    fn x(i: u32) -> Var {
        Var::new(i)
    }

    #[test]
    fn render_examples() {
        assert_eq!(Formula::eq(x(1), x(2)).render(), "x1 = x2");
        assert_eq!(Formula::not(Formula::atom("R", [x(1)])).render(), "!R(x1)");
        let q = Formula::exists(x(1), Formula::atom("R", [x(1)]));
        assert_eq!(q.render(), "E x1 . R(x1)");
        let mixed = Formula::and(q.clone(), Formula::atom("R", [x(2)]));
        assert_eq!(mixed.render(), "(E x1 . R(x1)) & R(x2)");
        let tail = Formula::and(Formula::atom("R", [x(2)]), q);
        assert_eq!(tail.render(), "R(x2) & E x1 . R(x1)");
        let nested = Formula::implies(
            Formula::implies(Formula::atom("R", [x(1)]), Formula::atom("R", [x(2)])),
            Formula::atom("R", [x(3)]),
        );
        assert_eq!(nested.render(), "(R(x1) -> R(x2)) -> R(x3)");
    }

    #[test]
    fn not_of_quantifier_in_left_operand() {
        let sig = Signature::new([("R", 1)]).unwrap();
        let f = Formula::or(
            Formula::not(Formula::forall(x(1), Formula::atom("R", [x(1)]))),
            Formula::atom("R", [x(2)]),
        );
        let text = f.render();
        assert_eq!(text, "!(A x1 . R(x1)) | R(x2)");
        assert_eq!(parse_formula(&text, &sig).unwrap(), f);
    }
}
