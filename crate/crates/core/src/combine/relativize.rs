//! (E, σ)-relativization of formulas.
//!
//! The transform is defined by induction over a formula `φ(x1..xn)`:
//!
//! 1. atom: `φ ∧ ⋀_{i,j} E(xi,xj) ∧ ∃y(E(x1,y) ∧ σ(y))`
//! 2. `ψ τ χ` for `τ ∈ {∧, ∨, →}`: `ψ' τ χ'`
//! 3. `¬ψ`: `¬ψ' ∧ ⋀_{i,j} E(xi,xj) ∧ ∃y(E(x1,y) ∧ σ(y))`
//! 4. `∃x ψ`: `∃x(⋀_i E(x,xi) ∧ ∃y(E(x,y) ∧ σ(y)) ∧ ψ')`
//! 5. `∀x ψ`: `∀x(⋀_i E(x,xi) ∧ ∃y(E(x,y) ∧ σ(y)) → ψ')`
//!
//! The tuple `x1..xn` of a subformula is its variable context: the free
//! variables of the input formula followed inward by every enclosing
//! quantified variable, the innermost first. A subformula that happens to be
//! closed is therefore still tied to the class of its context. With an empty
//! context the pair guards vanish and clause 3 reduces to `¬ψ'`.
//!
//! `y` is one fresh variable: the least index occurring in neither `φ` nor
//! `σ`. Each witness quantifier closes its own scope, so it is reused.
//!
//! A quantifier that rebinds a variable already in the context would cut
//! the link to the outer class, so its variable is renamed to a fresh index
//! above every index in use.

use std::cell::Cell;

use crate::logic::{Formula, Quantifier, Signature, Var};

use super::CombineError;

struct Relativizer<'a> {
    e_sym: &'a str,
    sigma: Formula,
    witness_var: Var,
    next_fresh: Cell<u32>,
}

impl Relativizer<'_> {
    fn e(&self, a: Var, b: Var) -> Formula {
        Formula::atom(self.e_sym, [a, b])
    }

    /// `∃y(E(anchor, y) ∧ σ(y))`
    fn witness(&self, anchor: Var) -> Formula {
        Formula::exists(
            self.witness_var,
            Formula::and(self.e(anchor, self.witness_var), self.sigma.clone()),
        )
    }

    /// `⋀_{i,j} E(xi,xj) ∧ ∃y(E(x1,y) ∧ σ(y))`, or nothing for an empty context.
    fn class_guard(&self, ctx: &[Var]) -> Vec<Formula> {
        let Some(&first) = ctx.first() else {
            return Vec::new();
        };
        let mut parts = Vec::with_capacity(ctx.len() * ctx.len() + 1);
        for &xi in ctx {
            for &xj in ctx {
                parts.push(self.e(xi, xj));
            }
        }
        parts.push(self.witness(first));
        parts
    }

    fn transform(&self, f: &Formula, ctx: &[Var]) -> Formula {
        match f {
            Formula::Atom { .. } | Formula::Eq(..) => {
                let parts = std::iter::once(f.clone()).chain(self.class_guard(ctx));
                Formula::conjunction(parts).expect("nonempty")
            }
            Formula::Bin(op, l, r) => Formula::Bin(
                *op,
                Box::new(self.transform(l, ctx)),
                Box::new(self.transform(r, ctx)),
            ),
            Formula::Not(sub) => {
                let negated = Formula::not(self.transform(sub, ctx));
                let parts = std::iter::once(negated).chain(self.class_guard(ctx));
                Formula::conjunction(parts).expect("nonempty")
            }
            Formula::Quant(q, x, body) => {
                let (x, body) = if ctx.contains(x) {
                    let fresh = Var::new(self.next_fresh.get());
                    self.next_fresh.set(fresh.index() + 1);
                    (fresh, body.substitute_free(*x, fresh))
                } else {
                    (*x, (**body).clone())
                };
                let inner: Vec<Var> = std::iter::once(x).chain(ctx.iter().copied()).collect();
                let links = ctx
                    .iter()
                    .map(|&xi| self.e(x, xi))
                    .chain(std::iter::once(self.witness(x)));
                let guard = Formula::conjunction(links).expect("nonempty");
                let body = self.transform(&body, &inner);
                match q {
                    Quantifier::Exists => Formula::exists(x, Formula::and(guard, body)),
                    Quantifier::Forall => Formula::forall(x, Formula::implies(guard, body)),
                }
            }
        }
    }
}

fn prepare<'a>(f: &Formula, e_sym: &'a str, sigma: &Formula) -> Result<Relativizer<'a>, CombineError> {
    // Validates the symbol name.
    Signature::new([(e_sym, 2)])?;
    for (rel, arity) in f.relation_uses().into_iter().chain(sigma.relation_uses()) {
        if rel == e_sym && arity != 2 {
            return Err(CombineError::ArityError(e_sym.to_string()));
        }
    }
    let sigma_free = sigma.free_variables();
    if sigma_free.len() != 1 {
        return Err(CombineError::SigmaArity(sigma_free.len()));
    }
    let used: Vec<u32> = f
        .variables()
        .into_iter()
        .chain(sigma.variables())
        .map(Var::index)
        .collect();
    let fresh = (1..).find(|i| !used.contains(i)).expect("finitely many variables");
    let witness_var = Var::new(fresh);
    Ok(Relativizer {
        e_sym,
        sigma: sigma.substitute_free(sigma_free[0], witness_var),
        witness_var,
        next_fresh: Cell::new(used.iter().copied().chain([fresh]).max().unwrap_or(fresh) + 1),
    })
}

/// The five inductive clauses applied verbatim, nothing added at the top.
pub fn relativize_clauses(f: &Formula, e_sym: &str, sigma: &Formula) -> Result<Formula, CombineError> {
    let r = prepare(f, e_sym, sigma)?;
    Ok(r.transform(f, &f.free_variables()))
}

/// `φ^{E,σ}`.
///
/// Built by [`relativize_clauses`]; when `φ` has free variables and its
/// outermost connective is binary or universal, the clause-1 class guard is
/// conjoined at the top as well. Atoms, negations and existentials already
/// end in a guard, so their output is exactly the clause form. With the
/// guard in place the result is false whenever the free variables sit in a
/// class that misses σ.
pub fn relativize(f: &Formula, e_sym: &str, sigma: &Formula) -> Result<Formula, CombineError> {
    let r = prepare(f, e_sym, sigma)?;
    let ctx = f.free_variables();
    let core = r.transform(f, &ctx);
    let needs_guard = matches!(
        f,
        Formula::Bin(..) | Formula::Quant(Quantifier::Forall, ..)
    ) && !ctx.is_empty();
    if !needs_guard {
        return Ok(core);
    }
    let parts = std::iter::once(core).chain(r.class_guard(&ctx));
    Ok(Formula::conjunction(parts).expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula_inferred;

    fn p(text: &str) -> Formula {
        parse_formula_inferred(text).unwrap().0
    }

    #[test]
    fn atom_clause_shape() {
        let out = relativize(&p("R(x1,x2)"), "E", &p("x1 = x1")).unwrap();
        assert_eq!(
            out.render(),
            "R(x1,x2) & E(x1,x1) & E(x1,x2) & E(x2,x1) & E(x2,x2) & E x3 . (E(x1,x3) & x3 = x3)"
        );
    }

    #[test]
    fn sigma_variable_is_renamed() {
        let out = relativize(&p("Q(x2)"), "E", &p("P(x1)")).unwrap();
        assert_eq!(out.render(), "Q(x2) & E(x2,x2) & E x3 . (E(x2,x3) & P(x3))");
    }

    #[test]
    fn quantifier_clauses() {
        let ex = relativize_clauses(&p("E x2 . R(x1,x2)"), "E", &p("x1 = x1")).unwrap();
        assert_eq!(
            ex.render(),
            "E x2 . (E(x2,x1) & (E x3 . (E(x2,x3) & x3 = x3)) & (R(x1,x2) & E(x2,x2) & E(x2,x1) \
             & E(x1,x2) & E(x1,x1) & E x3 . (E(x2,x3) & x3 = x3)))"
        );
        let all = relativize_clauses(&p("A x1 . P(x1)"), "E", &p("x1 = x1")).unwrap();
        assert_eq!(
            all.render(),
            "A x1 . ((E x2 . (E(x1,x2) & x2 = x2)) -> P(x1) & E(x1,x1) & E x2 . (E(x1,x2) & x2 = x2))"
        );
    }

    #[test]
    fn rebound_variable_keeps_outer_link() {
        let out = relativize_clauses(&p("A x1 . P(x1)"), "E", &p("x1 = x1")).unwrap();
        assert!(out.render().starts_with("A x1 . "));
        let f = p("P(x1) & A x1 . P(x1)");
        let out = relativize_clauses(&f, "E", &p("x1 = x1")).unwrap();
        assert!(out.render().contains("A x3 . (E(x3,x1) & "), "{out}");
    }

    #[test]
    fn negation_of_sentence_has_no_guard() {
        let out = relativize_clauses(&p("!(E x1 . P(x1))"), "E", &p("x1 = x1")).unwrap();
        assert!(matches!(out, Formula::Not(_)));
    }

    #[test]
    fn free_variables_preserved() {
        for text in ["R(x1,x2)", "E x2 . R(x1,x2)", "!(P(x3) -> A x1 . R(x1,x3))", "P(x1) | x2 = x1"] {
            let f = p(text);
            let out = relativize(&f, "E", &p("P(x5)")).unwrap();
            assert_eq!(out.free_variables(), f.free_variables(), "{text}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            relativize(&p("E(x1)"), "E", &p("x1 = x1")),
            Err(CombineError::ArityError(_))
        ));
        assert!(matches!(
            relativize(&p("P(x1)"), "E", &p("x1 = x2")),
            Err(CombineError::SigmaArity(2))
        ));
        assert!(matches!(
            relativize(&p("P(x1)"), "E", &p("E x1 . x1 = x1")),
            Err(CombineError::SigmaArity(0))
        ));
    }
}
