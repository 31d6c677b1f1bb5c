use std::collections::BTreeSet;
use std::fmt;

/// A variable `x<k>` with `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    /// # Panics
    /// If `index` is zero.
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Implies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom { rel: String, args: Vec<Var> },
    Eq(Var, Var),
    Not(Box<Formula>),
    Bin(BinOp, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Var, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: impl Into<String>, args: impl IntoIterator<Item = Var>) -> Self {
        Formula::Atom {
            rel: rel.into(),
            args: args.into_iter().collect(),
        }
    }

    pub fn eq(left: Var, right: Var) -> Self {
        Formula::Eq(left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(sub: Formula) -> Self {
        Formula::Not(Box::new(sub))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::Bin(BinOp::And, Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Bin(BinOp::Or, Box::new(left), Box::new(right))
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Bin(BinOp::Implies, Box::new(left), Box::new(right))
    }

    pub fn exists(var: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, var, Box::new(body))
    }

    pub fn forall(var: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, var, Box::new(body))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty iterator.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Free variables in order of first occurrence, reading left to right.
    pub fn free_variables(&self) -> Vec<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            let visit = |v: Var, out: &mut Vec<Var>| {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            };
            match f {
                Formula::Atom { args, .. } => {
                    for &v in args {
                        visit(v, out);
                    }
                }
                Formula::Eq(l, r) => {
                    visit(*l, out);
                    visit(*r, out);
                }
                Formula::Not(sub) => walk(sub, bound, out),
                Formula::Bin(_, l, r) => {
                    walk(l, bound, out);
                    walk(r, bound, out);
                }
                Formula::Quant(_, v, body) => {
                    bound.push(*v);
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Eq(..) => 0,
            Formula::Not(sub) => sub.quantifier_rank(),
            Formula::Bin(_, l, r) => l.quantifier_rank().max(r.quantifier_rank()),
            Formula::Quant(_, _, body) => 1 + body.quantifier_rank(),
        }
    }

    /// Number of AST nodes; atoms and equalities count one each.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Eq(..) => 1,
            Formula::Not(sub) => 1 + sub.node_count(),
            Formula::Bin(_, l, r) => 1 + l.node_count() + r.node_count(),
            Formula::Quant(_, _, body) => 1 + body.node_count(),
        }
    }

    /// Every variable occurring free or bound.
    pub fn variables(&self) -> BTreeSet<Var> {
        fn walk(f: &Formula, out: &mut BTreeSet<Var>) {
            match f {
                Formula::Atom { args, .. } => out.extend(args.iter().copied()),
                Formula::Eq(l, r) => {
                    out.insert(*l);
                    out.insert(*r);
                }
                Formula::Not(sub) => walk(sub, out),
                Formula::Bin(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Formula::Quant(_, v, body) => {
                    out.insert(*v);
                    walk(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    /// Relation symbols with the argument counts they are used at, in first
    /// occurrence order (a symbol used at two arities appears twice).
    pub fn relation_uses(&self) -> Vec<(String, usize)> {
        fn walk(f: &Formula, out: &mut Vec<(String, usize)>) {
            match f {
                Formula::Atom { rel, args } => {
                    if !out.iter().any(|(r, a)| r == rel && *a == args.len()) {
                        out.push((rel.clone(), args.len()));
                    }
                }
                Formula::Eq(..) => {}
                Formula::Not(sub) | Formula::Quant(_, _, sub) => walk(sub, out),
                Formula::Bin(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Replaces free occurrences of `from` by `to`. The caller guarantees
    /// `to` is not captured by a quantifier of `self`.
    pub fn substitute_free(&self, from: Var, to: Var) -> Formula {
        let sub = |v: Var| if v == from { to } else { v };
        match self {
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args.iter().map(|&v| sub(v)).collect(),
            },
            Formula::Eq(l, r) => Formula::Eq(sub(*l), sub(*r)),
            Formula::Not(f) => Formula::not(f.substitute_free(from, to)),
            Formula::Bin(op, l, r) => Formula::Bin(
                *op,
                Box::new(l.substitute_free(from, to)),
                Box::new(r.substitute_free(from, to)),
            ),
            Formula::Quant(q, v, body) if *v == from => Formula::Quant(*q, *v, body.clone()),
            Formula::Quant(q, v, body) => {
                Formula::Quant(*q, *v, Box::new(body.substitute_free(from, to)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Var {
        Var::new(i)
    }

    #[test]
    fn free_variables_examples() {
        let f = Formula::atom("R", [x(1), x(2)]);
        assert_eq!(f.free_variables(), vec![x(1), x(2)]);
        let g = Formula::exists(x(1), Formula::atom("R", [x(1)]));
        assert!(g.free_variables().is_empty());
        let h = Formula::and(
            Formula::eq(x(1), x(1)),
            Formula::forall(x(1), Formula::atom("R", [x(1), x(2)])),
        );
        assert_eq!(h.free_variables(), vec![x(1), x(2)]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Formula::atom("R", [x(1)]).quantifier_rank(), 0);
        let r2 = Formula::exists(x(1), Formula::forall(x(2), Formula::eq(x(1), x(2))));
        assert_eq!(r2.quantifier_rank(), 2);
        let r3 = Formula::exists(x(3), r2.clone());
        assert_eq!(Formula::and(r2.clone(), r3).quantifier_rank(), 3);
        assert_eq!(Formula::not(r2).quantifier_rank(), 2);
    }

    #[test]
    fn substitution_respects_binding() {
        let f = Formula::and(
            Formula::atom("P", [x(1)]),
            Formula::exists(x(1), Formula::atom("P", [x(1)])),
        );
        let g = f.substitute_free(x(1), x(5));
        assert_eq!(g.free_variables(), vec![x(5)]);
        assert_eq!(g.variables().len(), 2);
    }
}
