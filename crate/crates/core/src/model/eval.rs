use std::collections::BTreeMap;

use crate::logic::{BinOp, Formula, Quantifier, Var};

use super::{FiniteStructure, ModelError};

/// Values for variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: Var, element: usize) -> Option<usize> {
        self.0.insert(var, element)
    }

    pub fn get(&self, var: Var) -> Option<usize> {
        self.0.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, usize)> + '_ {
        self.0.iter().map(|(&v, &e)| (v, e))
    }
}

impl FromIterator<(Var, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// Formula with relation names resolved to table indices.
enum Node {
    Atom(usize, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Quant(Quantifier, usize, Box<Node>),
}

fn compile(f: &Formula, a: &FiniteStructure) -> Result<Node, ModelError> {
    let slot = |v: &Var| v.index() as usize;
    Ok(match f {
        Formula::Atom { rel, args } => {
            let idx = a.sig().index_of(rel).ok_or_else(|| {
                ModelError::SignatureMismatch(format!("`{rel}` is not in the structure's signature"))
            })?;
            let arity = a.sig().relations()[idx].arity;
            if arity != args.len() {
                return Err(ModelError::SignatureMismatch(format!(
                    "`{rel}` has arity {arity} in the structure but is used with {} arguments",
                    args.len()
                )));
            }
            Node::Atom(idx, args.iter().map(slot).collect())
        }
        Formula::Eq(l, r) => Node::Eq(slot(l), slot(r)),
        Formula::Not(sub) => Node::Not(Box::new(compile(sub, a)?)),
        Formula::Bin(op, l, r) => Node::Bin(*op, Box::new(compile(l, a)?), Box::new(compile(r, a)?)),
        Formula::Quant(q, v, body) => Node::Quant(*q, slot(v), Box::new(compile(body, a)?)),
    })
}

fn eval(node: &Node, a: &FiniteStructure, env: &mut [usize], buf: &mut Vec<usize>) -> bool {
    match node {
        Node::Atom(idx, args) => {
            buf.clear();
            buf.extend(args.iter().map(|&s| env[s]));
            a.holds(*idx, buf)
        }
        Node::Eq(l, r) => env[*l] == env[*r],
        Node::Not(sub) => !eval(sub, a, env, buf),
        Node::Bin(op, l, r) => match op {
            BinOp::And => eval(l, a, env, buf) && eval(r, a, env, buf),
            BinOp::Or => eval(l, a, env, buf) || eval(r, a, env, buf),
            BinOp::Implies => !eval(l, a, env, buf) || eval(r, a, env, buf),
        },
        Node::Quant(q, slot, body) => {
            let saved = env[*slot];
            let mut result = matches!(q, Quantifier::Forall);
            for e in 0..a.size() {
                env[*slot] = e;
                let v = eval(body, a, env, buf);
                match q {
                    Quantifier::Exists if v => {
                        result = true;
                        break;
                    }
                    Quantifier::Forall if !v => {
                        result = false;
                        break;
                    }
                    _ => {}
                }
            }
            env[*slot] = saved;
            result
        }
    }
}

/// Tarskian truth of `f` in `a` under `asg`; quantifiers range over the
/// whole universe.
pub fn evaluate(a: &FiniteStructure, f: &Formula, asg: &Assignment) -> Result<bool, ModelError> {
    let node = compile(f, a)?;
    let width = f
        .variables()
        .iter()
        .chain(asg.0.keys())
        .map(|v| v.index() as usize)
        .max()
        .unwrap_or(0)
        + 1;
    let mut env = vec![usize::MAX; width];
    for v in f.free_variables() {
        let e = asg.get(v).ok_or(ModelError::UnboundVariable(v))?;
        if e >= a.size() {
            return Err(ModelError::ElementOutOfRange {
                element: e,
                size: a.size(),
            });
        }
        env[v.index() as usize] = e;
    }
    Ok(eval(&node, a, &mut env, &mut Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};

    fn bare(n: usize) -> FiniteStructure {
        FiniteStructure::new(Signature::empty(), n).unwrap()
    }

    #[test]
    fn two_distinct_elements() {
        let f = parse_formula("E x1 . E x2 . !(x1 = x2)", &Signature::empty()).unwrap();
        assert!(evaluate(&bare(2), &f, &Assignment::new()).unwrap());
        assert!(!evaluate(&bare(1), &f, &Assignment::new()).unwrap());
    }

    #[test]
    fn empty_universe_quantifiers() {
        let s = bare(0);
        let e = parse_formula("E x1 . x1 = x1", &Signature::empty()).unwrap();
        let a = parse_formula("A x1 . !(x1 = x1)", &Signature::empty()).unwrap();
        assert!(!evaluate(&s, &e, &Assignment::new()).unwrap());
        assert!(evaluate(&s, &a, &Assignment::new()).unwrap());
    }

    #[test]
    fn errors() {
        let sig = Signature::new([("R", 1)]).unwrap();
        let s = FiniteStructure::new(sig.clone(), 2).unwrap();
        let f = parse_formula("R(x1)", &sig).unwrap();
        assert!(matches!(
            evaluate(&s, &f, &Assignment::new()),
            Err(ModelError::UnboundVariable(_))
        ));
        let other = Signature::new([("Q", 1)]).unwrap();
        let g = parse_formula("Q(x1)", &other).unwrap();
        let asg: Assignment = [(Var::new(1), 0)].into_iter().collect();
        assert!(matches!(evaluate(&s, &g, &asg), Err(ModelError::SignatureMismatch(_))));
        let far: Assignment = [(Var::new(1), 5)].into_iter().collect();
        assert!(matches!(evaluate(&s, &f, &far), Err(ModelError::ElementOutOfRange { .. })));
    }

    #[test]
    fn shadowing_restores_outer_value() {
        let sig = Signature::new([("P", 1)]).unwrap();
        let s = FiniteStructure::from_tuples(sig.clone(), 2, [("P", vec![vec![1]])]).unwrap();
        let f = parse_formula("(E x1 . !P(x1)) & P(x1)", &sig).unwrap();
        let asg: Assignment = [(Var::new(1), 1)].into_iter().collect();
        assert!(evaluate(&s, &f, &asg).unwrap());
    }
}
