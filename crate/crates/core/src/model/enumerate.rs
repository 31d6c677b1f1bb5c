//! Exhaustive sentence enumeration for small bounds.
//!
//! Quantifiers bind variables in nesting order (the quantifier at depth `d`
//! binds `x{d+1}`), so every sentence is alpha-equivalent to exactly one
//! enumerated shape. Semantic duplicates are not removed.

use std::collections::HashMap;
use std::rc::Rc;

use crate::logic::{BinOp, Formula, Quantifier, Signature, Var};

use super::structure::for_each_tuple;

type Key = (usize, usize, usize);

struct Generator {
    sig: Signature,
    memo: HashMap<Key, Rc<Vec<Formula>>>,
}

impl Generator {
    /// Formulas over free variables among `x1..x{depth}`, quantifier rank at
    /// most `rank`, exactly `nodes` AST nodes.
    fn exact(&mut self, depth: usize, rank: usize, nodes: usize) -> Rc<Vec<Formula>> {
        if let Some(v) = self.memo.get(&(depth, rank, nodes)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if nodes == 1 {
            for r in self.sig.relations() {
                for_each_tuple(depth, r.arity, |t| {
                    out.push(Formula::atom(
                        r.name.clone(),
                        t.iter().map(|&i| Var::new(i as u32 + 1)),
                    ));
                });
            }
            for i in 1..=depth as u32 {
                for j in 1..=depth as u32 {
                    out.push(Formula::eq(Var::new(i), Var::new(j)));
                }
            }
        } else if nodes >= 2 {
            for f in self.exact(depth, rank, nodes - 1).iter() {
                out.push(Formula::not(f.clone()));
            }
            for left_nodes in 1..nodes - 1 {
                let left = self.exact(depth, rank, left_nodes);
                let right = self.exact(depth, rank, nodes - 1 - left_nodes);
                for op in [BinOp::And, BinOp::Or, BinOp::Implies] {
                    for l in left.iter() {
                        for r in right.iter() {
                            out.push(Formula::Bin(op, Box::new(l.clone()), Box::new(r.clone())));
                        }
                    }
                }
            }
            if rank >= 1 {
                let v = Var::new(depth as u32 + 1);
                let bodies = self.exact(depth + 1, rank - 1, nodes - 1);
                for q in [Quantifier::Exists, Quantifier::Forall] {
                    for body in bodies.iter() {
                        out.push(Formula::Quant(q, v, Box::new(body.clone())));
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert((depth, rank, nodes), out.clone());
        out
    }
}

/// Stream of every sentence with quantifier rank `<= rank_bound` and at most
/// `size_bound` nodes, in increasing node count.
pub struct SentenceEnumerator {
    gen: Generator,
    rank_bound: usize,
    size_bound: usize,
    nodes: usize,
    bucket: Rc<Vec<Formula>>,
    next: usize,
}

impl Iterator for SentenceEnumerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if let Some(f) = self.bucket.get(self.next) {
                self.next += 1;
                return Some(f.clone());
            }
            if self.nodes >= self.size_bound {
                return None;
            }
            self.nodes += 1;
            self.bucket = self.gen.exact(0, self.rank_bound, self.nodes);
            self.next = 0;
        }
    }
}

pub fn enumerate_sentences(sig: &Signature, rank_bound: usize, size_bound: usize) -> SentenceEnumerator {
    SentenceEnumerator {
        gen: Generator {
            sig: sig.clone(),
            memo: HashMap::new(),
        },
        rank_bound,
        size_bound,
        nodes: 0,
        bucket: Rc::new(Vec::new()),
        next: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn rank_zero_is_empty() {
        let sig = Signature::new([("P", 1), ("R", 2)]).unwrap();
        assert_eq!(enumerate_sentences(&sig, 0, 6).count(), 0);
    }

    #[test]
    fn contains_existence_sentence() {
        let target = parse_formula("E x1 . x1 = x1", &Signature::empty()).unwrap();
        let all: Vec<_> = enumerate_sentences(&Signature::empty(), 1, 4).collect();
        assert!(all.contains(&target));
        assert!(all.iter().all(|f| f.is_sentence() && f.quantifier_rank() <= 1 && f.node_count() <= 4));
    }
}
