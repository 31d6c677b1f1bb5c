//! Separating sentences for finite structures.
//!
//! A sentence is (i,j)-separating when it holds in the i-th structure and
//! fails in the j-th. [`separating_sentence`] finds one of least quantifier
//! rank by reading off Spoiler's winning strategy in the EF game.

use thiserror::Error;

use crate::combine::{CombineError, FamilySpec};
use crate::logic::{Formula, Var};
use crate::model::{are_isomorphic, evaluate, Assignment, EfGame, FiniteStructure, ModelError, Move};

/// Extraction stops and falls back to the Scott sentence past this size.
pub const HINTIKKA_NODE_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparateError {
    #[error("NotSeparable: isomorphic finite structures satisfy the same sentences")]
    NotSeparable,
    #[error("EmptyUniverse: the structure has no elements")]
    EmptyUniverse,
    #[error("WitnessMismatch: true witnesses `{0}` and `{1}` differ")]
    WitnessMismatch(String, String),
    #[error("UnknownTag: `{0}`")]
    UnknownTag(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Combine(#[from] CombineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Read off the EF game; the rank is minimal.
    Hintikka,
    /// The Scott sentence of the true witness.
    Scott,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub sentence: Formula,
    pub witness_true: String,
    pub witness_false: String,
    pub rank: usize,
    pub method: Method,
}

fn var(i: usize) -> Var {
    Var::new(i as u32 + 1)
}

fn distinct(n: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Formula::not(Formula::eq(var(i), var(j))));
        }
    }
    out
}

/// Literals over `x1..xn` true of the tuple `0..n` in `a`, in signature and
/// lexicographic order.
fn diagram(a: &FiniteStructure) -> Vec<Formula> {
    let n = a.size();
    let mut out = Vec::new();
    for (ri, r) in a.sig().relations().iter().enumerate() {
        let mut idx = vec![0usize; r.arity];
        loop {
            let atom = Formula::atom(r.name.clone(), idx.iter().map(|&i| var(i)));
            out.push(if a.holds(ri, &idx) { atom } else { Formula::not(atom) });
            let Some(pos) = (0..r.arity).rev().find(|&p| idx[p] + 1 < n) else {
                break;
            };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|v| *v = 0);
        }
    }
    out
}

/// Sentence true in exactly the structures isomorphic to `a`.
pub fn scott_sentence(a: &FiniteStructure) -> Result<Formula, SeparateError> {
    let n = a.size();
    if n == 0 {
        return Err(SeparateError::EmptyUniverse);
    }
    let y = var(n);
    let closure = Formula::forall(
        y,
        Formula::disjunction((0..n).map(|i| Formula::eq(y, var(i)))).expect("n >= 1"),
    );
    let body = Formula::conjunction(
        distinct(n)
            .into_iter()
            .chain(diagram(a))
            .chain(std::iter::once(closure)),
    )
    .expect("nonempty");
    Ok((0..n).rev().fold(body, |f, i| Formula::exists(var(i), f)))
}

struct Extractor<'g, 's> {
    game: &'g mut EfGame<'s>,
    nodes: usize,
}

impl Extractor<'_, '_> {
    fn spend(&mut self, f: &Formula) -> Option<()> {
        self.nodes += f.node_count();
        (self.nodes <= HINTIKKA_NODE_BUDGET).then_some(())
    }

    /// A literal true of `pairs + new` on the `a` side and false on the `b`
    /// side; `pairs + new` must fail to be a partial isomorphism.
    fn literal(&self, pairs: &[(usize, usize)], new: (usize, usize)) -> Formula {
        let m = pairs.len();
        let x_new = var(m);
        for (i, &(x, y)) in pairs.iter().enumerate() {
            let eq_a = x == new.0;
            if eq_a != (y == new.1) {
                let eq = Formula::eq(var(i), x_new);
                return if eq_a { eq } else { Formula::not(eq) };
            }
        }
        let (a, b) = (self.game.a(), self.game.b());
        let at = |i: usize| if i == m { new } else { pairs[i] };
        for (ri, r) in a.sig().relations().iter().enumerate() {
            let rb = b.sig().index_of(&r.name).expect("same symbols");
            let mut idx = vec![0usize; r.arity];
            loop {
                if idx.contains(&m) {
                    let ta: Vec<usize> = idx.iter().map(|&i| at(i).0).collect();
                    let tb: Vec<usize> = idx.iter().map(|&i| at(i).1).collect();
                    let in_a = a.holds(ri, &ta);
                    if in_a != b.holds(rb, &tb) {
                        let atom = Formula::atom(r.name.clone(), idx.iter().map(|&i| var(i)));
                        return if in_a { atom } else { Formula::not(atom) };
                    }
                }
                let Some(pos) = (0..r.arity).rev().find(|&p| idx[p] < m) else {
                    break;
                };
                idx[pos] += 1;
                idx[pos + 1..].iter_mut().for_each(|v| *v = 0);
            }
        }
        unreachable!("pair extends the partial isomorphism")
    }

    /// Formula of rank at most `rounds` over `x1..x|pairs|`, true at the `a`
    /// side of `pairs` and false at the `b` side. Spoiler must win from here.
    fn distinguish(&mut self, pairs: &[(usize, usize)], rounds: usize) -> Option<Formula> {
        let x_new = var(pairs.len());
        for mv in self.game.spoiler_moves(pairs) {
            let wins = self.game.responses(pairs, mv).into_iter().all(|p| {
                let mut next = pairs.to_vec();
                next.push(p);
                !self.game.duplicator_wins(&next, rounds - 1)
            });
            if !wins {
                continue;
            }
            let candidates: Vec<(usize, usize)> = match mv {
                Move::InA(x) => (0..self.game.b().size()).map(|y| (x, y)).collect(),
                Move::InB(y) => (0..self.game.a().size()).map(|x| (x, y)).collect(),
            };
            let mut parts: Vec<Formula> = Vec::new();
            for p in candidates {
                let part = if self.game.extends(pairs, p) {
                    let mut next = pairs.to_vec();
                    next.push(p);
                    self.distinguish(&next, rounds - 1)?
                } else {
                    self.literal(pairs, p)
                };
                if !parts.contains(&part) {
                    parts.push(part);
                }
            }
            let f = match mv {
                Move::InA(_) => Formula::exists(
                    x_new,
                    Formula::conjunction(parts).unwrap_or_else(|| Formula::eq(x_new, x_new)),
                ),
                Move::InB(_) => Formula::forall(
                    x_new,
                    Formula::disjunction(parts)
                        .unwrap_or_else(|| Formula::not(Formula::eq(x_new, x_new))),
                ),
            };
            self.spend(&f)?;
            return Some(f);
        }
        unreachable!("Spoiler wins from this position")
    }
}

/// Least `r` such that Spoiler wins the `r`-round game, if any.
pub fn minimal_rank(a: &FiniteStructure, b: &FiniteStructure) -> Result<Option<usize>, SeparateError> {
    let mut game = EfGame::new(a, b)?;
    let bound = a.size().max(b.size()) + 1;
    Ok((1..=bound).find(|&r| !game.duplicator_wins(&[], r)))
}

/// Separating sentence for `a` against `b` with tags `A` and `B`.
pub fn separating_sentence(
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<SeparationCertificate, SeparateError> {
    separating_sentence_tagged(a, "A", b, "B")
}

pub fn separating_sentence_tagged(
    a: &FiniteStructure,
    tag_a: &str,
    b: &FiniteStructure,
    tag_b: &str,
) -> Result<SeparationCertificate, SeparateError> {
    let mut game = EfGame::new(a, b)?;
    if are_isomorphic(a, b)?.is_some() {
        return Err(SeparateError::NotSeparable);
    }
    let bound = a.size().max(b.size()) + 1;
    let rank = (1..=bound)
        .find(|&r| !game.duplicator_wins(&[], r))
        .expect("non-isomorphic finite structures differ within this many rounds");
    let mut ex = Extractor {
        game: &mut game,
        nodes: 0,
    };
    let (sentence, method) = match ex.distinguish(&[], rank) {
        Some(f) => (f, Method::Hintikka),
        None => (scott_sentence(a)?, Method::Scott),
    };
    Ok(SeparationCertificate {
        rank: sentence.quantifier_rank(),
        sentence,
        witness_true: tag_a.to_string(),
        witness_false: tag_b.to_string(),
        method,
    })
}

/// The certificate holds for `a` (its true witness) and `b` (its false one).
pub fn check_separating(
    c: &SeparationCertificate,
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<bool, SeparateError> {
    let empty = Assignment::new();
    Ok(c.sentence.is_sentence()
        && c.rank == c.sentence.quantifier_rank()
        && evaluate(a, &c.sentence, &empty)?
        && !evaluate(b, &c.sentence, &empty)?)
}

/// `¬φ`, with the witnesses swapped.
pub fn flip(c: &SeparationCertificate) -> SeparationCertificate {
    SeparationCertificate {
        sentence: Formula::not(c.sentence.clone()),
        witness_true: c.witness_false.clone(),
        witness_false: c.witness_true.clone(),
        rank: c.rank,
        method: c.method,
    }
}

/// `φ ∧ ψ` for two certificates sharing their true witness.
pub fn conjoin(c1: &SeparationCertificate, c2: &SeparationCertificate) -> Result<Formula, SeparateError> {
    if c1.witness_true != c2.witness_true {
        return Err(SeparateError::WitnessMismatch(
            c1.witness_true.clone(),
            c2.witness_true.clone(),
        ));
    }
    Ok(Formula::and(c1.sentence.clone(), c2.sentence.clone()))
}

/// One certificate against each member not isomorphic to `target`, in
/// member order. Members are compared over the merged language.
pub fn e_separating_set(target: &str, fam: &FamilySpec) -> Result<Vec<SeparationCertificate>, SeparateError> {
    if fam.member(target).is_none() {
        return Err(SeparateError::UnknownTag(target.to_string()));
    }
    let t = fam.expanded(target)?;
    let mut out = Vec::new();
    for tag in fam.tags() {
        if tag == target {
            continue;
        }
        let other = fam.expanded(tag)?;
        if are_isomorphic(&t, &other)?.is_some() {
            continue;
        }
        out.push(separating_sentence_tagged(&t, target, &other, tag)?);
    }
    Ok(out)
}
