//! Exact Ehrenfeucht–Fraïssé games on pairs of finite structures.

use std::collections::HashMap;

use super::iso::{extends_partial_iso, RelMap};
use super::{FiniteStructure, ModelError};

/// Game state shared across queries on one pair of structures.
///
/// Positions are partial isomorphisms given as `(a_elem, b_elem)` pairs. The
/// memo is keyed on the sorted pair list and the number of rounds left, so a
/// single game object answers every round bound.
pub struct EfGame<'s> {
    a: &'s FiniteStructure,
    b: &'s FiniteStructure,
    rels: RelMap,
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
}

impl<'s> EfGame<'s> {
    pub fn new(a: &'s FiniteStructure, b: &'s FiniteStructure) -> Result<Self, ModelError> {
        Ok(EfGame {
            rels: RelMap::new(a, b)?,
            a,
            b,
            memo: HashMap::new(),
        })
    }

    pub fn a(&self) -> &'s FiniteStructure {
        self.a
    }

    pub fn b(&self) -> &'s FiniteStructure {
        self.b
    }

    /// Whether `pairs` plus `new` is still a partial isomorphism, given that
    /// `pairs` is one.
    pub fn extends(&self, pairs: &[(usize, usize)], new: (usize, usize)) -> bool {
        extends_partial_iso(self.a, self.b, &self.rels, pairs, new)
    }

    /// Duplicator wins `rounds` more rounds from the partial isomorphism
    /// `pairs`.
    ///
    /// Spoiler never replays a chosen element: the answer is forced and the
    /// position repeats with one round fewer, which cannot help him.
    pub fn duplicator_wins(&mut self, pairs: &[(usize, usize)], rounds: usize) -> bool {
        if rounds == 0 {
            return true;
        }
        let mut key = pairs.to_vec();
        key.sort_unstable();
        if let Some(&v) = self.memo.get(&(key.clone(), rounds)) {
            return v;
        }
        let result = self.spoiler_moves(pairs).into_iter().all(|mv| {
            self.responses(pairs, mv)
                .into_iter()
                .any(|pair| {
                    let mut next = pairs.to_vec();
                    next.push(pair);
                    self.duplicator_wins(&next, rounds - 1)
                })
        });
        self.memo.insert((key, rounds), result);
        result
    }

    /// Spoiler's candidate moves in tie-break order: fresh elements of `a`
    /// ascending, then fresh elements of `b` ascending.
    pub fn spoiler_moves(&self, pairs: &[(usize, usize)]) -> Vec<Move> {
        let fresh_a = (0..self.a.size()).filter(|x| !pairs.iter().any(|p| p.0 == *x));
        let fresh_b = (0..self.b.size()).filter(|y| !pairs.iter().any(|p| p.1 == *y));
        fresh_a.map(Move::InA).chain(fresh_b.map(Move::InB)).collect()
    }

    /// Duplicator's answers to `mv` that keep a partial isomorphism, as the
    /// resulting new pair.
    pub fn responses(&self, pairs: &[(usize, usize)], mv: Move) -> Vec<(usize, usize)> {
        match mv {
            Move::InA(x) => (0..self.b.size())
                .map(|y| (x, y))
                .filter(|&p| self.extends(pairs, p))
                .collect(),
            Move::InB(y) => (0..self.a.size())
                .map(|x| (x, y))
                .filter(|&p| self.extends(pairs, p))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    InA(usize),
    InB(usize),
}

/// Duplicator wins the `r`-round game on `(a, b)`.
pub fn ef_equivalent(a: &FiniteStructure, b: &FiniteStructure, r: usize) -> Result<bool, ModelError> {
    Ok(EfGame::new(a, b)?.duplicator_wins(&[], r))
}
