//! Isomorphism, automorphisms and orbit counting by backtracking.

use std::collections::HashMap;

use super::structure::for_each_tuple;
use super::{FiniteStructure, ModelError};

/// Relation index in `a` to relation index in `b`, for two structures over
/// the same symbols.
#[derive(Debug, Clone)]
pub(crate) struct RelMap {
    to_b: Vec<usize>,
    arities: Vec<usize>,
}

impl RelMap {
    pub(crate) fn new(a: &FiniteStructure, b: &FiniteStructure) -> Result<Self, ModelError> {
        if !a.sig().same_symbols(b.sig()) {
            return Err(ModelError::SignatureMismatch(
                "structures are over different signatures".into(),
            ));
        }
        let to_b = a
            .sig()
            .relations()
            .iter()
            .map(|r| b.sig().index_of(&r.name).expect("same symbols"))
            .collect();
        let arities = a.sig().relations().iter().map(|r| r.arity).collect();
        Ok(RelMap { to_b, arities })
    }
}

/// Whether adding `new` to the partial map `pairs` (assumed to be a partial
/// isomorphism already) keeps it one: equality and every relation tuple
/// that involves the new pair must agree on both sides.
pub(crate) fn extends_partial_iso(
    a: &FiniteStructure,
    b: &FiniteStructure,
    rels: &RelMap,
    pairs: &[(usize, usize)],
    new: (usize, usize),
) -> bool {
    if pairs.iter().any(|&(x, y)| (x == new.0) != (y == new.1)) {
        return false;
    }
    let m = pairs.len();
    let at = |i: usize| if i == m { new } else { pairs[i] };
    let mut ta = Vec::new();
    let mut tb = Vec::new();
    for (ri, &arity) in rels.arities.iter().enumerate() {
        let rb = rels.to_b[ri];
        let mut ok = true;
        for_each_tuple(m + 1, arity, |idx| {
            if !ok || !idx.contains(&m) {
                return;
            }
            ta.clear();
            tb.clear();
            for &i in idx {
                let (x, y) = at(i);
                ta.push(x);
                tb.push(y);
            }
            if a.holds(ri, &ta) != b.holds(rb, &tb) {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Per-element invariant: for every relation and position, how many tuples
/// carry the element there, plus whether the constant tuple holds.
fn colors(s: &FiniteStructure, order: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); s.size()];
    for &ri in order {
        let arity = s.sig().relations()[ri].arity;
        let mut counts = vec![vec![0usize; arity + 1]; s.size()];
        for t in s.tuples(ri) {
            for (p, &e) in t.iter().enumerate() {
                counts[e][p] += 1;
            }
            if t.iter().all(|&e| e == t[0]) {
                counts[t[0]][arity] += 1;
            }
        }
        for (e, c) in counts.into_iter().enumerate() {
            out[e].extend(c);
        }
    }
    out
}

struct Search<'s> {
    a: &'s FiniteStructure,
    b: &'s FiniteStructure,
    rels: RelMap,
    colors_a: Vec<Vec<usize>>,
    colors_b: Vec<Vec<usize>>,
}

impl<'s> Search<'s> {
    fn new(a: &'s FiniteStructure, b: &'s FiniteStructure) -> Result<Self, ModelError> {
        let rels = RelMap::new(a, b)?;
        let order_a: Vec<usize> = (0..a.sig().len()).collect();
        let order_b: Vec<usize> = rels.to_b.clone();
        Ok(Search {
            colors_a: colors(a, &order_a),
            colors_b: colors(b, &order_b),
            a,
            b,
            rels,
        })
    }

    /// Bijections extending `pins`; stops after the first unless `all`.
    fn run(&self, pins: &[(usize, usize)], all: bool) -> Vec<Vec<usize>> {
        let n = self.a.size();
        if n != self.b.size() {
            return Vec::new();
        }
        let mut color_sizes: HashMap<&Vec<usize>, usize> = HashMap::new();
        for c in &self.colors_a {
            *color_sizes.entry(c).or_default() += 1;
        }
        {
            let mut color_sizes_b: HashMap<&Vec<usize>, usize> = HashMap::new();
            for c in &self.colors_b {
                *color_sizes_b.entry(c).or_default() += 1;
            }
            if color_sizes != color_sizes_b {
                return Vec::new();
            }
        }
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n);
        let mut used_b = vec![false; n];
        for &(x, y) in pins {
            if x >= n || y >= n || self.colors_a[x] != self.colors_b[y] {
                return Vec::new();
            }
            if pairs.iter().any(|&(px, _)| px == x) {
                if !pairs.contains(&(x, y)) {
                    return Vec::new();
                }
                continue;
            }
            if !extends_partial_iso(self.a, self.b, &self.rels, &pairs, (x, y)) {
                return Vec::new();
            }
            used_b[y] = true;
            pairs.push((x, y));
        }
        let mut order: Vec<usize> = (0..n).filter(|x| !pairs.iter().any(|p| p.0 == *x)).collect();
        order.sort_by_key(|&x| (color_sizes[&self.colors_a[x]], x));
        let mut found = Vec::new();
        self.extend(&order, 0, &mut pairs, &mut used_b, all, &mut found);
        found
    }

    fn extend(
        &self,
        order: &[usize],
        depth: usize,
        pairs: &mut Vec<(usize, usize)>,
        used_b: &mut [bool],
        all: bool,
        found: &mut Vec<Vec<usize>>,
    ) -> bool {
        if depth == order.len() {
            let mut map = vec![0; self.a.size()];
            for &(x, y) in pairs.iter() {
                map[x] = y;
            }
            found.push(map);
            return !all;
        }
        let x = order[depth];
        for y in 0..self.b.size() {
            if used_b[y] || self.colors_a[x] != self.colors_b[y] {
                continue;
            }
            if !extends_partial_iso(self.a, self.b, &self.rels, pairs, (x, y)) {
                continue;
            }
            pairs.push((x, y));
            used_b[y] = true;
            let stop = self.extend(order, depth + 1, pairs, used_b, all, found);
            used_b[y] = false;
            pairs.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// A bijection `map` with `map[a_elem] = b_elem` preserving every relation in
/// both directions, or `None`.
pub fn are_isomorphic(
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<Option<Vec<usize>>, ModelError> {
    Ok(Search::new(a, b)?.run(&[], false).pop())
}

/// All automorphisms, identity first when the structure is nonempty.
pub fn automorphisms(a: &FiniteStructure) -> Vec<Vec<usize>> {
    let mut all = Search::new(a, a).expect("same structure").run(&[], true);
    all.sort();
    all
}

/// Number of orbits of `Aut(a)` on `n`-tuples.
///
/// Tuples are bucketed by a cheap invariant, then compared with each bucket
/// representative by searching for an automorphism pinned on the tuple.
pub fn orbit_count(a: &FiniteStructure, n: usize) -> Result<usize, ModelError> {
    if a.size() == 0 {
        return Err(ModelError::EmptyUniverse);
    }
    let search = Search::new(a, a)?;
    let mut reps: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    let mut count = 0;
    for_each_tuple(a.size(), n, |t| {
        let key = tuple_key(a, &search.colors_a, t);
        let bucket = reps.entry(key).or_default();
        let known = bucket.iter().any(|rep| {
            let pins: Vec<(usize, usize)> = rep.iter().copied().zip(t.iter().copied()).collect();
            !search.run(&pins, false).is_empty()
        });
        if !known {
            bucket.push(t.to_vec());
            count += 1;
        }
    });
    Ok(count)
}

/// Equality pattern, element colours and the atomic type of the tuple.
fn tuple_key(a: &FiniteStructure, colors: &[Vec<usize>], t: &[usize]) -> Vec<usize> {
    let mut key = Vec::new();
    for (i, &x) in t.iter().enumerate() {
        key.push(t.iter().position(|&y| y == x).unwrap_or(i));
        key.extend(colors[x].iter().copied());
        key.push(usize::MAX);
    }
    for (ri, r) in a.sig().relations().iter().enumerate() {
        let mut buf = Vec::with_capacity(r.arity);
        for_each_tuple(t.len(), r.arity, |idx| {
            buf.clear();
            buf.extend(idx.iter().map(|&i| t[i]));
            key.push(a.holds(ri, &buf) as usize);
        });
    }
    key
}
