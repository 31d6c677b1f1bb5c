use crate::logic::Signature;

use super::ModelError;

/// Upper bound on `size^arity` for a single relation table.
const MAX_TABLE_CELLS: usize = 1 << 22;

/// A finite structure with universe `{0, ..., size - 1}`.
///
/// Each relation is stored as a dense membership table indexed by the tuple
/// read as a base-`size` number, in signature order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    sig: Signature,
    size: usize,
    tables: Vec<Vec<bool>>,
}

fn table_len(size: usize, arity: usize) -> Option<usize> {
    let mut len = 1usize;
    for _ in 0..arity {
        len = len.checked_mul(size)?;
    }
    Some(len)
}

impl FiniteStructure {
    /// A structure with every relation empty.
    pub fn new(sig: Signature, size: usize) -> Result<Self, ModelError> {
        let mut tables = Vec::with_capacity(sig.len());
        for r in sig.relations() {
            match table_len(size, r.arity) {
                Some(len) if len <= MAX_TABLE_CELLS => tables.push(vec![false; len]),
                _ => {
                    return Err(ModelError::TooLarge(format!(
                        "`{}` of arity {} over {} elements",
                        r.name, r.arity, size
                    )))
                }
            }
        }
        Ok(FiniteStructure { sig, size, tables })
    }

    /// Builds a structure from `(relation, tuples)` pairs; symbols not listed
    /// are empty.
    pub fn from_tuples<'a, I, T>(sig: Signature, size: usize, rels: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (&'a str, T)>,
        T: IntoIterator<Item = Vec<usize>>,
    {
        let mut s = Self::new(sig, size)?;
        for (rel, tuples) in rels {
            for t in tuples {
                s.insert(rel, &t)?;
            }
        }
        Ok(s)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn offset(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &e| acc * self.size + e)
    }

    fn checked_index(&self, rel: &str, tuple: &[usize]) -> Result<usize, ModelError> {
        let idx = self
            .sig
            .index_of(rel)
            .ok_or_else(|| ModelError::UnknownRelation(rel.to_string()))?;
        let arity = self.sig.relations()[idx].arity;
        if tuple.len() != arity {
            return Err(ModelError::TupleArity {
                rel: rel.to_string(),
                expected: arity,
                found: tuple.len(),
            });
        }
        if let Some(&element) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(ModelError::ElementOutOfRange {
                element,
                size: self.size,
            });
        }
        Ok(idx)
    }

    /// Adds a tuple; returns whether it was new.
    pub fn insert(&mut self, rel: &str, tuple: &[usize]) -> Result<bool, ModelError> {
        let idx = self.checked_index(rel, tuple)?;
        let off = self.offset(tuple);
        let cell = &mut self.tables[idx][off];
        let fresh = !*cell;
        *cell = true;
        Ok(fresh)
    }

    /// Membership by relation index. Panics on an out-of-range tuple.
    #[inline]
    pub fn holds(&self, rel_idx: usize, tuple: &[usize]) -> bool {
        self.tables[rel_idx][self.offset(tuple)]
    }

    pub fn holds_named(&self, rel: &str, tuple: &[usize]) -> Result<bool, ModelError> {
        let idx = self.checked_index(rel, tuple)?;
        Ok(self.holds(idx, tuple))
    }

    /// Tuples of a relation in lexicographic order.
    pub fn tuples(&self, rel_idx: usize) -> Vec<Vec<usize>> {
        let arity = self.sig.relations()[rel_idx].arity;
        self.tables[rel_idx]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(mut off, _)| {
                let mut t = vec![0; arity];
                for slot in t.iter_mut().rev() {
                    *slot = off % self.size;
                    off /= self.size;
                }
                t
            })
            .collect()
    }

    pub fn tuple_count(&self, rel_idx: usize) -> usize {
        self.tables[rel_idx].iter().filter(|&&b| b).count()
    }

    /// Interpretation of `sig` read off `self`; `sig` must embed into
    /// `self.sig()`.
    pub fn reduct(&self, sig: &Signature) -> Result<Self, ModelError> {
        if !sig.embeds_into(&self.sig) {
            return Err(ModelError::SignatureMismatch(
                "reduct signature is not part of the structure's signature".into(),
            ));
        }
        let tables = sig
            .relations()
            .iter()
            .map(|r| self.tables[self.sig.index_of(&r.name).expect("embedded")].clone())
            .collect();
        Ok(FiniteStructure {
            sig: sig.clone(),
            size: self.size,
            tables,
        })
    }

    /// The same structure over a larger language, new symbols empty.
    pub fn expand(&self, sig: &Signature) -> Result<Self, ModelError> {
        if !self.sig.embeds_into(sig) {
            return Err(ModelError::SignatureMismatch(
                "structure signature does not embed into the target".into(),
            ));
        }
        let mut out = Self::new(sig.clone(), self.size)?;
        for (i, r) in self.sig.relations().iter().enumerate() {
            let j = sig.index_of(&r.name).expect("embedded");
            out.tables[j] = self.tables[i].clone();
        }
        Ok(out)
    }

    /// Induced substructure on `elements`, relabelled so that
    /// `elements[k]` becomes `k`. Elements must be distinct and in range.
    pub fn induced(&self, elements: &[usize]) -> Result<Self, ModelError> {
        if let Some(&element) = elements.iter().find(|&&e| e >= self.size) {
            return Err(ModelError::ElementOutOfRange {
                element,
                size: self.size,
            });
        }
        let mut out = Self::new(self.sig.clone(), elements.len())?;
        for (ri, r) in self.sig.relations().iter().enumerate() {
            for_each_tuple(elements.len(), r.arity, |local| {
                let global: Vec<usize> = local.iter().map(|&i| elements[i]).collect();
                if self.holds(ri, &global) {
                    let off = out.offset(local);
                    out.tables[ri][off] = true;
                }
            });
        }
        Ok(out)
    }
}

/// Calls `f` on every tuple in `{0..n}^arity`, lexicographically.
pub(crate) fn for_each_tuple(n: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 && arity > 0 {
        return;
    }
    let mut t = vec![0; arity];
    loop {
        f(&t);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new([("R", 2), ("P", 1)]).unwrap()
    }

    #[test]
    fn insert_and_query() {
        let mut s = FiniteStructure::new(sig(), 3).unwrap();
        assert!(s.insert("R", &[0, 2]).unwrap());
        assert!(!s.insert("R", &[0, 2]).unwrap());
        assert!(s.holds_named("R", &[0, 2]).unwrap());
        assert!(!s.holds_named("R", &[2, 0]).unwrap());
        assert_eq!(s.tuples(0), vec![vec![0, 2]]);
        assert!(matches!(s.insert("R", &[0, 3]), Err(ModelError::ElementOutOfRange { .. })));
        assert!(matches!(s.insert("R", &[0]), Err(ModelError::TupleArity { .. })));
        assert!(matches!(s.insert("Q", &[0]), Err(ModelError::UnknownRelation(_))));
    }

    #[test]
    fn induced_relabels() {
        let s = FiniteStructure::from_tuples(
            sig(),
            4,
            [("R", vec![vec![1, 3], vec![3, 0]]), ("P", vec![vec![3]])],
        )
        .unwrap();
        let sub = s.induced(&[1, 3]).unwrap();
        assert_eq!(sub.size(), 2);
        assert_eq!(sub.tuples(0), vec![vec![0, 1]]);
        assert_eq!(sub.tuples(1), vec![vec![1]]);
    }

    #[test]
    fn reduct_and_expand() {
        let s = FiniteStructure::from_tuples(sig(), 2, [("P", vec![vec![1]])]).unwrap();
        let p = Signature::new([("P", 1)]).unwrap();
        let r = s.reduct(&p).unwrap();
        assert_eq!(r.tuples(0), vec![vec![1]]);
        let back = r.expand(&sig()).unwrap();
        assert_eq!(back, s);
        assert!(s.reduct(&Signature::new([("P", 2)]).unwrap()).is_err());
    }

    #[test]
    fn tuple_iteration_counts() {
        let mut n = 0;
        for_each_tuple(3, 2, |_| n += 1);
        assert_eq!(n, 9);
        n = 0;
        for_each_tuple(0, 1, |_| n += 1);
        assert_eq!(n, 0);
        n = 0;
        for_each_tuple(0, 0, |_| n += 1);
        assert_eq!(n, 1);
    }
}
