//! P-combinations and E-combinations of finite structures.
//!
//! A [`FamilySpec`] is an ordered, tagged list of finite structures over a
//! merged language. [`p_combine`] places the members side by side and marks
//! each block with a fresh unary predicate `P_<tag>`; [`e_combine`] marks the
//! blocks as classes of a fresh binary equivalence `E` instead. Symbols a
//! member lacks are interpreted empty on its block.

mod relativize;

pub use relativize::{relativize, relativize_clauses};

use thiserror::Error;

use crate::logic::{LogicError, Signature};
use crate::model::io::{parse_document, write_structure, Document, FormatError};
use crate::model::{FiniteStructure, ModelError};

pub const DEFAULT_E_SYMBOL: &str = "E";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombineError {
    #[error("EmptyFamily: a family needs at least one member")]
    EmptyFamily,
    #[error("DuplicateTag: `{0}` is used twice")]
    DuplicateTag(String),
    #[error("InvalidTag: `{0}` is not made of letters, digits and `_`")]
    InvalidTag(String),
    #[error("UnknownTag: `{0}`")]
    UnknownTag(String),
    #[error("SymbolClash: a member already uses the symbol `{0}`")]
    SymbolClash(String),
    #[error("NotAnECombination: the structure was not built as an E-combination")]
    NotAnECombination,
    #[error("NotAPCombination: the structure was not built as a P-combination")]
    NotAPCombination,
    #[error("ArityError: `{0}` must be a binary relation")]
    ArityError(String),
    #[error("SigmaArity: sigma must have exactly one free variable, found {0}")]
    SigmaArity(usize),
    #[error("InvalidCombination: {0}")]
    InvalidCombination(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

fn valid_tag(tag: &str) -> bool {
    !tag.is_empty() && tag.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Unary symbol marking a member's block in a P-combination.
pub fn predicate_name(tag: &str) -> String {
    format!("P_{tag}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    name: String,
    members: Vec<(String, FiniteStructure)>,
    shared_sig: Signature,
}

impl FamilySpec {
    pub fn new(
        name: impl Into<String>,
        members: Vec<(String, FiniteStructure)>,
    ) -> Result<Self, CombineError> {
        if members.is_empty() {
            return Err(CombineError::EmptyFamily);
        }
        let mut shared_sig = Signature::empty();
        for (i, (tag, s)) in members.iter().enumerate() {
            if !valid_tag(tag) {
                return Err(CombineError::InvalidTag(tag.clone()));
            }
            if members[..i].iter().any(|(t, _)| t == tag) {
                return Err(CombineError::DuplicateTag(tag.clone()));
            }
            shared_sig = shared_sig.merge(s.sig())?;
        }
        Ok(FamilySpec {
            name: name.into(),
            members,
            shared_sig,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[(String, FiniteStructure)] {
        &self.members
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|(t, _)| t.as_str())
    }

    pub fn shared_sig(&self) -> &Signature {
        &self.shared_sig
    }

    pub fn member(&self, tag: &str) -> Option<&FiniteStructure> {
        self.members.iter().find(|(t, _)| t == tag).map(|(_, s)| s)
    }

    /// The member over the merged language.
    pub fn expanded(&self, tag: &str) -> Result<FiniteStructure, CombineError> {
        let s = self
            .member(tag)
            .ok_or_else(|| CombineError::UnknownTag(tag.to_string()))?;
        Ok(s.expand(&self.shared_sig)?)
    }

    /// Builds a family from a parsed file; the header fixes member order.
    pub fn from_document(doc: &Document) -> Result<Self, CombineError> {
        let header = doc.family.as_ref().ok_or_else(|| {
            FormatError {
                line: 1,
                message: "missing `family <name> members ...` header".into(),
            }
        })?;
        let mut members = Vec::new();
        for tag in &header.members {
            let s = doc.get(tag).ok_or_else(|| FormatError {
                line: 1,
                message: format!("member `{tag}` has no structure block"),
            })?;
            members.push((tag.clone(), s.clone()));
        }
        if let Some((extra, _)) = doc
            .structures
            .iter()
            .find(|(n, _)| !header.members.contains(n))
        {
            return Err(FormatError {
                line: 1,
                message: format!("structure `{extra}` is not listed as a member"),
            }
            .into());
        }
        Self::new(header.name.clone(), members)
    }

    pub fn parse(text: &str) -> Result<Self, CombineError> {
        Self::from_document(&parse_document(text)?)
    }

    pub fn to_text(&self) -> String {
        let tags: Vec<&str> = self.tags().collect();
        let mut out = format!("family {} members {}\n", self.name, tags.join(" "));
        for (tag, s) in &self.members {
            out.push('\n');
            out.push_str(&write_structure(tag, s));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombinationKind {
    /// Blocks marked by `P_<tag>` for each tag, in order.
    P { tags: Vec<String> },
    /// Blocks are the classes of the binary symbol.
    E { symbol: String },
}

/// A combined structure with provenance for each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedStructure {
    pub base: FiniteStructure,
    /// `(tag, element in member)` for every element; `None` for elements
    /// that belong to no member (possible only for loaded structures).
    pub origin: Vec<Option<(String, usize)>>,
    pub shared_sig: Signature,
    pub kind: CombinationKind,
}

fn combine_with(
    fam: &FamilySpec,
    extra: Signature,
    mark: impl Fn(&mut FiniteStructure, usize, &[usize]) -> Result<(), ModelError>,
    kind: CombinationKind,
) -> Result<CombinedStructure, CombineError> {
    for r in extra.relations() {
        if fam.shared_sig.contains(&r.name) {
            return Err(CombineError::SymbolClash(r.name.clone()));
        }
    }
    let sig = fam.shared_sig.merge(&extra)?;
    let total = fam.members.iter().map(|(_, s)| s.size()).sum();
    let mut base = FiniteStructure::new(sig, total)?;
    let mut origin = Vec::with_capacity(total);
    let mut offset = 0;
    for (k, (tag, s)) in fam.members.iter().enumerate() {
        for (ri, r) in s.sig().relations().iter().enumerate() {
            for t in s.tuples(ri) {
                let shifted: Vec<usize> = t.iter().map(|e| e + offset).collect();
                base.insert(&r.name, &shifted)?;
            }
        }
        let block: Vec<usize> = (offset..offset + s.size()).collect();
        mark(&mut base, k, &block)?;
        origin.extend((0..s.size()).map(|e| Some((tag.clone(), e))));
        offset += s.size();
    }
    Ok(CombinedStructure {
        base,
        origin,
        shared_sig: fam.shared_sig.clone(),
        kind,
    })
}

/// Disjoint P-combination: blocks in member order, `P_<tag>` marks each.
pub fn p_combine(fam: &FamilySpec) -> Result<CombinedStructure, CombineError> {
    let tags: Vec<String> = fam.tags().map(str::to_string).collect();
    let extra = Signature::new(tags.iter().map(|t| (predicate_name(t), 1)))?;
    let names: Vec<String> = tags.iter().map(|t| predicate_name(t)).collect();
    combine_with(
        fam,
        extra,
        |base, k, block| {
            for &e in block {
                base.insert(&names[k], &[e])?;
            }
            Ok(())
        },
        CombinationKind::P { tags },
    )
}

/// E-combination with the default symbol `E`.
pub fn e_combine(fam: &FamilySpec) -> Result<CombinedStructure, CombineError> {
    e_combine_with_symbol(fam, DEFAULT_E_SYMBOL)
}

pub fn e_combine_with_symbol(fam: &FamilySpec, symbol: &str) -> Result<CombinedStructure, CombineError> {
    let extra = Signature::new([(symbol, 2)])?;
    combine_with(
        fam,
        extra,
        |base, _, block| {
            for &x in block {
                for &y in block {
                    base.insert(symbol, &[x, y])?;
                }
            }
            Ok(())
        },
        CombinationKind::E {
            symbol: symbol.to_string(),
        },
    )
}

impl CombinedStructure {
    /// Reads a P-combination from a plain structure: every `P_<tag>` symbol
    /// marks a block. Elements in no block stay without origin.
    pub fn from_p_structure(base: FiniteStructure) -> Result<Self, CombineError> {
        let tags: Vec<String> = base
            .sig()
            .relations()
            .iter()
            .filter(|r| r.arity == 1)
            .filter_map(|r| r.name.strip_prefix("P_").map(str::to_string))
            .collect();
        let names: Vec<String> = tags.iter().map(|t| predicate_name(t)).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let shared_sig = base.sig().without(&name_refs);
        let mut counters = vec![0usize; tags.len()];
        let mut origin = Vec::with_capacity(base.size());
        for e in 0..base.size() {
            let mut o = None;
            for (k, name) in names.iter().enumerate() {
                if base.holds_named(name, &[e])? {
                    o = Some((tags[k].clone(), counters[k]));
                    counters[k] += 1;
                    break;
                }
            }
            origin.push(o);
        }
        Ok(CombinedStructure {
            base,
            origin,
            shared_sig,
            kind: CombinationKind::P { tags },
        })
    }

    /// Reads an E-combination from a plain structure; `symbol` must be an
    /// equivalence relation. Classes get tags `c0, c1, ...` by least element.
    pub fn from_e_structure(base: FiniteStructure, symbol: &str) -> Result<Self, CombineError> {
        match base.sig().arity(symbol) {
            Some(2) => {}
            Some(_) => return Err(CombineError::ArityError(symbol.to_string())),
            None => {
                return Err(CombineError::InvalidCombination(format!(
                    "the structure has no symbol `{symbol}`"
                )))
            }
        }
        let n = base.size();
        let e = |x: usize, y: usize| base.holds_named(symbol, &[x, y]).expect("checked arity");
        for x in 0..n {
            if !e(x, x) {
                return Err(CombineError::InvalidCombination(format!("`{symbol}` is not reflexive")));
            }
            for y in 0..n {
                if e(x, y) != e(y, x) {
                    return Err(CombineError::InvalidCombination(format!("`{symbol}` is not symmetric")));
                }
                for z in 0..n {
                    if e(x, y) && e(y, z) && !e(x, z) {
                        return Err(CombineError::InvalidCombination(format!(
                            "`{symbol}` is not transitive"
                        )));
                    }
                }
            }
        }
        let mut origin: Vec<Option<(String, usize)>> = vec![None; n];
        let mut classes = 0;
        for x in 0..n {
            if origin[x].is_some() {
                continue;
            }
            let tag = format!("c{classes}");
            classes += 1;
            for (k, y) in (x..n).filter(|&y| e(x, y)).enumerate() {
                origin[y] = Some((tag.clone(), k));
            }
        }
        let shared_sig = base.sig().without(&[symbol]);
        Ok(CombinedStructure {
            base,
            origin,
            shared_sig,
            kind: CombinationKind::E {
                symbol: symbol.to_string(),
            },
        })
    }

    /// Elements of the E-class of `element`, ascending.
    pub fn class_of(&self, element: usize) -> Result<Vec<usize>, CombineError> {
        let CombinationKind::E { symbol } = &self.kind else {
            return Err(CombineError::NotAnECombination);
        };
        if element >= self.base.size() {
            return Err(ModelError::ElementOutOfRange {
                element,
                size: self.base.size(),
            }
            .into());
        }
        let idx = self.base.sig().index_of(symbol).expect("E-combinations carry E");
        Ok((0..self.base.size())
            .filter(|&y| self.base.holds(idx, &[element, y]))
            .collect())
    }
}

/// Substructure on the E-class of `element` over the shared language,
/// relabelled `0..m` in ascending (origin) order.
pub fn restrict_to_class(c: &CombinedStructure, element: usize) -> Result<FiniteStructure, CombineError> {
    let class = c.class_of(element)?;
    Ok(c.base.induced(&class)?.reduct(&c.shared_sig)?)
}

/// Substructure on `P_<tag>` over the shared language.
pub fn restrict_to_predicate(c: &CombinedStructure, tag: &str) -> Result<FiniteStructure, CombineError> {
    let CombinationKind::P { tags } = &c.kind else {
        return Err(CombineError::NotAPCombination);
    };
    if !tags.iter().any(|t| t == tag) {
        return Err(CombineError::UnknownTag(tag.to_string()));
    }
    let name = predicate_name(tag);
    let idx = c.base.sig().index_of(&name).expect("P-combinations carry P_tag");
    let block: Vec<usize> = (0..c.base.size()).filter(|&e| c.base.holds(idx, &[e])).collect();
    Ok(c.base.induced(&block)?.reduct(&c.shared_sig)?)
}

/// Elements realizing `{!P_tag(x) : tag}`: those in no block.
pub fn p_infinity_residual(c: &CombinedStructure) -> Result<Vec<usize>, CombineError> {
    let CombinationKind::P { tags } = &c.kind else {
        return Err(CombineError::NotAPCombination);
    };
    let idxs: Vec<usize> = tags
        .iter()
        .map(|t| c.base.sig().index_of(&predicate_name(t)).expect("P_tag present"))
        .collect();
    Ok((0..c.base.size())
        .filter(|&e| idxs.iter().all(|&i| !c.base.holds(i, &[e])))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{are_isomorphic, orbit_count};

    fn bare(n: usize) -> FiniteStructure {
        FiniteStructure::new(Signature::empty(), n).unwrap()
    }

    fn unary(name: &str, size: usize, members: &[usize]) -> FiniteStructure {
        let sig = Signature::new([(name, 1)]).unwrap();
        FiniteStructure::from_tuples(sig, size, [(name, members.iter().map(|&e| vec![e]).collect::<Vec<_>>())])
            .unwrap()
    }

    fn fam(members: Vec<(&str, FiniteStructure)>) -> FamilySpec {
        FamilySpec::new("f", members.into_iter().map(|(t, s)| (t.to_string(), s)).collect()).unwrap()
    }

    #[test]
    fn p_combine_two_points() {
        let c = p_combine(&fam(vec![("a", bare(1)), ("b", bare(1))])).unwrap();
        assert_eq!(c.base.size(), 2);
        assert_eq!(c.base.tuples(c.base.sig().index_of("P_a").unwrap()), vec![vec![0]]);
        assert_eq!(c.base.tuples(c.base.sig().index_of("P_b").unwrap()), vec![vec![1]]);
        assert!(p_infinity_residual(&c).unwrap().is_empty());
    }

    #[test]
    fn merged_language_is_empty_where_missing() {
        let f = fam(vec![("a", unary("Q0", 2, &[0])), ("b", unary("Q1", 2, &[1]))]);
        let c = p_combine(&f).unwrap();
        let q0 = c.base.sig().index_of("Q0").unwrap();
        let q1 = c.base.sig().index_of("Q1").unwrap();
        assert_eq!(c.base.tuples(q0), vec![vec![0]]);
        assert_eq!(c.base.tuples(q1), vec![vec![3]]);
        let back = restrict_to_predicate(&c, "a").unwrap();
        assert!(back.sig().contains("Q1"));
        assert_eq!(back.tuple_count(back.sig().index_of("Q1").unwrap()), 0);
        let original = f.expanded("a").unwrap();
        assert!(are_isomorphic(&back, &original).unwrap().is_some());
    }

    #[test]
    fn p_combine_orbits_of_bare_sets() {
        let c = p_combine(&fam(vec![("a", bare(2)), ("b", bare(3)), ("c", bare(4))])).unwrap();
        assert_eq!(orbit_count(&c.base, 1).unwrap(), 3);
    }

    #[test]
    fn e_combine_classes() {
        let single = e_combine(&fam(vec![("a", bare(3))])).unwrap();
        assert_eq!(single.base.tuple_count(0), 9);
        let c = e_combine(&fam(vec![("a", bare(1)), ("b", bare(2))])).unwrap();
        assert_eq!(c.base.tuple_count(0), 5);
        assert_eq!(c.class_of(0).unwrap(), vec![0]);
        assert_eq!(c.class_of(2).unwrap(), vec![1, 2]);
        let second = restrict_to_class(&c, 1).unwrap();
        assert_eq!(second.size(), 2);
        assert!(second.sig().is_empty());
    }

    #[test]
    fn errors() {
        let dup = FamilySpec::new("f", vec![("a".into(), bare(1)), ("a".into(), bare(2))]);
        assert!(matches!(dup, Err(CombineError::DuplicateTag(_))));
        assert!(matches!(FamilySpec::new("f", vec![]), Err(CombineError::EmptyFamily)));
        let clash = fam(vec![("a", unary("P_a", 1, &[0]))]);
        assert!(matches!(p_combine(&clash), Err(CombineError::SymbolClash(s)) if s == "P_a"));
        let e_clash = fam(vec![("a", unary("E", 1, &[0]))]);
        assert!(matches!(e_combine(&e_clash), Err(CombineError::SymbolClash(s)) if s == "E"));
        let p = p_combine(&fam(vec![("a", bare(1))])).unwrap();
        assert!(matches!(restrict_to_class(&p, 0), Err(CombineError::NotAnECombination)));
        assert!(matches!(restrict_to_predicate(&p, "zz"), Err(CombineError::UnknownTag(_))));
        let e = e_combine(&fam(vec![("a", bare(1))])).unwrap();
        assert!(matches!(restrict_to_predicate(&e, "a"), Err(CombineError::NotAPCombination)));
    }

    #[test]
    fn residual_of_loaded_structure() {
        let text = "structure s\nsig rel P_a/1 rel P_b/1\nuniverse 4\nrel P_a: (0)\nrel P_b: (1) (2)\nend\n";
        let doc = parse_document(text).unwrap();
        let c = CombinedStructure::from_p_structure(doc.get("s").unwrap().clone()).unwrap();
        assert_eq!(p_infinity_residual(&c).unwrap(), vec![3]);
        assert_eq!(c.origin[3], None);
        assert_eq!(c.origin[2], Some(("b".to_string(), 1)));
    }

    #[test]
    fn loaded_e_structure_must_be_equivalence() {
        let sig = Signature::new([("E", 2)]).unwrap();
        let bad = FiniteStructure::from_tuples(sig, 2, [("E", vec![vec![0, 0], vec![1, 1], vec![0, 1]])]).unwrap();
        assert!(matches!(
            CombinedStructure::from_e_structure(bad, "E"),
            Err(CombineError::InvalidCombination(_))
        ));
    }

    #[test]
    fn family_text_round_trip() {
        let f = fam(vec![("a", unary("Q", 2, &[1])), ("b", bare(1))]);
        let again = FamilySpec::parse(&f.to_text()).unwrap();
        assert_eq!(again, f);
    }
}
