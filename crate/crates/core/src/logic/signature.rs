use std::fmt;

use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelSymbol {
    pub name: String,
    pub arity: usize,
}

/// A relational language: named relation symbols with positive arities.
///
/// Symbol order is significant only for printing and for the layout of
/// structure interpretations; two signatures with the same symbols in a
/// different order are [`Signature::same_symbols`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    relations: Vec<RelSymbol>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `x` followed by a positive integer without leading zeros.
pub(crate) fn parse_var_name(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<I, S>(relations: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut sig = Self::empty();
        for (name, arity) in relations {
            sig.push(name, arity)?;
        }
        Ok(sig)
    }

    /// Appends a symbol, rejecting duplicates, zero arity and names that
    /// would collide with the variable namespace.
    pub fn push(&mut self, name: impl Into<String>, arity: usize) -> Result<(), LogicError> {
        let name = name.into();
        if !is_identifier(&name) || parse_var_name(&name).is_some() {
            return Err(LogicError::InvalidSignature(format!(
                "`{name}` is not a valid relation name"
            )));
        }
        if arity == 0 {
            return Err(LogicError::InvalidSignature(format!(
                "`{name}` must have arity at least 1"
            )));
        }
        if self.arity(&name).is_some() {
            return Err(LogicError::InvalidSignature(format!(
                "`{name}` is declared twice"
            )));
        }
        self.relations.push(RelSymbol { name, arity });
        Ok(())
    }

    pub fn relations(&self) -> &[RelSymbol] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations.iter().find(|r| r.name == name).map(|r| r.arity)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Same symbols with the same arities, in any order.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        self.len() == other.len()
            && self
                .relations
                .iter()
                .all(|r| other.arity(&r.name) == Some(r.arity))
    }

    /// Every symbol of `self` occurs in `other` with the same arity.
    pub fn embeds_into(&self, other: &Signature) -> bool {
        self.relations
            .iter()
            .all(|r| other.arity(&r.name) == Some(r.arity))
    }

    /// Union of two languages in first-appearance order. Symbols shared by
    /// both must agree on arity.
    pub fn merge(&self, other: &Signature) -> Result<Signature, LogicError> {
        let mut merged = self.clone();
        for r in &other.relations {
            match merged.arity(&r.name) {
                Some(a) if a == r.arity => {}
                Some(a) => {
                    return Err(LogicError::ArityMismatch {
                        name: r.name.clone(),
                        expected: a,
                        found: r.arity,
                    })
                }
                None => merged.relations.push(r.clone()),
            }
        }
        Ok(merged)
    }

    /// The signature without the named symbols.
    pub fn without(&self, names: &[&str]) -> Signature {
        Signature {
            relations: self
                .relations
                .iter()
                .filter(|r| !names.contains(&r.name.as_str()))
                .cloned()
                .collect(),
        }
    }

    /// Parses declaration text: any number of `rel Name/arity` groups, one or
    /// more per line, `#` starting a comment.
    pub fn parse_decls(text: &str) -> Result<Signature, LogicError> {
        let mut sig = Signature::empty();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            let mut tokens = line.split_whitespace();
            while let Some(tok) = tokens.next() {
                if tok != "rel" {
                    return Err(LogicError::InvalidSignature(format!(
                        "expected `rel`, found `{tok}`"
                    )));
                }
                let decl = tokens.next().ok_or_else(|| {
                    LogicError::InvalidSignature("`rel` without a declaration".into())
                })?;
                let (name, arity) = parse_decl(decl)?;
                sig.push(name, arity)?;
            }
        }
        Ok(sig)
    }
}

/// Parses a single `Name/arity` token.
pub(crate) fn parse_decl(decl: &str) -> Result<(String, usize), LogicError> {
    let (name, arity) = decl
        .split_once('/')
        .ok_or_else(|| LogicError::InvalidSignature(format!("`{decl}` is not `Name/arity`")))?;
    let arity = arity
        .parse::<usize>()
        .map_err(|_| LogicError::InvalidSignature(format!("bad arity in `{decl}`")))?;
    Ok((name.to_string(), arity))
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "rel {}/{}", r.name, r.arity)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero_arity() {
        assert!(Signature::new([("R", 2), ("R", 1)]).is_err());
        assert!(Signature::new([("R", 0)]).is_err());
        assert!(Signature::new([("x3", 1)]).is_err());
        assert!(Signature::new([("x", 1), ("x0", 1), ("E", 2)]).is_ok());
    }

    #[test]
    fn decl_round_trip() {
        let sig = Signature::parse_decls("rel R/2\nrel P/1 rel Q/1 # comment\n").unwrap();
        assert_eq!(sig.len(), 3);
        assert_eq!(Signature::parse_decls(&sig.to_string()).unwrap(), sig);
    }

    #[test]
    fn merge_checks_arity() {
        let a = Signature::new([("R", 2)]).unwrap();
        let b = Signature::new([("R", 1)]).unwrap();
        assert!(matches!(a.merge(&b), Err(LogicError::ArityMismatch { .. })));
        let c = Signature::new([("Q", 1), ("R", 2)]).unwrap();
        let m = a.merge(&c).unwrap();
        assert_eq!(m.relations()[1].name, "Q");
        assert!(m.same_symbols(&c));
    }

    #[test]
    fn var_names() {
        assert_eq!(parse_var_name("x12"), Some(12));
        assert_eq!(parse_var_name("x0"), None);
        assert_eq!(parse_var_name("x012"), None);
        assert_eq!(parse_var_name("y1"), None);
    }
}
