//! Line-oriented structure files.
//!
//! ```text
//! # comment
//! family <name> members <tag1> <tag2> ...     (family files only)
//! structure <name>
//! sig rel <Name>/<arity> [rel <Name>/<arity> ...]
//! universe <k>
//! rel <Name>: (i1,...,in) (j1,...,jn) ...
//! end
//! ```
//!
//! `sig` lines may repeat. A relation without a `rel` line is empty.

use std::fmt::Write as _;

use thiserror::Error;

use crate::logic::{parse_decl_token, Signature};

use super::FiniteStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("FormatError: line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyHeader {
    pub name: String,
    pub members: Vec<String>,
}

/// Parsed contents of a structure or family file.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub family: Option<FamilyHeader>,
    pub structures: Vec<(String, FiniteStructure)>,
}

impl Document {
    pub fn get(&self, name: &str) -> Option<&FiniteStructure> {
        self.structures.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

struct Pending {
    name: String,
    start: usize,
    sig: Signature,
    universe: Option<usize>,
    built: Option<FiniteStructure>,
}

impl Pending {
    fn build(&mut self, line: usize) -> Result<&mut FiniteStructure, FormatError> {
        if self.built.is_none() {
            let Some(size) = self.universe else {
                return err(line, "`universe` must come before relation lines");
            };
            let s = FiniteStructure::new(self.sig.clone(), size).map_err(|e| FormatError {
                line,
                message: e.to_string(),
            })?;
            self.built = Some(s);
        }
        Ok(self.built.as_mut().expect("just built"))
    }
}

fn parse_tuples(text: &str, line: usize) -> Result<Vec<Vec<usize>>, FormatError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(inner) = rest.strip_prefix('(') else {
            return err(line, format!("expected `(` at `{rest}`"));
        };
        let Some(close) = inner.find(')') else {
            return err(line, "unclosed tuple");
        };
        let tuple = inner[..close]
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| FormatError {
                line,
                message: format!("bad tuple `({})`", &inner[..close]),
            })?;
        out.push(tuple);
        rest = inner[close + 1..].trim_start();
    }
    Ok(out)
}

pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let mut doc = Document::default();
    let mut current: Option<Pending> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = content
            .split_once(char::is_whitespace)
            .map(|(h, r)| (h, r.trim()))
            .unwrap_or((content, ""));
        match (head, current.as_mut()) {
            ("family", None) => {
                if doc.family.is_some() || !doc.structures.is_empty() {
                    return err(line, "`family` header must come first and only once");
                }
                let mut words = rest.split_whitespace();
                let name = words.next().ok_or(FormatError {
                    line,
                    message: "family needs a name".into(),
                })?;
                if words.next() != Some("members") {
                    return err(line, "expected `members` after the family name");
                }
                doc.family = Some(FamilyHeader {
                    name: name.to_string(),
                    members: words.map(str::to_string).collect(),
                });
            }
            ("structure", None) => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return err(line, "`structure` takes exactly one name");
                }
                if doc.get(rest).is_some() {
                    return err(line, format!("duplicate structure name `{rest}`"));
                }
                current = Some(Pending {
                    name: rest.to_string(),
                    start: line,
                    sig: Signature::empty(),
                    universe: None,
                    built: None,
                });
            }
            ("sig", Some(p)) => {
                if p.built.is_some() {
                    return err(line, "`sig` after relation lines");
                }
                let mut words = rest.split_whitespace();
                while let Some(w) = words.next() {
                    if w != "rel" {
                        return err(line, format!("expected `rel`, found `{w}`"));
                    }
                    let decl = words.next().ok_or(FormatError {
                        line,
                        message: "`rel` without a declaration".into(),
                    })?;
                    let (name, arity) = parse_decl_token(decl).map_err(|e| FormatError {
                        line,
                        message: e.to_string(),
                    })?;
                    p.sig.push(name, arity).map_err(|e| FormatError {
                        line,
                        message: e.to_string(),
                    })?;
                }
            }
            ("universe", Some(p)) => {
                if p.universe.is_some() {
                    return err(line, "`universe` given twice");
                }
                p.universe = Some(rest.parse().map_err(|_| FormatError {
                    line,
                    message: format!("bad universe size `{rest}`"),
                })?);
            }
            ("rel", Some(p)) => {
                let Some((name, tuples)) = rest.split_once(':') else {
                    return err(line, "expected `rel <Name>: (..) ...`");
                };
                let name = name.trim().to_string();
                let tuples = parse_tuples(tuples, line)?;
                let s = p.build(line)?;
                for t in tuples {
                    s.insert(&name, &t).map_err(|e| FormatError {
                        line,
                        message: e.to_string(),
                    })?;
                }
            }
            ("end", Some(p)) => {
                p.build(line)?;
                let p = current.take().expect("inside a structure");
                doc.structures.push((p.name, p.built.expect("built above")));
            }
            (_, Some(_)) => return err(line, format!("unexpected `{head}` inside a structure")),
            (_, None) => return err(line, format!("unexpected `{head}` outside a structure")),
        }
    }
    if let Some(p) = current {
        return err(p.start, format!("structure `{}` is missing `end`", p.name));
    }
    Ok(doc)
}

/// Writes one structure block; relations in signature order, tuples sorted.
pub fn write_structure(name: &str, s: &FiniteStructure) -> String {
    let mut out = String::new();
    writeln!(out, "structure {name}").unwrap();
    for r in s.sig().relations() {
        writeln!(out, "sig rel {}/{}", r.name, r.arity).unwrap();
    }
    writeln!(out, "universe {}", s.size()).unwrap();
    for (ri, r) in s.sig().relations().iter().enumerate() {
        let tuples = s.tuples(ri);
        if tuples.is_empty() {
            continue;
        }
        write!(out, "rel {}:", r.name).unwrap();
        for t in tuples {
            let items: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            write!(out, " ({})", items.join(",")).unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}
