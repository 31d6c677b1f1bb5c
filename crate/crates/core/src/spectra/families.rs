//! Finite truncations of the example families.

use std::str::FromStr;

use crate::combine::FamilySpec;
use crate::logic::Signature;
use crate::model::FiniteStructure;

use super::{bound, param_u64, Params, SpectraError};

/// Desk-scale caps on generated families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_members: u64,
    pub max_size: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_members: 8,
            max_size: 8,
        }
    }
}

impl Limits {
    pub const ENV_VAR: &'static str = "COMBI_MT_MAX_SIZE";

    /// Defaults, with both caps replaced by `COMBI_MT_MAX_SIZE` when it is
    /// set to a number. Large values make every downstream search slow.
    pub fn from_env() -> Self {
        match std::env::var(Self::ENV_VAR).ok().and_then(|v| v.trim().parse().ok()) {
            Some(n) => Limits {
                max_members: n,
                max_size: n,
            },
            None => Limits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `j` predicates `Q1..Qj`; each member has one of them as a singleton
    /// and the rest empty. Params: `j`, `copies` (1), `size` (1).
    Singletons,
    /// Members `a<i>_<n>` of size `n` with `P_i` the whole universe and the
    /// other `P` empty. Params: `lambda`, `max_n`.
    UnaryChain,
    /// `k` predicates with every sign pattern realized `t` times in member
    /// `m<t>`. Params: `k`, `max_mult`.
    IndependentPreds,
    /// Member `d<i>` is `copies` disjoint paths of diameter `i` under a
    /// symmetric irreflexive `R`. Params: `max_diameter`, `copies` (1).
    Paths,
    /// `a<i>` has `P` of size `2i`, `b<i>` of size `2i+1`, with `P` the whole
    /// universe, for `i = 1..count`. Params: `count`, `side` (`both`).
    Parity,
}

impl FamilyKind {
    pub const NAMES: &'static [&'static str] =
        &["singletons", "unary_chain", "independent_preds", "paths", "parity"];
}

impl FromStr for FamilyKind {
    type Err = SpectraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "singletons" => FamilyKind::Singletons,
            "unary_chain" => FamilyKind::UnaryChain,
            "independent_preds" => FamilyKind::IndependentPreds,
            "paths" => FamilyKind::Paths,
            "parity" => FamilyKind::Parity,
            other => {
                return Err(SpectraError::UnknownKind(format!(
                    "{other} (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }
}

fn opt_u64(params: &Params, key: &str, default: u64) -> Result<u64, SpectraError> {
    if params.contains_key(key) {
        param_u64(params, key)
    } else {
        Ok(default)
    }
}

fn unary_sig(prefix: &str, k: u64) -> Signature {
    let names: Vec<String> = (1..=k).map(|i| format!("{prefix}{i}")).collect();
    Signature::new(names.iter().map(|n| (n.as_str(), 1))).expect("valid names")
}

pub fn gen_family(kind: FamilyKind, params: &Params) -> Result<FamilySpec, SpectraError> {
    gen_family_with(kind, params, &Limits::default())
}

pub fn gen_family_with(kind: FamilyKind, params: &Params, limits: &Limits) -> Result<FamilySpec, SpectraError> {
    let allowed: &[&str] = match kind {
        FamilyKind::Singletons => &["j", "copies", "size"],
        FamilyKind::UnaryChain => &["lambda", "max_n"],
        FamilyKind::IndependentPreds => &["k", "max_mult"],
        FamilyKind::Paths => &["max_diameter", "copies"],
        FamilyKind::Parity => &["count", "side"],
    };
    super::check_keys(params, allowed)?;
    let members = build(kind, params, limits)?;
    bound("members", members.len() as u64, limits.max_members)?;
    for (_, s) in &members {
        bound("size", s.size() as u64, limits.max_size)?;
    }
    let name = FamilyKind::NAMES[kind as usize];
    Ok(FamilySpec::new(name, members)?)
}

fn at_least_one(name: &str, v: u64) -> Result<u64, SpectraError> {
    if v == 0 {
        return Err(SpectraError::InvalidParams(format!("`{name}` must be at least 1")));
    }
    Ok(v)
}

fn build(kind: FamilyKind, params: &Params, limits: &Limits) -> Result<Vec<(String, FiniteStructure)>, SpectraError> {
    // Checked before building so huge parameters fail fast.
    let cap = |name: &str, v: u64, max: u64| bound(name, v, max).map(|_| v);
    let mut out = Vec::new();
    match kind {
        FamilyKind::Singletons => {
            let j = at_least_one("j", cap("j", param_u64(params, "j")?, limits.max_members)?)?;
            let copies = at_least_one("copies", cap("copies", opt_u64(params, "copies", 1)?, limits.max_members)?)?;
            let size = at_least_one("size", cap("size", opt_u64(params, "size", 1)?, limits.max_size)?)?;
            cap("members", j * copies, limits.max_members)?;
            let sig = unary_sig("Q", j);
            for q in 1..=j {
                for c in 0..copies {
                    let name = format!("Q{q}");
                    let s = FiniteStructure::from_tuples(sig.clone(), size as usize, [(name.as_str(), [vec![0]])])?;
                    out.push((format!("q{q}_{c}"), s));
                }
            }
        }
        FamilyKind::UnaryChain => {
            let lambda = at_least_one("lambda", cap("lambda", param_u64(params, "lambda")?, limits.max_members)?)?;
            let max_n = at_least_one("max_n", cap("max_n", param_u64(params, "max_n")?, limits.max_size)?)?;
            cap("members", lambda * max_n, limits.max_members)?;
            let sig = unary_sig("P", lambda);
            for i in 1..=lambda {
                for n in 1..=max_n {
                    let name = format!("P{i}");
                    let all = (0..n as usize).map(|e| vec![e]);
                    let s = FiniteStructure::from_tuples(sig.clone(), n as usize, [(name.as_str(), all)])?;
                    out.push((format!("a{i}_{n}"), s));
                }
            }
        }
        FamilyKind::IndependentPreds => {
            let k = at_least_one("k", cap("k", param_u64(params, "k")?, 6)?)?;
            let max_mult = at_least_one("max_mult", cap("max_mult", param_u64(params, "max_mult")?, limits.max_members)?)?;
            let patterns = 1u64 << k;
            cap("size", patterns * max_mult, limits.max_size)?;
            let sig = unary_sig("P", k);
            for t in 1..=max_mult {
                let size = (patterns * t) as usize;
                let mut s = FiniteStructure::new(sig.clone(), size)?;
                // Element e realizes pattern e mod 2^k: bit b set means P_{b+1}.
                for e in 0..size {
                    let pattern = e as u64 % patterns;
                    for b in 0..k {
                        if pattern >> b & 1 == 1 {
                            s.insert(&format!("P{}", b + 1), &[e])?;
                        }
                    }
                }
                out.push((format!("m{t}"), s));
            }
        }
        FamilyKind::Paths => {
            let max_d = at_least_one("max_diameter", cap("max_diameter", param_u64(params, "max_diameter")?, limits.max_members)?)?;
            let copies = at_least_one("copies", cap("copies", opt_u64(params, "copies", 1)?, limits.max_size)?)?;
            cap("size", copies * (max_d + 1), limits.max_size)?;
            let sig = Signature::new([("R", 2)]).expect("valid");
            for d in 1..=max_d {
                let len = (d + 1) as usize;
                let mut s = FiniteStructure::new(sig.clone(), len * copies as usize)?;
                for c in 0..copies as usize {
                    for v in 0..d as usize {
                        let (x, y) = (c * len + v, c * len + v + 1);
                        s.insert("R", &[x, y])?;
                        s.insert("R", &[y, x])?;
                    }
                }
                out.push((format!("d{d}"), s));
            }
        }
        FamilyKind::Parity => {
            let count = at_least_one("count", cap("count", param_u64(params, "count")?, limits.max_members)?)?;
            let side = params.get("side").map(String::as_str).unwrap_or("both");
            let (even, odd) = match side {
                "even" => (true, false),
                "odd" => (false, true),
                "both" => (true, true),
                other => {
                    return Err(SpectraError::InvalidParams(format!(
                        "`side={other}` must be even, odd or both"
                    )))
                }
            };
            cap("size", 2 * count + u64::from(odd), limits.max_size)?;
            let sig = Signature::new([("P", 1)]).expect("valid");
            let full = |n: u64| {
                FiniteStructure::from_tuples(sig.clone(), n as usize, [("P", (0..n as usize).map(|e| vec![e]))])
            };
            for i in 1..=count {
                if even {
                    out.push((format!("a{i}"), full(2 * i)?));
                }
                if odd {
                    out.push((format!("b{i}"), full(2 * i + 1)?));
                }
            }
        }
    }
    Ok(out)
}
