//! Cardinal arithmetic, closed-form counts and the enumeration oracles that
//! check them on small parameters.
//!
//! Oracles never use the closed forms: they build the objects being counted
//! and count them directly.

mod cardinal;
mod families;

pub use cardinal::{ExtCardinal, ParseCardinalError};
pub use families::{gen_family, gen_family_with, FamilyKind, Limits};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::combine::CombineError;
use crate::logic::Signature;
use crate::model::{are_isomorphic, FiniteStructure, ModelError};

pub type Params = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectraError {
    #[error("ZeroFactor: every factor counts at least one model")]
    ZeroFactor,
    #[error("Overflow: {0} does not fit in 64 bits")]
    Overflow(String),
    #[error("BoundExceeded: {name}={value} exceeds the limit {max}")]
    BoundExceeded { name: String, value: u64, max: u64 },
    #[error("UndefinedIndex: no construction is defined for n={0}")]
    UndefinedIndex(u64),
    #[error("UnknownKind: `{0}`")]
    UnknownKind(String),
    #[error("InvalidParams: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Combine(#[from] CombineError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn bound(name: &str, value: u64, max: u64) -> Result<(), SpectraError> {
    if value > max {
        return Err(SpectraError::BoundExceeded {
            name: name.to_string(),
            value,
            max,
        });
    }
    Ok(())
}

fn overflow(what: &str) -> SpectraError {
    SpectraError::Overflow(what.to_string())
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    u64::try_from(acc).ok()
}

/// Number of models of a product theory from the component counts.
pub fn count_models_product(factors: &[ExtCardinal]) -> Result<ExtCardinal, SpectraError> {
    if factors.contains(&ExtCardinal::Fin(0)) {
        return Err(SpectraError::ZeroFactor);
    }
    factors
        .iter()
        .try_fold(ExtCardinal::Fin(1), |acc, &f| acc.checked_mul(f))
        .ok_or_else(|| overflow("model count"))
}

/// Residual structures of size `lambda` in the singleton family with `j`
/// predicate symbols.
///
/// A finite `j` against an infinite `lambda` takes the finite branch with
/// `min(j, lambda) = j`, giving `2^j`.
pub fn i_infinity_singletons(j: ExtCardinal, lambda: ExtCardinal) -> Result<ExtCardinal, SpectraError> {
    if lambda < ExtCardinal::Fin(1) {
        return Err(SpectraError::InvalidParams("lambda must be at least 1".into()));
    }
    match j {
        ExtCardinal::Fin(jn) => {
            let top = match lambda {
                ExtCardinal::Fin(l) => l.min(jn),
                _ => jn,
            };
            (0..=top)
                .try_fold(0u64, |acc, i| acc.checked_add(binomial(jn, i)?))
                .map(ExtCardinal::Fin)
                .ok_or_else(|| overflow("binomial sum"))
        }
        _ if j > lambda => Ok(j),
        _ => j.checked_pow2().ok_or_else(|| overflow("2^j")),
    }
}

/// Counts, up to isomorphism, the structures of size exactly `lambda` over
/// unary `Q1..Qj` where each `Qi` has at most one element and no element is
/// in two of them.
pub fn oracle_i_infinity(j: u64, lambda: u64) -> Result<u64, SpectraError> {
    bound("j", j, 6)?;
    bound("lambda", lambda, 6)?;
    if lambda == 0 {
        return Err(SpectraError::InvalidParams("lambda must be at least 1".into()));
    }
    let (j, n) = (j as usize, lambda as usize);
    let names: Vec<String> = (1..=j).map(|i| format!("Q{i}")).collect();
    let sig = Signature::new(names.iter().map(|s| (s.as_str(), 1))).expect("valid names");
    // choice[q] == n means Q_q is empty.
    let mut choice = vec![0usize; j];
    let mut classes: Vec<(Vec<usize>, FiniteStructure)> = Vec::new();
    loop {
        let used: Vec<usize> = choice.iter().copied().filter(|&e| e < n).collect();
        let mut seen = used.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() == used.len() {
            let mut s = FiniteStructure::new(sig.clone(), n)?;
            for (q, &e) in choice.iter().enumerate() {
                if e < n {
                    s.insert(&names[q], &[e])?;
                }
            }
            let key: Vec<usize> = (0..j).map(|q| s.tuple_count(q)).collect();
            let mut fresh = true;
            for (k, rep) in &classes {
                if *k == key && are_isomorphic(rep, &s)?.is_some() {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                classes.push((key, s));
            }
        }
        let Some(pos) = (0..j).rev().find(|&p| choice[p] < n) else {
            break;
        };
        choice[pos] += 1;
        choice[pos + 1..].iter_mut().for_each(|c| *c = 0);
    }
    Ok(classes.len() as u64)
}

/// e-spectrum of `m` disjoint copies of the dense-order example, with the
/// orders named apart (`merged = false`) or by one symbol.
pub fn esp_disjoint_orders(m: u64, merged: bool) -> Result<u64, SpectraError> {
    if m == 0 {
        return Err(SpectraError::InvalidParams("m must be at least 1".into()));
    }
    if merged {
        m.checked_mul(m + 1)
            .map(|p| p / 2 + m)
            .ok_or_else(|| overflow("(m^2+3m)/2"))
    } else {
        u32::try_from(m)
            .ok()
            .and_then(|e| 3u64.checked_pow(e))
            .map(|p| p - 1)
            .ok_or_else(|| overflow("3^m"))
    }
}

/// Assignments of one of `states` states to each of `m` components, counted
/// by listing them. State 0 is "empty". Unlabeled components make the
/// assignment a multiset.
pub fn oracle_component_states(
    m: u64,
    states: u64,
    labeled: bool,
    exclude_all_empty: bool,
) -> Result<u64, SpectraError> {
    bound("m", m, 10)?;
    bound("states", states, 6)?;
    if states == 0 {
        return Err(SpectraError::InvalidParams("states must be at least 1".into()));
    }
    let (m, k) = (m as usize, states as usize);
    let mut current = vec![0usize; m];
    let mut count = 0u64;
    loop {
        if !(exclude_all_empty && current.iter().all(|&s| s == 0)) {
            count += 1;
        }
        let Some(pos) = (0..m).rev().find(|&p| current[p] + 1 < k) else {
            break;
        };
        current[pos] += 1;
        // Unlabeled: keep the sequence nondecreasing so each multiset
        // appears once.
        let reset = if labeled { 0 } else { current[pos] };
        current[pos + 1..].iter_mut().for_each(|c| *c = reset);
    }
    Ok(count)
}

/// Combinations with repetition: multisets of size `m` over `n` symbols.
pub fn comb_rep(n: u64, m: u64) -> Result<u64, SpectraError> {
    if n == 0 {
        return Err(SpectraError::InvalidParams("n must be at least 1".into()));
    }
    let top = (n - 1).checked_add(m).ok_or_else(|| overflow("n+m-1"))?;
    binomial(top, m).ok_or_else(|| overflow("binomial"))
}

/// e-spectrum of the dense-order theories with a partition into `n-1`
/// dense predicates; `n = 0` is the base example.
pub fn esp_tn(n: u64) -> Result<u64, SpectraError> {
    match n {
        0 => Ok(2),
        1 => Err(SpectraError::UndefinedIndex(1)),
        _ => Ok(n),
    }
}

/// The base example with predicates alternating `a < c_2i` and `a ≤ c_2i+1`:
/// limit orders with or without a least and a greatest element, four in all.
pub const ESP_T0_HALFOPEN_VARIANT: u64 = 4;

/// Checks the common-limit relations for two E-combinations and their
/// disjoint union: `comlim ≤ min(a, b)`, `max(a, b) ≤ c` and
/// `a + b = c + comlim`.
pub fn comlim_validate(sp_a: ExtCardinal, sp_b: ExtCardinal, sp_c: ExtCardinal, comlim: ExtCardinal) -> bool {
    let sum = |x: ExtCardinal, y: ExtCardinal| match (x, y) {
        (ExtCardinal::Fin(p), ExtCardinal::Fin(q)) => (u128::from(p) + u128::from(q), None),
        _ => (0, Some(x.max(y))),
    };
    comlim <= sp_a.min(sp_b) && sp_a.max(sp_b) <= sp_c && sum(sp_a, sp_b) == sum(sp_c, comlim)
}

/// Every `ExtCardinal` is finite, `omega` or `continuum`; this is the point
/// where a raw count is asserted to lie in that range.
pub fn esp_range_check(v: ExtCardinal) -> bool {
    matches!(v, ExtCardinal::Fin(_) | ExtCardinal::Omega | ExtCardinal::Continuum)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub closed_form: ExtCardinal,
    pub oracle_value: Option<u64>,
    pub params: Params,
    /// False when the oracle ran and disagrees, or the closed form is
    /// infinite while the oracle counted; true when no oracle applies.
    pub agrees: bool,
}

impl SpectrumReport {
    pub fn new(closed_form: ExtCardinal, oracle_value: Option<u64>, params: Params) -> Self {
        let agrees = match oracle_value {
            None => true,
            Some(o) => closed_form == ExtCardinal::Fin(o),
        };
        SpectrumReport {
            closed_form,
            oracle_value,
            params,
            agrees,
        }
    }
}

/// Names accepted by [`spectrum_report`].
pub const SPECTRUM_NAMES: &[&str] = &[
    "comb-rep",
    "disjoint-orders",
    "i-infinity",
    "models-product",
    "t0-halfopen",
    "tn",
];

fn param<'p>(params: &'p Params, key: &str) -> Result<&'p str, SpectraError> {
    params
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| SpectraError::InvalidParams(format!("missing `{key}`")))
}

fn param_u64(params: &Params, key: &str) -> Result<u64, SpectraError> {
    let v = param(params, key)?;
    v.parse()
        .map_err(|_| SpectraError::InvalidParams(format!("`{key}={v}` is not a nonnegative integer")))
}

fn param_card(params: &Params, key: &str) -> Result<ExtCardinal, SpectraError> {
    param(params, key)?
        .parse()
        .map_err(|e: ParseCardinalError| SpectraError::InvalidParams(e.to_string()))
}

fn param_bool(params: &Params, key: &str, default: bool) -> Result<bool, SpectraError> {
    match params.get(key).map(String::as_str) {
        None => Ok(default),
        Some("true" | "1" | "yes") => Ok(true),
        Some("false" | "0" | "no") => Ok(false),
        Some(v) => Err(SpectraError::InvalidParams(format!("`{key}={v}` is not a boolean"))),
    }
}

fn check_keys(params: &Params, allowed: &[&str]) -> Result<(), SpectraError> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(SpectraError::InvalidParams(format!(
            "unknown parameter `{k}` (expected {})",
            allowed.join(", ")
        ))),
        None => Ok(()),
    }
}

/// Parses `k=v,k=v`.
pub fn parse_params(text: &str) -> Result<Params, SpectraError> {
    let mut out = Params::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| SpectraError::InvalidParams(format!("`{item}` is not key=value")))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(SpectraError::InvalidParams(format!("`{}` given twice", k.trim())));
        }
    }
    Ok(out)
}

/// Enumerates one choice per factor and counts the tuples.
fn oracle_product(counts: &[u64]) -> Option<u64> {
    let mut idx = vec![0u64; counts.len()];
    let mut n = 0u64;
    loop {
        n += 1;
        if n > 1_000_000 {
            return None;
        }
        let Some(pos) = (0..counts.len()).rev().find(|&p| idx[p] + 1 < counts[p]) else {
            return Some(n);
        };
        idx[pos] += 1;
        idx[pos + 1..].iter_mut().for_each(|c| *c = 0);
    }
}

/// Evaluates a named closed form and, where it applies, its oracle.
///
/// | name | params | oracle |
/// |---|---|---|
/// | `i-infinity` | `j`, `lambda` (cardinals) | isomorphism classes, `j, lambda ≤ 6` |
/// | `disjoint-orders` | `m`, `merged` | component states, `m ≤ 10` |
/// | `comb-rep` | `n`, `m` | multisets, `n ≤ 6`, `m ≤ 10` |
/// | `models-product` | `factors` (`:`-separated cardinals) | choice tuples, finite only |
/// | `tn` | `n` | none |
/// | `t0-halfopen` | none | none |
pub fn spectrum_report(name: &str, params: &Params) -> Result<SpectrumReport, SpectraError> {
    let (closed, oracle) = match name {
        "i-infinity" => {
            check_keys(params, &["j", "lambda"])?;
            let j = param_card(params, "j")?;
            let lambda = param_card(params, "lambda")?;
            let closed = i_infinity_singletons(j, lambda)?;
            let oracle = match (j, lambda) {
                (ExtCardinal::Fin(j), ExtCardinal::Fin(l)) if j <= 6 && l <= 6 => Some(oracle_i_infinity(j, l)?),
                _ => None,
            };
            (closed, oracle)
        }
        "disjoint-orders" => {
            check_keys(params, &["m", "merged"])?;
            let m = param_u64(params, "m")?;
            let merged = param_bool(params, "merged", false)?;
            let closed = ExtCardinal::Fin(esp_disjoint_orders(m, merged)?);
            let oracle = (m <= 10)
                .then(|| oracle_component_states(m, 3, !merged, true))
                .transpose()?;
            (closed, oracle)
        }
        "comb-rep" => {
            check_keys(params, &["n", "m"])?;
            let n = param_u64(params, "n")?;
            let m = param_u64(params, "m")?;
            let closed = ExtCardinal::Fin(comb_rep(n, m)?);
            let oracle = (n <= 6 && m <= 10)
                .then(|| oracle_component_states(m, n, false, false))
                .transpose()?;
            (closed, oracle)
        }
        "models-product" => {
            check_keys(params, &["factors"])?;
            let factors = param(params, "factors")?
                .split(':')
                .map(|f| {
                    f.parse::<ExtCardinal>()
                        .map_err(|e| SpectraError::InvalidParams(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let closed = count_models_product(&factors)?;
            let counts: Option<Vec<u64>> = factors.iter().map(|f| f.finite()).collect();
            (closed, counts.and_then(|c| oracle_product(&c)))
        }
        "tn" => {
            check_keys(params, &["n"])?;
            (ExtCardinal::Fin(esp_tn(param_u64(params, "n")?)?), None)
        }
        "t0-halfopen" => {
            check_keys(params, &[])?;
            (ExtCardinal::Fin(ESP_T0_HALFOPEN_VARIANT), None)
        }
        other => {
            return Err(SpectraError::UnknownKind(format!(
                "{other} (expected one of {})",
                SPECTRUM_NAMES.join(", ")
            )))
        }
    };
    debug_assert!(esp_range_check(closed));
    Ok(SpectrumReport::new(closed, oracle, params.clone()))
}
