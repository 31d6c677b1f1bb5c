//! Closed forms against their oracles over the whole desk-scale grid.

use rand::Rng;

use crate::spectra::{esp_range_check, spectrum_report, ExtCardinal, Params, SpectraError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestRow {
    pub name: &'static str,
    pub params: Params,
    pub closed_form: ExtCardinal,
    pub oracle: Option<u64>,
    pub passed: bool,
}

fn params(pairs: &[(&str, String)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Every grid point, plus a few seeded products. Rows are in a fixed order
/// for a given seed.
pub fn run_selftest(seed: u64) -> Result<Vec<SelftestRow>, SpectraError> {
    let mut points: Vec<(&'static str, Params)> = Vec::new();
    for j in 0..=4u64 {
        for lambda in 1..=5u64 {
            points.push(("i-infinity", params(&[("j", j.to_string()), ("lambda", lambda.to_string())])));
        }
    }
    for m in 1..=5u64 {
        for merged in [false, true] {
            points.push(("disjoint-orders", params(&[("m", m.to_string()), ("merged", merged.to_string())])));
        }
    }
    for n in 1..=6u64 {
        for m in 0..=6u64 {
            points.push(("comb-rep", params(&[("n", n.to_string()), ("m", m.to_string())])));
        }
    }
    let mut rng = crate::random::rng(seed);
    for _ in 0..5 {
        let len = rng.gen_range(1..=3);
        let factors: Vec<String> = (0..len).map(|_| rng.gen_range(1..=4u64).to_string()).collect();
        points.push(("models-product", params(&[("factors", factors.join(":"))])));
    }
    points
        .into_iter()
        .map(|(name, p)| {
            let r = spectrum_report(name, &p)?;
            Ok(SelftestRow {
                name,
                passed: r.agrees && r.oracle_value.is_some() && esp_range_check(r.closed_form),
                closed_form: r.closed_form,
                oracle: r.oracle_value,
                params: p,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_pass() {
        let rows = run_selftest(0).unwrap();
        assert!(rows.len() > 80);
        let failed: Vec<_> = rows.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
