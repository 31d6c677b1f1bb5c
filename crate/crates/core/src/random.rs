//! Seeded generators for signatures, structures, formulas and families.
//!
//! All randomness in tests and the self-test flows through [`rng`], so a
//! seed reproduces a run exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combine::FamilySpec;
use crate::logic::{Formula, Signature, Var};
use crate::model::FiniteStructure;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_rels` relations named from `names`, arities in `1..=max_arity`.
pub fn signature(rng: &mut impl Rng, names: &[&str], max_rels: usize, max_arity: usize) -> Signature {
    let count = rng.gen_range(0..=max_rels.min(names.len()));
    let mut sig = Signature::empty();
    for name in names.choose_multiple(rng, count) {
        sig.push(*name, rng.gen_range(1..=max_arity)).expect("distinct valid names");
    }
    sig
}

/// Each tuple holds independently with probability `density`.
pub fn structure(rng: &mut impl Rng, sig: &Signature, size: usize, density: f64) -> FiniteStructure {
    let mut s = FiniteStructure::new(sig.clone(), size).expect("small structure");
    for r in sig.relations() {
        let mut idx = vec![0usize; r.arity];
        if size == 0 {
            continue;
        }
        loop {
            if rng.gen_bool(density) {
                s.insert(&r.name, &idx).expect("in range");
            }
            let Some(pos) = (0..r.arity).rev().find(|&p| idx[p] + 1 < size) else {
                break;
            };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|v| *v = 0);
        }
    }
    s
}

fn atomic(rng: &mut impl Rng, sig: &Signature, vars: &[Var]) -> Formula {
    let pick = |rng: &mut _| *vars.choose(rng).expect("nonempty");
    let n = sig.len();
    let k = rng.gen_range(0..=n);
    if k == n {
        return Formula::eq(pick(rng), pick(rng));
    }
    let r = &sig.relations()[k];
    let args: Vec<Var> = (0..r.arity).map(|_| pick(rng)).collect();
    Formula::atom(r.name.clone(), args)
}

/// A formula of depth at most `depth` whose free variables lie in `vars`.
///
/// Quantifiers usually bind a fresh variable and sometimes rebind one in
/// scope. With `vars` empty the outermost connective is a quantifier; then
/// `depth` must be at least 1.
pub fn formula(rng: &mut impl Rng, sig: &Signature, depth: usize, vars: &[Var]) -> Formula {
    let next = vars.iter().map(|v| v.index()).max().unwrap_or(0) + 1;
    build(rng, sig, depth, vars, next)
}

fn build(rng: &mut impl Rng, sig: &Signature, depth: usize, vars: &[Var], next: u32) -> Formula {
    assert!(!vars.is_empty() || depth > 0, "no variable to build an atom from");
    let choice = if vars.is_empty() {
        4
    } else if depth == 0 {
        0
    } else {
        rng.gen_range(0..6)
    };
    match choice {
        0 => atomic(rng, sig, vars),
        1 => Formula::not(build(rng, sig, depth - 1, vars, next)),
        2 | 3 => {
            let l = build(rng, sig, depth - 1, vars, next);
            let r = build(rng, sig, depth - 1, vars, next);
            match rng.gen_range(0..3) {
                0 => Formula::and(l, r),
                1 => Formula::or(l, r),
                _ => Formula::implies(l, r),
            }
        }
        _ => {
            let (x, next) = if !vars.is_empty() && rng.gen_bool(0.25) {
                (*vars.choose(rng).expect("nonempty"), next)
            } else {
                (Var::new(next), next + 1)
            };
            let mut inner = vars.to_vec();
            if !inner.contains(&x) {
                inner.push(x);
            }
            let body = build(rng, sig, depth - 1, &inner, next);
            if rng.gen_bool(0.5) {
                Formula::exists(x, body)
            } else {
                Formula::forall(x, body)
            }
        }
    }
}

/// `1..=max_members` random members over `sig`, tagged `m0, m1, ...`, each
/// of size `1..=max_size`.
pub fn family(
    rng: &mut impl Rng,
    sig: &Signature,
    max_members: usize,
    max_size: usize,
    density: f64,
) -> FamilySpec {
    let count = rng.gen_range(1..=max_members);
    let members = (0..count)
        .map(|i| {
            let size = rng.gen_range(1..=max_size);
            (format!("m{i}"), structure(rng, sig, size, density))
        })
        .collect();
    FamilySpec::new("random", members).expect("distinct tags over one signature")
}
