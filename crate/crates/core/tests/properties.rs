//! Property tests against brute-force oracles written independently of the
//! library's algorithms.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use combi_mt::combine::{e_combine, p_combine, relativize, restrict_to_class, restrict_to_predicate, FamilySpec};
use combi_mt::logic::{parse_formula, BinOp, Formula, Quantifier, Signature, Var};
use combi_mt::model::{
    are_isomorphic, automorphisms, ef_equivalent, enumerate_sentences, evaluate, orbit_count, Assignment,
    FiniteStructure,
};
use combi_mt::random;
use combi_mt::spectra::{i_infinity_singletons, ExtCardinal};

fn round_trip_sig() -> Signature {
    Signature::new([("R", 2), ("P", 1), ("A", 1), ("E", 2)]).unwrap()
}

fn arb_var() -> impl Strategy<Value = Var> {
    (1u32..=5).prop_map(Var::new)
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (arb_var(), arb_var()).prop_map(|(a, b)| Formula::eq(a, b)),
        (arb_var(), arb_var()).prop_map(|(a, b)| Formula::atom("R", [a, b])),
        (arb_var(), arb_var()).prop_map(|(a, b)| Formula::atom("E", [a, b])),
        arb_var().prop_map(|a| Formula::atom("P", [a])),
        arb_var().prop_map(|a| Formula::atom("A", [a])),
    ];
    leaf.prop_recursive(5, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone(), 0..3u8).prop_map(|(l, r, op)| {
                let op = [BinOp::And, BinOp::Or, BinOp::Implies][op as usize];
                Formula::Bin(op, Box::new(l), Box::new(r))
            }),
            (arb_var(), inner, any::<bool>()).prop_map(|(v, body, ex)| {
                if ex {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            }),
        ]
    })
}

fn depth(f: &Formula) -> usize {
    match f {
        Formula::Atom { .. } | Formula::Eq(..) => 0,
        Formula::Not(s) | Formula::Quant(_, _, s) => 1 + depth(s),
        Formula::Bin(_, l, r) => 1 + depth(l).max(depth(r)),
    }
}

/// Direct recursive evaluation with an explicit environment map.
fn naive_eval(s: &FiniteStructure, f: &Formula, env: &BTreeMap<u32, usize>) -> bool {
    match f {
        Formula::Atom { rel, args } => {
            let t: Vec<usize> = args.iter().map(|v| env[&v.index()]).collect();
            s.holds_named(rel, &t).unwrap()
        }
        Formula::Eq(a, b) => env[&a.index()] == env[&b.index()],
        Formula::Not(x) => !naive_eval(s, x, env),
        Formula::Bin(op, l, r) => {
            let (l, r) = (naive_eval(s, l, env), naive_eval(s, r, env));
            match op {
                BinOp::And => l && r,
                BinOp::Or => l || r,
                BinOp::Implies => !l || r,
            }
        }
        Formula::Quant(q, v, body) => {
            let mut results = (0..s.size()).map(|e| {
                let mut env = env.clone();
                env.insert(v.index(), e);
                naive_eval(s, body, &env)
            });
            match q {
                Quantifier::Exists => results.any(|b| b),
                Quantifier::Forall => results.all(|b| b),
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect()
    })
}

/// `pi` maps `a` onto `b` preserving every relation by name.
fn is_iso_map(a: &FiniteStructure, b: &FiniteStructure, pi: &[usize]) -> bool {
    a.sig().relations().iter().all(|r| {
        all_tuples(a.size(), r.arity).iter().all(|t| {
            let u: Vec<usize> = t.iter().map(|&e| pi[e]).collect();
            a.holds_named(&r.name, t).unwrap() == b.holds_named(&r.name, &u).unwrap()
        })
    })
}

fn brute_automorphisms(a: &FiniteStructure) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = permutations(a.size()).into_iter().filter(|p| is_iso_map(a, a, p)).collect();
    out.sort();
    out
}

fn brute_orbits(a: &FiniteStructure, k: usize) -> usize {
    let group = brute_automorphisms(a);
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for t in all_tuples(a.size(), k) {
        if seen.contains(&t) {
            continue;
        }
        orbits += 1;
        for g in &group {
            seen.insert(t.iter().map(|&e| g[e]).collect::<Vec<_>>());
        }
    }
    orbits
}

fn small_sig(seed: u64) -> Signature {
    let mut rng = random::rng(seed);
    random::signature(&mut rng, &["R", "P", "Q"], 2, 2)
}

fn permuted(a: &FiniteStructure, pi: &[usize]) -> FiniteStructure {
    let mut b = FiniteStructure::new(a.sig().clone(), a.size()).unwrap();
    for (ri, r) in a.sig().relations().iter().enumerate() {
        for t in a.tuples(ri) {
            let u: Vec<usize> = t.iter().map(|&e| pi[e]).collect();
            b.insert(&r.name, &u).unwrap();
        }
    }
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        prop_assume!(depth(&f) <= 5);
        let text = f.to_string();
        let back = parse_formula(&text, &round_trip_sig()).unwrap();
        prop_assert_eq!(back, f, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evaluation_matches_naive(seed in any::<u64>(), size in 1usize..=4) {
        let sig = Signature::new([("R", 2), ("P", 1)]).unwrap();
        let mut rng = random::rng(seed);
        let s = random::structure(&mut rng, &sig, size, 0.4);
        let vars = [Var::new(1), Var::new(2)];
        let f = random::formula(&mut rng, &sig, 4, &vars);
        for x1 in 0..size {
            for x2 in 0..size {
                let asg: Assignment = [(vars[0], x1), (vars[1], x2)].into_iter().collect();
                let env = BTreeMap::from([(1, x1), (2, x2)]);
                prop_assert_eq!(evaluate(&s, &f, &asg).unwrap(), naive_eval(&s, &f, &env));
            }
        }
    }

    #[test]
    fn automorphisms_match_permutation_scan(seed in any::<u64>(), size in 0usize..=5) {
        let sig = small_sig(seed);
        let mut rng = random::rng(seed ^ 0x5eed);
        let s = random::structure(&mut rng, &sig, size, 0.35);
        prop_assert_eq!(automorphisms(&s), brute_automorphisms(&s));
        if size > 0 {
            prop_assert_eq!(orbit_count(&s, 1).unwrap(), brute_orbits(&s, 1));
            prop_assert_eq!(orbit_count(&s, 2).unwrap(), brute_orbits(&s, 2));
        }
    }

    #[test]
    fn isomorphism_matches_permutation_scan(seed in any::<u64>(), size in 1usize..=5) {
        let sig = small_sig(seed);
        let mut rng = random::rng(seed);
        let a = random::structure(&mut rng, &sig, size, 0.4);
        let b = if rand::Rng::gen_bool(&mut rng, 0.5) {
            let mut pi: Vec<usize> = (0..size).collect();
            rand::seq::SliceRandom::shuffle(pi.as_mut_slice(), &mut rng);
            permuted(&a, &pi)
        } else {
            random::structure(&mut rng, &sig, size, 0.4)
        };
        let brute = permutations(size).into_iter().any(|p| is_iso_map(&a, &b, &p));
        let found = are_isomorphic(&a, &b).unwrap();
        prop_assert_eq!(found.is_some(), brute);
        if let Some(pi) = found {
            prop_assert!(is_iso_map(&a, &b, &pi));
        }
    }

    #[test]
    fn sentences_invariant_under_isomorphism(seed in any::<u64>(), size in 1usize..=4) {
        let sig = Signature::new([("R", 2), ("P", 1)]).unwrap();
        let mut rng = random::rng(seed);
        let a = random::structure(&mut rng, &sig, size, 0.4);
        let mut pi: Vec<usize> = (0..size).collect();
        rand::seq::SliceRandom::shuffle(pi.as_mut_slice(), &mut rng);
        let b = permuted(&a, &pi);
        let f = random::formula(&mut rng, &sig, 4, &[]);
        let empty = Assignment::new();
        prop_assert_eq!(evaluate(&a, &f, &empty).unwrap(), evaluate(&b, &f, &empty).unwrap());
    }

    #[test]
    fn ef_sound_against_enumeration(seed in any::<u64>(), sa in 1usize..=3, sb in 1usize..=3) {
        let sig = Signature::new([("P", 1)]).unwrap();
        let mut rng = random::rng(seed);
        let a = random::structure(&mut rng, &sig, sa, 0.5);
        let b = random::structure(&mut rng, &sig, sb, 0.5);
        let empty = Assignment::new();
        for r in 1..=2 {
            if ef_equivalent(&a, &b, r).unwrap() {
                for s in enumerate_sentences(&sig, r, 6) {
                    prop_assert_eq!(evaluate(&a, &s, &empty).unwrap(), evaluate(&b, &s, &empty).unwrap(), "{}", s);
                }
            }
        }
    }

    #[test]
    fn restrictions_undo_combinations(seed in any::<u64>()) {
        let sig = small_sig(seed);
        let mut rng = random::rng(seed);
        let fam = random::family(&mut rng, &sig, 3, 3, 0.4);
        let p = p_combine(&fam).unwrap();
        let e = e_combine(&fam).unwrap();
        let mut offset = 0;
        for (tag, s) in fam.members() {
            let expanded = fam.expanded(tag).unwrap();
            prop_assert!(are_isomorphic(&restrict_to_predicate(&p, tag).unwrap(), &expanded).unwrap().is_some());
            prop_assert!(are_isomorphic(&restrict_to_class(&e, offset).unwrap(), &expanded).unwrap().is_some());
            offset += s.size();
        }
    }

    #[test]
    fn guards_fail_across_classes(seed in any::<u64>()) {
        // Free variables split over two classes: atoms and negations
        // relativize to false.
        let sig = Signature::new([("R", 2), ("U", 1)]).unwrap();
        let mut rng = random::rng(seed);
        let a = random::structure(&mut rng, &sig, 2, 0.5);
        let b = random::structure(&mut rng, &sig, 2, 0.5);
        let fam = FamilySpec::new("f", vec![("a".into(), a), ("b".into(), b)]).unwrap();
        let c = e_combine(&fam).unwrap();
        let vars = [Var::new(1), Var::new(2)];
        let both = Formula::atom("R", vars);
        let inner = Formula::and(random::formula(&mut rng, &sig, 2, &vars), both.clone());
        let sigma = parse_formula("x1 = x1", &Signature::empty()).unwrap();
        let asg: Assignment = [(vars[0], 0), (vars[1], 3)].into_iter().collect();
        for f in [both, Formula::eq(vars[1], vars[0]), Formula::not(inner)] {
            let rel = relativize(&f, "E", &sigma).unwrap();
            prop_assert!(!evaluate(&c.base, &rel, &asg).unwrap(), "{}", f);
        }
    }

    #[test]
    fn i_infinity_monotone(j in 0u64..=8, l in 1u64..=8) {
        let at = |j, l| i_infinity_singletons(ExtCardinal::Fin(j), ExtCardinal::Fin(l)).unwrap();
        prop_assert!(at(j, l) <= at(j + 1, l));
        prop_assert!(at(j, l) <= at(j, l + 1));
    }

    #[test]
    fn cardinal_laws(a in arb_card(), b in arb_card(), c in arb_card()) {
        let add = |x: ExtCardinal, y: ExtCardinal| x.checked_add(y).unwrap();
        let mul = |x: ExtCardinal, y: ExtCardinal| x.checked_mul(y).unwrap();
        prop_assert_eq!(add(a, b), add(b, a));
        prop_assert_eq!(mul(a, b), mul(b, a));
        prop_assert_eq!(add(add(a, b), c), add(a, add(b, c)));
        prop_assert_eq!(mul(mul(a, b), c), mul(a, mul(b, c)));
        if !a.is_finite() {
            prop_assert_eq!(add(a, b), a.max(b));
            if b != ExtCardinal::Fin(0) {
                prop_assert_eq!(mul(a, b), a.max(b));
            }
        }
        prop_assert_eq!(a.min(b) <= a.max(b), true);
        prop_assert!(a.min(b) == a || a.min(b) == b);
        prop_assert_eq!(a <= b, a.max(b) == b);
    }
}

fn arb_card() -> impl Strategy<Value = ExtCardinal> {
    prop_oneof![
        (0u64..1000).prop_map(ExtCardinal::Fin),
        Just(ExtCardinal::Omega),
        Just(ExtCardinal::Continuum),
    ]
}

/// Counts sentences by the grammar, independently of the generator.
fn grammar_count(atoms: &dyn Fn(usize) -> u64, depth: usize, rank: usize, nodes: usize) -> u64 {
    match nodes {
        0 => 0,
        1 => atoms(depth),
        _ => {
            let mut n = grammar_count(atoms, depth, rank, nodes - 1);
            for l in 1..nodes - 1 {
                n += 3 * grammar_count(atoms, depth, rank, l) * grammar_count(atoms, depth, rank, nodes - 1 - l);
            }
            if rank >= 1 {
                n += 2 * grammar_count(atoms, depth + 1, rank - 1, nodes - 1);
            }
            n
        }
    }
}

#[test]
fn enumeration_matches_grammar_count() {
    let sig = Signature::new([("R", 2), ("P", 1)]).unwrap();
    let atoms = |d: usize| (d * d + d * d + d) as u64;
    for rank in 0..=2 {
        for size in 1..=6 {
            let listed: Vec<Formula> = enumerate_sentences(&sig, rank, size).collect();
            let expected: u64 = (1..=size).map(|n| grammar_count(&atoms, 0, rank, n)).sum();
            assert_eq!(listed.len() as u64, expected, "rank {rank} size {size}");
            let distinct: BTreeSet<&Formula> = listed.iter().collect();
            assert_eq!(distinct.len(), listed.len());
            assert!(listed
                .iter()
                .all(|f| f.is_sentence() && f.quantifier_rank() <= rank && f.node_count() <= size));
        }
    }
}
