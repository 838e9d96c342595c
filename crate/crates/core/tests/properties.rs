use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use recset::descriptions::extract_description;
use recset::engine::{order_of, partition_report, saturate, Mode, Witness};
use recset::instances::{build_span, span_combinations, trunc_concat, trunc_star, trunc_union, truncate};
use recset::verify::{
    brute_intersection_closed, brute_minimal_closed, check_base_extension, check_op_extension, is_recursively_closed,
};
use recset::{
    build_cyclic_group, build_modular, build_regular_sets, compare_elements, validate_description, Flavor, Instance,
    Lang, Limits, ModOp, Operation, Style, Universe, Value,
};

fn arb_modop() -> impl Strategy<Value = ModOp> {
    prop_oneof![
        Just(ModOp::Add),
        Just(ModOp::Mul),
        Just(ModOp::Neg),
        (-3i64..4, -3i64..4).prop_map(|(a, b)| ModOp::Affine { a, b }),
    ]
}

fn arb_modular() -> impl Strategy<Value = Instance> {
    (1u64..=20, prop::collection::vec(0i64..20, 1..=3), prop::collection::vec(arb_modop(), 1..=3))
        .prop_map(|(m, base, ops)| build_modular(m, &base, &ops, Limits::default()).unwrap())
}

/// Plain worklist closure, then minimal levels by relaxing
/// `level(e) = 1 + min over producers of max(level(args))` to a fixpoint.
fn bfs_levels(inst: &Instance) -> BTreeMap<Value, usize> {
    let mut set: BTreeSet<Value> = inst.base().iter().cloned().collect();
    loop {
        let pool: Vec<Value> = set.iter().cloned().collect();
        let mut added = false;
        for op in inst.ops() {
            for t in tuples(&pool, op.arity()) {
                if let Some(r) = op.apply(&t).unwrap() {
                    added |= set.insert(r);
                }
            }
        }
        if !added {
            break;
        }
    }
    let pool: Vec<Value> = set.iter().cloned().collect();
    let mut level: BTreeMap<Value, usize> = inst.base().iter().map(|b| (b.clone(), 1)).collect();
    loop {
        let mut changed = false;
        for op in inst.ops() {
            for t in tuples(&pool, op.arity()) {
                let Some(depth) = t.iter().map(|a| level.get(a).copied()).collect::<Option<Vec<_>>>() else {
                    continue;
                };
                let Some(r) = op.apply(&t).unwrap() else { continue };
                let cand = depth.into_iter().max().unwrap() + 1;
                let entry = level.entry(r).or_insert(usize::MAX);
                if cand < *entry {
                    *entry = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return level;
        }
    }
}

fn tuples(pool: &[Value], n: usize) -> Vec<Vec<Value>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Value>| {
                pool.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn naive_and_semi_naive_agree(inst in arb_modular()) {
        let a = saturate(&inst, Mode::Naive).unwrap();
        let b = saturate(&inst, Mode::SemiNaive).unwrap();
        prop_assert!(a.is_fixpoint() && b.is_fixpoint());
        prop_assert_eq!(a.strata(), b.strata());
        prop_assert_eq!(a.witnesses(), b.witnesses());
        prop_assert!(b.total_evaluator_calls() <= a.total_evaluator_calls());
    }

    #[test]
    fn orders_are_minimal_levels(inst in arb_modular()) {
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        prop_assert_eq!(r.orders(), &bfs_levels(&inst));
    }

    #[test]
    fn results_are_stratified_closed_and_partitioned(inst in arb_modular()) {
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        prop_assert!(partition_report(&r).is_ok());
        let mut first = inst.base().to_vec();
        first.sort();
        prop_assert_eq!(&r.strata()[0], &first);
        for (e, w) in r.witnesses() {
            let p = order_of(&r, e).unwrap();
            match w {
                Witness::Base => prop_assert_eq!(p, 1),
                Witness::Derived { op, args } => {
                    let max = args.iter().map(|a| order_of(&r, a).unwrap()).max().unwrap();
                    prop_assert_eq!(max, p - 1);
                    prop_assert_eq!(inst.apply(*op, args).unwrap(), Some(e.clone()));
                }
            }
        }
        let m: BTreeSet<Value> = r.elements().cloned().collect();
        prop_assert!(is_recursively_closed(&m, &inst).unwrap().is_closed());
    }

    #[test]
    fn truncated_runs_are_prefixes(inst in arb_modular(), cut in 1usize..6, evals in 1u64..200) {
        let full = saturate(&inst, Mode::SemiNaive).unwrap();
        for limits in [Limits::default().with_max_order(cut), Limits::new(1000, 1000, evals).unwrap(), Limits::new(1000, cut, 10_000).unwrap()] {
            let part = saturate(&inst.with_limits(limits).unwrap(), Mode::SemiNaive).unwrap();
            prop_assert!(part.strata().len() <= full.strata().len());
            prop_assert_eq!(part.strata(), &full.strata()[..part.strata().len()]);
            for (e, w) in part.witnesses() {
                prop_assert_eq!(Some(w), full.witnesses().get(e));
            }
        }
    }

    #[test]
    fn descriptions_of_every_element_validate(inst in arb_modular()) {
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        for e in r.elements() {
            let paper = extract_description(&r, e, Style::Paper).unwrap();
            let compact = extract_description(&r, e, Style::Compact).unwrap();
            prop_assert!(validate_description(&inst, paper.entries(), e).is_valid());
            prop_assert!(validate_description(&inst, compact.entries(), e).is_valid());
            prop_assert!(compact.len() <= paper.len());
            prop_assert!(compact.len() >= order_of(&r, e).unwrap());
            let distinct: BTreeSet<_> = compact.entries().iter().collect();
            prop_assert_eq!(distinct.len(), compact.len());
        }
    }

    #[test]
    fn padding_adds_exactly_h(inst in arb_modular(), h in 0usize..8) {
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        let e = r.elements().last().unwrap().clone();
        let d = extract_description(&r, &e, Style::Compact).unwrap();
        let p = recset::pad_description(&d, h, &inst).unwrap();
        prop_assert_eq!(p.len(), d.len() + h);
        prop_assert!(validate_description(&inst, p.entries(), &e).is_valid());
    }

    #[test]
    fn random_valid_sequences_stay_in_m(inst in arb_modular(), seed in any::<u64>()) {
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        let seq = random_derivation(&inst, &mut StdRng::seed_from_u64(seed), 12);
        prop_assert!(validate_description(&inst, &seq, seq.last().unwrap()).is_valid());
        prop_assert!(r.contains(seq.last().unwrap()));
    }

    #[test]
    fn monotone_extensions(inst in arb_modular(), pick in prop::collection::vec(any::<prop::sample::Index>(), 0..3), extra in arb_modop()) {
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        let m: Vec<Value> = r.elements().cloned().collect();
        let chosen: Vec<Value> = pick.iter().map(|i| i.get(&m).clone()).collect();
        let report = check_base_extension(&inst, &chosen).unwrap();
        prop_assert_eq!(report.sets_equal, Some(true));
        let Universe::Integers { modulus: Some(modulus) } = inst.universe() else { unreachable!() };
        let op_report = check_op_extension(&inst, vec![extra.integer_op(*modulus)]).unwrap();
        if op_report.closure.is_closed() {
            prop_assert_eq!(op_report.sets_equal, Some(true));
        } else {
            prop_assert_eq!(op_report.sets_equal, None);
        }
    }

    #[test]
    fn three_way_agreement(inst in (1u64..=12, prop::collection::vec(0i64..12, 1..=2), prop::collection::vec(arb_modop(), 1..=2))
        .prop_map(|(m, b, o)| build_modular(m, &b, &o, Limits::default()).unwrap()))
    {
        let Universe::Integers { modulus: Some(m) } = inst.universe() else { unreachable!() };
        let universe: Vec<Value> = (0..*m as i64).map(|x| Value::int(x, *m)).collect();
        let sat: BTreeSet<Value> = saturate(&inst, Mode::SemiNaive).unwrap().elements().cloned().collect();
        prop_assert_eq!(&brute_minimal_closed(&inst, &universe).unwrap(), &sat);
        prop_assert_eq!(&brute_intersection_closed(&inst, &universe).unwrap(), &sat);
    }
}

/// Starts from a random base element and repeatedly appends a random
/// defined operation image of earlier entries.
pub fn random_derivation(inst: &Instance, rng: &mut StdRng, steps: usize) -> Vec<Value> {
    let mut seq = vec![inst.base()[rng.gen_range(0..inst.base().len())].clone()];
    for _ in 0..steps {
        if rng.gen_bool(0.2) {
            seq.push(inst.base()[rng.gen_range(0..inst.base().len())].clone());
            continue;
        }
        let op = &inst.ops()[rng.gen_range(0..inst.ops().len())];
        let args: Vec<Value> = (0..op.arity()).map(|_| seq[rng.gen_range(0..seq.len())].clone()).collect();
        if let Some(r) = op.apply(&args).unwrap() {
            seq.push(r);
        }
    }
    seq
}

#[test]
fn semi_naive_evaluates_each_tuple_once() {
    let calls: Arc<Mutex<HashMap<Vec<u32>, u32>>> = Arc::default();
    let log = Arc::clone(&calls);
    let add = Operation::<u32>::new("add", 2, move |a| {
        *log.lock().unwrap().entry(a.to_vec()).or_default() += 1;
        Ok(Some((a[0] + a[1]) % 37))
    });
    let inst = Instance::new((), vec![1u32, 5], vec![add], Limits::default()).unwrap();
    let r = saturate(&inst, Mode::SemiNaive).unwrap();
    assert_eq!(r.len(), 37);
    let calls = calls.lock().unwrap();
    assert!(calls.values().all(|&c| c == 1));
    assert_eq!(calls.len() as u64, r.total_evaluator_calls());
    assert!(r.total_evaluator_calls() <= 37 * 37);
}

#[test]
fn compare_is_a_strict_total_order_on_saturated_sets() {
    let sets: Vec<Vec<Value>> = vec![
        saturate(&build_cyclic_group(17, 3, Flavor::Additive).unwrap(), Mode::SemiNaive)
            .unwrap()
            .elements()
            .cloned()
            .collect(),
        saturate(&build_span(3, 2, vec![Value::vec(&[1, 2], 3), Value::vec(&[0, 1], 3)]).unwrap(), Mode::SemiNaive)
            .unwrap()
            .elements()
            .cloned()
            .collect(),
        saturate(&build_regular_sets(&['a', 'b'], 2, Limits::default().with_max_order(2)).unwrap(), Mode::SemiNaive)
            .unwrap()
            .elements()
            .take(50)
            .cloned()
            .collect(),
    ];
    for set in sets {
        assert!(set.len() <= 50);
        for x in &set {
            for y in &set {
                let xy = compare_elements(x, y).unwrap();
                assert_eq!(xy, compare_elements(y, x).unwrap().reverse());
                assert_eq!(xy.is_eq(), x == y);
                for z in &set {
                    if xy.is_lt() && compare_elements(y, z).unwrap().is_lt() {
                        assert!(compare_elements(x, z).unwrap().is_lt());
                    }
                }
            }
        }
    }
}

#[test]
fn evaluation_is_deterministic() {
    let inst = build_regular_sets(&['a', 'b'], 2, Limits::default().with_max_order(2)).unwrap();
    let r = saturate(&inst, Mode::SemiNaive).unwrap();
    let pool: Vec<Value> = r.elements().cloned().collect();
    for op in inst.ops() {
        for t in tuples(&pool[..6], op.arity()) {
            assert_eq!(op.apply(&t).unwrap(), op.apply(&t).unwrap());
        }
    }
    let again = saturate(&inst, Mode::SemiNaive).unwrap();
    assert_eq!(r.strata(), again.strata());
    assert_eq!(r.witnesses(), again.witnesses());
}

#[test]
fn cyclic_group_sizes() {
    for m in 2u64..=20 {
        for g in 0..m as i64 {
            let r = saturate(&build_cyclic_group(m, g, Flavor::Additive).unwrap(), Mode::SemiNaive).unwrap();
            assert_eq!(r.len() as u64, m / num_gcd(g as u64, m), "m={m} g={g}");
        }
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if a == 0 {
        b
    } else {
        num_gcd(b % a, a)
    }
}

#[test]
fn spans_match_coefficient_enumeration() {
    for m in 2u64..=6 {
        for d in 1usize..=2 {
            let all = Universe::Vectors { modulus: m, dimension: d }.enumerate(64).unwrap();
            for (i, g1) in all.iter().enumerate() {
                for g2 in all[i..].iter().step_by(3) {
                    for gens in [vec![g1.clone()], vec![g1.clone(), g2.clone()]] {
                        let sat: BTreeSet<Value> = saturate(&build_span(m, d, gens.clone()).unwrap(), Mode::SemiNaive)
                            .unwrap()
                            .elements()
                            .cloned()
                            .collect();
                        assert_eq!(sat, span_combinations(m, d, &gens).unwrap(), "m={m} d={d} gens={gens:?}");
                    }
                }
            }
        }
    }
}

/// Every string over `alphabet` of length at most `max_len`.
fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|s| alphabet.iter().map(move |c| format!("{s}{c}"))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// `w ∈ P*`: some split of `w` into non-empty pieces from `p`.
fn in_star(w: &str, p: &BTreeSet<String>) -> bool {
    let n = w.len();
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for i in 1..=n {
        ok[i] = (0..i).any(|j| ok[j] && p.contains(&w[j..i]));
    }
    ok[n]
}

#[test]
fn truncation_homomorphism_on_small_languages() {
    for alphabet in [vec!['a'], vec!['a', 'b']] {
        let big = 4;
        let inst = build_regular_sets(&alphabet, big, Limits::default().with_max_order(2)).unwrap();
        let langs: Vec<Lang> = saturate(&inst, Mode::SemiNaive)
            .unwrap()
            .elements()
            .map(|v| match v {
                Value::Lang(l) => l.clone(),
                _ => unreachable!(),
            })
            .collect();
        for max_len in 0..=3 {
            let words = all_strings(&alphabet, max_len);
            for p in &langs {
                let ps: BTreeSet<String> = p.strings().iter().cloned().collect();
                let star: Vec<String> = words.iter().filter(|w| in_star(w, &ps)).cloned().collect();
                assert_eq!(trunc_star(&truncate(p, max_len), max_len), Lang::truncated(star, max_len));
                for q in &langs {
                    let union: Vec<String> = p.strings().iter().chain(q.strings()).cloned().collect();
                    assert_eq!(
                        trunc_union(&truncate(p, max_len), &truncate(q, max_len), max_len),
                        Lang::truncated(union, max_len)
                    );
                    let full: Vec<String> =
                        p.strings().iter().flat_map(|x| q.strings().iter().map(move |y| format!("{x}{y}"))).collect();
                    assert_eq!(
                        trunc_concat(&truncate(p, max_len), &truncate(q, max_len), max_len),
                        Lang::truncated(full, max_len)
                    );
                }
            }
        }
    }
}
