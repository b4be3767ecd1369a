//! Brute-force oracles written from the definitions alone, compared with the
//! closed forms and the engine's graph algorithms.

use std::collections::{BTreeMap, HashSet};

use ban_core::combinatorics::{lucas, perrin, quantity_table, unreachable_count};
use ban_core::dynamics::{attractors, build_transition_graph, Caps, UpdateMode};
use ban_core::topology::{
    CycleDescriptor, Descriptor, DoubleCycleDescriptor, DoubleSigns, Junction,
};
use ban_core::Sign;

/// Circular words of length `n`, with `bad` applied to the word read around
/// the circle twice so factors may wrap.
fn circular_count(n: usize, bad: &[&str]) -> u64 {
    (0u32..1 << n)
        .filter(|&w| {
            let s: String = (0..n)
                .map(|i| if w >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            let around = s.repeat(3);
            !bad.iter().any(|f| around.contains(f))
        })
        .count() as u64
}

#[test]
fn lucas_counts_circular_words_without_00() {
    for n in 1..=16 {
        assert_eq!(
            lucas(n as i64).unwrap(),
            circular_count(n, &["00"]).into(),
            "n = {n}"
        );
    }
}

#[test]
fn perrin_counts_circular_words_without_00_or_111() {
    for n in 1..=16 {
        assert_eq!(
            perrin(n as i64).unwrap(),
            circular_count(n, &["00", "111"]).into(),
            "n = {n}"
        );
    }
}

/// One parallel step of a double-cycle computed straight from its wiring:
/// automaton 0 reads both cycle ends, every other automaton its predecessor.
fn double_cycle_step(l: usize, r: usize, signs: DoubleSigns, junction: Junction, x: u32) -> u32 {
    let bit = |i: usize| x >> i & 1 == 1;
    let left_end = if l == 1 { 0 } else { l - 1 };
    let right_end = if r == 1 { 0 } else { l + r - 2 };
    let a = bit(left_end) ^ (signs.left() == Sign::Negative);
    let b = bit(right_end) ^ (signs.right() == Sign::Negative);
    let mut y = u32::from(junction.apply(a, b));
    for k in 1..l {
        y |= u32::from(bit(k - 1)) << k;
    }
    for k in 1..r {
        let i = l - 1 + k;
        let pred = if k == 1 { 0 } else { i - 1 };
        y |= u32::from(bit(pred)) << i;
    }
    y
}

fn cycle_step(n: usize, sign: Sign, x: u32) -> u32 {
    let last = x >> (n - 1) & 1;
    let head = last ^ u32::from(sign == Sign::Negative);
    ((x << 1) | head) & ((1 << n) - 1)
}

/// Attractor count by minimal period, found by iterating every start.
fn periods(n: usize, step: impl Fn(u32) -> u32) -> BTreeMap<u64, u64> {
    let mut seen_cycle = HashSet::new();
    let mut by_period = BTreeMap::new();
    for x0 in 0u32..1 << n {
        let mut x = x0;
        for _ in 0..=1 << n {
            x = step(x);
        }
        // x now lies on its attractor
        let mut members = vec![x];
        let mut y = step(x);
        while y != x {
            members.push(y);
            y = step(y);
        }
        let least = *members.iter().min().unwrap();
        if seen_cycle.insert(least) {
            *by_period.entry(members.len() as u64).or_insert(0) += 1;
        }
    }
    by_period
}

fn closed_form_periods(desc: &Descriptor) -> BTreeMap<u64, u64> {
    let table = quantity_table(desc).unwrap();
    table
        .rows
        .iter()
        .filter(|r| r.a != 0u32.into())
        .map(|r| (r.p, r.a.to_string().parse().unwrap()))
        .collect()
}

#[test]
fn cycle_tables_match_direct_iteration() {
    for n in 1..=10 {
        for sign in [Sign::Positive, Sign::Negative] {
            let desc = Descriptor::Cycle(CycleDescriptor::new(n, sign).unwrap());
            assert_eq!(
                closed_form_periods(&desc),
                periods(n, |x| cycle_step(n, sign, x)),
                "{desc}"
            );
        }
    }
}

#[test]
fn double_cycle_tables_match_direct_iteration() {
    for l in 1..=6 {
        for r in 1..=6 {
            for signs in [DoubleSigns::Positive, DoubleSigns::Negative] {
                let d = DoubleCycleDescriptor::new(l, r, signs, Junction::And).unwrap();
                let desc = Descriptor::DoubleCycle(d);
                let direct = periods(d.n(), |x| double_cycle_step(l, r, signs, Junction::And, x));
                assert_eq!(closed_form_periods(&desc), direct, "{desc}");
            }
        }
    }
}

#[test]
fn engine_parallel_graph_matches_direct_wiring() {
    for (l, r) in [(1, 1), (2, 3), (3, 3), (4, 2), (1, 5)] {
        for signs in DoubleSigns::ALL {
            for junction in [Junction::And, Junction::Or] {
                let d = DoubleCycleDescriptor::new(l, r, signs, junction).unwrap();
                let net = Descriptor::DoubleCycle(d).network();
                let tg =
                    build_transition_graph(&net, &UpdateMode::Parallel, Caps::default()).unwrap();
                for x in 0..1u32 << d.n() {
                    assert_eq!(
                        tg.successor(x),
                        Some(double_cycle_step(l, r, signs, junction, x)),
                        "{d:?} at {x}"
                    );
                }
            }
        }
    }
}

/// Recurring configurations of the asynchronous graph by plain reachability:
/// `x` is recurring iff everything reachable from `x` reaches `x` back.
fn async_recurring(n: usize, l: usize, r: usize, signs: DoubleSigns) -> u64 {
    let size = 1usize << n;
    let succ: Vec<Vec<u32>> = (0..size as u32)
        .map(|x| {
            let fx = double_cycle_step(l, r, signs, Junction::And, x);
            (0..n)
                .filter(|&i| (fx ^ x) >> i & 1 == 1)
                .map(|i| x ^ (1 << i))
                .collect()
        })
        .collect();
    let reach = |from: u32| {
        let mut seen = vec![false; size];
        let mut stack = vec![from];
        seen[from as usize] = true;
        while let Some(v) = stack.pop() {
            for &w in &succ[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let all: Vec<Vec<bool>> = (0..size as u32).map(reach).collect();
    (0..size)
        .filter(|&x| (0..size).all(|y| !all[x][y] || all[y][x]))
        .count() as u64
}

#[test]
fn negative_async_recurring_sets_match_reachability() {
    for l in 1..=5 {
        for r in 1..=5 {
            if l + r - 1 > 8 {
                continue;
            }
            let n = l + r - 1;
            let unreachable: u64 = unreachable_count(l as u64, r as u64)
                .unwrap()
                .to_string()
                .parse()
                .unwrap();
            let oracle = async_recurring(n, l, r, DoubleSigns::Negative);
            assert_eq!(oracle, (1 << n) - unreachable, "D--:{l},{r}");
            let d = DoubleCycleDescriptor::new(l, r, DoubleSigns::Negative, Junction::And).unwrap();
            let tg = build_transition_graph(
                &Descriptor::DoubleCycle(d).network(),
                &UpdateMode::Asynchronous,
                Caps::default(),
            )
            .unwrap();
            assert_eq!(
                attractors(&tg).recurring_count() as u64,
                oracle,
                "D--:{l},{r}"
            );
        }
    }
}
