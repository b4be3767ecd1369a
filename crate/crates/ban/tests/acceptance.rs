//! Acceptance run: one PASS/FAIL line per criterion, each with its time limit.
//! All comparisons are exact; a criterion over its time limit fails.

use std::time::{Duration, Instant};

use ban::formats::NetworkSpec;
use ban::parallel::build_transition_graph_par;
use ban_core::combinatorics::{
    bounds_excluded, check_bounds, compare_x, lucas, order_of, perrin, quantity_table,
    unreachable_count, PeriodCensus,
};
use ban_core::dynamics::random::{random_acyclic_network, random_network, rng_from_seed};
use ban_core::dynamics::{
    attractors, check_feedback_necessity, check_robert, terminal_sccs, BlockPartition, Caps,
    UpdateMode,
};
use ban_core::topology::{
    check_and_or_duality, CycleDescriptor, Descriptor, DoubleCycleDescriptor, DoubleSigns, Junction,
};
use ban_core::vm::verify_sequence_theorems;
use ban_core::{Configuration, Sign};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

const SEED: u64 = 0x5eed;
const RANDOM_NETWORKS: usize = 200;

fn caps() -> Caps {
    Caps::uniform(16)
}

fn cfg(s: &str) -> Configuration {
    s.parse().expect("literal configuration")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_fixture() -> Outcome {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/fig1.json"))
        .map_err(|e| e.to_string())?;
    let net = NetworkSpec::parse(&text)
        .and_then(|s| s.network())
        .map_err(|e| e.to_string())?;
    let asy = attractors(
        &build_transition_graph_par(&net, &UpdateMode::Asynchronous, caps())
            .map_err(|e| e.to_string())?,
    );
    let fixed: Vec<Configuration> = asy.fixed_points().map(|a| a.least()).collect();
    let osc: Vec<usize> = asy.oscillations().map(|a| a.len()).collect();
    ensure(fixed == [cfg("011")] && osc == [4], || {
        format!("asynchronous: fixed {fixed:?}, oscillations {osc:?}")
    })?;
    let par = attractors(
        &build_transition_graph_par(&net, &UpdateMode::Parallel, caps())
            .map_err(|e| e.to_string())?,
    );
    let fixed: Vec<Configuration> = par.fixed_points().map(|a| a.least()).collect();
    let periods: Vec<Option<usize>> = par.oscillations().map(|a| a.period).collect();
    ensure(fixed == [cfg("011")] && periods == [Some(3)], || {
        format!("parallel: fixed {fixed:?}, periods {periods:?}")
    })?;
    Ok("asynchronous {011} + length 4, parallel {011} + period 3".into())
}

fn c2_async_cycles() -> Outcome {
    for n in 1..=12 {
        for sign in [Sign::Positive, Sign::Negative] {
            let desc = Descriptor::Cycle(CycleDescriptor::new(n, sign).map_err(|e| e.to_string())?);
            let tg = build_transition_graph_par(&desc.network(), &UpdateMode::Asynchronous, caps())
                .map_err(|e| e.to_string())?;
            let rep = attractors(&tg);
            let ok = match sign {
                Sign::Positive => {
                    let fixed: Vec<Configuration> = rep.fixed_points().map(|a| a.least()).collect();
                    rep.attractors.len() == 2
                        && fixed
                            == [
                                Configuration::zeros(n).unwrap(),
                                Configuration::ones(n).unwrap(),
                            ]
                }
                Sign::Negative => rep.attractors.len() == 1 && rep.attractors[0].len() == 2 * n,
            };
            ensure(ok, || {
                format!("{desc}: {} attractors", rep.attractors.len())
            })?;
        }
    }
    Ok("24 cycles".into())
}

fn census(desc: &Descriptor) -> Result<PeriodCensus, String> {
    let tg = build_transition_graph_par(&desc.network(), &UpdateMode::Parallel, caps())
        .map_err(|e| e.to_string())?;
    Ok(PeriodCensus::from_report(&attractors(&tg)))
}

fn tables_agree(desc: &Descriptor, c: &PeriodCensus) -> Result<(), String> {
    let formula = quantity_table(desc).map_err(|e| format!("{desc}: {e}"))?;
    let counted = c.table(*desc, formula.omega).map_err(|e| e.to_string())?;
    ensure(formula == counted, || {
        format!("{desc}: closed form {formula:?} vs enumeration {counted:?}")
    })
}

fn c3_parallel_cycles() -> Outcome {
    for n in 1..=14 {
        for sign in [Sign::Positive, Sign::Negative] {
            let desc = Descriptor::Cycle(CycleDescriptor::new(n, sign).unwrap());
            let c = census(&desc)?;
            tables_agree(&desc, &c)?;
            ensure(
                c.recurring == c.configurations && c.convergence_time == 0,
                || format!("{desc}: {} of {} recurring", c.recurring, c.configurations),
            )?;
        }
    }
    Ok("28 cycles".into())
}

fn double_cycles(max_n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=max_n).flat_map(move |l| (1..=max_n + 1 - l).map(move |r| (l, r)))
}

fn c4_parallel_double_cycles() -> Outcome {
    let (mut checked, mut four_branch) = (0, 0);
    let (mut mixed_match, mut mixed_flagged) = (0, 0);
    for (l, r) in double_cycles(16) {
        for signs in DoubleSigns::ALL {
            let d = DoubleCycleDescriptor::new(l, r, signs, Junction::And).unwrap();
            let desc = Descriptor::DoubleCycle(d);
            let c = census(&desc)?;
            if signs == DoubleSigns::Mixed {
                for row in compare_x(&desc, &c) {
                    if row.matches() {
                        mixed_match += 1;
                    } else {
                        mixed_flagged += 1;
                    }
                }
                continue;
            }
            tables_agree(&desc, &c)?;
            checked += 1;
            if signs == DoubleSigns::Negative
                && (l + r) / d.delta() == 4
                && (l + r) % d.delta() == 0
            {
                ensure(order_of(&desc) == ((l + r) / 2) as u64, || {
                    format!("{desc}: omega {}", order_of(&desc))
                })?;
                four_branch += 1;
            }
        }
    }
    Ok(format!(
        "{checked} tables equal ({four_branch} on the (l+r)/2 branch); mixed X rows: {mixed_match} match, {mixed_flagged} flagged known-discrepancy"
    ))
}

fn c5_bounds() -> Outcome {
    let mut descs: Vec<Descriptor> = Vec::new();
    for n in 1..=14 {
        for sign in [Sign::Positive, Sign::Negative] {
            descs.push(Descriptor::Cycle(CycleDescriptor::new(n, sign).unwrap()));
        }
    }
    for (l, r) in double_cycles(16) {
        for signs in [DoubleSigns::Positive, DoubleSigns::Negative] {
            descs.push(Descriptor::DoubleCycle(
                DoubleCycleDescriptor::new(l, r, signs, Junction::And).unwrap(),
            ));
        }
    }
    let mut excluded = Vec::new();
    for desc in &descs {
        let table = quantity_table(desc).map_err(|e| format!("{desc}: {e}"))?;
        match check_bounds(&table) {
            Err(ban_core::Error::ExcludedDescriptor(_)) => excluded.push(desc.to_string()),
            Err(e) => return Err(format!("{desc}: {e}")),
            Ok(v) => ensure(v.passed(), || format!("{desc}: {v:?}"))?,
        }
    }
    let expected: Vec<String> = descs
        .iter()
        .filter(|d| bounds_excluded(d))
        .map(|d| d.to_string())
        .collect();
    ensure(excluded == expected && excluded.len() == 2, || {
        format!("excluded {excluded:?}")
    })?;
    Ok(format!(
        "{} descriptors, excluded {}",
        descs.len() - 2,
        excluded.join(" ")
    ))
}

fn c6_sequences() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for l in 1..=5 {
        for r in 1..=5 {
            for signs in DoubleSigns::ALL {
                let rep = verify_sequence_theorems(l, r, signs, Junction::And, caps())
                    .map_err(|e| e.to_string())?;
                for c in rep.checks.iter().filter(|c| c.asserted) {
                    runs += c.runs;
                    if !c.passed() {
                        failures.push(format!(
                            "{} {} worst {} vs bound {} ({} wrong, {} illegal)",
                            rep.descriptor.label(),
                            c.name,
                            c.worst(),
                            c.bound,
                            c.wrong_final,
                            c.illegal_steps
                        ));
                    }
                }
                if let Some(cl) = rep.closure {
                    if cl.failures > 0 {
                        failures.push(format!(
                            "{} closure: {} failures",
                            rep.descriptor.label(),
                            cl.failures
                        ));
                    }
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{runs} runs"))
    } else {
        Err(format!("{runs} runs; {}", failures.join("; ")))
    }
}

fn c7_async_negative() -> Outcome {
    let mut count = 0;
    for (l, r) in double_cycles(14) {
        let d = DoubleCycleDescriptor::new(l, r, DoubleSigns::Negative, Junction::And).unwrap();
        let n = d.n();
        let tg = build_transition_graph_par(
            &Descriptor::DoubleCycle(d).network(),
            &UpdateMode::Asynchronous,
            caps(),
        )
        .map_err(|e| e.to_string())?;
        let sccs = terminal_sccs(&tg);
        let unreachable: u64 = unreachable_count(l as u64, r as u64)
            .unwrap()
            .to_string()
            .parse()
            .unwrap();
        ensure(
            sccs.len() == 1 && sccs[0].len() as u64 == (1u64 << n) - unreachable,
            || {
                format!(
                    "{}: {} terminal SCCs, sizes {:?}, |I| = {unreachable}",
                    d.label(),
                    sccs.len(),
                    sccs.iter().map(Vec::len).collect::<Vec<_>>()
                )
            },
        )?;
        if (l, r) == (1, 3) {
            ensure(unreachable == 1, || {
                format!("D--:1,3 has {unreachable} transient configurations")
            })?;
        }
        count += 1;
    }
    Ok(format!("{count} descriptors, one terminal SCC each"))
}

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

fn c8_necklaces() -> Outcome {
    for n in 1..=16usize {
        let l = lucas(n as i64).unwrap().to_string();
        let p = perrin(n as i64).unwrap().to_string();
        ensure(l == circular_count(n, &["00"]).to_string(), || {
            format!("lucas({n}) = {l}")
        })?;
        ensure(p == circular_count(n, &["00", "111"]).to_string(), || {
            format!("perrin({n}) = {p}")
        })?;
    }
    Ok("n = 1..16".into())
}

fn c9_duality() -> Outcome {
    let mut count = 0;
    for (l, r) in double_cycles(10) {
        let n = l + r - 1;
        let mut modes = vec![
            UpdateMode::Parallel,
            UpdateMode::Asynchronous,
            UpdateMode::Elementary,
            UpdateMode::BlockSequential(BlockPartition::sweep(n)),
        ];
        if n > 1 {
            let split: Vec<Vec<usize>> = vec![(n / 2..n).collect(), (0..n / 2).collect()];
            modes.push(UpdateMode::BlockSequential(
                BlockPartition::new(n, split).unwrap(),
            ));
        }
        for signs in DoubleSigns::ALL {
            for mode in &modes {
                let ok =
                    check_and_or_duality(l, r, signs, mode, caps()).map_err(|e| e.to_string())?;
                ensure(ok, || format!("D{}:{l},{r} {mode}", signs.tag()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} descriptor/mode pairs"))
}

fn c10_robert_thomas() -> Outcome {
    for i in 0..RANDOM_NETWORKS {
        let n = 1 + i % 8;
        let net = random_acyclic_network(&mut rng_from_seed(SEED + i as u64), n, 3);
        let v = check_robert(&net, caps()).map_err(|e| e.to_string())?;
        ensure(v.passed(), || format!("acyclic draw {i} (n = {n}): {v:?}"))?;
    }
    for i in 0..RANDOM_NETWORKS {
        let n = 1 + i % 6;
        let net = random_network(&mut rng_from_seed(SEED + 1000 + i as u64), n, 3);
        for mode in [UpdateMode::Parallel, UpdateMode::Asynchronous] {
            let v = check_feedback_necessity(&net, &mode, caps()).map_err(|e| e.to_string())?;
            ensure(v.passed(), || format!("draw {i} (n = {n}) {mode}: {v:?}"))?;
        }
    }
    Ok(format!(
        "{RANDOM_NETWORKS} acyclic (n <= 8), {RANDOM_NETWORKS} general (n <= 6), seed {SEED:#x}"
    ))
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            title: "fixture attractors",
            limit: secs(1),
            run: c1_fixture,
        },
        Criterion {
            id: 2,
            title: "asynchronous cycles",
            limit: secs(30),
            run: c2_async_cycles,
        },
        Criterion {
            id: 3,
            title: "parallel cycle tables",
            limit: secs(120),
            run: c3_parallel_cycles,
        },
        Criterion {
            id: 4,
            title: "parallel double-cycle tables",
            limit: secs(300),
            run: c4_parallel_double_cycles,
        },
        Criterion {
            id: 5,
            title: "attractor-count bounds",
            limit: secs(60),
            run: c5_bounds,
        },
        Criterion {
            id: 6,
            title: "sequence bounds",
            limit: secs(120),
            run: c6_sequences,
        },
        Criterion {
            id: 7,
            title: "asynchronous negative double-cycles",
            limit: secs(180),
            run: c7_async_negative,
        },
        Criterion {
            id: 8,
            title: "necklace oracles",
            limit: secs(10),
            run: c8_necklaces,
        },
        Criterion {
            id: 9,
            title: "and/or duality",
            limit: secs(60),
            run: c9_duality,
        },
        Criterion {
            id: 10,
            title: "Robert and feedback-cycle suites",
            limit: secs(120),
            run: c10_robert_thomas,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {} {} ({:.2}s, limit {}s): {}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
