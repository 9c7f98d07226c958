//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ka_conformance::checker::{check_ka, CheckMode};
use ka_conformance::fault::{
    bound_states, enumerate_complete_machines, enumeration_count, member, sample_mutant, FaultDomain, SamplerConfig,
};
use ka_conformance::fixtures;
use ka_conformance::generators::{generate, GenConfig, Method};
use ka_conformance::mealy::{equivalent, passes};
use ka_conformance::obs::basis_from_cover;
use ka_conformance::random::{random_spec, random_spec_in};
use ka_conformance::reproduce::reproduce;
use ka_conformance::{build_testing_tree, MealyMachine, StateCover, TestSuite};

use common::{naive_matrix, random_tree};

const ENUMERATION_BUDGET: u128 = 1_000_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure!(took < limit, "took {took:.2?}, limit {limit:?}");
    Ok(format!("{detail} ({took:.2?})"))
}

fn kaconf(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_kaconf"))
        .args(args)
        .output()
        .expect("kaconf runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn incompleteness(example: &str, witness: &str) -> Outcome {
    let r = reproduce(example).map_err(|e| e.to_string())?;
    if let Some(m) = r.mismatches().next() {
        return Err(format!("{}: expected {}, got {}", m.claim, m.expected, m.actual));
    }
    for claim in [
        "implementation passes",
        "implementation in U_1^A",
        "implementation is inequivalent",
    ] {
        ensure!(r.claim(claim).is_some_and(|c| c.ok), "claim `{claim}` missing");
    }
    let w = format!("`{witness}` distinguishes");
    ensure!(r.claim(&w).is_some_and(|c| c.ok), "claim `{w}` missing");
    Ok(format!("{} claims hold, `{witness}` distinguishes", r.claims.len()))
}

fn criterion1() -> Outcome {
    timed(Duration::from_secs(1), || {
        let spec = fixtures::turnstile();
        let suite = fixtures::spyh_suite();
        let tests: Vec<String> = suite.maximal().map(|w| spec.render(w)).collect();
        ensure!(
            tests == ["c c c p", "c c p p", "c p p p", "p c p c p", "p p p"],
            "suite is {tests:?}"
        );
        let imp = fixtures::turnstile_counterexample();
        ensure!(passes(&imp, &spec, &suite).unwrap().is_pass(), "M fails T");
        let cover = fixtures::cover(&spec, "c");
        let dom = FaultDomain::UkA {
            k: 1,
            cover: cover.words().cloned().collect(),
        };
        ensure!(member(&imp, &dom).unwrap(), "M not in U_1^{{ε,c}}");
        ensure!(
            equivalent(&spec, &imp).unwrap().counterexample().is_some(),
            "equivalent() found no counterexample"
        );
        let detail = incompleteness("spyh", "c p c p")?;
        ensure!(kaconf(&["reproduce", "spyh"]) == 0, "`kaconf reproduce spyh` failed");
        Ok(detail)
    })
}

fn criterion2() -> Outcome {
    let spy = timed(Duration::from_secs(1), || incompleteness("spy", "a a b"))?;
    let h = timed(Duration::from_secs(1), || incompleteness("h", "c b c"))?;
    Ok(format!("SPY: {spy}; H: {h}"))
}

fn criterion3() -> Outcome {
    let spec = fixtures::three_state_spec();
    let tree = build_testing_tree(&spec, &fixtures::stratified_suite()).unwrap();
    let matrix = tree.apartness();
    let strat = basis_from_cover(&tree, &fixtures::cover(&spec, "a\nb"), &matrix).unwrap();
    let expected: [(usize, &[usize]); 12] = [
        (2, &[0]),
        (5, &[8]),
        (9, &[0]),
        (12, &[1]),
        (3, &[1]),
        (10, &[1]),
        (6, &[0, 8]),
        (13, &[0, 8]),
        (4, &[0, 1, 8]),
        (7, &[0, 1, 8]),
        (11, &[0, 1, 8]),
        (14, &[0, 1, 8]),
    ];
    for (q, c) in expected {
        let got = strat.candidate_nodes(q);
        ensure!(got == c, "C({q}) = {got:?}, expected {c:?}");
    }
    ensure!(kaconf(&["reproduce", "fig5"]) == 0, "`kaconf reproduce fig5` failed");
    Ok("12 candidate sets match".into())
}

fn criterion4() -> Outcome {
    let spec = fixtures::three_state_spec();
    let cover = fixtures::cover(&spec, "a\nb");
    let suite = fixtures::stratified_suite();
    ensure!(check_ka(&spec, &suite, &cover, 0).unwrap().is_accepted(), "T rejected");
    let mut shorter = suite.clone();
    shorter.remove(&spec.inputs().parse_word("b b a a").unwrap());
    shorter.insert(spec.inputs().parse_word("b b a").unwrap());
    ensure!(
        check_ka(&spec, &shorter, &cover, 0).unwrap().is_accepted(),
        "bba variant rejected"
    );

    let cspec = fixtures::cotransitivity_spec();
    let ccover = fixtures::cover(&cspec, "r\nr r");
    let report = check_ka(&cspec, &fixtures::cotransitivity_suite(), &ccover, 1).unwrap();
    ensure!(!report.is_accepted(), "cotransitivity tree accepted");
    let access = |name: &str| {
        fixtures::COTRANSITIVITY_NODE_NAMES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, a)| a.to_string())
            .unwrap()
    };
    let (t6, t13) = (access("t6"), access("t13"));
    ensure!(report.has_violation(&t6, &t13), "violation (t6, t13) not reported");

    let spec_path = fixture_path("three_state_spec.fsm");
    ensure!(
        kaconf(&["check", "--k", "0", &spec_path, &fixture_path("stratified_suite.txt")]) == 0,
        "`kaconf check` did not exit 0"
    );
    ensure!(
        kaconf(&[
            "check",
            "--k",
            "1",
            &fixture_path("turnstile.fsm"),
            &fixture_path("spyh_suite.txt")
        ]) == 1,
        "`kaconf check` on SPYH did not exit 1"
    );
    ensure!(
        kaconf(&["check", "--k", "0", "missing.fsm", "x"]) == 2,
        "missing file did not exit 2"
    );
    Ok(format!(
        "accepted, accepted, rejected with ({t6}) vs ({t13}); {} violation(s)",
        report.condition1_violations.len()
    ))
}

fn criterion5() -> Outcome {
    let b = bound_states(55, 13, 2).map_err(|e| e.to_string())?;
    ensure!(b == 9309, "bound is {b}");
    Ok(format!("bound_states(55, 13, 2) = {b}"))
}

fn criterion6() -> Outcome {
    timed(Duration::from_secs(60), || {
        let mut nodes = 0;
        let mut largest = 0;
        for seed in 0..200 {
            let (_, _, tree) = random_tree(1000 + seed, 300);
            ensure!(tree.len() <= 300, "tree of {} nodes", tree.len());
            let fast = tree.apartness();
            let slow = naive_matrix(&tree);
            for q in tree.nodes() {
                for r in tree.nodes() {
                    ensure!(
                        fast.is_apart(q, r) == slow[q][r],
                        "seed {seed}: pair ({q}, {r}) differs"
                    );
                }
            }
            nodes += tree.len();
            largest = largest.max(tree.len());
        }
        Ok(format!("200 trees, {nodes} nodes in total, largest {largest}"))
    })
}

struct Instance {
    spec: MealyMachine,
    cover: StateCover,
    suite: TestSuite,
    k: usize,
}

fn generator_instances() -> Result<Vec<Instance>, String> {
    let mut out = Vec::new();
    for seed in 0..100u64 {
        let spec = random_spec_in(2..=5, 2..=3, 2, 7000 + seed);
        let cover = spec.minimal_state_cover().unwrap();
        for k in 0..=1 {
            for method in [Method::Wp, Method::Hsi] {
                let suite = generate(&spec, &GenConfig::new(method, k, cover.clone())).unwrap();
                let report = check_ka(&spec, &suite, &cover, k).unwrap();
                ensure!(
                    report.is_accepted(),
                    "seed {seed}, {method}, k = {k}: {}",
                    report.reasons.join("; ")
                );
                out.push(Instance {
                    spec: spec.clone(),
                    cover: cover.clone(),
                    suite,
                    k,
                });
            }
        }
    }
    Ok(out)
}

fn criterion7(instances: &mut Option<Vec<Instance>>) -> Outcome {
    timed(Duration::from_secs(300), || {
        let list = generator_instances()?;
        let n = list.len();
        *instances = Some(list);
        Ok(format!("{n} suites (100 specs × Wp, HSI × k ∈ {{0, 1}}) accepted"))
    })
}

fn criterion9(instances: &Option<Vec<Instance>>) -> Outcome {
    let Some(instances) = instances else {
        return Err("no accepted instances from criterion 7".into());
    };
    timed(Duration::from_secs(600), || {
        let (mut killed, mut equivalent_passing) = (0u64, 0u64);
        for (n, inst) in instances.iter().enumerate() {
            let domain = FaultDomain::UkA {
                k: inst.k,
                cover: inst.cover.words().cloned().collect(),
            };
            for s in 0..1000u64 {
                let seed = (n as u64) << 20 | s;
                let mu = sample_mutant(&inst.spec, &inst.cover, inst.k, seed, &SamplerConfig::default())
                    .map_err(|e| e.to_string())?;
                ensure!(
                    member(&mu.machine, &domain).unwrap(),
                    "instance {n}, seed {seed}: not in U_k^A"
                );
                if passes(&mu.machine, &inst.spec, &inst.suite).unwrap().is_pass() {
                    ensure!(
                        equivalent(&inst.spec, &mu.machine).unwrap().is_equivalent(),
                        "instance {n}, seed {seed}: inequivalent mutant passes"
                    );
                    equivalent_passing += 1;
                } else {
                    killed += 1;
                }
            }
        }
        Ok(format!(
            "{} instances × 1000 mutants: {killed} killed, {equivalent_passing} equivalent, 0 violations",
            instances.len()
        ))
    })
}

/// Results of the small-machine enumeration shared by criteria 8 and 10.
struct Enumerated {
    machines: u64,
    sampled: u64,
    passing: u64,
    violations8: Vec<String>,
    violations10: Vec<String>,
    notes: Vec<String>,
}

fn examine(
    m: &MealyMachine,
    spec: &MealyMachine,
    suite: &TestSuite,
    domain: &FaultDomain,
    tag: &str,
    out: &mut Enumerated,
) {
    let m = m.reachable_part();
    if passes(&m, spec, suite).unwrap().is_pass() {
        out.passing += 1;
        if !equivalent(spec, &m).unwrap().is_equivalent() && out.violations8.len() < 5 {
            out.violations8.push(format!("{tag}: inequivalent machine passes"));
        }
    }
    if !member(&m, domain).unwrap() && out.violations10.len() < 5 {
        out.violations10.push(format!("{tag}: machine outside U_k^A ∪ U^A"));
    }
}

fn enumerate_small() -> Enumerated {
    let mut out = Enumerated {
        machines: 0,
        sampled: 0,
        passing: 0,
        violations8: Vec::new(),
        violations10: Vec::new(),
        notes: Vec::new(),
    };
    for seed in 0..20u64 {
        let states = 1 + (seed % 3) as usize;
        let spec = random_spec(states, 2, 2, 500 + seed);
        let cover = spec.minimal_state_cover().unwrap();
        for k in 0..=1 {
            let suite = generate(&spec, &GenConfig::new(Method::Wp, k, cover.clone())).unwrap();
            let domain = FaultDomain::ka_union(k, &cover);
            let m = cover.len() + k;
            let tag = format!("spec {seed} ({states} states), k = {k}");
            match enumerate_complete_machines(spec.inputs(), spec.outputs(), m, ENUMERATION_BUDGET) {
                Ok(all) => {
                    for machine in all {
                        out.machines += 1;
                        examine(&machine, &spec, &suite, &domain, &tag, &mut out);
                    }
                }
                Err(_) => {
                    // Enumerate the smaller sizes completely and spend the rest
                    // of the budget on uniformly drawn m-state machines.
                    let below = enumerate_complete_machines(spec.inputs(), spec.outputs(), m - 1, ENUMERATION_BUDGET)
                        .expect("smaller sizes fit the budget");
                    let rest = ENUMERATION_BUDGET - below.count_total();
                    for machine in below {
                        out.machines += 1;
                        examine(&machine, &spec, &suite, &domain, &tag, &mut out);
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    for _ in 0..rest {
                        let table: Vec<(usize, u16)> =
                            (0..m * 2).map(|_| (rng.gen_range(0..m), rng.gen_range(0..2))).collect();
                        let machine =
                            MealyMachine::from_table(spec.inputs().clone(), spec.outputs().clone(), &table, 0);
                        out.sampled += 1;
                        examine(&machine, &spec, &suite, &domain, &tag, &mut out);
                    }
                    out.notes.push(format!(
                        "{tag}: {} machines exceed the budget, {rest} of the {m}-state ones sampled",
                        enumeration_count(2, 2, m).unwrap()
                    ));
                }
            }
        }
    }
    out
}

fn criterion8(e: &mut Option<(Enumerated, Duration)>) -> Outcome {
    let start = Instant::now();
    let result = enumerate_small();
    let took = start.elapsed();
    let (r, _) = e.insert((result, took));
    ensure!(r.violations8.is_empty(), "{}", r.violations8.join("; "));
    ensure!(took < Duration::from_secs(600), "took {took:.2?}");
    Ok(format!(
        "{} enumerated + {} sampled machines, {} pass a Wp suite, all equivalent; {} ({took:.2?})",
        r.machines,
        r.sampled,
        r.passing,
        if r.notes.is_empty() {
            "no budget cuts".to_string()
        } else {
            r.notes.join("; ")
        }
    ))
}

fn criterion10(e: &Option<(Enumerated, Duration)>) -> Outcome {
    let Some((r, _)) = e else {
        return Err("criterion 8 did not run".into());
    };
    ensure!(r.violations10.is_empty(), "{}", r.violations10.join("; "));
    Ok(format!(
        "{} machines (reachable parts) all in U_k^A ∪ U^A",
        r.machines + r.sampled
    ))
}

fn criterion11() -> Outcome {
    let spec = fixtures::one_state_spec();
    let cover = fixtures::cover(&spec, "");
    let suite = TestSuite::parse(spec.inputs(), "a b").unwrap();
    let report = check_ka(&spec, &suite, &cover, 0).unwrap();
    ensure!(!report.is_accepted(), "checker accepted {{ab}}");
    let text = report.to_string();
    ensure!(text.contains("unknown"), "report does not say unknown:\n{text}");
    ensure!(!text.contains("incomplete"), "report claims incompleteness:\n{text}");
    ensure!(
        !report.to_json().contains("incomplete"),
        "structured report claims incompleteness"
    );
    ensure!(
        report.to_json().contains("\"unknown\""),
        "structured report lacks unknown"
    );
    ensure!(report.mode == CheckMode::KA, "wrong mode");

    let domain = FaultDomain::UkA {
        k: 0,
        cover: cover.words().cloned().collect(),
    };
    let (mut members, mut passing) = (0, 0);
    for m in enumerate_complete_machines(spec.inputs(), spec.outputs(), 3, ENUMERATION_BUDGET).unwrap() {
        let m = m.reachable_part();
        if !member(&m, &domain).unwrap() {
            continue;
        }
        members += 1;
        if passes(&m, &spec, &suite).unwrap().is_pass() {
            passing += 1;
            ensure!(
                equivalent(&spec, &m).unwrap().is_equivalent(),
                "inequivalent member passes {{ab}}"
            );
        }
    }
    ensure!(members > 0 && passing > 0, "no members enumerated");
    Ok(format!(
        "rejected (unknown); {members} members of U_0^{{ε}} up to 3 states, {passing} pass, all equivalent"
    ))
}

fn main() {
    let mut instances = None;
    let mut enumerated = None;
    let mut failures = 0;
    let mut run = |n: usize, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {n:>2} {title}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL {n:>2} {title}: {why}");
            }
        }
    };
    run(1, "SPYH incompleteness", &mut criterion1);
    run(2, "SPY and H incompleteness", &mut criterion2);
    run(3, "candidate-set table", &mut criterion3);
    run(4, "checker acceptance fixtures", &mut criterion4);
    run(5, "state-count bound", &mut criterion5);
    run(6, "apartness oracle equivalence", &mut criterion6);
    run(7, "generator soundness", &mut || criterion7(&mut instances));
    run(8, "exhaustive m-completeness", &mut || criterion8(&mut enumerated));
    run(9, "mutation-kill soundness", &mut || criterion9(&instances));
    run(10, "U_m inclusion", &mut || criterion10(&enumerated));
    run(11, "sufficiency without necessity", &mut criterion11);
    if failures > 0 {
        println!("{failures} of 11 criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria pass");
}
