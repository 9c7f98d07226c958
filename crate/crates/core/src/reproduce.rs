//! End-to-end runs of the worked examples shipped in [`crate::fixtures`],
//! each as a list of checked claims.

use std::fmt;

use serde::Serialize;

use crate::checker::{check_ka, check_m, prune_suite, CheckMode};
use crate::error::{Error, Result};
use crate::fault::{bound_states, member, search_counterexample, FaultDomain};
use crate::fixtures;
use crate::mealy::{equivalent, passes, MealyMachine, StateCover};
use crate::obs::{basis_from_cover, build_testing_tree, strata_completeness, NodeId, ObservationTree};
use crate::suite::TestSuite;
use crate::word::Word;

/// Example names accepted by [`reproduce`].
pub const EXAMPLES: [&str; 7] = [
    "spyh",
    "spy",
    "h",
    "chain-cover",
    "stratification",
    "cotransitivity",
    "tcp-bound",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reproduction {
    pub example: String,
    pub summary: String,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

impl Reproduction {
    fn new(example: &str, summary: &str) -> Self {
        Reproduction {
            example: example.into(),
            summary: summary.into(),
            claims: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, claim: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        self.claims.push(Claim {
            claim: claim.into(),
            ok: expected == actual,
            expected,
            actual,
        });
    }

    fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn all_ok(&self) -> bool {
        self.claims.iter().all(|c| c.ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.ok)
    }

    pub fn claim(&self, prefix: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.claim.starts_with(prefix))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reproduction serializes")
    }
}

impl fmt::Display for Reproduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {}: {}", self.example, self.summary)?;
        for c in &self.claims {
            if c.ok {
                writeln!(f, "[ok]       {}: {}", c.claim, c.actual)?;
            } else {
                writeln!(f, "[MISMATCH] {}: expected {}, got {}", c.claim, c.expected, c.actual)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        let bad = self.mismatches().count();
        if bad == 0 {
            writeln!(f, "all {} claims hold", self.claims.len())
        } else {
            writeln!(f, "{bad} of {} claims do not hold", self.claims.len())
        }
    }
}

pub fn reproduce(example: &str) -> Result<Reproduction> {
    match example {
        "spyh" => spyh(),
        "spy" => spy(),
        "h" => h(),
        "chain-cover" | "fig4" => chain_cover(),
        "stratification" | "fig5" => stratification(),
        "cotransitivity" | "appendixA" => cotransitivity(),
        "tcp-bound" => Ok(tcp_bound()),
        other => Err(Error::UnknownExample(other.into())),
    }
}

fn distinguishes(a: &MealyMachine, b: &MealyMachine, w: &Word) -> bool {
    a.output_names(w) != b.output_names(w)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "accepted"
    } else {
        "rejected"
    }
}

/// Shared shape of the three incompleteness examples.
fn incompleteness(
    r: &mut Reproduction,
    spec: &MealyMachine,
    implementation: &MealyMachine,
    suite: &TestSuite,
    cover: &StateCover,
    witness: &str,
) -> Result<()> {
    let words: Vec<Word> = cover.words().cloned().collect();
    let rendered: Vec<String> = words.iter().map(|w| spec.render(w)).collect();
    r.expect(
        "implementation passes the suite",
        true,
        passes(implementation, spec, suite)?.is_pass(),
    );
    let dom = FaultDomain::UkA { k: 1, cover: words };
    r.expect(
        format!("implementation in U_1^A for A = {{{}}}", rendered.join(", ")),
        true,
        member(implementation, &dom)?,
    );
    let eq = equivalent(spec, implementation)?;
    r.expect("implementation is inequivalent", true, !eq.is_equivalent());
    if let Some(w) = eq.counterexample() {
        r.note(format!("shortest distinguishing word: {}", spec.render(w)));
    }
    let w = spec.inputs().parse_word(witness)?;
    r.expect(
        format!("`{witness}` distinguishes them"),
        true,
        distinguishes(spec, implementation, &w),
    );
    let report = check_ka(spec, suite, cover, 1)?;
    r.expect("checker verdict for k = 1", "rejected", verdict(report.is_accepted()));
    let found = search_counterexample(spec, suite, &dom, 200_000, 0)?;
    r.expect("seeded search finds a counterexample in U_1^A", true, found.is_some());
    if let Some(c) = found {
        r.note(format!(
            "search hit: {} states, seed {}, distinguishing word {}",
            c.mutant.machine.num_states(),
            c.mutant.seed,
            spec.render(&c.distinguishing)
        ));
    }
    Ok(())
}

fn spyh() -> Result<Reproduction> {
    let mut r = Reproduction::new(
        "spyh",
        "a 3-complete SPYH suite for the turnstile misses a 5-state implementation in U_1^A",
    );
    let spec = fixtures::turnstile();
    let suite = fixtures::spyh_suite();
    r.expect(
        "suite",
        "c c c p, c c p p, c p p p, p c p c p, p p p",
        suite.maximal().map(|w| spec.render(w)).collect::<Vec<_>>().join(", "),
    );
    let cover = fixtures::cover(&spec, "c");
    incompleteness(
        &mut r,
        &spec,
        &fixtures::turnstile_counterexample(),
        &suite,
        &cover,
        "c p c p",
    )?;
    Ok(r)
}

fn spy() -> Result<Reproduction> {
    let mut r = Reproduction::new("spy", "a 3-complete SPY suite is not 1-A-complete");
    let spec = fixtures::spy_spec();
    let cover = fixtures::cover(&spec, "a");
    incompleteness(
        &mut r,
        &spec,
        &fixtures::spy_impl(),
        &fixtures::spy_suite(),
        &cover,
        "a a b",
    )?;
    Ok(r)
}

fn h() -> Result<Reproduction> {
    let mut r = Reproduction::new("h", "a 3-complete H suite is not 1-A-complete");
    let spec = fixtures::h_spec();
    let suite = fixtures::h_suite();
    let cover = fixtures::cover(&spec, "a");
    incompleteness(&mut r, &spec, &fixtures::h_impl(), &suite, &cover, "c b c")?;
    let m = check_m(&spec, &suite, &cover, 1)?;
    r.expect("m-completeness check for k = 1", "accepted", verdict(m.is_accepted()));
    let ka = check_ka(&spec, &suite, &cover, 1)?;
    r.expect(
        "frontier pair condition fails for `c b` and `a c`",
        true,
        ka.has_violation("c b", "a c"),
    );
    Ok(r)
}

fn chain_cover() -> Result<Reproduction> {
    let mut r = Reproduction::new(
        "chain-cover",
        "a suite that is 0-B-complete for one state cover is not 0-A-complete for another",
    );
    let spec = fixtures::chain_spec();
    let imp = fixtures::chain_impl();
    let a = fixtures::cover(&spec, "a\na a");
    let b = fixtures::cover(&spec, "b\nb b");
    r.expect("{ε, a, a a} is a minimal state cover", true, a.is_minimal_for(&spec));
    r.expect("{ε, b, b b} is a minimal state cover", true, b.is_minimal_for(&spec));
    for w in ["a a a", "b b b"] {
        let word = spec.inputs().parse_word(w)?;
        let outs: Vec<Vec<String>> = spec
            .states()
            .map(|q| {
                let (_, o) = spec.run(q, &word).unwrap();
                o.iter().map(|o| spec.outputs().name(o.0).to_string()).collect()
            })
            .collect();
        let distinct = outs.iter().enumerate().all(|(n, x)| !outs[..n].contains(x));
        r.expect(format!("`{w}` is a distinguishing sequence"), true, distinct);
    }
    let a_words: Vec<Word> = a.words().cloned().collect();
    let u0 = FaultDomain::UkA {
        k: 0,
        cover: a_words.clone(),
    };
    r.expect("spec in U_3", true, member(&spec, &FaultDomain::Um(3))?);
    r.expect("spec in U_0^A", true, member(&spec, &u0)?);
    r.expect("implementation in U_3", false, member(&imp, &FaultDomain::Um(3))?);
    r.expect("implementation in U_0^A", false, member(&imp, &u0)?);
    r.expect(
        "implementation in U^A",
        true,
        member(&imp, &FaultDomain::UA { cover: a_words })?,
    );
    r.expect(
        "`a` and `a a` reach the same implementation state",
        true,
        imp.reach(imp.initial(), &spec.inputs().parse_word("a")?)
            == imp.reach(imp.initial(), &spec.inputs().parse_word("a a")?),
    );

    let mut suite = TestSuite::new();
    for p in ["", "b", "b b"] {
        for mid in ["", "a", "b"] {
            suite.insert(spec.inputs().parse_word(&format!("{p} {mid} b b b"))?);
        }
    }
    r.expect(
        "suite B·{bbb} ∪ B·{a,b}·{bbb} is accepted for B, k = 0",
        "accepted",
        verdict(check_ka(&spec, &suite, &b, 0)?.is_accepted()),
    );
    r.expect(
        "implementation passes the suite",
        true,
        passes(&imp, &spec, &suite)?.is_pass(),
    );
    r.expect(
        "implementation is inequivalent",
        true,
        !equivalent(&spec, &imp)?.is_equivalent(),
    );
    r.expect(
        "checker verdict for A, k = 0",
        "rejected",
        verdict(check_ka(&spec, &suite, &a, 0)?.is_accepted()),
    );
    Ok(r)
}

fn set(nodes: &[NodeId]) -> String {
    let parts: Vec<String> = nodes.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn stratification() -> Result<Reproduction> {
    let mut r = Reproduction::new(
        "stratification",
        "basis, frontiers and candidate sets of a 15-node testing tree",
    );
    let spec = fixtures::three_state_spec();
    let suite = fixtures::stratified_suite();
    let cover = fixtures::cover(&spec, "a\nb");
    let tree = build_testing_tree(&spec, &suite)?;
    let matrix = tree.apartness();
    let strat = basis_from_cover(&tree, &cover, &matrix)?;
    r.expect("tree nodes", 15, tree.len());
    r.expect("basis", "{0,1,8}", set(strat.basis()));
    let aa = spec.inputs().parse_word("a a")?;
    let separates = |x: NodeId, y: NodeId| {
        let end = |q: NodeId| {
            tree.node_of(&tree.access(q).concat(&aa))
                .map(|n| (tree.output(tree.parent(n).unwrap()), tree.output(n)))
        };
        matches!((end(x), end(y)), (Some(p), Some(q)) if p != q)
    };
    r.expect(
        "`a a` separates every pair of basis states",
        true,
        separates(0, 1) && separates(0, 8) && separates(1, 8),
    );
    for (j, expected) in ["{2,5,9,12}", "{3,6,10,13}", "{4,7,11,14}"].iter().enumerate() {
        r.expect(format!("F^{j}"), expected, set(strat.stratum(j)));
    }
    let expected: [(NodeId, &str); 12] = [
        (2, "{0}"),
        (5, "{8}"),
        (9, "{0}"),
        (12, "{1}"),
        (3, "{1}"),
        (10, "{1}"),
        (6, "{0,8}"),
        (13, "{0,8}"),
        (4, "{0,1,8}"),
        (7, "{0,1,8}"),
        (11, "{0,1,8}"),
        (14, "{0,1,8}"),
    ];
    for (q, c) in expected {
        r.expect(format!("C({q})"), c, set(&strat.candidate_nodes(q)));
    }
    let sc = strata_completeness(&tree, &strat, 3);
    r.expect("B complete", true, sc.basis_complete());
    for j in 0..3 {
        r.expect(format!("F^{j} complete"), false, sc.frontier_complete(j));
    }
    r.expect(
        "checker verdict for k = 0",
        "accepted",
        verdict(check_ka(&spec, &suite, &cover, 0)?.is_accepted()),
    );
    let mut shorter = suite.clone();
    shorter.remove(&spec.inputs().parse_word("b b a a")?);
    shorter.insert(spec.inputs().parse_word("b b a")?);
    r.expect(
        "verdict with `b b a a` cut to `b b a`",
        "accepted",
        verdict(check_ka(&spec, &shorter, &cover, 0)?.is_accepted()),
    );
    let pruned = prune_suite(&spec, &suite, &cover, 0, CheckMode::KA)?;
    r.expect(
        "greedy pruning",
        "a a a a, a b a a, b a a a, b b a",
        pruned.maximal().map(|w| spec.render(w)).collect::<Vec<_>>().join(", "),
    );
    Ok(r)
}

fn named(tree: &ObservationTree, spec: &MealyMachine, name: &str) -> Result<NodeId> {
    let access = fixtures::COTRANSITIVITY_NODE_NAMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, w)| *w)
        .ok_or_else(|| Error::UnknownState(name.into()))?;
    tree.node_of(&spec.inputs().parse_word(access)?)
        .ok_or_else(|| Error::CoverWordNotInTree(access.into()))
}

fn cotransitivity() -> Result<Reproduction> {
    let mut r = Reproduction::new(
        "cotransitivity",
        "identified frontiers without the frontier pair condition do not guarantee completeness",
    );
    let spec = fixtures::cotransitivity_spec();
    let imp = fixtures::cotransitivity_impl();
    let suite = fixtures::cotransitivity_suite();
    let cover = fixtures::cover(&spec, "r\nr r");
    let tree = build_testing_tree(&spec, &suite)?;
    let matrix = tree.apartness();
    let strat = basis_from_cover(&tree, &cover, &matrix)?;
    let t = |n: &str| named(&tree, &spec, n);
    let name_of = |q: NodeId| {
        let w = tree.access_string(q);
        fixtures::COTRANSITIVITY_NODE_NAMES
            .iter()
            .find(|(_, a)| *a == w)
            .map_or(w.clone(), |(n, _)| n.to_string())
    };
    let names = |qs: Vec<NodeId>| format!("{{{}}}", qs.into_iter().map(name_of).collect::<Vec<_>>().join(","));
    r.expect("tree nodes", 31, tree.len());
    r.expect("basis", "{t0,t1,t2}", names(strat.basis().to_vec()));
    let sc = strata_completeness(&tree, &strat, 1);
    r.expect("B and F^0 complete", true, sc.is_complete());
    let identified = strat
        .basis()
        .iter()
        .copied()
        .chain(strat.below(2))
        .all(|q| strat.is_identified(q));
    r.expect("all of B ∪ F^{≤1} identified", true, identified);
    r.expect("C(t6)", "{t0}", names(strat.candidate_nodes(t("t6")?)));
    r.expect("C(t13)", "{t2}", names(strat.candidate_nodes(t("t13")?)));
    r.expect("t13 apart from t6", false, matrix.is_apart(t("t13")?, t("t6")?));
    let report = check_ka(&spec, &suite, &cover, 1)?;
    r.expect("checker verdict for k = 1", "rejected", verdict(report.is_accepted()));
    let pairs: Vec<String> = report
        .condition1_violations
        .iter()
        .map(|v| format!("({},{})", name_of(v.q.node), name_of(v.r.node)))
        .collect();
    r.expect("frontier pair violations", "(t13,t6)", pairs.join(" "));
    r.expect(
        "implementation passes the suite",
        true,
        passes(&imp, &spec, &suite)?.is_pass(),
    );
    let w = spec.inputs().parse_word("r r r l l l")?;
    r.expect("`r r r l l l` distinguishes", true, distinguishes(&spec, &imp, &w));
    r.expect(
        "implementation in U_1^A ∪ U^A",
        true,
        member(&imp, &FaultDomain::ka_union(1, &cover))?,
    );
    Ok(r)
}

fn tcp_bound() -> Reproduction {
    let mut r = Reproduction::new(
        "tcp-bound",
        "U_2^A for 55 cover states and 13 inputs admits machines this large",
    );
    let b = bound_states(55, 13, 2).map_or_else(|e| e.to_string(), |b| b.to_string());
    r.expect("bound_states(55, 13, 2)", 9309, b);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_reproduces() {
        for name in EXAMPLES {
            let r = reproduce(name).unwrap();
            assert!(r.all_ok(), "{r}");
        }
        assert_eq!(reproduce("fig5").unwrap().example, "stratification");
        assert!(matches!(reproduce("nope"), Err(Error::UnknownExample(_))));
    }
}
