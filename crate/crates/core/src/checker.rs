//! Sufficient conditions for k-A-completeness and m-completeness.
//!
//! An accepted suite is proven complete. A rejected suite may still be
//! complete; the report then says the status is unknown.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mealy::{MealyMachine, StateCover};
use crate::obs::{
    basis_from_cover, build_testing_tree, strata_completeness, ApartnessMatrix, BasisStratification, IncompleteNode,
    NodeId, ObservationTree,
};
use crate::suite::TestSuite;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CheckMode {
    /// k-A-completeness via the frontier pair condition.
    #[serde(rename = "kA")]
    KA,
    /// m-completeness for `m = n + k` via the ancestor pair condition.
    #[serde(rename = "m")]
    M,
}

impl FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kA" | "ka" | "kA-complete" => Ok(CheckMode::KA),
            "m" | "m-complete" => Ok(CheckMode::M),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown check mode `{other}` (expected kA or m)"),
            }),
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::KA => "kA",
            CheckMode::M => "m",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeRef {
    pub node: NodeId,
    pub access: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unidentified {
    pub node: NodeRef,
    pub stratum: usize,
    pub candidates: Vec<String>,
}

/// `q` and `r` have different candidate sets but are not apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub q: NodeRef,
    pub r: NodeRef,
    pub candidates_q: Vec<String>,
    pub candidates_r: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub mode: CheckMode,
    pub k: usize,
    pub verdict: Verdict,
    /// `proven` when accepted, `unknown` otherwise.
    pub completeness: String,
    pub spec_states: usize,
    pub basis_size: usize,
    pub tree_nodes: usize,
    pub cover: Vec<String>,
    pub basis_ok: bool,
    pub basis_error: Option<String>,
    pub basis_complete: bool,
    /// One entry per `F^j`, `j < k`.
    pub frontier_complete: Vec<bool>,
    pub missing_inputs: Vec<IncompleteNode>,
    pub frontier_identified: bool,
    pub unidentified: Vec<Unidentified>,
    pub condition1_violations: Vec<PairViolation>,
    pub condition3_violations: Vec<PairViolation>,
    pub reasons: Vec<String>,
}

impl CompletenessReport {
    pub fn is_accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    /// Whether `(a, b)` appears among the condition violations, in either order.
    pub fn has_violation(&self, a: &str, b: &str) -> bool {
        self.condition1_violations
            .iter()
            .chain(&self.condition3_violations)
            .any(|v| (v.q.access == a && v.r.access == b) || (v.q.access == b && v.r.access == a))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tree, apartness and (if valid) basis for a suite.
pub struct Analysis {
    pub tree: ObservationTree,
    pub matrix: ApartnessMatrix,
    pub strat: Result<BasisStratification>,
}

/// Checks preconditions and builds everything the conditions are stated on.
pub fn analyze(spec: &MealyMachine, suite: &TestSuite, cover: &StateCover) -> Result<Analysis> {
    spec.require_specification()?;
    cover.check_minimal(spec)?;
    let tree = build_testing_tree(spec, suite)?;
    let matrix = tree.apartness();
    let strat = basis_from_cover(&tree, cover, &matrix);
    Ok(Analysis { tree, matrix, strat })
}

fn node_ref(tree: &ObservationTree, q: NodeId) -> NodeRef {
    NodeRef {
        node: q,
        access: tree.access_string(q),
    }
}

fn candidate_words(tree: &ObservationTree, strat: &BasisStratification, q: NodeId) -> Vec<String> {
    strat
        .candidate_nodes(q)
        .into_iter()
        .map(|b| tree.access_string(b))
        .collect()
}

fn pair_violation(tree: &ObservationTree, strat: &BasisStratification, q: NodeId, r: NodeId) -> PairViolation {
    PairViolation {
        q: node_ref(tree, q),
        r: node_ref(tree, r),
        candidates_q: candidate_words(tree, strat, q),
        candidates_r: candidate_words(tree, strat, r),
    }
}

/// Violations of the frontier pair condition: `q ∈ F^k`, `r ∈ F^{<k}` with
/// `C(q) ≠ C(r)` and not `q # r`.
pub fn check_condition1(strat: &BasisStratification, matrix: &ApartnessMatrix, k: usize) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for &q in strat.stratum(k) {
        for r in strat.below(k) {
            if strat.candidates(q) != strat.candidates(r) && !matrix.is_apart(q, r) {
                out.push((q, r));
            }
        }
    }
    out
}

/// Violations of the co-transitivity form of the frontier pair condition:
/// `s ∈ B`, `q ∈ F^k`, `r ∈ F^{<k}` with `s # q` but neither `s # r` nor `q # r`.
pub fn check_condition2(
    strat: &BasisStratification,
    matrix: &ApartnessMatrix,
    k: usize,
) -> Vec<(NodeId, NodeId, NodeId)> {
    let mut out = Vec::new();
    for &q in strat.stratum(k) {
        for r in strat.below(k) {
            if matrix.is_apart(q, r) {
                continue;
            }
            for &s in strat.basis() {
                if matrix.is_apart(s, q) && !matrix.is_apart(s, r) {
                    out.push((s, q, r));
                }
            }
        }
    }
    out
}

/// Violations of the ancestor pair condition: ancestor `q` and descendant
/// `r`, both in `F^{≤k}`, with `C(q) ≠ C(r)` and not `q # r`.
pub fn check_condition3(
    tree: &ObservationTree,
    strat: &BasisStratification,
    matrix: &ApartnessMatrix,
    k: usize,
) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for j in 1..=k {
        for &r in strat.stratum(j) {
            // non-basis ancestors of a node in F^j are in F^{j-1}, ..., F^0
            let mut q = tree.parent(r).unwrap();
            while !strat.is_basis(q) {
                if strat.candidates(q) != strat.candidates(r) && !matrix.is_apart(q, r) {
                    out.push((q, r));
                }
                q = tree.parent(q).unwrap();
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn check_ka(spec: &MealyMachine, suite: &TestSuite, cover: &StateCover, k: usize) -> Result<CompletenessReport> {
    check(spec, suite, cover, k, CheckMode::KA)
}

pub fn check_m(spec: &MealyMachine, suite: &TestSuite, cover: &StateCover, k: usize) -> Result<CompletenessReport> {
    check(spec, suite, cover, k, CheckMode::M)
}

pub fn check(
    spec: &MealyMachine,
    suite: &TestSuite,
    cover: &StateCover,
    k: usize,
    mode: CheckMode,
) -> Result<CompletenessReport> {
    let a = analyze(spec, suite, cover)?;
    Ok(report(spec, cover, k, mode, &a))
}

/// Evaluates the conditions on an existing analysis.
pub fn report(spec: &MealyMachine, cover: &StateCover, k: usize, mode: CheckMode, a: &Analysis) -> CompletenessReport {
    let tree = &a.tree;
    let mut r = CompletenessReport {
        mode,
        k,
        verdict: Verdict::Rejected,
        completeness: "unknown".into(),
        spec_states: spec.num_states(),
        basis_size: 0,
        tree_nodes: tree.len(),
        cover: cover.words().map(|w| spec.render(w)).collect(),
        basis_ok: false,
        basis_error: None,
        basis_complete: false,
        frontier_complete: vec![false; k],
        missing_inputs: Vec::new(),
        frontier_identified: false,
        unidentified: Vec::new(),
        condition1_violations: Vec::new(),
        condition3_violations: Vec::new(),
        reasons: Vec::new(),
    };
    let strat = match &a.strat {
        Ok(s) => s,
        Err(e) => {
            r.basis_error = Some(e.to_string());
            r.reasons.push(format!("no valid basis: {e}"));
            return r;
        }
    };
    r.basis_size = strat.basis().len();
    r.basis_ok = r.basis_size == spec.num_states();
    if !r.basis_ok {
        r.reasons.push(format!(
            "basis has {} states, specification has {}",
            r.basis_size,
            spec.num_states()
        ));
    }

    let sc = strata_completeness(tree, strat, k);
    r.basis_complete = sc.basis_complete();
    r.frontier_complete = (0..k).map(|j| sc.frontier_complete(j)).collect();
    if !r.basis_complete {
        r.reasons.push("basis B has nodes with undefined inputs".into());
    }
    for (j, ok) in r.frontier_complete.iter().enumerate() {
        if !ok {
            r.reasons
                .push(format!("frontier F^{j} has nodes with undefined inputs"));
        }
    }
    r.missing_inputs = sc.basis.into_iter().chain(sc.frontiers.into_iter().flatten()).collect();

    let levels = match mode {
        CheckMode::KA => k..=k,
        CheckMode::M => 0..=k,
    };
    for j in levels {
        for &q in strat.stratum(j) {
            if !strat.is_identified(q) {
                r.unidentified.push(Unidentified {
                    node: node_ref(tree, q),
                    stratum: j,
                    candidates: candidate_words(tree, strat, q),
                });
            }
        }
    }
    r.frontier_identified = r.unidentified.is_empty();
    if !r.frontier_identified {
        r.reasons
            .push(format!("{} frontier node(s) are not identified", r.unidentified.len()));
    }

    match mode {
        CheckMode::KA => {
            r.condition1_violations = check_condition1(strat, &a.matrix, k)
                .into_iter()
                .map(|(q, x)| pair_violation(tree, strat, q, x))
                .collect();
            if !r.condition1_violations.is_empty() {
                r.reasons.push(format!(
                    "frontier pair condition fails for {} pair(s)",
                    r.condition1_violations.len()
                ));
            }
        }
        CheckMode::M => {
            r.condition3_violations = check_condition3(tree, strat, &a.matrix, k)
                .into_iter()
                .map(|(q, x)| pair_violation(tree, strat, q, x))
                .collect();
            if !r.condition3_violations.is_empty() {
                r.reasons.push(format!(
                    "ancestor pair condition fails for {} pair(s)",
                    r.condition3_violations.len()
                ));
            }
        }
    }

    if r.reasons.is_empty() {
        r.verdict = Verdict::Accepted;
        r.completeness = "proven".into();
    }
    r
}

/// Greedily removes or shortens maximal tests, latest first, while the
/// checker keeps accepting. Repeats until no single test can be removed or
/// shortened by one input.
pub fn prune_suite(
    spec: &MealyMachine,
    suite: &TestSuite,
    cover: &StateCover,
    k: usize,
    mode: CheckMode,
) -> Result<TestSuite> {
    let accepts = |s: &TestSuite| -> Result<bool> { Ok(check(spec, s, cover, k, mode)?.is_accepted()) };
    let mut current = suite.normalized();
    if !accepts(&current)? {
        return Err(Error::InitialSuiteRejected);
    }
    loop {
        let mut changed = false;
        let mut tests: Vec<Word> = current.maximal().cloned().collect();
        tests.reverse();
        for test in tests {
            let mut without = current.clone();
            without.remove(&test);
            if accepts(&without)? {
                current = without;
                changed = true;
                continue;
            }
            let mut w = test;
            while w.len() > 1 {
                let shorter: Word = w[..w.len() - 1].to_vec().into();
                let mut candidate = current.clone();
                candidate.remove(&w);
                candidate.insert(shorter.clone());
                let candidate = candidate.normalized();
                if candidate.len() == current.len() && accepts(&candidate)? {
                    current = candidate;
                    changed = true;
                    w = shorter;
                } else {
                    break;
                }
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

impl fmt::Display for CompletenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.mode {
            CheckMode::KA => format!("{}-A-completeness", self.k),
            CheckMode::M => format!("m-completeness (m = n + {})", self.k),
        };
        match self.verdict {
            Verdict::Accepted => writeln!(f, "verdict: accepted ({what} proven)")?,
            Verdict::Rejected => writeln!(f, "verdict: rejected ({what} unknown)")?,
        }
        writeln!(f, "cover: {}", self.cover.join(", "))?;
        writeln!(
            f,
            "states: {} in spec, {} in basis, {} tree nodes",
            self.spec_states, self.basis_size, self.tree_nodes
        )?;
        match &self.basis_error {
            Some(e) => writeln!(f, "basis: invalid ({e})")?,
            None => writeln!(f, "basis: {}", if self.basis_ok { "ok" } else { "wrong size" })?,
        }
        writeln!(f, "B complete: {}", self.basis_complete)?;
        for (j, ok) in self.frontier_complete.iter().enumerate() {
            writeln!(f, "F^{j} complete: {ok}")?;
        }
        for n in &self.missing_inputs {
            writeln!(f, "  {} lacks {}", n.access, n.missing.join(", "))?;
        }
        writeln!(f, "frontier identified: {}", self.frontier_identified)?;
        for u in &self.unidentified {
            writeln!(
                f,
                "  {} (F^{}) candidates {{{}}}",
                u.node.access,
                u.stratum,
                u.candidates.join(", ")
            )?;
        }
        let (name, list) = match self.mode {
            CheckMode::KA => ("frontier pair condition", &self.condition1_violations),
            CheckMode::M => ("ancestor pair condition", &self.condition3_violations),
        };
        if list.is_empty() {
            writeln!(f, "{name}: holds")?;
        } else {
            writeln!(f, "{name}: {} violation(s)", list.len())?;
            for v in list {
                writeln!(
                    f,
                    "  {} {{{}}} vs {} {{{}}}: different candidates, not apart",
                    v.q.access,
                    v.candidates_q.join(", "),
                    v.r.access,
                    v.candidates_r.join(", ")
                )?;
            }
        }
        for reason in &self.reasons {
            writeln!(f, "reason: {reason}")?;
        }
        Ok(())
    }
}
