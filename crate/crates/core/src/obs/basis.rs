//! A basis induced by a state cover, its frontier strata, and candidate sets.

use std::fmt;

use serde::Serialize;

use super::{ApartnessMatrix, NodeId, ObservationTree};
use crate::error::{Error, Result};
use crate::mealy::StateCover;
use crate::word::Input;

/// A subset of the basis, as a bitset over basis positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CandidateSet {
    bits: Vec<u64>,
}

impl CandidateSet {
    fn with_capacity(n: usize) -> Self {
        CandidateSet {
            bits: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, pos: usize) {
        self.bits[pos / 64] |= 1 << (pos % 64);
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.bits.get(pos / 64).is_some_and(|b| b >> (pos % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// Basis positions in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(n, &b)| (0..64).filter(move |j| b >> j & 1 == 1).map(move |j| n * 64 + j))
    }
}

#[derive(Debug, Clone)]
pub struct BasisStratification {
    basis: Vec<NodeId>,
    // per node: Some(position in `basis`)
    basis_pos: Vec<Option<usize>>,
    // per node: Some(k) when the node lies in F^k
    level: Vec<Option<usize>>,
    strata: Vec<Vec<NodeId>>,
    candidates: Vec<CandidateSet>,
}

/// Validates the basis `B = {node(w) | w ∈ cover}` and stratifies the tree.
pub fn basis_from_cover(
    tree: &ObservationTree,
    cover: &StateCover,
    matrix: &ApartnessMatrix,
) -> Result<BasisStratification> {
    let mut basis = Vec::with_capacity(cover.len());
    for w in cover.words() {
        let q = tree
            .node_of(w)
            .ok_or_else(|| Error::CoverWordNotInTree(tree.inputs_display(w)))?;
        basis.push(q);
    }
    basis.sort_unstable();
    basis.dedup();
    let mut basis_pos = vec![None; tree.len()];
    for (p, &b) in basis.iter().enumerate() {
        basis_pos[b] = Some(p);
    }
    for &b in &basis {
        if let Some(p) = tree.parent(b) {
            if basis_pos[p].is_none() {
                return Err(Error::NotAncestorClosed(tree.access_string(b)));
            }
        }
    }
    if basis_pos[tree.root()].is_none() {
        return Err(Error::NotAncestorClosed(tree.access_string(tree.root())));
    }
    for (n, &a) in basis.iter().enumerate() {
        for &b in &basis[n + 1..] {
            if !matrix.is_apart(a, b) {
                return Err(Error::NotPairwiseApart(tree.access_string(a), tree.access_string(b)));
            }
        }
    }

    // distance from B; parents precede children so one pass suffices
    let mut dist = vec![0usize; tree.len()];
    let mut level = vec![None; tree.len()];
    let mut strata: Vec<Vec<NodeId>> = Vec::new();
    for q in tree.nodes() {
        if basis_pos[q].is_some() {
            continue;
        }
        let d = dist[tree.parent(q).unwrap()] + 1;
        dist[q] = d;
        level[q] = Some(d - 1);
        if strata.len() < d {
            strata.resize_with(d, Vec::new);
        }
        strata[d - 1].push(q);
    }

    let candidates = tree
        .nodes()
        .map(|q| {
            let mut c = CandidateSet::with_capacity(basis.len());
            for (p, &b) in basis.iter().enumerate() {
                if !matrix.is_apart(q, b) {
                    c.insert(p);
                }
            }
            c
        })
        .collect();

    Ok(BasisStratification {
        basis,
        basis_pos,
        level,
        strata,
        candidates,
    })
}

impl BasisStratification {
    /// Basis nodes in increasing order.
    pub fn basis(&self) -> &[NodeId] {
        &self.basis
    }

    pub fn is_basis(&self, q: NodeId) -> bool {
        self.basis_pos[q].is_some()
    }

    /// `F^k` for the k such that `q ∈ F^k`.
    pub fn level(&self, q: NodeId) -> Option<usize> {
        self.level[q]
    }

    /// `F^k`; empty beyond the tree's depth.
    pub fn stratum(&self, k: usize) -> &[NodeId] {
        self.strata.get(k).map_or(&[], Vec::as_slice)
    }

    /// Number of non-empty strata.
    pub fn num_strata(&self) -> usize {
        self.strata.len()
    }

    /// `F^{<k}` in stratum order.
    pub fn below(&self, k: usize) -> impl Iterator<Item = NodeId> + '_ {
        self.strata.iter().take(k).flatten().copied()
    }

    pub fn candidates(&self, q: NodeId) -> &CandidateSet {
        &self.candidates[q]
    }

    /// `C(q)` as tree nodes.
    pub fn candidate_nodes(&self, q: NodeId) -> Vec<NodeId> {
        self.candidates[q].iter().map(|p| self.basis[p]).collect()
    }

    pub fn is_identified(&self, q: NodeId) -> bool {
        self.candidates[q].len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncompleteNode {
    pub node: NodeId,
    pub access: String,
    pub missing: Vec<String>,
}

/// Missing inputs in `B` and in each `F^j`, `j < k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataCompleteness {
    pub basis: Vec<IncompleteNode>,
    pub frontiers: Vec<Vec<IncompleteNode>>,
}

impl StrataCompleteness {
    pub fn basis_complete(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn frontier_complete(&self, j: usize) -> bool {
        self.frontiers[j].is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.basis_complete() && self.frontiers.iter().all(Vec::is_empty)
    }
}

pub fn strata_completeness(tree: &ObservationTree, strat: &BasisStratification, upto_k: usize) -> StrataCompleteness {
    let gaps = |nodes: &mut dyn Iterator<Item = NodeId>| -> Vec<IncompleteNode> {
        nodes
            .filter_map(|q| {
                let missing: Vec<Input> = tree.missing_inputs(q);
                (!missing.is_empty()).then(|| IncompleteNode {
                    node: q,
                    access: tree.access_string(q),
                    missing: missing.iter().map(|i| tree.inputs().name(i.0).to_string()).collect(),
                })
            })
            .collect()
    };
    StrataCompleteness {
        basis: gaps(&mut strat.basis().iter().copied()),
        frontiers: (0..upto_k)
            .map(|j| gaps(&mut strat.stratum(j).iter().copied()))
            .collect(),
    }
}

impl fmt::Display for StrataCompleteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, name: &str, g: &[IncompleteNode]| {
            if g.is_empty() {
                return writeln!(f, "{name}: complete");
            }
            let parts: Vec<String> = g
                .iter()
                .map(|n| format!("{} lacks {}", n.access, n.missing.join(",")))
                .collect();
            writeln!(f, "{name}: missing inputs ({})", parts.join("; "))
        };
        line(f, "B", &self.basis)?;
        for (j, g) in self.frontiers.iter().enumerate() {
            line(f, &format!("F^{j}"), g)?;
        }
        Ok(())
    }
}
