#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ka_conformance::random::random_spec;
use ka_conformance::{build_testing_tree, Input, MealyMachine, NodeId, ObservationTree, TestSuite, Word};

/// Every non-empty word defined from `q`, with the node it ends at.
fn paths_from(tree: &ObservationTree, q: NodeId) -> Vec<(Vec<Input>, NodeId)> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), q)];
    while let Some((w, n)) = stack.pop() {
        for &c in tree.children(n) {
            let mut w2 = w.clone();
            w2.push(tree.input(c).unwrap());
            out.push((w2.clone(), c));
            stack.push((w2, c));
        }
    }
    out
}

fn step(tree: &ObservationTree, from: NodeId, w: &[Input]) -> Option<NodeId> {
    w.iter().try_fold(from, |n, &i| tree.child(n, i))
}

/// Exhaustive definition of apartness: some word defined from both nodes
/// ends in different outputs.
pub fn naive_apart(tree: &ObservationTree, q: NodeId, r: NodeId) -> bool {
    paths_from(tree, q)
        .into_iter()
        .any(|(w, nq)| step(tree, r, &w).is_some_and(|nr| tree.output(nq) != tree.output(nr)))
}

pub fn naive_matrix(tree: &ObservationTree) -> Vec<Vec<bool>> {
    let n = tree.len();
    let mut m = vec![vec![false; n]; n];
    for q in 0..n {
        for r in 0..q {
            let a = naive_apart(tree, q, r);
            m[q][r] = a;
            m[r][q] = a;
        }
    }
    m
}

/// Does `w` show `q` and `r` apart?
pub fn witness_separates(tree: &ObservationTree, q: NodeId, r: NodeId, w: &Word) -> bool {
    match (step(tree, q, w), step(tree, r, w)) {
        (Some(a), Some(b)) => !w.is_empty() && tree.output(a) != tree.output(b),
        _ => false,
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, num_inputs: usize, len: usize) -> Word {
    (0..len)
        .map(|_| Input(rng.gen_range(0..num_inputs) as u16))
        .collect::<Vec<_>>()
        .into()
}

pub fn random_suite(rng: &mut ChaCha8Rng, spec: &MealyMachine, tests: usize, max_len: usize) -> TestSuite {
    let mut suite = TestSuite::new();
    for _ in 0..tests {
        let len = rng.gen_range(1..=max_len);
        suite.insert(random_word(rng, spec.num_inputs(), len));
    }
    suite
}

/// A random testing tree of at most `max_nodes` nodes over a random spec.
pub fn random_tree(seed: u64, max_nodes: usize) -> (MealyMachine, TestSuite, ObservationTree) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = rng.gen_range(1..=6);
    let inputs = rng.gen_range(1..=3);
    let outputs = if states == 1 {
        rng.gen_range(1..=3)
    } else {
        rng.gen_range(2..=3)
    };
    let spec = random_spec(states, inputs, outputs, seed);
    let target = rng.gen_range(1..=max_nodes);
    let mut suite = TestSuite::new();
    let mut tree = build_testing_tree(&spec, &suite).unwrap();
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=12);
        let mut next = suite.clone();
        next.insert(random_word(&mut rng, inputs, len));
        let t = build_testing_tree(&spec, &next).unwrap();
        if t.len() > target {
            break;
        }
        suite = next;
        tree = t;
    }
    (spec, suite, tree)
}

/// BFS distance from `sources`, one search per source, minimized.
pub fn naive_eccentricity(m: &MealyMachine, sources: &[usize]) -> Option<usize> {
    let mut best = vec![usize::MAX; m.num_states()];
    for &s in sources {
        let mut dist = vec![usize::MAX; m.num_states()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(q) = queue.pop_front() {
            for i in m.inputs().inputs() {
                if let Some(t) = m.successor(q, i) {
                    if dist[t] == usize::MAX {
                        dist[t] = dist[q] + 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        for (b, d) in best.iter_mut().zip(dist) {
            *b = (*b).min(d);
        }
    }
    let max = best.into_iter().max().unwrap();
    (max != usize::MAX).then_some(max)
}

/// All words of exactly `len` inputs.
pub fn words_of_len(num_inputs: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| (0..num_inputs).map(move |i| w.appended(Input(i as u16))))
            .collect();
    }
    out
}
