//! Deterministic, possibly partial Mealy machines.

mod eccentricity;
mod equivalence;
mod separating;

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::suite::TestSuite;
use crate::word::{Alphabet, Input, Output, Word};

pub use eccentricity::{eccentricity, Eccentricity};
pub use equivalence::{
    equivalence_classes, equivalent, is_minimal, separating_sequence, state_equivalent, Equivalence,
};
pub use separating::{pairwise_family, separating_family, SeparatingFamily};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    inputs: Alphabet,
    outputs: Alphabet,
    state_names: Arc<Vec<String>>,
    initial: StateId,
    // row-major: state * |I| + input
    transitions: Vec<Option<(StateId, Output)>>,
}

impl MealyMachine {
    /// A machine with the given states and no transitions. `initial` must be
    /// one of `state_names`.
    pub fn new(inputs: Alphabet, outputs: Alphabet, state_names: Vec<String>, initial: StateId) -> Result<Self> {
        if initial >= state_names.len() {
            return Err(Error::UnknownState(format!("#{initial}")));
        }
        for (n, s) in state_names.iter().enumerate() {
            if state_names[..n].contains(s) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate state `{s}`"),
                });
            }
        }
        let transitions = vec![None; state_names.len() * inputs.len()];
        Ok(MealyMachine {
            inputs,
            outputs,
            state_names: Arc::new(state_names),
            initial,
            transitions,
        })
    }

    /// Builds a complete machine with states named `q0, q1, ...` from a
    /// row-major table of `(target, output)` pairs.
    pub fn from_table(inputs: Alphabet, outputs: Alphabet, table: &[(StateId, u16)], initial: StateId) -> Self {
        let n = table.len() / inputs.len().max(1);
        Self::from_table_named(inputs, outputs, default_state_names(n), table, initial)
    }

    pub(crate) fn from_table_named(
        inputs: Alphabet,
        outputs: Alphabet,
        state_names: Arc<Vec<String>>,
        table: &[(StateId, u16)],
        initial: StateId,
    ) -> Self {
        debug_assert_eq!(table.len(), state_names.len() * inputs.len());
        MealyMachine {
            inputs,
            outputs,
            state_names,
            initial,
            transitions: table.iter().map(|&(t, o)| Some((t, Output(o)))).collect(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if self.state_id(&name).is_some() {
            return Err(Error::Parse {
                line: 0,
                message: format!("duplicate state `{name}`"),
            });
        }
        Arc::make_mut(&mut self.state_names).push(name);
        self.transitions.extend(std::iter::repeat_n(None, self.inputs.len()));
        Ok(self.state_names.len() - 1)
    }

    /// Adds `from -input/output-> to`, failing if the transition exists.
    pub fn add_transition(&mut self, from: StateId, input: Input, to: StateId, output: Output) -> Result<()> {
        if self.transition(from, input).is_some() {
            return Err(Error::Parse {
                line: 0,
                message: format!(
                    "duplicate transition for ({}, {})",
                    self.state_name(from),
                    self.inputs.name(input.0)
                ),
            });
        }
        self.set_transition(from, input, Some((to, output)));
        Ok(())
    }

    pub fn set_transition(&mut self, from: StateId, input: Input, value: Option<(StateId, Output)>) {
        let w = self.inputs.len();
        self.transitions[from * w + input.index()] = value;
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.num_states()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn transition(&self, q: StateId, i: Input) -> Option<(StateId, Output)> {
        self.transitions[q * self.inputs.len() + i.index()]
    }

    pub fn successor(&self, q: StateId, i: Input) -> Option<StateId> {
        self.transition(q, i).map(|(t, _)| t)
    }

    pub fn output(&self, q: StateId, i: Input) -> Option<Output> {
        self.transition(q, i).map(|(_, o)| o)
    }

    /// Runs `word` from `from`. Absent as soon as a step is undefined.
    pub fn run(&self, from: StateId, word: &[Input]) -> Option<(StateId, Vec<Output>)> {
        let mut q = from;
        let mut out = Vec::with_capacity(word.len());
        for &i in word {
            let (t, o) = self.transition(q, i)?;
            out.push(o);
            q = t;
        }
        Some((q, out))
    }

    pub fn reach(&self, from: StateId, word: &[Input]) -> Option<StateId> {
        word.iter().try_fold(from, |q, &i| self.successor(q, i))
    }

    pub fn is_state_complete(&self, q: StateId) -> bool {
        self.inputs.inputs().all(|i| self.transition(q, i).is_some())
    }

    pub fn is_complete(&self) -> bool {
        self.transitions.iter().all(Option::is_some)
    }

    /// First missing `(state, input)`, if any.
    pub fn missing_transition(&self) -> Option<(StateId, Input)> {
        let w = self.inputs.len();
        self.transitions
            .iter()
            .position(Option::is_none)
            .map(|p| (p / w, Input((p % w) as u16)))
    }

    pub fn require_complete(&self) -> Result<()> {
        match self.missing_transition() {
            None => Ok(()),
            Some((q, i)) => Err(Error::NotComplete {
                state: self.state_name(q).to_string(),
                input: self.inputs.name(i.0).to_string(),
            }),
        }
    }

    pub fn require_minimal(&self) -> Result<()> {
        match equivalence::find_equivalent_pair(self) {
            None => Ok(()),
            Some((p, q)) => Err(Error::NotMinimal(self.state_name(p).into(), self.state_name(q).into())),
        }
    }

    pub fn require_initially_connected(&self) -> Result<()> {
        match self.distances_from(&[self.initial]).iter().position(Option::is_none) {
            None => Ok(()),
            Some(q) => Err(Error::NotInitiallyConnected(self.state_name(q).into())),
        }
    }

    /// Complete, initially connected and minimal: what a specification must be.
    pub fn require_specification(&self) -> Result<()> {
        self.require_complete()?;
        self.require_initially_connected()?;
        self.require_minimal()
    }

    /// Multi-source BFS distance of every state; absent when unreachable.
    pub fn distances_from(&self, sources: &[StateId]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_states()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(q) = queue.pop_front() {
            let d = dist[q].unwrap();
            for i in self.inputs.inputs() {
                if let Some(t) = self.successor(q, i) {
                    if dist[t].is_none() {
                        dist[t] = Some(d + 1);
                        queue.push_back(t);
                    }
                }
            }
        }
        dist
    }

    pub fn is_initially_connected(&self) -> bool {
        self.distances_from(&[self.initial]).iter().all(Option::is_some)
    }

    /// Canonical minimal state cover: BFS from the initial state, expanding
    /// inputs in alphabet order.
    pub fn minimal_state_cover(&self) -> Result<StateCover> {
        let mut access: Vec<Option<Word>> = vec![None; self.num_states()];
        access[self.initial] = Some(Word::empty());
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for i in self.inputs.inputs() {
                if let Some(t) = self.successor(q, i) {
                    if access[t].is_none() {
                        access[t] = Some(access[q].as_ref().unwrap().appended(i));
                        queue.push_back(t);
                    }
                }
            }
        }
        if let Some(q) = access.iter().position(Option::is_none) {
            return Err(Error::NotInitiallyConnected(self.state_name(q).to_string()));
        }
        let pairs = access.into_iter().enumerate().map(|(q, w)| (w.unwrap(), q)).collect();
        Ok(StateCover::from_pairs(pairs))
    }

    /// Restriction to the states reachable from the initial state.
    pub fn reachable_part(&self) -> MealyMachine {
        let dist = self.distances_from(&[self.initial]);
        if dist.iter().all(Option::is_some) {
            return self.clone();
        }
        let mut renumber = vec![usize::MAX; self.num_states()];
        let mut names = Vec::new();
        for q in self.states() {
            if dist[q].is_some() {
                renumber[q] = names.len();
                names.push(self.state_names[q].clone());
            }
        }
        let mut m = MealyMachine::new(self.inputs.clone(), self.outputs.clone(), names, renumber[self.initial])
            .expect("names are unique");
        for q in self.states().filter(|&q| dist[q].is_some()) {
            for i in self.inputs.inputs() {
                if let Some((t, o)) = self.transition(q, i) {
                    m.set_transition(renumber[q], i, Some((renumber[t], o)));
                }
            }
        }
        m
    }

    pub fn render(&self, w: &Word) -> String {
        w.display(&self.inputs).to_string()
    }

    /// Renders the output names produced by `word` from the initial state.
    pub fn output_names(&self, word: &[Input]) -> Option<Vec<String>> {
        self.run(self.initial, word)
            .map(|(_, out)| out.iter().map(|o| self.outputs.name(o.0).to_string()).collect())
    }

    /// Checks whether `self` passes every maximal test of `suite` for `spec`.
    pub fn passes(&self, spec: &MealyMachine, suite: &TestSuite) -> Result<PassVerdict> {
        passes(self, spec, suite)
    }
}

pub(crate) fn default_state_names(n: usize) -> Arc<Vec<String>> {
    Arc::new((0..n).map(|q| format!("q{q}")).collect())
}

/// A prefix-closed set of words reaching every state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateCover {
    // sorted by word
    entries: Vec<(Word, StateId)>,
}

impl StateCover {
    fn from_pairs(mut entries: Vec<(Word, StateId)>) -> Self {
        entries.sort();
        entries.dedup();
        StateCover { entries }
    }

    /// Runs each word on `machine`, failing if one is undefined.
    pub fn from_words(machine: &MealyMachine, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let entries = words
            .into_iter()
            .map(|w| match machine.reach(machine.initial(), &w) {
                Some(q) => Ok((w, q)),
                None => Err(Error::CoverWordUndefined(machine.render(&w))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_pairs(entries))
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> + '_ {
        self.entries.iter().map(|(w, _)| w)
    }

    pub fn entries(&self) -> &[(Word, StateId)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.entries.iter().all(|(w, _)| {
            w.is_empty() || {
                let parent: Word = w[..w.len() - 1].to_vec().into();
                self.entries.binary_search_by(|(x, _)| x.cmp(&parent)).is_ok()
            }
        })
    }

    /// Prefix-closed, covers every state and reaches each exactly once.
    pub fn check_minimal(&self, machine: &MealyMachine) -> Result<()> {
        if !self.is_prefix_closed() {
            return Err(Error::CoverNotMinimal("not prefix-closed".into()));
        }
        let mut seen = vec![false; machine.num_states()];
        for (w, q) in &self.entries {
            if std::mem::replace(&mut seen[*q], true) {
                return Err(Error::CoverNotMinimal(format!(
                    "state `{}` reached twice (again by `{}`)",
                    machine.state_name(*q),
                    machine.render(w)
                )));
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::CoverNotMinimal(format!(
                "state `{}` not covered",
                machine.state_name(q)
            )));
        }
        Ok(())
    }

    pub fn is_minimal_for(&self, machine: &MealyMachine) -> bool {
        self.check_minimal(machine).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PassVerdict {
    Pass,
    Fail {
        test: Word,
        spec_output: Vec<String>,
        /// Absent when the implementation cannot run the whole test.
        impl_output: Option<Vec<String>>,
    },
}

impl PassVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, PassVerdict::Pass)
    }
}

/// Runs the maximal tests of `suite` in order; the first disagreement wins.
pub fn passes(implementation: &MealyMachine, spec: &MealyMachine, suite: &TestSuite) -> Result<PassVerdict> {
    check_same_inputs(implementation, spec)?;
    let bridge = output_bridge(spec.outputs(), implementation.outputs());
    for test in suite.maximal() {
        let (_, spec_out) = spec
            .run(spec.initial(), test)
            .ok_or_else(|| Error::TestUndefinedOnSpec(spec.render(test)))?;
        let impl_out = implementation.run(implementation.initial(), test).map(|(_, o)| o);
        let agree = impl_out
            .as_ref()
            .is_some_and(|io| io.iter().zip(&spec_out).all(|(a, b)| bridge[a.index()] == b.0 as u32));
        if !agree {
            return Ok(PassVerdict::Fail {
                test: test.clone(),
                spec_output: spec.output_names(test).unwrap(),
                impl_output: implementation.output_names(test),
            });
        }
    }
    Ok(PassVerdict::Pass)
}

pub(crate) fn check_same_inputs(a: &MealyMachine, b: &MealyMachine) -> Result<()> {
    if a.inputs() != b.inputs() {
        return Err(Error::AlphabetMismatch(
            a.inputs().names().to_vec(),
            b.inputs().names().to_vec(),
        ));
    }
    Ok(())
}

/// Maps each output index of `other` into the index space of `base`: shared
/// names keep `base`'s index, names only in `other` get fresh indices.
pub(crate) fn output_bridge(base: &Alphabet, other: &Alphabet) -> Vec<u32> {
    if base == other {
        return (0..other.len() as u32).collect();
    }
    let mut fresh = base.len() as u32;
    other
        .names()
        .iter()
        .map(|n| match base.index_of(n) {
            Some(i) => i as u32,
            None => {
                fresh += 1;
                fresh - 1
            }
        })
        .collect()
}
