//! Fault domains, the state-count bound, mutant sampling, exhaustive
//! enumeration and counterexample search.

use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mealy::{eccentricity, equivalence_classes, equivalent, passes, MealyMachine, StateCover, StateId};
use crate::obs::{build_testing_tree, NodeId, ObservationTree};
use crate::suite::TestSuite;
use crate::word::{Alphabet, Input, Output, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaultDomain {
    /// At most `m` states.
    Um(usize),
    /// Every state within `k` steps of a state reached by a cover word.
    UkA {
        k: usize,
        cover: Vec<Word>,
    },
    /// Two distinct cover words reach equivalent states.
    UA {
        cover: Vec<Word>,
    },
    Union(Vec<FaultDomain>),
}

impl FaultDomain {
    pub fn validate(&self) -> Result<()> {
        match self {
            FaultDomain::Um(0) => Err(Error::InvalidDomain("U_m needs m ≥ 1".into())),
            FaultDomain::UkA { cover, .. } | FaultDomain::UA { cover } if cover.is_empty() => {
                Err(Error::InvalidDomain("cover words must be non-empty".into()))
            }
            FaultDomain::Union(ds) => ds.iter().try_for_each(FaultDomain::validate),
            _ => Ok(()),
        }
    }

    /// `U_k^A ∪ U^A` for the words of `cover`.
    pub fn ka_union(k: usize, cover: &StateCover) -> FaultDomain {
        let words: Vec<Word> = cover.words().cloned().collect();
        FaultDomain::Union(vec![
            FaultDomain::UkA {
                k,
                cover: words.clone(),
            },
            FaultDomain::UA { cover: words },
        ])
    }
}

impl fmt::Display for FaultDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultDomain::Um(m) => write!(f, "U_{m}"),
            FaultDomain::UkA { k, cover } => write!(f, "U_{k}^A (|A| = {})", cover.len()),
            FaultDomain::UA { cover } => write!(f, "U^A (|A| = {})", cover.len()),
            FaultDomain::Union(ds) => {
                let parts: Vec<String> = ds.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" ∪ "))
            }
        }
    }
}

fn cover_states(machine: &MealyMachine, cover: &[Word]) -> Result<Vec<StateId>> {
    cover
        .iter()
        .map(|w| {
            machine
                .reach(machine.initial(), w)
                .ok_or_else(|| Error::CoverWordUndefined(machine.render(w)))
        })
        .collect()
}

/// Decides `machine ∈ domain`.
pub fn member(machine: &MealyMachine, domain: &FaultDomain) -> Result<bool> {
    domain.validate()?;
    match domain {
        FaultDomain::Um(m) => Ok(machine.num_states() <= *m),
        FaultDomain::UkA { k, cover } => {
            let sources = cover_states(machine, cover)?;
            Ok(eccentricity(machine, &sources)?.at_most(*k))
        }
        FaultDomain::UA { cover } => {
            let sources = cover_states(machine, cover)?;
            let classes = equivalence_classes(machine);
            let mut seen: Vec<usize> = sources.iter().map(|&q| classes[q]).collect();
            seen.sort_unstable();
            Ok(seen.windows(2).any(|w| w[0] == w[1]))
        }
        FaultDomain::Union(ds) => {
            for d in ds {
                if member(machine, d)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// `n + (Σ_{j<k} l^j)(nl − n + 1)`: the largest number of states of a
/// machine in `U_k^A` with `|A| = n` and `l` inputs. `k = 0` gives `n`.
pub fn bound_states(n: u64, l: u64, k: u32) -> Result<u128> {
    if n == 0 || l == 0 {
        return Err(Error::InvalidDomain("bound needs n ≥ 1 and l ≥ 1".into()));
    }
    let overflow = || Error::InvalidDomain("bound overflows 128 bits".into());
    let (n, l) = (n as u128, l as u128);
    let mut sum: u128 = 0;
    let mut power: u128 = 1;
    for j in 0..k {
        sum = sum.checked_add(power).ok_or_else(overflow)?;
        if j + 1 < k {
            power = power.checked_mul(l).ok_or_else(overflow)?;
        }
    }
    let fan = n * l - n + 1;
    sum.checked_mul(fan).and_then(|x| x.checked_add(n)).ok_or_else(overflow)
}

/// A machine attaining [`bound_states`]: `n` cover states on an `a`-chain,
/// every other edge out of them opening a fresh full `l`-ary tree of depth
/// `k`, whose last level returns to the initial state. The cover is
/// `ε, a, a a, ...` with `a` the first input.
pub fn bound_witness(n: usize, l: usize, k: usize) -> Result<MealyMachine> {
    let total = bound_states(n as u64, l as u64, k as u32)?;
    if total > 1_000_000 {
        return Err(Error::BudgetExceeded {
            count: total,
            budget: 1_000_000,
        });
    }
    let inputs = Alphabet::new((0..l).map(|i| format!("i{i}")))?;
    let outputs = Alphabet::new(["0"])?;
    let mut m = MealyMachine::new(inputs, outputs, (0..n).map(|q| format!("a{q}")).collect(), 0)?;
    let o = Output(0);
    // frontier of (state, remaining depth) whose edges are still open
    let mut open: Vec<(StateId, usize, usize)> = Vec::new();
    for q in 0..n {
        for i in 0..l {
            if i == 0 && q + 1 < n {
                m.set_transition(q, Input(0), Some((q + 1, o)));
            } else {
                open.push((q, i, k));
            }
        }
    }
    while let Some((q, i, depth)) = open.pop() {
        if depth == 0 {
            m.set_transition(q, Input(i as u16), Some((0, o)));
            continue;
        }
        let fresh = m.add_state(format!("f{}", m.num_states()))?;
        m.set_transition(q, Input(i as u16), Some((fresh, o)));
        for j in 0..l {
            open.push((fresh, j, depth - 1));
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EditKind {
    OutputFlip,
    TargetRedirect,
    ChainExtension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edit {
    pub kind: EditKind,
    /// Source state and input of the edited (or grafted) transition.
    pub state: String,
    pub input: String,
    /// New output, new target, or number of grafted states.
    pub detail: String,
}

/// How a machine was produced; together with the seed it replays exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleOrigin {
    /// Edits applied to `spec` by [`sample_mutant`] or
    /// [`sample_ua_mutant`].
    Mutation,
    /// A random folding of the testing tree by [`sample_folding`].
    Folding,
    /// Position in [`enumerate_complete_machines`].
    Enumeration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutantRecord {
    pub machine: MealyMachine,
    pub edits: Vec<Edit>,
    pub seed: u64,
    pub origin: SampleOrigin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    /// Edits per mutant are drawn uniformly from `1..=max_edits`; zero
    /// yields `spec` itself.
    pub max_edits: usize,
    /// Relative weights of output flips, redirects and chain grafts.
    pub weights: [f64; 3],
    pub max_attempts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            max_edits: 4,
            weights: [1.0, 1.0, 1.0],
            max_attempts: 10_000,
        }
    }
}

struct Mutator<'a> {
    rng: ChaCha8Rng,
    cover: &'a StateCover,
    k: usize,
    m: MealyMachine,
    edits: Vec<Edit>,
}

impl Mutator<'_> {
    fn record(&mut self, kind: EditKind, q: StateId, i: Input, detail: String) {
        self.edits.push(Edit {
            kind,
            state: self.m.state_name(q).to_string(),
            input: self.m.inputs().name(i.0).to_string(),
            detail,
        });
    }

    fn random_transition(&mut self) -> (StateId, Input) {
        let q = self.rng.gen_range(0..self.m.num_states());
        let i = Input(self.rng.gen_range(0..self.m.num_inputs()) as u16);
        (q, i)
    }

    fn flip(&mut self, q: StateId, i: Input) -> bool {
        let n = self.m.outputs().len();
        if n < 2 {
            return false;
        }
        let (t, o) = self.m.transition(q, i).unwrap();
        let shift = self.rng.gen_range(1..n) as u16;
        let o2 = Output((o.0 + shift) % n as u16);
        self.m.set_transition(q, i, Some((t, o2)));
        let name = self.m.outputs().name(o2.0).to_string();
        self.record(EditKind::OutputFlip, q, i, name);
        true
    }

    fn redirect(&mut self, q: StateId, i: Input) -> bool {
        let n = self.m.num_states();
        if n < 2 {
            return false;
        }
        let (t, o) = self.m.transition(q, i).unwrap();
        let t2 = (t + self.rng.gen_range(1..n)) % n;
        self.m.set_transition(q, i, Some((t2, o)));
        let name = self.m.state_name(t2).to_string();
        self.record(EditKind::TargetRedirect, q, i, name);
        true
    }

    /// Hangs a chain of at most `k` fresh states off a cover-reached state.
    /// Each fresh state copies the row of a random existing state, possibly
    /// with one perturbed transition.
    fn graft(&mut self) -> bool {
        if self.k == 0 {
            return false;
        }
        let words: Vec<&Word> = self.cover.words().collect();
        let w = words[self.rng.gen_range(0..words.len())];
        let Some(anchor) = self.m.reach(self.m.initial(), w) else {
            return false;
        };
        let len = self.rng.gen_range(1..=self.k);
        let old = self.m.num_states();
        let i0 = Input(self.rng.gen_range(0..self.m.num_inputs()) as u16);
        let mut prev = (anchor, i0);
        for _ in 0..len {
            let c = self
                .m
                .add_state(format!("c{}", self.m.num_states()))
                .expect("fresh name");
            let model = self.rng.gen_range(0..old);
            for i in self.m.inputs().inputs() {
                let row = self.m.transition(model, i);
                self.m.set_transition(c, i, row);
            }
            let (p, pi) = prev;
            let (_, o) = self.m.transition(p, pi).unwrap();
            self.m.set_transition(p, pi, Some((c, o)));
            if self.rng.gen_bool(0.5) {
                let i = Input(self.rng.gen_range(0..self.m.num_inputs()) as u16);
                if self.rng.gen_bool(0.5) {
                    self.flip(c, i);
                } else {
                    self.redirect(c, i);
                }
            }
            prev = (c, Input(self.rng.gen_range(0..self.m.num_inputs()) as u16));
        }
        self.record(EditKind::ChainExtension, anchor, i0, len.to_string());
        true
    }
}

fn seed_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_with(
    spec: &MealyMachine,
    cover: &StateCover,
    k: usize,
    seed: u64,
    config: &SamplerConfig,
    domain: &FaultDomain,
    prepare: impl Fn(&mut Mutator<'_>),
) -> Result<MutantRecord> {
    spec.require_complete()?;
    cover.check_minimal(spec)?;
    let kinds =
        WeightedIndex::new(config.weights).map_err(|e| Error::InvalidDomain(format!("sampler weights: {e}")))?;
    let mut mutator = Mutator {
        rng: seed_rng(seed),
        cover,
        k,
        m: spec.clone(),
        edits: Vec::new(),
    };
    for _ in 0..config.max_attempts {
        mutator.m = spec.clone();
        mutator.edits.clear();
        prepare(&mut mutator);
        let edits = if config.max_edits == 0 {
            0
        } else {
            mutator.rng.gen_range(1..=config.max_edits)
        };
        let mut done = 0;
        let mut tries = 0;
        while done < edits && tries < 16 * edits {
            tries += 1;
            let ok = match kinds.sample(&mut mutator.rng) {
                0 => {
                    let (q, i) = mutator.random_transition();
                    mutator.flip(q, i)
                }
                1 => {
                    let (q, i) = mutator.random_transition();
                    mutator.redirect(q, i)
                }
                _ => mutator.graft(),
            };
            done += ok as usize;
        }
        let candidate = mutator.m.reachable_part();
        if member(&candidate, domain)? {
            return Ok(MutantRecord {
                machine: candidate,
                edits: std::mem::take(&mut mutator.edits),
                seed,
                origin: SampleOrigin::Mutation,
            });
        }
    }
    Err(Error::BudgetExhausted(config.max_attempts))
}

/// A complete mutant of `spec` inside `U_k^A` for the words of `cover`.
/// The result depends only on the arguments.
pub fn sample_mutant(
    spec: &MealyMachine,
    cover: &StateCover,
    k: usize,
    seed: u64,
    config: &SamplerConfig,
) -> Result<MutantRecord> {
    let domain = FaultDomain::UkA {
        k,
        cover: cover.words().cloned().collect(),
    };
    sample_with(spec, cover, k, seed, config, &domain, |_| {})
}

/// A complete mutant of `spec` inside `U^A`: the last transition of one
/// cover word is first redirected to the state of another cover word.
pub fn sample_ua_mutant(
    spec: &MealyMachine,
    cover: &StateCover,
    seed: u64,
    config: &SamplerConfig,
) -> Result<MutantRecord> {
    if cover.len() < 2 {
        return Err(Error::InvalidDomain("U^A needs two cover words".into()));
    }
    let domain = FaultDomain::UA {
        cover: cover.words().cloned().collect(),
    };
    sample_with(spec, cover, 0, seed, config, &domain, |mu| {
        let entries = cover.entries();
        let from = mu.rng.gen_range(1..entries.len());
        let mut to = mu.rng.gen_range(0..entries.len() - 1);
        if to >= from {
            to += 1;
        }
        let (w, _) = &entries[from];
        let q = mu.m.reach(mu.m.initial(), &w[..w.len() - 1]).unwrap();
        let i = w[w.len() - 1];
        let target = entries[to].1;
        let (_, o) = mu.m.transition(q, i).unwrap();
        mu.m.set_transition(q, i, Some((target, o)));
        let name = mu.m.state_name(target).to_string();
        mu.record(EditKind::TargetRedirect, q, i, name);
    })
}

/// `Σ_{s=1}^{max} (s·|O|)^(s·|I|)`, or `None` on overflow.
pub fn enumeration_count(num_inputs: usize, num_outputs: usize, max_states: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for s in 1..=max_states {
        let base = (s * num_outputs) as u128;
        let exp = u32::try_from(s * num_inputs).ok()?;
        total = total.checked_add(base.checked_pow(exp)?)?;
    }
    Some(total)
}

/// Every complete machine with `1..=max_states` states and initial state 0,
/// in order of size, then of the row-major transition table.
pub fn enumerate_complete_machines(
    inputs: &Alphabet,
    outputs: &Alphabet,
    max_states: usize,
    budget: u128,
) -> Result<MachineEnumeration> {
    let count = enumeration_count(inputs.len(), outputs.len(), max_states).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(MachineEnumeration {
        inputs: inputs.clone(),
        outputs: outputs.clone(),
        max_states,
        states: 1,
        digits: None,
        count,
    })
}

/// Iterator returned by [`enumerate_complete_machines`].
pub struct MachineEnumeration {
    inputs: Alphabet,
    outputs: Alphabet,
    max_states: usize,
    states: usize,
    // per transition: target * |O| + output
    digits: Option<Vec<usize>>,
    count: u128,
}

impl MachineEnumeration {
    /// Total number of machines the iterator yields.
    pub fn count_total(&self) -> u128 {
        self.count
    }
}

impl Iterator for MachineEnumeration {
    type Item = MealyMachine;

    fn next(&mut self) -> Option<MealyMachine> {
        if self.outputs.is_empty() || self.states > self.max_states {
            return None;
        }
        let radix = self.states * self.outputs.len();
        match &mut self.digits {
            None => self.digits = Some(vec![0; self.states * self.inputs.len()]),
            Some(d) => {
                let mut p = 0;
                loop {
                    if p == d.len() {
                        self.states += 1;
                        self.digits = None;
                        return self.next();
                    }
                    d[p] += 1;
                    if d[p] < radix {
                        break;
                    }
                    d[p] = 0;
                    p += 1;
                }
            }
        }
        let nout = self.outputs.len();
        let table: Vec<(StateId, u16)> = self
            .digits
            .as_ref()
            .unwrap()
            .iter()
            .map(|&x| (x / nout, (x % nout) as u16))
            .collect();
        Some(MealyMachine::from_table(
            self.inputs.clone(),
            self.outputs.clone(),
            &table,
            0,
        ))
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub mutant: MutantRecord,
    /// Shortest word on which `spec` and the mutant differ.
    pub distinguishing: Word,
}

/// Looks for a machine in `domain` that passes `suite` but is not
/// equivalent to `spec`. `U_m` is enumerated. Other domains are sampled with
/// seeds `seed, seed + 1, ...`, alternating spec mutations and random
/// foldings of the testing tree. At most `budget` machines are tried.
pub fn search_counterexample(
    spec: &MealyMachine,
    suite: &TestSuite,
    domain: &FaultDomain,
    budget: usize,
    seed: u64,
) -> Result<Option<Counterexample>> {
    domain.validate()?;
    spec.require_complete()?;
    let hit = |m: MealyMachine, edits: Vec<Edit>, s: u64, origin: SampleOrigin| -> Result<Option<Counterexample>> {
        if !passes(&m, spec, suite)?.is_pass() {
            return Ok(None);
        }
        Ok(equivalent(spec, &m)?.counterexample().cloned().map(|w| Counterexample {
            mutant: MutantRecord {
                machine: m,
                edits,
                seed: s,
                origin,
            },
            distinguishing: w,
        }))
    };

    if let FaultDomain::Um(m) = domain {
        let it = enumerate_complete_machines(spec.inputs(), spec.outputs(), *m, u128::MAX)?;
        for (n, machine) in it.take(budget).enumerate() {
            if let Some(c) = hit(machine, Vec::new(), n as u64, SampleOrigin::Enumeration)? {
                return Ok(Some(c));
            }
        }
        return Ok(None);
    }

    let leaves: Vec<&FaultDomain> = match domain {
        FaultDomain::Union(ds) => ds.iter().collect(),
        d => vec![d],
    };
    let tree = build_testing_tree(spec, suite)?;
    let config = SamplerConfig::default();
    for n in 0..budget {
        let s = seed.wrapping_add(n as u64);
        let leaf = leaves[(n / 2) % leaves.len()];
        // odd rounds fold the testing tree, even rounds mutate `spec`
        if n % 2 == 1 {
            if let Some(m) = sample_folding(&tree, spec, leaf, s)? {
                if let Some(c) = hit(m, Vec::new(), s, SampleOrigin::Folding)? {
                    return Ok(Some(c));
                }
            }
            continue;
        }
        let record = match leaf {
            FaultDomain::UkA { k, cover } => {
                let cover = StateCover::from_words(spec, cover.iter().cloned())?;
                sample_mutant(spec, &cover, *k, s, &config)?
            }
            FaultDomain::UA { cover } => {
                let cover = StateCover::from_words(spec, cover.iter().cloned())?;
                sample_ua_mutant(spec, &cover, s, &config)?
            }
            FaultDomain::Um(_) | FaultDomain::Union(_) => {
                return Err(Error::InvalidDomain(
                    "only U_k^A and U^A can be sampled inside a union".into(),
                ))
            }
        };
        if let Some(c) = hit(record.machine, record.edits, s, SampleOrigin::Mutation)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Whether state `t` of the partial machine `m` can host tree node `q`
/// without contradicting an output already fixed below it.
fn compatible(m: &MealyMachine, tree: &ObservationTree, q: NodeId, t: StateId) -> bool {
    let mut stack = vec![(q, t)];
    while let Some((node, state)) = stack.pop() {
        for &c in tree.children(node) {
            if let Some((next, o)) = m.transition(state, tree.input(c).unwrap()) {
                if Some(o) != tree.output(c) {
                    return false;
                }
                stack.push((c, next));
            }
        }
    }
    true
}

/// A random machine into which `tree` folds, so it passes the suite the tree
/// was built from. Transitions the tree leaves open are filled at random.
/// Returns `None` when the sample misses `domain`.
pub fn sample_folding(
    tree: &ObservationTree,
    spec: &MealyMachine,
    domain: &FaultDomain,
    seed: u64,
) -> Result<Option<MealyMachine>> {
    let mut rng = seed_rng(seed);
    let n = spec.num_states();
    let cap = match domain {
        FaultDomain::UkA { k, cover } => {
            let b = bound_states(cover.len() as u64, spec.num_inputs() as u64, *k as u32)?;
            b.min(3 * n as u128 + 2) as usize
        }
        FaultDomain::Um(m) => *m,
        _ => 2 * n + 1,
    };
    let max_states = rng.gen_range(n.min(cap)..=cap);
    let p_new: f64 = rng.gen_range(0.1..0.7);
    let mut m = MealyMachine::new(tree.inputs().clone(), tree.outputs().clone(), vec!["m0".into()], 0)?;
    let mut image = vec![0; tree.len()];
    for q in tree.nodes().skip(1) {
        let p = image[tree.parent(q).unwrap()];
        let (i, o) = (tree.input(q).unwrap(), tree.output(q).unwrap());
        if let Some((t, o2)) = m.transition(p, i) {
            if o2 != o {
                return Ok(None);
            }
            image[q] = t;
            continue;
        }
        let fresh = m.num_states() < max_states && rng.gen_bool(p_new);
        let t = if fresh {
            m.add_state(format!("m{}", m.num_states()))?
        } else {
            let options: Vec<StateId> = m.states().filter(|&t| compatible(&m, tree, q, t)).collect();
            match options.len() {
                0 if m.num_states() < max_states => m.add_state(format!("m{}", m.num_states()))?,
                0 => return Ok(None),
                len => options[rng.gen_range(0..len)],
            }
        };
        m.set_transition(p, i, Some((t, o)));
        image[q] = t;
    }
    for q in m.states() {
        for i in m.inputs().inputs() {
            if m.transition(q, i).is_none() {
                let t = rng.gen_range(0..m.num_states());
                let o = Output(rng.gen_range(0..m.outputs().len()) as u16);
                m.set_transition(q, i, Some((t, o)));
            }
        }
    }
    let m = m.reachable_part();
    Ok(member(&m, domain)?.then_some(m))
}
