//! Text formats: machines, word lists, identifier files, and Graphviz export.
//!
//! Machine files look like
//!
//! ```text
//! mealy
//! inputs: a b
//! outputs: 0 1
//! initial: s0
//! s0 -a/0-> s1
//! s0 -b/1-> s2
//! ```
//!
//! An optional `states:` line fixes the state order (and declares states
//! without transitions); otherwise states are numbered by first appearance,
//! starting with the initial state. Input names are sorted on load.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mealy::{MealyMachine, SeparatingFamily};
use crate::suite::TestSuite;
use crate::word::{Alphabet, Input, Output, Word};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct RawTransition {
    line: usize,
    from: String,
    input: String,
    output: String,
    to: String,
}

fn parse_arrow(tok: &str) -> Option<(&str, &str)> {
    let inner = tok.strip_prefix('-')?.strip_suffix("->")?;
    let (i, o) = inner.split_once('/')?;
    (!i.is_empty() && !o.is_empty()).then_some((i, o))
}

pub fn parse_machine(text: &str) -> Result<MealyMachine> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, "mealy")) => {}
        Some((n, other)) => return Err(perr(n, format!("expected `mealy`, found `{other}`"))),
        None => return Err(perr(0, "empty machine file")),
    }

    let mut inputs = None;
    let mut outputs = None;
    let mut states: Option<Vec<String>> = None;
    let mut initial = None;
    let mut raw = Vec::new();

    for (n, line) in lines {
        if let Some((key, rest)) = line.split_once(':') {
            if !key.contains(char::is_whitespace) && !key.starts_with('-') && !line.contains("->") {
                let toks: Vec<String> = rest.split_whitespace().map(String::from).collect();
                let slot = match key {
                    "inputs" => &mut inputs,
                    "outputs" => &mut outputs,
                    "states" => &mut states,
                    "initial" => {
                        if toks.len() != 1 {
                            return Err(perr(n, "`initial:` takes exactly one state"));
                        }
                        if initial.replace(toks[0].clone()).is_some() {
                            return Err(perr(n, "`initial:` given twice"));
                        }
                        continue;
                    }
                    _ => return Err(perr(n, format!("unknown header `{key}`"))),
                };
                if slot.replace(toks).is_some() {
                    return Err(perr(n, format!("`{key}:` given twice")));
                }
                continue;
            }
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [from, arrow, to] = toks[..] else {
            return Err(perr(
                n,
                format!("expected `state -input/output-> state`, found `{line}`"),
            ));
        };
        let (input, output) =
            parse_arrow(arrow).ok_or_else(|| perr(n, format!("malformed transition label `{arrow}`")))?;
        raw.push(RawTransition {
            line: n,
            from: from.into(),
            input: input.into(),
            output: output.into(),
            to: to.into(),
        });
    }

    let inputs = inputs.ok_or_else(|| perr(0, "missing `inputs:` header"))?;
    let outputs = outputs.ok_or_else(|| perr(0, "missing `outputs:` header"))?;
    let initial = initial.ok_or_else(|| perr(0, "missing `initial:` header"))?;
    if inputs.is_empty() {
        return Err(perr(0, "the input alphabet must be non-empty"));
    }
    let inputs = Alphabet::sorted(inputs).map_err(|e| perr(0, e.to_string()))?;
    let outputs = Alphabet::new(outputs).map_err(|e| perr(0, e.to_string()))?;

    let declared = states.is_some();
    let mut names = states.unwrap_or_default();
    if !declared {
        names.push(initial.clone());
        for t in &raw {
            for s in [&t.from, &t.to] {
                if !names.contains(s) {
                    names.push(s.clone());
                }
            }
        }
    }
    let lookup = |names: &[String], s: &str, line: usize| {
        names
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| perr(line, format!("undeclared state `{s}`")))
    };
    let init = lookup(&names, &initial, 0)?;
    let mut m =
        MealyMachine::new(inputs.clone(), outputs.clone(), names.clone(), init).map_err(|e| perr(0, e.to_string()))?;
    for t in raw {
        let from = lookup(&names, &t.from, t.line)?;
        let to = lookup(&names, &t.to, t.line)?;
        let i = inputs
            .index_of(&t.input)
            .ok_or_else(|| perr(t.line, format!("undeclared input `{}`", t.input)))?;
        let o = outputs
            .index_of(&t.output)
            .ok_or_else(|| perr(t.line, format!("undeclared output `{}`", t.output)))?;
        m.add_transition(from, Input(i), to, Output(o)).map_err(|e| match e {
            Error::Parse { message, .. } => perr(t.line, message),
            e => e,
        })?;
    }
    Ok(m)
}

pub fn serialize_machine(m: &MealyMachine) -> String {
    let mut out = String::from("mealy\n");
    let _ = writeln!(out, "inputs: {}", m.inputs().names().join(" "));
    let _ = writeln!(out, "outputs: {}", m.outputs().names().join(" "));
    let _ = writeln!(out, "states: {}", m.state_names().join(" "));
    let _ = writeln!(out, "initial: {}", m.state_name(m.initial()));
    for q in m.states() {
        for i in m.inputs().inputs() {
            if let Some((t, o)) = m.transition(q, i) {
                let _ = writeln!(
                    out,
                    "{} -{}/{}-> {}",
                    m.state_name(q),
                    m.inputs().name(i.0),
                    m.outputs().name(o.0),
                    m.state_name(t)
                );
            }
        }
    }
    out
}

/// Graphviz rendering; one edge per transition.
pub fn to_dot(m: &MealyMachine) -> String {
    let mut out = String::from("digraph mealy {\n  rankdir=LR;\n  __start [shape=point];\n");
    for q in m.states() {
        let _ = writeln!(out, "  s{q} [shape=circle, label={:?}];", m.state_name(q));
    }
    let _ = writeln!(out, "  __start -> s{};", m.initial());
    for q in m.states() {
        for i in m.inputs().inputs() {
            if let Some((t, o)) = m.transition(q, i) {
                let label = format!("{}/{}", m.inputs().name(i.0), m.outputs().name(o.0));
                let _ = writeln!(out, "  s{q} -> s{t} [label={label:?}];");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Word list in suite syntax; ε is always included. Used for state covers.
pub fn parse_cover_words(inputs: &Alphabet, text: &str) -> Result<Vec<Word>> {
    let mut words: BTreeSet<Word> = TestSuite::parse(inputs, text)?.tests().cloned().collect();
    words.insert(Word::empty());
    Ok(words.into_iter().collect())
}

/// `state: word ; word ; ...` per line. States not listed get no words.
pub fn parse_identifiers(m: &MealyMachine, text: &str) -> Result<SeparatingFamily> {
    let mut sets = vec![BTreeSet::new(); m.num_states()];
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (state, rest) = line
            .split_once(':')
            .ok_or_else(|| perr(n + 1, "expected `state: word ; word ...`"))?;
        let q = m
            .state_id(state.trim())
            .ok_or_else(|| perr(n + 1, format!("unknown state `{}`", state.trim())))?;
        for w in rest.split(';').map(str::trim).filter(|w| !w.is_empty()) {
            let word = m.inputs().parse_word(w).map_err(|e| perr(n + 1, e.to_string()))?;
            sets[q].insert(word);
        }
    }
    Ok(SeparatingFamily::new(sets))
}

pub fn serialize_identifiers(m: &MealyMachine, family: &SeparatingFamily) -> String {
    let mut out = String::new();
    for q in m.states() {
        let words: Vec<String> = family.get(q).iter().map(|w| m.render(w)).collect();
        let _ = writeln!(out, "{}: {}", m.state_name(q), words.join(" ; "));
    }
    out
}
