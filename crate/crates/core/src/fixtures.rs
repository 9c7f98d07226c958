//! Worked examples shipped with the crate. Each machine and suite lives in
//! `fixtures/` and is embedded at compile time.

use crate::format::{parse_cover_words, parse_machine};
use crate::mealy::{MealyMachine, StateCover};
use crate::suite::TestSuite;
use crate::word::Word;

macro_rules! machine {
    ($name:ident, $file:literal) => {
        pub fn $name() -> MealyMachine {
            parse_machine(include_str!(concat!("../fixtures/", $file))).expect(concat!("fixture ", $file, " parses"))
        }
    };
}

machine!(three_state_spec, "three_state_spec.fsm");
machine!(three_state_impl, "three_state_impl.fsm");
machine!(turnstile, "turnstile.fsm");
machine!(turnstile_counterexample, "turnstile_counterexample.fsm");
machine!(chain_spec, "chain_spec.fsm");
machine!(chain_impl, "chain_impl.fsm");
machine!(one_state_spec, "one_state_spec.fsm");
machine!(cotransitivity_spec, "cotransitivity_spec.fsm");
machine!(cotransitivity_impl, "cotransitivity_impl.fsm");
machine!(spy_spec, "spy_spec.fsm");
machine!(spy_impl, "spy_impl.fsm");
machine!(h_spec, "h_spec.fsm");
machine!(h_impl, "h_impl.fsm");

fn suite_for(spec: &MealyMachine, text: &str) -> TestSuite {
    TestSuite::parse(spec.inputs(), text).expect("fixture suite parses")
}

pub fn stratified_suite() -> TestSuite {
    suite_for(&three_state_spec(), include_str!("../fixtures/stratified_suite.txt"))
}

pub fn spyh_suite() -> TestSuite {
    suite_for(&turnstile(), include_str!("../fixtures/spyh_suite.txt"))
}

pub fn spy_suite() -> TestSuite {
    suite_for(&spy_spec(), include_str!("../fixtures/spy_suite.txt"))
}

pub fn h_suite() -> TestSuite {
    suite_for(&h_spec(), include_str!("../fixtures/h_suite.txt"))
}

pub fn cotransitivity_suite() -> TestSuite {
    suite_for(
        &cotransitivity_spec(),
        include_str!("../fixtures/cotransitivity_suite.txt"),
    )
}

/// Cover for `spec` from whitespace-separated words, one per line; ε is
/// implicit.
pub fn cover(spec: &MealyMachine, lines: &str) -> StateCover {
    let words = parse_cover_words(spec.inputs(), lines).expect("cover parses");
    StateCover::from_words(spec, words).expect("cover defined on spec")
}

pub fn words(spec: &MealyMachine, lines: &[&str]) -> Vec<Word> {
    lines
        .iter()
        .map(|l| spec.inputs().parse_word(l).expect("word parses"))
        .collect()
}

/// Names of the nodes of the co-transitivity tree as drawn in its usual
/// rendering, with their access words.
pub const COTRANSITIVITY_NODE_NAMES: [(&str, &str); 31] = [
    ("t0", "ε"),
    ("t1", "r"),
    ("t2", "r r"),
    ("t3", "l"),
    ("t4", "r l"),
    ("t5", "r r l"),
    ("t6", "r r r"),
    ("t7", "l l"),
    ("t8", "l r"),
    ("t9", "r l l"),
    ("t10", "r l r"),
    ("t11", "r r l l"),
    ("t12", "r r l r"),
    ("t13", "r r r l"),
    ("t14", "r r r r"),
    ("t15", "l l r"),
    ("t16", "l r r"),
    ("t17", "r l l r"),
    ("t18", "r l r r"),
    ("t19", "r r l l r"),
    ("t20", "r r l r r"),
    ("t21", "r r r l l"),
    ("t22", "r r r r r"),
    ("t23", "l l r r"),
    ("t24", "l r r r"),
    ("t25", "r l l r r"),
    ("t26", "r l r r r"),
    ("t27", "r r l l r r"),
    ("t28", "r r l r r r"),
    ("t29", "r r r l l r"),
    ("t30", "r r r r r r"),
];
