//! Seeded random specifications.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mealy::{is_minimal, MealyMachine, StateId};
use crate::word::Alphabet;

/// A complete, minimal, initially connected machine with the given sizes,
/// drawn by rejection from uniformly random transition tables. Inputs are
/// named `a, b, ...` and outputs `0, 1, ...`.
///
/// Panics if no such machine exists (e.g. several states with one output).
pub fn random_spec(states: usize, inputs: usize, outputs: usize, seed: u64) -> MealyMachine {
    assert!(states >= 1 && inputs >= 1 && outputs >= 1);
    assert!(states == 1 || outputs >= 2, "{states} states need at least two outputs");
    let ins = Alphabet::new((0..inputs).map(|i| ((b'a' + i as u8) as char).to_string())).expect("distinct input names");
    let outs = Alphabet::new((0..outputs).map(|o| o.to_string())).expect("distinct output names");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let table: Vec<(StateId, u16)> = (0..states * inputs)
            .map(|_| (rng.gen_range(0..states), rng.gen_range(0..outputs) as u16))
            .collect();
        let m = MealyMachine::from_table(ins.clone(), outs.clone(), &table, 0);
        if m.is_initially_connected() && is_minimal(&m) {
            return m;
        }
    }
}

/// Like [`random_spec`] with sizes drawn from the given inclusive ranges.
pub fn random_spec_in(
    states: std::ops::RangeInclusive<usize>,
    inputs: std::ops::RangeInclusive<usize>,
    outputs: usize,
    seed: u64,
) -> MealyMachine {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let s = rng.gen_range(states);
    let i = rng.gen_range(inputs);
    random_spec(s, i, outputs, seed)
}
