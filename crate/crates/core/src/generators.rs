//! Wp, HSI and W test-suite generation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mealy::{separating_family, MealyMachine, SeparatingFamily, StateCover};
use crate::suite::TestSuite;
use crate::word::{words_up_to, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Wp,
    Hsi,
    W,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wp" => Ok(Method::Wp),
            "hsi" => Ok(Method::Hsi),
            "w" => Ok(Method::W),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown method `{other}` (expected wp, hsi or w)"),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Wp => "wp",
            Method::Hsi => "hsi",
            Method::W => "w",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub method: Method,
    pub k: usize,
    pub cover: StateCover,
    /// When absent, [`generate`] computes a harmonized family.
    pub identifiers: Option<SeparatingFamily>,
}

impl GenConfig {
    pub fn new(method: Method, k: usize, cover: StateCover) -> Self {
        GenConfig {
            method,
            k,
            cover,
            identifiers: None,
        }
    }

    pub fn with_identifiers(mut self, family: SeparatingFamily) -> Self {
        self.identifiers = Some(family);
        self
    }
}

pub fn generate(spec: &MealyMachine, config: &GenConfig) -> Result<TestSuite> {
    let family = match &config.identifiers {
        Some(f) => f.clone(),
        None => {
            spec.require_specification()?;
            separating_family(spec, true)?
        }
    };
    match config.method {
        Method::Wp => generate_wp(spec, &config.cover, config.k, &family),
        Method::Hsi => generate_hsi(spec, &config.cover, config.k, &family),
        Method::W => generate_wp(spec, &config.cover, config.k, &family.uniform()),
    }
}

/// `W ⊙ 𝒲 = {στ | σ ∈ W, τ ∈ W_{δ(q0,σ)}}`.
pub fn concat_identified<'a>(
    prefixes: impl IntoIterator<Item = &'a Word>,
    spec: &MealyMachine,
    family: &SeparatingFamily,
) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    for sigma in prefixes {
        let q = spec
            .reach(spec.initial(), sigma)
            .ok_or_else(|| Error::PrefixUndefined(spec.render(sigma)))?;
        for tau in family.get(q) {
            out.insert(sigma.concat(tau));
        }
    }
    Ok(out)
}

/// `A · I^{≤len}` in cover order, then length-then-lexicographic order.
pub fn extend_cover(spec: &MealyMachine, cover: &StateCover, len: usize) -> Vec<Word> {
    let tails = words_up_to(spec.num_inputs(), len);
    cover
        .words()
        .flat_map(|a| tails.iter().map(move |t| a.concat(t)))
        .collect()
}

fn preconditions(spec: &MealyMachine, cover: &StateCover, family: &SeparatingFamily) -> Result<()> {
    spec.require_specification()?;
    cover.check_minimal(spec)?;
    if family.num_states() != spec.num_states() {
        return Err(Error::InvalidDomain(format!(
            "identifier family has {} sets for {} states",
            family.num_states(),
            spec.num_states()
        )));
    }
    family.check_identifiers(spec)
}

/// `(A·I^{≤k+1}) ∪ (A·I^{≤k}·⋃𝒲) ∪ (A·I^{≤k+1} ⊙ 𝒲)`, normalized.
pub fn generate_wp(spec: &MealyMachine, cover: &StateCover, k: usize, family: &SeparatingFamily) -> Result<TestSuite> {
    preconditions(spec, cover, family)?;
    let long = extend_cover(spec, cover, k + 1);
    let short = extend_cover(spec, cover, k);
    let all = family.flatten();
    let mut suite: TestSuite = long.iter().cloned().collect();
    suite.extend(short.iter().flat_map(|s| all.iter().map(move |w| s.concat(w))));
    suite.extend(concat_identified(&long, spec, family)?);
    Ok(suite.normalized())
}

/// `(A·I^{≤k+1}) ∪ (A·I^{≤k+1} ⊙ 𝒲)` for a harmonized family, normalized.
pub fn generate_hsi(spec: &MealyMachine, cover: &StateCover, k: usize, family: &SeparatingFamily) -> Result<TestSuite> {
    preconditions(spec, cover, family)?;
    family.check_harmonized(spec)?;
    let long = extend_cover(spec, cover, k + 1);
    let mut suite: TestSuite = long.iter().cloned().collect();
    suite.extend(concat_identified(&long, spec, family)?);
    Ok(suite.normalized())
}

/// The Wp-method with the characterization set `⋃𝒲` as every identifier.
pub fn generate_w(spec: &MealyMachine, cover: &StateCover, k: usize) -> Result<TestSuite> {
    spec.require_specification()?;
    let family = separating_family(spec, true)?;
    generate_wp(spec, cover, k, &family.uniform())
}
