use thiserror::Error;

/// Every failure the library reports. Words are pre-rendered with their
/// alphabet so messages stay readable without the machine at hand.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("machine is not initially connected: state `{0}` is unreachable")]
    NotInitiallyConnected(String),

    #[error("machine is not complete: state `{state}` has no transition for `{input}`")]
    NotComplete { state: String, input: String },

    #[error("machine is not minimal: states `{0}` and `{1}` are equivalent")]
    NotMinimal(String, String),

    #[error("input alphabets differ: {0:?} vs {1:?}")]
    AlphabetMismatch(Vec<String>, Vec<String>),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown input symbol `{0}`")]
    UnknownInput(String),

    #[error("eccentricity needs at least one source state")]
    EmptySourceSet,

    #[error("spec machine does not define test `{0}`")]
    TestUndefinedOnSpec(String),

    #[error("spec machine does not define prefix `{0}`")]
    PrefixUndefined(String),

    #[error("cover word `{0}` is not defined on the machine")]
    CoverWordUndefined(String),

    #[error("cover word `{0}` is not a node of the observation tree")]
    CoverWordNotInTree(String),

    #[error("state cover is not minimal: {0}")]
    CoverNotMinimal(String),

    #[error("basis is not ancestor-closed: parent of `{0}` is missing")]
    NotAncestorClosed(String),

    #[error("basis states `{0}` and `{1}` are not apart")]
    NotPairwiseApart(String, String),

    #[error("tree nodes `{0}` and `{1}` are not apart")]
    NotApart(String, String),

    #[error("identifiers are not harmonized: no common separator for `{0}` and `{1}`")]
    NotHarmonized(String, String),

    #[error("identifier for `{0}` does not separate it from `{1}`")]
    InvalidIdentifier(String, String),

    #[error("observation tree exceeds the node budget of {0}")]
    NodeBudgetExceeded(usize),

    #[error("enumeration would produce {count} machines, budget is {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("mutant sampler could not produce a domain member after {0} attempts")]
    BudgetExhausted(usize),

    #[error("the initial suite is not accepted by the checker")]
    InitialSuiteRejected,

    #[error("invalid fault domain: {0}")]
    InvalidDomain(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
