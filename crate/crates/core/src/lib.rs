//! Conformance testing of Mealy machines with apartness.
//!
//! The crate builds testing trees from test suites, computes apartness on
//! their nodes, and decides a sufficient condition for k-A-completeness and
//! m-completeness. It also generates Wp, HSI and W suites, samples and
//! enumerates machines from fault domains, and searches for counterexamples.

pub mod checker;
pub mod error;
pub mod fault;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod mealy;
pub mod obs;
pub mod random;
pub mod reproduce;
pub mod suite;
pub mod word;

pub use error::{Error, Result};
pub use mealy::{MealyMachine, PassVerdict, StateCover, StateId};
pub use obs::{build_testing_tree, ApartnessMatrix, BasisStratification, NodeId, ObservationTree};
pub use suite::TestSuite;
pub use word::{Alphabet, Input, Output, Word};
