use std::cmp::Ordering;
use std::fmt;

use super::{MealyMachine, StateId};
use crate::error::{Error, Result};

/// Maximum over all states of the distance from a source set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Eccentricity {
    Finite(usize),
    /// Some state cannot be reached from any source.
    Unreachable,
}

impl Ord for Eccentricity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Eccentricity::Finite(a), Eccentricity::Finite(b)) => a.cmp(b),
            (Eccentricity::Finite(_), Eccentricity::Unreachable) => Ordering::Less,
            (Eccentricity::Unreachable, Eccentricity::Finite(_)) => Ordering::Greater,
            (Eccentricity::Unreachable, Eccentricity::Unreachable) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Eccentricity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Eccentricity {
    pub fn at_most(self, k: usize) -> bool {
        self <= Eccentricity::Finite(k)
    }
}

impl fmt::Display for Eccentricity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eccentricity::Finite(d) => write!(f, "{d}"),
            Eccentricity::Unreachable => f.write_str("∞"),
        }
    }
}

/// Contracts `sources` into one vertex and runs a single BFS.
pub fn eccentricity(m: &MealyMachine, sources: &[StateId]) -> Result<Eccentricity> {
    if sources.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    let dist = m.distances_from(sources);
    let mut max = 0;
    for d in dist {
        match d {
            Some(d) => max = max.max(d),
            None => return Ok(Eccentricity::Unreachable),
        }
    }
    Ok(Eccentricity::Finite(max))
}
