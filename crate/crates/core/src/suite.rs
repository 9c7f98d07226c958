use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

/// A finite set of preset input words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TestSuite {
    tests: BTreeSet<Word>,
}

impl TestSuite {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, test: Word) -> bool {
        self.tests.insert(test)
    }

    pub fn remove(&mut self, test: &Word) -> bool {
        self.tests.remove(test)
    }

    pub fn contains(&self, test: &Word) -> bool {
        self.tests.contains(test)
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }

    /// All tests in lexicographic order.
    pub fn tests(&self) -> impl Iterator<Item = &Word> + '_ {
        self.tests.iter()
    }

    /// Tests that are not a proper prefix of another test, in lexicographic
    /// order. Extensions of `w` follow `w` directly in that order, so one
    /// look-ahead suffices.
    pub fn maximal(&self) -> impl Iterator<Item = &Word> + '_ {
        let mut it = self.tests.iter().peekable();
        std::iter::from_fn(move || loop {
            let w = it.next()?;
            match it.peek() {
                Some(next) if w.is_prefix_of(next) => continue,
                _ => return Some(w),
            }
        })
    }

    /// Keeps only the maximal tests. Passing a test implies passing all of
    /// its prefixes, so verdicts are unchanged.
    pub fn normalized(&self) -> TestSuite {
        TestSuite {
            tests: self.maximal().cloned().collect(),
        }
    }

    /// `Pref(T)`, always containing ε.
    pub fn prefix_closure(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::from([Word::empty()]);
        for t in &self.tests {
            out.extend(t.prefixes());
        }
        out
    }

    pub fn is_subset(&self, other: &TestSuite) -> bool {
        self.tests.is_subset(&other.tests)
    }

    /// Every prefix-closed member of `self` is a prefix of some test of
    /// `other`; the natural inclusion for normalized suites.
    pub fn is_covered_by(&self, other: &TestSuite) -> bool {
        let pref = other.prefix_closure();
        self.tests.iter().all(|t| pref.contains(t))
    }

    /// Parses one test per line, tokens separated by whitespace. `#` starts
    /// a comment line; blank lines are ignored; a lone `ε` is the empty test.
    pub fn parse(inputs: &Alphabet, text: &str) -> Result<TestSuite> {
        let mut suite = TestSuite::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w = inputs.parse_word(line).map_err(|e| Error::Parse {
                line: n + 1,
                message: e.to_string(),
            })?;
            suite.insert(w);
        }
        Ok(suite)
    }

    /// Normalized form: maximal tests, sorted, one per line.
    pub fn serialize(&self, inputs: &Alphabet) -> String {
        let mut out = String::new();
        for t in self.maximal() {
            out.push_str(&t.display(inputs).to_string());
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Word> for TestSuite {
    fn from_iter<T: IntoIterator<Item = Word>>(iter: T) -> Self {
        TestSuite {
            tests: iter.into_iter().collect(),
        }
    }
}

impl Extend<Word> for TestSuite {
    fn extend<T: IntoIterator<Item = Word>>(&mut self, iter: T) {
        self.tests.extend(iter)
    }
}
