//! Symbols, words and alphabets.
//!
//! Symbols are indices into an [`Alphabet`]. Input alphabets are kept sorted
//! by name, so the derived order on [`Input`] (and hence the lexicographic
//! order on [`Word`]) agrees with the order on token names.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Input(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Output(pub u16);

impl Input {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Output {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite sequence of input symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Input>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn push(&mut self, input: Input) {
        self.0.push(input);
    }

    pub fn pop(&mut self) -> Option<Input> {
        self.0.pop()
    }

    /// `self · other`
    pub fn concat(&self, other: &[Input]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn appended(&self, input: Input) -> Word {
        self.concat(&[input])
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn into_inner(self) -> Vec<Input> {
        self.0
    }

    /// All prefixes, shortest first, including ε and the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(move |n| Word(self.0[..n].to_vec()))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }
}

impl Deref for Word {
    type Target = [Input];
    fn deref(&self) -> &[Input] {
        &self.0
    }
}

impl From<Vec<Input>> for Word {
    fn from(v: Vec<Input>) -> Self {
        Word(v)
    }
}

impl FromIterator<Input> for Word {
    fn from_iter<T: IntoIterator<Item = Input>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("ε");
        }
        for (n, i) in self.word.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.name(i.0))?;
        }
        Ok(())
    }
}

/// An ordered set of symbol names, shared cheaply between machines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<Vec<String>>);

impl Alphabet {
    /// Builds an alphabet from names, rejecting duplicates and tokens with
    /// whitespace. Order is preserved.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (n, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("invalid symbol name {name:?}"),
                });
            }
            if names[..n].contains(name) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate symbol `{name}`"),
                });
            }
        }
        if names.len() > u16::MAX as usize {
            return Err(Error::Parse {
                line: 0,
                message: "alphabet too large".into(),
            });
        }
        Ok(Alphabet(Arc::new(names)))
    }

    /// Like [`Alphabet::new`] but sorts names lexicographically; used for
    /// input alphabets.
    pub fn sorted<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        Self::new(names)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, index: u16) -> &str {
        &self.0[index as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.0.iter().position(|n| n == name).map(|p| p as u16)
    }

    pub fn inputs(&self) -> impl Iterator<Item = Input> {
        (0..self.0.len() as u16).map(Input)
    }

    pub fn outputs(&self) -> impl Iterator<Item = Output> {
        (0..self.0.len() as u16).map(Output)
    }

    /// Parses a whitespace-separated word. A lone `ε` (or `eps`) is the
    /// empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "ε" || text == "eps" {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(|tok| {
                self.index_of(tok)
                    .map(Input)
                    .ok_or_else(|| Error::UnknownInput(tok.to_string()))
            })
            .collect()
    }

    pub fn render_outputs(&self, outputs: &[Output]) -> String {
        if outputs.is_empty() {
            return "ε".into();
        }
        outputs.iter().map(|o| self.name(o.0)).collect::<Vec<_>>().join(" ")
    }
}

/// All words of length at most `max_len`, in length-then-lexicographic order.
pub fn words_up_to(num_inputs: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * num_inputs);
        for w in &layer {
            for i in 0..num_inputs {
                next.push(w.appended(Input(i as u16)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_alphabet_orders_words_by_name() {
        let a = Alphabet::sorted(["p", "c"]).unwrap();
        assert_eq!(a.names(), ["c", "p"]);
        let cp = a.parse_word("c p").unwrap();
        let pc = a.parse_word("p c").unwrap();
        assert!(cp < pc);
        assert_eq!(cp.display(&a).to_string(), "c p");
        assert_eq!(Word::empty().display(&a).to_string(), "ε");
    }

    #[test]
    fn rejects_duplicates_and_unknown_tokens() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        let a = Alphabet::new(["a"]).unwrap();
        assert_eq!(a.parse_word("b"), Err(Error::UnknownInput("b".into())));
        assert_eq!(a.parse_word("ε").unwrap(), Word::empty());
    }

    #[test]
    fn words_up_to_counts() {
        let ws = words_up_to(2, 3);
        assert_eq!(ws.len(), 1 + 2 + 4 + 8);
        assert!(ws.windows(2).all(|p| p[0].len() <= p[1].len()));
    }

    #[test]
    fn prefixes_include_both_ends() {
        let w: Word = vec![Input(0), Input(1)].into();
        let ps: Vec<Word> = w.prefixes().collect();
        assert_eq!(ps.len(), 3);
        assert!(ps[0].is_empty());
        assert_eq!(ps[2], w);
        assert!(ps[1].is_prefix_of(&w));
    }
}
