use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A word in the letters `0..n`; the empty word is the unit.
///
/// Ordering is lexicographic with a proper prefix sorting first, so with
/// `x = 0` and `y = 1` we get `x < xx < xy < y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(SmallVec<[u8; 16]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(i: u8) -> Self {
        let mut v = SmallVec::new();
        v.push(i);
        Word(v)
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Number of letters, the weight of the monomial.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: u8) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = SmallVec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenation of three slices, used by derivation expansions.
    pub fn splice(left: &[u8], middle: &[u8], right: &[u8]) -> Word {
        let mut v = SmallVec::with_capacity(left.len() + middle.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(middle);
        v.extend_from_slice(right);
        Word(v)
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Moves the first `r` letters to the end.
    pub fn rotate_left(&self, r: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let len = v.len();
            v.rotate_left(r % len);
        }
        Word(v)
    }

    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// Replaces every letter by `map[letter]`.
    pub fn relabel(&self, map: &[u8]) -> Word {
        Word(self.0.iter().map(|&l| map[l as usize]).collect())
    }

    pub fn max_letter(&self) -> Option<u8> {
        self.0.iter().copied().max()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Word({})",
            Alphabet::standard(self.max_letter().map_or(2, |m| (m as usize + 1).max(2)))
                .format(self)
        )
    }
}

/// Display names for the letters of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Alphabet {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// `x, y` for two letters, `x1, ..., xn` otherwise.
    pub fn standard(n: usize) -> Self {
        if n == 2 {
            Self::xy()
        } else if n == 1 {
            Self::new(["x"])
        } else {
            Self::new((1..=n).map(|i| format!("x{i}")))
        }
    }

    pub fn xy() -> Self {
        Self::new(["x", "y"])
    }

    /// Variables of the one-slot presentation, `z` first.
    pub fn zy() -> Self {
        Self::new(["z", "y"])
    }

    /// Free generators of the braid Lie algebra on four strands.
    pub fn t4_free() -> Self {
        Self::new(["t14", "t24", "t34"])
    }

    /// Free generators of the braid Lie algebra on three strands modulo its center.
    pub fn t3_free() -> Self {
        Self::new(["t12", "t23"])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|&l| {
                self.names
                    .get(l as usize)
                    .map_or_else(|| format!("?{l}"), |s| s.clone())
            })
            .collect()
    }

    /// Parses a word by greedy longest-name matching; `1` or the empty
    /// string is the empty word.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let mut w = Word::empty();
        if text == "1" {
            return Ok(w);
        }
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    w.push(i as u8);
                    rest = &rest[n.len()..];
                }
                None => {
                    return Err(Error::Parse(format!(
                        "cannot read `{rest}` over the alphabet {:?}",
                        self.names
                    )))
                }
            }
        }
        Ok(w)
    }
}
