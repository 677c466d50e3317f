//! Letters of the four-letter alphabet, words over it, and the string
//! combinatorics the rest of the crate is built on.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Index};
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One of the four letters `x`, `y`, `z`, `p`.
///
/// `x` and `y` act as opening and closing brackets, `p` delimits leaves and
/// blocks, and `z` is the only letter that survives [`pi`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
    Z,
    P,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::X, Letter::Y, Letter::Z, Letter::P];

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
            Letter::Z => 'z',
            Letter::P => 'p',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'x' => Some(Letter::X),
            'y' => Some(Letter::Y),
            'z' => Some(Letter::Z),
            'p' => Some(Letter::P),
            _ => None,
        }
    }

    /// Position in [`Letter::ALL`], used for base-4 word indexing.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {ch:?} at byte offset {offset}; expected one of x, y, z, p")]
    InvalidLetter { ch: char, offset: usize },
    #[error("the pattern must be a nonempty word")]
    EmptyPattern,
}

/// A finite word over `{x, y, z, p}`, possibly empty.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn parse(s: &str) -> Result<Self, WordError> {
        s.char_indices()
            .map(|(offset, ch)| Letter::from_char(ch).ok_or(WordError::InvalidLetter { ch, offset }))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// The `index`-th word of length `len` in base-4 order over [`Letter::ALL`],
    /// most significant letter first.
    pub fn from_index(mut index: u64, len: usize) -> Self {
        let mut letters = vec![Letter::X; len];
        for slot in letters.iter_mut().rev() {
            *slot = Letter::ALL[(index % 4) as usize];
            index /= 4;
        }
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// `letter` repeated `n` times.
    pub fn power(letter: Letter, n: usize) -> Word {
        Word(vec![letter; n])
    }

    /// Start positions of `t` in `self`, overlapping occurrences included.
    fn positions<'a>(&'a self, t: &'a Word) -> impl Iterator<Item = usize> + 'a {
        let n = t.len();
        self.0.windows(n.max(1)).enumerate().filter(move |(_, w)| n > 0 && *w == t.letters()).map(|(i, _)| i)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl Index<usize> for Word {
    type Output = Letter;

    fn index(&self, i: usize) -> &Letter {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A word `z^len` over the one-letter alphabet `{z}`, stored only by its length.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnaryWord {
    pub len: BigUint,
}

impl UnaryWord {
    pub fn new(len: impl Into<BigUint>) -> Self {
        UnaryWord { len: len.into() }
    }
}

impl Add for UnaryWord {
    type Output = UnaryWord;

    fn add(self, rhs: UnaryWord) -> UnaryWord {
        UnaryWord { len: self.len + rhs.len }
    }
}

impl fmt::Display for UnaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^{}", self.len)
    }
}

/// Number of suffixes of `w` that start with `t`. Overlapping occurrences
/// are all counted, so `occur(zzz, zz) = 2`.
pub fn occur(w: &Word, t: &Word) -> Result<usize, WordError> {
    if t.is_empty() {
        return Err(WordError::EmptyPattern);
    }
    Ok(w.positions(t).count())
}

/// Occurrences of a single letter.
pub fn occur_letter(w: &Word, a: Letter) -> usize {
    w.letters().iter().filter(|&&l| l == a).count()
}

pub fn prefixes(w: &Word) -> BTreeSet<Word> {
    (0..=w.len()).map(|i| w.slice(0, i)).collect()
}

pub fn suffixes(w: &Word) -> BTreeSet<Word> {
    (0..=w.len()).map(|i| w.slice(i, w.len())).collect()
}

pub fn factors(w: &Word) -> BTreeSet<Word> {
    let n = w.len();
    let mut out = BTreeSet::new();
    out.insert(Word::empty());
    for i in 0..n {
        for j in i + 1..=n {
            out.insert(w.slice(i, j));
        }
    }
    out
}

/// Replaces the leftmost occurrence of `v` in `w` by `u`; returns `w`
/// unchanged when `v` does not occur.
pub fn replace(w: &Word, v: &Word, u: &Word) -> Result<Word, WordError> {
    if v.is_empty() {
        return Err(WordError::EmptyPattern);
    }
    let Some(at) = w.positions(v).next() else {
        return Ok(w.clone());
    };
    let mut out = Vec::with_capacity(w.len() - v.len() + u.len());
    out.extend_from_slice(&w.letters()[..at]);
    out.extend_from_slice(u.letters());
    out.extend_from_slice(&w.letters()[at + v.len()..]);
    Ok(Word(out))
}

/// Length of the longest run of consecutive `x` letters; 0 when `x` is absent.
pub fn height(w: &Word) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &l in w {
        if l == Letter::X {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// The erasing homomorphism that keeps `z` and deletes every other letter.
pub fn pi(w: &Word) -> UnaryWord {
    UnaryWord::new(occur_letter(w, Letter::Z))
}
