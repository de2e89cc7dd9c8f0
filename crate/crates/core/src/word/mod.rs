//! Letters, finite words and exact descriptions of infinite words.
//!
//! A [`WordSpec`] is a finite, immutable description of an infinite word.
//! Every access goes through [`WordSpec::prefix`], which materialises an
//! exact prefix; windows, factor tables and the search all read from there.

mod generate;
mod parse;
mod spec;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use spec::{Limits, PrefixCertificate, SpecKind, WordSpec, DEFAULT_MAX_PREFIX};

/// A letter of an ordered alphabet, rendered `a`, `b`, `c`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub const A: Letter = Letter(0);
    pub const B: Letter = Letter(1);

    /// Largest supported alphabet (`a` through `z`).
    pub const MAX_ALPHABET: usize = 26;

    pub fn new(index: usize) -> Option<Letter> {
        (index < Self::MAX_ALPHABET).then_some(Letter(index as u8))
    }

    pub fn from_char(c: char) -> Option<Letter> {
        c.is_ascii_lowercase().then(|| Letter(c as u8 - b'a'))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn to_char(self) -> char {
        (b'a' + self.0) as char
    }

    /// `ā = b`, `b̄ = a`; `None` outside the two-letter alphabet.
    pub fn complement(self) -> Option<Letter> {
        match self.0 {
            0 => Some(Letter::B),
            1 => Some(Letter::A),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.to_char())
    }
}

/// A finite word. Displays as a plain letter string (the empty word as `""`).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// `|w|_x`
    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn reversed(&self) -> FiniteWord {
        FiniteWord(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &[Letter]) -> FiniteWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        FiniteWord(v)
    }

    /// Number of distinct letters needed to spell the word (max index + 1).
    pub fn alphabet_hint(&self) -> usize {
        self.0.iter().map(|l| l.index() + 1).max().unwrap_or(0)
    }
}

impl Deref for FiniteWord {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<&[Letter]> for FiniteWord {
    fn from(s: &[Letter]) -> Self {
        FiniteWord(s.to_vec())
    }
}

impl From<Vec<Letter>> for FiniteWord {
    fn from(v: Vec<Letter>) -> Self {
        FiniteWord(v)
    }
}

impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.char_indices()
            .map(|(i, c)| {
                Letter::from_char(c).ok_or_else(|| Error::Parse {
                    position: i,
                    message: format!("expected a letter a-z, found {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(FiniteWord)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for FiniteWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Render a letter slice as a string.
pub fn render(letters: &[Letter]) -> String {
    letters.iter().map(|l| l.to_char()).collect()
}

/// Letterwise complement over `{a, b}`.
pub fn exchange(w: &[Letter]) -> Result<FiniteWord> {
    w.iter()
        .map(|l| {
            l.complement().ok_or(Error::NotBinary {
                alphabet: l.index() + 1,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(FiniteWord)
}

/// Returns the type letter of a binary balanced aperiodic word: `a` if `aa`
/// occurs in the first `bound` letters and `bb` does not, `b` symmetrically.
pub fn detect_type(spec: &WordSpec, bound: usize) -> Result<Letter> {
    if spec.alphabet_size() != 2 {
        return Err(Error::NotBinary {
            alphabet: spec.alphabet_size(),
        });
    }
    let p = spec.prefix(bound)?;
    let has = |x: Letter| p.windows(2).any(|w| w[0] == x && w[1] == x);
    match (has(Letter::A), has(Letter::B)) {
        (true, false) => Ok(Letter::A),
        (false, true) => Ok(Letter::B),
        (false, false) => Err(Error::TypeUndetermined { bound }),
        (true, true) => Err(Error::Unbalanced { bound }),
    }
}

/// [`detect_type`] with a bound that grows until the type is determined or
/// the prefix resource bound is reached.
pub fn word_type(spec: &WordSpec) -> Result<Letter> {
    let limit = spec.limits().max_prefix;
    let mut bound = 256.min(limit);
    loop {
        match detect_type(spec, bound) {
            Err(Error::TypeUndetermined { .. }) if bound < limit => {
                bound = (bound * 4).min(limit);
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn exchange_complements_letterwise() {
        assert_eq!(exchange(&w("abaab")).unwrap(), w("babba"));
        assert_eq!(exchange(&w("")).unwrap(), w(""));
        assert!(matches!(exchange(&w("abc")), Err(Error::NotBinary { .. })));
    }

    #[test]
    fn parse_rejects_non_letters() {
        assert!(matches!(
            "ab1".parse::<FiniteWord>(),
            Err(Error::Parse { position: 2, .. })
        ));
    }

    #[test]
    fn detect_type_cases() {
        let fib = WordSpec::parse("fibonacci").unwrap();
        assert_eq!(detect_type(&fib, 20).unwrap(), Letter::A);
        assert_eq!(
            detect_type(&fib.exchanged().unwrap(), 20).unwrap(),
            Letter::B
        );
        let per = WordSpec::parse("literal:(ab)*").unwrap();
        assert_eq!(
            detect_type(&per, 20),
            Err(Error::TypeUndetermined { bound: 20 })
        );
        let both = WordSpec::parse("literal:aabb(ab)*").unwrap();
        assert_eq!(detect_type(&both, 20), Err(Error::Unbalanced { bound: 20 }));
    }
}
