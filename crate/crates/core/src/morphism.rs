//! The elementary morphisms `L_x` and `R_x` and decoding of their images.
//!
//! `L_x` maps `x -> x` and `y -> xy`; `R_x` maps `x -> x` and `y -> yx`.
//! Images of `L_x` are parsed over the code `{x} ∪ {xy}` (every token starts
//! with `x`), images of `R_x` over `{x} ∪ {yx}` (every token ends with `x`).

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{FiniteWord, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismKind {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    kind: MorphismKind,
    letter: Letter,
    alphabet: usize,
}

impl Morphism {
    pub fn new(kind: MorphismKind, letter: Letter, alphabet: usize) -> Morphism {
        Morphism {
            kind,
            letter,
            alphabet: alphabet.max(letter.index() + 1).max(2),
        }
    }

    /// `L_x` over `{a, b}` (or the smallest alphabet containing `x`).
    pub fn l(letter: Letter) -> Morphism {
        Self::new(MorphismKind::L, letter, 2)
    }

    pub fn r(letter: Letter) -> Morphism {
        Self::new(MorphismKind::R, letter, 2)
    }

    pub fn with_alphabet(self, alphabet: usize) -> Morphism {
        Self::new(self.kind, self.letter, alphabet)
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    pub fn letter(&self) -> Letter {
        self.letter
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn image(&self, y: Letter) -> Vec<Letter> {
        let x = self.letter;
        match (self.kind, y == x) {
            (_, true) => vec![x],
            (MorphismKind::L, false) => vec![x, y],
            (MorphismKind::R, false) => vec![y, x],
        }
    }

    pub fn apply(&self, w: &[Letter]) -> FiniteWord {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &y in w {
            out.extend(self.image(y));
        }
        FiniteWord::new(out)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            MorphismKind::L => 'L',
            MorphismKind::R => 'R',
        };
        write!(f, "{k}_{}", self.letter)
    }
}

impl FromStr for Morphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Morphism> {
        let bad = |position: usize| Error::Parse {
            position,
            message: format!("expected a morphism like L_a or R_b, found {s:?}"),
        };
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('L') => MorphismKind::L,
            Some('R') => MorphismKind::R,
            _ => return Err(bad(0)),
        };
        if chars.next() != Some('_') {
            return Err(bad(1));
        }
        let letter = chars
            .next()
            .and_then(Letter::from_char)
            .ok_or_else(|| bad(2))?;
        if chars.next().is_some() {
            return Err(bad(3));
        }
        Ok(Morphism::new(kind, letter, 2))
    }
}

impl Serialize for Morphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// What certified the end of the last decoded token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyncNote {
    /// Nothing was decoded.
    Empty,
    /// The last token is closed by its own final letter (`R_x`: it ends in `x`;
    /// `L_x`: it is a two-letter codeword `xy`).
    CodewordEnd,
    /// The letter after the last token is `x`, which can only start a token.
    Lookahead,
    /// Finite-word decoding: the input simply ends.
    EndOfInput,
}

/// Token boundaries of a decoding. `boundaries` starts at 0 and ends at
/// `consumed`; the letters after `consumed` form the undecided tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodeCertificate {
    pub boundaries: Vec<usize>,
    pub consumed: usize,
    pub tail: FiniteWord,
    pub sync: SyncNote,
}

impl DecodeCertificate {
    /// Number of tokens ending at or before input position `p`, if `p` is a
    /// token boundary.
    pub fn token_index(&self, p: usize) -> Option<usize> {
        self.boundaries.binary_search(&p).ok()
    }
}

/// Decodes a prefix of an infinite word `m(t)`, returning the longest prefix
/// of `t` that the input determines. For `L_x` a trailing `x` may still be
/// the start of a two-letter token, so it is held back as the tail.
pub fn desubstitute(w: &[Letter], m: &Morphism) -> Result<(FiniteWord, DecodeCertificate)> {
    decode(w, m, true)
}

/// Decodes a finite word `w = m(t)` completely.
pub fn desubstitute_complete(
    w: &[Letter],
    m: &Morphism,
) -> Result<(FiniteWord, DecodeCertificate)> {
    decode(w, m, false)
}

fn decode(w: &[Letter], m: &Morphism, open: bool) -> Result<(FiniteWord, DecodeCertificate)> {
    let x = m.letter;
    let fail = |position: usize| Error::NotDecodable {
        morphism: m.to_string(),
        position,
    };
    let mut out = Vec::with_capacity(w.len());
    let mut boundaries = vec![0];
    let mut i = 0;
    let mut sync = SyncNote::Empty;
    while i < w.len() {
        match m.kind {
            MorphismKind::L => {
                if w[i] != x {
                    return Err(fail(i));
                }
                match w.get(i + 1) {
                    Some(&y) if y != x => {
                        out.push(y);
                        i += 2;
                        sync = SyncNote::CodewordEnd;
                    }
                    Some(_) => {
                        out.push(x);
                        i += 1;
                        sync = SyncNote::Lookahead;
                    }
                    None if open => break,
                    None => {
                        out.push(x);
                        i += 1;
                        sync = SyncNote::EndOfInput;
                    }
                }
            }
            MorphismKind::R => {
                if w[i] == x {
                    out.push(x);
                    i += 1;
                } else {
                    match w.get(i + 1) {
                        Some(&z) if z == x => {
                            out.push(w[i]);
                            i += 2;
                        }
                        Some(_) => return Err(fail(i + 1)),
                        None if open => break,
                        None => return Err(fail(i + 1)),
                    }
                }
                sync = SyncNote::CodewordEnd;
            }
        }
        boundaries.push(i);
    }
    let cert = DecodeCertificate {
        boundaries,
        consumed: i,
        tail: FiniteWord::from(&w[i..]),
        sync,
    };
    Ok((FiniteWord::new(out), cert))
}
