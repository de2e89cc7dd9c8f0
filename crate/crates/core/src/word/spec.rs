use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{generate, parse, FiniteWord, Letter};
use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::morphism::Morphism;

/// Default cap on the length of any materialised prefix.
pub const DEFAULT_MAX_PREFIX: usize = 1_000_000;

/// Name of the environment variable that overrides [`DEFAULT_MAX_PREFIX`].
pub const MAX_PREFIX_ENV: &str = "STURMLAB_MAX_PREFIX";

/// Resource bounds applied to prefix generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_prefix: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_prefix: DEFAULT_MAX_PREFIX,
        }
    }
}

impl Limits {
    /// Default limits, with `STURMLAB_MAX_PREFIX` applied when set. Read once
    /// per process.
    pub fn from_env() -> Limits {
        static ENV: OnceLock<Limits> = OnceLock::new();
        *ENV.get_or_init(|| {
            std::env::var(MAX_PREFIX_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
                .map(|max_prefix| Limits { max_prefix })
                .unwrap_or_default()
        })
    }
}

/// The constructors an infinite word can come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecKind {
    /// Characteristic Sturmian word of the directive sequence `d1, d2, ...`,
    /// built from the standard sequence `s_m = s_{m-1}^{d_m} s_{m-2}`.
    Sturmian { head: Vec<u32>, tail: Vec<u32> },
    /// Standard episturmian word with directive word `x1 x2 ...`.
    Episturmian {
        head: Vec<Letter>,
        tail: Vec<Letter>,
    },
    /// Lower mechanical word of slope `cf` and intercept `rho`, read from
    /// position 1: letter `n >= 1` is `b` iff
    /// `floor(alpha(n+1)+rho) - floor(alpha n+rho) = 1`.
    Mechanical {
        slope: ContinuedFraction,
        rho: BigRational,
    },
    /// Fixed point of a non-erasing substitution prolongable on `seed`.
    Morphic {
        images: Vec<FiniteWord>,
        seed: Letter,
    },
    /// `head tail tail tail ...`
    Literal { head: FiniteWord, tail: FiniteWord },
    /// Letterwise exchange of a binary word.
    Exchanged(WordSpec),
    /// The word `t` with `parent = morphism(t)`.
    Derived {
        parent: WordSpec,
        morphism: Morphism,
    },
}

/// An exact, lazily expanded infinite word.
///
/// Cloning is cheap and clones share the prefix cache; a cache hit and a
/// recomputation always return the same letters.
#[derive(Clone)]
pub struct WordSpec {
    kind: Arc<SpecKind>,
    limits: Limits,
    cache: Arc<RwLock<Vec<Letter>>>,
}

impl PartialEq for WordSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for WordSpec {}

impl fmt::Debug for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordSpec({self})")
    }
}

/// A prefix together with the request that produced it.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PrefixCertificate {
    pub requested: usize,
    pub word: FiniteWord,
    pub exact: bool,
}

impl WordSpec {
    /// Validates `kind` and wraps it with limits taken from the environment.
    pub fn new(kind: SpecKind) -> Result<WordSpec> {
        Self::with_limits(kind, Limits::from_env())
    }

    pub fn with_limits(kind: SpecKind, limits: Limits) -> Result<WordSpec> {
        validate(&kind)?;
        let spec = WordSpec {
            kind: Arc::new(kind),
            limits,
            cache: Arc::default(),
        };
        if let SpecKind::Derived { .. } = spec.kind() {
            // Surface non-decodable parents at construction time.
            spec.prefix(64.min(limits.max_prefix / 4))?;
        }
        Ok(spec)
    }

    /// Parses the text form (see the crate docs for the grammar).
    pub fn parse(text: &str) -> Result<WordSpec> {
        parse::parse_spec(text, Limits::from_env())
    }

    pub fn parse_with_limits(text: &str, limits: Limits) -> Result<WordSpec> {
        parse::parse_spec(text, limits)
    }

    pub fn fibonacci() -> WordSpec {
        Self::new(SpecKind::Sturmian {
            head: vec![],
            tail: vec![1],
        })
        .expect("valid")
    }

    pub fn tribonacci() -> WordSpec {
        Self::new(SpecKind::Episturmian {
            head: vec![],
            tail: vec![Letter::A, Letter::B, Letter(2)],
        })
        .expect("valid")
    }

    pub fn kind(&self) -> &SpecKind {
        &self.kind
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Same word with different resource limits (fresh cache).
    pub fn relimit(&self, limits: Limits) -> WordSpec {
        WordSpec {
            kind: self.kind.clone(),
            limits,
            cache: Arc::default(),
        }
    }

    /// `exchange_spec`: a wrapper whose prefixes are letterwise complements.
    pub fn exchanged(&self) -> Result<WordSpec> {
        if self.alphabet_size() != 2 {
            return Err(Error::NotBinary {
                alphabet: self.alphabet_size(),
            });
        }
        Self::with_limits(SpecKind::Exchanged(self.clone()), self.limits)
    }

    /// The word `t` with `self = morphism(t)`.
    pub fn derived(&self, morphism: Morphism) -> Result<WordSpec> {
        Self::with_limits(
            SpecKind::Derived {
                parent: self.clone(),
                morphism,
            },
            self.limits,
        )
    }

    /// Size of the alphabet the word is written over (at least 2).
    pub fn alphabet_size(&self) -> usize {
        match self.kind() {
            SpecKind::Sturmian { .. } | SpecKind::Mechanical { .. } | SpecKind::Exchanged(_) => 2,
            SpecKind::Episturmian { head, tail } => max_index(head.iter().chain(tail)),
            SpecKind::Morphic { images, .. } => images.len().max(2),
            SpecKind::Literal { head, tail } => max_index(head.iter().chain(tail.iter())),
            SpecKind::Derived { parent, morphism } => {
                parent.alphabet_size().max(morphism.alphabet())
            }
        }
    }

    /// True when the constructor guarantees (or, for derived words, is meant
    /// to produce) a Sturmian word. Factor tables of these words are certified
    /// by the complexity `m + 1`.
    pub fn is_sturmian_candidate(&self) -> bool {
        match self.kind() {
            SpecKind::Sturmian { .. } | SpecKind::Mechanical { .. } => true,
            SpecKind::Episturmian { .. } => self.alphabet_size() == 2,
            SpecKind::Exchanged(p) => p.is_sturmian_candidate(),
            SpecKind::Derived { parent, .. } => {
                self.alphabet_size() == 2 && parent.is_sturmian_candidate()
            }
            SpecKind::Morphic { .. } | SpecKind::Literal { .. } => false,
        }
    }

    /// True for standard (characteristic) constructions: Sturmian directive,
    /// episturmian directive, and mechanical words with intercept 0.
    pub fn is_standard(&self) -> bool {
        match self.kind() {
            SpecKind::Sturmian { .. } | SpecKind::Episturmian { .. } => true,
            SpecKind::Mechanical { rho, .. } => rho.is_zero(),
            SpecKind::Exchanged(p) => p.is_standard(),
            _ => false,
        }
    }

    /// `(head length, period)` when the word is eventually periodic by
    /// construction.
    pub fn periodic_shape(&self) -> Option<(usize, usize)> {
        match self.kind() {
            SpecKind::Literal { head, tail } => Some((head.len(), tail.len())),
            SpecKind::Exchanged(p) => p.periodic_shape(),
            _ => None,
        }
    }

    /// Exact slope (frequency of `b`) when the constructor carries one.
    pub fn slope(&self) -> Option<ContinuedFraction> {
        match self.kind() {
            SpecKind::Sturmian { head, tail } => Some(directive_slope(head, tail)),
            SpecKind::Mechanical { slope, .. } => Some(slope.clone()),
            SpecKind::Exchanged(p) => p.slope().map(|cf| cf.complement()),
            _ => None,
        }
    }

    /// The exact prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Result<FiniteWord> {
        if n > self.limits.max_prefix {
            return Err(Error::PrefixLimit {
                requested: n,
                limit: self.limits.max_prefix,
            });
        }
        {
            let cached = self.cache.read().expect("cache lock");
            if cached.len() >= n {
                return Ok(FiniteWord::from(&cached[..n]));
            }
        }
        let cached_len = self.cache.read().expect("cache lock").len();
        let target = match self.kind() {
            SpecKind::Derived { .. } => n,
            _ => n.max(cached_len.saturating_mul(2).min(self.limits.max_prefix)),
        };
        let letters = match self.generate(target) {
            Ok(v) => v,
            Err(_) if target > n => self.generate(n)?,
            Err(e) => return Err(e),
        };
        debug_assert!(letters.len() >= n);
        let out = FiniteWord::from(&letters[..n]);
        let mut cache = self.cache.write().expect("cache lock");
        if letters.len() > cache.len() {
            *cache = letters;
        }
        Ok(out)
    }

    /// [`prefix`](Self::prefix) wrapped with its request.
    pub fn prefix_certified(&self, n: usize) -> Result<PrefixCertificate> {
        Ok(PrefixCertificate {
            requested: n,
            word: self.prefix(n)?,
            exact: true,
        })
    }

    /// `s[k..k+n)`
    pub fn window(&self, k: usize, n: usize) -> Result<FiniteWord> {
        let end = k.checked_add(n).ok_or(Error::PrefixLimit {
            requested: usize::MAX,
            limit: self.limits.max_prefix,
        })?;
        let p = self.prefix(end)?;
        Ok(FiniteWord::from(&p[k..]))
    }

    pub fn letter_at(&self, i: usize) -> Result<Letter> {
        Ok(self.prefix(i + 1)?[i])
    }

    fn generate(&self, n: usize) -> Result<Vec<Letter>> {
        let max = self.limits.max_prefix;
        match self.kind() {
            SpecKind::Sturmian { head, tail } => Ok(generate::standard_sequence(head, tail, n)),
            SpecKind::Episturmian { head, tail } => generate::episturmian(head, tail, n),
            SpecKind::Mechanical { slope, rho } => Ok(generate::mechanical(slope, rho, n)),
            SpecKind::Morphic { images, seed } => Ok(generate::morphic(images, *seed, n)),
            SpecKind::Literal { head, tail } => Ok(generate::literal(head, tail, n)),
            SpecKind::Exchanged(p) => Ok(super::exchange(&p.prefix(n)?)?.into_letters()),
            SpecKind::Derived { parent, morphism } => generate::derived(parent, morphism, n, max),
        }
    }
}

fn max_index<'a>(letters: impl Iterator<Item = &'a Letter>) -> usize {
    letters.map(|l| l.index() + 1).max().unwrap_or(0).max(2)
}

/// `[0; 1+d1, d2, d3, ...]` for the directive sequence `d`.
pub(crate) fn directive_slope(head: &[u32], tail: &[u32]) -> ContinuedFraction {
    let (cf_head, cf_tail) = if head.is_empty() {
        let mut h = vec![1 + tail[0]];
        h.extend_from_slice(&tail[1..]);
        (h, tail.to_vec())
    } else {
        let mut h = vec![1 + head[0]];
        h.extend_from_slice(&head[1..]);
        (h, tail.to_vec())
    };
    ContinuedFraction::new(cf_head, cf_tail).expect("positive quotients")
}

fn validate(kind: &SpecKind) -> Result<()> {
    match kind {
        SpecKind::Sturmian { head, tail } => {
            if tail.is_empty() {
                return Err(Error::InvalidSpec {
                    rule: "directive-tail-nonempty",
                    detail: "Sturmian directive needs a nonempty periodic tail".into(),
                });
            }
            if head.iter().chain(tail).any(|&d| d == 0) {
                return Err(Error::InvalidSpec {
                    rule: "directive-positive",
                    detail: "directive entries must be positive integers".into(),
                });
            }
        }
        SpecKind::Episturmian { tail, .. } => {
            let first = tail.first().ok_or(Error::InvalidSpec {
                rule: "directive-tail-nonempty",
                detail: "episturmian directive needs a nonempty periodic tail".into(),
            })?;
            if tail.iter().all(|l| l == first) {
                return Err(Error::InvalidSpec {
                    rule: "directive-tail-distinct-letters",
                    detail: "directive tail must contain at least 2 distinct letters".into(),
                });
            }
        }
        SpecKind::Mechanical { rho, .. } => {
            if *rho < BigRational::zero() || *rho >= BigRational::one() {
                return Err(Error::InvalidSpec {
                    rule: "intercept-range",
                    detail: format!("intercept {rho} is outside [0, 1)"),
                });
            }
        }
        SpecKind::Morphic { images, seed } => {
            let k = images.len();
            if seed.index() >= k {
                return Err(Error::InvalidSpec {
                    rule: "morphic-seed-defined",
                    detail: format!("no image given for seed {seed}"),
                });
            }
            for (i, img) in images.iter().enumerate() {
                if img.is_empty() {
                    return Err(Error::InvalidSpec {
                        rule: "morphic-non-erasing",
                        detail: format!("image of {} is empty", Letter(i as u8)),
                    });
                }
                if let Some(l) = img.iter().find(|l| l.index() >= k) {
                    return Err(Error::InvalidSpec {
                        rule: "morphic-closed",
                        detail: format!("letter {l} has no image"),
                    });
                }
            }
            let img = &images[seed.index()];
            if img.len() < 2 || img[0] != *seed {
                return Err(Error::InvalidSpec {
                    rule: "morphic-prolongable",
                    detail: format!(
                        "image of seed {seed} must start with {seed} and have length >= 2"
                    ),
                });
            }
        }
        SpecKind::Literal { tail, .. } => {
            if tail.is_empty() {
                return Err(Error::InvalidSpec {
                    rule: "literal-tail-nonempty",
                    detail: "literal word needs a nonempty periodic tail".into(),
                });
            }
        }
        SpecKind::Exchanged(p) => {
            if p.alphabet_size() != 2 {
                return Err(Error::NotBinary {
                    alphabet: p.alphabet_size(),
                });
            }
        }
        SpecKind::Derived { parent, morphism } => {
            if morphism.letter().index() >= parent.alphabet_size().max(morphism.alphabet()) {
                return Err(Error::InvalidSpec {
                    rule: "morphism-alphabet",
                    detail: format!("{morphism} does not act on the parent alphabet"),
                });
            }
        }
    }
    Ok(())
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            SpecKind::Sturmian { head, tail } => {
                write!(f, "sturmian:d=")?;
                for d in head {
                    write!(f, "{d},")?;
                }
                write!(f, "({})*", join(tail))
            }
            SpecKind::Episturmian { head, tail } => {
                write!(f, "epi:dir=")?;
                if !head.is_empty() {
                    write!(f, "{},", super::render(head))?;
                }
                write!(f, "({})*", super::render(tail))
            }
            SpecKind::Mechanical { slope, rho } => {
                write!(f, "mech:cf={slope},rho={}/{}", rho.numer(), rho.denom())
            }
            SpecKind::Morphic { images, seed } => {
                write!(f, "morphic:")?;
                for (i, img) in images.iter().enumerate() {
                    write!(f, "{}->{img};", Letter(i as u8))?;
                }
                write!(f, "seed={seed}")
            }
            SpecKind::Literal { head, tail } => write!(f, "literal:{head}({tail})*"),
            SpecKind::Exchanged(p) => write!(f, "exchange:{p}"),
            SpecKind::Derived { parent, morphism } => write!(f, "desub:{morphism}:{parent}"),
        }
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl serde::Serialize for WordSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> WordSpec {
        WordSpec::parse(s).unwrap()
    }

    #[test]
    fn fibonacci_prefix() {
        let f = spec("fibonacci");
        assert_eq!(f.prefix(11).unwrap().to_string(), "abaababaaba");
        assert_eq!(f.prefix(0).unwrap().to_string(), "");
    }

    #[test]
    fn windows() {
        let f = spec("fibonacci");
        assert_eq!(f.window(2, 4).unwrap().to_string(), "aaba");
        assert_eq!(f.window(0, 5).unwrap().to_string(), "abaab");
        assert_eq!(f.window(5, 0).unwrap().to_string(), "");
    }

    #[test]
    fn exchanged_prefix() {
        let f = spec("fibonacci").exchanged().unwrap();
        assert_eq!(f.prefix(5).unwrap().to_string(), "babba");
        assert!(spec("epi:dir=(abc)*").exchanged().is_err());
    }

    #[test]
    fn tribonacci_prefix() {
        assert_eq!(
            spec("epi:dir=(abc)*").prefix(7).unwrap().to_string(),
            "abacaba"
        );
    }

    #[test]
    fn resource_bound() {
        let f = spec("fibonacci").relimit(Limits { max_prefix: 100 });
        assert!(f.prefix(100).is_ok());
        assert_eq!(
            f.prefix(101),
            Err(Error::PrefixLimit {
                requested: 101,
                limit: 100
            })
        );
    }

    #[test]
    fn cache_is_transparent() {
        let f = spec("mech:cf=[0;3,(1,2)],rho=1/3");
        let long = f.prefix(500).unwrap();
        let fresh = f.relimit(f.limits());
        for n in [0, 1, 17, 250, 499] {
            assert_eq!(fresh.prefix(n).unwrap()[..], long[..n]);
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "sturmian:d=(1)*",
            "sturmian:d=2,3,(1,2)*",
            "epi:dir=(abc)*",
            "epi:dir=ab,(abc)*",
            "mech:cf=[0;2,(1)],rho=0/1",
            "mech:cf=[0;3,(1,2)],rho=1/3",
            "morphic:a->ab;b->ba;seed=a",
            "literal:(ab)*",
            "literal:b(ab)*",
            "exchange:sturmian:d=(1)*",
            "desub:L_a:sturmian:d=(1)*",
        ] {
            assert_eq!(spec(s).to_string(), s);
        }
    }
}
