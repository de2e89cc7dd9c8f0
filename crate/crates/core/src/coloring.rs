//! The two prefix colorings: richness-based (3 colors) for Sturmian words and
//! final-letter-based (`k + 1` colors) for standard episturmian words.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factors::{self, AbelianProfile, SlopeRichness};
use crate::word::{FiniteWord, Letter, SpecKind, WordSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// 0 off prefixes, 1 / 2 for prefixes rich in `a` / `b`.
    Sturmian3,
    /// 0 off prefixes, `i` for prefixes ending in the `i`-th letter.
    EpisturmianK1,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Sturmian3 => "STURMIAN_3",
            Scheme::EpisturmianK1 => "EPISTURMIAN_K1",
        })
    }
}

impl Serialize for Scheme {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How a prefix got its color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorVerdict {
    pub color: u8,
    pub prefix: bool,
    /// Richness letter (3-coloring) or final letter (episturmian coloring).
    pub letter: Option<Letter>,
    pub witness: Option<FiniteWord>,
    /// The 3-coloring fell back to the final letter because richness is
    /// undefined on this word.
    pub fallback: bool,
}

impl fmt::Display for ColorVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.color)?;
        match (self.prefix, self.letter, &self.witness) {
            (false, _, _) => write!(f, " (not a prefix)"),
            (true, Some(l), Some(w)) => write!(f, " (prefix, rich in {l}, witness {w})"),
            (true, Some(l), None) if self.fallback => {
                write!(f, " (prefix, richness undefined, ends in {l})")
            }
            (true, Some(l), None) => write!(f, " (prefix, ends in {l})"),
            (true, None, _) => write!(f, " (prefix)"),
        }
    }
}

/// A coloring bound to a word.
#[derive(Clone)]
pub struct Coloring {
    scheme: Scheme,
    spec: WordSpec,
    order: Vec<Letter>,
    forced: bool,
    cache: Arc<Mutex<Vec<u8>>>,
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coloring")
            .field("scheme", &self.scheme)
            .field("spec", &self.spec)
            .field("order", &self.order)
            .field("forced", &self.forced)
            .finish()
    }
}

impl Coloring {
    /// The 3-coloring. The word must be a two-letter Sturmian construction.
    pub fn sturmian3(spec: &WordSpec) -> Result<Coloring> {
        if spec.alphabet_size() != 2 {
            return Err(Error::NotBinary {
                alphabet: spec.alphabet_size(),
            });
        }
        if !spec.is_sturmian_candidate() {
            return Err(Error::NotSturmian {
                spec: spec.to_string(),
                reason: "not a Sturmian construction (use the forced coloring)".into(),
            });
        }
        Self::build(Scheme::Sturmian3, spec, false)
    }

    /// The `k + 1` coloring. The word must be a standard episturmian (or
    /// standard Sturmian) construction.
    pub fn episturmian(spec: &WordSpec) -> Result<Coloring> {
        let ok = match spec.kind() {
            SpecKind::Episturmian { .. } => true,
            _ => spec.is_standard() && spec.alphabet_size() == 2,
        };
        if !ok {
            return Err(Error::Unsupported(format!(
                "{spec} is not a standard episturmian construction (use the forced coloring)"
            )));
        }
        Self::build(Scheme::EpisturmianK1, spec, false)
    }

    /// Applies `scheme` to any word. Where richness is undefined the
    /// 3-coloring uses the final letter instead.
    pub fn forced(scheme: Scheme, spec: &WordSpec) -> Result<Coloring> {
        if scheme == Scheme::Sturmian3 && spec.alphabet_size() != 2 {
            return Err(Error::NotBinary {
                alphabet: spec.alphabet_size(),
            });
        }
        Self::build(scheme, spec, true)
    }

    fn build(scheme: Scheme, spec: &WordSpec, forced: bool) -> Result<Coloring> {
        Ok(Coloring {
            scheme,
            spec: spec.clone(),
            order: first_appearance(spec)?,
            forced,
            cache: Arc::default(),
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn spec(&self) -> &WordSpec {
        &self.spec
    }

    pub fn is_forced(&self) -> bool {
        self.forced
    }

    /// Letters in order of first appearance; letter `order[i]` has color
    /// `i + 1` under the episturmian scheme.
    pub fn order(&self) -> &[Letter] {
        &self.order
    }

    pub fn num_colors(&self) -> u8 {
        match self.scheme {
            Scheme::Sturmian3 => 3,
            Scheme::EpisturmianK1 => self.order.len() as u8 + 1,
        }
    }

    fn letter_color(&self, l: Letter) -> u8 {
        match self.scheme {
            Scheme::Sturmian3 => l.index() as u8 + 1,
            Scheme::EpisturmianK1 => self
                .order
                .iter()
                .position(|&x| x == l)
                .map_or(0, |i| i as u8 + 1),
        }
    }

    /// Color of a nonempty factor, with its justification.
    pub fn color(&self, v: &[Letter]) -> Result<ColorVerdict> {
        if v.is_empty() {
            return Err(Error::Contract(
                "colors are defined on nonempty factors".into(),
            ));
        }
        let p = self.spec.prefix(v.len())?;
        if &p[..] != v {
            if !factors::factor_table(&self.spec, v.len())?.contains(v) {
                return Err(Error::NotAFactor {
                    factor: FiniteWord::from(v).to_string(),
                    spec: self.spec.to_string(),
                });
            }
            return Ok(ColorVerdict {
                color: 0,
                prefix: false,
                letter: None,
                witness: None,
                fallback: false,
            });
        }
        let last = v[v.len() - 1];
        match self.scheme {
            Scheme::EpisturmianK1 => Ok(ColorVerdict {
                color: self.letter_color(last),
                prefix: true,
                letter: Some(last),
                witness: None,
                fallback: false,
            }),
            Scheme::Sturmian3 => match factors::richness(&self.spec, v) {
                Ok(r) => Ok(ColorVerdict {
                    color: self.letter_color(r.letter),
                    prefix: true,
                    letter: Some(r.letter),
                    witness: Some(r.witness),
                    fallback: false,
                }),
                Err(e) if self.forced && richness_undefined(&e) => Ok(ColorVerdict {
                    color: self.letter_color(last),
                    prefix: true,
                    letter: Some(last),
                    witness: None,
                    fallback: true,
                }),
                Err(e) => Err(e),
            },
        }
    }

    /// Colors of the prefixes of length `0..=max_len` (entry 0 is unused and 0).
    pub fn prefix_colors(&self, max_len: usize) -> Result<Vec<u8>> {
        {
            let c = self.cache.lock().expect("color cache");
            if c.len() > max_len {
                return Ok(c[..=max_len].to_vec());
            }
        }
        let have = self.cache.lock().expect("color cache").len();
        let target = max_len
            .max(have.saturating_mul(2))
            .min(self.spec.limits().max_prefix);
        let colors = self.compute_prefix_colors(target)?;
        let out = colors[..=max_len].to_vec();
        let mut c = self.cache.lock().expect("color cache");
        if colors.len() > c.len() {
            *c = colors;
        }
        Ok(out)
    }

    /// Ascending prefix lengths `1..=max_len` whose prefix has color `target`.
    pub fn color_class_prefixes(&self, target: u8, max_len: usize) -> Result<Vec<usize>> {
        if target == 0 {
            return Ok(Vec::new());
        }
        let colors = self.prefix_colors(max_len)?;
        Ok((1..=max_len).filter(|&l| colors[l] == target).collect())
    }

    fn compute_prefix_colors(&self, n: usize) -> Result<Vec<u8>> {
        let p = self.spec.prefix(n)?;
        let mut out = vec![0u8; n + 1];
        match self.scheme {
            Scheme::EpisturmianK1 => {
                for l in 1..=n {
                    out[l] = self.letter_color(p[l - 1]);
                }
            }
            Scheme::Sturmian3 => {
                let rich = self.prefix_richness(&p)?;
                for l in 1..=n {
                    let letter = rich[l].unwrap_or(p[l - 1]);
                    out[l] = self.letter_color(letter);
                }
            }
        }
        Ok(out)
    }

    /// Richness letter of each prefix of `p` (`None` where undefined, which
    /// only the forced coloring accepts).
    fn prefix_richness(&self, p: &[Letter]) -> Result<Vec<Option<Letter>>> {
        let n = p.len();
        let mut out = vec![None; n + 1];
        if let (Some(slope), true) = (self.spec.slope(), self.spec.is_sturmian_candidate()) {
            let fast = SlopeRichness::new(&slope, n);
            let mut b = 0;
            for l in 1..=n {
                b += usize::from(p[l - 1] == Letter::B);
                out[l] = Some(fast.rich_letter(l, b)?);
            }
            return Ok(out);
        }
        let max = self.spec.limits().max_prefix;
        let (mut source, exhaustive) = match self.spec.periodic_shape() {
            Some((h, q)) => ((h + q + n).min(max), true),
            None => ((4 * n + 64).min(max), false),
        };
        let profile = loop {
            let profile = AbelianProfile::new(&self.spec.prefix(source)?, n, exhaustive);
            if exhaustive || source >= max || (1..=n).all(|m| profile.settled(m)) {
                break profile;
            }
            source = (source * 2).min(max);
        };
        let mut a = 0;
        for l in 1..=n {
            a += usize::from(p[l - 1] == Letter::A);
            let r = if profile.settled(l) {
                profile.rich_letter(l, a)
            } else {
                Err(Error::Uncertified {
                    spec: self.spec.to_string(),
                    length: l,
                    reason: format!("one abelian class within {source} letters"),
                })
            };
            out[l] = match r {
                Ok(Some(x)) => Some(x),
                Ok(None) if self.forced => None,
                Err(e) if self.forced && richness_undefined(&e) => None,
                Ok(None) => {
                    return Err(Error::RichnessUndefined {
                        factor: FiniteWord::from(&p[..l]).to_string(),
                        rich: String::new(),
                    })
                }
                Err(e) => return Err(e),
            };
        }
        Ok(out)
    }
}

fn richness_undefined(e: &Error) -> bool {
    matches!(
        e,
        Error::RichnessUndefined { .. }
            | Error::NotSturmian { .. }
            | Error::Uncertified { .. }
            | Error::Unbalanced { .. }
    )
}

/// Letters of the alphabet in order of first appearance in the word.
fn first_appearance(spec: &WordSpec) -> Result<Vec<Letter>> {
    let k = spec.alphabet_size();
    let max = spec.limits().max_prefix;
    let mut n = 64.min(max);
    loop {
        let p = spec.prefix(n)?;
        let mut order: Vec<Letter> = Vec::with_capacity(k);
        for &l in p.iter() {
            if !order.contains(&l) {
                order.push(l);
                if order.len() == k {
                    return Ok(order);
                }
            }
        }
        if n >= max {
            // Letters that never show up keep their alphabet order at the end.
            for l in (0..k).filter_map(Letter::new) {
                if !order.contains(&l) {
                    order.push(l);
                }
            }
            return Ok(order);
        }
        n = (n * 4).min(max);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> WordSpec {
        WordSpec::parse(s).unwrap()
    }

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn fibonacci_colors() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        assert_eq!(c.color(&w("ba")).unwrap().color, 0);
        let ab = c.color(&w("ab")).unwrap();
        assert_eq!(ab.to_string(), "2 (prefix, rich in b, witness aa)");
        assert_eq!(c.color(&w("aba")).unwrap().color, 1);
        assert!(matches!(c.color(&w("bb")), Err(Error::NotAFactor { .. })));
    }

    #[test]
    fn tribonacci_colors() {
        let c = Coloring::episturmian(&spec("tribonacci")).unwrap();
        assert_eq!(c.order(), &[Letter::A, Letter::B, Letter::new(2).unwrap()]);
        assert_eq!(c.color(&w("abac")).unwrap().color, 3);
        assert_eq!(c.color(&w("ba")).unwrap().color, 0);
        assert_eq!(c.num_colors(), 4);
    }

    #[test]
    fn fibonacci_classes() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        // the 12th letter of abaababaabaab is a
        assert_eq!(
            c.color_class_prefixes(1, 12).unwrap(),
            [1, 3, 4, 6, 8, 9, 11, 12]
        );
        assert_eq!(c.color_class_prefixes(2, 12).unwrap(), [2, 5, 7, 10]);
        assert_eq!(c.color_class_prefixes(2, 13).unwrap(), [2, 5, 7, 10, 13]);
        assert!(c.color_class_prefixes(0, 12).unwrap().is_empty());
    }

    #[test]
    fn fast_prefix_colors_agree_with_tables() {
        for s in [
            "fibonacci",
            "mech:cf=[0;3,(1,2)],rho=1/3",
            "exchange:sturmian:d=2,(1,3)*",
        ] {
            let c = Coloring::sturmian3(&spec(s)).unwrap();
            let fast = c.prefix_colors(120).unwrap();
            let p = c.spec().prefix(120).unwrap();
            for l in 1..=120 {
                assert_eq!(fast[l], c.color(&p[..l]).unwrap().color, "{s} length {l}");
            }
        }
    }

    #[test]
    fn standard_words_color_by_last_letter() {
        for s in [
            "fibonacci",
            "sturmian:d=2,(1,3)*",
            "mech:cf=[0;3,(1,2)],rho=0",
        ] {
            let c = Coloring::sturmian3(&spec(s)).unwrap();
            let colors = c.prefix_colors(3000).unwrap();
            let p = c.spec().prefix(3000).unwrap();
            for l in 1..=3000 {
                assert_eq!(colors[l], p[l - 1].index() as u8 + 1, "{s} length {l}");
            }
        }
    }

    #[test]
    fn two_letter_episturmian_matches_sturmian3() {
        let f = spec("epi:dir=(ab)*");
        assert_eq!(
            f.prefix(200).unwrap(),
            spec("fibonacci").prefix(200).unwrap()
        );
        let three = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        let epi = Coloring::episturmian(&f).unwrap();
        assert_eq!(
            three.prefix_colors(500).unwrap(),
            epi.prefix_colors(500).unwrap()
        );
    }

    #[test]
    fn forced_on_periodic_word() {
        let per = spec("literal:(ab)*");
        assert!(Coloring::sturmian3(&per).is_err());
        let c = Coloring::forced(Scheme::Sturmian3, &per).unwrap();
        assert_eq!(c.color_class_prefixes(1, 8).unwrap(), [1, 3, 5, 7]);
        assert_eq!(c.color_class_prefixes(2, 8).unwrap(), [2, 4, 6, 8]);
        let ab = c.color(&w("ab")).unwrap();
        assert!(ab.fallback);
        assert_eq!(ab.color, 2);
    }
}
