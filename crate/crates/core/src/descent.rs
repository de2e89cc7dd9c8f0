//! Descent: rewriting a monochromatic prefix factorization of `s` as one of
//! a desubstituted word `t` with a strictly shorter first block.
//!
//! For a two-letter word of type `x` (no `x̄x̄`), blocks that all end in `x`
//! are decoded under `R_x`; blocks that are all followed by `x` inside `s`
//! are decoded under `L_x`. On words of type `a` these are `R_a` and `L_a`;
//! on type `b` words using `R_b`/`L_b` directly is the same as exchanging
//! letters, descending and exchanging back.

use std::collections::HashMap;

use serde::Serialize;

use crate::coloring::{Coloring, Scheme};
use crate::error::{DescentCounterexample, Error, Result};
use crate::factors::{self, is_balanced};
use crate::morphism::{desubstitute, Morphism, MorphismKind};
use crate::search::{enumerate_monochromatic, Factorization};
use crate::word::{word_type, FiniteWord, Letter, WordSpec};

/// Which of the two cases a factorization falls in. `A` stands for the
/// type letter of the word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    #[serde(rename = "ENDS_IN_A")]
    EndsInA,
    #[serde(rename = "PREFIX_EXTENDS_BY_A")]
    PrefixExtendsByA,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub case: CaseTag,
    pub type_letter: Letter,
    pub richness: Letter,
}

/// Richness of prefixes, memoised by length.
struct PrefixRichness<'a> {
    spec: &'a WordSpec,
    memo: HashMap<usize, Letter>,
}

impl<'a> PrefixRichness<'a> {
    fn new(spec: &'a WordSpec) -> Self {
        PrefixRichness {
            spec,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, len: usize) -> Result<Letter> {
        if let Some(&l) = self.memo.get(&len) {
            return Ok(l);
        }
        let p = self.spec.prefix(len)?;
        let l = factors::richness(self.spec, &p)?.letter;
        self.memo.insert(len, l);
        Ok(l)
    }
}

fn counterexample(
    assertion: &'static str,
    spec: &WordSpec,
    blocks: &[usize],
    block_index: Option<usize>,
    detail: String,
) -> Error {
    Error::Descent(Box::new(DescentCounterexample {
        assertion,
        spec: spec.to_string(),
        blocks: blocks.to_vec(),
        block_index,
        detail,
    }))
}

/// Decides which case a factorization of a two-letter word falls in.
pub fn classify_prefix_factorization(spec: &WordSpec, blocks: &[usize]) -> Result<Classification> {
    classify(spec, blocks, &mut PrefixRichness::new(spec))
}

fn classify(
    spec: &WordSpec,
    blocks: &[usize],
    rich: &mut PrefixRichness,
) -> Result<Classification> {
    if blocks.is_empty() {
        return Err(Error::Contract("empty factorization".into()));
    }
    let f = Factorization::new(spec, blocks.to_vec())?;
    let x = word_type(spec)?;
    let richness = rich.get(blocks[0])?;
    for (i, &l) in blocks.iter().enumerate() {
        let r = rich.get(l)?;
        if r != richness {
            return Err(Error::Contract(format!(
                "block {i} is rich in {r}, block 0 in {richness}"
            )));
        }
    }
    let longest = blocks.iter().copied().max().unwrap_or(0);
    let p = spec.prefix(longest.max(f.covered()) + 1)?;
    let case = if blocks.iter().all(|&l| p[l - 1] == x) {
        CaseTag::EndsInA
    } else if blocks.iter().all(|&l| p[l] == x) {
        // Such a word starts with x: if it started with the other letter every
        // block would start with it and, by the type, end in x.
        CaseTag::PrefixExtendsByA
    } else {
        return Err(Error::NeitherCase {
            blocks: blocks.to_vec(),
        });
    };
    Ok(Classification {
        case,
        type_letter: x,
        richness,
    })
}

/// One descent step.
#[derive(Clone, Debug, Serialize)]
pub struct DescentStep {
    pub spec: WordSpec,
    pub blocks: Vec<usize>,
    pub case: Option<CaseTag>,
    /// Richness letter (two-letter words) or final letter (episturmian words)
    /// shared by all blocks, before and after descent.
    pub shared: Letter,
    pub morphism: Morphism,
    pub derived: WordSpec,
    pub derived_blocks: Vec<usize>,
    /// Trailing blocks whose end is not a certified token boundary.
    pub dropped: usize,
    /// Balance of a prefix of the derived word (two-letter words only).
    pub derived_balanced: Option<bool>,
    /// The last block of the chain was used only as the continuation of the
    /// block before it (see [`descend_chain`]).
    pub trimmed: bool,
}

/// Blocks of `t` whose images are the blocks of `s`, for the longest initial
/// run of blocks whose ends are token boundaries.
fn decode_blocks(spec: &WordSpec, blocks: &[usize], m: &Morphism) -> Result<(Vec<usize>, usize)> {
    let covered: usize = blocks.iter().sum();
    let p = spec.prefix(covered + 1)?;
    let (_, cert) = desubstitute(&p, m)?;
    let mut out = Vec::new();
    let mut off = 0;
    let mut prev = cert.token_index(0).expect("0 is a boundary");
    for &l in blocks {
        off += l;
        match cert.token_index(off) {
            Some(j) => {
                out.push(j - prev);
                prev = j;
            }
            None => break,
        }
    }
    let dropped = blocks.len() - out.len();
    Ok((out, dropped))
}

/// Checks the images, prefix property and the first-block decrease.
fn check_images(
    spec: &WordSpec,
    blocks: &[usize],
    m: &Morphism,
    derived: &WordSpec,
    vs: &[usize],
) -> Result<()> {
    let s_max = blocks.iter().copied().max().unwrap_or(0);
    let s = spec.prefix(s_max)?;
    let t_cov: usize = vs.iter().sum();
    let t = derived.prefix(t_cov.max(vs.iter().copied().max().unwrap_or(0)))?;
    let mut off = 0;
    for (i, (&u, &v)) in blocks.iter().zip(vs).enumerate() {
        if v == 0 {
            return Err(counterexample(
                "nonempty-block",
                spec,
                blocks,
                Some(i),
                "V is empty".into(),
            ));
        }
        if t[off..off + v] != t[..v] {
            return Err(counterexample(
                "block-is-prefix",
                spec,
                blocks,
                Some(i),
                format!(
                    "V = {} at offset {off} of {derived} differs from its prefix {}",
                    FiniteWord::from(&t[off..off + v]),
                    FiniteWord::from(&t[..v])
                ),
            ));
        }
        if m.apply(&t[..v])[..] != s[..u] {
            return Err(counterexample(
                "image",
                spec,
                blocks,
                Some(i),
                format!("{m}(V) differs from U"),
            ));
        }
        off += v;
    }
    if let (Some(&u1), Some(&v1)) = (blocks.first(), vs.first()) {
        if v1 >= u1 {
            return Err(counterexample(
                "first-block-shrinks",
                spec,
                blocks,
                Some(0),
                format!("|V1| = {v1} >= |U1| = {u1}"),
            ));
        }
    }
    Ok(())
}

/// Upper bound on the derived prefix checked for balance; the probe never
/// reaches past the decoded blocks.
const BALANCE_PROBE: usize = 1000;

/// Assertion name used when `R_x` yields an unbalanced word.
pub const DERIVED_BALANCED: &str = "derived-balanced";

fn unbalanced(spec: &WordSpec, blocks: &[usize], derived: &WordSpec, detail: String) -> Error {
    counterexample(
        DERIVED_BALANCED,
        spec,
        blocks,
        None,
        format!("{derived}: {detail}"),
    )
}

/// One descent step on a two-letter word whose blocks share their richness.
pub fn descend_factorization(spec: &WordSpec, blocks: &[usize]) -> Result<DescentStep> {
    let mut rich_s = PrefixRichness::new(spec);
    let class = classify(spec, blocks, &mut rich_s)?;
    let x = class.type_letter;
    let morphism = match class.case {
        CaseTag::EndsInA => Morphism::r(x),
        CaseTag::PrefixExtendsByA => Morphism::l(x),
    };
    let derived = spec.derived(morphism)?;
    let (vs, dropped) = decode_blocks(spec, blocks, &morphism)?;
    check_images(spec, blocks, &morphism, &derived, &vs)?;
    let derived_balanced = match morphism.kind() {
        MorphismKind::R => {
            let probe = derived.prefix(vs.iter().sum::<usize>().clamp(2, BALANCE_PROBE))?;
            if let Some((u, v)) = is_balanced(&probe).witness {
                return Err(unbalanced(
                    spec,
                    blocks,
                    &derived,
                    format!("{u} against {v}"),
                ));
            }
            Some(true)
        }
        MorphismKind::L => None,
    };
    let mut rich_t = PrefixRichness::new(&derived);
    for (i, &v) in vs.iter().enumerate() {
        let r = match (rich_t.get(v), morphism.kind()) {
            (Ok(r), _) => r,
            (
                Err(e @ (Error::NotSturmian { .. } | Error::RichnessUndefined { .. })),
                MorphismKind::R,
            ) => {
                return Err(unbalanced(spec, blocks, &derived, e.to_string()));
            }
            (Err(e), _) => return Err(e),
        };
        if r != class.richness {
            return Err(counterexample(
                "richness-preserved",
                spec,
                blocks,
                Some(i),
                format!("r_s(U) = {}, r_t(V) = {r}", class.richness),
            ));
        }
    }
    Ok(DescentStep {
        spec: spec.clone(),
        blocks: blocks.to_vec(),
        case: Some(class.case),
        shared: class.richness,
        morphism,
        derived,
        derived_blocks: vs,
        dropped,
        derived_balanced,
        trimmed: false,
    })
}

/// One descent step on a standard episturmian word `s = L_c(t)`, `c` its
/// first letter, for blocks that end in the same letter.
pub fn descend_episturmian(spec: &WordSpec, blocks: &[usize]) -> Result<DescentStep> {
    let f = Factorization::new(spec, blocks.to_vec())?;
    let longest = blocks.iter().copied().max().unwrap_or(0);
    let p = spec.prefix(longest.max(f.covered()).max(1))?;
    let c = p[0];
    let last = |l: usize| p[l - 1];
    let shared = last(blocks[0]);
    if let Some(i) = blocks.iter().position(|&l| last(l) != shared) {
        return Err(Error::Contract(format!(
            "block {i} ends in {}, block 0 in {shared}",
            last(blocks[i])
        )));
    }
    let morphism = Morphism::new(MorphismKind::L, c, spec.alphabet_size());
    let derived = spec.derived(morphism)?;
    let (vs, dropped) = decode_blocks(spec, blocks, &morphism)?;
    check_images(spec, blocks, &morphism, &derived, &vs)?;
    let t = derived.prefix(vs.iter().copied().max().unwrap_or(0))?;
    for (i, &v) in vs.iter().enumerate() {
        if t[v - 1] != shared {
            return Err(counterexample(
                "last-letter-preserved",
                spec,
                blocks,
                Some(i),
                format!("U ends in {shared}, V ends in {}", t[v - 1]),
            ));
        }
    }
    Ok(DescentStep {
        spec: spec.clone(),
        blocks: blocks.to_vec(),
        case: None,
        shared,
        morphism,
        derived,
        derived_blocks: vs,
        dropped,
        derived_balanced: None,
        trimmed: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceEnd {
    /// The starting chain had fewer than two blocks.
    InsufficientBlocks,
    /// Fewer than two blocks survived the last step.
    Exhausted,
    /// The first block is a single letter, which both morphisms fix.
    UnitBlock,
    /// Decoding under `R_x` gave an unbalanced word. This needs a later block
    /// longer than the repeated prefix, which a finite chain may not have.
    DerivedUnbalanced,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentTrace {
    pub spec: String,
    pub scheme: Scheme,
    pub target: u8,
    pub chain: Vec<usize>,
    pub steps: Vec<DescentStep>,
    /// `|U1|` of the starting chain followed by `|V1|` after each step.
    pub first_lengths: Vec<usize>,
    pub end: TraceEnd,
    /// Unbalanced pair or factor count behind [`TraceEnd::DerivedUnbalanced`].
    pub stopped: Option<String>,
}

/// Repeats descent from `blocks` while at least two blocks survive and the
/// first one is longer than a letter.
///
/// In an infinite factorization every block is followed by another prefix
/// block, and the two cases are told apart through that successor. The last
/// block of a finite chain has none. When the whole chain fits neither case,
/// the step is retried on the chain without its last block, which then only
/// witnesses the continuation of the block before it; such steps are marked
/// `trimmed`.
pub fn descend_chain(coloring: &Coloring, target: u8, blocks: Vec<usize>) -> Result<DescentTrace> {
    let mut trace = DescentTrace {
        spec: coloring.spec().to_string(),
        scheme: coloring.scheme(),
        target,
        chain: blocks.clone(),
        steps: Vec::new(),
        first_lengths: blocks.first().copied().into_iter().collect(),
        end: TraceEnd::InsufficientBlocks,
        stopped: None,
    };
    if blocks.len() < 2 {
        return Ok(trace);
    }
    let mut spec = coloring.spec().clone();
    let mut blocks = blocks;
    loop {
        if blocks[0] == 1 {
            trace.end = TraceEnd::UnitBlock;
            return Ok(trace);
        }
        let step = match coloring.scheme() {
            Scheme::Sturmian3 => match descend_factorization(&spec, &blocks) {
                Err(Error::NeitherCase { .. }) => {
                    descend_factorization(&spec, &blocks[..blocks.len() - 1]).map(|mut s| {
                        s.trimmed = true;
                        s
                    })
                }
                other => other,
            },
            Scheme::EpisturmianK1 => descend_episturmian(&spec, &blocks),
        };
        let step = match step {
            Err(Error::Descent(ce)) if ce.assertion == DERIVED_BALANCED => {
                trace.end = TraceEnd::DerivedUnbalanced;
                trace.stopped = Some(ce.detail);
                return Ok(trace);
            }
            other => other?,
        };
        trace.first_lengths.extend(step.derived_blocks.first());
        let next = (step.derived.clone(), step.derived_blocks.clone());
        trace.steps.push(step);
        if next.1.len() < 2 {
            trace.end = TraceEnd::Exhausted;
            return Ok(trace);
        }
        (spec, blocks) = next;
    }
}

/// Runs the search, takes its deepest chain and descends from it.
pub fn sample_descent_chain(
    coloring: &Coloring,
    target: u8,
    max_len: usize,
    budget: u64,
) -> Result<DescentTrace> {
    let report = enumerate_monochromatic(coloring, target, max_len, budget)?;
    descend_chain(coloring, target, report.deepest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> WordSpec {
        WordSpec::parse(s).unwrap()
    }

    #[test]
    fn classification_examples() {
        let f = spec("fibonacci");
        assert_eq!(
            classify_prefix_factorization(&f, &[1]).unwrap().case,
            CaseTag::EndsInA
        );
        assert_eq!(
            classify_prefix_factorization(&f, &[2]).unwrap().case,
            CaseTag::PrefixExtendsByA
        );
        assert!(matches!(
            classify_prefix_factorization(&f, &[3, 3, 1]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn unequal_richness_is_a_contract_error() {
        // "aba" rich in a, "ab" rich in b; s = aba·ab·...
        assert!(matches!(
            classify_prefix_factorization(&spec("fibonacci"), &[3, 2]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn fibonacci_chain_descends() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        let trace = sample_descent_chain(&c, 1, 300, 1_000_000).unwrap();
        assert!(trace.chain.len() >= 2);
        assert!(trace.first_lengths.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(trace.end, TraceEnd::Exhausted);
    }

    #[test]
    fn short_chain_is_skipped() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        let t = descend_chain(&c, 1, vec![3]).unwrap();
        assert_eq!(t.end, TraceEnd::InsufficientBlocks);
        assert!(t.steps.is_empty());
    }
}
