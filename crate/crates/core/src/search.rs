//! Exhaustive enumeration of monochromatic prefix factorizations.
//!
//! The tree's root is the empty factorization. A node covering `k` letters
//! has one child per prefix length `l` in the target color class with
//! `s[k..k+l) = s[0..l)`, that is `l <= lce(k)`. Root children are limited
//! to `l <= max_len`; below the root, `lce(k)` itself bounds the branching.
//! For an aperiodic word every `lce(k)` is finite, and a tree with no
//! truncated node is finite.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coloring::{Coloring, Scheme};
use crate::error::{Error, Result};
use crate::word::{FiniteWord, Letter, WordSpec};

/// Tag embedded in every serialized report.
pub const REPORT_VERSION: &str = "sturmlab-search/1";
pub const DEFAULT_MAX_LEN: usize = 2000;
pub const DEFAULT_BUDGET: u64 = 10_000_000;
const SOUNDNESS_SAMPLES: usize = 100;
const SOUNDNESS_SEED: u64 = 0x005e_ed0f_b10c;

/// Block lengths tiling a prefix of a word, every block being a prefix of
/// the word that also occurs at its offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    spec: WordSpec,
    blocks: Vec<usize>,
}

impl Factorization {
    pub fn new(spec: &WordSpec, blocks: Vec<usize>) -> Result<Factorization> {
        let f = Factorization {
            spec: spec.clone(),
            blocks,
        };
        f.validate()?;
        Ok(f)
    }

    /// Checks every block against the word by direct comparison.
    pub fn validate(&self) -> Result<()> {
        let p = self.spec.prefix(self.covered())?;
        let mut off = 0;
        for (i, &l) in self.blocks.iter().enumerate() {
            if l == 0 {
                return Err(Error::Contract(format!("block {i} is empty")));
            }
            if p[off..off + l] != p[..l] {
                return Err(Error::Contract(format!(
                    "block {i} ({}) at offset {off} is not the prefix of length {l} ({})",
                    FiniteWord::from(&p[off..off + l]),
                    FiniteWord::from(&p[..l]),
                )));
            }
            off += l;
        }
        Ok(())
    }

    pub fn spec(&self) -> &WordSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn covered(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Start offset of every block.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |off, &l| {
                let o = *off;
                *off += l;
                Some(o)
            })
            .collect()
    }

    pub fn words(&self) -> Result<Vec<FiniteWord>> {
        let p = self
            .spec
            .prefix(self.blocks.iter().copied().max().unwrap_or(0))?;
        Ok(self
            .blocks
            .iter()
            .map(|&l| FiniteWord::from(&p[..l]))
            .collect())
    }
}

/// Longest `l <= cap` with `s[k..k+l) = s[0..l)`, and whether a mismatch was
/// seen before `cap`.
pub fn lce(spec: &WordSpec, k: usize, cap: usize) -> Result<(usize, bool)> {
    let p = spec.prefix(k + cap)?;
    let l = (0..cap).find(|&i| p[k + i] != p[i]).unwrap_or(cap);
    Ok((l, l < cap))
}

/// Longest common extensions of the word with its shifts, from the Z-array
/// of a materialised prefix that grows on demand.
#[derive(Clone, Debug)]
pub struct LceTable {
    spec: WordSpec,
    z: Vec<usize>,
    limit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Lce {
    pub len: usize,
    pub exact: bool,
}

impl LceTable {
    pub fn new(spec: &WordSpec, initial: usize) -> Result<LceTable> {
        let limit = spec.limits().max_prefix;
        let mut t = LceTable {
            spec: spec.clone(),
            z: Vec::new(),
            limit,
        };
        t.rebuild(initial.clamp(2, limit))?;
        Ok(t)
    }

    pub fn horizon(&self) -> usize {
        self.z.len()
    }

    fn rebuild(&mut self, n: usize) -> Result<()> {
        self.z = z_array(&self.spec.prefix(n)?);
        Ok(())
    }

    /// `lce(k)` for `k >= 1`; inexact only if the match runs to the resource
    /// bound.
    pub fn get(&mut self, k: usize) -> Result<Lce> {
        assert!(k >= 1, "lce is defined for shifts k >= 1");
        loop {
            let h = self.horizon();
            if k < h && k + self.z[k] < h {
                return Ok(Lce {
                    len: self.z[k],
                    exact: true,
                });
            }
            if h >= self.limit {
                let len = if k < h { self.z[k] } else { 0 };
                return Ok(Lce { len, exact: false });
            }
            let want = (k + 1).max(h).saturating_mul(2).min(self.limit);
            self.rebuild(want)?;
        }
    }
}

fn z_array(s: &[Letter]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Internal,
    Dead,
    Truncated,
}

/// A visited node: its blocks, what kind of node it is, and its covered length.
pub struct Node<'a> {
    pub blocks: &'a [usize],
    pub kind: NodeKind,
    pub covered: usize,
}

/// Depth-first walker over the tree. Blocks are tried in ascending order.
pub struct SearchTree {
    coloring: Coloring,
    target: u8,
    max_len: usize,
    lce: LceTable,
    class: Vec<usize>,
    class_limit: usize,
}

enum Children {
    List(Vec<usize>),
    Truncated,
}

impl SearchTree {
    pub fn new(coloring: &Coloring, target: u8, max_len: usize) -> Result<SearchTree> {
        if target >= coloring.num_colors() {
            return Err(Error::Contract(format!(
                "color {target} is not in the {} scheme (colors 0..{})",
                coloring.scheme(),
                coloring.num_colors() - 1
            )));
        }
        let spec = coloring.spec();
        let initial = (4 * max_len + 64).min(spec.limits().max_prefix);
        let mut t = SearchTree {
            coloring: coloring.clone(),
            target,
            max_len,
            lce: LceTable::new(spec, initial)?,
            class: Vec::new(),
            class_limit: 0,
        };
        t.extend_class(max_len)?;
        Ok(t)
    }

    fn extend_class(&mut self, upto: usize) -> Result<()> {
        if upto <= self.class_limit {
            return Ok(());
        }
        let limit = upto
            .max(self.class_limit.saturating_mul(2))
            .min(self.coloring.spec().limits().max_prefix);
        self.class = self.coloring.color_class_prefixes(self.target, limit)?;
        self.class_limit = limit;
        Ok(())
    }

    fn class_upto(&mut self, bound: usize) -> Result<Vec<usize>> {
        self.extend_class(bound)?;
        let end = self.class.partition_point(|&l| l <= bound);
        Ok(self.class[..end].to_vec())
    }

    fn children(&mut self, covered: usize) -> Result<Children> {
        if self.target == 0 {
            return Ok(Children::List(Vec::new()));
        }
        if covered == 0 {
            return Ok(Children::List(self.class_upto(self.max_len)?));
        }
        let lce = self.lce.get(covered)?;
        if !lce.exact {
            return Ok(Children::Truncated);
        }
        Ok(Children::List(self.class_upto(lce.len)?))
    }

    /// Visits nodes in depth-first order until the tree is exhausted or
    /// `budget` nodes have been visited. Returns false when the budget ran out.
    pub fn walk(&mut self, budget: u64, mut visit: impl FnMut(Node<'_>)) -> Result<bool> {
        struct Frame {
            covered: usize,
            children: Vec<usize>,
            next: usize,
        }
        let mut path: Vec<usize> = Vec::new();
        let mut stack: Vec<Frame> = Vec::new();
        let mut visited = 0u64;
        let mut enter = |tree: &mut SearchTree,
                         path: &[usize],
                         covered: usize,
                         stack: &mut Vec<Frame>|
         -> Result<()> {
            let kind = match tree.children(covered)? {
                Children::Truncated => NodeKind::Truncated,
                Children::List(c) if c.is_empty() => NodeKind::Dead,
                Children::List(children) => {
                    stack.push(Frame {
                        covered,
                        children,
                        next: 0,
                    });
                    NodeKind::Internal
                }
            };
            visit(Node {
                blocks: path,
                kind,
                covered,
            });
            Ok(())
        };
        enter(self, &path, 0, &mut stack)?;
        visited += 1;
        while let Some(top) = stack.last_mut() {
            if top.next == top.children.len() {
                stack.pop();
                path.pop();
                continue;
            }
            if visited >= budget {
                return Ok(false);
            }
            let l = top.children[top.next];
            top.next += 1;
            let covered = top.covered + l;
            path.push(l);
            let before = stack.len();
            enter(self, &path, covered, &mut stack)?;
            visited += 1;
            if stack.len() == before {
                path.pop();
            }
        }
        Ok(true)
    }
}

/// Subtree statistics for one root block.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RootDieout {
    pub root: usize,
    pub nodes: u64,
    /// Depth of the deepest node below this root (the root block itself is
    /// depth 1).
    pub depth: usize,
    pub max_covered: usize,
    pub truncated: u64,
}

/// A monochromatic factorization of a periodic word into copies of one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Demonstration {
    pub block: FiniteWord,
    pub color: u8,
    pub factorization: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub version: &'static str,
    pub spec: String,
    pub scheme: Scheme,
    pub forced: bool,
    pub target: u8,
    pub max_len: usize,
    pub budget: u64,
    pub complete: bool,
    pub total_nodes: u64,
    pub internal: u64,
    pub dead: u64,
    pub truncated: u64,
    pub max_depth: usize,
    pub max_covered: usize,
    /// First node of maximal depth in depth-first order.
    pub deepest: Vec<usize>,
    pub soundness_checked: usize,
    pub roots: Vec<RootDieout>,
    pub demonstration: Option<Demonstration>,
}

impl SearchReport {
    /// No truncated node and the budget was not exhausted: the tree is finite.
    pub fn is_finite(&self) -> bool {
        self.complete && self.truncated == 0
    }
}

/// Enumerates the whole tree for one color class.
pub fn enumerate_monochromatic(
    coloring: &Coloring,
    target: u8,
    max_len: usize,
    budget: u64,
) -> Result<SearchReport> {
    let mut tree = SearchTree::new(coloring, target, max_len)?;
    let mut report = SearchReport {
        version: REPORT_VERSION,
        spec: coloring.spec().to_string(),
        scheme: coloring.scheme(),
        forced: coloring.is_forced(),
        target,
        max_len,
        budget,
        complete: false,
        total_nodes: 0,
        internal: 0,
        dead: 0,
        truncated: 0,
        max_depth: 0,
        max_covered: 0,
        deepest: Vec::new(),
        soundness_checked: 0,
        roots: Vec::new(),
        demonstration: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SOUNDNESS_SEED);
    let mut sample: Vec<Vec<usize>> = Vec::new();
    let mut seen_nonroot = 0usize;
    let complete = tree.walk(budget, |node| {
        report.total_nodes += 1;
        match node.kind {
            NodeKind::Internal => report.internal += 1,
            NodeKind::Dead => report.dead += 1,
            NodeKind::Truncated => report.truncated += 1,
        }
        let depth = node.blocks.len();
        if depth > report.max_depth {
            report.max_depth = depth;
            report.deepest = node.blocks.to_vec();
        }
        report.max_covered = report.max_covered.max(node.covered);
        if let Some(&root) = node.blocks.first() {
            if report.roots.last().map(|r| r.root) != Some(root) {
                report.roots.push(RootDieout {
                    root,
                    ..RootDieout::default()
                });
            }
            let r = report.roots.last_mut().expect("pushed above");
            r.nodes += 1;
            r.depth = r.depth.max(depth);
            r.max_covered = r.max_covered.max(node.covered);
            r.truncated += u64::from(node.kind == NodeKind::Truncated);
            // reservoir sample of non-root nodes
            seen_nonroot += 1;
            if sample.len() < SOUNDNESS_SAMPLES {
                sample.push(node.blocks.to_vec());
            } else {
                let j = rng.gen_range(0..seen_nonroot);
                if j < SOUNDNESS_SAMPLES {
                    sample[j] = node.blocks.to_vec();
                }
            }
        }
    })?;
    report.complete = complete;
    for blocks in sample {
        Factorization::new(coloring.spec(), blocks)?;
        report.soundness_checked += 1;
    }
    report.demonstration = demonstration(coloring, target)?;
    Ok(report)
}

fn demonstration(coloring: &Coloring, target: u8) -> Result<Option<Demonstration>> {
    let Some((0, period)) = coloring.spec().periodic_shape() else {
        return Ok(None);
    };
    if target == 0 {
        return Ok(None);
    }
    for j in 1..=4 {
        let l = j * period;
        if coloring.prefix_colors(l)?[l] == target {
            let block = coloring.spec().prefix(l)?;
            let factorization = format!("({block})^ω");
            return Ok(Some(Demonstration {
                block,
                color: target,
                factorization,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub version: &'static str,
    pub spec: String,
    pub scheme: Scheme,
    pub verdict: Verdict,
    /// Reasons the verdict is not PASS.
    pub limiting: Vec<String>,
    pub reports: Vec<SearchReport>,
}

/// Runs [`enumerate_monochromatic`] for every color of the scheme.
pub fn verify_no_monochromatic(
    coloring: &Coloring,
    max_len: usize,
    budget: u64,
) -> Result<Verification> {
    let mut reports = Vec::new();
    let mut limiting = Vec::new();
    for target in 0..coloring.num_colors() {
        let r = enumerate_monochromatic(coloring, target, max_len, budget)?;
        if !r.complete {
            limiting.push(format!("color {target}: node budget {budget} exhausted"));
        }
        if r.truncated > 0 {
            limiting.push(format!(
                "color {target}: {} truncated nodes (lce unresolved within {} letters)",
                r.truncated,
                coloring.spec().limits().max_prefix
            ));
        }
        reports.push(r);
    }
    Ok(Verification {
        version: REPORT_VERSION,
        spec: coloring.spec().to_string(),
        scheme: coloring.scheme(),
        verdict: if limiting.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        },
        limiting,
        reports,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerRoot {
    pub length: usize,
    pub depth: usize,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCpReport {
    pub spec: String,
    pub target: u8,
    pub first_letter: Letter,
    /// Root blocks of the form `c^p` and how deep their subtrees go.
    pub power_roots: Vec<PowerRoot>,
}

/// Root blocks that are powers of the first letter, with their dieout depth.
/// In a finite tree none of them starts an infinite factorization.
pub fn check_lemma_cp(report: &SearchReport, spec: &WordSpec) -> Result<LemmaCpReport> {
    if !report.is_finite() {
        return Err(Error::Contract(format!(
            "search report for color {} is incomplete",
            report.target
        )));
    }
    let roots = report.roots.iter().map(|r| r.root).max().unwrap_or(0);
    let p = spec.prefix(roots.max(1))?;
    let c = p[0];
    let run = p.iter().take_while(|&&l| l == c).count();
    Ok(LemmaCpReport {
        spec: spec.to_string(),
        target: report.target,
        first_letter: c,
        power_roots: report
            .roots
            .iter()
            .filter(|r| r.root <= run)
            .map(|r| PowerRoot {
                length: r.root,
                depth: r.depth,
                nodes: r.nodes,
            })
            .collect(),
    })
}

/// Every distinct block in the tree satisfies `|U|_x / |U| > f_x` for its
/// richness letter `x`.
pub fn check_block_frequencies(
    coloring: &Coloring,
    target: u8,
    max_len: usize,
    budget: u64,
) -> Result<crate::factors::CheckReport> {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    let spec = coloring.spec();
    let slope = spec
        .slope()
        .ok_or_else(|| Error::Unsupported(format!("{spec} has no exact slope")))?;
    let mut tree = SearchTree::new(coloring, target, max_len)?;
    let mut blocks = BTreeSet::new();
    tree.walk(budget, |node| {
        if let Some(&l) = node.blocks.last() {
            blocks.insert(l);
        }
    })?;
    let longest = blocks.iter().copied().max().unwrap_or(0);
    let p = spec.prefix(longest)?;
    let mut report = crate::factors::CheckReport {
        check: "block-frequencies".into(),
        spec: spec.to_string(),
        bound: max_len,
        status: crate::factors::Status::Pass,
        violations: Vec::new(),
        witnesses: Vec::new(),
    };
    let fast = crate::factors::SlopeRichness::new(&slope, longest);
    for &l in &blocks {
        let u = &p[..l];
        let b = u.iter().filter(|&&x| x == Letter::B).count();
        let x = fast.rich_letter(l, b)?;
        let (f, c) = if x == Letter::B {
            (slope.clone(), b)
        } else {
            (slope.complement(), l - b)
        };
        let ratio = BigRational::new(BigInt::from(c), BigInt::from(l));
        let finding = crate::factors::Finding {
            factor: FiniteWord::from(u),
            detail: format!("rich in {x}, {c}/{l} vs f_{x} = {:.6}", f.to_f64()),
        };
        if f.cmp_rational(&ratio).is_lt() {
            if report.witnesses.len() < 8 {
                report.witnesses.push(finding);
            }
        } else {
            report.status = crate::factors::Status::Fail;
            report.violations.push(finding);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> WordSpec {
        WordSpec::parse(s).unwrap()
    }

    #[test]
    fn lce_examples() {
        let f = spec("fibonacci");
        assert_eq!(lce(&f, 2, 20).unwrap(), (1, true));
        assert_eq!(lce(&f, 3, 20).unwrap(), (3, true));
        assert_eq!(lce(&spec("literal:(a)*"), 1, 20).unwrap(), (20, false));
    }

    #[test]
    fn lce_table_matches_direct_comparison() {
        let f = spec("mech:cf=[0;3,(1,2)],rho=1/3");
        let mut t = LceTable::new(&f, 16).unwrap();
        for k in 1..400 {
            let got = t.get(k).unwrap();
            assert!(got.exact);
            assert_eq!(lce(&f, k, got.len + 1).unwrap(), (got.len, true));
        }
    }

    #[test]
    fn periodic_lce_is_inexact_at_the_bound() {
        let per = spec("literal:(ab)*").relimit(crate::word::Limits { max_prefix: 1000 });
        let mut t = LceTable::new(&per, 8).unwrap();
        assert_eq!(
            t.get(2).unwrap(),
            Lce {
                len: 998,
                exact: false
            }
        );
        assert_eq!(
            t.get(1).unwrap(),
            Lce {
                len: 0,
                exact: true
            }
        );
    }

    #[test]
    fn factorization_validation() {
        let f = spec("fibonacci");
        assert!(Factorization::new(&f, vec![3, 3]).is_ok());
        assert!(matches!(
            Factorization::new(&f, vec![2, 2]),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            Factorization::new(&f, vec![0]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn color_zero_is_root_only() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        let r = enumerate_monochromatic(&c, 0, 100, 1000).unwrap();
        assert_eq!((r.total_nodes, r.dead, r.internal), (1, 1, 0));
        assert!(enumerate_monochromatic(&c, 3, 100, 1000).is_err());
    }

    #[test]
    fn fibonacci_small_tree_invariants() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        for target in [1, 2] {
            let r = enumerate_monochromatic(&c, target, 200, 1_000_000).unwrap();
            assert!(r.is_finite());
            assert_eq!(r.dead + r.truncated + r.internal, r.total_nodes);
            assert_eq!(
                r.roots.iter().map(|x| x.nodes).sum::<u64>() + 1,
                r.total_nodes
            );
        }
    }

    #[test]
    fn fibonacci_root_dieout() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        // root "ab": s[2..] starts with aa, no color 2 prefix fits
        let r2 = enumerate_monochromatic(&c, 2, 50, 1_000_000).unwrap();
        assert_eq!(
            r2.roots[0],
            RootDieout {
                root: 2,
                nodes: 1,
                depth: 1,
                max_covered: 2,
                truncated: 0
            }
        );
        let cp = check_lemma_cp(&r2, c.spec()).unwrap();
        assert!(cp.power_roots.is_empty());
        let r1 = enumerate_monochromatic(&c, 1, 50, 1_000_000).unwrap();
        let cp = check_lemma_cp(&r1, c.spec()).unwrap();
        assert_eq!(
            cp.power_roots,
            [PowerRoot {
                length: 1,
                depth: 1,
                nodes: 1
            }]
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let c = Coloring::sturmian3(&spec("fibonacci")).unwrap();
        let r = enumerate_monochromatic(&c, 1, 200, 5).unwrap();
        assert!(!r.complete);
        assert_eq!(r.total_nodes, 5);
    }
}
