//! Factor sets, balance, special factors and the richness map.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::cf::{affine_floors, ContinuedFraction};
use crate::error::{Error, Result};
use crate::word::{FiniteWord, Letter, WordSpec};

/// How a factor table's completeness was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Two-letter word with exactly `m + 1` factors found.
    Complexity,
    /// Eventually periodic word scanned past one full period.
    Exhaustive,
    /// Factor count did not change when the scanned prefix doubled.
    SaturatedHeuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorEntry {
    pub factor: FiniteWord,
    /// `counts[i]` is the number of occurrences of letter `i` in the factor.
    pub counts: Vec<usize>,
}

/// The distinct factors of one length, in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorTable {
    pub length: usize,
    pub factors: Vec<FactorEntry>,
    pub source: usize,
    pub certificate: Certificate,
}

impl FactorTable {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.factors.iter().any(|e| &e.factor[..] == w)
    }

    pub fn words(&self) -> impl Iterator<Item = &FiniteWord> {
        self.factors.iter().map(|e| &e.factor)
    }

    /// Distinct letter-count vectors, sorted.
    pub fn abelian_classes(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.factors.iter().map(|e| e.counts.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn distinct_windows(p: &[Letter], m: usize) -> Vec<&[Letter]> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    if p.len() < m {
        return out;
    }
    for i in 0..=p.len() - m {
        let w = &p[i..i + m];
        if seen.insert(w) {
            out.push(w);
        }
    }
    out
}

fn letter_counts(w: &[Letter], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for l in w {
        c[l.index()] += 1;
    }
    c
}

/// All factors of length `m`, with a completeness certificate.
pub fn factor_table(spec: &WordSpec, m: usize) -> Result<FactorTable> {
    let k = spec.alphabet_size();
    let max = spec.limits().max_prefix;
    let build = |p: &[Letter], source: usize, certificate: Certificate| FactorTable {
        length: m,
        factors: distinct_windows(p, m)
            .into_iter()
            .map(|w| FactorEntry {
                factor: w.into(),
                counts: letter_counts(w, k),
            })
            .collect(),
        source,
        certificate,
    };
    if let Some((head, period)) = spec.periodic_shape() {
        let n = head + period + m;
        let p = spec.prefix(n)?;
        return Ok(build(&p, n, Certificate::Exhaustive));
    }
    let uncertified = |reason: String| Error::Uncertified {
        spec: spec.to_string(),
        length: m,
        reason,
    };
    if spec.is_sturmian_candidate() {
        let mut n = (4 * m + 16).min(max);
        loop {
            let p = spec.prefix(n)?;
            let count = distinct_windows(&p, m).len();
            if count == m + 1 {
                return Ok(build(&p, n, Certificate::Complexity));
            }
            if count > m + 1 {
                return Err(Error::NotSturmian {
                    spec: spec.to_string(),
                    reason: format!("{count} factors of length {m}, expected {}", m + 1),
                });
            }
            if n >= max {
                return Err(uncertified(format!(
                    "only {count} of {} factors within {n} letters",
                    m + 1
                )));
            }
            n = (n * 2).min(max);
        }
    }
    let mut n = (4 * m + 64).min(max);
    let mut last = distinct_windows(&spec.prefix(n)?, m).len();
    loop {
        if n >= max {
            return Err(uncertified(format!(
                "factor count still growing at {n} letters"
            )));
        }
        let next = (n * 2).min(max);
        let p = spec.prefix(next)?;
        let count = distinct_windows(&p, m).len();
        if count == last {
            return Ok(build(&p, next, Certificate::SaturatedHeuristic));
        }
        last = count;
        n = next;
    }
}

/// Result of a balance test, with an unbalanced pair when there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Balance {
    pub balanced: bool,
    pub witness: Option<(FiniteWord, FiniteWord)>,
}

/// Checks `||u|_x - |v|_x| <= 1` for all equal-length factors of `w`.
/// The witness `(u, v)` has `|u|_x - |v|_x >= 2` for some letter `x`.
pub fn is_balanced(w: &[Letter]) -> Balance {
    let k = w.iter().map(|l| l.index() + 1).max().unwrap_or(0);
    let n = w.len();
    for x in 0..k {
        let mut pre = vec![0usize; n + 1];
        for (i, l) in w.iter().enumerate() {
            pre[i + 1] = pre[i] + usize::from(l.index() == x);
        }
        for m in 1..=n {
            let (mut lo, mut hi) = ((usize::MAX, 0), (0, 0));
            for i in 0..=n - m {
                let c = pre[i + m] - pre[i];
                if c < lo.0 {
                    lo = (c, i);
                }
                if c > hi.0 {
                    hi = (c, i);
                }
            }
            if hi.0 > lo.0 + 1 {
                return Balance {
                    balanced: false,
                    witness: Some((w[hi.1..hi.1 + m].into(), w[lo.1..lo.1 + m].into())),
                };
            }
        }
    }
    Balance {
        balanced: true,
        witness: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Extensions of each length-`m` factor on one side, in order of first
/// occurrence of the factor.
fn extensions(spec: &WordSpec, m: usize, side: Side) -> Result<Vec<(FiniteWord, Vec<Letter>)>> {
    let table = factor_table(spec, m + 1)?;
    let mut order: Vec<FiniteWord> = Vec::new();
    let mut ext: HashMap<FiniteWord, Vec<Letter>> = HashMap::new();
    for w in table.words() {
        let (u, x) = match side {
            Side::Right => (FiniteWord::from(&w[..m]), w[m]),
            Side::Left => (FiniteWord::from(&w[1..]), w[0]),
        };
        let e = ext.entry(u.clone()).or_insert_with(|| {
            order.push(u);
            Vec::new()
        });
        if !e.contains(&x) {
            e.push(x);
        }
    }
    Ok(order
        .into_iter()
        .map(|u| {
            let e = ext.remove(&u).unwrap_or_default();
            (u, e)
        })
        .collect())
}

/// Factors of length `m` with at least two distinct extensions on `side`.
pub fn special_factors(spec: &WordSpec, m: usize, side: Side) -> Result<Vec<FiniteWord>> {
    Ok(extensions(spec, m, side)?
        .into_iter()
        .filter(|(_, e)| e.len() >= 2)
        .map(|(u, _)| u)
        .collect())
}

/// `r_s(w)` with the factor that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RichnessVerdict {
    pub factor: FiniteWord,
    pub letter: Letter,
    /// Same length as `factor`, fewer occurrences of `letter`.
    pub witness: FiniteWord,
}

/// The letter `w` is rich in, decided against a certified table of `|w|`.
pub fn richness_in(table: &FactorTable, w: &[Letter]) -> Result<RichnessVerdict> {
    if table.length != w.len() || w.is_empty() {
        return Err(Error::Contract(format!(
            "richness needs a nonempty factor of length {}",
            table.length
        )));
    }
    let k = table.factors.first().map_or(2, |e| e.counts.len());
    if k != 2 {
        return Err(Error::NotBinary { alphabet: k });
    }
    let entry = table
        .factors
        .iter()
        .find(|e| &e.factor[..] == w)
        .ok_or_else(|| Error::NotAFactor {
            factor: FiniteWord::from(w).to_string(),
            spec: format!("the table of length {}", table.length),
        })?;
    let mut rich = Vec::new();
    for z in [Letter::A, Letter::B] {
        if let Some(v) = table
            .factors
            .iter()
            .find(|e| e.counts[z.index()] < entry.counts[z.index()])
        {
            rich.push((z, v.factor.clone()));
        }
    }
    match rich.as_slice() {
        [(z, v)] => Ok(RichnessVerdict {
            factor: entry.factor.clone(),
            letter: *z,
            witness: v.clone(),
        }),
        _ => Err(Error::RichnessUndefined {
            factor: entry.factor.to_string(),
            rich: rich
                .iter()
                .map(|(z, _)| z.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }),
    }
}

/// `r_s(w)` for a factor of a two-letter word.
pub fn richness(spec: &WordSpec, w: &[Letter]) -> Result<RichnessVerdict> {
    if spec.alphabet_size() != 2 {
        return Err(Error::NotBinary {
            alphabet: spec.alphabet_size(),
        });
    }
    let table = factor_table(spec, w.len())?;
    if !table.contains(w) {
        return Err(Error::NotAFactor {
            factor: FiniteWord::from(w).to_string(),
            spec: spec.to_string(),
        });
    }
    richness_in(&table, w)
}

/// Minimum and maximum number of `a`s over the windows of each length of a
/// prefix.
///
/// For a balanced word, seeing two counts that differ by one at length `m`
/// pins down every factor's count at that length, so richness of any length
/// `m` factor follows from these two numbers.
#[derive(Clone, Debug)]
pub struct AbelianProfile {
    min: Vec<usize>,
    max: Vec<usize>,
    source: usize,
    exhaustive: bool,
}

impl AbelianProfile {
    /// Profile of all windows of `prefix` with length at most `max_len`.
    /// `exhaustive` states that every factor of those lengths occurs in `prefix`.
    pub fn new(prefix: &[Letter], max_len: usize, exhaustive: bool) -> AbelianProfile {
        let n = prefix.len();
        let max_len = max_len.min(n);
        let mut pre = vec![0usize; n + 1];
        for (i, l) in prefix.iter().enumerate() {
            pre[i + 1] = pre[i] + usize::from(*l == Letter::A);
        }
        let mut min = vec![0; max_len + 1];
        let mut max = vec![0; max_len + 1];
        for m in 1..=max_len {
            let (mut lo, mut hi) = (usize::MAX, 0);
            for i in 0..=n - m {
                let c = pre[i + m] - pre[i];
                lo = lo.min(c);
                hi = hi.max(c);
            }
            min[m] = lo;
            max[m] = hi;
        }
        AbelianProfile {
            min,
            max,
            source: n,
            exhaustive,
        }
    }

    pub fn max_len(&self) -> usize {
        self.min.len() - 1
    }

    pub fn source(&self) -> usize {
        self.source
    }

    /// `(min, max)` count of `a` at length `m`.
    pub fn range(&self, m: usize) -> (usize, usize) {
        (self.min[m], self.max[m])
    }

    /// True when the two counts at length `m` are known to be complete.
    pub fn settled(&self, m: usize) -> bool {
        self.exhaustive || self.max[m] > self.min[m]
    }

    /// Richness letter of a length-`m` factor with `a_count` letters `a`.
    /// `Ok(None)` when no letter qualifies (all windows share one count).
    pub fn rich_letter(&self, m: usize, a_count: usize) -> Result<Option<Letter>> {
        let (lo, hi) = self.range(m);
        if hi > lo + 1 {
            return Err(Error::Unbalanced { bound: self.source });
        }
        Ok(match (lo < a_count, hi > a_count) {
            (true, false) => Some(Letter::A),
            (false, true) => Some(Letter::B),
            _ => None,
        })
    }
}

/// Exact letter frequency.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Frequency {
    pub letter: Letter,
    /// Continued fraction of the frequency when known exactly.
    pub exact: Option<String>,
    pub lower: String,
    pub upper: String,
    pub approx: f64,
}

/// `f_b(s)` as an exact continued fraction for constructions that carry a
/// slope; otherwise the empirical ratio over `sample` letters.
pub fn slope_frequency(
    spec: &WordSpec,
    depth: usize,
    sample: usize,
) -> Result<(Frequency, Frequency)> {
    if let Some(cf) = spec.slope() {
        let f = |letter: Letter, cf: &ContinuedFraction| {
            let (lo, hi) = cf.bracket(depth);
            Frequency {
                letter,
                exact: Some(cf.to_string()),
                lower: lo.to_string(),
                upper: hi.to_string(),
                approx: cf.to_f64(),
            }
        };
        return Ok((f(Letter::B, &cf), f(Letter::A, &cf.complement())));
    }
    if spec.alphabet_size() != 2 {
        return Err(Error::NotBinary {
            alphabet: spec.alphabet_size(),
        });
    }
    let p = spec.prefix(sample.min(spec.limits().max_prefix))?;
    let n = p.len().max(1);
    let b = p.count(Letter::B);
    let f = |letter: Letter, c: usize| {
        let r = BigRational::new(BigInt::from(c), BigInt::from(n));
        Frequency {
            letter,
            exact: None,
            lower: r.to_string(),
            upper: r.to_string(),
            approx: c as f64 / n as f64,
        }
    };
    Ok((f(Letter::B, b), f(Letter::A, n - b)))
}

/// Richness of prefixes (or any factors) from the exact slope: a length `m`
/// factor of a Sturmian word of slope `alpha` has `floor(m alpha)` or
/// `floor(m alpha) + 1` letters `b`, and is rich in `b` exactly in the second
/// case.
#[derive(Clone, Debug)]
pub struct SlopeRichness {
    floors: Vec<i64>,
}

impl SlopeRichness {
    pub fn new(slope: &ContinuedFraction, max_len: usize) -> SlopeRichness {
        let mut floors = vec![0];
        floors.extend(affine_floors(
            slope,
            &BigRational::from_integer(0.into()),
            max_len,
        ));
        SlopeRichness { floors }
    }

    pub fn max_len(&self) -> usize {
        self.floors.len() - 1
    }

    pub fn rich_letter(&self, m: usize, b_count: usize) -> Result<Letter> {
        let f = self.floors[m] as usize;
        if b_count == f + 1 {
            Ok(Letter::B)
        } else if b_count == f {
            Ok(Letter::A)
        } else {
            Err(Error::Contract(format!(
                "a length {m} factor with {b_count} b's cannot occur (expected {f} or {})",
                f + 1
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub factor: FiniteWord,
    pub detail: String,
}

/// Outcome of one exhaustive property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub spec: String,
    pub bound: usize,
    pub status: Status,
    pub violations: Vec<Finding>,
    pub witnesses: Vec<Finding>,
}

const MAX_WITNESSES: usize = 8;

impl CheckReport {
    fn new(check: &str, spec: &WordSpec, bound: usize) -> CheckReport {
        CheckReport {
            check: check.into(),
            spec: spec.to_string(),
            bound,
            status: Status::Pass,
            violations: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    fn violation(&mut self, factor: &[Letter], detail: String) {
        self.status = Status::Fail;
        self.violations.push(Finding {
            factor: factor.into(),
            detail,
        });
    }

    fn witness(&mut self, factor: &[Letter], detail: impl FnOnce() -> String) {
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Finding {
                factor: factor.into(),
                detail: detail(),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Right special factors are rich in their first letter, left special
/// factors in their last letter.
pub fn check_lemma_lastletter(spec: &WordSpec, m_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("lemma-lastletter", spec, m_max);
    for m in 1..=m_max {
        let table = factor_table(spec, m)?;
        for (side, pick) in [(Side::Right, 0), (Side::Left, m - 1)] {
            for u in special_factors(spec, m, side)? {
                let r = richness_in(&table, &u)?;
                if r.letter != u[pick] {
                    report.violation(
                        &u,
                        format!(
                            "{side:?} special, rich in {}, expected {}",
                            r.letter, u[pick]
                        ),
                    );
                } else {
                    report.witness(&u, || format!("{side:?} special, rich in {}", r.letter));
                }
            }
        }
    }
    Ok(report)
}

/// `|V| f_x - 1 < |V|_x < |V| f_x + 1` for every factor, and
/// `|U|_x / |U| > f_x` for every factor rich in `x`, with exact comparisons.
pub fn check_counting_inequalities(spec: &WordSpec, m_max: usize) -> Result<CheckReport> {
    let fb = spec
        .slope()
        .ok_or_else(|| Error::Unsupported(format!("{spec} has no exact slope")))?;
    let freqs = [(Letter::A, fb.complement()), (Letter::B, fb)];
    let mut report = CheckReport::new("counting-inequalities", spec, m_max);
    let r = |p: usize, q: usize| BigRational::new(BigInt::from(p), BigInt::from(q));
    for m in 1..=m_max {
        let table = factor_table(spec, m)?;
        for e in &table.factors {
            for (x, f) in &freqs {
                let c = e.counts[x.index()];
                // |V| f - 1 < c  <=>  f < (c + 1) / |V|
                let upper_ok = f.cmp_rational(&r(c + 1, m)).is_lt();
                // c < |V| f + 1  <=>  (c - 1) / |V| < f
                let lower_ok = c == 0 || f.cmp_rational(&r(c - 1, m)).is_gt();
                if !(upper_ok && lower_ok) {
                    report.violation(&e.factor, format!("|V|_{x} = {c} outside (|V|f-1, |V|f+1)"));
                }
            }
            let rich = richness_in(&table, &e.factor)?;
            let x = rich.letter;
            let f = &freqs[x.index()].1;
            let c = e.counts[x.index()];
            if f.cmp_rational(&r(c, m)).is_lt() {
                report.witness(&e.factor, || format!("rich in {x}: {c}/{m} > f_{x}"));
            } else {
                report.violation(&e.factor, format!("rich in {x} but {c}/{m} < f_{x}"));
            }
        }
    }
    Ok(report)
}

/// Every length-2 factor contains `a`, and no factor up to `m_max` has two
/// consecutive letters other than `a`.
pub fn check_separating(spec: &WordSpec, m_max: usize) -> Result<CheckReport> {
    let a = Letter::A;
    let mut report = CheckReport::new("separating", spec, m_max);
    for w in factor_table(spec, 2)?.words() {
        if !w.contains(&a) {
            report.violation(w, format!("length 2 factor without {a}"));
        }
    }
    if m_max >= 2 {
        for w in factor_table(spec, m_max)?.words() {
            if let Some(i) = w.windows(2).position(|p| p[0] != a && p[1] != a) {
                report.violation(w, format!("consecutive non-{a} letters at offset {i}"));
            }
        }
    }
    Ok(report)
}

/// For every factor `u`, all two-sided extensions `xuy` share a letter `c`
/// with `x = c` or `y = c`.
pub fn check_fact4(spec: &WordSpec, m_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("fact4", spec, m_max);
    let k = spec.alphabet_size();
    for m in 0..=m_max {
        let table = factor_table(spec, m + 2)?;
        let mut order: Vec<FiniteWord> = Vec::new();
        let mut ext: HashMap<FiniteWord, Vec<(Letter, Letter)>> = HashMap::new();
        for w in table.words() {
            let u = FiniteWord::from(&w[1..=m]);
            ext.entry(u.clone())
                .or_insert_with(|| {
                    order.push(u);
                    Vec::new()
                })
                .push((w[0], w[m + 1]));
        }
        for u in order {
            let pairs = &ext[&u];
            let common = (0..k)
                .filter_map(Letter::new)
                .find(|&c| pairs.iter().all(|&(x, y)| x == c || y == c));
            let shown = || {
                pairs
                    .iter()
                    .map(|(x, y)| format!("{x}{y}"))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            match common {
                Some(c) => {
                    report.witness(&u, || format!("extensions {{{}}} covered by {c}", shown()))
                }
                None => report.violation(&u, format!("extensions {{{}}} share no letter", shown())),
            }
        }
    }
    Ok(report)
}

/// The prefix of length `n` is balanced, hence so is every shorter one.
pub fn check_prefix_balance(spec: &WordSpec, n: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("prefix-balance", spec, n);
    let p = spec.prefix(n)?;
    if let Some((u, v)) = is_balanced(&p).witness {
        report.violation(&u, format!("against {v}"));
    }
    Ok(report)
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

    fn strings(t: &FactorTable) -> Vec<String> {
        t.words().map(|w| w.to_string()).collect()
    }

    #[test]
    fn fibonacci_tables() {
        let f = spec("fibonacci");
        let t2 = factor_table(&f, 2).unwrap();
        assert_eq!(strings(&t2), ["ab", "ba", "aa"]);
        assert_eq!(t2.certificate, Certificate::Complexity);
        let mut t3 = strings(&factor_table(&f, 3).unwrap());
        t3.sort();
        assert_eq!(t3, ["aab", "aba", "baa", "bab"]);
        assert_eq!(strings(&factor_table(&f, 0).unwrap()), [""]);
    }

    #[test]
    fn literal_tables_are_exhaustive() {
        let t = factor_table(&spec("literal:(ab)*"), 4).unwrap();
        assert_eq!(t.certificate, Certificate::Exhaustive);
        assert_eq!(strings(&t), ["abab", "baba"]);
    }

    #[test]
    fn balance() {
        assert!(is_balanced(&w("abaababaaba")).balanced);
        assert!(is_balanced(&w("a")).balanced);
        assert_eq!(
            is_balanced(&w("aabb")),
            Balance {
                balanced: false,
                witness: Some((w("aa"), w("bb")))
            }
        );
    }

    #[test]
    fn special_factor_examples() {
        let f = spec("fibonacci");
        assert_eq!(special_factors(&f, 1, Side::Right).unwrap(), [w("a")]);
        assert_eq!(special_factors(&f, 2, Side::Left).unwrap(), [w("ab")]);
        assert_eq!(special_factors(&f, 0, Side::Left).unwrap(), [w("")]);
    }

    #[test]
    fn richness_examples() {
        let f = spec("fibonacci");
        let r = richness(&f, &w("b")).unwrap();
        assert_eq!((r.letter, r.witness), (Letter::B, w("a")));
        let r = richness(&f, &w("ab")).unwrap();
        assert_eq!((r.letter, r.witness), (Letter::B, w("aa")));
        let r = richness(&f, &w("aba")).unwrap();
        assert_eq!((r.letter, r.witness), (Letter::A, w("bab")));
        assert!(matches!(
            richness(&f, &w("bb")),
            Err(Error::NotAFactor { .. })
        ));
    }

    #[test]
    fn slope_richness_agrees_with_tables() {
        for s in [
            "fibonacci",
            "mech:cf=[0;3,(1,2)],rho=1/3",
            "sturmian:d=2,(1)*",
        ] {
            let sp = spec(s);
            let fast = SlopeRichness::new(&sp.slope().unwrap(), 60);
            for m in 1..=60 {
                let t = factor_table(&sp, m).unwrap();
                for e in &t.factors {
                    assert_eq!(
                        fast.rich_letter(m, e.counts[1]).unwrap(),
                        richness_in(&t, &e.factor).unwrap().letter,
                        "{s} {}",
                        e.factor
                    );
                }
            }
        }
    }

    #[test]
    fn profile_agrees_with_tables() {
        let sp = spec("mech:cf=[0;3,(1,2)],rho=1/3");
        let prof = AbelianProfile::new(&sp.prefix(2000).unwrap(), 60, false);
        for m in 1..=60 {
            assert!(prof.settled(m));
            let t = factor_table(&sp, m).unwrap();
            for e in &t.factors {
                assert_eq!(
                    prof.rich_letter(m, e.counts[0]).unwrap(),
                    Some(richness_in(&t, &e.factor).unwrap().letter)
                );
            }
        }
    }

    #[test]
    fn frequency() {
        let (fb, fa) = slope_frequency(&spec("fibonacci"), 10, 0).unwrap();
        assert_eq!(fb.exact.as_deref(), Some("[0;2,(1)]"));
        assert!((fb.approx - 0.381_966).abs() < 1e-6);
        assert!((fa.approx - 0.618_034).abs() < 1e-6);
        let (fb, _) = slope_frequency(&spec("literal:(ab)*"), 10, 1000).unwrap();
        assert_eq!(fb.exact, None);
        assert_eq!(fb.lower, "1/2");
    }

    #[test]
    fn checks_on_small_bounds() {
        let f = spec("fibonacci");
        assert!(check_lemma_lastletter(&f, 30).unwrap().passed());
        assert!(check_counting_inequalities(&f, 40).unwrap().passed());
        assert!(check_separating(&f, 50).unwrap().passed());
        assert!(check_fact4(&f, 20).unwrap().passed());
        let bc = check_separating(&spec("literal:(bc)*"), 10).unwrap();
        assert!(!bc.passed());
        assert_eq!(bc.violations[0].factor, w("bc"));
    }

    #[test]
    fn fact4_empty_factor_on_fibonacci() {
        let r = check_fact4(&spec("fibonacci"), 0).unwrap();
        assert_eq!(r.witnesses[0].factor, w(""));
        assert_eq!(r.witnesses[0].detail, "extensions {ab,ba,aa} covered by a");
    }
}
