//! Command-line front end. Each subcommand parses its arguments, calls one
//! library operation and prints the result as text or JSON.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coloring::{Coloring, Scheme};
use crate::descent::{descend_chain, sample_descent_chain, DescentTrace};
use crate::error::{Error, Result};
use crate::factors::{self, CheckReport, Side};
use crate::morphism::{desubstitute, desubstitute_complete, Morphism};
use crate::search::{
    enumerate_monochromatic, verify_no_monochromatic, Verdict, Verification, DEFAULT_BUDGET,
    DEFAULT_MAX_LEN,
};
use crate::word::{FiniteWord, WordSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "sturmlab",
    version,
    about = "Sturmian and episturmian words, their colorings and monochromatic factorizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a prefix of a word.
    Generate {
        spec: String,
        #[arg(short = 'n', long, default_value_t = 100, value_parser = positive)]
        length: usize,
        #[command(flatten)]
        out: Output,
    },
    /// List the distinct factors of one length.
    Factors {
        spec: String,
        #[arg(short = 'm', long, value_parser = positive)]
        length: usize,
        #[command(flatten)]
        out: Output,
    },
    /// List the left and right special factors of one length.
    Special {
        spec: String,
        #[arg(short = 'm', long)]
        length: usize,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        #[command(flatten)]
        out: Output,
    },
    /// Letter a factor is rich in.
    Richness {
        spec: String,
        factor: String,
        #[command(flatten)]
        out: Output,
    },
    /// Letter frequencies.
    Freq {
        spec: String,
        /// Convergent depth for the exact bracket.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Letters sampled when no exact slope is known.
        #[arg(long, default_value_t = 100_000, value_parser = positive)]
        sample: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Run one of the exhaustive property checks.
    Check {
        spec: String,
        #[arg(value_enum)]
        check: CheckArg,
        #[arg(long, default_value_t = 100, value_parser = positive)]
        m_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Color of a factor.
    Color {
        spec: String,
        factor: String,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Decode a word under L_x or R_x.
    Desub {
        morphism: String,
        word: String,
        /// Decode the word as a finite word, without holding back an
        /// undecided tail.
        #[arg(long)]
        complete: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Descend from a monochromatic chain (by default the deepest one found).
    Descend {
        spec: String,
        #[arg(long, default_value_t = 1)]
        color: u8,
        /// Comma-separated block lengths to start from.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        out: Output,
    },
    /// Enumerate the monochromatic factorization tree of one color.
    Search {
        spec: String,
        #[arg(long, default_value_t = 1)]
        color: u8,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[command(flatten)]
        bounds: Bounds,
        /// Write the JSON report to this file instead of stdout.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Run every check and search for a word and emit one JSON document.
    VerifyAll {
        spec: String,
        #[arg(long, default_value_t = 100, value_parser = positive)]
        m_max: usize,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[command(flatten)]
        bounds: Bounds,
        /// Write the JSON document to this file instead of stdout.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Output {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ColoringArgs {
    /// Coloring scheme; defaults to sturmian3 on two letters, epi otherwise.
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Color words the scheme is not meant for (periodic words, richness
    /// ties) instead of rejecting them.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct Bounds {
    #[arg(long, default_value_t = DEFAULT_MAX_LEN, value_parser = positive)]
    max_len: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Sturmian3,
    Epi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    Lastletter,
    Counting,
    Separating,
    Fact4,
    Balance,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Unsupported(format!("I/O error: {e}"))
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::Unsupported(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn emit<T: Serialize>(
    json: bool,
    value: &T,
    out: &mut dyn Write,
    text: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    if json {
        emit_json(value, None, out)
    } else {
        text(out).map_err(io)
    }
}

fn coloring(spec: &WordSpec, args: &ColoringArgs) -> Result<Coloring> {
    let scheme = match args.scheme {
        Some(SchemeArg::Sturmian3) => Scheme::Sturmian3,
        Some(SchemeArg::Epi) => Scheme::EpisturmianK1,
        None if spec.alphabet_size() == 2 => Scheme::Sturmian3,
        None => Scheme::EpisturmianK1,
    };
    match (args.force, scheme) {
        (true, s) => Coloring::forced(s, spec),
        (false, Scheme::Sturmian3) => Coloring::sturmian3(spec),
        (false, Scheme::EpisturmianK1) => Coloring::episturmian(spec),
    }
}

fn check(spec: &WordSpec, which: CheckArg, m_max: usize) -> Result<CheckReport> {
    match which {
        CheckArg::Lastletter => factors::check_lemma_lastletter(spec, m_max),
        CheckArg::Counting => factors::check_counting_inequalities(spec, m_max),
        CheckArg::Separating => factors::check_separating(spec, m_max),
        CheckArg::Fact4 => factors::check_fact4(spec, m_max),
        CheckArg::Balance => factors::check_prefix_balance(spec, m_max),
    }
}

fn print_check(r: &CheckReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{} on {} up to {}: {:?}",
        r.check, r.spec, r.bound, r.status
    )?;
    for v in &r.violations {
        writeln!(out, "  violation {}: {}", v.factor, v.detail)?;
    }
    for w in &r.witnesses {
        writeln!(out, "  witness {}: {}", w.factor, w.detail)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SpecialFactors {
    spec: String,
    length: usize,
    left: Option<Vec<FiniteWord>>,
    right: Option<Vec<FiniteWord>>,
}

#[derive(Serialize)]
struct Decoding {
    morphism: Morphism,
    input: FiniteWord,
    decoded: FiniteWord,
    certificate: crate::morphism::DecodeCertificate,
}

#[derive(Serialize)]
struct VerifyAll {
    version: &'static str,
    spec: WordSpec,
    checks: Vec<CheckReport>,
    verification: Verification,
    descents: Vec<DescentTrace>,
    verdict: Verdict,
    checks_passed: bool,
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate {
            spec,
            length,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let p = spec.prefix_certified(length)?;
            emit(o.json, &p, out, |w| writeln!(w, "{}", p.word))?;
        }
        Command::Factors {
            spec,
            length,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let t = factors::factor_table(&spec, length)?;
            emit(o.json, &t, out, |w| {
                writeln!(
                    w,
                    "{} factors of length {} ({:?})",
                    t.len(),
                    t.length,
                    t.certificate
                )?;
                for f in &t.factors {
                    writeln!(w, "{} {:?}", f.factor, f.counts)?;
                }
                Ok(())
            })?;
        }
        Command::Special {
            spec,
            length,
            side,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let want = |s: Side| {
                side.is_none()
                    || matches!(
                        (side, s),
                        (Some(SideArg::Left), Side::Left) | (Some(SideArg::Right), Side::Right)
                    )
            };
            let left = if want(Side::Left) {
                Some(factors::special_factors(&spec, length, Side::Left)?)
            } else {
                None
            };
            let right = if want(Side::Right) {
                Some(factors::special_factors(&spec, length, Side::Right)?)
            } else {
                None
            };
            let r = SpecialFactors {
                spec: spec.to_string(),
                length,
                left,
                right,
            };
            emit(o.json, &r, out, |w| {
                for (name, list) in [("left", &r.left), ("right", &r.right)] {
                    if let Some(list) = list {
                        let shown: Vec<String> = list
                            .iter()
                            .map(|f| {
                                if f.is_empty() {
                                    "ε".to_string()
                                } else {
                                    f.to_string()
                                }
                            })
                            .collect();
                        writeln!(w, "{name}: {}", shown.join(" "))?;
                    }
                }
                Ok(())
            })?;
        }
        Command::Richness {
            spec,
            factor,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let f: FiniteWord = factor.parse()?;
            let r = factors::richness(&spec, &f)?;
            emit(o.json, &r, out, |w| {
                writeln!(w, "{} (witness {})", r.letter, r.witness)
            })?;
        }
        Command::Freq {
            spec,
            depth,
            sample,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let (fa, fb) = factors::slope_frequency(&spec, depth, sample)?;
            let both = [fa, fb];
            emit(o.json, &both, out, |w| {
                for f in &both {
                    let exact = f.exact.as_deref().unwrap_or("~");
                    writeln!(
                        w,
                        "f_{} = {} in ({}, {}) {exact}",
                        f.letter, f.approx, f.lower, f.upper
                    )?;
                }
                Ok(())
            })?;
        }
        Command::Check {
            spec,
            check: which,
            m_max,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let r = check(&spec, which, m_max)?;
            emit(o.json, &r, out, |w| print_check(&r, w))?;
            if !r.passed() {
                return Ok(EXIT_ERROR);
            }
        }
        Command::Color {
            spec,
            factor,
            coloring: c,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let f: FiniteWord = factor.parse()?;
            let v = coloring(&spec, &c)?.color(&f)?;
            emit(o.json, &v, out, |w| writeln!(w, "{v}"))?;
        }
        Command::Desub {
            morphism,
            word,
            complete,
            out: o,
        } => {
            let m: Morphism = morphism.parse()?;
            let input: FiniteWord = word.parse()?;
            let m = m.with_alphabet(input.alphabet_hint());
            let (decoded, certificate) = if complete {
                desubstitute_complete(&input, &m)?
            } else {
                desubstitute(&input, &m)?
            };
            let r = Decoding {
                morphism: m,
                input,
                decoded,
                certificate,
            };
            emit(o.json, &r, out, |w| {
                writeln!(w, "{}", r.decoded)?;
                if !r.certificate.tail.is_empty() {
                    writeln!(w, "undecided tail: {}", r.certificate.tail)?;
                }
                Ok(())
            })?;
        }
        Command::Descend {
            spec,
            color,
            blocks,
            coloring: c,
            bounds,
            out: o,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let col = coloring(&spec, &c)?;
            let t = match blocks {
                Some(b) => descend_chain(&col, color, b)?,
                None => sample_descent_chain(&col, color, bounds.max_len, bounds.budget)?,
            };
            emit(o.json, &t, out, |w| {
                writeln!(w, "chain {:?}", t.chain)?;
                for s in &t.steps {
                    writeln!(
                        w,
                        "{} {:?} -> {:?}{}",
                        s.morphism,
                        s.blocks,
                        s.derived_blocks,
                        if s.trimmed { " (trimmed)" } else { "" }
                    )?;
                }
                writeln!(w, "first blocks {:?}, end {:?}", t.first_lengths, t.end)
            })?;
        }
        Command::Search {
            spec,
            color,
            coloring: c,
            bounds,
            json,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let col = coloring(&spec, &c)?;
            let r = enumerate_monochromatic(&col, color, bounds.max_len, bounds.budget)?;
            emit_json(&r, json.as_deref(), out)?;
            if !r.is_finite() {
                return Ok(EXIT_INCONCLUSIVE);
            }
        }
        Command::VerifyAll {
            spec,
            m_max,
            coloring: c,
            bounds,
            json,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let col = coloring(&spec, &c)?;
            let doc = verify_all(&spec, &col, m_max, &bounds)?;
            emit_json(&doc, json.as_deref(), out)?;
            if !doc.checks_passed {
                return Ok(EXIT_ERROR);
            }
            if doc.verdict == Verdict::Inconclusive {
                return Ok(EXIT_INCONCLUSIVE);
            }
        }
    }
    Ok(EXIT_OK)
}

fn verify_all(spec: &WordSpec, col: &Coloring, m_max: usize, bounds: &Bounds) -> Result<VerifyAll> {
    let mut checks = Vec::new();
    if !col.is_forced() {
        let which: &[CheckArg] = match col.scheme() {
            Scheme::Sturmian3 => &[CheckArg::Balance, CheckArg::Lastletter, CheckArg::Counting],
            Scheme::EpisturmianK1 => &[CheckArg::Separating, CheckArg::Fact4],
        };
        for &c in which {
            checks.push(check(spec, c, m_max)?);
        }
    }
    let verification = verify_no_monochromatic(col, bounds.max_len, bounds.budget)?;
    let mut descents = Vec::new();
    if verification.verdict == Verdict::Pass {
        for r in verification.reports.iter().filter(|r| r.target > 0) {
            descents.push(descend_chain(col, r.target, r.deepest.clone())?);
        }
    }
    Ok(VerifyAll {
        version: crate::search::REPORT_VERSION,
        spec: spec.clone(),
        checks_passed: checks.iter().all(CheckReport::passed),
        checks,
        verdict: verification.verdict,
        verification,
        descents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("sturmlab").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn generate_prints_the_prefix() {
        assert_eq!(
            call(&["generate", "fibonacci", "-n", "11"]),
            (0, "abaababaaba\n".into(), String::new())
        );
    }

    #[test]
    fn color_prints_the_justification() {
        let (code, out, _) = call(&["color", "fibonacci", "ab"]);
        assert_eq!(code, 0);
        assert_eq!(out, "2 (prefix, rich in b, witness aa)\n");
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["generate", "fibonacci", "-n", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn computation_errors_exit_1() {
        let (code, _, err) = call(&["generate", "nonsense"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.starts_with("error: syntax error at byte 0"), "{err}");
        assert_eq!(call(&["richness", "fibonacci", "bb"]).0, EXIT_ERROR);
    }

    #[test]
    fn desub_reports_the_tail() {
        let (code, out, _) = call(&["desub", "L_a", "aba"]);
        assert_eq!(code, 0);
        assert_eq!(out, "b\nundecided tail: a\n");
        assert_eq!(call(&["desub", "L_a", "aba", "--complete"]).1, "ba\n");
    }

    #[test]
    fn search_json_is_deterministic() {
        let args = ["search", "fibonacci", "--color", "2", "--max-len", "200"];
        let (code, a, _) = call(&args);
        assert_eq!(code, 0);
        assert_eq!(a, call(&args).1);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["version"], "sturmlab-search/1");
        assert_eq!(v["truncated"], 0);
    }
}
