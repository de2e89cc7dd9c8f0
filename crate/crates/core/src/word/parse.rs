//! Text form of word specs.
//!
//! ```text
//! spec     := "fibonacci" | "tribonacci"
//!           | "sturmian:d=" (int ",")* "(" int ("," int)* ")*"
//!           | "epi:dir=" [letters ","] "(" letters ")*"
//!           | "mech:cf=[0;" (int ",")* "(" int ("," int)* ")]" ",rho=" int ["/" int]
//!           | "morphic:" (letter "->" letters ";")+ "seed=" letter
//!           | "literal:" letters* "(" letters ")*"
//!           | "exchange:" spec
//!           | "desub:" ("L"|"R") "_" letter ":" spec
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{FiniteWord, Letter, Limits, SpecKind, WordSpec};
use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::morphism::Morphism;

pub(super) fn parse_spec(text: &str, limits: Limits) -> Result<WordSpec> {
    let mut p = Parser { src: text, pos: 0 };
    let spec = p.spec(limits)?;
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected {s:?}")))
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn spec(&mut self, limits: Limits) -> Result<WordSpec> {
        let kind = if self.eat("fibonacci") {
            SpecKind::Sturmian {
                head: vec![],
                tail: vec![1],
            }
        } else if self.eat("tribonacci") {
            SpecKind::Episturmian {
                head: vec![],
                tail: vec![Letter(0), Letter(1), Letter(2)],
            }
        } else if self.eat("sturmian:d=") {
            let (head, tail) = self.int_stream()?;
            self.expect("*")?;
            SpecKind::Sturmian { head, tail }
        } else if self.eat("epi:dir=") {
            let head = if self.peek() == Some('(') {
                Vec::new()
            } else {
                let h = self.letters()?;
                self.expect(",")?;
                h
            };
            self.expect("(")?;
            let tail = self.letters()?;
            self.expect(")*")?;
            SpecKind::Episturmian { head, tail }
        } else if self.eat("mech:cf=[0;") {
            let at = self.pos;
            let (head, tail) = self.int_stream()?;
            self.expect("]")?;
            let slope = ContinuedFraction::new(head, tail).map_err(|e| at_pos(e, at))?;
            self.expect(",rho=")?;
            let p = self.int()?;
            let q = if self.eat("/") { self.int()? } else { 1 };
            if q == 0 {
                return Err(self.error("zero denominator"));
            }
            SpecKind::Mechanical {
                slope,
                rho: BigRational::new(BigInt::from(p), BigInt::from(q)),
            }
        } else if self.eat("morphic:") {
            let mut rules: Vec<(Letter, FiniteWord)> = Vec::new();
            while !self.eat("seed=") {
                let l = self.letter()?;
                self.expect("->")?;
                let img = self.letters()?;
                self.expect(";")?;
                if rules.iter().any(|(x, _)| *x == l) {
                    return Err(self.error(format!("duplicate rule for {l}")));
                }
                rules.push((l, FiniteWord::new(img)));
            }
            let seed = self.letter()?;
            let k = rules.iter().map(|(l, _)| l.index() + 1).max().unwrap_or(0);
            let mut images = vec![FiniteWord::empty(); k];
            for (l, img) in rules {
                images[l.index()] = img;
            }
            SpecKind::Morphic { images, seed }
        } else if self.eat("literal:") {
            let head = if self.peek() == Some('(') {
                Vec::new()
            } else {
                self.letters()?
            };
            self.expect("(")?;
            let tail = self.letters()?;
            self.expect(")*")?;
            SpecKind::Literal {
                head: head.into(),
                tail: tail.into(),
            }
        } else if self.eat("exchange:") {
            let inner = self.spec(limits)?;
            SpecKind::Exchanged(inner)
        } else if self.eat("desub:") {
            let morphism = self.morphism()?;
            self.expect(":")?;
            let parent = self.spec(limits)?;
            let morphism = morphism.with_alphabet(parent.alphabet_size());
            SpecKind::Derived { parent, morphism }
        } else {
            return Err(self.error("unknown spec kind"));
        };
        WordSpec::with_limits(kind, limits)
    }

    /// `a,b,(c,d)` : comma separated head, parenthesised nonempty tail.
    fn int_stream(&mut self) -> Result<(Vec<u32>, Vec<u32>)> {
        let mut head = Vec::new();
        while self.peek() != Some('(') {
            head.push(self.int()?);
            self.expect(",")?;
        }
        self.expect("(")?;
        let mut tail = vec![self.int()?];
        while self.eat(",") {
            tail.push(self.int()?);
        }
        self.expect(")")?;
        Ok((head, tail))
    }

    fn int(&mut self) -> Result<u32> {
        let digits: usize = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let v = self.rest()[..digits]
            .parse::<u32>()
            .map_err(|_| self.error("integer out of range"))?;
        self.pos += digits;
        Ok(v)
    }

    fn letter(&mut self) -> Result<Letter> {
        match self.peek().and_then(Letter::from_char) {
            Some(l) => {
                self.pos += 1;
                Ok(l)
            }
            None => Err(self.error("expected a letter a-z")),
        }
    }

    fn letters(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        while let Some(l) = self.peek().and_then(Letter::from_char) {
            out.push(l);
            self.pos += 1;
        }
        if out.is_empty() {
            return Err(self.error("expected letters a-z"));
        }
        Ok(out)
    }

    fn morphism(&mut self) -> Result<Morphism> {
        let at = self.pos;
        let end = self
            .rest()
            .find(':')
            .map(|i| self.pos + i)
            .unwrap_or(self.src.len());
        let m = self.src[self.pos..end]
            .parse::<Morphism>()
            .map_err(|e| at_pos(e, at))?;
        self.pos = end;
        Ok(m)
    }
}

fn at_pos(e: Error, position: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { position, message },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<WordSpec> {
        WordSpec::parse(s)
    }

    #[test]
    fn aliases() {
        assert_eq!(
            parse("fibonacci").unwrap().kind(),
            &SpecKind::Sturmian {
                head: vec![],
                tail: vec![1]
            }
        );
        assert_eq!(
            parse("epi:dir=(abc)*").unwrap(),
            parse("tribonacci").unwrap()
        );
    }

    #[test]
    fn constant_directive_rejected() {
        match parse("epi:dir=(aaa)*") {
            Err(Error::InvalidSpec { rule, .. }) => {
                assert_eq!(rule, "directive-tail-distinct-letters")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(
            parse("fibonacci!"),
            Err(Error::Parse { position: 9, .. })
        ));
        assert!(matches!(
            parse("sturmian:d=2,(1)"),
            Err(Error::Parse { position: 16, .. })
        ));
        assert!(matches!(
            parse("mech:cf=[0;2,(1)],rho=1/0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse("literal:ab"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("nonsense"),
            Err(Error::Parse { position: 0, .. })
        ));
    }

    #[test]
    fn invariant_violations() {
        assert!(matches!(
            parse("mech:cf=[0;2,(1)],rho=3/2"),
            Err(Error::InvalidSpec {
                rule: "intercept-range",
                ..
            })
        ));
        assert!(matches!(
            parse("sturmian:d=0,(1)*"),
            Err(Error::InvalidSpec {
                rule: "directive-positive",
                ..
            })
        ));
        assert!(matches!(
            parse("morphic:a->ba;b->a;seed=a"),
            Err(Error::InvalidSpec {
                rule: "morphic-prolongable",
                ..
            })
        ));
        assert!(matches!(
            parse("morphic:a->ac;seed=a"),
            Err(Error::InvalidSpec {
                rule: "morphic-closed",
                ..
            })
        ));
        assert!(matches!(
            parse("desub:L_b:fibonacci"),
            Err(Error::NotDecodable { .. })
        ));
    }

    #[test]
    fn mechanical_intercept_forms() {
        let a = parse("mech:cf=[0;2,(1)],rho=0").unwrap();
        let b = parse("mech:cf=[0;2,(1)],rho=0/1").unwrap();
        assert_eq!(a, b);
        let c = parse("mech:cf=[0;(1)],rho=2/4").unwrap();
        assert_eq!(c.to_string(), "mech:cf=[0;(1)],rho=1/2");
    }
}
