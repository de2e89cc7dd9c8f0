use num_rational::BigRational;

use super::{FiniteWord, Letter, WordSpec};
use crate::cf::{affine_floors, ContinuedFraction};
use crate::error::{Error, Result};
use crate::morphism::{desubstitute, Morphism};

fn cycle<'a, T: Copy>(head: &'a [T], tail: &'a [T]) -> impl Iterator<Item = T> + 'a {
    head.iter().chain(tail.iter().cycle()).copied()
}

/// `s_{-1} = b`, `s_0 = a`, `s_m = s_{m-1}^{d_m} s_{m-2}`, until `|s_m| >= n`.
pub(super) fn standard_sequence(head: &[u32], tail: &[u32], n: usize) -> Vec<Letter> {
    let mut older = vec![Letter::B];
    let mut prev = vec![Letter::A];
    let mut directive = cycle(head, tail);
    while prev.len() < n {
        let d = directive.next().expect("infinite directive") as usize;
        let mut next = Vec::with_capacity(prev.len() * d + older.len());
        for _ in 0..d {
            next.extend_from_slice(&prev);
        }
        next.extend_from_slice(&older);
        older = prev;
        prev = next;
    }
    prev.truncate(n);
    prev
}

/// Standard episturmian prefix as `L_{x1} ... L_{xk}(x_{k+1})`.
///
/// Keeps `mu_k(y)` for every letter `y`, truncated to `n` letters:
/// `mu_k(y) = mu_{k-1}(x_k) mu_{k-1}(y)` for `y != x_k`, and
/// `mu_k(x_k) = mu_{k-1}(x_k)`. Truncation is exact because every image
/// is nonempty.
pub(super) fn episturmian(head: &[Letter], tail: &[Letter], n: usize) -> Result<Vec<Letter>> {
    let k = head
        .iter()
        .chain(tail)
        .map(|l| l.index() + 1)
        .max()
        .unwrap_or(1);
    let mut images: Vec<Vec<Letter>> = (0..k).map(|i| vec![Letter(i as u8)]).collect();
    let mut directive = cycle(head, tail);
    let mut x = directive.next().expect("nonempty directive");
    // Minimum growth is one letter per tail period, see the crate tests.
    let max_steps = head.len() + tail.len() * (n + 2) + 8;
    for _ in 0..max_steps {
        if images[x.index()].len() >= n {
            let mut out = images[x.index()].clone();
            out.truncate(n);
            return Ok(out);
        }
        let xi = x.index();
        let base = images[xi].clone();
        for (y, img) in images.iter_mut().enumerate() {
            if y != xi {
                let mut next = Vec::with_capacity((base.len() + img.len()).min(n));
                next.extend_from_slice(&base);
                next.extend_from_slice(img);
                next.truncate(n);
                *img = next;
            }
        }
        x = directive.next().expect("infinite directive");
    }
    Err(Error::InvalidSpec {
        rule: "directive-growth",
        detail: "episturmian prefix did not grow; directive is eventually constant".into(),
    })
}

/// Letters at positions `1..=n` of the lower mechanical word.
pub(super) fn mechanical(slope: &ContinuedFraction, rho: &BigRational, n: usize) -> Vec<Letter> {
    if n == 0 {
        return Vec::new();
    }
    // floor(alpha*m + rho) for m = 1..=n+1
    let floors = affine_floors(slope, rho, n + 1);
    floors
        .windows(2)
        .map(|w| {
            if w[1] - w[0] == 1 {
                Letter::B
            } else {
                Letter::A
            }
        })
        .collect()
}

/// Fixed point `x = sigma(x)`: start from `sigma(seed)` and append
/// `sigma(x[i])` for `i = 1, 2, ...`.
pub(super) fn morphic(images: &[FiniteWord], seed: Letter, n: usize) -> Vec<Letter> {
    let mut out: Vec<Letter> = images[seed.index()].to_vec();
    let mut i = 1;
    while out.len() < n {
        let l = out[i];
        out.extend_from_slice(&images[l.index()]);
        i += 1;
    }
    out.truncate(n);
    out
}

pub(super) fn literal(head: &FiniteWord, tail: &FiniteWord, n: usize) -> Vec<Letter> {
    cycle(head, tail).take(n).collect()
}

/// Decodes a parent prefix, growing the request until `n` letters are
/// certified. Every codeword has length at most 2, so `2k + 1` more parent
/// letters always yield `k` more decoded letters.
pub(super) fn derived(
    parent: &WordSpec,
    morphism: &Morphism,
    n: usize,
    max: usize,
) -> Result<Vec<Letter>> {
    let mut request = (n + 1).min(max);
    loop {
        let p = parent.prefix(request)?;
        let (decoded, cert) = desubstitute(&p, morphism)?;
        if decoded.len() >= n {
            let mut out = decoded.into_letters();
            out.truncate(n);
            return Ok(out);
        }
        let next = cert.consumed + 2 * (n - decoded.len()) + 1;
        if request >= max {
            return Err(Error::PrefixLimit {
                requested: next,
                limit: max,
            });
        }
        request = next.min(max);
    }
}
