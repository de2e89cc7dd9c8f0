//! Continued fractions `[0; a1, a2, ...]` with an eventually periodic
//! quotient stream, and exact comparisons against rationals.
//!
//! Every quotient stream here is infinite, so the value is a quadratic
//! irrational in `(0, 1)`. Even-index convergents lie below it, odd-index
//! convergents above, which is what all certification in the crate relies on.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `[0; head..., (tail)*]`, all quotients positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    head: Vec<u32>,
    tail: Vec<u32>,
}

impl ContinuedFraction {
    pub fn new(head: Vec<u32>, tail: Vec<u32>) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::InvalidSpec {
                rule: "cf-tail-nonempty",
                detail: "continued fraction needs a nonempty periodic tail".into(),
            });
        }
        if head.iter().chain(&tail).any(|&q| q == 0) {
            return Err(Error::InvalidSpec {
                rule: "cf-quotients-positive",
                detail: "partial quotients after the leading 0 must be positive".into(),
            });
        }
        Ok(ContinuedFraction { head, tail })
    }

    pub fn head(&self) -> &[u32] {
        &self.head
    }

    pub fn tail(&self) -> &[u32] {
        &self.tail
    }

    /// Partial quotient `a_i`, `i >= 1` (`a_0 = 0`).
    pub fn quotient(&self, i: usize) -> u32 {
        assert!(i >= 1, "a_0 is always 0");
        let j = i - 1;
        if j < self.head.len() {
            self.head[j]
        } else {
            self.tail[(j - self.head.len()) % self.tail.len()]
        }
    }

    /// The continued fraction of `1 - x`.
    pub fn complement(&self) -> ContinuedFraction {
        // Unroll enough of the tail that the first two quotients sit in the head.
        let mut head = self.head.clone();
        let mut k = 0;
        while head.len() < 2 {
            head.push(self.tail[k % self.tail.len()]);
            k += 1;
        }
        let tail = rotate(&self.tail, k);
        let new_head = if head[0] >= 2 {
            let mut h = vec![1, head[0] - 1];
            h.extend_from_slice(&head[1..]);
            h
        } else {
            let mut h = vec![1 + head[1]];
            h.extend_from_slice(&head[2..]);
            h
        };
        ContinuedFraction {
            head: new_head,
            tail,
        }
    }

    pub fn convergents(&self) -> Convergents<'_> {
        Convergents {
            cf: self,
            index: 0,
            prev: (BigInt::one(), BigInt::zero()),
            cur: (BigInt::zero(), BigInt::one()),
        }
    }

    /// Consecutive convergents `(lower, upper)` around the value, starting from
    /// convergent `depth` (so `depth = 0` gives `(0, 1/a1)`).
    pub fn bracket(&self, depth: usize) -> (BigRational, BigRational) {
        let mut it = self.convergents().skip(depth);
        let (p0, q0) = it.next().expect("infinite stream");
        let (p1, q1) = it.next().expect("infinite stream");
        let a = BigRational::new(p0, q0);
        let b = BigRational::new(p1, q1);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Exact comparison of the (irrational) value with a rational. Never
    /// returns `Equal`.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        for (k, (p, q)) in self.convergents().enumerate() {
            let c = BigRational::new(p, q);
            if k % 2 == 0 {
                // c < x
                if &c >= r {
                    return Ordering::Greater;
                }
            } else if &c <= r {
                // c > x
                return Ordering::Less;
            }
        }
        unreachable!("convergent stream is infinite")
    }

    /// Exact `floor(x * m + rho)` for `rho >= 0` rational.
    pub fn floor_affine(&self, m: u64, rho: &BigRational) -> BigInt {
        let m = BigInt::from(m);
        for depth in 0.. {
            let (lo, hi) = self.bracket(depth);
            let a = (lo * &m + rho).floor();
            let b = (hi * &m + rho).floor();
            if a == b {
                return a.to_integer();
            }
        }
        unreachable!()
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bracket(30);
        let mid = (lo + hi) / BigInt::from(2);
        mid.numer().to_f64().unwrap_or(f64::NAN) / mid.denom().to_f64().unwrap_or(f64::NAN)
    }
}

fn rotate(v: &[u32], k: usize) -> Vec<u32> {
    let k = k % v.len();
    v[k..].iter().chain(&v[..k]).copied().collect()
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0;")?;
        for q in &self.head {
            write!(f, "{q},")?;
        }
        let tail: Vec<String> = self.tail.iter().map(u32::to_string).collect();
        write!(f, "({})]", tail.join(","))
    }
}

/// Iterator over convergents `(p_k, q_k)`, starting with `p_0/q_0 = 0/1`.
pub struct Convergents<'a> {
    cf: &'a ContinuedFraction,
    index: usize,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
}

impl Iterator for Convergents<'_> {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let out = self.cur.clone();
        self.index += 1;
        let a = BigInt::from(self.cf.quotient(self.index));
        let p = &a * &self.cur.0 + &self.prev.0;
        let q = &a * &self.cur.1 + &self.prev.1;
        self.prev = std::mem::replace(&mut self.cur, (p, q));
        Some(out)
    }
}

/// Floor of `p/q * m + r` maintained incrementally as `m` increases.
struct AffineFloor {
    step: BigInt,
    den: BigInt,
    floor: i64,
    rem: BigInt,
}

impl AffineFloor {
    /// Starts at `m = 1`.
    fn new(value: &BigRational, rho: &BigRational) -> Self {
        let den = value.denom() * rho.denom();
        let step = value.numer() * rho.denom();
        let num = &step + rho.numer() * value.denom();
        let (fl, rem) = num.div_mod_floor(&den);
        AffineFloor {
            step,
            den,
            floor: fl.to_i64().expect("floor fits"),
            rem,
        }
    }

    fn advance(&mut self) {
        self.rem += &self.step;
        while self.rem >= self.den {
            self.rem -= &self.den;
            self.floor += 1;
        }
    }
}

/// The values `floor(x*m + rho)` for `m = 1..=count`, each one certified.
///
/// Two incremental scans with a bracketing pair of convergents do the bulk of
/// the work; positions where the bracket does not decide the floor fall back
/// to [`ContinuedFraction::floor_affine`].
pub fn affine_floors(cf: &ContinuedFraction, rho: &BigRational, count: usize) -> Vec<i64> {
    assert!(!rho.is_negative());
    let need = BigInt::from(4u64 * (count as u64 + 2)) * rho.denom();
    let mut depth = 1;
    for (k, (_, q)) in cf.convergents().enumerate() {
        if q >= need && k >= 1 {
            depth = k;
            break;
        }
    }
    let (lo, hi) = cf.bracket(depth);
    let mut a = AffineFloor::new(&lo, rho);
    let mut b = AffineFloor::new(&hi, rho);
    let mut out = Vec::with_capacity(count);
    for m in 1..=count {
        if a.floor == b.floor {
            out.push(a.floor);
        } else {
            out.push(cf.floor_affine(m as u64, rho).to_i64().expect("fits"));
        }
        a.advance();
        b.advance();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> ContinuedFraction {
        ContinuedFraction::new(vec![2], vec![1]).unwrap()
    }

    #[test]
    fn golden_ratio_convergents() {
        let conv: Vec<(i64, i64)> = golden()
            .convergents()
            .take(6)
            .map(|(p, q)| (p.to_i64().unwrap(), q.to_i64().unwrap()))
            .collect();
        assert_eq!(conv, vec![(0, 1), (1, 2), (1, 3), (2, 5), (3, 8), (5, 13)]);
        assert!((golden().to_f64() - 0.381_966_011_250_105).abs() < 1e-12);
    }

    #[test]
    fn complement_matches_one_minus() {
        let g = golden();
        assert!((g.complement().to_f64() - 0.618_033_988_749_895).abs() < 1e-12);
        let c = ContinuedFraction::new(vec![3], vec![1, 2]).unwrap();
        assert!((c.complement().to_f64() - (1.0 - c.to_f64())).abs() < 1e-12);
        let back = c.complement().complement();
        assert!((back.to_f64() - c.to_f64()).abs() < 1e-14);
        let one = ContinuedFraction::new(vec![], vec![1]).unwrap();
        assert!((one.complement().to_f64() - (1.0 - one.to_f64())).abs() < 1e-12);
    }

    #[test]
    fn cmp_rational_is_exact() {
        let g = golden();
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(g.cmp_rational(&r(3, 8)), Ordering::Greater);
        assert_eq!(g.cmp_rational(&r(2, 5)), Ordering::Less);
        // a convergent itself is never equal to the irrational value
        assert_eq!(g.cmp_rational(&r(5, 13)), Ordering::Less);
        assert_eq!(g.cmp_rational(&r(8, 21)), Ordering::Greater);
    }

    #[test]
    fn affine_floors_agree_with_direct_certification() {
        let g = golden();
        let rho = BigRational::new(1.into(), 3.into());
        let fast = affine_floors(&g, &rho, 500);
        for (i, &f) in fast.iter().enumerate() {
            assert_eq!(f, g.floor_affine(i as u64 + 1, &rho).to_i64().unwrap());
        }
    }
}
