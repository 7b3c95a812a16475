//! Exact arithmetic around the constants: Bernoulli numbers, the denominators
//! of their even partial sums, integer factorization and recognition of
//! floating-point values as `N / π^k`.

mod factor;
mod recognize;

pub use factor::{factorize, factorize_u64, is_prime_u64, Factorization};
pub use recognize::{
    recognize_pi_rational, recognize_with_sequence, smooth_numbers, Candidate, RecognitionReport, SequenceCandidate,
    MAX_SMOOTH_MULTIPLIER,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Bernoulli numbers `B_0 .. B_{count-1}` with the convention `B_1 = -1/2`.
///
/// Uses `Σ_{k=0}^{m} C(m+1, k) B_k = 0`.
pub fn bernoulli_numbers(count: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(count);
    for m in 0..count {
        if m == 0 {
            out.push(BigRational::one());
            continue;
        }
        if m % 2 == 1 && m > 1 {
            out.push(BigRational::zero());
            continue;
        }
        // binomial row C(m+1, k), k = 0..m
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, b) in out.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        out.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    out
}

/// The Bernoulli number `B_index` (`B_1 = -1/2`).
pub fn bernoulli(index: usize) -> BigRational {
    bernoulli_numbers(index + 1).pop().expect("non-empty")
}

/// Entry `j` (1-based) is the reduced denominator of `Σ_{i=0}^{j-1} B_{2i}`:
/// `1, 6, 15, 70, 105, 2310, ...`.
pub fn partial_sum_denominators(count: usize) -> Result<Vec<BigInt>> {
    if count == 0 {
        return Err(Error::invalid("need at least one entry"));
    }
    let b = bernoulli_numbers(2 * count - 1);
    let mut sum = BigRational::zero();
    Ok((0..count)
        .map(|i| {
            sum += &b[2 * i];
            sum.denom().clone()
        })
        .collect())
}

/// `ζ(2n) = (-1)^{n+1} B_{2n} (2π)^{2n} / (2 (2n)!)`, in double precision.
pub fn zeta_even(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("zeta_even needs n >= 1"));
    }
    let b = bernoulli(2 * n);
    let b = b.numer().to_f64().unwrap_or(f64::NAN) / b.denom().to_f64().unwrap_or(f64::NAN);
    let factorial: f64 = (1..=2 * n).map(|k| k as f64).product();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * b * (2.0 * std::f64::consts::PI).powi(2 * n as i32) / (2.0 * factorial))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchForm {
    /// `N = multiplier × entry`
    Multiple,
    /// `N = entry / multiplier`
    Divisor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceMatch {
    /// 1-based entry index.
    pub index: usize,
    #[serde(with = "recognize::decimal")]
    pub multiplier: BigInt,
    pub form: MatchForm,
}

/// All exact relations `N = m · seq[i]` or `N = seq[i] / m` with `1 <= m <= max_multiplier`.
pub fn match_against_sequence(n: &BigInt, seq: &[BigInt], max_multiplier: &BigInt) -> Result<Vec<SequenceMatch>> {
    if !n.is_positive() {
        return Err(Error::invalid(format!("N = {n} must be positive")));
    }
    let mut out = Vec::new();
    for (i, entry) in seq.iter().enumerate() {
        if !entry.is_positive() {
            continue;
        }
        let (q, r) = n.div_rem(entry);
        if r.is_zero() && &q <= max_multiplier {
            out.push(SequenceMatch {
                index: i + 1,
                multiplier: q,
                form: MatchForm::Multiple,
            });
            continue;
        }
        let (q, r) = entry.div_rem(n);
        if r.is_zero() && &q <= max_multiplier && !q.is_one() {
            out.push(SequenceMatch {
                index: i + 1,
                multiplier: q,
                form: MatchForm::Divisor,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_bernoulli_numbers() {
        let b = bernoulli_numbers(13);
        assert_eq!(b[0], q(1, 1));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
        assert_eq!(b[12], q(-691, 2730));
        assert_eq!(bernoulli(4), q(-1, 30));
    }

    #[test]
    fn odd_bernoulli_numbers_vanish_and_even_signs_alternate() {
        let b = bernoulli_numbers(42);
        for k in 1..=20 {
            assert!(b[2 * k + 1].is_zero());
        }
        for k in 1..20 {
            assert_ne!(b[2 * k].is_positive(), b[2 * k + 2].is_positive());
        }
    }

    #[test]
    fn zeta_values_match_series() {
        for n in 1..=3 {
            let series: f64 = (1..=1_000_000u64).rev().map(|k| (k as f64).powi(-2 * n as i32)).sum();
            // Euler–Maclaurin tail beyond 10^6
            let m = 1e6f64;
            let s = 2.0 * n as f64;
            let tail = m.powf(1.0 - s) / (s - 1.0) - 0.5 * m.powf(-s);
            let z = zeta_even(n).unwrap();
            assert!((z - series - tail).abs() < 1e-10, "n = {n}");
        }
        assert!((zeta_even(1).unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
    }

    #[test]
    fn denominators_of_partial_sums() {
        let d = partial_sum_denominators(13).unwrap();
        assert_eq!(&d[..4], &ints(&[1, 6, 15, 70])[..]);
        assert_eq!(d[8], BigInt::from(255_255));
        assert_eq!(d[12], BigInt::from(37_182_145));
        assert!(partial_sum_denominators(0).is_err());
        assert!(d.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn cross_relations_with_constants() {
        let d = partial_sum_denominators(13).unwrap();
        assert_eq!(BigInt::from(2), BigInt::from(2) * &d[0]);
        assert_eq!(BigInt::from(35) * 2, d[3]);
        assert_eq!(BigInt::from(71_680), BigInt::from(1024) * &d[3]);
        assert_eq!(BigInt::from(2_342_475_135u64), BigInt::from(63) * &d[12]);
        assert_eq!(
            BigInt::from(15_348_366_279_966_720u64),
            BigInt::from(1u64 << 33) * 7 * &d[8]
        );
    }

    #[test]
    fn sequence_matches() {
        let seq = partial_sum_denominators(20).unwrap();
        let max = BigInt::from(1000);
        let m = match_against_sequence(&BigInt::from(105), &seq, &max).unwrap();
        assert!(m.contains(&SequenceMatch {
            index: 5,
            multiplier: BigInt::from(1),
            form: MatchForm::Multiple
        }));
        let m = match_against_sequence(&BigInt::from(15015), &seq, &max).unwrap();
        assert!(m.contains(&SequenceMatch {
            index: 7,
            multiplier: BigInt::from(3),
            form: MatchForm::Multiple
        }));
        let m = match_against_sequence(&BigInt::from(1_616_615), &seq, &max).unwrap();
        assert!(m.contains(&SequenceMatch {
            index: 10,
            multiplier: BigInt::from(2),
            form: MatchForm::Divisor
        }));
        assert!(match_against_sequence(&BigInt::from(0), &seq, &max).is_err());
    }
}
