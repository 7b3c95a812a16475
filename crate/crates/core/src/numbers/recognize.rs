use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{factorize, match_against_sequence, Factorization, SequenceMatch};
use crate::{Error, Result};

/// Serde helpers writing big integers as decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod decimal_pairs {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(BigInt, u32)], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<(String, u32)> = v.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigInt, u32)>, D::Error> {
        let text = Vec::<(String, u32)>::deserialize(d)?;
        text.into_iter()
            .map(|(p, e)| p.parse().map(|p| (p, e)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const PI_DD: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

impl DoubleDouble {
    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        let lo = err + (self.hi * o.lo + self.lo * o.hi);
        Self::two_sum(p, lo)
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Self::from_f64(q1)));
        let q2 = r.hi / o.hi;
        Self::two_sum(q1, q2)
    }

    fn sub(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, -o.hi);
        Self::two_sum(s.hi, s.lo + self.lo - o.lo)
    }

    fn powi(self, k: u32) -> Self {
        (0..k).fold(Self::from_f64(1.0), |acc, _| acc.mul(self))
    }

    /// Nearest integer and the remaining fractional part.
    fn round(self) -> Option<(BigInt, f64)> {
        let h = self.hi.round();
        let rest = Self::two_sum(self.hi - h, self.lo);
        let adj = rest.hi.round();
        let frac = (rest.hi - adj) + rest.lo;
        let n = BigInt::from_f64(h)? + BigInt::from_f64(adj)?;
        Some((n, frac))
    }
}

/// `x · π^k` in double-double arithmetic.
fn scaled_by_pi_power(x: f64, k: i32) -> DoubleDouble {
    let p = PI_DD.powi(k.unsigned_abs());
    let x = DoubleDouble::from_f64(x);
    if k >= 0 {
        x.mul(p)
    } else {
        x.div(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub pi_power: i32,
    #[serde(with = "decimal")]
    pub integer: BigInt,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognitionReport {
    pub input: f64,
    /// `input ≈ recognized_integer / π^pi_power`
    pub pi_power: i32,
    #[serde(with = "decimal")]
    pub recognized_integer: BigInt,
    /// `|input · π^k - N| / N`
    pub residual: f64,
    pub factorization: Factorization,
    pub sequence_matches: Vec<SequenceMatch>,
    /// Other powers that also passed the threshold.
    pub alternatives: Vec<Candidate>,
    pub ambiguous: bool,
}

impl RecognitionReport {
    pub fn with_sequence_matches(mut self, seq: &[BigInt], max_multiplier: &BigInt) -> Result<Self> {
        self.sequence_matches = match_against_sequence(&self.recognized_integer, seq, max_multiplier)?;
        Ok(self)
    }
}

/// Looks for `k` in `k_range` such that `x · π^k` lies within relative
/// `max_residual` of a positive integer `N >= 2`. Returns `None` when no power
/// qualifies. The smallest residual wins; the other passing powers are listed
/// as alternatives and flag the report as ambiguous.
///
/// Once `N · max_residual` exceeds one, every power passes by chance; use
/// [`recognize_with_sequence`] for such inputs.
pub fn recognize_pi_rational(
    x: f64,
    k_range: RangeInclusive<i32>,
    max_residual: f64,
) -> Result<Option<RecognitionReport>> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("cannot recognize {x}")));
    }
    if !(max_residual > 0.0) {
        return Err(Error::invalid("max_residual must be positive"));
    }
    let mut passing: Vec<Candidate> = Vec::new();
    for k in k_range {
        let scaled = scaled_by_pi_power(x, k);
        let Some((n, frac)) = scaled.round() else {
            continue;
        };
        if n < BigInt::from(2) {
            continue;
        }
        let residual = (frac / n.to_f64().unwrap_or(f64::INFINITY)).abs();
        if residual < max_residual {
            passing.push(Candidate {
                pi_power: k,
                integer: n,
                residual,
            });
        }
    }
    if passing.is_empty() {
        return Ok(None);
    }
    let best = passing
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.residual.total_cmp(&b.1.residual))
        .map(|(i, _)| i)
        .expect("non-empty");
    let chosen = passing.remove(best);
    let factorization = factorize(&chosen.integer)?;
    debug_assert!(!chosen.integer.is_zero());
    Ok(Some(RecognitionReport {
        input: x,
        pi_power: chosen.pi_power,
        recognized_integer: chosen.integer,
        residual: chosen.residual,
        factorization,
        sequence_matches: Vec::new(),
        ambiguous: !passing.is_empty(),
        alternatives: passing,
    }))
}

/// Largest multiplier considered by [`recognize_with_sequence`].
pub const MAX_SMOOTH_MULTIPLIER: u64 = 1 << 40;

/// The 7-smooth numbers (`2^a 3^b 5^c 7^d`) up to `limit`, ascending.
pub fn smooth_numbers(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut a = 1u64;
    while a <= limit {
        let mut b = a;
        while b <= limit {
            let mut c = b;
            while c <= limit {
                let mut d = c;
                while d <= limit {
                    out.push(d);
                    match d.checked_mul(7) {
                        Some(v) => d = v,
                        None => break,
                    }
                }
                match c.checked_mul(5) {
                    Some(v) => c = v,
                    None => break,
                }
            }
            match b.checked_mul(3) {
                Some(v) => b = v,
                None => break,
            }
        }
        match a.checked_mul(2) {
            Some(v) => a = v,
            None => break,
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceCandidate {
    pub pi_power: i32,
    #[serde(with = "decimal")]
    pub integer: BigInt,
    pub sequence_match: SequenceMatch,
    /// `|x · π^k - N| / N`
    pub residual: f64,
    /// `residual` times the number of 7-smooth multipliers up to `m`; lower is better.
    pub score: f64,
}

/// Recognition guided by a reference sequence: looks for `N = m · seq[i]` or
/// `N = seq[i] / m` with `m` 7-smooth and at most `max_multiplier`, such that
/// `x · π^k` is within relative `max_residual` of `N`. Candidates are returned
/// by increasing score, which penalises large multipliers: a loose input is
/// matched by some huge smooth multiplier almost surely. Each integer appears
/// once, with its best-scoring relation.
///
/// The candidate set is sparse (7-smooth numbers are rare), so this can
/// pin down a large integer from an input whose precision is far too low for
/// rounding to the nearest integer.
pub fn recognize_with_sequence(
    x: f64,
    k_range: RangeInclusive<i32>,
    seq: &[BigInt],
    max_multiplier: u64,
    max_residual: f64,
) -> Result<Vec<SequenceCandidate>> {
    use super::MatchForm;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("cannot recognize {x}")));
    }
    if !(max_residual > 0.0) {
        return Err(Error::invalid("max_residual must be positive"));
    }
    let smooth = smooth_numbers(max_multiplier.min(MAX_SMOOTH_MULTIPLIER));
    let nearest = |target: f64| -> Vec<(u64, f64)> {
        let i = smooth.partition_point(|&m| (m as f64) < target);
        (i.saturating_sub(1)..(i + 1).min(smooth.len()))
            .map(|j| (smooth[j], (j + 1) as f64))
            .collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    for k in k_range {
        let scaled = scaled_by_pi_power(x, k);
        let y = scaled.hi + scaled.lo;
        for (i, entry) in seq.iter().enumerate() {
            let Some(e) = entry.to_f64().filter(|e| *e > 0.0) else {
                continue;
            };
            for (m, rank) in nearest(y / e) {
                let n = entry * BigInt::from(m);
                let residual = ((y - m as f64 * e) / (m as f64 * e)).abs();
                if residual < max_residual {
                    out.push(SequenceCandidate {
                        pi_power: k,
                        integer: n,
                        sequence_match: SequenceMatch {
                            index: i + 1,
                            multiplier: BigInt::from(m),
                            form: MatchForm::Multiple,
                        },
                        residual,
                        score: residual * rank,
                    });
                }
            }
            for (m, rank) in nearest(e / y) {
                if m < 2 || !(entry % BigInt::from(m)).is_zero() {
                    continue;
                }
                let n = entry / BigInt::from(m);
                let nf = e / m as f64;
                let residual = ((y - nf) / nf).abs();
                if residual < max_residual {
                    out.push(SequenceCandidate {
                        pi_power: k,
                        integer: n,
                        sequence_match: SequenceMatch {
                            index: i + 1,
                            multiplier: BigInt::from(m),
                            form: MatchForm::Divisor,
                        },
                        residual,
                        score: residual * rank,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.score.total_cmp(&b.score).then(a.residual.total_cmp(&b.residual)));
    let mut seen = std::collections::HashSet::new();
    out.retain(|c| seen.insert((c.pi_power, c.integer.clone())));
    Ok(out)
}
