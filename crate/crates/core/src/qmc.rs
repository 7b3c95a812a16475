//! Quasi-Monte Carlo integration with Halton points over `[0, π]^k`.
//!
//! Points are indexed from 1 (index 0 is the origin). Each batch is split into
//! fixed chunks that are summed independently and then merged in chunk order,
//! so results are bit-reproducible for any worker count.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quad::{Method, QuadratureEstimate};
use crate::sum::{pairwise_merge, NeumaierSum};
use crate::{Error, Result};

const CHUNK: u64 = 4096;

/// Dimension from which [`Scramble::Auto`] turns digit scrambling on.
pub const AUTO_SCRAMBLE_DIM: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scramble {
    Off,
    Auto,
    On,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QmcConfig {
    pub max_points: u64,
    /// Points evaluated before the stopping rule is consulted.
    #[serde(default)]
    pub min_points: u64,
    pub batch_size: u64,
    /// Seed of a Cranley–Patterson rotation; `None` disables it.
    pub shift_seed: Option<u64>,
    /// Number of successive batch estimates whose spread is the error proxy.
    pub window: usize,
    pub rel_tol: f64,
    pub scramble: Scramble,
    pub scramble_seed: u64,
}

impl Default for QmcConfig {
    fn default() -> Self {
        Self {
            max_points: 10_000_000,
            min_points: 0,
            batch_size: 1 << 16,
            shift_seed: None,
            window: 8,
            rel_tol: 1e-4,
            scramble: Scramble::Auto,
            scramble_seed: 0x5eed,
        }
    }
}

impl QmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 || self.max_points < self.batch_size {
            return Err(Error::invalid(format!(
                "need max_points ({}) >= batch_size ({}) >= 1",
                self.max_points, self.batch_size
            )));
        }
        if self.min_points > self.max_points {
            return Err(Error::invalid(format!(
                "min_points ({}) exceeds max_points ({})",
                self.min_points, self.max_points
            )));
        }
        if self.window == 0 {
            return Err(Error::invalid("convergence window must be at least 1"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol must be positive"));
        }
        Ok(())
    }
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while primes.len() < k {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Van der Corput radical inverse of `index` in `base`.
#[inline]
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    acc
}

#[inline]
fn scrambled_radical_inverse(mut index: u64, base: u64, perm: &[u64]) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += perm[(index % base) as usize] as f64 * scale;
        index /= base;
        scale *= inv;
    }
    acc
}

/// Halton point `index` in `[0, 1)^dim` (coordinate `j` uses the `j`-th prime).
pub fn halton_point(index: u64, dim: usize) -> Vec<f64> {
    first_primes(dim)
        .into_iter()
        .map(|p| radical_inverse(index, p))
        .collect()
}

/// A reusable Halton generator with optional digit scrambling and rotation.
#[derive(Debug, Clone)]
pub struct HaltonSequence {
    bases: Vec<u64>,
    perms: Option<Vec<Vec<u64>>>,
    shift: Option<Vec<f64>>,
}

impl HaltonSequence {
    pub fn new(dim: usize, cfg: &QmcConfig) -> Self {
        let bases = first_primes(dim);
        let scramble = match cfg.scramble {
            Scramble::Off => false,
            Scramble::On => true,
            Scramble::Auto => dim >= AUTO_SCRAMBLE_DIM,
        };
        let perms = scramble.then(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.scramble_seed);
            bases
                .iter()
                .map(|&b| {
                    // Digit 0 stays fixed so the infinite zero tail is unchanged.
                    let mut rest: Vec<u64> = (1..b).collect();
                    rest.shuffle(&mut rng);
                    std::iter::once(0).chain(rest).collect()
                })
                .collect()
        });
        let shift = cfg.shift_seed.map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..dim).map(|_| rng.random::<f64>()).collect()
        });
        Self {
            bases,
            perms,
            shift,
        }
    }

    pub fn dimension(&self) -> usize {
        self.bases.len()
    }

    #[inline]
    pub fn fill(&self, index: u64, out: &mut [f64]) {
        for (j, slot) in out.iter_mut().enumerate() {
            let base = self.bases[j];
            let mut x = match &self.perms {
                Some(p) => scrambled_radical_inverse(index, base, &p[j]),
                None => radical_inverse(index, base),
            };
            if let Some(s) = &self.shift {
                x += s[j];
                if x >= 1.0 {
                    x -= 1.0;
                }
            }
            *slot = x;
        }
    }
}

fn batch_sum<F>(seq: &HaltonSequence, start: u64, count: u64, f: &F) -> Result<NeumaierSum>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = seq.dimension();
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<NeumaierSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = start + c * CHUNK;
            let hi = (lo + CHUNK).min(start + count);
            let mut u = vec![0.0; dim];
            let mut angles = vec![0.0; dim];
            let mut acc = NeumaierSum::new();
            for index in lo..hi {
                seq.fill(index, &mut u);
                for (a, x) in angles.iter_mut().zip(&u) {
                    *a = PI * x;
                }
                let v = f(&angles);
                if !v.is_finite() {
                    return Err(Error::NonFinite { point: angles });
                }
                acc.add(v);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_merge(&parts))
}

/// Integrates `f` over `[0, π]^dim` by averaging over Halton points.
///
/// After each batch the running estimate is recorded; the error proxy is the
/// max-min spread of the last `window` estimates, and the run stops once that
/// spread is below `rel_tol · |value|` or the point budget is spent.
pub fn integrate_qmc<F>(dim: usize, f: F, cfg: &QmcConfig) -> Result<QuadratureEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if dim == 0 {
        return Err(Error::invalid("integration dimension must be at least 1"));
    }
    cfg.validate()?;
    let seq = HaltonSequence::new(dim, cfg);
    let volume = PI.powi(dim as i32);
    let mut total = NeumaierSum::new();
    let mut used = 0u64;
    let mut history: Vec<f64> = Vec::new();
    loop {
        let count = cfg.batch_size.min(cfg.max_points - used);
        let part = batch_sum(&seq, used + 1, count, &f)?;
        total.merge(&part);
        used += count;
        let value = volume * total.value() / used as f64;
        history.push(value);
        let recent = &history[history.len().saturating_sub(cfg.window)..];
        let spread = if recent.len() < 2 {
            f64::INFINITY
        } else {
            let hi = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = recent.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo
        };
        let window_full = recent.len() >= cfg.window.max(2);
        let exact = recent.len() >= 2 && spread == 0.0;
        let converged = (window_full && spread <= cfg.rel_tol * value.abs()) || exact;
        if (converged && used >= cfg.min_points) || used >= cfg.max_points {
            return Ok(QuadratureEstimate {
                value,
                error_estimate: if spread.is_finite() { spread } else { value.abs() },
                evaluations: used,
                method: Method::Qmc,
                converged,
            });
        }
    }
}
