//! End-to-end computations: normalization constants, average entropies,
//! expected spectra and the two-level redundancy constants.
//!
//! Constants are normalizations of the kernel over the *unordered* simplex.
//! With the ordered region the raw integral covers one of the `n!` eigenvalue
//! orderings, so `constant = 1 / (n! · raw)`; over the full angle box the raw
//! integral already covers the whole simplex and `constant = 1 / raw`.

mod cache;

pub use cache::{CacheKey, CacheRecord, ResultCache, CACHE_SCHEMA_VERSION};

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::eigenparam::{fill_eigenvalues, map_full_box, map_ordered, reduced_jacobian, EigenvalueVector};
use crate::kernels::{
    bloch_volume_density, bures_marginal_theta_n2, pair_product, quasi_marginal_theta_n2, redundancy_n2,
    KernelSpec, Mean,
};
use crate::numbers::RecognitionReport;
use crate::qmc::{integrate_qmc, QmcConfig};
use crate::quad::{integrate_adaptive_vec, integrate_iterated_1d, AdaptiveConfig, Method, QuadratureEstimate};
use crate::{Error, Result};

/// Largest supported dimension (stack scratch size).
pub const MAX_DIMENSION: usize = 16;

/// Integration region in angle space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// `d_1 >= ... >= d_n`, multiplied by `n!` afterwards.
    Ordered,
    /// The whole box `[0, π]^{n-1}`.
    FullBox,
}

impl Region {
    pub fn default_for(method: Method) -> Self {
        match method {
            Method::Adaptive => Region::Ordered,
            Method::Qmc => Region::FullBox,
        }
    }

    /// Number of copies of the raw region that make up the simplex.
    pub fn multiplier(self, n: usize) -> f64 {
        match self {
            Region::Ordered => factorial(n),
            Region::FullBox => 1.0,
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Ordered => f.write_str("ordered"),
            Region::FullBox => f.write_str("full-box"),
        }
    }
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordered" => Ok(Region::Ordered),
            "full-box" => Ok(Region::FullBox),
            other => Err(Error::invalid(format!("unknown region {other:?}"))),
        }
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Default relative tolerance per dimension; `None` marks advisory dimensions.
pub fn default_rel_tol(n: usize) -> Option<f64> {
    match n {
        0..=3 => Some(1e-8),
        4 => Some(1e-6),
        5 => Some(1e-4),
        _ => None,
    }
}

/// Tolerance used for advisory dimensions.
pub const ADVISORY_REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub adaptive: AdaptiveConfig,
    pub qmc: QmcConfig,
    /// Overrides [`Region::default_for`].
    pub region: Option<Region>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            adaptive: AdaptiveConfig::default(),
            qmc: QmcConfig::default(),
            region: None,
        }
    }
}

impl PipelineConfig {
    /// Configuration with the default tolerance table applied to both engines.
    pub fn for_dimension(n: usize) -> Self {
        let rel = default_rel_tol(n).unwrap_or(ADVISORY_REL_TOL);
        Self {
            adaptive: AdaptiveConfig::with_rel_tol(rel),
            qmc: QmcConfig {
                rel_tol: rel,
                ..QmcConfig::default()
            },
            region: None,
        }
    }

    pub fn region_for(&self, method: Method) -> Region {
        self.region.unwrap_or(Region::default_for(method))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantResult {
    pub spec: KernelSpec,
    pub method: Method,
    pub region: Region,
    /// Integral of the kernel over `region`.
    pub raw_integral: f64,
    /// `n!` for the ordered region, 1 for the full box.
    pub multiplier: f64,
    /// Integral over the whole simplex, `multiplier · raw_integral`.
    pub simplex_integral: f64,
    /// Normalization constant `1 / simplex_integral`.
    pub constant: f64,
    /// Relative error of `constant` implied by the quadrature error estimate.
    pub relative_error: f64,
    pub estimate: QuadratureEstimate,
    pub recognition: Option<RecognitionReport>,
}

impl ConstantResult {
    fn from_estimate(spec: KernelSpec, method: Method, region: Region, estimate: QuadratureEstimate) -> Result<Self> {
        let multiplier = region.multiplier(spec.n);
        let raw = estimate.value;
        if !(raw > 0.0) || !raw.is_finite() {
            return Err(Error::Divergent(format!(
                "normalization integral {raw} for n = {}, beta = {} is not positive and finite",
                spec.n, spec.beta
            )));
        }
        let simplex_integral = multiplier * raw;
        Ok(Self {
            spec,
            method,
            region,
            raw_integral: raw,
            multiplier,
            simplex_integral,
            constant: 1.0 / simplex_integral,
            relative_error: estimate.error_estimate / raw,
            estimate,
            recognition: None,
        })
    }
}

fn check_spec(spec: &KernelSpec) -> Result<()> {
    KernelSpec::new(spec.n, spec.mean, spec.beta)?;
    if spec.n > MAX_DIMENSION {
        return Err(Error::invalid(format!(
            "dimension {} exceeds the supported maximum {MAX_DIMENSION}",
            spec.n
        )));
    }
    // The two-level kernel (d_1 - d_2)^β is odd under swapping the eigenvalues,
    // so for odd β its integral over the simplex vanishes.
    if spec.n == 2 && spec.beta % 2 == 1 {
        return Err(Error::Divergent(format!(
            "odd exponent beta = {} gives a vanishing two-level integral",
            spec.beta
        )));
    }
    Ok(())
}

/// Kernel density times the reduced Jacobian at unit-cube point `u`, with the
/// spectrum written to `d`.
#[inline]
fn weight_at(u: &[f64], region: Region, spec: &KernelSpec, angles: &mut [f64], d: &mut [f64]) -> f64 {
    let scale = match region {
        Region::Ordered => map_ordered(u, angles),
        Region::FullBox => map_full_box(u, angles),
    };
    fill_eigenvalues(angles, d);
    scale * pair_product(d, spec) * reduced_jacobian(angles)
}

/// Integrates `weight · g_c(d)` over the unit cube for the moment functions `g`.
///
/// Component 0 is always the plain normalization integral.
fn adaptive_moments<G>(spec: &KernelSpec, region: Region, cfg: &AdaptiveConfig, extra: usize, g: G) -> Result<crate::quad::VectorEstimate>
where
    G: Fn(&[f64], &mut [f64]) + Sync,
{
    let levels = spec.n - 1;
    integrate_adaptive_vec(
        levels,
        1 + extra,
        |u, out| {
            let mut angles = [0.0; MAX_DIMENSION];
            let mut d = [0.0; MAX_DIMENSION];
            let w = weight_at(u, region, spec, &mut angles[..levels], &mut d[..spec.n]);
            out[0] = w;
            if extra > 0 {
                g(&d[..spec.n], &mut out[1..]);
                for v in out[1..].iter_mut() {
                    *v *= w;
                }
            }
        },
        cfg,
    )
}

fn raw_integral(spec: &KernelSpec, method: Method, cfg: &PipelineConfig) -> Result<(Region, QuadratureEstimate)> {
    check_spec(spec)?;
    let region = cfg.region_for(method);
    let levels = spec.n - 1;
    let estimate = match method {
        Method::Adaptive => adaptive_moments(spec, region, &cfg.adaptive, 0, |_, _| {})?.component(0),
        Method::Qmc => {
            let box_volume = PI.powi(levels as i32);
            integrate_qmc(
                levels,
                |a| {
                    let mut u = [0.0; MAX_DIMENSION];
                    let mut angles = [0.0; MAX_DIMENSION];
                    let mut d = [0.0; MAX_DIMENSION];
                    for (x, t) in u.iter_mut().zip(a) {
                        *x = t / PI;
                    }
                    weight_at(&u[..levels], region, spec, &mut angles[..levels], &mut d[..spec.n]) / box_volume
                },
                &cfg.qmc,
            )?
        }
    };
    Ok((region, estimate))
}

/// Normalization constant of the kernel `spec`.
///
/// Non-convergence is not an error: the result carries `estimate.converged = false`.
pub fn hall_constant(spec: &KernelSpec, method: Method, cfg: &PipelineConfig) -> Result<ConstantResult> {
    let (region, estimate) = raw_integral(spec, method, cfg)?;
    ConstantResult::from_estimate(*spec, method, region, estimate)
}

/// Like [`hall_constant`], reading from and writing to `cache`.
pub fn hall_constant_cached(
    spec: &KernelSpec,
    method: Method,
    cfg: &PipelineConfig,
    cache: &ResultCache,
) -> Result<ConstantResult> {
    let key = CacheKey::new(spec, method, cfg)?;
    if let Some(record) = cache.get(&key)? {
        return ConstantResult::from_estimate(*spec, method, key.region, record.estimate());
    }
    let result = hall_constant(spec, method, cfg)?;
    cache.put(CacheRecord::new(key, &result.estimate))?;
    Ok(result)
}

/// Quasi-Bures (identric mean) normalization for dimension `n`.
pub fn quasi_constant(n: usize, method: Method, cfg: &PipelineConfig) -> Result<ConstantResult> {
    hall_constant(&KernelSpec::quasi_bures(n)?, method, cfg)
}

/// Arithmetic-mean kernel with exponent `beta` in place of 2.
pub fn variant_constant(n: usize, beta: u32, method: Method, cfg: &PipelineConfig) -> Result<ConstantResult> {
    hall_constant(&KernelSpec::new(n, Mean::Arithmetic, beta)?, method, cfg)
}

/// `1 / ∫₀^π |cos t|^β dt`, the two-level constant for even `beta`.
pub fn wallis_constant(beta: u32) -> f64 {
    // ∫₀^π cos^β = π · (β-1)!! / β!!
    let ratio: f64 = (1..=beta / 2).map(|k| (2 * k - 1) as f64 / (2 * k) as f64).product();
    1.0 / (PI * ratio)
}

/// Best rational approximation `p / q` with `q <= max_denominator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub numerator: i64,
    pub denominator: i64,
}

/// Closest fraction to `x` with denominator at most `max_denominator`, from
/// the continued-fraction convergents and the last admissible semiconvergent.
pub fn best_rational(x: f64, max_denominator: i64) -> Fraction {
    assert!(max_denominator >= 1);
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    loop {
        let a = y.floor();
        let ai = a as i64;
        let q2 = q0 + ai * q1;
        if q2 > max_denominator {
            break;
        }
        let p2 = p0 + ai * p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a;
        if frac == 0.0 || (x - p1 as f64 / q1 as f64).abs() == 0.0 {
            break;
        }
        y = 1.0 / frac;
        if !y.is_finite() || y > 1e15 {
            break;
        }
    }
    let k = (max_denominator - q0) / q1;
    let (ps, qs) = (p0 + k * p1, q0 + k * q1);
    let semi = (x - ps as f64 / qs as f64).abs();
    let conv = (x - p1 as f64 / q1 as f64).abs();
    let (numerator, denominator) = if semi < conv { (ps, qs) } else { (p1, q1) };
    Fraction {
        numerator,
        denominator,
    }
}

/// Mean entropy written as `n log n - p/q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyFit {
    pub fraction: Fraction,
    /// `mean - (n log n - p/q)`
    pub residual: f64,
}

pub const FIT_MAX_DENOMINATOR: i64 = 10_000;

pub fn fit_entropy(n: usize, mean: f64, max_denominator: i64) -> EntropyFit {
    let nlogn = n as f64 * (n as f64).ln();
    let fraction = best_rational(nlogn - mean, max_denominator);
    let residual = mean - (nlogn - fraction.numerator as f64 / fraction.denominator as f64);
    EntropyFit { fraction, residual }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub n: usize,
    pub mean_entropy_nats: f64,
    pub error_estimate: f64,
    pub fit: Option<EntropyFit>,
    pub normalization: QuadratureEstimate,
}

fn von_neumann(d: &[f64]) -> f64 {
    -d.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

/// Average of `-Σ d_i log d_i` under the normalized Bures eigenvalue density.
pub fn average_entropy(n: usize, cfg: &PipelineConfig, fit: bool) -> Result<EntropyResult> {
    let spec = KernelSpec::bures(n)?;
    check_spec(&spec)?;
    let r = adaptive_moments(&spec, Region::Ordered, &cfg.adaptive, 1, |d, out| out[0] = von_neumann(d))?;
    let (z, s) = (r.values[0], r.values[1]);
    let mean = s / z;
    let error_estimate = (r.errors[1] + mean.abs() * r.errors[0]) / z;
    Ok(EntropyResult {
        n,
        mean_entropy_nats: mean,
        error_estimate,
        fit: fit.then(|| fit_entropy(n, mean, FIT_MAX_DENOMINATOR)),
        normalization: r.component(0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedSpectrum {
    /// Expectations of the ordered eigenvalues `d_1 >= ... >= d_n`.
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub converged: bool,
}

impl ExpectedSpectrum {
    pub fn to_eigenvalues(&self, sum_tolerance: f64) -> Result<EigenvalueVector> {
        EigenvalueVector::with_tolerance(self.values.clone(), sum_tolerance)
    }
}

/// Expected ordered spectrum under the Bures eigenvalue density.
pub fn expected_eigenvalues(n: usize, cfg: &PipelineConfig) -> Result<ExpectedSpectrum> {
    let spec = KernelSpec::bures(n)?;
    check_spec(&spec)?;
    let r = adaptive_moments(&spec, Region::Ordered, &cfg.adaptive, n, |d, out| out.copy_from_slice(d))?;
    let z = r.values[0];
    let values: Vec<f64> = r.values[1..].iter().map(|v| v / z).collect();
    let errors = r.errors[1..]
        .iter()
        .zip(&values)
        .map(|(e, v)| (e + v.abs() * r.errors[0]) / z)
        .collect();
    Ok(ExpectedSpectrum {
        values,
        errors,
        converged: r.converged,
    })
}

/// Redundancy constant (the value at `m = 1`) of the quasi-Bures prior; it is
/// the same at every interior `θ`.
pub fn quasi_redundancy_constant_n2() -> Result<f64> {
    let theta = 0.25 * PI;
    redundancy_n2(theta, 1.0, bloch_volume_density(quasi_marginal_theta_n2(theta), theta))
}

/// Bures-prior average over `θ` of the redundancy of the Bures prior, at `m = 1`.
pub fn bures_bayes_redundancy_n2(cfg: &AdaptiveConfig) -> Result<QuadratureEstimate> {
    integrate_iterated_1d(
        |t| {
            let w = bloch_volume_density(bures_marginal_theta_n2(t), t);
            match redundancy_n2(t, 1.0, w) {
                Ok(r) => bures_marginal_theta_n2(t) * r,
                Err(_) => 0.0,
            }
        },
        0.0,
        FRAC_PI_2,
        cfg,
    )
}

/// Looks the constant up as `N / π^k` and relates `N` to the Bernoulli
/// partial-sum denominators.
pub fn recognize_constant(
    result: &mut ConstantResult,
    k_max: i32,
    max_residual: f64,
    sequence_terms: usize,
    max_multiplier: &BigInt,
) -> Result<()> {
    let report = crate::numbers::recognize_pi_rational(result.constant, 0..=k_max, max_residual)?;
    result.recognition = match report {
        Some(r) => {
            let seq = crate::numbers::partial_sum_denominators(sequence_terms)?;
            Some(r.with_sequence_matches(&seq, max_multiplier)?)
        }
        None => None,
    };
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(rel: f64) -> PipelineConfig {
        PipelineConfig {
            adaptive: AdaptiveConfig::with_rel_tol(rel),
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn two_level_bures_constant() {
        let r = hall_constant(&KernelSpec::bures(2).unwrap(), Method::Adaptive, &cfg(1e-12)).unwrap();
        assert!((r.constant - 2.0 / PI).abs() < 1e-12);
        assert_eq!(r.multiplier, 2.0);
        assert!((r.constant * r.raw_integral * r.multiplier - 1.0).abs() < 1e-15);
        assert!((r.raw_integral - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn three_level_bures_constant() {
        let r = hall_constant(&KernelSpec::bures(3).unwrap(), Method::Adaptive, &cfg(1e-10)).unwrap();
        assert!((r.constant / (35.0 / PI) - 1.0).abs() < 1e-8);
        assert!(r.estimate.converged);
    }

    #[test]
    fn ordered_and_full_box_agree() {
        for n in [2, 3] {
            let spec = KernelSpec::bures(n).unwrap();
            let ordered = hall_constant(&spec, Method::Adaptive, &cfg(1e-10)).unwrap();
            let full_cfg = PipelineConfig {
                region: Some(Region::FullBox),
                ..cfg(1e-10)
            };
            let full = hall_constant(&spec, Method::Adaptive, &full_cfg).unwrap();
            assert!((ordered.simplex_integral / full.raw_integral - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn nesting_order_does_not_matter() {
        // Over the full box the levels can be integrated in any order.
        for n in [3, 4] {
            let spec = KernelSpec::bures(n).unwrap();
            let levels = n - 1;
            let c = AdaptiveConfig::with_rel_tol(1e-8);
            let run = |perm: Vec<usize>| {
                integrate_adaptive_vec(
                    levels,
                    1,
                    |u, out| {
                        let v: Vec<f64> = perm.iter().map(|&i| u[i]).collect();
                        let mut angles = [0.0; MAX_DIMENSION];
                        let mut d = [0.0; MAX_DIMENSION];
                        out[0] = weight_at(&v, Region::FullBox, &spec, &mut angles[..levels], &mut d[..n]);
                    },
                    &c,
                )
                .unwrap()
                .values[0]
            };
            let base = run((0..levels).collect());
            let rev = run((0..levels).rev().collect());
            assert!((base / rev - 1.0).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn two_level_even_exponents_match_wallis() {
        for (beta, expect) in [(4, 8.0 / (3.0 * PI)), (6, 16.0 / (5.0 * PI)), (8, 128.0 / (35.0 * PI))] {
            let r = variant_constant(2, beta, Method::Adaptive, &cfg(1e-12)).unwrap();
            assert!((r.constant / expect - 1.0).abs() < 1e-10);
            assert!((wallis_constant(beta) / expect - 1.0).abs() < 1e-14);
        }
        assert!((wallis_constant(2) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn odd_two_level_exponent_diverges() {
        for beta in [1, 3, 5] {
            assert!(matches!(
                variant_constant(2, beta, Method::Adaptive, &cfg(1e-8)),
                Err(Error::Divergent(_))
            ));
        }
    }

    #[test]
    fn identric_integral_exceeds_arithmetic() {
        let a = hall_constant(&KernelSpec::bures(2).unwrap(), Method::Adaptive, &cfg(1e-10)).unwrap();
        let i = quasi_constant(2, Method::Adaptive, &cfg(1e-10)).unwrap();
        assert!(i.simplex_integral > a.simplex_integral);
    }

    #[test]
    fn qmc_two_level() {
        let c = PipelineConfig {
            qmc: QmcConfig {
                max_points: 1_000_000,
                rel_tol: 1e-12,
                ..QmcConfig::default()
            },
            ..PipelineConfig::default()
        };
        let r = hall_constant(&KernelSpec::bures(2).unwrap(), Method::Qmc, &c).unwrap();
        assert_eq!(r.region, Region::FullBox);
        assert!((r.raw_integral - PI / 2.0).abs() < 1e-4);
    }

    /// `ψ(n²/2 + 1) - ψ(n + 1/2)` via `ψ(x + 1) = ψ(x) + 1/x`.
    fn entropy_oracle(n: usize) -> f64 {
        let digamma = |x: f64| -> f64 {
            let (mut y, mut acc) = if x.fract() == 0.0 {
                (1.0, -0.577_215_664_901_532_9)
            } else {
                (0.5, -0.577_215_664_901_532_9 - 2.0 * 2f64.ln())
            };
            while y < x {
                acc += 1.0 / y;
                y += 1.0;
            }
            acc
        };
        digamma((n * n) as f64 / 2.0 + 1.0) - digamma(n as f64 + 0.5)
    }

    #[test]
    fn entropy_two_and_three_levels() {
        let r = average_entropy(2, &cfg(1e-12), true).unwrap();
        assert!((r.mean_entropy_nats - (2.0 * 2f64.ln() - 7.0 / 6.0)).abs() < 1e-11);
        assert_eq!(r.fit.unwrap().fraction, Fraction { numerator: 7, denominator: 6 });
        let r = average_entropy(3, &cfg(1e-10), true).unwrap();
        assert!((r.mean_entropy_nats - entropy_oracle(3)).abs() < 1e-10);
        assert_eq!(r.fit.unwrap().fraction, Fraction { numerator: 3917, denominator: 1405 });
    }

    #[test]
    fn entropy_four_levels_against_digamma_oracle() {
        let r = average_entropy(4, &cfg(1e-8), false).unwrap();
        assert!((r.mean_entropy_nats - entropy_oracle(4)).abs() < 1e-8);
        assert!(r.mean_entropy_nats > 0.0 && r.mean_entropy_nats < 4f64.ln());
    }

    #[test]
    fn expected_spectra() {
        let e = expected_eigenvalues(2, &cfg(1e-12)).unwrap();
        assert!((e.values[0] - (0.5 + 4.0 / (3.0 * PI))).abs() < 1e-10);
        assert!((e.values[1] - (0.5 - 4.0 / (3.0 * PI))).abs() < 1e-10);
        let e = expected_eigenvalues(3, &cfg(1e-10)).unwrap();
        assert!((e.values.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        assert!(e.to_eigenvalues(1e-8).unwrap().is_nonincreasing());
    }

    #[test]
    fn best_rational_matches_reference_examples() {
        assert_eq!(best_rational(PI, 1000), Fraction { numerator: 355, denominator: 113 });
        assert_eq!(best_rational(PI, 100), Fraction { numerator: 311, denominator: 99 });
        assert_eq!(best_rational(0.5, 10), Fraction { numerator: 1, denominator: 2 });
        assert_eq!(best_rational(7.0 / 6.0, 10_000), Fraction { numerator: 7, denominator: 6 });
    }

    #[test]
    fn redundancy_constants() {
        assert!((quasi_redundancy_constant_n2().unwrap() + 1.77062).abs() < 1e-4);
        let b = bures_bayes_redundancy_n2(&AdaptiveConfig::with_rel_tol(1e-10)).unwrap();
        assert!((b.value + 1.774_208_647_354).abs() < 1e-8, "{}", b.value);
    }

    #[test]
    fn recognition_of_three_level_constant() {
        let mut r = hall_constant(&KernelSpec::bures(3).unwrap(), Method::Adaptive, &cfg(1e-10)).unwrap();
        recognize_constant(&mut r, 6, 1e-6, 20, &BigInt::from(1 << 12)).unwrap();
        let rec = r.recognition.unwrap();
        assert_eq!(rec.pi_power, 1);
        assert_eq!(rec.recognized_integer, BigInt::from(35));
        assert!(rec.sequence_matches.iter().any(|m| m.index == 4));
    }
}
