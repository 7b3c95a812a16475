use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::RangeInclusive;
use std::path::Path;

use hall_core::kernels::{self, KernelSpec, Mean};
use hall_core::numbers::{
    bernoulli_numbers, partial_sum_denominators, recognize_pi_rational, recognize_with_sequence, RecognitionReport,
    SequenceCandidate,
};
use hall_core::pipeline::{
    self, average_entropy, hall_constant, hall_constant_cached, ConstantResult, EntropyResult, ExpectedSpectrum,
    PipelineConfig, ResultCache, FIT_MAX_DENOMINATOR,
};
use hall_core::quad::{integrate_iterated_1d, AdaptiveConfig, Method, QuadratureEstimate};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_PI_POWERS: &str = "0..6";
pub const DEFAULT_MAX_RESIDUAL: f64 = 1e-6;
pub const DEFAULT_SEQUENCE_TERMS: usize = 20;
pub const DEFAULT_MAX_MULTIPLIER: u64 = 1 << 40;
pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_BERNOULLI_TERMS: usize = 20;
/// Number of sequence-structured candidates reported.
const CANDIDATES_SHOWN: usize = 5;

/// Output of one command: the emitted text and whether every integration converged.
pub struct Outcome {
    pub text: String,
    pub converged: bool,
}

/// One line of structured output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub result: T,
}

fn emit<T: Serialize>(command: &str, result: &T, converged: bool) -> Result<Outcome, CliError> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        result,
    };
    let mut text = serde_json::to_string(&envelope).map_err(|e| CliError::numeric(e.to_string()))?;
    text.push('\n');
    Ok(Outcome { text, converged })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HallOutput {
    pub constant: ConstantResult,
    /// Sequence-structured recognition, best first (only with `--recognize`).
    pub sequence_candidates: Vec<SequenceCandidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub n: usize,
    pub spectrum: ExpectedSpectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognizeOutput {
    pub value: f64,
    pub report: Option<RecognitionReport>,
    pub sequence_candidates: Vec<SequenceCandidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BernoulliOutput {
    /// `B_0 ..`, as `p/q` strings.
    Numbers(Vec<String>),
    /// Decimal strings, entry 1 first.
    PartialSumDenominators(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedundancyOutput {
    /// `R - (3/2) log m` for the quasi-Bures prior (independent of the state).
    pub quasi_bures: f64,
    /// Bures-prior average of `R - (3/2) log m`.
    pub bures_average: QuadratureEstimate,
}

pub fn parse_pi_powers(s: &str) -> Result<RangeInclusive<i32>, CliError> {
    let bad = || CliError::usage(format!("--pi-powers expects A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn rel_tol_for(n: usize, given: Option<f64>) -> f64 {
    given.unwrap_or_else(|| pipeline::default_rel_tol(n).unwrap_or(pipeline::ADVISORY_REL_TOL))
}

fn adaptive_config(n: usize, rel_tol: Option<f64>, max_evals: Option<u64>) -> AdaptiveConfig {
    let mut cfg = AdaptiveConfig::with_rel_tol(rel_tol_for(n, rel_tol));
    if let Some(m) = max_evals {
        cfg.max_evaluations = m;
    }
    cfg
}

struct Recognition {
    range: RangeInclusive<i32>,
    max_residual: f64,
    seq: Vec<BigInt>,
    max_multiplier: u64,
}

impl Recognition {
    fn from_options(o: &RecognitionOptions) -> Result<Self, CliError> {
        let max_residual = o.max_residual.unwrap_or(DEFAULT_MAX_RESIDUAL);
        if !(max_residual > 0.0) {
            return Err(CliError::usage("--max-residual must be positive"));
        }
        Ok(Self {
            range: parse_pi_powers(o.pi_powers.as_deref().unwrap_or(DEFAULT_PI_POWERS))?,
            max_residual,
            seq: partial_sum_denominators(o.sequence_terms.unwrap_or(DEFAULT_SEQUENCE_TERMS))?,
            max_multiplier: o.max_multiplier.unwrap_or(DEFAULT_MAX_MULTIPLIER),
        })
    }

    fn direct(&self, x: f64) -> Result<Option<RecognitionReport>, CliError> {
        Ok(match recognize_pi_rational(x, self.range.clone(), self.max_residual)? {
            Some(r) => Some(r.with_sequence_matches(&self.seq, &BigInt::from(self.max_multiplier))?),
            None => None,
        })
    }

    fn guided(&self, x: f64, tolerance: f64) -> Result<Vec<SequenceCandidate>, CliError> {
        let mut c = recognize_with_sequence(x, self.range.clone(), &self.seq, self.max_multiplier, tolerance)?;
        c.truncate(CANDIDATES_SHOWN);
        Ok(c)
    }
}

pub fn hall(a: &HallArgs, cache: Option<&Path>) -> Result<Outcome, CliError> {
    let method = a.method.unwrap_or(Method::Adaptive);
    let spec = KernelSpec::new(a.n, a.mean.unwrap_or(Mean::Arithmetic), a.beta.unwrap_or(2))?;
    let mut cfg = PipelineConfig::for_dimension(a.n);
    cfg.region = a.region;
    let rel = rel_tol_for(a.n, a.rel_tol);
    cfg.adaptive = adaptive_config(a.n, a.rel_tol, a.max_evals);
    cfg.qmc.rel_tol = rel;
    if let Some(p) = a.max_points {
        cfg.qmc.max_points = p;
    }
    if let Some(p) = a.min_points {
        cfg.qmc.min_points = p;
        if cfg.qmc.max_points <= p {
            cfg.qmc.max_points = 2 * p;
        }
    }
    cfg.qmc.shift_seed = a.shift_seed;
    let mut constant = match cache {
        Some(path) => hall_constant_cached(&spec, method, &cfg, &ResultCache::open(path)?)?,
        None => hall_constant(&spec, method, &cfg)?,
    };
    let mut sequence_candidates = Vec::new();
    if a.recognize {
        let r = Recognition::from_options(&a.recognition)?;
        constant.recognition = r.direct(constant.constant)?;
        // an estimate is only worth matching to its own accuracy
        let tolerance = r.max_residual.max(3.0 * constant.relative_error);
        sequence_candidates = r.guided(constant.constant, tolerance)?;
    }
    let converged = constant.estimate.converged;
    emit(
        "hall",
        &HallOutput {
            constant,
            sequence_candidates,
        },
        converged,
    )
}

pub fn entropy(a: &EntropyArgs) -> Result<Outcome, CliError> {
    let cfg = PipelineConfig {
        adaptive: adaptive_config(a.n, a.rel_tol, a.max_evals),
        ..PipelineConfig::default()
    };
    let mut r: EntropyResult = average_entropy(a.n, &cfg, false)?;
    if !a.no_fit {
        let q = a.max_denominator.unwrap_or(FIT_MAX_DENOMINATOR);
        if q < 1 {
            return Err(CliError::usage("--max-denominator must be at least 1"));
        }
        r.fit = Some(pipeline::fit_entropy(a.n, r.mean_entropy_nats, q));
    }
    let converged = r.normalization.converged;
    emit("entropy", &r, converged)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let cfg = PipelineConfig {
        adaptive: adaptive_config(a.n, a.rel_tol, a.max_evals),
        ..PipelineConfig::default()
    };
    let spectrum = pipeline::expected_eigenvalues(a.n, &cfg)?;
    let converged = spectrum.converged;
    emit("spectrum", &SpectrumOutput { n: a.n, spectrum }, converged)
}

fn midpoints(a: f64, b: f64, grid: usize) -> impl Iterator<Item = f64> {
    (0..grid).map(move |i| a + (i as f64 + 0.5) * (b - a) / grid as f64)
}

fn marginalize(f: impl Fn(f64) -> f64 + Sync) -> Result<f64, CliError> {
    Ok(integrate_iterated_1d(f, 0.0, PI, &AdaptiveConfig::with_rel_tol(1e-10))?.value)
}

pub fn density(a: &DensityArgs) -> Result<Outcome, CliError> {
    let grid = a.grid.unwrap_or(DEFAULT_GRID);
    if grid == 0 {
        return Err(CliError::usage("--grid must be at least 1"));
    }
    let marginal = a.marginal.unwrap_or(Marginal::Theta);
    let two_level = matches!(a.case, DensityCase::Bures2 | DensityCase::Quasi2);
    if two_level && marginal != Marginal::Theta {
        return Err(CliError::usage("two-level densities only have a theta marginal"));
    }
    let case = serde_json::to_value(a.case).expect("serializable");
    let case = case.as_str().expect("string");
    let mut text = String::new();
    let mut push = |cols: &[f64]| {
        let cells: Vec<String> = cols.iter().map(|v| format!("{v:e}")).collect();
        text.push_str(&format!("{SCHEMA_VERSION},{case},{}\n", cells.join(",")));
    };
    let bivariate: fn(f64, f64) -> f64 = match a.case {
        DensityCase::Quasi3 => kernels::quasi_bivariate_n3,
        _ => kernels::bures_bivariate_n3,
    };
    let header = match marginal {
        Marginal::Theta => "schema_version,case,theta,density\n",
        Marginal::Phi => "schema_version,case,phi,density\n",
        Marginal::ThetaPhi => "schema_version,case,theta,phi,density\n",
    };
    match (a.case, marginal) {
        (DensityCase::Bures2, _) => midpoints(0.0, FRAC_PI_2, grid).for_each(|t| push(&[t, kernels::bures_marginal_theta_n2(t)])),
        (DensityCase::Quasi2, _) => midpoints(0.0, FRAC_PI_2, grid).for_each(|t| push(&[t, kernels::quasi_marginal_theta_n2(t)])),
        (DensityCase::Bures3, Marginal::Theta) => {
            midpoints(0.0, PI, grid).for_each(|t| push(&[t, kernels::bures_marginal_theta_n3(t)]))
        }
        (DensityCase::Bures3, Marginal::Phi) => midpoints(0.0, PI, grid).for_each(|p| push(&[p, kernels::bures_marginal_phi_n3(p)])),
        (DensityCase::Quasi3, Marginal::Theta) => {
            for t in midpoints(0.0, PI, grid) {
                push(&[t, marginalize(|p| bivariate(t, p))?]);
            }
        }
        (DensityCase::Quasi3, Marginal::Phi) => {
            for p in midpoints(0.0, PI, grid) {
                push(&[p, marginalize(|t| bivariate(t, p))?]);
            }
        }
        (_, Marginal::ThetaPhi) => {
            for t in midpoints(0.0, PI, grid) {
                for p in midpoints(0.0, PI, grid) {
                    push(&[t, p, bivariate(t, p)]);
                }
            }
        }
    }
    Ok(Outcome {
        text: format!("{header}{text}"),
        converged: true,
    })
}

pub fn recognize(a: &RecognizeArgs) -> Result<Outcome, CliError> {
    if !(a.value > 0.0) || !a.value.is_finite() {
        return Err(CliError::usage(format!("--value must be positive and finite, got {}", a.value)));
    }
    let r = Recognition::from_options(&a.recognition)?;
    let (report, sequence_candidates) = if a.sequence_match {
        (r.direct(a.value)?, r.guided(a.value, r.max_residual)?)
    } else {
        (recognize_pi_rational(a.value, r.range.clone(), r.max_residual)?, Vec::new())
    };
    emit(
        "recognize",
        &RecognizeOutput {
            value: a.value,
            report,
            sequence_candidates,
        },
        true,
    )
}

pub fn bernoulli(a: &BernoulliArgs) -> Result<Outcome, CliError> {
    let terms = a.terms.unwrap_or(DEFAULT_BERNOULLI_TERMS);
    if terms == 0 {
        return Err(CliError::usage("--terms must be at least 1"));
    }
    let out = if a.partial_sum_denominators {
        BernoulliOutput::PartialSumDenominators(
            partial_sum_denominators(terms)?.iter().map(|d| d.to_string()).collect(),
        )
    } else {
        BernoulliOutput::Numbers(bernoulli_numbers(terms).iter().map(|b| format!("{}/{}", b.numer(), b.denom())).collect())
    };
    emit("bernoulli", &out, true)
}

pub fn redundancy(a: &RedundancyArgs) -> Result<Outcome, CliError> {
    let cfg = AdaptiveConfig::with_rel_tol(a.rel_tol.unwrap_or(1e-10));
    let bures_average = pipeline::bures_bayes_redundancy_n2(&cfg)?;
    let converged = bures_average.converged;
    emit(
        "redundancy",
        &RedundancyOutput {
            quasi_bures: pipeline::quasi_redundancy_constant_n2()?,
            bures_average,
        },
        converged,
    )
}
