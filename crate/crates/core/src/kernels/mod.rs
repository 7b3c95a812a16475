//! Eigenvalue kernels and the closed-form low-dimensional densities.
//!
//! The general kernel is
//!
//! ```text
//! K(d) = (d_1 ··· d_n)^{-1/2} ∏_{i<j} |d_i - d_j|^β / M(d_i, d_j)
//! ```
//!
//! where `M(x, y) = x + y` (Bures) or `2 I(x, y)` with `I` the identric mean
//! (quasi-Bures). The Hall constant `C_n` normalizes `K` over the simplex.

mod closed_form;
mod phi_series;

pub use closed_form::*;

use serde::{Deserialize, Serialize};

use crate::eigenparam::{reduced_jacobian, EigenvalueVector};
use crate::{Error, Result};

/// Pairwise mean in the kernel denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mean {
    /// `d_i + d_j`, the Bures case.
    Arithmetic,
    /// `2 I(d_i, d_j)`, the quasi-Bures case.
    Identric,
}

impl std::fmt::Display for Mean {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mean::Arithmetic => f.write_str("arithmetic"),
            Mean::Identric => f.write_str("identric"),
        }
    }
}

impl std::str::FromStr for Mean {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arithmetic" => Ok(Mean::Arithmetic),
            "identric" => Ok(Mean::Identric),
            other => Err(Error::invalid(format!("unknown mean {other:?}"))),
        }
    }
}

/// Which density family to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelSpec {
    pub n: usize,
    pub mean: Mean,
    /// Exponent of `|d_i - d_j|`. The denominator exponent stays 1.
    pub beta: u32,
}

impl KernelSpec {
    pub fn new(n: usize, mean: Mean, beta: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("dimension n = {n} must be at least 2")));
        }
        if beta < 1 {
            return Err(Error::invalid("exponent beta must be at least 1"));
        }
        Ok(Self { n, mean, beta })
    }

    pub fn bures(n: usize) -> Result<Self> {
        Self::new(n, Mean::Arithmetic, 2)
    }

    pub fn quasi_bures(n: usize) -> Result<Self> {
        Self::new(n, Mean::Identric, 2)
    }

    pub fn is_bures(&self) -> bool {
        self.mean == Mean::Arithmetic && self.beta == 2
    }
}

const IDENTRIC_SERIES_THRESHOLD: f64 = 1e-8;

/// Identric (exponential) mean `I(x, y) = e^{-1} (x^x / y^y)^{1/(x-y)}`, `I(x, x) = x`.
pub fn identric_mean(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::invalid(format!(
            "identric mean needs positive arguments, got ({x}, {y})"
        )));
    }
    Ok(identric_mean_unchecked(x, y))
}

/// [`identric_mean`] extended by continuity to the boundary: `I(x, 0) = x / e`.
#[inline]
pub fn identric_mean_unchecked(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if lo <= 0.0 {
        return hi * (-1.0f64).exp();
    }
    let delta = hi - lo;
    if delta < IDENTRIC_SERIES_THRESHOLD * hi {
        // log I = log m - Δ²/(24 m²) + O(Δ⁴)
        let m = 0.5 * (hi + lo);
        let r = delta / m;
        return m * (-r * r / 24.0).exp();
    }
    // log I = log hi - 1 - lo·log(lo/hi)/(hi - lo), with log(lo/hi) via ln_1p.
    let log_ratio = (-delta / hi).ln_1p();
    (hi.ln() - 1.0 - lo * log_ratio / delta).exp()
}

#[inline]
fn pair_denominator(x: f64, y: f64, mean: Mean) -> f64 {
    match mean {
        Mean::Arithmetic => x + y,
        Mean::Identric => 2.0 * identric_mean_unchecked(x, y),
    }
}

/// `∏_{i<j} |d_i - d_j|^β / M(d_i, d_j)`, the kernel without the determinant factor.
#[inline]
pub fn pair_product(d: &[f64], spec: &KernelSpec) -> f64 {
    let beta = spec.beta as i32;
    let mut acc = 1.0;
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            let num = (d[i] - d[j]).abs().powi(beta);
            if num == 0.0 {
                return 0.0;
            }
            acc *= num / pair_denominator(d[i], d[j], spec.mean);
        }
    }
    acc
}

/// Kernel value at an interior spectrum.
///
/// A zero eigenvalue makes the determinant factor singular; integrate with
/// [`hall_integrand`] instead, where the singularity cancels.
pub fn hall_kernel(d: &EigenvalueVector, spec: &KernelSpec) -> Result<f64> {
    let values = d.as_slice();
    if values.len() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            actual: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|&x| x <= 0.0) {
        return Err(Error::SingularPoint { index });
    }
    let det: f64 = values.iter().product();
    Ok(pair_product(values, spec) / det.sqrt())
}

/// Kernel times the simplex Jacobian, in angle coordinates:
/// `pair_product(d(θ)) · ∏ sin^{n-1-k}(θ_k / 2)`.
///
/// `scratch` receives the spectrum and must have length `angles.len() + 1`.
#[inline]
pub fn hall_integrand(angles: &[f64], spec: &KernelSpec, scratch: &mut [f64]) -> f64 {
    crate::eigenparam::fill_eigenvalues(angles, scratch);
    pair_product(scratch, spec) * reduced_jacobian(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{E, FRAC_PI_2, PI};

    fn spectrum(values: &[f64]) -> EigenvalueVector {
        EigenvalueVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn coincident_pair_is_zero() {
        let k = hall_kernel(&spectrum(&[0.5, 0.5]), &KernelSpec::bures(2).unwrap()).unwrap();
        assert_eq!(k, 0.0);
    }

    #[test]
    fn two_level_closed_form() {
        let spec = KernelSpec::bures(2).unwrap();
        for x in [0.1, 0.25, 0.4, 0.9] {
            let k = hall_kernel(&spectrum(&[x, 1.0 - x]), &spec).unwrap();
            let expected = (1.0 - 2.0 * x).powi(2) / (x * (1.0 - x)).sqrt();
            assert!((k - expected).abs() < 1e-14 * expected);
        }
    }

    #[test]
    fn identric_kernel_ratio() {
        let d = spectrum(&[0.9, 0.1]);
        let a = hall_kernel(&d, &KernelSpec::bures(2).unwrap()).unwrap();
        let q = hall_kernel(&d, &KernelSpec::quasi_bures(2).unwrap()).unwrap();
        // direct transcription of e^{-1} (x^x / y^y)^{1/(x-y)}
        let i = (-1.0f64).exp() * (0.9f64.powf(0.9) / 0.1f64.powf(0.1)).powf(1.0 / 0.8);
        assert!((q - a * (1.0 / (2.0 * i)) / (1.0 / 1.0)).abs() < 1e-13);
    }

    #[test]
    fn boundary_spectrum_is_singular() {
        let err = hall_kernel(&spectrum(&[1.0, 0.0]), &KernelSpec::bures(2).unwrap());
        assert_eq!(err, Err(Error::SingularPoint { index: 1 }));
    }

    #[test]
    fn identric_spot_values() {
        assert!((identric_mean(0.3, 0.3).unwrap() - 0.3).abs() < 1e-16);
        // 50-digit evaluation of e^{-1} (1 / e^e)^{1/(1-e)}
        let oracle = 1.789_572_396_841_833_5_f64;
        assert!((identric_mean(1.0, E).unwrap() - oracle).abs() < 1e-15);
        assert!((identric_mean(2.0, 2.0 + 1e-13).unwrap() - 2.0).abs() < 1e-12);
        assert!(identric_mean(0.0, 1.0).is_err());
        assert!(identric_mean(-1.0, 1.0).is_err());
    }

    #[test]
    fn identric_branches_agree_at_the_switch() {
        let x = 0.37;
        for rel in [0.99e-8, 1.01e-8, 1e-7, 1e-6] {
            let y = x * (1.0 + rel);
            let a = identric_mean(x, y).unwrap();
            // log I = log m - Δ²/(24 m²) - Δ⁴/(2880 m⁴)... both branches must sit on it
            let m = 0.5 * (x + y);
            let r = (y - x) / m;
            let b = m * (-r * r / 24.0).exp();
            assert!((a - b).abs() < 1e-15 * m, "rel {rel}: {a} vs {b}");
        }
    }

    #[test]
    fn identric_mean_properties_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let x: f64 = 10f64.powf(rng.random_range(-6.0..0.0));
            let y: f64 = 10f64.powf(rng.random_range(-6.0..0.0));
            let t: f64 = 10f64.powf(rng.random_range(-3.0..3.0));
            let i = identric_mean(x, y).unwrap();
            let (g, a) = ((x * y).sqrt(), 0.5 * (x + y));
            assert!(i >= g * (1.0 - 1e-14) && i <= a * (1.0 + 1e-14), "({x}, {y}) -> {i}");
            assert_eq!(i, identric_mean(y, x).unwrap());
            let scaled = identric_mean(t * x, t * y).unwrap();
            assert!((scaled - t * i).abs() <= 1e-13 * t * i, "({x}, {y}, {t})");
        }
    }

    #[test]
    fn integrand_is_kernel_times_jacobian() {
        let spec = KernelSpec::new(4, Mean::Identric, 3).unwrap();
        let angles = [0.7, 1.9, 2.4];
        let mut scratch = [0.0; 4];
        let via_angles = hall_integrand(&angles, &spec, &mut scratch);
        let a = crate::eigenparam::AngleVector::new(angles.to_vec()).unwrap();
        let d = crate::eigenparam::angles_to_eigenvalues(&a, 4).unwrap();
        let j = crate::eigenparam::angle_jacobian(&a, 4).unwrap();
        let direct = hall_kernel(&d, &spec).unwrap() * j;
        assert!((via_angles - direct).abs() < 1e-13 * direct);
        let _ = FRAC_PI_2 + PI;
    }

    /// Hall's formula transcribed term by term, independent of `pair_product`.
    fn hall_direct(d: &[f64]) -> f64 {
        let mut v = 1.0 / d.iter().product::<f64>().sqrt();
        for i in 0..d.len() {
            for j in 0..d.len() {
                if i < j {
                    v *= (d[i] - d[j]) * (d[i] - d[j]) / (d[i] + d[j]);
                }
            }
        }
        v
    }

    fn simplex_point(raw: &[f64]) -> Vec<f64> {
        let total: f64 = raw.iter().sum();
        let mut d: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let rest: f64 = d[1..].iter().sum();
        d[0] = 1.0 - rest;
        d
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bures_kernel_matches_direct_transcription(raw in prop::collection::vec(0.01..1.0f64, 2..7)) {
            let d = simplex_point(&raw);
            let spec = KernelSpec::bures(d.len()).unwrap();
            let k = hall_kernel(&spectrum(&d), &spec).unwrap();
            let direct = hall_direct(&d);
            prop_assert!((k - direct).abs() <= 1e-12 * direct.abs());
        }

        #[test]
        fn kernel_is_permutation_symmetric(
            raw in prop::collection::vec(0.01..1.0f64, 3..6),
            beta in 1u32..6,
            identric in any::<bool>(),
            rot in 0usize..5,
        ) {
            let d = simplex_point(&raw);
            let mean = if identric { Mean::Identric } else { Mean::Arithmetic };
            let spec = KernelSpec::new(d.len(), mean, beta).unwrap();
            let mut p = d.clone();
            p.rotate_left(rot % d.len());
            p.swap(0, d.len() - 1);
            let a = hall_kernel(&spectrum(&d), &spec).unwrap();
            let b = hall_kernel(&spectrum(&p), &spec).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }

        #[test]
        fn kernel_vanishes_on_coincidence_set(
            raw in prop::collection::vec(0.01..1.0f64, 3..6),
            beta in 1u32..6,
            identric in any::<bool>(),
        ) {
            let mut raw = raw;
            let last = raw.len() - 1;
            raw[last] = raw[0];
            let total: f64 = raw.iter().sum();
            let d: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let mean = if identric { Mean::Identric } else { Mean::Arithmetic };
            let spec = KernelSpec::new(d.len(), mean, beta).unwrap();
            prop_assert_eq!(pair_product(&d, &spec), 0.0);
        }

        #[test]
        fn kernel_is_nonnegative(raw in prop::collection::vec(0.01..1.0f64, 2..7), beta in 1u32..8) {
            let d = simplex_point(&raw);
            let spec = KernelSpec::new(d.len(), Mean::Identric, beta).unwrap();
            prop_assert!(hall_kernel(&spectrum(&d), &spec).unwrap() >= 0.0);
        }
    }
}
