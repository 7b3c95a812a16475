//! Closed-form Bures and quasi-Bures densities for two- and three-level systems.
//!
//! Two-level states use `θ ∈ [0, π/2]` (spectrum `cos²(θ/2), sin²(θ/2)`) and
//! the conditional SU(2) Haar angles `(α, β)`. Three-level states use
//! `θ, φ ∈ [0, π]` with spectrum `(cos²(φ/2) sin²(θ/2), sin²(φ/2) sin²(θ/2), cos²(θ/2))`
//! and the six conditional SU(3) Euler angles.

use std::f64::consts::{FRAC_PI_2, PI};

use super::phi_series::PHI_MARGINAL_TAYLOR;
use crate::{Error, Result};

/// Leading constant of the two-level quasi-Bures density (six digits).
pub const QUASI_N2_CONSTANT: f64 = 0.226231;

/// Leading constant of the three-level quasi-Bures density (five digits).
pub const QUASI_N3_CONSTANT: f64 = 0.000063495;

/// Integral of the conditional SU(2) weight `sin β / 8` over `α ∈ [0, 2π]`, `β ∈ [0, π]`.
pub const SU2_CONDITIONAL_HAAR_VOLUME: f64 = FRAC_PI_2;

/// Integral of `sin 2β sin 2b sin 2κ sin²κ` over the six conditional SU(3) angles.
pub const SU3_CONDITIONAL_HAAR_VOLUME: f64 = PI * PI * PI / 2.0;

/// Euler angles of the unitary factor that survive in `ρ = U D U†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HaarAngles {
    /// `α ∈ [0, 2π]`, `β ∈ [0, π]`.
    Su2 { alpha: f64, beta: f64 },
    /// `α, γ, a ∈ [0, π]`, `β, b, κ ∈ [0, π/2]`.
    Su3 {
        alpha: f64,
        beta: f64,
        gamma: f64,
        kappa: f64,
        a: f64,
        b: f64,
    },
}

fn check_range(name: &str, value: f64, hi: f64) -> Result<()> {
    if (0.0..=hi).contains(&value) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {value} outside [0, {hi}]")))
    }
}

impl HaarAngles {
    pub fn dimension(&self) -> usize {
        match self {
            HaarAngles::Su2 { .. } => 2,
            HaarAngles::Su3 { .. } => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HaarAngles::Su2 { alpha, beta } => {
                check_range("alpha", alpha, 2.0 * PI)?;
                check_range("beta", beta, PI)
            }
            HaarAngles::Su3 {
                alpha,
                beta,
                gamma,
                kappa,
                a,
                b,
            } => {
                check_range("alpha", alpha, PI)?;
                check_range("gamma", gamma, PI)?;
                check_range("a", a, PI)?;
                check_range("beta", beta, FRAC_PI_2)?;
                check_range("b", b, FRAC_PI_2)?;
                check_range("kappa", kappa, FRAC_PI_2)
            }
        }
    }
}

/// Conditional Haar weight: `sin β / 8` for SU(2), `sin 2β sin 2b sin 2κ sin²κ` for SU(3).
pub fn haar_weight(n: usize, haar: &HaarAngles) -> Result<f64> {
    if haar.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: haar.dimension(),
        });
    }
    haar.validate()?;
    Ok(match *haar {
        HaarAngles::Su2 { beta, .. } => beta.sin() / 8.0,
        HaarAngles::Su3 {
            beta, kappa, b, ..
        } => (2.0 * beta).sin() * (2.0 * b).sin() * (2.0 * kappa).sin() * kappa.sin().powi(2),
    })
}

fn check_theta_n2(theta: f64) -> Result<()> {
    check_range("theta", theta, FRAC_PI_2)
}

fn check_theta_phi_n3(theta: f64, phi: f64) -> Result<()> {
    check_range("theta", theta, PI)?;
    check_range("phi", phi, PI)
}

fn su3_weight(haar: &HaarAngles) -> Result<f64> {
    haar_weight(3, haar)
}

/// Two-level Bures density `cos²θ sin β / π²` over `(θ, α, β)`.
pub fn bures_density_n2(theta: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_theta_n2(theta)?;
    HaarAngles::Su2 { alpha, beta }.validate()?;
    Ok(theta.cos().powi(2) * beta.sin() / (PI * PI))
}

/// θ-marginal of [`bures_density_n2`]: `4 cos²θ / π` on `[0, π/2]`.
pub fn bures_marginal_theta_n2(theta: f64) -> f64 {
    4.0 * theta.cos().powi(2) / PI
}

/// `atanh(c) / c`, continuous at `c = 0`.
fn atanh_over(c: f64) -> f64 {
    if c.abs() < 1e-4 {
        let c2 = c * c;
        1.0 + c2 / 3.0 + c2 * c2 / 5.0
    } else {
        c.atanh() / c
    }
}

/// `tan(x/2)^{sec x}` written as `exp(-atanh(cos x) / cos x)`; the value at
/// `x = π/2` is the limit `1/e`.
fn tan_half_pow_sec(x: f64) -> f64 {
    (-atanh_over(x.cos())).exp()
}

/// θ-dependent part of the two-level quasi-Bures density,
/// `tan^{sec θ}(θ/2) cos θ cot θ`, which vanishes at both ends of `[0, π/2]`.
fn quasi_theta_part_n2(theta: f64) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    let c = theta.cos();
    tan_half_pow_sec(theta) * c * c / theta.sin()
}

/// Two-level quasi-Bures density `.226231 tan^{sec θ}(θ/2) cos θ cot θ sin β`.
pub fn quasi_density_n2(theta: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_theta_n2(theta)?;
    HaarAngles::Su2 { alpha, beta }.validate()?;
    Ok(QUASI_N2_CONSTANT * quasi_theta_part_n2(theta) * beta.sin())
}

/// θ-marginal of [`quasi_density_n2`] (the Haar angles contribute `4π`).
pub fn quasi_marginal_theta_n2(theta: f64) -> f64 {
    4.0 * PI * QUASI_N2_CONSTANT * quasi_theta_part_n2(theta)
}

/// `u(θ, φ)` shared by the three-level densities.
fn u_factor(theta: f64, phi: f64) -> f64 {
    let s = (0.5 * theta).sin();
    let s4 = s.powi(4);
    let inner = (35.0 + 60.0 * theta.cos() + 33.0 * (2.0 * theta).cos()) * phi.cos()
        - 8.0 * (3.0 * phi).cos() * s4;
    s.powi(3) * inner * inner
}

/// `(θ, φ)` part of the three-level Bures density, before the Haar weight.
fn bures_theta_phi_part(theta: f64, phi: f64) -> f64 {
    let s4 = (0.5 * theta).sin().powi(4);
    let denom = 35.0 + 28.0 * theta.cos() + (2.0 * theta).cos() - 8.0 * (2.0 * phi).cos() * s4;
    35.0 * u_factor(theta, phi) / (128.0 * PI.powi(4) * denom)
}

/// Three-level Bures density over `(θ, φ)` and the six conditional Haar angles.
pub fn bures_density_n3(theta: f64, phi: f64, haar: &HaarAngles) -> Result<f64> {
    check_theta_phi_n3(theta, phi)?;
    Ok(bures_theta_phi_part(theta, phi) * su3_weight(haar)?)
}

/// Bivariate `(θ, φ)` marginal of [`bures_density_n3`].
pub fn bures_bivariate_n3(theta: f64, phi: f64) -> f64 {
    bures_theta_phi_part(theta, phi) * SU3_CONDITIONAL_HAAR_VOLUME
}

/// θ-marginal of the three-level Bures density.
pub fn bures_marginal_theta_n3(theta: f64) -> f64 {
    let h = 0.5 * theta;
    let poly = -1533.0 + 2816.0 * h.cos() - 1988.0 * theta.cos() + 1152.0 * (3.0 * h).cos()
        - 447.0 * (2.0 * theta).cos()
        + 128.0 * (5.0 * h).cos();
    35.0 / 256.0 * poly * h.sin().powi(3)
}

/// The φ-marginal closed form evaluated term by term in double precision.
///
/// Accurate to about 1e-11 on `[0.9, π - 0.9]`; it loses all precision near
/// the ends. [`bures_marginal_phi_n3`] switches to a series there.
pub fn bures_marginal_phi_n3_closed_form(phi: f64) -> f64 {
    let p = phi;
    let bracket = 110_100_480.0 * (1.0 / (0.5 * p).tan()).atan() * (0.5 * p).cos().powi(12)
        - 26_880.0
            * (792.0 * (2.0 * PI - p) * p.cos()
                + 8.0 * PI * (55.0 * (3.0 * p).cos() + 3.0 * (5.0 * p).cos())
                + p * (495.0 * (2.0 * p).cos() - 220.0 * (3.0 * p).cos()
                    + 66.0 * (4.0 * p).cos()
                    - 12.0 * (5.0 * p).cos()
                    + (6.0 * p).cos()))
        + 16_885_656.0 * (2.0 * p).sin()
        + 5_069_937.0 * (4.0 * p).sin()
        + 167_012.0 * (6.0 * p).sin()
        - 3.0 * (4_139_520.0 * p + 124.0 * (8.0 * p).sin() - 4.0 * (10.0 * p).sin()
            + (12.0 * p).sin());
    p.cos() / p.sin().powi(9) * bracket / (768.0 * PI)
}

const PHI_SERIES_SWITCH: f64 = 0.9;

fn phi_series(x: f64) -> f64 {
    PHI_MARGINAL_TAYLOR
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c)
}

/// φ-marginal of the three-level Bures density; the limits at both ends are `20/(9π)`.
///
/// The marginal is symmetric under `φ -> π - φ`. Within 0.9 of either end it is
/// evaluated from the Taylor expansion of the closed form about `φ = 0`.
pub fn bures_marginal_phi_n3(phi: f64) -> f64 {
    let phi = phi.clamp(0.0, PI);
    let near_end = phi.min(PI - phi);
    if near_end < PHI_SERIES_SWITCH {
        phi_series(near_end)
    } else {
        bures_marginal_phi_n3_closed_form(phi)
    }
}

const QUASI_GUARD: f64 = 1e-10;
const QUASI_LIMIT_STEP: f64 = 1e-6;
const QUASI_EDGE: f64 = 1e-9;

/// `(θ, φ)` part of the three-level quasi-Bures density, evaluated from the
/// displayed expression. Returns `None` inside the guard band around the
/// removable singular curves `w ± v = 0`.
fn quasi_theta_phi_direct(theta: f64, phi: f64) -> Option<f64> {
    let u = u_factor(theta, phi);
    if u == 0.0 {
        return Some(0.0);
    }
    let v = 2.0 + 6.0 * theta.cos();
    let w = (theta - phi).cos() - 2.0 * phi.cos() + (theta + phi).cos();
    if (v + w).abs() < QUASI_GUARD || (w - v).abs() < QUASI_GUARD {
        return None;
    }
    let (sh, ch) = (0.5 * theta).sin_cos();
    let (sp, cp) = (0.5 * phi).sin_cos();
    let tan_t = sh / ch;
    // tan^{1 + sec φ}(φ/2) = tan(φ/2) · tan^{sec φ}(φ/2)
    let tan_phi_factor = (sp / cp) * tan_half_pow_sec(phi);
    let first = (16.0 * cp * cp * sh * sh / (v + w)) * (cp * tan_t).ln();
    let second = (2.0 - 8.0 * (1.0 + theta.cos()) / (w - v)) * (sp * tan_t).ln();
    Some(
        QUASI_N3_CONSTANT * u * tan_phi_factor / sh.powi(4) / sp.powi(6)
            * (first + second).exp(),
    )
}

fn quasi_theta_phi_part(theta: f64, phi: f64) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    let theta = theta.min(PI - QUASI_EDGE);
    let phi = phi.clamp(QUASI_EDGE, PI - QUASI_EDGE);
    match quasi_theta_phi_direct(theta, phi) {
        Some(v) => v,
        None => {
            // symmetric limit across the removable singular curve
            let lo = quasi_theta_phi_direct(theta - QUASI_LIMIT_STEP, phi);
            let hi = quasi_theta_phi_direct(theta + QUASI_LIMIT_STEP, phi);
            match (lo, hi) {
                (Some(a), Some(b)) => 0.5 * (a + b),
                _ => {
                    let a = quasi_theta_phi_direct(theta, phi - QUASI_LIMIT_STEP).unwrap_or(0.0);
                    let b = quasi_theta_phi_direct(theta, phi + QUASI_LIMIT_STEP).unwrap_or(0.0);
                    0.5 * (a + b)
                }
            }
        }
    }
}

/// Three-level quasi-Bures density over `(θ, φ)` and the conditional Haar angles.
pub fn quasi_density_n3(theta: f64, phi: f64, haar: &HaarAngles) -> Result<f64> {
    check_theta_phi_n3(theta, phi)?;
    Ok(quasi_theta_phi_part(theta, phi) * su3_weight(haar)?)
}

/// Bivariate `(θ, φ)` marginal of [`quasi_density_n3`].
pub fn quasi_bivariate_n3(theta: f64, phi: f64) -> f64 {
    quasi_theta_phi_part(theta, phi) * SU3_CONDITIONAL_HAAR_VOLUME
}

/// Converts a θ-marginal density on `[0, π/2]` into a density per unit
/// Euclidean volume of the Bloch ball (radius `cos θ`, uniform over directions).
pub fn bloch_volume_density(theta_density: f64, theta: f64) -> f64 {
    theta_density / (4.0 * PI * theta.cos().powi(2) * theta.sin())
}

/// Leading terms of the asymptotic redundancy of universal coding of `m`
/// copies of a two-level state at radial angle `θ`, for a prior with Bloch-ball
/// volume density `w` at that state:
///
/// ```text
/// (3/2) log(m / 2π) - 1/2 - 2 log sin θ + sec θ · log tan(θ/2) - log w
/// ```
pub fn redundancy_n2(theta: f64, m: f64, w: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::Divergent(format!(
            "redundancy diverges at the endpoint theta = {theta}"
        )));
    }
    if !(m > 0.0) {
        return Err(Error::invalid(format!("copy count m = {m} must be positive")));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::invalid(format!("prior density {w} must be positive")));
    }
    let c = theta.cos();
    Ok(1.5 * (m / (2.0 * PI)).ln() - 0.5 - 2.0 * theta.sin().ln() - atanh_over(c) - w.ln())
}

/// Interior and boundary extrema of a smooth function on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrema {
    pub maxima: Vec<f64>,
    pub minima: Vec<f64>,
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locates the extrema of `f` on `[a, b]` from sign changes of a central-difference
/// derivative on a `samples`-point scan, refined by bisection.
pub fn extrema(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> Extrema {
    let h = 1e-6 * (b - a);
    let deriv = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let probe = 1e-7 * (b - a);
    if f(a + probe) > f(a) {
        minima.push(a);
    } else {
        maxima.push(a);
    }
    let step = (b - a) / samples as f64;
    let xs: Vec<f64> = (1..samples).map(|i| a + step * i as f64).collect();
    for pair in xs.windows(2) {
        let (d0, d1) = (deriv(pair[0]), deriv(pair[1]));
        if d0 > 0.0 && d1 <= 0.0 {
            maxima.push(bisect(pair[0], pair[1], deriv));
        } else if d0 < 0.0 && d1 >= 0.0 {
            minima.push(bisect(pair[0], pair[1], deriv));
        }
    }
    if f(b - probe) > f(b) {
        minima.push(b);
    } else {
        maxima.push(b);
    }
    Extrema { maxima, minima }
}

/// Extrema of [`bures_marginal_theta_n3`] on `[0, π]`.
pub fn bures_marginal_theta_n3_extrema() -> Extrema {
    extrema(bures_marginal_theta_n3, 0.0, PI, 4096)
}

/// The angle on `(0, π/2)` where the two-level quasi-Bures θ-marginal stops
/// exceeding the Bures one.
pub fn quasi_bures_crossover_n2() -> f64 {
    let gap = |t: f64| quasi_marginal_theta_n2(t) - bures_marginal_theta_n2(t);
    let samples = 2048;
    let step = FRAC_PI_2 / samples as f64;
    let mut prev = step;
    for i in 2..samples {
        let x = step * i as f64;
        if gap(prev) > 0.0 && gap(x) <= 0.0 {
            return bisect(prev, x, gap);
        }
        prev = x;
    }
    f64::NAN
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIXED_THETA: f64 = 1.910_633_236_249_018_6; // 2 arccos(1/√3)

    fn su3(kappa: f64) -> HaarAngles {
        HaarAngles::Su3 {
            alpha: 0.4,
            beta: 0.6,
            gamma: 1.1,
            kappa,
            a: 2.0,
            b: 0.3,
        }
    }

    #[test]
    fn two_level_spot_values() {
        assert!((bures_density_n2(0.0, 1.0, FRAC_PI_2).unwrap() - 1.0 / (PI * PI)).abs() < 1e-16);
        assert!(bures_density_n2(FRAC_PI_2, 1.0, 1.0).unwrap().abs() < 1e-16);
        assert!(bures_density_n2(2.0, 1.0, 1.0).is_err());
        assert_eq!(quasi_density_n2(0.7, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn quasi_two_level_vanishes_at_right_end() {
        let near = quasi_density_n2(FRAC_PI_2 - 1e-9, 0.0, FRAC_PI_2).unwrap();
        assert!(near.abs() < 1e-9);
        assert!(quasi_density_n2(FRAC_PI_2, 0.0, FRAC_PI_2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn three_level_zero_loci() {
        let h = su3(0.8);
        assert!(bures_density_n3(MIXED_THETA, FRAC_PI_2, &h).unwrap().abs() < 1e-15);
        assert_eq!(bures_density_n3(0.0, 1.3, &h).unwrap(), 0.0);
        assert!(bures_density_n3(2.2, FRAC_PI_2, &h).unwrap().abs() < 1e-15);
        assert_eq!(quasi_density_n3(0.0, 1.3, &h).unwrap(), 0.0);
    }

    #[test]
    fn haar_weights() {
        assert_eq!(haar_weight(3, &su3(0.0)).unwrap(), 0.0);
        let top = haar_weight(2, &HaarAngles::Su2 { alpha: 0.0, beta: FRAC_PI_2 }).unwrap();
        assert!((top - 0.125).abs() < 1e-16);
        for beta in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let w = haar_weight(2, &HaarAngles::Su2 { alpha: 0.0, beta }).unwrap();
            assert!(w <= top);
        }
        assert!(haar_weight(2, &su3(0.5)).is_err());
        assert!(haar_weight(3, &su3(2.0)).is_err());
    }

    #[test]
    fn theta_marginal_vanishes_at_origin() {
        assert_eq!(bures_marginal_theta_n3(0.0), 0.0);
    }

    #[test]
    fn phi_marginal_end_limits() {
        let limit = 20.0 / (9.0 * PI);
        assert!((bures_marginal_phi_n3(0.0) - limit).abs() < 1e-15);
        assert!((bures_marginal_phi_n3(PI) - limit).abs() < 1e-15);
        assert!((bures_marginal_phi_n3(1e-5) - limit).abs() < 1e-5);
        assert!((bures_marginal_phi_n3(PI - 1e-5) - limit).abs() < 1e-5);
    }

    #[test]
    fn phi_series_meets_closed_form_at_switch() {
        for x in [0.85, 0.9, 0.95, 1.0] {
            let series = phi_series(x);
            let closed = bures_marginal_phi_n3_closed_form(x);
            assert!((series - closed).abs() < 1e-9, "{x}: {series} vs {closed}");
        }
    }

    #[test]
    fn phi_marginal_is_symmetric() {
        for x in [1.0, 1.2, 1.4, 1.5] {
            let l = bures_marginal_phi_n3_closed_form(x);
            let r = bures_marginal_phi_n3_closed_form(PI - x);
            assert!((l - r).abs() < 1e-10);
        }
    }

    #[test]
    fn quasi_density_vanishes_quadratically_on_equal_pair() {
        // v + w = 0 is the curve d_1 = d_3; pick φ and solve for θ numerically.
        let phi: f64 = 0.8;
        let g = |t: f64| 2.0 + 6.0 * t.cos() + (t - phi).cos() - 2.0 * phi.cos() + (t + phi).cos();
        let t0 = bisect(0.5, 2.5, g);
        let at = quasi_bivariate_n3(t0, phi);
        let near = quasi_bivariate_n3(t0 + 1e-4, phi);
        let far = quasi_bivariate_n3(t0 + 1e-3, phi);
        assert!(at.is_finite() && at >= 0.0);
        assert!(at < 1e-3 * near, "{at} vs {near}");
        assert!((near / far - 0.01).abs() < 1e-3, "{}", near / far);
    }

    #[test]
    fn redundancy_shift_with_copies() {
        let w = 0.3;
        let a = redundancy_n2(0.6, 1000.0, w).unwrap();
        let b = redundancy_n2(0.6, 2000.0, w).unwrap();
        assert!((b - a - 1.5 * 2f64.ln()).abs() < 1e-12);
        assert!(matches!(redundancy_n2(0.0, 10.0, w), Err(Error::Divergent(_))));
        assert!(matches!(redundancy_n2(FRAC_PI_2, 10.0, w), Err(Error::Divergent(_))));
    }

    #[test]
    fn quasi_prior_redundancy_is_flat() {
        let values: Vec<f64> = [0.05, 0.3, 0.6, 0.9, 1.2, 1.5]
            .iter()
            .map(|&t| {
                let w = bloch_volume_density(quasi_marginal_theta_n2(t), t);
                redundancy_n2(t, 1.0, w).unwrap()
            })
            .collect();
        for v in &values {
            assert!((v - values[0]).abs() < 1e-10);
            assert!((v + 1.77062).abs() < 1e-4, "{v}");
        }
    }

    #[test]
    fn crossover_location() {
        assert!((quasi_bures_crossover_n2() - 0.443978).abs() < 1e-3);
    }
}
