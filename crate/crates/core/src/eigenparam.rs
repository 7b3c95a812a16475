//! Hyperspherical parameterization of density-matrix spectra.
//!
//! A spectrum `d` of an `n x n` density matrix is written as the squared
//! components of a point on the unit `(n-1)`-sphere:
//!
//! ```text
//! d_1 = cos²(θ_1/2)
//! d_k = cos²(θ_k/2) · sin²(θ_1/2) ··· sin²(θ_{k-1}/2)      1 < k < n
//! d_n = sin²(θ_1/2) ··· sin²(θ_{n-1}/2)
//! ```
//!
//! with every angle in `[0, π]`. The same nesting is used for every `n`.
//! Angle index 0 is the outermost level (it splits `d_1` off the rest) and
//! index `n-2` the innermost one (it splits `d_{n-1}` from `d_n`).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

/// Slack allowed when checking the ordering `d_1 >= ... >= d_n` at region boundaries.
pub const ORDERING_SLACK: f64 = 1e-14;

/// Tolerance on `Σ d_i = 1` for a valid spectrum.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// `n - 1` angles in `[0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector(Vec<f64>);

impl AngleVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("an angle vector needs at least one angle"));
        }
        for (i, &a) in angles.iter().enumerate() {
            if !(0.0..=PI).contains(&a) {
                return Err(Error::invalid(format!("angle {i} = {a} outside [0, π]")));
            }
        }
        Ok(Self(angles))
    }

    /// Matrix dimension `n` this vector parameterizes.
    pub fn dimension(&self) -> usize {
        self.0.len() + 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    fn check_dimension(&self, n: usize) -> Result<()> {
        if self.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                actual: self.0.len(),
            });
        }
        Ok(())
    }
}

/// A probability vector: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueVector(Vec<f64>);

impl EigenvalueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(values, SUM_TOLERANCE)
    }

    /// Like [`EigenvalueVector::new`] with a caller-chosen tolerance on the sum,
    /// for spectra that come out of a quadrature rather than a formula.
    pub fn with_tolerance(values: Vec<f64>, sum_tolerance: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("a spectrum needs at least two eigenvalues"));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("eigenvalue {i} = {v} outside [0, 1]")));
            }
        }
        let total: f64 = crate::sum::compensated_sum(&values);
        if (total - 1.0).abs() > sum_tolerance {
            return Err(Error::invalid(format!("eigenvalues sum to {total}, not 1")));
        }
        Ok(Self(values))
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Whether `d_1 >= d_2 >= ... >= d_n` up to [`ORDERING_SLACK`].
    pub fn is_nonincreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] + ORDERING_SLACK >= w[1])
    }
}

/// Writes the spectrum for `angles` into `out` (`out.len() == angles.len() + 1`).
///
/// Allocation-free; the integrators call this once per node.
#[inline]
pub fn fill_eigenvalues(angles: &[f64], out: &mut [f64]) {
    debug_assert_eq!(out.len(), angles.len() + 1);
    let mut tail = 1.0;
    for (slot, &theta) in out.iter_mut().zip(angles) {
        let (s, c) = (0.5 * theta).sin_cos();
        *slot = tail * c * c;
        tail *= s * s;
    }
    out[angles.len()] = tail;
}

pub fn angles_to_eigenvalues(a: &AngleVector, n: usize) -> Result<EigenvalueVector> {
    a.check_dimension(n)?;
    let mut out = vec![0.0; n];
    fill_eigenvalues(a.as_slice(), &mut out);
    // Each entry is a product of squares in [0, 1]; only the sum needs rounding slack.
    EigenvalueVector::new(out)
}

/// Jacobian `|∂(d_1..d_{n-1}) / ∂(θ_1..θ_{n-1})|` of the map onto the simplex.
///
/// The map is triangular, so the determinant is the product of the diagonal:
/// `∏_k (sin θ_k / 2) · sin^{2(n-1-k)}(θ_k/2)` with `k` counted from 1.
pub fn angle_jacobian(a: &AngleVector, n: usize) -> Result<f64> {
    a.check_dimension(n)?;
    Ok(jacobian_unchecked(a.as_slice()))
}

#[inline]
pub fn jacobian_unchecked(angles: &[f64]) -> f64 {
    let levels = angles.len();
    angles
        .iter()
        .enumerate()
        .map(|(k, &theta)| {
            let s = (0.5 * theta).sin();
            0.5 * theta.sin() * s.powi(2 * (levels - 1 - k) as i32)
        })
        .product()
}

/// The Jacobian divided by `sqrt(d_1 ··· d_n)`.
///
/// Every kernel in [`crate::kernels`] carries a `(d_1 ··· d_n)^{-1/2}` factor,
/// and in angle coordinates it cancels against the Jacobian, leaving
/// `∏_k sin^{n-1-k}(θ_k/2)` (k from 1). This is finite on the whole box.
#[inline]
pub fn reduced_jacobian(angles: &[f64]) -> f64 {
    let levels = angles.len();
    angles
        .iter()
        .enumerate()
        .map(|(k, &theta)| (0.5 * theta).sin().powi((levels - 1 - k) as i32))
        .product()
}

/// Upper limit `f(x) = 2 arccot(cos(x/2))` of an ordered-region level, given
/// the realized angle of the level nested inside it.
#[inline]
pub fn cumulative_bound(x: f64) -> f64 {
    2.0 * f64::atan2(1.0, (0.5 * x).cos())
}

/// Integration interval of angle `level` (0 = outermost) inside the ordered
/// region `d_1 >= ... >= d_n`.
///
/// The innermost level (`n - 2`) runs over `[0, π/2]` and ignores
/// `inner_angle`; every other level runs over `[0, f(inner_angle)]` where
/// `inner_angle` is the realized angle of level `level + 1`.
pub fn ordered_region_bounds(level: usize, n: usize, inner_angle: f64) -> Result<(f64, f64)> {
    if n < 2 || level > n - 2 {
        return Err(Error::invalid(format!("level {level} does not exist for n = {n}")));
    }
    if level == n - 2 {
        return Ok((0.0, FRAC_PI_2));
    }
    if !(0.0..=PI).contains(&inner_angle) {
        return Err(Error::invalid(format!("angle {inner_angle} outside [0, π]")));
    }
    Ok((0.0, cumulative_bound(inner_angle)))
}

/// Maps `u ∈ [0,1]^{n-1}` onto the ordered region, writing angles into `angles`
/// and returning the volume scale (product of the interval lengths).
///
/// `u[0]` drives the innermost angle level (`n - 2`), `u[1]` the next one out,
/// and so on, so that each bound only depends on coordinates already consumed.
#[inline]
pub fn map_ordered(u: &[f64], angles: &mut [f64]) -> f64 {
    debug_assert_eq!(u.len(), angles.len());
    let levels = angles.len();
    let mut scale = 1.0;
    let mut upper = FRAC_PI_2;
    for (j, &x) in u.iter().enumerate() {
        let level = levels - 1 - j;
        let theta = x * upper;
        angles[level] = theta;
        scale *= upper;
        upper = cumulative_bound(theta);
    }
    scale
}

/// Maps `u ∈ [0,1]^{n-1}` onto the full box `[0, π]^{n-1}` (same coordinate order
/// as [`map_ordered`]); the scale is `π^{n-1}`.
#[inline]
pub fn map_full_box(u: &[f64], angles: &mut [f64]) -> f64 {
    let levels = angles.len();
    for (j, &x) in u.iter().enumerate() {
        angles[levels - 1 - j] = x * PI;
    }
    PI.powi(levels as i32)
}

/// Checked version of [`map_ordered`].
pub fn region_to_unit_cube(u: &[f64]) -> Result<(AngleVector, f64)> {
    if u.is_empty() {
        return Err(Error::invalid("empty unit-cube point"));
    }
    if let Some(x) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::invalid(format!("coordinate {x} outside [0, 1]")));
    }
    let mut angles = vec![0.0; u.len()];
    let scale = map_ordered(u, &mut angles);
    Ok((AngleVector(angles), scale))
}
