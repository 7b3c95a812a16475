//! Iterated adaptive Gauss–Kronrod quadrature over the unit cube.
//!
//! A `k`-dimensional integral is computed as `k` nested one-dimensional
//! integrals, each globally adaptive with the 7/15-point Gauss–Kronrod pair.
//! Errors of inner integrals are integrated with the outer Kronrod weights and
//! added to the outer estimate. Integrands may be vector valued so that several
//! moments come out of a single pass.
//!
//! Evaluation of the nodes of non-innermost levels is spread over the rayon
//! pool, but results are always combined in node order, so the output does not
//! depend on the number of workers.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sum::NeumaierSum;
use crate::{Error, Result};

/// Which engine produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Adaptive,
    Qmc,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Adaptive => f.write_str("adaptive"),
            Method::Qmc => f.write_str("qmc"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive" => Ok(Method::Adaptive),
            "qmc" => Ok(Method::Qmc),
            other => Err(Error::invalid(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    /// Absolute error estimate.
    pub error_estimate: f64,
    pub evaluations: u64,
    pub method: Method,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Budget checked between refinements of the outermost level.
    pub max_evaluations: u64,
    /// Maximum bisection depth of any one-dimensional level.
    pub max_depth: u32,
    /// Maximum number of subintervals of any inner one-dimensional integral.
    pub max_subdivisions: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            abs_tol: f64::MIN_POSITIVE,
            rel_tol: 1e-10,
            max_evaluations: 2_000_000_000,
            max_depth: 12,
            max_subdivisions: 400,
        }
    }
}

impl AdaptiveConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if self.max_evaluations < KRONROD_NODES as u64 {
            return Err(Error::invalid(format!(
                "evaluation budget {} is smaller than one rule application",
                self.max_evaluations
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be positive"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Per-component result of a vector-valued integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorEstimate {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evaluations: u64,
    pub converged: bool,
}

impl VectorEstimate {
    pub fn component(&self, i: usize) -> QuadratureEstimate {
        QuadratureEstimate {
            value: self.values[i],
            error_estimate: self.errors[i],
            evaluations: self.evaluations,
            method: Method::Adaptive,
            converged: self.converged,
        }
    }
}

const KRONROD_NODES: usize = 15;

// Abscissae in descending order; index 7 is the centre. Odd indices are Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Node `j` of the 15-point rule on `[-1, 1]`, ascending.
#[inline]
fn node(j: usize) -> f64 {
    if j < 7 {
        -XGK[j]
    } else {
        XGK[14 - j]
    }
}

#[inline]
fn kronrod_weight(j: usize) -> f64 {
    WGK[if j < 8 { j } else { 14 - j }]
}

/// Gauss weight of node `j`, zero for Kronrod-only nodes.
#[inline]
fn gauss_weight(j: usize) -> f64 {
    let k = if j < 8 { j } else { 14 - j };
    if k % 2 == 1 {
        WG[k / 2]
    } else if k == 7 {
        WG[3]
    } else {
        0.0
    }
}

/// Result of one level over one interval.
#[derive(Debug, Clone)]
struct Piece {
    a: f64,
    b: f64,
    depth: u32,
    values: Vec<f64>,
    errors: Vec<f64>,
    priority: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken by position so the refinement order is fully determined.
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Sum of a level: values, errors, evaluation count and convergence flag.
struct LevelResult {
    values: Vec<f64>,
    errors: Vec<f64>,
    evaluations: u64,
    converged: bool,
}

struct Engine<'a, F> {
    dim: usize,
    components: usize,
    f: &'a F,
    cfg: &'a AdaptiveConfig,
    /// Rough size of each component of the whole integral.
    scale_hint: Vec<f64>,
}

const SCALE_HINT_POINTS: u64 = 4096;

const INNER_TOLERANCE_FACTOR: f64 = 0.1;

/// Relative accuracy below which a level stops refining, per nesting level
/// underneath it (each rule application leaves `50 ε ∫|f|` of roundoff).
const ROUNDOFF_REL: f64 = 100.0 * f64::EPSILON;

impl<'a, F> Engine<'a, F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    fn eval_point(&self, point: &[f64]) -> Result<LevelResult> {
        let mut out = vec![0.0; self.components];
        (self.f)(point, &mut out);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                point: point.to_vec(),
            });
        }
        Ok(LevelResult {
            errors: vec![0.0; self.components],
            values: out,
            evaluations: 1,
            converged: true,
        })
    }

    fn node_value(&self, level: usize, point: &[f64]) -> Result<LevelResult> {
        if level + 1 == self.dim {
            self.eval_point(point)
        } else {
            self.level(level + 1, point)
        }
    }

    /// Applies the Gauss–Kronrod pair on `[a, b]` at `level`.
    fn rule(&self, level: usize, prefix: &[f64], a: f64, b: f64, depth: u32) -> Result<(Piece, u64, bool)> {
        let centre = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let eval = |j: usize| -> Result<LevelResult> {
            let mut point = prefix.to_vec();
            point[level] = centre + half * node(j);
            self.node_value(level, &point)
        };
        let nodes: Vec<LevelResult> = if level + 1 == self.dim {
            (0..KRONROD_NODES).map(eval).collect::<Result<_>>()?
        } else {
            (0..KRONROD_NODES)
                .into_par_iter()
                .map(eval)
                .collect::<Result<_>>()?
        };
        let m = self.components;
        let mut values = vec![0.0; m];
        let mut errors = vec![0.0; m];
        let evaluations = nodes.iter().map(|r| r.evaluations).sum();
        let converged = nodes.iter().all(|r| r.converged);
        for c in 0..m {
            let mut kronrod = 0.0;
            let mut gauss = 0.0;
            let mut abs_k = 0.0;
            let mut inner_err = 0.0;
            for (j, r) in nodes.iter().enumerate() {
                let wk = kronrod_weight(j);
                kronrod += wk * r.values[c];
                gauss += gauss_weight(j) * r.values[c];
                abs_k += wk * r.values[c].abs();
                inner_err += wk * r.errors[c];
            }
            let mean = 0.5 * kronrod;
            let asc: f64 = nodes
                .iter()
                .enumerate()
                .map(|(j, r)| kronrod_weight(j) * (r.values[c] - mean).abs())
                .sum::<f64>()
                * half.abs();
            let mut err = ((kronrod - gauss) * half).abs();
            if asc != 0.0 && err != 0.0 {
                err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
            }
            let resabs = abs_k * half.abs();
            let roundoff = 50.0 * f64::EPSILON * resabs;
            values[c] = kronrod * half;
            errors[c] = err.max(roundoff) + inner_err * half.abs();
        }
        Ok((
            Piece {
                a,
                b,
                depth,
                values,
                errors,
                priority: 0.0,
            },
            evaluations,
            converged,
        ))
    }

    fn totals(&self, pieces: &BinaryHeap<Piece>, done: &[Piece]) -> (Vec<f64>, Vec<f64>) {
        // Summed in order of position for reproducibility.
        let mut all: Vec<&Piece> = pieces.iter().chain(done.iter()).collect();
        all.sort_by(|x, y| x.a.total_cmp(&y.a));
        let m = self.components;
        let mut vals = vec![NeumaierSum::new(); m];
        let mut errs = vec![NeumaierSum::new(); m];
        for p in all {
            for c in 0..m {
                vals[c].add(p.values[c]);
                errs[c].add(p.errors[c]);
            }
        }
        (
            vals.iter().map(NeumaierSum::value).collect(),
            errs.iter().map(NeumaierSum::value).collect(),
        )
    }

    fn level(&self, level: usize, prefix: &[f64]) -> Result<LevelResult> {
        let outermost = level == 0;
        let tol_factor = if outermost { 1.0 } else { INNER_TOLERANCE_FACTOR };
        let floor = ROUNDOFF_REL * (self.dim - level) as f64;
        // Inner integrals only need to be accurate relative to the whole integral.
        let inner_abs: Vec<f64> = if outermost {
            vec![0.0; self.components]
        } else {
            self.scale_hint
                .iter()
                .map(|h| tol_factor * self.cfg.rel_tol * h)
                .collect()
        };
        let (first, mut evaluations, mut converged_inner) = self.rule(level, prefix, 0.0, 1.0, 0)?;
        let scale: Vec<f64> = first
            .values
            .iter()
            .map(|v| v.abs().max(self.cfg.abs_tol))
            .collect();
        let priority = |p: &Piece| -> f64 {
            p.errors
                .iter()
                .zip(&scale)
                .map(|(e, s)| e / s)
                .fold(0.0, f64::max)
        };
        let mut heap = BinaryHeap::new();
        let mut done: Vec<Piece> = Vec::new();
        let mut first = first;
        first.priority = priority(&first);
        heap.push(first);
        let mut exhausted = false;
        loop {
            let (values, errors) = self.totals(&heap, &done);
            let ok = values
                .iter()
                .zip(&errors)
                .zip(&inner_abs)
                .all(|((v, e), a)| *e <= (tol_factor * self.cfg.target(*v)).max(floor * v.abs()).max(*a));
            if ok {
                return Ok(LevelResult {
                    values,
                    errors,
                    evaluations,
                    converged: converged_inner,
                });
            }
            let budget_hit = outermost && evaluations >= self.cfg.max_evaluations;
            let too_many = !outermost && heap.len() + done.len() >= self.cfg.max_subdivisions;
            if budget_hit || too_many {
                exhausted = true;
            }
            let next = loop {
                match heap.pop() {
                    Some(p) if p.depth >= self.cfg.max_depth => done.push(p),
                    other => break other,
                }
            };
            let piece = match (next, exhausted) {
                (Some(p), false) => p,
                (Some(p), true) => {
                    heap.push(p);
                    break;
                }
                (None, _) => break,
            };
            let mid = 0.5 * (piece.a + piece.b);
            let children: Vec<(Piece, u64, bool)> = if outermost || level + 1 < self.dim {
                [(piece.a, mid), (mid, piece.b)]
                    .into_par_iter()
                    .map(|(a, b)| self.rule(level, prefix, a, b, piece.depth + 1))
                    .collect::<Result<_>>()?
            } else {
                vec![
                    self.rule(level, prefix, piece.a, mid, piece.depth + 1)?,
                    self.rule(level, prefix, mid, piece.b, piece.depth + 1)?,
                ]
            };
            for (mut child, ev, conv) in children {
                evaluations += ev;
                converged_inner &= conv;
                child.priority = priority(&child);
                heap.push(child);
            }
        }
        let (values, errors) = self.totals(&heap, &done);
        Ok(LevelResult {
            values,
            errors,
            evaluations,
            converged: false,
        })
    }
}

/// Integrates a vector-valued `f` over `[0, 1]^dim`.
///
/// `f(u, out)` writes `components` values for the point `u`. The estimate is
/// converged when every component meets `max(abs_tol, rel_tol · |value|)`.
/// `|mean|` of each component over a short Halton sequence.
fn scale_hint<F>(dim: usize, components: usize, f: &F) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let mut sums = vec![NeumaierSum::new(); components];
    let mut out = vec![0.0; components];
    for i in 1..=SCALE_HINT_POINTS {
        let u = crate::qmc::halton_point(i, dim);
        f(&u, &mut out);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { point: u });
        }
        for (s, v) in sums.iter_mut().zip(&out) {
            s.add(*v);
        }
    }
    Ok(sums
        .iter()
        .map(|s| (s.value() / SCALE_HINT_POINTS as f64).abs())
        .collect())
}

pub fn integrate_adaptive_vec<F>(
    dim: usize,
    components: usize,
    f: F,
    cfg: &AdaptiveConfig,
) -> Result<VectorEstimate>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    if dim == 0 {
        return Err(Error::invalid("integration dimension must be at least 1"));
    }
    if components == 0 {
        return Err(Error::invalid("integrand must have at least one component"));
    }
    cfg.validate()?;
    let scale_hint = if dim == 1 {
        vec![0.0; components]
    } else {
        scale_hint(dim, components, &f)?
    };
    let engine = Engine {
        dim,
        components,
        f: &f,
        cfg,
        scale_hint,
    };
    let prefix = vec![0.0; dim];
    let r = engine.level(0, &prefix)?;
    let converged = r.converged
        && r
            .values
            .iter()
            .zip(&r.errors)
            .all(|(v, e)| *e <= cfg.target(*v).max(ROUNDOFF_REL * dim as f64 * v.abs()));
    Ok(VectorEstimate {
        values: r.values,
        errors: r.errors,
        evaluations: r.evaluations + if dim == 1 { 0 } else { SCALE_HINT_POINTS },
        converged,
    })
}

/// Integrates a scalar `f` over `[0, 1]^dim`.
pub fn integrate_adaptive<F>(dim: usize, f: F, cfg: &AdaptiveConfig) -> Result<QuadratureEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let r = integrate_adaptive_vec(dim, 1, |u, out| out[0] = f(u), cfg)?;
    Ok(r.component(0))
}

/// Integrates `f` over `[a, b]`.
pub fn integrate_iterated_1d<F>(f: F, a: f64, b: f64, cfg: &AdaptiveConfig) -> Result<QuadratureEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::invalid(format!("bad interval [{a}, {b}]")));
    }
    let width = b - a;
    let r = integrate_adaptive(1, |u| width * f(a + width * u[0]), cfg)?;
    Ok(r)
}
