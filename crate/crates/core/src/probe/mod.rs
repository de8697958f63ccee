//! Numerical probes that corroborate or challenge classification verdicts at desk
//! scale.
//!
//! Four probe families share one report shape:
//!
//! * [`dense`]: denseness probes — fit targets by kernel sections at nested center
//!   sets and record sup-grid error curves (decay corroborates universality, a
//!   plateau corroborates its failure).
//! * [`witness`]: constructive counterexamples — build a smooth nonzero measure whose
//!   Fourier transform lives in a spectral gap, so every kernel section annihilates it.
//! * [`mmd`]: injectivity tables — squared mean-embedding distances against total
//!   variation for labelled measure pairs.
//! * [`basis`]: completeness sweeps for exponential systems and gapped monomial
//!   families.
//!
//! All probes are deterministic: sampled points come from a caller-seeded RNG, curves
//! are assembled in declaration order, and parallelism is restricted to
//! order-preserving maps.

pub mod basis;
pub mod dense;
pub mod mmd;
pub mod witness;

use serde::Serialize;
use thiserror::Error;

use crate::kernels::KernelError;
use crate::measures::MeasureError;
use crate::solve::SolveError;

#[derive(Debug, Error, PartialEq)]
pub enum ProbeError {
    #[error("invalid probe configuration: {0}")]
    InvalidConfig(String),
    #[error("the regularized system is singular (ridge {ridge:e} too small)")]
    SingularSystem { ridge: f64 },
    #[error("spectral gap ({lo}, {hi}) must lie strictly right of zero")]
    GapContainsZero { lo: f64, hi: f64 },
    #[error("spectral gap ({lo}, {hi}) intersects the spectral support: {detail}")]
    GapIntersectsSupport { lo: f64, hi: f64, detail: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

impl From<SolveError> for ProbeError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::SingularSystem { ridge } => ProbeError::SingularSystem { ridge },
            SolveError::ShapeMismatch { .. } => {
                ProbeError::InvalidConfig(format!("internal solver shape mismatch: {e}"))
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, ProbeError>;

// =============================================================================
// Defaults shared across probes (all config-overridable)
// =============================================================================

/// Default ridge shift for every regularized solve.
pub const DEFAULT_RIDGE: f64 = 1e-10;
/// Default number of evaluation-grid points for sup-error measurement.
pub const DEFAULT_EVAL_GRID: usize = 401;
/// Default convergence tolerance against which plateaus and final errors are judged.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-3;
/// Default RNG seed for sampled test points.
pub const DEFAULT_SEED: u64 = 42;

// =============================================================================
// Target functions
// =============================================================================

/// Named scalar targets for approximation probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetFn {
    Constant,
    Identity,
    Square,
    Cube,
    Sin { freq: f64 },
    SinSq { freq: f64 },
}

impl TargetFn {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TargetFn::Constant => 1.0,
            TargetFn::Identity => x,
            TargetFn::Square => x * x,
            TargetFn::Cube => x * x * x,
            TargetFn::Sin { freq } => (freq * x).sin(),
            TargetFn::SinSq { freq } => {
                let s = (freq * x).sin();
                s * s
            }
        }
    }

    /// Stable name used in CSV output and report flags.
    pub fn name(&self) -> String {
        match self {
            TargetFn::Constant => "constant".into(),
            TargetFn::Identity => "x".into(),
            TargetFn::Square => "x^2".into(),
            TargetFn::Cube => "x^3".into(),
            TargetFn::Sin { freq } => format!("sin({}x)", fmt_freq(*freq)),
            TargetFn::SinSq { freq } => format!("sin^2({}x)", fmt_freq(*freq)),
        }
    }
}

fn fmt_freq(freq: f64) -> String {
    if freq.fract() == 0.0 && freq.abs() < 1e15 {
        format!("{}", freq as i64)
    } else {
        format!("{freq}")
    }
}

// =============================================================================
// Report shape
// =============================================================================

/// One measured point of an error curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub basis_size: usize,
    pub sup_error: f64,
}

/// Sup-grid error of one target as the basis grows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCurve {
    pub target: String,
    pub points: Vec<CurvePoint>,
    pub plateaued: bool,
}

impl ErrorCurve {
    pub fn final_error(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.sup_error)
    }
}

/// One row of an MMD injectivity table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MmdRow {
    pub label: String,
    pub mmd2: f64,
    pub total_variation: f64,
}

/// Residual summary of a witness-measure construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSummary {
    pub gap: (f64, f64),
    pub truncation: f64,
    pub grid_size: usize,
    pub total_mass: f64,
    pub max_fourier_on_support: f64,
    pub max_embedding: f64,
    pub pair_scale: f64,
    pub pair_mmd2: f64,
    pub pair_total_variation: f64,
}

/// Whether a recorded value must stay at or below, or at or above, its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlagKind {
    AtMost,
    AtLeast,
}

/// A pass/fail check computed from recorded numbers only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckFlag {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub kind: FlagKind,
    pub pass: bool,
}

impl CheckFlag {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            kind: FlagKind::AtMost,
            pass: value <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            kind: FlagKind::AtLeast,
            pass: value >= threshold,
        }
    }
}

/// What an error curve is expected to do, deciding which flags a probe emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveExpectation {
    /// The final error must reach the convergence tolerance.
    Converge,
    /// The curve must plateau (per [`plateaued`]) at a floor above 10x the tolerance.
    Plateau,
}

/// The uniform result document of every probe.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    /// Stable action name ("probe-dense", "probe-witness", "probe-mmd", "probe-exp",
    /// "probe-muntz").
    pub action: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<ErrorCurve>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mmd_rows: Vec<MmdRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSummary>,
    pub flags: Vec<CheckFlag>,
    pub passed: bool,
    #[serde(skip)]
    pub runtime: std::time::Duration,
}

impl ProbeReport {
    pub(crate) fn new(action: &'static str) -> Self {
        Self {
            action,
            curves: Vec::new(),
            mmd_rows: Vec::new(),
            witness: None,
            flags: Vec::new(),
            passed: true,
            runtime: std::time::Duration::ZERO,
        }
    }

    pub(crate) fn finish(mut self, started: std::time::Instant) -> Self {
        self.passed = self.flags.iter().all(|f| f.pass);
        self.runtime = started.elapsed();
        self
    }
}

// =============================================================================
// Shared numerics
// =============================================================================

/// `n` equispaced points covering [a, b] inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least 2 points");
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// The plateau rule: a curve plateaus when its last three errors differ by less than
/// 5% relative while staying above 10x the convergence tolerance.
pub fn plateaued(errors: &[f64], tol: f64) -> bool {
    if errors.len() < 3 {
        return false;
    }
    let last = &errors[errors.len() - 3..];
    let max = last.iter().cloned().fold(f64::MIN, f64::max);
    let min = last.iter().cloned().fold(f64::MAX, f64::min);
    max > 0.0 && (max - min) < 0.05 * max && min > 10.0 * tol
}

/// Nested orderings of an equispaced master grid on [a, b] with `master` points: every
/// prefix of the returned ordering is a valid center set, and prefixes grow by adding
/// points without moving earlier ones (the structural guarantee behind monotone error
/// curves). The midpoint (for odd `master`) comes first, then symmetric index pairs
/// (i, master−1−i) in bit-reversed order of i, so odd-length prefixes are symmetric
/// sets spreading evenly across the interval.
pub fn nested_centers(interval: (f64, f64), master: usize) -> Vec<f64> {
    let (a, b) = interval;
    assert!(master >= 1);
    if master == 1 {
        return vec![(a + b) / 2.0];
    }
    let grid = linspace(a, b, master);
    let mut order = Vec::with_capacity(master);
    if master % 2 == 1 {
        order.push(grid[master / 2]);
    }
    let pairs = master / 2;
    for i in bit_reversed_order(pairs) {
        order.push(grid[i]);
        order.push(grid[master - 1 - i]);
    }
    order
}

/// 0..n in bit-reversed order over the next power of two, filtered to < n.
fn bit_reversed_order(n: usize) -> Vec<usize> {
    if n == 0 {
        return vec![];
    }
    let bits = if n == 1 {
        1
    } else {
        usize::BITS - (n - 1).leading_zeros()
    };
    let size = 1usize << bits;
    (0..size)
        .map(|k| k.reverse_bits() >> (usize::BITS - bits))
        .filter(|&k| k < n)
        .collect()
}

/// Emits the pass/fail flags one error curve owes under its expectation: a converge
/// flag compares the final error to the tolerance; a plateau expectation checks the
/// last-three relative spread and that the floor sits above 10x the tolerance.
pub(crate) fn push_expectation_flags(
    flags: &mut Vec<CheckFlag>,
    target: &str,
    errors: &[f64],
    tol: f64,
    expect: CurveExpectation,
) {
    match expect {
        CurveExpectation::Converge => {
            let last = errors.last().copied().unwrap_or(f64::NAN);
            flags.push(CheckFlag::at_most(
                format!("final-sup-error({target})"),
                last,
                tol,
            ));
        }
        CurveExpectation::Plateau => {
            let tail = &errors[errors.len().saturating_sub(3)..];
            let max = tail.iter().cloned().fold(f64::MIN, f64::max);
            let min = tail.iter().cloned().fold(f64::MAX, f64::min);
            let spread = if max > 0.0 { (max - min) / max } else { f64::MAX };
            flags.push(CheckFlag::at_most(
                format!("plateau-relative-spread({target})"),
                spread,
                0.05,
            ));
            flags.push(CheckFlag::at_least(
                format!("plateau-floor({target})"),
                min,
                10.0 * tol,
            ));
        }
    }
}

/// Sup over the evaluation grid of |fitted − target| where fitted(x) = Σ cᵢ·basisᵢ(x).
pub(crate) fn sup_error(
    grid: &[f64],
    target_values: &[f64],
    fitted: impl Fn(f64) -> f64 + Sync + Send,
) -> f64 {
    let residuals = crate::par::map_slice(grid, |&x| fitted(x));
    residuals
        .iter()
        .zip(target_values)
        .map(|(f, t)| (f - t).abs())
        .fold(0.0, f64::max)
}
