//! Completeness sweeps for exponential systems and gapped monomial families.
//!
//! Both probes fit targets by regularized least squares on the evaluation grid and
//! record sup-error curves as the basis grows:
//!
//! * [`exponential_completeness_probe`]: real exponential systems
//!   {cos(λₖx), sin(λₖx)} for a frequency sequence λₖ, growing by prefixes of the
//!   sequence. Frequency sets with limsup n/λₙ = ∞ are complete on every compact
//!   interval, which the error decay makes visible.
//! * [`muntz_probe`]: monomials {xⁿ : n ∈ support, n ≤ horizon} on a symmetric
//!   interval, growing by horizon. Parity gaps in the exponent support leave whole
//!   parity classes unreachable — for an even-only support the best fit to an odd
//!   target is zero, so the error pins at the target's sup norm.
//!
//! Unlike nested-center interpolation, least squares on a fixed grid is stable under
//! very ill-conditioned bases (high monomial horizons) thanks to the ridge shift, at
//! the price of sup errors that may wiggle by quadrature-scale amounts as the basis
//! grows; flags therefore judge final errors and plateaus, never monotonicity.

use crate::kernels::IndexSupport;
use crate::par;
use crate::probe::{
    linspace, plateaued, push_expectation_flags, CurveExpectation, CurvePoint, ErrorCurve,
    ProbeError, ProbeReport, Result, TargetFn, DEFAULT_CONVERGENCE_TOL, DEFAULT_EVAL_GRID,
    DEFAULT_RIDGE,
};
use crate::solve;

// =============================================================================
// Basis functions
// =============================================================================

#[derive(Debug, Clone, Copy)]
enum BasisFn {
    Constant,
    Cos(f64),
    Sin(f64),
    Monomial(u32),
}

impl BasisFn {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            BasisFn::Constant => 1.0,
            BasisFn::Cos(freq) => (freq * x).cos(),
            BasisFn::Sin(freq) => (freq * x).sin(),
            BasisFn::Monomial(n) => x.powi(n as i32),
        }
    }
}

// =============================================================================
// Shared sweep driver
// =============================================================================

/// Common knobs of both sweep probes.
#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub interval: (f64, f64),
    pub evaluation_grid_size: usize,
    pub ridge: f64,
    pub convergence_tol: f64,
    pub expect: CurveExpectation,
}

impl SweepSettings {
    pub fn new(interval: (f64, f64)) -> Self {
        Self {
            interval,
            evaluation_grid_size: DEFAULT_EVAL_GRID,
            ridge: DEFAULT_RIDGE,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
            expect: CurveExpectation::Converge,
        }
    }

    fn validate(&self, targets: &[TargetFn]) -> Result<()> {
        let (a, b) = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(ProbeError::InvalidConfig(format!(
                "interval ({a}, {b}) must be finite with a < b"
            )));
        }
        if targets.is_empty() {
            return Err(ProbeError::InvalidConfig("no targets given".into()));
        }
        if self.evaluation_grid_size < 2 {
            return Err(ProbeError::InvalidConfig(
                "evaluation grid needs at least 2 points".into(),
            ));
        }
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return Err(ProbeError::InvalidConfig(format!(
                "ridge {} must be finite and nonnegative",
                self.ridge
            )));
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(ProbeError::InvalidConfig(format!(
                "convergence tolerance {} must be positive",
                self.convergence_tol
            )));
        }
        Ok(())
    }
}

/// Fits every target at every basis stage and assembles curves plus flags.
fn sweep(
    action: &'static str,
    stages: &[(usize, Vec<BasisFn>)],
    targets: &[TargetFn],
    settings: &SweepSettings,
) -> Result<ProbeReport> {
    let started = std::time::Instant::now();
    settings.validate(targets)?;
    if stages.is_empty() {
        return Err(ProbeError::InvalidConfig("no basis stages given".into()));
    }
    if stages.iter().any(|(_, basis)| basis.is_empty()) {
        return Err(ProbeError::InvalidConfig(
            "a basis stage selected no functions".into(),
        ));
    }

    let grid = linspace(
        settings.interval.0,
        settings.interval.1,
        settings.evaluation_grid_size,
    );

    let mut report = ProbeReport::new(action);
    let mut curves: Vec<ErrorCurve> = targets
        .iter()
        .map(|t| ErrorCurve {
            target: t.name(),
            points: Vec::with_capacity(stages.len()),
            plateaued: false,
        })
        .collect();

    for (size, basis) in stages {
        let rows: Vec<Vec<f64>> =
            par::map_slice(&grid, |&x| basis.iter().map(|b| b.eval(x)).collect());
        for (target, curve) in targets.iter().zip(curves.iter_mut()) {
            let y: Vec<f64> = grid.iter().map(|&x| target.eval(x)).collect();
            let coeffs = solve::ridge_least_squares(&rows, &y, settings.ridge)?;
            let err = rows
                .iter()
                .zip(&y)
                .map(|(row, &yi)| {
                    let fit: f64 = row.iter().zip(&coeffs).map(|(b, c)| b * c).sum();
                    (fit - yi).abs()
                })
                .fold(0.0, f64::max);
            curve.points.push(CurvePoint {
                basis_size: *size,
                sup_error: err,
            });
        }
    }

    for curve in &mut curves {
        let errors: Vec<f64> = curve.points.iter().map(|p| p.sup_error).collect();
        curve.plateaued = plateaued(&errors, settings.convergence_tol);
        push_expectation_flags(
            &mut report.flags,
            &curve.target,
            &errors,
            settings.convergence_tol,
            settings.expect,
        );
    }

    report.curves = curves;
    Ok(report.finish(started))
}

// =============================================================================
// Exponential systems
// =============================================================================

/// Sweeps the real exponential system of `lambdas` by prefixes: stage k uses
/// {cos(λx), sin(λx)} for the first `prefix_counts[k]` frequencies (a zero frequency
/// contributes the constant instead). `basis_size` records the number of functions.
pub fn exponential_completeness_probe(
    lambdas: &[f64],
    prefix_counts: &[usize],
    targets: &[TargetFn],
    settings: &SweepSettings,
) -> Result<ProbeReport> {
    if lambdas.is_empty() {
        return Err(ProbeError::InvalidConfig("no frequencies given".into()));
    }
    if lambdas.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return Err(ProbeError::InvalidConfig(
            "frequencies must be finite and nonnegative".into(),
        ));
    }
    if prefix_counts.is_empty()
        || prefix_counts.windows(2).any(|w| w[0] >= w[1])
        || *prefix_counts.last().unwrap() > lambdas.len()
    {
        return Err(ProbeError::InvalidConfig(format!(
            "prefix counts must be strictly increasing and at most {}",
            lambdas.len()
        )));
    }

    let stages: Vec<(usize, Vec<BasisFn>)> = prefix_counts
        .iter()
        .map(|&count| {
            let mut basis = Vec::new();
            for &lambda in &lambdas[..count] {
                if lambda == 0.0 {
                    basis.push(BasisFn::Constant);
                } else {
                    basis.push(BasisFn::Cos(lambda));
                    basis.push(BasisFn::Sin(lambda));
                }
            }
            (basis.len(), basis)
        })
        .collect();
    sweep("probe-exp", &stages, targets, settings)
}

// =============================================================================
// Gapped monomial families
// =============================================================================

/// Sweeps the monomials {xⁿ : n ∈ support, n ≤ horizon} over increasing horizons.
/// `basis_size` records the number of exponents actually present.
pub fn muntz_probe(
    support: &IndexSupport,
    horizons: &[u32],
    targets: &[TargetFn],
    settings: &SweepSettings,
) -> Result<ProbeReport> {
    if horizons.is_empty() || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ProbeError::InvalidConfig(
            "horizons must be nonempty and strictly increasing".into(),
        ));
    }

    let stages: Vec<(usize, Vec<BasisFn>)> = horizons
        .iter()
        .map(|&h| {
            let basis: Vec<BasisFn> = (0..=h)
                .filter(|&n| support.contains(n))
                .map(BasisFn::Monomial)
                .collect();
            (basis.len(), basis)
        })
        .collect();
    if stages.iter().any(|(n, _)| *n == 0) {
        return Err(ProbeError::InvalidConfig(
            "a horizon admits no supported exponents".into(),
        ));
    }
    sweep("probe-muntz", &stages, targets, settings)
}
