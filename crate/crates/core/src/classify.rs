//! Deterministic rule engine classifying kernels as universal, characteristic, and
//! C₀-universal.
//!
//! Every Yes/No verdict carries a stable rule id and a citation of the classical
//! criterion it applies; Unknown verdicts instead explain which hypothesis could not
//! be certified. The rules read only symbolic data — support descriptors, coefficient
//! supports, declared weight flags — never floating-point samples, so classification
//! is exactly reproducible. Numeric corroboration lives in the diagnostic sub-checks
//! ([`check_pollard`], [`muntz_gap_analysis`]) and in the `probe` module.

use serde::Serialize;
use thiserror::Error;

use crate::kernels::{ApproxWitness, CoefficientSequence, KernelSpec, Parity, WeightSpec};
use crate::TriState;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("declared weight flag contradicted by a numeric spot-check: {0}")]
    FlagContradiction(String),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

// =============================================================================
// Rulebook
// =============================================================================

/// A classification rule: stable identifier plus the criterion it encodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rule {
    pub id: &'static str,
    pub citation: &'static str,
}

pub const ACCUMULATION_POINT: Rule = Rule {
    id: "accumulation-point-uniqueness",
    citation: "Uniqueness-set criterion: on the line, a spectral support with a finite \
               accumulation point forces the Fourier transform of an annihilating \
               measure to vanish identically (analytic continuation)",
};

pub const LIMSUP_REDHEFFER: Rule = Rule {
    id: "limsup-redheffer",
    citation: "Redheffer completeness criterion: limsup n/\u{03bb}\u{2099} = \u{221e} \
               makes the exponential system {e^{\u{00b1}i\u{03bb}\u{2099}x}} complete \
               on every interval",
};

pub const FINITE_SPECTRAL_SUPPORT: Rule = Rule {
    id: "ti-universal-finite-support",
    citation: "A finite spectral support spans a finite-dimensional space of \
               trigonometric sums, which is never dense in C(Z) for an infinite \
               compact Z",
};

pub const CHAR_FULL_SUPPORT: Rule = Rule {
    id: "ti-char-full-support",
    citation: "Spectral support criterion: a bounded continuous translation-invariant \
               kernel is characteristic exactly when its spectral measure has full \
               support",
};

pub const C0_FULL_SUPPORT: Rule = Rule {
    id: "ti-c0-full-support",
    citation: "C\u{2080}-density criterion: a translation-invariant kernel is \
               C\u{2080}-universal exactly when its spectral measure has full support",
};

pub const MUNTZ_PARITY: Rule = Rule {
    id: "muntz-parity",
    citation: "M\u{00fc}ntz-Sz\u{00e1}sz criterion per parity class: an entire \
               coefficient series spans a dense space exactly when \u{03b1}\u{2080} > 0 \
               and the reciprocal sums over even and over odd supported exponents both \
               diverge",
};

pub const WP_FINITE_COMPLEMENT: Rule = Rule {
    id: "wp-finite-complement",
    citation: "Weighted polynomial density (Pollard/Krein conditions): for a positive, \
               even, nonincreasing weight with divergent log-integral and bounded \
               polynomial inverse approximants, a coefficient support with finite \
               complement yields an injective embedding",
};

pub const C0_IMPLIES_UNIVERSAL: Rule = Rule {
    id: "c0-implies-universal",
    citation: "Denseness in C\u{2080} restricts to denseness in C(Z) on every compact \
               Z: C\u{2080}-universal kernels are universal",
};

pub const C0_IMPLIES_CHARACTERISTIC: Rule = Rule {
    id: "c0-implies-characteristic",
    citation: "Denseness in C\u{2080} separates finite signed measures: \
               C\u{2080}-universal kernels are characteristic",
};

/// All rules the engine can cite, for documentation and stability tests.
pub fn rulebook() -> &'static [Rule] {
    &[
        ACCUMULATION_POINT,
        LIMSUP_REDHEFFER,
        FINITE_SPECTRAL_SUPPORT,
        CHAR_FULL_SUPPORT,
        C0_FULL_SUPPORT,
        MUNTZ_PARITY,
        WP_FINITE_COMPLEMENT,
        C0_IMPLIES_UNIVERSAL,
        C0_IMPLIES_CHARACTERISTIC,
    ]
}

// =============================================================================
// Verdicts
// =============================================================================

/// The outcome of one classification question for one kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: TriState,
    pub rule_id: Option<&'static str>,
    pub citation: Option<&'static str>,
    pub explanation: String,
}

impl Verdict {
    fn decided(status: TriState, rule: Rule, explanation: String) -> Self {
        debug_assert!(status != TriState::Unknown);
        Self {
            status,
            rule_id: Some(rule.id),
            citation: Some(rule.citation),
            explanation,
        }
    }

    fn yes(rule: Rule, explanation: String) -> Self {
        Self::decided(TriState::Yes, rule, explanation)
    }

    fn no(rule: Rule, explanation: String) -> Self {
        Self::decided(TriState::No, rule, explanation)
    }

    fn unknown(explanation: String) -> Self {
        Self {
            status: TriState::Unknown,
            rule_id: None,
            citation: None,
            explanation,
        }
    }
}

// =============================================================================
// The three classification questions
// =============================================================================

/// Is the kernel universal (its section span dense in C(Z) for every compact Z)?
pub fn classify_universal(kernel: &KernelSpec) -> Verdict {
    match kernel {
        KernelSpec::TranslationInvariant { spectral } => {
            let d = spectral.descriptor();
            if d.dim() == 1 && d.has_finite_accumulation_point() == TriState::Yes {
                return Verdict::yes(
                    ACCUMULATION_POINT,
                    format!(
                        "the spectral support ({}) has a finite accumulation point, \
                         so it is a uniqueness set",
                        d.describe()
                    ),
                );
            }
            if d.limsup_n_over_lambda_infinite() == TriState::Yes && !d.is_full_space() {
                return Verdict::yes(
                    LIMSUP_REDHEFFER,
                    format!(
                        "the spectral support ({}) satisfies limsup n/lambda_n = infinity",
                        d.describe()
                    ),
                );
            }
            if matches!(
                d,
                crate::kernels::SupportDescriptor::FiniteSet(_)
            ) {
                return Verdict::no(
                    FINITE_SPECTRAL_SUPPORT,
                    format!("the spectral support ({}) is finite", d.describe()),
                );
            }
            upgrade_from_c0(
                kernel,
                C0_IMPLIES_UNIVERSAL,
                Verdict::unknown(format!(
                    "no universality rule applies: the spectral support ({}) has no \
                     certified finite accumulation point and no certified \
                     limsup n/lambda_n = infinity",
                    d.describe()
                )),
            )
        }
        KernelSpec::Polynomial { coeffs } => classify_polynomial_universal(coeffs),
        KernelSpec::WeightedPolynomial { .. } => upgrade_from_c0(
            kernel,
            C0_IMPLIES_UNIVERSAL,
            Verdict::unknown(
                "no direct universality rule applies to weighted polynomial kernels; \
                 the C0-universality hypotheses were not all certified"
                    .into(),
            ),
        ),
        KernelSpec::HilbertSchmidt { .. } => Verdict::unknown(
            "no universality rule applies to explicit feature-series kernels: denseness \
             of the feature span in C(Z) is not certified by any declared flag"
                .into(),
        ),
    }
}

fn classify_polynomial_universal(coeffs: &CoefficientSequence) -> Verdict {
    if !coeffs.is_entire() {
        return Verdict::unknown(format!(
            "the parity criterion requires an entire coefficient series, but the {} \
             family on {} has a finite convergence radius",
            coeffs.family().name(),
            coeffs.support().describe()
        ));
    }
    if !coeffs.alpha0_positive() {
        return Verdict::no(
            MUNTZ_PARITY,
            "alpha_0 = 0: the constant function is missing from the monomial span".into(),
        );
    }
    let even = coeffs.support().parity_sum_diverges(Parity::Even);
    let odd = coeffs.support().parity_sum_diverges(Parity::Odd);
    match (even, odd) {
        (TriState::Yes, TriState::Yes) => Verdict::yes(
            MUNTZ_PARITY,
            format!(
                "alpha_0 > 0 and the reciprocal sums over even and odd exponents of {} \
                 both diverge",
                coeffs.support().describe()
            ),
        ),
        (TriState::No, _) | (_, TriState::No) => {
            let which = if even == TriState::No { "even" } else { "odd" };
            Verdict::no(
                MUNTZ_PARITY,
                format!(
                    "the reciprocal sum over {which} exponents of {} converges",
                    coeffs.support().describe()
                ),
            )
        }
        _ => Verdict::unknown(format!(
            "divergence of the parity reciprocal sums is undeclared for {}",
            coeffs.support().describe()
        )),
    }
}

/// Is the kernel characteristic (its mean embedding injective on probability
/// measures)?
pub fn classify_characteristic(kernel: &KernelSpec) -> Verdict {
    match kernel {
        KernelSpec::TranslationInvariant { spectral } => {
            let d = spectral.descriptor();
            if d.is_full_space() {
                Verdict::yes(
                    CHAR_FULL_SUPPORT,
                    "the spectral measure has full support".into(),
                )
            } else {
                Verdict::no(
                    CHAR_FULL_SUPPORT,
                    format!(
                        "the spectral support ({}) is a proper closed subset of the line",
                        d.describe()
                    ),
                )
            }
        }
        KernelSpec::WeightedPolynomial { coeffs, weight } => {
            match weighted_poly_hypotheses(coeffs, weight, false) {
                Ok(explanation) => Verdict::yes(WP_FINITE_COMPLEMENT, explanation),
                Err(missing) => upgrade_from_c0(
                    kernel,
                    C0_IMPLIES_CHARACTERISTIC,
                    Verdict::unknown(missing),
                ),
            }
        }
        KernelSpec::Polynomial { .. } => Verdict::unknown(
            "no characteristicness rule applies to unweighted polynomial kernels: the \
             weight 1 is not in the Pollard class (its log-integral converges)"
                .into(),
        ),
        KernelSpec::HilbertSchmidt { .. } => Verdict::unknown(
            "no characteristicness rule applies to explicit feature-series kernels: \
             injectivity of the embedding is not certified by any declared flag"
                .into(),
        ),
    }
}

/// Is the kernel C₀-universal (its section span dense in C₀)?
pub fn classify_c0_universal(kernel: &KernelSpec) -> Verdict {
    match kernel {
        KernelSpec::TranslationInvariant { spectral } => {
            let d = spectral.descriptor();
            if d.is_full_space() {
                Verdict::yes(
                    C0_FULL_SUPPORT,
                    "the spectral measure has full support".into(),
                )
            } else {
                Verdict::no(
                    C0_FULL_SUPPORT,
                    format!(
                        "the spectral support ({}) is a proper closed subset of the line",
                        d.describe()
                    ),
                )
            }
        }
        KernelSpec::WeightedPolynomial { coeffs, weight } => {
            match weighted_poly_hypotheses(coeffs, weight, true) {
                Ok(explanation) => Verdict::yes(WP_FINITE_COMPLEMENT, explanation),
                Err(missing) => Verdict::unknown(missing),
            }
        }
        KernelSpec::Polynomial { .. } => Verdict::unknown(
            "no C0-universality rule applies to unweighted polynomial kernels: \
             monomials are unbounded, so the section span is not contained in C0"
                .into(),
        ),
        KernelSpec::HilbertSchmidt { .. } => Verdict::unknown(
            "no C0-universality rule applies to explicit feature-series kernels: \
             C0-density of the feature span is not certified by any declared flag"
                .into(),
        ),
    }
}

/// Check the weighted-polynomial rule hypotheses; Ok carries the firing explanation,
/// Err the first missing hypothesis.
fn weighted_poly_hypotheses(
    coeffs: &CoefficientSequence,
    weight: &WeightSpec,
    require_alpha0: bool,
) -> std::result::Result<String, String> {
    if !weight.positive_everywhere() {
        return Err(format!(
            "the {} weight is not positive everywhere",
            weight.name()
        ));
    }
    if weight.log_integral_diverges() != TriState::Yes {
        return Err(format!(
            "divergence of the log-integral of the {} weight is not certified (flag: {})",
            weight.name(),
            weight.log_integral_diverges()
        ));
    }
    if weight.bounded_inverse_approx() != TriState::Yes {
        return Err(format!(
            "bounded polynomial approximation of 1/{} is not certified (flag: {})",
            weight.name(),
            weight.bounded_inverse_approx()
        ));
    }
    if !weight.even_nonincreasing() {
        return Err(format!(
            "the {} weight is not declared even and nonincreasing",
            weight.name()
        ));
    }
    if !coeffs.support().complement_is_finite() {
        return Err(format!(
            "the coefficient support ({}) does not have finite complement",
            coeffs.support().describe()
        ));
    }
    if require_alpha0 && !coeffs.alpha0_positive() {
        return Err("alpha_0 = 0: the constant feature is missing".into());
    }
    Ok(format!(
        "the {} weight satisfies the Pollard conditions and the coefficient support \
         ({}) has finite complement{}",
        weight.name(),
        coeffs.support().describe(),
        if require_alpha0 { " with alpha_0 > 0" } else { "" }
    ))
}

/// Upgrade an Unknown base verdict through a C₀-universality implication.
fn upgrade_from_c0(kernel: &KernelSpec, implication: Rule, base: Verdict) -> Verdict {
    if base.status != TriState::Unknown {
        return base;
    }
    let c0 = classify_c0_universal(kernel);
    if c0.status == TriState::Yes {
        Verdict::yes(
            implication,
            format!("upgraded from C0-universality: {}", c0.explanation),
        )
    } else {
        base
    }
}

// =============================================================================
// Bundled report
// =============================================================================

/// The three verdicts for one kernel, with family-specific diagnostics attached.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub kernel: String,
    pub universal: Verdict,
    pub characteristic: Verdict,
    pub c0_universal: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pollard: Option<PollardReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub muntz: Option<MuntzReport>,
}

/// Default half-width of the largest log-integral window in [`check_pollard`].
pub const DEFAULT_POLLARD_WINDOW: f64 = 10.0;
/// Default number of witness terms in [`check_pollard`].
pub const DEFAULT_POLLARD_TERMS: u32 = 40;
/// Default exponent horizon in [`muntz_gap_analysis`].
pub const DEFAULT_MUNTZ_HORIZON: u32 = 1000;

/// Run all three classifications plus the applicable diagnostics.
pub fn classify_all(kernel: &KernelSpec) -> Result<ClassificationReport> {
    let pollard = match kernel {
        KernelSpec::WeightedPolynomial { weight, .. } => Some(check_pollard(
            weight,
            DEFAULT_POLLARD_WINDOW,
            DEFAULT_POLLARD_TERMS,
        )?),
        _ => None,
    };
    let muntz = match kernel {
        KernelSpec::Polynomial { coeffs } | KernelSpec::WeightedPolynomial { coeffs, .. } => {
            Some(muntz_gap_analysis(coeffs, DEFAULT_MUNTZ_HORIZON))
        }
        _ => None,
    };
    Ok(ClassificationReport {
        kernel: kernel.describe(),
        universal: classify_universal(kernel),
        characteristic: classify_characteristic(kernel),
        c0_universal: classify_c0_universal(kernel),
        pollard,
        muntz,
    })
}

// =============================================================================
// Pollard diagnostic
// =============================================================================

/// Numeric corroboration of a weight's declared density flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PollardReport {
    pub weight: &'static str,
    /// ω(x) > 0 everywhere, declared and spot-checked on a sign grid.
    pub condition1_positive: bool,
    /// ∫ log ω/(1+x²) dx = −∞, declared and cross-checked against partial integrals.
    pub condition2_log_divergence: TriState,
    /// (T, ∫_{−T}^{T} log ω(x)/(1+x²) dx) at growing half-widths.
    pub partial_log_integrals: Vec<(f64, f64)>,
    /// Bounded polynomial multiples pₙω → 1 exist, via the declared witness family.
    pub condition3_bounded_approx: TriState,
    pub witness: Option<&'static str>,
    /// sup over the check grid of |pₙ(x)ω(x) − 1| at growing n.
    pub witness_sup_errors: Vec<f64>,
    pub overall: TriState,
}

/// Check the three weighted-density conditions for ω: positivity, log-integral
/// divergence, and bounded inverse polynomial approximation. Declared flags are
/// corroborated numerically where possible; an outright refutation raises
/// [`ClassifyError::FlagContradiction`].
pub fn check_pollard(weight: &WeightSpec, window: f64, n_terms: u32) -> Result<PollardReport> {
    assert!(window > 0.0, "pollard window must be positive");
    let condition1 = verify_positivity(
        weight.positive_everywhere(),
        |x| weight.eval(x),
        window,
        weight.name(),
    )?;

    // Partial integrals at T = window, 10·window, 100·window; only meaningful when ω
    // never vanishes (log ω is finite everywhere).
    let condition2 = weight.log_integral_diverges();
    let trace = if condition1 {
        let ts = [window, 10.0 * window, 100.0 * window];
        ts.iter()
            .map(|&t| (t, log_weight_integral(weight, t)))
            .collect()
    } else {
        Vec::new()
    };
    verify_log_trend(condition2, &trace, weight.name())?;

    let condition3 = weight.bounded_inverse_approx();
    let witness = weight.approx_witness();
    let sup_errors = match witness {
        Some(w) => witness_errors(weight, w, n_terms),
        None => Vec::new(),
    };
    verify_witness_convergence(condition3, &sup_errors, weight.name())?;

    Ok(PollardReport {
        weight: weight.name(),
        condition1_positive: condition1,
        condition2_log_divergence: condition2,
        partial_log_integrals: trace,
        condition3_bounded_approx: condition3,
        witness: witness.map(|w| w.name()),
        witness_sup_errors: sup_errors,
        overall: TriState::from_bool(condition1)
            .and(condition2)
            .and(condition3),
    })
}

/// Spot-check a declared positivity flag on a sign grid over [−window, window].
fn verify_positivity(
    declared: bool,
    weight: impl Fn(f64) -> f64,
    window: f64,
    name: &str,
) -> Result<bool> {
    if declared {
        let n = 1001;
        for i in 0..n {
            let x = -window + 2.0 * window * i as f64 / (n - 1) as f64;
            if weight(x) <= 0.0 {
                return Err(ClassifyError::FlagContradiction(format!(
                    "{name} declared positive everywhere but vanishes at x = {x}"
                )));
            }
        }
    }
    Ok(declared)
}

/// Trapezoid value of ∫_{−T}^{T} log ω(x)/(1+x²) dx using the analytic log of the
/// weight (stable where ω underflows).
fn log_weight_integral(weight: &WeightSpec, t: f64) -> f64 {
    let n = 40_001;
    let h = 2.0 * t / (n - 1) as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let x = -t + h * i as f64;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        sum += w * log_weight(weight, x) / (1.0 + x * x);
    }
    sum * h
}

/// log ω(x) in closed form per family, avoiding exp-then-log underflow.
fn log_weight(weight: &WeightSpec, x: f64) -> f64 {
    use crate::kernels::WeightFamily::*;
    match weight.family() {
        Gaussian => -x * x,
        ExpAbs => -x.abs(),
        CompactBump => {
            if x.abs() < 1.0 {
                -1.0 / (1.0 - x * x)
            } else {
                f64::NEG_INFINITY
            }
        }
        RationalDecay => -(1.0 + x * x).ln(),
    }
}

/// A declared-divergent log-integral must show monotone decrease whose last decrement
/// is not collapsing (ratio > 0.2 of the previous one); a declared-convergent one must
/// show shrinking decrements.
fn verify_log_trend(declared: TriState, trace: &[(f64, f64)], name: &str) -> Result<()> {
    if trace.len() < 3 {
        return Ok(());
    }
    let d1 = trace[1].1 - trace[0].1;
    let d2 = trace[2].1 - trace[1].1;
    match declared {
        TriState::Yes => {
            if !(d1 < 0.0 && d2 < 0.0 && d2.abs() > 0.2 * d1.abs()) {
                return Err(ClassifyError::FlagContradiction(format!(
                    "{name} declared log-integral divergent but partial integrals \
                     {trace:?} stop decreasing"
                )));
            }
        }
        TriState::No => {
            if d2.abs() >= d1.abs() {
                return Err(ClassifyError::FlagContradiction(format!(
                    "{name} declared log-integral convergent but decrements grow: \
                     {trace:?}"
                )));
            }
        }
        TriState::Unknown => {}
    }
    Ok(())
}

/// sup |pₙ(x)ω(x) − 1| over a fixed compact grid, at n = n_terms/4, /2, and n_terms.
fn witness_errors(weight: &WeightSpec, witness: ApproxWitness, n_terms: u32) -> Vec<f64> {
    let schedule = [(n_terms / 4).max(1), (n_terms / 2).max(1), n_terms.max(1)];
    let half_width = 2.5;
    let n = 501;
    schedule
        .iter()
        .map(|&terms| {
            let mut sup: f64 = 0.0;
            for i in 0..n {
                let x = -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
                sup = sup.max((witness.eval(terms, x) * weight.eval(x) - 1.0).abs());
            }
            sup
        })
        .collect()
}

/// A declared-Yes bounded approximation must show nonincreasing sup errors with real
/// improvement (or outright convergence) over the schedule.
fn verify_witness_convergence(declared: TriState, errors: &[f64], name: &str) -> Result<()> {
    if declared != TriState::Yes || errors.is_empty() {
        return Ok(());
    }
    let monotone = errors.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let improved = errors[errors.len() - 1] < 1e-6
        || errors[errors.len() - 1] < 0.5 * errors[0];
    if !(monotone && improved) {
        return Err(ClassifyError::FlagContradiction(format!(
            "{name} declared a bounded inverse approximation but witness sup errors \
             {errors:?} do not converge"
        )));
    }
    Ok(())
}

// =============================================================================
// Müntz diagnostic
// =============================================================================

/// Partial reciprocal sums over the supported exponents, split by parity, with the
/// symbolically decided divergence flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuntzReport {
    pub horizon: u32,
    pub even_partial_sum: f64,
    pub odd_partial_sum: f64,
    pub even_diverges: TriState,
    pub odd_diverges: TriState,
}

/// Compute Σ 1/n over the supported even and odd exponents n ∈ [1, horizon]. The
/// divergence flags come from the support descriptor alone; the partial sums are
/// corroborating diagnostics, not the decision procedure.
pub fn muntz_gap_analysis(coeffs: &CoefficientSequence, horizon: u32) -> MuntzReport {
    assert!(horizon >= 1, "muntz horizon must be at least 1");
    let support = coeffs.support();
    let mut even = 0.0;
    let mut odd = 0.0;
    for n in 1..=horizon {
        if support.contains(n) {
            let term = 1.0 / n as f64;
            if n % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
        }
    }
    MuntzReport {
        horizon,
        even_partial_sum: even,
        odd_partial_sum: odd,
        even_diverges: support.parity_sum_diverges(Parity::Even),
        odd_diverges: support.parity_sum_diverges(Parity::Odd),
    }
}
