//! Series-defined kernels: coefficient sequences for (weighted) polynomial kernels
//! K(x,y) = Σ αₙ xⁿyⁿ and K_ω(x,y) = Σ αₙ ω(x)xⁿ ω(y)yⁿ, weight families with their
//! density-of-polynomials flags, and explicit feature sequences K(x,y) = Σ φₙ(x)φₙ(y).

use crate::TriState;

use super::{KernelError, Result};

// =============================================================================
// Coefficient sequences
// =============================================================================

/// Named analytic coefficient families n ↦ αₙ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientFamily {
    /// αₙ = 1/n!, the exponential series.
    Exponential,
    /// αₙ = ratioⁿ with ratio in (0, 1).
    Geometric { ratio: f64 },
}

impl CoefficientFamily {
    fn value(&self, n: u32) -> f64 {
        match self {
            CoefficientFamily::Exponential => (0..n).fold(1.0, |acc, k| acc / (k + 1) as f64),
            CoefficientFamily::Geometric { ratio } => ratio.powi(n as i32),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoefficientFamily::Exponential => "exponential",
            CoefficientFamily::Geometric { .. } => "geometric",
        }
    }
}

/// Which indices n ∈ ℤ₊ carry a nonzero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexSupport {
    Full,
    /// All of ℤ₊ except the listed indices.
    FiniteComplement(Vec<u32>),
    EvenOnly,
    OddOnly,
    /// Exactly the listed indices.
    Explicit(Vec<u32>),
    /// {baseᵏ : k ≥ 0}, a geometric gap sequence.
    Lacunary { base: u32 },
}

/// Parity classes of the positive exponents, the two halves of the density criterion
/// Σ 1/n = ∞ over even and over odd support indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Parity {
    Even,
    Odd,
}

impl IndexSupport {
    pub fn validate(&self) -> Result<()> {
        if let IndexSupport::Lacunary { base } = self {
            if *base < 2 {
                return Err(KernelError::InvalidParameter(
                    "lacunary base must be at least 2".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn contains(&self, n: u32) -> bool {
        match self {
            IndexSupport::Full => true,
            IndexSupport::FiniteComplement(excluded) => !excluded.contains(&n),
            IndexSupport::EvenOnly => n.is_multiple_of(2),
            IndexSupport::OddOnly => n % 2 == 1,
            IndexSupport::Explicit(indices) => indices.contains(&n),
            IndexSupport::Lacunary { base } => {
                let mut p: u64 = 1;
                let (n, base) = (n as u64, *base as u64);
                while p < n {
                    p *= base;
                }
                p == n
            }
        }
    }

    /// Whether Σ 1/n over the support's indices of the given parity (n ≥ 1) diverges.
    /// Decidable for every named support: full and cofinite supports keep a harmonic
    /// tail in both parities; single-parity supports empty the other sum; explicit and
    /// lacunary supports have convergent (finite or geometric-gap) sums.
    pub fn parity_sum_diverges(&self, parity: Parity) -> TriState {
        match (self, parity) {
            (IndexSupport::Full, _) | (IndexSupport::FiniteComplement(_), _) => TriState::Yes,
            (IndexSupport::EvenOnly, Parity::Even) => TriState::Yes,
            (IndexSupport::EvenOnly, Parity::Odd) => TriState::No,
            (IndexSupport::OddOnly, Parity::Odd) => TriState::Yes,
            (IndexSupport::OddOnly, Parity::Even) => TriState::No,
            (IndexSupport::Explicit(_), _) | (IndexSupport::Lacunary { .. }, _) => TriState::No,
        }
    }

    /// Whether ℤ₊ ∖ support is finite.
    pub fn complement_is_finite(&self) -> bool {
        matches!(self, IndexSupport::Full | IndexSupport::FiniteComplement(_))
    }

    pub fn describe(&self) -> String {
        match self {
            IndexSupport::Full => "all indices".into(),
            IndexSupport::FiniteComplement(excluded) => {
                format!("all indices except {excluded:?}")
            }
            IndexSupport::EvenOnly => "even indices only".into(),
            IndexSupport::OddOnly => "odd indices only".into(),
            IndexSupport::Explicit(indices) => format!("exactly the indices {indices:?}"),
            IndexSupport::Lacunary { base } => format!("the lacunary powers of {base}"),
        }
    }
}

/// Default truncation order for series-kernel partial sums.
pub const DEFAULT_TRUNCATION_ORDER: u32 = 40;

/// A nonnegative coefficient sequence αₙ from a named family, zeroed off a declared
/// index support, evaluated as partial sums up to a truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    family: CoefficientFamily,
    support: IndexSupport,
    truncation_order: u32,
}

impl CoefficientSequence {
    pub fn new(family: CoefficientFamily, support: IndexSupport) -> Result<Self> {
        support.validate()?;
        if let CoefficientFamily::Geometric { ratio } = family {
            if !(0.0 < ratio && ratio < 1.0) {
                return Err(KernelError::InvalidParameter(
                    "geometric ratio must lie in (0, 1)".into(),
                ));
            }
        }
        Ok(Self {
            family,
            support,
            truncation_order: DEFAULT_TRUNCATION_ORDER,
        })
    }

    pub fn with_truncation(mut self, order: u32) -> Self {
        self.truncation_order = order;
        self
    }

    /// αₙ: the family value on the support, exactly zero off it.
    pub fn alpha(&self, n: u32) -> f64 {
        if self.support.contains(n) {
            self.family.value(n)
        } else {
            0.0
        }
    }

    pub fn family(&self) -> CoefficientFamily {
        self.family
    }

    pub fn support(&self) -> &IndexSupport {
        &self.support
    }

    pub fn truncation_order(&self) -> u32 {
        self.truncation_order
    }

    /// Whether α₀ > 0, i.e. the constant function lies in the kernel's feature span.
    pub fn alpha0_positive(&self) -> bool {
        self.alpha(0) > 0.0
    }

    /// Whether Σ αₙ zⁿ is entire. The exponential family always is; a geometric family
    /// has finite convergence radius unless the support is a finite explicit list.
    pub fn is_entire(&self) -> bool {
        match self.family {
            CoefficientFamily::Exponential => true,
            CoefficientFamily::Geometric { .. } => {
                matches!(self.support, IndexSupport::Explicit(_))
            }
        }
    }

    /// The supported indices up to and including `up_to`.
    pub fn supported_indices(&self, up_to: u32) -> Vec<u32> {
        (0..=up_to).filter(|&n| self.support.contains(n)).collect()
    }
}

// =============================================================================
// Weight families
// =============================================================================

/// Polynomial families pₙ certifying that bounded polynomial multiples of ω approximate
/// 1: pₙ(x)·ω(x) → 1 pointwise with a uniform bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApproxWitness {
    /// pₙ(x) = Σ_{k≤n} x^{2k}/k!, the even partial sums of e^{x²}; pₙ·e^{−x²} ↑ 1.
    ExpEvenPartialSums,
    /// The single polynomial 1 + x², which multiplies 1/(1+x²) to exactly 1.
    FixedQuadratic,
}

impl ApproxWitness {
    /// Evaluate the n-th witness polynomial at x.
    pub fn eval(&self, n: u32, x: f64) -> f64 {
        match self {
            ApproxWitness::ExpEvenPartialSums => {
                let x2 = x * x;
                let mut term = 1.0;
                let mut sum = 1.0;
                for k in 1..=n {
                    term *= x2 / k as f64;
                    sum += term;
                }
                sum
            }
            ApproxWitness::FixedQuadratic => 1.0 + x * x,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ApproxWitness::ExpEvenPartialSums => "exp-even-partial-sums",
            ApproxWitness::FixedQuadratic => "fixed-quadratic",
        }
    }
}

/// Named continuous nonnegative weight families ω, each carrying the decidable flags
/// used by the weighted-polynomial classification rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFamily {
    /// ω(x) = e^{−x²}.
    Gaussian,
    /// ω(x) = e^{−|x|}.
    ExpAbs,
    /// ω(x) = e^{−1/(1−x²)} on |x| < 1, zero outside.
    CompactBump,
    /// ω(x) = 1/(1+x²).
    RationalDecay,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    family: WeightFamily,
}

impl WeightSpec {
    pub fn new(family: WeightFamily) -> Self {
        Self { family }
    }

    pub fn family(&self) -> WeightFamily {
        self.family
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.family {
            WeightFamily::Gaussian => (-x * x).exp(),
            WeightFamily::ExpAbs => (-x.abs()).exp(),
            WeightFamily::CompactBump => {
                if x.abs() < 1.0 {
                    (-1.0 / (1.0 - x * x)).exp()
                } else {
                    0.0
                }
            }
            WeightFamily::RationalDecay => 1.0 / (1.0 + x * x),
        }
    }

    /// Whether ω(x) > 0 for every x.
    pub fn positive_everywhere(&self) -> bool {
        !matches!(self.family, WeightFamily::CompactBump)
    }

    /// Whether ∫ log ω(x)/(1+x²) dx = −∞. Gaussian (−x² numerator) and exponential
    /// (−|x|, logarithmic growth of the partial integrals) diverge; a weight vanishing
    /// on a set of positive measure diverges trivially; the rational-decay integrand
    /// −log(1+x²)/(1+x²) integrates to a finite value.
    pub fn log_integral_diverges(&self) -> TriState {
        match self.family {
            WeightFamily::Gaussian | WeightFamily::ExpAbs | WeightFamily::CompactBump => {
                TriState::Yes
            }
            WeightFamily::RationalDecay => TriState::No,
        }
    }

    /// Whether bounded polynomial multiples pₙω → 1 exist, with the certifying family
    /// when known. A compactly supported ω admits none (pₙω vanishes off the support);
    /// for e^{−|x|} no named witness is declared, so the flag stays undecided.
    pub fn approx_witness(&self) -> Option<ApproxWitness> {
        match self.family {
            WeightFamily::Gaussian => Some(ApproxWitness::ExpEvenPartialSums),
            WeightFamily::RationalDecay => Some(ApproxWitness::FixedQuadratic),
            WeightFamily::ExpAbs | WeightFamily::CompactBump => None,
        }
    }

    pub fn bounded_inverse_approx(&self) -> TriState {
        match self.family {
            WeightFamily::Gaussian | WeightFamily::RationalDecay => TriState::Yes,
            WeightFamily::ExpAbs => TriState::Unknown,
            WeightFamily::CompactBump => TriState::No,
        }
    }

    /// All named families are even and nonincreasing on [0, ∞).
    pub fn even_nonincreasing(&self) -> bool {
        true
    }

    /// sup over ℝ of ω(x)·|x|ⁿ, or None when unbounded. Gaussian: maximise tⁿ/²e^{−t}
    /// at t = n/2. ExpAbs: maximise at |x| = n. CompactBump: crude bound sup ω = e^{−1}
    /// since |x| < 1 on the support. RationalDecay: unbounded from n = 3 on.
    pub fn sup_weighted_monomial(&self, n: u32) -> Option<f64> {
        let nf = n as f64;
        match self.family {
            WeightFamily::Gaussian => Some(if n == 0 {
                1.0
            } else {
                (nf / (2.0 * std::f64::consts::E)).powf(nf / 2.0)
            }),
            WeightFamily::ExpAbs => Some(if n == 0 {
                1.0
            } else {
                (nf / std::f64::consts::E).powf(nf)
            }),
            WeightFamily::CompactBump => Some((-1.0f64).exp()),
            WeightFamily::RationalDecay => match n {
                0 | 2 => Some(1.0),
                1 => Some(0.5),
                _ => None,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            WeightFamily::Gaussian => "gaussian",
            WeightFamily::ExpAbs => "exp-abs",
            WeightFamily::CompactBump => "compact-bump",
            WeightFamily::RationalDecay => "rational-decay",
        }
    }
}

// =============================================================================
// Explicit feature sequences
// =============================================================================

/// A single named feature function with a declared sup bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureFn {
    Constant { amp: f64 },
    Cosine { freq: f64, amp: f64 },
    Sine { freq: f64, amp: f64 },
}

impl FeatureFn {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FeatureFn::Constant { amp } => *amp,
            FeatureFn::Cosine { freq, amp } => amp * (freq * x).cos(),
            FeatureFn::Sine { freq, amp } => amp * (freq * x).sin(),
        }
    }

    /// λₙ with |φₙ(x)| ≤ λₙ on all of ℝ, sharp for these families.
    pub fn sup_bound(&self) -> f64 {
        match self {
            FeatureFn::Constant { amp }
            | FeatureFn::Cosine { amp, .. }
            | FeatureFn::Sine { amp, .. } => amp.abs(),
        }
    }
}

/// A finite list of bounded features defining K(x,y) = Σ φₙ(x)φₙ(y), with the squared
/// tail Σ_{n ≥ len} λₙ² of the declared infinite family (zero for explicit lists).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    features: Vec<FeatureFn>,
    tail_sq_bound: f64,
}

impl FeatureSequence {
    /// An explicit finite feature list; the list is the whole kernel, so the tail is 0.
    pub fn explicit(features: Vec<FeatureFn>) -> Result<Self> {
        if features.is_empty() {
            return Err(KernelError::InvalidParameter(
                "feature sequence must be nonempty".into(),
            ));
        }
        for f in &features {
            if !f.sup_bound().is_finite() {
                return Err(KernelError::InvalidParameter(
                    "feature sup bound must be finite".into(),
                ));
            }
        }
        Ok(Self {
            features,
            tail_sq_bound: 0.0,
        })
    }

    /// The damped cosine family φₖ(x) = rateᵏ·cos(kx) truncated at `count` terms, with
    /// geometric tail Σ_{k≥count} rate^{2k} = rate^{2·count}/(1−rate²).
    pub fn damped_cosines(count: u32, rate: f64) -> Result<Self> {
        if count == 0 {
            return Err(KernelError::InvalidParameter(
                "damped cosine family needs at least one term".into(),
            ));
        }
        if !(0.0 < rate && rate < 1.0) {
            return Err(KernelError::InvalidParameter(
                "damped cosine rate must lie in (0, 1)".into(),
            ));
        }
        let features = (0..count)
            .map(|k| FeatureFn::Cosine {
                freq: k as f64,
                amp: rate.powi(k as i32),
            })
            .collect();
        let tail_sq_bound = rate.powi(2 * count as i32) / (1.0 - rate * rate);
        Ok(Self {
            features,
            tail_sq_bound,
        })
    }

    pub fn features(&self) -> &[FeatureFn] {
        &self.features
    }

    pub fn tail_sq_bound(&self) -> f64 {
        self.tail_sq_bound
    }

    /// Partial sum of the sup bounds, the certificate that Σλₙ is finite.
    pub fn bound_partial_sum(&self) -> f64 {
        self.features.iter().map(|f| f.sup_bound()).sum()
    }
}
