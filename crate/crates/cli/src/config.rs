//! Run configuration: a TOML document naming one kernel, the actions to run against
//! it, and per-probe parameter sections. Unknown keys anywhere are rejected at parse
//! time; family and value errors carry the offending field path.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use kernelscope_core::kernels::{
    CoefficientFamily, CoefficientSequence, FeatureSequence, IndexSupport, KernelSpec,
    SequenceFamily, SpectralMeasure, SupportDescriptor, WeightFamily, WeightSpec,
};
use kernelscope_core::probe::TargetFn;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Syntax or schema violation; the source message includes line and column.
    #[error("config parse error")]
    Parse(#[from] toml::de::Error),
    #[error("unknown kernel family {family:?}; known families: {known}")]
    UnknownFamily { family: String, known: String },
    #[error("invalid value at `{path}`: {message}")]
    InvalidValue { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, ConfigError>;

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Default RNG seed used when neither the config nor the command line sets one.
pub const DEFAULT_SEED: u64 = 42;

// =============================================================================
// Schema
// =============================================================================

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub kernel: KernelSection,
    pub actions: ActionsSection,
    #[serde(default)]
    pub probe: ProbeSections,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub family: String,
    // Family-specific parameters; which of them apply is validated per family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfwidth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excluded: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionsSection {
    pub run: Vec<ActionName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionName {
    Classify,
    ProbeDense,
    ProbeWitness,
    ProbeMmd,
    ProbeExp,
    ProbeMuntz,
}

impl ActionName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ActionName::Classify => "classify",
            ActionName::ProbeDense => "probe-dense",
            ActionName::ProbeWitness => "probe-witness",
            ActionName::ProbeMmd => "probe-mmd",
            ActionName::ProbeExp => "probe-exp",
            ActionName::ProbeMuntz => "probe-muntz",
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSections {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense: Option<DenseSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mmd: Option<MmdSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exp: Option<ExpSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub muntz: Option<MuntzSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectName {
    Converge,
    Plateau,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseSection {
    pub interval: (f64, f64),
    pub targets: Vec<String>,
    pub center_counts: Vec<usize>,
    #[serde(default = "default_eval_grid")]
    pub evaluation_grid_size: usize,
    #[serde(default = "default_ridge")]
    pub ridge: f64,
    #[serde(default = "default_tol")]
    pub convergence_tol: f64,
    #[serde(default = "default_expect")]
    pub expect: ExpectName,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSection {
    pub gap: (f64, f64),
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    #[serde(default = "default_witness_grid")]
    pub grid_size: usize,
    #[serde(default = "default_support_samples")]
    pub support_samples: usize,
    #[serde(default = "default_x_range")]
    pub x_range: (f64, f64),
    #[serde(default = "default_x_points")]
    pub x_points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MmdSection {
    #[serde(default)]
    pub pairs: Vec<PairSection>,
    /// Derive one extra pair from the witness construction (requires the witness
    /// section) and expect its MMD² to vanish.
    #[serde(default)]
    pub include_witness_pair: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSection {
    pub label: String,
    /// Atoms of P as (location, mass) pairs; masses must sum to 1.
    pub p: Vec<(f64, f64)>,
    pub q: Vec<(f64, f64)>,
    #[serde(default = "default_pair_expect")]
    pub expect: MmdExpectName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MmdExpectName {
    Separates,
    NearZero,
    Observe,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpSection {
    /// How many frequencies of the kernel's sequence family to use; defaults to the
    /// kernel's own count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_count: Option<u32>,
    pub prefix_counts: Vec<usize>,
    pub targets: Vec<String>,
    #[serde(default = "default_exp_interval")]
    pub interval: (f64, f64),
    #[serde(default = "default_eval_grid")]
    pub evaluation_grid_size: usize,
    #[serde(default = "default_ridge")]
    pub ridge: f64,
    #[serde(default = "default_tol")]
    pub convergence_tol: f64,
    #[serde(default = "default_expect")]
    pub expect: ExpectName,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuntzSection {
    pub horizons: Vec<u32>,
    pub targets: Vec<String>,
    #[serde(default = "default_muntz_interval")]
    pub interval: (f64, f64),
    #[serde(default = "default_eval_grid")]
    pub evaluation_grid_size: usize,
    #[serde(default = "default_ridge")]
    pub ridge: f64,
    #[serde(default = "default_tol")]
    pub convergence_tol: f64,
    #[serde(default = "default_expect")]
    pub expect: ExpectName,
}

fn default_eval_grid() -> usize {
    kernelscope_core::probe::DEFAULT_EVAL_GRID
}
fn default_ridge() -> f64 {
    kernelscope_core::probe::DEFAULT_RIDGE
}
fn default_tol() -> f64 {
    kernelscope_core::probe::DEFAULT_CONVERGENCE_TOL
}
fn default_expect() -> ExpectName {
    ExpectName::Converge
}
fn default_pair_expect() -> MmdExpectName {
    MmdExpectName::Observe
}
fn default_truncation() -> f64 {
    kernelscope_core::probe::witness::DEFAULT_TRUNCATION
}
fn default_witness_grid() -> usize {
    kernelscope_core::probe::witness::DEFAULT_GRID_SIZE
}
fn default_support_samples() -> usize {
    100
}
fn default_x_range() -> (f64, f64) {
    (-5.0, 5.0)
}
fn default_x_points() -> usize {
    41
}
fn default_exp_interval() -> (f64, f64) {
    (-3.0, 3.0)
}
fn default_muntz_interval() -> (f64, f64) {
    (-1.0, 1.0)
}

// =============================================================================
// Parsing and validation
// =============================================================================

/// Parses and validates a TOML run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text)?;
    validate(&config)?;
    Ok(config)
}

fn validate(config: &RunConfig) -> Result<()> {
    if config.actions.run.is_empty() {
        return Err(invalid("actions.run", "at least one action is required"));
    }
    let mut seen = BTreeSet::new();
    for action in &config.actions.run {
        if !seen.insert(action.as_str()) {
            return Err(invalid(
                "actions.run",
                format!("duplicate action {:?}", action.as_str()),
            ));
        }
    }
    // Every probe action needs its parameter section.
    let need =
        |action: ActionName, present: bool, section: &str| -> Result<()> {
            if config.actions.run.contains(&action) && !present {
                return Err(invalid(
                    section,
                    format!("section required by action {:?}", action.as_str()),
                ));
            }
            Ok(())
        };
    need(ActionName::ProbeDense, config.probe.dense.is_some(), "probe.dense")?;
    need(ActionName::ProbeWitness, config.probe.witness.is_some(), "probe.witness")?;
    need(ActionName::ProbeMmd, config.probe.mmd.is_some(), "probe.mmd")?;
    need(ActionName::ProbeExp, config.probe.exp.is_some(), "probe.exp")?;
    need(ActionName::ProbeMuntz, config.probe.muntz.is_some(), "probe.muntz")?;

    // Registry membership and parameter applicability.
    build_kernel(&config.kernel)?;

    if let Some(dense) = &config.probe.dense {
        check_positive_ridge("probe.dense.ridge", dense.ridge)?;
        check_tol("probe.dense.convergence_tol", dense.convergence_tol)?;
        parse_targets("probe.dense.targets", &dense.targets)?;
    }
    if let Some(exp) = &config.probe.exp {
        check_positive_ridge("probe.exp.ridge", exp.ridge)?;
        check_tol("probe.exp.convergence_tol", exp.convergence_tol)?;
        parse_targets("probe.exp.targets", &exp.targets)?;
    }
    if let Some(muntz) = &config.probe.muntz {
        check_positive_ridge("probe.muntz.ridge", muntz.ridge)?;
        check_tol("probe.muntz.convergence_tol", muntz.convergence_tol)?;
        parse_targets("probe.muntz.targets", &muntz.targets)?;
    }
    if let Some(mmd) = &config.probe.mmd {
        if mmd.include_witness_pair && config.probe.witness.is_none() {
            return Err(invalid(
                "probe.mmd.include_witness_pair",
                "requires the probe.witness section",
            ));
        }
        if mmd.pairs.is_empty() && !mmd.include_witness_pair {
            return Err(invalid("probe.mmd.pairs", "at least one pair is required"));
        }
        for (i, pair) in mmd.pairs.iter().enumerate() {
            for (side, atoms) in [("p", &pair.p), ("q", &pair.q)] {
                let path = format!("probe.mmd.pairs[{i}].{side}");
                build_probability(&path, atoms)?;
            }
        }
    }
    if let Some(witness) = &config.probe.witness {
        if !(witness.gap.0.is_finite() && witness.gap.1.is_finite() && witness.gap.0 < witness.gap.1)
        {
            return Err(invalid("probe.witness.gap", "gap must be finite with lo < hi"));
        }
    }
    Ok(())
}

fn check_positive_ridge(path: &str, ridge: f64) -> Result<()> {
    if !(ridge.is_finite() && ridge >= 0.0) {
        return Err(invalid(path, "ridge must be finite and nonnegative"));
    }
    Ok(())
}

fn check_tol(path: &str, tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(invalid(path, "tolerance must be finite and positive"));
    }
    Ok(())
}

/// Builds the probability measure for an MMD pair side.
pub fn build_probability(
    path: &str,
    atoms: &[(f64, f64)],
) -> Result<kernelscope_core::measures::ProbabilityMeasure> {
    let signed = kernelscope_core::measures::SignedMeasure::new(atoms.to_vec(), None)
        .map_err(|e| invalid(path, e.to_string()))?;
    kernelscope_core::measures::ProbabilityMeasure::new(signed)
        .map_err(|e| invalid(path, e.to_string()))
}

// =============================================================================
// Target parsing
// =============================================================================

/// Parses target names: `constant`, `x`, `x^2`, `x^3`, `sin(Fx)`, `sin^2(Fx)`.
pub fn parse_targets(path: &str, names: &[String]) -> Result<Vec<TargetFn>> {
    if names.is_empty() {
        return Err(invalid(path, "at least one target is required"));
    }
    names.iter().map(|n| parse_target(path, n)).collect()
}

fn parse_target(path: &str, name: &str) -> Result<TargetFn> {
    let freq_of = |inner: &str| -> Option<f64> {
        let body = inner.strip_suffix("x)")?;
        if body.is_empty() {
            return Some(1.0);
        }
        body.parse::<f64>().ok().filter(|f| f.is_finite() && *f > 0.0)
    };
    match name {
        "constant" => Ok(TargetFn::Constant),
        "x" => Ok(TargetFn::Identity),
        "x^2" => Ok(TargetFn::Square),
        "x^3" => Ok(TargetFn::Cube),
        _ => {
            if let Some(rest) = name.strip_prefix("sin^2(") {
                if let Some(freq) = freq_of(rest) {
                    return Ok(TargetFn::SinSq { freq });
                }
            }
            if let Some(rest) = name.strip_prefix("sin(") {
                if let Some(freq) = freq_of(rest) {
                    return Ok(TargetFn::Sin { freq });
                }
            }
            Err(invalid(
                path,
                format!(
                    "unknown target {name:?}; expected constant, x, x^2, x^3, sin(Fx) or sin^2(Fx)"
                ),
            ))
        }
    }
}

// =============================================================================
// Kernel registry
// =============================================================================

const FAMILIES: &[(&str, &[&str])] = &[
    ("gaussian-ti", &["window", "grid_size"]),
    ("sinc-ti", &["halfwidth", "value", "nodes"]),
    ("cosine-ti", &["freq"]),
    ("bandgap-ti", &["inner", "outer", "value", "nodes"]),
    ("n-over-log-ti", &["count"]),
    ("arithmetic-ti", &["count", "step"]),
    ("exp-poly", &["truncation"]),
    ("even-poly", &["truncation"]),
    ("lacunary-poly", &["truncation", "base"]),
    ("gaussian-weighted-poly", &["truncation", "excluded"]),
    ("damped-cosine-hs", &["features", "rate"]),
];

/// Names of all registered kernel families.
pub fn known_families() -> Vec<&'static str> {
    FAMILIES.iter().map(|(name, _)| *name).collect()
}

/// Constructs the kernel named by the section, checking that only parameters
/// applicable to the family are set.
pub fn build_kernel(section: &KernelSection) -> Result<KernelSpec> {
    let allowed = FAMILIES
        .iter()
        .find(|(name, _)| *name == section.family)
        .map(|(_, params)| *params)
        .ok_or_else(|| ConfigError::UnknownFamily {
            family: section.family.clone(),
            known: known_families().join(", "),
        })?;

    let set_fields: &[(&str, bool)] = &[
        ("window", section.window.is_some()),
        ("grid_size", section.grid_size.is_some()),
        ("halfwidth", section.halfwidth.is_some()),
        ("value", section.value.is_some()),
        ("nodes", section.nodes.is_some()),
        ("freq", section.freq.is_some()),
        ("inner", section.inner.is_some()),
        ("outer", section.outer.is_some()),
        ("count", section.count.is_some()),
        ("step", section.step.is_some()),
        ("truncation", section.truncation.is_some()),
        ("base", section.base.is_some()),
        ("excluded", section.excluded.is_some()),
        ("features", section.features.is_some()),
        ("rate", section.rate.is_some()),
    ];
    for (field, is_set) in set_fields {
        if *is_set && !allowed.contains(field) {
            return Err(invalid(
                &format!("kernel.{field}"),
                format!("parameter does not apply to family {:?}", section.family),
            ));
        }
    }

    let kernel_err = |e: kernelscope_core::kernels::KernelError| invalid("kernel", e.to_string());

    match section.family.as_str() {
        "gaussian-ti" => {
            let window = section.window.unwrap_or(8.0);
            let grid = section.grid_size.unwrap_or(2001);
            Ok(KernelSpec::translation_invariant(
                SpectralMeasure::gaussian(window, grid).map_err(kernel_err)?,
            ))
        }
        "sinc-ti" => {
            let h = section.halfwidth.unwrap_or(1.0);
            let value = section.value.unwrap_or(1.0);
            let nodes = section.nodes.unwrap_or(401);
            if !(h.is_finite() && h > 0.0) {
                return Err(invalid("kernel.halfwidth", "must be positive"));
            }
            Ok(KernelSpec::translation_invariant(
                SpectralMeasure::uniform_density(&[(-h, h)], value, nodes).map_err(kernel_err)?,
            ))
        }
        "cosine-ti" => {
            let freq = section.freq.unwrap_or(1.0);
            if !(freq.is_finite() && freq > 0.0) {
                return Err(invalid("kernel.freq", "must be positive"));
            }
            Ok(KernelSpec::translation_invariant(
                SpectralMeasure::from_atoms(
                    vec![(-freq, 0.5), (freq, 0.5)],
                    SupportDescriptor::FiniteSet(vec![-freq, freq]),
                )
                .map_err(kernel_err)?,
            ))
        }
        "bandgap-ti" => {
            let inner = section.inner.unwrap_or(1.0);
            let outer = section.outer.unwrap_or(2.0);
            let value = section.value.unwrap_or(1.0);
            let nodes = section.nodes.unwrap_or(201);
            if !(inner.is_finite() && outer.is_finite() && 0.0 < inner && inner < outer) {
                return Err(invalid("kernel.inner", "bands need 0 < inner < outer"));
            }
            Ok(KernelSpec::translation_invariant(
                SpectralMeasure::uniform_density(
                    &[(-outer, -inner), (inner, outer)],
                    value,
                    nodes,
                )
                .map_err(kernel_err)?,
            ))
        }
        "n-over-log-ti" => {
            let count = section.count.unwrap_or(60);
            Ok(KernelSpec::translation_invariant(
                SpectralMeasure::sequence(SequenceFamily::NOverLog, count).map_err(kernel_err)?,
            ))
        }
        "arithmetic-ti" => {
            let count = section.count.unwrap_or(60);
            let step = section.step.unwrap_or(1.0);
            Ok(KernelSpec::translation_invariant(
                SpectralMeasure::sequence(SequenceFamily::Linear { step }, count)
                    .map_err(kernel_err)?,
            ))
        }
        "exp-poly" | "even-poly" => {
            let support = if section.family == "even-poly" {
                IndexSupport::EvenOnly
            } else {
                IndexSupport::Full
            };
            let coeffs = CoefficientSequence::new(CoefficientFamily::Exponential, support)
                .map_err(kernel_err)?;
            let coeffs = match section.truncation {
                Some(t) => coeffs.with_truncation(t),
                None => coeffs,
            };
            Ok(KernelSpec::polynomial(coeffs))
        }
        "lacunary-poly" => {
            let base = section.base.unwrap_or(2);
            let coeffs = CoefficientSequence::new(
                CoefficientFamily::Exponential,
                IndexSupport::Lacunary { base },
            )
            .map_err(kernel_err)?;
            let coeffs = match section.truncation {
                Some(t) => coeffs.with_truncation(t),
                None => coeffs.with_truncation(64),
            };
            Ok(KernelSpec::polynomial(coeffs))
        }
        "gaussian-weighted-poly" => {
            let excluded = section.excluded.clone().unwrap_or_else(|| vec![3]);
            let coeffs = CoefficientSequence::new(
                CoefficientFamily::Exponential,
                IndexSupport::FiniteComplement(excluded),
            )
            .map_err(kernel_err)?;
            let coeffs = match section.truncation {
                Some(t) => coeffs.with_truncation(t),
                None => coeffs,
            };
            KernelSpec::weighted_polynomial(coeffs, WeightSpec::new(WeightFamily::Gaussian))
                .map_err(kernel_err)
        }
        "damped-cosine-hs" => {
            let features = section.features.unwrap_or(4);
            let rate = section.rate.unwrap_or(0.5);
            Ok(KernelSpec::hilbert_schmidt(
                FeatureSequence::damped_cosines(features, rate).map_err(kernel_err)?,
            ))
        }
        _ => unreachable!("family membership checked above"),
    }
}

/// The sequence family behind a TI kernel built from frequency atoms, if any —
/// the frequency source for the exponential completeness probe.
pub fn sequence_family_of(kernel: &KernelSpec) -> Option<(SequenceFamily, u32)> {
    let nu = kernel.spectral()?;
    match nu.descriptor() {
        SupportDescriptor::SequenceFamily(family) => {
            // Positive-side atom count equals the truncation used at construction.
            let count = nu.atoms().iter().filter(|a| a.location > 0.0).count() as u32;
            Some((family.clone(), count))
        }
        _ => None,
    }
}
