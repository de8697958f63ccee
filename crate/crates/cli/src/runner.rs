//! Orchestration: load and validate a run config, apply command-line overrides,
//! execute the selected actions in declaration order, and write reports.
//!
//! Exit-code contract: 0 when every configured pass/fail threshold is met, 2 when any
//! probe flag fails, 1 on any error (unparsable config, unknown family, invalid
//! values, or probe preconditions such as a gap meeting the spectral support).

use std::path::PathBuf;

use anyhow::{bail, Context};

use kernelscope_core::classify::{classify_all, classify_characteristic};
use kernelscope_core::kernels::KernelSpec;
use kernelscope_core::probe::basis::{exponential_completeness_probe, muntz_probe, SweepSettings};
use kernelscope_core::probe::dense::{denseness_probe, DensenessProbeConfig};
use kernelscope_core::probe::mmd::{mmd_injectivity_probe, MmdExpectation, MmdPair};
use kernelscope_core::probe::witness::{witness_gap_measure, witness_probe, WitnessProbeConfig};
use kernelscope_core::probe::{CurveExpectation, ProbeReport};

use crate::config::{
    self, parse_targets, ActionName, ExpectName, MmdExpectName, RunConfig,
};
use crate::report::{render_summary, write_outputs, FullReport};

/// Which subset of the configured actions a subcommand selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Classification only.
    Classify,
    /// The configured probe actions only.
    Probe,
    /// Exactly the configured action list.
    Report,
}

/// One resolved CLI invocation.
#[derive(Debug)]
pub struct Invocation {
    pub mode: Mode,
    pub config_path: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub quiet: bool,
}

/// Environment variable naming the default output directory.
pub const OUT_ENV_VAR: &str = "KERNELSCOPE_OUT";

fn resolve_out_dir(flag: &Option<PathBuf>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var(OUT_ENV_VAR) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from(".")
}

/// Loads, runs, writes, and summarizes one invocation; returns the exit code.
pub fn execute(inv: &Invocation) -> anyhow::Result<i32> {
    let text = std::fs::read_to_string(&inv.config_path)
        .with_context(|| format!("reading config {}", inv.config_path.display()))?;
    let mut config = config::parse_config(&text)
        .with_context(|| format!("in config {}", inv.config_path.display()))?;
    apply_overrides(&mut config, inv);

    let kernel = config::build_kernel(&config.kernel)?;
    let stem = inv
        .config_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());

    let actions: Vec<ActionName> = match inv.mode {
        Mode::Classify => vec![ActionName::Classify],
        Mode::Probe => {
            let probes: Vec<ActionName> = config
                .actions
                .run
                .iter()
                .copied()
                .filter(|a| *a != ActionName::Classify)
                .collect();
            if probes.is_empty() {
                bail!("config {} declares no probe actions", inv.config_path.display());
            }
            probes
        }
        Mode::Report => config.actions.run.clone(),
    };

    let mut classification = None;
    let mut probes: Vec<ProbeReport> = Vec::new();
    for action in &actions {
        match action {
            ActionName::Classify => {
                classification = Some(classify_all(&kernel).context("classification failed")?);
            }
            ActionName::ProbeDense => probes.push(run_dense(&kernel, &config)?),
            ActionName::ProbeWitness => probes.push(run_witness(&kernel, &config)?),
            ActionName::ProbeMmd => probes.push(run_mmd(&kernel, &config)?),
            ActionName::ProbeExp => probes.push(run_exp(&kernel, &config)?),
            ActionName::ProbeMuntz => probes.push(run_muntz(&kernel, &config)?),
        }
    }

    let passed = probes.iter().all(|p| p.passed);
    let report = FullReport {
        config: stem,
        family: config.kernel.family.clone(),
        kernel: kernel.describe(),
        seed: config.seed,
        classification,
        probes,
        passed,
    };

    let out_dir = resolve_out_dir(&inv.out);
    let written = write_outputs(&report, &out_dir)?;
    if !inv.quiet {
        print!("{}", render_summary(&report, &written));
    }
    Ok(report.exit_code())
}

fn apply_overrides(config: &mut RunConfig, inv: &Invocation) {
    if let Some(seed) = inv.seed {
        config.seed = seed;
    }
    if let Some(grid) = inv.grid {
        if let Some(dense) = &mut config.probe.dense {
            dense.evaluation_grid_size = grid;
        }
        if let Some(exp) = &mut config.probe.exp {
            exp.evaluation_grid_size = grid;
        }
        if let Some(muntz) = &mut config.probe.muntz {
            muntz.evaluation_grid_size = grid;
        }
    }
}

fn expectation(expect: ExpectName) -> CurveExpectation {
    match expect {
        ExpectName::Converge => CurveExpectation::Converge,
        ExpectName::Plateau => CurveExpectation::Plateau,
    }
}

fn run_dense(kernel: &KernelSpec, config: &RunConfig) -> anyhow::Result<ProbeReport> {
    let section = config.probe.dense.as_ref().expect("validated at parse time");
    let probe_config = DensenessProbeConfig {
        interval: section.interval,
        targets: parse_targets("probe.dense.targets", &section.targets)?,
        center_counts: section.center_counts.clone(),
        evaluation_grid_size: section.evaluation_grid_size,
        ridge: section.ridge,
        convergence_tol: section.convergence_tol,
        expect: expectation(section.expect),
    };
    denseness_probe(kernel, &probe_config).context("probe-dense failed")
}

fn run_witness(kernel: &KernelSpec, config: &RunConfig) -> anyhow::Result<ProbeReport> {
    let section = config.probe.witness.as_ref().expect("validated at parse time");
    let probe_config = WitnessProbeConfig {
        gap: section.gap,
        truncation: section.truncation,
        grid_size: section.grid_size,
        support_samples: section.support_samples,
        seed: config.seed,
        x_range: section.x_range,
        x_points: section.x_points,
    };
    witness_probe(kernel, &probe_config).context("probe-witness failed")
}

fn run_mmd(kernel: &KernelSpec, config: &RunConfig) -> anyhow::Result<ProbeReport> {
    let section = config.probe.mmd.as_ref().expect("validated at parse time");
    let mut pairs = Vec::new();
    for (i, pair) in section.pairs.iter().enumerate() {
        let p = config::build_probability(&format!("probe.mmd.pairs[{i}].p"), &pair.p)?;
        let q = config::build_probability(&format!("probe.mmd.pairs[{i}].q"), &pair.q)?;
        let expect = match pair.expect {
            MmdExpectName::Separates => MmdExpectation::Separates,
            MmdExpectName::NearZero => MmdExpectation::NearZero,
            MmdExpectName::Observe => MmdExpectation::Observe,
        };
        pairs.push(MmdPair::new(pair.label.clone(), p, q, expect));
    }
    if section.include_witness_pair {
        let witness = config.probe.witness.as_ref().expect("validated at parse time");
        let nu = kernel
            .spectral()
            .ok_or_else(|| anyhow::anyhow!("witness pair requires a translation-invariant kernel"))?;
        let mu = witness_gap_measure(nu, witness.gap, witness.truncation, witness.grid_size)
            .context("witness construction for the MMD pair failed")?;
        let (_, p, q) = mu
            .to_probability_pair()
            .context("normalizing the witness pair")?;
        pairs.push(MmdPair::new("witness-pair", p, q, MmdExpectation::NearZero));
    }
    let characteristic = classify_characteristic(kernel);
    mmd_injectivity_probe(kernel, &pairs, &characteristic).context("probe-mmd failed")
}

fn run_exp(kernel: &KernelSpec, config: &RunConfig) -> anyhow::Result<ProbeReport> {
    let section = config.probe.exp.as_ref().expect("validated at parse time");
    let Some((family, kernel_count)) = config::sequence_family_of(kernel) else {
        bail!("probe-exp requires a kernel whose spectral support is a frequency sequence");
    };
    let count = section.frequency_count.unwrap_or(kernel_count);
    if count == 0 {
        bail!("probe-exp frequency count must be positive");
    }
    let lambdas: Vec<f64> = (1..=count).map(|n| family.lambda(n)).collect();
    let settings = SweepSettings {
        interval: section.interval,
        evaluation_grid_size: section.evaluation_grid_size,
        ridge: section.ridge,
        convergence_tol: section.convergence_tol,
        expect: expectation(section.expect),
    };
    let targets = parse_targets("probe.exp.targets", &section.targets)?;
    exponential_completeness_probe(&lambdas, &section.prefix_counts, &targets, &settings)
            .context("probe-exp failed")
}

fn run_muntz(kernel: &KernelSpec, config: &RunConfig) -> anyhow::Result<ProbeReport> {
    let section = config.probe.muntz.as_ref().expect("validated at parse time");
    let support = match kernel {
        KernelSpec::Polynomial { coeffs } | KernelSpec::WeightedPolynomial { coeffs, .. } => {
            coeffs.support().clone()
        }
        _ => bail!("probe-muntz requires a polynomial or weighted-polynomial kernel"),
    };
    let settings = SweepSettings {
        interval: section.interval,
        evaluation_grid_size: section.evaluation_grid_size,
        ridge: section.ridge,
        convergence_tol: section.convergence_tol,
        expect: expectation(section.expect),
    };
    let targets = parse_targets("probe.muntz.targets", &section.targets)?;
    muntz_probe(&support, &section.horizons, &targets, &settings)
            .context("probe-muntz failed")
}
