//! Mean-embedding injectivity tables.
//!
//! For each labelled pair (P, Q) the probe records the squared mean-embedding
//! distance MMD²(P, Q) = ‖∫K(·,x)dP − ∫K(·,x)dQ‖² next to the total variation
//! ‖P − Q‖_TV. A kernel is characteristic exactly when MMD separates distinct
//! measures, so for a kernel judged characteristic every well-separated pair must
//! show a strictly positive MMD², while a witness pair (built from a spectral gap)
//! must collapse to numerical zero despite macroscopic total variation.

use serde::Serialize;

use crate::classify::Verdict;
use crate::kernels::KernelSpec;
use crate::measures::ProbabilityMeasure;
use crate::probe::{CheckFlag, MmdRow, ProbeError, ProbeReport, Result};
use crate::TriState;

/// MMD² values below this are treated as numerically zero.
pub const MMD2_ZERO_TOL: f64 = 1e-8;
/// MMD² values above this count as genuine separation.
pub const MMD2_SEPARATION_MIN: f64 = 1e-10;
/// Pairs closer than this in total variation are not asked to separate.
pub const TV_SEPARATION_MIN: f64 = 0.1;

/// What one pair is expected to demonstrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MmdExpectation {
    /// MMD² must exceed [`MMD2_SEPARATION_MIN`] whenever TV ≥ [`TV_SEPARATION_MIN`].
    Separates,
    /// MMD² must stay below [`MMD2_ZERO_TOL`] while TV ≥ [`TV_SEPARATION_MIN`].
    NearZero,
    /// Recorded for information only.
    Observe,
}

/// One labelled measure pair to embed and compare.
#[derive(Debug, Clone)]
pub struct MmdPair {
    pub label: String,
    pub p: ProbabilityMeasure,
    pub q: ProbabilityMeasure,
    pub expect: MmdExpectation,
}

impl MmdPair {
    pub fn new(
        label: impl Into<String>,
        p: ProbabilityMeasure,
        q: ProbabilityMeasure,
        expect: MmdExpectation,
    ) -> Self {
        Self {
            label: label.into(),
            p,
            q,
            expect,
        }
    }
}

/// Tabulates MMD² against total variation for every pair and checks each pair's
/// expectation. `characteristic` is the classification verdict for the kernel: when
/// it is not Yes, `Separates` expectations are demoted to observations (a
/// non-characteristic kernel owes no separation).
pub fn mmd_injectivity_probe(
    kernel: &KernelSpec,
    pairs: &[MmdPair],
    characteristic: &Verdict,
) -> Result<ProbeReport> {
    let started = std::time::Instant::now();
    if pairs.is_empty() {
        return Err(ProbeError::InvalidConfig("no measure pairs given".into()));
    }

    let mut report = ProbeReport::new("probe-mmd");
    for pair in pairs {
        let mmd2 = kernel.mmd2(&pair.p, &pair.q);
        let tv = pair.p.as_signed().sub(pair.q.as_signed())?.total_variation();
        report.mmd_rows.push(MmdRow {
            label: pair.label.clone(),
            mmd2,
            total_variation: tv,
        });

        // Squared norms may round slightly negative; anything beyond that is a bug.
        report.flags.push(CheckFlag::at_least(
            format!("mmd2-nonnegative({})", pair.label),
            mmd2,
            -1e-10,
        ));
        match pair.expect {
            MmdExpectation::Separates => {
                if characteristic.status == TriState::Yes && tv >= TV_SEPARATION_MIN {
                    report.flags.push(CheckFlag::at_least(
                        format!("mmd2-separates({})", pair.label),
                        mmd2,
                        MMD2_SEPARATION_MIN,
                    ));
                }
            }
            MmdExpectation::NearZero => {
                report.flags.push(CheckFlag::at_most(
                    format!("mmd2-near-zero({})", pair.label),
                    mmd2,
                    MMD2_ZERO_TOL,
                ));
                report.flags.push(CheckFlag::at_least(
                    format!("pair-total-variation({})", pair.label),
                    tv,
                    TV_SEPARATION_MIN,
                ));
            }
            MmdExpectation::Observe => {}
        }
    }
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_characteristic;
    use crate::kernels::SpectralMeasure;
    use crate::probe::witness::{witness_gap_measure, DEFAULT_GRID_SIZE, DEFAULT_TRUNCATION};
    use approx::assert_relative_eq;

    fn gaussian_kernel() -> KernelSpec {
        KernelSpec::translation_invariant(SpectralMeasure::gaussian(8.0, 2001).unwrap())
    }

    fn dirac_pair(a: f64, b: f64, expect: MmdExpectation) -> MmdPair {
        MmdPair::new(
            format!("dirac-{a}-vs-{b}"),
            ProbabilityMeasure::dirac(a),
            ProbabilityMeasure::dirac(b),
            expect,
        )
    }

    #[test]
    fn characteristic_kernel_separates_distinct_diracs() {
        let kernel = gaussian_kernel();
        let verdict = classify_characteristic(&kernel);
        let pairs = vec![
            dirac_pair(0.0, 1.0, MmdExpectation::Separates),
            dirac_pair(-2.0, 2.0, MmdExpectation::Separates),
        ];
        let report = mmd_injectivity_probe(&kernel, &pairs, &verdict).unwrap();
        assert!(report.passed, "flags: {:?}", report.flags);
        // Closed form for the unit-bandwidth Gaussian kernel:
        // MMD²(δ_a, δ_b) = 2 − 2·exp(−(a−b)²/2).
        let expected = 2.0 - 2.0 * (-0.5f64).exp();
        assert_relative_eq!(report.mmd_rows[0].mmd2, expected, max_relative = 1e-8);
        assert_relative_eq!(report.mmd_rows[0].total_variation, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn witness_pair_collapses_for_gapped_kernel() {
        let nu = SpectralMeasure::uniform_density(&[(-2.0, -1.0), (1.0, 2.0)], 1.0, 201).unwrap();
        let kernel = KernelSpec::translation_invariant(nu);
        let verdict = classify_characteristic(&kernel);
        assert_eq!(verdict.status, TriState::No);

        let mu = witness_gap_measure(
            kernel.spectral().unwrap(),
            (0.25, 0.75),
            DEFAULT_TRUNCATION,
            DEFAULT_GRID_SIZE,
        )
        .unwrap();
        let (_, p, q) = mu.to_probability_pair().unwrap();
        let pairs = vec![
            MmdPair::new("witness-pair", p, q, MmdExpectation::NearZero),
            // A separation expectation on a non-characteristic kernel is demoted,
            // so this pair cannot fail even though the kernel may not separate it.
            dirac_pair(0.0, 1.0, MmdExpectation::Separates),
        ];
        let report = mmd_injectivity_probe(&kernel, &pairs, &verdict).unwrap();
        assert!(report.passed, "flags: {:?}", report.flags);
        let row = &report.mmd_rows[0];
        assert!(row.mmd2 <= 1e-8, "mmd2 {}", row.mmd2);
        assert!(row.total_variation >= 0.1);
    }

    #[test]
    fn near_zero_expectation_fails_for_separating_kernel() {
        let kernel = gaussian_kernel();
        let verdict = classify_characteristic(&kernel);
        let pairs = vec![dirac_pair(0.0, 1.0, MmdExpectation::NearZero)];
        let report = mmd_injectivity_probe(&kernel, &pairs, &verdict).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn empty_pair_list_is_rejected() {
        let kernel = gaussian_kernel();
        let verdict = classify_characteristic(&kernel);
        assert!(matches!(
            mmd_injectivity_probe(&kernel, &[], &verdict),
            Err(ProbeError::InvalidConfig(_))
        ));
    }
}
