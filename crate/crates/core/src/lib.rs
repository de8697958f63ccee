//! Spectral construction, universality classification, and numerical probing of
//! reproducing kernels on the real line.
//!
//! The crate is organised around one pipeline:
//!
//! - [`measures`] — finite signed Borel measures as atoms plus gridded densities,
//!   with Hahn-Jordan splits, Fourier transforms, and probability normalisation.
//! - [`kernels`] — kernel families built from declarative specs: translation-invariant
//!   kernels via their spectral measure, Hilbert-Schmidt feature sums, and (weighted)
//!   polynomial series; evaluation, Gram matrices, mean embeddings, and MMD².
//! - [`classify`] — a deterministic rule engine that turns the declared structure of a
//!   kernel spec into tri-state verdicts (universal / characteristic / C₀-universal),
//!   each citing the rule that fired.
//! - [`probe`] — desk-scale numerical experiments that corroborate or refute verdicts:
//!   denseness sweeps, MMD injectivity tables, spectral-gap witness measures, and
//!   Müntz / exponential-system approximation curves.
//!
//! With the default `parallel` feature the Gram assembly and probe sweeps fan out over
//! rayon; results are bit-identical to the sequential fallback because parallelism is
//! restricted to order-preserving element-wise maps.

pub mod classify;
pub mod kernels;
pub mod measures;
pub mod probe;

pub(crate) mod par;
pub(crate) mod solve;

use serde::Serialize;

/// Three-valued answer for properties that finite computation can refute but not
/// always certify. `Unknown` is an honest "the declared data does not decide this",
/// never an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    /// True exactly for `Yes`.
    pub fn is_yes(self) -> bool {
        matches!(self, TriState::Yes)
    }

    /// Three-valued conjunction: `No` dominates, then `Unknown`.
    pub fn and(self, other: TriState) -> TriState {
        use TriState::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Unknown, _) | (_, Unknown) => Unknown,
            (Yes, Yes) => Yes,
        }
    }

    /// Lift a decided boolean.
    pub fn from_bool(b: bool) -> TriState {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }
}

impl std::fmt::Display for TriState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TriState::Yes => write!(f, "yes"),
            TriState::No => write!(f, "no"),
            TriState::Unknown => write!(f, "unknown"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::TriState::*;

    #[test]
    fn tristate_and_is_kleene_conjunction() {
        assert_eq!(Yes.and(Yes), Yes);
        assert_eq!(Yes.and(No), No);
        assert_eq!(No.and(Unknown), No, "No must dominate Unknown");
        assert_eq!(Yes.and(Unknown), Unknown);
        assert_eq!(Unknown.and(Unknown), Unknown);
    }
}
