//! Randomized invariants of the public API: Gram positivity and symmetry, Fourier
//! identities, Hahn–Jordan exactness, MMD² consistency with its double-quadrature
//! definition, and the logical consistency of classification verdicts.

use nalgebra::DMatrix;
use proptest::prelude::*;

use kernelscope_core::classify::classify_all;
use kernelscope_core::kernels::{
    CoefficientFamily, CoefficientSequence, FeatureSequence, IndexSupport, KernelSpec,
    SequenceFamily, SpectralMeasure, SupportDescriptor, WeightFamily, WeightSpec,
};
use kernelscope_core::measures::{GriddedDensity, ProbabilityMeasure, SignedMeasure};
use kernelscope_core::TriState;
use num_complex::Complex64;

// =============================================================================
// Generators
// =============================================================================

fn arb_ti_kernel() -> BoxedStrategy<KernelSpec> {
    prop_oneof![
        (6.0..9.0f64, 201usize..601).prop_map(|(w, g)| {
            KernelSpec::translation_invariant(SpectralMeasure::gaussian(w, g).unwrap())
        }),
        prop::collection::vec(0.5..4.0f64, 1..4).prop_map(|freqs| {
            let mut freqs = freqs;
            freqs.sort_by(f64::total_cmp);
            freqs.dedup();
            let share = 0.5 / freqs.len() as f64;
            let mut atoms = Vec::new();
            let mut points = Vec::new();
            for &f in &freqs {
                atoms.push((-f, share));
                atoms.push((f, share));
                points.push(-f);
                points.push(f);
            }
            points.sort_by(f64::total_cmp);
            KernelSpec::translation_invariant(
                SpectralMeasure::from_atoms(atoms, SupportDescriptor::FiniteSet(points)).unwrap(),
            )
        }),
        (0.5..1.5f64, 0.5..1.5f64).prop_map(|(a, width)| {
            let b = a + width;
            KernelSpec::translation_invariant(
                SpectralMeasure::uniform_density(&[(-b, -a), (a, b)], 1.0, 101).unwrap(),
            )
        }),
        (prop_oneof![
            Just(SequenceFamily::NOverLog),
            (0.3..0.9f64).prop_map(|e| SequenceFamily::PowerLaw { exponent: e }),
            (0.5..2.0f64).prop_map(|s| SequenceFamily::Linear { step: s }),
        ], 5u32..25)
            .prop_map(|(family, n_max)| {
                KernelSpec::translation_invariant(
                    SpectralMeasure::sequence(family, n_max).unwrap(),
                )
            }),
    ]
    .boxed()
}

fn arb_index_support() -> BoxedStrategy<IndexSupport> {
    prop_oneof![
        Just(IndexSupport::Full),
        Just(IndexSupport::EvenOnly),
        Just(IndexSupport::OddOnly),
        Just(IndexSupport::FiniteComplement(vec![3])),
        Just(IndexSupport::FiniteComplement(vec![0, 2])),
        Just(IndexSupport::Lacunary { base: 2 }),
        Just(IndexSupport::Explicit(vec![0, 2, 5])),
    ]
    .boxed()
}

fn arb_series_kernel() -> BoxedStrategy<KernelSpec> {
    prop_oneof![
        arb_index_support().prop_map(|s| {
            let coeffs = CoefficientSequence::new(CoefficientFamily::Exponential, s)
                .unwrap()
                .with_truncation(24);
            KernelSpec::polynomial(coeffs)
        }),
        (0.2..0.8f64).prop_map(|ratio| {
            let coeffs = CoefficientSequence::new(
                CoefficientFamily::Geometric { ratio },
                IndexSupport::Explicit(vec![0, 1, 3]),
            )
            .unwrap()
            .with_truncation(24);
            KernelSpec::polynomial(coeffs)
        }),
        arb_index_support().prop_map(|s| {
            let coeffs = CoefficientSequence::new(CoefficientFamily::Exponential, s)
                .unwrap()
                .with_truncation(24);
            KernelSpec::weighted_polynomial(coeffs, WeightSpec::new(WeightFamily::Gaussian))
                .unwrap()
        }),
        (arb_index_support(), prop_oneof![
            Just(WeightFamily::CompactBump),
            Just(WeightFamily::Gaussian)
        ])
            .prop_map(|(s, wf)| {
                let coeffs = CoefficientSequence::new(CoefficientFamily::Exponential, s)
                    .unwrap()
                    .with_truncation(20);
                KernelSpec::weighted_polynomial(coeffs, WeightSpec::new(wf)).unwrap()
            }),
        (2u32..6, 0.2..0.8f64).prop_map(|(count, rate)| {
            KernelSpec::hilbert_schmidt(FeatureSequence::damped_cosines(count, rate).unwrap())
        }),
    ]
    .boxed()
}

fn arb_kernel() -> BoxedStrategy<KernelSpec> {
    prop_oneof![arb_ti_kernel(), arb_series_kernel()].boxed()
}

fn arb_points(max: usize) -> BoxedStrategy<Vec<f64>> {
    prop::collection::vec(-2.5..2.5f64, 1..max)
        .prop_map(|mut pts| {
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            pts
        })
        .boxed()
}

fn arb_signed_measure() -> BoxedStrategy<SignedMeasure> {
    (
        prop::collection::vec(((-3.0..3.0f64), (-1.0..1.0f64)), 0..5),
        prop::option::of((0.5..2.0f64, 0.2..1.5f64)),
    )
        .prop_map(|(atom_pairs, dens)| {
            let density = dens.map(|(halfwidth, amp)| {
                GriddedDensity::sample(-halfwidth, halfwidth, 101, |x| {
                    amp * (3.0 * x).sin() + 0.3 * x
                })
                .unwrap()
            });
            SignedMeasure::new(atom_pairs, density).unwrap()
        })
        .boxed()
}

fn arb_probability_atoms() -> BoxedStrategy<ProbabilityMeasure> {
    prop::collection::vec(((-2.0..2.0f64), (0.01..1.0f64)), 1..6)
        .prop_map(|pairs| {
            let total: f64 = pairs.iter().map(|p| p.1).sum();
            let atoms: Vec<(f64, f64)> = pairs.iter().map(|&(l, m)| (l, m / total)).collect();
            ProbabilityMeasure::new(SignedMeasure::new(atoms, None).unwrap()).unwrap()
        })
        .boxed()
}

// =============================================================================
// Helpers
// =============================================================================

/// MMD² from its definition: the double quadrature of K against (P−Q)⊗(P−Q).
/// Returns the value together with the total absolute term mass for tolerance scaling.
fn double_quadrature_mmd2(
    kernel: &KernelSpec,
    p: &ProbabilityMeasure,
    q: &ProbabilityMeasure,
) -> (f64, f64) {
    let pn = p.as_signed().quadrature_nodes();
    let qn = q.as_signed().quadrature_nodes();
    let cross = |a: &[(f64, f64)], b: &[(f64, f64)]| -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for &(x, wx) in a {
            for &(y, wy) in b {
                let k = kernel.eval(x, y);
                sum += wx * wy * k;
                scale += (wx * wy * k).abs();
            }
        }
        (sum, scale)
    };
    let (pp, s1) = cross(&pn, &pn);
    let (qq, s2) = cross(&qn, &qn);
    let (pq, s3) = cross(&pn, &qn);
    (pp + qq - 2.0 * pq, s1 + s2 + 2.0 * s3)
}

fn check_verdict_consistency(kernel: &KernelSpec) {
    let report = classify_all(kernel).expect("declared flags are honest here");
    let u = report.universal.status;
    let c = report.characteristic.status;
    let c0 = report.c0_universal.status;
    // C₀-universality implies both other properties.
    if c0 == TriState::Yes {
        assert_eq!(c, TriState::Yes, "C0 yes but characteristic {c} for {kernel:?}");
        assert_eq!(u, TriState::Yes, "C0 yes but universal {u} for {kernel:?}");
    }
    // Contrapositives: a definite No below kills C₀-universality.
    if c == TriState::No || u == TriState::No {
        assert_ne!(c0, TriState::Yes, "impossible triple for {kernel:?}");
    }
    // For translation-invariant kernels the two notions coincide.
    if kernel.is_translation_invariant() {
        assert_eq!(c, c0, "characteristic != C0 for TI kernel {kernel:?}");
    }
}

// =============================================================================
// Properties
// =============================================================================

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_matrices_are_symmetric_and_psd(kernel in arb_kernel(), pts in arb_points(20)) {
        let gram = kernel.gram(&pts).unwrap();
        let n = pts.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(gram[i][j], gram[j][i]);
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| gram[i][j]);
        let trace: f64 = (0..n).map(|i| gram[i][i]).sum();
        let min_eig = m.symmetric_eigenvalues().min();
        prop_assert!(
            min_eig >= -1e-8 * (trace.abs() + 1e-12),
            "min eigenvalue {} vs trace {} for {:?}",
            min_eig, trace, kernel
        );
    }

    #[test]
    fn eval_is_symmetric_exactly(kernel in arb_kernel(), x in -2.5..2.5f64, y in -2.5..2.5f64) {
        prop_assert_eq!(kernel.eval(x, y), kernel.eval(y, x));
    }

    #[test]
    fn ti_kernels_depend_only_on_the_difference(
        kernel in arb_ti_kernel(),
        x in -2.0..2.0f64,
        y in -2.0..2.0f64,
        t in -5.0..5.0f64,
    ) {
        let residual = (kernel.eval(x + t, y + t) - kernel.eval(x, y)).abs();
        prop_assert!(residual <= 1e-10, "residual {residual}");
    }

    #[test]
    fn embedding_of_a_dirac_is_a_kernel_section(
        kernel in arb_kernel(),
        x in -2.0..2.0f64,
        y in -2.0..2.0f64,
    ) {
        let delta = SignedMeasure::dirac(x);
        prop_assert_eq!(kernel.embed(&delta, y), kernel.eval(y, x));
    }

    #[test]
    fn mmd2_matches_double_quadrature_and_is_nonnegative(
        kernel in arb_kernel(),
        p in arb_probability_atoms(),
        q in arb_probability_atoms(),
    ) {
        let fast = kernel.mmd2(&p, &q);
        let swapped = kernel.mmd2(&q, &p);
        prop_assert_eq!(fast, swapped);

        let (direct, scale) = double_quadrature_mmd2(&kernel, &p, &q);
        let tol = 1e-12 * scale + 1e-12;
        prop_assert!(
            (fast - direct).abs() <= tol,
            "mmd2 {} vs direct {} (tol {}) for {:?}",
            fast, direct, tol, kernel
        );
        prop_assert!(fast >= -1e-10, "negative mmd2 {fast}");

        let self_dist = kernel.mmd2(&p, &p);
        prop_assert!(self_dist.abs() <= tol, "self mmd2 {self_dist}");
    }

    #[test]
    fn hahn_jordan_parts_are_minimal_and_reconstruct(mu in arb_signed_measure()) {
        let (pos, neg) = mu.hahn_jordan();
        for (a, b) in pos.atoms().iter().zip(neg.atoms()) {
            prop_assert_eq!(a.location, b.location);
            prop_assert!(a.mass >= 0.0 && b.mass >= 0.0);
            prop_assert_eq!(a.mass.min(b.mass), 0.0);
        }
        match (pos.density(), neg.density()) {
            (Some(dp), Some(dn)) => {
                for (vp, vn) in dp.values().iter().zip(dn.values()) {
                    prop_assert!(*vp >= 0.0 && *vn >= 0.0);
                    prop_assert_eq!(vp.min(*vn), 0.0);
                }
            }
            (None, None) => {}
            _ => prop_assert!(false, "positive and negative parts lost grid alignment"),
        }

        // pos − neg gives back every atom mass and density value bit-for-bit.
        let recon = pos.sub(&neg).unwrap();
        prop_assert_eq!(recon.atoms().len(), mu.atoms().len());
        for (r, o) in recon.atoms().iter().zip(mu.atoms()) {
            prop_assert_eq!(r.location, o.location);
            prop_assert_eq!(r.mass, o.mass);
        }
        if let (Some(rd), Some(od)) = (recon.density(), mu.density()) {
            for (rv, ov) in rd.values().iter().zip(od.values()) {
                prop_assert_eq!(rv, ov);
            }
        }

        // Total variation splits across the parts.
        let tv = mu.total_variation();
        let split = pos.total_mass() + neg.total_mass();
        prop_assert!((tv - split).abs() <= 1e-12 * (1.0 + tv));
    }

    #[test]
    fn fourier_transform_identities(mu in arb_signed_measure(), xi in -8.0..8.0f64) {
        let tv = mu.total_variation();
        let val = mu.fourier(xi);
        // Bounded by total variation.
        prop_assert!(val.norm() <= tv + 1e-12);
        // Real measures have conjugate-symmetric transforms.
        let mirrored = mu.fourier(-xi);
        prop_assert!((mirrored - val.conj()).norm() <= 1e-14 * (1.0 + tv));
    }

    #[test]
    fn dirac_fourier_is_a_pure_phase(a in -4.0..4.0f64, xi in -8.0..8.0f64) {
        let delta = SignedMeasure::dirac(a);
        let expected = Complex64::new((a * xi).cos(), -(a * xi).sin());
        prop_assert!((delta.fourier(xi) - expected).norm() <= 1e-14);
    }

    #[test]
    fn probability_pair_round_trips(
        pairs in prop::collection::vec(((-3.0..3.0f64), (0.05..1.0f64)), 2..5),
        signs in prop::collection::vec(prop::bool::ANY, 2..5),
    ) {
        // Build a nonzero measure with exactly cancelling total mass.
        let mut atoms: Vec<(f64, f64)> = pairs
            .iter()
            .zip(&signs)
            .map(|(&(l, m), &s)| (l, if s { m } else { -m }))
            .collect();
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        atoms.push((4.0, -total));
        let mu = SignedMeasure::new(atoms, None).unwrap();
        prop_assume!(mu.total_variation() > 1e-3);

        let (scale, p, q) = mu.to_probability_pair().unwrap();
        prop_assert!(scale > 0.0);
        for ((pa, qa), oa) in p.as_signed().atoms().iter().zip(q.as_signed().atoms()).zip(mu.atoms()) {
            prop_assert_eq!(pa.location, oa.location);
            let recon = scale * (pa.mass - qa.mass);
            prop_assert!(
                (recon - oa.mass).abs() <= 1e-12 * (1.0 + oa.mass.abs()),
                "atom at {} reconstructs to {} from {}",
                oa.location, recon, oa.mass
            );
        }
    }

    #[test]
    fn verdict_triples_are_logically_consistent(kernel in arb_kernel()) {
        check_verdict_consistency(&kernel);
    }

    #[test]
    fn classification_is_deterministic(kernel in arb_kernel()) {
        let a = serde_json::to_string(&classify_all(&kernel).unwrap()).unwrap();
        let b = serde_json::to_string(&classify_all(&kernel).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
