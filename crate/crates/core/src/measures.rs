//! Finite signed Borel measures on ℝ, discretised as point masses plus an optional
//! gridded density integrated by the composite trapezoid rule.
//!
//! These are the dual-space objects of the classification and probe machinery: a
//! measure annihilating every kernel section is a witness against universality, and a
//! zero-mass measure splits through [`SignedMeasure::to_probability_pair`] into the
//! scaled difference of two probability measures.
//!
//! Densities are deliberately grid-bound: values live on a strictly increasing node
//! list and every integral is the trapezoid sum, so quadrature error is controlled by
//! refinement and nothing here pretends to more generality than the probes need.

use num_complex::Complex64;
use thiserror::Error;

/// Atoms closer than this are merged into one at construction, keeping the first
/// location of the run. Enforces the pairwise-distinctness invariant deterministically.
pub const ATOM_MERGE_TOL: f64 = 1e-12;

/// Absolute tolerance under which a total mass counts as zero. Coarser than the
/// trapezoid error of every desk-scale probe in this crate.
pub const MASS_ZERO_TOL: f64 = 1e-8;

/// A probability measure's total mass may deviate from 1 by at most this much.
pub const PROBABILITY_MASS_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("density grid needs at least 2 nodes, got {0}")]
    GridTooSmall(usize),
    #[error("density grid must be strictly increasing at index {0}")]
    GridNotIncreasing(usize),
    #[error("density grid has {grid} nodes but {values} values")]
    GridValueMismatch { grid: usize, values: usize },
    #[error("non-finite number in measure data: {0}")]
    NonFinite(&'static str),
    #[error("total mass {mass:e} exceeds the zero tolerance {tol:e}")]
    NonzeroTotalMass { mass: f64, tol: f64 },
    #[error("measure has zero total variation")]
    ZeroMeasure,
    #[error("probability measure requires nonnegative masses, found {0}")]
    NegativeMass(f64),
    #[error("probability measure total mass {0} is not 1 within {PROBABILITY_MASS_TOL:e}")]
    MassNotOne(f64),
    #[error("measures have different density grids and cannot be combined")]
    IncompatibleGrids,
}

pub type Result<T> = std::result::Result<T, MeasureError>;

/// A point mass `mass · δ_location`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Nonuniform gridded function integrated by the composite trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedDensity {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl GriddedDensity {
    /// Build a density from a strictly increasing grid (≥ 2 nodes) and per-node values.
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(MeasureError::GridTooSmall(grid.len()));
        }
        if grid.len() != values.len() {
            return Err(MeasureError::GridValueMismatch {
                grid: grid.len(),
                values: values.len(),
            });
        }
        if grid.iter().any(|g| !g.is_finite()) {
            return Err(MeasureError::NonFinite("grid node"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MeasureError::NonFinite("density value"));
        }
        for i in 1..grid.len() {
            if grid[i] <= grid[i - 1] {
                return Err(MeasureError::GridNotIncreasing(i));
            }
        }
        Ok(Self { grid, values })
    }

    /// Sample `f` on a uniform grid of `n` nodes over `[a, b]`.
    pub fn sample(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(MeasureError::GridTooSmall(n));
        }
        let h = (b - a) / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoid weight of node `i`: half the span of its adjacent intervals.
    fn node_weight(&self, i: usize) -> f64 {
        let last = self.grid.len() - 1;
        match i {
            0 => (self.grid[1] - self.grid[0]) / 2.0,
            i if i == last => (self.grid[last] - self.grid[last - 1]) / 2.0,
            i => (self.grid[i + 1] - self.grid[i - 1]) / 2.0,
        }
    }

    /// Composite trapezoid integral Σ wᵢ·vᵢ.
    pub fn integral(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| self.node_weight(i) * self.values[i])
            .sum()
    }

    /// Composite trapezoid integral of |values|.
    pub fn abs_integral(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| self.node_weight(i) * self.values[i].abs())
            .sum()
    }

    /// The density as (node, trapezoid weight · value) pairs, so that any linear
    /// functional ∫f·density is Σ f(nodeᵢ)·wᵢ.
    pub fn weighted_nodes(&self) -> Vec<(f64, f64)> {
        (0..self.grid.len())
            .map(|i| (self.grid[i], self.node_weight(i) * self.values[i]))
            .collect()
    }

    fn map_values(&self, f: impl Fn(f64) -> f64) -> GriddedDensity {
        GriddedDensity {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// A finite signed Borel measure on ℝ: point masses plus an optional density part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignedMeasure {
    atoms: Vec<Atom>,
    density: Option<GriddedDensity>,
}

impl SignedMeasure {
    /// Build a measure, merging atoms within [`ATOM_MERGE_TOL`] of each other and
    /// validating the density grid.
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<GriddedDensity>) -> Result<Self> {
        for &(loc, mass) in &atoms {
            if !loc.is_finite() {
                return Err(MeasureError::NonFinite("atom location"));
            }
            if !mass.is_finite() {
                return Err(MeasureError::NonFinite("atom mass"));
            }
        }
        let mut sorted = atoms;
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<Atom> = Vec::with_capacity(sorted.len());
        for (loc, mass) in sorted {
            match merged.last_mut() {
                Some(run) if loc - run.location <= ATOM_MERGE_TOL => run.mass += mass,
                _ => merged.push(Atom {
                    location: loc,
                    mass,
                }),
            }
        }
        Ok(Self {
            atoms: merged,
            density,
        })
    }

    /// The zero measure: no atoms, no density.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The Dirac mass `δ_location`.
    pub fn dirac(location: f64) -> Self {
        Self::new(vec![(location, 1.0)], None).expect("finite dirac atom")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&GriddedDensity> {
        self.density.as_ref()
    }

    /// μ(ℝ): the sum of atom masses plus the trapezoid integral of the density.
    pub fn total_mass(&self) -> f64 {
        let atom_sum: f64 = self.atoms.iter().map(|a| a.mass).sum();
        atom_sum + self.density.as_ref().map_or(0.0, |d| d.integral())
    }

    /// |μ|(ℝ): Σ|massᵢ| plus the trapezoid integral of |density|.
    pub fn total_variation(&self) -> f64 {
        let atom_sum: f64 = self.atoms.iter().map(|a| a.mass.abs()).sum();
        atom_sum + self.density.as_ref().map_or(0.0, |d| d.abs_integral())
    }

    /// Hahn-Jordan split (μ⁺, μ⁻): positive and negative parts taken atom-wise and
    /// node-wise. Both parts keep the full atom/node skeleton of μ so that
    /// μ⁺ − μ⁻ reproduces μ exactly, entry by entry.
    pub fn hahn_jordan(&self) -> (SignedMeasure, SignedMeasure) {
        let plus = SignedMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: a.location,
                    mass: a.mass.max(0.0),
                })
                .collect(),
            density: self.density.as_ref().map(|d| d.map_values(|v| v.max(0.0))),
        };
        let minus = SignedMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: a.location,
                    mass: (-a.mass).max(0.0),
                })
                .collect(),
            density: self
                .density
                .as_ref()
                .map(|d| d.map_values(|v| (-v).max(0.0))),
        };
        (plus, minus)
    }

    /// Split a zero-mass measure as μ = C·(P − Q) with C = μ⁺(ℝ) and P, Q probability
    /// measures. Both parts are normalised by the same C so the reconstruction is exact;
    /// Q's total mass then matches 1 only up to |μ(ℝ)|/C, which the zero-mass
    /// precondition keeps below [`MASS_ZERO_TOL`]/C.
    pub fn to_probability_pair(&self) -> Result<(f64, ProbabilityMeasure, ProbabilityMeasure)> {
        if self.total_variation() == 0.0 {
            return Err(MeasureError::ZeroMeasure);
        }
        let mass = self.total_mass();
        if mass.abs() > MASS_ZERO_TOL {
            return Err(MeasureError::NonzeroTotalMass {
                mass,
                tol: MASS_ZERO_TOL,
            });
        }
        let (plus, minus) = self.hahn_jordan();
        let c = plus.total_mass();
        if c <= 0.0 {
            return Err(MeasureError::ZeroMeasure);
        }
        let p = ProbabilityMeasure::from_nonnegative_part(plus.scale(1.0 / c))?;
        let q = ProbabilityMeasure::from_nonnegative_part(minus.scale(1.0 / c))?;
        Ok((c, p, q))
    }

    /// μ̂(ξ) = ∫ e^{−ixξ} dμ(x): exact sum over atoms plus trapezoid quadrature of the
    /// density. Satisfies |μ̂(ξ)| ≤ |μ|(ℝ) up to quadrature error.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            sum += a.mass * Complex64::new(0.0, -a.location * xi).exp();
        }
        if let Some(d) = &self.density {
            for i in 0..d.grid.len() {
                let w = d.node_weight(i) * d.values[i];
                sum += w * Complex64::new(0.0, -d.grid[i] * xi).exp();
            }
        }
        sum
    }

    /// Discrete view of the measure as (point, effective mass) pairs: atoms as-is and
    /// density nodes carrying their trapezoid weight times value. Any linear functional
    /// ∫f dμ is then Σ f(pᵢ)·wᵢ, consistent with [`Self::total_mass`] and
    /// [`Self::fourier`].
    pub fn quadrature_nodes(&self) -> Vec<(f64, f64)> {
        let mut nodes: Vec<(f64, f64)> =
            self.atoms.iter().map(|a| (a.location, a.mass)).collect();
        if let Some(d) = &self.density {
            nodes.extend((0..d.grid.len()).map(|i| (d.grid[i], d.node_weight(i) * d.values[i])));
        }
        nodes
    }

    /// Scale all masses and density values by `c`.
    pub fn scale(&self, c: f64) -> SignedMeasure {
        SignedMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: a.location,
                    mass: c * a.mass,
                })
                .collect(),
            density: self.density.as_ref().map(|d| d.map_values(|v| c * v)),
        }
    }

    /// μ − ν. Densities must live on the identical grid (node-for-node); atom lists are
    /// merged through the usual construction rules.
    pub fn sub(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        let atoms: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (a.location, a.mass))
            .chain(other.atoms.iter().map(|a| (a.location, -a.mass)))
            .collect();
        let density = match (&self.density, &other.density) {
            (None, None) => None,
            (Some(d), None) => Some(d.clone()),
            (None, Some(d)) => Some(d.map_values(|v| -v)),
            (Some(a), Some(b)) => {
                if a.grid != b.grid {
                    return Err(MeasureError::IncompatibleGrids);
                }
                Some(GriddedDensity {
                    grid: a.grid.clone(),
                    values: a
                        .values
                        .iter()
                        .zip(&b.values)
                        .map(|(x, y)| x - y)
                        .collect(),
                })
            }
        };
        SignedMeasure::new(atoms, density)
    }
}

/// A Borel probability measure: nonnegative masses and density values, total mass 1
/// within [`PROBABILITY_MASS_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure(SignedMeasure);

impl ProbabilityMeasure {
    /// Validate a signed measure as a probability measure.
    pub fn new(measure: SignedMeasure) -> Result<Self> {
        Self::check_nonnegative(&measure)?;
        let mass = measure.total_mass();
        if (mass - 1.0).abs() > PROBABILITY_MASS_TOL {
            return Err(MeasureError::MassNotOne(mass));
        }
        Ok(Self(measure))
    }

    /// The Dirac probability measure δ_location.
    pub fn dirac(location: f64) -> Self {
        Self(SignedMeasure::dirac(location))
    }

    /// Internal path for [`SignedMeasure::to_probability_pair`]: the parts are
    /// nonnegative by construction, but normalising both by μ⁺(ℝ) leaves the negative
    /// part's mass within [`MASS_ZERO_TOL`]/C of 1 rather than within the public
    /// tolerance, so only nonnegativity and a coarse mass sanity bound are enforced.
    fn from_nonnegative_part(measure: SignedMeasure) -> Result<Self> {
        Self::check_nonnegative(&measure)?;
        let mass = measure.total_mass();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(MeasureError::MassNotOne(mass));
        }
        Ok(Self(measure))
    }

    fn check_nonnegative(measure: &SignedMeasure) -> Result<()> {
        if let Some(a) = measure.atoms.iter().find(|a| a.mass < 0.0) {
            return Err(MeasureError::NegativeMass(a.mass));
        }
        if let Some(d) = &measure.density {
            if let Some(&v) = d.values.iter().find(|&&v| v < 0.0) {
                return Err(MeasureError::NegativeMass(v));
            }
        }
        Ok(())
    }

    pub fn as_signed(&self) -> &SignedMeasure {
        &self.0
    }

    pub fn into_signed(self) -> SignedMeasure {
        self.0
    }
}

// =============================================================================
// Tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn uniform_density(a: f64, b: f64, n: usize, value: f64) -> GriddedDensity {
        GriddedDensity::sample(a, b, n, |_| value).unwrap()
    }

    #[test]
    fn total_mass_sums_atoms() {
        let mu = SignedMeasure::new(vec![(0.0, 2.0), (1.0, -3.0)], None).unwrap();
        assert_eq!(mu.total_mass(), -1.0);
    }

    #[test]
    fn total_mass_of_zero_measure_is_zero() {
        assert_eq!(SignedMeasure::zero().total_mass(), 0.0);
        assert_eq!(SignedMeasure::zero().total_variation(), 0.0);
    }

    #[test]
    fn trapezoid_is_exact_on_constant_density() {
        // Constant 0.5 over [-1, 1]: the trapezoid rule integrates constants exactly.
        let mu = SignedMeasure::new(vec![], Some(uniform_density(-1.0, 1.0, 11, 0.5))).unwrap();
        assert_abs_diff_eq!(mu.total_mass(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn total_variation_sums_absolute_masses() {
        let mu = SignedMeasure::new(vec![(0.0, 2.0), (1.0, -3.0)], None).unwrap();
        assert_eq!(mu.total_variation(), 5.0);
    }

    #[test]
    fn total_variation_of_two_node_sign_change() {
        // Hand trapezoid of |values| = [1, 1] over [0, 1]: (1 + 1)/2 · 1 = 1.
        let d = GriddedDensity::new(vec![0.0, 1.0], vec![1.0, -1.0]).unwrap();
        let mu = SignedMeasure::new(vec![], Some(d)).unwrap();
        assert_abs_diff_eq!(mu.total_variation(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu.total_mass(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hahn_jordan_splits_atom_signs() {
        let mu = SignedMeasure::new(vec![(0.0, 2.0), (1.0, -3.0)], None).unwrap();
        let (plus, minus) = mu.hahn_jordan();
        assert_eq!(plus.atoms()[0].mass, 2.0);
        assert_eq!(plus.atoms()[1].mass, 0.0);
        assert_eq!(minus.atoms()[0].mass, 0.0);
        assert_eq!(minus.atoms()[1].mass, 3.0);
    }

    #[test]
    fn hahn_jordan_splits_density_nodes() {
        let d = GriddedDensity::new(vec![0.0, 0.5, 1.0], vec![1.0, -1.0, 2.0]).unwrap();
        let mu = SignedMeasure::new(vec![], Some(d)).unwrap();
        let (plus, minus) = mu.hahn_jordan();
        assert_eq!(plus.density().unwrap().values(), &[1.0, 0.0, 2.0]);
        assert_eq!(minus.density().unwrap().values(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn hahn_jordan_of_zero_measure_is_zero_pair() {
        let (plus, minus) = SignedMeasure::zero().hahn_jordan();
        assert_eq!(plus.total_variation(), 0.0);
        assert_eq!(minus.total_variation(), 0.0);
    }

    #[test]
    fn probability_pair_of_two_diracs() {
        let mu = SignedMeasure::new(vec![(0.0, 2.0), (1.0, -2.0)], None).unwrap();
        let (c, p, q) = mu.to_probability_pair().unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(p.as_signed().atoms()[0].mass, 1.0);
        assert_eq!(q.as_signed().atoms()[1].mass, 1.0);
    }

    #[test]
    fn probability_pair_of_three_atoms() {
        let mu = SignedMeasure::new(vec![(0.0, 1.0), (1.0, 1.0), (2.0, -2.0)], None).unwrap();
        let (c, p, q) = mu.to_probability_pair().unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(p.as_signed().atoms()[0].mass, 0.5);
        assert_eq!(p.as_signed().atoms()[1].mass, 0.5);
        assert_eq!(q.as_signed().atoms()[2].mass, 1.0);
    }

    #[test]
    fn probability_pair_rejects_nonzero_mass() {
        let mu = SignedMeasure::dirac(0.0);
        assert!(matches!(
            mu.to_probability_pair(),
            Err(MeasureError::NonzeroTotalMass { .. })
        ));
    }

    #[test]
    fn probability_pair_rejects_zero_measure() {
        assert_eq!(
            SignedMeasure::zero().to_probability_pair().unwrap_err(),
            MeasureError::ZeroMeasure
        );
    }

    #[test]
    fn probability_pair_reconstructs_measure() {
        // Dyadic masses chosen so atoms (+0.125) and density (−0.125) cancel exactly.
        let d = GriddedDensity::new(vec![-1.0, 0.0, 1.0], vec![0.5, -0.25, -0.25]).unwrap();
        let mu = SignedMeasure::new(vec![(2.0, 0.625), (3.0, -0.5)], Some(d)).unwrap();
        assert_abs_diff_eq!(mu.total_mass(), 0.0, epsilon = 1e-15);
        let (c, p, q) = mu.to_probability_pair().unwrap();
        let recon = p.as_signed().sub(q.as_signed()).unwrap().scale(c);
        for (a, b) in mu.atoms().iter().zip(recon.atoms()) {
            assert_eq!(a.location, b.location);
            assert_abs_diff_eq!(a.mass, b.mass, epsilon = 1e-12 * a.mass.abs().max(1.0));
        }
        let (dv, rv) = (mu.density().unwrap().values(), recon.density().unwrap().values());
        for (a, b) in dv.iter().zip(rv) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn fourier_of_dirac_at_origin_is_one() {
        let mu = SignedMeasure::dirac(0.0);
        for xi in [-3.0, 0.0, 1.7, 10.0] {
            let f = mu.fourier(xi);
            assert_abs_diff_eq!(f.re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn fourier_of_shifted_dirac_is_unit_phase() {
        // δ_π at ξ = 1: e^{-iπ} = -1.
        let f = SignedMeasure::dirac(std::f64::consts::PI).fourier(1.0);
        assert_abs_diff_eq!(f.re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fourier_of_box_density_matches_closed_form_under_refinement() {
        // Oracle: for the density ½·1_{[−1,1]}, μ̂(ξ) = ∫ ½ e^{−ixξ} dx = sin(ξ)/ξ.
        let closed_form = |xi: f64| xi.sin() / xi;
        for &xi in &[2.0, std::f64::consts::PI] {
            let mut last_err = f64::INFINITY;
            for n in [801, 3201, 12801, 51201] {
                let mu =
                    SignedMeasure::new(vec![], Some(uniform_density(-1.0, 1.0, n, 0.5))).unwrap();
                let err = (mu.fourier(xi) - Complex64::new(closed_form(xi), 0.0)).norm();
                assert!(
                    err <= last_err + 1e-12,
                    "refinement must not increase error: {err} after {last_err}"
                );
                last_err = err;
            }
            assert!(
                last_err < 1e-8,
                "refined quadrature off closed form by {last_err} at xi={xi}"
            );
        }
    }

    #[test]
    fn fourier_magnitude_bounded_by_total_variation() {
        let d = GriddedDensity::new(vec![-2.0, 0.0, 1.0], vec![1.5, -0.5, 2.0]).unwrap();
        let mu = SignedMeasure::new(vec![(0.3, -1.2), (4.0, 0.7)], Some(d)).unwrap();
        let tv = mu.total_variation();
        for i in 0..40 {
            let xi = -10.0 + i as f64 * 0.5;
            assert!(mu.fourier(xi).norm() <= tv + 1e-12);
        }
    }

    #[test]
    fn fourier_conjugate_symmetry() {
        let d = GriddedDensity::new(vec![-1.0, 0.5, 2.0], vec![0.3, 1.0, -0.8]).unwrap();
        let mu = SignedMeasure::new(vec![(1.0, 2.0), (-0.5, -1.0)], Some(d)).unwrap();
        for i in 0..20 {
            let xi = 0.3 * i as f64;
            let f = mu.fourier(xi);
            let g = mu.fourier(-xi);
            assert_abs_diff_eq!(f.re, g.re, epsilon = 1e-13);
            assert_abs_diff_eq!(f.im, -g.im, epsilon = 1e-13);
        }
    }

    #[test]
    fn atoms_within_merge_tolerance_collapse() {
        let mu = SignedMeasure::new(vec![(1.0, 2.0), (1.0 + 1e-13, 3.0), (2.0, 1.0)], None)
            .unwrap();
        assert_eq!(mu.atoms().len(), 2);
        assert_eq!(mu.atoms()[0].mass, 5.0);
    }

    #[test]
    fn quadrature_nodes_reproduce_total_mass() {
        let d = GriddedDensity::new(vec![0.0, 1.0, 3.0], vec![1.0, 2.0, -1.0]).unwrap();
        let mu = SignedMeasure::new(vec![(5.0, 0.25)], Some(d)).unwrap();
        let from_nodes: f64 = mu.quadrature_nodes().iter().map(|(_, w)| w).sum();
        assert_abs_diff_eq!(from_nodes, mu.total_mass(), epsilon = 1e-14);
    }

    #[test]
    fn grid_validation_rejects_bad_input() {
        assert!(matches!(
            GriddedDensity::new(vec![0.0], vec![1.0]),
            Err(MeasureError::GridTooSmall(1))
        ));
        assert!(matches!(
            GriddedDensity::new(vec![0.0, 0.0], vec![1.0, 1.0]),
            Err(MeasureError::GridNotIncreasing(1))
        ));
        assert!(matches!(
            GriddedDensity::new(vec![0.0, 1.0], vec![1.0]),
            Err(MeasureError::GridValueMismatch { .. })
        ));
        assert!(matches!(
            SignedMeasure::new(vec![(f64::NAN, 1.0)], None),
            Err(MeasureError::NonFinite(_))
        ));
    }

    #[test]
    fn probability_measure_validation() {
        assert!(ProbabilityMeasure::new(SignedMeasure::dirac(2.0)).is_ok());
        let negative = SignedMeasure::new(vec![(0.0, 2.0), (1.0, -1.0)], None).unwrap();
        assert!(matches!(
            ProbabilityMeasure::new(negative),
            Err(MeasureError::NegativeMass(_))
        ));
        let heavy = SignedMeasure::new(vec![(0.0, 1.5)], None).unwrap();
        assert!(matches!(
            ProbabilityMeasure::new(heavy),
            Err(MeasureError::MassNotOne(_))
        ));
    }

    #[test]
    fn sub_requires_matching_grids() {
        let a = SignedMeasure::new(vec![], Some(uniform_density(0.0, 1.0, 3, 1.0))).unwrap();
        let b = SignedMeasure::new(vec![], Some(uniform_density(0.0, 1.0, 5, 1.0))).unwrap();
        assert_eq!(a.sub(&b).unwrap_err(), MeasureError::IncompatibleGrids);
        let c = a.sub(&a).unwrap();
        assert_eq!(c.total_variation(), 0.0);
    }
}
