//! Spectral models for the phase-estimation experiments.
//!
//! Everything an estimator can observe about `|ψ⟩` and `U` is captured by
//! the eigenphases `λ_m` of `U` and the overlaps `p_m = |⟨ψ|ψ_m⟩|²`, so a
//! [`SpectralDecomposition`] is the whole quantum input of a run.

use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::angle::{self, Angle};
use crate::error::{invalid, Error, Result};

pub const MIN_SITES: usize = 2;
pub const MAX_SITES: usize = 12;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 0; // nalgebra: 0 means "until convergence"
const WEIGHT_TOL: f64 = 1e-12;

/// Transverse-field Ising chain with periodic boundary conditions,
/// `H = −(Σ Z_i Z_{i+1} + Z_L Z_1) − g Σ X_i`.
#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    sites: usize,
    coupling: f64,
    matrix: DMatrix<f64>,
}

impl HamiltonianModel {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Assembles the TFIM Hamiltonian on `sites` spins in the computational basis.
///
/// Site `i` (0-based) is bit `sites − 1 − i` of the basis index, matching the
/// ordering of `σ_1 ⊗ σ_2 ⊗ … ⊗ σ_L`.
pub fn build_tfim(sites: usize, coupling: f64) -> Result<HamiltonianModel> {
    if !(MIN_SITES..=MAX_SITES).contains(&sites) {
        return Err(invalid(format!(
            "TFIM needs {MIN_SITES} <= L <= {MAX_SITES} sites, got {sites}"
        )));
    }
    if !coupling.is_finite() {
        return Err(invalid(format!("coupling must be finite, got {coupling}")));
    }
    let dim = 1usize << sites;
    let bit = |i: usize| 1usize << (sites - 1 - i);
    let mut matrix = DMatrix::<f64>::zeros(dim, dim);
    for s in 0..dim {
        let z = |i: usize| if s & bit(i) == 0 { 1.0 } else { -1.0 };
        // bonds (i, i+1) for i < L-1 plus the closing bond (L, 1)
        let zz: f64 = (0..sites).map(|i| z(i) * z((i + 1) % sites)).sum();
        matrix[(s, s)] = -zz;
        for i in 0..sites {
            matrix[(s ^ bit(i), s)] -= coupling;
        }
    }
    Ok(HamiltonianModel {
        sites,
        coupling,
        matrix,
    })
}

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// Column `m` is the eigenvector for `values[m]`.
    pub vectors: DMatrix<f64>,
}

impl Eigensystem {
    /// Spectral norm, `max |E_m|`.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc: f64, e| acc.max(e.abs()))
    }

    pub fn ground_index(&self) -> usize {
        0
    }
}

pub fn eigendecompose(h: &HamiltonianModel) -> Result<Eigensystem> {
    eigendecompose_matrix(&h.matrix)
}

pub fn eigendecompose_matrix(m: &DMatrix<f64>) -> Result<Eigensystem> {
    if !m.is_square() {
        return Err(invalid(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(invalid("matrix has non-finite entries"));
    }
    let dim = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(
        Error::NoConvergence {
            dim,
            max_iter: EIGEN_MAX_ITER,
            eps: EIGEN_EPS,
        },
    )?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigensystem { values, vectors })
}

/// Eigenphases of `U = exp(iπH / (4‖H‖₂))`: `λ_m = (π/4) E_m / ‖H‖₂`.
pub fn spectral_phases(eigenvalues: &[f64]) -> Result<Vec<Angle>> {
    let norm = eigenvalues.iter().fold(0.0, |acc: f64, e| acc.max(e.abs()));
    if norm == 0.0 || !norm.is_finite() {
        return Err(invalid(format!(
            "cannot rescale a spectrum with norm {norm}"
        )));
    }
    eigenvalues
        .iter()
        .map(|e| angle::wrap(FRAC_PI_4 * e / norm))
        .collect()
}

/// How the mass `1 − p₀` is spread over the non-target eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualPolicy {
    /// Equal share to every `m ≠ m₀`.
    Uniform,
    /// Normalised squared standard-normal draws, seeded.
    #[default]
    Random,
    /// Everything on one eigenstate.
    Single(usize),
}

impl std::str::FromStr for ResidualPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "random" => Ok(Self::Random),
            _ => s
                .strip_prefix("single:")
                .and_then(|m| m.parse().ok())
                .map(Self::Single)
                .ok_or_else(|| {
                    invalid(format!(
                        "unknown residual policy {s:?} (expected uniform, random or single:<index>)"
                    ))
                }),
        }
    }
}

/// Eigenphase/overlap pairs `{(λ_m, p_m)}` plus the index of the target state.
///
/// Phases are held as representatives in `[−π, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumDoc", into = "SpectrumDoc")]
pub struct SpectralDecomposition {
    phases: Vec<f64>,
    weights: Vec<f64>,
    target_index: usize,
}

#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    phases: Vec<f64>,
    weights: Vec<f64>,
    target_index: usize,
}

impl TryFrom<SpectrumDoc> for SpectralDecomposition {
    type Error = Error;

    fn try_from(d: SpectrumDoc) -> Result<Self> {
        SpectralDecomposition::new(d.phases, d.weights, d.target_index)
    }
}

impl From<SpectralDecomposition> for SpectrumDoc {
    fn from(s: SpectralDecomposition) -> Self {
        SpectrumDoc {
            phases: s.phases,
            weights: s.weights,
            target_index: s.target_index,
        }
    }
}

impl SpectralDecomposition {
    pub fn new(phases: Vec<f64>, weights: Vec<f64>, target_index: usize) -> Result<Self> {
        if phases.is_empty() {
            return Err(invalid("spectrum has no phases"));
        }
        if phases.len() != weights.len() {
            return Err(invalid(format!(
                "{} phases but {} weights",
                phases.len(),
                weights.len()
            )));
        }
        if target_index >= phases.len() {
            return Err(invalid(format!(
                "target index {target_index} out of range for {} states",
                phases.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid(format!("weights must be nonnegative, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(invalid(format!("weights sum to {total}, expected 1")));
        }
        let phases = phases
            .into_iter()
            .map(angle::to_signed)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            phases,
            weights,
            target_index,
        })
    }

    /// A single eigenstate with phase `lambda`.
    pub fn eigenstate(lambda: f64) -> Result<Self> {
        Self::new(vec![lambda], vec![1.0], 0)
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Phases as representatives in `[−π, π)`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn phase(&self, m: usize) -> Angle {
        angle::wrap(self.phases[m]).expect("phases are finite")
    }

    /// The target phase `λ₀`.
    pub fn target_phase(&self) -> Angle {
        self.phase(self.target_index)
    }

    /// The overlap `p₀` with the target eigenstate.
    pub fn p0(&self) -> f64 {
        self.weights[self.target_index]
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
    }
}

/// Builds `|ψ⟩`'s overlap profile: `p0` on `target_index`, the rest spread
/// according to `policy`. Deterministic in `(policy, seed)`.
pub fn make_initial_state(
    phases: &[Angle],
    target_index: usize,
    p0: f64,
    policy: ResidualPolicy,
    seed: u64,
) -> Result<SpectralDecomposition> {
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(invalid(format!("p0 must lie in (0, 1], got {p0}")));
    }
    let n = phases.len();
    if target_index >= n {
        return Err(invalid(format!(
            "target index {target_index} out of range for {n} states"
        )));
    }
    let residual = 1.0 - p0;
    let mut weights = vec![0.0; n];
    if residual > 0.0 {
        if n == 1 {
            return Err(invalid("p0 < 1 needs at least one non-target state"));
        }
        let raw: Vec<f64> = match policy {
            ResidualPolicy::Uniform => vec![1.0; n],
            ResidualPolicy::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n)
                    .map(|_| {
                        let x: f64 = StandardNormal.sample(&mut rng);
                        x * x
                    })
                    .collect()
            }
            ResidualPolicy::Single(m) => {
                if m >= n || m == target_index {
                    return Err(invalid(format!(
                        "residual state {m} must be a valid non-target index"
                    )));
                }
                (0..n).map(|i| if i == m { 1.0 } else { 0.0 }).collect()
            }
        };
        let total: f64 = raw
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != target_index)
            .map(|(_, x)| x)
            .sum();
        for (m, w) in weights.iter_mut().enumerate() {
            if m != target_index {
                *w = residual * raw[m] / total;
            }
        }
    }
    weights[target_index] = p0;
    SpectralDecomposition::new(
        phases.iter().map(|a| a.signed()).collect(),
        weights,
        target_index,
    )
}

/// `⟨ψ|U^t|ψ⟩ = Σ_m p_m e^{i t λ_m}`.
pub fn exact_expectation(sd: &SpectralDecomposition, t: u64) -> Complex64 {
    let t = t as f64;
    sd.phases
        .iter()
        .zip(&sd.weights)
        .filter(|(_, w)| **w > 0.0)
        .map(|(l, w)| Complex64::from_polar(*w, t * l))
        .sum()
}

/// The TFIM spectrum turned into phases, with the ground state as target.
#[derive(Debug, Clone)]
pub struct TfimSpectrum {
    pub sites: usize,
    pub coupling: f64,
    pub energies: Vec<f64>,
    pub norm: f64,
    pub phases: Vec<Angle>,
    pub ground_index: usize,
}

pub fn tfim_spectrum(sites: usize, coupling: f64) -> Result<TfimSpectrum> {
    let h = build_tfim(sites, coupling)?;
    let eig = eigendecompose(&h)?;
    let phases = spectral_phases(&eig.values)?;
    Ok(TfimSpectrum {
        sites,
        coupling,
        norm: eig.norm(),
        ground_index: eig.ground_index(),
        energies: eig.values,
        phases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn pauli_x() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn pauli_z() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// `I ⊗ … ⊗ op_i ⊗ … ⊗ I` with the listed single-site operators.
    fn embed(sites: usize, ops: &[(usize, DMatrix<f64>)]) -> DMatrix<f64> {
        let mut acc = DMatrix::<f64>::identity(1, 1);
        for i in 0..sites {
            let factor = ops
                .iter()
                .find(|(s, _)| *s == i)
                .map(|(_, m)| m.clone())
                .unwrap_or_else(|| DMatrix::identity(2, 2));
            acc = acc.kronecker(&factor);
        }
        acc
    }

    fn tfim_by_kronecker(sites: usize, g: f64) -> DMatrix<f64> {
        let dim = 1 << sites;
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..sites {
            let j = (i + 1) % sites;
            h -= embed(sites, &[(i, pauli_z()), (j, pauli_z())]);
            h -= embed(sites, &[(i, pauli_x())]) * g;
        }
        h
    }

    #[test]
    fn tfim_matches_kronecker_assembly() {
        for (l, g) in [(2, 0.0), (2, 1.5), (3, 0.7), (4, 4.0), (5, -1.0)] {
            let h = build_tfim(l, g).unwrap();
            let want = tfim_by_kronecker(l, g);
            assert_eq!(h.dim(), 1 << l);
            assert!((h.matrix() - &want).amax() < 1e-14, "L={l} g={g}");
            assert!((h.matrix() - h.matrix().transpose()).amax() < 1e-12);
        }
    }

    #[test]
    fn tfim_two_sites_without_field() {
        let h = build_tfim(2, 0.0).unwrap();
        let eig = eigendecompose(&h).unwrap();
        let want = [-2.0, -2.0, 2.0, 2.0];
        for (e, w) in eig.values.iter().zip(want) {
            assert!((e - w).abs() < 1e-12, "{:?}", eig.values);
        }
    }

    #[test]
    fn tfim_strong_field_extreme() {
        // only the field term: eigenvalues of -g(X1 + X2) are {-2g, 0, 0, 2g}
        let g = 1e6;
        let eig = eigendecompose(&build_tfim(2, g).unwrap()).unwrap();
        assert!((eig.values[0] / g + 2.0).abs() < 1e-5);
    }

    #[test]
    fn tfim_rejects_out_of_range_sites() {
        assert!(build_tfim(1, 1.0).is_err());
        assert!(build_tfim(13, 1.0).is_err());
        assert!(build_tfim(4, f64::NAN).is_err());
    }

    #[test]
    fn tfim_l8_g4_regression() {
        let s = tfim_spectrum(8, 4.0).unwrap();
        assert_eq!(s.phases.len(), 256);
        // frozen from an independent numpy Kronecker build + eigvalsh
        assert!(
            (s.energies[0] - (-32.501_996_858_925_69)).abs() < 1e-9,
            "{}",
            s.energies[0]
        );
        // the spectrum is symmetric at even L: both extremes attain the norm
        assert!((s.norm + s.energies[0]).abs() < 1e-12);
        assert!((s.norm - s.energies[255]).abs() < 1e-12);
        let min = s
            .phases
            .iter()
            .map(|a| a.signed())
            .fold(f64::INFINITY, f64::min);
        assert!((min + PI / 4.0).abs() < 1e-14);
        assert!((s.phases[s.ground_index].signed() + PI / 4.0).abs() < 1e-14);
        assert!(s
            .phases
            .iter()
            .all(|a| a.signed().abs() <= PI / 4.0 + 1e-15));
    }

    #[test]
    fn diagonal_input_gives_standard_basis() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]));
        let eig = eigendecompose_matrix(&m).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0, 4.0]);
        assert!((eig.vectors.abs() - DMatrix::<f64>::identity(4, 4)).amax() < 1e-15);
    }

    #[test]
    fn eigen_rejects_non_square() {
        assert!(eigendecompose_matrix(&DMatrix::zeros(2, 3)).is_err());
    }

    fn check_eigensystem(m: &DMatrix<f64>, eig: &Eigensystem) {
        let norm = eig.norm().max(1e-300);
        for (k, e) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(k);
            let r = (m * v - v * *e).norm();
            assert!(r <= 1e-9 * norm, "residual {r}");
        }
        let gram = eig.vectors.transpose() * &eig.vectors;
        let n = m.nrows();
        assert!((gram - DMatrix::<f64>::identity(n, n)).amax() < 1e-9);
        let recon = &eig.vectors
            * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig.values.clone()))
            * eig.vectors.transpose();
        assert!((recon - m).norm() <= 1e-9 * norm);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn tfim_eigensystem_meets_accuracy_contract() {
        let h = build_tfim(6, 4.0).unwrap();
        check_eigensystem(h.matrix(), &eigendecompose(&h).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn random_symmetric_reconstructs(entries in proptest::collection::vec(-5.0f64..5.0, 64)) {
            let a = DMatrix::from_vec(8, 8, entries);
            let m = (&a + a.transpose()) * 0.5;
            check_eigensystem(&m, &eigendecompose_matrix(&m).unwrap());
        }

        #[test]
        fn tfim_phases_in_quarter_interval(l in 2usize..=7, g in -6.0f64..6.0) {
            let s = tfim_spectrum(l, g).unwrap();
            for a in &s.phases {
                prop_assert!(a.signed().abs() <= PI / 4.0 + 1e-14);
            }
        }

        #[test]
        fn residual_bound_holds(
            p0 in 0.05f64..1.0,
            t in 1u64..5000,
            seed in any::<u64>(),
            phases in proptest::collection::vec(-PI..PI, 2..20),
        ) {
            let phases: Vec<Angle> = phases.into_iter().map(|x| angle::wrap(x).unwrap()).collect();
            let sd = make_initial_state(&phases, 0, p0, ResidualPolicy::Random, seed).unwrap();
            prop_assert!((sd.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let e = exact_expectation(&sd, t);
            prop_assert!(e.norm() <= 1.0 + 1e-12);
            let lead = Complex64::from_polar(p0, t as f64 * sd.phases()[0]);
            prop_assert!((e - lead).norm() <= 1.0 - p0 + 1e-12);
        }
    }

    #[test]
    fn spectral_phase_examples() {
        let p = spectral_phases(&[-4.0, 4.0]).unwrap();
        assert!((p[0].signed() + PI / 4.0).abs() < 1e-15);
        assert!((p[1].signed() - PI / 4.0).abs() < 1e-15);
        let p = spectral_phases(&[0.0, 3.0]).unwrap();
        assert_eq!(p[0].value(), 0.0);
        assert!(spectral_phases(&[0.0, 0.0]).is_err());
    }

    fn angles(xs: &[f64]) -> Vec<Angle> {
        xs.iter().map(|x| angle::wrap(*x).unwrap()).collect()
    }

    #[test]
    fn initial_state_policies() {
        let ph = angles(&[0.1, 0.2, 0.3, 0.4]);
        for policy in [
            ResidualPolicy::Uniform,
            ResidualPolicy::Random,
            ResidualPolicy::Single(2),
        ] {
            let sd = make_initial_state(&ph, 1, 1.0, policy, 3).unwrap();
            assert_eq!(sd.weights(), &[0.0, 1.0, 0.0, 0.0]);
        }
        let sd = make_initial_state(&ph, 0, 0.7, ResidualPolicy::Uniform, 0).unwrap();
        for (w, want) in sd.weights().iter().zip([0.7, 0.1, 0.1, 0.1]) {
            assert!((w - want).abs() < 1e-15);
        }
        let sd = make_initial_state(&ph, 0, 0.7, ResidualPolicy::Single(3), 0).unwrap();
        assert!((sd.weights()[3] - 0.3).abs() < 1e-15);
        let a = make_initial_state(&ph, 0, 0.6, ResidualPolicy::Random, 42).unwrap();
        let b = make_initial_state(&ph, 0, 0.6, ResidualPolicy::Random, 42).unwrap();
        let c = make_initial_state(&ph, 0, 0.6, ResidualPolicy::Random, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.p0(), 0.6);
    }

    #[test]
    fn initial_state_rejects_bad_input() {
        let ph = angles(&[0.1, 0.2]);
        assert!(make_initial_state(&ph, 0, 0.0, ResidualPolicy::Uniform, 0).is_err());
        assert!(make_initial_state(&ph, 0, 1.2, ResidualPolicy::Uniform, 0).is_err());
        assert!(make_initial_state(&ph, 2, 0.5, ResidualPolicy::Uniform, 0).is_err());
        assert!(make_initial_state(&ph, 0, 0.5, ResidualPolicy::Single(0), 0).is_err());
        assert!(make_initial_state(&angles(&[0.1]), 0, 0.5, ResidualPolicy::Uniform, 0).is_err());
    }

    #[test]
    fn expectation_examples() {
        let sd = SpectralDecomposition::eigenstate(PI / 6.0).unwrap();
        let e = exact_expectation(&sd, 3);
        assert!((e - Complex64::i()).norm() < 1e-15);

        let sd = SpectralDecomposition::new(vec![PI / 2.0, PI], vec![0.5, 0.5], 0).unwrap();
        assert!((exact_expectation(&sd, 4) - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        let sd = SpectralDecomposition::new(vec![0.3, 1.1], vec![0.8, 0.2], 0).unwrap();
        let want = Complex64::new(
            0.8 * 0.6f64.cos() + 0.2 * 2.2f64.cos(),
            0.8 * 0.6f64.sin() + 0.2 * 2.2f64.sin(),
        );
        assert!((exact_expectation(&sd, 2) - want).norm() < 1e-15);
    }

    #[test]
    fn spectrum_json_round_trip_and_validation() {
        let sd =
            SpectralDecomposition::new(vec![0.1, -0.2, 4.0], vec![0.5, 0.25, 0.25], 1).unwrap();
        // 4.0 is stored as its [−π, π) representative
        assert!((sd.phases()[2] - (4.0 - 2.0 * PI)).abs() < 1e-15);
        let text = serde_json::to_string(&sd).unwrap();
        let back: SpectralDecomposition = serde_json::from_str(&text).unwrap();
        assert_eq!(sd, back);
        let bad = r#"{"phases":[0.1,0.2],"weights":[0.5,0.6],"target_index":0}"#;
        assert!(serde_json::from_str::<SpectralDecomposition>(bad).is_err());
        let bad = r#"{"phases":[0.1],"weights":[1.0],"target_index":3}"#;
        assert!(serde_json::from_str::<SpectralDecomposition>(bad).is_err());
    }

    #[test]
    fn residual_policy_parsing() {
        assert_eq!(
            "uniform".parse::<ResidualPolicy>().unwrap(),
            ResidualPolicy::Uniform
        );
        assert_eq!(
            "single:7".parse::<ResidualPolicy>().unwrap(),
            ResidualPolicy::Single(7)
        );
        assert!("single:x".parse::<ResidualPolicy>().is_err());
    }
}
