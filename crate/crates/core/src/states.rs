//! Gaussian state constructors: vacuum, thermal, and the correlated
//! multi-mode thermal states obtained by spreading thermal photons over many
//! modes with the Gaussian Fourier transform.

use nalgebra::{DMatrix, DVector};

use crate::circuits::gft_symplectic;
use crate::error::{invalid_arg, Error, Result};
use crate::symplectic::{direct_sum, symplectic_eigenvalues, CovMatrix, QuadratureVector};

/// Tolerance on the minimum symplectic eigenvalue when accepting a state.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// Mean vector and covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    mean: QuadratureVector,
    cov: CovMatrix,
}

impl CovarianceState {
    /// Builds a state after checking dimensions and the uncertainty principle.
    pub fn new(mean: QuadratureVector, cov: CovMatrix) -> Result<Self> {
        let state = Self::from_parts(mean, cov)?;
        let nu_min = state.min_symplectic_eigenvalue()?;
        if nu_min < 0.5 - PHYSICALITY_TOL {
            return Err(Error::InvalidState(format!(
                "minimum symplectic eigenvalue {nu_min} violates the uncertainty bound 1/2"
            )));
        }
        Ok(state)
    }

    /// Zero-mean state with the given covariance.
    pub fn zero_mean(cov: CovMatrix) -> Result<Self> {
        let n = cov.n_modes();
        Self::new(QuadratureVector::zeros(n), cov)
    }

    /// Dimension check only. Outputs of CP channels and symplectic maps go
    /// through here; callers that need the guarantee use [`Self::is_physical`].
    pub(crate) fn from_parts(mean: QuadratureVector, cov: CovMatrix) -> Result<Self> {
        if mean.n_modes() != cov.n_modes() {
            return invalid_arg(format!(
                "mean has {} modes but covariance has {}",
                mean.n_modes(),
                cov.n_modes()
            ));
        }
        Ok(Self { mean, cov })
    }

    pub fn n_modes(&self) -> usize {
        self.cov.n_modes()
    }

    pub fn mean(&self) -> &QuadratureVector {
        &self.mean
    }

    pub fn cov(&self) -> &CovMatrix {
        &self.cov
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.cov)
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(self.symplectic_eigenvalues()?[0])
    }

    pub fn is_physical(&self) -> bool {
        self.min_symplectic_eigenvalue()
            .map(|nu| nu >= 0.5 - PHYSICALITY_TOL)
            .unwrap_or(false)
    }

    /// Applies a symplectic (or orthogonal) transformation `S` to both moments.
    pub fn transform(&self, s: &DMatrix<f64>) -> Result<Self> {
        let cov = self.cov.conjugate(s)?;
        let mean = QuadratureVector::new(s * self.mean.as_vector())?;
        Self::from_parts(mean, cov)
    }

    /// Marginal state on the listed modes, in the listed order.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return invalid_arg("reduced state needs at least one mode");
        }
        if let Some(&bad) = modes.iter().find(|&&m| m >= self.n_modes()) {
            return invalid_arg(format!(
                "mode {bad} out of range for a {}-mode state",
                self.n_modes()
            ));
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let full = self.cov.as_matrix();
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |i, j| full[(idx[i], idx[j])]);
        let mean = DVector::from_fn(idx.len(), |i, _| self.mean.as_vector()[idx[i]]);
        Self::from_parts(QuadratureVector::new(mean)?, CovMatrix::symmetrized(cov))
    }

    /// Tensor product: direct sum of the covariances, concatenated means.
    pub fn tensor(states: &[&CovarianceState]) -> Result<Self> {
        if states.is_empty() {
            return invalid_arg("tensor product of zero states");
        }
        let covs: Vec<&DMatrix<f64>> = states.iter().map(|s| s.cov.as_matrix()).collect();
        let mean: Vec<f64> = states
            .iter()
            .flat_map(|s| s.mean.as_vector().iter().copied())
            .collect();
        Self::from_parts(
            QuadratureVector::new(DVector::from_vec(mean))?,
            CovMatrix::symmetrized(direct_sum(&covs)),
        )
    }
}

/// Mean photon number per mode of a thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    n_bar: f64,
}

impl ThermalSpec {
    pub fn new(n_bar: f64) -> Result<Self> {
        if !(n_bar >= 0.0) || !n_bar.is_finite() {
            return invalid_arg(format!("mean photon number must be >= 0, got {n_bar}"));
        }
        Ok(Self { n_bar })
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }
}

/// Parameters of the correlated thermal state: `M` thermally populated modes
/// out of `N`, with `n_bar` photons per mode after spreading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedSpec {
    m: usize,
    n: usize,
    n_bar: f64,
}

impl CorrelatedSpec {
    pub fn new(m: usize, n: usize, n_bar: f64) -> Result<Self> {
        if m < 1 || m > n {
            return invalid_arg(format!("need 1 <= M <= N, got M={m}, N={n}"));
        }
        ThermalSpec::new(n_bar)?;
        Ok(Self { m, n, n_bar })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    /// Photons per populated mode before the Fourier transform, `(N/M) n_bar`.
    pub fn concentrated_n_bar(&self) -> f64 {
        self.n as f64 / self.m as f64 * self.n_bar
    }

    /// Two-mode squeezer gain `G = (N/M) n_bar + 1` that prepares each
    /// populated mode.
    pub fn squeezer_gain(&self) -> f64 {
        self.concentrated_n_bar() + 1.0
    }
}

pub fn vacuum(n_modes: usize) -> Result<CovarianceState> {
    thermal_state(ThermalSpec { n_bar: 0.0 }, n_modes)
}

/// `n_modes` independent copies of the thermal state, covariance `(n+1/2) I`.
pub fn thermal_state(spec: ThermalSpec, n_modes: usize) -> Result<CovarianceState> {
    if n_modes == 0 {
        return invalid_arg("thermal state needs at least one mode");
    }
    CovarianceState::from_parts(
        QuadratureVector::zeros(n_modes),
        CovMatrix::identity_scaled(n_modes, spec.n_bar + 0.5),
    )
}

/// Product of thermal blocks with the given per-mode photon numbers, no GFT.
fn diagonal_thermal(per_mode: &[f64]) -> CovMatrix {
    let diag = DVector::from_iterator(
        2 * per_mode.len(),
        per_mode.iter().flat_map(|&n| [n + 0.5, n + 0.5]),
    );
    CovMatrix::symmetrized(DMatrix::from_diagonal(&diag))
}

/// The correlated thermal state: the first `M` modes hold `(N/M) n_bar`
/// photons, the rest are vacuum, and the Gaussian Fourier transform spreads
/// the photons evenly over all `N` modes.
pub fn correlated_thermal(spec: CorrelatedSpec) -> Result<CovarianceState> {
    let mut per_mode = vec![0.0; spec.n];
    per_mode[..spec.m].fill(spec.concentrated_n_bar());
    let d = diagonal_thermal(&per_mode);
    let s = gft_symplectic(spec.n)?;
    CovarianceState::from_parts(QuadratureVector::zeros(spec.n), d.conjugate(&s)?)
}

/// Fourier-spread mixture of thermal blocks: component `i` occupies the next
/// `lambdas[i] * n` consecutive modes with `n_bars[i]` photons each.
pub fn mixed_thermal(lambdas: &[f64], n_bars: &[f64], n: usize) -> Result<CovarianceState> {
    if lambdas.is_empty() || lambdas.len() != n_bars.len() {
        return invalid_arg(format!(
            "need matching non-empty weight and photon lists, got {} and {}",
            lambdas.len(),
            n_bars.len()
        ));
    }
    if n == 0 {
        return invalid_arg("mixed thermal state needs at least one mode");
    }
    if lambdas.iter().any(|&l| !(0.0..=1.0).contains(&l)) {
        return invalid_arg("weights must lie in [0, 1]");
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return invalid_arg(format!("weights must sum to 1, got {total}"));
    }
    let mut per_mode = Vec::with_capacity(n);
    for (&lambda, &n_bar) in lambdas.iter().zip(n_bars) {
        ThermalSpec::new(n_bar)?;
        let count = lambda * n as f64;
        let rounded = count.round();
        if (count - rounded).abs() > 1e-9 {
            return invalid_arg(format!(
                "weight {lambda} allocates {count} of {n} modes, which is not an integer"
            ));
        }
        per_mode.extend(std::iter::repeat_n(n_bar, rounded as usize));
    }
    if per_mode.len() != n {
        return invalid_arg(format!(
            "mode allocation covers {} modes, expected {n}",
            per_mode.len()
        ));
    }
    let d = diagonal_thermal(&per_mode);
    let s = gft_symplectic(n)?;
    CovarianceState::from_parts(QuadratureVector::zeros(n), d.conjugate(&s)?)
}

/// Mean photon number of each mode, including displacement energy:
/// `(V_qq + V_pp + q^2 + p^2) / 2 - 1/2`.
pub fn per_mode_photon_numbers(state: &CovarianceState) -> Vec<f64> {
    let v = state.cov().as_matrix();
    let x = state.mean().as_vector();
    (0..state.n_modes())
        .map(|k| {
            let (q, p) = (2 * k, 2 * k + 1);
            0.5 * (v[(q, q)] + v[(p, p)] + x[q] * x[q] + x[p] * x[p]) - 0.5
        })
        .collect()
}

pub fn total_photon_number(state: &CovarianceState) -> f64 {
    per_mode_photon_numbers(state).iter().sum()
}
