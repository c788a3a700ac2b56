//! Gaussian channels acting affinely on `(mean, covariance)`:
//! `x -> T x`, `V -> T V T^T + N`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid_arg, Result};
use crate::states::CovarianceState;
use crate::symplectic::{symplectic_form, z_matrix, CovMatrix, QuadratureVector};

/// Tolerance of the complete-positivity eigenvalue check.
pub const CP_TOL: f64 = 1e-10;

/// Transmissivity and environment photon number of a thermal loss channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    eta: f64,
    n_th: f64,
}

impl ChannelParams {
    pub fn new(eta: f64, n_th: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return invalid_arg(format!("transmissivity must lie in [0, 1], got {eta}"));
        }
        if !(n_th >= 0.0) || !n_th.is_finite() {
            return invalid_arg(format!(
                "environment photon number must be >= 0, got {n_th}"
            ));
        }
        Ok(Self { eta, n_th })
    }

    /// Same channel parameterised by loss probability `gamma = 1 - eta`.
    pub fn from_gamma(gamma: f64, n_th: f64) -> Result<Self> {
        Self::new(1.0 - gamma, n_th)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn n_th(&self) -> f64 {
        self.n_th
    }

    pub fn gamma(&self) -> f64 {
        1.0 - self.eta
    }
}

/// Affine Gaussian map from `m_in` to `m_out` modes.
///
/// `out_groups` records how the output splits into subsystems (1 for the
/// loss channel, 2 for its complement: receiver then environment).
/// [`tensor_pow`] keeps outputs grouped by subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    t: DMatrix<f64>,
    noise: DMatrix<f64>,
    m_in: usize,
    m_out: usize,
    out_groups: usize,
}

impl GaussianChannel {
    pub fn new(t: DMatrix<f64>, noise: DMatrix<f64>, out_groups: usize) -> Result<Self> {
        if !t.nrows().is_multiple_of(2)
            || !t.ncols().is_multiple_of(2)
            || t.nrows() == 0
            || t.ncols() == 0
        {
            return invalid_arg(format!(
                "T must be 2m_out x 2m_in, got {}x{}",
                t.nrows(),
                t.ncols()
            ));
        }
        if noise.nrows() != t.nrows() || noise.ncols() != t.nrows() {
            return invalid_arg("noise matrix must be square with T's row count");
        }
        if (&noise - noise.transpose()).amax() > 1e-12 * noise.amax().max(1.0) {
            return invalid_arg("noise matrix must be symmetric");
        }
        let m_out = t.nrows() / 2;
        if out_groups == 0 || !m_out.is_multiple_of(out_groups) {
            return invalid_arg(format!(
                "{m_out} output modes cannot form {out_groups} groups"
            ));
        }
        Ok(Self {
            m_in: t.ncols() / 2,
            m_out,
            t,
            noise,
            out_groups,
        })
    }

    pub fn t(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn noise(&self) -> &DMatrix<f64> {
        &self.noise
    }

    pub fn m_in(&self) -> usize {
        self.m_in
    }

    pub fn m_out(&self) -> usize {
        self.m_out
    }

    /// Checks `N + (i/2) Omega_out - (i/2) T Omega_in T^T >= 0`.
    ///
    /// The Hermitian matrix `A + iB` is PSD iff the real symmetric
    /// `[[A, -B], [B, A]]` is, so the check runs on the realification.
    pub fn is_completely_positive(&self, tol: f64) -> bool {
        let om_out = symplectic_form(self.m_out).expect("m_out > 0");
        let om_in = symplectic_form(self.m_in).expect("m_in > 0");
        let a = self.noise.clone();
        let b = (om_out - &self.t * om_in * self.t.transpose()) * 0.5;
        let d = a.nrows();
        let mut real = DMatrix::zeros(2 * d, 2 * d);
        real.view_mut((0, 0), (d, d)).copy_from(&a);
        real.view_mut((d, d), (d, d)).copy_from(&a);
        real.view_mut((0, d), (d, d)).copy_from(&(-&b));
        real.view_mut((d, 0), (d, d)).copy_from(&b);
        let real = (&real + real.transpose()) * 0.5;
        SymmetricEigen::new(real).eigenvalues.min() >= -tol
    }
}

/// Thermal loss channel on `n_modes` modes:
/// `T = sqrt(eta) I`, `N = (1 - eta)(n_th + 1/2) I`.
pub fn thermal_loss_channel(params: ChannelParams, n_modes: usize) -> Result<GaussianChannel> {
    if n_modes == 0 {
        return invalid_arg("channel needs at least one mode");
    }
    let dim = 2 * n_modes;
    let id = DMatrix::<f64>::identity(dim, dim);
    GaussianChannel::new(
        &id * params.eta.sqrt(),
        &id * ((1.0 - params.eta) * (params.n_th + 0.5)),
        1,
    )
}

/// Complementary channel of the thermal loss channel, output ordered as
/// (all receiver-side modes, then all environment modes):
///
/// ```text
/// T_c = [ -sqrt(1-eta) I ]     N_c = [ eta(n_th+1/2) I        sqrt(eta n_th (n_th+1)) Z ]
///       [        0       ]           [ sqrt(eta n_th (n_th+1)) Z      (n_th+1/2) I      ]
/// ```
pub fn complementary_channel(params: ChannelParams, n_modes: usize) -> Result<GaussianChannel> {
    if n_modes == 0 {
        return invalid_arg("channel needs at least one mode");
    }
    let dim = 2 * n_modes;
    let (eta, n_th) = (params.eta, params.n_th);
    let id = DMatrix::<f64>::identity(dim, dim);
    let mut t = DMatrix::zeros(2 * dim, dim);
    t.view_mut((0, 0), (dim, dim))
        .copy_from(&(&id * -(1.0 - eta).sqrt()));
    let corr = z_matrix(n_modes) * (eta * n_th * (n_th + 1.0)).sqrt();
    let mut noise = DMatrix::zeros(2 * dim, 2 * dim);
    noise
        .view_mut((0, 0), (dim, dim))
        .copy_from(&(&id * (eta * (n_th + 0.5))));
    noise
        .view_mut((dim, dim), (dim, dim))
        .copy_from(&(&id * (n_th + 0.5)));
    noise.view_mut((0, dim), (dim, dim)).copy_from(&corr);
    noise.view_mut((dim, 0), (dim, dim)).copy_from(&corr);
    GaussianChannel::new(t, noise, 2)
}

/// `x -> T x`, `V -> T V T^T + N`.
pub fn apply(channel: &GaussianChannel, state: &CovarianceState) -> Result<CovarianceState> {
    if channel.m_in != state.n_modes() {
        return invalid_arg(format!(
            "channel acts on {} modes but the state has {}",
            channel.m_in,
            state.n_modes()
        ));
    }
    let t = &channel.t;
    let cov = t * state.cov().as_matrix() * t.transpose() + &channel.noise;
    let mean = t * state.mean().as_vector();
    CovarianceState::from_parts(QuadratureVector::new(mean)?, CovMatrix::symmetrized(cov))
}

/// `k`-fold tensor power. Output modes are grouped by subsystem: for the
/// complementary channel all receiver-side blocks come first, then all
/// environment blocks.
pub fn tensor_pow(channel: &GaussianChannel, k: usize) -> Result<GaussianChannel> {
    if k == 0 {
        return invalid_arg("tensor power needs k >= 1");
    }
    let groups = channel.out_groups;
    let per_group = channel.m_out / groups;
    // output mode of (copy, local output mode)
    let out_mode = |copy: usize, local: usize| {
        let (g, j) = (local / per_group, local % per_group);
        g * k * per_group + copy * per_group + j
    };
    let out_dim = 2 * channel.m_out * k;
    let in_dim = 2 * channel.m_in * k;
    let mut t = DMatrix::zeros(out_dim, in_dim);
    let mut noise = DMatrix::zeros(out_dim, out_dim);
    for copy in 0..k {
        for r in 0..2 * channel.m_out {
            let row = 2 * out_mode(copy, r / 2) + r % 2;
            for c in 0..2 * channel.m_in {
                t[(row, 2 * channel.m_in * copy + c)] = channel.t[(r, c)];
            }
            for c in 0..2 * channel.m_out {
                let col = 2 * out_mode(copy, c / 2) + c % 2;
                noise[(row, col)] = channel.noise[(r, c)];
            }
        }
    }
    GaussianChannel::new(t, noise, groups)
}
