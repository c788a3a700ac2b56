//! Real linear algebra over quadrature space.
//!
//! Quadratures are ordered `(q1, p1, q2, p2, ...)` and normalised so that the
//! vacuum has covariance `I/2`. The symplectic form is the block-diagonal
//! matrix with one `[[0, 1], [-1, 0]]` block per mode.

use nalgebra::{Cholesky, DMatrix, DVector, Matrix2, SymmetricEigen};

use crate::error::{invalid_arg, Error, Result};

/// Symplectic eigenvalues within this distance below 1/2 are snapped to 1/2.
pub const VACUUM_CLAMP_TOL: f64 = 1e-10;

/// Largest tolerated asymmetry `|V - V^T|` before a matrix is rejected.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Mean quadrature vector of an `n`-mode state (length `2n`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureVector(DVector<f64>);

impl QuadratureVector {
    pub fn new(entries: DVector<f64>) -> Result<Self> {
        if entries.is_empty() || !entries.len().is_multiple_of(2) {
            return invalid_arg(format!(
                "quadrature vector length must be even and positive, got {}",
                entries.len()
            ));
        }
        Ok(Self(entries))
    }

    pub fn zeros(n_modes: usize) -> Self {
        Self(DVector::zeros(2 * n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }
}

/// Symmetric `2n x 2n` covariance matrix.
///
/// Construction symmetrises the input as `(V + V^T) / 2`, so round-off from
/// repeated `T V T^T + N` updates never accumulates.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix(DMatrix<f64>);

impl CovMatrix {
    /// Accepts a square, even-dimension matrix that is symmetric up to a
    /// relative [`SYMMETRY_TOL`]. Larger asymmetry is an invalid state.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_even_square(&m)?;
        let scale = m.amax().max(1.0);
        let asym = (&m - m.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidState(format!(
                "covariance matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrises without any tolerance check. Used for outputs of exact
    /// linear maps where asymmetry can only be round-off.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn identity_scaled(n_modes: usize, value: f64) -> Self {
        Self(DMatrix::identity(2 * n_modes, 2 * n_modes) * value)
    }

    pub fn n_modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// `S V S^T` for a `2n x 2n` transformation `S`.
    pub fn conjugate(&self, s: &DMatrix<f64>) -> Result<Self> {
        if s.nrows() != self.0.nrows() || s.ncols() != self.0.ncols() {
            return invalid_arg(format!(
                "transformation is {}x{}, covariance is {}x{}",
                s.nrows(),
                s.ncols(),
                self.0.nrows(),
                self.0.ncols()
            ));
        }
        Ok(Self::symmetrized(s * &self.0 * s.transpose()))
    }

    /// The `2x2` block coupling modes `j` and `k`.
    pub fn block(&self, j: usize, k: usize) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2 * j, 2 * k).into_owned()
    }
}

fn check_even_square(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return invalid_arg(format!(
            "expected a square matrix of positive even dimension, got {}x{}",
            m.nrows(),
            m.ncols()
        ));
    }
    Ok(())
}

/// The symplectic form on `n_modes` modes.
pub fn symplectic_form(n_modes: usize) -> Result<DMatrix<f64>> {
    if n_modes == 0 {
        return invalid_arg("symplectic form needs at least one mode");
    }
    let dim = 2 * n_modes;
    let mut omega = DMatrix::zeros(dim, dim);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    Ok(omega)
}

/// Phase-space rotation `R(theta) = [[cos, -sin], [sin, cos]]`.
pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// `Z_2 = diag(1, -1)` repeated over `n_modes` modes.
pub fn z_matrix(n_modes: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_fn(2 * n_modes, |i, _| {
        if i % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Block-diagonal direct sum of square matrices.
pub fn direct_sum(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let dim: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(dim, dim);
    let mut offset = 0;
    for b in blocks {
        out.view_mut((offset, offset), (b.nrows(), b.ncols()))
            .copy_from(*b);
        offset += b.nrows();
    }
    out
}

/// Symplectic eigenvalues of `V`, sorted ascending.
///
/// These are the moduli of the conjugate pairs `±i nu` in the spectrum of
/// `Omega V`, obtained from a Cholesky factor and a symmetric eigensolve. Values less than
/// [`VACUUM_CLAMP_TOL`] below 1/2 are snapped to 1/2.
pub fn symplectic_eigenvalues(v: &CovMatrix) -> Result<Vec<f64>> {
    let m = v.as_matrix();
    let Some(chol) = Cholesky::new(m.clone()) else {
        return Err(Error::InvalidState(
            "covariance matrix is not positive definite".into(),
        ));
    };
    // V = L L^T makes Omega V similar to the antisymmetric A = L^T Omega L,
    // whose eigenvalues are +-i nu; A^T A has nu^2, each twice.
    let l = chol.l();
    let a = l.transpose() * symplectic_form(v.n_modes())? * &l;
    let ata = (a.transpose() * &a).symmetric_part();
    let mut moduli: Vec<f64> = SymmetricEigen::new(ata)
        .eigenvalues
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    moduli.sort_by(f64::total_cmp);

    let mut nu: Vec<f64> = moduli
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .map(|x| {
            if (0.5 - VACUUM_CLAMP_TOL..0.5).contains(&x) {
                0.5
            } else {
                x
            }
        })
        .collect();
    nu.sort_by(f64::total_cmp);
    Ok(nu)
}

/// `true` iff `max |S S^T - I| <= tol`.
pub fn is_orthogonal(s: &DMatrix<f64>, tol: f64) -> bool {
    if s.nrows() != s.ncols() {
        return false;
    }
    let dev = s * s.transpose() - DMatrix::<f64>::identity(s.nrows(), s.ncols());
    dev.amax() <= tol
}

/// `true` iff `S Omega S^T = Omega` within `tol` (max-norm).
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> bool {
    if s.nrows() != s.ncols() || !s.nrows().is_multiple_of(2) || s.nrows() == 0 {
        return false;
    }
    let omega = symplectic_form(s.nrows() / 2).expect("positive mode count");
    (s * &omega * s.transpose() - omega).amax() <= tol
}
