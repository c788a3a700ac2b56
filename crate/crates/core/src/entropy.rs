//! Von Neumann entropy of Gaussian states and coherent information of the
//! thermal loss channel. All logarithms are base 2.

use crate::channels::{apply, complementary_channel, thermal_loss_channel, ChannelParams};
use crate::error::{invalid_arg, Error, Result};
use crate::states::CovarianceState;

/// Arguments of [`g`] down to this far below zero are treated as zero.
pub const G_CLAMP_TOL: f64 = 1e-10;

/// Entropy in bits of a thermal state with mean photon number `x`:
/// `(x+1) log2(x+1) - x log2 x`.
pub fn g(x: f64) -> Result<f64> {
    if x.is_nan() || x < -G_CLAMP_TOL {
        return invalid_arg(format!("thermal entropy needs x >= 0, got {x}"));
    }
    Ok(g_clamped(x))
}

pub(crate) fn g_clamped(x: f64) -> f64 {
    let x = x.max(0.0);
    let tail = if x < 1e-15 { 0.0 } else { x * x.log2() };
    (x + 1.0) * (x + 1.0).log2() - tail
}

/// Entropy of a Gaussian state, `sum_k g(nu_k - 1/2)`.
pub fn von_neumann_entropy(state: &CovarianceState) -> Result<f64> {
    let nu = state.symplectic_eigenvalues()?;
    if nu[0] < 0.5 - G_CLAMP_TOL {
        return Err(Error::InvalidState(format!(
            "symplectic eigenvalue {} below 1/2",
            nu[0]
        )));
    }
    Ok(nu.iter().map(|&v| g_clamped(v - 0.5)).sum())
}

/// `S(N^{⊗n}(rho)) - S((N^c)^{⊗n}(rho))` for an `n`-mode input, in bits
/// per block of `n` channel uses. May be negative.
pub fn coherent_information(params: ChannelParams, input: &CovarianceState) -> Result<f64> {
    let n = input.n_modes();
    let out = apply(&thermal_loss_channel(params, n)?, input)?;
    let env = apply(&complementary_channel(params, n)?, input)?;
    Ok(von_neumann_entropy(&out)? - von_neumann_entropy(&env)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::f_rate;
    use crate::states::{correlated_thermal, thermal_state, vacuum, CorrelatedSpec, ThermalSpec};
    use approx::assert_abs_diff_eq;

    fn thermal(n_bar: f64) -> CovarianceState {
        thermal_state(ThermalSpec::new(n_bar).unwrap(), 1).unwrap()
    }

    /// Entropy of the geometric photon distribution, truncated.
    fn fock_entropy(n_bar: f64, cutoff: usize) -> f64 {
        let r = n_bar / (n_bar + 1.0);
        (0..cutoff)
            .map(|k| {
                let p = r.powi(k as i32) / (n_bar + 1.0);
                if p > 0.0 {
                    -p * p.log2()
                } else {
                    0.0
                }
            })
            .sum()
    }

    #[test]
    fn g_values() {
        assert_eq!(g(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(g(1.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g(0.5).unwrap(), 1.377443751081734, epsilon = 1e-12);
        assert_abs_diff_eq!(g(0.5).unwrap(), fock_entropy(0.5, 200), epsilon = 1e-12);
        assert_abs_diff_eq!(g(-5e-11).unwrap(), 0.0);
        assert!(g(-1e-6).is_err());
    }

    #[test]
    fn g_matches_fock_series() {
        for x in [0.01, 0.3, 1.0, 2.5] {
            assert_abs_diff_eq!(g(x).unwrap(), fock_entropy(x, 2000), epsilon = 1e-10);
        }
    }

    #[test]
    fn g_monotone_concave() {
        let h = 1e-3;
        let mut x = 0.01;
        while x < 20.0 {
            let (a, b, c) = (
                g(x - h / 2.0).unwrap(),
                g(x).unwrap(),
                g(x + h / 2.0).unwrap(),
            );
            assert!(c > b && b > a, "not increasing at {x}");
            assert!(a + c - 2.0 * b < 0.0, "not concave at {x}");
            x += 0.05;
        }
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&vacuum(3).unwrap()).unwrap(), 0.0);
        assert_abs_diff_eq!(
            von_neumann_entropy(&thermal(1.0)).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        let s = correlated_thermal(CorrelatedSpec::new(1, 4, 1.0).unwrap()).unwrap();
        // spectrum {4.5, 0.5, 0.5, 0.5}, so the entropy is g(4)
        let g4 = 5.0 * 5f64.log2() - 4.0 * 4f64.log2();
        assert_abs_diff_eq!(g4, 3.609640474436812, epsilon = 1e-12);
        assert_abs_diff_eq!(von_neumann_entropy(&s).unwrap(), g4, epsilon = 1e-9);
    }

    #[test]
    fn coherent_information_lossless() {
        let p = ChannelParams::new(1.0, 2.0).unwrap();
        for n_bar in [0.1, 1.0, 3.0] {
            assert_abs_diff_eq!(
                coherent_information(p, &thermal(n_bar)).unwrap(),
                g(n_bar).unwrap(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn coherent_information_matches_closed_form() {
        let p = ChannelParams::new(0.6, 1.0).unwrap();
        assert_abs_diff_eq!(
            coherent_information(p, &thermal(1.0)).unwrap(),
            f_rate(0.6, 1.0, 1.0).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn symmetric_pure_loss_vanishes() {
        let p = ChannelParams::new(0.5, 0.0).unwrap();
        for n_bar in [0.2, 1.0, 7.0] {
            assert_abs_diff_eq!(
                coherent_information(p, &thermal(n_bar)).unwrap(),
                0.0,
                epsilon = 1e-9
            );
        }
    }
}
