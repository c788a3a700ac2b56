//! Achievable rates of the thermal loss channel.
//!
//! * [`f_rate`] is the coherent information of a single-mode thermal input
//!   in closed form.
//! * [`rate_correlated`] is the per-use rate of the correlated thermal state
//!   with `M` of `N` modes populated, `(M/N) f(eta, n_th, (N/M) n_bar)`.
//! * [`correlated_bound`] maximises `x f(eta, n_th, n_bar / x)` over
//!   `x in (0, 1]`, the limit of those rates over all rational `M/N`.
//! * [`convex_hull_rate`] evaluates a point of the convex hull of the
//!   single-mode rate curve, achievable with multi-component inputs.

use serde::{Deserialize, Serialize};

use crate::channels::ChannelParams;
use crate::entropy::g_clamped;
use crate::error::{invalid_arg, Error, Result};
use crate::optimize::{bisect_predicate, golden_section_max, linear_grid, log_grid};

/// Minimum gap `F - f` counted as a strict improvement.
pub const ADVANTAGE_MARGIN: f64 = 1e-9;

/// An optimum with `x* >= 1 - X_STAR_ONE_TOL` counts as the single-mode input.
pub const X_STAR_ONE_TOL: f64 = 1e-6;

/// How far below zero a closed-form entropy argument may drift before it is
/// treated as a bug rather than round-off.
const G_ARG_TOL: f64 = 1e-9;

/// Settings of the maximisation over `x = M/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    /// Points of the logarithmic grid over `[x_min, 1]`.
    pub grid_size: usize,
    /// Smallest `x` examined.
    pub x_min: f64,
    /// Width at which golden-section refinement stops.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_size: 512,
            x_min: 1e-4,
            x_tol: 1e-10,
            max_iter: 200,
        }
    }
}

impl OptimizerSettings {
    fn validate(&self) -> Result<()> {
        if self.grid_size < 64 {
            return invalid_arg(format!(
                "optimizer grid needs >= 64 points, got {}",
                self.grid_size
            ));
        }
        if !(self.x_min > 0.0 && self.x_min < 1.0) {
            return invalid_arg(format!("x_min must lie in (0, 1), got {}", self.x_min));
        }
        if !(self.x_tol > 0.0) {
            return invalid_arg("x_tol must be positive");
        }
        Ok(())
    }
}

/// Which input family attains a reported rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateSource {
    SingleMode,
    Correlated,
    /// No input in the family gives a positive rate.
    Vanishing,
}

/// A reported rate, clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub n_bar: f64,
    pub rate: f64,
    /// `None` when the rate vanishes.
    pub x_star: Option<f64>,
    pub source: RateSource,
}

/// Result of the maximisation over `x`. Values are raw (may be negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub eta: f64,
    pub n_th: f64,
    pub n_bar: f64,
    /// `max_x x f(eta, n_th, n_bar / x)`.
    pub value: f64,
    pub x_star: f64,
    /// `f(eta, n_th, n_bar)`, the `x = 1` value.
    pub single_mode: f64,
}

impl Bound {
    /// `true` when a correlated input strictly beats the single-mode one and
    /// the improved rate is positive.
    pub fn has_advantage(&self) -> bool {
        self.value > 0.0
            && self.value > self.single_mode + ADVANTAGE_MARGIN
            && self.x_star < 1.0 - X_STAR_ONE_TOL
    }

    pub fn rate_point(&self) -> RatePoint {
        if self.value <= 0.0 {
            RatePoint {
                n_bar: self.n_bar,
                rate: 0.0,
                x_star: None,
                source: RateSource::Vanishing,
            }
        } else if self.has_advantage() {
            RatePoint {
                n_bar: self.n_bar,
                rate: self.value,
                x_star: Some(self.x_star),
                source: RateSource::Correlated,
            }
        } else {
            RatePoint {
                n_bar: self.n_bar,
                rate: self.value.max(self.single_mode).max(0.0),
                x_star: Some(1.0),
                source: RateSource::SingleMode,
            }
        }
    }

    /// `max(0, F)`.
    pub fn clamped(&self) -> f64 {
        self.value.max(0.0)
    }
}

fn check_args(eta: f64, n_th: f64, n_bar: f64) -> Result<()> {
    ChannelParams::new(eta, n_th)?;
    if !(n_bar >= 0.0) || !n_bar.is_finite() {
        return invalid_arg(format!("input photon number must be >= 0, got {n_bar}"));
    }
    Ok(())
}

/// `D = sqrt(((1+eta) n + (1-eta) n_th + 1)^2 - 4 eta n (n+1))`.
///
/// Evaluated as `((1-eta) n + 1)^2 + 2 w ((1+eta) n + 1) + w^2` with
/// `w = (1-eta) n_th`, an identical sum of non-negative terms that avoids the
/// cancellation of the textbook form at large `n`.
pub fn discriminant(eta: f64, n_th: f64, n_bar: f64) -> f64 {
    let w = (1.0 - eta) * n_th;
    let u = (1.0 - eta) * n_bar + 1.0;
    (u * u + 2.0 * w * ((1.0 + eta) * n_bar + 1.0) + w * w).sqrt()
}

/// Coherent information of the thermal loss channel for a single-mode
/// thermal input with `n_bar` photons:
///
/// `g(eta n + (1-eta) n_th) - g((D + (1-eta)(n - n_th) - 1)/2) - g((D - (1-eta)(n - n_th) - 1)/2)`.
pub fn f_rate(eta: f64, n_th: f64, n_bar: f64) -> Result<f64> {
    check_args(eta, n_th, n_bar)?;
    f_unchecked(eta, n_th, n_bar)
}

fn f_unchecked(eta: f64, n_th: f64, n_bar: f64) -> Result<f64> {
    let d = discriminant(eta, n_th, n_bar);
    let skew = (1.0 - eta) * (n_bar - n_th);
    let env_plus = 0.5 * (d + skew - 1.0);
    let env_minus = 0.5 * (d - skew - 1.0);
    if env_plus < -G_ARG_TOL || env_minus < -G_ARG_TOL {
        return Err(Error::Numerical(format!(
            "negative environment entropy argument ({env_plus}, {env_minus}) at \
             eta={eta}, n_th={n_th}, n_bar={n_bar}"
        )));
    }
    Ok(g_clamped(eta * n_bar + (1.0 - eta) * n_th) - g_clamped(env_plus) - g_clamped(env_minus))
}

/// Per-use rate of the correlated thermal state with `m` of `n` modes
/// populated: `(m/n) f(eta, n_th, (n/m) n_bar)`.
pub fn rate_correlated(eta: f64, n_th: f64, m: usize, n: usize, n_bar: f64) -> Result<f64> {
    if m < 1 || m > n {
        return invalid_arg(format!("need 1 <= M <= N, got M={m}, N={n}"));
    }
    check_args(eta, n_th, n_bar)?;
    let x = m as f64 / n as f64;
    Ok(x * f_unchecked(eta, n_th, n as f64 / m as f64 * n_bar)?)
}

/// `x f(eta, n_th, n_bar / x)`.
pub fn spread_rate(eta: f64, n_th: f64, n_bar: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return invalid_arg(format!("x must lie in (0, 1], got {x}"));
    }
    check_args(eta, n_th, n_bar)?;
    Ok(x * f_unchecked(eta, n_th, n_bar / x)?)
}

/// `max_{0 < x <= 1} x f(eta, n_th, n_bar / x)` by a logarithmic grid over
/// `[x_min, 1]` followed by golden-section refinement around the best grid
/// point. `x = 1` is always on the grid, so the result never falls below
/// `f(eta, n_th, n_bar)`.
pub fn correlated_bound(
    eta: f64,
    n_th: f64,
    n_bar: f64,
    opts: &OptimizerSettings,
) -> Result<Bound> {
    check_args(eta, n_th, n_bar)?;
    opts.validate()?;
    let single_mode = f_unchecked(eta, n_th, n_bar)?;
    if n_bar == 0.0 {
        return Ok(Bound {
            eta,
            n_th,
            n_bar,
            value: single_mode,
            x_star: 1.0,
            single_mode,
        });
    }

    let xs = log_grid(opts.x_min, 1.0, opts.grid_size);
    let mut values = Vec::with_capacity(xs.len());
    for &x in &xs {
        values.push(x * f_unchecked(eta, n_th, n_bar / x)?);
    }
    let (best, _) =
        values
            .iter()
            .enumerate()
            .fold((xs.len() - 1, f64::NEG_INFINITY), |acc, (i, &v)| {
                if v > acc.1 {
                    (i, v)
                } else {
                    acc
                }
            });
    let mut x_star = xs[best];
    let mut value = values[best];

    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(xs.len() - 1)];
    let mut err = None;
    let (x_ref, v_ref) = golden_section_max(
        |x| match f_unchecked(eta, n_th, n_bar / x) {
            Ok(f) => x * f,
            Err(e) => {
                err.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        opts.x_tol,
        opts.max_iter,
    );
    if let Some(e) = err {
        return Err(e);
    }
    if v_ref > value {
        x_star = x_ref;
        value = v_ref;
    }
    Ok(Bound {
        eta,
        n_th,
        n_bar,
        value,
        x_star,
        single_mode,
    })
}

/// Convex combination of single-mode rates:
/// `(sum_i l_i n_i, sum_i l_i f(eta, n_th, n_i))`.
pub fn convex_hull_rate(
    lambdas: &[f64],
    n_bars: &[f64],
    eta: f64,
    n_th: f64,
) -> Result<(f64, f64)> {
    if lambdas.is_empty() || lambdas.len() != n_bars.len() {
        return invalid_arg(format!(
            "need matching non-empty weight and photon lists, got {} and {}",
            lambdas.len(),
            n_bars.len()
        ));
    }
    if let Some(bad) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return invalid_arg(format!("weight {bad} outside [0, 1]"));
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return invalid_arg(format!("weights must sum to 1, got {total}"));
    }
    let mut n_avg = 0.0;
    let mut rate = 0.0;
    for (&l, &n) in lambdas.iter().zip(n_bars) {
        check_args(eta, n_th, n)?;
        n_avg += l * n;
        rate += l * f_unchecked(eta, n_th, n)?;
    }
    Ok((n_avg, rate))
}

/// Decimal truncation `(floor(x 10^digits), 10^digits)` of `x`, the rational
/// sequence whose rates converge to the rate at real `x`.
pub fn rational_approximant(x: f64, digits: u32) -> (usize, usize) {
    let n = 10usize.pow(digits);
    ((x * n as f64).floor() as usize, n)
}

/// Smallest loss probability at which correlated inputs strictly beat the
/// single-mode thermal input, for fixed `n_th` and `n_bar`.
///
/// Scans `gamma` in steps of 0.005, plus points packed just below the zero of
/// `f` where the advantage window narrows as `n_bar` grows, then bisects the
/// first crossing to `1e-7`. `None` when no crossing exists in `[0, 1)`.
pub fn gamma_threshold(n_th: f64, n_bar: f64, opts: &OptimizerSettings) -> Result<Option<f64>> {
    if !(n_bar > 0.0) {
        return invalid_arg(format!("threshold search needs n_bar > 0, got {n_bar}"));
    }
    let advantage = |gamma: f64| -> Result<bool> {
        Ok(correlated_bound(1.0 - gamma, n_th, n_bar, opts)?.has_advantage())
    };
    let mut grid = linear_grid(0.0, 0.995, 200);
    if f_rate(0.005, n_th, n_bar)? <= 0.0 {
        let root = bisect_result(|g| Ok(f_rate(1.0 - g, n_th, n_bar)? <= 0.0), 0.0, 0.995)?;
        grid.extend(
            (1..=60)
                .map(|k| root - 1e-2 * 0.8f64.powi(k))
                .filter(|&g| g > 0.0),
        );
        grid.sort_by(f64::total_cmp);
    }
    let mut prev = None;
    for &gamma in &grid {
        if advantage(gamma)? {
            let Some(lo) = prev else {
                return Ok(Some(gamma));
            };
            return bisect_result(&advantage, lo, gamma).map(Some);
        }
        prev = Some(gamma);
    }
    Ok(None)
}

/// Largest mean photon number at which correlated inputs strictly beat the
/// single-mode thermal input, for fixed channel parameters.
///
/// Scans `n_bar` on a logarithmic grid over `[1e-3, 1e3]`, then bisects the
/// last crossing to `1e-6`. `None` when there is no advantage anywhere on
/// the grid or it persists to the top of the range.
pub fn nbar_threshold(eta: f64, n_th: f64, opts: &OptimizerSettings) -> Result<Option<f64>> {
    ChannelParams::new(eta, n_th)?;
    let no_advantage = |n_bar: f64| -> Result<bool> {
        Ok(!correlated_bound(eta, n_th, n_bar, opts)?.has_advantage())
    };
    let grid = log_grid(1e-3, 1e3, 241);
    let mut last = None;
    for (i, &n_bar) in grid.iter().enumerate() {
        if !no_advantage(n_bar)? {
            last = Some(i);
        }
    }
    match last {
        None => Ok(None),
        Some(i) if i + 1 == grid.len() => Ok(None),
        Some(i) => bisect_result(no_advantage, grid[i], grid[i + 1]).map(Some),
    }
}

/// Bisection with a fallible predicate; `pred(lo)` is false, `pred(hi)` true.
fn bisect_result<P>(mut pred: P, lo: f64, hi: f64) -> Result<f64>
where
    P: FnMut(f64) -> Result<bool>,
{
    let mut err = None;
    let tol = 1e-7 * hi.abs().max(1.0);
    let (lo, hi) = bisect_predicate(
        |x| match pred(x) {
            Ok(b) => b,
            Err(e) => {
                err.get_or_insert(e);
                true
            }
        },
        lo,
        hi,
        tol,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(0.5 * (lo + hi)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::g;
    use approx::assert_abs_diff_eq;

    fn opts() -> OptimizerSettings {
        OptimizerSettings::default()
    }

    #[test]
    fn lossless_rate_is_thermal_entropy() {
        assert_abs_diff_eq!(f_rate(1.0, 1.0, 1.0).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(discriminant(1.0, 5.0, 2.0), 1.0, epsilon = 1e-12);
        for n in [0.1, 3.0, 10.0] {
            assert_abs_diff_eq!(f_rate(1.0, 0.3, n).unwrap(), g(n).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_input_gives_zero_rate() {
        for eta in [0.0, 0.1, 0.5, 0.81, 1.0] {
            for n_th in [0.0, 0.5, 1.0, 5.0] {
                assert_abs_diff_eq!(f_rate(eta, n_th, 0.0).unwrap(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(f_rate(1.5, 0.0, 1.0).is_err());
        assert!(f_rate(0.5, -1.0, 1.0).is_err());
        assert!(f_rate(0.5, 0.0, -1.0).is_err());
        assert!(rate_correlated(0.5, 0.0, 3, 2, 1.0).is_err());
        assert!(rate_correlated(0.5, 0.0, 0, 2, 1.0).is_err());
        assert!(spread_rate(0.5, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn correlated_rate_substitution() {
        assert_abs_diff_eq!(
            rate_correlated(0.7, 1.0, 3, 3, 1.0).unwrap(),
            f_rate(0.7, 1.0, 1.0).unwrap(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            rate_correlated(0.7, 1.0, 1, 2, 1.0).unwrap(),
            0.5 * f_rate(0.7, 1.0, 2.0).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn lossless_bound_is_single_mode() {
        // x g(n/x) = n g(y)/y with y = n/x; g(y)/y decreases, so x = 1 wins.
        for n_bar in [0.1, 1.0, 4.0] {
            let b = correlated_bound(1.0, 1.0, n_bar, &opts()).unwrap();
            assert_abs_diff_eq!(b.value, g(n_bar).unwrap(), epsilon = 1e-12);
            assert_eq!(b.x_star, 1.0);
            assert!(!b.has_advantage());
            let xs = log_grid(1e-3, 1.0, 2000);
            assert!(xs
                .iter()
                .all(|&x| x * g(n_bar / x).unwrap() <= b.value + 1e-12));
        }
    }

    #[test]
    fn low_loss_prefers_single_mode() {
        let b = correlated_bound(0.9, 1.0, 1.0, &opts()).unwrap();
        assert_eq!(b.value, b.single_mode);
        assert_eq!(b.rate_point().source, RateSource::SingleMode);
        assert_eq!(b.rate_point().x_star, Some(1.0));
    }

    #[test]
    fn high_loss_prefers_correlated() {
        let b = correlated_bound(0.81, 1.0, 1.0, &opts()).unwrap();
        assert!(b.has_advantage());
        assert!(b.x_star < 1.0);
        assert_eq!(b.rate_point().source, RateSource::Correlated);
        // regression values from this implementation
        assert_abs_diff_eq!(b.value, REGRESSION_F_081, epsilon = 1e-9);
        assert_abs_diff_eq!(b.x_star, REGRESSION_X_081, epsilon = 1e-6);
    }

    const REGRESSION_F_081: f64 = 0.015298547805507637;
    const REGRESSION_X_081: f64 = 0.40684147850892743;

    #[test]
    fn discriminant_matches_textbook_form() {
        for eta in [0.0, 0.3, 0.81, 1.0] {
            for n_th in [0.0, 1.0, 4.0] {
                for n in [0.0, 0.5, 2.0, 10.0] {
                    let a: f64 = (1.0 + eta) * n + (1.0 - eta) * n_th + 1.0;
                    let textbook = (a * a - 4.0 * eta * n * (n + 1.0)).sqrt();
                    assert_abs_diff_eq!(discriminant(eta, n_th, n), textbook, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn bound_dominates_single_mode() {
        for eta in [0.3, 0.55, 0.7, 0.85] {
            for n_th in [0.0, 0.5, 2.0] {
                for n_bar in [0.05, 0.5, 3.0] {
                    let b = correlated_bound(eta, n_th, n_bar, &opts()).unwrap();
                    assert!(b.value >= b.single_mode - 1e-12);
                    assert!(b.clamped() >= b.single_mode.max(0.0) - 1e-12);
                }
            }
        }
    }

    #[test]
    fn refinement_attains_grid_maximum() {
        // The refined optimum is at least as good as a dense brute-force scan,
        // up to the curvature-limited error of the scan itself.
        let (eta, n_th, n_bar) = (0.81, 1.0, 1.0);
        let b = correlated_bound(eta, n_th, n_bar, &opts()).unwrap();
        let dense = linear_grid(1e-4, 1.0, 200_001);
        let (x_brute, v_brute) = dense
            .iter()
            .map(|&x| (x, spread_rate(eta, n_th, n_bar, x).unwrap()))
            .fold(
                (0.0, f64::NEG_INFINITY),
                |a, b| if b.1 > a.1 { b } else { a },
            );
        assert!(b.value >= v_brute - 1e-12);
        assert!((b.x_star - x_brute).abs() < 1e-4);
    }

    #[test]
    fn optimizer_rejects_small_grid() {
        let o = OptimizerSettings {
            grid_size: 10,
            ..OptimizerSettings::default()
        };
        assert!(correlated_bound(0.5, 0.0, 1.0, &o).is_err());
    }

    #[test]
    fn convex_hull_examples() {
        let (n, r) = convex_hull_rate(&[1.0], &[1.5], 0.7, 1.0).unwrap();
        assert_eq!(n, 1.5);
        assert_abs_diff_eq!(r, f_rate(0.7, 1.0, 1.5).unwrap(), epsilon = 1e-15);

        let (n, r) = convex_hull_rate(&[0.5, 0.5], &[0.0, 2.0], 0.7, 1.0).unwrap();
        assert_abs_diff_eq!(n, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r, 0.5 * f_rate(0.7, 1.0, 2.0).unwrap(), epsilon = 1e-12);

        assert!(convex_hull_rate(&[0.5, 0.6], &[0.0, 2.0], 0.7, 1.0).is_err());
        assert!(convex_hull_rate(&[1.5, -0.5], &[0.0, 2.0], 0.7, 1.0).is_err());
    }

    #[test]
    fn two_component_hull_is_spread_rate() {
        for x in [0.1, 0.37, 0.8] {
            let (n, r) = convex_hull_rate(&[1.0 - x, x], &[0.0, 1.0 / x], 0.75, 1.0).unwrap();
            assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r, spread_rate(0.75, 1.0, 1.0, x).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn rational_approximants_converge() {
        let (eta, n_th, n_bar) = (0.81, 1.0, 1.0);
        let x = std::f64::consts::FRAC_1_PI + 0.1;
        let target = spread_rate(eta, n_th, n_bar, x).unwrap();
        let (m, n) = rational_approximant(x, 7);
        let r = rate_correlated(eta, n_th, m, n, n_bar).unwrap();
        assert!((r - target).abs() <= 1e-6);
        let (m3, n3) = rational_approximant(x, 3);
        assert_eq!((m3, n3), (418, 1000));
        assert_eq!(
            rate_correlated(eta, n_th, m3, n3, n_bar).unwrap(),
            spread_rate(eta, n_th, n_bar, m3 as f64 / n3 as f64).unwrap()
        );
    }

    #[test]
    fn lossless_has_no_nbar_threshold() {
        assert_eq!(nbar_threshold(1.0, 1.0, &opts()).unwrap(), None);
    }
}
