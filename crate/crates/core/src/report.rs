//! Serializable reports behind the command-line front-end: rate summaries,
//! parameter sweeps, threshold searches, compiler metrics and a self-check.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::capacity::{
    correlated_bound, f_rate, gamma_threshold, nbar_threshold, rate_correlated, Bound,
    OptimizerSettings, RateSource,
};
use crate::channels::ChannelParams;
use crate::circuits::{
    circuit_to_symplectic, compile_gft, compile_perfect_shuffle, gft_symplectic,
    prepare_correlated_circuit, GaussianCircuit,
};
use crate::entropy::coherent_information;
use crate::error::{invalid_arg, Result};
use crate::states::{correlated_thermal, thermal_state, CorrelatedSpec, ThermalSpec};

/// Tolerance of the analytic-vs-covariance rate comparison.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Numeric cross-check of the correlated rate against the covariance-level
/// coherent information of the `M`-of-`N` state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityCheck {
    pub m: usize,
    pub n: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_diff: f64,
    pub passed: bool,
}

pub fn identity_check(
    params: ChannelParams,
    m: usize,
    n: usize,
    n_bar: f64,
) -> Result<IdentityCheck> {
    let analytic = rate_correlated(params.eta(), params.n_th(), m, n, n_bar)?;
    let state = correlated_thermal(CorrelatedSpec::new(m, n, n_bar)?)?;
    let numeric = coherent_information(params, &state)? / n as f64;
    let abs_diff = (analytic - numeric).abs();
    Ok(IdentityCheck {
        m,
        n,
        analytic,
        numeric,
        abs_diff,
        passed: abs_diff <= IDENTITY_TOL,
    })
}

/// Output of the `rate` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateReport {
    pub eta: f64,
    pub n_th: f64,
    pub n_bar: f64,
    /// Single-mode thermal rate, clamped at 0.
    pub f: f64,
    /// Correlated-input bound, clamped at 0.
    #[serde(rename = "F")]
    pub big_f: f64,
    /// `None` when both rates vanish.
    pub x_star: Option<f64>,
    pub source: RateSource,
    pub f_raw: f64,
    #[serde(rename = "F_raw")]
    pub big_f_raw: f64,
    pub check: Option<IdentityCheck>,
}

pub fn rate_report(
    params: ChannelParams,
    n_bar: f64,
    check_mn: Option<(usize, usize)>,
    opts: &OptimizerSettings,
) -> Result<RateReport> {
    let bound = correlated_bound(params.eta(), params.n_th(), n_bar, opts)?;
    let point = bound.rate_point();
    let check = check_mn
        .map(|(m, n)| identity_check(params, m, n, n_bar))
        .transpose()?;
    Ok(RateReport {
        eta: params.eta(),
        n_th: params.n_th(),
        n_bar,
        f: bound.single_mode.max(0.0),
        big_f: point.rate,
        x_star: point.x_star,
        source: point.source,
        f_raw: bound.single_mode,
        big_f_raw: bound.value,
        check,
    })
}

/// One row of a sweep. The swept coordinate is `gamma` or `n_bar`
/// depending on the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRow {
    pub gamma: f64,
    pub n_bar: f64,
    pub f: f64,
    #[serde(rename = "F")]
    pub big_f: f64,
    /// Optimal `M/N`; 0 when every rate vanishes.
    pub x_star: f64,
    pub source: RateSource,
    pub f_raw: f64,
    #[serde(rename = "F_raw")]
    pub big_f_raw: f64,
}

impl SweepRow {
    fn from_bound(b: &Bound) -> Self {
        let point = b.rate_point();
        Self {
            gamma: 1.0 - b.eta,
            n_bar: b.n_bar,
            f: b.single_mode.max(0.0),
            big_f: point.rate,
            x_star: point.x_star.unwrap_or(0.0),
            source: point.source,
            f_raw: b.single_mode,
            big_f_raw: b.value,
        }
    }
}

/// Which coordinate a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Gamma,
    NBar,
}

/// Rates over a grid of loss probabilities at fixed `n_th`, `n_bar`.
pub fn sweep_gamma(
    n_th: f64,
    n_bar: f64,
    gammas: &[f64],
    opts: &OptimizerSettings,
) -> Result<Vec<SweepRow>> {
    gammas
        .iter()
        .map(|&gamma| {
            if !(0.0..1.0).contains(&gamma) {
                return invalid_arg(format!("gamma grid must lie in [0, 1), got {gamma}"));
            }
            correlated_bound(1.0 - gamma, n_th, n_bar, opts).map(|b| SweepRow::from_bound(&b))
        })
        .collect()
}

/// Rates over a grid of input photon numbers at fixed channel parameters.
pub fn sweep_nbar(
    params: ChannelParams,
    n_bars: &[f64],
    opts: &OptimizerSettings,
) -> Result<Vec<SweepRow>> {
    n_bars
        .iter()
        .map(|&n_bar| {
            if !(n_bar > 0.0) {
                return invalid_arg(format!("n_bar grid must be positive, got {n_bar}"));
            }
            correlated_bound(params.eta(), params.n_th(), n_bar, opts)
                .map(|b| SweepRow::from_bound(&b))
        })
        .collect()
}

/// Fixed-point rendering with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 40) as usize;
    format!("{x:.decimals$}")
}

fn source_label(s: RateSource) -> &'static str {
    match s {
        RateSource::SingleMode => "single_mode",
        RateSource::Correlated => "correlated",
        RateSource::Vanishing => "vanishing",
    }
}

/// CSV with a header row, LF line endings, swept coordinate first.
pub fn write_sweep_csv<W: Write>(mut w: W, axis: SweepAxis, rows: &[SweepRow]) -> io::Result<()> {
    let key = match axis {
        SweepAxis::Gamma => "gamma",
        SweepAxis::NBar => "n_bar",
    };
    writeln!(w, "{key},f,F,x_star,source,f_raw,F_raw")?;
    for r in rows {
        let x = match axis {
            SweepAxis::Gamma => r.gamma,
            SweepAxis::NBar => r.n_bar,
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            format_sig12(x),
            format_sig12(r.f),
            format_sig12(r.big_f),
            format_sig12(r.x_star),
            source_label(r.source),
            format_sig12(r.f_raw),
            format_sig12(r.big_f_raw)
        )?;
    }
    Ok(())
}

/// Output of the `thresholds` subcommand. `None` means no crossover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdReport {
    pub n_th: f64,
    pub n_bar: f64,
    pub eta: f64,
    pub gamma_star: Option<f64>,
    pub gamma_tolerance: f64,
    pub n_bar_star: Option<f64>,
    pub n_bar_tolerance: f64,
}

pub fn threshold_report(
    eta: f64,
    n_th: f64,
    n_bar: f64,
    opts: &OptimizerSettings,
) -> Result<ThresholdReport> {
    Ok(ThresholdReport {
        n_th,
        n_bar,
        eta,
        gamma_star: gamma_threshold(n_th, n_bar, opts)?,
        gamma_tolerance: 1e-4,
        n_bar_star: nbar_threshold(eta, n_th, opts)?,
        n_bar_tolerance: 1e-3,
    })
}

/// Metrics of a compiled GFT circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompileReport {
    pub n: usize,
    pub gate_count: usize,
    pub operation_count: usize,
    pub swap_count: usize,
    pub depth: usize,
    /// Max-norm distance between compiled and analytic symplectic matrices.
    pub max_deviation: f64,
    /// `4 N log2 N`.
    pub gate_bound: usize,
    /// `4 (log2 N)^2`.
    pub depth_bound: usize,
}

pub fn compile_report(n: usize) -> Result<(GaussianCircuit, CompileReport)> {
    let circuit = compile_gft(n)?;
    let dev = (circuit_to_symplectic(&circuit) - gft_symplectic(n)?).amax();
    let log = n.trailing_zeros() as usize;
    let report = CompileReport {
        n,
        gate_count: circuit.gate_count(),
        operation_count: circuit.operation_count(),
        swap_count: circuit.swap_count(),
        depth: circuit.depth(),
        max_deviation: dev,
        gate_bound: 4 * n * log,
        depth_bound: 4 * log * log,
    };
    Ok((circuit, report))
}

/// One line of the self-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Quick end-to-end consistency checks across all modules.
pub fn selfcheck() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for (eta, n_th, n_bar) in [(0.6, 1.0, 1.0), (0.81, 0.1, 10.0), (0.25, 5.0, 0.1)] {
        let p = ChannelParams::new(eta, n_th)?;
        let state = thermal_state(ThermalSpec::new(n_bar)?, 1)?;
        worst = worst.max((coherent_information(p, &state)? - f_rate(eta, n_th, n_bar)?).abs());
    }
    out.push(CheckOutcome {
        name: "closed-form rate vs covariance coherent information",
        passed: worst <= IDENTITY_TOL,
        detail: format!("max |diff| = {worst:.3e}"),
    });

    let p = ChannelParams::new(0.75, 1.0)?;
    let mut worst = 0.0f64;
    for (m, n) in [(1, 2), (1, 4), (3, 5)] {
        worst = worst.max(identity_check(p, m, n, 0.8)?.abs_diff);
    }
    out.push(CheckOutcome {
        name: "correlated rate identity",
        passed: worst <= IDENTITY_TOL,
        detail: format!("max |diff| = {worst:.3e}"),
    });

    let (_, r) = compile_report(16)?;
    out.push(CheckOutcome {
        name: "GFT compiler (N=16)",
        passed: r.max_deviation <= 1e-9 && r.gate_count <= r.gate_bound && r.depth <= r.depth_bound,
        detail: format!(
            "deviation {:.3e}, gates {}/{}, depth {}/{}",
            r.max_deviation, r.gate_count, r.gate_bound, r.depth, r.depth_bound
        ),
    });

    let shuffle = compile_perfect_shuffle(16)?;
    let perm = shuffle.mode_permutation().unwrap_or_default();
    let ok = perm.len() == 16 && (0..8).all(|k| perm[2 * k] == k && perm[2 * k + 1] == 8 + k);
    out.push(CheckOutcome {
        name: "perfect shuffle (16 modes)",
        passed: ok && shuffle.swap_count() == 12 && shuffle.depth() == 3,
        detail: format!(
            "{} swaps in {} layers",
            shuffle.swap_count(),
            shuffle.depth()
        ),
    });

    let spec = CorrelatedSpec::new(1, 4, 0.5)?;
    let full = prepare_correlated_circuit(spec)?.act_on_vacuum()?;
    let reduced = full.reduced(&[0, 1, 2, 3])?;
    let dev = (reduced.cov().as_matrix() - correlated_thermal(spec)?.cov().as_matrix()).amax();
    out.push(CheckOutcome {
        name: "state-preparation circuit",
        passed: dev <= 1e-9,
        detail: format!("deviation {dev:.3e}"),
    });

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1.0), "1.00000000000");
        assert_eq!(format_sig12(0.1775), "0.177500000000");
        assert_eq!(format_sig12(-2.5e-3), "-0.00250000000000");
        assert_eq!(format_sig12(123.456), "123.456000000");
    }

    #[test]
    fn lossless_rate_report() {
        let r = rate_report(
            ChannelParams::new(1.0, 0.0).unwrap(),
            1.0,
            None,
            &OptimizerSettings::default(),
        )
        .unwrap();
        assert!((r.f - 2.0).abs() < 1e-12 && (r.big_f - 2.0).abs() < 1e-12);
        assert_eq!(r.x_star, Some(1.0));
    }

    #[test]
    fn rate_report_with_check() {
        let r = rate_report(
            ChannelParams::new(0.81, 1.0).unwrap(),
            1.0,
            Some((1, 4)),
            &OptimizerSettings::default(),
        )
        .unwrap();
        let c = r.check.unwrap();
        assert!(c.passed && c.abs_diff <= 1e-9);
    }

    #[test]
    fn sweep_rejects_out_of_domain() {
        let o = OptimizerSettings::default();
        assert!(sweep_gamma(1.0, 1.0, &[1.0], &o).is_err());
        assert!(sweep_nbar(ChannelParams::new(0.8, 1.0).unwrap(), &[0.0], &o).is_err());
    }

    #[test]
    fn selfcheck_passes() {
        for c in selfcheck().unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
