//! Time-sharing between thermal inputs of different photon numbers, against
//! the correlated bound at the same average photon number.
//!
//! cargo run --example convex_hull

use gaussian_capacity::capacity::{convex_hull_rate, correlated_bound, OptimizerSettings};

fn main() -> gaussian_capacity::Result<()> {
    let (eta, n_th) = (0.81, 1.0);
    let opts = OptimizerSettings::default();
    let mixtures: [(&[f64], &[f64]); 4] = [
        (&[1.0], &[1.0]),
        (&[0.5, 0.5], &[0.0, 2.0]),
        (&[0.6, 0.4], &[0.0, 2.5]),
        (&[0.2, 0.3, 0.5], &[0.0, 1.0, 1.4]),
    ];
    for (lambdas, n_bars) in mixtures {
        let (n_avg, rate) = convex_hull_rate(lambdas, n_bars, eta, n_th)?;
        let bound = correlated_bound(eta, n_th, n_avg, &opts)?;
        println!(
            "weights {lambdas:?} photons {n_bars:?}: n = {n_avg:.3}, rate {rate:.6}, bound {:.6}",
            bound.clamped()
        );
    }
    Ok(())
}
