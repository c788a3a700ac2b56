//! Crossover points where correlated multi-mode inputs start to beat the
//! single-mode thermal input.
//!
//! cargo run --example thresholds

use gaussian_capacity::capacity::{gamma_threshold, nbar_threshold, OptimizerSettings};

fn main() -> gaussian_capacity::Result<()> {
    let opts = OptimizerSettings::default();

    println!("loss-probability crossover gamma* at n_bar = 1");
    for n_th in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0] {
        match gamma_threshold(n_th, 1.0, &opts)? {
            Some(g) => println!("  n_th = {n_th:<4}  gamma* = {g:.6}"),
            None => println!("  n_th = {n_th:<4}  no crossover below gamma = 0.995"),
        }
    }

    println!("photon-number crossover n_bar* (advantage below it)");
    for (eta, n_th) in [(0.81, 1.0), (0.81, 2.0), (0.7, 1.0), (0.9, 0.5), (1.0, 1.0)] {
        match nbar_threshold(eta, n_th, &opts)? {
            Some(n) => println!("  eta = {eta:<4} n_th = {n_th:<4}  n_bar* = {n:.6}"),
            None => println!("  eta = {eta:<4} n_th = {n_th:<4}  none in [1e-3, 1e3]"),
        }
    }
    Ok(())
}
