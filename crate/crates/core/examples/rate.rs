//! Single-mode rate, correlated bound and the optimal M/N for a few channels.
//!
//! cargo run --example rate

use gaussian_capacity::capacity::rational_approximant;
use gaussian_capacity::capacity::{correlated_bound, OptimizerSettings};
use gaussian_capacity::channels::ChannelParams;
use gaussian_capacity::report::identity_check;

fn main() -> gaussian_capacity::Result<()> {
    let opts = OptimizerSettings::default();
    println!(
        "{:>6} {:>6} {:>6} {:>12} {:>12} {:>10}  source",
        "eta", "n_th", "n_bar", "f", "F", "x*"
    );
    for (eta, n_th, n_bar) in [
        (0.9, 1.0, 1.0),
        (0.81, 1.0, 1.0),
        (0.81, 1.0, 3.0),
        (0.7, 1.0, 1.0),
        (0.95, 0.0, 2.0),
    ] {
        let b = correlated_bound(eta, n_th, n_bar, &opts)?;
        let p = b.rate_point();
        let x = p.x_star.map_or("-".to_string(), |x| format!("{x:.6}"));
        println!(
            "{eta:>6} {n_th:>6} {n_bar:>6} {:>12.8} {:>12.8} {x:>10}  {:?}",
            b.single_mode.max(0.0),
            p.rate,
            p.source
        );
    }

    // the bound is reached through M-of-N correlated states with M/N -> x*
    let b = correlated_bound(0.81, 1.0, 1.0, &opts)?;
    let params = ChannelParams::new(0.81, 1.0)?;
    println!("\nM/N approximants of x* = {:.6}", b.x_star);
    for digits in 1..=2 {
        let (m, n) = rational_approximant(b.x_star, digits);
        let c = identity_check(params, m, n, 1.0)?;
        println!(
            "  M/N = {m}/{n}: rate {:.8} (covariance-level {:.8})",
            c.analytic, c.numeric
        );
    }
    Ok(())
}
