//! CSV of rates against loss probability at n_bar = n_th = 1.
//!
//! cargo run --example sweep_gamma > sweep.csv

use std::io;

use gaussian_capacity::capacity::OptimizerSettings;
use gaussian_capacity::optimize::linear_grid;
use gaussian_capacity::report::{sweep_gamma, write_sweep_csv, SweepAxis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = sweep_gamma(
        1.0,
        1.0,
        &linear_grid(0.0, 0.5, 51),
        &OptimizerSettings::default(),
    )?;
    write_sweep_csv(io::stdout().lock(), SweepAxis::Gamma, &rows)?;

    let advantage: Vec<_> = rows
        .iter()
        .filter(|r| r.big_f > r.f)
        .map(|r| r.gamma)
        .collect();
    if let (Some(first), Some(last)) = (advantage.first(), advantage.last()) {
        eprintln!("correlated inputs win for gamma in [{first}, {last}]");
    }
    Ok(())
}
