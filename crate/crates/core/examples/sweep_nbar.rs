//! CSV of rates against input photon number for eta = 0.81, n_th = 1.
//!
//! cargo run --example sweep_nbar > sweep.csv

use std::io;

use gaussian_capacity::capacity::OptimizerSettings;
use gaussian_capacity::channels::ChannelParams;
use gaussian_capacity::optimize::linear_grid;
use gaussian_capacity::report::{sweep_nbar, write_sweep_csv, SweepAxis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ChannelParams::new(0.81, 1.0)?;
    let rows = sweep_nbar(
        params,
        &linear_grid(0.05, 5.0, 100),
        &OptimizerSettings::default(),
    )?;
    write_sweep_csv(io::stdout().lock(), SweepAxis::NBar, &rows)?;
    Ok(())
}
