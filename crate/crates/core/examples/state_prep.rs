//! Prepares a correlated thermal state with two-mode squeezers and the
//! Gaussian Fourier transform, then compares it to the direct construction.
//!
//! cargo run --example state_prep

use gaussian_capacity::circuits::prepare_correlated_circuit;
use gaussian_capacity::states::{correlated_thermal, per_mode_photon_numbers, CorrelatedSpec};

fn main() -> gaussian_capacity::Result<()> {
    let spec = CorrelatedSpec::new(1, 4, 0.5)?;
    let circuit = prepare_correlated_circuit(spec)?;
    println!(
        "squeezer gain {} on {} of {} modes",
        spec.squeezer_gain(),
        spec.m(),
        spec.n()
    );
    print!("{}", circuit.to_text());

    let system: Vec<usize> = (0..spec.n()).collect();
    let prepared = circuit.act_on_vacuum()?.reduced(&system)?;
    let direct = correlated_thermal(spec)?;
    let dev = (prepared.cov().as_matrix() - direct.cov().as_matrix()).amax();
    println!("\nmax deviation from direct covariance: {dev:.2e}");
    println!("photons per mode: {:?}", per_mode_photon_numbers(&prepared));
    println!(
        "symplectic eigenvalues: {:?}",
        prepared.symplectic_eigenvalues()?
    );
    Ok(())
}
