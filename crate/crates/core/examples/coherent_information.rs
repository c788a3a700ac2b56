//! Coherent information of thermal inputs through a thermal loss channel,
//! computed from covariance matrices and compared with the closed form.
//!
//! cargo run --example coherent_information

use gaussian_capacity::capacity::f_rate;
use gaussian_capacity::channels::{
    apply, complementary_channel, thermal_loss_channel, ChannelParams,
};
use gaussian_capacity::entropy::{coherent_information, von_neumann_entropy};
use gaussian_capacity::states::{correlated_thermal, thermal_state, CorrelatedSpec, ThermalSpec};

fn main() -> gaussian_capacity::Result<()> {
    let params = ChannelParams::new(0.81, 1.0)?;
    let input = thermal_state(ThermalSpec::new(1.0)?, 1)?;

    let b = apply(&thermal_loss_channel(params, 1)?, &input)?;
    let e = apply(&complementary_channel(params, 1)?, &input)?;
    println!("S(B) = {:.10}", von_neumann_entropy(&b)?);
    println!("S(E) = {:.10}", von_neumann_entropy(&e)?);
    println!("I_c  = {:.10}", coherent_information(params, &input)?);
    println!("f    = {:.10}", f_rate(params.eta(), params.n_th(), 1.0)?);

    // spreading 4 photons over 4 modes from one hot mode
    for m in 1..=4 {
        let state = correlated_thermal(CorrelatedSpec::new(m, 4, 1.0)?)?;
        println!(
            "M = {m}, N = 4: I_c / N = {:.10}",
            coherent_information(params, &state)? / 4.0
        );
    }
    Ok(())
}
