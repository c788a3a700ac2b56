//! Compiles the Gaussian Fourier transform for growing N and checks each
//! circuit against the analytic symplectic matrix.
//!
//! cargo run --example compile_gft [-- N]

use gaussian_capacity::circuits::{circuit_to_symplectic, compile_gft, gft_symplectic};

fn main() -> gaussian_capacity::Result<()> {
    if let Some(n) = std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        print!("{}", compile_gft(n)?.to_text());
        return Ok(());
    }

    println!(
        "{:>4} {:>7} {:>6} {:>7} {:>6} {:>10}",
        "N", "gates", "swaps", "4NlogN", "depth", "deviation"
    );
    for n in [2usize, 4, 8, 16, 32, 64, 128] {
        let c = compile_gft(n)?;
        let log = n.trailing_zeros() as usize;
        let dev = (circuit_to_symplectic(&c) - gft_symplectic(n)?).amax();
        println!(
            "{n:>4} {:>7} {:>6} {:>7} {:>6} {dev:>10.2e}",
            c.gate_count(),
            c.swap_count(),
            4 * n * log,
            c.depth()
        );
    }
    Ok(())
}
