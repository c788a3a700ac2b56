//! Perfect-shuffle networks built from layers of disjoint SWAPs.
//!
//! cargo run --example perfect_shuffle

use gaussian_capacity::circuits::compile_perfect_shuffle;

fn main() -> gaussian_capacity::Result<()> {
    let c = compile_perfect_shuffle(8)?;
    println!("8 modes:");
    for (i, layer) in c.layers().iter().enumerate() {
        let gates: Vec<String> = layer.iter().map(|g| g.to_string()).collect();
        println!("  layer {i}: {}", gates.join(", "));
    }
    println!(
        "  mode k ends up at {:?}",
        c.mode_permutation().unwrap_or_default()
    );

    for two_n in [4usize, 16, 64, 256] {
        let c = compile_perfect_shuffle(two_n)?;
        println!(
            "{two_n:>4} modes: {:>4} swaps in {} layers",
            c.swap_count(),
            c.depth()
        );
    }
    Ok(())
}
