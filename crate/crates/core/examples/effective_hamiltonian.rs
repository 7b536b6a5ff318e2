//! Builds the reduced block of a noisy Grover instance and rebuilds its full
//! spectrum from it.

use aqo_reduce::models::{build, ModelSpec};
use aqo_reduce::reduction::{assemble_effective, reconstruct_full_spectrum};

fn main() -> aqo_reduce::Result<()> {
    let n = 40;
    let model = ModelSpec::GroverNoiseStd { n, epsilon: 0.8, q: 6, target_scale: f64::from(n) };
    let s = 0.45;

    let (decomp, weights) = build(&model, s)?;
    decomp.validate()?;
    println!("{model} at s = {s}");
    println!("a(s) = {:.6}, b(s) = {:.6}, {} levels", decomp.a_coeff, decomp.b_coeff, decomp.levels.len());

    let eff = assemble_effective(&decomp, &weights)?;
    println!("effective block: {} x {} (full space 2^{n})", eff.dim(), eff.dim());

    let rec = reconstruct_full_spectrum(&decomp, &eff)?;
    println!("total multiplicity: {}", rec.total_multiplicity());
    for (i, e) in rec.lowest(5).iter().enumerate() {
        println!("  E_{i} = {e:.12}");
    }
    // untouched levels keep their energy a(s)·E with reduced degeneracy
    let (value, mult) = rec.factored_levels[rec.factored_levels.len() / 2];
    println!("a middle factored level: {value:.6} x {mult}");
    Ok(())
}
