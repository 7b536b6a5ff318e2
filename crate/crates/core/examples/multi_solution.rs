//! Several degenerate targets: the low spectrum collapses onto them at s = 1.

use aqo_reduce::annealing::level_gaps;
use aqo_reduce::models::{build, BitString, ModelSpec};
use aqo_reduce::reduction::assemble_effective;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> aqo_reduce::Result<()> {
    let n = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let targets: Vec<BitString> = (0..5).map(|_| BitString((0..n).map(|_| rng.random_bool(0.5)).collect())).collect();
    for t in &targets {
        println!("target {t}");
    }
    let model = ModelSpec::MultiSolution { n, targets };

    let (decomp, weights) = build(&model, 0.5)?;
    println!("effective dimension {} (at most {})", assemble_effective(&decomp, &weights)?.dim(), 5 * n);

    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}", "s", "E1-E0", "E2-E0", "E3-E0", "E4-E0", "E5-E0");
    for s in [0.5, 0.7, 0.9, 0.99, 1.0] {
        let gaps = level_gaps(&model, s, 5)?;
        print!("{s:>5}");
        for g in gaps {
            print!(" {g:>12.4e}");
        }
        println!();
    }
    Ok(())
}
