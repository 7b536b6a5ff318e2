//! Ferromagnet with barriers on the single-flip states.

use aqo_reduce::annealing::{gap_profile, t_ann_optimal_with};
use aqo_reduce::models::{build, ModelSpec};
use aqo_reduce::reduction::assemble_effective;

fn main() -> aqo_reduce::Result<()> {
    for height in [0.5, 1.0, 1.5] {
        let n = 24;
        let model = ModelSpec::Tunneling { n, barriers: vec![height; n as usize] };
        let (decomp, weights) = build(&model, 0.5)?;
        let dim = assemble_effective(&decomp, &weights)?.dim();
        let p = gap_profile(&model, 257)?;
        let t = t_ann_optimal_with(&model, &p)?;
        println!("V = {height}: dim {dim}, g_min = {:.6} at s = {:.4}, T_ann = {t:.3}", p.g_min, p.s_star);
    }

    // distinct barriers break the permutation symmetry among the flips
    let model = ModelSpec::Tunneling { n: 10, barriers: (0..10).map(|i| 0.3 + 0.15 * f64::from(i)).collect() };
    let (decomp, weights) = build(&model, 0.4)?;
    println!("graded barriers, n = 10: dim {}", assemble_effective(&decomp, &weights)?.dim());
    Ok(())
}
