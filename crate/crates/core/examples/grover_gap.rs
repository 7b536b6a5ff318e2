//! Minimum gap of unstructured search for both drivers.

use aqo_reduce::annealing::{gap_profile, t_ann_linear, t_ann_optimal_with};
use aqo_reduce::models::{Driver, ModelSpec};

fn main() -> aqo_reduce::Result<()> {
    println!("{:>4} {:>10} {:>22} {:>12} {:>12} {:>12}", "n", "driver", "g_min", "g·2^(n/2)", "log2 T_lin", "log2 T_opt");
    for n in (8..=48).step_by(8) {
        for driver in [Driver::Grover, Driver::Standard] {
            let scale = if driver == Driver::Grover { 1.0 } else { f64::from(n) };
            let model = ModelSpec::GroverPlain { driver, n, target_scale: scale };
            let p = gap_profile(&model, 257)?;
            let opt = t_ann_optimal_with(&model, &p)?;
            println!(
                "{n:>4} {:>10} {:>22.15e} {:>12.6} {:>12.4} {:>12.4}",
                driver.name(),
                p.g_min,
                p.g_min * 2f64.powf(f64::from(n) / 2.0),
                t_ann_linear(&p).log2(),
                opt.log2()
            );
        }
    }
    Ok(())
}
