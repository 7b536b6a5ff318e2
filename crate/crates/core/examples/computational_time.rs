//! Repetition-aware computational time and its scaling exponent.

use aqo_reduce::annealing::{analytic_scaling, computational_time, fit_exponent, Schedule};
use aqo_reduce::models::ModelSpec;

fn main() -> aqo_reduce::Result<()> {
    let single = ModelSpec::GroverNoiseGrv { n: 10, epsilon: 0.5, q: 0, target_scale: 10.0 };
    let r = computational_time(&single, Schedule::GroverOverride, 0.99, 257)?;
    println!("n = 10, eps = 0.5: T_comp = {:.3} (q* = {}, q_eps = {})", r.t_comp(), r.q_star, r.q_epsilon);

    for eps in [0.5, 1.5, 2.0, 3.0] {
        let mut points = Vec::new();
        for n in (40..=160).step_by(8) {
            let m = ModelSpec::GroverNoiseGrv { n, epsilon: eps, q: 0, target_scale: f64::from(n) };
            let r = computational_time(&m, Schedule::GroverOverride, 0.99, 257)?;
            points.push((f64::from(n), r.log2_t_comp));
        }
        let fit = fit_exponent(&points)?;
        println!("eps = {eps}: fitted {:.4}, closed form {:.4}", fit.slope, analytic_scaling(eps));
    }

    // transverse-field driver, noiseless, both schedules
    for schedule in [Schedule::Linear, Schedule::Optimal] {
        let mut points = Vec::new();
        for n in (20..=60).step_by(8) {
            let m = ModelSpec::GroverNoiseStd { n, epsilon: 0.0, q: 0, target_scale: f64::from(n) };
            points.push((f64::from(n), computational_time(&m, schedule, 0.99, 257)?.log2_t_comp));
        }
        println!("standard driver, {schedule}: slope {:.3}", fit_exponent(&points)?.slope);
    }
    Ok(())
}
