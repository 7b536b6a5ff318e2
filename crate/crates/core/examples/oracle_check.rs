//! Reduced spectra against brute-force diagonalization of the full space.

use aqo_reduce::models::{spectrum_at, BitString, ModelSpec};
use aqo_reduce::oracle::{compare_spectra, full_hamiltonian, verify, Realization, VerifyConfig};

fn main() -> aqo_reduce::Result<()> {
    let n = 8;
    // target 10110001 with noise signs that rotate it to weight 3
    let model = ModelSpec::GroverNoiseStd { n, epsilon: 1.3, q: 3, target_scale: 8.0 };
    let target: BitString = "10110001".parse()?;
    let signs = vec![-1, 1, -1, -1, 1, 1, -1, 1];
    let real = Realization { target: target.index().unwrap(), signs };
    for s in [0.0, 0.3, 0.7, 1.0] {
        let dense = full_hamiltonian(&model, s, Some(&real))?;
        let cmp = compare_spectra(&spectrum_at(&model, s)?, &dense)?;
        println!("s = {s:.1}: max |dE| = {:.2e}, gap error = {:.2e}", cmp.max_deviation, cmp.gap_deviation);
    }

    let config = VerifyConfig { n_min: 3, n_max: 7, draws: 4, ..VerifyConfig::default() };
    let report = verify(&config)?;
    for (kind, dev, cases) in report.per_kind() {
        println!("{:<24} {cases:>4} cases, worst {dev:.2e}", kind.name());
    }
    println!("passed: {}", report.passed());
    Ok(())
}
