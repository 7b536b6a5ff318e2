//! Numerical building blocks: log-domain counts and rank-revealing Cholesky.

use aqo_reduce::numkit::{binomial, pivoted_psd_cholesky, signed_logsumexp, SignedLogReal, SymMatrix, DEFAULT_TOL};

fn main() -> aqo_reduce::Result<()> {
    let c = binomial(160, 80);
    println!("C(160, 80) = {c} (ln = {:.6})", c.ln_abs());

    // alternating sum of binomials: sum_k (-1)^k C(20, k) = 0
    let terms: Vec<SignedLogReal> =
        (0..=20).map(|k| if k % 2 == 0 { binomial(20, k) } else { -binomial(20, k) }).collect();
    println!("alternating sum: {}", signed_logsumexp(&terms).to_f64());

    // Gram matrix of three vectors in a plane
    let g = SymMatrix::from_rows(&[vec![1.0, 0.5, -0.5], vec![0.5, 1.0, 0.5], vec![-0.5, 0.5, 1.0]])?;
    let chol = pivoted_psd_cholesky(&g, DEFAULT_TOL)?;
    println!("rank {} with pivots {:?}", chol.rank, chol.pivots);
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| format!("{:+.3}", chol.reconstruct(i, j))).collect();
        println!("  [{}]", row.join(" "));
    }
    Ok(())
}
