use std::f64::consts::FRAC_PI_4;

use crate::numkit::{log_binomial, signed_logsumexp, SignedLogReal};

/// Single-spin rotation of `−[(1−s)σˣ + sεσᶻ] = −γ σ̂`.
///
/// The local ground state is `cos θ|0⟩ + sin θ|1⟩` and the excited state
/// `sin θ|0⟩ − cos θ|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriverAngles {
    pub gamma: f64,
    pub phi: f64,
    pub theta: f64,
}

pub fn driver_angles(s: f64, epsilon: f64) -> DriverAngles {
    let x = s * epsilon.abs();
    let y = 1.0 - s;
    let phi = x.atan2(y);
    DriverAngles { gamma: x.hypot(y), phi, theta: FRAC_PI_4 - 0.5 * phi }
}

/// `ln(x^e)` with `0^0 = 1`.
fn ln_pow(ln_x: f64, e: u64) -> f64 {
    if e == 0 {
        0.0
    } else {
        ln_x * e as f64
    }
}

fn ln_binom(n: u64, k: i64) -> Option<f64> {
    (k >= 0 && k as u64 <= n).then(|| log_binomial(n, k as u64).expect("k in range"))
}

/// `Z_k`: norm of the projection of a weight-`q` basis state onto the level
/// with `k` spins in the local excited state.
pub fn zk_noisy_standard(n: u32, q: u32, k: u32, theta: f64) -> SignedLogReal {
    let (n, q, k) = (u64::from(n), u64::from(q), u64::from(k));
    let (ln_s, ln_c) = (theta.sin().ln(), theta.cos().ln());
    // l = number of target 1-bits whose spin is excited
    let terms: Vec<SignedLogReal> = (0..=q.min(k))
        .filter_map(|l| {
            let a = ln_binom(q, l as i64)?;
            let b = ln_binom(n - q, (k - l) as i64)?;
            let sin_exp = 2 * (q - l) + 2 * (k - l);
            let cos_exp = 2 * n - sin_exp;
            let mag = a + b + ln_pow(ln_s, sin_exp) + ln_pow(ln_c, cos_exp);
            (!mag.is_nan()).then(|| SignedLogReal::from_ln(mag))
        })
        .collect();
    signed_logsumexp(&terms).sqrt()
}

/// Per-level data of the tunneling model at level `k`: the common `Z_α(k)`
/// of every single-flip state and the off-diagonal overlap of their
/// normalized projections.
pub fn tunneling_level_data(n: u32, k: u32, theta: f64) -> (f64, f64) {
    let (nn, kk) = (u64::from(n), u64::from(k));
    let (s, c) = theta.sin_cos();
    let (ln_s, ln_c) = (s.ln(), c.ln());
    let mut terms = Vec::new();
    if let Some(b) = ln_binom(nn - 1, kk as i64 - 1) {
        terms.push(SignedLogReal::from_ln(b + ln_pow(ln_c, 2 * (nn - kk) + 2) + ln_pow(ln_s, 2 * kk - 2)));
    }
    if let Some(b) = ln_binom(nn - 1, kk as i64) {
        terms.push(SignedLogReal::from_ln(b + ln_pow(ln_c, 2 * (nn - kk) - 2) + ln_pow(ln_s, 2 * kk + 2)));
    }
    let z = signed_logsumexp(&terms).sqrt().to_f64();

    if n == 1 {
        return (z, 1.0);
    }
    let (kf, nf) = (f64::from(k), f64::from(n));
    let (c2, s2) = (c * c, s * s);
    let num = -2.0 * kf * (nf - kf) * c2 * s2 + kf * (kf - 1.0) * c2 * c2 + (nf - kf) * (nf - kf - 1.0) * s2 * s2;
    let den = (nf - 1.0) * (kf * c2 * c2 + (nf - kf) * s2 * s2);
    let overlap = if den == 0.0 { 1.0 } else { (num / den).clamp(-1.0, 1.0) };
    (z, overlap)
}

/// Overlap `⟨E_i|E_j⟩` of two basis states at Hamming distance `d`, projected
/// onto the transverse-field level with `u` flipped spins.
pub fn krawtchouk_overlap(n: u32, u: u32, d: u32) -> f64 {
    let (n, u, d) = (u64::from(n), u64::from(u), u64::from(d));
    let lo = u.saturating_sub(n - d);
    let terms: Vec<SignedLogReal> = (lo..=d.min(u))
        .map(|l| {
            let mag = log_binomial(d, l).unwrap() + log_binomial(n - d, u - l).unwrap();
            SignedLogReal::new(if l % 2 == 0 { 1 } else { -1 }, mag)
        })
        .collect();
    let sum = signed_logsumexp(&terms);
    if sum.is_zero() {
        return 0.0;
    }
    SignedLogReal::new(sum.sign(), sum.ln_abs() - log_binomial(n, u).unwrap()).to_f64().clamp(-1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    /// Amplitude `⟨bit|local state⟩` with `excited` selecting the local state.
    fn amp(bit: bool, excited: bool, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        match (bit, excited) {
            (false, false) => c,
            (true, false) => s,
            (false, true) => s,
            (true, true) => -c,
        }
    }

    /// `⟨x|P_k|y⟩` by enumerating every configuration with `k` excited spins.
    fn projected_overlap(n: u32, k: u32, x: u64, y: u64, theta: f64) -> f64 {
        (0u64..1 << n)
            .filter(|m| m.count_ones() == k)
            .map(|m| {
                (0..n)
                    .map(|i| {
                        let e = m >> i & 1 == 1;
                        amp(x >> i & 1 == 1, e, theta) * amp(y >> i & 1 == 1, e, theta)
                    })
                    .product::<f64>()
            })
            .sum()
    }

    fn exact_binomial(n: i128, k: i128) -> i128 {
        if k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1i128, |acc, j| acc * (n - j) / (j + 1))
    }

    #[test]
    fn angles_at_boundaries() {
        let a = driver_angles(0.0, 3.0);
        assert_eq!((a.gamma, a.phi), (1.0, 0.0));
        assert!((a.theta - FRAC_PI_4).abs() < 1e-15);
        // s = 1: pure noise field, the local ground state is |0⟩
        let a = driver_angles(1.0, 2.0);
        assert!((a.gamma - 2.0).abs() < 1e-15);
        assert!((a.phi - FRAC_PI_2).abs() < 1e-15);
        assert!(a.theta.abs() < 1e-15);
        let a = driver_angles(0.5, 1.0);
        assert!((a.gamma - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((a.phi.sin() - 0.5f64.sqrt()).abs() < 1e-15);
        for s in [0.0, 0.2, 0.7, 1.0] {
            let t = driver_angles(s, 1.3).theta;
            assert!((t.cos().powi(2) + t.sin().powi(2) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zk_uniform_limit() {
        let z = zk_noisy_standard(4, 1, 2, FRAC_PI_4).to_f64();
        assert!((z - 6f64.sqrt() / 4.0).abs() < 1e-14);
        for k in 0..=5 {
            let z = zk_noisy_standard(5, 2, k, 0.0).to_f64();
            assert_eq!(z, if k == 2 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn zk_matches_projection_n6() {
        let target = 0b000011; // weight 2
        let direct = projected_overlap(6, 3, target, target, 0.6).sqrt();
        let z = zk_noisy_standard(6, 2, 3, 0.6).to_f64();
        assert!((z - direct).abs() < 1e-14, "{z} vs {direct}");
    }

    #[test]
    fn zk_normalized_up_to_160() {
        for &(n, q, theta) in &[(10u32, 3u32, 0.3), (60, 17, 0.61), (160, 80, 0.05), (160, 3, 0.7)] {
            let total: f64 = (0..=n).map(|k| zk_noisy_standard(n, q, k, theta).to_f64().powi(2)).sum();
            assert!((total - 1.0).abs() < 1e-10, "n={n} q={q}: {total}");
        }
    }

    #[test]
    fn tunneling_examples() {
        assert_eq!(tunneling_level_data(5, 0, 0.4).1, 1.0);
        let (_, o) = tunneling_level_data(4, 1, FRAC_PI_4);
        assert!(o.abs() < 1e-15);
        assert!((tunneling_level_data(6, 6, 0.3).1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tunneling_matches_projection() {
        let n = 5;
        for theta in [0.2, 0.55, FRAC_PI_4] {
            let mut total = 0.0;
            for k in 0..=n {
                let (z, o) = tunneling_level_data(n, k, theta);
                let zz = projected_overlap(n, k, 1 << 1, 1 << 1, theta);
                let cross = projected_overlap(n, k, 1 << 1, 1 << 3, theta);
                assert!((z * z - zz).abs() < 1e-14);
                if zz > 1e-300 {
                    assert!((o - cross / zz).abs() < 1e-12, "k={k} θ={theta}: {o} vs {}", cross / zz);
                }
                total += z * z;
            }
            assert!((total - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn krawtchouk_examples() {
        assert_eq!(krawtchouk_overlap(9, 4, 0), 1.0);
        assert_eq!(krawtchouk_overlap(9, 0, 5), 1.0);
        assert_eq!(krawtchouk_overlap(4, 1, 2), 0.0);
    }

    #[test]
    fn krawtchouk_matches_exact_integers() {
        for n in 1..=60i128 {
            for u in 0..=n {
                for d in 0..=n {
                    let sum: i128 = (0..=d.min(u))
                        .map(|l| {
                            let t = exact_binomial(d, l) * exact_binomial(n - d, u - l);
                            if l % 2 == 0 { t } else { -t }
                        })
                        .sum();
                    let exact = sum as f64 / exact_binomial(n, u) as f64;
                    let got = krawtchouk_overlap(n as u32, u as u32, d as u32);
                    assert!((got - exact).abs() < 1e-12, "n={n} u={u} d={d}: {got} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn krawtchouk_matches_projection() {
        let n = 6;
        let (x, y) = (0b001011u64, 0b100110u64); // distance 4
        for u in 0..=n {
            let zz = projected_overlap(n, u, x, x, FRAC_PI_4);
            let direct = projected_overlap(n, u, x, y, FRAC_PI_4) / zz;
            assert!((krawtchouk_overlap(n, u, 4) - direct).abs() < 1e-13);
        }
    }
}
