//! Sign + log-magnitude reals for binomial and power sums that overflow `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};
use std::sync::OnceLock;

use crate::{Error, Result};

/// Relative cancellation threshold of [`signed_logsumexp`].
pub const CANCELLATION_TOL: f64 = 1e-13;

/// A real number stored as `sign * exp(logmag)`.
///
/// `sign == 0` is exactly zero whatever `logmag` holds.
#[derive(Clone, Copy, Debug)]
pub struct SignedLogReal {
    sign: i8,
    logmag: f64,
}

impl SignedLogReal {
    pub const ZERO: Self = Self { sign: 0, logmag: f64::NEG_INFINITY };
    pub const ONE: Self = Self { sign: 1, logmag: 0.0 };

    pub fn new(sign: i8, logmag: f64) -> Self {
        if sign == 0 || logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: sign.signum(), logmag }
        }
    }

    /// Positive number with natural-log magnitude `logmag`.
    pub fn from_ln(logmag: f64) -> Self {
        Self::new(1, logmag)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.logmag
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        Self::new(self.sign.abs(), self.logmag)
    }

    /// Square root of a non-negative value.
    pub fn sqrt(self) -> Self {
        debug_assert!(self.sign >= 0);
        Self::new(self.sign, 0.5 * self.logmag)
    }

    pub fn powi(self, exponent: i32) -> Self {
        if exponent == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && exponent % 2 != 0 { -1 } else { 1 };
        Self::new(sign, self.logmag * f64::from(exponent))
    }

    /// Rounds a non-negative count to the nearest integer, if it fits in `u64`
    /// exactly (below 2^53).
    pub fn to_count(self) -> Option<u64> {
        match self.sign {
            0 => Some(0),
            1 if self.logmag < 53.0 * std::f64::consts::LN_2 => Some(self.logmag.exp().round() as u64),
            _ => None,
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.logmag.total_cmp(&other.logmag),
                _ => other.logmag.total_cmp(&self.logmag),
            },
            ord => ord,
        }
    }
}

impl Default for SignedLogReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl PartialEq for SignedLogReal {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.logmag == other.logmag)
    }
}

impl Mul for SignedLogReal {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.sign * rhs.sign, self.logmag + rhs.logmag)
    }
}

impl Div for SignedLogReal {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "division by zero SignedLogReal");
        Self::new(self.sign * rhs.sign, self.logmag - rhs.logmag)
    }
}

impl Neg for SignedLogReal {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.sign, self.logmag)
    }
}

impl fmt::Display for SignedLogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.logmag),
        }
    }
}

/// Signed sum of log-domain terms.
///
/// Terms are rescaled by the largest magnitude and summed pairwise, positive
/// and negative parts separately. A result below [`CANCELLATION_TOL`] times the
/// largest term is indistinguishable from rounding noise and returned as zero.
pub fn signed_logsumexp(terms: &[SignedLogReal]) -> SignedLogReal {
    let max = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.logmag)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return SignedLogReal::ZERO;
    }
    if max == f64::INFINITY {
        let signs: Vec<i8> = terms
            .iter()
            .filter(|t| t.sign != 0 && t.logmag == f64::INFINITY)
            .map(|t| t.sign)
            .collect();
        return if signs.iter().all(|&s| s == signs[0]) {
            SignedLogReal::new(signs[0], f64::INFINITY)
        } else {
            SignedLogReal::new(1, f64::NAN)
        };
    }

    let mut pos = Vec::with_capacity(terms.len());
    let mut neg = Vec::with_capacity(terms.len());
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let scaled = (t.logmag - max).exp();
        if t.sign > 0 {
            pos.push(scaled);
        } else {
            neg.push(scaled);
        }
    }
    let total = pairwise_sum(&mut pos) - pairwise_sum(&mut neg);
    if total.abs() <= CANCELLATION_TOL {
        return SignedLogReal::ZERO;
    }
    SignedLogReal::new(if total > 0.0 { 1 } else { -1 }, max + total.abs().ln())
}

fn pairwise_sum(values: &mut [f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        len if len <= 8 => values.iter().sum(),
        len => {
            let (lo, hi) = values.split_at_mut(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

const LN_FACTORIAL_TABLE: usize = 4096;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for i in 1..=LN_FACTORIAL_TABLE {
            acc += (i as f64).ln();
            table.push(acc);
        }
        table
    })
}

/// Natural log of the binomial coefficient `C(n, k)`.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::InvalidInput(format!("binomial C({n}, {k}) has k > n")));
    }
    let k = k.min(n - k);
    // Short products avoid the cancellation in ln n! - ln k! - ln (n-k)!.
    if k <= 32 || n as usize > LN_FACTORIAL_TABLE {
        let mut acc = 0.0;
        for j in 0..k {
            acc += ((n - j) as f64 / (j + 1) as f64).ln();
        }
        return Ok(acc);
    }
    let t = ln_factorial_table();
    Ok(t[n as usize] - t[k as usize] - t[(n - k) as usize])
}

/// `C(n, k)` as a log-domain count; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> SignedLogReal {
    match log_binomial(n, k) {
        Ok(l) => SignedLogReal::from_ln(l),
        Err(_) => SignedLogReal::ZERO,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slr(x: f64) -> SignedLogReal {
        SignedLogReal::from_f64(x)
    }

    fn exact_binomial(n: u64, k: u64) -> u128 {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for j in 0..k {
            acc = acc * u128::from(n - j) / u128::from(j + 1);
        }
        acc
    }

    #[test]
    fn two_minus_one() {
        let r = signed_logsumexp(&[SignedLogReal::new(1, 2f64.ln()), SignedLogReal::new(-1, 0.0)]);
        assert_eq!(r.sign(), 1);
        assert!(r.ln_abs().abs() < 1e-15);
    }

    #[test]
    fn exact_cancellation_is_zero() {
        let x = 37.25;
        let r = signed_logsumexp(&[SignedLogReal::new(1, x), SignedLogReal::new(-1, x)]);
        assert!(r.is_zero());
        assert_eq!(r.to_f64(), 0.0);
    }

    #[test]
    fn krawtchouk_style_sum_n4_u1_d2() {
        // sum_l (-1)^l C(2,l) C(2,1-l) = 2 - 2
        let terms: Vec<_> = (0..=1u64)
            .map(|l| {
                let s = if l % 2 == 0 { 1 } else { -1 };
                SignedLogReal::new(s, binomial(2, l).ln_abs() + binomial(2, 1 - l).ln_abs())
            })
            .collect();
        assert!(signed_logsumexp(&terms).is_zero());
    }

    #[test]
    fn empty_and_zero_terms() {
        assert!(signed_logsumexp(&[]).is_zero());
        assert!(signed_logsumexp(&[SignedLogReal::ZERO, SignedLogReal::ZERO]).is_zero());
        let r = signed_logsumexp(&[SignedLogReal::ZERO, slr(-3.5)]);
        assert!((r.to_f64() + 3.5).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_round_trips() {
        let a = slr(-6.0);
        let b = slr(1.5);
        assert!(((a * b).to_f64() + 9.0).abs() < 1e-13);
        assert!(((a / b).to_f64() + 4.0).abs() < 1e-14);
        assert!(((-a).to_f64() - 6.0).abs() < 1e-14);
        assert!((a.powi(3).to_f64() + 216.0).abs() < 1e-11);
        assert_eq!(SignedLogReal::ZERO.powi(0), SignedLogReal::ONE);
        assert!((slr(16.0).sqrt().to_f64() - 4.0).abs() < 1e-14);
        assert_eq!(slr(1.0e6).to_count(), Some(1_000_000));
        assert_eq!(slr(0.5).total_cmp(&slr(-3.0)), Ordering::Greater);
        assert_eq!(slr(-0.5).total_cmp(&slr(-3.0)), Ordering::Greater);
    }

    #[test]
    fn log_binomial_small_values() {
        assert!((log_binomial(4, 2).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(17, 17).unwrap(), 0.0);
        assert!(matches!(log_binomial(3, 4), Err(Error::InvalidInput(_))));
        assert!(binomial(3, 4).is_zero());
    }

    #[test]
    fn log_binomial_160_80_matches_log_gamma() {
        use statrs::function::gamma::ln_gamma;
        let oracle = ln_gamma(161.0) - 2.0 * ln_gamma(81.0);
        let got = log_binomial(160, 80).unwrap();
        assert!(((got - oracle) / oracle).abs() < 1e-10, "{got} vs {oracle}");
    }

    #[test]
    fn log_binomial_matches_integer_arithmetic_up_to_60() {
        for n in 0..=60u64 {
            for k in 0..=n {
                let exact = exact_binomial(n, k) as f64;
                let got = log_binomial(n, k).unwrap().exp();
                assert!(((got - exact) / exact).abs() < 1e-12, "C({n},{k}): {got} vs {exact}");
                if exact < 2f64.powi(40) {
                    assert_eq!(got.round(), exact, "C({n},{k})");
                }
            }
        }
    }

    #[test]
    fn log_binomial_large_n_short_product_agrees_with_table() {
        for &(n, k) in &[(400u64, 33u64), (1000, 40), (4000, 35)] {
            let t = ln_factorial_table();
            let via_table = t[n as usize] - t[k as usize] - t[(n - k) as usize];
            let direct = log_binomial(n, k).unwrap();
            assert!(((direct - via_table) / direct).abs() < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn logsumexp_permutation_invariant(
                values in proptest::collection::vec(-1e6f64..1e6, 1..24),
                seed in any::<u64>(),
            ) {
                let terms: Vec<_> = values.iter().map(|&v| SignedLogReal::from_f64(v)).collect();
                let mut shuffled = terms.clone();
                // deterministic Fisher-Yates driven by the seed
                let mut state = seed | 1;
                for i in (1..shuffled.len()).rev() {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    shuffled.swap(i, (state % (i as u64 + 1)) as usize);
                }
                let a = signed_logsumexp(&terms).to_f64();
                let b = signed_logsumexp(&shuffled).to_f64();
                let largest = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                prop_assert!((a - b).abs() <= 1e-13 * largest);
                let direct: f64 = values.iter().sum();
                prop_assert!((a - direct).abs() <= 1e-13 * largest * values.len() as f64);
            }
        }
    }
}
