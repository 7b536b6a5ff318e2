//! The model zoo.
//!
//! Every model is expressed in a frame where `H_A` is diagonal in a known
//! product basis. Noisy Grover models use the gauge where all noise signs are
//! negative; only the Hamming weight `q` of the rotated target survives.

mod build;
mod formulas;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use build::{build, low_spectrum_at, spectrum_at};
pub use formulas::{driver_angles, krawtchouk_overlap, tunneling_level_data, zk_noisy_standard, DriverAngles};

use crate::{Error, Result};

/// Largest `n` supported by the M-level model, whose degeneracies are `u128`.
pub const MLEVEL_MAX_QUBITS: u32 = 127;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Driver {
    /// `−|ψ₀⟩⟨ψ₀|`
    Grover,
    /// `−Σ σˣ`
    Standard,
}

impl Driver {
    pub fn name(self) -> &'static str {
        match self {
            Driver::Grover => "grover",
            Driver::Standard => "standard",
        }
    }
}

impl FromStr for Driver {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "grover" => Ok(Driver::Grover),
            "standard" => Ok(Driver::Standard),
            other => Err(Error::Config(format!("unknown driver '{other}' (grover|standard)"))),
        }
    }
}

/// Computational basis state; character `i` is qubit `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn hamming(&self, other: &BitString) -> u32 {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count() as u32
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().filter(|b| **b).count() as u32
    }

    /// Basis index with qubit `i` as bit `i`; `None` beyond 64 qubits.
    pub fn index(&self) -> Option<u64> {
        (self.0.len() <= 64).then(|| self.0.iter().enumerate().map(|(i, &b)| u64::from(b) << i).sum())
    }

    pub fn from_index(index: u64, n: u32) -> Self {
        Self((0..n).map(|i| index >> i & 1 == 1).collect())
    }
}

impl FromStr for BitString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Config(format!("invalid bit '{other}' in '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    /// Noiseless Grover search with either driver; target energy `−target_scale`.
    GroverPlain { driver: Driver, n: u32, target_scale: f64 },
    /// Noisy Grover, transverse-field driver, rotated target of weight `q`.
    GroverNoiseStd { n: u32, epsilon: f64, q: u32, target_scale: f64 },
    /// Noisy Grover, Grover driver (scaled by `target_scale`).
    GroverNoiseGrv { n: u32, epsilon: f64, q: u32, target_scale: f64 },
    /// `−(1−s)Σσˣ − sΣσᶻ + s Σ_α V_α |e_α⟩⟨e_α|` with single-flip barrier states.
    Tunneling { n: u32, barriers: Vec<f64> },
    /// Transverse-field driver with `p` degenerate targets of energy −1.
    MultiSolution { n: u32, targets: Vec<BitString> },
    /// Grover driver over an arbitrary diagonal problem with `M` levels.
    MLevelGrover { energies: Vec<f64>, degeneracies: Vec<u128> },
}

/// Size of the effective block expected for a model instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionRule {
    Exact(usize),
    AtMost(usize),
}

impl DimensionRule {
    pub fn admits(self, dim: usize) -> bool {
        match self {
            DimensionRule::Exact(d) => dim == d,
            DimensionRule::AtMost(d) => dim <= d,
        }
    }
}

impl fmt::Display for DimensionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionRule::Exact(d) => write!(f, "= {d}"),
            DimensionRule::AtMost(d) => write!(f, "<= {d}"),
        }
    }
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::GroverPlain { .. } => "grover-plain",
            ModelSpec::GroverNoiseStd { .. } => "grover-noise-std",
            ModelSpec::GroverNoiseGrv { .. } => "grover-noise-grv",
            ModelSpec::Tunneling { .. } => "tunneling",
            ModelSpec::MultiSolution { .. } => "multi-solution",
            ModelSpec::MLevelGrover { .. } => "mlevel-grover",
        }
    }

    pub fn driver(&self) -> Driver {
        match self {
            ModelSpec::GroverPlain { driver, .. } => *driver,
            ModelSpec::GroverNoiseGrv { .. } | ModelSpec::MLevelGrover { .. } => Driver::Grover,
            _ => Driver::Standard,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            ModelSpec::GroverPlain { n, .. }
            | ModelSpec::GroverNoiseStd { n, .. }
            | ModelSpec::GroverNoiseGrv { n, .. }
            | ModelSpec::Tunneling { n, .. }
            | ModelSpec::MultiSolution { n, .. } => *n,
            ModelSpec::MLevelGrover { degeneracies, .. } => {
                let total: u128 = degeneracies.iter().sum();
                total.max(1).ilog2()
            }
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            ModelSpec::GroverNoiseStd { epsilon, .. } | ModelSpec::GroverNoiseGrv { epsilon, .. } => *epsilon,
            _ => 0.0,
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            ModelSpec::GroverNoiseStd { q, .. } | ModelSpec::GroverNoiseGrv { q, .. } => *q,
            _ => 0,
        }
    }

    pub fn is_noisy(&self) -> bool {
        matches!(self, ModelSpec::GroverNoiseStd { .. } | ModelSpec::GroverNoiseGrv { .. })
    }

    /// Same model with the rotated-target weight replaced.
    pub fn with_q(&self, new_q: u32) -> Self {
        let mut out = self.clone();
        if let ModelSpec::GroverNoiseStd { q, .. } | ModelSpec::GroverNoiseGrv { q, .. } = &mut out {
            *q = new_q;
        }
        out
    }

    /// Same noisy model with a different noise strength.
    pub fn with_epsilon(&self, new_eps: f64) -> Self {
        let mut out = self.clone();
        if let ModelSpec::GroverNoiseStd { epsilon, .. } | ModelSpec::GroverNoiseGrv { epsilon, .. } = &mut out {
            *epsilon = new_eps;
        }
        out
    }

    /// Representative with identical spectrum: without noise the target weight
    /// is irrelevant, so `q` is reset to 0.
    pub fn canonical(&self) -> Self {
        if self.is_noisy() && self.epsilon() == 0.0 {
            self.with_q(0)
        } else {
            self.clone()
        }
    }

    /// Number of rank-1 projectors in `H_B`.
    pub fn projector_count(&self) -> usize {
        match self {
            ModelSpec::GroverNoiseGrv { .. } => 2,
            ModelSpec::Tunneling { barriers, .. } => barriers.len(),
            ModelSpec::MultiSolution { targets, .. } => targets.len(),
            _ => 1,
        }
    }

    /// Effective dimension at generic `s ∈ (0, 1)`.
    pub fn dimension_rule(&self) -> DimensionRule {
        let n = self.n() as usize;
        match self {
            ModelSpec::GroverPlain { driver: Driver::Grover, .. } => DimensionRule::Exact(2),
            ModelSpec::GroverPlain { driver: Driver::Standard, .. } | ModelSpec::GroverNoiseStd { .. } => {
                DimensionRule::Exact(n + 1)
            }
            ModelSpec::GroverNoiseGrv { q, .. } => {
                // a target at weight 0 or n coincides with its level's ψ₀ projection
                if *q == 0 || *q as usize == n {
                    DimensionRule::Exact(n + 1)
                } else {
                    DimensionRule::Exact(n + 2)
                }
            }
            ModelSpec::Tunneling { .. } => DimensionRule::AtMost((n + 2) * (n + 2)),
            ModelSpec::MultiSolution { targets, .. } => {
                let p = targets.len() as f64;
                let bound: f64 = (0..=n as u64)
                    .map(|u| crate::numkit::binomial(n as u64, u).to_f64().min(p))
                    .sum();
                DimensionRule::AtMost(bound as usize)
            }
            ModelSpec::MLevelGrover { energies, .. } => DimensionRule::Exact(energies.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        let check_scale = |n: u32, scale: f64| -> Result<()> {
            if (scale - 1.0).abs() > 1e-12 && (scale - f64::from(n)).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("target_scale must be 1 or n = {n}, got {scale}")));
            }
            Ok(())
        };
        match self {
            ModelSpec::GroverPlain { n, target_scale, .. } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
                check_scale(*n, *target_scale)
            }
            ModelSpec::GroverNoiseStd { n, epsilon, q, target_scale }
            | ModelSpec::GroverNoiseGrv { n, epsilon, q, target_scale } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
                if !(epsilon.is_finite() && *epsilon >= 0.0) {
                    return bad(format!("epsilon must be finite and >= 0, got {epsilon}"));
                }
                if q > n {
                    return bad(format!("q = {q} exceeds n = {n}"));
                }
                check_scale(*n, *target_scale)
            }
            ModelSpec::Tunneling { n, barriers } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
                if barriers.len() != *n as usize {
                    return bad(format!("tunneling needs {n} barrier heights, got {}", barriers.len()));
                }
                if barriers.iter().any(|v| !v.is_finite() || *v == 0.0) {
                    return bad("barrier heights must be finite and nonzero".into());
                }
                Ok(())
            }
            ModelSpec::MultiSolution { n, targets } => {
                if *n == 0 || targets.is_empty() {
                    return bad("multi-solution needs n >= 1 and at least one target".into());
                }
                for (i, t) in targets.iter().enumerate() {
                    if t.len() != *n as usize {
                        return bad(format!("target {t} has {} bits, expected {n}", t.len()));
                    }
                    if targets[..i].contains(t) {
                        return bad(format!("duplicate target {t}"));
                    }
                }
                Ok(())
            }
            ModelSpec::MLevelGrover { energies, degeneracies } => {
                if energies.is_empty() || energies.len() != degeneracies.len() {
                    return bad("energies and degeneracies must be non-empty and of equal length".into());
                }
                if energies.iter().any(|e| !e.is_finite()) {
                    return bad("energies must be finite".into());
                }
                for (i, e) in energies.iter().enumerate() {
                    if energies[..i].contains(e) {
                        return bad(format!("repeated energy {e}"));
                    }
                }
                if degeneracies.contains(&0) {
                    return bad("degeneracies must be positive".into());
                }
                let total = degeneracies.iter().try_fold(0u128, |acc, &d| acc.checked_add(d));
                match total {
                    Some(t) if t >= 2 && t.is_power_of_two() && t.ilog2() <= MLEVEL_MAX_QUBITS => Ok(()),
                    _ => bad("degeneracies must sum to 2^n with 1 <= n <= 127".into()),
                }
            }
        }
    }

    /// Parses the flat key-value form (`model`, `driver`, `n`, `epsilon`, `q`,
    /// `target_scale`, `barriers`, `targets`, `energies`, `degeneracies`).
    pub fn from_kv(kv: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| kv.get(k).map(|v| v.trim()).filter(|v| !v.is_empty());
        let model = get("model").ok_or_else(|| Error::Config("missing key 'model'".into()))?;
        let n = || -> Result<u32> {
            get("n").ok_or_else(|| Error::Config("missing key 'n'".into()))?.parse().map_err(|e| config_err("n", e))
        };
        let epsilon = || -> Result<f64> { get("epsilon").map_or(Ok(0.0), |v| v.parse().map_err(|e| config_err("epsilon", e))) };
        let q = || -> Result<u32> { get("q").map_or(Ok(0), |v| v.parse().map_err(|e| config_err("q", e))) };
        let scale = |n: u32, default: f64| -> Result<f64> {
            match get("target_scale") {
                None => Ok(default),
                Some("n") => Ok(f64::from(n)),
                Some(v) => v.parse().map_err(|e| config_err("target_scale", e)),
            }
        };
        let spec = match model {
            "grover-plain" => {
                let n = n()?;
                let driver = get("driver").map_or(Ok(Driver::Grover), str::parse)?;
                ModelSpec::GroverPlain { driver, n, target_scale: scale(n, 1.0)? }
            }
            "grover-noise-std" | "grover-noise-grv" => {
                let n = n()?;
                let (epsilon, q, target_scale) = (epsilon()?, q()?, scale(n, f64::from(n))?);
                if model == "grover-noise-std" {
                    ModelSpec::GroverNoiseStd { n, epsilon, q, target_scale }
                } else {
                    ModelSpec::GroverNoiseGrv { n, epsilon, q, target_scale }
                }
            }
            "tunneling" => ModelSpec::Tunneling {
                n: n()?,
                barriers: parse_list(get("barriers").unwrap_or(""), "barriers")?,
            },
            "multi-solution" => ModelSpec::MultiSolution {
                n: n()?,
                targets: parse_list(get("targets").unwrap_or(""), "targets")?,
            },
            "mlevel-grover" => ModelSpec::MLevelGrover {
                energies: parse_list(get("energies").unwrap_or(""), "energies")?,
                degeneracies: parse_list(get("degeneracies").unwrap_or(""), "degeneracies")?,
            },
            other => return Err(Error::Config(format!("unknown model '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_kv(&self) -> BTreeMap<String, String> {
        let mut kv = BTreeMap::new();
        kv.insert("model".to_string(), self.kind().to_string());
        let join = |v: Vec<String>| v.join(",");
        match self {
            ModelSpec::GroverPlain { driver, n, target_scale } => {
                kv.insert("driver".into(), driver.name().into());
                kv.insert("n".into(), n.to_string());
                kv.insert("target_scale".into(), target_scale.to_string());
            }
            ModelSpec::GroverNoiseStd { n, epsilon, q, target_scale }
            | ModelSpec::GroverNoiseGrv { n, epsilon, q, target_scale } => {
                kv.insert("n".into(), n.to_string());
                kv.insert("epsilon".into(), epsilon.to_string());
                kv.insert("q".into(), q.to_string());
                kv.insert("target_scale".into(), target_scale.to_string());
            }
            ModelSpec::Tunneling { n, barriers } => {
                kv.insert("n".into(), n.to_string());
                kv.insert("barriers".into(), join(barriers.iter().map(f64::to_string).collect()));
            }
            ModelSpec::MultiSolution { n, targets } => {
                kv.insert("n".into(), n.to_string());
                kv.insert("targets".into(), join(targets.iter().map(BitString::to_string).collect()));
            }
            ModelSpec::MLevelGrover { energies, degeneracies } => {
                kv.insert("energies".into(), join(energies.iter().map(f64::to_string).collect()));
                kv.insert("degeneracies".into(), join(degeneracies.iter().map(u128::to_string).collect()));
            }
        }
        kv
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kv = self.to_kv();
        let parts: Vec<String> = kv.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn config_err(key: &str, e: impl fmt::Display) -> Error {
    Error::Config(format!("invalid value for '{key}': {e}"))
}

fn parse_list<T: FromStr>(raw: &str, key: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| config_err(key, e)))
        .collect()
}
