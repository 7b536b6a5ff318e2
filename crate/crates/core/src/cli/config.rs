use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annealing::Schedule;
use crate::models::{BitString, ModelSpec};
use crate::{Error, Result};

/// Keys describing the model family; everything else is a run setting.
pub const MODEL_KEYS: [&str; 9] =
    ["model", "driver", "n", "target_scale", "barriers", "targets", "p", "energies", "degeneracies"];
pub const RUN_KEYS: [&str; 15] = [
    "n_min",
    "n_max",
    "n_step",
    "epsilon",
    "q",
    "schedule",
    "s_points",
    "feasible_only",
    "levels",
    "seed",
    "workers",
    "out",
    "target_success",
    "draws",
    "tolerance",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got '{line}'", i + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QChoice {
    Fixed(u32),
    Scan,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: BTreeMap<String, String>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub n_step: u32,
    pub epsilons: Vec<f64>,
    pub q: QChoice,
    pub schedule: Schedule,
    pub s_points: Option<usize>,
    pub feasible_only: bool,
    pub levels: usize,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub target_success: f64,
    pub draws: usize,
    pub tolerance: f64,
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse().map_err(|e| Error::Config(format!("{key} = '{v}': {e}")))
}

impl RunConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        for k in map.keys() {
            if !MODEL_KEYS.contains(&k.as_str()) && !RUN_KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("unknown key '{k}'")));
            }
        }
        let get = |k: &str| map.get(k).map(String::as_str).filter(|v| !v.trim().is_empty());
        let opt = |k: &str| -> Result<Option<u32>> { get(k).map(|v| parse(k, v)).transpose() };
        let n = opt("n")?;
        let n_min = opt("n_min")?.or(n);
        let n_max = opt("n_max")?.or(n).or(n_min);
        let n_step = opt("n_step")?.unwrap_or(1);
        if n_step == 0 {
            return Err(Error::Config("n_step must be positive".into()));
        }
        let epsilons = match get("epsilon") {
            None => vec![0.0],
            Some(v) => v.split(',').map(|e| parse::<f64>("epsilon", e)).collect::<Result<Vec<_>>>()?,
        };
        if epsilons.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return Err(Error::Config(format!("epsilon values must be finite and >= 0: {epsilons:?}")));
        }
        let q = match get("q") {
            None => QChoice::Fixed(0),
            Some("scan") => QChoice::Scan,
            Some(v) => QChoice::Fixed(parse("q", v)?),
        };
        let target_success: f64 = get("target_success").map_or(Ok(0.99), |v| parse("target_success", v))?;
        if !(target_success > 0.0 && target_success < 1.0) {
            return Err(Error::Config(format!("target_success must lie in (0, 1), got {target_success}")));
        }
        let flag = |k: &str| -> Result<bool> {
            match get(k) {
                None => Ok(false),
                Some("1" | "true" | "yes") => Ok(true),
                Some("0" | "false" | "no") => Ok(false),
                Some(v) => Err(Error::Config(format!("{k} = '{v}' is not a boolean"))),
            }
        };
        Ok(RunConfig {
            model: map.iter().filter(|(k, _)| MODEL_KEYS.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect(),
            n_min,
            n_max,
            n_step,
            epsilons,
            q,
            schedule: get("schedule").map_or(Ok(Schedule::Optimal), str::parse)?,
            s_points: get("s_points").map(|v| parse("s_points", v)).transpose()?,
            feasible_only: flag("feasible_only")?,
            levels: get("levels").map_or(Ok(1), |v| parse("levels", v))?,
            seed: get("seed").map_or(Ok(0), |v| parse("seed", v))?,
            workers: get("workers").map_or(Ok(0), |v| parse("workers", v))?,
            out: get("out").map(PathBuf::from),
            target_success,
            draws: get("draws").map_or(Ok(20), |v| parse("draws", v))?,
            tolerance: get("tolerance").map_or(Ok(1e-9), |v| parse("tolerance", v))?,
        })
    }

    pub fn model_name(&self) -> Result<&str> {
        self.model.get("model").map(String::as_str).ok_or_else(|| Error::Config("missing key 'model'".into()))
    }

    pub fn is_noisy(&self) -> bool {
        matches!(self.model.get("model").map(String::as_str), Some("grover-noise-std" | "grover-noise-grv"))
    }

    /// The `n` values of the sweep; empty when `n_min > n_max`.
    pub fn n_values(&self) -> Result<Vec<u32>> {
        if self.model.get("model").map(String::as_str) == Some("mlevel-grover") {
            return Ok(vec![self.model_at(0, 0.0, 0)?.n()]);
        }
        match (self.n_min, self.n_max) {
            (Some(lo), Some(hi)) => Ok((lo..=hi).step_by(self.n_step as usize).collect()),
            _ => Err(Error::Config("set n, or n_min and n_max".into())),
        }
    }

    /// Noise strengths to sweep; noiseless models ignore the list.
    pub fn epsilon_values(&self) -> Vec<f64> {
        if self.is_noisy() {
            self.epsilons.clone()
        } else {
            vec![0.0]
        }
    }

    /// Model instance at one sweep point. Missing barriers or targets are
    /// drawn from a generator seeded by `(seed, n)`.
    pub fn model_at(&self, n: u32, epsilon: f64, q: u32) -> Result<ModelSpec> {
        let mut kv = self.model.clone();
        kv.insert("n".into(), n.to_string());
        kv.insert("epsilon".into(), epsilon.to_string());
        kv.insert("q".into(), q.to_string());
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ u64::from(n).rotate_left(32));
        match self.model_name()? {
            "tunneling" if !kv.contains_key("barriers") => {
                let v: Vec<String> = (0..n).map(|_| rng.random_range(0.25..2.0f64).to_string()).collect();
                kv.insert("barriers".into(), v.join(","));
            }
            "multi-solution" if !kv.contains_key("targets") => {
                let p: usize = kv.get("p").map_or(Ok(5), |v| parse("p", v))?;
                if n < 64 && p as u64 >= 1u64 << n {
                    return Err(Error::Config(format!("p = {p} targets do not fit in {n} qubits")));
                }
                let mut targets: Vec<BitString> = Vec::with_capacity(p);
                while targets.len() < p {
                    let t = BitString((0..n).map(|_| rng.random_bool(0.5)).collect());
                    if !targets.contains(&t) {
                        targets.push(t);
                    }
                }
                kv.insert("targets".into(), targets.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
            }
            _ => {}
        }
        kv.remove("p");
        ModelSpec::from_kv(&kv)
    }
}
