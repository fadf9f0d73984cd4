//! Flat `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! rejected. [`ExperimentConfig::to_text`] writes every key in a fixed order
//! and parses back to an identical config.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use acp_core::evolution::EvolutionConfig;
use acp_core::genome::MutationConfig;
use acp_core::seed::{self, Stream};
use acp_core::{Substrate, WorldConfig};

use crate::error::LabError;

/// Overrides `output_dir` when set.
pub const OUTPUT_DIR_ENV: &str = "ACP_OUTPUT_DIR";

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub substrate: Substrate,
    pub population_size: usize,
    pub generations: usize,
    pub replicates: usize,
    pub seed: u64,
    pub mutation: MutationConfig,
    pub initial_length: usize,
    pub initial_gates: usize,
    pub noise_levels: Vec<f64>,
    pub noise_replicates: usize,
    pub lod_sample_interval: usize,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            substrate: Substrate::Markov,
            population_size: 100,
            generations: 2_000,
            replicates: 20,
            seed: 1,
            mutation: MutationConfig::default(),
            initial_length: 5_000,
            initial_gates: 40,
            noise_levels: (0..=10).map(|k| k as f64 * 0.05).collect(),
            noise_replicates: 20,
            lod_sample_interval: 100,
            output_dir: PathBuf::from("runs"),
        }
    }
}

fn field<T: FromStr>(key: &'static str, value: &str) -> Result<T, LabError> {
    value.parse().map_err(|_| LabError::config(key, format!("cannot parse {value:?}")))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| LabError::config("line", format!("{}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let m = &mut cfg.mutation;
            match key {
                "substrate" => {
                    cfg.substrate = value
                        .parse()
                        .map_err(|e| LabError::config("substrate", format!("{value:?}: {e}")))?
                }
                "population_size" => cfg.population_size = field("population_size", value)?,
                "generations" => cfg.generations = field("generations", value)?,
                "replicates" => cfg.replicates = field("replicates", value)?,
                "seed" => cfg.seed = field("seed", value)?,
                "point_rate" => m.point_rate = field("point_rate", value)?,
                "indel_rate" => m.indel_rate_per_site = field("indel_rate", value)?,
                "chunk_min" => m.chunk_min = field("chunk_min", value)?,
                "chunk_max" => m.chunk_max = field("chunk_max", value)?,
                "min_len" => m.min_len = field("min_len", value)?,
                "max_len" => m.max_len = field("max_len", value)?,
                "initial_length" => cfg.initial_length = field("initial_length", value)?,
                "initial_gates" => cfg.initial_gates = field("initial_gates", value)?,
                "noise_levels" => {
                    cfg.noise_levels = value
                        .split(',')
                        .map(|v| field("noise_levels", v.trim()))
                        .collect::<Result<_, _>>()?
                }
                "noise_replicates" => cfg.noise_replicates = field("noise_replicates", value)?,
                "lod_sample_interval" => cfg.lod_sample_interval = field("lod_sample_interval", value)?,
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                other => return Err(LabError::config("line", format!("{}: unknown key {other:?}", lineno + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let m = &self.mutation;
        let mut s = String::new();
        let levels: Vec<String> = self.noise_levels.iter().map(|p| p.to_string()).collect();
        for (k, v) in [
            ("substrate", self.substrate.to_string()),
            ("population_size", self.population_size.to_string()),
            ("generations", self.generations.to_string()),
            ("replicates", self.replicates.to_string()),
            ("seed", self.seed.to_string()),
            ("point_rate", m.point_rate.to_string()),
            ("indel_rate", m.indel_rate_per_site.to_string()),
            ("chunk_min", m.chunk_min.to_string()),
            ("chunk_max", m.chunk_max.to_string()),
            ("min_len", m.min_len.to_string()),
            ("max_len", m.max_len.to_string()),
            ("initial_length", self.initial_length.to_string()),
            ("initial_gates", self.initial_gates.to_string()),
            ("noise_levels", levels.join(",")),
            ("noise_replicates", self.noise_replicates.to_string()),
            ("lod_sample_interval", self.lod_sample_interval.to_string()),
            ("output_dir", self.output_dir.display().to_string()),
        ] {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn validate(&self) -> Result<(), LabError> {
        if self.replicates < 1 {
            return Err(LabError::config("replicates", "must be at least 1"));
        }
        if self.noise_replicates < 1 {
            return Err(LabError::config("noise_replicates", "must be at least 1"));
        }
        if self.noise_levels.is_empty() {
            return Err(LabError::config("noise_levels", "needs at least one level"));
        }
        if self.noise_levels.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(LabError::config("noise_levels", "levels must lie in [0, 1]"));
        }
        if self.noise_levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::config("noise_levels", "levels must be strictly ascending"));
        }
        self.evolution(0).validate().map_err(|e| match e {
            acp_core::evolution::EvolutionError::InvalidConfig { field, reason } => {
                LabError::config(if field == "genome_archive_interval" { "lod_sample_interval" } else { field }, reason)
            }
            acp_core::evolution::EvolutionError::Genome(g) => LabError::config("mutation", g.to_string()),
            other => LabError::config("config", other.to_string()),
        })
    }

    /// Seed of replicate `index`, derived from the master seed.
    pub fn replicate_seed(&self, index: usize) -> u64 {
        seed::derive(self.seed, Stream::Replicate, &[index as u64])
    }

    pub fn evolution(&self, replicate: usize) -> EvolutionConfig {
        EvolutionConfig {
            substrate: self.substrate,
            population_size: self.population_size,
            generations: self.generations,
            seed: self.replicate_seed(replicate),
            mutation: self.mutation.clone(),
            initial_length: self.initial_length,
            initial_gates: self.initial_gates,
            genome_archive_interval: self.lod_sample_interval,
            world: WorldConfig::default(),
        }
    }

    /// Applies the output directory environment override.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            self.output_dir = PathBuf::from(dir);
        }
        self
    }
}
