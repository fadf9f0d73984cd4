//! Sensor-noise sweeps of final line-of-descent brains.

use std::path::Path;

use rayon::prelude::*;

use acp_core::seed::{self, Stream};
use acp_core::{world, Brain, Genome, Substrate, WorldConfig};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::formats::{self, CsvContext};
use crate::layout::RunDir;
use crate::stats;

pub const CURVE_HEADER: [&str; 3] = ["p", "mean", "stderr"];
pub const SUMMARY_HEADER: [&str; 5] = ["replicate", "id", "n_correct", "perfect", "robustness"];
pub const SUMMARY_FILE: &str = "robustness_summary.csv";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    /// Mean fraction of correct trials over the noise replicates.
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrainRobustness {
    pub replicate: usize,
    pub id: u64,
    pub n_correct: u32,
    pub perfect: bool,
    pub curve: Vec<CurvePoint>,
}

impl BrainRobustness {
    /// Mean performance across the sweep.
    pub fn scalar(&self) -> f64 {
        let means: Vec<f64> = self.curve.iter().map(|c| c.mean).collect();
        stats::mean(&means).unwrap_or(0.0)
    }
}

/// Fraction correct of `brain` over all trials at noise `p`, for each of
/// `replicates` independent noise streams derived from `seed`.
pub fn noisy_scores<B: Brain + ?Sized>(
    brain: &mut B,
    world_cfg: &WorldConfig,
    p: f64,
    level: usize,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let trials = world_cfg.all_trials();
    (0..replicates)
        .map(|k| {
            let mut rng = seed::rng(seed, Stream::Noise, &[level as u64, k as u64]);
            let mut correct = 0u32;
            for spec in &trials {
                correct += world::run_trial(brain, spec, world_cfg, p, &mut rng, None)
                    .map_err(|e| LabError::config("noise_levels", e.to_string()))? as u32;
            }
            Ok(correct as f64 / trials.len() as f64)
        })
        .collect()
}

pub fn robustness_curve<B: Brain + ?Sized>(
    brain: &mut B,
    world_cfg: &WorldConfig,
    levels: &[f64],
    replicates: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    levels
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let scores = noisy_scores(brain, world_cfg, p, i, replicates, seed)?;
            Ok(CurvePoint { p, mean: stats::mean(&scores).unwrap_or(0.0), stderr: stats::stderr(&scores).unwrap_or(0.0) })
        })
        .collect()
}

pub fn robustness_run(run_dir: &Path) -> Result<Vec<BrainRobustness>> {
    let run = RunDir::new(run_dir);
    let cfg = run.read_manifest()?;
    let results: Vec<BrainRobustness> =
        (0..cfg.replicates).into_par_iter().map(|r| robustness_replicate(&run, &cfg, r)).collect::<Result<_>>()?;
    write_summary(&run_dir.join(SUMMARY_FILE), &results)?;
    Ok(results)
}

fn final_genome(run: &RunDir, replicate: usize) -> Result<(u64, u32, Genome)> {
    let lod = formats::read_archive_csv(&run.file(replicate, "lod.csv"))?;
    let (_, last) = *lod.last().ok_or_else(|| LabError::Archive(format!("replicate {replicate}: empty line of descent")))?;
    let genome = formats::read_genome_store(&run.file(replicate, "genomes.bin"))?
        .into_iter()
        .find(|(id, _)| *id == last.id)
        .map(|(_, g)| g)
        .ok_or_else(|| LabError::Archive(format!("replicate {replicate}: missing genome for final id {}", last.id)))?;
    Ok((last.id, last.n_correct, genome))
}

fn robustness_replicate(run: &RunDir, cfg: &ExperimentConfig, replicate: usize) -> Result<BrainRobustness> {
    let world_cfg = WorldConfig::default();
    let (id, n_correct, genome) = final_genome(run, replicate)?;
    let mut brain = cfg.substrate.build(&genome)?;
    let curve = robustness_curve(&mut brain, &world_cfg, &cfg.noise_levels, cfg.noise_replicates, cfg.replicate_seed(replicate))?;
    let result = BrainRobustness {
        replicate,
        id,
        n_correct,
        perfect: n_correct == world_cfg.all_trials().len() as u32,
        curve,
    };
    write_curve(&run.file(replicate, "robustness.csv"), &result.curve)?;
    Ok(result)
}

/// Convenience for callers holding a genome rather than a run directory.
pub fn genome_curve(
    substrate: Substrate,
    genome: &Genome,
    levels: &[f64],
    replicates: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    let mut brain = substrate.build(genome)?;
    robustness_curve(&mut brain, &WorldConfig::default(), levels, replicates, seed)
}

pub fn write_curve(path: &Path, curve: &[CurvePoint]) -> Result<()> {
    let mut w = formats::create_csv(path)?;
    w.write_record(CURVE_HEADER).at(path)?;
    for c in curve {
        w.write_record([c.p.to_string(), c.mean.to_string(), c.stderr.to_string()]).at(path)?;
    }
    w.flush().at(path)
}

pub fn read_curve(path: &Path) -> Result<Vec<CurvePoint>> {
    formats::read_rows(path, &CURVE_HEADER)?
        .iter()
        .map(|row| {
            Ok(CurvePoint {
                p: formats::parse_field(path, row, 0)?,
                mean: formats::parse_field(path, row, 1)?,
                stderr: formats::parse_field(path, row, 2)?,
            })
        })
        .collect()
}

pub fn write_summary(path: &Path, results: &[BrainRobustness]) -> Result<()> {
    let mut w = formats::create_csv(path)?;
    w.write_record(SUMMARY_HEADER).at(path)?;
    for b in results {
        w.write_record([
            b.replicate.to_string(),
            b.id.to_string(),
            b.n_correct.to_string(),
            (b.perfect as u8).to_string(),
            b.scalar().to_string(),
        ])
        .at(path)?;
    }
    w.flush().at(path)
}

/// Reads the run summary and every per-replicate curve it names.
pub fn read_run(run_dir: &Path) -> Result<Vec<BrainRobustness>> {
    let run = RunDir::new(run_dir);
    let path = run_dir.join(SUMMARY_FILE);
    formats::read_rows(&path, &SUMMARY_HEADER)?
        .iter()
        .map(|row| {
            let replicate: usize = formats::parse_field(&path, row, 0)?;
            Ok(BrainRobustness {
                replicate,
                id: formats::parse_field(&path, row, 1)?,
                n_correct: formats::parse_field(&path, row, 2)?,
                perfect: formats::parse_field::<u8>(&path, row, 3)? == 1,
                curve: read_curve(&run.file(replicate, "robustness.csv"))?,
            })
        })
        .collect()
}
