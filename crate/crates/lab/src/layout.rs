//! Directory layout of one run.
//!
//! ```text
//! <run>/manifest.cfg              exact config of the run
//! <run>/analysis_summary.csv      one row per replicate (after analyze)
//! <run>/robustness_summary.csv    one row per replicate (after robustness)
//! <run>/rep_000/archive.csv       every individual of every generation
//! <run>/rep_000/lod.csv           line of descent, generation 0 first
//! <run>/rep_000/genomes.bin       genomes of sampled line-of-descent ancestors
//! <run>/rep_000/final_genome.txt  the final line-of-descent genome
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::formats;

pub const MANIFEST: &str = "manifest.cfg";
const MANIFEST_BANNER: &str = "# acp run manifest\n";

#[derive(Clone, Debug)]
pub struct RunDir {
    pub root: PathBuf,
}

impl RunDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        RunDir { root: root.into() }
    }

    pub fn manifest(&self) -> PathBuf {
        self.root.join(MANIFEST)
    }

    pub fn replicate(&self, index: usize) -> PathBuf {
        self.root.join(format!("rep_{index:03}"))
    }

    pub fn file(&self, replicate: usize, name: &str) -> PathBuf {
        self.replicate(replicate).join(name)
    }

    pub fn write_manifest(&self, cfg: &ExperimentConfig) -> Result<()> {
        fs::create_dir_all(&self.root).map_err(|e| LabError::io(&self.root, e))?;
        formats::write_atomic(&self.manifest(), format!("{MANIFEST_BANNER}{}", cfg.to_text()).as_bytes())
    }

    pub fn read_manifest(&self) -> Result<ExperimentConfig> {
        read_config(&self.manifest())
    }
}

pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    ExperimentConfig::parse(&text)
}

/// Generations whose line-of-descent ancestor is analyzed: every
/// `interval`-th generation and always the last one.
pub fn sampled_generations(last: usize, interval: usize) -> Vec<usize> {
    let mut gens: Vec<usize> = (0..=last).step_by(interval.max(1)).collect();
    if gens.last() != Some(&last) {
        gens.push(last);
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let run = RunDir::new(dir.path().join("run"));
        let cfg = ExperimentConfig { generations: 7, seed: 12, ..Default::default() };
        run.write_manifest(&cfg).unwrap();
        assert_eq!(run.read_manifest().unwrap(), cfg);
    }

    #[test]
    fn sampling_includes_the_last_generation() {
        assert_eq!(sampled_generations(250, 100), vec![0, 100, 200, 250]);
        assert_eq!(sampled_generations(200, 100), vec![0, 100, 200]);
        assert_eq!(sampled_generations(0, 100), vec![0]);
    }
}
