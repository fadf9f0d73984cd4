use rayon::prelude::*;

use acp_core::evolution::{self, AncestryArchive, Evaluator, Record};
use acp_core::{BuildError, Genome, Substrate, WorldConfig};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::formats;
use crate::layout::{sampled_generations, RunDir};

/// Scores a batch across the rayon pool. Results come back in input order,
/// so runs are identical for any thread count.
#[derive(Clone, Debug)]
pub struct ParallelEvaluator {
    pub substrate: Substrate,
    pub world: WorldConfig,
}

impl Evaluator for ParallelEvaluator {
    fn evaluate(&self, genomes: &[&Genome]) -> Result<Vec<u32>, BuildError> {
        genomes.par_iter().map(|g| evolution::evaluate_genome(self.substrate, g, &self.world)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateOutcome {
    pub replicate: usize,
    pub seed: u64,
    pub final_record: Record,
}

/// Runs every replicate of `cfg` and writes the run directory.
pub fn evolve(cfg: &ExperimentConfig) -> Result<Vec<ReplicateOutcome>> {
    cfg.validate()?;
    let run = RunDir::new(&cfg.output_dir);
    run.write_manifest(cfg)?;
    (0..cfg.replicates).into_par_iter().map(|r| evolve_replicate(cfg, &run, r)).collect()
}

pub fn evolve_replicate(cfg: &ExperimentConfig, run: &RunDir, replicate: usize) -> Result<ReplicateOutcome> {
    let ecfg = cfg.evolution(replicate);
    let eval = ParallelEvaluator { substrate: ecfg.substrate, world: ecfg.world.clone() };
    let archive = evolution::run_evolution(&ecfg, &eval)?;
    let lod = archive.reconstruct_lod()?;
    write_replicate(run, replicate, &archive, &lod, cfg.lod_sample_interval)?;
    Ok(ReplicateOutcome { replicate, seed: ecfg.seed, final_record: *lod.last().expect("lod spans every generation") })
}

fn write_replicate(
    run: &RunDir,
    replicate: usize,
    archive: &AncestryArchive,
    lod: &[Record],
    interval: usize,
) -> Result<()> {
    let rows = archive.generations().iter().enumerate().flat_map(|(g, recs)| recs.iter().map(move |r| (g, r)));
    formats::write_archive_csv(&run.file(replicate, "archive.csv"), rows)?;
    formats::write_archive_csv(&run.file(replicate, "lod.csv"), lod.iter().enumerate())?;

    let mut kept = Vec::new();
    for g in sampled_generations(lod.len() - 1, interval) {
        let id = lod[g].id;
        let genome = archive
            .genome(id)
            .ok_or_else(|| LabError::Archive(format!("genome of line-of-descent id {id} (generation {g}) was not retained")))?;
        kept.push((id, genome));
    }
    formats::write_genome_store(&run.file(replicate, "genomes.bin"), kept.iter().copied())?;
    let last = kept.last().expect("at least generation 0").1;
    formats::write_genomes_text(&run.file(replicate, "final_genome.txt"), &[last])
}
