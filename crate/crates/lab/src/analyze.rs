//! Noise-free information analysis of the line of descent. Uses no randomness.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use acp_core::brain::AnyBrain;
use acp_core::evolution::Record;
use acp_core::info::{self, Representation, RepresentationMatrix};
use acp_core::{world, Genome, Substrate, WorldConfig};

use crate::error::{LabError, Result};
use crate::formats::{self, CsvContext};
use crate::layout::{sampled_generations, RunDir};

pub const ANALYSIS_HEADER: [&str; 7] = ["generation", "id", "n_correct", "fitness", "R", "S_N", "S_C"];
pub const SUMMARY_FILE: &str = "analysis_summary.csv";

/// One sampled ancestor.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRow {
    pub generation: usize,
    pub record: Record,
    pub r: f64,
    pub s_n: f64,
    pub s_c: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateAnalysis {
    pub replicate: usize,
    pub final_record: Record,
    pub perfect: bool,
    pub representation: Representation,
}

/// Rebuilds a brain, plays all trials with recording and analyzes the trace.
pub fn analyze_genome(
    substrate: Substrate,
    genome: &Genome,
    world_cfg: &WorldConfig,
) -> Result<(u32, Vec<Vec<world::TrialRecordRow>>, Representation, AnyBrain)> {
    let mut brain = substrate.build(genome)?;
    let (n, trials) = world::record_all(&mut brain, world_cfg);
    let rep = info::analyze(&formats::trace_from_trials(&trials))?;
    Ok((n, trials, rep, brain))
}

pub fn analyze_run(run_dir: &Path) -> Result<Vec<ReplicateAnalysis>> {
    let run = RunDir::new(run_dir);
    let cfg = run.read_manifest()?;
    let results: Vec<ReplicateAnalysis> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| analyze_replicate(&run, cfg.substrate, cfg.lod_sample_interval, r))
        .collect::<Result<_>>()?;
    write_summary(&run_dir.join(SUMMARY_FILE), &results)?;
    Ok(results)
}

fn analyze_replicate(run: &RunDir, substrate: Substrate, interval: usize, replicate: usize) -> Result<ReplicateAnalysis> {
    let world_cfg = WorldConfig::default();
    let n_trials = world_cfg.all_trials().len() as u32;
    let lod = formats::read_archive_csv(&run.file(replicate, "lod.csv"))?;
    if lod.is_empty() {
        return Err(LabError::Archive(format!("replicate {replicate}: empty line of descent")));
    }
    let genomes: BTreeMap<u64, Genome> = formats::read_genome_store(&run.file(replicate, "genomes.bin"))?.into_iter().collect();

    let mut rows = Vec::new();
    let mut last = None;
    for g in sampled_generations(lod.len() - 1, interval) {
        let (gen, record) = lod[g];
        let genome = genomes.get(&record.id).ok_or_else(|| {
            LabError::Archive(format!("replicate {replicate}: missing genome for line-of-descent id {} (generation {gen})", record.id))
        })?;
        let (n, trials, rep, brain) = analyze_genome(substrate, genome, &world_cfg)?;
        if n != record.n_correct {
            return Err(LabError::Archive(format!(
                "replicate {replicate}: id {} scores {n} but the archive records {}",
                record.id, record.n_correct
            )));
        }
        rows.push(SampleRow { generation: gen, record, r: rep.r, s_n: rep.node_smearedness, s_c: rep.concept_smearedness });
        last = Some((record, trials, rep, brain));
    }
    write_samples(&run.file(replicate, "analysis.csv"), &rows)?;

    let (record, trials, rep, brain) = last.expect("generation 0 is always sampled");
    formats::write_trace_csv(&run.file(replicate, "trace.csv"), &trials)?;
    formats::write_matrix_csv(&run.file(replicate, "matrix.csv"), &rep.matrix)?;
    match &brain {
        AnyBrain::Markov(mb) => formats::write_gate_dump(&run.file(replicate, "gates.txt"), mb.gates())?,
        AnyBrain::Rnn(b) => formats::write_params_csv(&run.file(replicate, "params.csv"), &b.parameters())?,
        AnyBrain::Lstm(b) => formats::write_params_csv(&run.file(replicate, "params.csv"), &b.parameters())?,
    }
    Ok(ReplicateAnalysis { replicate, final_record: record, perfect: record.n_correct == n_trials, representation: rep })
}

pub fn write_samples(path: &Path, rows: &[SampleRow]) -> Result<()> {
    let mut w = formats::create_csv(path)?;
    w.write_record(ANALYSIS_HEADER).at(path)?;
    for s in rows {
        w.write_record([
            s.generation.to_string(),
            s.record.id.to_string(),
            s.record.n_correct.to_string(),
            s.record.fitness.to_string(),
            s.r.to_string(),
            s.s_n.to_string(),
            s.s_c.to_string(),
        ])
        .at(path)?;
    }
    w.flush().at(path)
}

pub fn read_samples(path: &Path) -> Result<Vec<SampleRow>> {
    formats::read_rows(path, &ANALYSIS_HEADER)?
        .iter()
        .map(|row| {
            let f = |i| formats::parse_field::<f64>(path, row, i);
            Ok(SampleRow {
                generation: formats::parse_field(path, row, 0)?,
                record: Record {
                    id: formats::parse_field(path, row, 1)?,
                    parent_id: None,
                    n_correct: formats::parse_field(path, row, 2)?,
                    fitness: f(3)?,
                },
                r: f(4)?,
                s_n: f(5)?,
                s_c: f(6)?,
            })
        })
        .collect()
}

pub fn summary_header() -> Vec<String> {
    let mut h: Vec<String> =
        ["replicate", "id", "n_correct", "fitness", "perfect", "R", "S_N", "S_C"].map(String::from).to_vec();
    h.extend(formats::linearized_header());
    h
}

pub fn write_summary(path: &Path, results: &[ReplicateAnalysis]) -> Result<()> {
    let mut w = formats::create_csv(path)?;
    w.write_record(summary_header()).at(path)?;
    for a in results {
        let rep = &a.representation;
        let mut rec = vec![
            a.replicate.to_string(),
            a.final_record.id.to_string(),
            a.final_record.n_correct.to_string(),
            a.final_record.fitness.to_string(),
            (a.perfect as u8).to_string(),
            rep.r.to_string(),
            rep.node_smearedness.to_string(),
            rep.concept_smearedness.to_string(),
        ];
        rec.extend(rep.matrix.linearized().iter().map(|v| v.to_string()));
        w.write_record(&rec).at(path)?;
    }
    w.flush().at(path)
}

/// Per-replicate rows of `analysis_summary.csv`. The matrix is rebuilt from
/// its linearized columns.
pub fn read_summary(path: &Path) -> Result<Vec<ReplicateAnalysis>> {
    let header = summary_header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    formats::read_rows(path, &header)?
        .iter()
        .map(|row| {
            let f = |i| formats::parse_field::<f64>(path, row, i);
            let mut linear = [0.0; 30];
            for (k, v) in linear.iter_mut().enumerate() {
                *v = f(8 + k)?;
            }
            let matrix = RepresentationMatrix::from_linearized(&linear);
            Ok(ReplicateAnalysis {
                replicate: formats::parse_field(path, row, 0)?,
                final_record: Record {
                    id: formats::parse_field(path, row, 1)?,
                    parent_id: None,
                    n_correct: formats::parse_field(path, row, 2)?,
                    fitness: f(3)?,
                },
                perfect: formats::parse_field::<u8>(path, row, 4)? == 1,
                representation: Representation {
                    r: f(5)?,
                    node_smearedness: f(6)?,
                    concept_smearedness: f(7)?,
                    matrix,
                },
            })
        })
        .collect()
}
