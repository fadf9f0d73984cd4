//! Plot-ready tables aggregated over runs, grouped by substrate.
//!
//! Each table is emitted for two cohorts: `perfect` (final score at least
//! `min_correct`) and `all`. A cohort with no members yields one row whose
//! fields after the key columns are all [`EMPTY`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use acp_core::Substrate;

use crate::analyze::{self, ReplicateAnalysis};
use crate::error::{LabError, Result};
use crate::formats::{self, CsvContext};
use crate::layout::RunDir;
use crate::robustness::{self, BrainRobustness};
use crate::stats;

pub const EMPTY: &str = "empty";
pub const GROUPS: [Group; 2] = [Group::Perfect, Group::All];
pub const FILES: [&str; 8] = [
    "fitness_over_time.csv",
    "r_over_time.csv",
    "matrix_stack.csv",
    "smearedness.csv",
    "robustness_curves.csv",
    "smear_vs_robustness.csv",
    "smear_means.csv",
    "smear_fit.csv",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Perfect,
    All,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Perfect => "perfect",
            Group::All => "all",
        }
    }
}

/// One final brain with everything the report needs.
#[derive(Clone, Debug)]
struct Agent {
    run: usize,
    analysis: ReplicateAnalysis,
    robustness: BrainRobustness,
    samples: Vec<analyze::SampleRow>,
    lod_fitness: Vec<f64>,
}

impl Agent {
    fn in_group(&self, g: Group, min_correct: u32) -> bool {
        g == Group::All || self.analysis.final_record.n_correct >= min_correct
    }
}

fn load(runs: &[PathBuf]) -> Result<BTreeMap<Substrate, Vec<Agent>>> {
    let mut by_substrate: BTreeMap<Substrate, Vec<Agent>> = BTreeMap::new();
    for (run_idx, dir) in runs.iter().enumerate() {
        let run = RunDir::new(dir);
        let cfg = run.read_manifest()?;
        let analyses = analyze::read_summary(&dir.join(analyze::SUMMARY_FILE))?;
        let robust = robustness::read_run(dir)?;
        if analyses.len() != robust.len() || analyses.iter().zip(&robust).any(|(a, r)| a.replicate != r.replicate) {
            return Err(LabError::Archive(format!("{}: analysis and robustness summaries disagree", dir.display())));
        }
        for (a, r) in analyses.into_iter().zip(robust) {
            let samples = analyze::read_samples(&run.file(a.replicate, "analysis.csv"))?;
            let lod_fitness = formats::read_archive_csv(&run.file(a.replicate, "lod.csv"))?
                .into_iter()
                .map(|(_, rec)| rec.fitness)
                .collect();
            by_substrate.entry(cfg.substrate).or_default().push(Agent {
                run: run_idx,
                analysis: a,
                robustness: r,
                samples,
                lod_fitness,
            });
        }
    }
    Ok(by_substrate)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| EMPTY.to_string())
}

fn empty_row(keys: &[&str], width: usize) -> Vec<String> {
    let mut row: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
    row.resize(width, EMPTY.to_string());
    row
}

/// Writes every report table into `out`.
pub fn report(runs: &[PathBuf], out: &Path, min_correct: u32) -> Result<()> {
    let data = load(runs)?;
    fitness_over_time(&data, &out.join(FILES[0]))?;
    r_over_time(&data, &out.join(FILES[1]), min_correct)?;
    matrix_stack(&data, &out.join(FILES[2]), min_correct)?;
    smearedness(&data, &out.join(FILES[3]), min_correct)?;
    robustness_curves(&data, &out.join(FILES[4]), min_correct)?;
    smear_vs_robustness(&data, out, min_correct)
}

fn fitness_over_time(data: &BTreeMap<Substrate, Vec<Agent>>, path: &Path) -> Result<()> {
    let mut w = formats::create_csv(path)?;
    w.write_record(["substrate", "generation", "n", "mean_fitness", "sd_fitness"]).at(path)?;
    for (s, brains) in data {
        let longest = brains.iter().map(|b| b.lod_fitness.len()).max().unwrap_or(0);
        for g in 0..longest {
            let xs: Vec<f64> = brains.iter().filter_map(|b| b.lod_fitness.get(g).copied()).collect();
            w.write_record([s.name().to_string(), g.to_string(), xs.len().to_string(), fmt_opt(stats::mean(&xs)), fmt_opt(stats::sd(&xs))])
                .at(path)?;
        }
    }
    w.flush().at(path)
}

fn r_over_time(data: &BTreeMap<Substrate, Vec<Agent>>, path: &Path, min_correct: u32) -> Result<()> {
    const HEADER: [&str; 6] = ["substrate", "group", "generation", "n", "mean_R", "stderr_R"];
    let mut w = formats::create_csv(path)?;
    w.write_record(HEADER).at(path)?;
    for (s, brains) in data {
        for g in GROUPS {
            let members: Vec<&Agent> = brains.iter().filter(|b| b.in_group(g, min_correct)).collect();
            if members.is_empty() {
                w.write_record(empty_row(&[s.name(), g.name()], HEADER.len())).at(path)?;
                continue;
            }
            let mut by_gen: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
            for b in &members {
                for row in &b.samples {
                    by_gen.entry(row.generation).or_default().push(row.r);
                }
            }
            for (gen, rs) in by_gen {
                w.write_record([
                    s.name().to_string(),
                    g.name().to_string(),
                    gen.to_string(),
                    rs.len().to_string(),
                    fmt_opt(stats::mean(&rs)),
                    fmt_opt(stats::stderr(&rs)),
                ])
                .at(path)?;
            }
        }
    }
    w.flush().at(path)
}

fn matrix_stack(data: &BTreeMap<Substrate, Vec<Agent>>, path: &Path, min_correct: u32) -> Result<()> {
    let mut header: Vec<String> = ["substrate", "group", "run", "replicate", "n_correct"].map(String::from).to_vec();
    header.extend(formats::linearized_header());
    let mut w = formats::create_csv(path)?;
    w.write_record(&header).at(path)?;
    for (s, brains) in data {
        for g in GROUPS {
            let members: Vec<&Agent> = brains.iter().filter(|b| b.in_group(g, min_correct)).collect();
            if members.is_empty() {
                w.write_record(empty_row(&[s.name(), g.name()], header.len())).at(path)?;
            }
            for b in members {
                let a = &b.analysis;
                let mut rec = vec![
                    s.name().to_string(),
                    g.name().to_string(),
                    b.run.to_string(),
                    a.replicate.to_string(),
                    a.final_record.n_correct.to_string(),
                ];
                rec.extend(a.representation.matrix.linearized().iter().map(|v| v.to_string()));
                w.write_record(&rec).at(path)?;
            }
        }
    }
    w.flush().at(path)
}

fn smearedness(data: &BTreeMap<Substrate, Vec<Agent>>, path: &Path, min_correct: u32) -> Result<()> {
    const HEADER: [&str; 7] = ["substrate", "group", "n", "mean_S_N", "stderr_S_N", "mean_S_C", "stderr_S_C"];
    let mut w = formats::create_csv(path)?;
    w.write_record(HEADER).at(path)?;
    for (s, brains) in data {
        for g in GROUPS {
            let members: Vec<&Agent> = brains.iter().filter(|b| b.in_group(g, min_correct)).collect();
            if members.is_empty() {
                w.write_record(empty_row(&[s.name(), g.name()], HEADER.len())).at(path)?;
                continue;
            }
            let sn: Vec<f64> = members.iter().map(|b| b.analysis.representation.node_smearedness).collect();
            let sc: Vec<f64> = members.iter().map(|b| b.analysis.representation.concept_smearedness).collect();
            w.write_record([
                s.name().to_string(),
                g.name().to_string(),
                members.len().to_string(),
                fmt_opt(stats::mean(&sn)),
                fmt_opt(stats::stderr(&sn)),
                fmt_opt(stats::mean(&sc)),
                fmt_opt(stats::stderr(&sc)),
            ])
            .at(path)?;
        }
    }
    w.flush().at(path)
}

fn robustness_curves(data: &BTreeMap<Substrate, Vec<Agent>>, path: &Path, min_correct: u32) -> Result<()> {
    const HEADER: [&str; 6] = ["substrate", "group", "p", "n", "mean", "stderr"];
    let mut w = formats::create_csv(path)?;
    w.write_record(HEADER).at(path)?;
    for (s, brains) in data {
        for g in GROUPS {
            let members: Vec<&Agent> = brains.iter().filter(|b| b.in_group(g, min_correct)).collect();
            if members.is_empty() {
                w.write_record(empty_row(&[s.name(), g.name()], HEADER.len())).at(path)?;
                continue;
            }
            // Noise levels are non-negative, so bit patterns sort numerically.
            let mut by_p: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
            for b in &members {
                for c in &b.robustness.curve {
                    by_p.entry(c.p.to_bits()).or_default().push(c.mean);
                }
            }
            for (p, means) in by_p {
                w.write_record([
                    s.name().to_string(),
                    g.name().to_string(),
                    f64::from_bits(p).to_string(),
                    means.len().to_string(),
                    fmt_opt(stats::mean(&means)),
                    fmt_opt(stats::stderr(&means)),
                ])
                .at(path)?;
            }
        }
    }
    w.flush().at(path)
}

fn smear_vs_robustness(data: &BTreeMap<Substrate, Vec<Agent>>, out: &Path, min_correct: u32) -> Result<()> {
    let path = out.join(FILES[5]);
    let mut w = formats::create_csv(&path)?;
    w.write_record(["substrate", "run", "replicate", "n_correct", "perfect", "robustness", "S_N", "S_C"]).at(&path)?;
    for (s, brains) in data {
        for b in brains {
            let rep = &b.analysis.representation;
            w.write_record([
                s.name().to_string(),
                b.run.to_string(),
                b.analysis.replicate.to_string(),
                b.analysis.final_record.n_correct.to_string(),
                (b.in_group(Group::Perfect, min_correct) as u8).to_string(),
                b.robustness.scalar().to_string(),
                rep.node_smearedness.to_string(),
                rep.concept_smearedness.to_string(),
            ])
            .at(&path)?;
        }
    }
    w.flush().at(&path)?;

    const MEANS: [&str; 6] = ["group", "substrate", "n", "robustness", "S_N", "S_C"];
    const FIT: [&str; 5] = ["group", "measure", "n_points", "slope", "intercept"];
    let (means_path, fit_path) = (out.join(FILES[6]), out.join(FILES[7]));
    let mut wm = formats::create_csv(&means_path)?;
    let mut wf = formats::create_csv(&fit_path)?;
    wm.write_record(MEANS).at(&means_path)?;
    wf.write_record(FIT).at(&fit_path)?;
    for g in GROUPS {
        let mut points_n = Vec::new();
        let mut points_c = Vec::new();
        for (s, brains) in data {
            let members: Vec<&Agent> = brains.iter().filter(|b| b.in_group(g, min_correct)).collect();
            if members.is_empty() {
                wm.write_record(empty_row(&[g.name(), s.name()], MEANS.len())).at(&means_path)?;
                continue;
            }
            let rob = stats::mean(&members.iter().map(|b| b.robustness.scalar()).collect::<Vec<_>>()).expect("non-empty");
            let sn = stats::mean(&members.iter().map(|b| b.analysis.representation.node_smearedness).collect::<Vec<_>>())
                .expect("non-empty");
            let sc = stats::mean(&members.iter().map(|b| b.analysis.representation.concept_smearedness).collect::<Vec<_>>())
                .expect("non-empty");
            wm.write_record([
                g.name().to_string(),
                s.name().to_string(),
                members.len().to_string(),
                rob.to_string(),
                sn.to_string(),
                sc.to_string(),
            ])
            .at(&means_path)?;
            points_n.push((rob, sn));
            points_c.push((rob, sc));
        }
        for (measure, points) in [("S_N", &points_n), ("S_C", &points_c)] {
            let line = stats::least_squares(points);
            wf.write_record([
                g.name().to_string(),
                measure.to_string(),
                points.len().to_string(),
                fmt_opt(line.map(|l| l.slope)),
                fmt_opt(line.map(|l| l.intercept)),
            ])
            .at(&fit_path)?;
        }
    }
    wm.flush().at(&means_path)?;
    wf.flush().at(&fit_path)
}
