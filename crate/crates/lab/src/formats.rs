//! On-disk formats. Every CSV starts with a header row; floats are written
//! in shortest round-trip form so a file parses back to identical values.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use acp_core::brain::{HiddenBits, Sensors, N_HIDDEN};
use acp_core::evolution::Record;
use acp_core::info::{Concept, RepresentationMatrix, StateTrace};
use acp_core::markov::Gate;
use acp_core::world::{Concepts, TrialRecordRow};
use acp_core::Genome;

use crate::error::{LabError, Result};

pub const ARCHIVE_HEADER: [&str; 5] = ["generation", "id", "parent_id", "n_correct", "fitness"];
const GENOME_MAGIC: &[u8; 8] = b"ACPGENv1";

pub fn create_csv(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
    }
    let file = File::create(path).map_err(|e| LabError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

pub fn open_csv(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| LabError::io(path, e))?;
    Ok(csv::Reader::from_reader(file))
}

/// Maps csv errors onto [`LabError::Format`] for `path`.
pub trait CsvContext<T> {
    fn at(self, path: &Path) -> Result<T>;
}

impl<T> CsvContext<T> for std::result::Result<T, csv::Error> {
    fn at(self, path: &Path) -> Result<T> {
        self.map_err(|e| LabError::format(path, e.to_string()))
    }
}

impl<T> CsvContext<T> for std::io::Result<T> {
    fn at(self, path: &Path) -> Result<T> {
        self.map_err(|e| LabError::io(path, e))
    }
}

/// Reads all records and checks the header matches `expected` exactly.
pub fn read_rows(path: &Path, expected: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = open_csv(path)?;
    let header = rdr.headers().at(path)?.clone();
    if header.iter().ne(expected.iter().copied()) {
        return Err(LabError::format(path, format!("header {:?} != {:?}", header, expected)));
    }
    rdr.records().collect::<std::result::Result<Vec<_>, _>>().at(path)
}

pub fn parse_field<T: std::str::FromStr>(path: &Path, row: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = row.get(i).ok_or_else(|| LabError::format(path, format!("missing column {i}")))?;
    raw.parse().map_err(|_| LabError::format(path, format!("bad value {raw:?} in column {i}")))
}

pub fn write_archive_csv<'a, I>(path: &Path, rows: I) -> Result<()>
where
    I: IntoIterator<Item = (usize, &'a Record)>,
{
    let mut w = create_csv(path)?;
    w.write_record(ARCHIVE_HEADER).at(path)?;
    for (g, r) in rows {
        let parent = r.parent_id.map(|p| p.to_string()).unwrap_or_default();
        w.write_record([g.to_string(), r.id.to_string(), parent, r.n_correct.to_string(), r.fitness.to_string()])
            .at(path)?;
    }
    w.flush().at(path)
}

/// Rows as `(generation, record)` in file order.
pub fn read_archive_csv(path: &Path) -> Result<Vec<(usize, Record)>> {
    read_rows(path, &ARCHIVE_HEADER)?
        .iter()
        .map(|row| {
            let parent_raw = row.get(2).unwrap_or("");
            let parent_id = if parent_raw.is_empty() { None } else { Some(parse_field(path, row, 2)?) };
            Ok((
                parse_field(path, row, 0)?,
                Record {
                    id: parse_field(path, row, 1)?,
                    parent_id,
                    n_correct: parse_field(path, row, 3)?,
                    fitness: parse_field(path, row, 4)?,
                },
            ))
        })
        .collect()
}

/// Binary genome store: magic, `u64` count, then per genome `u64` id,
/// `u32` length and the raw sites. Little-endian.
pub fn write_genome_store<'a, I>(path: &Path, genomes: I) -> Result<()>
where
    I: IntoIterator<Item = (u64, &'a Genome)>,
{
    let genomes: Vec<(u64, &Genome)> = genomes.into_iter().collect();
    let mut buf = Vec::with_capacity(16 + genomes.iter().map(|g| 12 + g.1.len()).sum::<usize>());
    buf.extend_from_slice(GENOME_MAGIC);
    buf.extend_from_slice(&(genomes.len() as u64).to_le_bytes());
    for (id, g) in genomes {
        buf.extend_from_slice(&id.to_le_bytes());
        buf.extend_from_slice(&(g.len() as u32).to_le_bytes());
        buf.extend_from_slice(g.sites());
    }
    write_atomic(path, &buf)
}

pub fn read_genome_store(path: &Path) -> Result<Vec<(u64, Genome)>> {
    let mut bytes = Vec::new();
    File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).at(path)?;
    let bad = |why: &str| LabError::format(path, why.to_string());
    if bytes.len() < 16 || &bytes[..8] != GENOME_MAGIC {
        return Err(bad("not a genome store"));
    }
    let take = |at: &mut usize, n: usize| -> Result<&[u8]> {
        let s = bytes.get(*at..*at + n).ok_or_else(|| bad("truncated genome store"))?;
        *at += n;
        Ok(s)
    };
    let mut at = 8;
    let count = u64::from_le_bytes(take(&mut at, 8)?.try_into().expect("8 bytes"));
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let id = u64::from_le_bytes(take(&mut at, 8)?.try_into().expect("8 bytes"));
        let len = u32::from_le_bytes(take(&mut at, 4)?.try_into().expect("4 bytes")) as usize;
        out.push((id, Genome::new(take(&mut at, len)?.to_vec())));
    }
    if at != bytes.len() {
        return Err(bad("trailing bytes after genome store"));
    }
    Ok(out)
}

/// One genome per line, comma-separated decimal sites.
pub fn write_genomes_text(path: &Path, genomes: &[&Genome]) -> Result<()> {
    let mut s = String::new();
    for g in genomes {
        let sites: Vec<String> = g.iter().map(|b| b.to_string()).collect();
        s.push_str(&sites.join(","));
        s.push('\n');
    }
    write_atomic(path, s.as_bytes())
}

pub fn read_genomes_text(path: &Path) -> Result<Vec<Genome>> {
    let text = fs::read_to_string(path).at(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, line)| {
            line.split(',')
                .map(|v| v.trim().parse::<u8>())
                .collect::<std::result::Result<Vec<u8>, _>>()
                .map(Genome::new)
                .map_err(|_| LabError::format(path, format!("line {}: sites must be integers 0-255", n + 1)))
        })
        .collect()
}

pub fn trace_header() -> Vec<String> {
    let mut h = vec!["trial".to_string(), "tick".to_string()];
    h.extend((0..4).map(|k| format!("s{k}")));
    h.extend((0..N_HIDDEN).map(|k| format!("b{k}")));
    h.extend(["ws", "wl", "wd"].map(String::from));
    h
}

/// Recorded trials, concatenated with a trial id column.
pub fn write_trace_csv(path: &Path, trials: &[Vec<TrialRecordRow>]) -> Result<()> {
    let mut w = create_csv(path)?;
    w.write_record(trace_header()).at(path)?;
    let bit = |b: bool| if b { "1" } else { "0" }.to_string();
    for (trial, rows) in trials.iter().enumerate() {
        for r in rows {
            let mut rec = vec![trial.to_string(), r.tick.to_string()];
            rec.extend((0..4).map(|k| bit(r.sensors.get(k))));
            rec.extend((0..N_HIDDEN).map(|k| bit(r.brain.get(k))));
            rec.extend([r.concepts.size, r.concepts.location, r.concepts.direction].map(bit));
            w.write_record(&rec).at(path)?;
        }
    }
    w.flush().at(path)
}

/// Reads a trace CSV back into per-trial rows.
pub fn read_trace_csv(path: &Path) -> Result<Vec<Vec<TrialRecordRow>>> {
    let header = trace_header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut trials: Vec<Vec<TrialRecordRow>> = Vec::new();
    for row in read_rows(path, &header)? {
        let trial: usize = parse_field(path, &row, 0)?;
        let bit = |i: usize| -> Result<bool> {
            match row.get(i) {
                Some("0") => Ok(false),
                Some("1") => Ok(true),
                other => Err(LabError::format(path, format!("expected bit, found {other:?}"))),
            }
        };
        let mut sensors = 0u8;
        for k in 0..4 {
            sensors |= (bit(2 + k)? as u8) << k;
        }
        let mut brain = 0u16;
        for k in 0..N_HIDDEN {
            brain |= (bit(6 + k)? as u16) << k;
        }
        let concepts = Concepts { size: bit(16)?, location: bit(17)?, direction: bit(18)? };
        if trial >= trials.len() {
            trials.resize(trial + 1, Vec::new());
        }
        trials[trial].push(TrialRecordRow {
            tick: parse_field(path, &row, 1)?,
            sensors: Sensors(sensors),
            brain: HiddenBits(brain),
            concepts,
        });
    }
    Ok(trials)
}

pub fn trace_from_trials(trials: &[Vec<TrialRecordRow>]) -> StateTrace {
    StateTrace::from_records(trials.iter().flatten())
}

pub fn matrix_header() -> Vec<String> {
    let mut h = vec!["concept".to_string()];
    h.extend((0..N_HIDDEN).map(|k| format!("b{k}")));
    h
}

/// 3x10 matrix with concept-name row labels (size, location, direction).
pub fn write_matrix_csv(path: &Path, m: &RepresentationMatrix) -> Result<()> {
    let mut w = create_csv(path)?;
    w.write_record(matrix_header()).at(path)?;
    for c in Concept::ALL {
        let mut rec = vec![c.name().to_string()];
        rec.extend(m.values[c.row()].iter().map(|v| v.to_string()));
        w.write_record(&rec).at(path)?;
    }
    w.flush().at(path)
}

pub fn read_matrix_csv(path: &Path) -> Result<RepresentationMatrix> {
    let header = matrix_header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = read_rows(path, &header)?;
    let mut m = RepresentationMatrix::default();
    if rows.len() != 3 {
        return Err(LabError::format(path, "expected 3 concept rows"));
    }
    for (row, c) in rows.iter().zip(Concept::ALL) {
        if row.get(0) != Some(c.name()) {
            return Err(LabError::format(path, format!("expected row {}", c.name())));
        }
        for k in 0..N_HIDDEN {
            m.values[c.row()][k] = parse_field(path, row, k + 1)?;
        }
    }
    Ok(m)
}

/// Column names of a linearized matrix: `size_0..size_9, direction_0.., location_0..`.
pub fn linearized_header() -> Vec<String> {
    Concept::LINEAR_ORDER
        .iter()
        .flat_map(|c| (0..N_HIDDEN).map(move |k| format!("{}_{k}", c.name())))
        .collect()
}

/// Human-readable gate list, one gate per line.
pub fn write_gate_dump(path: &Path, gates: &[Gate]) -> Result<()> {
    let mut s = String::new();
    for g in gates {
        s.push_str(&g.to_string());
        s.push('\n');
    }
    write_atomic(path, s.as_bytes())
}

/// `matrix,row,col,value` for every ANN parameter.
pub fn write_params_csv(path: &Path, params: &[(&str, usize, usize, f64)]) -> Result<()> {
    let mut w = create_csv(path)?;
    w.write_record(["matrix", "row", "col", "value"]).at(path)?;
    for (name, r, c, v) in params {
        w.write_record([name.to_string(), r.to_string(), c.to_string(), v.to_string()]).at(path)?;
    }
    w.flush().at(path)
}

/// Writes through a temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).at(parent)?;
    }
    let tmp = path.with_extension("tmp");
    let mut f = File::create(&tmp).at(&tmp)?;
    f.write_all(bytes).at(&tmp)?;
    f.sync_all().at(&tmp)?;
    fs::rename(&tmp, path).at(path)
}
