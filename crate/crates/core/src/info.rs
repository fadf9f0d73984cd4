//! Plug-in entropy estimates over recorded world (W), brain (B) and sensor
//! (S) states, in bits.
//!
//! Representation is the information the brain holds about the world beyond
//! what the sensors provide:
//!
//! ```text
//! R = H(W:B|S) = H(W,S) + H(B,S) - H(S) - H(W,B,S) = H(W:B) - I(W:B:S)
//! ```

use alloc::vec::Vec;
use core::fmt;

use crate::brain::{HiddenBits, N_HIDDEN};
use crate::math;
use crate::world::TrialRecordRow;

/// Tolerance on the total mass of a probability table.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum InfoError {
    NotNormalized(f64),
    NegativeProbability,
    EmptyTrace,
}

impl fmt::Display for InfoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoError::NotNormalized(total) => write!(f, "probabilities sum to {total}, not 1"),
            InfoError::NegativeProbability => f.write_str("negative probability"),
            InfoError::EmptyTrace => f.write_str("trace has no rows"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InfoError {}

/// A distribution over joint `(w, b, s)` symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    entries: Vec<([u32; 3], f64)>,
}

/// Which of W, B and S a marginal keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vars(u8);

impl Vars {
    pub const W: Vars = Vars(0b001);
    pub const B: Vars = Vars(0b010);
    pub const S: Vars = Vars(0b100);
    pub const WB: Vars = Vars(0b011);
    pub const WS: Vars = Vars(0b101);
    pub const BS: Vars = Vars(0b110);
    pub const WBS: Vars = Vars(0b111);

    fn project(self, key: [u32; 3]) -> [u32; 3] {
        let mut out = [u32::MAX; 3];
        for (k, o) in out.iter_mut().enumerate() {
            if self.0 >> k & 1 == 1 {
                *o = key[k];
            }
        }
        out
    }
}

impl JointTable {
    /// A table from explicit probabilities; duplicate symbols are merged.
    pub fn from_probabilities(entries: Vec<([u32; 3], f64)>) -> Result<Self, InfoError> {
        if entries.iter().any(|e| e.1 < 0.0 || e.1.is_nan()) {
            return Err(InfoError::NegativeProbability);
        }
        let total: f64 = entries.iter().map(|e| e.1).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(InfoError::NotNormalized(total));
        }
        Ok(JointTable { entries: merge(entries) })
    }

    /// Empirical (maximum-likelihood) distribution of the samples.
    pub fn from_samples<I: IntoIterator<Item = [u32; 3]>>(samples: I) -> Result<Self, InfoError> {
        let mut keys: Vec<[u32; 3]> = samples.into_iter().collect();
        if keys.is_empty() {
            return Err(InfoError::EmptyTrace);
        }
        keys.sort_unstable();
        let n = keys.len() as f64;
        let mut entries = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let mut j = i + 1;
            while j < keys.len() && keys[j] == keys[i] {
                j += 1;
            }
            entries.push((keys[i], (j - i) as f64 / n));
            i = j;
        }
        Ok(JointTable { entries })
    }

    pub fn entries(&self) -> &[([u32; 3], f64)] {
        &self.entries
    }

    pub fn marginal(&self, vars: Vars) -> JointTable {
        JointTable { entries: merge(self.entries.iter().map(|&(k, p)| (vars.project(k), p)).collect()) }
    }

    /// Entropy of the marginal over `vars`.
    pub fn h(&self, vars: Vars) -> f64 {
        shannon(self.marginal(vars).entries.iter().map(|e| e.1))
    }

    /// H(W:B) = H(W) + H(B) - H(W,B).
    pub fn shared_wb(&self) -> f64 {
        self.h(Vars::W) + self.h(Vars::B) - self.h(Vars::WB)
    }

    /// The three-way coherent information I(W:B:S); may be negative.
    pub fn coherent(&self) -> f64 {
        self.h(Vars::W) + self.h(Vars::B) + self.h(Vars::S) - self.h(Vars::WB) - self.h(Vars::WS)
            - self.h(Vars::BS)
            + self.h(Vars::WBS)
    }

    /// H(W:B|S), clamped at 0 to absorb rounding.
    pub fn representation(&self) -> f64 {
        (self.h(Vars::WS) + self.h(Vars::BS) - self.h(Vars::S) - self.h(Vars::WBS)).max(0.0)
    }
}

fn merge(mut entries: Vec<([u32; 3], f64)>) -> Vec<([u32; 3], f64)> {
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<([u32; 3], f64)> = Vec::with_capacity(entries.len());
    for (k, p) in entries {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += p,
            _ => out.push((k, p)),
        }
    }
    out
}

fn shannon<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * math::log2(p)).sum()
}

/// Entropy of a single-variable table of probabilities.
pub fn entropy(probs: &[f64]) -> Result<f64, InfoError> {
    if probs.iter().any(|p| *p < 0.0 || p.is_nan()) {
        return Err(InfoError::NegativeProbability);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(InfoError::NotNormalized(total));
    }
    Ok(shannon(probs.iter().copied()))
}

/// One pooled sample: world concepts, sensors and binarized hidden states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceRow {
    /// bit 0 size, bit 1 location, bit 2 direction
    pub world: u8,
    pub sensors: u8,
    pub brain: HiddenBits,
}

/// Samples pooled over every update of every trial of one agent.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateTrace {
    pub rows: Vec<TraceRow>,
}

impl StateTrace {
    pub fn from_records<'a, I: IntoIterator<Item = &'a TrialRecordRow>>(records: I) -> Self {
        StateTrace {
            rows: records
                .into_iter()
                .map(|r| TraceRow { world: r.concepts.bits(), sensors: r.sensors.0, brain: r.brain })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Joint table of the full W, B and S alphabets.
    pub fn joint(&self) -> Result<JointTable, InfoError> {
        JointTable::from_samples(self.rows.iter().map(|r| [r.world as u32, r.brain.0 as u32, r.sensors as u32]))
    }

    /// Joint table of the single concept bit `concept` and the single node bit `node`.
    pub fn concept_node_joint(&self, concept: Concept, node: usize) -> Result<JointTable, InfoError> {
        let c = concept.bit();
        JointTable::from_samples(
            self.rows.iter().map(|r| [(r.world >> c & 1) as u32, r.brain.get(node) as u32, r.sensors as u32]),
        )
    }
}

pub fn representation_r(trace: &StateTrace) -> Result<f64, InfoError> {
    Ok(trace.joint()?.representation())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Concept {
    Size,
    Location,
    Direction,
}

impl Concept {
    /// Matrix row order.
    pub const ALL: [Concept; 3] = [Concept::Size, Concept::Location, Concept::Direction];
    /// Order of the linearized 30-vector.
    pub const LINEAR_ORDER: [Concept; 3] = [Concept::Size, Concept::Direction, Concept::Location];

    pub fn row(self) -> usize {
        self as usize
    }

    fn bit(self) -> u8 {
        match self {
            Concept::Size => 0,
            Concept::Location => 1,
            Concept::Direction => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Concept::Size => "size",
            Concept::Location => "location",
            Concept::Direction => "direction",
        }
    }
}

/// `M[c][i] = H(W_c : B_i | S)`, rows size, location, direction.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RepresentationMatrix {
    pub values: [[f64; N_HIDDEN]; 3],
}

impl RepresentationMatrix {
    pub fn get(&self, c: Concept, node: usize) -> f64 {
        self.values[c.row()][node]
    }

    /// Rows concatenated as size, direction, location.
    pub fn linearized(&self) -> [f64; 3 * N_HIDDEN] {
        let mut out = [0.0; 3 * N_HIDDEN];
        for (k, c) in Concept::LINEAR_ORDER.iter().enumerate() {
            out[k * N_HIDDEN..(k + 1) * N_HIDDEN].copy_from_slice(&self.values[c.row()]);
        }
        out
    }

    /// Inverse of [`RepresentationMatrix::linearized`].
    pub fn from_linearized(linear: &[f64; 3 * N_HIDDEN]) -> Self {
        let mut m = RepresentationMatrix::default();
        for (k, c) in Concept::LINEAR_ORDER.iter().enumerate() {
            m.values[c.row()].copy_from_slice(&linear[k * N_HIDDEN..(k + 1) * N_HIDDEN]);
        }
        m
    }

    pub fn total(&self) -> f64 {
        self.values.iter().flatten().sum()
    }
}

pub fn representation_matrix(trace: &StateTrace) -> Result<RepresentationMatrix, InfoError> {
    if trace.is_empty() {
        return Err(InfoError::EmptyTrace);
    }
    let mut m = RepresentationMatrix::default();
    for c in Concept::ALL {
        for node in 0..N_HIDDEN {
            m.values[c.row()][node] = trace.concept_node_joint(c, node)?.representation();
        }
    }
    Ok(m)
}

/// Overlap of concepts within each node: sum over nodes of pairwise minima down each column.
pub fn node_smearedness(m: &RepresentationMatrix) -> f64 {
    let rows = m.values.len();
    let mut total = 0.0;
    for i in 0..N_HIDDEN {
        for j in 0..rows {
            for k in 0..j {
                total += m.values[j][i].min(m.values[k][i]);
            }
        }
    }
    total
}

/// Overlap of nodes within each concept: sum over concepts of pairwise minima along each row.
pub fn concept_smearedness(m: &RepresentationMatrix) -> f64 {
    let mut total = 0.0;
    for row in &m.values {
        for j in 0..N_HIDDEN {
            for k in 0..j {
                total += row[j].min(row[k]);
            }
        }
    }
    total
}

/// The scalar summary of one agent's trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Representation {
    pub r: f64,
    pub matrix: RepresentationMatrix,
    pub node_smearedness: f64,
    pub concept_smearedness: f64,
}

pub fn analyze(trace: &StateTrace) -> Result<Representation, InfoError> {
    let matrix = representation_matrix(trace)?;
    Ok(Representation {
        r: representation_r(trace)?,
        node_smearedness: node_smearedness(&matrix),
        concept_smearedness: concept_smearedness(&matrix),
        matrix,
    })
}

/// Marginal entropy of a binary/ small alphabet sequence, used by bounds checks.
pub fn sample_entropy<I: IntoIterator<Item = u32>>(samples: I) -> Result<f64, InfoError> {
    let t = JointTable::from_samples(samples.into_iter().map(|x| [x, 0, 0]))?;
    Ok(t.h(Vars::W))
}
