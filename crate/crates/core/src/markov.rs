//! Markov Brains: deterministic logic gates over 16 binary nodes.
//!
//! Node layout: 0-3 sensors, 4-5 motors, 6-15 hidden.
//!
//! Genome encoding. A gate starts after every occurrence of the start codon
//! `42, 213` (the codon itself never wraps). The gate body follows the codon
//! and wraps around the genome end:
//!
//! ```text
//! n_in  = 1 + byte % 4
//! n_out = 1 + byte % 4
//! 4 input address bytes   (first n_in used, each % 16)
//! 4 output address bytes  (first n_out used, each % 16)
//! 2^n_in * n_out table bytes, row-major, bit = byte % 2
//! ```
//!
//! Table row `r` is selected by the gate inputs with the first input as the
//! least significant bit. Gate bodies may overlap.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::brain::{Brain, HiddenBits, Motors, Sensors};
use crate::genome::Genome;

pub const START_CODON: [u8; 2] = [42, 213];
pub const N_NODES: usize = 16;
pub const FIRST_MOTOR: usize = 4;
pub const FIRST_HIDDEN: usize = 6;
const SENSOR_MASK: u16 = 0x000F;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub inputs: Vec<u8>,
    pub outputs: Vec<u8>,
    /// `table[r]` packs the output bits for input row `r`; bit `j` drives `outputs[j]`.
    pub table: Vec<u8>,
}

impl Gate {
    pub fn n_in(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_out(&self) -> usize {
        self.outputs.len()
    }

    pub fn output_bit(&self, row: usize, j: usize) -> bool {
        self.table[row] >> j & 1 == 1
    }

    /// The node mask written for input `row`, sensor targets removed.
    fn write_mask(&self, row: usize) -> u16 {
        let mut m = 0u16;
        for (j, &addr) in self.outputs.iter().enumerate() {
            if self.output_bit(row, j) {
                m |= 1 << addr;
            }
        }
        m & !SENSOR_MASK
    }
}

/// One gate per line: `in=<n> out=<n> | ins | outs | rows`, rows separated by spaces.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "in={} out={} |", self.n_in(), self.n_out())?;
        for a in &self.inputs {
            write!(f, " {a}")?;
        }
        f.write_str(" |")?;
        for a in &self.outputs {
            write!(f, " {a}")?;
        }
        f.write_str(" |")?;
        for row in 0..self.table.len() {
            f.write_str(" ")?;
            for j in 0..self.n_out() {
                f.write_str(if self.output_bit(row, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// Decodes every gate in `genome`. Total: any byte string gives a (possibly empty) list.
pub fn decode(genome: &[u8]) -> Vec<Gate> {
    let len = genome.len();
    let mut gates = Vec::new();
    if len < 2 {
        return gates;
    }
    let at = |i: usize| genome[i % len];
    for start in 0..len - 1 {
        if genome[start] != START_CODON[0] || genome[start + 1] != START_CODON[1] {
            continue;
        }
        let body = start + 2;
        let n_in = 1 + at(body) as usize % 4;
        let n_out = 1 + at(body + 1) as usize % 4;
        let inputs = (0..n_in).map(|k| at(body + 2 + k) % 16).collect();
        let outputs = (0..n_out).map(|k| at(body + 6 + k) % 16).collect();
        let table_start = body + 10;
        let table = (0..1usize << n_in)
            .map(|row| {
                (0..n_out).fold(0u8, |acc, j| acc | (at(table_start + row * n_out + j) % 2) << j)
            })
            .collect();
        gates.push(Gate { inputs, outputs, table });
    }
    gates
}

/// Overwrites `count` start codons at uniform random (non-wrapping) positions.
pub fn seed_start_codons<R: Rng + ?Sized>(genome: &mut Genome, count: usize, rng: &mut R) {
    let sites = genome.sites_mut();
    if sites.len() < 2 {
        return;
    }
    for _ in 0..count {
        let at = rng.random_range(0..sites.len() - 1);
        sites[at] = START_CODON[0];
        sites[at + 1] = START_CODON[1];
    }
}

#[derive(Clone, Debug)]
struct CompiledGate {
    /// Unused slots read [`ZERO_BIT`], so every gate reads four inputs.
    inputs: [u8; 4],
    offset: u32,
}

/// A bit position past the 16 nodes that is always clear.
const ZERO_BIT: u8 = 16;

#[derive(Clone, Debug)]
pub struct MarkovBrain {
    gates: Vec<Gate>,
    compiled: Vec<CompiledGate>,
    masks: Vec<u16>,
    state: u16,
}

impl MarkovBrain {
    pub fn new(gates: Vec<Gate>) -> Self {
        let mut compiled = Vec::with_capacity(gates.len());
        let mut masks = Vec::new();
        for g in &gates {
            let mut inputs = [ZERO_BIT; 4];
            inputs[..g.n_in()].copy_from_slice(&g.inputs);
            compiled.push(CompiledGate { inputs, offset: masks.len() as u32 });
            masks.extend((0..g.table.len()).map(|r| g.write_mask(r)));
        }
        MarkovBrain { gates, compiled, masks, state: 0 }
    }

    pub fn from_genome(genome: &Genome) -> Self {
        Self::new(decode(genome))
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// All 16 node bits; bit `i` is node `i`.
    pub fn state(&self) -> u16 {
        self.state
    }
}

impl Brain for MarkovBrain {
    fn reset(&mut self) {
        self.state = 0;
    }

    #[inline]
    fn step(&mut self, sensors: Sensors) -> Motors {
        let current = (self.state & !SENSOR_MASK | (sensors.0 & Sensors::MASK) as u16) as u32;
        let bit = |a: u8| (current >> a & 1) as usize;
        let mut next = 0u16;
        for g in &self.compiled {
            let [a, b, c, d] = g.inputs;
            let row = bit(a) | bit(b) << 1 | bit(c) << 2 | bit(d) << 3;
            next |= self.masks[g.offset as usize + row];
        }
        self.state = next;
        Motors((next >> FIRST_MOTOR) as u8 & 0b11)
    }

    fn hidden(&self) -> HiddenBits {
        HiddenBits(self.state >> FIRST_HIDDEN & HiddenBits::MASK)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Assembles a gate body after a start codon, padded with zeros.
    fn assemble(n_in: u8, n_out: u8, ins: [u8; 4], outs: [u8; 4], table: &[u8]) -> Vec<u8> {
        let mut g = vec![0u8, 0, 42, 213, n_in - 1, n_out - 1];
        g.extend_from_slice(&ins);
        g.extend_from_slice(&outs);
        g.extend_from_slice(table);
        g.extend_from_slice(&[0; 8]);
        g
    }

    #[test]
    fn no_codon_no_gates() {
        assert!(decode(&[1, 2, 3, 4, 5, 213, 42]).is_empty());
        assert!(decode(&[42; 500]).is_empty());
        assert!(decode(&[]).is_empty());
        assert!(decode(&[42]).is_empty());
    }

    #[test]
    fn not_gate_decodes() {
        let gates = decode(&assemble(1, 1, [0, 0, 0, 0], [6, 0, 0, 0], &[1, 0]));
        assert_eq!(gates.len(), 1);
        assert_eq!(gates[0].inputs, vec![0]);
        assert_eq!(gates[0].outputs, vec![6]);
        assert_eq!(gates[0].table, vec![1, 0]);
    }

    #[test]
    fn body_wraps_around_genome_end() {
        // codon at the very end; body starts at index 0
        let mut g = vec![0u8; 4];
        g.extend_from_slice(&[0; 16]);
        g[0] = 0; // n_in = 1
        g[1] = 0; // n_out = 1
        g[2] = 3; // input 3
        g[6] = 9; // output 9
        g[10] = 1;
        g[11] = 1;
        g.extend_from_slice(&START_CODON);
        let gates = decode(&g);
        assert_eq!(gates.len(), 1);
        assert_eq!((gates[0].inputs[0], gates[0].outputs[0]), (3, 9));
        assert_eq!(gates[0].table, vec![1, 1]);
    }

    #[test]
    fn zero_gates_never_move() {
        let mut b = MarkovBrain::new(Vec::new());
        for s in 0..16 {
            assert_eq!(b.step(Sensors(s)), Motors::STAY);
        }
    }

    #[test]
    fn writers_combine_by_or() {
        let one = Gate { inputs: vec![0], outputs: vec![7], table: vec![1, 1] };
        let zero = Gate { inputs: vec![0], outputs: vec![7], table: vec![0, 0] };
        let mut b = MarkovBrain::new(vec![zero.clone(), one.clone()]);
        b.step(Sensors(0));
        assert_eq!(b.state() >> 7 & 1, 1);
        let mut b = MarkovBrain::new(vec![one, zero]);
        b.step(Sensors(0));
        assert_eq!(b.state() >> 7 & 1, 1);
    }

    #[test]
    fn not_gate_drives_motor_same_update() {
        let not = Gate { inputs: vec![0], outputs: vec![4], table: vec![1, 0] };
        let mut b = MarkovBrain::new(vec![not]);
        assert_eq!(b.step(Sensors(0b0000)), Motors::LEFT);
        assert_eq!(b.step(Sensors(0b0001)), Motors::STAY);
    }

    #[test]
    fn writes_to_sensors_are_discarded() {
        let g = Gate { inputs: vec![5], outputs: vec![0, 1, 2, 3], table: vec![0b1111, 0b1111] };
        let mut b = MarkovBrain::new(vec![g]);
        b.step(Sensors(0));
        assert_eq!(b.state(), 0);
    }

    #[test]
    fn reset_clears_hidden() {
        let latch = Gate { inputs: vec![0], outputs: vec![6, 9], table: vec![0, 0b11] };
        let mut b = MarkovBrain::new(vec![latch]);
        b.step(Sensors(1));
        assert_ne!(b.hidden(), HiddenBits(0));
        b.reset();
        assert_eq!(b.hidden(), HiddenBits(0));
        b.reset();
        assert_eq!(b.state(), 0);
    }

    #[test]
    fn gate_dump_format() {
        let g = Gate { inputs: vec![0, 7], outputs: vec![4, 12], table: vec![0b00, 0b01, 0b10, 0b11] };
        assert_eq!(alloc::format!("{g}"), "in=2 out=2 | 0 7 | 4 12 | 00 10 01 11");
    }
}
