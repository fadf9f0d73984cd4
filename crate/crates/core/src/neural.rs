//! Genome-encoded recurrent controllers: a single-layer tanh RNN and an LSTM.
//!
//! One genome site encodes one weight through [`site_to_weight`]. Both
//! decoders read a fixed prefix of the genome; sites past
//! [`RnnBrain::GENOME_SITES`] / [`LstmBrain::GENOME_SITES`] are neutral.

use alloc::vec::Vec;

use crate::brain::{Brain, BuildError, HiddenBits, Motors, Sensors, Substrate, N_HIDDEN, N_MOTORS, N_SENSORS};
use crate::genome::Genome;
use crate::math;

/// Affine map of a site onto `[-1, 1]`.
#[inline]
pub fn site_to_weight(site: u8) -> f64 {
    site as f64 / 255.0 * 2.0 - 1.0
}

/// Bit `k` is set iff `values[k] > 0`.
pub fn binarize_hidden(values: &[f64; N_HIDDEN]) -> HiddenBits {
    let mut bits = 0u16;
    for (k, &v) in values.iter().enumerate() {
        bits |= ((v > 0.0) as u16) << k;
    }
    HiddenBits(bits)
}

const RNN_IN: usize = N_SENSORS + N_HIDDEN;
const RNN_OUT: usize = N_MOTORS + N_HIDDEN;
const LSTM_IN: usize = N_HIDDEN + N_SENSORS;

fn check_len(substrate: Substrate, genome: &Genome, needed: usize) -> Result<(), BuildError> {
    if genome.len() < needed {
        return Err(BuildError { substrate, needed, found: genome.len() });
    }
    Ok(())
}

/// `y = tanh(W^T x)` with `x = [sensors; recurrent]` and `y = [motors; recurrent]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RnnBrain {
    /// `weights[i][j]` connects input `i` to output `j`.
    pub weights: [[f64; RNN_OUT]; RNN_IN],
    pub recurrent: [f64; N_HIDDEN],
    /// Motor activations from the last update.
    pub motor_activation: [f64; N_MOTORS],
}

impl RnnBrain {
    pub const GENOME_SITES: usize = RNN_IN * RNN_OUT;

    pub fn from_genome(genome: &Genome) -> Result<Self, BuildError> {
        check_len(Substrate::Rnn, genome, Self::GENOME_SITES)?;
        let mut weights = [[0.0; RNN_OUT]; RNN_IN];
        for (i, row) in weights.iter_mut().enumerate() {
            for (j, w) in row.iter_mut().enumerate() {
                *w = site_to_weight(genome[i * RNN_OUT + j]);
            }
        }
        Ok(Self::from_weights(weights))
    }

    pub fn from_weights(weights: [[f64; RNN_OUT]; RNN_IN]) -> Self {
        RnnBrain { weights, recurrent: [0.0; N_HIDDEN], motor_activation: [0.0; N_MOTORS] }
    }

    /// `(name, row, col, value)` for every parameter.
    pub fn parameters(&self) -> Vec<(&'static str, usize, usize, f64)> {
        let mut out = Vec::with_capacity(Self::GENOME_SITES);
        for (i, row) in self.weights.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                out.push(("W", i, j, w));
            }
        }
        out
    }
}

impl Brain for RnnBrain {
    fn reset(&mut self) {
        self.recurrent = [0.0; N_HIDDEN];
        self.motor_activation = [0.0; N_MOTORS];
    }

    fn step(&mut self, sensors: Sensors) -> Motors {
        let mut x = [0.0; RNN_IN];
        for (k, v) in x.iter_mut().take(N_SENSORS).enumerate() {
            *v = sensors.get(k) as u8 as f64;
        }
        x[N_SENSORS..].copy_from_slice(&self.recurrent);
        let mut y = [0.0; RNN_OUT];
        for (xi, row) in x.iter().zip(&self.weights) {
            if *xi == 0.0 {
                continue;
            }
            for (yj, w) in y.iter_mut().zip(row) {
                *yj += xi * w;
            }
        }
        for v in y.iter_mut() {
            *v = math::tanh(*v);
        }
        self.motor_activation.copy_from_slice(&y[..N_MOTORS]);
        self.recurrent.copy_from_slice(&y[N_MOTORS..]);
        Motors::new(y[0] > 0.0, y[1] > 0.0)
    }

    fn hidden(&self) -> HiddenBits {
        binarize_hidden(&self.recurrent)
    }
}

/// Weights and bias of one LSTM gate; `weights[i][k]` connects `z_i` to unit `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateParams {
    pub weights: [[f64; N_HIDDEN]; LSTM_IN],
    pub bias: [f64; N_HIDDEN],
}

impl GateParams {
    const SITES: usize = LSTM_IN * N_HIDDEN + N_HIDDEN;

    fn zeros() -> Self {
        GateParams { weights: [[0.0; N_HIDDEN]; LSTM_IN], bias: [0.0; N_HIDDEN] }
    }

    fn read(sites: &[u8]) -> Self {
        let mut p = Self::zeros();
        for (i, row) in p.weights.iter_mut().enumerate() {
            for (k, w) in row.iter_mut().enumerate() {
                *w = site_to_weight(sites[i * N_HIDDEN + k]);
            }
        }
        for (k, b) in p.bias.iter_mut().enumerate() {
            *b = site_to_weight(sites[LSTM_IN * N_HIDDEN + k]);
        }
        p
    }

    #[inline]
    fn preactivation(&self, z: &[f64; LSTM_IN]) -> [f64; N_HIDDEN] {
        let mut a = self.bias;
        for (zi, row) in z.iter().zip(&self.weights) {
            if *zi == 0.0 {
                continue;
            }
            for (ak, w) in a.iter_mut().zip(row) {
                *ak += zi * w;
            }
        }
        a
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LstmBrain {
    pub forget: GateParams,
    pub input: GateParams,
    pub candidate: GateParams,
    pub output: GateParams,
    pub h: [f64; N_HIDDEN],
    pub c: [f64; N_HIDDEN],
}

impl LstmBrain {
    pub const GENOME_SITES: usize = 4 * GateParams::SITES;

    /// Reads forget, input, candidate and output gates in that order, each
    /// as a row-major 14x10 matrix followed by its 10-entry bias.
    pub fn from_genome(genome: &Genome) -> Result<Self, BuildError> {
        check_len(Substrate::Lstm, genome, Self::GENOME_SITES)?;
        let block = |n: usize| GateParams::read(&genome[n * GateParams::SITES..(n + 1) * GateParams::SITES]);
        Ok(Self::from_gates(block(0), block(1), block(2), block(3)))
    }

    pub fn from_gates(forget: GateParams, input: GateParams, candidate: GateParams, output: GateParams) -> Self {
        LstmBrain { forget, input, candidate, output, h: [0.0; N_HIDDEN], c: [0.0; N_HIDDEN] }
    }

    /// All parameters zero.
    pub fn zeroed() -> Self {
        Self::from_gates(GateParams::zeros(), GateParams::zeros(), GateParams::zeros(), GateParams::zeros())
    }

    pub fn parameters(&self) -> Vec<(&'static str, usize, usize, f64)> {
        let mut out = Vec::with_capacity(Self::GENOME_SITES);
        for (name, bias_name, g) in [
            ("W_f", "b_f", &self.forget),
            ("W_i", "b_i", &self.input),
            ("W_c", "b_c", &self.candidate),
            ("W_o", "b_o", &self.output),
        ] {
            for (i, row) in g.weights.iter().enumerate() {
                for (k, &w) in row.iter().enumerate() {
                    out.push((name, i, k, w));
                }
            }
            for (k, &b) in g.bias.iter().enumerate() {
                out.push((bias_name, 0, k, b));
            }
        }
        out
    }
}

impl Brain for LstmBrain {
    fn reset(&mut self) {
        self.h = [0.0; N_HIDDEN];
        self.c = [0.0; N_HIDDEN];
    }

    fn step(&mut self, sensors: Sensors) -> Motors {
        let mut z = [0.0; LSTM_IN];
        z[..N_HIDDEN].copy_from_slice(&self.h);
        for k in 0..N_SENSORS {
            z[N_HIDDEN + k] = sensors.get(k) as u8 as f64;
        }
        let f = self.forget.preactivation(&z);
        let i = self.input.preactivation(&z);
        let c_new = self.candidate.preactivation(&z);
        let o = self.output.preactivation(&z);
        for k in 0..N_HIDDEN {
            self.c[k] = math::sigmoid(f[k]) * self.c[k] + math::sigmoid(i[k]) * math::tanh(c_new[k]);
            self.h[k] = math::sigmoid(o[k]) * math::tanh(self.c[k]);
        }
        Motors::new(self.h[0] > 0.0, self.h[1] > 0.0)
    }

    fn hidden(&self) -> HiddenBits {
        binarize_hidden(&self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn genome_of(site: u8, n: usize) -> Genome {
        Genome::new(vec![site; n])
    }

    #[test]
    fn codec_endpoints() {
        assert_eq!(site_to_weight(255), 1.0);
        assert_eq!(site_to_weight(0), -1.0);
        assert!((site_to_weight(127) - (127.0 / 255.0 * 2.0 - 1.0)).abs() < 1e-15);
        assert!((site_to_weight(127) + 0.0039).abs() < 1e-4);
        assert!(site_to_weight(128) > 0.0 && site_to_weight(128) < 0.004);
    }

    #[test]
    fn rnn_endpoint_genomes() {
        let b = RnnBrain::from_genome(&genome_of(255, 168)).unwrap();
        assert!(b.weights.iter().flatten().all(|&w| w == 1.0));
        let b = RnnBrain::from_genome(&genome_of(0, 168)).unwrap();
        assert!(b.weights.iter().flatten().all(|&w| w == -1.0));
        assert_eq!(b.recurrent, [0.0; 10]);
        assert!(RnnBrain::from_genome(&genome_of(0, 167)).is_err());
    }

    #[test]
    fn rnn_reads_row_major() {
        let sites: Vec<u8> = (0..200).map(|i| (i * 37 % 256) as u8).collect();
        let g = Genome::new(sites.clone());
        let b = RnnBrain::from_genome(&g).unwrap();
        assert_eq!(b.weights[0][0], site_to_weight(sites[0]));
        assert_eq!(b.weights[1][0], site_to_weight(sites[12]));
        assert_eq!(b.weights[13][11], site_to_weight(sites[167]));
    }

    #[test]
    fn rnn_zero_weights() {
        let mut b = RnnBrain::from_weights([[0.0; 12]; 14]);
        for s in 0..16 {
            assert_eq!(b.step(Sensors(s)), Motors::STAY);
            assert_eq!(b.recurrent, [0.0; 10]);
        }
    }

    #[test]
    fn rnn_single_path() {
        let mut w = [[0.0; 12]; 14];
        w[0][0] = 1.0;
        let mut b = RnnBrain::from_weights(w);
        assert_eq!(b.step(Sensors(1)), Motors::LEFT);
        assert!((b.motor_activation[0] - 0.761_594_155_955_764_9).abs() < 1e-12);
    }

    #[test]
    fn lstm_layout() {
        assert_eq!(LstmBrain::GENOME_SITES, 600);
        let b = LstmBrain::from_genome(&genome_of(127, 600)).unwrap();
        let w = site_to_weight(127);
        assert!(b.parameters().iter().all(|p| p.3 == w));
        assert_eq!(b.parameters().len(), 600);
        assert!(LstmBrain::from_genome(&genome_of(127, 599)).is_err());

        let sites: Vec<u8> = (0..600).map(|i| (i % 251) as u8).collect();
        let b = LstmBrain::from_genome(&Genome::new(sites.clone())).unwrap();
        assert_eq!(b.forget.weights[0][0], site_to_weight(sites[0]));
        assert_eq!(b.forget.bias[0], site_to_weight(sites[140]));
        assert_eq!(b.input.weights[0][0], site_to_weight(sites[150]));
        assert_eq!(b.output.bias[9], site_to_weight(sites[599]));
        assert_eq!(b, LstmBrain::from_genome(&Genome::new(sites)).unwrap());
    }

    #[test]
    fn lstm_all_zero_parameters() {
        let mut b = LstmBrain::zeroed();
        for s in 0..16 {
            assert_eq!(b.step(Sensors(s)), Motors::STAY);
            assert_eq!(b.c, [0.0; 10]);
            assert_eq!(b.h, [0.0; 10]);
        }
    }

    #[test]
    fn lstm_single_component_trace() {
        // candidate bias 1 and input/output biases driven high on unit 0
        let mut b = LstmBrain::zeroed();
        b.candidate.bias[0] = 1.0;
        b.input.bias[0] = 1.0;
        b.output.bias[0] = 1.0;
        assert_eq!(b.step(Sensors(0)), Motors::LEFT);
        let sig1 = 1.0 / (1.0 + (-1.0f64).exp());
        let c0 = sig1 * 1.0f64.tanh();
        assert!((b.c[0] - c0).abs() < 1e-12);
        assert!((b.h[0] - sig1 * c0.tanh()).abs() < 1e-12);
    }

    #[test]
    fn binarize_threshold() {
        let mut v = [0.0; 10];
        v[0] = 0.3;
        v[1] = -0.2;
        assert_eq!(binarize_hidden(&v), HiddenBits(1));
        assert_eq!(binarize_hidden(&[0.0; 10]), HiddenBits(0));
        let mb_bits = [1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0];
        assert_eq!(binarize_hidden(&mb_bits), HiddenBits(0b10_1000_1101));
    }
}
