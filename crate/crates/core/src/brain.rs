//! The interface shared by all three substrates: four binary sensors in,
//! two binary motors out, ten analyzable hidden states.

use core::fmt;
use core::str::FromStr;

use crate::genome::Genome;
use crate::markov::MarkovBrain;
use crate::neural::{LstmBrain, RnnBrain};

pub const N_SENSORS: usize = 4;
pub const N_MOTORS: usize = 2;
pub const N_HIDDEN: usize = 10;

/// Four sensor bits; bit `k` is sensor `k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sensors(pub u8);

impl Sensors {
    pub const MASK: u8 = 0b1111;

    pub fn from_bits(bits: [bool; N_SENSORS]) -> Self {
        let mut v = 0;
        for (k, &b) in bits.iter().enumerate() {
            v |= (b as u8) << k;
        }
        Sensors(v)
    }

    #[inline]
    pub fn get(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn bits(self) -> [bool; N_SENSORS] {
        core::array::from_fn(|k| self.get(k))
    }
}

/// Two motor bits; bit 0 is the left actuator, bit 1 the right one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Motors(pub u8);

impl Motors {
    pub const STAY: Motors = Motors(0b00);
    pub const LEFT: Motors = Motors(0b01);
    pub const RIGHT: Motors = Motors(0b10);

    pub fn new(m0: bool, m1: bool) -> Self {
        Motors(m0 as u8 | (m1 as u8) << 1)
    }

    #[inline]
    pub fn get(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }
}

/// Ten binarized hidden-state bits; bit `i` is node `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HiddenBits(pub u16);

impl HiddenBits {
    pub const MASK: u16 = 0x3FF;

    #[inline]
    pub fn get(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
}

/// A controller that can be dropped into the block-catching world.
pub trait Brain {
    /// Returns all internal state to its initial value.
    fn reset(&mut self);
    /// Performs one update and returns the motor command.
    fn step(&mut self, sensors: Sensors) -> Motors;
    /// The binarized hidden states after the most recent update.
    fn hidden(&self) -> HiddenBits;
}

impl<B: Brain + ?Sized> Brain for &mut B {
    fn reset(&mut self) {
        (**self).reset()
    }
    fn step(&mut self, sensors: Sensors) -> Motors {
        (**self).step(sensors)
    }
    fn hidden(&self) -> HiddenBits {
        (**self).hidden()
    }
}

/// Which brain architecture a genome is decoded into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Substrate {
    Markov,
    Lstm,
    Rnn,
}

impl Substrate {
    pub const ALL: [Substrate; 3] = [Substrate::Markov, Substrate::Lstm, Substrate::Rnn];

    pub fn name(self) -> &'static str {
        match self {
            Substrate::Markov => "markov",
            Substrate::Lstm => "lstm",
            Substrate::Rnn => "rnn",
        }
    }

    /// Shortest genome the decoder accepts.
    pub fn min_genome_len(self) -> usize {
        match self {
            Substrate::Markov => 0,
            Substrate::Lstm => LstmBrain::GENOME_SITES,
            Substrate::Rnn => RnnBrain::GENOME_SITES,
        }
    }

    /// Whether two genomes decode to the same brain. Cheaper than building
    /// both, and lets evolution reuse a parent's score for an offspring whose
    /// mutations all landed in non-coding sites.
    pub fn same_phenotype(self, a: &Genome, b: &Genome) -> bool {
        match self {
            Substrate::Markov => crate::markov::decode(a) == crate::markov::decode(b),
            Substrate::Lstm | Substrate::Rnn => {
                let n = self.min_genome_len();
                a.len() >= n && b.len() >= n && a[..n] == b[..n]
            }
        }
    }

    pub fn build(self, genome: &Genome) -> Result<AnyBrain, BuildError> {
        Ok(match self {
            Substrate::Markov => AnyBrain::Markov(MarkovBrain::from_genome(genome)),
            Substrate::Lstm => AnyBrain::Lstm(LstmBrain::from_genome(genome)?),
            Substrate::Rnn => AnyBrain::Rnn(RnnBrain::from_genome(genome)?),
        })
    }
}

impl fmt::Display for Substrate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownSubstrate;

impl fmt::Display for UnknownSubstrate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of markov, lstm, rnn")
    }
}

impl FromStr for Substrate {
    type Err = UnknownSubstrate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markov" | "mb" => Ok(Substrate::Markov),
            "lstm" => Ok(Substrate::Lstm),
            "rnn" => Ok(Substrate::Rnn),
            _ => Err(UnknownSubstrate),
        }
    }
}

/// A genome too short for the substrate's fixed parameter layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildError {
    pub substrate: Substrate,
    pub needed: usize,
    pub found: usize,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} genome needs at least {} sites, found {}",
            self.substrate, self.needed, self.found
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BuildError {}

/// Static dispatch over the three substrates.
#[derive(Clone, Debug)]
pub enum AnyBrain {
    Markov(MarkovBrain),
    Lstm(LstmBrain),
    Rnn(RnnBrain),
}

impl AnyBrain {
    pub fn substrate(&self) -> Substrate {
        match self {
            AnyBrain::Markov(_) => Substrate::Markov,
            AnyBrain::Lstm(_) => Substrate::Lstm,
            AnyBrain::Rnn(_) => Substrate::Rnn,
        }
    }
}

impl Brain for AnyBrain {
    fn reset(&mut self) {
        match self {
            AnyBrain::Markov(b) => b.reset(),
            AnyBrain::Lstm(b) => b.reset(),
            AnyBrain::Rnn(b) => b.reset(),
        }
    }

    #[inline]
    fn step(&mut self, sensors: Sensors) -> Motors {
        match self {
            AnyBrain::Markov(b) => b.step(sensors),
            AnyBrain::Lstm(b) => b.step(sensors),
            AnyBrain::Rnn(b) => b.step(sensors),
        }
    }

    fn hidden(&self) -> HiddenBits {
        match self {
            AnyBrain::Markov(b) => b.hidden(),
            AnyBrain::Lstm(b) => b.hidden(),
            AnyBrain::Rnn(b) => b.hidden(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sensor_bits_round_trip() {
        let s = Sensors::from_bits([true, false, true, true]);
        assert_eq!(s.0, 0b1101);
        assert_eq!(s.bits(), [true, false, true, true]);
    }

    #[test]
    fn substrate_names_parse() {
        for s in Substrate::ALL {
            assert_eq!(s.name().parse::<Substrate>(), Ok(s));
        }
        assert!("cnn".parse::<Substrate>().is_err());
    }
}
