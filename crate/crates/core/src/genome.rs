//! Byte-site genomes and their mutation operators.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use rand::Rng;

use crate::math;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenomeError {
    LengthOutOfBounds { len: usize, min: usize, max: usize },
    InvalidConfig(&'static str),
}

impl fmt::Display for GenomeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenomeError::LengthOutOfBounds { len, min, max } => {
                write!(f, "genome length {len} outside [{min}, {max}]")
            }
            GenomeError::InvalidConfig(why) => write!(f, "invalid mutation config: {why}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GenomeError {}

/// A variable-length string of sites in `0..=255`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Genome(Vec<u8>);

impl Genome {
    pub fn new(sites: Vec<u8>) -> Self {
        Genome(sites)
    }

    pub fn sites(&self) -> &[u8] {
        &self.0
    }

    pub fn sites_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }

    pub fn into_sites(self) -> Vec<u8> {
        self.0
    }
}

impl Deref for Genome {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Genome {
    fn from(v: Vec<u8>) -> Self {
        Genome(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutationConfig {
    /// Per-site probability of replacement by a uniform random byte.
    pub point_rate: f64,
    /// Deletion and duplication each happen with probability `indel_rate_per_site * len`, capped at 1.
    pub indel_rate_per_site: f64,
    pub chunk_min: usize,
    pub chunk_max: usize,
    pub min_len: usize,
    pub max_len: usize,
}

impl Default for MutationConfig {
    fn default() -> Self {
        MutationConfig {
            point_rate: 0.005,
            indel_rate_per_site: 0.0002,
            chunk_min: 256,
            chunk_max: 512,
            min_len: 5_000,
            max_len: 20_000,
        }
    }
}

impl MutationConfig {
    /// All rates zero: mutation is the identity.
    pub fn frozen(min_len: usize, max_len: usize) -> Self {
        MutationConfig { point_rate: 0.0, indel_rate_per_site: 0.0, min_len, max_len, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), GenomeError> {
        if !(0.0..=1.0).contains(&self.point_rate) {
            return Err(GenomeError::InvalidConfig("point_rate must lie in [0, 1]"));
        }
        if !(self.indel_rate_per_site >= 0.0 && self.indel_rate_per_site.is_finite()) {
            return Err(GenomeError::InvalidConfig("indel rate must be a non-negative number"));
        }
        if self.chunk_min == 0 || self.chunk_min > self.chunk_max {
            return Err(GenomeError::InvalidConfig("need 0 < chunk_min <= chunk_max"));
        }
        if self.min_len > self.max_len {
            return Err(GenomeError::InvalidConfig("need min_len <= max_len"));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<(), GenomeError> {
        if len < self.min_len || len > self.max_len {
            return Err(GenomeError::LengthOutOfBounds { len, min: self.min_len, max: self.max_len });
        }
        Ok(())
    }
}

/// `n` independent uniform sites.
pub fn random_genome<R: Rng + ?Sized>(n: usize, cfg: &MutationConfig, rng: &mut R) -> Result<Genome, GenomeError> {
    cfg.check_len(n)?;
    let mut sites = alloc::vec![0u8; n];
    rng.fill(&mut sites[..]);
    Ok(Genome(sites))
}

/// Returns a mutated copy of `parent`.
pub fn mutate<R: Rng + ?Sized>(parent: &Genome, cfg: &MutationConfig, rng: &mut R) -> Genome {
    let mut child = parent.clone();
    mutate_in_place(&mut child, cfg, rng);
    child
}

/// Point mutations, then at most one deletion, then at most one duplication.
/// Indels that would leave `[min_len, max_len]` are skipped.
pub fn mutate_in_place<R: Rng + ?Sized>(g: &mut Genome, cfg: &MutationConfig, rng: &mut R) {
    point_mutations(&mut g.0, cfg.point_rate, rng);

    if indel_fires(g.len(), cfg, rng) {
        let chunk = rng.random_range(cfg.chunk_min..=cfg.chunk_max);
        if chunk <= g.len() && g.len() - chunk >= cfg.min_len {
            let start = rng.random_range(0..=g.len() - chunk);
            g.0.drain(start..start + chunk);
        }
    }

    if indel_fires(g.len(), cfg, rng) {
        let chunk = rng.random_range(cfg.chunk_min..=cfg.chunk_max);
        if chunk <= g.len() && g.len() + chunk <= cfg.max_len {
            let src = rng.random_range(0..=g.len() - chunk);
            let at = rng.random_range(0..=g.len());
            let copy: Vec<u8> = g.0[src..src + chunk].to_vec();
            g.0.splice(at..at, copy);
        }
    }
}

fn indel_fires<R: Rng + ?Sized>(len: usize, cfg: &MutationConfig, rng: &mut R) -> bool {
    let p = (cfg.indel_rate_per_site * len as f64).min(1.0);
    p > 0.0 && rng.random_bool(p)
}

// Geometric gap sampling: equivalent to an independent Bernoulli(rate) per site.
fn point_mutations<R: Rng + ?Sized>(sites: &mut [u8], rate: f64, rng: &mut R) {
    if rate <= 0.0 || sites.is_empty() {
        return;
    }
    if rate >= 1.0 {
        rng.fill(sites);
        return;
    }
    let log_q = math::ln_1p(-rate);
    let mut i = 0usize;
    loop {
        // u in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let gap = math::ln(u) / log_q;
        if gap >= (sites.len() - i) as f64 {
            return;
        }
        i += gap as usize;
        sites[i] = rng.random();
        i += 1;
        if i >= sites.len() {
            return;
        }
    }
}
