//! Asexual generational GA with fitness-proportional selection, ancestry
//! archiving and line-of-descent reconstruction.
//!
//! Individual ids are `generation * population_size + index`. Every random
//! draw comes from a stream derived from the master seed: one selection
//! stream per generation and one mutation stream per offspring id, so the
//! outcome never depends on how evaluation is scheduled.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::brain::{Brain, BuildError, Substrate};
use crate::genome::{self, Genome, GenomeError, MutationConfig};
use crate::markov;
use crate::math;
use crate::seed::{self, Stream};
use crate::world::{self, WorldConfig};

pub const FITNESS_BASE: f64 = 1.05;

/// Starts at 1, multiplied by 1.05 per success and divided by 1.05 per mistake.
pub fn fitness(n_correct: u32, n_trials: u32) -> f64 {
    math::powi(FITNESS_BASE, 2 * n_correct as i32 - n_trials as i32)
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvolutionError {
    InvalidConfig { field: &'static str, reason: &'static str },
    Genome(GenomeError),
    Build(BuildError),
    BrokenLink { generation: usize, id: u64 },
    MissingGenome(u64),
    EmptyArchive,
}

impl fmt::Display for EvolutionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvolutionError::InvalidConfig { field, reason } => write!(f, "{field}: {reason}"),
            EvolutionError::Genome(e) => write!(f, "{e}"),
            EvolutionError::Build(e) => write!(f, "{e}"),
            EvolutionError::BrokenLink { generation, id } => {
                write!(f, "individual {id} in generation {generation} has no parent in the previous generation")
            }
            EvolutionError::MissingGenome(id) => write!(f, "no archived genome for individual {id}"),
            EvolutionError::EmptyArchive => f.write_str("archive holds no generations"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvolutionError {}

impl From<BuildError> for EvolutionError {
    fn from(e: BuildError) -> Self {
        EvolutionError::Build(e)
    }
}

impl From<GenomeError> for EvolutionError {
    fn from(e: GenomeError) -> Self {
        EvolutionError::Genome(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub substrate: Substrate,
    pub population_size: usize,
    pub generations: usize,
    pub seed: u64,
    pub mutation: MutationConfig,
    pub initial_length: usize,
    /// Start codons written into each initial Markov genome; ignored by the ANN substrates.
    pub initial_gates: usize,
    /// Genomes are archived every this many generations (and always for the first and last).
    pub genome_archive_interval: usize,
    pub world: WorldConfig,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            substrate: Substrate::Markov,
            population_size: 100,
            generations: 10_000,
            seed: 0,
            mutation: MutationConfig::default(),
            initial_length: 5_000,
            initial_gates: 40,
            genome_archive_interval: 100,
            world: WorldConfig::default(),
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolutionError> {
        let bad = |field, reason| Err(EvolutionError::InvalidConfig { field, reason });
        if self.population_size < 2 {
            return bad("population_size", "must be at least 2");
        }
        if self.generations < 1 {
            return bad("generations", "must be at least 1");
        }
        if self.genome_archive_interval < 1 {
            return bad("genome_archive_interval", "must be at least 1");
        }
        self.mutation.validate()?;
        if self.initial_length < self.mutation.min_len || self.initial_length > self.mutation.max_len {
            return bad("initial_length", "must lie within [min_len, max_len]");
        }
        if self.mutation.min_len < self.substrate.min_genome_len() {
            return bad("min_len", "shorter than the substrate's parameter block");
        }
        Ok(())
    }

    pub fn id_of(&self, generation: usize, index: usize) -> u64 {
        (generation * self.population_size + index) as u64
    }

    /// Whether genomes of `generation` are kept in the archive.
    pub fn archives_genomes(&self, generation: usize) -> bool {
        generation % self.genome_archive_interval == 0 || generation == self.generations
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub id: u64,
    pub parent_id: Option<u64>,
    pub genome: Genome,
    pub n_correct: u32,
    pub fitness: f64,
}

impl Individual {
    pub fn record(&self) -> Record {
        Record { id: self.id, parent_id: self.parent_id, n_correct: self.n_correct, fitness: self.fitness }
    }
}

/// Archived metadata of one individual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Record {
    pub id: u64,
    pub parent_id: Option<u64>,
    pub n_correct: u32,
    pub fitness: f64,
}

/// An unevaluated child.
#[derive(Clone, Debug, PartialEq)]
pub struct Offspring {
    pub id: u64,
    pub parent_id: u64,
    pub genome: Genome,
}

/// Scores a batch of genomes. Implementations may evaluate in parallel but
/// must return results in input order.
pub trait Evaluator {
    fn evaluate(&self, genomes: &[&Genome]) -> Result<Vec<u32>, BuildError>;
}

/// Evaluates one genome after another on the calling thread.
#[derive(Clone, Debug)]
pub struct SerialEvaluator {
    pub substrate: Substrate,
    pub world: WorldConfig,
}

impl Evaluator for SerialEvaluator {
    fn evaluate(&self, genomes: &[&Genome]) -> Result<Vec<u32>, BuildError> {
        genomes.iter().map(|g| evaluate_genome(self.substrate, g, &self.world)).collect()
    }
}

/// Noise-free score over every start condition.
pub fn evaluate_genome(substrate: Substrate, genome: &Genome, world: &WorldConfig) -> Result<u32, BuildError> {
    let mut brain = substrate.build(genome)?;
    Ok(world::count_correct(&mut brain, world))
}

/// `(n_correct, fitness)` of a brain, each trial starting from a reset brain.
pub fn evaluate_fitness<B: Brain + ?Sized>(brain: &mut B, world: &WorldConfig) -> (u32, f64) {
    let n = world::count_correct(brain, world);
    (n, fitness(n, world.all_trials().len() as u32))
}

/// Fitness-proportional selection with replacement.
#[derive(Clone, Debug)]
pub struct RouletteWheel {
    cumulative: Vec<f64>,
}

impl RouletteWheel {
    /// `None` unless every weight is finite and positive.
    pub fn new(weights: &[f64]) -> Option<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return None;
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Some(RouletteWheel { cumulative })
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn probability(&self, i: usize) -> f64 {
        let lo = if i == 0 { 0.0 } else { self.cumulative[i - 1] };
        (self.cumulative[i] - lo) / self.total()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let x = rng.random::<f64>() * self.total();
        let i = self.cumulative.partition_point(|&c| c <= x);
        i.min(self.cumulative.len() - 1)
    }
}

/// Breeds generation `generation` from `parents` (generation `generation - 1`).
pub fn next_generation(parents: &[Individual], cfg: &EvolutionConfig, generation: usize) -> Vec<Offspring> {
    let weights: Vec<f64> = parents.iter().map(|p| p.fitness).collect();
    let wheel = RouletteWheel::new(&weights).expect("fitness is strictly positive");
    let mut select = seed::rng(cfg.seed, Stream::Selection, &[generation as u64]);
    (0..cfg.population_size)
        .map(|k| {
            let parent = &parents[wheel.sample(&mut select)];
            let id = cfg.id_of(generation, k);
            let mut rng = seed::rng(cfg.seed, Stream::Mutation, &[id]);
            Offspring { id, parent_id: parent.id, genome: genome::mutate(&parent.genome, &cfg.mutation, &mut rng) }
        })
        .collect()
}

/// Generation 0: uniform random genomes, with seeded start codons for Markov Brains.
pub fn initial_genomes(cfg: &EvolutionConfig) -> Result<Vec<Genome>, EvolutionError> {
    (0..cfg.population_size)
        .map(|k| {
            let mut rng = seed::rng(cfg.seed, Stream::InitialGenome, &[cfg.id_of(0, k)]);
            let mut g = genome::random_genome(cfg.initial_length, &cfg.mutation, &mut rng)?;
            if cfg.substrate == Substrate::Markov {
                markov::seed_start_codons(&mut g, cfg.initial_gates, &mut rng);
            }
            Ok(g)
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AncestryArchive {
    pub population_size: usize,
    generations: Vec<Vec<Record>>,
    genomes: BTreeMap<u64, Genome>,
}

impl AncestryArchive {
    pub fn new(population_size: usize) -> Self {
        AncestryArchive { population_size, ..Default::default() }
    }

    pub fn push_generation(&mut self, records: Vec<Record>) {
        self.generations.push(records);
    }

    pub fn insert_genome(&mut self, id: u64, genome: Genome) {
        self.genomes.insert(id, genome);
    }

    pub fn generations(&self) -> &[Vec<Record>] {
        &self.generations
    }

    pub fn generation(&self, g: usize) -> Option<&[Record]> {
        self.generations.get(g).map(|v| &v[..])
    }

    pub fn genome(&self, id: u64) -> Option<&Genome> {
        self.genomes.get(&id)
    }

    pub fn genomes(&self) -> impl Iterator<Item = (u64, &Genome)> {
        self.genomes.iter().map(|(&id, g)| (id, g))
    }

    /// Drops the generations after `last` along with their genomes.
    pub fn truncate(&mut self, last: usize) {
        self.generations.truncate(last + 1);
        let keep: BTreeMap<u64, ()> = self.generations.iter().flatten().map(|r| (r.id, ())).collect();
        self.genomes.retain(|id, _| keep.contains_key(id));
    }

    /// Keeps only the genomes whose id is in `ids`.
    pub fn retain_genomes(&mut self, ids: &[u64]) {
        let mut sorted = ids.to_vec();
        sorted.sort_unstable();
        self.genomes.retain(|id, _| sorted.binary_search(id).is_ok());
    }

    fn find(&self, generation: usize, id: u64) -> Option<&Record> {
        let records = self.generations.get(generation)?;
        let guess = (id as usize).checked_sub(generation * self.population_size);
        if let Some(r) = guess.and_then(|i| records.get(i)).filter(|r| r.id == id) {
            return Some(r);
        }
        records.iter().find(|r| r.id == id)
    }

    /// The ancestor chain of the best final individual (lowest id on ties),
    /// from generation 0 forward.
    pub fn reconstruct_lod(&self) -> Result<Vec<Record>, EvolutionError> {
        let last = self.generations.last().ok_or(EvolutionError::EmptyArchive)?;
        let mut best = *last.first().ok_or(EvolutionError::EmptyArchive)?;
        for r in last {
            if r.fitness > best.fitness || (r.fitness == best.fitness && r.id < best.id) {
                best = *r;
            }
        }
        let mut path = Vec::with_capacity(self.generations.len());
        path.push(best);
        let mut current = best;
        for g in (0..self.generations.len() - 1).rev() {
            let parent = current
                .parent_id
                .and_then(|pid| self.find(g, pid))
                .ok_or(EvolutionError::BrokenLink { generation: g + 1, id: current.id })?;
            path.push(*parent);
            current = *parent;
        }
        if current.parent_id.is_some() {
            return Err(EvolutionError::BrokenLink { generation: 0, id: current.id });
        }
        path.reverse();
        Ok(path)
    }
}

/// A running evolution that can be advanced one generation at a time.
pub struct Evolution<'e, E: Evaluator + ?Sized> {
    cfg: EvolutionConfig,
    evaluator: &'e E,
    population: Vec<Individual>,
    generation: usize,
    archive: AncestryArchive,
}

impl<'e, E: Evaluator + ?Sized> Evolution<'e, E> {
    pub fn new(cfg: EvolutionConfig, evaluator: &'e E) -> Result<Self, EvolutionError> {
        cfg.validate()?;
        let genomes = initial_genomes(&cfg)?;
        let population = Self::score(&cfg, evaluator, genomes.into_iter().enumerate().map(|(k, g)| (k as u64, None, g)).collect())?;
        let mut evo = Evolution { archive: AncestryArchive::new(cfg.population_size), cfg, evaluator, population, generation: 0 };
        evo.archive_current();
        Ok(evo)
    }

    /// Continues from an archive whose last generation has its genomes stored.
    pub fn resume(cfg: EvolutionConfig, evaluator: &'e E, archive: AncestryArchive) -> Result<Self, EvolutionError> {
        cfg.validate()?;
        let last = archive.generations.len().checked_sub(1).ok_or(EvolutionError::EmptyArchive)?;
        let population = archive.generations[last]
            .iter()
            .map(|r| {
                let genome = archive.genome(r.id).ok_or(EvolutionError::MissingGenome(r.id))?.clone();
                Ok(Individual { id: r.id, parent_id: r.parent_id, genome, n_correct: r.n_correct, fitness: r.fitness })
            })
            .collect::<Result<Vec<_>, EvolutionError>>()?;
        if population.len() != cfg.population_size {
            return Err(EvolutionError::InvalidConfig {
                field: "population_size",
                reason: "does not match the archived population",
            });
        }
        Ok(Evolution { cfg, evaluator, population, generation: last, archive })
    }

    fn score(
        cfg: &EvolutionConfig,
        evaluator: &E,
        batch: Vec<(u64, Option<u64>, Genome)>,
    ) -> Result<Vec<Individual>, EvolutionError> {
        let refs: Vec<&Genome> = batch.iter().map(|b| &b.2).collect();
        let scores = evaluator.evaluate(&refs)?;
        let n_trials = cfg.world.all_trials().len() as u32;
        Ok(batch
            .into_iter()
            .zip(scores)
            .map(|((id, parent_id, genome), n)| Individual { id, parent_id, genome, n_correct: n, fitness: fitness(n, n_trials) })
            .collect())
    }

    fn archive_current(&mut self) {
        self.archive.push_generation(self.population.iter().map(Individual::record).collect());
        if self.cfg.archives_genomes(self.generation) {
            for ind in &self.population {
                self.archive.insert_genome(ind.id, ind.genome.clone());
            }
        }
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn is_done(&self) -> bool {
        self.generation >= self.cfg.generations
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn archive(&self) -> &AncestryArchive {
        &self.archive
    }

    pub fn config(&self) -> &EvolutionConfig {
        &self.cfg
    }

    /// Breeds, evaluates and archives the next generation.
    pub fn step(&mut self) -> Result<(), EvolutionError> {
        let next = self.generation + 1;
        let offspring = next_generation(&self.population, &self.cfg, next);
        let base = self.cfg.id_of(self.generation, 0);
        let substrate = self.cfg.substrate;
        // Scores are a pure function of the phenotype, so a child that decodes
        // to its parent's brain inherits the parent's score unevaluated.
        let inherited: Vec<Option<u32>> = offspring
            .iter()
            .map(|o| {
                let parent = &self.population[(o.parent_id - base) as usize];
                substrate.same_phenotype(&parent.genome, &o.genome).then_some(parent.n_correct)
            })
            .collect();
        let fresh: Vec<&Genome> =
            offspring.iter().zip(&inherited).filter(|(_, s)| s.is_none()).map(|(o, _)| &o.genome).collect();
        let mut scores = self.evaluator.evaluate(&fresh)?.into_iter();
        let n_trials = self.cfg.world.all_trials().len() as u32;
        self.population = offspring
            .into_iter()
            .zip(inherited)
            .map(|(o, s)| {
                let n = s.or_else(|| scores.next()).expect("one score per fresh genome");
                Individual { id: o.id, parent_id: Some(o.parent_id), genome: o.genome, n_correct: n, fitness: fitness(n, n_trials) }
            })
            .collect();
        self.generation = next;
        self.archive_current();
        Ok(())
    }

    pub fn into_archive(self) -> AncestryArchive {
        self.archive
    }

    pub fn run(mut self) -> Result<AncestryArchive, EvolutionError> {
        while !self.is_done() {
            self.step()?;
        }
        Ok(self.archive)
    }
}

/// Evolves `cfg.generations` generations from a fresh random population.
pub fn run_evolution<E: Evaluator + ?Sized>(cfg: &EvolutionConfig, evaluator: &E) -> Result<AncestryArchive, EvolutionError> {
    Evolution::new(cfg.clone(), evaluator)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brain::{HiddenBits, Motors, Sensors};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fitness_values() {
        assert_eq!(fitness(32, 64), 1.0);
        assert!((fitness(64, 64) - 22.704_667_199_218_34).abs() / 22.7 < 1e-9);
        assert!((fitness(0, 64) - 0.044_043_807_875_520_29).abs() / 0.044 < 1e-9);
        assert!((fitness(0, 64) * fitness(64, 64) - 1.0).abs() < 1e-12);
        assert!((0..64).all(|n| fitness(n, 64) < fitness(n + 1, 64)));
    }

    #[test]
    fn always_stay_scores_half() {
        struct Stay;
        impl Brain for Stay {
            fn reset(&mut self) {}
            fn step(&mut self, _: Sensors) -> Motors {
                Motors::STAY
            }
            fn hidden(&self) -> HiddenBits {
                HiddenBits(0)
            }
        }
        let (n, f) = evaluate_fitness(&mut Stay, &WorldConfig::default());
        // brute force: count specs whose landing column set meets {0..5}
        let mut expected = 0;
        for spec in WorldConfig::default().all_trials() {
            let land = (spec.start_x as isize + 32 * spec.direction.step()).rem_euclid(16) as usize;
            let hit = (0..spec.block_size).any(|k| (land + k) % 16 < 6);
            expected += (hit == (spec.block_size == 2)) as u32;
        }
        assert_eq!(n, expected);
        assert_eq!(f, fitness(expected, 64));
    }

    #[test]
    fn roulette_probabilities() {
        let w = RouletteWheel::new(&[1.0, 1.0, 2.0]).unwrap();
        assert!((w.probability(2) - 0.5).abs() < 1e-15);
        assert!(((0..3).map(|i| w.probability(i)).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(RouletteWheel::new(&[1.0, 0.0]).is_none());
        assert!(RouletteWheel::new(&[]).is_none());
    }

    #[test]
    fn roulette_dominant_individual() {
        let mut weights = vec![1.0; 100];
        weights[17] = 99.0 * 99.0;
        let w = RouletteWheel::new(&weights).unwrap();
        let p = w.probability(17);
        assert!((p - 0.99).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let hits = (0..n).filter(|_| w.sample(&mut rng) == 17).count() as f64;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((hits - n as f64 * p).abs() < 5.0 * sd);
    }

    #[test]
    fn roulette_uniform_weights() {
        let w = RouletteWheel::new(&[3.0; 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0usize; 4];
        for _ in 0..40_000 {
            counts[w.sample(&mut rng)] += 1;
        }
        assert!(counts.iter().all(|&c| (c as f64 - 10_000.0).abs() < 400.0), "{counts:?}");
    }

    fn small_cfg(substrate: Substrate) -> EvolutionConfig {
        EvolutionConfig {
            substrate,
            population_size: 8,
            generations: 3,
            seed: 42,
            mutation: MutationConfig { min_len: 1000, max_len: 4000, ..Default::default() },
            initial_length: 1000,
            genome_archive_interval: 1,
            ..Default::default()
        }
    }

    fn serial(cfg: &EvolutionConfig) -> SerialEvaluator {
        SerialEvaluator { substrate: cfg.substrate, world: cfg.world.clone() }
    }

    #[test]
    fn seeded_runs_are_identical() {
        for s in Substrate::ALL {
            let cfg = small_cfg(s);
            let a = run_evolution(&cfg, &serial(&cfg)).unwrap();
            let b = run_evolution(&cfg, &serial(&cfg)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.generations().len(), 4);
            assert!(a.generations().iter().all(|g| g.len() == 8));
        }
    }

    #[test]
    fn single_generation_lod() {
        let cfg = EvolutionConfig { generations: 1, ..small_cfg(Substrate::Rnn) };
        let archive = run_evolution(&cfg, &serial(&cfg)).unwrap();
        assert_eq!(archive.generations().len(), 2);
        let lod = archive.reconstruct_lod().unwrap();
        assert_eq!(lod.len(), 2);
        assert_eq!(lod[1].parent_id, Some(lod[0].id));
        assert_eq!(lod[0].parent_id, None);
    }

    #[test]
    fn lod_links_parent_ids() {
        let cfg = EvolutionConfig { generations: 6, ..small_cfg(Substrate::Markov) };
        let archive = run_evolution(&cfg, &serial(&cfg)).unwrap();
        let lod = archive.reconstruct_lod().unwrap();
        assert_eq!(lod.len(), 7);
        for w in lod.windows(2) {
            assert_eq!(w[1].parent_id, Some(w[0].id));
        }
        let last = archive.generations().last().unwrap();
        let best = last.iter().map(|r| r.fitness).fold(0.0, f64::max);
        let root = lod.last().unwrap();
        assert_eq!(root.fitness, best);
        assert!(last.iter().all(|r| r.fitness < best || r.id >= root.id));
    }

    #[test]
    fn frozen_mutation_copies_parents() {
        let cfg = EvolutionConfig { mutation: MutationConfig::frozen(1000, 4000), ..small_cfg(Substrate::Lstm) };
        let eval = serial(&cfg);
        let evo = Evolution::new(cfg.clone(), &eval).unwrap();
        let kids = next_generation(evo.population(), &cfg, 1);
        for kid in kids {
            let parent = evo.population().iter().find(|p| p.id == kid.parent_id).unwrap();
            assert_eq!(kid.genome, parent.genome);
        }
    }

    #[test]
    fn broken_link_is_reported() {
        let mut archive = AncestryArchive::new(2);
        let rec = |id, parent_id| Record { id, parent_id, n_correct: 1, fitness: 1.0 };
        archive.push_generation(vec![rec(0, None), rec(1, None)]);
        archive.push_generation(vec![rec(2, Some(7)), rec(3, Some(7))]);
        assert_eq!(archive.reconstruct_lod(), Err(EvolutionError::BrokenLink { generation: 1, id: 2 }));
        assert_eq!(AncestryArchive::new(2).reconstruct_lod(), Err(EvolutionError::EmptyArchive));
    }

    #[test]
    fn config_rejects_bad_fields() {
        let bad = |cfg: EvolutionConfig| match cfg.validate() {
            Err(EvolutionError::InvalidConfig { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(bad(EvolutionConfig { generations: 0, ..Default::default() }), "generations");
        assert_eq!(bad(EvolutionConfig { population_size: 1, ..Default::default() }), "population_size");
        assert!(EvolutionConfig::default().validate().is_ok());
    }

    #[test]
    fn resume_matches_uninterrupted_run() {
        let cfg = EvolutionConfig { generations: 5, ..small_cfg(Substrate::Markov) };
        let eval = serial(&cfg);
        let full = run_evolution(&cfg, &eval).unwrap();
        let mut evo = Evolution::new(cfg.clone(), &eval).unwrap();
        evo.step().unwrap();
        evo.step().unwrap();
        let partial = evo.into_archive();
        let resumed = Evolution::resume(cfg, &eval, partial).unwrap().run().unwrap();
        assert_eq!(full, resumed);
    }

    #[test]
    fn inherited_scores_match_fresh_evaluation() {
        for s in Substrate::ALL {
            let cfg = EvolutionConfig { genome_archive_interval: 1, ..small_cfg(s) };
            let eval = serial(&cfg);
            let archive = run_evolution(&cfg, &eval).unwrap();
            for r in archive.generations().iter().flatten() {
                let g = archive.genome(r.id).unwrap();
                assert_eq!(evaluate_genome(s, g, &cfg.world).unwrap(), r.n_correct);
            }
        }
    }

    #[test]
    fn phenotype_equality_ignores_noncoding_sites() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = genome::random_genome(5000, &MutationConfig::default(), &mut rng).unwrap();
        let mut b = a.clone();
        b.sites_mut()[4000] ^= 1;
        assert!(Substrate::Rnn.same_phenotype(&a, &b));
        assert!(Substrate::Lstm.same_phenotype(&a, &b));
        b.sites_mut()[100] ^= 1;
        assert!(!Substrate::Rnn.same_phenotype(&a, &b));
        let mut m = a.clone();
        m.sites_mut()[10] = 42;
        m.sites_mut()[11] = 213;
        assert!(!Substrate::Markov.same_phenotype(&a, &m));
    }
}
