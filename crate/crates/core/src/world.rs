//! The active categorical perception task.
//!
//! A block of width 2 (catch it) or 4 (avoid it) falls from row
//! `drop_height` toward an agent on a periodic rail, drifting one column per
//! update. The agent sees the world through column-shadow sensors and moves
//! at most one column per update.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::brain::{Brain, HiddenBits, Motors, Sensors, N_SENSORS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WorldError {
    InvalidConfig(&'static str),
    InvalidBlockSize(usize),
    StartOutOfRange { start_x: usize, width: usize },
    NoiseOutOfRange,
    BlockLanded,
    BlockAirborne,
}

impl fmt::Display for WorldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldError::InvalidConfig(why) => write!(f, "invalid world config: {why}"),
            WorldError::InvalidBlockSize(s) => write!(f, "block size {s} is neither small nor large"),
            WorldError::StartOutOfRange { start_x, width } => {
                write!(f, "start column {start_x} outside [0, {width})")
            }
            WorldError::NoiseOutOfRange => f.write_str("noise probability outside [0, 1]"),
            WorldError::BlockLanded => f.write_str("block already landed"),
            WorldError::BlockAirborne => f.write_str("block has not landed yet"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for WorldError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldConfig {
    width: usize,
    drop_height: usize,
    agent_width: usize,
    sensor_offsets: [usize; N_SENSORS],
    small_size: usize,
    large_size: usize,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig {
            width: 16,
            drop_height: 32,
            agent_width: 6,
            sensor_offsets: [0, 1, 4, 5],
            small_size: 2,
            large_size: 4,
        }
    }
}

impl WorldConfig {
    pub fn new(
        width: usize,
        drop_height: usize,
        agent_width: usize,
        sensor_offsets: [usize; N_SENSORS],
        small_size: usize,
        large_size: usize,
    ) -> Result<Self, WorldError> {
        if width <= agent_width {
            return Err(WorldError::InvalidConfig("width must exceed agent width"));
        }
        if drop_height == 0 {
            return Err(WorldError::InvalidConfig("drop height must be positive"));
        }
        if sensor_offsets.iter().any(|&o| o >= agent_width) {
            return Err(WorldError::InvalidConfig("sensor offset outside the agent"));
        }
        if sensor_offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(WorldError::InvalidConfig("sensor offsets must be strictly increasing"));
        }
        if !(0 < small_size && small_size < large_size && large_size <= agent_width) {
            return Err(WorldError::InvalidConfig("need 0 < small < large <= agent width"));
        }
        Ok(WorldConfig { width, drop_height, agent_width, sensor_offsets, small_size, large_size })
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn drop_height(&self) -> usize {
        self.drop_height
    }
    pub fn agent_width(&self) -> usize {
        self.agent_width
    }
    pub fn sensor_offsets(&self) -> [usize; N_SENSORS] {
        self.sensor_offsets
    }
    pub fn small_size(&self) -> usize {
        self.small_size
    }
    pub fn large_size(&self) -> usize {
        self.large_size
    }

    /// Every start condition: sizes (small, large) x directions (left, right) x start columns.
    pub fn all_trials(&self) -> Vec<TrialSpec> {
        let mut out = Vec::with_capacity(4 * self.width);
        for size in [self.small_size, self.large_size] {
            for direction in [Direction::Left, Direction::Right] {
                for start_x in 0..self.width {
                    out.push(TrialSpec { block_size: size, direction, start_x });
                }
            }
        }
        out
    }

    /// Wraps a column at most one step outside `[0, width)`.
    #[inline]
    fn wrap(&self, x: isize) -> usize {
        let w = self.width as isize;
        (if x < 0 { x + w } else if x >= w { x - w } else { x }) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn step(self) -> isize {
        match self {
            Direction::Left => -1,
            Direction::Right => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrialSpec {
    pub block_size: usize,
    pub direction: Direction,
    pub start_x: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialState {
    /// Leftmost block column.
    pub block_x: usize,
    /// Rows between the block and the agent.
    pub block_row: usize,
    /// Leftmost agent column.
    pub agent_x: usize,
    pub tick: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Caught,
    Missed,
}

/// The coarse-grained world variables: size, location and direction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Concepts {
    /// Block is large.
    pub size: bool,
    /// Block is to the agent's right (shortest wrap offset > 0).
    pub location: bool,
    /// Block drifts to the right.
    pub direction: bool,
}

impl Concepts {
    /// Packs as bit 0 = size, bit 1 = location, bit 2 = direction.
    pub fn bits(self) -> u8 {
        self.size as u8 | (self.location as u8) << 1 | (self.direction as u8) << 2
    }
}

/// One update of a recorded trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialRecordRow {
    pub tick: usize,
    /// The sensor values the brain received (after any noise).
    pub sensors: Sensors,
    /// Hidden states after the brain update.
    pub brain: HiddenBits,
    /// World concepts at sense time.
    pub concepts: Concepts,
}

pub fn init_trial(spec: &TrialSpec, cfg: &WorldConfig) -> Result<TrialState, WorldError> {
    if spec.block_size != cfg.small_size && spec.block_size != cfg.large_size {
        return Err(WorldError::InvalidBlockSize(spec.block_size));
    }
    if spec.start_x >= cfg.width {
        return Err(WorldError::StartOutOfRange { start_x: spec.start_x, width: cfg.width });
    }
    Ok(TrialState { block_x: spec.start_x, block_row: cfg.drop_height, agent_x: 0, tick: 0 })
}

/// `column` must already lie in `[0, width)`.
#[inline]
fn block_covers(state: &TrialState, spec: &TrialSpec, cfg: &WorldConfig, column: usize) -> bool {
    let d = if column >= state.block_x { column - state.block_x } else { column + cfg.width - state.block_x };
    d < spec.block_size
}

#[inline]
fn wrap_once(x: usize, width: usize) -> usize {
    if x >= width {
        x - width
    } else {
        x
    }
}

/// Shadow sensors: a sensor fires iff any block cell shares its column.
pub fn sense(state: &TrialState, spec: &TrialSpec, cfg: &WorldConfig) -> Sensors {
    let mut bits = 0u8;
    for (k, &off) in cfg.sensor_offsets.iter().enumerate() {
        let col = wrap_once(state.agent_x + off, cfg.width);
        bits |= (block_covers(state, spec, cfg, col) as u8) << k;
    }
    Sensors(bits)
}

/// `(1,0)` moves left, `(0,1)` moves right, anything else stays.
pub fn apply_action(state: &TrialState, motors: Motors, cfg: &WorldConfig) -> TrialState {
    let delta = match (motors.get(0), motors.get(1)) {
        (true, false) => -1,
        (false, true) => 1,
        _ => 0,
    };
    TrialState { agent_x: cfg.wrap(state.agent_x as isize + delta), ..*state }
}

pub fn advance_block(
    state: &TrialState,
    spec: &TrialSpec,
    cfg: &WorldConfig,
) -> Result<TrialState, WorldError> {
    if state.block_row == 0 {
        return Err(WorldError::BlockLanded);
    }
    Ok(TrialState {
        block_x: cfg.wrap(state.block_x as isize + spec.direction.step()),
        block_row: state.block_row - 1,
        tick: state.tick + 1,
        ..*state
    })
}

/// Whether the landed block overlaps the agent in at least one column.
pub fn outcome(state: &TrialState, spec: &TrialSpec, cfg: &WorldConfig) -> Result<Outcome, WorldError> {
    if state.block_row != 0 {
        return Err(WorldError::BlockAirborne);
    }
    let caught = (0..cfg.agent_width)
        .any(|k| block_covers(state, spec, cfg, wrap_once(state.agent_x + k, cfg.width)));
    Ok(if caught { Outcome::Caught } else { Outcome::Missed })
}

/// Catching small blocks and avoiding large ones are the successful outcomes.
pub fn is_success(outcome: Outcome, spec: &TrialSpec, cfg: &WorldConfig) -> bool {
    (outcome == Outcome::Caught) ^ (spec.block_size == cfg.large_size)
}

pub fn label_concepts(state: &TrialState, spec: &TrialSpec, cfg: &WorldConfig) -> Concepts {
    let w = cfg.width as isize;
    let half = w / 2;
    let offset = (state.block_x as isize - state.agent_x as isize + half).rem_euclid(w) - half;
    Concepts {
        size: spec.block_size == cfg.large_size,
        location: offset > 0,
        direction: spec.direction == Direction::Right,
    }
}

fn run_with<B, F>(
    brain: &mut B,
    spec: &TrialSpec,
    cfg: &WorldConfig,
    mut corrupt: F,
    mut trace: Option<&mut Vec<TrialRecordRow>>,
) -> Result<bool, WorldError>
where
    B: Brain + ?Sized,
    F: FnMut(Sensors) -> Sensors,
{
    brain.reset();
    let mut state = init_trial(spec, cfg)?;
    while state.block_row > 0 {
        let sensors = corrupt(sense(&state, spec, cfg));
        let motors = brain.step(sensors);
        if let Some(rows) = trace.as_deref_mut() {
            let concepts = label_concepts(&state, spec, cfg);
            rows.push(TrialRecordRow { tick: state.tick, sensors, brain: brain.hidden(), concepts });
        }
        state = apply_action(&state, motors, cfg);
        state = advance_block(&state, spec, cfg)?;
    }
    Ok(is_success(outcome(&state, spec, cfg)?, spec, cfg))
}

/// Resets `brain` and plays one trial. Each update runs sense, noise, brain
/// step, agent move and block move in that order. With probability `noise_p`
/// each sensor bit is independently replaced by a fair random bit; `rng` is
/// untouched when `noise_p == 0`.
pub fn run_trial<B, R>(
    brain: &mut B,
    spec: &TrialSpec,
    cfg: &WorldConfig,
    noise_p: f64,
    rng: &mut R,
    trace: Option<&mut Vec<TrialRecordRow>>,
) -> Result<bool, WorldError>
where
    B: Brain + ?Sized,
    R: Rng + ?Sized,
{
    if !(0.0..=1.0).contains(&noise_p) {
        return Err(WorldError::NoiseOutOfRange);
    }
    if noise_p == 0.0 {
        return run_with(brain, spec, cfg, |s| s, trace);
    }
    run_with(
        brain,
        spec,
        cfg,
        |s| {
            let mut bits = s.0;
            for k in 0..N_SENSORS {
                if rng.random_bool(noise_p) {
                    bits = bits & !(1 << k) | (rng.random::<bool>() as u8) << k;
                }
            }
            Sensors(bits)
        },
        trace,
    )
}

/// Noise-free trial.
pub fn play_trial<B: Brain + ?Sized>(
    brain: &mut B,
    spec: &TrialSpec,
    cfg: &WorldConfig,
    trace: Option<&mut Vec<TrialRecordRow>>,
) -> Result<bool, WorldError> {
    run_with(brain, spec, cfg, |s| s, trace)
}

/// Number of successful trials over every start condition, noise-free.
pub fn count_correct<B: Brain + ?Sized>(brain: &mut B, cfg: &WorldConfig) -> u32 {
    cfg.all_trials()
        .iter()
        .map(|spec| play_trial(brain, spec, cfg, None).expect("enumerated specs are valid") as u32)
        .sum()
}

/// Plays every start condition noise-free and records every update, trials in
/// [`WorldConfig::all_trials`] order.
pub fn record_all<B: Brain + ?Sized>(brain: &mut B, cfg: &WorldConfig) -> (u32, Vec<Vec<TrialRecordRow>>) {
    let mut correct = 0;
    let trials = cfg
        .all_trials()
        .iter()
        .map(|spec| {
            let mut rows = Vec::with_capacity(cfg.drop_height);
            correct += play_trial(brain, spec, cfg, Some(&mut rows)).expect("enumerated specs are valid") as u32;
            rows
        })
        .collect();
    (correct, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brain::HiddenBits;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Scripted<F: FnMut(usize, Sensors) -> Motors> {
        t: usize,
        policy: F,
    }

    impl<F: FnMut(usize, Sensors) -> Motors> Brain for Scripted<F> {
        fn reset(&mut self) {
            self.t = 0;
        }
        fn step(&mut self, s: Sensors) -> Motors {
            let m = (self.policy)(self.t, s);
            self.t += 1;
            m
        }
        fn hidden(&self) -> HiddenBits {
            HiddenBits(self.t as u16 & HiddenBits::MASK)
        }
    }

    fn spec(size: usize, dir: Direction, x: usize) -> TrialSpec {
        TrialSpec { block_size: size, direction: dir, start_x: x }
    }

    fn state(block_x: usize, agent_x: usize, row: usize) -> TrialState {
        TrialState { block_x, block_row: row, agent_x, tick: 32 - row }
    }

    #[test]
    fn init_examples() {
        let cfg = WorldConfig::default();
        let s = init_trial(&spec(2, Direction::Right, 5), &cfg).unwrap();
        assert_eq!(s, TrialState { block_x: 5, block_row: 32, agent_x: 0, tick: 0 });
        let s = init_trial(&spec(4, Direction::Left, 0), &cfg).unwrap();
        assert_eq!(s, TrialState { block_x: 0, block_row: 32, agent_x: 0, tick: 0 });
        assert_eq!(init_trial(&spec(3, Direction::Left, 0), &cfg), Err(WorldError::InvalidBlockSize(3)));
        assert!(matches!(
            init_trial(&spec(2, Direction::Left, 16), &cfg),
            Err(WorldError::StartOutOfRange { .. })
        ));
    }

    #[test]
    fn sixty_four_distinct_specs() {
        let specs = WorldConfig::default().all_trials();
        assert_eq!(specs.len(), 64);
        for (i, a) in specs.iter().enumerate() {
            assert!(specs[i + 1..].iter().all(|b| a != b));
        }
    }

    #[test]
    fn sensor_examples() {
        let cfg = WorldConfig::default();
        let small = spec(2, Direction::Left, 0);
        let large = spec(4, Direction::Left, 0);
        assert_eq!(sense(&state(4, 0, 10), &small, &cfg).bits(), [false, false, true, true]);
        assert_eq!(sense(&state(2, 0, 10), &small, &cfg).bits(), [false; 4]);
        assert_eq!(sense(&state(0, 0, 10), &large, &cfg).bits(), [true, true, false, false]);
        // wrapped block {15, 0} hits sensor 0 only
        assert_eq!(sense(&state(15, 0, 10), &small, &cfg).bits(), [true, false, false, false]);
    }

    #[test]
    fn action_examples() {
        let cfg = WorldConfig::default();
        let at = |x| state(3, x, 5);
        assert_eq!(apply_action(&at(0), Motors::LEFT, &cfg).agent_x, 15);
        assert_eq!(apply_action(&at(7), Motors::STAY, &cfg).agent_x, 7);
        assert_eq!(apply_action(&at(7), Motors(0b11), &cfg).agent_x, 7);
        assert_eq!(apply_action(&at(15), Motors::RIGHT, &cfg).agent_x, 0);
    }

    #[test]
    fn block_advance_wraps_and_lands() {
        let cfg = WorldConfig::default();
        let right = spec(2, Direction::Right, 15);
        let s = advance_block(&init_trial(&right, &cfg).unwrap(), &right, &cfg).unwrap();
        assert_eq!((s.block_x, s.block_row, s.tick), (0, 31, 1));
        let left = spec(2, Direction::Left, 0);
        let s = advance_block(&init_trial(&left, &cfg).unwrap(), &left, &cfg).unwrap();
        assert_eq!((s.block_x, s.block_row), (15, 31));

        let mut s = init_trial(&left, &cfg).unwrap();
        for _ in 0..32 {
            s = advance_block(&s, &left, &cfg).unwrap();
        }
        assert_eq!(s.block_row, 0);
        assert_eq!(advance_block(&s, &left, &cfg), Err(WorldError::BlockLanded));
    }

    #[test]
    fn outcome_examples() {
        let cfg = WorldConfig::default();
        let small = spec(2, Direction::Left, 0);
        let large = spec(4, Direction::Left, 0);
        assert_eq!(outcome(&state(5, 0, 0), &small, &cfg), Ok(Outcome::Caught));
        assert_eq!(outcome(&state(8, 0, 0), &small, &cfg), Ok(Outcome::Missed));
        assert_eq!(outcome(&state(12, 14, 0), &large, &cfg), Ok(Outcome::Caught));
        assert_eq!(outcome(&state(12, 0, 1), &large, &cfg), Err(WorldError::BlockAirborne));
        assert!(is_success(Outcome::Caught, &small, &cfg));
        assert!(!is_success(Outcome::Caught, &large, &cfg));
        assert!(is_success(Outcome::Missed, &large, &cfg));
    }

    #[test]
    fn concept_examples() {
        let cfg = WorldConfig::default();
        let large = spec(4, Direction::Right, 0);
        let small = spec(2, Direction::Left, 0);
        assert!(label_concepts(&state(0, 0, 3), &large, &cfg).size);
        assert!(!label_concepts(&state(0, 0, 3), &small, &cfg).size);
        assert!(label_concepts(&state(0, 0, 3), &large, &cfg).direction);
        assert!(label_concepts(&state(3, 0, 3), &small, &cfg).location);
        assert!(!label_concepts(&state(13, 0, 3), &small, &cfg).location);
        // antipodal tie
        assert!(!label_concepts(&state(8, 0, 3), &small, &cfg).location);
        assert!(!label_concepts(&state(0, 0, 3), &small, &cfg).location);
    }

    #[test]
    fn trial_runs_drop_height_updates() {
        let cfg = WorldConfig::default();
        let mut brain = Scripted { t: 0, policy: |_, _| Motors::RIGHT };
        let mut rows = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        run_trial(&mut brain, &spec(2, Direction::Left, 3), &cfg, 0.0, &mut rng, Some(&mut rows)).unwrap();
        assert_eq!(rows.len(), 32);
        assert!(rows.iter().enumerate().all(|(i, r)| r.tick == i));
        assert_eq!(
            run_trial(&mut brain, &spec(2, Direction::Left, 3), &cfg, 1.5, &mut rng, None),
            Err(WorldError::NoiseOutOfRange)
        );
    }

    #[test]
    fn full_noise_is_a_fair_coin() {
        let cfg = WorldConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut ones = [0usize; 4];
        let mut n = 0;
        // at p = 1 the world state never reaches the brain
        let spec = spec(2, Direction::Right, 8);
        for _ in 0..200 {
            let mut rows = Vec::new();
            let mut brain = Scripted { t: 0, policy: |_, _| Motors::STAY };
            run_trial(&mut brain, &spec, &cfg, 1.0, &mut rng, Some(&mut rows)).unwrap();
            for r in &rows {
                n += 1;
                for (k, c) in ones.iter_mut().enumerate() {
                    *c += r.sensors.get(k) as usize;
                }
            }
        }
        for c in ones {
            let frac = c as f64 / n as f64;
            assert!((frac - 0.5).abs() < 0.02, "{frac}");
        }
    }
}
