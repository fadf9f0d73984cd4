//! Core machinery for evolving block-catching agents and measuring how their
//! internal states represent the world.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`world`]: the periodic 16x32 block-catching task, sensors, scoring and trial execution.
//! - [`genome`]: byte-site genomes with point, deletion and duplication mutations.
//! - [`markov`]: deterministic logic-gate networks decoded from genomes.
//! - [`neural`]: genome-encoded RNN and LSTM controllers.
//! - [`evolution`]: the asexual roulette GA, ancestry archive and line of descent.
//! - [`info`]: discrete entropies, representation, representation matrices and smearedness.
//!
//! Enable the `std` feature to route floating point intrinsics through `std`
//! instead of `libm`.
#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod brain;
pub mod evolution;
pub mod genome;
pub mod info;
pub mod markov;
mod math;
pub mod neural;
pub mod seed;
pub mod world;

pub use brain::{AnyBrain, Brain, BuildError, HiddenBits, Motors, Sensors, Substrate};
pub use evolution::{AncestryArchive, EvolutionConfig, Individual};
pub use genome::{Genome, MutationConfig};
pub use info::{RepresentationMatrix, StateTrace};
pub use world::{TrialSpec, WorldConfig};
