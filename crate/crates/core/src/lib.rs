//! Synchronization of strongly connected partial DFAs.
//!
//! The crate covers the inseparability equivalence, the fixing, collecting,
//! induced and duplicating constructions, a generalized Eppstein algorithm for
//! synchronizability and minimum-rank words, literal automata of finite prefix
//! codes with a logarithmic-rank word construction, and an exact subset-BFS
//! oracle used to check all of the above at small sizes.

pub mod automaton;
pub mod cli;
pub mod codes;
pub mod constructions;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod oracle;
pub mod rng;
pub mod state_set;
pub mod synchronization;
pub mod verify;

pub use automaton::{Letter, PartialDfa, State, Word, GAMMA};
pub use error::{Error, Result};
pub use state_set::StateSet;
