//! Learning Moore machines from large trace datasets without loading them
//! into memory.
//!
//! The crate is organized around a disk-backed [`store::TraceStore`] that
//! answers bounded prefix queries, an [`tree::ObservationTree`] (a PTA with
//! red/blue/white coloring) shared by the two learners, and the learners
//! themselves: [`daalder::learn`], which pulls informative traces on demand,
//! and [`edsm::edsm_learn`], which consumes the whole dataset up front.

pub mod alphabet;
pub mod datagen;
pub mod daalder;
pub mod edsm;
pub mod equivalence;
pub mod error;
pub mod fold;
pub mod machine;
pub mod machine_io;
pub mod mem;
pub mod minimize;
pub mod oracle;
pub mod stats;
pub mod store;
pub mod tree;

pub use alphabet::{Alphabet, LabeledTrace, Symbol, Trace};
pub use equivalence::equivalent;
pub use machine::{MooreMachine, StateId};
pub use minimize::minimize;
pub use oracle::{exact_equivalence, randomized_equivalence, OracleBudget, OracleVerdict};
pub use store::{PrefixQueryResult, StoreBuilder, TraceStore};
pub use tree::{NodeId, ObservationTree};
