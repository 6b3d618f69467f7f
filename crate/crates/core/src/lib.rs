//! Evolutionary synthesis of quantum circuits.
//!
//! Chromosomes of gates ([`gates`]) are simulated on a dense statevector
//! ([`sim`]) against every oracle instance of a benchmark problem
//! ([`problems`]), scored by one of three fitness functions ([`fitness`]) and
//! evolved by a genetic algorithm ([`evolve`]).

pub mod evolve;
pub mod fitness;
pub mod gates;
pub mod problems;
pub mod qasm;
pub mod reference;
pub mod sim;
pub mod simplex;

pub use evolve::{run_experiment, GAConfig, GenerationStats, MutationMode, ParamOpt};
pub use fitness::{FitnessKind, FitnessReport};
pub use gates::{Chromosome, GateKind, GateSet, GateSpec};
pub use problems::{make_bv_suite, make_search_suite, ProblemKind, ProblemSuite};
pub use sim::{StateVector, UnitaryMatrix};
