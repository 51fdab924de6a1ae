//! A seeded two-versus-two robot soccer simulator. Two attackers play
//! either reactively or from a case base against a defender pair; every
//! trial is recorded as a JSONL log the abstraction stage can read.

pub mod case;
pub mod cbr;
pub mod config;
pub mod error;
pub mod experiment;
pub mod geom;
pub mod policy;
pub mod trial;
pub mod world;

pub use case::{CaseBase, Problem};
pub use config::{Approach, OpponentConfig, Scenario, SimConfig};
pub use error::SimError;
pub use experiment::{run_experiment, ExperimentPlan, Manifest};
pub use trial::{run_trial, run_trial_traced};
