//! Relational sequences of first-order atoms, θ-subsumption, frequent
//! pattern mining and discriminative ranking.

pub mod abstraction;
pub mod field;
pub mod miner;
pub mod parse;
pub mod scoring;
pub mod seqfile;
pub mod sequence;
pub mod subst;
pub mod subsume;
pub mod term;
pub mod vocab;

pub use parse::{parse_atom, parse_atom_list, ParseError};
pub use sequence::{
    count_embeddings, occurs_in, support, ClassLabel, IndexedCorpus, MatchMode, Pattern,
    RelationalSequence,
};
pub use subst::{apply_substitution, Substitution};
pub use subsume::theta_subsumes;
pub use term::{Atom, Term};
