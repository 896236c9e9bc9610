//! Greedy multi-criteria assembly of metrical poems from scanned prose.
//!
//! The pipeline is: load a corpus of scanned sentences ([`corpus`]), parse
//! the rhyme scheme and meter plan ([`scheme`]), assign a rhyme group to each
//! letter and fill verse slots greedily ([`assembler`]) using the five rhythm
//! criteria in [`criteria`], then summarize the result ([`report`]).
//!
//! Scoring is generic over [`Scalar`]; the aliases below pin the two
//! instantiations used in practice.

pub mod assembler;
pub mod cli;
pub mod corpus;
pub mod criteria;
pub mod report;
pub mod scalar;
pub mod scansion;
pub mod scheme;

pub use num_rational::Rational64;
pub use scalar::Scalar;

pub use assembler::{build_poem, generate, BuildError, BuildState, GenerateConfig};
pub use corpus::{build_index, load_corpus, CorpusEntry, CorpusError, RhymeGroup, RhymeIndex};
pub use criteria::{CandidateScore, Criterion, ReferenceContext};
pub use report::{evaluate_poem, render, OutputFormat, PoemReport};
pub use scansion::{parse_scansion, AccentClass, ScannedVerse, ScansionError, Syllable};
pub use scheme::{parse_scheme, CriterionWeights, MeterPlan, RhymeScheme, SchemeError};

/// Production scalar.
pub type Score = f64;
/// Exact scalar used by oracles and regression checks.
pub type ExactScore = Rational64;

pub type Weights = CriterionWeights<Score>;
pub type ExactWeights = CriterionWeights<ExactScore>;
pub type Candidate = CandidateScore<Score>;
pub type ExactCandidate = CandidateScore<ExactScore>;
pub type Poem = BuildState<Score>;
pub type ExactPoem = BuildState<ExactScore>;
pub type Report = PoemReport<Score>;
pub type ExactReport = PoemReport<ExactScore>;
