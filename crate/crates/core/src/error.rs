use thiserror::Error;

use crate::rational::Rational;

/// Errors raised by the probability kernel, the decision tree and the QKD model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("outcome space must contain at least one outcome")]
    EmptySpace,

    #[error("duplicate outcome label `{0}`")]
    DuplicateOutcome(String),

    #[error("events belong to different outcome spaces")]
    SpaceMismatch,

    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("outcome space is not a product of boolean variables")]
    NotBooleanSpace,

    #[error("prior has {found} weights for a space of {expected} outcomes")]
    PriorLength { expected: usize, found: usize },

    #[error("negative weight {weight} for outcome {outcome}")]
    NegativeWeight { outcome: String, weight: Rational },

    #[error("prior sums to {sum}, expected 1")]
    PriorSum { sum: Rational },

    #[error("cannot condition on an event of probability zero")]
    NullConditioning,

    #[error("invalid partition: {0}")]
    Partition(#[from] PartitionError),

    #[error("refusing to materialise 2^{size} events (limit is {limit} outcomes)")]
    TooLarge { size: usize, limit: usize },

    #[error("expected {expected} boolean values, got {found}")]
    Arity { expected: usize, found: usize },

    /// `edges` holds (P(true), P(false)).
    #[error("edge probabilities at level `{level}` after prefix {prefix} are ({}, {}); they must be nonnegative and sum to 1", edges.0, edges.1)]
    EdgeProbabilities {
        level: String,
        prefix: String,
        edges: Box<(Rational, Rational)>,
    },
}

/// The first reason a list of blocks fails to partition its space.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("no blocks given")]
    NoBlocks,

    #[error("block {0} is empty")]
    EmptyBlock(usize),

    #[error("blocks {first} and {second} overlap at outcome {outcome}")]
    Overlap {
        first: usize,
        second: usize,
        outcome: String,
    },

    #[error("outcome {0} is not covered by any block")]
    Uncovered(String),

    #[error("block {0} belongs to a different outcome space")]
    ForeignBlock(usize),
}
