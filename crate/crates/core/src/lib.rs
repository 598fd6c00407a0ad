//! Exact-arithmetic finite probability spaces.
//!
//! Outcomes live in an [`OutcomeSpace`], events are bitsets over it, and a
//! [`Distribution`] measures any event by summing exact rational weights.
//! On top of the kernel sit binary protocol trees, a model of the first phase
//! of BB84 (with and without an intercept-resend eavesdropper) and a small
//! text format for boolean models and queries.

pub mod distribution;
pub mod dsl;
pub mod error;
pub mod event;
pub mod partition;
pub mod qkd;
pub mod rational;
pub mod sigma;
pub mod space;
pub mod tree;

pub use distribution::{make_distribution, pmap, Distribution, PriorAssignment};
pub use error::{PartitionError, ProbError};
pub use event::Event;
pub use partition::{is_partition, total_probability, BlockTerm, Partition, TotalProbability};
pub use rational::Rational;
pub use sigma::{is_prob_space, powerset_space, powerset_space_with_limit, DEFAULT_POWERSET_LIMIT};
pub use space::OutcomeSpace;
pub use tree::{build_tree, BranchRule, ProtocolTree};
