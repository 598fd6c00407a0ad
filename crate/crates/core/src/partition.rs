//! Partitions of an outcome space and the law of total probability.

use std::sync::Arc;

use crate::distribution::Distribution;
use crate::error::{PartitionError, ProbError};
use crate::event::Event;
use crate::rational::Rational;
use crate::space::{same_space, OutcomeSpace};

/// Nonempty, pairwise disjoint blocks whose union is the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    space: Arc<OutcomeSpace>,
    blocks: Vec<Event>,
}

impl Partition {
    /// Validates `blocks`, reporting the first violation found: a foreign or
    /// empty block, then the first overlapping pair (lowest indices), then
    /// the first uncovered outcome.
    pub fn new(space: &Arc<OutcomeSpace>, blocks: Vec<Event>) -> Result<Self, PartitionError> {
        if blocks.is_empty() {
            return Err(PartitionError::NoBlocks);
        }
        for (i, b) in blocks.iter().enumerate() {
            if !same_space(space, b.space()) {
                return Err(PartitionError::ForeignBlock(i));
            }
            if b.is_empty() {
                return Err(PartitionError::EmptyBlock(i));
            }
        }
        // owner[x] = first block containing outcome x
        let mut owner: Vec<Option<usize>> = vec![None; space.len()];
        let mut overlap: Option<(usize, usize, usize)> = None;
        for (j, b) in blocks.iter().enumerate() {
            for x in b.indices() {
                match owner[x] {
                    None => owner[x] = Some(j),
                    Some(i) => {
                        let candidate = (i, j, x);
                        if overlap.is_none_or(|o| (i, j) < (o.0, o.1)) {
                            overlap = Some(candidate);
                        }
                    }
                }
            }
        }
        if let Some((first, second, x)) = overlap {
            return Err(PartitionError::Overlap {
                first,
                second,
                outcome: space.label(x).to_string(),
            });
        }
        if let Some(x) = owner.iter().position(Option::is_none) {
            return Err(PartitionError::Uncovered(space.label(x).to_string()));
        }
        Ok(Partition {
            space: Arc::clone(space),
            blocks,
        })
    }

    /// The single-block partition `{Ω}`.
    pub fn trivial(space: &Arc<OutcomeSpace>) -> Self {
        Partition {
            space: Arc::clone(space),
            blocks: vec![Event::full(space)],
        }
    }

    /// Blocks given by every sign pattern of the listed boolean variables,
    /// ordered with all-true first and the last variable varying fastest.
    /// Patterns with no outcomes cannot occur in a product space.
    pub fn by_signs(space: &Arc<OutcomeSpace>, variables: &[&str]) -> Result<Self, ProbError> {
        let cols = variables
            .iter()
            .map(|v| space.variable_index(v))
            .collect::<Result<Vec<_>, _>>()?;
        let k = cols.len();
        let blocks = (0..1usize << k)
            .map(|p| {
                // p = 0 is the all-true pattern
                let signs: Vec<bool> = (0..k).map(|j| (p >> (k - 1 - j)) & 1 == 0).collect();
                Event::where_assignment(space, |a| {
                    cols.iter().zip(&signs).all(|(&c, &s)| a[c] == s)
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Partition::new(space, blocks)?)
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn blocks(&self) -> &[Event] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Validates `blocks` as a partition of `space`.
pub fn is_partition(
    space: &Arc<OutcomeSpace>,
    blocks: Vec<Event>,
) -> Result<Partition, PartitionError> {
    Partition::new(space, blocks)
}

/// One term of a total-probability decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTerm {
    /// P(A_j)
    pub block: Rational,
    /// P(B ∩ A_j)
    pub joint: Rational,
    /// P(B | A_j), undefined when P(A_j) = 0
    pub conditional: Option<Rational>,
}

impl BlockTerm {
    /// P(B | A_j) · P(A_j), or zero for a null block.
    pub fn weighted(&self) -> Rational {
        match &self.conditional {
            Some(c) => c * &self.block,
            None => Rational::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalProbability {
    pub total: Rational,
    pub terms: Vec<BlockTerm>,
}

/// P(B) = Σ_j P(B | A_j) P(A_j), reported block by block.
///
/// The total is accumulated from the conditional route, so it equals
/// [`Distribution::measure`] only because the law holds; callers can compare
/// the two.
pub fn total_probability(
    dist: &Distribution,
    b: &Event,
    part: &Partition,
) -> Result<TotalProbability, ProbError> {
    if !same_space(dist.space(), part.space()) {
        return Err(ProbError::SpaceMismatch);
    }
    let terms = part
        .blocks()
        .iter()
        .map(|block| {
            let p_block = dist.measure(block)?;
            let joint = dist.measure(&b.intersection(block)?)?;
            let conditional = if p_block.is_zero() {
                None
            } else {
                Some(dist.cond_prob(b, block)?)
            };
            Ok(BlockTerm {
                block: p_block,
                joint,
                conditional,
            })
        })
        .collect::<Result<Vec<_>, ProbError>>()?;
    let total = terms.iter().map(BlockTerm::weighted).sum();
    Ok(TotalProbability { total, terms })
}
