//! Prior weights, the summation measure built from them, and conditioning.

use std::sync::Arc;

use crate::error::ProbError;
use crate::event::Event;
use crate::rational::Rational;
use crate::space::{same_space, OutcomeSpace};

/// Per-outcome weights: nonnegative and summing to exactly one.
#[derive(Clone, PartialEq, Eq)]
pub struct PriorAssignment {
    space: Arc<OutcomeSpace>,
    weights: Vec<Rational>,
}

impl PriorAssignment {
    /// Validates `weights`, listed in the space's canonical order.
    pub fn new(space: &Arc<OutcomeSpace>, weights: Vec<Rational>) -> Result<Self, ProbError> {
        if weights.len() != space.len() {
            return Err(ProbError::PriorLength {
                expected: space.len(),
                found: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(Rational::is_negative) {
            return Err(ProbError::NegativeWeight {
                outcome: space.label(i).to_string(),
                weight: weights[i].clone(),
            });
        }
        let sum: Rational = weights.iter().sum();
        if !sum.is_one() {
            return Err(ProbError::PriorSum { sum });
        }
        Ok(PriorAssignment {
            space: Arc::clone(space),
            weights,
        })
    }

    pub fn from_fn(
        space: &Arc<OutcomeSpace>,
        weight: impl FnMut(usize) -> Rational,
    ) -> Result<Self, ProbError> {
        Self::new(space, (0..space.len()).map(weight).collect())
    }

    pub fn uniform(space: &Arc<OutcomeSpace>) -> Self {
        let w = Rational::frac(1, space.len() as i64);
        Self::new(space, vec![w; space.len()]).expect("uniform weights sum to one")
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn weight(&self, index: usize) -> &Rational {
        &self.weights[index]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

impl std::fmt::Debug for PriorAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.space.labels().iter().zip(&self.weights))
            .finish()
    }
}

/// Lifts outcome weights to an event measure: the sum of the weights of the
/// event's members, folded from zero.
pub fn pmap(prior: &PriorAssignment, event: &Event) -> Result<Rational, ProbError> {
    if !same_space(&prior.space, event.space()) {
        return Err(ProbError::SpaceMismatch);
    }
    Ok(event
        .indices()
        .fold(Rational::zero(), |acc, i| acc + &prior.weights[i]))
}

/// A probability distribution over the full powerset of a finite space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Distribution {
    prior: PriorAssignment,
}

/// Builds the distribution whose measure is [`pmap`] of `prior`.
///
/// Positivity and normalisation are checked here. Finite additivity holds
/// because the measure is a sum over disjoint member sets.
pub fn make_distribution(prior: PriorAssignment) -> Result<Distribution, ProbError> {
    // P(A) >= 0 for every A reduces to nonnegative weights.
    if let Some(i) = prior.weights.iter().position(Rational::is_negative) {
        return Err(ProbError::NegativeWeight {
            outcome: prior.space.label(i).to_string(),
            weight: prior.weights[i].clone(),
        });
    }
    // P(Ω) = 1
    let total = pmap(&prior, &Event::full(&prior.space))?;
    if !total.is_one() {
        return Err(ProbError::PriorSum { sum: total });
    }
    Ok(Distribution { prior })
}

impl Distribution {
    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.prior.space
    }

    pub fn prior(&self) -> &PriorAssignment {
        &self.prior
    }

    /// P(A).
    pub fn measure(&self, event: &Event) -> Result<Rational, ProbError> {
        pmap(&self.prior, event)
    }

    /// P(A | B) = P(A ∩ B) / P(B); refuses a null `b`.
    pub fn cond_prob(&self, a: &Event, b: &Event) -> Result<Rational, ProbError> {
        let pb = self.measure(b)?;
        if pb.is_zero() {
            return Err(ProbError::NullConditioning);
        }
        let joint = self.measure(&a.intersection(b)?)?;
        joint.checked_div(&pb)
    }

    /// Posterior of `hypothesis` after observing `evidence`.
    pub fn bayes_posterior(
        &self,
        hypothesis: &Event,
        evidence: &Event,
    ) -> Result<Rational, ProbError> {
        self.cond_prob(hypothesis, evidence)
    }
}
