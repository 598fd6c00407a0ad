//! Intercept-resend: Eve measures every photon in a random basis and resends
//! her result to Bob, encoded in the basis she measured in.

use std::sync::Arc;

use crate::distribution::{make_distribution, PriorAssignment};
use crate::dsl::{parse_query, ModelFile};
use crate::error::ProbError;
use crate::event::Event;
use crate::rational::Rational;
use crate::space::OutcomeSpace;
use crate::tree::{build_tree, BranchRule, ProtocolTree};

use super::measurement_rule;

/// Variable names in protocol order.
pub const EVE_VARIABLES: [&str; 6] = ["AsOne", "AchX", "EchX", "EmOne", "BchX", "BmOne"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EveOutcome {
    pub as_one: bool,
    pub ach_x: bool,
    pub ech_x: bool,
    pub em_one: bool,
    pub bch_x: bool,
    pub bm_one: bool,
}

impl EveOutcome {
    pub fn from_bits(b: &[bool]) -> Self {
        EveOutcome {
            as_one: b[0],
            ach_x: b[1],
            ech_x: b[2],
            em_one: b[3],
            bch_x: b[4],
            bm_one: b[5],
        }
    }

    pub fn bits(self) -> [bool; 6] {
        [
            self.as_one,
            self.ach_x,
            self.ech_x,
            self.em_one,
            self.bch_x,
            self.bm_one,
        ]
    }
}

pub fn eve_rules() -> Vec<BranchRule> {
    vec![
        BranchRule::fair("AsOne"),
        BranchRule::fair("AchX"),
        BranchRule::fair("EchX"),
        // Eve measures Alice's photon
        BranchRule::new("EmOne", |p: &[bool]| measurement_rule(p[1], p[0], p[2])),
        BranchRule::fair("BchX"),
        // Bob measures Eve's resent photon
        BranchRule::new("BmOne", |p: &[bool]| measurement_rule(p[2], p[3], p[4])),
    ]
}

pub fn eve_tree() -> ProtocolTree {
    build_tree(&eve_rules()).expect("intercept-resend rules are well formed")
}

/// The 64-outcome space and its prior.
pub fn eve_space_and_prior() -> (Arc<OutcomeSpace>, PriorAssignment) {
    let space = OutcomeSpace::boolean(EVE_VARIABLES).expect("six distinct variables");
    let prior = eve_tree()
        .to_prior(&space)
        .expect("tree matches its own variables");
    (space, prior)
}

/// Sifting and error rates under intercept-resend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterceptResendStats {
    /// P(AchX = BchX)
    pub sifted_prob: Rational,
    /// P(BmOne ≠ AsOne | AchX = BchX)
    pub sifted_qber: Rational,
    /// P(EmOne = AsOne | AchX = BchX)
    pub eve_correct_given_sift: Rational,
}

pub fn intercept_resend_stats() -> Result<InterceptResendStats, ProbError> {
    let (space, prior) = eve_space_and_prior();
    let dist = make_distribution(prior)?;
    let sifted = Event::where_assignment(&space, |a| {
        let o = EveOutcome::from_bits(a);
        o.ach_x == o.bch_x
    })?;
    let bob_wrong = Event::where_assignment(&space, |a| {
        let o = EveOutcome::from_bits(a);
        o.bm_one != o.as_one
    })?;
    let eve_right = Event::where_assignment(&space, |a| {
        let o = EveOutcome::from_bits(a);
        o.em_one == o.as_one
    })?;
    Ok(InterceptResendStats {
        sifted_prob: dist.measure(&sifted)?,
        sifted_qber: dist.cond_prob(&bob_wrong, &sifted)?,
        eve_correct_given_sift: dist.cond_prob(&eve_right, &sifted)?,
    })
}

/// The 64-row table as an `.fpm` model; zero rows go to the `default` row.
pub fn eve_model_file() -> ModelFile {
    let (_, prior) = eve_space_and_prior();
    let queries = [
        "P(AchX == BchX)",
        "P(BmOne != AsOne | AchX == BchX)",
        "P(EmOne == AsOne | AchX == BchX)",
    ]
    .map(|q| parse_query(q).expect("built-in query parses"));
    ModelFile::from_prior(&prior, Some(Rational::zero()), Vec::new(), queries.to_vec())
        .expect("Eve space is boolean")
}
