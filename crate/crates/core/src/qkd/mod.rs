//! The first phase of BB84 as a 16-outcome probability space.
//!
//! An outcome records four protocol choices, in protocol order: whether Alice
//! sends a 1, whether Alice and Bob each chose the diagonal basis, and whether
//! Bob measured a 1.

pub mod eve;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::distribution::{make_distribution, Distribution, PriorAssignment};
use crate::dsl::{parse_query, ModelFile};
use crate::error::ProbError;
use crate::event::Event;
use crate::partition::{total_probability, Partition, TotalProbability};
use crate::rational::Rational;
use crate::space::OutcomeSpace;
use crate::tree::{build_tree, BranchRule, ProtocolTree};

pub use eve::{
    eve_model_file, eve_space_and_prior, eve_tree, intercept_resend_stats, EveOutcome,
    InterceptResendStats,
};

/// The four protocol variables, in outcome-tuple order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QkdVar {
    AsOne,
    AchX,
    BchX,
    BmOne,
}

impl QkdVar {
    pub const ALL: [QkdVar; 4] = [QkdVar::AsOne, QkdVar::AchX, QkdVar::BchX, QkdVar::BmOne];

    pub fn name(self) -> &'static str {
        match self {
            QkdVar::AsOne => "AsOne",
            QkdVar::AchX => "AchX",
            QkdVar::BchX => "BchX",
            QkdVar::BmOne => "BmOne",
        }
    }
}

impl fmt::Display for QkdVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QkdVar {
    type Err = ProbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QkdVar::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| ProbError::UnknownVariable(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QkdOutcome {
    pub as_one: bool,
    pub ach_x: bool,
    pub bch_x: bool,
    pub bm_one: bool,
}

impl QkdOutcome {
    pub fn from_bits(b: [bool; 4]) -> Self {
        QkdOutcome {
            as_one: b[0],
            ach_x: b[1],
            bch_x: b[2],
            bm_one: b[3],
        }
    }

    pub fn bits(self) -> [bool; 4] {
        [self.as_one, self.ach_x, self.bch_x, self.bm_one]
    }

    pub fn get(self, var: QkdVar) -> bool {
        match var {
            QkdVar::AsOne => self.as_one,
            QkdVar::AchX => self.ach_x,
            QkdVar::BchX => self.bch_x,
            QkdVar::BmOne => self.bm_one,
        }
    }

    /// All 16 outcomes in canonical order, `(F,F,F,F)` first.
    pub fn all() -> impl Iterator<Item = QkdOutcome> {
        (0..16usize)
            .map(|i| QkdOutcome::from_bits([i & 8 != 0, i & 4 != 0, i & 2 != 0, i & 1 != 0]))
    }
}

/// Probabilities `(P(measured 1), P(measured 0))` for a photon encoding
/// `bit` in `encoding_basis`, measured in `measuring_basis`.
///
/// Matching bases reproduce the bit; mismatched bases give a fair coin.
pub fn measurement_rule(
    encoding_basis: bool,
    bit: bool,
    measuring_basis: bool,
) -> (Rational, Rational) {
    if encoding_basis == measuring_basis {
        if bit {
            (Rational::one(), Rational::zero())
        } else {
            (Rational::zero(), Rational::one())
        }
    } else {
        (Rational::frac(1, 2), Rational::frac(1, 2))
    }
}

pub fn qkd_space() -> Arc<OutcomeSpace> {
    OutcomeSpace::boolean(QkdVar::ALL.map(QkdVar::name)).expect("four distinct variables")
}

/// Outcome probabilities of the honest protocol, written out row by row.
const QKD_TABLE: [(i64, i64); 16] = [
    (1, 8),  // F F F F
    (0, 1),  // F F F T
    (1, 16), // F F T F
    (1, 16), // F F T T
    (1, 16), // F T F F
    (1, 16), // F T F T
    (1, 8),  // F T T F
    (0, 1),  // F T T T
    (0, 1),  // T F F F
    (1, 8),  // T F F T
    (1, 16), // T F T F
    (1, 16), // T F T T
    (1, 16), // T T F F
    (1, 16), // T T F T
    (0, 1),  // T T T F
    (1, 8),  // T T T T
];

/// The a-priori weight of each of the 16 outcomes.
pub fn qkd_ops() -> PriorAssignment {
    let space = qkd_space();
    PriorAssignment::new(
        &space,
        QKD_TABLE
            .iter()
            .map(|&(n, d)| Rational::frac(n, d))
            .collect(),
    )
    .expect("the QKD table is a valid prior")
}

pub fn qkd_distribution() -> Distribution {
    make_distribution(qkd_ops()).expect("the QKD table is a valid prior")
}

/// Alice's bit, Alice's basis and Bob's basis are fair coins; Bob's result
/// follows [`measurement_rule`].
pub fn qkd_rules() -> Vec<BranchRule> {
    vec![
        BranchRule::fair(QkdVar::AsOne.name()),
        BranchRule::fair(QkdVar::AchX.name()),
        BranchRule::fair(QkdVar::BchX.name()),
        BranchRule::new(QkdVar::BmOne.name(), |p: &[bool]| {
            measurement_rule(p[1], p[0], p[2])
        }),
    ]
}

pub fn qkd_tree() -> ProtocolTree {
    build_tree(&qkd_rules()).expect("QKD rules are well formed")
}

/// `{ s | name(s) = polarity }` over a QKD space.
pub fn named_event(
    space: &Arc<OutcomeSpace>,
    name: &str,
    polarity: bool,
) -> Result<Event, ProbError> {
    let var: QkdVar = name.parse()?;
    Event::variable(space, var.name(), polarity)
}

/// The eight blocks fixed by the signs of `(BchX, AchX, AsOne)`, starting
/// with `BchX ∧ AchX ∧ AsOne` and ending with `¬BchX ∧ ¬AchX ∧ ¬AsOne`.
pub fn partition_a(space: &Arc<OutcomeSpace>) -> Result<Partition, ProbError> {
    Partition::by_signs(space, &["AsOne", "AchX", "BchX"])
}

/// Human-readable description of block `j` of [`partition_a`].
pub fn partition_a_label(j: usize) -> String {
    let lit = |name: &str, negated: bool| {
        if negated {
            format!("¬{name}")
        } else {
            name.to_string()
        }
    };
    // j bits: AsOne (most significant), AchX, BchX; a set bit means negated
    format!(
        "{} ∧ {} ∧ {}",
        lit("BchX", j & 1 != 0),
        lit("AchX", j & 2 != 0),
        lit("AsOne", j & 4 != 0)
    )
}

/// P(BmOne), decomposed over [`partition_a`] by the law of total probability.
pub fn p_b_measures_one() -> Result<TotalProbability, ProbError> {
    let dist = qkd_distribution();
    let space = dist.space().clone();
    let bm_one = named_event(&space, "BmOne", true)?;
    total_probability(&dist, &bm_one, &partition_a(&space)?)
}

/// The quantities of the honest-protocol security argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecurityReport {
    /// P(BmOne)
    pub p_bm_one: Rational,
    /// P(AsOne ∩ BmOne)
    pub joint: Rational,
    /// P(AsOne | BmOne)
    pub posterior: Rational,
    /// 1 − P(AsOne | BmOne)
    pub error: Rational,
}

pub fn p_a_sent_one_given_b_measured_one() -> Result<SecurityReport, ProbError> {
    let dist = qkd_distribution();
    let space = dist.space().clone();
    let as_one = named_event(&space, "AsOne", true)?;
    let bm_one = named_event(&space, "BmOne", true)?;
    let posterior = dist.cond_prob(&as_one, &bm_one)?;
    Ok(SecurityReport {
        p_bm_one: dist.measure(&bm_one)?,
        joint: dist.measure(&as_one.intersection(&bm_one)?)?,
        error: Rational::one() - &posterior,
        posterior,
    })
}

/// The 16-row table as an `.fpm` model with the security queries attached.
pub fn qkd_model_file() -> ModelFile {
    let queries = [
        "P(BmOne)",
        "P(AsOne | BmOne)",
        "total P(BmOne) by signs(AsOne, AchX, BchX)",
    ]
    .map(|q| parse_query(q).expect("built-in query parses"));
    ModelFile::from_prior(&qkd_ops(), None, Vec::new(), queries.to_vec())
        .expect("QKD space is boolean")
}
