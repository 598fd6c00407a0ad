//! Event families: the powerset and the closure test for probability spaces.

use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::ProbError;
use crate::event::Event;
use crate::space::{same_space, OutcomeSpace};

/// Default cap on the outcome count for [`powerset_space`].
pub const DEFAULT_POWERSET_LIMIT: usize = 20;

/// All `2^|Ω|` events of `space`, in binary-counter order over the outcome
/// indices (bit `i` of the counter is outcome `i`).
pub fn powerset_space(space: &Arc<OutcomeSpace>) -> Result<Vec<Event>, ProbError> {
    powerset_space_with_limit(space, DEFAULT_POWERSET_LIMIT)
}

pub fn powerset_space_with_limit(
    space: &Arc<OutcomeSpace>,
    limit: usize,
) -> Result<Vec<Event>, ProbError> {
    let n = space.len();
    if n > limit || n >= usize::BITS as usize {
        return Err(ProbError::TooLarge { size: n, limit });
    }
    Ok((0..1usize << n)
        .map(|mask| Event::from_predicate(space, |i| (mask >> i) & 1 == 1))
        .collect())
}

/// Whether `family` contains ∅ and Ω and is closed under pairwise union and
/// complement.
///
/// Rather than testing all pairs, outcomes are grouped into atoms: two
/// outcomes share an atom when no member of the family separates them. Every
/// member is then a union of atoms, and the family is closed exactly when it
/// holds all `2^atoms` such unions.
pub fn is_prob_space(family: &[Event], space: &Arc<OutcomeSpace>) -> Result<bool, ProbError> {
    if family.iter().any(|e| !same_space(space, e.space())) {
        return Err(ProbError::SpaceMismatch);
    }
    let distinct: HashSet<&FixedBitSet> = family.iter().map(Event::bits).collect();
    let members: Vec<&FixedBitSet> = distinct.into_iter().collect();

    // signature[x] = which members contain outcome x
    let mut atoms: HashSet<FixedBitSet> = HashSet::new();
    for x in 0..space.len() {
        let mut signature = FixedBitSet::with_capacity(members.len());
        for (k, m) in members.iter().enumerate() {
            if m.contains(x) {
                signature.insert(k);
            }
        }
        atoms.insert(signature);
    }
    let atom_count = atoms.len() as u32;
    Ok(match 1u128.checked_shl(atom_count) {
        Some(expected) => members.len() as u128 == expected,
        None => false,
    })
}
