use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::ProbError;
use crate::space::{same_space, OutcomeSpace};

/// A subset of an outcome space, stored as a bitset over its canonical order.
#[derive(Clone)]
pub struct Event {
    space: Arc<OutcomeSpace>,
    members: FixedBitSet,
}

impl Event {
    pub fn empty(space: &Arc<OutcomeSpace>) -> Self {
        Event {
            space: Arc::clone(space),
            members: FixedBitSet::with_capacity(space.len()),
        }
    }

    pub fn full(space: &Arc<OutcomeSpace>) -> Self {
        let mut e = Self::empty(space);
        e.members.insert_range(..);
        e
    }

    pub fn singleton(space: &Arc<OutcomeSpace>, index: usize) -> Result<Self, ProbError> {
        Self::from_indices(space, [index])
    }

    pub fn from_indices<I>(space: &Arc<OutcomeSpace>, indices: I) -> Result<Self, ProbError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut e = Self::empty(space);
        for i in indices {
            if i >= space.len() {
                return Err(ProbError::UnknownOutcome(format!("#{i}")));
            }
            e.members.insert(i);
        }
        Ok(e)
    }

    pub fn from_labels<I, S>(space: &Arc<OutcomeSpace>, labels: I) -> Result<Self, ProbError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let indices = labels
            .into_iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(space, indices)
    }

    /// `{ s | pred(s) }` over outcome indices.
    pub fn from_predicate(space: &Arc<OutcomeSpace>, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut e = Self::empty(space);
        for i in 0..space.len() {
            if pred(i) {
                e.members.insert(i);
            }
        }
        e
    }

    /// `{ s | pred(assignment(s)) }` over a boolean product space.
    pub fn where_assignment(
        space: &Arc<OutcomeSpace>,
        mut pred: impl FnMut(&[bool]) -> bool,
    ) -> Result<Self, ProbError> {
        let mut e = Self::empty(space);
        for i in 0..space.len() {
            if pred(&space.assignment(i)?) {
                e.members.insert(i);
            }
        }
        Ok(e)
    }

    /// Outcomes of a boolean space where `variable` equals `polarity`.
    pub fn variable(
        space: &Arc<OutcomeSpace>,
        variable: &str,
        polarity: bool,
    ) -> Result<Self, ProbError> {
        let j = space.variable_index(variable)?;
        Self::where_assignment(space, |a| a[j] == polarity)
    }

    /// Builds an event from a raw bitset of exactly `space.len()` bits.
    pub fn from_bitset(space: &Arc<OutcomeSpace>, members: FixedBitSet) -> Result<Self, ProbError> {
        if members.len() != space.len() {
            return Err(ProbError::Arity {
                expected: space.len(),
                found: members.len(),
            });
        }
        Ok(Event {
            space: Arc::clone(space),
            members,
        })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.space.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(index)
    }

    /// Member indices in canonical order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices().map(|i| self.space.label(i)).collect()
    }

    fn check(&self, other: &Event) -> Result<(), ProbError> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(ProbError::SpaceMismatch)
        }
    }

    pub fn same_space_as(&self, other: &Event) -> bool {
        self.check(other).is_ok()
    }

    pub fn union(&self, other: &Event) -> Result<Event, ProbError> {
        self.check(other)?;
        let mut e = self.clone();
        e.members.union_with(&other.members);
        Ok(e)
    }

    pub fn intersection(&self, other: &Event) -> Result<Event, ProbError> {
        self.check(other)?;
        let mut e = self.clone();
        e.members.intersect_with(&other.members);
        Ok(e)
    }

    pub fn difference(&self, other: &Event) -> Result<Event, ProbError> {
        self.check(other)?;
        let mut e = self.clone();
        e.members.difference_with(&other.members);
        Ok(e)
    }

    pub fn complement(&self) -> Event {
        let mut e = self.clone();
        e.members.toggle_range(..);
        e
    }

    pub fn is_subset(&self, other: &Event) -> Result<bool, ProbError> {
        self.check(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn is_disjoint(&self, other: &Event) -> Result<bool, ProbError> {
        self.check(other)?;
        Ok(self.members.is_disjoint(&other.members))
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_space(&self.space, &other.space)
    }
}

impl Eq for Event {}

impl Hash for Event {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Arc<OutcomeSpace> {
        OutcomeSpace::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn set_algebra() {
        let s = abc();
        let ab = Event::from_labels(&s, ["a", "b"]).unwrap();
        let bc = Event::from_labels(&s, ["b", "c"]).unwrap();
        assert_eq!(ab.intersection(&bc).unwrap().labels(), ["b"]);
        assert!(ab.union(&bc).unwrap().is_full());
        assert_eq!(ab.difference(&bc).unwrap().labels(), ["a"]);
        assert_eq!(ab.complement().labels(), ["c"]);
        assert!(Event::empty(&s).complement().is_full());
        assert!(!ab.is_disjoint(&bc).unwrap());
        assert!(ab.intersection(&bc).unwrap().is_subset(&ab).unwrap());
    }

    #[test]
    fn mixing_spaces_is_an_error() {
        let s = abc();
        let t = OutcomeSpace::new(["x", "y", "z"]).unwrap();
        let e = Event::full(&s);
        let f = Event::full(&t);
        assert_eq!(e.union(&f).unwrap_err(), ProbError::SpaceMismatch);
        assert_eq!(e.is_subset(&f).unwrap_err(), ProbError::SpaceMismatch);
        assert_ne!(e, f);
    }

    #[test]
    fn structurally_equal_spaces_mix() {
        let e = Event::full(&abc());
        let f = Event::empty(&abc());
        assert!(e.union(&f).is_ok());
    }

    #[test]
    fn unknown_outcomes() {
        let s = abc();
        assert!(Event::from_labels(&s, ["d"]).is_err());
        assert!(Event::singleton(&s, 3).is_err());
    }

    #[test]
    fn variable_events_split_the_cube() {
        let s = OutcomeSpace::boolean(["x", "y", "z"]).unwrap();
        let t = Event::variable(&s, "y", true).unwrap();
        let f = Event::variable(&s, "y", false).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.is_disjoint(&f).unwrap());
        assert!(t.union(&f).unwrap().is_full());
        assert!(Event::variable(&s, "w", true).is_err());
    }
}
