use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::ProbError;

/// Upper bound on the number of variables of a boolean product space.
pub const MAX_BOOLEAN_VARIABLES: usize = 24;

/// A finite, nonempty, ordered set of distinct outcomes.
///
/// Spaces are shared behind an `Arc`; events and priors keep a handle to the
/// space they were built over and refuse to mix with other spaces.
#[derive(Clone)]
pub struct OutcomeSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    variables: Option<Vec<String>>,
}

impl OutcomeSpace {
    /// A space enumerating `labels` in the given order.
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>, ProbError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        Self::build(labels, None).map(Arc::new)
    }

    /// The product space of boolean `variables`, enumerated lexicographically
    /// with `false < true` and the first variable most significant.
    pub fn boolean<I, S>(variables: I) -> Result<Arc<Self>, ProbError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        if variables.len() > MAX_BOOLEAN_VARIABLES {
            return Err(ProbError::TooLarge {
                size: variables.len(),
                limit: MAX_BOOLEAN_VARIABLES,
            });
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(ProbError::DuplicateOutcome(v.clone()));
            }
        }
        let n = variables.len();
        let labels = (0..1usize << n)
            .map(|i| format_assignment(&bits_of(i, n)))
            .collect();
        Self::build(labels, Some(variables)).map(Arc::new)
    }

    fn build(labels: Vec<String>, variables: Option<Vec<String>>) -> Result<Self, ProbError> {
        if labels.is_empty() {
            return Err(ProbError::EmptySpace);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(ProbError::DuplicateOutcome(label.clone()));
            }
        }
        Ok(OutcomeSpace {
            labels,
            index,
            variables,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; spaces have at least one outcome.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ProbError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| ProbError::UnknownOutcome(label.to_string()))
    }

    /// Variable names when this is a boolean product space.
    pub fn variables(&self) -> Option<&[String]> {
        self.variables.as_deref()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize, ProbError> {
        let vars = self.variables.as_ref().ok_or(ProbError::NotBooleanSpace)?;
        vars.iter()
            .position(|v| v == name)
            .ok_or_else(|| ProbError::UnknownVariable(name.to_string()))
    }

    /// The boolean assignment of outcome `index` (boolean spaces only).
    pub fn assignment(&self, index: usize) -> Result<Vec<bool>, ProbError> {
        let n = self
            .variables
            .as_ref()
            .ok_or(ProbError::NotBooleanSpace)?
            .len();
        Ok(bits_of(index, n))
    }

    pub fn index_of_assignment(&self, values: &[bool]) -> Result<usize, ProbError> {
        let n = self
            .variables
            .as_ref()
            .ok_or(ProbError::NotBooleanSpace)?
            .len();
        if values.len() != n {
            return Err(ProbError::Arity {
                expected: n,
                found: values.len(),
            });
        }
        Ok(index_of_bits(values))
    }
}

impl PartialEq for OutcomeSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.variables == other.variables
    }
}

impl Eq for OutcomeSpace {}

impl fmt::Debug for OutcomeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.variables {
            Some(vars) => write!(f, "OutcomeSpace(bool {vars:?})"),
            None => write!(f, "OutcomeSpace({:?})", self.labels),
        }
    }
}

/// Whether two space handles denote the same space.
pub(crate) fn same_space(a: &Arc<OutcomeSpace>, b: &Arc<OutcomeSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Canonical index to assignment: bit `n - 1 - j` of `index` is variable `j`.
pub fn bits_of(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| (index >> (n - 1 - j)) & 1 == 1).collect()
}

pub fn index_of_bits(values: &[bool]) -> usize {
    values.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

/// `(T,F,F,T)` style label.
pub fn format_assignment(values: &[bool]) -> String {
    let inner: Vec<&str> = values.iter().map(|&b| if b { "T" } else { "F" }).collect();
    format!("({})", inner.join(","))
}
