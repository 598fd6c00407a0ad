//! Binary protocol trees with rational edge probabilities.
//!
//! Each level of the tree branches on one boolean variable. The probability of
//! taking the `true` edge may depend on every choice made above it, which is
//! what lets a measurement step depend on earlier basis choices.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::distribution::PriorAssignment;
use crate::error::ProbError;
use crate::rational::Rational;
use crate::space::{bits_of, format_assignment, index_of_bits, OutcomeSpace};

/// Upper bound on tree depth; the leaf table has `2^levels` entries.
pub const MAX_TREE_LEVELS: usize = 20;

type EdgeFn = dyn Fn(&[bool]) -> (Rational, Rational) + Send + Sync;

/// One level of a protocol tree: a variable name and the probabilities of its
/// `(true, false)` edges as a function of the path prefix.
#[derive(Clone)]
pub struct BranchRule {
    name: String,
    edges: Arc<EdgeFn>,
}

impl BranchRule {
    pub fn new<F>(name: impl Into<String>, edges: F) -> Self
    where
        F: Fn(&[bool]) -> (Rational, Rational) + Send + Sync + 'static,
    {
        BranchRule {
            name: name.into(),
            edges: Arc::new(edges),
        }
    }

    /// A level whose `true` edge has probability `p` regardless of the prefix.
    pub fn independent(name: impl Into<String>, p: Rational) -> Self {
        let q = Rational::one() - &p;
        Self::new(name, move |_| (p.clone(), q.clone()))
    }

    pub fn fair(name: impl Into<String>) -> Self {
        Self::independent(name, Rational::frac(1, 2))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn edges(&self, prefix: &[bool]) -> (Rational, Rational) {
        (self.edges)(prefix)
    }
}

impl fmt::Debug for BranchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BranchRule")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// A fully materialised protocol tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolTree {
    names: Vec<String>,
    /// `edges[level][prefix index]` = (P(true), P(false)) at that node.
    edges: Vec<Vec<(Rational, Rational)>>,
    /// Leaf probabilities in canonical assignment order.
    leaves: Vec<Rational>,
}

/// Evaluates every rule on every prefix and multiplies out the leaves.
pub fn build_tree(rules: &[BranchRule]) -> Result<ProtocolTree, ProbError> {
    if rules.len() > MAX_TREE_LEVELS {
        return Err(ProbError::TooLarge {
            size: rules.len(),
            limit: MAX_TREE_LEVELS,
        });
    }
    let mut edges = Vec::with_capacity(rules.len());
    // probability of reaching each node of the current level
    let mut reach = vec![Rational::one()];
    for (level, rule) in rules.iter().enumerate() {
        let mut level_edges = Vec::with_capacity(1 << level);
        let mut next = Vec::with_capacity(2 << level);
        for (p, reach_p) in reach.iter().enumerate() {
            let prefix = bits_of(p, level);
            let (t, f) = rule.edges(&prefix);
            if t.is_negative() || f.is_negative() || !(&t + &f).is_one() {
                return Err(ProbError::EdgeProbabilities {
                    level: rule.name.clone(),
                    prefix: format_assignment(&prefix),
                    edges: Box::new((t, f)),
                });
            }
            // child index p*2 + bit: false child first in canonical order
            next.push(reach_p * &f);
            next.push(reach_p * &t);
            level_edges.push((t, f));
        }
        edges.push(level_edges);
        reach = next;
    }
    Ok(ProtocolTree {
        names: rules.iter().map(|r| r.name.clone()).collect(),
        edges,
        leaves: reach,
    })
}

impl ProtocolTree {
    pub fn levels(&self) -> usize {
        self.names.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    /// Leaf probabilities in canonical assignment order.
    pub fn leaves(&self) -> &[Rational] {
        &self.leaves
    }

    /// The product of edge probabilities along the path `assignment`.
    pub fn leaf_probability(&self, assignment: &[bool]) -> Result<Rational, ProbError> {
        if assignment.len() != self.levels() {
            return Err(ProbError::Arity {
                expected: self.levels(),
                found: assignment.len(),
            });
        }
        Ok(self.leaves[index_of_bits(assignment)].clone())
    }

    /// (P(true), P(false)) at the node reached by `prefix`.
    pub fn edge(&self, prefix: &[bool]) -> Result<&(Rational, Rational), ProbError> {
        if prefix.len() >= self.levels() {
            return Err(ProbError::Arity {
                expected: self.levels().saturating_sub(1),
                found: prefix.len(),
            });
        }
        Ok(&self.edges[prefix.len()][index_of_bits(prefix)])
    }

    /// Leaf weights as a prior over `space`, which must be the boolean product
    /// space of the tree's variables.
    pub fn to_prior(&self, space: &Arc<OutcomeSpace>) -> Result<PriorAssignment, ProbError> {
        let vars = space.variables().ok_or(ProbError::NotBooleanSpace)?;
        if vars.len() != self.levels() {
            return Err(ProbError::Arity {
                expected: self.levels(),
                found: vars.len(),
            });
        }
        if let Some(v) = vars.iter().zip(&self.names).find(|(v, n)| v != n) {
            return Err(ProbError::UnknownVariable(v.0.clone()));
        }
        PriorAssignment::new(space, self.leaves.clone())
    }

    /// Indented listing, `true` branch before `false` branch at every node:
    ///
    /// ```text
    /// x=T [1/2]
    ///   y=T [1/2] => 1/4
    /// ```
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut path = Vec::with_capacity(self.levels());
        self.render_node(&mut path, &mut out);
        out
    }

    fn render_node(&self, path: &mut Vec<bool>, out: &mut String) {
        let level = path.len();
        if level == self.levels() {
            return;
        }
        let (t, f) = &self.edges[level][index_of_bits(path)];
        for (value, p) in [(true, t), (false, f)] {
            path.push(value);
            let indent = "  ".repeat(level);
            let mark = if value { 'T' } else { 'F' };
            let _ = write!(out, "{indent}{}={mark} [{p}]", self.names[level]);
            if path.len() == self.levels() {
                let _ = writeln!(out, " => {}", self.leaves[index_of_bits(path)]);
            } else {
                out.push('\n');
                self.render_node(path, out);
            }
            path.pop();
        }
    }
}
