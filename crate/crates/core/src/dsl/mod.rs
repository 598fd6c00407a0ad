//! The `.fpm` text format for finite boolean models.
//!
//! ```text
//! # two fair coins
//! vars: a b
//!
//! prior:
//!   T T -> 1/4
//!   default 1/4
//!
//! events:
//!   Same = a == b
//!
//! queries:
//!   P(a | Same)
//!   total P(a) by signs(b)
//!   partition {a, !a}
//! ```
//!
//! Patterns list one `T`/`F` (or `1`/`0`) per variable in declaration order.
//! Expressions combine variables and earlier events with `!`, `&`, `||`,
//! `==`, `!=` and parentheses; `not`, `and`, `or` are accepted as spellings.

mod ast;
mod emit;
mod eval;
mod lexer;
mod parser;

use std::fmt;

pub use ast::{Blocks, EventDef, Expr, Ident, ModelFile, PriorRow, Query, QueryKind, Span};
pub use emit::{emit_blocks, emit_expr, emit_model, emit_query};
pub use eval::{eval_query, with_decimal, BlockReport, CompiledModel, QueryResult};
pub use parser::{parse_model, parse_model_bytes, parse_query, MAX_MODEL_VARIABLES};

use crate::distribution::PriorAssignment;
use crate::error::ProbError;
use crate::rational::Rational;

/// A message tied to a source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

/// One or more diagnostics, in source order.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl ModelFile {
    /// A model over the variables of a boolean product space. Outcomes whose
    /// weight equals `default` are left to the `default` row.
    pub fn from_prior(
        prior: &PriorAssignment,
        default: Option<Rational>,
        events: Vec<EventDef>,
        queries: Vec<Query>,
    ) -> Result<Self, ProbError> {
        let space = prior.space();
        let vars = space.variables().ok_or(ProbError::NotBooleanSpace)?;
        let rows = (0..space.len())
            .filter(|&i| default.as_ref() != Some(prior.weight(i)))
            .map(|i| {
                Ok(PriorRow {
                    pattern: space.assignment(i)?,
                    weight: prior.weight(i).clone(),
                    span: Span::default(),
                })
            })
            .collect::<Result<Vec<_>, ProbError>>()?;
        Ok(ModelFile {
            vars: vars.iter().map(|v| Ident::new(v.as_str())).collect(),
            rows,
            default,
            events,
            queries,
            prior_span: Span::default(),
        })
    }
}
