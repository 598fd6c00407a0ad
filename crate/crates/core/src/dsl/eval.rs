//! Evaluation of queries against a parsed model.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::distribution::{make_distribution, Distribution, PriorAssignment};
use crate::error::ProbError;
use crate::event::Event;
use crate::partition::{total_probability, BlockTerm, Partition};
use crate::rational::Rational;
use crate::space::{index_of_bits, OutcomeSpace};

use super::ast::{Blocks, Expr, Ident, ModelFile, Query, QueryKind, Span};
use super::emit::{emit_blocks, emit_expr};
use super::parser::check_query;
use super::{Diagnostic, Diagnostics};

/// A model turned into a distribution plus its named events.
#[derive(Clone, Debug)]
pub struct CompiledModel {
    model: ModelFile,
    dist: Distribution,
    events: HashMap<String, Event>,
}

impl CompiledModel {
    pub fn new(model: &ModelFile) -> Result<Self, Diagnostics> {
        let located =
            |e: ProbError| Diagnostics(vec![Diagnostic::new(model.prior_span, e.to_string())]);
        let space = OutcomeSpace::boolean(model.var_names()).map_err(located)?;
        let default = model.default.clone().unwrap_or_default();
        let mut weights = vec![default; space.len()];
        for row in &model.rows {
            if row.pattern.len() != model.vars.len() {
                return Err(Diagnostics(vec![Diagnostic::new(
                    row.span,
                    "pattern arity mismatch",
                )]));
            }
            weights[index_of_bits(&row.pattern)] = row.weight.clone();
        }
        let prior = PriorAssignment::new(&space, weights).map_err(located)?;
        let dist = make_distribution(prior).map_err(located)?;
        let mut compiled = CompiledModel {
            model: model.clone(),
            dist,
            events: HashMap::new(),
        };
        for def in &model.events {
            let ev = compiled
                .event(&def.expr)
                .map_err(|d| Diagnostics(vec![d]))?;
            compiled.events.insert(def.name.name.clone(), ev);
        }
        Ok(compiled)
    }

    pub fn model(&self) -> &ModelFile {
        &self.model
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        self.dist.space()
    }

    pub fn named_event(&self, name: &str) -> Option<&Event> {
        self.events.get(name)
    }

    /// The set of outcomes satisfying `expr`.
    pub fn event(&self, expr: &Expr) -> Result<Event, Diagnostic> {
        let space = self.space();
        Ok(match expr {
            Expr::Const(true) => Event::full(space),
            Expr::Const(false) => Event::empty(space),
            Expr::Ref(id) => self.resolve(id)?,
            Expr::Not(e) => self.event(e)?.complement(),
            Expr::And(a, b) => self
                .event(a)?
                .intersection(&self.event(b)?)
                .map_err(internal)?,
            Expr::Or(a, b) => self.event(a)?.union(&self.event(b)?).map_err(internal)?,
            Expr::Eq(a, b) | Expr::Ne(a, b) => {
                let (a, b) = (self.event(a)?, self.event(b)?);
                // a == b  is  (a ∩ b) ∪ (¬a ∩ ¬b)
                let same = a
                    .intersection(&b)
                    .and_then(|both| both.union(&a.complement().intersection(&b.complement())?))
                    .map_err(internal)?;
                if matches!(expr, Expr::Eq(..)) {
                    same
                } else {
                    same.complement()
                }
            }
        })
    }

    fn resolve(&self, id: &Ident) -> Result<Event, Diagnostic> {
        if let Some(ev) = self.events.get(&id.name) {
            return Ok(ev.clone());
        }
        Event::variable(self.space(), &id.name, true).map_err(|_| {
            Diagnostic::new(
                id.span,
                format!("undeclared variable or event `{}`", id.name),
            )
        })
    }

    fn partition(
        &self,
        blocks: &Blocks,
        span: Span,
    ) -> Result<(Partition, Vec<String>), Diagnostic> {
        match blocks {
            Blocks::List(list) => {
                let events = list
                    .iter()
                    .map(|e| self.event(e))
                    .collect::<Result<Vec<_>, _>>()?;
                let labels = list.iter().map(emit_expr).collect();
                let part = Partition::new(self.space(), events)
                    .map_err(|e| Diagnostic::new(span, format!("invalid partition: {e}")))?;
                Ok((part, labels))
            }
            Blocks::Signs(vars) => {
                let names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
                let part = Partition::by_signs(self.space(), &names)
                    .map_err(|e| Diagnostic::new(span, e.to_string()))?;
                let k = names.len();
                let labels = (0..part.len())
                    .map(|p| {
                        let lits: Vec<String> = names
                            .iter()
                            .enumerate()
                            .map(|(j, n)| {
                                if (p >> (k - 1 - j)) & 1 == 0 {
                                    n.to_string()
                                } else {
                                    format!("!{n}")
                                }
                            })
                            .collect();
                        lits.join(" & ")
                    })
                    .collect();
                Ok((part, labels))
            }
        }
    }
}

fn internal(e: ProbError) -> Diagnostic {
    Diagnostic::new(Span::default(), e.to_string())
}

/// One row of a total-probability breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport {
    pub label: String,
    pub term: BlockTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryResult {
    Probability(Rational),
    Total {
        value: Rational,
        blocks: Vec<BlockReport>,
    },
    /// A partition check that succeeded.
    Partition {
        blocks: usize,
    },
}

impl QueryResult {
    /// The probability computed, if the query asked for one.
    pub fn value(&self) -> Option<&Rational> {
        match self {
            QueryResult::Probability(v) | QueryResult::Total { value: v, .. } => Some(v),
            QueryResult::Partition { .. } => None,
        }
    }

    /// `p/q (d.dddddd)`, followed for decompositions by a per-block table.
    pub fn render(&self, places: usize) -> String {
        match self {
            QueryResult::Probability(v) => format!("{}\n", with_decimal(v, places)),
            QueryResult::Partition { blocks } => format!("valid partition, {blocks} blocks\n"),
            QueryResult::Total { value, blocks } => {
                let mut out = format!("{}\n", with_decimal(value, places));
                let header = ["block", "P(A_j)", "P(E & A_j)", "P(E | A_j)"];
                let rows: Vec<[String; 4]> = blocks
                    .iter()
                    .map(|b| {
                        [
                            b.label.clone(),
                            b.term.block.to_string(),
                            b.term.joint.to_string(),
                            b.term
                                .conditional
                                .as_ref()
                                .map_or_else(|| "undefined".to_string(), Rational::to_string),
                        ]
                    })
                    .collect();
                let mut widths = header.map(|h| h.chars().count());
                for r in &rows {
                    for (w, cell) in widths.iter_mut().zip(r) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: [&str; 4], out: &mut String| {
                    let mut s = String::new();
                    for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
                        if i > 0 {
                            s.push_str("  ");
                        }
                        let _ = write!(s, "{cell:<w$}");
                    }
                    out.push_str(s.trim_end());
                    out.push('\n');
                };
                line(header, &mut out);
                for r in &rows {
                    line([&r[0], &r[1], &r[2], &r[3]], &mut out);
                }
                out
            }
        }
    }
}

/// `3/4 (0.750000)`: the exact value, then a rounded decimal in parentheses.
pub fn with_decimal(v: &Rational, places: usize) -> String {
    format!("{v} ({})", v.to_decimal(places))
}

/// Evaluates `query`; failures carry the query's location.
pub fn eval_query(model: &CompiledModel, query: &Query) -> Result<QueryResult, Diagnostics> {
    let vars = model.model.var_names();
    let events: Vec<&str> = model
        .model
        .events
        .iter()
        .map(|e| e.name.name.as_str())
        .collect();
    let problems = check_query(&vars, &events, query);
    if !problems.is_empty() {
        return Err(Diagnostics(problems));
    }
    let at_query = |e: ProbError| Diagnostics(vec![Diagnostic::new(query.span, e.to_string())]);
    let one = |d: Diagnostic| Diagnostics(vec![d]);
    let dist = &model.dist;
    match &query.kind {
        QueryKind::Marginal(e) => {
            let ev = model.event(e).map_err(one)?;
            Ok(QueryResult::Probability(
                dist.measure(&ev).map_err(at_query)?,
            ))
        }
        QueryKind::Conditional(e, f) => {
            let a = model.event(e).map_err(one)?;
            let b = model.event(f).map_err(one)?;
            match dist.cond_prob(&a, &b) {
                Ok(v) => Ok(QueryResult::Probability(v)),
                Err(ProbError::NullConditioning) => Err(one(Diagnostic::new(
                    query.span,
                    format!(
                        "cannot condition on `{}`: it has probability zero",
                        emit_expr(f)
                    ),
                ))),
                Err(e) => Err(at_query(e)),
            }
        }
        QueryKind::Total { target, blocks } => {
            let b = model.event(target).map_err(one)?;
            let (part, labels) = model.partition(blocks, query.span).map_err(one)?;
            let tp = total_probability(dist, &b, &part).map_err(at_query)?;
            Ok(QueryResult::Total {
                value: tp.total,
                blocks: labels
                    .into_iter()
                    .zip(tp.terms)
                    .map(|(label, term)| BlockReport { label, term })
                    .collect(),
            })
        }
        QueryKind::Partition(blocks) => {
            let (part, _) = model.partition(blocks, query.span).map_err(|d| {
                one(Diagnostic::new(
                    d.span,
                    format!("{} (in `{}`)", d.message, emit_blocks(blocks)),
                ))
            })?;
            Ok(QueryResult::Partition { blocks: part.len() })
        }
    }
}
