//! Canonical text form of a model.
//!
//! Sections appear in the order `vars`, `prior`, `events`, `queries`, with a
//! blank line between them and entries indented by two spaces. Prior rows are
//! written in canonical outcome order, followed by the `default` row if any.
//! Expressions use `!`, `&`, `||`, `==`, `!=` with the fewest parentheses
//! that preserve the tree.

use std::fmt::Write as _;

use crate::space::index_of_bits;

use super::ast::{Blocks, Expr, ModelFile, Query, QueryKind};

pub fn emit_model(model: &ModelFile) -> String {
    let mut out = String::new();
    out.push_str("vars:");
    for v in &model.vars {
        out.push(' ');
        out.push_str(&v.name);
    }
    out.push_str("\n\nprior:\n");
    let mut rows: Vec<_> = model.rows.iter().collect();
    rows.sort_by_key(|r| index_of_bits(&r.pattern));
    for row in rows {
        out.push(' ');
        for &b in &row.pattern {
            out.push_str(if b { " T" } else { " F" });
        }
        let _ = writeln!(out, " -> {}", row.weight);
    }
    if let Some(d) = &model.default {
        let _ = writeln!(out, "  default {d}");
    }
    if !model.events.is_empty() {
        out.push_str("\nevents:\n");
        for e in &model.events {
            let _ = writeln!(out, "  {} = {}", e.name.name, emit_expr(&e.expr));
        }
    }
    if !model.queries.is_empty() {
        out.push_str("\nqueries:\n");
        for q in &model.queries {
            let _ = writeln!(out, "  {}", emit_query(q));
        }
    }
    out
}

pub fn emit_query(query: &Query) -> String {
    match &query.kind {
        QueryKind::Marginal(e) => format!("P({})", emit_expr(e)),
        QueryKind::Conditional(e, f) => format!("P({} | {})", emit_expr(e), emit_expr(f)),
        QueryKind::Total { target, blocks } => {
            format!("total P({}) by {}", emit_expr(target), emit_blocks(blocks))
        }
        QueryKind::Partition(blocks) => format!("partition {}", emit_blocks(blocks)),
    }
}

pub fn emit_blocks(blocks: &Blocks) -> String {
    match blocks {
        Blocks::List(list) => {
            let items: Vec<String> = list.iter().map(emit_expr).collect();
            format!("{{{}}}", items.join(", "))
        }
        Blocks::Signs(vars) => {
            let names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
            format!("signs({})", names.join(", "))
        }
    }
}

const OR: u8 = 1;
const AND: u8 = 2;
const EQ: u8 = 3;
const NOT: u8 = 4;

pub fn emit_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, 0, &mut out);
    out
}

fn write_expr(e: &Expr, min_prec: u8, out: &mut String) {
    let binary = |op: &str, prec: u8, a: &Expr, b: &Expr, out: &mut String| {
        let wrap = prec < min_prec;
        if wrap {
            out.push('(');
        }
        // left-associative: only the right operand needs a tighter bound
        write_expr(a, prec, out);
        out.push_str(op);
        write_expr(b, prec + 1, out);
        if wrap {
            out.push(')');
        }
    };
    match e {
        Expr::Const(b) => out.push_str(if *b { "true" } else { "false" }),
        Expr::Ref(id) => out.push_str(&id.name),
        Expr::Not(inner) => {
            out.push('!');
            write_expr(inner, NOT, out);
        }
        Expr::Or(a, b) => binary(" || ", OR, a, b, out),
        Expr::And(a, b) => binary(" & ", AND, a, b, out),
        Expr::Eq(a, b) => binary(" == ", EQ, a, b, out),
        Expr::Ne(a, b) => binary(" != ", EQ, a, b, out),
    }
}
