//! Line-oriented parser for `.fpm` models and queries.

use std::collections::HashMap;

use crate::rational::Rational;
use crate::space::{bits_of, index_of_bits};

use super::ast::{Blocks, EventDef, Expr, Ident, ModelFile, PriorRow, Query, QueryKind, Span};
use super::lexer::{describe, lex, Tok, Token};
use super::{Diagnostic, Diagnostics};

/// Most variables a model may declare.
pub const MAX_MODEL_VARIABLES: usize = 20;

/// Deepest nesting of unary operators and parentheses accepted.
const MAX_NESTING: usize = 200;

const RESERVED: [&str; 5] = ["true", "false", "and", "or", "not"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Vars,
    Prior,
    Events,
    Queries,
}

impl Section {
    fn from_name(name: &str) -> Option<Section> {
        match name {
            "vars" => Some(Section::Vars),
            "prior" => Some(Section::Prior),
            "events" => Some(Section::Events),
            "queries" => Some(Section::Queries),
            _ => None,
        }
    }
}

/// Parses and validates a model. Syntax errors are reported for every bad
/// line; semantic checks run only when the syntax is clean.
pub fn parse_model(src: &str) -> Result<ModelFile, Diagnostics> {
    let (raw, mut diags) = parse_syntax(src);
    if diags.is_empty() {
        diags = validate(&raw);
    }
    if diags.is_empty() {
        Ok(canonicalize(raw.model))
    } else {
        diags.sort_by_key(|d| (d.span.line, d.span.column));
        Err(Diagnostics(diags))
    }
}

/// [`parse_model`] over raw bytes; invalid UTF-8 is reported at its position.
pub fn parse_model_bytes(bytes: &[u8]) -> Result<ModelFile, Diagnostics> {
    match std::str::from_utf8(bytes) {
        Ok(src) => parse_model(src),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(Diagnostics(vec![Diagnostic::new(
                Span::new(line, column),
                "input is not valid UTF-8",
            )]))
        }
    }
}

/// Parses a single query, as written on one line of a `queries:` section.
pub fn parse_query(src: &str) -> Result<Query, Diagnostics> {
    let (tokens, mut diags) = lex(src);
    let lines: Vec<&[Token]> = split_lines(&tokens).collect();
    let mut queries = Vec::new();
    for line in &lines {
        if line.iter().any(|t| t.tok == Tok::Invalid) {
            continue;
        }
        match LineParser::new(line).query_line() {
            Ok(q) => queries.push(q),
            Err(d) => diags.push(d),
        }
    }
    if diags.is_empty() && queries.len() != 1 {
        let span = lines.get(1).map_or(Span::new(1, 1), |l| l[0].span);
        let msg = if queries.is_empty() {
            "expected a query"
        } else {
            "expected exactly one query"
        };
        diags.push(Diagnostic::new(span, msg));
    }
    if diags.is_empty() {
        Ok(queries.pop().expect("exactly one query"))
    } else {
        Err(Diagnostics(diags))
    }
}

/// Syntax-level result: the model plus facts validation needs.
struct RawModel {
    model: ModelFile,
    vars_seen: Option<Span>,
    prior_seen: bool,
    default_span: Option<Span>,
}

/// Non-empty token lines, each ending with its newline token.
fn split_lines(tokens: &[Token]) -> impl Iterator<Item = &[Token]> {
    tokens
        .split_inclusive(|t| t.tok == Tok::Newline)
        .filter(|l| l.len() > 1)
}

fn parse_syntax(src: &str) -> (RawModel, Vec<Diagnostic>) {
    let (tokens, mut diags) = lex(src);
    let mut raw = RawModel {
        model: ModelFile::default(),
        vars_seen: None,
        prior_seen: false,
        default_span: None,
    };
    let mut seen: HashMap<&str, Span> = HashMap::new();
    let mut current: Option<Section> = None;

    for line in split_lines(&tokens) {
        if line.iter().any(|t| t.tok == Tok::Invalid) {
            continue;
        }
        let mut p = LineParser::new(line);
        let header = match (&line[0].tok, &line[1].tok) {
            (Tok::Ident(name), Tok::Colon) => Section::from_name(name).map(|s| (s, name.as_str())),
            _ => None,
        };
        let result = if let Some((section, name)) = header {
            let span = line[0].span;
            if let Some(first) = seen.get(name) {
                Err(Diagnostic::new(
                    span,
                    format!("duplicate `{name}:` section (first at {first})"),
                ))
            } else {
                seen.insert(name, span);
                current = Some(section);
                p.pos = 2;
                match section {
                    Section::Vars => {
                        raw.vars_seen = Some(span);
                        p.var_list().map(|vars| raw.model.vars = vars)
                    }
                    Section::Prior => {
                        raw.prior_seen = true;
                        raw.model.prior_span = span;
                        p.expect_end()
                    }
                    _ => p.expect_end(),
                }
            }
        } else {
            match current {
                None => Err(Diagnostic::new(
                    line[0].span,
                    "expected a section header (`vars:`, `prior:`, `events:` or `queries:`)",
                )),
                Some(Section::Vars) => p.var_list().map(|vars| raw.model.vars.extend(vars)),
                Some(Section::Prior) => p.prior_line().and_then(|entry| match entry {
                    PriorEntry::Row(row) => {
                        raw.model.rows.push(row);
                        Ok(())
                    }
                    PriorEntry::Default(w, span) => {
                        if let Some(first) = raw.default_span {
                            Err(Diagnostic::new(
                                span,
                                format!("duplicate `default` row (first at {first})"),
                            ))
                        } else {
                            raw.default_span = Some(span);
                            raw.model.default = Some(w);
                            Ok(())
                        }
                    }
                }),
                Some(Section::Events) => p.event_line().map(|e| raw.model.events.push(e)),
                Some(Section::Queries) => p.query_line().map(|q| raw.model.queries.push(q)),
            }
        };
        if let Err(d) = result {
            diags.push(d);
        }
    }
    (raw, diags)
}

enum PriorEntry {
    Row(PriorRow),
    Default(Rational, Span),
}

struct LineParser<'a> {
    toks: &'a [Token],
    pos: usize,
    depth: usize,
}

impl<'a> LineParser<'a> {
    fn new(toks: &'a [Token]) -> Self {
        LineParser {
            toks,
            pos: 0,
            depth: 0,
        }
    }

    fn peek(&self) -> &'a Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.toks[self.pos];
        if t.tok != Tok::Newline {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        Diagnostic::new(
            self.span(),
            format!("expected {expected}, found {}", describe(self.peek())),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, Diagnostic> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&describe(&tok)))
        }
    }

    fn expect_end(&mut self) -> Result<(), Diagnostic> {
        if *self.peek() == Tok::Newline {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<Ident, Diagnostic> {
        match self.peek() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok(Ident {
                    name: name.clone(),
                    span,
                })
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn var_list(&mut self) -> Result<Vec<Ident>, Diagnostic> {
        let mut vars = Vec::new();
        while *self.peek() != Tok::Newline {
            vars.push(self.ident()?);
        }
        Ok(vars)
    }

    fn rational(&mut self) -> Result<Rational, Diagnostic> {
        match self.peek() {
            Tok::Number(text) => {
                let span = self.bump().span;
                text.parse()
                    .map_err(|e| Diagnostic::new(span, format!("{e}")))
            }
            _ => Err(self.unexpected("a rational literal")),
        }
    }

    fn prior_line(&mut self) -> Result<PriorEntry, Diagnostic> {
        if self.at_keyword("default") {
            let span = self.bump().span;
            let w = self.rational()?;
            self.expect_end()?;
            return Ok(PriorEntry::Default(w, span));
        }
        let span = self.span();
        let mut pattern = Vec::new();
        loop {
            let value = match self.peek() {
                Tok::Ident(s) if s == "T" => true,
                Tok::Ident(s) if s == "F" => false,
                Tok::Number(s) if s == "1" => true,
                Tok::Number(s) if s == "0" => false,
                Tok::Arrow if !pattern.is_empty() => break,
                _ => return Err(self.unexpected("`T`, `F`, `1` or `0`")),
            };
            self.bump();
            pattern.push(value);
        }
        self.expect(Tok::Arrow)?;
        let weight = self.rational()?;
        self.expect_end()?;
        Ok(PriorEntry::Row(PriorRow {
            pattern,
            weight,
            span,
        }))
    }

    fn event_line(&mut self) -> Result<EventDef, Diagnostic> {
        let name = self.ident()?;
        self.expect(Tok::Assign)?;
        let expr = self.expr()?;
        self.expect_end()?;
        Ok(EventDef { name, expr })
    }

    fn query_line(&mut self) -> Result<Query, Diagnostic> {
        let q = self.query()?;
        self.expect_end()?;
        Ok(q)
    }

    fn query(&mut self) -> Result<Query, Diagnostic> {
        let span = self.span();
        let kind = if self.at_keyword("total") {
            self.bump();
            let (target, given) = self.probability()?;
            if let Some((_, bar)) = given {
                return Err(Diagnostic::new(
                    bar,
                    "a total-probability query cannot be conditional",
                ));
            }
            if !self.at_keyword("by") {
                return Err(self.unexpected("`by`"));
            }
            self.bump();
            let blocks = self.blocks()?;
            QueryKind::Total { target, blocks }
        } else if self.at_keyword("partition") {
            self.bump();
            QueryKind::Partition(self.blocks()?)
        } else if self.at_keyword("P") {
            match self.probability()? {
                (e, None) => QueryKind::Marginal(e),
                (e, Some((f, _))) => QueryKind::Conditional(e, f),
            }
        } else {
            return Err(
                self.unexpected("a query (`P(...)`, `total P(...) by ...` or `partition ...`)")
            );
        };
        Ok(Query { kind, span })
    }

    /// `P(e)` or `P(e | f)`.
    fn probability(&mut self) -> Result<(Expr, Option<(Expr, Span)>), Diagnostic> {
        if !self.at_keyword("P") {
            return Err(self.unexpected("`P`"));
        }
        self.bump();
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        let given = if *self.peek() == Tok::Bar {
            let bar = self.bump().span;
            Some((self.expr()?, bar))
        } else {
            None
        };
        self.expect(Tok::RParen)?;
        Ok((e, given))
    }

    fn blocks(&mut self) -> Result<Blocks, Diagnostic> {
        if self.at_keyword("signs") {
            self.bump();
            self.expect(Tok::LParen)?;
            let mut vars = vec![self.ident()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                vars.push(self.ident()?);
            }
            self.expect(Tok::RParen)?;
            return Ok(Blocks::Signs(vars));
        }
        if *self.peek() != Tok::LBrace {
            return Err(self.unexpected("`{` or `signs(`"));
        }
        self.bump();
        let mut list = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            list.push(self.expr()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(Blocks::List(list))
    }

    fn is_or(&self) -> bool {
        *self.peek() == Tok::OrOr || self.at_keyword("or")
    }

    fn is_and(&self) -> bool {
        *self.peek() == Tok::Amp || self.at_keyword("and")
    }

    fn is_not(&self) -> bool {
        *self.peek() == Tok::Bang || self.at_keyword("not")
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.and_expr()?;
        while self.is_or() {
            self.bump();
            lhs = lhs.or(self.and_expr()?);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.eq_expr()?;
        while self.is_and() {
            self.bump();
            lhs = lhs.and(self.eq_expr()?);
        }
        Ok(lhs)
    }

    fn eq_expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::EqEq => {
                    self.bump();
                    lhs = lhs.equals(self.unary()?);
                }
                Tok::NotEq => {
                    self.bump();
                    lhs = lhs.differs(self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if self.depth >= MAX_NESTING {
            return Err(Diagnostic::new(self.span(), "expression nested too deeply"));
        }
        self.depth += 1;
        let result = if self.is_not() {
            self.bump();
            self.unary().map(Expr::negate)
        } else {
            self.primary()
        };
        self.depth -= 1;
        result
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Expr::Const(true))
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Expr::Const(false))
            }
            Tok::Ident(s) if RESERVED.contains(&s.as_str()) => Err(self.unexpected("an event")),
            Tok::Ident(_) => Ok(Expr::Ref(self.ident()?)),
            _ => Err(self.unexpected("an event")),
        }
    }
}

fn pattern_text(pattern: &[bool]) -> String {
    let cells: Vec<&str> = pattern.iter().map(|&b| if b { "T" } else { "F" }).collect();
    cells.join(" ")
}

/// Semantic checks over a syntactically valid model.
fn validate(raw: &RawModel) -> Vec<Diagnostic> {
    let m = &raw.model;
    let mut diags = Vec::new();

    let Some(vars_span) = raw.vars_seen else {
        diags.push(Diagnostic::new(Span::new(1, 1), "missing `vars:` section"));
        return diags;
    };
    if m.vars.is_empty() {
        diags.push(Diagnostic::new(vars_span, "no variables declared"));
    }
    if m.vars.len() > MAX_MODEL_VARIABLES {
        diags.push(Diagnostic::new(
            vars_span,
            format!(
                "{} variables declared; at most {MAX_MODEL_VARIABLES} are supported",
                m.vars.len()
            ),
        ));
        return diags;
    }
    let mut var_at: HashMap<&str, Span> = HashMap::new();
    for v in &m.vars {
        if RESERVED.contains(&v.name.as_str()) {
            diags.push(Diagnostic::new(
                v.span,
                format!("`{}` is a reserved word", v.name),
            ));
        } else if let Some(first) = var_at.get(v.name.as_str()) {
            diags.push(Diagnostic::new(
                v.span,
                format!("variable `{}` declared twice (first at {first})", v.name),
            ));
        } else {
            var_at.insert(&v.name, v.span);
        }
    }

    if !diags.is_empty() {
        return diags;
    }
    validate_prior(raw, &mut diags);

    // events may refer to variables and to events defined above them
    let all_events: HashMap<&str, Span> = m
        .events
        .iter()
        .map(|e| (e.name.name.as_str(), e.name.span))
        .collect();
    let mut defined: HashMap<&str, Span> = HashMap::new();
    for e in &m.events {
        let name = e.name.name.as_str();
        for r in e.expr.refs() {
            let n = r.name.as_str();
            if var_at.contains_key(n) || defined.contains_key(n) {
                continue;
            }
            let msg = if n == name {
                format!("event `{n}` refers to itself")
            } else if all_events.contains_key(n) {
                format!("event `{n}` is used before its definition")
            } else {
                format!("undeclared variable or event `{n}`")
            };
            diags.push(Diagnostic::new(r.span, msg));
        }
        if RESERVED.contains(&name) {
            diags.push(Diagnostic::new(
                e.name.span,
                format!("`{name}` is a reserved word"),
            ));
        } else if var_at.contains_key(name) {
            diags.push(Diagnostic::new(
                e.name.span,
                format!("event `{name}` has the same name as a variable"),
            ));
        } else if let Some(first) = defined.get(name) {
            diags.push(Diagnostic::new(
                e.name.span,
                format!("event `{name}` defined twice (first at {first})"),
            ));
        } else {
            defined.insert(name, e.name.span);
        }
    }

    let vars: Vec<&str> = m.var_names();
    let events: Vec<&str> = m.events.iter().map(|e| e.name.name.as_str()).collect();
    for q in &m.queries {
        diags.extend(check_query(&vars, &events, q));
    }
    diags
}

fn validate_prior(raw: &RawModel, diags: &mut Vec<Diagnostic>) {
    let m = &raw.model;
    if !raw.prior_seen {
        diags.push(Diagnostic::new(Span::new(1, 1), "missing `prior:` section"));
        return;
    }
    let n = m.vars.len();
    let mut assigned: HashMap<usize, Span> = HashMap::new();
    let mut shape_ok = true;
    for row in &m.rows {
        if row.pattern.len() != n {
            diags.push(Diagnostic::new(
                row.span,
                format!("pattern has {} values, expected {n}", row.pattern.len()),
            ));
            shape_ok = false;
            continue;
        }
        let idx = index_of_bits(&row.pattern);
        if let Some(first) = assigned.get(&idx) {
            diags.push(Diagnostic::new(
                row.span,
                format!(
                    "duplicate pattern {} (first at {first})",
                    pattern_text(&row.pattern)
                ),
            ));
            shape_ok = false;
        } else {
            assigned.insert(idx, row.span);
        }
    }
    if !shape_ok {
        return;
    }
    let total = 1usize << n;
    let missing = total - assigned.len();
    let explicit: Rational = m.rows.iter().map(|r| &r.weight).sum();
    let sum = match &m.default {
        Some(d) => explicit + d * &Rational::from(missing as i64),
        None if missing > 0 => {
            let first = (0..total)
                .find(|i| !assigned.contains_key(i))
                .expect("a missing pattern");
            let msg = if missing == 1 {
                format!(
                    "pattern {} has no probability and there is no `default` row",
                    pattern_text(&bits_of(first, n))
                )
            } else {
                format!(
                    "{missing} patterns have no probability (first: {}) and there is no `default` row",
                    pattern_text(&bits_of(first, n))
                )
            };
            diags.push(Diagnostic::new(m.prior_span, msg));
            return;
        }
        None => explicit,
    };
    if !sum.is_one() {
        diags.push(Diagnostic::new(
            m.prior_span,
            format!("prior sums to {sum}, expected 1"),
        ));
    }
}

/// Reference checks for a query against declared variables and events.
pub(crate) fn check_query(vars: &[&str], events: &[&str], q: &Query) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let check_expr = |e: &Expr, diags: &mut Vec<Diagnostic>| {
        for r in e.refs() {
            if !vars.contains(&r.name.as_str()) && !events.contains(&r.name.as_str()) {
                diags.push(Diagnostic::new(
                    r.span,
                    format!("undeclared variable or event `{}`", r.name),
                ));
            }
        }
    };
    let check_blocks = |b: &Blocks, diags: &mut Vec<Diagnostic>| match b {
        Blocks::List(list) => {
            for e in list {
                check_expr(e, diags);
            }
        }
        Blocks::Signs(ids) => {
            for (i, id) in ids.iter().enumerate() {
                if !vars.contains(&id.name.as_str()) {
                    diags.push(Diagnostic::new(
                        id.span,
                        format!("`{}` is not a variable", id.name),
                    ));
                } else if ids[..i].iter().any(|o| o.name == id.name) {
                    diags.push(Diagnostic::new(
                        id.span,
                        format!("`{}` listed twice", id.name),
                    ));
                }
            }
        }
    };
    match &q.kind {
        QueryKind::Marginal(e) => check_expr(e, &mut diags),
        QueryKind::Conditional(e, f) => {
            check_expr(e, &mut diags);
            check_expr(f, &mut diags);
        }
        QueryKind::Total { target, blocks } => {
            check_expr(target, &mut diags);
            check_blocks(blocks, &mut diags);
        }
        QueryKind::Partition(blocks) => check_blocks(blocks, &mut diags),
    }
    diags
}

fn canonicalize(mut m: ModelFile) -> ModelFile {
    m.rows.sort_by_key(|r| index_of_bits(&r.pattern));
    m
}
