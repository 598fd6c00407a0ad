use std::fmt;

use crate::rational::Rational;

/// A 1-based line and column (columns count characters, not bytes).
///
/// Spans always compare equal, so equality on the syntax tree is structural.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl Span {
    pub fn new(line: usize, column: usize) -> Self {
        Span { line, column }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident {
            name: name.into(),
            span: Span::default(),
        }
    }
}

/// Boolean expressions over variables and named events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Ref(Ident),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Ne(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Ref(Ident::new(name))
    }

    pub fn negate(self) -> Expr {
        Expr::Not(Box::new(self))
    }

    pub fn and(self, rhs: Expr) -> Expr {
        Expr::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Expr) -> Expr {
        Expr::Or(Box::new(self), Box::new(rhs))
    }

    pub fn equals(self, rhs: Expr) -> Expr {
        Expr::Eq(Box::new(self), Box::new(rhs))
    }

    pub fn differs(self, rhs: Expr) -> Expr {
        Expr::Ne(Box::new(self), Box::new(rhs))
    }

    /// Every identifier referenced, left to right.
    pub fn refs(&self) -> Vec<&Ident> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a Ident>) {
        match self {
            Expr::Const(_) => {}
            Expr::Ref(id) => out.push(id),
            Expr::Not(e) => e.collect_refs(out),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Eq(a, b) | Expr::Ne(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
        }
    }
}

/// How a total-probability or partition query names its blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blocks {
    /// `{e1, e2, ...}`
    List(Vec<Expr>),
    /// `signs(x, y, ...)`: one block per sign pattern of the variables.
    Signs(Vec<Ident>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryKind {
    /// `P(e)`
    Marginal(Expr),
    /// `P(e | f)`
    Conditional(Expr, Expr),
    /// `total P(e) by blocks`
    Total { target: Expr, blocks: Blocks },
    /// `partition blocks`
    Partition(Blocks),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub kind: QueryKind,
    pub span: Span,
}

impl Query {
    pub fn new(kind: QueryKind) -> Self {
        Query {
            kind,
            span: Span::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorRow {
    pub pattern: Vec<bool>,
    pub weight: Rational,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventDef {
    pub name: Ident,
    pub expr: Expr,
}

/// A parsed `.fpm` model.
///
/// Models returned by the parser are validated and keep their prior rows in
/// canonical outcome order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelFile {
    pub vars: Vec<Ident>,
    pub rows: Vec<PriorRow>,
    pub default: Option<Rational>,
    pub events: Vec<EventDef>,
    pub queries: Vec<Query>,
    /// Location of the `prior:` header, where sum errors are reported.
    pub prior_span: Span,
}

impl ModelFile {
    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }
}
