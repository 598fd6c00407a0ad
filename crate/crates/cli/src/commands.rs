use std::fmt::Write as _;
use std::io::Read as _;
use std::path::Path;

use exactprob::dsl::{
    emit_model, emit_query, eval_query, parse_model_bytes, parse_query, with_decimal,
    CompiledModel, Diagnostics, QueryResult,
};
use exactprob::qkd::{
    intercept_resend_stats, p_a_sent_one_given_b_measured_one, p_b_measures_one, partition_a_label,
    qkd_ops, qkd_tree,
};
use exactprob::{PriorAssignment, ProbError, ProtocolTree, Rational};

use crate::args::{Cli, Command, Demo, Format};
use crate::output::{Cell, Sheet};

/// Why a command did not produce output.
#[derive(Debug)]
pub enum Failure {
    /// Invalid model, query or domain error; exit status 1.
    Invalid(Vec<String>),
    /// Unreadable input or an unsupported flag combination; exit status 2.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    pub fn messages(&self) -> Vec<String> {
        match self {
            Failure::Invalid(m) => m.clone(),
            Failure::Io(m) => vec![m.clone()],
        }
    }

    fn located(origin: &str, diags: Diagnostics) -> Self {
        Failure::Invalid(diags.0.iter().map(|d| format!("{origin}:{d}")).collect())
    }
}

impl From<ProbError> for Failure {
    fn from(e: ProbError) -> Self {
        Failure::Invalid(vec![e.to_string()])
    }
}

pub fn run(cli: &Cli) -> Result<String, Failure> {
    let places = cli.places as usize;
    match &cli.command {
        Command::Check { file } => check(file, cli.format),
        Command::Query { file, query } => run_query(file, query, cli.format, places),
        Command::Emit { file } => emit(file, cli.format, places),
        Command::Qkd { demo } => match demo {
            Demo::Table => Ok(outcome_table(&qkd_ops(), places).render(cli.format)),
            Demo::Tree => Ok(tree(&qkd_tree(), cli.format)),
            Demo::Security => security(cli.format, places),
            Demo::Eve => eve(cli.format, places),
        },
    }
}

fn load(path: &Path) -> Result<(String, CompiledModel), Failure> {
    let (origin, bytes) = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Io(format!("cannot read standard input: {e}")))?;
        ("<stdin>".to_string(), buf)
    } else {
        let origin = path.display().to_string();
        let bytes =
            std::fs::read(path).map_err(|e| Failure::Io(format!("cannot read `{origin}`: {e}")))?;
        (origin, bytes)
    };
    let model = parse_model_bytes(&bytes).map_err(|d| Failure::located(&origin, d))?;
    let compiled = CompiledModel::new(&model).map_err(|d| Failure::located(&origin, d))?;
    Ok((origin, compiled))
}

fn check(path: &Path, format: Format) -> Result<String, Failure> {
    let (origin, model) = load(path)?;
    let m = model.model();
    if format == Format::Text {
        return Ok(format!(
            "{origin}: ok, {} variables, {} outcomes, {} events, {} queries\n",
            m.vars.len(),
            model.space().len(),
            m.events.len(),
            m.queries.len()
        ));
    }
    let mut sheet = Sheet::new(["file", "variables", "outcomes", "events", "queries"]);
    sheet.push(vec![
        Cell::Text(origin),
        Cell::Count(m.vars.len()),
        Cell::Count(model.space().len()),
        Cell::Count(m.events.len()),
        Cell::Count(m.queries.len()),
    ]);
    Ok(sheet.render(format))
}

fn run_query(path: &Path, text: &str, format: Format, places: usize) -> Result<String, Failure> {
    let (_, model) = load(path)?;
    let query = parse_query(text).map_err(|d| Failure::located("query", d))?;
    let result = eval_query(&model, &query).map_err(|d| Failure::located("query", d))?;
    if format == Format::Text {
        return Ok(result.render(places));
    }
    let shown = emit_query(&query);
    let sheet = match result {
        QueryResult::Probability(p) => {
            let mut s = Sheet::new(["query", "p", "approx"]);
            let approx = Cell::Approx(p.to_decimal(places));
            s.push(vec![Cell::Text(shown), Cell::Exact(p), approx]);
            s
        }
        QueryResult::Total { value, blocks } => {
            let mut s = Sheet::new(["block", "p_block", "joint", "conditional", "approx"]);
            for b in blocks {
                let approx = b
                    .term
                    .conditional
                    .as_ref()
                    .map_or(Cell::Empty, |c| Cell::Approx(c.to_decimal(places)));
                s.push(vec![
                    Cell::Text(b.label),
                    Cell::Exact(b.term.block),
                    Cell::Exact(b.term.joint),
                    b.term.conditional.map_or(Cell::Empty, Cell::Exact),
                    approx,
                ]);
            }
            // the whole space as a final row: P(E | Ω) = P(E)
            s.push(vec![
                Cell::Text("total".into()),
                Cell::Exact(Rational::one()),
                Cell::Exact(value.clone()),
                Cell::Exact(value.clone()),
                Cell::Approx(value.to_decimal(places)),
            ]);
            s
        }
        QueryResult::Partition { blocks } => {
            let mut s = Sheet::new(["query", "valid", "blocks"]);
            s.push(vec![
                Cell::Text(shown),
                Cell::Flag(true),
                Cell::Count(blocks),
            ]);
            s
        }
    };
    Ok(sheet.render(format))
}

fn emit(path: &Path, format: Format, places: usize) -> Result<String, Failure> {
    let (_, model) = load(path)?;
    match format {
        Format::Text => Ok(emit_model(model.model())),
        _ => Ok(outcome_table(model.distribution().prior(), places).render(format)),
    }
}

/// One row per outcome: the variable values, the exact weight and its decimal.
fn outcome_table(prior: &PriorAssignment, places: usize) -> Sheet {
    let space = prior.space();
    let vars = space
        .variables()
        .expect("models are boolean product spaces");
    let mut sheet = Sheet::new(vars.iter().map(String::as_str).chain(["p", "approx"]));
    sheet.nest = Some(("outcome".to_string(), vars.len()));
    for i in 0..space.len() {
        let w = prior.weight(i);
        let mut row: Vec<Cell> = space
            .assignment(i)
            .expect("boolean space")
            .into_iter()
            .map(Cell::Flag)
            .collect();
        row.push(Cell::Exact(w.clone()));
        row.push(Cell::Approx(w.to_decimal(places)));
        sheet.push(row);
    }
    sheet
}

fn tree(tree: &ProtocolTree, format: Format) -> String {
    if format == Format::Text {
        return tree.render();
    }
    let mut sheet = Sheet::new(["depth", "path", "variable", "value", "edge", "leaf"]);
    let mut path = Vec::new();
    walk(tree, &mut path, &mut sheet);
    sheet.render(format)
}

// pre-order, true branch first, as in the text rendering
fn walk(tree: &ProtocolTree, path: &mut Vec<bool>, sheet: &mut Sheet) {
    let depth = path.len();
    if depth == tree.levels() {
        return;
    }
    let (t, f) = tree
        .edge(path)
        .expect("prefix shorter than the tree")
        .clone();
    for (value, p) in [(true, t), (false, f)] {
        path.push(value);
        let shown: Vec<&str> = path.iter().map(|&b| if b { "T" } else { "F" }).collect();
        let leaf = if path.len() == tree.levels() {
            Cell::Exact(tree.leaf_probability(path).expect("full path"))
        } else {
            Cell::Empty
        };
        sheet.push(vec![
            Cell::Count(depth + 1),
            Cell::Text(shown.join(" ")),
            Cell::Text(tree.variable_names()[depth].clone()),
            Cell::Flag(value),
            Cell::Exact(p),
            leaf,
        ]);
        walk(tree, path, sheet);
        path.pop();
    }
}

fn quantities(rows: Vec<(String, String, Rational)>, places: usize) -> Sheet {
    let mut sheet = Sheet::new(["quantity", "block", "p", "approx"]);
    for (name, block, p) in rows {
        let block = if block.is_empty() {
            Cell::Empty
        } else {
            Cell::Text(block)
        };
        let approx = Cell::Approx(p.to_decimal(places));
        sheet.push(vec![Cell::Text(name), block, Cell::Exact(p), approx]);
    }
    sheet
}

fn security(format: Format, places: usize) -> Result<String, Failure> {
    let total = p_b_measures_one()?;
    let report = p_a_sent_one_given_b_measured_one()?;
    if format != Format::Text {
        let mut rows = Vec::new();
        for (j, term) in total.terms.iter().enumerate() {
            let label = partition_a_label(j);
            rows.push((format!("P(A_{})", j + 1), label.clone(), term.block.clone()));
            if let Some(c) = &term.conditional {
                rows.push((format!("P(BmOne|A_{})", j + 1), label, c.clone()));
            }
        }
        rows.push(("P(BmOne)".into(), String::new(), total.total.clone()));
        rows.push(("P(AsOne & BmOne)".into(), String::new(), report.joint));
        rows.push(("P(AsOne|BmOne)".into(), String::new(), report.posterior));
        rows.push(("error".into(), String::new(), report.error));
        return Ok(quantities(rows, places).render(format));
    }
    let mut sheet = Sheet::new(["j", "A_j", "P(A_j)", "P(BmOne|A_j)", "P(BmOne|A_j) P(A_j)"]);
    for (j, term) in total.terms.iter().enumerate() {
        sheet.push(vec![
            Cell::Count(j + 1),
            Cell::Text(partition_a_label(j)),
            Cell::Exact(term.block.clone()),
            term.conditional.clone().map_or(Cell::Empty, Cell::Exact),
            Cell::Exact(term.weighted()),
        ]);
    }
    let mut out = String::from("P(BmOne) by total probability over the blocks A_j:\n\n");
    out.push_str(&sheet.text());
    out.push('\n');
    let _ = writeln!(out, "P(BmOne) = {}", with_decimal(&total.total, places));
    let _ = writeln!(
        out,
        "P(AsOne & BmOne) = {}",
        with_decimal(&report.joint, places)
    );
    let _ = writeln!(
        out,
        "P(AsOne|BmOne) = {}",
        with_decimal(&report.posterior, places)
    );
    let _ = writeln!(
        out,
        "error = 1 - P(AsOne|BmOne) = {}",
        with_decimal(&report.error, places)
    );
    Ok(out)
}

fn eve(format: Format, places: usize) -> Result<String, Failure> {
    let stats = intercept_resend_stats()?;
    let named = [
        ("sifted_prob", stats.sifted_prob),
        ("sifted_qber", stats.sifted_qber),
        ("eve_correct_given_sift", stats.eve_correct_given_sift),
    ];
    if format == Format::Text {
        let mut out = String::new();
        for (name, v) in &named {
            let _ = writeln!(out, "{name} = {}", with_decimal(v, places));
        }
        return Ok(out);
    }
    let rows = named
        .into_iter()
        .map(|(n, v)| (n.to_string(), String::new(), v))
        .collect();
    let mut sheet = quantities(rows, places);
    // no blocks here
    sheet.header.remove(1);
    for row in &mut sheet.rows {
        row.remove(1);
    }
    Ok(sheet.render(format))
}
