use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Exact finite probability models, queries and the BB84 demonstrations.
#[derive(Debug, Parser)]
#[command(name = "exactprob", version)]
pub struct Cli {
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Digits after the point in decimal approximations
    #[arg(long, default_value_t = 6, global = true, value_parser = clap::value_parser!(u32).range(0..=1000))]
    pub places: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a model file (`-` reads standard input)
    Check { file: PathBuf },
    /// Evaluate one query against a model file
    Query { file: PathBuf, query: String },
    /// Print a model in canonical form, or its outcome table with --format csv|jsonl
    Emit { file: PathBuf },
    /// Built-in BB84 demonstrations
    Qkd {
        #[arg(value_enum)]
        demo: Demo,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// The 16-outcome a-priori table
    Table,
    /// The protocol tree with edge probabilities
    Tree,
    /// P(BmOne) by total probability and the posterior P(AsOne|BmOne)
    Security,
    /// Intercept-resend statistics
    Eve,
}
