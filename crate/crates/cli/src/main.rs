//! `qospath` command-line front end. Every run prints one record of
//! `key=value` lines on stdout.
//!
//! Exit codes: 0 when the question was answered (an infeasible answer
//! included), 1 for usage errors, 2 for unreadable or invalid input.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "qospath", version, about = "QoS-constrained path algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Budget-constrained bicriteria path (biweighted graph format).
    Bicriteria {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long, value_enum)]
        sense: Sense,
        #[arg(long, value_enum, default_value = "min")]
        objective: Goal,
        /// Solve exactly on the budget-layered product graph.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        verify: bool,
    },
    /// Category of every vertex and edge relative to all shortest paths
    /// (weighted graph format).
    Sensitivity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        undirected: bool,
        /// Level-counting method; all edge weights must be equal and positive.
        #[arg(long, conflicts_with = "undirected")]
        unit: bool,
        #[arg(long)]
        verify: bool,
    },
    /// Category of every item relative to all subsets summing to the target.
    KnapsackClassify {
        /// One "w [cost]" pair per line.
        #[arg(long)]
        items: PathBuf,
        #[arg(long)]
        target: usize,
        /// Classify against minimum-cost solutions.
        #[arg(long)]
        costs: bool,
        /// Solution count cap, at least 2, or "unbounded".
        #[arg(long, default_value = "2", value_parser = commands::parse_cap)]
        cap: u64,
        /// Rebuild the table without each item instead of the two-table method.
        #[arg(long)]
        by_removal: bool,
        #[arg(long)]
        verify: bool,
    },
    /// Hamiltonian path of a tournament reached only through edge queries.
    #[command(group(ArgGroup::new("input").required(true).args(["n", "matrix"])))]
    Tournament {
        /// Vertex count of a seeded random tournament.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit sign matrix file.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_parser = commands::parse_strategy, default_value = "binaryInsertion")]
        strategy: qospath::tournament::Strategy,
        #[arg(long)]
        verify: bool,
    },
    /// Cheapest path or cycle through exactly Q vertices (weighted format).
    Qpath {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, value_parser = commands::parse_aggregate, default_value = "sum")]
        agg: qospath::Aggregate,
        #[arg(long, value_enum, default_value = "path")]
        mode: Shape,
        /// Bit mask of usable vertices, decimal or 0x-prefixed.
        #[arg(long, value_parser = commands::parse_mask)]
        allow_mask: Option<u32>,
        #[arg(long)]
        verify: bool,
    },
    /// Hamiltonian path in the cube of a connected undirected graph
    /// (weighted format).
    CubeHam {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
    /// Cheapest color-alternating path (colored-digraph format).
    AltPath {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long, value_parser = commands::parse_aggregate, default_value = "sum")]
        agg: qospath::Aggregate,
        #[arg(long, value_enum, default_value = "expanded")]
        method: AltMethod,
        #[arg(long)]
        verify: bool,
    },
    /// Color-alternating Euler cycle (colored-multigraph format).
    AltEuler {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sense {
    #[value(name = "atmost")]
    AtMost,
    #[value(name = "atleast")]
    AtLeast,
}

#[derive(Clone, Copy, ValueEnum)]
enum Goal {
    Min,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Path,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum AltMethod {
    Expanded,
    /// Two labels per vertex; topological order on DAGs, queue otherwise.
    Twobest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(record) => {
            print!("{record}");
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
