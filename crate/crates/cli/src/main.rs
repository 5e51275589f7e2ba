//! `gkm`: command-line front end.
//!
//! Exit codes: 0 when every check passes, 2 when a mathematical check fails
//! or does not apply, 1 on input or usage errors.

mod commands;
mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "gkm", version, about = "Combinatorics and equivariant cohomology of GKM graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Highest cohomological degree for algebraic computations (default 2n + 4).
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,

    /// Largest face dimension to enumerate (default n).
    #[arg(long, global = true)]
    pub max_face_dim: Option<usize>,

    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,

    /// Emit human-readable text.
    #[arg(long, global = true)]
    pub text: bool,

    /// Use a bundled fixture instead of an input file.
    #[arg(long, global = true, value_name = "NAME")]
    pub fixture: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and check a graph file.
    Validate(Input),
    /// Parity, balanced coloring and facets.
    Structure(Input),
    /// Enumerate totally geodesic faces.
    Faces(Input),
    /// Acyclicity screen on the face poset.
    Screen(Input),
    /// Graded dimensions of GKM cohomology and recovered Betti numbers.
    Cohomology(Input),
    /// The distinguished linear form on facets.
    Eta(Input),
    /// Hilbert series of the face ring.
    Hilbert(Input),
    /// Compare GKM cohomology with the face ring modulo the linear form.
    VerifyB(Input),
    /// Rank of restriction to a face.
    Restrict(RestrictArgs),
    /// Run everything applicable.
    Report(Input),
}

#[derive(clap::Args, Debug)]
pub struct Input {
    /// Graph file in the JSON schema.
    pub path: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct RestrictArgs {
    pub path: Option<PathBuf>,

    /// Face spanned at a vertex by darts: `VERTEX:DART,DART,...`.
    #[arg(long, conflicts_with = "whole")]
    pub seed: Option<String>,

    /// Restrict to the whole graph.
    #[arg(long)]
    pub whole: bool,
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
    match commands::run(&cli) {
        Ok(outcome) => {
            let body = if cli.text {
                text::render(&outcome.value)
            } else {
                serde_json::to_string_pretty(&outcome.value).expect("serializable") + "\n"
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::from(if outcome.pass { 0 } else { 2 })
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
