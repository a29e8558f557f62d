use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ppredelp_cli::run::{self, ExplainArgs, Outcome, ReviseArgs};

/// Probabilistic PreDeLP: consistency checking, probabilistic
/// entailment, warranted queries, annotation revision and dialectical
/// explanations.
#[derive(Parser)]
#[command(name = "ppredelp", version)]
struct Cli {
    /// Emit a machine-readable {status, result, diagnostics} object.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify Type I and Type II consistency of a program.
    Check {
        #[arg(long)]
        em: PathBuf,
        #[arg(long)]
        am: PathBuf,
        #[arg(long)]
        af: PathBuf,
    },
    /// Tightest probability interval the environmental model entails
    /// for a formula.
    Entail {
        #[arg(long)]
        em: PathBuf,
        /// Query formula, e.g. 'a | c'.
        #[arg(long)]
        formula: String,
    },
    /// Probability bounds on a literal being warranted.
    Query {
        #[arg(long)]
        em: PathBuf,
        #[arg(long)]
        am: PathBuf,
        #[arg(long)]
        af: PathBuf,
        /// Query literal, e.g. 's' or '~s'.
        #[arg(long)]
        literal: String,
    },
    /// Revise the annotation function to absorb a new element.
    Revise {
        #[arg(long)]
        em: PathBuf,
        #[arg(long)]
        am: PathBuf,
        #[arg(long)]
        af: PathBuf,
        /// New element in AM syntax, e.g. '[theta3] ~p.'.
        #[arg(long)]
        input_element: String,
        /// Annotation formula for the new element.
        #[arg(long)]
        input_annotation: String,
        /// Where to write the revised annotation function.
        #[arg(long)]
        out_af: PathBuf,
        /// Optionally write the expanded analytical model too.
        #[arg(long)]
        out_am: Option<PathBuf>,
    },
    /// Show dialectical trees for a literal at a world, or a warrant
    /// summary across all worlds.
    Explain {
        #[arg(long)]
        em: PathBuf,
        #[arg(long)]
        am: PathBuf,
        #[arg(long)]
        af: PathBuf,
        /// Query literal, e.g. 's' or '~s'.
        #[arg(long)]
        literal: String,
        /// World as the comma-separated atoms that hold, or 'empty'.
        #[arg(long, conflicts_with = "all_worlds")]
        world: Option<String>,
        /// Summarise the warrant status over every conforming world.
        #[arg(long)]
        all_worlds: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let json = cli.json;
    let outcome = match cli.cmd {
        Cmd::Check { em, am, af } => run::check(em, am, af),
        Cmd::Entail { em, formula } => run::entail(em, &formula),
        Cmd::Query { em, am, af, literal } => run::query(em, am, af, &literal),
        Cmd::Revise { em, am, af, input_element, input_annotation, out_af, out_am } => {
            run::revise_cmd(ReviseArgs {
                em,
                am,
                af,
                element: input_element,
                annotation: input_annotation,
                out_af,
                out_am,
            })
        }
        Cmd::Explain { em, am, af, literal, world, all_worlds } => {
            run::explain(ExplainArgs { em, am, af, literal, world, all_worlds })
        }
    };
    render(&outcome, json);
    std::process::exit(outcome.code);
}

fn render(outcome: &Outcome, json: bool) {
    if json {
        println!("{}", outcome.envelope());
        return;
    }
    if !outcome.human.is_empty() {
        print!("{}", outcome.human);
    }
    for d in &outcome.diagnostics {
        eprintln!("error: {d}");
    }
}
