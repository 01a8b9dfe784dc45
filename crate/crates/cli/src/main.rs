use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use topocheck::commands::{self, Mode, Output};

#[derive(Parser)]
#[command(name = "topocheck", version, about = "Type inference and evaluation for transformations on topological collections")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the inferred type scheme of a program.
    #[command(group(ArgGroup::new("mode").required(true).args(["strong", "soft"])))]
    Typecheck {
        #[arg(long)]
        strong: bool,
        #[arg(long)]
        soft: bool,
        /// Omit the catch-all inclusion when a rule matches every element.
        #[arg(long)]
        refine_catchall: bool,
        file: PathBuf,
    },
    /// Dump the generated type and constraint set.
    Constraints {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        refine_catchall: bool,
        file: PathBuf,
    },
    /// Solve a constraint system given as JSON.
    Solve {
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
    /// Evaluate a program.
    Run {
        /// Step budget; defaults to TOPOCHECK_FUEL or 100000.
        #[arg(long)]
        fuel: Option<u64>,
        /// Iterate the transformation to a fixpoint.
        #[arg(long)]
        fix: bool,
        /// Collection to apply the program's transformation to.
        #[arg(long)]
        input: Option<String>,
        file: PathBuf,
    },
    /// Remove dead rules and useless type tests.
    Optimize {
        #[arg(long)]
        content_type: String,
        file: PathBuf,
    },
    /// Print the syntax tree as JSON.
    Parse {
        #[arg(long)]
        strong: bool,
        file: PathBuf,
    },
    /// Run the acceptance suite with the corpus in DIR.
    CheckCorpus { dir: PathBuf },
}

fn with_file(path: &PathBuf, f: impl FnOnce(&str, &str) -> Output) -> Output {
    match commands::read(path) {
        Ok(src) => f(&path.display().to_string(), &src),
        Err(o) => o,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let out = match cli.cmd {
        Cmd::Typecheck { strong, refine_catchall, file, .. } => {
            let mode = if strong { Mode::Strong } else { Mode::Soft };
            with_file(&file, |n, s| commands::typecheck(n, s, mode, refine_catchall))
        }
        Cmd::Constraints { json, refine_catchall, file } => {
            with_file(&file, |n, s| commands::constraints(n, s, refine_catchall, json))
        }
        Cmd::Solve { json, file } => with_file(&file, |n, s| commands::solve_json(n, s, json)),
        Cmd::Run { fuel, fix, input, file } => {
            let fuel = fuel.unwrap_or_else(commands::default_fuel);
            with_file(&file, |n, s| commands::run(n, s, fuel, fix, input.as_deref()))
        }
        Cmd::Optimize { content_type, file } => with_file(&file, |n, s| commands::optimize(n, s, &content_type)),
        Cmd::Parse { strong, file } => {
            let mode = if strong { Mode::Strong } else { Mode::Soft };
            with_file(&file, |n, s| commands::parse_to_json(n, s, mode))
        }
        Cmd::CheckCorpus { dir } => commands::check_corpus(&dir),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
