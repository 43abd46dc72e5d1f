//! `selfsim`: analyses of self-similarity systems from the command line.

mod commands;
mod examples;
mod load;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Bounded analyses of self-similarity systems and their final coalgebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Target {
    /// System file, or a builtin key such as `builtin:streams(alphabet=2,bound=4)`.
    file: String,
    /// Module to analyse (default: the last one declared).
    #[arg(long)]
    module: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and validate every declaration in a system file.
    Validate {
        #[command(flatten)]
        target: Target,
    },
    /// Check flatness of the module at every object, and of declared functors.
    Flat {
        #[command(flatten)]
        target: Target,
    },
    /// Enumerate truncated complexes.
    Complexes {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        head: Option<String>,
        /// List at most this many complexes.
        #[arg(long, default_value_t = 20)]
        list: usize,
    },
    /// Check the strong or weak solvability condition.
    Solvable {
        #[command(flatten)]
        target: Target,
        #[arg(long, conflicts_with = "weak", required_unless_present = "weak")]
        strong: bool,
        #[arg(long)]
        weak: bool,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// First level to check; levels below it are skipped.
        #[arg(long, default_value_t = 0)]
        from_level: usize,
        /// Extra depth tested pairs must extend to (strong condition).
        #[arg(long, default_value_t = 1)]
        lookahead: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Check compactness of a diagram of constant complexes.
    Compact {
        #[command(flatten)]
        target: Target,
        /// Nodes `obj=label` separated by `;`, each the constant complex on an endo-element.
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Check the conditions on a chain of preorders and extract a thread.
    Koenig {
        chainfile: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Depth-n approximation of the final coalgebra.
    Final {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Anchor objects (default: every object).
        #[arg(long)]
        anchor: Vec<String>,
        #[arg(long, conflicts_with = "classes")]
        counts: bool,
        #[arg(long)]
        classes: bool,
    },
    /// Map a coalgebra into the depth-n approximation.
    Solve {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        coalgebra: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        anchor: Vec<String>,
    },
    /// Worked examples on the builtin systems.
    Example(examples::ExampleArgs),
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut r = Report::default();
    r.command(&argv[1..]);
    let start = Instant::now();
    let budget = selfsim::Budget::from_env();
    r.param("max_enum", budget.limit());
    if let Err(e) = dispatch(cli.cmd, &mut r, &budget) {
        r.error(&e);
    }
    r.time(start.elapsed().as_millis());
    for l in r.lines() {
        println!("{l}");
    }
    ExitCode::from(r.exit_code())
}

fn dispatch(cmd: Cmd, r: &mut Report, budget: &selfsim::Budget) -> selfsim::Result<()> {
    match cmd {
        Cmd::Validate { target } => commands::validate(r, &target.file),
        Cmd::Flat { target } => commands::flat(r, &target.file, target.module.as_deref()),
        Cmd::Complexes { target, depth, head, list } => {
            commands::complexes(r, &target.file, target.module.as_deref(), depth, head.as_deref(), list, budget)
        }
        Cmd::Solvable { target, strong, weak: _, depth, from_level, lookahead, seed } => commands::solvable(
            r,
            &target.file,
            target.module.as_deref(),
            commands::SolvableOpts { strong, depth, from_level, lookahead, seed },
            budget,
        ),
        Cmd::Compact { target, diagram, depth } => {
            commands::compact(r, &target.file, target.module.as_deref(), &diagram, depth, budget)
        }
        Cmd::Koenig { chainfile, depth } => commands::koenig(r, &chainfile, depth),
        Cmd::Final { target, depth, anchor, counts: _, classes } => {
            commands::final_approx(r, &target.file, target.module.as_deref(), depth, &anchor, classes, budget)
        }
        Cmd::Solve { target, coalgebra, depth, anchor } => {
            commands::solve(r, &target.file, target.module.as_deref(), &coalgebra, depth, &anchor, budget)
        }
        Cmd::Example(args) => examples::run(r, args, budget),
    }
}
