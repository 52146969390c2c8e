use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use corrwit::report::{self, BellOptions, Format, Report, RunOptions};

#[derive(Parser)]
#[command(version, about = "Reproduce witness and Bell-functional numbers and check them", long_about = None)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Dominance tolerance, relative to the witness spectral norm
    #[arg(long, global = true, default_value_t = 1e-8, allow_negative_numbers = true)]
    tol: f64,

    /// Seed for every randomized procedure
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Seesaw restarts per bipartition
    #[arg(long, global = true, default_value_t = 200)]
    restarts: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// GHZ witnesses: dominance, noise tolerance, seesaw consistency
    Table1,
    /// GHZ witness values on the three GHZ states
    Table2,
    /// Four-qubit singlet witness pipeline
    Singlet,
    /// Three-party four-level GHZ witness pipeline
    Ghz4x3,
    /// Two-qudit Bell functional
    Bell {
        /// Local dimension
        #[arg(short, long, default_value_t = 3)]
        d: usize,
        /// Exhaustive search over deterministic local models
        #[arg(long)]
        lhv: bool,
        /// Tabulate analytic values for d in DMIN..=DMAX
        #[arg(long, num_args = 2, value_names = ["DMIN", "DMAX"])]
        sweep: Option<Vec<usize>>,
    },
    /// Sign tests of every correlator group on random product states
    Proptest {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

fn run(cli: &Cli) -> corrwit::error::Result<Report> {
    let opts = RunOptions { tol: cli.tol, seed: cli.seed, restarts: cli.restarts, ..RunOptions::default() };
    match &cli.command {
        Command::Table1 => report::cmd_table1(&opts),
        Command::Table2 => report::cmd_table2(),
        Command::Singlet => report::cmd_singlet(&opts),
        Command::Ghz4x3 => report::cmd_ghz4x3(&opts),
        Command::Bell { d, lhv, sweep } => {
            let sweep = sweep.as_ref().map(|v| (v[0], v[1]));
            report::cmd_bell(&BellOptions { d: *d, lhv: *lhv, sweep })
        }
        Command::Proptest { trials } => report::cmd_proptest(cli.seed, *trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
    };
    match run(&cli) {
        Ok(r) => {
            print!("{}", r.render(format));
            for c in r.failures() {
                eprintln!(
                    "check failed: {} (actual {}, expected {}, tol {})",
                    c.name, c.actual, c.expected, c.tolerance
                );
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
