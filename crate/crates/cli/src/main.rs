//! `symdyn`: reproducible experiments on groups, Følner sets, subshifts and
//! complexity estimators, written as CSV.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "symdyn", version, about, args_override_self = true)]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key=value` lines supplying defaults for flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for per-index work.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every sampled configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Følner sequence diagnostics.
    #[command(subcommand)]
    Folner(FolnerCommand),
    /// Depth-first code of connected sets.
    #[command(subcommand)]
    Codec(CodecCommand),
    /// Plan and build an ε-quasi-tiling of one set of a sequence.
    Tile(TileArgs),
    /// Entropy of subshifts and measures.
    #[command(subcommand)]
    Entropy(EntropyCommand),
    /// Complexity rates of sampled configurations.
    #[command(subcommand)]
    Brudno(BrudnoCommand),
    /// Bit cost of repairing a word from a corrupted copy.
    RepairDemo(RepairArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, default_value = "z")]
    pub group: String,
    /// `boxes` or `dyadic`.
    #[arg(long, default_value = "boxes")]
    pub family: String,
}

#[derive(Subcommand, Debug)]
pub enum FolnerCommand {
    /// Exact worst generator defect and description length per index.
    Defect {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long, default_value_t = 16)]
        upto: usize,
    },
    /// Temperedness witness on each prefix.
    Tempered {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        upto: usize,
    },
    /// First finite set passing the invariance test for index `i`.
    ModestSearch {
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = symdyn::folner::DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CodecCommand {
    /// Encode a set file (one element per line).
    Encode {
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long)]
        set_file: PathBuf,
    },
    /// Decode a bit string back into a set file.
    Decode {
        #[arg(long, default_value = "z")]
        group: String,
        /// File holding the 0/1 string, possibly as written by `codec encode`.
        #[arg(long)]
        code_file: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct TileArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value = "1/4")]
    pub eps: String,
    /// Index of the set to cover.
    #[arg(long)]
    pub i: usize,
    /// Comma-separated tile scales; planned automatically when absent.
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long, default_value_t = 256)]
    pub max_tile_size: u64,
}

#[derive(Subcommand, Debug)]
pub enum EntropyCommand {
    /// Pattern counts and entropy estimates of a subshift of finite type.
    Sft {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "boxes")]
        family: String,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long, default_value_t = 16)]
        upto: usize,
        #[arg(long, default_value_t = symdyn::symbolic::sft::DEFAULT_COUNT_BUDGET)]
        budget: u64,
    },
    /// Entropy of a measure given as `bernoulli:p,…` or `markov:[[…]]`.
    Measure {
        #[arg(long)]
        measure: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum BrudnoCommand {
    /// Estimator rates on the windows of one sampled point.
    Run {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "bernoulli:0.5,0.5")]
        measure: String,
        /// `freq`, `lz78` or `all`.
        #[arg(long, default_value = "all")]
        estimator: String,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long, default_value_t = 12)]
        upto: usize,
    },
}

#[derive(Args, Debug)]
pub struct RepairArgs {
    /// Word length.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Comma-separated corruption rates.
    #[arg(long, default_value = "0,0.01,0.05,0.1")]
    pub deltas: String,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::merge_config_file(&argv) {
        Ok(argv) => argv,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let command = Cli::command();
    let matches = match command.clone().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let echo = config::echo(&command, &matches);
    match commands::run(&cli, &config::command_path(&matches), &echo) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
