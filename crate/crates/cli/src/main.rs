use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use snakegraph::solver::DEFAULT_CEILING;
use snakegraph::strategies::DEFAULT_STATE_CEILING;
use snakegraph_cli::cache::SolveCache;
use snakegraph_cli::commands::{self, CliError, Output, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
use snakegraph_cli::engine::DEFAULT_ENGINE_CEILING;
use snakegraph_cli::server::{self, ServerConfig};

/// Snake on graphs: solve, classify, reduce, check strategies, play.
///
/// Exit codes: 0 success, 2 input error, 3 ceiling exceeded,
/// 4 a checking command found its check false.
#[derive(Parser)]
#[command(name = "snakegraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide winnability exactly.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        /// Memo entry ceiling.
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: usize,
        /// Directory of cached verdicts keyed by the file's sha256.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Decide winnability from graph structure, with a certificate.
    Classify {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Attach the gadget to an even grid graph.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also verify the gadget properties and write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a strategy against every line of the opponent.
    StrategyCheck {
        #[arg(long)]
        graph: PathBuf,
        /// theta, hamiltonian, cut-vertex, greedy, farthest, odd-bipartite,
        /// connectivity or girth.
        #[arg(long)]
        policy: String,
        /// State ceiling.
        #[arg(long, default_value_t = DEFAULT_STATE_CEILING)]
        ceiling: u64,
    },
    /// Classify every connected graph of one order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Solve every graph too and report disagreements.
        #[arg(long)]
        cross_check: bool,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: usize,
    },
    /// Serve the JSON game API.
    PlayServe {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        /// Solver ceiling for engine moves and hints.
        #[arg(long, default_value_t = DEFAULT_ENGINE_CEILING)]
        ceiling: usize,
        /// Allowed CORS origin; repeatable.
        #[arg(long = "cors-origin")]
        cors_origins: Vec<String>,
    },
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Solve {
            graph,
            ceiling,
            cache_dir,
        } => commands::solve(&graph, ceiling, cache_dir.map(SolveCache::new).as_ref()),
        Command::Classify { graph } => commands::classify_file(&graph),
        Command::Reduce { input, out, report } => commands::reduce_file(&input, &out, report.as_deref()),
        Command::StrategyCheck {
            graph,
            policy,
            ceiling,
        } => commands::strategy_check(&graph, &policy, ceiling),
        Command::Enumerate {
            n,
            cross_check,
            ceiling,
        } => commands::enumerate(n, cross_check, ceiling),
        Command::PlayServe { .. } => unreachable!("handled in main"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::PlayServe {
        addr,
        ceiling,
        cors_origins,
    } = cli.command
    {
        let mut config = ServerConfig {
            ceiling,
            ..ServerConfig::default()
        };
        if !cors_origins.is_empty() {
            config.cors_origins = cors_origins;
        }
        let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
        return match rt.block_on(server::serve(&addr, config)) {
            Ok(()) => ExitCode::from(EXIT_OK),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT)
            }
        };
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{}", commands::pretty(&out.json));
            ExitCode::from(if out.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
