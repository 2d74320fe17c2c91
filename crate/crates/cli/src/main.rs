use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperzeta::covering::DEFAULT_GROUP_CAP;
use hyperzeta::cycles::DEFAULT_CLASS_CAP;
use hyperzeta_cli::input::Source;
use hyperzeta_cli::report::Envelope;
use hyperzeta_cli::{commands, CliError, Outcome, RunConfig};

/// Bartholdi zeta functions and L-functions of hypergraphs and their covers.
#[derive(Parser)]
#[command(name = "hyperzeta", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Series truncation order in the cycle-length variable.
    #[arg(long, global = true, default_value_t = 8)]
    order: usize,
    /// Sample points for sampled-mode comparisons.
    #[arg(long, global = true, default_value_t = 25)]
    samples: usize,
    /// Relative tolerance for sampled-mode comparisons.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Substitute u = 0 in every reported polynomial.
    #[arg(long, global = true)]
    ihara: bool,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Report timing_ms as null so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Largest voltage group generated before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    /// Largest number of prime cycle classes enumerated by `series`.
    #[arg(long, global = true, default_value_t = DEFAULT_CLASS_CAP)]
    max_classes: usize,
    /// Largest number of terms in an intermediate polynomial.
    #[arg(long, global = true)]
    term_budget: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Reciprocal Bartholdi zeta function of a hypergraph.
    Zeta { hypergraph: PathBuf },
    /// Derived covering hypergraph of a voltage assignment.
    Cover { hypergraph: PathBuf, voltages: PathBuf },
    /// Bartholdi L-function of one irreducible representation.
    Lfun {
        hypergraph: PathBuf,
        voltages: PathBuf,
        /// `builtin:S2`, `builtin:S3`, `builtin:cyclic-N` or a catalog file.
        #[arg(long)]
        rep: Option<String>,
        /// 1-based index into the catalog.
        #[arg(long, default_value_t = 1)]
        irrep: usize,
    },
    /// Checks the factorisation of the cover's zeta function into L-functions.
    Verify {
        #[arg(required_unless_present = "random")]
        hypergraph: Option<PathBuf>,
        #[arg(required_unless_present = "random")]
        voltages: Option<PathBuf>,
        #[arg(long)]
        rep: Option<String>,
        /// Run this many seeded random instances instead.
        #[arg(long, conflicts_with_all = ["hypergraph", "voltages", "rep"])]
        random: Option<usize>,
    },
    /// Compares the determinant and Euler product series through --order.
    Series { hypergraph: PathBuf },
}

fn config(g: &Global) -> RunConfig {
    RunConfig {
        order: g.order,
        samples: g.samples,
        tolerance: g.tol,
        seed: g.seed,
        out: g.out.clone(),
        ihara: g.ihara,
        json: g.json,
        timing: !g.no_timing,
        group_cap: g.group_cap,
        class_cap: g.max_classes,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Zeta { .. } => "zeta",
        Command::Cover { .. } => "cover",
        Command::Lfun { .. } => "lfun",
        Command::Verify { .. } => "verify",
        Command::Series { .. } => "series",
    }
}

fn run(cfg: &RunConfig, command: &Command) -> Result<Outcome, CliError> {
    let src = |p: &Path| Source::read(p);
    Ok(match command {
        Command::Zeta { hypergraph } => commands::zeta(cfg, &src(hypergraph)?),
        Command::Cover { hypergraph, voltages } => commands::cover(cfg, &src(hypergraph)?, &src(voltages)?),
        Command::Lfun { hypergraph, voltages, rep, irrep } => {
            commands::lfun(cfg, &src(hypergraph)?, &src(voltages)?, rep.as_deref(), *irrep)
        }
        Command::Verify { random: Some(n), .. } => commands::verify_random(cfg, *n),
        Command::Verify { hypergraph: Some(h), voltages: Some(v), rep, .. } => {
            commands::verify(cfg, &src(h)?, &src(v)?, rep.as_deref())
        }
        Command::Verify { .. } => return Err(CliError::Parse("verify needs HYPERGRAPH and VOLTAGES or --random".into())),
        Command::Series { hypergraph } => commands::series(cfg, &src(hypergraph)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(b) = cli.global.term_budget {
        std::env::set_var(hyperzeta::algebra::det::TERM_BUDGET_ENV, b.to_string());
    }
    let cfg = config(&cli.global);
    let outcome = match cfg.check().and_then(|_| run(&cfg, &cli.command)) {
        Ok(o) => o,
        Err(e) => Envelope::new(command_name(&cli.command), &[]).failure(&cfg, &e, Default::default()),
    };
    let pretty = serde_json::to_string_pretty(&outcome.report).expect("report serialises");
    if let Some(path) = &cfg.out {
        if let Err(e) = std::fs::write(path, format!("{pretty}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cfg.json {
        println!("{pretty}");
    } else if outcome.exit == 0 {
        print!("{}", outcome.text);
    } else {
        print!("{}", if outcome.text.ends_with('\n') { outcome.text.clone() } else { format!("{}\n", outcome.text) });
        if let Some(msg) = outcome.report.get("error").and_then(|e| e.get("message")).and_then(|m| m.as_str()) {
            if !outcome.text.contains(msg) {
                eprintln!("error: {msg}");
            }
        }
    }
    ExitCode::from(outcome.exit as u8)
}
