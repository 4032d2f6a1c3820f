use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use asdlab_core::frobchar::FrobEngine;
use asdlab_core::pipeline::{self, render, CharpolyTarget, ExpandTarget, OutputFormat, RingChoice, RunConfig, Tabular};
use asdlab_core::surface::{CountBudget, CountMethod};

#[derive(Parser)]
#[command(name = "asdlab", version, about = "Noncongruence cuspforms, Frobenius polynomials, and congruence checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Series precision (number of coefficients).
    #[arg(long, global = true, default_value_t = 256)]
    prec: usize,
    /// Output format: json, csv, or text.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Fiber-count cache directory (ASDLAB_CACHE takes precedence).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Naive counting is used while q^2 stays below this.
    #[arg(long, global = true, default_value_t = CountBudget::default().naive_q2_cap)]
    naive_cap: u64,
    /// Baby-step giant-step counting is used while q stays below this.
    #[arg(long, global = true, default_value_t = CountBudget::default().bsgs_q_cap)]
    bsgs_cap: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Naive,
    Bsgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    /// h_j^[n]
    H,
    Eta,
    T,
    E2,
}

#[derive(Subcommand)]
enum Command {
    /// Print a q-expansion.
    Expand {
        #[arg(long, value_enum, default_value = "h")]
        form: Form,
        #[arg(long, default_value_t = 6)]
        group: u64,
        #[arg(long, default_value_t = 1)]
        j: u64,
        /// q or zmod:p:k
        #[arg(long, default_value = "q")]
        ring: String,
    },
    /// Fiber traces a_t over F_{p^r}.
    Count {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Characteristic polynomial of Frobenius.
    Charpoly {
        #[arg(long, default_value_t = 6)]
        group: u64,
        #[arg(long)]
        prime: u64,
        /// new, full, or an index j
        #[arg(long, default_value = "new")]
        space: String,
    },
    /// Modified Hecke eigenvalues against the reference table.
    Table1,
    /// New-part Frobenius polynomials against the reference table.
    Table2,
    /// Congruence suite over a prime range.
    Verify {
        /// Check a single prime.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 53)]
        pmax: u64,
        #[arg(long, default_value_t = 1200)]
        max_index: usize,
    },
    /// Newform coefficients against point counts.
    Compare {
        /// Bound for both residue classes (default 199 for p = 1 mod 6, 101 otherwise).
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// Discriminants and Frobenius orders of the Gaussian quartics.
    GaloisTable,
    /// Fiber-count cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    List,
    Clear,
    /// Count and store every table needed for a prime range.
    Warm {
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 53)]
        pmax: u64,
        #[arg(long, default_value_t = 6)]
        group: u64,
    },
}

fn emit<T: Tabular>(report: &T, format: OutputFormat) -> asdlab_core::Result<bool> {
    print!("{}", render(report, format)?);
    Ok(report.passed())
}

fn note_counts(engine: &FrobEngine) {
    eprintln!("trace tables counted: {}", engine.tables_counted());
}

fn run(cli: Cli) -> asdlab_core::Result<bool> {
    let g = cli.global;
    let format: OutputFormat = g.format.parse()?;
    let mut cfg = RunConfig {
        prec: g.prec,
        budget: CountBudget { naive_q2_cap: g.naive_cap, bsgs_q_cap: g.bsgs_cap },
        cache_dir: g.cache_dir,
        format,
        ..RunConfig::default()
    };
    cfg.validate()?;
    match cli.command {
        Command::Expand { form, group, j, ring } => {
            let target = match form {
                Form::H => ExpandTarget::Basis { n: group, j },
                Form::Eta => ExpandTarget::Eta4z6,
                Form::T => ExpandTarget::Hauptmodul,
                Form::E2 => ExpandTarget::E2,
            };
            let ring: RingChoice = ring.parse()?;
            emit(&pipeline::cmd_expand(target, ring, cfg.prec)?, format)
        }
        Command::Count { prime, degree, method } => {
            let method = method.map(|m| match m {
                Method::Naive => CountMethod::Naive,
                Method::Bsgs => CountMethod::Bsgs,
            });
            emit(&pipeline::cmd_count(&cfg, prime, degree, method)?, format)
        }
        Command::Charpoly { group, prime, space } => {
            let target = match space.as_str() {
                "new" => CharpolyTarget::Wnew,
                "full" => CharpolyTarget::Full,
                j => CharpolyTarget::Wj(j.parse().map_err(|_| asdlab_core::Error::InvalidInput(format!("bad space {j:?}")))?),
            };
            let engine = cfg.engine()?;
            emit(&pipeline::cmd_charpoly(&engine, group, prime, target)?, format)
        }
        Command::Table1 => emit(&pipeline::cmd_table1(&cfg)?, format),
        Command::Table2 => {
            let engine = cfg.engine()?;
            let ok = emit(&pipeline::cmd_table2(&engine)?, format)?;
            note_counts(&engine);
            Ok(ok)
        }
        Command::Verify { prime, pmin, pmax, max_index } => {
            (cfg.pmin, cfg.pmax) = prime.map_or((pmin, pmax), |p| (p, p));
            cfg.max_index = max_index;
            let engine = cfg.engine()?;
            let ok = emit(&pipeline::cmd_verify_all(&cfg, &engine)?, format)?;
            note_counts(&engine);
            Ok(ok)
        }
        Command::Compare { pmax } => {
            let engine = cfg.engine()?;
            let (split, inert) = pmax.map_or((199, 101), |p| (p, p));
            let ok = emit(&pipeline::cmd_compare(&engine, split, inert)?, format)?;
            note_counts(&engine);
            Ok(ok)
        }
        Command::GaloisTable => emit(&pipeline::cmd_galois_table()?, format),
        Command::Cache { action } => match action {
            CacheAction::List => emit(&pipeline::cmd_cache_list(&cfg)?, format),
            CacheAction::Clear => emit(&pipeline::cmd_cache_clear(&cfg)?, format),
            CacheAction::Warm { pmin, pmax, group } => {
                (cfg.pmin, cfg.pmax) = (pmin, pmax);
                emit(&pipeline::cmd_cache_warm(&cfg, group)?, format)
            }
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("asdlab: {e}");
            ExitCode::from(2)
        }
    }
}
