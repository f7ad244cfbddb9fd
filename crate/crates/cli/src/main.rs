use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stsdisc_cli::checks::{self, Settings};
use stsdisc_cli::commands::{self, ExactArgs};
use stsdisc_cli::render::render;
use stsdisc_cli::report::ExperimentReport;
use stsdisc_core::anneal::{AnnealConfig, Energy, DEFAULT_COOLING, DEFAULT_LABELLINGS, DEFAULT_RESTARTS};
use stsdisc_core::search::{SearchCheckpoint, SearchOptions, DEFAULT_CHECKPOINT_INTERVAL, DEFAULT_NODE_BUDGET};
use stsdisc_core::sts::{construct, parse_text, seeded_working_family, to_text};
use stsdisc_core::{Order, DEFAULT_SEED};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "stsdisc", version, about = "Colouring discrepancy of Steiner triple systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Master seed; every sampled quantity derives from it.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Exact {
    #[arg(long)]
    n: u32,
    /// Relabellings in the family for orders above 9.
    #[arg(long, default_value_t = DEFAULT_LABELLINGS)]
    labellings: usize,
    /// Node budget before giving up with a checkpoint.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Save progress here periodically and when the budget runs out.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_INTERVAL)]
    checkpoint_interval: u64,
    /// Continue from a saved checkpoint.
    #[arg(long)]
    resume: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnergyArg {
    Max,
    L4,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every labelled STS(n) for n <= 9.
    Enumerate {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Print only the counts.
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the constructed STS(n) in the exchange format.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut-colouring values and optimal cut sizes.
    Delta2Formula {
        #[arg(long, value_delimiter = ',', default_value = "7,9,13,15,19,21")]
        n: Vec<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Branch-and-bound for the least worst-case two-colour discrepancy.
    ExactSearch(Exact),
    /// Decide whether a two-colouring balances every system exactly.
    ZeroDisc(Exact),
    /// Census of all two-flip perturbations of the optimal cut colouring.
    Basin {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_LABELLINGS)]
        labellings: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Simulated annealing over a family of systems.
    Sa {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        r: u8,
        #[arg(long, default_value_t = DEFAULT_LABELLINGS)]
        labellings: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: u64,
        /// Steps per restart [default: 20·C(n,3)].
        #[arg(long)]
        steps: Option<u64>,
        /// Initial temperature on the numerator scale [default: m/4].
        #[arg(long)]
        t_initial: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_COOLING)]
        cooling: f64,
        #[arg(long, value_enum, default_value_t = EnergyArg::L4)]
        energy: EnergyArg,
        #[command(flatten)]
        output: Output,
    },
    /// Mean worst-case discrepancy of uniformly random colourings.
    RandomStats {
        #[arg(long, value_delimiter = ',', default_value = "7,9,13,15,19,21")]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        r: Vec<u8>,
        #[arg(long, default_value_t = 5000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_LABELLINGS)]
        labellings: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance checks.
    VerifyAll {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Smaller budgets with wider tolerances.
        #[arg(long)]
        quick: bool,
        /// Only these checks (1-10).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Also validate these system files.
        #[arg(long)]
        sts: Vec<PathBuf>,
    },
    /// Write one system of the working family in the exchange format.
    ExportSts {
        #[arg(long)]
        n: u32,
        /// Position in the family: every labelled system for n <= 9, relabellings otherwise.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = DEFAULT_LABELLINGS)]
        labellings: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read and validate a system file.
    ImportSts { path: PathBuf },
}

fn orders(ns: &[u32]) -> stsdisc_core::Result<Vec<Order>> {
    ns.iter().map(|&n| Order::new(n)).collect()
}

fn emit(report: &ExperimentReport, out: Option<&Path>) -> anyhow::Result<()> {
    print!("{}", render(report));
    if let Some(path) = out {
        report.write(path)?;
    }
    Ok(())
}

fn write_or_print(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_exact(
    args: Exact,
    runner: fn(ExactArgs) -> stsdisc_core::Result<(ExperimentReport, Option<SearchCheckpoint>)>,
) -> anyhow::Result<()> {
    let resume = match &args.resume {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(serde_json::from_str(&text).context("malformed checkpoint")?)
        }
        None => None,
    };
    let mut save_error = None;
    let mut save = |cp: &SearchCheckpoint| {
        if let Some(path) = &args.checkpoint {
            let written = serde_json::to_string_pretty(cp)
                .map_err(anyhow::Error::from)
                .and_then(|json| std::fs::write(path, json).map_err(anyhow::Error::from));
            if let Err(err) = written {
                save_error.get_or_insert(err);
            }
        }
    };
    let (report, checkpoint) = runner(ExactArgs {
        order: Order::new(args.n)?,
        labellings: args.labellings,
        seed: args.output.seed,
        options: SearchOptions {
            budget: args.budget,
            checkpoint_interval: args.checkpoint_interval,
            resume,
        },
        on_checkpoint: &mut save,
    })?;
    if let Some(err) = save_error {
        return Err(err.context("saving checkpoint"));
    }
    emit(&report, args.output.out.as_deref())?;
    if let (Some(_), Some(path)) = (checkpoint, &args.checkpoint) {
        eprintln!("budget exhausted; progress saved to {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Enumerate { n, count_only, output } => {
            let report = commands::enumerate(&orders(&n)?, output.seed)?;
            if count_only {
                if let stsdisc_cli::report::Payload::Enumerate(rows) = &report.payload {
                    for row in rows {
                        println!("{}", row.count);
                    }
                }
                if let Some(path) = &output.out {
                    report.write(path)?;
                }
            } else {
                emit(&report, output.out.as_deref())?;
            }
        }
        Command::Construct { n, out } => {
            write_or_print(&to_text(&construct(Order::new(n)?)?), out.as_deref())?;
        }
        Command::Delta2Formula { n, output } => {
            emit(&commands::delta2_formula(&orders(&n)?, output.seed)?, output.out.as_deref())?;
        }
        Command::ExactSearch(args) => run_exact(args, commands::exact_search)?,
        Command::ZeroDisc(args) => run_exact(args, commands::zero_disc)?,
        Command::Basin { n, labellings, output } => {
            emit(
                &commands::basin(Order::new(n)?, labellings, output.seed)?,
                output.out.as_deref(),
            )?;
        }
        Command::Sa {
            n,
            r,
            labellings,
            restarts,
            steps,
            t_initial,
            cooling,
            energy,
            output,
        } => {
            let cfg = AnnealConfig {
                r,
                labellings,
                restarts,
                steps_per_restart: steps,
                t_initial,
                cooling,
                seed: output.seed,
                energy: match energy {
                    EnergyArg::Max => Energy::Max,
                    EnergyArg::L4 => Energy::L4,
                },
            };
            emit(&commands::anneal(&orders(&n)?, &cfg)?, output.out.as_deref())?;
        }
        Command::RandomStats {
            n,
            r,
            trials,
            labellings,
            output,
        } => {
            let report = commands::random_stats(&orders(&n)?, &r, trials, labellings, output.seed)?;
            emit(&report, output.out.as_deref())?;
        }
        Command::VerifyAll { seed, quick, only, sts } => {
            let settings = Settings { seed, quick };
            let mut failed = 0;
            for (i, check) in checks::ALL.iter().enumerate() {
                if !only.is_empty() && !only.contains(&(i as u8 + 1)) {
                    continue;
                }
                let result = check(&settings);
                println!("{result}");
                failed += usize::from(result.failed());
            }
            for path in &sts {
                let result = checks::sts_file(path);
                println!("{result}");
                failed += usize::from(result.failed());
            }
            println!("{failed} check(s) failed");
            if failed > 0 {
                return Ok(EXIT_FAILURE);
            }
        }
        Command::ExportSts {
            n,
            index,
            labellings,
            seed,
            out,
        } => {
            let family = seeded_working_family(Order::new(n)?, labellings, seed)?;
            let Some(system) = family.systems().get(index) else {
                bail!("index {index} out of range for a family of {}", family.len());
            };
            write_or_print(&to_text(system), out.as_deref())?;
        }
        Command::ImportSts { path } => {
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let system = parse_text(&text)?;
            println!("valid STS({}) with {} blocks", system.order(), system.blocks().len());
        }
    }
    Ok(0)
}

/// Invalid orders and malformed systems exit with 3, anything else with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    use stsdisc_core::Error as E;
    match err.downcast_ref::<E>() {
        Some(
            E::InvalidOrder(_)
            | E::Infeasible { .. }
            | E::ConstructionDomain { .. }
            | E::InvalidTriple { .. }
            | E::PairCoverage { .. }
            | E::Parse { .. },
        ) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
