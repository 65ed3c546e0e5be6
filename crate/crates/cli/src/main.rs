//! `ddf`: closed-form evaluation, Monte Carlo and self-validation for D-DF
//! weighted selection combining.

mod output;
mod range;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddf_core::analysis::{aber_wsc1, aber_wsc2, optimize_beta};
use ddf_core::sim::{asymptotic_aber, sweep, SWEEP_SEED_STRIDE};
use ddf_core::validate::{run_validation, Formulas, ValidationOptions};
use ddf_core::{
    ClosedFormContext, SchemeId, SimConfig, SnrMode, SweepAxis, SystemParams, WeightFactor,
    Wsc1Beta,
};
use serde_json::{json, Value};

use output::{write_csv, write_json, Format, Record};
use range::parse_range;

#[derive(Debug, Parser)]
#[command(
    name = "ddf",
    version,
    about = "D-DF relaying with weighted selection combining"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form average BER over an SNR range.
    Analyze {
        /// Comma-separated schemes with a closed form: sc, wsc1, wsc2.
        #[arg(
            long,
            visible_alias = "schemes",
            value_delimiter = ',',
            default_value = "sc,wsc1,wsc2"
        )]
        scheme: Vec<SchemeId>,
        /// P0/N0 in dB: VALUE, START:STOP:STEP or START:STOP:logN.
        #[arg(long, default_value = "0:40:5")]
        snr_db: String,
        /// WSC1 weight; the ABER-optimal weight when omitted.
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo BER at one operating point.
    Simulate {
        #[arg(
            long,
            visible_alias = "scheme",
            value_delimiter = ',',
            default_value = "sc,wsc1,wsc2,lar"
        )]
        schemes: Vec<SchemeId>,
        #[arg(long, default_value_t = 10.0)]
        snr_db: f64,
        /// WSC1 weight; the ABER-optimal weight when omitted.
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo BER of WSC1 over a range of weights, on common realisations.
    SweepBeta {
        /// Weights: VALUE, START:STOP:STEP or START:STOP:logN.
        #[arg(long)]
        beta: String,
        #[arg(
            long,
            visible_alias = "scheme",
            value_delimiter = ',',
            default_value = "wsc1"
        )]
        schemes: Vec<SchemeId>,
        #[arg(long, default_value_t = 20.0)]
        snr_db: f64,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo BER over an SNR range.
    SweepSnr {
        #[arg(long, default_value = "0:30:5")]
        snr_db: String,
        #[arg(
            long,
            visible_alias = "scheme",
            value_delimiter = ',',
            default_value = "sc,wsc1,wsc2,lar"
        )]
        schemes: Vec<SchemeId>,
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Checks the closed forms against integration and simulation.
    Validate {
        /// Fewer tuples and shorter simulations.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        workers: Option<u64>,
    },
}

#[derive(Debug, Clone, Args)]
struct ChannelArgs {
    /// Variance of the source-destination channel.
    #[arg(long, default_value_t = 1.0)]
    sigma0: f64,
    /// Variance of the source-relay channel.
    #[arg(long, default_value_t = 1.0)]
    sigma1: f64,
    /// Variance of the relay-destination channel.
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
}

impl ChannelArgs {
    fn sigma_sq(&self) -> [f64; 3] {
        [self.sigma0, self.sigma1, self.sigma2]
    }
}

#[derive(Debug, Clone, Args)]
struct SimArgs {
    /// Maximum number of fading blocks.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    blocks: u64,
    /// Symbols per block.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    block_len: u64,
    /// Stop early once every scheme has this many errors (0 = never).
    #[arg(long, default_value_t = 200)]
    min_errors: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// exact or estimated source-relay SNR at the destination.
    #[arg(long, default_value = "exact")]
    snr_mode: SnrMode,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<ddf_core::Error> for CliError {
    fn from(e: ddf_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<range::RangeError> for CliError {
    fn from(e: range::RangeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> CliResult<ExitCode> {
    match cmd {
        Command::Analyze {
            scheme,
            snr_db,
            beta,
            channel,
            output,
        } => {
            let snrs = parse_range(&snr_db)?;
            let beta = beta.map(WeightFactor::new).transpose()?;
            let records = analyze(&scheme, &snrs, beta, channel.sigma_sq())?;
            let meta = json!({
                "command": "analyze",
                "version": env!("CARGO_PKG_VERSION"),
                "sigma_sq": channel.sigma_sq(),
                "beta": beta.map(|b| b.get()),
            });
            emit(&output, meta, &records)?;
        }
        Command::Simulate {
            schemes,
            snr_db,
            beta,
            channel,
            sim,
            output,
        } => {
            let cfg = sim_config(&schemes, snr_db, beta, &channel, &sim)?;
            let point = ddf_core::sim::evaluate_point(&cfg)?;
            let records: Vec<Record> = point
                .results
                .iter()
                .map(|r| Record::simulated(snr_db, r))
                .collect();
            emit(&output, sim_metadata("simulate", &cfg), &records)?;
        }
        Command::SweepBeta {
            beta,
            schemes,
            snr_db,
            channel,
            sim,
            output,
        } => {
            let betas = parse_range(&beta)?;
            let cfg = sim_config(&schemes, snr_db, None, &channel, &sim)?;
            let res = sweep(&cfg, SweepAxis::Beta, &betas)?;
            let records = res
                .points
                .iter()
                .flat_map(|p| p.results.iter().map(|r| Record::simulated(p.snr_db, r)))
                .collect::<Vec<_>>();
            emit(&output, sim_metadata("sweep-beta", &cfg), &records)?;
        }
        Command::SweepSnr {
            snr_db,
            schemes,
            beta,
            channel,
            sim,
            output,
        } => {
            let snrs = parse_range(&snr_db)?;
            let cfg = sim_config(&schemes, snrs[0], beta, &channel, &sim)?;
            let res = sweep(&cfg, SweepAxis::SnrDb, &snrs)?;
            let records = res
                .points
                .iter()
                .flat_map(|p| p.results.iter().map(|r| Record::simulated(p.snr_db, r)))
                .collect::<Vec<_>>();
            let mut meta = sim_metadata("sweep-snr", &cfg);
            meta["seed_stride"] = json!(SWEEP_SEED_STRIDE);
            emit(&output, meta, &records)?;
        }
        Command::Validate {
            quick,
            seed,
            workers,
        } => {
            let mut opts = ValidationOptions {
                quick,
                seed,
                ..Default::default()
            };
            if let Some(w) = workers {
                opts.workers = w as usize;
            }
            let checks = run_validation(&opts, &Formulas::default());
            let mut out = io::stdout().lock();
            let mut failed = 0;
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                failed += usize::from(!c.passed);
                writeln!(
                    out,
                    "{tag}  {:<32} {}  ({:.2}s)",
                    c.name, c.detail, c.seconds
                )?;
            }
            writeln!(
                out,
                "{} of {} checks passed",
                checks.len() - failed,
                checks.len()
            )?;
            return Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze(
    schemes: &[SchemeId],
    snrs: &[f64],
    beta: Option<WeightFactor>,
    sigma_sq: [f64; 3],
) -> CliResult<Vec<Record>> {
    if let Some(s) = schemes.iter().find(|s| **s == SchemeId::Lar) {
        return Err(CliError::Usage(format!(
            "{s} has no closed form; use simulate"
        )));
    }
    let mut schemes = schemes.to_vec();
    schemes.sort();
    schemes.dedup();
    let mut records = Vec::new();
    for &snr in snrs {
        let params = SystemParams::new(snr, sigma_sq);
        params.validate()?;
        let ctx = ClosedFormContext::from_params(&params)?;
        for &s in &schemes {
            let rec = match s {
                SchemeId::Sc => Record::analytic(snr, s, None, aber_wsc1(1.0, &ctx)?, None),
                SchemeId::Wsc1 => {
                    let (b, pe) = match beta {
                        Some(b) => (b.get(), aber_wsc1(b.get(), &ctx)?),
                        None => {
                            let opt = optimize_beta(&ctx)?;
                            (opt.beta, opt.aber)
                        }
                    };
                    Record::analytic(snr, s, Some(b), pe, None)
                }
                SchemeId::Wsc2 => {
                    Record::analytic(snr, s, None, aber_wsc2(&ctx)?, asymptotic_aber(s, &params))
                }
                SchemeId::Lar => unreachable!(),
            };
            records.push(rec);
        }
    }
    Ok(records)
}

fn sim_config(
    schemes: &[SchemeId],
    snr_db: f64,
    beta: Option<f64>,
    channel: &ChannelArgs,
    sim: &SimArgs,
) -> CliResult<SimConfig> {
    let params = SystemParams::new(snr_db, channel.sigma_sq())
        .with_block_len(sim.block_len as usize)
        .with_snr_mode(sim.snr_mode);
    let mut cfg = SimConfig::new(params).with_schemes(schemes);
    cfg.beta_wsc1 = match beta {
        Some(b) => Wsc1Beta::Fixed(WeightFactor::new(b)?),
        None => Wsc1Beta::Optimal,
    };
    cfg.max_blocks = sim.blocks;
    cfg.min_errors = sim.min_errors;
    cfg.seed = sim.seed;
    if let Some(w) = sim.workers {
        cfg.workers = w as usize;
    }
    cfg.validate()?;
    Ok(cfg)
}

// Worker count is deliberately left out so output is identical across thread counts.
fn sim_metadata(command: &str, cfg: &SimConfig) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "block_len": cfg.params.block_len,
        "snr_mode": cfg.params.snr_mode.to_string(),
        "sigma_sq": cfg.params.sigma_sq,
        "max_blocks": cfg.max_blocks,
        "min_errors": cfg.min_errors,
        "paired": "all schemes at a point are scored on the same channel and noise realisations",
    })
}

fn emit(args: &OutputArgs, metadata: Value, records: &[Record]) -> CliResult<()> {
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::Runtime(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.format {
        Format::Csv => write_csv(sink, records).map_err(|e| CliError::Runtime(e.to_string())),
        Format::Json => write_json(sink, metadata, records).map_err(CliError::from),
    }
}
