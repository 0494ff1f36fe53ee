//! Command-line front-end: FER sweeps, execution-time sweeps, partition
//! design, and a quick self test.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psclf::channel::{modulate, transmit_noiseless};
use psclf::crc::parse_crc_list;
use psclf::design::{design_partitions_uniform, load_cdf_file};
use psclf::flip::{psclf_decode, DecodeStatus, FlipConfig};
use psclf::latency::{sc_partial_latency, scl_latency, LatencyParams};
use psclf::polar::{build_message_word, load_info_set_file, PartitionSpec, PolarCode};
use psclf::sim::{
    design_from_cdf, parse_snr_sweep, run_design_pipeline, run_fer_sweep, write_results,
    DecoderKind, DesignConfig, ExperimentConfig, StopRule,
};
use psclf::{Error, Result};

#[derive(Parser)]
#[command(name = "psclf", version, about = "CRC-aided polar codes with partitioned SCL flip decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frame-error-rate sweep over an SNR range
    Fer(RunArgs),
    /// Modeled average execution time paired with measured FER
    Exectime(RunArgs),
    /// Estimate the first-error CDF and derive partition/CRC structure
    Design(DesignArgs),
    /// Quick internal consistency checks
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// Block length N (power of two)
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Payload bits K (CRC excluded)
    #[arg(long, default_value_t = 512)]
    k: usize,
    /// Per-partition CRC lengths, e.g. "7,7,7,11"
    #[arg(long, default_value = "7,7,7,11")]
    crc: String,
    /// Explicit partition boundaries, e.g. "410,590,708,1023"
    #[arg(long)]
    mu: Option<String>,
    /// Derive boundaries from a first-error CDF file
    #[arg(long)]
    cdf: Option<PathBuf>,
    /// Partition count when deriving boundaries (defaults to the CRC list length)
    #[arg(long)]
    partitions: Option<usize>,
    /// sc | scl | ascl | scf | sclf | psclf
    #[arg(long, default_value = "psclf")]
    decoder: String,
    /// List size L (power of two)
    #[arg(long, default_value_t = 4)]
    list: usize,
    /// ASCL list sizes, strictly ascending
    #[arg(long = "list-schedule", default_value = "1,2,4,8,16")]
    list_schedule: String,
    /// Trial budget per partition
    #[arg(long, default_value_t = 15)]
    tmax: usize,
    /// Flip-metric normalization
    #[arg(long, default_value_t = 1.2)]
    alpha: f64,
    /// Single value or START:STEP:STOP in dB
    #[arg(long, default_value = "2.0")]
    snr: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Processing elements of the latency model
    #[arg(long, default_value_t = 64)]
    phi: usize,
    /// Explicit information-set file (overrides --n/--k construction)
    #[arg(long = "info-set")]
    info_set: Option<PathBuf>,
    /// Construction SNR for the information set
    #[arg(long = "design-snr", default_value_t = 2.0)]
    design_snr: f64,
    #[arg(long = "min-errors", default_value_t = 200)]
    min_errors: u64,
    #[arg(long = "max-frames", default_value_t = 1_000_000)]
    max_frames: u64,
    /// Replace the channel with its noiseless limit
    #[arg(long)]
    noiseless: bool,
    /// CSV output path (a .manifest.txt is written next to it)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long, default_value_t = 512)]
    k: usize,
    /// Total CRC budget to distribute
    #[arg(long = "crc-total", default_value_t = 32)]
    crc_total: usize,
    /// Minimum CRC length per partition
    #[arg(long = "crc-floor", default_value_t = 7)]
    crc_floor: usize,
    #[arg(long, default_value_t = 4)]
    partitions: usize,
    #[arg(long, default_value_t = 4)]
    list: usize,
    /// Estimation SNR in dB
    #[arg(long, default_value = "2.0")]
    snr: String,
    /// Construction SNR for the information set
    #[arg(long = "design-snr", default_value_t = 2.0)]
    design_snr: f64,
    /// Reuse an existing CDF file instead of estimating
    #[arg(long)]
    cdf: Option<PathBuf>,
    #[arg(long = "min-events", default_value_t = 2000)]
    min_events: u64,
    #[arg(long = "max-frames", default_value_t = 10_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long = "info-set")]
    info_set: Option<PathBuf>,
    /// Where to write the estimated CDF
    #[arg(long)]
    out: Option<PathBuf>,
}

fn resolve_code(
    info_set: &Option<PathBuf>,
    n: usize,
    k: usize,
    crc_total: usize,
    design_snr: f64,
) -> Result<PolarCode> {
    match info_set {
        Some(path) => load_info_set_file(path),
        None => PolarCode::construct(n, k, crc_total, design_snr),
    }
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let crc_lengths = parse_crc_list(&args.crc)?;
    let crc_total: usize = crc_lengths.iter().sum();
    let code = resolve_code(&args.info_set, args.n, args.k, crc_total, args.design_snr)?;
    let partition_count = args.partitions.unwrap_or(crc_lengths.len());
    if crc_lengths.len() != partition_count {
        return Err(Error::invalid(
            "crc",
            format!("{} lengths given for {partition_count} partitions", crc_lengths.len()),
        ));
    }
    let mu = match (&args.mu, &args.cdf) {
        (Some(_), Some(_)) => return Err(Error::invalid("mu", "give either --mu or --cdf, not both")),
        (Some(list), None) => list
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::invalid("mu", format!("bad entry {s:?}"))))
            .collect::<Result<Vec<usize>>>()?,
        (None, Some(path)) => {
            let cdf = load_cdf_file(path)?;
            psclf::design::design_partitions(&cdf, partition_count, Some(code.info_set()))?
        }
        (None, None) => design_partitions_uniform(&code, partition_count)?,
    };
    let partitions = PartitionSpec::new(&code, mu, crc_lengths)?;
    let mut config = ExperimentConfig::new(code, partitions);
    config.decoder = DecoderKind::parse(&args.decoder)?;
    config.list_size = args.list;
    config.list_schedule = args
        .list_schedule
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::invalid("list_schedule", format!("bad entry {s:?}"))))
        .collect::<Result<Vec<usize>>>()?;
    config.flip = FlipConfig::new(args.tmax, args.alpha)?;
    config.snr_points = parse_snr_sweep(&args.snr)?;
    config.noiseless = args.noiseless;
    config.stop = StopRule { min_errors: args.min_errors, max_frames: args.max_frames };
    config.seed = args.seed;
    config.workers = args.workers;
    config.phi = args.phi;
    config.validate()?;
    Ok(config)
}

fn cmd_fer(args: &RunArgs, exec_time: bool) -> Result<()> {
    let config = build_config(args)?;
    let rows = run_fer_sweep(&config)?;
    if exec_time {
        println!("{:>8} {:>12} {:>12}", "ebn0_db", "fer", "avg_cycles");
        for r in &rows {
            println!("{:>8.3} {:>12.4e} {:>12.1}", r.ebn0_db, r.fer, r.cycles);
        }
    } else {
        println!(
            "{:>8} {:>9} {:>7} {:>12} {:>12} {:>8}",
            "ebn0_db", "frames", "errors", "fer", "ci", "tbar"
        );
        for r in &rows {
            println!(
                "{:>8.3} {:>9} {:>7} {:>12.4e} {:>12.4e} {:>8.3}",
                r.ebn0_db, r.frames, r.errors, r.fer, r.ci, r.tbar
            );
        }
    }
    if let Some(path) = &args.out {
        write_results(path, &rows, &config)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_design(args: &DesignArgs) -> Result<()> {
    let code = resolve_code(&args.info_set, args.n, args.k, args.crc_total, args.design_snr)?;
    let ebn0_db = args
        .snr
        .parse::<f64>()
        .map_err(|_| Error::invalid("snr", "design takes a single SNR value"))?;
    let config = DesignConfig {
        code,
        list_size: args.list,
        ebn0_db,
        partition_count: args.partitions,
        crc_total: args.crc_total,
        crc_floor: args.crc_floor,
        min_events: args.min_events,
        max_frames: args.max_frames,
        seed: args.seed,
        workers: args.workers,
    };
    let artifacts = match &args.cdf {
        Some(path) => design_from_cdf(&load_cdf_file(path)?, &config)?,
        None => run_design_pipeline(&config)?,
    };
    let fmt = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    println!("mu = {}", fmt(&artifacts.mu));
    println!("crc = {}", fmt(&artifacts.crc_lengths));
    let probs: Vec<String> = artifacts.error_probs.iter().map(|p| format!("{p:.4}")).collect();
    println!("partition_error_probs = {}", probs.join(","));
    println!("events = {}", artifacts.cdf.metadata.events);
    if let Some(path) = &args.out {
        artifacts.cdf.write_file(path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_selftest() -> Result<()> {
    let check = |name: &str, ok: bool| -> Result<()> {
        println!("{name}: {}", if ok { "ok" } else { "FAILED" });
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("selftest", name.to_string()))
        }
    };
    let params = LatencyParams::new(1024, 64, 544)?;
    check("latency model reference points", sc_partial_latency(1023, &params)? == 2080 && scl_latency(&params) == 2624)?;

    let code = PolarCode::construct(256, 100, 28, 2.0)?;
    let partitions = PartitionSpec::new(&code, design_partitions_uniform(&code, 4)?, vec![7, 7, 7, 7])?;
    let mut payload = vec![0u8; code.payload_len()];
    for (i, b) in payload.iter_mut().enumerate() {
        *b = ((i * 7 + 3) % 5 < 2) as u8;
    }
    let word = build_message_word(&payload, &code, &partitions)?;
    let u = code.insert_message(&word.with_crc)?;
    let frame = transmit_noiseless(&modulate(&code.encode(&u)?));
    let outcome = psclf_decode(&frame, &code, &partitions, 4, FlipConfig::default(), Some(&u))?;
    check(
        "noiseless round trip (N=256, P=4)",
        outcome.status == DecodeStatus::Success && outcome.decoded.as_deref() == Some(u.as_slice()),
    )?;

    let mut enc = u.clone();
    psclf::polar::polar_transform(&mut enc);
    psclf::polar::polar_transform(&mut enc);
    check("polar transform involution", enc == u)?;
    println!("selftest passed");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fer(args) => cmd_fer(args, false),
        Command::Exectime(args) => cmd_fer(args, true),
        Command::Design(args) => cmd_design(args),
        Command::Selftest => cmd_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
