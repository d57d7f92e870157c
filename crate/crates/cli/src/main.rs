use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcdec_cli::commands::{self, parse_ebno_list, RunFlags};

/// Monte Carlo simulation of iterative product-code decoders.
#[derive(Parser)]
#[command(name = "pcdec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run BER sweeps and write a results CSV.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Results file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail when a point runs out of frames.
        #[arg(long)]
        strict: bool,
    },
    /// Optimize scaling schedules and write a configuration fragment.
    #[command(name = "optimize-w")]
    OptimizeW {
        #[command(flatten)]
        run: RunArgs,
        /// Fragment file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print gains over iBDD and capacity gaps.
    Report {
        /// Results CSV.
        input: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        target_ber: f64,
        /// Rate for capacity limits; defaults to the code rate in the file.
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file; repeat to merge several, later files win.
    #[arg(long)]
    config: Vec<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "PCDEC_WORKERS")]
    workers: Option<usize>,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    /// Eb/N0 points in dB: `4.5,4.6` or `start:step:stop`.
    #[arg(long, allow_hyphen_values = true)]
    ebno: Option<String>,
    #[arg(long)]
    min_frame_errors: Option<u64>,
    #[arg(long)]
    max_frames: Option<u64>,
    /// Suppress progress output.
    #[arg(long, short)]
    quiet: bool,
    /// Further `--section.key=value` overrides, after the named flags.
    #[arg(allow_hyphen_values = true, trailing_var_arg = true, num_args = 0..)]
    overrides: Vec<String>,
}

impl RunArgs {
    fn flags(&self) -> anyhow::Result<RunFlags> {
        Ok(RunFlags {
            configs: self.config.clone(),
            seed: self.seed,
            workers: self.workers,
            algorithms: self.algorithms.clone(),
            ebno: self.ebno.as_deref().map(parse_ebno_list).transpose()?,
            min_frame_errors: self.min_frame_errors,
            max_frames: self.max_frames,
            overrides: self.overrides.clone(),
        })
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate { run, out, strict } => {
            let mut flags = run.flags()?;
            if strict {
                flags.overrides.push("--simulation.strict=true".into());
            }
            commands::simulate(&flags, out.as_deref(), run.quiet)?;
        }
        Command::OptimizeW { run, out } => {
            commands::optimize_w(&run.flags()?, out.as_deref(), run.quiet)?;
        }
        Command::Report { input, target_ber, rate, out } => {
            let text = commands::report(&input, target_ber, rate)?;
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
