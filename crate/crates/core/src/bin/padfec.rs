//! `padfec` command-line driver.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use padfec::harness::{
    self, format_summary, gnuplot_script, parse_ebn0_list, parse_systems, write_results, Preset,
    SweepConfig, TrialLedger,
};
use padfec::Error;

#[derive(Parser)]
#[command(
    name = "padfec",
    version,
    about = "AES padding bits as an error-correcting code: Monte-Carlo sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a configuration file and flags.
    Sweep {
        /// Flat `key = value` configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a canned reproduction sweep: fig5, fig6 or discussion.
    Repro {
        preset: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Comma-separated systems: baseline, separate, proposed.
    #[arg(long)]
    system: Option<String>,
    /// Payload bits k.
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated Eb/N0 values in dB.
    #[arg(long, allow_hyphen_values = true)]
    ebn0: Option<String>,
    #[arg(long)]
    max_queries: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    min_block_errors: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    gnuplot: bool,
    /// Suppress the summary table.
    #[arg(long)]
    quiet: bool,
}

impl Overrides {
    fn apply(&self, config: &mut SweepConfig) -> Result<(), Error> {
        if let Some(s) = &self.system {
            config.systems = parse_systems(s)?;
        }
        if let Some(k) = self.k {
            config.payload_bits = k;
        }
        if let Some(list) = &self.ebn0 {
            config.ebn0_db = parse_ebn0_list(list)?;
        }
        if let Some(q) = self.max_queries {
            config.max_queries = q;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(m) = self.min_block_errors {
            config.min_block_errors = m;
        }
        if let Some(m) = self.max_trials {
            config.max_trials = m;
        }
        if let Some(t) = self.threads {
            config.threads = t;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        config.validate()
    }
}

fn execute(configs: &[SweepConfig], out: &Path, overrides: &Overrides) -> Result<(), Error> {
    let mut ledgers: Vec<TrialLedger> = Vec::new();
    for config in configs {
        ledgers.extend(harness::run_sweep_with(config, |ledger| {
            if !overrides.quiet {
                eprintln!(
                    "{} k={} Eb/N0={} dB: {} trials, BLER {:.3e}",
                    ledger.system,
                    ledger.k,
                    ledger.ebn0_db,
                    ledger.trials,
                    ledger.bler()
                );
            }
        })?);
    }
    write_results(&ledgers, out)?;
    if overrides.gnuplot {
        let name = out
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        std::fs::write(out.with_extension("gp"), gnuplot_script(&ledgers, &name))?;
    }
    if !overrides.quiet {
        print!("{}", format_summary(&ledgers));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let (configs, overrides) = match cli.command {
        Command::Sweep { config, overrides } => {
            let mut sweep = match config {
                Some(path) => SweepConfig::parse(&std::fs::read_to_string(&path)?)?,
                None => SweepConfig::default(),
            };
            overrides.apply(&mut sweep)?;
            (vec![sweep], overrides)
        }
        Command::Repro { preset, overrides } => {
            let preset: Preset = preset.parse()?;
            let mut configs = preset.configs();
            for config in &mut configs {
                overrides.apply(config)?;
            }
            (configs, overrides)
        }
    };
    let out = configs[0]
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results.csv"));
    execute(&configs, &out, &overrides)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("padfec: {e}");
            ExitCode::from(match e {
                Error::Io(_) => 3,
                _ => 2,
            })
        }
    }
}
