//! `qkd`: thresholds, QBER sweeps and advantage-distillation runs from the
//! command line.
//!
//! Exit codes: 0 on success, 2 on usage or domain errors, 3 on I/O errors.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qkd_core::AttackVariant;

#[derive(Parser, Debug)]
#[command(name = "qkd", version, about = "Noisy-channel QKD: information curves, entanglement limits and advantage distillation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    /// 4-state attack maximising Eve's Shannon information
    Shannon4,
    /// 4-state attack reaching the 1/4 entanglement limit
    Extremal4,
    /// 6-state attack
    Sixstate,
}

impl From<Variant> for AttackVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Shannon4 => AttackVariant::ShannonOptimal4,
            Variant::Extremal4 => AttackVariant::Extremal4,
            Variant::Sixstate => AttackVariant::SixState,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the crossing, entanglement, theorem-1 and CHSH boundaries
    Thresholds {
        #[arg(long, value_enum)]
        variant: Variant,
    },
    /// Tabulate information, entanglement and theorem-1 figures over a QBER grid
    Sweep {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long, value_parser = parse_number)]
        from: f64,
        #[arg(long, value_parser = parse_number)]
        to: f64,
        #[arg(long, value_parser = parse_number)]
        step: f64,
        /// Output CSV path; stdout when omitted
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Exact and simulated repeat-code advantage distillation
    Ad {
        #[arg(long, value_enum)]
        variant: Variant,
        /// QBER, as a decimal or a fraction such as 1/3
        #[arg(long, value_parser = parse_number)]
        qber: f64,
        /// Block length
        #[arg(long)]
        n: u32,
        /// Simulated blocks; 0 prints exact figures only
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the information-curve figure data with threshold markers
    Fig1 {
        /// Output CSV path; stdout when omitted
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

/// Accepts `0.25` as well as `1/4`.
fn parse_number(s: &str) -> Result<f64, String> {
    let bad = || format!("'{s}' is not a number or fraction");
    match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(bad());
            }
            Ok(num / den)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Thresholds { variant } => commands::thresholds(variant.into()),
        Command::Sweep { variant, from, to, step, out } => {
            commands::sweep(variant.into(), from, to, step, out.as_deref())
        }
        Command::Ad { variant, qber, n, trials, seed } => commands::ad(variant.into(), qber, n, trials, seed),
        Command::Fig1 { out } => commands::fig1(out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qkd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
