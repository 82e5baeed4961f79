use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use qkd_core::advantage_distillation::AdEstimate;
use qkd_core::sweep::{self, format_sig};
use qkd_core::{attack_from_qber, min_block_length, simulate, theorem1, AdExact, AttackVariant};

/// Block lengths searched by `ad` for the first useful one.
const MIN_BLOCK_SEARCH: u32 = 200;

#[derive(Debug)]
pub enum CliError {
    Domain(qkd_core::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<qkd_core::Error> for CliError {
    fn from(e: qkd_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn with_output<F>(out: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn thresholds(variant: AttackVariant) -> Result<()> {
    let t = sweep::thresholds(variant)?;
    with_output(None, |w| sweep::write_thresholds(&t, w))
}

pub fn sweep(variant: AttackVariant, from: f64, to: f64, step: f64, out: Option<&Path>) -> Result<()> {
    // compute everything before touching the output file
    let rows = sweep::sweep(variant, from, to, step)?;
    with_output(out, |w| sweep::write_sweep_csv(&rows, w))
}

pub fn fig1(out: Option<&Path>) -> Result<()> {
    let fig = sweep::fig1()?;
    with_output(out, |w| sweep::write_fig1(&fig, w))
}

pub fn ad(variant: AttackVariant, qber: f64, n: u32, trials: u64, seed: u64) -> Result<()> {
    let params = attack_from_qber(variant, qber)?;
    let exact = AdExact::compute(&params, n)?;
    let th1 = theorem1(&params);
    let min_n = min_block_length(&params, MIN_BLOCK_SEARCH);
    let estimate = if trials > 0 {
        Some(simulate(&params, n, trials, seed)?)
    } else {
        None
    };
    with_output(None, |w| {
        writeln!(w, "variant,{variant}")?;
        writeln!(w, "qber,{}", format_sig(qber))?;
        writeln!(w, "n,{n}")?;
        writeln!(w, "p_accept,{}", format_sig(exact.p_accept))?;
        writeln!(w, "beta,{}", format_sig(exact.beta))?;
        writeln!(w, "gamma,{}", format_sig(exact.gamma))?;
        writeln!(w, "gamma_full,{}", format_sig(exact.gamma_full))?;
        writeln!(w, "th1_lhs,{}", format_sig(th1.lhs))?;
        writeln!(w, "th1_rhs,{}", format_sig(th1.rhs))?;
        writeln!(w, "th1_holds,{}", th1.holds)?;
        match min_n {
            Some(m) => writeln!(w, "min_block_length,{m}")?,
            None => writeln!(w, "min_block_length,none")?,
        }
        if let Some(est) = &estimate {
            write_estimate(w, est)?;
        }
        Ok(())
    })
}

fn write_estimate(w: &mut dyn Write, est: &AdEstimate) -> io::Result<()> {
    let bob_correct = est.accepted - est.bob_errors;
    writeln!(w, "seed,{}", est.seed)?;
    writeln!(w, "trials,{}", est.trials)?;
    writeln!(w, "accepted,{}", est.accepted)?;
    writeln!(w, "bob_errors,{}", est.bob_errors)?;
    writeln!(w, "eve_errors,{}", est.eve_errors)?;
    for (name, p, count) in [
        ("emp_p_accept", est.acceptance_rate(), est.trials),
        ("emp_beta", est.beta(), est.accepted),
        ("emp_gamma", est.gamma(), bob_correct),
        ("emp_gamma_full", est.gamma_full(), est.accepted),
    ] {
        let se = (p * (1.0 - p) / count as f64).sqrt();
        writeln!(w, "{name},{},{}", format_sig(p), format_sig(se))?;
    }
    Ok(())
}
