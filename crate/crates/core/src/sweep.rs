//! QBER sweeps and threshold summaries, plus their CSV/text renderings.

use std::io::{self, Write};

use crate::advantage_distillation::{theorem1, theorem1_boundary};
use crate::attack_model::{attack_from_qber, joint_distribution, AttackVariant};
use crate::entanglement::{build_rho_ab, chsh_boundary, chsh_horodecki, entanglement_threshold, is_entangled};
use crate::error::{Error, Result};
use crate::info_theory::{ck_bound, i_bob, i_eve, qber0};

pub const SWEEP_HEADER: &str = "qber,f,i_bob,i_eve,ck_bound,min_pt_eig,entangled,th1_lhs,th1_rhs,th1_holds,chsh_m";

/// Significant digits of every CSV number.
pub const CSV_SIGNIFICANT_DIGITS: usize = 12;

/// Range and step of the information-curve figure.
pub const FIG1_FROM: f64 = 0.0;
pub const FIG1_TO: f64 = 0.30;
pub const FIG1_STEP: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub qber: f64,
    pub f: f64,
    pub i_bob: f64,
    pub i_eve: f64,
    pub ck_bound: f64,
    pub min_pt_eig: f64,
    pub entangled: bool,
    pub th1_lhs: f64,
    pub th1_rhs: f64,
    pub th1_holds: bool,
    pub chsh_m: f64,
}

pub fn sweep_row(variant: AttackVariant, qber: f64) -> Result<SweepRow> {
    let a = attack_from_qber(variant, qber)?;
    let pt = is_entangled(&a);
    let th1 = theorem1(&a);
    Ok(SweepRow {
        qber,
        f: a.fidelity(),
        i_bob: i_bob(a.fidelity())?,
        i_eve: i_eve(a.fidelity(), a.delta0(), a.delta1())?,
        ck_bound: ck_bound(&joint_distribution(&a)),
        min_pt_eig: pt.min_pt_eigenvalue,
        entangled: pt.entangled,
        th1_lhs: th1.lhs,
        th1_rhs: th1.rhs,
        th1_holds: th1.holds,
        chsh_m: chsh_horodecki(&build_rho_ab(&a)).m,
    })
}

/// Grid `from, from + step, ...` up to and including `to` (with a small
/// allowance for rounding in `(to - from) / step`).
pub fn qber_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && from >= 0.0) {
        return Err(Error::Domain { what: "from", value: from, expected: ">= 0" });
    }
    if !(to > from && to < 0.5) {
        return Err(Error::Domain { what: "to", value: to, expected: "(from, 1/2)" });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain { what: "step", value: step, expected: "> 0" });
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

pub fn sweep(variant: AttackVariant, from: f64, to: f64, step: f64) -> Result<Vec<SweepRow>> {
    qber_grid(from, to, step)?
        .into_iter()
        .map(|q| sweep_row(variant, q))
        .collect()
}

/// Decimal rendering with [`CSV_SIGNIFICANT_DIGITS`] significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (CSV_SIGNIFICANT_DIGITS as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Nine decimals with trailing zeros dropped, e.g. `0.25`, `0.333333333`.
pub fn format_marker(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s).to_string()
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            format_sig(r.qber),
            format_sig(r.f),
            format_sig(r.i_bob),
            format_sig(r.i_eve),
            format_sig(r.ck_bound),
            format_sig(r.min_pt_eig),
            flag(r.entangled),
            format_sig(r.th1_lhs),
            format_sig(r.th1_rhs),
            flag(r.th1_holds),
            format_sig(r.chsh_m),
        )?;
    }
    Ok(())
}

/// The four boundaries of an attack variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub variant: AttackVariant,
    /// Crossing of Bob's and Eve's information; reported for the
    /// Shannon-optimal attack only.
    pub qber0: Option<f64>,
    pub entanglement: f64,
    pub theorem1: f64,
    pub chsh: f64,
}

pub fn thresholds(variant: AttackVariant) -> Result<Thresholds> {
    let qber0 = match variant {
        AttackVariant::ShannonOptimal4 => Some(qber0(variant)?),
        _ => None,
    };
    Ok(Thresholds {
        variant,
        qber0,
        entanglement: entanglement_threshold(variant)?,
        theorem1: theorem1_boundary(variant)?,
        chsh: chsh_boundary(variant)?,
    })
}

pub fn write_thresholds<W: Write>(t: &Thresholds, mut w: W) -> io::Result<()> {
    writeln!(w, "variant,{}", t.variant)?;
    if let Some(q) = t.qber0 {
        writeln!(w, "qber0,{q:.9}")?;
    }
    writeln!(w, "entanglement_threshold,{:.9}", t.entanglement)?;
    writeln!(w, "theorem1_boundary,{:.9}", t.theorem1)?;
    writeln!(w, "chsh_boundary,{:.9}", t.chsh)?;
    Ok(())
}

/// Rows and markers of the Bob/Eve information figure for the
/// Shannon-optimal 4-state attack.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1 {
    pub rows: Vec<SweepRow>,
    pub markers: Vec<(&'static str, f64)>,
}

pub fn fig1() -> Result<Fig1> {
    let rows = sweep(AttackVariant::ShannonOptimal4, FIG1_FROM, FIG1_TO, FIG1_STEP)?;
    let markers = vec![
        ("qber0", qber0(AttackVariant::ShannonOptimal4)?),
        ("IR_4", entanglement_threshold(AttackVariant::Extremal4)?),
        ("IR_6", entanglement_threshold(AttackVariant::SixState)?),
    ];
    Ok(Fig1 { rows, markers })
}

/// Sweep CSV, a blank line, then a `marker,value` section.
pub fn write_fig1<W: Write>(fig: &Fig1, mut w: W) -> io::Result<()> {
    write_sweep_csv(&fig.rows, &mut w)?;
    writeln!(w)?;
    writeln!(w, "marker,value")?;
    for (name, value) in &fig.markers {
        writeln!(w, "{name},{}", format_marker(*value))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(qber_grid(0.0, 0.29, 0.01).unwrap().len(), 30);
        assert_eq!(qber_grid(0.0, 0.30, 0.001).unwrap().len(), 301);
        assert_eq!(qber_grid(0.1, 0.2, 0.5).unwrap(), vec![0.1]);
    }

    #[test]
    fn grid_errors() {
        assert!(qber_grid(0.2, 0.1, 0.01).is_err());
        assert!(qber_grid(0.0, 0.5, 0.01).is_err());
        assert!(qber_grid(-0.1, 0.2, 0.01).is_err());
        assert!(qber_grid(0.0, 0.2, 0.0).is_err());
        assert!(qber_grid(0.0, 0.2, f64::NAN).is_err());
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1.00000000000");
        assert_eq!(format_sig(0.146446609406726), "0.146446609407");
        assert_eq!(format_sig(-0.5), "-0.500000000000");
        assert_eq!(format_sig(123.456), "123.456000000");
        let tiny = format_sig(2.5e-14);
        assert!(!tiny.contains('e'));
        assert_eq!(tiny.parse::<f64>().unwrap(), 2.5e-14);
    }

    #[test]
    fn marker_formatting() {
        assert_eq!(format_marker(0.25), "0.25");
        assert_eq!(format_marker(1.0 / 3.0), "0.333333333");
        assert_eq!(format_marker((1.0 - 0.5f64.sqrt()) / 2.0), "0.146446609");
        assert_eq!(format_marker(1.0), "1");
    }

    #[test]
    fn first_row_noiseless() {
        for v in AttackVariant::ALL {
            let r = sweep_row(v, 0.0).unwrap();
            assert_eq!(r.i_bob, 1.0);
            assert_eq!(r.i_eve, 0.0);
            assert!(r.entangled);
            assert!(r.th1_holds);
        }
    }

    #[test]
    fn csv_layout() {
        let rows = sweep(AttackVariant::SixState, 0.0, 0.02, 0.01).unwrap();
        let mut out = Vec::new();
        write_sweep_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
        for l in &lines[1..] {
            assert_eq!(l.split(',').count(), 11);
        }
    }

    #[test]
    fn threshold_report() {
        let t = thresholds(AttackVariant::ShannonOptimal4).unwrap();
        let mut out = Vec::new();
        write_thresholds(&t, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("qber0,0.146446609\n"));
        assert!(text.contains("entanglement_threshold,0.292893219\n"));
        assert!(text.contains("chsh_boundary,0.146446609\n"));

        let t = thresholds(AttackVariant::Extremal4).unwrap();
        assert!(t.qber0.is_none());
        let mut out = Vec::new();
        write_thresholds(&t, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("entanglement_threshold,0.250000000\n"));
        assert!(text.contains("theorem1_boundary,0.250000000\n"));
        assert!(!text.contains("qber0"));
    }
}
