//! Small numeric helpers shared by the threshold searches.

use crate::error::{Error, Result};

/// Bracket width at which boundary searches stop.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const BISECTION_MAX_ITER: usize = 200;

/// Locates the point in `[lo, hi]` where the predicate changes value.
///
/// The predicate must differ at the two endpoints. The returned value is the
/// midpoint of the final bracket.
pub fn bisect_flip<P>(mut lo: f64, mut hi: f64, what: &'static str, pred: P) -> Result<f64>
where
    P: Fn(f64) -> Result<bool>,
{
    let at_lo = pred(lo)?;
    if at_lo == pred(hi)? {
        return Err(Error::NoSignChange(what));
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ln(exp(a) + exp(b))` without overflow; handles `-inf` operands.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `k * ln_p` with the convention `0 * ln 0 = 0`.
pub fn scaled_ln(k: f64, ln_p: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * ln_p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_step() {
        let x = bisect_flip(0.0, 1.0, "step", |q| Ok(q < 0.3)).unwrap();
        assert!((x - 0.3).abs() < 1e-12);
    }

    #[test]
    fn bisect_without_flip_errors() {
        assert_eq!(
            bisect_flip(0.0, 1.0, "none", |_| Ok(true)),
            Err(Error::NoSignChange("none"))
        );
    }

    #[test]
    fn ln_add_exp_edges() {
        assert_eq!(ln_add_exp(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert_eq!(ln_add_exp(f64::NEG_INFINITY, 0.0), 0.0);
        assert!((ln_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((ln_add_exp(-1000.0, -1000.0) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
