//! Shannon information of Bob and Eve, generic mutual information over the
//! joint table, the one-way secret-key lower bound and the crossing QBER.
//!
//! All quantities are in bits.

use crate::attack_model::{attack_from_qber, AttackVariant, JointDistribution, Vars};
use crate::error::{check_probability, Error, Result};
use crate::numeric::bisect_flip;

/// Binary entropy `h(p) = -p log2 p - (1-p) log2 (1-p)`, with `0 log 0 = 0`.
///
/// `h(p)` and `h(1 - p)` are bitwise identical: both are evaluated on the
/// same pair `(1 - q, q)` with `q = max(p, 1 - p)` as rounded.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    let large = if p <= 0.5 { 1.0 - p } else { p };
    let small = 1.0 - large;
    Ok(-plogp(small) - plogp(large))
}

fn plogp(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Bob's information on Alice's bit, `1 - h(F)`.
pub fn i_bob(fidelity: f64) -> Result<f64> {
    Ok(1.0 - binary_entropy(fidelity)?)
}

/// Eve's information on Bob's bit, `F (1 - h(delta0)) + (1 - F)(1 - h(delta1))`.
pub fn i_eve(fidelity: f64, delta0: f64, delta1: f64) -> Result<f64> {
    let f = check_probability("fidelity", fidelity)?;
    Ok(f * (1.0 - binary_entropy(delta0)?) + (1.0 - f) * (1.0 - binary_entropy(delta1)?))
}

/// `I(A;B)` between two disjoint groups of variables of the joint table.
pub fn mutual_information(joint: &JointDistribution, left: Vars, right: Vars) -> Result<f64> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::EmptySelector);
    }
    if left.overlaps(right) {
        return Err(Error::OverlappingSelectors);
    }
    let both = left | right;
    let p_ab = joint.marginal(both);
    let p_a = joint.marginal(left);
    let p_b = joint.marginal(right);
    let mut info = 0.0;
    for (i, &p) in p_ab.iter().enumerate() {
        if i & both.mask() != i || p <= 0.0 {
            continue;
        }
        let pa = p_a[i & left.mask()];
        let pb = p_b[i & right.mask()];
        info += p * (p / (pa * pb)).log2();
    }
    // rounding can leave a tiny negative value for independent variables
    Ok(info.max(0.0))
}

/// The Csiszár–Körner lower bound on the secret-key rate,
/// `max(I(X;Y) - I(X;Z), I(Y;X) - I(Y;Z))` with `Z = (Z1, Z2)`.
///
/// A positive value means one-way error correction plus privacy amplification
/// suffices.
pub fn ck_bound(joint: &JointDistribution) -> f64 {
    let (alice_term, bob_term) = ck_terms(joint);
    alice_term.max(bob_term)
}

/// The two differences inside [`ck_bound`]: Alice-as-reference and
/// Bob-as-reference.
pub fn ck_terms(joint: &JointDistribution) -> (f64, f64) {
    // selectors are fixed and disjoint
    let mi = |a, b| mutual_information(joint, a, b).expect("disjoint selectors");
    let i_xy = mi(Vars::X, Vars::Y);
    (i_xy - mi(Vars::X, Vars::Z), i_xy - mi(Vars::Y, Vars::Z))
}

/// `I_Bob - I_Eve` for `variant` at `qber`, from the closed forms.
pub fn information_gap(variant: AttackVariant, qber: f64) -> Result<f64> {
    let a = attack_from_qber(variant, qber)?;
    Ok(i_bob(a.fidelity())? - i_eve(a.fidelity(), a.delta0(), a.delta1())?)
}

/// QBER at which Bob's and Eve's information curves cross.
///
/// Only the Shannon-optimal 4-state attack has a known closed form,
/// `(1 - 1/sqrt 2) / 2`; the other variants are solved the same way.
pub fn qber0(variant: AttackVariant) -> Result<f64> {
    let lo = 0.0;
    let hi = variant.max_qber();
    bisect_flip(lo, hi, "I_Bob - I_Eve", |q| Ok(information_gap(variant, q)? > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack_model::{joint_distribution, AttackParams};
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), 0.8112781244591328, epsilon = 1e-15);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn entropy_symmetry_is_exact() {
        for i in 0..=1000 {
            let p = i as f64 / 1000.0;
            assert_eq!(binary_entropy(p).unwrap(), binary_entropy(1.0 - p).unwrap());
        }
    }

    #[test]
    fn i_bob_examples() {
        assert_eq!(i_bob(1.0).unwrap(), 1.0);
        assert_eq!(i_bob(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(i_bob(0.75).unwrap(), 0.18872187554086717, epsilon = 1e-15);
    }

    #[test]
    fn i_eve_examples() {
        for d1 in [0.5, 0.7, 1.0] {
            assert_eq!(i_eve(1.0, 0.5, d1).unwrap(), 0.0);
        }
        for f in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(i_eve(f, 1.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        }
        let a = attack_from_qber(AttackVariant::SixState, 1.0 / 3.0).unwrap();
        let v = i_eve(a.fidelity(), a.delta0(), a.delta1()).unwrap();
        // (2/3)(1 - h(0.9330127...)) + 1/3
        let expected = 2.0 / 3.0 * (1.0 - binary_entropy(a.delta0()).unwrap()) + 1.0 / 3.0;
        assert_abs_diff_eq!(v, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.7636141, epsilon = 1e-7);
    }

    #[test]
    fn mutual_information_matches_closed_forms() {
        for v in AttackVariant::ALL {
            for i in 0..=33 {
                let a = attack_from_qber(v, i as f64 * 0.01).unwrap();
                let j = joint_distribution(&a);
                let ixy = mutual_information(&j, Vars::X, Vars::Y).unwrap();
                let iyz = mutual_information(&j, Vars::Y, Vars::Z).unwrap();
                let ixz1 = mutual_information(&j, Vars::X, Vars::Z1).unwrap();
                assert_abs_diff_eq!(ixy, i_bob(a.fidelity()).unwrap(), epsilon = 1e-12);
                assert_abs_diff_eq!(
                    iyz,
                    i_eve(a.fidelity(), a.delta0(), a.delta1()).unwrap(),
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(ixz1, 0.0, epsilon = 1e-12);
                // symmetric in its arguments
                assert_abs_diff_eq!(
                    mutual_information(&j, Vars::Z, Vars::Y).unwrap(),
                    iyz,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn selector_errors() {
        let a = attack_from_qber(AttackVariant::SixState, 0.1).unwrap();
        let j = joint_distribution(&a);
        assert_eq!(
            mutual_information(&j, Vars::Z, Vars::Z2),
            Err(Error::OverlappingSelectors)
        );
        assert_eq!(
            mutual_information(&j, Vars::X, Vars::X | Vars::Y),
            Err(Error::OverlappingSelectors)
        );
    }

    #[test]
    fn ck_bound_examples() {
        let a = AttackParams::new(AttackVariant::ShannonOptimal4, 0.0, 1.0, 1.0, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(ck_bound(&joint_distribution(&a)), 1.0, epsilon = 1e-12);

        let q0 = (1.0 - 1.0 / 2f64.sqrt()) / 2.0;
        let a = attack_from_qber(AttackVariant::ShannonOptimal4, q0).unwrap();
        let (_, bob_term) = ck_terms(&joint_distribution(&a));
        assert_abs_diff_eq!(bob_term, 0.0, epsilon = 1e-9);

        // Eve always right
        let a = AttackParams::new(AttackVariant::ShannonOptimal4, 0.2, 0.6, 0.6, 1.0, 1.0).unwrap();
        let b = ck_bound(&joint_distribution(&a));
        assert_abs_diff_eq!(b, i_bob(0.8).unwrap() - 1.0, epsilon = 1e-12);
        assert!(b <= 0.0);
    }

    #[test]
    fn crossing_point_shannon_optimal() {
        let q = qber0(AttackVariant::ShannonOptimal4).unwrap();
        assert_abs_diff_eq!(q, (1.0 - 1.0 / 2f64.sqrt()) / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(q, 0.14644661, epsilon = 1e-8);
        assert!(information_gap(AttackVariant::ShannonOptimal4, q).unwrap().abs() < 1e-9);
    }

    #[test]
    fn crossing_point_other_variants() {
        for v in [AttackVariant::SixState, AttackVariant::Extremal4] {
            let q = qber0(v).unwrap();
            assert!(q > 0.0 && q < v.max_qber());
            assert!(information_gap(v, q).unwrap().abs() < 1e-9);
            assert!(information_gap(v, q - 1e-3).unwrap() > 0.0);
            assert!(information_gap(v, q + 1e-3).unwrap() < 0.0);
        }
    }

    #[test]
    fn ck_bound_sign_around_crossing() {
        let q0 = qber0(AttackVariant::ShannonOptimal4).unwrap();
        for i in 0..=290 {
            let q = i as f64 * 1e-3;
            let a = attack_from_qber(AttackVariant::ShannonOptimal4, q).unwrap();
            let b = ck_bound(&joint_distribution(&a));
            if q < q0 - 1e-6 {
                assert!(b > 0.0, "q = {q}: {b}");
            } else if q > q0 + 1e-6 {
                assert!(b < 0.0, "q = {q}: {b}");
            }
        }
    }

    #[test]
    fn curves_are_monotone() {
        // Extremal4's Eve information peaks near q = 0.3176, past the point
        // where its state becomes separable (1/4)
        for (v, upper) in [
            (AttackVariant::ShannonOptimal4, AttackVariant::ShannonOptimal4.max_qber()),
            (AttackVariant::SixState, AttackVariant::SixState.max_qber()),
            (AttackVariant::Extremal4, 0.317),
        ] {
            let mut prev: Option<(f64, f64)> = None;
            let steps = (upper / 1e-3) as usize;
            for i in 0..=steps {
                let a = attack_from_qber(v, i as f64 * 1e-3).unwrap();
                let ib = i_bob(a.fidelity()).unwrap();
                let ie = i_eve(a.fidelity(), a.delta0(), a.delta1()).unwrap();
                if let Some((pb, pe)) = prev {
                    assert!(ib < pb, "{v}: i_bob not decreasing at step {i}");
                    assert!(ie > pe, "{v}: i_eve not increasing at step {i}");
                }
                prev = Some((ib, ie));
            }
        }
    }

    #[test]
    fn extremal_eve_information_turns_over() {
        let ie = |q| {
            let a = attack_from_qber(AttackVariant::Extremal4, q).unwrap();
            i_eve(a.fidelity(), a.delta0(), a.delta1()).unwrap()
        };
        assert!(ie(0.33) < ie(0.32));
    }
}
