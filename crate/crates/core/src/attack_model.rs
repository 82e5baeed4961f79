//! Symmetric incoherent eavesdropping on the 4-state and 6-state protocols.
//!
//! An attack is never represented through Eve's ancilla states. What matters
//! for the key-agreement analysis is captured by a handful of scalars:
//!
//! * the fidelity `F` and disturbance `D = 1 - F` seen by Bob,
//! * the overlaps `c_psi = <psi_up|psi_down>` and `c_phi = <phi_up|phi_down>`
//!   of Eve's ancilla states for undisturbed and disturbed qubits,
//! * Eve's probabilities `delta0`, `delta1` of guessing Bob's bit correctly
//!   on undisturbed and disturbed positions.
//!
//! Symmetry ties the fidelity to the overlaps through
//! `F = (1 + c_phi) / (2 - c_psi + c_phi)`. The guessing probabilities are the
//! Helstrom values for discriminating two pure states with the given overlap.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_overlap, check_probability, Error, Result};

/// Tolerance on the fidelity/overlap relation.
pub const FIDELITY_RELATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    /// BB84: two conjugate bases.
    FourState,
    /// Three mutually unbiased bases.
    SixState,
}

/// The attacks analysed by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackVariant {
    /// 4-state attack maximising Eve's Shannon information at every QBER
    /// (`c_psi = c_phi = 2F - 1`).
    ShannonOptimal4,
    /// 4-state attack with identical disturbed ancilla states (`c_phi = 1`).
    /// It keeps `rho_AB` entangled up to the smallest QBER in the family, 1/4.
    Extremal4,
    /// 6-state attack; `c_phi = 0` is forced by the protocol.
    SixState,
}

impl AttackVariant {
    pub const ALL: [AttackVariant; 3] = [
        AttackVariant::ShannonOptimal4,
        AttackVariant::Extremal4,
        AttackVariant::SixState,
    ];

    pub fn protocol(self) -> Protocol {
        match self {
            AttackVariant::ShannonOptimal4 | AttackVariant::Extremal4 => Protocol::FourState,
            AttackVariant::SixState => Protocol::SixState,
        }
    }

    /// Largest QBER accepted by [`attack_from_qber`] for this variant.
    ///
    /// Extremal4 stops at 1/3 (`F = 2/3`), where `c_psi` reaches zero; the
    /// other variants accept every QBER strictly below 1/2.
    pub fn max_qber(self) -> f64 {
        match self {
            AttackVariant::Extremal4 => 1.0 / 3.0,
            AttackVariant::ShannonOptimal4 | AttackVariant::SixState => 0.5f64.next_down(),
        }
    }

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            AttackVariant::ShannonOptimal4 => "shannon4",
            AttackVariant::Extremal4 => "extremal4",
            AttackVariant::SixState => "sixstate",
        }
    }
}

impl fmt::Display for AttackVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "shannon4" | "shannon-optimal4" | "shannonoptimal4" => Ok(AttackVariant::ShannonOptimal4),
            "extremal4" => Ok(AttackVariant::Extremal4),
            "sixstate" | "six-state" | "6state" => Ok(AttackVariant::SixState),
            other => Err(format!(
                "unknown attack variant '{other}' (expected shannon4, extremal4 or sixstate)"
            )),
        }
    }
}

/// One symmetric incoherent attack, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackParams {
    variant: AttackVariant,
    fidelity: f64,
    disturbance: f64,
    c_psi: f64,
    c_phi: f64,
    delta0: f64,
    delta1: f64,
}

impl AttackParams {
    /// Builds an attack from explicit values, checking every structural
    /// invariant. `F` is derived as `1 - D` so that `F + D = 1` exactly.
    pub fn new(
        variant: AttackVariant,
        disturbance: f64,
        c_psi: f64,
        c_phi: f64,
        delta0: f64,
        delta1: f64,
    ) -> Result<Self> {
        check_probability("disturbance", disturbance)?;
        check_overlap("c_psi", c_psi)?;
        check_overlap("c_phi", c_phi)?;
        check_probability("delta0", delta0)?;
        check_probability("delta1", delta1)?;
        if delta0 < 0.5 || delta1 < 0.5 {
            return Err(Error::InvalidParams(format!(
                "guessing probabilities must be at least 1/2 (delta0 = {delta0}, delta1 = {delta1})"
            )));
        }
        let fidelity = 1.0 - disturbance;
        let expected = fidelity_from_overlaps(c_psi, c_phi)?;
        if (expected - fidelity).abs() > FIDELITY_RELATION_TOL {
            return Err(Error::InvalidParams(format!(
                "fidelity {fidelity} does not match overlaps (c_psi = {c_psi}, c_phi = {c_phi} give {expected})"
            )));
        }
        if variant == AttackVariant::SixState && (c_phi != 0.0 || delta1 != 1.0) {
            return Err(Error::InvalidParams(
                "six-state attacks need c_phi = 0 and delta1 = 1".into(),
            ));
        }
        Ok(Self {
            variant,
            fidelity,
            disturbance,
            c_psi,
            c_phi,
            delta0,
            delta1,
        })
    }

    pub fn variant(&self) -> AttackVariant {
        self.variant
    }

    pub fn protocol(&self) -> Protocol {
        self.variant.protocol()
    }

    /// Probability `F` that Bob receives the qubit undisturbed.
    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    /// Disturbance `D`, equal to the QBER.
    pub fn disturbance(&self) -> f64 {
        self.disturbance
    }

    pub fn qber(&self) -> f64 {
        self.disturbance
    }

    pub fn c_psi(&self) -> f64 {
        self.c_psi
    }

    pub fn c_phi(&self) -> f64 {
        self.c_phi
    }

    /// Eve's probability of guessing Bob's bit on an undisturbed position.
    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// Eve's probability of guessing Bob's bit on a disturbed position.
    pub fn delta1(&self) -> f64 {
        self.delta1
    }
}

/// `F = (1 + c_phi) / (2 - c_psi + c_phi)`.
pub fn fidelity_from_overlaps(c_psi: f64, c_phi: f64) -> Result<f64> {
    check_overlap("c_psi", c_psi)?;
    check_overlap("c_phi", c_phi)?;
    let denominator = 2.0 - c_psi + c_phi;
    if denominator <= 0.0 {
        return Err(Error::Domain {
            what: "2 - c_psi + c_phi",
            value: denominator,
            expected: "> 0",
        });
    }
    Ok((1.0 + c_phi) / denominator)
}

/// Inverts the fidelity relation for `c_psi` given `F` and `c_phi`.
pub fn overlap_from_fidelity(fidelity: f64, c_phi: f64) -> Result<f64> {
    if !(fidelity > 0.5 && fidelity <= 1.0) {
        return Err(Error::Domain {
            what: "fidelity",
            value: fidelity,
            expected: "(1/2, 1]",
        });
    }
    check_overlap("c_phi", c_phi)?;
    let c_psi = (2.0 * fidelity - 1.0 - (1.0 - fidelity) * c_phi) / fidelity;
    check_overlap("c_psi", c_psi)
}

/// Optimal probability of telling apart two equiprobable pure states with
/// overlap `c`: `(1 + sqrt(1 - c^2)) / 2`.
pub fn helstrom_guess_probability(c: f64) -> Result<f64> {
    check_overlap("overlap", c)?;
    // (1 - c)(1 + c) keeps precision near |c| = 1
    Ok(0.5 * (1.0 + ((1.0 - c) * (1.0 + c)).sqrt()))
}

/// Instantiates `variant` at the given QBER.
pub fn attack_from_qber(variant: AttackVariant, qber: f64) -> Result<AttackParams> {
    if !(0.0..0.5).contains(&qber) {
        return Err(Error::Domain {
            what: "qber",
            value: qber,
            expected: "[0, 1/2)",
        });
    }
    if qber > variant.max_qber() {
        return Err(Error::Domain {
            what: "qber",
            value: qber,
            expected: "[0, 1/3] for the extremal 4-state attack",
        });
    }
    let f = 1.0 - qber;
    match variant {
        AttackVariant::ShannonOptimal4 => {
            let c = 2.0 * f - 1.0;
            let delta = 0.5 + (f * qber).sqrt();
            AttackParams::new(variant, qber, c, c, delta, delta)
        }
        AttackVariant::Extremal4 => {
            let c_psi = (3.0 * f - 2.0) / f;
            let delta0 = helstrom_guess_probability(c_psi)?;
            let delta1 = helstrom_guess_probability(1.0)?;
            AttackParams::new(variant, qber, c_psi, 1.0, delta0, delta1)
        }
        AttackVariant::SixState => {
            let c_psi = (2.0 * f - 1.0) / f;
            let delta0 = helstrom_guess_probability(c_psi)?;
            AttackParams::new(variant, qber, c_psi, 0.0, delta0, 1.0)
        }
    }
}

/// Selects which of the four binary variables a marginal keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vars(u8);

impl Vars {
    /// Alice's bit.
    pub const X: Vars = Vars(0b1000);
    /// Bob's bit.
    pub const Y: Vars = Vars(0b0100);
    /// Eve's flip indicator, `X xor Y`.
    pub const Z1: Vars = Vars(0b0010);
    /// Eve's guess of Bob's bit.
    pub const Z2: Vars = Vars(0b0001);
    /// Eve's full variable `(Z1, Z2)`.
    pub const Z: Vars = Vars(0b0011);

    pub(crate) fn mask(self) -> usize {
        self.0 as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn overlaps(self, other: Vars) -> bool {
        self.0 & other.0 != 0
    }
}

impl std::ops::BitOr for Vars {
    type Output = Vars;

    fn bitor(self, rhs: Vars) -> Vars {
        Vars(self.0 | rhs.0)
    }
}

/// The 16-cell table `P(x, y, z1, z2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    p: [f64; 16],
}

impl JointDistribution {
    fn index(x: u8, y: u8, z1: u8, z2: u8) -> usize {
        ((x as usize & 1) << 3) | ((y as usize & 1) << 2) | ((z1 as usize & 1) << 1) | (z2 as usize & 1)
    }

    pub fn prob(&self, x: u8, y: u8, z1: u8, z2: u8) -> f64 {
        self.p[Self::index(x, y, z1, z2)]
    }

    /// Raw table, indexed by `x<<3 | y<<2 | z1<<1 | z2`.
    pub fn table(&self) -> &[f64; 16] {
        &self.p
    }

    /// Iterates `((x, y, z1, z2), p)` over all 16 cells.
    pub fn cells(&self) -> impl Iterator<Item = ((u8, u8, u8, u8), f64)> + '_ {
        self.p.iter().enumerate().map(|(i, &p)| {
            let bits = ((i >> 3) as u8 & 1, (i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1);
            (bits, p)
        })
    }

    /// Probability mass of the cells matching `pred`.
    pub fn probability_of<F>(&self, pred: F) -> f64
    where
        F: Fn(u8, u8, u8, u8) -> bool,
    {
        self.cells()
            .filter(|&((x, y, z1, z2), _)| pred(x, y, z1, z2))
            .map(|(_, p)| p)
            .sum()
    }

    /// Marginal over the variables in `vars`, as a map from the masked cell
    /// index to its probability (only 16 slots, most unused).
    pub(crate) fn marginal(&self, vars: Vars) -> [f64; 16] {
        let mut out = [0.0; 16];
        for (i, &p) in self.p.iter().enumerate() {
            out[i & vars.mask()] += p;
        }
        out
    }
}

/// The classical distribution induced by `params`: `X` uniform, `Y = X` with
/// probability `F`, `Z1 = X xor Y`, and `Z2 = Y` with probability `delta0`
/// when `Z1 = 0` and `delta1` when `Z1 = 1`.
pub fn joint_distribution(params: &AttackParams) -> JointDistribution {
    let mut p = [0.0; 16];
    for x in 0..2u8 {
        for y in 0..2u8 {
            let z1 = x ^ y;
            let channel = if z1 == 0 { params.fidelity } else { params.disturbance };
            let delta = if z1 == 0 { params.delta0 } else { params.delta1 };
            for z2 in 0..2u8 {
                let guess = if z2 == y { delta } else { 1.0 - delta };
                p[JointDistribution::index(x, y, z1, z2)] = 0.5 * channel * guess;
            }
        }
    }
    JointDistribution { p }
}
