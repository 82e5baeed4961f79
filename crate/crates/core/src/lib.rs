//! Key agreement over a noisy quantum channel under incoherent eavesdropping.
//!
//! The crate follows one attack through every layer of the analysis:
//!
//! * [`attack_model`]: the symmetric attack family and the classical
//!   distribution it induces for Alice, Bob and Eve,
//! * [`info_theory`]: Bob's and Eve's Shannon information, the one-way
//!   secret-key bound and the QBER where the curves cross,
//! * [`entanglement`]: the Alice–Bob two-qubit state, its partial transpose
//!   and CHSH behaviour,
//! * [`advantage_distillation`]: the repeat-code protocol that lets Alice and
//!   Bob beat a better-informed Eve, exactly and by Monte Carlo,
//! * [`sweep`]: tabulated curves and threshold summaries.
//!
//! ```
//! use qkd_core::{attack_from_qber, entanglement_threshold, theorem1, AttackVariant};
//!
//! let t = entanglement_threshold(AttackVariant::SixState).unwrap();
//! assert!((t - 1.0 / 3.0).abs() < 1e-9);
//!
//! let attack = attack_from_qber(AttackVariant::SixState, 0.3).unwrap();
//! assert!(theorem1(&attack).holds);
//! ```

pub mod advantage_distillation;
pub mod attack_model;
pub mod entanglement;
pub mod error;
pub mod info_theory;
mod numeric;
pub mod sweep;

pub use advantage_distillation::{
    bob_decode, encode_block, exact_beta, exact_gamma, exact_gamma_full, min_block_length, simulate,
    stirling_lower_bound, theorem1, theorem1_boundary, AdEstimate, AdExact, BitBlock, BobDecision,
    Theorem1Report,
};
pub use attack_model::{
    attack_from_qber, fidelity_from_overlaps, helstrom_guess_probability, joint_distribution,
    overlap_from_fidelity, AttackParams, AttackVariant, JointDistribution, Protocol, Vars,
};
pub use entanglement::{
    build_rho_ab, chsh_boundary, chsh_horodecki, entanglement_threshold, hermitian_eigenvalues,
    is_entangled, partial_transpose, ChshReport, PtReport, TwoQubitState,
};
pub use error::{Error, Result};
pub use info_theory::{binary_entropy, ck_bound, i_bob, i_eve, mutual_information, qber0};
pub use numeric::{BISECTION_MAX_ITER, BISECTION_TOLERANCE};
