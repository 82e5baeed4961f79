//! Alice–Bob two-qubit state under a symmetric attack and its entanglement.
//!
//! The state is entangled exactly when its partial transpose has a negative
//! eigenvalue. For the attack family the partial transpose splits into two
//! 2×2 blocks, giving the closed-form spectrum
//! `{(D ± F c_psi)/2, (F ± D c_phi)/2}`; the generic Hermitian eigensolver is
//! used as the primary path and the block formula as a cross-check.
//!
//! Note that entanglement holds when `D < F |c_psi|` or `F < D |c_phi|`,
//! i.e. when one of the block eigenvalues goes negative. A statement of the
//! form "entangled iff `D > F c_psi` and `F > D c_phi`" has the inequalities
//! reversed: it would call the near-noiseless singlet separable.

use nalgebra::{Matrix2, Matrix3, Matrix4};
use num_complex::Complex64;

use crate::attack_model::{attack_from_qber, AttackParams, AttackVariant};
use crate::error::{Error, Result};
use crate::numeric::bisect_flip;

pub type CMatrix4 = Matrix4<Complex64>;

/// A partial-transpose eigenvalue below this counts as negative.
pub const NPT_CUTOFF: f64 = -1e-10;
/// Entrywise tolerance of the Hermiticity check in [`hermitian_eigenvalues`].
pub const HERMITIAN_TOL: f64 = 1e-10;
const STATE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

/// A two-qubit density matrix in the basis `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    m: CMatrix4,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: CMatrix4) -> Result<Self> {
        let dev = hermitian_deviation(&m);
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}")));
        }
        let eigs = hermitian_eigenvalues(&m)?;
        if eigs[0] < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                eigs[0]
            )));
        }
        Ok(Self { m })
    }

    /// The maximally entangled singlet `(|01> - |10>)/sqrt 2`.
    pub fn singlet() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let mut m = CMatrix4::zeros();
        m[(1, 1)] = h;
        m[(2, 2)] = h;
        m[(1, 2)] = -h;
        m[(2, 1)] = -h;
        Self { m }
    }

    /// `I/4`.
    pub fn maximally_mixed() -> Self {
        Self {
            m: CMatrix4::identity() * Complex64::new(0.25, 0.0),
        }
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix4 {
        self.m
    }
}

fn hermitian_deviation(m: &CMatrix4) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// The state shared by Alice and Bob when Alice starts from a singlet and
/// Bob's half goes through the attack.
pub fn build_rho_ab(params: &AttackParams) -> TwoQubitState {
    let d = params.disturbance();
    let f = params.fidelity();
    let r = |x: f64| Complex64::new(0.5 * x, 0.0);
    let mut m = CMatrix4::zeros();
    m[(0, 0)] = r(d);
    m[(3, 3)] = r(d);
    m[(1, 1)] = r(f);
    m[(2, 2)] = r(f);
    m[(1, 2)] = r(-f * params.c_psi());
    m[(2, 1)] = r(-f * params.c_psi());
    m[(0, 3)] = r(-d * params.c_phi());
    m[(3, 0)] = r(-d * params.c_phi());
    TwoQubitState { m }
}

/// Transpose over Bob's qubit: `out[(i,a),(j,b)] = in[(i,b),(j,a)]`.
pub fn partial_transpose(state: &TwoQubitState) -> CMatrix4 {
    partial_transpose_matrix(state.matrix())
}

pub fn partial_transpose_matrix(m: &CMatrix4) -> CMatrix4 {
    let mut out = CMatrix4::zeros();
    for i in 0..2 {
        for a in 0..2 {
            for j in 0..2 {
                for b in 0..2 {
                    out[(2 * i + a, 2 * j + b)] = m[(2 * i + b, 2 * j + a)];
                }
            }
        }
    }
    out
}

/// Eigenvalues of a 4×4 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix4) -> Result<[f64; 4]> {
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let mut out = [0.0; 4];
    out.copy_from_slice(m.symmetric_eigenvalues().as_slice());
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Closed-form partial-transpose spectrum of [`build_rho_ab`], ascending.
pub fn pt_block_eigenvalues(params: &AttackParams) -> [f64; 4] {
    let d = params.disturbance();
    let f = params.fidelity();
    let a = f * params.c_psi();
    let b = d * params.c_phi();
    let mut out = [0.5 * (d + a), 0.5 * (d - a), 0.5 * (f + b), 0.5 * (f - b)];
    out.sort_by(f64::total_cmp);
    out
}

/// Closed-form entanglement test for the attack family.
pub fn entangled_closed_form(params: &AttackParams) -> bool {
    pt_block_eigenvalues(params)[0] < NPT_CUTOFF
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtReport {
    pub min_pt_eigenvalue: f64,
    pub entangled: bool,
    /// Partial-transpose spectrum, ascending.
    pub eigenvalues: [f64; 4],
}

/// Peres–Horodecki test on the state induced by `params`.
pub fn is_entangled(params: &AttackParams) -> PtReport {
    let pt = partial_transpose(&build_rho_ab(params));
    // the partial transpose of a Hermitian matrix is Hermitian
    let eigenvalues = hermitian_eigenvalues(&pt).expect("partial transpose is Hermitian");
    PtReport {
        min_pt_eigenvalue: eigenvalues[0],
        entangled: eigenvalues[0] < NPT_CUTOFF,
        eigenvalues,
    }
}

/// Supremum of the QBERs at which `variant` leaves Alice and Bob entangled.
pub fn entanglement_threshold(variant: AttackVariant) -> Result<f64> {
    bisect_flip(0.0, variant.max_qber(), "PT minimum eigenvalue", |q| {
        Ok(is_entangled(&attack_from_qber(variant, q)?).entangled)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshReport {
    /// Sum of the two largest eigenvalues of `T^T T`.
    pub m: f64,
    /// Largest CHSH value reachable with this state, `2 sqrt(M)`.
    pub max_chsh: f64,
    /// `T_ij = tr(rho sigma_i ⊗ sigma_j)`.
    pub correlation: [[f64; 3]; 3],
}

impl ChshReport {
    pub fn violates_bell(&self) -> bool {
        self.m > 1.0
    }
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ]
}

/// Horodecki criterion: the best CHSH value of a two-qubit state.
pub fn chsh_horodecki(state: &TwoQubitState) -> ChshReport {
    let sigma = pauli();
    let mut correlation = [[0.0; 3]; 3];
    for (i, si) in sigma.iter().enumerate() {
        for (j, sj) in sigma.iter().enumerate() {
            let op: CMatrix4 = si.kronecker(sj);
            correlation[i][j] = (state.matrix() * op).trace().re;
        }
    }
    let t = Matrix3::from_fn(|i, j| correlation[i][j]);
    let mut eigs: Vec<f64> = (t.transpose() * t).symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    let m = (eigs[1] + eigs[2]).max(0.0);
    ChshReport {
        m,
        max_chsh: 2.0 * m.sqrt(),
        correlation,
    }
}

/// QBER above which the state induced by `variant` no longer violates CHSH.
pub fn chsh_boundary(variant: AttackVariant) -> Result<f64> {
    bisect_flip(0.0, variant.max_qber(), "M - 1", |q| {
        Ok(chsh_horodecki(&build_rho_ab(&attack_from_qber(variant, q)?)).violates_bell())
    })
}
