//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain numbers and strings and returns a JSON document,
//! so the page needs no generated TypeScript types. The exports are thin
//! wrappers over plain Rust functions that are tested natively.

use qkd_core::sweep::qber_grid;
use qkd_core::{
    attack_from_qber, build_rho_ab, chsh_horodecki, ck_bound, entanglement_threshold, i_bob, i_eve,
    is_entangled, joint_distribution, min_block_length, qber0, theorem1, theorem1_boundary, AdExact,
    AttackVariant,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Longest block length the distillation plot will compute.
pub const MAX_BLOCK_LENGTH: u32 = 2000;

#[derive(Debug, Serialize)]
pub struct Markers {
    pub qber0: f64,
    pub entanglement: f64,
    pub theorem1: f64,
}

#[derive(Debug, Serialize)]
pub struct InfoCurves {
    pub variant: &'static str,
    pub qber: Vec<f64>,
    pub i_bob: Vec<f64>,
    pub i_eve: Vec<f64>,
    pub ck_bound: Vec<f64>,
    pub entangled: Vec<bool>,
    pub markers: Markers,
}

#[derive(Debug, Serialize)]
pub struct AttackReport {
    pub variant: &'static str,
    pub qber: f64,
    pub fidelity: f64,
    pub c_psi: f64,
    pub c_phi: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub i_bob: f64,
    pub i_eve: f64,
    pub pt_eigenvalues: [f64; 4],
    pub entangled: bool,
    pub chsh_m: f64,
    pub max_chsh: f64,
    pub bell_violation: bool,
    pub th1_lhs: f64,
    pub th1_rhs: f64,
    pub th1_holds: bool,
}

/// Log-probabilities are `null` in JSON where they are `-inf`.
#[derive(Debug, Serialize)]
pub struct DistillationCurve {
    pub n: Vec<u32>,
    pub ln_beta: Vec<f64>,
    pub ln_gamma: Vec<f64>,
    pub p_accept: Vec<f64>,
    pub min_block_length: Option<u32>,
}

fn parse_variant(name: &str) -> Result<AttackVariant, String> {
    name.parse()
}

pub fn info_curves(variant: &str, from: f64, to: f64, step: f64) -> Result<InfoCurves, String> {
    let v = parse_variant(variant)?;
    let grid = qber_grid(from, to.min(v.max_qber()), step).map_err(|e| e.to_string())?;
    let mut out = InfoCurves {
        variant: v.name(),
        qber: Vec::with_capacity(grid.len()),
        i_bob: Vec::with_capacity(grid.len()),
        i_eve: Vec::with_capacity(grid.len()),
        ck_bound: Vec::with_capacity(grid.len()),
        entangled: Vec::with_capacity(grid.len()),
        markers: Markers {
            qber0: qber0(v).map_err(|e| e.to_string())?,
            entanglement: entanglement_threshold(v).map_err(|e| e.to_string())?,
            theorem1: theorem1_boundary(v).map_err(|e| e.to_string())?,
        },
    };
    for q in grid {
        let a = attack_from_qber(v, q).map_err(|e| e.to_string())?;
        out.qber.push(q);
        out.i_bob.push(i_bob(a.fidelity()).map_err(|e| e.to_string())?);
        out.i_eve.push(i_eve(a.fidelity(), a.delta0(), a.delta1()).map_err(|e| e.to_string())?);
        out.ck_bound.push(ck_bound(&joint_distribution(&a)));
        out.entangled.push(is_entangled(&a).entangled);
    }
    Ok(out)
}

pub fn attack_report(variant: &str, qber: f64) -> Result<AttackReport, String> {
    let v = parse_variant(variant)?;
    let a = attack_from_qber(v, qber).map_err(|e| e.to_string())?;
    let pt = is_entangled(&a);
    let chsh = chsh_horodecki(&build_rho_ab(&a));
    let th1 = theorem1(&a);
    Ok(AttackReport {
        variant: v.name(),
        qber,
        fidelity: a.fidelity(),
        c_psi: a.c_psi(),
        c_phi: a.c_phi(),
        delta0: a.delta0(),
        delta1: a.delta1(),
        i_bob: i_bob(a.fidelity()).map_err(|e| e.to_string())?,
        i_eve: i_eve(a.fidelity(), a.delta0(), a.delta1()).map_err(|e| e.to_string())?,
        pt_eigenvalues: pt.eigenvalues,
        entangled: pt.entangled,
        chsh_m: chsh.m,
        max_chsh: chsh.max_chsh,
        bell_violation: chsh.violates_bell(),
        th1_lhs: th1.lhs,
        th1_rhs: th1.rhs,
        th1_holds: th1.holds,
    })
}

pub fn distillation_curve(variant: &str, qber: f64, n_max: u32) -> Result<DistillationCurve, String> {
    if n_max == 0 || n_max > MAX_BLOCK_LENGTH {
        return Err(format!("n_max must be in 1..={MAX_BLOCK_LENGTH}, got {n_max}"));
    }
    let v = parse_variant(variant)?;
    let a = attack_from_qber(v, qber).map_err(|e| e.to_string())?;
    let mut out = DistillationCurve {
        n: Vec::with_capacity(n_max as usize),
        ln_beta: Vec::with_capacity(n_max as usize),
        ln_gamma: Vec::with_capacity(n_max as usize),
        p_accept: Vec::with_capacity(n_max as usize),
        min_block_length: min_block_length(&a, n_max),
    };
    for n in 1..=n_max {
        let ex = AdExact::compute(&a, n).map_err(|e| e.to_string())?;
        out.n.push(n);
        out.ln_beta.push(ex.ln_beta);
        out.ln_gamma.push(ex.ln_gamma);
        out.p_accept.push(ex.p_accept);
    }
    Ok(out)
}

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsValue> {
    result
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = infoCurves)]
pub fn info_curves_json(variant: &str, from: f64, to: f64, step: f64) -> Result<String, JsValue> {
    to_js(info_curves(variant, from, to, step))
}

#[wasm_bindgen(js_name = attackReport)]
pub fn attack_report_json(variant: &str, qber: f64) -> Result<String, JsValue> {
    to_js(attack_report(variant, qber))
}

#[wasm_bindgen(js_name = distillationCurve)]
pub fn distillation_curve_json(variant: &str, qber: f64, n_max: u32) -> Result<String, JsValue> {
    to_js(distillation_curve(variant, qber, n_max))
}
