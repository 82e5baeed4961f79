//! Exhaustive enumeration of the repeat-code protocol for short blocks.
//!
//! Builds its own per-position table from `(F, D, delta0, delta1)` and walks
//! every outcome tuple, so it shares no code path with the library's
//! closed-form binomial sums.

#![allow(dead_code)]

use qkd_core::AttackParams;

#[derive(Debug, Clone, Copy)]
pub struct Enumerated {
    pub p_accept: f64,
    pub beta: f64,
    pub gamma: f64,
    pub gamma_full: f64,
}

fn cell_probability(a: &AttackParams, x: u8, y: u8, z1: u8, z2: u8) -> f64 {
    if z1 != x ^ y {
        return 0.0;
    }
    let (channel, delta) = if x == y {
        (a.fidelity(), a.delta0())
    } else {
        (a.disturbance(), a.delta1())
    };
    let guess = if z2 == y { delta } else { 1.0 - delta };
    0.5 * channel * guess
}

pub fn enumerate(a: &AttackParams, n: usize) -> Enumerated {
    assert!((1..=4).contains(&n));
    let mut accept = 0.0;
    let mut bob_wrong = 0.0;
    let mut bob_right = 0.0;
    let mut eve_wrong_bob_right = 0.0;
    let mut eve_wrong = 0.0;
    let outcomes = 16usize.pow(n as u32);
    for code in 0..outcomes {
        let cells: Vec<(u8, u8, u8, u8)> = (0..n)
            .map(|i| {
                let c = (code >> (4 * i)) & 0xf;
                ((c >> 3) as u8 & 1, (c >> 2) as u8 & 1, (c >> 1) as u8 & 1, c as u8 & 1)
            })
            .collect();
        let p_cells: f64 = cells
            .iter()
            .map(|&(x, y, z1, z2)| cell_probability(a, x, y, z1, z2))
            .product();
        if p_cells == 0.0 {
            continue;
        }
        for c in 0..2u8 {
            let p = 0.5 * p_cells;
            let public: Vec<u8> = cells.iter().map(|&(x, ..)| x ^ c).collect();
            let t: Vec<u8> = public.iter().zip(&cells).map(|(&m, &(_, y, ..))| m ^ y).collect();
            if !t.iter().all(|&b| b == t[0]) {
                continue;
            }
            accept += p;
            let bob_ok = t[0] == c;
            if bob_ok {
                bob_right += p;
            } else {
                bob_wrong += p;
            }
            let ones = public
                .iter()
                .zip(&cells)
                .filter(|(&m, &(_, _, z1, z2))| m ^ z1 ^ z2 == 1)
                .count();
            let eve_err = if 2 * ones > n {
                (c == 0) as u8 as f64
            } else if 2 * ones < n {
                (c == 1) as u8 as f64
            } else {
                0.5
            };
            eve_wrong += p * eve_err;
            if bob_ok {
                eve_wrong_bob_right += p * eve_err;
            }
        }
    }
    Enumerated {
        p_accept: accept,
        beta: bob_wrong / accept,
        gamma: eve_wrong_bob_right / bob_right,
        gamma_full: eve_wrong / accept,
    }
}
