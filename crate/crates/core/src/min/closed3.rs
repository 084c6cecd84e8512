//! Closed forms for the two-qubit reductions `ρ_AB`, `ρ_AC` of a state in
//! canonical three-qubit form.
//!
//! For `ρ_AB` the correlation matrix is
//!
//! ```text
//!     | λ0λ3                 0          λ0λ1 cosθ      |
//! T = | 0                   −λ0λ3       λ0λ1 sinθ      |
//!     | −λ1λ3 cosθ − λ2λ4   λ1λ3 sinθ   ½ − λ1² − λ2²  |
//! ```
//!
//! and `x = (λ0λ1 cosθ, λ0λ1 sinθ, λ0² − ½)` for both pairs. `ρ_AC` follows
//! by exchanging λ2 and λ3. The σy row/column sign matches the operator
//! basis used by [`super::correlation_data`]; flipping it leaves N unchanged.
//! Note the zz entry carries λ2 (the |101> weight) for the AB pair.

use serde::{Deserialize, Serialize};

use super::{sym3_eigvals, Branch, MinResult, EPSILON_X};
use crate::states::AcinParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcinPair {
    AB,
    AC,
}

/// Scalar terms of the closed forms.
///
/// With `‖x‖ ≠ 0`: `a, b, c` are the squared row norms of `T_AB` and
/// `g, f, k` those of `T_AC`. With `‖x‖ = 0`: `T Tᵗ = [[a,0,b],[0,a,0],[b,0,c]]`
/// for AB and `[[g,0,b],[0,g,0],[b,0,k]]` for AC; `f` then repeats the
/// shared off-diagonal `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormTerms3 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub g: f64,
    pub f: f64,
    pub k: f64,
}

fn coherent_vector(p: &AcinParams) -> [f64; 3] {
    let [l0, l1, ..] = p.lambda();
    let t = p.theta();
    [l0 * l1 * t.cos(), l0 * l1 * t.sin(), l0 * l0 - 0.5]
}

/// Correlation matrix of the requested pair, rows `i`, columns `j`.
pub(crate) fn acin_t(p: &AcinParams, pair: AcinPair) -> [[f64; 3]; 3] {
    let [l0, l1, mut l2, mut l3, l4] = p.lambda();
    if pair == AcinPair::AC {
        std::mem::swap(&mut l2, &mut l3);
    }
    let (s, c) = p.theta().sin_cos();
    [
        [l0 * l3, 0.0, l0 * l1 * c],
        [0.0, -l0 * l3, l0 * l1 * s],
        [-l1 * l3 * c - l2 * l4, l1 * l3 * s, 0.5 - l1 * l1 - l2 * l2],
    ]
}

pub fn closed_terms3(p: &AcinParams) -> ClosedFormTerms3 {
    let [l0, l1, l2, l3, l4] = p.lambda();
    let xn = norm(coherent_vector(p));
    if xn <= EPSILON_X {
        let b = -l0 * l2 * l3 * l4;
        ClosedFormTerms3 {
            a: l0 * l0 * l3 * l3,
            b,
            c: l2 * l2 * l4 * l4 + (0.5 - l2 * l2).powi(2),
            g: l0 * l0 * l2 * l2,
            f: b,
            k: l3 * l3 * l4 * l4 + (0.5 - l3 * l3).powi(2),
        }
    } else {
        let (s, c) = p.theta().sin_cos();
        let (s2, c2) = (s * s, c * c);
        let (l0s, l1s) = (l0 * l0, l1 * l1);
        ClosedFormTerms3 {
            a: l0s * l3 * l3 + l0s * l1s * c2,
            b: l0s * l3 * l3 + l0s * l1s * s2,
            c: (l2 * l4 + l1 * l3 * c).powi(2) + l1s * l3 * l3 * s2 + (0.5 - l1s - l2 * l2).powi(2),
            g: l0s * l2 * l2 + l0s * l1s * c2,
            f: l0s * l2 * l2 + l0s * l1s * s2,
            k: (l3 * l4 + l1 * l2 * c).powi(2) + l1s * l2 * l2 * s2 + (0.5 - l1s - l3 * l3).powi(2),
        }
    }
}

fn norm(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn ttt(t: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|k| (0..3).map(|j| t[i][j] * t[k][j]).sum()))
}

// 2p + q − min{p, ½(p + q − √((p−q)² + 4r²))} and the matching spectrum.
fn x_zero_value(p: f64, q: f64, r: f64) -> (f64, [f64; 3]) {
    let disc = ((p - q).powi(2) + 4.0 * r * r).sqrt();
    let lo = 0.5 * (p + q - disc);
    let hi = 0.5 * (p + q + disc);
    let mut spec = [p, lo, hi];
    spec.sort_by(f64::total_cmp);
    (2.0 * p + q - p.min(lo), spec)
}

/// N(ρ_AB) or N(ρ_AC) from the canonical-form parameters.
pub fn min3_closed(p: &AcinParams, pair: AcinPair) -> MinResult {
    let x = coherent_vector(p);
    let xn = norm(x);
    let terms = closed_terms3(p);
    if xn <= EPSILON_X {
        let (value, spec) = match pair {
            AcinPair::AB => x_zero_value(terms.a, terms.c, terms.b),
            AcinPair::AC => x_zero_value(terms.g, terms.k, terms.f),
        };
        return MinResult::new(value, Branch::XZero, Some(spec));
    }
    let m = ttt(&acin_t(p, pair));
    let trace = match pair {
        AcinPair::AB => terms.a + terms.b + terms.c,
        AcinPair::AC => terms.g + terms.f + terms.k,
    };
    let q: f64 = (0..3).map(|i| (0..3).map(|k| x[i] * m[i][k] * x[k]).sum::<f64>()).sum();
    MinResult::new(trace - q / (xn * xn), Branch::XNonzero, Some(sym3_eigvals(&m)))
}

/// The `‖x‖ = 0` formula with λ2 and λ3 exchanged inside the zz terms, i.e.
/// `c = λ2²λ4² + (½ − λ3²)²` and `k = λ3²λ4² + (½ − λ2²)²`.
///
/// This is not MIN; it exists to compare against monogamy fractions that
/// were computed with that variant. Assumes `λ1 = 0`, `λ0² = ½`.
pub fn min3_x_zero_exchanged(p: &AcinParams, pair: AcinPair) -> f64 {
    let [l0, _, l2, l3, l4] = p.lambda();
    let b = -l0 * l2 * l3 * l4;
    match pair {
        AcinPair::AB => x_zero_value(l0 * l0 * l3 * l3, l2 * l2 * l4 * l4 + (0.5 - l3 * l3).powi(2), b).0,
        AcinPair::AC => x_zero_value(l0 * l0 * l2 * l2, l3 * l3 * l4 * l4 + (0.5 - l2 * l2).powi(2), b).0,
    }
}
