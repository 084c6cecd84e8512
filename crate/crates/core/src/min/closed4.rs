//! Closed form for two-qubit reductions of four-qubit generic-class states.
//!
//! Every reduction `ρ_AX` is an X-state
//!
//! ```text
//!       | α 0 0 β |
//! ¼  ·  | 0 γ δ 0 |      α + γ = 2,
//!       | 0 δ γ 0 |
//!       | β 0 0 α |
//! ```
//!
//! whose correlation matrix is `diag(β+δ, δ−β, α−γ)/4` and whose coherent
//! vector vanishes. Hence `TTᵗ` has eigenvalues `k(β±δ)²`, `k(α−γ)²` with
//! `k = 1/16`, and `N = k[2(β²+δ²) + (α−γ)²] − λ_min`.
//!
//! With `a = z0+z1`, `b = z0−z1`, `c = z2+z3`, `d = z2−z3`:
//!
//! | pair | α | β | γ | δ |
//! |------|---|---|---|---|
//! | AB | 2(\|z0\|²+\|z1\|²) | 2(\|z0\|²−\|z1\|²) | 2(\|z2\|²+\|z3\|²) | 2(\|z2\|²−\|z3\|²) |
//! | AC | \|a\|²+\|c\|² | 2Re(āc) | \|b\|²+\|d\|² | 2Re(b̄d) |
//! | AD | \|a\|²+\|d\|² | 2Re(ād) | \|b\|²+\|c\|² | 2Re(b̄c) |

use serde::{Deserialize, Serialize};

use super::{Branch, MinResult};
use crate::qmat::C64;
use crate::states::GenericCoeffs;

pub const K_CONST: f64 = 1.0 / 16.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenericPair {
    AB,
    AC,
    AD,
}

impl GenericPair {
    pub const ALL: [GenericPair; 3] = [GenericPair::AB, GenericPair::AC, GenericPair::AD];

    /// Index of the partner qubit.
    pub fn partner(&self) -> usize {
        match self {
            GenericPair::AB => 1,
            GenericPair::AC => 2,
            GenericPair::AD => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// `(z0+z1, z0−z1, z2+z3, z2−z3)`
    pub derived: [C64; 4],
    pub kconst: f64,
}

impl XStateParams {
    /// Eigenvalues of `TTᵗ`, ascending.
    pub fn spectrum(&self) -> [f64; 3] {
        let k = self.kconst;
        let mut s = [
            k * (self.beta + self.delta).powi(2),
            k * (self.beta - self.delta).powi(2),
            k * (self.alpha - self.gamma).powi(2),
        ];
        s.sort_by(f64::total_cmp);
        s
    }
}

pub fn x_state_params(c: &GenericCoeffs, pair: GenericPair) -> XStateParams {
    let [z0, z1, z2, z3] = c.z();
    let derived = [z0 + z1, z0 - z1, z2 + z3, z2 - z3];
    let [a, b, cc, d] = derived;
    let re_dot = |u: C64, v: C64| 2.0 * (u.conj() * v).re;
    let (alpha, beta, gamma, delta) = match pair {
        GenericPair::AB => (
            2.0 * (z0.norm_sqr() + z1.norm_sqr()),
            2.0 * (z0.norm_sqr() - z1.norm_sqr()),
            2.0 * (z2.norm_sqr() + z3.norm_sqr()),
            2.0 * (z2.norm_sqr() - z3.norm_sqr()),
        ),
        GenericPair::AC => (a.norm_sqr() + cc.norm_sqr(), re_dot(a, cc), b.norm_sqr() + d.norm_sqr(), re_dot(b, d)),
        GenericPair::AD => (a.norm_sqr() + d.norm_sqr(), re_dot(a, d), b.norm_sqr() + cc.norm_sqr(), re_dot(b, cc)),
    };
    XStateParams { alpha, beta, gamma, delta, derived, kconst: K_CONST }
}

/// N(ρ_AX) for a generic-class state.
pub fn min4_closed(c: &GenericCoeffs, pair: GenericPair) -> MinResult {
    let p = x_state_params(c, pair);
    let spectrum = p.spectrum();
    let value = p.kconst * (2.0 * (p.beta * p.beta + p.delta * p.delta) + (p.alpha - p.gamma).powi(2)) - spectrum[0];
    MinResult::new(value, Branch::XZero, Some(spectrum))
}
