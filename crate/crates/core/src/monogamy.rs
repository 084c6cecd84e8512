//! Monogamy of MIN around a pivot party, and tangles.
//!
//! For a pure `n`-qubit state and pivot `p`, the state is monogamous when
//! `N(ρ_{p|rest}) ≥ Σ_{q≠p} N(ρ_{pq})`. The global term comes from the
//! Schmidt spectrum across `p | rest`; each pairwise term is the `2⊗2`
//! closed form on the reduction to `(p, q)` with `p` as party A.
//! Equality counts as monogamous.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::min::{min_2xn, min_pure, EPSILON_X};
use crate::qmat::PureState;

/// Deficits at or above `-VERDICT_TOL` are monogamous.
pub const VERDICT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonogamyReport {
    pub pivot: usize,
    pub global_min: f64,
    pub pairwise: Vec<(usize, f64)>,
    pub pair_sum: f64,
    pub deficit: f64,
    pub monogamous: bool,
}

pub fn monogamy_report(psi: &PureState, pivot: usize) -> Result<MonogamyReport> {
    let n = psi.num_qubits();
    if n < 3 {
        return Err(Error::invalid(format!("monogamy needs at least 3 qubits, got {n}")));
    }
    if pivot >= n {
        return Err(Error::cut(format!("pivot {pivot} out of range for {n} qubits")));
    }
    let global_min = min_pure(psi, &[pivot])?.value;
    let pairwise = (0..n)
        .filter(|&q| q != pivot)
        .map(|q| Ok((q, min_2xn(&psi.reduced(&[pivot, q])?, EPSILON_X)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let pair_sum: f64 = pairwise.iter().map(|(_, v)| v).sum();
    let deficit = global_min - pair_sum;
    Ok(MonogamyReport { pivot, global_min, pairwise, pair_sum, deficit, monogamous: deficit >= -VERDICT_TOL })
}

/// `τ = 2(1 − tr ρ_S²)` across `cut | rest`.
pub fn tangle(psi: &PureState, cut: &[usize]) -> Result<f64> {
    if cut.len() >= psi.num_qubits() {
        return Err(Error::cut("cut must leave at least one qubit on the other side"));
    }
    Ok(2.0 * (1.0 - psi.reduced(cut)?.purity()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangleSummary {
    /// Mean of the four one-vs-three tangles.
    pub tau1: f64,
    /// Mean of the three two-vs-two tangles.
    pub tau2: f64,
    /// `4 τ1 − 3 τ2`
    pub tau_abcd: f64,
}

pub fn tangle_summary(psi: &PureState) -> Result<TangleSummary> {
    if psi.num_qubits() != 4 {
        return Err(Error::invalid(format!("tangle summary needs 4 qubits, got {}", psi.num_qubits())));
    }
    let tau1 = (0..4).map(|q| tangle(psi, &[q])).sum::<Result<f64>>()? / 4.0;
    let tau2 = [[0, 1], [0, 2], [0, 3]].iter().map(|c| tangle(psi, c)).sum::<Result<f64>>()? / 3.0;
    Ok(TangleSummary { tau1, tau2, tau_abcd: 4.0 * tau1 - 3.0 * tau2 })
}
