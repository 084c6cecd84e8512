//! Measurement-induced non-locality.
//!
//! For a bipartite state `ρ`, MIN is the largest squared Hilbert–Schmidt
//! distance `‖ρ − Π(ρ)‖²` over von Neumann measurements `Π` on party A that
//! leave the marginal `ρ_A` unchanged. Party A is always qubit 0 of the
//! register passed in.
//!
//! * [`min_pure`]: pure states across any cut, `N = 1 − Σ s_i²`.
//! * [`min_2xn`]: A is one qubit, closed form in the correlation matrix `T`
//!   and coherent vector `x`.
//! * [`min_bruteforce`]: direct maximization, used as an independent oracle.
//! * [`min3_closed`], [`min4_closed`]: parameter-level formulas for the
//!   canonical three-qubit form and the four-qubit generic class.

mod basis;
mod closed3;
mod closed4;
mod oracle;

use serde::{Deserialize, Serialize};

pub use basis::{gell_mann_basis, SparseOp};
pub use closed3::{closed_terms3, min3_closed, min3_x_zero_exchanged, AcinPair, ClosedFormTerms3};
pub use closed4::{min4_closed, x_state_params, GenericPair, XStateParams, K_CONST};
pub use oracle::{fibonacci_direction, min_bruteforce, min_bruteforce_with, MeasurementDirection, DEFAULT_GRID_POINTS};

use crate::error::{Error, Result};
use crate::qmat::{herm_eigvals, schmidt_spectrum, ComplexMatrix, DensityMatrix, PureState, C64};

/// Default `‖x‖` threshold separating the two closed-form branches.
pub const EPSILON_X: f64 = 1e-10;
/// Below this `‖x‖` (and above [`EPSILON_X`]) both branch values are kept.
pub const NEAR_DEGENERATE_X: f64 = 1e-6;
/// Negative results within this margin are roundoff and clipped to 0.
pub const CLIP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Pure,
    XNonzero,
    XZero,
    Oracle,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Pure => "pure",
            Branch::XNonzero => "x_nonzero",
            Branch::XZero => "x_zero",
            Branch::Oracle => "oracle",
        })
    }
}

/// Both branch values for an input whose coherent vector is tiny but nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchValues {
    pub x_norm: f64,
    pub x_nonzero: f64,
    pub x_zero: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinResult {
    pub value: f64,
    pub branch: Branch,
    /// Eigenvalues of `T Tᵗ`, ascending, when the branch computes them.
    pub spectrum: Option<[f64; 3]>,
    pub diagnostics: Option<BranchValues>,
}

impl MinResult {
    pub(crate) fn new(value: f64, branch: Branch, spectrum: Option<[f64; 3]>) -> Self {
        Self { value: clip(value), branch, spectrum, diagnostics: None }
    }
}

pub(crate) fn clip(v: f64) -> f64 {
    if (-CLIP_TOL..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// Correlation data of a `2⊗n` state in the basis `X_i ⊗ Y_j`.
///
/// `t[i][j] = tr(ρ X_{i+1} ⊗ Y_{j+1})`, `x[i] = tr(ρ X_{i+1} ⊗ Y_0)` and
/// `y[j] = tr(ρ X_0 ⊗ Y_{j+1})`, where `X_i = σ_i/√2` and `Y` is the
/// Gell-Mann basis of [`gell_mann_basis`].
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationData {
    b_dim: usize,
    t: Vec<[f64; 3]>,
    x: [f64; 3],
    y: Vec<f64>,
}

impl CorrelationData {
    /// Dimension `n` of party B.
    pub fn b_dim(&self) -> usize {
        self.b_dim
    }

    /// Entry `t_ij` for `i in 0..3`, `j in 0..n²-1`.
    pub fn t(&self, i: usize, j: usize) -> f64 {
        self.t[j][i]
    }

    pub fn t_rows(&self) -> [Vec<f64>; 3] {
        std::array::from_fn(|i| self.t.iter().map(|col| col[i]).collect())
    }

    pub fn x(&self) -> [f64; 3] {
        self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x_norm(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `T Tᵗ`.
    pub fn ttt(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for col in &self.t {
            for i in 0..3 {
                for k in 0..3 {
                    m[i][k] += col[i] * col[k];
                }
            }
        }
        m
    }

    /// Rebuilds `ρ = Σ_ij c_ij X_i ⊗ Y_j` from the stored coefficients.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.b_dim;
        let ys = gell_mann_basis(n);
        let xs = pauli_basis();
        let coeff = |i: usize, j: usize| -> f64 {
            match (i, j) {
                (0, 0) => 1.0 / ((2 * n) as f64).sqrt(),
                (i, 0) => self.x[i - 1],
                (0, j) => self.y[j - 1],
                (i, j) => self.t[j - 1][i - 1],
            }
        };
        let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
        for (i, xop) in xs.iter().enumerate() {
            for (j, yop) in ys.iter().enumerate() {
                let c = coeff(i, j);
                if c == 0.0 {
                    continue;
                }
                for &(a, b, xv) in xop {
                    for &(k, l, yv) in &yop.entries {
                        out[(a * n + k, b * n + l)] += xv * yv * c;
                    }
                }
            }
        }
        out
    }
}

// X_0..X_3 = (I, σx, σy, σz)/√2 as sparse entries.
fn pauli_basis() -> [Vec<(usize, usize, C64)>; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = |v: f64| C64::new(v, 0.0);
    [
        vec![(0, 0, r(h)), (1, 1, r(h))],
        vec![(0, 1, r(h)), (1, 0, r(h))],
        vec![(0, 1, C64::new(0.0, -h)), (1, 0, C64::new(0.0, h))],
        vec![(0, 0, r(h)), (1, 1, r(-h))],
    ]
}

/// Correlation matrix and coherent vector of `ρ` with party A = qubit 0.
pub fn correlation_data(rho: &DensityMatrix) -> Result<CorrelationData> {
    if rho.num_qubits() < 2 {
        return Err(Error::invalid("correlation data needs party A plus at least one qubit"));
    }
    let m = rho.matrix();
    let n = m.rows() / 2;
    let ys = gell_mann_basis(n);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // s[a][b] = tr(ρ_ab Y) for the n×n blocks ρ_ab of ρ.
    let block_traces = |y: &SparseOp| -> [[C64; 2]; 2] {
        std::array::from_fn(|a| std::array::from_fn(|b| y.trace_against(|r, c| m[(a * n + r, b * n + c)])))
    };
    // tr(ρ X_i⊗Y) = Σ_ab (X_i)_ba s_ab.
    let project = |s: [[C64; 2]; 2]| -> [f64; 4] {
        [
            h * (s[0][0] + s[1][1]).re,
            h * (s[0][1] + s[1][0]).re,
            h * (C64::new(0.0, 1.0) * (s[0][1] - s[1][0])).re,
            h * (s[0][0] - s[1][1]).re,
        ]
    };
    let first = project(block_traces(&ys[0]));
    let x = [first[1], first[2], first[3]];
    let mut t = Vec::with_capacity(ys.len() - 1);
    let mut y = Vec::with_capacity(ys.len() - 1);
    for op in &ys[1..] {
        let p = project(block_traces(op));
        y.push(p[0]);
        t.push([p[1], p[2], p[3]]);
    }
    Ok(CorrelationData { b_dim: n, t, x, y })
}

fn sym3_eigvals(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let cm = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(0.5 * (m[i][j] + m[j][i]), 0.0));
    let v = herm_eigvals(&cm).expect("symmetric by construction");
    [v[0], v[1], v[2]]
}

fn quad(m: &[[f64; 3]; 3], x: &[f64; 3]) -> f64 {
    (0..3).map(|i| (0..3).map(|k| x[i] * m[i][k] * x[k]).sum::<f64>()).sum()
}

/// `N` across `cut | rest` for a pure state.
pub fn min_pure(psi: &PureState, cut: &[usize]) -> Result<MinResult> {
    let s = schmidt_spectrum(psi, cut)?;
    Ok(MinResult::new(1.0 - s.purity(), Branch::Pure, None))
}

/// Two-branch closed form for `2⊗n` states, party A = qubit 0.
pub fn min_2xn(rho: &DensityMatrix, epsilon_x: f64) -> Result<MinResult> {
    let cd = correlation_data(rho)?;
    Ok(min_from_correlation(&cd, epsilon_x))
}

/// The closed form evaluated on precomputed correlation data.
pub fn min_from_correlation(cd: &CorrelationData, epsilon_x: f64) -> MinResult {
    let m = cd.ttt();
    let spectrum = sym3_eigvals(&m);
    let trace = m[0][0] + m[1][1] + m[2][2];
    let x = cd.x();
    let xn = cd.x_norm();
    let zero_branch = trace - spectrum[0];
    let nonzero_branch = || trace - quad(&m, &x) / (xn * xn);
    if xn > epsilon_x {
        let v = nonzero_branch();
        let mut r = MinResult::new(v, Branch::XNonzero, Some(spectrum));
        if xn < NEAR_DEGENERATE_X {
            r.diagnostics = Some(BranchValues { x_norm: xn, x_nonzero: clip(v), x_zero: clip(zero_branch) });
        }
        r
    } else {
        MinResult::new(zero_branch, Branch::XZero, Some(spectrum))
    }
}

#[cfg(test)]
mod tests;
