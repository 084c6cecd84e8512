//! Brute-force MIN: maximize `‖ρ − Σ_k (P_k⊗I) ρ (P_k⊗I)‖²` directly over
//! qubit measurements `P_± = (I ± e·σ)/2` that leave `ρ_A` invariant.
//!
//! When `ρ_A` has distinct eigenvalues the only admissible measurement is
//! its eigenbasis. When `ρ_A = I/2` every direction is admissible and the
//! maximum is found by a Fibonacci-sphere sweep followed by local search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Branch, MinResult};
use crate::error::{Error, Result};
use crate::qmat::{partial_trace, DensityMatrix, C64};

pub const DEFAULT_GRID_POINTS: usize = 20_000;

/// Eigenvalue gap of `ρ_A` below which all directions are admissible.
pub const DEGENERACY_GAP: f64 = 1e-8;
const REFINE_MIN_STEP: f64 = 1e-7;

/// Bloch axis `e` of the measurement `{(I ± e·σ)/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDirection {
    e: [f64; 3],
}

impl MeasurementDirection {
    pub fn new(e: [f64; 3]) -> Result<Self> {
        let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("measurement direction has norm {norm}")));
        }
        Ok(Self { e })
    }

    fn normalized(e: [f64; 3]) -> Self {
        let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self { e: e.map(|v| v / norm) }
    }

    pub fn axis(&self) -> [f64; 3] {
        self.e
    }

    /// The two projectors `P_+`, `P_-` as 2×2 row-major arrays.
    pub fn projectors(&self) -> [[[C64; 2]; 2]; 2] {
        let [x, y, z] = self.e;
        let half = |s: f64| -> [[C64; 2]; 2] {
            [
                [C64::new(0.5 * (1.0 + s * z), 0.0), C64::new(0.5 * s * x, -0.5 * s * y)],
                [C64::new(0.5 * s * x, 0.5 * s * y), C64::new(0.5 * (1.0 - s * z), 0.0)],
            ]
        };
        [half(1.0), half(-1.0)]
    }
}

/// Point `i` of an `n`-point Fibonacci lattice on the unit sphere.
pub fn fibonacci_direction(i: usize, n: usize) -> MeasurementDirection {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = golden * i as f64;
    MeasurementDirection::normalized([r * phi.cos(), r * phi.sin(), z])
}

/// `‖ρ − Π_e(ρ)‖²` evaluated literally, block by block.
pub fn disturbance(rho: &DensityMatrix, dir: &MeasurementDirection) -> f64 {
    let m = rho.matrix();
    let n = m.rows() / 2;
    let proj = dir.projectors();
    // w[a][b][c][d] = Σ_k P_k[a][c] P_k[d][b]: (Π ρ)_ab = Σ_cd w_abcd ρ_cd.
    let mut w = [[[[C64::new(0.0, 0.0); 2]; 2]; 2]; 2];
    for p in &proj {
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        w[a][b][c][d] += p[a][c] * p[d][b];
                    }
                }
            }
        }
    }
    let mut total = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            for r in 0..n {
                for s in 0..n {
                    let mut pr = C64::new(0.0, 0.0);
                    for c in 0..2 {
                        for d in 0..2 {
                            pr += w[a][b][c][d] * m[(c * n + r, d * n + s)];
                        }
                    }
                    total += (m[(a * n + r, b * n + s)] - pr).norm_sqr();
                }
            }
        }
    }
    total
}

pub fn min_bruteforce(rho: &DensityMatrix, grid_points: usize) -> Result<MinResult> {
    min_bruteforce_with(rho, grid_points).map(|(r, _)| r)
}

/// Like [`min_bruteforce`], also returning the maximizing direction.
pub fn min_bruteforce_with(rho: &DensityMatrix, grid_points: usize) -> Result<(MinResult, MeasurementDirection)> {
    if rho.num_qubits() < 2 {
        return Err(Error::invalid("brute-force MIN needs party A plus at least one qubit"));
    }
    if grid_points == 0 {
        return Err(Error::invalid("grid_points must be positive"));
    }
    let a = partial_trace(rho, &[0])?;
    let am = a.matrix();
    let bloch = [2.0 * am[(0, 1)].re, -2.0 * am[(0, 1)].im, (am[(0, 0)] - am[(1, 1)]).re];
    let gap = bloch.iter().map(|v| v * v).sum::<f64>().sqrt();
    if gap > DEGENERACY_GAP {
        let dir = MeasurementDirection::normalized(bloch);
        return Ok((MinResult::new(disturbance(rho, &dir), Branch::Oracle, None), dir));
    }

    let best = (0..grid_points)
        .into_par_iter()
        .map(|i| {
            let d = fibonacci_direction(i, grid_points);
            (disturbance(rho, &d), d)
        })
        .reduce_with(better)
        .expect("grid is nonempty");
    let (value, dir) = refine(rho, best, (4.0 * std::f64::consts::PI / grid_points as f64).sqrt());
    Ok((MinResult::new(value, Branch::Oracle, None), dir))
}

// Max by value; ties go to the lexicographically smallest axis.
fn better(a: (f64, MeasurementDirection), b: (f64, MeasurementDirection)) -> (f64, MeasurementDirection) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            let ord = a.1.e.iter().zip(&b.1.e).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne());
            if ord == Some(std::cmp::Ordering::Greater) {
                b
            } else {
                a
            }
        }
    }
}

fn tangent_basis(e: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if e[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot: f64 = helper.iter().zip(&e).map(|(h, x)| h * x).sum();
    let u = MeasurementDirection::normalized(std::array::from_fn(|i| helper[i] - dot * e[i])).e;
    let v = [e[1] * u[2] - e[2] * u[1], e[2] * u[0] - e[0] * u[2], e[0] * u[1] - e[1] * u[0]];
    (u, v)
}

fn refine(rho: &DensityMatrix, start: (f64, MeasurementDirection), mut step: f64) -> (f64, MeasurementDirection) {
    let (mut value, mut dir) = start;
    let mut budget = 100_000;
    while step >= REFINE_MIN_STEP && budget > 0 {
        budget -= 1;
        let (u, v) = tangent_basis(dir.e);
        let mut moved = false;
        for (t, s) in [(u, 1.0), (u, -1.0), (v, 1.0), (v, -1.0)] {
            let cand = MeasurementDirection::normalized(std::array::from_fn(|i| dir.e[i] + s * step * t[i]));
            let cv = disturbance(rho, &cand);
            if cv > value {
                value = cv;
                dir = cand;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (value, dir)
}
