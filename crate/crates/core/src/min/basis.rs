//! Orthonormal Hermitian operator basis for an `n`-level system: generalized
//! Gell-Mann matrices scaled so that `tr(Y_i Y_j) = δ_ij`, with `Y_0 = I/√n`.
//!
//! For `n = 2` the traceless elements are `σx/√2, σy/√2, σz/√2` in that order.

use crate::qmat::{ComplexMatrix, C64};

/// One basis element stored as its nonzero entries `(row, col, value)`.
#[derive(Clone, Debug)]
pub struct SparseOp {
    pub entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    pub fn to_dense(&self, n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    /// `tr(M · self)` for a dense `n×n` block accessed through `m(row, col)`.
    #[inline]
    pub fn trace_against(&self, m: impl Fn(usize, usize) -> C64) -> C64 {
        self.entries.iter().map(|&(i, j, v)| m(j, i) * v).sum()
    }
}

/// Returns `[Y_0, Y_1, …, Y_{n²-1}]`.
pub fn gell_mann_basis(n: usize) -> Vec<SparseOp> {
    assert!(n >= 2, "basis needs at least two levels");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    let inv = 1.0 / (n as f64).sqrt();
    out.push(SparseOp { entries: (0..n).map(|i| (i, i, C64::new(inv, 0.0))).collect() });
    for j in 0..n {
        for k in j + 1..n {
            out.push(SparseOp { entries: vec![(j, k, C64::new(h, 0.0)), (k, j, C64::new(h, 0.0))] });
            out.push(SparseOp { entries: vec![(j, k, C64::new(0.0, -h)), (k, j, C64::new(0.0, h))] });
        }
    }
    for l in 1..n {
        let s = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut entries: Vec<_> = (0..l).map(|i| (i, i, C64::new(s, 0.0))).collect();
        entries.push((l, l, C64::new(-(l as f64) * s, 0.0)));
        out.push(SparseOp { entries });
    }
    out
}
