//! Dense complex linear algebra for small qubit registers.
//!
//! Qubit ordering is big-endian throughout the crate: in a register of `n`
//! qubits, qubit 0 (party A) is the most significant bit of a basis index,
//! so `|q0 q1 ... q(n-1)>` has index `q0 * 2^(n-1) + ... + q(n-1)`.
//! Every other module inherits this convention.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Tolerance on `Σ|ψ_i|² = 1` for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on hermiticity and unit trace for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as roundoff and clipped to 0.
pub const PSD_TOL: f64 = 1e-10;
/// Hermiticity tolerance accepted by [`herm_eigvals`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-15;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise deviation `|A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `U self U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix { rows: 2, cols: 2, data: vec![ZERO, ONE, ONE, ZERO] }
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix { rows: 2, cols: 2, data: vec![ZERO, -I, I, ZERO] }
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix { rows: 2, cols: 2, data: vec![ONE, ZERO, ZERO, -ONE] }
}

/// `σx, σy, σz` in that order.
pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Kronecker product: entry `(i·rB + k, j·cB + l)` is `A(i,j)·B(k,l)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(a.rows * rb, a.cols * cb);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `tr(A†A)`, the squared Hilbert–Schmidt norm.
pub fn hs_norm_sq(a: &ComplexMatrix) -> f64 {
    a.data.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Side 2 uses the closed form; larger matrices use cyclic complex Jacobi
/// sweeps, which stay accurate to roundoff when eigenvalues nearly coincide
/// (the trigonometric cubic loses about half the digits there).
pub fn herm_eigvals(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::invalid(format!("{}x{} matrix is not square", h.rows, h.cols)));
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    let mut vals = match h.rows {
        1 => vec![h[(0, 0)].re],
        2 => eig2(h).to_vec(),
        _ => jacobi_eigvals(h),
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn eig2(h: &ComplexMatrix) -> [f64; 2] {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)];
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - radius, mean + radius]
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_eigvals(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows;
    // Work on the Hermitian part so roundoff asymmetry cannot accumulate.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    let scale = hs_norm_sq(&a).sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    (0..n).map(|i| a[(i, i)].re).collect()
}

// Applies A <- J† A J with J chosen to annihilate A[p][q].
fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let h = a[(p, q)];
    let r = h.norm();
    if r == 0.0 {
        return;
    }
    let phase = h / r;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // Columns of J restricted to (p, q): col p = (c, -s·conj(phase)), col q = (s·phase, c).
    let jpp = C64::new(c, 0.0);
    let jqp = -s * phase.conj();
    let jpq = s * phase;
    let jqq = C64::new(c, 0.0);
    let n = a.rows;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
}

/// Bit of `qubit` in basis index `index` of an `n`-qubit register.
#[inline]
pub fn qubit_bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

fn validate_selection(sel: &[usize], n: usize) -> Result<()> {
    if sel.is_empty() {
        return Err(Error::cut("empty qubit selection"));
    }
    let mut seen = vec![false; n];
    for &q in sel {
        if q >= n {
            return Err(Error::cut(format!("qubit {q} out of range for {n} qubits")));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::cut(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

fn complement(sel: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|q| !sel.contains(q)).collect()
}

// Offsets such that full index = keep_offsets[a] | rest_offsets[e], with `a`
// enumerating the selected qubits in the listed order (big-endian).
fn split_offsets(sel: &[usize], n: usize) -> (Vec<usize>, Vec<usize>) {
    let offsets = |qs: &[usize]| -> Vec<usize> {
        let m = qs.len();
        (0..1usize << m)
            .map(|a| {
                qs.iter()
                    .enumerate()
                    .filter(|&(pos, _)| (a >> (m - 1 - pos)) & 1 == 1)
                    .map(|(_, &q)| 1usize << (n - 1 - q))
                    .sum()
            })
            .collect()
    };
    let rest = complement(sel, n);
    (offsets(sel), offsets(&rest))
}

/// Normalized state vector over `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("amplitude count {len} is not a power of two ≥ 2")));
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { norm_sq });
        }
        Ok(Self { num_qubits: len.trailing_zeros() as usize, amps })
    }

    /// Rescales `amps` to unit norm before validating.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Normalization { norm_sq: norm * norm });
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Self::new(amps)
    }

    /// Computational basis state `|bits>`, `bits[0]` being qubit 0.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        let mut amps = vec![ZERO; 1 << n];
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
        amps[idx] = ONE;
        Self::new(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            num_qubits: self.num_qubits,
            matrix: ComplexMatrix::outer(&self.amps, &self.amps),
        }
    }

    /// Reduced state of the listed qubits, in the listed order.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.num_qubits;
        validate_selection(keep, n)?;
        let (ko, ro) = split_offsets(keep, n);
        let d = ko.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for a in 0..d {
            for b in a..d {
                let s: C64 = ro
                    .iter()
                    .map(|&e| self.amps[ko[a] | e] * self.amps[ko[b] | e].conj())
                    .sum();
                m[(a, b)] = s;
                m[(b, a)] = s.conj();
            }
        }
        Ok(DensityMatrix { num_qubits: keep.len(), matrix: m })
    }

    /// Applies a unitary acting on the whole register.
    pub fn apply(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.amps.len() || !u.is_square() {
            return Err(Error::invalid("unitary dimension does not match the register"));
        }
        let amps = (0..u.rows())
            .map(|i| (0..u.cols()).map(|j| u[(i, j)] * self.amps[j]).sum())
            .collect();
        Self::normalized(amps)
    }
}

/// Density operator on a qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let side = matrix.rows();
        if !matrix.is_square() || side < 2 || !side.is_power_of_two() {
            return Err(Error::invalid("density matrix side must be a power of two ≥ 2"));
        }
        let defect = matrix.hermitian_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotHermitian { asymmetry: defect });
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(Error::invalid(format!("trace {tr} is not 1")));
        }
        let lowest = herm_eigvals(&matrix)?[0];
        if lowest < -PSD_TOL {
            return Err(Error::invalid(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self { num_qubits: side.trailing_zeros() as usize, matrix })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square() && matrix.rows().is_power_of_two());
        Self { num_qubits: matrix.rows().trailing_zeros() as usize, matrix }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        Self::from_trusted(ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `ρ ⊗ σ`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_trusted(kron(&self.matrix, &other.matrix))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> DensityMatrix {
        Self::from_trusted(self.matrix.conjugate_by(u))
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        hs_norm_sq(&self.matrix)
    }
}

/// Reduces `ρ` to the qubits in `keep`, ordered as listed.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits;
    validate_selection(keep, n)?;
    let (ko, ro) = split_offsets(keep, n);
    let d = ko.len();
    let m = ComplexMatrix::from_fn(d, d, |a, b| {
        ro.iter().map(|&e| rho.matrix[(ko[a] | e, ko[b] | e)]).sum()
    });
    Ok(DensityMatrix::from_trusted(m))
}

/// Squared Schmidt coefficients, descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    pub values: Vec<f64>,
}

impl SchmidtSpectrum {
    /// `Σ s_i²`, the purity of either reduced state.
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum()
    }
}

/// Schmidt spectrum of `ψ` across `cut | rest`.
pub fn schmidt_spectrum(psi: &PureState, cut: &[usize]) -> Result<SchmidtSpectrum> {
    let n = psi.num_qubits();
    if cut.len() >= n {
        return Err(Error::cut("cut must leave at least one qubit on the other side"));
    }
    let rho = psi.reduced(cut)?;
    let mut values: Vec<f64> = herm_eigvals(rho.matrix())?
        .into_iter()
        .map(|v| if (-PSD_TOL..0.0).contains(&v) { 0.0 } else { v })
        .collect();
    values.reverse();
    Ok(SchmidtSpectrum { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(seed: &[f64], n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| {
            let k = 2 * (i * n + j);
            c(seed[k % seed.len()], seed[(k + 1) % seed.len()])
        })
    }

    fn hermitian_from(seed: &[f64], n: usize) -> ComplexMatrix {
        let a = random_matrix(seed, n);
        (&a + &a.adjoint()).scale(c(0.5, 0.0))
    }

    // Gaussian elimination with partial pivoting, independent of the solver.
    fn det(m: &ComplexMatrix) -> C64 {
        let n = m.rows();
        let mut a = m.clone();
        let mut d = ONE;
        for col in 0..n {
            let piv = (col..n).max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm())).unwrap();
            if a[(piv, col)].norm() == 0.0 {
                return ZERO;
            }
            if piv != col {
                for j in 0..n {
                    let t = a[(col, j)];
                    a[(col, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                }
                d = -d;
            }
            d *= a[(col, col)];
            for r in col + 1..n {
                let f = a[(r, col)] / a[(col, col)];
                for j in col..n {
                    let v = a[(col, j)];
                    a[(r, j)] -= f * v;
                }
            }
        }
        d
    }

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)]).unwrap()
    }

    #[test]
    fn kron_identity_and_zz() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let zz = kron(&pauli_z(), &pauli_z());
        assert_eq!(zz, ComplexMatrix::from_real_diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = random_matrix(&[0.3, -1.2, 0.7, 0.05, -0.4, 2.0, 1.1, -0.9], 2);
        let b = random_matrix(&[1.5, 0.2, -0.6, 0.8, 0.33, -1.7, 0.9, 0.1], 2);
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k[(i * 2 + p, j * 2 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(hs_norm_sq(&ComplexMatrix::identity(2)), 2.0);
        assert_eq!(hs_norm_sq(&ComplexMatrix::zeros(3, 3)), 0.0);
        let x = pauli_x().scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert_abs_diff_eq!(hs_norm_sq(&x), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn eigvals_small_cases() {
        assert_eq!(herm_eigvals(&pauli_z()).unwrap(), vec![-1.0, 1.0]);
        let d = ComplexMatrix::from_real_diag(&[0.0, 0.0, 0.25]);
        assert_eq!(herm_eigvals(&d).unwrap(), vec![0.0, 0.0, 0.25]);
        let y = herm_eigvals(&pauli_y()).unwrap();
        assert_abs_diff_eq!(y[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn eigvals_near_degenerate_pair() {
        // Q diag(d) Qᵗ with a fixed orthogonal Q and a 1e-9 split.
        let d = [6.5e-8, 6.5e-8 + 1e-9, 0.2456];
        let (s1, c1) = 0.7f64.sin_cos();
        let (s2, c2) = 1.3f64.sin_cos();
        let q = [[c1, -s1 * c2, s1 * s2], [s1, c1 * c2, -c1 * s2], [0.0, s2, c2]];
        let h = ComplexMatrix::from_fn(3, 3, |i, j| {
            C64::new((0..3).map(|k| q[i][k] * d[k] * q[j][k]).sum(), 0.0)
        });
        let v = herm_eigvals(&h).unwrap();
        for (got, want) in v.iter().zip(d) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-16);
        }
    }

    #[test]
    fn eigvals_rejects_non_hermitian() {
        let m = ComplexMatrix::from_vec(2, 2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!(matches!(herm_eigvals(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigvals_satisfy_characteristic_polynomial() {
        let seeds: [&[f64]; 3] = [
            &[0.3, -1.2, 0.7, 0.05, -0.4, 2.0, 1.1, -0.9, 0.2, 0.6, -0.15],
            &[1.0, 0.5, -0.25, 0.125, 0.9, -0.3, 0.4, 1.7, -1.1],
            &[-0.8, 0.01, 0.44, 0.93, -0.27, 0.61, 0.12],
        ];
        for seed in seeds {
            for n in [3usize, 4, 6] {
                let h = hermitian_from(seed, n);
                for lam in herm_eigvals(&h).unwrap() {
                    let shifted = &h - &ComplexMatrix::identity(n).scale(c(lam, 0.0));
                    assert!(det(&shifted).norm() < 1e-8, "n={n} λ={lam} residual {}", det(&shifted).norm());
                }
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let a = partial_trace(&bell().density(), &[0]).unwrap();
        assert!(a.matrix().max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5])) < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 8];
        amps[0] = c(h, 0.0);
        amps[7] = c(h, 0.0);
        let ghz = PureState::new(amps).unwrap();
        let ab = partial_trace(&ghz.density(), &[0, 1]).unwrap();
        let expect = ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5]);
        assert!(ab.matrix().max_abs_diff(&expect) < 1e-15);
        assert!(ghz.reduced(&[0, 1]).unwrap().matrix().max_abs_diff(&expect) < 1e-15);

        let rho = DensityMatrix::new(ComplexMatrix::from_vec(2, 2, vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]).unwrap()).unwrap();
        let sigma = DensityMatrix::maximally_mixed(2);
        let back = partial_trace(&rho.tensor(&sigma), &[0]).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_keep_order_permutes() {
        // |01>: keeping (1, 0) must yield |10><10|.
        let psi = PureState::basis(&[0, 1]).unwrap();
        let r = partial_trace(&psi.density(), &[1, 0]).unwrap();
        assert_eq!(r.matrix()[(2, 2)], ONE);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = bell().density();
        assert!(partial_trace(&rho, &[2]).is_err());
        assert!(partial_trace(&rho, &[0, 0]).is_err());
        assert!(partial_trace(&rho, &[]).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let s = schmidt_spectrum(&bell(), &[0]).unwrap();
        assert_abs_diff_eq!(s.values[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.values[1], 0.5, epsilon = 1e-15);

        let prod = PureState::basis(&[0, 0]).unwrap();
        assert_eq!(schmidt_spectrum(&prod, &[0]).unwrap().values, vec![1.0, 0.0]);

        let mut amps = vec![ZERO; 8];
        amps[0] = c(0.8, 0.0);
        amps[7] = c(0.6, 0.0);
        let g = PureState::new(amps).unwrap();
        let s = schmidt_spectrum(&g, &[0]).unwrap();
        assert_abs_diff_eq!(s.values[0], 0.64, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values[1], 0.36, epsilon = 1e-12);

        assert!(schmidt_spectrum(&g, &[]).is_err());
        assert!(schmidt_spectrum(&g, &[0, 1, 2]).is_err());
    }

    #[test]
    fn pure_state_validation() {
        assert!(matches!(PureState::new(vec![ONE, ONE]), Err(Error::Normalization { .. })));
        assert!(PureState::new(vec![ONE, ZERO, ZERO]).is_err());
    }

    fn arb_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, len)
    }

    fn to_state(v: &[f64]) -> Option<PureState> {
        let amps: Vec<C64> = v.chunks(2).map(|p| c(p[0], p[1])).collect();
        PureState::normalized(amps).ok()
    }

    fn unitary_from(v: &[f64], n: usize) -> ComplexMatrix {
        // Gram–Schmidt on the columns of a perturbed identity keeps it well conditioned.
        let mut cols: Vec<Vec<C64>> = (0..n)
            .map(|j| (0..n).map(|i| c(if i == j { 2.0 } else { 0.0 } + v[(2 * (i * n + j)) % v.len()], v[(2 * (i * n + j) + 1) % v.len()])).collect())
            .collect();
        for j in 0..n {
            for k in 0..j {
                let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let ck = cols[k][i];
                    cols[j][i] -= proj * ck;
                }
            }
            let nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols[j].iter_mut().for_each(|z| *z /= nrm);
        }
        ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
    }

    proptest! {
        #[test]
        fn kron_is_associative(a in arb_vec(8), b in arb_vec(8), cc in arb_vec(8)) {
            let (a, b, cc) = (random_matrix(&a, 2), random_matrix(&b, 2), random_matrix(&cc, 2));
            let lhs = kron(&kron(&a, &b), &cc);
            let rhs = kron(&a, &kron(&b, &cc));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn partial_trace_yields_density(v in arb_vec(32), keep_mask in 1u8..15) {
            let Some(psi) = to_state(&v) else { return Ok(()); };
            let keep: Vec<usize> = (0..4).filter(|q| keep_mask >> q & 1 == 1).collect();
            let r = partial_trace(&psi.density(), &keep).unwrap();
            prop_assert!(r.matrix().hermitian_defect() < 1e-12);
            prop_assert!((r.matrix().trace() - ONE).norm() < 1e-12);
            prop_assert!(herm_eigvals(r.matrix()).unwrap()[0] >= -PSD_TOL);
        }

        #[test]
        fn eigvals_trace_and_unitary_invariance(h in arb_vec(40), u in arb_vec(40), n in 2usize..6) {
            let h = hermitian_from(&h, n);
            let u = unitary_from(&u, n);
            let e = herm_eigvals(&h).unwrap();
            prop_assert!((e.iter().sum::<f64>() - h.trace().re).abs() < 1e-9);
            let e2 = herm_eigvals(&h.conjugate_by(&u)).unwrap();
            for (x, y) in e.iter().zip(&e2) {
                prop_assert!((x - y).abs() < 1e-8);
            }
        }

        #[test]
        fn schmidt_symmetry(v in arb_vec(64), mask in 1u8..31) {
            let Some(psi) = to_state(&v) else { return Ok(()); };
            let cut: Vec<usize> = (0..5).filter(|q| mask >> q & 1 == 1).collect();
            let rest: Vec<usize> = (0..5).filter(|q| mask >> q & 1 == 0).collect();
            let a = schmidt_spectrum(&psi, &cut).unwrap().values;
            let b = schmidt_spectrum(&psi, &rest).unwrap().values;
            let len = a.len().max(b.len());
            for i in 0..len {
                let x = a.get(i).copied().unwrap_or(0.0);
                let y = b.get(i).copied().unwrap_or(0.0);
                prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
            }
        }
    }
}
