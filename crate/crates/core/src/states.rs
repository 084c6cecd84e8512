//! Constructors and seeded samplers for the three- and four-qubit state
//! families used in the monogamy analysis.
//!
//! The four-qubit generic class is spanned by `u_j = b_j ⊗ b_j` where
//! `b_0..b_3 = |φ+>, |φ->, |ψ+>, |ψ->` act on the pairs (A,B) and (C,D).

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix, PureState, C64, NORM_TOL, ZERO};
use crate::rng::SampleRng;

/// Parameters of the canonical three-qubit form
/// `λ0|000> + λ1 e^{iθ}|100> + λ2|101> + λ3|110> + λ4|111>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcinParams {
    lambda: [f64; 5],
    theta: f64,
}

impl AcinParams {
    pub fn new(lambda: [f64; 5], theta: f64) -> Result<Self> {
        if lambda.iter().any(|&l| !(l >= 0.0)) {
            return Err(Error::invalid(format!("λ must be nonnegative, got {lambda:?}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid(format!("θ = {theta} outside [0, π]")));
        }
        let norm_sq: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { norm_sq });
        }
        Ok(Self { lambda, theta })
    }

    pub fn lambda(&self) -> [f64; 5] {
        self.lambda
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Coefficients `z_0..z_3` of a generic-class state `Σ z_j u_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenericCoeffs {
    z: [C64; 4],
}

impl GenericCoeffs {
    pub fn new(z: [C64; 4]) -> Result<Self> {
        let norm_sq: f64 = z.iter().map(|v| v.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { norm_sq });
        }
        Ok(Self { z })
    }

    pub fn z(&self) -> [C64; 4] {
        self.z
    }

    /// `Σ z_j²`; zero exactly on the maximally entangled subclass.
    pub fn sum_of_squares(&self) -> C64 {
        self.z.iter().map(|v| v * v).sum()
    }
}

fn bell(j: usize) -> [C64; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    match j {
        0 => [h, ZERO, ZERO, h],
        1 => [h, ZERO, ZERO, -h],
        2 => [ZERO, h, h, ZERO],
        3 => [ZERO, h, -h, ZERO],
        _ => unreachable!(),
    }
}

/// Generic-class basis vector `u_j`, 16 amplitudes.
pub fn generic_basis(j: usize) -> [C64; 16] {
    assert!(j < 4, "generic basis index {j} out of range");
    let b = bell(j);
    std::array::from_fn(|i| b[i >> 2] * b[i & 3])
}

pub fn acin_state(p: &AcinParams) -> PureState {
    let [l0, l1, l2, l3, l4] = p.lambda;
    let mut amps = vec![ZERO; 8];
    amps[0b000] = C64::new(l0, 0.0);
    amps[0b100] = C64::from_polar(l1, p.theta);
    amps[0b101] = C64::new(l2, 0.0);
    amps[0b110] = C64::new(l3, 0.0);
    amps[0b111] = C64::new(l4, 0.0);
    PureState::new(amps).expect("AcinParams are normalized")
}

/// `α|0…0> + β|1…1>` on `n` qubits.
pub fn gghz_state(n: usize, alpha: C64, beta: C64) -> Result<PureState> {
    if n < 2 {
        return Err(Error::invalid("generalized GHZ needs at least 2 qubits"));
    }
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = alpha;
    amps[(1 << n) - 1] = beta;
    PureState::new(amps)
}

/// Generalized W state: `amps[i]` multiplies the ket with a single 1 on qubit `i`.
pub fn w_state(amps: &[C64]) -> Result<PureState> {
    let n = amps.len();
    if n < 3 {
        return Err(Error::invalid("W state needs at least 3 qubits"));
    }
    let mut v = vec![ZERO; 1 << n];
    for (i, &a) in amps.iter().enumerate() {
        v[1 << (n - 1 - i)] = a;
    }
    PureState::new(v)
}

pub fn generic4_state(c: &GenericCoeffs) -> PureState {
    let mut amps = vec![ZERO; 16];
    for (j, &z) in c.z.iter().enumerate() {
        for (a, u) in amps.iter_mut().zip(generic_basis(j)) {
            *a += z * u;
        }
    }
    PureState::normalized(amps).expect("generic basis is orthonormal")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialState {
    /// `½(|0000> + |0011> + |1100> − |1111>)`
    Cluster4,
    /// `(u0 + ω u1 + ω² u2)/√3`, `ω = e^{2πi/3}`
    L,
    /// `i/√2 u0 + (u1 + u2 + u3)/√6`
    M4,
}

impl FromStr for SpecialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cluster4" => Ok(Self::Cluster4),
            "L" => Ok(Self::L),
            "M4" | "M" => Ok(Self::M4),
            other => Err(Error::invalid(format!("unknown special state {other:?} (cluster4, L, M4)"))),
        }
    }
}

impl fmt::Display for SpecialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cluster4 => "cluster4",
            Self::L => "L",
            Self::M4 => "M4",
        })
    }
}

/// Generic-class coefficients of `L` and `M4`; `None` for the cluster state.
pub fn special_coeffs(name: SpecialState) -> Option<GenericCoeffs> {
    let z = match name {
        SpecialState::Cluster4 => return None,
        SpecialState::L => {
            let s = 1.0 / 3f64.sqrt();
            let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
            [C64::new(s, 0.0), w * s, w * w * s, ZERO]
        }
        SpecialState::M4 => {
            let t = 1.0 / 6f64.sqrt();
            [C64::new(0.0, FRAC_1_SQRT_2), C64::new(t, 0.0), C64::new(t, 0.0), C64::new(t, 0.0)]
        }
    };
    Some(GenericCoeffs::new(z).expect("special coefficients are normalized"))
}

pub fn special_state(name: SpecialState) -> PureState {
    match special_coeffs(name) {
        Some(c) => generic4_state(&c),
        None => {
            let mut amps = vec![ZERO; 16];
            amps[0b0000] = C64::new(0.5, 0.0);
            amps[0b0011] = C64::new(0.5, 0.0);
            amps[0b1100] = C64::new(0.5, 0.0);
            amps[0b1111] = C64::new(-0.5, 0.0);
            PureState::new(amps).expect("cluster state is normalized")
        }
    }
}

/// Sampled state families. The string forms are stable CLI names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    AcinFull,
    AcinX0,
    WClass3,
    WClass3X0,
    Generic4,
    /// Generic class with `Re z_j, Im z_j ~ U[0,1)` before normalization.
    Generic4Box,
    ClassM,
    ClassTauMin,
    Wn(usize),
}

impl Family {
    pub const NAMES: [&'static str; 9] = [
        "acin_full",
        "acin_x0",
        "wclass3",
        "wclass3_x0",
        "generic4",
        "generic4_box",
        "class_M",
        "class_taumin",
        "wn(n)",
    ];

    pub fn num_qubits(&self) -> usize {
        match self {
            Self::AcinFull | Self::AcinX0 | Self::WClass3 | Self::WClass3X0 => 3,
            Self::Generic4 | Self::Generic4Box | Self::ClassM | Self::ClassTauMin => 4,
            Self::Wn(n) => *n,
        }
    }

    pub fn measure_name(&self) -> &'static str {
        match self {
            Self::AcinFull => "acin: lambda uniform on positive orthant of S^4, theta uniform on [0,pi]",
            Self::AcinX0 => {
                "acin x=0: lambda0=1/sqrt2, lambda1=0, (lambda2,lambda3,lambda4) uniform on positive orthant of S^2 radius 1/sqrt2"
            }
            Self::WClass3 => "acin lambda4=0: (lambda0..lambda3) uniform on positive orthant of S^3, theta uniform on [0,pi]",
            Self::WClass3X0 => "acin x=0, lambda4=0: (lambda2,lambda3) uniform on positive quarter circle radius 1/sqrt2",
            Self::Generic4 => "haar on coefficients: z uniform on unit sphere of C^4 (8 normalized normals)",
            Self::Generic4Box => "box on coefficients: Re z_j, Im z_j iid uniform [0,1), normalized",
            Self::ClassM => "class M: x,y gram-schmidt orthonormalized normal 4-vectors scaled to 1/sqrt2, z=x+iy",
            Self::ClassTauMin => "class tau_min: x uniform on real S^3",
            Self::Wn(_) => "generalized W: amplitudes uniform on positive orthant of real S^(n-1)",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AcinFull => f.write_str("acin_full"),
            Self::AcinX0 => f.write_str("acin_x0"),
            Self::WClass3 => f.write_str("wclass3"),
            Self::WClass3X0 => f.write_str("wclass3_x0"),
            Self::Generic4 => f.write_str("generic4"),
            Self::Generic4Box => f.write_str("generic4_box"),
            Self::ClassM => f.write_str("class_M"),
            Self::ClassTauMin => f.write_str("class_taumin"),
            Self::Wn(n) => write!(f, "wn({n})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "acin_full" => Self::AcinFull,
            "acin_x0" => Self::AcinX0,
            "wclass3" => Self::WClass3,
            "wclass3_x0" => Self::WClass3X0,
            "generic4" => Self::Generic4,
            "generic4_box" => Self::Generic4Box,
            "class_M" => Self::ClassM,
            "class_taumin" => Self::ClassTauMin,
            other => {
                let n = other
                    .strip_prefix("wn(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| other.strip_prefix("wn"))
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::invalid(format!("unknown family {other:?}; expected one of {:?}", Family::NAMES))
                    })?;
                if n < 3 {
                    return Err(Error::invalid("wn needs n ≥ 3"));
                }
                Self::Wn(n)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerSpec {
    pub family: Family,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, seed }
    }
}

/// A sampled state together with the parameters that produced it.
#[derive(Clone, Debug, PartialEq)]
pub enum Sample {
    Acin(AcinParams),
    Generic(GenericCoeffs),
    W(Vec<C64>),
}

impl Sample {
    pub fn state(&self) -> PureState {
        match self {
            Sample::Acin(p) => acin_state(p),
            Sample::Generic(c) => generic4_state(c),
            Sample::W(a) => w_state(a).expect("sampled W amplitudes are normalized"),
        }
    }

    pub fn describe(&self) -> String {
        let cplx = |z: &C64| format!("{}{:+}i", z.re, z.im);
        match self {
            Sample::Acin(p) => format!("lambda={:?} theta={}", p.lambda, p.theta),
            Sample::Generic(c) => format!("z=[{}]", c.z.iter().map(cplx).collect::<Vec<_>>().join(", ")),
            Sample::W(a) => format!("amps=[{}]", a.iter().map(cplx).collect::<Vec<_>>().join(", ")),
        }
    }
}

fn unit_abs<const N: usize>(mut v: [f64; N], radius: f64) -> [f64; N] {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x = x.abs() / norm * radius);
    v
}

fn normalize_c<const N: usize>(mut z: [C64; N]) -> [C64; N] {
    let norm = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    z.iter_mut().for_each(|v| *v /= norm);
    z
}

/// Deterministic sample `index` of the family; a pure function of `(spec, index)`.
pub fn sample_params(spec: &SamplerSpec, index: u64) -> Sample {
    let mut rng = SampleRng::new(spec.seed, index);
    match spec.family {
        Family::AcinFull => {
            let lambda = unit_abs(rng.normals::<5>(), 1.0);
            let theta = PI * rng.uniform();
            Sample::Acin(AcinParams::new(lambda, theta).expect("normalized"))
        }
        Family::WClass3 => {
            let [l0, l1, l2, l3] = unit_abs(rng.normals::<4>(), 1.0);
            let theta = PI * rng.uniform();
            Sample::Acin(AcinParams::new([l0, l1, l2, l3, 0.0], theta).expect("normalized"))
        }
        Family::AcinX0 => {
            let [l2, l3, l4] = unit_abs(rng.normals::<3>(), FRAC_1_SQRT_2);
            Sample::Acin(AcinParams::new([FRAC_1_SQRT_2, 0.0, l2, l3, l4], 0.0).expect("normalized"))
        }
        Family::WClass3X0 => {
            let [l2, l3] = unit_abs(rng.normals::<2>(), FRAC_1_SQRT_2);
            Sample::Acin(AcinParams::new([FRAC_1_SQRT_2, 0.0, l2, l3, 0.0], 0.0).expect("normalized"))
        }
        Family::Generic4 => {
            let g = rng.normals::<8>();
            let z = normalize_c(std::array::from_fn(|j| C64::new(g[2 * j], g[2 * j + 1])));
            Sample::Generic(GenericCoeffs::new(z).expect("normalized"))
        }
        Family::Generic4Box => {
            let z = normalize_c(std::array::from_fn(|_| {
                let re = rng.uniform();
                C64::new(re, rng.uniform())
            }));
            Sample::Generic(GenericCoeffs::new(z).expect("normalized"))
        }
        Family::ClassM => {
            let mut x = rng.normals::<4>();
            let mut y = rng.normals::<4>();
            let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= nx);
            let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            y.iter_mut().zip(&x).for_each(|(b, a)| *b -= dot * a);
            let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v /= ny);
            let z = std::array::from_fn(|j| C64::new(x[j], y[j]) * FRAC_1_SQRT_2);
            Sample::Generic(GenericCoeffs::new(z).expect("normalized"))
        }
        Family::ClassTauMin => {
            let g = rng.normals::<4>();
            let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            let z = std::array::from_fn(|j| C64::new(g[j] / n, 0.0));
            Sample::Generic(GenericCoeffs::new(z).expect("normalized"))
        }
        Family::Wn(n) => {
            let g: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            Sample::W(g.iter().map(|v| C64::new(v.abs() / norm, 0.0)).collect())
        }
    }
}

pub fn sample(spec: &SamplerSpec, index: u64) -> PureState {
    sample_params(spec, index).state()
}

/// Haar-random pure state on `num_qubits` qubits.
pub fn haar_state(rng: &mut SampleRng, num_qubits: usize) -> PureState {
    let amps = (0..1usize << num_qubits)
        .map(|_| {
            let re = rng.normal();
            C64::new(re, rng.normal())
        })
        .collect();
    PureState::normalized(amps).expect("gaussian vector is nonzero")
}

/// Haar-random unitary via Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary(rng: &mut SampleRng, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re = rng.normal();
                    C64::new(re, rng.normal())
                })
                .collect()
        })
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let ck = cols[k][i];
                cols[j][i] -= proj * ck;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random mixed state of one qubit (A) plus `b_qubits`, obtained by tracing
/// `env_qubits` out of a Haar-random pure state.
///
/// With `degenerate_a`, the state is additionally filtered on A by
/// `(2ρ_A)^{-1/2}` so that `ρ_A = I/2` and the coherent vector vanishes.
pub fn random_mixed_2xn(
    seed: u64,
    index: u64,
    b_qubits: usize,
    env_qubits: usize,
    degenerate_a: bool,
) -> DensityMatrix {
    let mut rng = SampleRng::new(seed, index);
    let psi = haar_state(&mut rng, 1 + b_qubits + env_qubits);
    let keep: Vec<usize> = (0..=b_qubits).collect();
    let rho = psi.reduced(&keep).expect("valid selection");
    if !degenerate_a {
        return rho;
    }
    let rho_a = psi.reduced(&[0]).expect("valid selection");
    let filter = inverse_sqrt_2x2(&rho_a.matrix().scale(C64::new(2.0, 0.0)));
    let local = crate::qmat::kron(&filter, &ComplexMatrix::identity(1 << b_qubits));
    let m = local.matmul(rho.matrix()).matmul(&local);
    // Renormalize the last ulp of trace drift.
    let tr = m.trace().re;
    DensityMatrix::from_trusted(m.scale(C64::new(1.0 / tr, 0.0)))
}

// A^{-1/2} for a 2x2 positive definite Hermitian A, via
// sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)).
fn inverse_sqrt_2x2(a: &ComplexMatrix) -> ComplexMatrix {
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).re;
    let s = det.sqrt();
    let t = (a.trace().re + 2.0 * s).sqrt();
    let r = ComplexMatrix::from_fn(2, 2, |i, j| {
        (a[(i, j)] + if i == j { C64::new(s, 0.0) } else { ZERO }) / t
    });
    let rdet = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
    ComplexMatrix::from_vec(2, 2, vec![r[(1, 1)] / rdet, -r[(0, 1)] / rdet, -r[(1, 0)] / rdet, r[(0, 0)] / rdet])
        .expect("2x2")
}

/// Bell state `|φ+>`.
pub fn bell_state() -> PureState {
    PureState::new(bell(0).to_vec()).expect("normalized")
}
