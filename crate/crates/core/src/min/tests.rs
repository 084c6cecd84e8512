use std::f64::consts::FRAC_1_SQRT_2;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use super::*;
use crate::qmat::{kron, partial_trace, paulis, ComplexMatrix, ONE, ZERO};
use crate::rng::SampleRng;
use crate::states::{
    acin_state, bell_state, gghz_state, generic4_state, haar_state, random_mixed_2xn, random_unitary, sample_params,
    AcinParams, Family, GenericCoeffs, Sample, SamplerSpec,
};

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ghz3() -> PureState {
    gghz_state(3, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap()
}

fn classical_pair() -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5])).unwrap()
}

fn qubit(m: [[f64; 2]; 2]) -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::from_fn(2, 2, |i, j| r(m[i][j]))).unwrap()
}

// t_ij = tr(ρ σ_i/√2 ⊗ σ_j/√2) by explicit Kronecker products.
fn pauli_t(rho: &DensityMatrix) -> [[f64; 3]; 3] {
    let p = paulis();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| 0.5 * rho.matrix().matmul(&kron(&p[i], &p[j])).trace().re)
    })
}

#[test]
fn correlation_data_bell() {
    let cd = correlation_data(&bell_state().density()).unwrap();
    let expect = [[0.5, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.0, 0.5]];
    for i in 0..3 {
        for j in 0..3 {
            assert_abs_diff_eq!(cd.t(i, j), expect[i][j], epsilon = 1e-15);
        }
    }
    assert!(cd.x_norm() < 1e-15);
}

#[test]
fn correlation_data_uncorrelated() {
    let a = qubit([[0.7, 0.2], [0.2, 0.3]]);
    let rho = a.tensor(&DensityMatrix::maximally_mixed(2));
    let cd = correlation_data(&rho).unwrap();
    assert!(cd.t_rows().iter().flatten().all(|v| v.abs() < 1e-15));
    assert!(cd.x_norm() > 0.1);
}

#[test]
fn correlation_data_ghz3_reduction() {
    let ab = ghz3().reduced(&[0, 1]).unwrap();
    let cd = correlation_data(&ab).unwrap();
    let expect = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.5]];
    for i in 0..3 {
        for j in 0..3 {
            assert_abs_diff_eq!(cd.t(i, j), expect[i][j], epsilon = 1e-15);
        }
    }
    assert!(cd.x_norm() < 1e-15);
}

#[test]
fn correlation_data_reconstructs_state() {
    for (b, e) in [(1, 1), (2, 1), (3, 2)] {
        for i in 0..5 {
            let rho = random_mixed_2xn(21, i, b, e, false);
            let cd = correlation_data(&rho).unwrap();
            assert!(cd.reconstruct().max_abs_diff(rho.matrix()) < 1e-10);
        }
    }
}

#[test]
fn correlation_matches_pauli_products_for_two_qubits() {
    for i in 0..10 {
        let rho = random_mixed_2xn(5, i, 1, 2, false);
        let cd = correlation_data(&rho).unwrap();
        let t = pauli_t(&rho);
        for a in 0..3 {
            for b in 0..3 {
                assert_abs_diff_eq!(cd.t(a, b), t[a][b], epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn min_pure_examples() {
    assert_abs_diff_eq!(min_pure(&bell_state(), &[0]).unwrap().value, 0.5, epsilon = 1e-15);
    let spec = SamplerSpec::new(Family::Generic4, 3);
    for i in 0..20 {
        let v = min_pure(&crate::states::sample(&spec, i), &[0]).unwrap().value;
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
    }
    let g = gghz_state(3, r(0.8), r(0.6)).unwrap();
    let res = min_pure(&g, &[0]).unwrap();
    assert_abs_diff_eq!(res.value, 0.4608, epsilon = 1e-12);
    assert_eq!(res.branch, Branch::Pure);
    assert!(min_pure(&g, &[]).is_err());
    assert!(min_pure(&g, &[0, 1, 2]).is_err());
}

#[test]
fn min_2xn_examples() {
    let b = min_2xn(&bell_state().density(), EPSILON_X).unwrap();
    assert_abs_diff_eq!(b.value, 0.5, epsilon = 1e-15);
    assert_eq!(b.branch, Branch::XZero);
    let s = b.spectrum.unwrap();
    assert!(s.iter().all(|v| (v - 0.25).abs() < 1e-15));

    let c = min_2xn(&classical_pair(), EPSILON_X).unwrap();
    assert_abs_diff_eq!(c.value, 0.25, epsilon = 1e-15);

    let prod = qubit([[0.6, 0.1], [0.1, 0.4]]).tensor(&qubit([[0.2, -0.3], [-0.3, 0.8]]));
    assert!(min_2xn(&prod, EPSILON_X).unwrap().value < 1e-15);
}

#[test]
fn near_degenerate_records_both_branches() {
    // Tilt ρ_A slightly away from I/2.
    let rho = DensityMatrix::new(ComplexMatrix::from_fn(4, 4, |i, j| {
        let base = classical_pair().matrix()[(i, j)];
        let tilt = match (i, j) {
            (0, 0) => 1e-8,
            (3, 3) => -1e-8,
            _ => 0.0,
        };
        base + r(tilt)
    }))
    .unwrap();
    let res = min_2xn(&rho, EPSILON_X).unwrap();
    assert_eq!(res.branch, Branch::XNonzero);
    let d = res.diagnostics.expect("near-degenerate diagnostics");
    assert_abs_diff_eq!(d.x_zero, 0.25, epsilon = 1e-7);
    assert_abs_diff_eq!(d.x_nonzero, 0.0, epsilon = 1e-7);
}

#[test]
fn bruteforce_examples() {
    let b = min_bruteforce(&bell_state().density(), DEFAULT_GRID_POINTS).unwrap();
    assert_abs_diff_eq!(b.value, 0.5, epsilon = 1e-5);
    assert_eq!(b.branch, Branch::Oracle);

    let rho = qubit([[1.0, 0.0], [0.0, 0.0]]).tensor(&DensityMatrix::maximally_mixed(1));
    assert!(min_bruteforce(&rho, DEFAULT_GRID_POINTS).unwrap().value < 1e-9);
}

#[test]
fn bruteforce_agrees_on_a_small_batch() {
    for i in 0..40 {
        let rho = random_mixed_2xn(77, i, 1 + (i as usize % 2), 2, i % 2 == 0);
        let closed = min_2xn(&rho, EPSILON_X).unwrap().value;
        let oracle = min_bruteforce(&rho, 5_000).unwrap().value;
        assert!((closed - oracle).abs() < 1e-5, "sample {i}: {closed} vs {oracle}");
    }
}

#[test]
fn bruteforce_is_deterministic() {
    let rho = random_mixed_2xn(3, 1, 1, 2, true);
    let (a, da) = min_bruteforce_with(&rho, 3_000).unwrap();
    let (b, db) = min_bruteforce_with(&rho, 3_000).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(da, db);
}

#[test]
fn min3_examples() {
    let h = FRAC_1_SQRT_2;
    let ghz = AcinParams::new([h, 0.0, 0.0, 0.0, h], 0.0).unwrap();
    let res = min3_closed(&ghz, AcinPair::AB);
    assert_abs_diff_eq!(res.value, 0.25, epsilon = 1e-15);
    assert_eq!(res.branch, Branch::XZero);
    let t = closed_terms3(&ghz);
    assert_abs_diff_eq!(t.a, 0.0);
    assert_abs_diff_eq!(t.b, 0.0);
    assert_abs_diff_eq!(t.c, 0.25, epsilon = 1e-15);

    let skew = AcinParams::new([0.8, 0.0, 0.0, 0.0, 0.6], 0.0).unwrap();
    let res = min3_closed(&skew, AcinPair::AB);
    assert_eq!(res.branch, Branch::XNonzero);
    assert_abs_diff_eq!(res.value, 0.0, epsilon = 1e-15);
}

#[test]
fn min3_matches_pipeline() {
    let spec = SamplerSpec::new(Family::AcinFull, 8);
    let x0 = SamplerSpec::new(Family::AcinX0, 8);
    for i in 0..100 {
        for spec in [&spec, &x0] {
            let Sample::Acin(p) = sample_params(spec, i) else { unreachable!() };
            let psi = acin_state(&p);
            for (pair, keep) in [(AcinPair::AB, [0, 1]), (AcinPair::AC, [0, 2])] {
                let closed = min3_closed(&p, pair);
                let pipe = min_2xn(&psi.reduced(&keep).unwrap(), EPSILON_X).unwrap();
                assert_eq!(closed.branch, pipe.branch);
                assert!((closed.value - pipe.value).abs() < 1e-9, "{:?} {pair:?}: {} vs {}", p, closed.value, pipe.value);
            }
        }
    }
}

#[test]
fn acin_t_matches_correlation_data() {
    let spec = SamplerSpec::new(Family::AcinFull, 13);
    for i in 0..20 {
        let Sample::Acin(p) = sample_params(&spec, i) else { unreachable!() };
        let psi = acin_state(&p);
        for (pair, keep) in [(AcinPair::AB, [0, 1]), (AcinPair::AC, [0, 2])] {
            let cd = correlation_data(&psi.reduced(&keep).unwrap()).unwrap();
            let t = closed3::acin_t(&p, pair);
            for a in 0..3 {
                for b in 0..3 {
                    assert_abs_diff_eq!(cd.t(a, b), t[a][b], epsilon = 1e-14);
                }
            }
        }
    }
}

#[test]
fn min4_examples() {
    let h = FRAC_1_SQRT_2;
    let ghz = GenericCoeffs::new([r(h), r(h), ZERO, ZERO]).unwrap();
    let p = x_state_params(&ghz, GenericPair::AB);
    assert_abs_diff_eq!(p.alpha, 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(p.beta, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(min4_closed(&ghz, GenericPair::AB).value, 0.25, epsilon = 1e-15);

    let u0 = GenericCoeffs::new([ONE, ZERO, ZERO, ZERO]).unwrap();
    // |φ+>_AB|φ+>_CD: A shares a Bell pair with B only.
    assert_abs_diff_eq!(min4_closed(&u0, GenericPair::AB).value, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(min4_closed(&u0, GenericPair::AC).value, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(min4_closed(&u0, GenericPair::AD).value, 0.0, epsilon = 1e-15);
}

#[test]
fn min4_matches_pipeline_and_parameter_table() {
    let spec = SamplerSpec::new(Family::Generic4, 4);
    for i in 0..100 {
        let Sample::Generic(c) = sample_params(&spec, i) else { unreachable!() };
        let psi = generic4_state(&c);
        for pair in GenericPair::ALL {
            let rho = psi.reduced(&[0, pair.partner()]).unwrap();
            let p = x_state_params(&c, pair);
            assert_abs_diff_eq!(p.alpha + p.gamma, 2.0, epsilon = 1e-10);
            let m = rho.matrix();
            assert_abs_diff_eq!(4.0 * m[(0, 0)].re, p.alpha, epsilon = 1e-12);
            assert_abs_diff_eq!(4.0 * m[(0, 3)].re, p.beta, epsilon = 1e-12);
            assert_abs_diff_eq!(4.0 * m[(1, 1)].re, p.gamma, epsilon = 1e-12);
            assert_abs_diff_eq!(4.0 * m[(1, 2)].re, p.delta, epsilon = 1e-12);
            let pipe = min_2xn(&rho, EPSILON_X).unwrap();
            assert_eq!(pipe.branch, Branch::XZero);
            assert!((min4_closed(&c, pair).value - pipe.value).abs() < 1e-9);
        }
    }
}

#[test]
fn x_zero_characterization_for_acin() {
    let h = FRAC_1_SQRT_2;
    let cases = [
        ([h, 0.0, 0.5, 0.5, 0.0], true),
        ([h, 0.0, 0.0, 0.0, h], true),
        ([h, 0.1, 0.5, (0.49f64 - 0.25 - 0.01).sqrt(), 0.0], false),
        ([0.6, 0.0, 0.8, 0.0, 0.0], false),
    ];
    for (l, zero) in cases {
        let norm: f64 = l.iter().map(|v| v * v).sum::<f64>();
        let l = l.map(|v| v / norm.sqrt());
        let p = AcinParams::new(l, 0.3).unwrap();
        let cd = correlation_data(&acin_state(&p).reduced(&[0, 1]).unwrap()).unwrap();
        let predicted = (l[0] * l[0] - 0.5).abs() <= 1e-10 && l[1] <= 1e-10;
        assert_eq!(cd.x_norm() <= 1e-10, predicted);
        assert_eq!(predicted, zero);
    }
}

fn local_unitary(seed: u64, b_qubits: usize) -> ComplexMatrix {
    let mut rng = SampleRng::new(seed, 0);
    let ua = random_unitary(&mut rng, 2);
    let ub = random_unitary(&mut rng, 1 << b_qubits);
    kron(&ua, &ub)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nonnegative_and_bounded_by_trace(seed in any::<u64>(), b in 1usize..4, deg in any::<bool>()) {
        let rho = random_mixed_2xn(seed, 0, b, 1, deg);
        let res = min_2xn(&rho, EPSILON_X).unwrap();
        prop_assert!(res.value >= 0.0);
        let s = res.spectrum.unwrap();
        prop_assert!(res.value <= s.iter().sum::<f64>() + 1e-12);
    }

    #[test]
    fn local_unitary_invariance(seed in any::<u64>(), b in 1usize..3, deg in any::<bool>()) {
        let rho = random_mixed_2xn(seed, 1, b, 2, deg);
        let u = local_unitary(seed, b);
        let a = min_2xn(&rho, EPSILON_X).unwrap().value;
        let c = min_2xn(&rho.conjugate_by(&u), EPSILON_X).unwrap().value;
        prop_assert!((a - c).abs() <= 1e-8, "{a} vs {c}");
    }

    #[test]
    fn pure_closed_forms_agree(seed in any::<u64>(), m in 1usize..4) {
        let mut rng = SampleRng::new(seed, 2);
        let psi = haar_state(&mut rng, 1 + m);
        let p = min_pure(&psi, &[0]).unwrap().value;
        let t = min_2xn(&psi.density(), EPSILON_X).unwrap().value;
        prop_assert!((p - t).abs() <= 1e-9);
    }

    #[test]
    fn product_states_vanish(seed in any::<u64>(), b in 1usize..3) {
        let mut rng = SampleRng::new(seed, 3);
        let a = partial_trace(&haar_state(&mut rng, 2).density(), &[0]).unwrap();
        let bb = partial_trace(&haar_state(&mut rng, b + 1).density(), &(0..b).collect::<Vec<_>>()).unwrap();
        prop_assert!(min_2xn(&a.tensor(&bb), EPSILON_X).unwrap().value <= 1e-10);
    }
}
