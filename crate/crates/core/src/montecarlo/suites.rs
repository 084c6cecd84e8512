//! Verification suites behind `minlab verify`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::bounds::{verify_bounds, BoundFamily};
use crate::error::{Error, Result};
use crate::min::{min_2xn, min_bruteforce, min_pure, Branch, DEFAULT_GRID_POINTS, EPSILON_X};
use crate::monogamy::tangle_summary;
use crate::qmat::kron;
use crate::rng::SampleRng;
use crate::states::{haar_state, random_mixed_2xn, random_unitary, sample, Family, SamplerSpec};

pub const PURE_TOL: f64 = 1e-9;
pub const ORACLE_TOL: f64 = 1e-5;
pub const TANGLE_TOL: f64 = 1e-10;
pub const LU_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Thm1Thm2,
    Oracle,
    Thm3,
    Thm4,
    Thm5,
    Tangles,
    LuInvariance,
    XNonzeroSum3,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] =
        ["thm1_thm2", "oracle", "thm3", "thm4", "thm5", "tangles", "lu_invariance", "x_nonzero_sum3", "all"];

    const EACH: [Suite; 8] = [
        Suite::Thm1Thm2,
        Suite::Oracle,
        Suite::Thm3,
        Suite::Thm4,
        Suite::Thm5,
        Suite::Tangles,
        Suite::LuInvariance,
        Suite::XNonzeroSum3,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = Suite::EACH.iter().position(|s| s == self).unwrap_or(8);
        f.write_str(Suite::NAMES[i])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match Suite::NAMES.iter().position(|n| *n == s) {
            Some(8) => Ok(Suite::All),
            Some(i) => Ok(Suite::EACH[i]),
            None => Err(Error::invalid(format!("unknown suite {s:?}; expected one of {:?}", Suite::NAMES))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checked: u64,
    /// Largest deviation seen (or the extreme bound value for bound suites).
    pub worst: f64,
    pub tolerance: f64,
    pub witness: String,
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|s| run_suite(*s, seed)).collect(),
        Suite::Thm1Thm2 => vec![thm1_thm2(seed, 1000)],
        Suite::Oracle => vec![oracle(seed, 200)],
        Suite::Thm3 => vec![bound(suite, BoundFamily::Thm3, seed, 10_000)],
        Suite::Thm4 => vec![bound(suite, BoundFamily::MThm4, seed, 10_000)],
        Suite::Thm5 => vec![bound(suite, BoundFamily::TauminThm5, seed, 10_000)],
        Suite::XNonzeroSum3 => vec![bound(suite, BoundFamily::XNonzeroSum3, seed, 10_000)],
        Suite::Tangles => vec![tangles(seed, 100)],
        Suite::LuInvariance => vec![lu_invariance(seed, 500)],
    }
}

// Worst (largest) deviation and its index, ties to the lowest index.
fn worst_of(devs: &[f64]) -> (usize, f64) {
    devs.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
        if v > bv || v.is_nan() && !bv.is_nan() {
            (i, v)
        } else {
            (bi, bv)
        }
    })
}

fn report(suite: Suite, devs: &[f64], tol: f64, witness: impl Fn(usize) -> String) -> SuiteReport {
    let (i, worst) = worst_of(devs);
    SuiteReport {
        suite: suite.to_string(),
        passed: !devs.is_empty() && worst <= tol,
        checked: devs.len() as u64,
        worst,
        tolerance: tol,
        witness: if devs.is_empty() { String::new() } else { witness(i) },
    }
}

/// Pure states on 2⊗2, 2⊗4, 2⊗8: Schmidt formula vs the correlation-matrix formula.
fn thm1_thm2(seed: u64, n: u64) -> SuiteReport {
    let devs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = SampleRng::new(seed, i);
            let psi = haar_state(&mut rng, 2 + (i % 3) as usize);
            let a = min_pure(&psi, &[0]).map(|r| r.value);
            let b = min_2xn(&psi.density(), EPSILON_X).map(|r| r.value);
            match (a, b) {
                (Ok(a), Ok(b)) => (a - b).abs(),
                _ => f64::NAN,
            }
        })
        .collect();
    report(Suite::Thm1Thm2, &devs, PURE_TOL, |i| format!("haar_state(seed={seed}, index={i}, qubits={})", 2 + i % 3))
}

fn oracle(seed: u64, n: u64) -> SuiteReport {
    let rows: Vec<(f64, Option<Branch>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let rho = random_mixed_2xn(seed, i, 1 + (i % 2) as usize, 2, i % 4 < 2);
            match (min_2xn(&rho, EPSILON_X), min_bruteforce(&rho, DEFAULT_GRID_POINTS)) {
                (Ok(c), Ok(o)) => ((c.value - o.value).abs(), Some(c.branch)),
                _ => (f64::NAN, None),
            }
        })
        .collect();
    let devs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let zero = rows.iter().filter(|r| r.1 == Some(Branch::XZero)).count();
    let nonzero = rows.iter().filter(|r| r.1 == Some(Branch::XNonzero)).count();
    let mut rep = report(Suite::Oracle, &devs, ORACLE_TOL, |i| {
        format!(
            "random_mixed_2xn(seed={seed}, index={i}); branches hit: x_zero={zero}, x_nonzero={nonzero}"
        )
    });
    rep.passed &= zero > 0 && nonzero > 0;
    rep
}

fn bound(suite: Suite, family: BoundFamily, seed: u64, n: u64) -> SuiteReport {
    let r = verify_bounds(family, n, seed);
    SuiteReport {
        suite: suite.to_string(),
        passed: r.passed,
        checked: n - r.skipped,
        worst: r.worst_value,
        tolerance: r.slack,
        witness: format!("{family} range [{}, {}] worst sample {}: {}", r.min_value, r.max_value, r.worst_index, r.witness),
    }
}

fn tangles(seed: u64, n: u64) -> SuiteReport {
    let expect = [(Family::ClassM, [1.0, 4.0 / 3.0, 0.0]), (Family::ClassTauMin, [1.0, 1.0, 1.0])];
    let devs: Vec<f64> = (0..2 * n)
        .into_par_iter()
        .map(|k| {
            let (family, want) = expect[(k / n) as usize];
            match tangle_summary(&sample(&SamplerSpec::new(family, seed), k % n)) {
                Ok(t) => [t.tau1, t.tau2, t.tau_abcd].iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
                Err(_) => f64::NAN,
            }
        })
        .collect();
    report(Suite::Tangles, &devs, TANGLE_TOL, |k| {
        let family = expect[k / n as usize].0;
        format!("{family} seed={seed} index={}", k as u64 % n)
    })
}

fn lu_invariance(seed: u64, n: u64) -> SuiteReport {
    let devs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let b = 1 + (i % 2) as usize;
            let rho = random_mixed_2xn(seed, i, b, 2, i % 4 < 2);
            let mut rng = SampleRng::new(seed ^ 0x5eed, i);
            let ua = random_unitary(&mut rng, 2);
            let ub = random_unitary(&mut rng, 1 << b);
            let moved = rho.conjugate_by(&kron(&ua, &ub));
            match (min_2xn(&rho, EPSILON_X), min_2xn(&moved, EPSILON_X)) {
                (Ok(a), Ok(c)) => (a.value - c.value).abs(),
                _ => f64::NAN,
            }
        })
        .collect();
    report(Suite::LuInvariance, &devs, LU_TOL, |i| format!("random_mixed_2xn(seed={seed}, index={i}) under U_A⊗U_B"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("thm9".parse::<Suite>().is_err());
    }

    #[test]
    fn cheap_suites_pass() {
        for s in [Suite::Thm1Thm2, Suite::Tangles, Suite::LuInvariance] {
            for r in run_suite(s, 3) {
                assert!(r.passed, "{r:?}");
            }
        }
        let o = oracle(4, 24);
        assert!(o.passed, "{o:?}");
    }

    #[test]
    fn failures_are_reported() {
        let r = report(Suite::Oracle, &[0.0, 1.0, f64::NAN], 1e-5, |i| i.to_string());
        assert!(!r.passed);
        assert_eq!(r.witness, "2");
        assert!(!report(Suite::Oracle, &[], 1.0, |i| i.to_string()).passed);
    }
}
