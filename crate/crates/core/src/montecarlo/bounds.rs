//! Sampled checks of the analytic bounds on MIN.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::min::{correlation_data, min_from_correlation, EPSILON_X};
use crate::monogamy::monogamy_report;
use crate::states::{random_mixed_2xn, sample_params, Family, SamplerSpec};

/// Slack on the analytic bounds.
pub const BOUND_SLACK: f64 = 1e-9;
/// The three-qubit `‖x‖ ≠ 0` maximum is an unproven claim; it gets a looser slack.
pub const SUM3_SLACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundFamily {
    /// `Σ N(ρ_1j) ≤ ¼` on class 𝓜.
    #[serde(rename = "M_thm4")]
    MThm4,
    /// `½ ≤ Σ N(ρ_1j) ≤ ¾` on class τ_min.
    #[serde(rename = "taumin_thm5")]
    TauminThm5,
    /// `N(ρ) ≤ tr TTᵗ` on random two-qubit and `2⊗n` mixed states.
    #[serde(rename = "thm3")]
    Thm3,
    /// `N(ρ_AB) + N(ρ_AC) ≤ ½` on three-qubit states with `‖x‖ ≠ 0`.
    #[serde(rename = "x_nonzero_sum3")]
    XNonzeroSum3,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 4] =
        [BoundFamily::MThm4, BoundFamily::TauminThm5, BoundFamily::Thm3, BoundFamily::XNonzeroSum3];

    fn limits(&self) -> (Option<f64>, Option<f64>, f64) {
        match self {
            BoundFamily::MThm4 => (None, Some(0.25), BOUND_SLACK),
            BoundFamily::TauminThm5 => (Some(0.5), Some(0.75), BOUND_SLACK),
            // The checked quantity is N − tr TTᵗ.
            BoundFamily::Thm3 => (None, Some(0.0), BOUND_SLACK),
            BoundFamily::XNonzeroSum3 => (None, Some(0.5), SUM3_SLACK),
        }
    }
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundFamily::MThm4 => "M_thm4",
            BoundFamily::TauminThm5 => "taumin_thm5",
            BoundFamily::Thm3 => "thm3",
            BoundFamily::XNonzeroSum3 => "x_nonzero_sum3",
        })
    }
}

impl FromStr for BoundFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundFamily::ALL
            .into_iter()
            .find(|b| b.to_string() == s)
            .ok_or_else(|| Error::invalid(format!("unknown bound family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub family: BoundFamily,
    pub samples: u64,
    pub seed: u64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub slack: f64,
    pub min_value: f64,
    pub max_value: f64,
    /// Samples outside `[lower − slack, upper + slack]`.
    pub violations: u64,
    /// Samples the bound does not apply to (e.g. `‖x‖ = 0` for the three-qubit sum).
    pub skipped: u64,
    /// Sample closest to (or furthest beyond) a limit.
    pub worst_index: u64,
    pub worst_value: f64,
    pub witness: String,
    pub passed: bool,
}

struct Eval {
    value: f64,
    index: u64,
}

fn evaluate(family: BoundFamily, seed: u64, i: u64) -> Option<Eval> {
    let value = match family {
        BoundFamily::MThm4 | BoundFamily::TauminThm5 => {
            let f = if family == BoundFamily::MThm4 { Family::ClassM } else { Family::ClassTauMin };
            let psi = sample_params(&SamplerSpec::new(f, seed), i).state();
            monogamy_report(&psi, 0).ok()?.pair_sum
        }
        BoundFamily::Thm3 => {
            let (b, degenerate) = thm3_shape(i);
            let cd = correlation_data(&random_mixed_2xn(seed, i, b, 2, degenerate)).ok()?;
            let m = cd.ttt();
            min_from_correlation(&cd, EPSILON_X).value - (m[0][0] + m[1][1] + m[2][2])
        }
        BoundFamily::XNonzeroSum3 => {
            let psi = sample_params(&SamplerSpec::new(Family::AcinFull, seed), i).state();
            let ab = correlation_data(&psi.reduced(&[0, 1]).ok()?).ok()?;
            if ab.x_norm() <= EPSILON_X {
                return None;
            }
            monogamy_report(&psi, 0).ok()?.pair_sum
        }
    };
    Some(Eval { value, index: i })
}

// Alternate two-qubit and 2⊗4 states; half of them have ρ_A = I/2.
fn thm3_shape(i: u64) -> (usize, bool) {
    (1 + (i % 2) as usize, i % 4 < 2)
}

fn witness(family: BoundFamily, seed: u64, i: u64) -> String {
    match family {
        BoundFamily::MThm4 => sample_params(&SamplerSpec::new(Family::ClassM, seed), i).describe(),
        BoundFamily::TauminThm5 => sample_params(&SamplerSpec::new(Family::ClassTauMin, seed), i).describe(),
        BoundFamily::XNonzeroSum3 => sample_params(&SamplerSpec::new(Family::AcinFull, seed), i).describe(),
        BoundFamily::Thm3 => {
            let (b, degenerate) = thm3_shape(i);
            format!("random_mixed_2xn(seed={seed}, index={i}, b_qubits={b}, env_qubits=2, degenerate_a={degenerate})")
        }
    }
}

pub fn verify_bounds(family: BoundFamily, samples: u64, seed: u64) -> BoundReport {
    let (lower, upper, slack) = family.limits();
    // Signed distance past the nearest limit; positive means violated.
    let excess = |v: f64| {
        let lo = lower.map_or(f64::NEG_INFINITY, |l| l - v);
        let hi = upper.map_or(f64::NEG_INFINITY, |u| v - u);
        lo.max(hi)
    };
    let evals: Vec<Option<Eval>> = (0..samples).into_par_iter().map(|i| evaluate(family, seed, i)).collect();
    let mut report = BoundReport {
        family,
        samples,
        seed,
        lower,
        upper,
        slack,
        min_value: f64::INFINITY,
        max_value: f64::NEG_INFINITY,
        violations: 0,
        skipped: 0,
        worst_index: 0,
        worst_value: f64::NAN,
        witness: String::new(),
        passed: true,
    };
    let mut worst = f64::NEG_INFINITY;
    for e in &evals {
        let Some(e) = e else {
            report.skipped += 1;
            continue;
        };
        report.min_value = report.min_value.min(e.value);
        report.max_value = report.max_value.max(e.value);
        let x = excess(e.value);
        if !(x <= slack) {
            report.violations += 1;
        }
        if x > worst || x.is_nan() {
            worst = x;
            report.worst_index = e.index;
            report.worst_value = e.value;
        }
    }
    report.passed = report.violations == 0 && report.skipped < samples;
    if report.skipped < samples {
        report.witness = witness(family, seed, report.worst_index);
    }
    report
}
