//! Turning `--family` and friends into a state.

use std::f64::consts::FRAC_1_SQRT_2;

use clap::Args;
use minlab::qmat::{PureState, C64};
use minlab::states::{
    acin_state, bell_state, gghz_state, generic4_state, sample_params, special_coeffs, special_state, w_state,
    AcinParams, Family, GenericCoeffs, Sample, SamplerSpec, SpecialState,
};

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("not a number: {p:?}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected \"re\" or \"re,im\", got {s:?}")),
    }
}

/// A comma-separated list of reals given as one flag value.
#[derive(Clone, Debug, PartialEq)]
pub struct Reals(pub Vec<f64>);

pub fn parse_reals(s: &str) -> Result<Reals, String> {
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| format!("not a number: {p:?}"))).collect::<Result<_, _>>().map(Reals)
}

/// Qubit labels: letters `A`, `B`, … or zero-based indices, e.g. `AB` or `0,1`.
pub fn parse_qubits(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty qubit list".into());
    }
    if s.chars().all(|c| c.is_ascii_alphabetic()) {
        return Ok(s.chars().map(|c| (c.to_ascii_uppercase() as u8 - b'A') as usize).collect());
    }
    s.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad qubit label {p:?}"))).collect()
}

pub fn qubit_name(q: usize) -> String {
    if q < 26 {
        ((b'A' + q as u8) as char).to_string()
    } else {
        q.to_string()
    }
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// bell, ghz3, ghz4, gghz3, gghz, w, acin, generic4, special, or a sampler family
    #[arg(long)]
    pub family: String,
    /// Qubit count for gghz and wn
    #[arg(long)]
    pub n: Option<usize>,
    /// Generalized GHZ coefficient of |0…0>, "re" or "re,im"
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<C64>,
    /// Generalized GHZ coefficient of |1…1>, "re" or "re,im"
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Option<C64>,
    /// W amplitudes, comma separated reals, first on qubit A
    #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
    pub amps: Option<Reals>,
    /// Canonical three-qubit weights λ0..λ4, comma separated
    #[arg(long, value_parser = parse_reals)]
    pub lambda: Option<Reals>,
    /// Canonical three-qubit phase in [0, π]
    #[arg(long)]
    pub theta: Option<f64>,
    /// Generic-class coefficients z0..z3, each "re,im"; normalized on input
    #[arg(long, num_args = 4, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Vec<C64>>,
    /// Special state: cluster4, L, M4
    #[arg(long)]
    pub name: Option<String>,
    /// Sampler seed (sampler families)
    #[arg(long, env = "MINLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Sample index (sampler families)
    #[arg(long, default_value_t = 0)]
    pub index: u64,
}

/// Closed-form parameters the state was built from, if any.
pub enum Closed {
    None,
    Acin(AcinParams),
    Generic(GenericCoeffs),
}

pub struct Built {
    pub psi: PureState,
    pub label: String,
    pub closed: Closed,
}

fn need<T: Clone>(v: &Option<T>, flag: &str, family: &str) -> Result<T, String> {
    v.clone().ok_or_else(|| format!("--family {family} needs --{flag}"))
}

pub fn build(a: &StateArgs) -> Result<Built, String> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let err = |e: minlab::Error| e.to_string();
    let f = a.family.as_str();
    let plain = |psi: PureState, label: String| Built { psi, label, closed: Closed::None };
    Ok(match f {
        "bell" => plain(bell_state(), "bell".into()),
        "ghz3" | "ghz4" => {
            let n = if f == "ghz3" { 3 } else { 4 };
            plain(gghz_state(n, h, h).map_err(err)?, f.into())
        }
        "gghz3" | "gghz" => {
            let n = if f == "gghz3" { 3 } else { need(&a.n, "n", f)? };
            let (al, be) = (need(&a.alpha, "alpha", f)?, need(&a.beta, "beta", f)?);
            plain(gghz_state(n, al, be).map_err(err)?, format!("gghz(n={n}, alpha={al}, beta={be})"))
        }
        "w" => {
            let amps: Vec<C64> = need(&a.amps, "amps", f)?.0.into_iter().map(|x| C64::new(x, 0.0)).collect();
            plain(w_state(&amps).map_err(err)?, format!("w({} qubits)", amps.len()))
        }
        "acin" => {
            let l = need(&a.lambda, "lambda", f)?.0;
            let l: [f64; 5] = l.try_into().map_err(|_| "--lambda needs five values".to_string())?;
            let p = AcinParams::new(l, a.theta.unwrap_or(0.0)).map_err(err)?;
            Built { psi: acin_state(&p), label: "acin".into(), closed: Closed::Acin(p) }
        }
        "generic4" => {
            let z = need(&a.z, "z", f)?;
            let norm = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err("--z must not be all zero".into());
            }
            let z: [C64; 4] = std::array::from_fn(|j| z[j] / norm);
            let c = GenericCoeffs::new(z).map_err(err)?;
            Built { psi: generic4_state(&c), label: "generic4".into(), closed: Closed::Generic(c) }
        }
        "special" => {
            let name: SpecialState = need(&a.name, "name", f)?.parse().map_err(err)?;
            let closed = special_coeffs(name).map_or(Closed::None, Closed::Generic);
            Built { psi: special_state(name), label: name.to_string(), closed }
        }
        other => {
            let family: Family = match (other, a.n) {
                ("wn", Some(n)) => format!("wn({n})").parse(),
                _ => other.parse(),
            }
            .map_err(|e| format!("{e}; or one of bell, ghz3, ghz4, gghz3, gghz, w, acin, generic4, special"))?;
            let s = sample_params(&SamplerSpec::new(family, a.seed), a.index);
            let closed = match &s {
                Sample::Acin(p) => Closed::Acin(*p),
                Sample::Generic(c) => Closed::Generic(*c),
                Sample::W(_) => Closed::None,
            };
            let label = format!("{family} seed={} index={}: {}", a.seed, a.index, s.describe());
            Built { psi: s.state(), label, closed }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("0.8").unwrap(), C64::new(0.8, 0.0));
        assert_eq!(parse_complex("1,-2").unwrap(), C64::new(1.0, -2.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn qubit_labels() {
        assert_eq!(parse_qubits("A").unwrap(), vec![0]);
        assert_eq!(parse_qubits("bd").unwrap(), vec![1, 3]);
        assert_eq!(parse_qubits("0,2").unwrap(), vec![0, 2]);
        assert!(parse_qubits("").is_err());
        assert!(parse_qubits("A1").is_err());
        assert_eq!(qubit_name(2), "C");
    }
}
