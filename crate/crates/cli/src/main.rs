//! `minlab`: evaluate MIN, check monogamy, run campaigns and verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod state;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use minlab::min::{
    min3_closed, min4_closed, min_2xn, min_bruteforce, min_pure, AcinPair, GenericPair, MinResult,
    DEFAULT_GRID_POINTS, EPSILON_X,
};
use minlab::monogamy::monogamy_report;
use minlab::montecarlo::{
    export_stats, reproduce, run_campaign, run_suite, CampaignConfig, Claim, Format, Suite, DEFAULT_BINS,
};
use minlab::qmat::DensityMatrix;
use minlab::states::{Family, SamplerSpec};
use serde_json::json;

use state::{build, parse_qubits, qubit_name, Built, Closed, StateArgs};

#[derive(Parser, Debug)]
#[command(name = "minlab", version, about = "Measurement-induced non-locality of qubit states")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Evaluate MIN across a cut or on a two-qubit reduction
    Eval {
        #[command(flatten)]
        state: StateArgs,
        /// Measured party for a pure-state cut, e.g. A or AB
        #[arg(long, default_value = "A")]
        cut: String,
        /// Two-qubit reduction, e.g. AB; the first qubit is measured
        #[arg(long)]
        pair: Option<String>,
        /// Also run the brute-force oracle and print the gap
        #[arg(long)]
        oracle: bool,
        /// Fibonacci grid size for the oracle
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
        #[arg(long)]
        json: bool,
    },
    /// Monogamy report around a pivot qubit
    Check {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "A")]
        pivot: String,
        #[arg(long)]
        json: bool,
    },
    /// Sampling campaign over a state family
    Sweep {
        /// Sampler family, e.g. generic4, class_M, wn
        #[arg(long)]
        family: String,
        /// Qubit count for wn
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: u64,
        #[arg(long, env = "MINLAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Output file; format follows --format or the extension
        #[arg(long)]
        out: Option<PathBuf>,
        /// json or csv
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value = "A")]
        pivot: String,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
    },
    /// Run verification suites; exits 1 on any failure
    Verify {
        /// thm1_thm2, oracle, thm3, thm4, thm5, tangles, lu_invariance, x_nonzero_sum3, all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, env = "MINLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare a computed statistic with the published figure; exits 1 when outside the window
    Reproduce {
        /// fig1, pct3q_generic_x0, pct3q_wclass_x0, w_equality, ghz4_violation
        #[arg(long)]
        claim: String,
        #[arg(long, env = "MINLAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Override the claim's sample count
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<minlab::Error> for Failure {
    fn from(e: minlab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

/// Ten significant digits.
fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..10).contains(&mag) {
        return format!("{x:.9e}");
    }
    format!("{x:.*}", (9 - mag).max(0) as usize)
}

fn spectrum_str(s: &Option<[f64; 3]>) -> String {
    match s {
        Some(s) => format!("[{}, {}, {}]", sig(s[0]), sig(s[1]), sig(s[2])),
        None => "n/a".into(),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

// The state with `first` moved to position 0 and the rest in order.
fn with_first(psi: &minlab::qmat::PureState, first: usize) -> Result<DensityMatrix, minlab::Error> {
    let n = psi.num_qubits();
    let order: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&q| q != first)).collect();
    psi.reduced(&order)
}

fn closed_pair(b: &Built, pair: &[usize]) -> Option<MinResult> {
    match (&b.closed, pair) {
        (Closed::Acin(p), [0, 1]) => Some(min3_closed(p, AcinPair::AB)),
        (Closed::Acin(p), [0, 2]) => Some(min3_closed(p, AcinPair::AC)),
        (Closed::Generic(c), [0, q @ 1..=3]) => Some(min4_closed(c, GenericPair::ALL[q - 1])),
        _ => None,
    }
}

fn eval(state: &StateArgs, cut: &str, pair: Option<&str>, oracle: bool, grid: usize, as_json: bool) -> Result<(), Failure> {
    let b = build(state)?;
    let n = b.psi.num_qubits();
    let (target, result, rho, closed) = if let Some(p) = pair {
        let q = parse_qubits(p)?;
        if q.len() != 2 || q[0] == q[1] || q.iter().any(|&x| x >= n) {
            return Err(Failure::Usage(format!("--pair must name two distinct qubits of {n}")));
        }
        let rho = b.psi.reduced(&q)?;
        let res = min_2xn(&rho, EPSILON_X)?;
        let closed = closed_pair(&b, &q);
        (format!("pair {}{}", qubit_name(q[0]), qubit_name(q[1])), res, Some(rho), closed)
    } else {
        let c = parse_qubits(cut)?;
        let mut res = min_pure(&b.psi, &c)?;
        // A single measured qubit admits the correlation-matrix view too.
        let rho = if c.len() == 1 { Some(with_first(&b.psi, c[0])?) } else { None };
        if let Some(rho) = &rho {
            res.spectrum = min_2xn(rho, EPSILON_X)?.spectrum;
        }
        let label: String = c.iter().map(|&q| qubit_name(q)).collect();
        (format!("cut {label} | rest"), res, rho, None)
    };
    let oracle_res = if oracle {
        let rho = rho.ok_or_else(|| "--oracle needs a single measured qubit".to_string())?;
        Some(min_bruteforce(&rho, grid)?)
    } else {
        None
    };
    if as_json {
        let mut v = json!({
            "state": b.label,
            "target": target,
            "value": result.value,
            "branch": result.branch.to_string(),
            "spectrum": result.spectrum,
        });
        if let Some(c) = &closed {
            v["closed_form"] = json!(c.value);
        }
        if let Some(o) = &oracle_res {
            v["oracle"] = json!(o.value);
            v["oracle_gap"] = json!((o.value - result.value).abs());
        }
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        return Ok(());
    }
    println!("state     {}", b.label);
    println!("target    {target}");
    println!("MIN       {}", sig(result.value));
    println!("branch    {}", result.branch);
    println!("TT^t      {}", spectrum_str(&result.spectrum));
    if let Some(d) = &result.diagnostics {
        println!(
            "near-degenerate |x|={}: x_nonzero={} x_zero={}",
            sig(d.x_norm),
            sig(d.x_nonzero),
            sig(d.x_zero)
        );
    }
    if let Some(c) = &closed {
        println!("closed    {}", sig(c.value));
    }
    if let Some(o) = &oracle_res {
        println!("oracle    {}", sig(o.value));
        println!("gap       {}", sig((o.value - result.value).abs()));
    }
    Ok(())
}

fn check(state: &StateArgs, pivot: &str, as_json: bool) -> Result<(), Failure> {
    let b = build(state)?;
    let p = match parse_qubits(pivot)?.as_slice() {
        [p] => *p,
        _ => return Err(Failure::Usage("--pivot names one qubit".into())),
    };
    let rep = monogamy_report(&b.psi, p)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&rep).expect("json"));
        return Ok(());
    }
    let pn = qubit_name(p);
    println!("state     {}", b.label);
    for (q, v) in &rep.pairwise {
        println!("N({pn}{})     {}", qubit_name(*q), sig(*v));
    }
    println!("pair sum  {}", sig(rep.pair_sum));
    println!("global    {}", sig(rep.global_min));
    println!("deficit   {}", sig(rep.deficit));
    println!("verdict   {}", if rep.monogamous { "MONOGAMOUS" } else { "POLYGAMOUS" });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    family: &str,
    n: Option<usize>,
    samples: u64,
    seed: u64,
    out: Option<&PathBuf>,
    format: Option<&str>,
    workers: Option<usize>,
    pivot: &str,
    bins: usize,
) -> Result<(), Failure> {
    let family: Family = match (family, n) {
        ("wn", Some(n)) => format!("wn({n})").parse()?,
        ("wn", None) => return Err(Failure::Usage("--family wn needs --n".into())),
        _ => family.parse()?,
    };
    let pivot = match parse_qubits(pivot)?.as_slice() {
        [p] => *p,
        _ => return Err(Failure::Usage("--pivot names one qubit".into())),
    };
    let format: Format = match (format, out.and_then(|p| p.extension()).and_then(|e| e.to_str())) {
        (Some(f), _) => f.parse()?,
        (None, Some("csv")) => Format::Csv,
        _ => Format::Json,
    };
    let mut cfg = CampaignConfig::new(SamplerSpec::new(family, seed), samples).workers(workers.unwrap_or_else(default_workers));
    cfg.pivot = pivot;
    cfg.histogram_bins = bins;
    let stats = run_campaign(&cfg)?;
    if let Some(path) = out {
        export_stats(&stats, format, path)?;
    }
    let (lo, hi) = stats.wilson();
    println!(
        "{} seed={} samples={} monogamous={} 95%CI=[{}, {}] deficit=[{}, {}] pair_sum=[{}, {}] flags={}",
        stats.family,
        stats.seed,
        stats.samples,
        sig(stats.fraction_monogamous),
        sig(lo),
        sig(hi),
        sig(stats.min_deficit),
        sig(stats.max_deficit),
        sig(stats.min_pair_sum),
        sig(stats.max_pair_sum),
        stats.numerical_flags
    );
    Ok(())
}

fn verify(suite: &str, seed: u64, as_json: bool) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let reports = run_suite(suite, seed);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("json"));
    } else {
        for r in &reports {
            println!(
                "{} {} checked={} worst={} tol={:e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite,
                r.checked,
                sig(r.worst),
                r.tolerance
            );
            println!("     {}", r.witness);
        }
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn reproduce_claim(claim: &str, seed: u64, samples: Option<u64>, workers: Option<usize>, as_json: bool) -> Result<(), Failure> {
    let claim: Claim = claim.parse()?;
    let r = reproduce(claim, seed, samples, workers.unwrap_or_else(default_workers))?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&r).expect("json"));
    } else {
        println!("claim     {}", r.claim);
        println!("statistic {}", r.statistic);
        println!("computed  {}", sig(r.computed));
        if let Some([lo, hi]) = r.interval {
            println!("95% CI    [{}, {}]", sig(lo), sig(hi));
        }
        println!("published {}", r.published_value);
        println!("window    [{}, {}]", sig(r.window[0]), sig(r.window[1]));
        println!("samples   {} (seed {})", r.samples, r.seed);
        if let Some(m) = &r.measure_name {
            println!("measure   {m}{}", if r.measure_dependent { " (measure-dependent)" } else { "" });
        }
        for note in &r.notes {
            println!("note      {note}");
        }
        println!("status    {}", if r.within { "WITHIN" } else { "OUTSIDE" });
    }
    if r.within {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = match &cli.verb {
        Verb::Eval { state, cut, pair, oracle, grid, json } => eval(state, cut, pair.as_deref(), *oracle, *grid, *json),
        Verb::Check { state, pivot, json } => check(state, pivot, *json),
        Verb::Sweep { family, n, samples, seed, out, format, workers, pivot, bins } => {
            sweep(family, *n, *samples, *seed, out.as_ref(), format.as_deref(), *workers, pivot, *bins)
        }
        Verb::Verify { suite, seed, json } => verify(suite, *seed, *json),
        Verb::Reproduce { claim, seed, samples, workers, json } => {
            reproduce_claim(claim, *seed, *samples, *workers, *json)
        }
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
