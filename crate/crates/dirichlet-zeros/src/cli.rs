//! Command-line entry point: every computation behind one binary with
//! deterministic JSON summaries on stdout and optional CSV files.
//!
//! Exit codes: 0 success, 1 usage, 2 domain/degeneracy/resource errors,
//! 3 precision errors. All randomness flows from `--seed`; rerunning a
//! manifest reproduces output byte-for-byte (CSV files embed the manifest
//! without its timestamp).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expected::{
    calibrated_expansion, expected_zero_count, expected_zero_count_expansion, RealInterval,
};
use crate::general::{
    expected_zero_count_alpha, regime_prediction, FrequencySet, Regime,
};
use crate::manifest::RunManifest;
use crate::series::{derive_a_series, derive_expansion_coefficients};
use crate::simulate::{
    choose_truncation, jackknife_se, mc_orthant_correlation, mc_series_correlation,
    orthant_indicator_correlation, run_trials, series_correlation, sign_statistics_trials,
    SimulationConfig,
};
use crate::zeta::cached_stieltjes;

#[derive(Parser)]
#[command(
    name = "dirichlet-zeros",
    version,
    about = "Real zeros of Gaussian random Dirichlet series: quadrature, expansion, Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Quadrature,
    Expansion,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expected number of real zeros E N(T, U)
    Expected {
        #[arg(long = "T")]
        t: f64,
        /// Upper endpoint; accepts "inf"
        #[arg(long = "U", default_value = "inf")]
        u: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value = "quadrature")]
        method: Method,
    },
    /// Expansion coefficients c_2..c_M, symbolic and numeric
    Coeffs {
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Monte Carlo zero counting over [T, U]
    Simulate {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "U")]
        u: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid points (default: 2000 per unit of log(1/(σ-1/2)))
        #[arg(long)]
        grid: Option<usize>,
        /// Truncation level N (default: adequacy rule, capped at 10^6)
        #[arg(long)]
        truncation: Option<usize>,
        /// Moment orders for the summary
        #[arg(long = "moment-k", value_delimiter = ',', default_value = "1,2")]
        moment_k: Vec<u32>,
        /// λ values for tail probabilities P(N >= λ log(1/(T-1/2)))
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        lambda: Vec<f64>,
        /// Write one CSV row per trial here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generalised frequency sets: E N_α plus regime diagnostics
    Alpha {
        /// integers | primes | tau-weighted | model | file:PATH
        #[arg(long)]
        set: String,
        /// Declared regularity exponent (model and file sets)
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "U", default_value = "inf")]
        u: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Closed-form correlations with optional Monte Carlo checks
    Correlation {
        /// corr(F(σ_k), F(σ_l)) at these points
        #[arg(long = "sigma-k")]
        sigma_k: Option<f64>,
        #[arg(long = "sigma-l")]
        sigma_l: Option<f64>,
        /// Dyadic decay table along σ_n = 1/2 + 2^-n up to this index
        #[arg(long)]
        dyadic: Option<usize>,
        /// Orthant indicator correlation at this ρ
        #[arg(long)]
        rho: Option<f64>,
        /// Monte Carlo cross-check sample count (0 disables)
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truncation for the series Monte Carlo
        #[arg(long, default_value_t = 100_000)]
        truncation: usize,
    },
    /// Sign statistics S±(R) along σ_n = 1/2 + 2^-n
    SignStats {
        #[arg(long = "R", default_value_t = 20)]
        r: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Truncation level (default 2^R)
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV sweep of quadrature/expansion/Monte Carlo over a geometric
    /// T - 1/2 grid
    Sweep {
        /// Largest T - 1/2
        #[arg(long, default_value_t = 1e-2)]
        from: f64,
        /// Smallest T - 1/2
        #[arg(long, default_value_t = 1e-8)]
        to: f64,
        /// Geometric step between successive T - 1/2 values
        #[arg(long, default_value_t = 10.0)]
        factor: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Monte Carlo trials per row (0 leaves the MC columns empty)
        #[arg(long, default_value_t = 0)]
        trials: usize,
        /// Upper simulation endpoint for the MC columns
        #[arg(long = "u-sim", default_value_t = 1.0)]
        u_sim: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Binary entry point.
pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    run(args, &mut stdout)
}

/// Testable runner: parses `argv`, executes, writes JSON to `out`.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match execute(cli.cmd, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// DIRICHLET_ZEROS_THREADS caps the rayon worker count.
fn configure_threads() {
    if let Ok(v) = std::env::var("DIRICHLET_ZEROS_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn parse_upper(u: &str) -> Result<f64> {
    match u.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::domain(format!("cannot parse upper endpoint '{u}'"))),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::resource(format!("JSON serialisation failed: {e}")))?;
    writeln!(out, "{text}").map_err(|e| Error::resource(format!("write failed: {e}")))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::resource(format!("cannot write {}: {e}", path.display())))
}

fn execute(cmd: Cmd, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Cmd::Expected { t, u, tol, method } => cmd_expected(out, t, &u, tol, method),
        Cmd::Coeffs { order } => cmd_coeffs(out, order),
        Cmd::Simulate {
            t,
            u,
            trials,
            seed,
            grid,
            truncation,
            moment_k,
            lambda,
            out: csv_out,
        } => cmd_simulate(out, t, u, trials, seed, grid, truncation, &moment_k, &lambda, csv_out),
        Cmd::Alpha { set, alpha, t, u, tol } => cmd_alpha(out, &set, alpha, t, &u, tol),
        Cmd::Correlation {
            sigma_k,
            sigma_l,
            dyadic,
            rho,
            trials,
            seed,
            truncation,
        } => cmd_correlation(out, sigma_k, sigma_l, dyadic, rho, trials, seed, truncation),
        Cmd::SignStats {
            r,
            trials,
            truncation,
            seed,
        } => cmd_sign_stats(out, r, trials, truncation, seed),
        Cmd::Sweep {
            from,
            to,
            factor,
            tol,
            trials,
            u_sim,
            seed,
            out: csv_out,
        } => cmd_sweep(out, from, to, factor, tol, trials, u_sim, seed, csv_out),
    }
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ExpectedOut {
    value: f64,
    err: f64,
    method: String,
    subdivisions: usize,
    manifest: RunManifest,
}

fn cmd_expected(out: &mut dyn Write, t: f64, u: &str, tol: f64, method: Method) -> Result<()> {
    let upper = parse_upper(u)?;
    let interval = RealInterval::new(t, upper)?;
    let mut params = BTreeMap::new();
    params.insert("T".to_string(), format!("{t}"));
    params.insert("U".to_string(), u.to_string());
    params.insert("tol".to_string(), format!("{tol}"));
    let (value, err, name, subdivisions) = match method {
        Method::Quadrature => {
            params.insert("method".to_string(), "quadrature".to_string());
            let q = expected_zero_count(interval, tol)?;
            (q.value, q.abs_err_estimate, "quadrature", q.subdivisions)
        }
        Method::Expansion => {
            params.insert("method".to_string(), "expansion".to_string());
            if !upper.is_infinite() {
                return Err(Error::domain(
                    "the expansion evaluates E N(T, inf); use --U inf".to_string(),
                ));
            }
            let coeffs = calibrated_expansion()?;
            let value = expected_zero_count_expansion(t, coeffs)?;
            // calibration slack plus the first dropped order
            let x = t - 0.5;
            let err = 1e-8 + coeffs.c(coeffs.order).abs() * x.powi(coeffs.order as i32 + 1);
            (value, err, "expansion", 0)
        }
    };
    emit_json(
        out,
        &ExpectedOut {
            value,
            err,
            method: name.to_string(),
            subdivisions,
            manifest: RunManifest::new("expected", params, 0),
        },
    )
}

#[derive(Serialize)]
struct CoeffOut {
    n: usize,
    symbolic: String,
    numeric: f64,
}

#[derive(Serialize)]
struct CoeffsOut {
    order: usize,
    stieltjes: Vec<f64>,
    stieltjes_precision: f64,
    coefficients: Vec<CoeffOut>,
    manifest: RunManifest,
}

fn cmd_coeffs(out: &mut dyn Write, order: usize) -> Result<()> {
    let table = cached_stieltjes();
    let a = derive_a_series(table, order)?;
    let coeffs = derive_expansion_coefficients(&a, order)?;
    let mut params = BTreeMap::new();
    params.insert("order".to_string(), format!("{order}"));
    let coefficients = (2..=order)
        .map(|n| CoeffOut {
            n,
            symbolic: coeffs.pn_symbolic[n - 2].format_over_pi(),
            numeric: coeffs.c(n),
        })
        .collect();
    emit_json(
        out,
        &CoeffsOut {
            order,
            stieltjes: table.values.clone(),
            stieltjes_precision: table.precision,
            coefficients,
            manifest: RunManifest::new("coeffs", params, 0),
        },
    )
}

#[derive(Serialize)]
struct SimulateOut {
    mean: f64,
    se: f64,
    moments: BTreeMap<String, (f64, f64)>,
    tail_probs: BTreeMap<String, (f64, f64)>,
    suspect_rate: f64,
    truncation: usize,
    truncation_adequate: bool,
    grid_points: usize,
    trials: usize,
    quadrature_truncated_kernel: f64,
    manifest: RunManifest,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    out: &mut dyn Write,
    t: f64,
    u: f64,
    trials: usize,
    seed: u64,
    grid: Option<usize>,
    truncation: Option<usize>,
    moment_k: &[u32],
    lambda: &[f64],
    csv_out: Option<PathBuf>,
) -> Result<()> {
    let mut config = SimulationConfig::for_interval(t, u, trials, seed)?;
    let (_, adequate) = choose_truncation(t)?;
    if let Some(n) = truncation {
        config.truncation = n;
    }
    if let Some(g) = grid {
        config.grid_points = g;
    }
    config.validate()?;

    let mut params = BTreeMap::new();
    params.insert("T".to_string(), format!("{t}"));
    params.insert("U".to_string(), format!("{u}"));
    params.insert("trials".to_string(), format!("{trials}"));
    params.insert("truncation".to_string(), format!("{}", config.truncation));
    params.insert("grid".to_string(), format!("{}", config.grid_points));
    params.insert(
        "moment_k".to_string(),
        moment_k.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
    );
    params.insert(
        "lambda".to_string(),
        lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","),
    );
    let manifest = RunManifest::new("simulate", params, seed);

    let samples = run_trials(&config)?;
    let counts: Vec<f64> = samples.iter().map(|s| s.refined_count as f64).collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let se = jackknife_se(&counts);
    let suspect_rate =
        samples.iter().filter(|s| s.suspect).count() as f64 / samples.len() as f64;

    let mut moments = BTreeMap::new();
    for &k in moment_k {
        let xs: Vec<f64> = counts.iter().map(|c| c.powi(k as i32)).collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        moments.insert(k.to_string(), (m, jackknife_se(&xs)));
    }
    let mut tail_probs = BTreeMap::new();
    let log_scale = (1.0 / (t - 0.5)).ln();
    for &l in lambda {
        let threshold = l * log_scale;
        let hits = counts.iter().filter(|&&c| c >= threshold).count();
        let p = hits as f64 / counts.len() as f64;
        let se_p = (p * (1.0 - p) / counts.len() as f64).sqrt();
        tail_probs.insert(format!("{l}"), (p, se_p));
    }
    // Kac-Rice value for the process actually sampled
    let q_trunc = crate::expected::expected_zero_count_truncated(
        config.interval,
        config.truncation,
        1e-8,
    )?;

    if let Some(path) = csv_out {
        let mut csv = String::new();
        csv.push_str(&format!("# manifest: {}\n", manifest.csv_header_json()));
        csv.push_str("trial,count,refined_count,suspect\n");
        for (i, s) in samples.iter().enumerate() {
            csv.push_str(&format!(
                "{i},{},{},{}\n",
                s.count, s.refined_count, s.suspect
            ));
        }
        write_file(&path, &csv)?;
    }

    emit_json(
        out,
        &SimulateOut {
            mean,
            se,
            moments,
            tail_probs,
            suspect_rate,
            truncation: config.truncation,
            truncation_adequate: adequate,
            grid_points: config.grid_points,
            trials,
            quadrature_truncated_kernel: q_trunc.value,
            manifest,
        },
    )
}

#[derive(Serialize)]
struct AlphaOut {
    value: f64,
    err: f64,
    subdivisions: usize,
    set: String,
    alpha: f64,
    regime: String,
    leading_form: String,
    leading_constant: Option<f64>,
    /// value / leading form evaluated at T (supercritical: value/log,
    /// critical: value/√log, subcritical: the raw value)
    ratio_to_leading: f64,
    counting_fit: Option<(f64, f64)>,
    manifest: RunManifest,
}

fn cmd_alpha(
    out: &mut dyn Write,
    set_name: &str,
    alpha_flag: Option<f64>,
    t: f64,
    u: &str,
    tol: f64,
) -> Result<()> {
    let set = build_set(set_name, alpha_flag)?;
    let upper = parse_upper(u)?;
    let interval = RealInterval::new(t, upper)?;
    let q = expected_zero_count_alpha(interval, &set, tol)?;
    let alpha = set.alpha();
    let pred = regime_prediction(alpha);
    let log_scale = (1.0 / (t - 0.5)).ln();
    let ratio = match pred.regime {
        Regime::Supercritical => q.value / log_scale,
        Regime::Critical => q.value / log_scale.sqrt(),
        Regime::Subcritical => q.value,
    };
    let mut params = BTreeMap::new();
    params.insert("set".to_string(), set_name.to_string());
    params.insert("alpha".to_string(), format!("{alpha}"));
    params.insert("T".to_string(), format!("{t}"));
    params.insert("U".to_string(), u.to_string());
    params.insert("tol".to_string(), format!("{tol}"));
    emit_json(
        out,
        &AlphaOut {
            value: q.value,
            err: q.abs_err_estimate,
            subdivisions: q.subdivisions,
            set: set.kind().to_string(),
            alpha,
            regime: format!("{:?}", pred.regime).to_lowercase(),
            leading_form: pred.leading_form,
            leading_constant: pred.leading_constant,
            ratio_to_leading: ratio,
            counting_fit: set.counting_fit(),
            manifest: RunManifest::new("alpha", params, 0),
        },
    )
}

fn build_set(name: &str, alpha: Option<f64>) -> Result<FrequencySet> {
    match name {
        "integers" => Ok(FrequencySet::integers()),
        "primes" => Ok(FrequencySet::primes()),
        "tau-weighted" => Ok(FrequencySet::tau_weighted()),
        "model" => {
            let a = alpha.ok_or_else(|| Error::domain("--alpha required for model sets".to_string()))?;
            if a < -1.0 {
                FrequencySet::power_log_list(a, 200_000)
            } else {
                FrequencySet::model(a)
            }
        }
        other => {
            if let Some(path) = other.strip_prefix("file:") {
                let (points, weights) = read_set_file(path)?;
                FrequencySet::explicit(points, weights, alpha.unwrap_or(0.0))
            } else {
                Err(Error::domain(format!(
                    "unknown set '{other}' (expected integers, primes, tau-weighted, model, file:PATH)"
                )))
            }
        }
    }
}

/// One element (and optional weight) per line, strictly increasing.
fn read_set_file(path: &str) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::resource(format!("cannot read {path}: {e}")))?;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut any_weight = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let p: f64 = it
            .next()
            .unwrap()
            .parse()
            .map_err(|_| Error::domain(format!("{path}:{}: bad element", lineno + 1)))?;
        points.push(p);
        match it.next() {
            Some(w) => {
                any_weight = true;
                weights.push(w.parse().map_err(|_| {
                    Error::domain(format!("{path}:{}: bad weight", lineno + 1))
                })?);
            }
            None => weights.push(1.0),
        }
    }
    Ok((points, if any_weight { Some(weights) } else { None }))
}

#[derive(Serialize)]
struct CorrelationOut {
    series: Option<SeriesCorrOut>,
    dyadic: Option<DyadicOut>,
    orthant: Option<OrthantOut>,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct SeriesCorrOut {
    sigma_k: f64,
    sigma_l: f64,
    closed_form: f64,
    mc: Option<(f64, f64)>,
}

#[derive(Serialize)]
struct DyadicOut {
    max_index: usize,
    bound_constant: f64,
    max_ratio_to_bound: f64,
    within_bound: bool,
}

#[derive(Serialize)]
struct OrthantOut {
    rho: f64,
    closed_form: f64,
    mc: Option<(f64, f64)>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_correlation(
    out: &mut dyn Write,
    sigma_k: Option<f64>,
    sigma_l: Option<f64>,
    dyadic: Option<usize>,
    rho: Option<f64>,
    trials: usize,
    seed: u64,
    truncation: usize,
) -> Result<()> {
    let mut params = BTreeMap::new();
    params.insert("trials".to_string(), format!("{trials}"));
    params.insert("truncation".to_string(), format!("{truncation}"));

    let series = match (sigma_k, sigma_l) {
        (Some(sk), Some(sl)) => {
            params.insert("sigma_k".to_string(), format!("{sk}"));
            params.insert("sigma_l".to_string(), format!("{sl}"));
            let closed = series_correlation(sk, sl)?;
            let mc = if trials > 0 {
                Some(mc_series_correlation(sk, sl, truncation, trials, seed)?)
            } else {
                None
            };
            Some(SeriesCorrOut {
                sigma_k: sk,
                sigma_l: sl,
                closed_form: closed,
                mc,
            })
        }
        (None, None) => None,
        _ => {
            return Err(Error::domain(
                "--sigma-k and --sigma-l must be given together".to_string(),
            ))
        }
    };

    let dyadic_out = match dyadic {
        Some(r_max) => {
            params.insert("dyadic".to_string(), format!("{r_max}"));
            let mut worst: f64 = 0.0;
            for k in 1..=r_max {
                for l in 1..=r_max {
                    let sk = 0.5 + 0.5f64.powi(k as i32);
                    let sl = 0.5 + 0.5f64.powi(l as i32);
                    let corr = series_correlation(sk, sl)?.abs();
                    let bound = 3.0 / 2f64.sqrt().powi((k as i32 - l as i32).abs());
                    worst = worst.max(corr / bound);
                }
            }
            Some(DyadicOut {
                max_index: r_max,
                bound_constant: 3.0,
                max_ratio_to_bound: worst,
                within_bound: worst <= 1.0,
            })
        }
        None => None,
    };

    let orthant = match rho {
        Some(r) => {
            params.insert("rho".to_string(), format!("{r}"));
            let closed = orthant_indicator_correlation(r)?;
            let mc = if trials > 0 {
                Some(mc_orthant_correlation(r, trials, seed)?)
            } else {
                None
            };
            Some(OrthantOut {
                rho: r,
                closed_form: closed,
                mc,
            })
        }
        None => None,
    };

    if series.is_none() && dyadic_out.is_none() && orthant.is_none() {
        return Err(Error::domain(
            "nothing to do: pass --sigma-k/--sigma-l, --dyadic or --rho".to_string(),
        ));
    }
    emit_json(
        out,
        &CorrelationOut {
            series,
            dyadic: dyadic_out,
            orthant,
            manifest: RunManifest::new("correlation", params, seed),
        },
    )
}

#[derive(Serialize)]
struct SignStatsOut {
    r: usize,
    trials: usize,
    truncation: usize,
    mean_plus_ratio: f64,
    se_plus_ratio: f64,
    /// mean |S_+(R) - R/2| / R^0.6 — diagnostic band for the
    /// law-of-large-numbers rate; no pass/fail semantics attached
    mean_scaled_deviation: f64,
    suspect_trials: usize,
    manifest: RunManifest,
}

fn cmd_sign_stats(
    out: &mut dyn Write,
    r: usize,
    trials: usize,
    truncation: Option<usize>,
    seed: u64,
) -> Result<()> {
    if r > 26 {
        return Err(Error::domain(
            "R capped at 26 (truncation 2^R would not fit in memory)".to_string(),
        ));
    }
    let n = truncation.unwrap_or_else(|| 1usize << r);
    let stats = sign_statistics_trials(n, r, trials, seed)?;
    let ratios: Vec<f64> = stats.iter().map(|s| s.plus as f64 / r as f64).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let se = jackknife_se(&ratios);
    let scaled: Vec<f64> = stats
        .iter()
        .map(|s| (s.plus as f64 - r as f64 / 2.0).abs() / (r as f64).powf(0.6))
        .collect();
    let mean_scaled = scaled.iter().sum::<f64>() / scaled.len() as f64;
    let mut params = BTreeMap::new();
    params.insert("R".to_string(), format!("{r}"));
    params.insert("trials".to_string(), format!("{trials}"));
    params.insert("truncation".to_string(), format!("{n}"));
    emit_json(
        out,
        &SignStatsOut {
            r,
            trials,
            truncation: n,
            mean_plus_ratio: mean,
            se_plus_ratio: se,
            mean_scaled_deviation: mean_scaled,
            suspect_trials: stats.iter().filter(|s| s.suspect).count(),
            manifest: RunManifest::new("sign-stats", params, seed),
        },
    )
}

#[derive(Serialize)]
struct SweepRow {
    t_minus_half: f64,
    quadrature: f64,
    quadrature_err: f64,
    expansion: f64,
    ratio_to_log: f64,
    expansion_minus_quadrature: f64,
    mc_mean: Option<f64>,
    mc_se: Option<f64>,
}

#[derive(Serialize)]
struct SweepOut {
    rows: Vec<SweepRow>,
    manifest: RunManifest,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    out: &mut dyn Write,
    from: f64,
    to: f64,
    factor: f64,
    tol: f64,
    trials: usize,
    u_sim: f64,
    seed: u64,
    csv_out: Option<PathBuf>,
) -> Result<()> {
    if !(factor > 1.0) {
        return Err(Error::domain("sweep factor must exceed 1".to_string()));
    }
    let mut params = BTreeMap::new();
    params.insert("from".to_string(), format!("{from}"));
    params.insert("to".to_string(), format!("{to}"));
    params.insert("factor".to_string(), format!("{factor}"));
    params.insert("tol".to_string(), format!("{tol}"));
    params.insert("trials".to_string(), format!("{trials}"));
    params.insert("u_sim".to_string(), format!("{u_sim}"));
    let manifest = RunManifest::new("sweep", params, seed);

    let coeffs = calibrated_expansion()?;
    let mut rows = Vec::new();
    let mut x = from;
    while x >= to * (1.0 - 1e-12) && x > 0.0 {
        let t = 0.5 + x;
        let q = expected_zero_count(RealInterval::to_infinity(t)?, tol)?;
        let e = expected_zero_count_expansion(t, coeffs)?;
        let (mc_mean, mc_se) = if trials > 0 {
            let config = SimulationConfig::for_interval(t, u_sim, trials, seed)?;
            let samples = run_trials(&config)?;
            let counts: Vec<f64> = samples.iter().map(|s| s.refined_count as f64).collect();
            let mean = counts.iter().sum::<f64>() / counts.len() as f64;
            (Some(mean), Some(jackknife_se(&counts)))
        } else {
            (None, None)
        };
        rows.push(SweepRow {
            t_minus_half: x,
            quadrature: q.value,
            quadrature_err: q.abs_err_estimate,
            expansion: e,
            ratio_to_log: q.value / (1.0 / x).ln(),
            expansion_minus_quadrature: e - q.value,
            mc_mean,
            mc_se,
        });
        x /= factor;
    }

    if let Some(path) = csv_out {
        let mut csv = String::new();
        csv.push_str(&format!("# manifest: {}\n", manifest.csv_header_json()));
        csv.push_str(
            "# columns: T-1/2, quadrature E N(T,inf), quadrature error estimate, expansion E N(T,inf), quadrature/log(1/(T-1/2)), expansion-quadrature, MC mean zero count on [T, u_sim], MC standard error\n",
        );
        csv.push_str("t_minus_half,quadrature,quadrature_err,expansion,ratio_to_log,expansion_minus_quadrature,mc_mean,mc_se\n");
        for r in &rows {
            csv.push_str(&format!(
                "{:e},{:.12e},{:.3e},{:.12e},{:.12e},{:.3e},{},{}\n",
                r.t_minus_half,
                r.quadrature,
                r.quadrature_err,
                r.expansion,
                r.ratio_to_log,
                r.expansion_minus_quadrature,
                r.mc_mean.map(|v| format!("{v:.6e}")).unwrap_or_default(),
                r.mc_se.map(|v| format!("{v:.3e}")).unwrap_or_default(),
            ));
        }
        write_file(&path, &csv)?;
    }

    emit_json(out, &SweepOut { rows, manifest })
}
