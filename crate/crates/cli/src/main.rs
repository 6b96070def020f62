//! Command-line surface for the oscillator toolkit: exact coefficient
//! tables, quantization-function and instanton fixtures, width series,
//! large-order diagnostics, complex-scaling resonances, directional Borel
//! sums, and the release acceptance gate.
//!
//! Exact rationals always serialize as "num/den" strings; floating values
//! carry a provenance object recording the working precision. Outputs are
//! deterministic: re-running a command with the same configuration
//! reproduces byte-identical bytes. A TOML config file can supply defaults
//! for any flag; explicit flags win. The coefficient cache directory comes
//! from `--cache-dir`, then the `ANHARM_CACHE_DIR` environment variable.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use anharm::algebra::float::{Prec, Real};
use anharm::algebra::rat::rat_string;
use anharm::instanton::{scaled_potential, ActionPair, InstantonProfile};
use anharm::largeorder::{dispersion_moment, leading, ratio_csv, ratio_diagnostics};
use anharm::numerics::borel::borel_pade;
use anharm::numerics::resonance::{resonance, ResonanceOptions};
use anharm::quantize::{
    a_fixture, b_function, one_instanton_width_series, AScalar, WidthSeries,
};
use anharm::rspt::{rspt_coeffs, CoeffTable, OscillatorSpec};
use anharm::{acceptance, Error};

#[derive(Parser)]
#[command(name = "anharm", version, about = "Anharmonic oscillator toolkit")]
struct Cli {
    /// TOML file supplying defaults for any flag below (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Working precision in decimal digits
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Directory for the exact-coefficient disk cache
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum Grid {
    Quick,
    Default,
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact perturbation coefficients for one level
    Rspt {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Quantization function B(E, g) truncated at a g-order
    Bfun {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Instanton function A(E, g) fixture terms
    Afun {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Instanton action: closed form vs quadrature
    Action {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Decay width at a coupling, leading order plus corrections
    Width {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(short, long, allow_hyphen_values = true)]
        g: Option<f64>,
        /// Correction order (0 = leading only)
        #[arg(long)]
        order: Option<usize>,
    },
    /// Exact width-correction coefficients
    WidthSeries {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Coefficient growth vs the leading large-order predictor
    Largeorder {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Dispersion-integral moment vs the closed Gamma form
    Dispersion {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(short = 'k', long)]
        order: Option<u32>,
    },
    /// Complex-scaling resonance eigenvalue at one coupling
    Resonance {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(short, long, allow_hyphen_values = true)]
        g: Option<f64>,
        #[arg(long, value_enum)]
        grid: Option<Grid>,
    },
    /// Resonances over a linear coupling ladder, CSV output
    ResonanceScan {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        g_from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        g_to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum)]
        grid: Option<Grid>,
    },
    /// Directional Borel-Pade sum of the perturbation series
    Borel {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(short, long, allow_hyphen_values = true)]
        g: Option<f64>,
        #[arg(long)]
        kmax: Option<usize>,
        /// Laplace ray angle in radians
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<f64>,
    },
    /// World-line profile and scaled potential, CSV output
    InstantonProfile {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t_from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t_to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Run the acceptance suite
    Check {
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
}

/// TOML defaults mirroring the flags; any field may be omitted.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    degree: Option<u32>,
    level: Option<u32>,
    kmax: Option<usize>,
    order: Option<usize>,
    g: Option<f64>,
    g_from: Option<f64>,
    g_to: Option<f64>,
    steps: Option<usize>,
    direction: Option<f64>,
    t0: Option<f64>,
    t_from: Option<f64>,
    t_to: Option<f64>,
    precision: Option<u32>,
    format: Option<String>,
    grid: Option<String>,
    suite: Option<String>,
    cache_dir: Option<PathBuf>,
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, Error> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            toml::from_str(&text).map_err(|e| Error::Invalid(format!("config {}: {e}", p.display())))
        }
    }
}

fn require<T>(flag: Option<T>, cfg: Option<T>, name: &str) -> Result<T, Error> {
    flag.or(cfg)
        .ok_or_else(|| Error::Invalid(format!("missing required value `{name}` (flag or config)")))
}

fn real_str(x: &Real, digits: u32) -> String {
    let (sign, mantissa, exp) = x.to_sign_string_exp(10, Some(digits as usize));
    match exp {
        Some(e) => format!("{}0.{}e{}", if sign { "-" } else { "" }, mantissa, e),
        None => format!("{}{}", if sign { "-" } else { "" }, mantissa),
    }
}

fn numeric_provenance(prec: Prec) -> serde_json::Value {
    json!({ "kind": "numeric", "precision_digits": prec.digits })
}

fn coeff_strings(table: &CoeffTable) -> Vec<String> {
    table.coeffs.iter().map(rat_string).collect()
}

/// Table lookup honoring the cache directory when one is configured.
fn table(
    cache: &Option<PathBuf>,
    spec: OscillatorSpec,
    n: u32,
    kmax: usize,
) -> Result<CoeffTable, Error> {
    match cache {
        Some(dir) => anharm::cache::load_or_compute(dir, spec, n, kmax),
        None => Ok(rspt_coeffs(spec, n, kmax)),
    }
}

fn width_series_json(ws: &WidthSeries) -> serde_json::Value {
    let coeffs: Vec<serde_json::Value> = ws
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            json!({
                "k": k,
                "rational": rat_string(&c.rational),
                "golden_alpha_multiple": rat_string(&c.golden),
            })
        })
        .collect();
    json!({
        "degree": ws.spec.degree(),
        "level": ws.n,
        "coefficients": coeffs,
        "provenance": { "kind": "exact", "source": "fixture-derived" },
    })
}

fn run(cli: Cli) -> Result<String, Error> {
    let cfg = load_config(&cli.config)?;
    let prec = Prec::new(cli.precision.or(cfg.precision).unwrap_or(40));
    let cache = cli
        .cache_dir
        .clone()
        .or_else(|| cfg.cache_dir.clone())
        .or_else(|| std::env::var_os("ANHARM_CACHE_DIR").map(PathBuf::from));
    let digits = prec.digits.min(30);

    match cli.cmd {
        Cmd::Rspt { degree, level, kmax, format } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let kmax = require(kmax, cfg.kmax, "kmax")?;
            let spec = OscillatorSpec::new(m)?;
            let t = table(&cache, spec, n, kmax)?;
            let csv = matches!(format, Some(Format::Csv))
                || (format.is_none() && cfg.format.as_deref() == Some("csv"));
            if csv {
                Ok(t.to_csv())
            } else {
                Ok(pretty(json!({
                    "command": "rspt",
                    "config": { "degree": m, "level": n, "kmax": kmax },
                    "provenance": { "kind": "exact" },
                    "coefficients": coeff_strings(&t),
                })))
            }
        }
        Cmd::Bfun { degree, order } => {
            let m = require(degree, cfg.degree, "degree")?;
            let order = require(order, cfg.order, "order")?;
            let b = b_function(OscillatorSpec::new(m)?, order)?;
            let terms: Vec<serde_json::Value> = b
                .terms
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let coeffs: Vec<String> = p.coeffs().iter().map(rat_string).collect();
                    json!({ "g_order": k, "energy_poly": coeffs })
                })
                .collect();
            Ok(pretty(json!({
                "command": "bfun",
                "config": { "degree": m, "order": order },
                "provenance": { "kind": "exact" },
                "terms": terms,
            })))
        }
        Cmd::Afun { degree } => {
            let m = require(degree, cfg.degree, "degree")?;
            let fixture = a_fixture(m)?;
            let terms: Vec<serde_json::Value> = fixture
                .terms
                .iter()
                .map(|t| {
                    let scalar = match t.scalar {
                        AScalar::One => "1",
                        AScalar::InstantonAction => "instanton-action",
                        AScalar::GoldenAlpha => "golden-alpha",
                    };
                    let coeffs: Vec<String> = t.poly.coeffs().iter().map(rat_string).collect();
                    json!({
                        "lattice_order": t.k,
                        "scalar": scalar,
                        "energy_poly": coeffs,
                        "provenance": { "kind": "fixture", "note": t.provenance },
                    })
                })
                .collect();
            Ok(pretty(json!({
                "command": "afun",
                "config": { "degree": m },
                "max_width_order": fixture.max_width_order(),
                "terms": terms,
            })))
        }
        Cmd::Action { degree } => {
            let m = require(degree, cfg.degree, "degree")?;
            let pair = ActionPair::compute(m, prec)?;
            let bits = pair.closed_form.prec();
            let diff = Real::with_val(bits, &pair.numeric - &pair.closed_form).abs();
            let agreement = if diff.is_zero() {
                prec.digits as f64
            } else {
                -(diff / pair.closed_form.clone().abs()).to_f64().log10()
            };
            Ok(pretty(json!({
                "command": "action",
                "config": { "degree": m, "precision_digits": prec.digits },
                "closed_form": {
                    "value": real_str(&pair.closed_form, digits),
                    "provenance": { "kind": "exact", "source": "closed form" },
                },
                "quadrature": {
                    "value": real_str(&pair.numeric, digits),
                    "provenance": numeric_provenance(prec),
                },
                "c_constant": real_str(&pair.c_m, digits),
                "agreement_digits": agreement.floor(),
            })))
        }
        Cmd::Width { degree, level, g, order } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let gv = require(g, cfg.g, "g")?;
            let order = order.or(cfg.order).unwrap_or(0);
            let spec = OscillatorSpec::new(m)?;
            let ws = one_instanton_width_series(spec, n, order)?;
            let g = prec.real_from_f64(gv);
            let value = ws.eval(&g, prec)?;
            Ok(pretty(json!({
                "command": "width",
                "config": { "degree": m, "level": n, "g": gv, "order": order,
                            "precision_digits": prec.digits },
                "imaginary_part": {
                    "value": real_str(&value, digits),
                    "provenance": numeric_provenance(prec),
                },
            })))
        }
        Cmd::WidthSeries { degree, level, order } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let order = require(order, cfg.order, "order")?;
            let ws = one_instanton_width_series(OscillatorSpec::new(m)?, n, order)?;
            let mut out = json!({ "command": "width-series" });
            let body = width_series_json(&ws);
            merge(&mut out, body);
            Ok(pretty(out))
        }
        Cmd::Largeorder { degree, level, kmax, format } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let kmax = require(kmax, cfg.kmax, "kmax")?;
            let spec = OscillatorSpec::new(m)?;
            let t = table(&cache, spec, n, kmax)?;
            let json_wanted = matches!(format, Some(Format::Json))
                || (format.is_none() && cfg.format.as_deref() == Some("json"));
            if json_wanted {
                let diag = ratio_diagnostics(&t, prec)?;
                let ratios: Vec<serde_json::Value> =
                    diag.ratios.iter().map(|(k, r)| json!({ "k": k, "ratio": r })).collect();
                Ok(pretty(json!({
                    "command": "largeorder",
                    "config": { "degree": m, "level": n, "kmax": kmax,
                                "precision_digits": prec.digits },
                    "ratios": ratios,
                    "fit_window": { "k_lo": diag.window.0, "k_hi": diag.window.1 },
                    "one_over_k_coefficient": diag.a,
                    "one_over_k_uncertainty": diag.a_err,
                    "provenance": numeric_provenance(prec),
                })))
            } else {
                Ok(ratio_csv(&t, prec)?)
            }
        }
        Cmd::Dispersion { degree, level, order } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let k = require(order, cfg.order.map(|o| o as u32), "order")?;
            let spec = OscillatorSpec::new(m)?;
            let moment = dispersion_moment(spec, n, k, prec)?;
            let closed = leading(spec, n, k, prec);
            let bits = moment.prec();
            let rel = (Real::with_val(bits, &moment - &closed).abs() / closed.clone().abs()).to_f64();
            Ok(pretty(json!({
                "command": "dispersion",
                "config": { "degree": m, "level": n, "order": k,
                            "precision_digits": prec.digits },
                "moment": { "value": real_str(&moment, digits),
                            "provenance": numeric_provenance(prec) },
                "closed_form": { "value": real_str(&closed, digits),
                                 "provenance": { "kind": "exact", "source": "closed form" } },
                "relative_error": rel,
            })))
        }
        Cmd::Resonance { degree, level, g, grid } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let gv = require(g, cfg.g, "g")?;
            let spec = OscillatorSpec::new(m)?;
            let opts = grid_options(spec, grid, &cfg);
            let g = prec.real_from_f64(gv);
            let r = resonance(spec, n, &g, &opts, prec)?;
            Ok(pretty(json!({
                "command": "resonance",
                "config": { "degree": m, "level": n, "g": gv,
                            "precision_digits": prec.digits },
                "re": real_str(&r.energy.re, digits),
                "im": real_str(&r.energy.im, digits),
                "err": r.error,
                "theta": r.theta,
                "dim": r.dim,
                "precision": r.precision,
                "provenance": numeric_provenance(Prec::new(r.precision)),
            })))
        }
        Cmd::ResonanceScan { degree, level, g_from, g_to, steps, grid } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let from = require(g_from, cfg.g_from, "g-from")?;
            let to = require(g_to, cfg.g_to, "g-to")?;
            let steps = steps.or(cfg.steps).unwrap_or(8).max(2);
            let spec = OscillatorSpec::new(m)?;
            let opts = grid_options(spec, grid, &cfg);
            let mut out = String::from("g,re,im,err,theta,dim\n");
            for i in 0..steps {
                let gv = from + (to - from) * i as f64 / (steps - 1) as f64;
                let g = prec.real_from_f64(gv);
                let r = resonance(spec, n, &g, &opts, prec)?;
                out.push_str(&format!(
                    "{gv},{},{},{},{},{}\n",
                    real_str(&r.energy.re, digits),
                    real_str(&r.energy.im, digits),
                    r.error,
                    r.theta,
                    r.dim
                ));
            }
            Ok(out)
        }
        Cmd::Borel { degree, level, g, kmax, direction } => {
            let m = require(degree, cfg.degree, "degree")?;
            let n = require(level, cfg.level, "level")?;
            let gv = require(g, cfg.g, "g")?;
            let kmax = kmax.or(cfg.kmax).unwrap_or(30);
            let phi = direction.or(cfg.direction).unwrap_or(0.0);
            let spec = OscillatorSpec::new(m)?;
            let t = table(&cache, spec, n, kmax)?;
            let beta = spec.rho() as u32;
            let g = prec.real_from_f64(gv);
            let sum = borel_pade(&t.coeffs, beta, phi, &g, prec)?;
            Ok(pretty(json!({
                "command": "borel",
                "config": { "degree": m, "level": n, "g": gv, "kmax": kmax,
                            "direction": phi, "precision_digits": prec.digits },
                "re": real_str(&sum.value.re, digits),
                "im": real_str(&sum.value.im, digits),
                "error": sum.error,
                "beta": sum.beta,
                "direction": sum.direction,
                "deflection": sum.deflection,
                "pade": [sum.pade.0, sum.pade.1],
                "provenance": numeric_provenance(prec),
            })))
        }
        Cmd::InstantonProfile { degree, t0, t_from, t_to, steps } => {
            let m = require(degree, cfg.degree, "degree")?;
            let t0 = t0.or(cfg.t0).unwrap_or(0.0);
            let from = t_from.or(cfg.t_from).unwrap_or(-8.0);
            let to = t_to.or(cfg.t_to).unwrap_or(8.0);
            let steps = steps.or(cfg.steps).unwrap_or(400).max(2);
            let profile = InstantonProfile::new(m, t0, 1)?;
            let mut out = String::from("t,chi,potential\n");
            for i in 0..steps {
                let tv = from + (to - from) * i as f64 / (steps - 1) as f64;
                let t = prec.real_from_f64(tv);
                let chi = profile.chi(&t, prec);
                let u = scaled_potential(m, &chi, prec);
                out.push_str(&format!(
                    "{tv},{},{}\n",
                    real_str(&chi, digits),
                    real_str(&u, digits)
                ));
            }
            Ok(out)
        }
        Cmd::Check { suite } => {
            let fast_only = match suite {
                Some(Suite::Fast) => true,
                Some(Suite::Full) => false,
                None => cfg.suite.as_deref() == Some("fast"),
            };
            let outcomes = acceptance::run_suite(fast_only);
            let mut out = String::new();
            for o in &outcomes {
                out.push_str(&o.line());
                out.push('\n');
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            out.push_str(&format!(
                "{} of {} criteria passed\n",
                outcomes.len() - failed,
                outcomes.len()
            ));
            if failed > 0 {
                print!("{out}");
                std::process::exit(1);
            }
            Ok(out)
        }
    }
}

fn grid_options(spec: OscillatorSpec, grid: Option<Grid>, cfg: &FileConfig) -> ResonanceOptions {
    let quick = match grid {
        Some(Grid::Quick) => true,
        Some(Grid::Default) => false,
        None => cfg.grid.as_deref() == Some("quick"),
    };
    if quick {
        ResonanceOptions::quick(spec)
    } else {
        ResonanceOptions::default_for(spec)
    }
}

fn merge(target: &mut serde_json::Value, extra: serde_json::Value) {
    if let (Some(t), serde_json::Value::Object(e)) = (target.as_object_mut(), extra) {
        for (k, v) in e {
            t.insert(k, v);
        }
    }
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            let diag = json!({ "error": e.to_string() });
            eprintln!("{}", serde_json::to_string_pretty(&diag).expect("serializable"));
            std::process::exit(1);
        }
    }
}
