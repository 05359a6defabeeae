//! Argument definitions and command dispatch. Every number printed here comes
//! from a library call; this module only formats.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use structfac_core::bisep::{bisep_bound, gme_detected, seesaw_max, Bipartition, SeesawOptions};
use structfac_core::correl::{correlator_table, SiteLayout};
use structfac_core::noise::{collective_threshold, individual_threshold};
use structfac_core::sampling::convergence_curve;
use structfac_core::witness::{detects, scan_k, sigma_value, witness_value, DETECTION_TOL};
use structfac_core::WitnessSpec;

use crate::angle::{parse_angle, parse_coeffs, parse_counts, parse_reals};
use crate::error::{input, CliError};
use crate::formats::{
    read_spec, spec_label, write_correlators_csv, write_curve_csv, write_robustness_csv,
    write_scan_csv, BisepFile, GmeCheck, RobustnessRow, SpecFile,
};
use crate::report::{reproduce, ReportOptions};
use crate::source::LoadedState;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "STRUCTFAC_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "structfac",
    version,
    about = "Structure-factor entanglement witnesses for qubit chains"
)]
pub struct Cli {
    /// Output form; json and csv carry full precision.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// The witness: `--k` and `--c` (with optional `--positions`), or `--spec`.
#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    /// Wave vector, e.g. 0, pi, pi/2.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Coefficients cx,cy,cz.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Site positions, comma separated; defaults to 0,1,...,N-1.
    #[arg(long, allow_hyphen_values = true)]
    pub positions: Option<String>,
    /// WitnessSpec JSON file; replaces --k, --c and --positions.
    #[arg(long, conflicts_with_all = ["k", "c", "positions"])]
    pub spec: Option<PathBuf>,
}

impl WitnessArgs {
    /// Builds the spec for `n` qubits; `k_optional` lets scan omit `--k`.
    fn resolve(&self, n: usize, k_optional: bool) -> Result<WitnessSpec, CliError> {
        if let Some(path) = &self.spec {
            let spec = read_spec(path)?;
            if spec.n_qubits() != n {
                return Err(input!(
                    "spec file is for {} qubits, state has {n}",
                    spec.n_qubits()
                ));
            }
            return Ok(spec);
        }
        let k = match (&self.k, k_optional) {
            (Some(k), _) => parse_angle(k)?,
            (None, true) => 0.0,
            (None, false) => return Err(input!("--k is required (or pass --spec)")),
        };
        let c = match &self.c {
            Some(c) => parse_coeffs(c)?,
            None => return Err(input!("--c is required (or pass --spec)")),
        };
        let layout = match &self.positions {
            Some(p) => SiteLayout::new(parse_reals(p)?)?,
            None => SiteLayout::uniform(n),
        };
        Ok(WitnessSpec::with_layout(n, k, c, layout)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SeedArg {
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// <Sigma(k)> and <W(k)> for one state.
    Eval {
        /// Builtin (e.g. dicke:4,2) or state JSON file.
        #[arg(long)]
        state: String,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Emit the two-point correlator table instead.
        #[arg(long)]
        correlators: bool,
    },
    /// <Sigma(k)> and <W(k)> over a grid of wave vectors.
    Scan {
        #[arg(long)]
        state: String,
        #[command(flatten)]
        witness: WitnessArgs,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        k_min: String,
        #[arg(long, default_value = "pi", allow_hyphen_values = true)]
        k_max: String,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Collective (p*) and per-qubit (q*) noise thresholds.
    Robustness {
        /// Repeat for several states.
        #[arg(long, required = true)]
        state: Vec<String>,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// See-saw bound on <Sigma(k)> over biseparable states.
    BisepBound {
        /// Register size; taken from --state when omitted.
        #[arg(long)]
        n: Option<usize>,
        /// Also test this state for genuine multipartite entanglement.
        #[arg(long)]
        state: Option<String>,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Restrict to one cut, e.g. 1,2|3,4 (1-based sites).
        #[arg(long)]
        cut: Option<String>,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Finite-shot estimates of <W(k)> over a grid of shot counts.
    Sample {
        #[arg(long)]
        state: String,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Shots per measurement setting, comma separated.
        #[arg(long, default_value = "100,1000,10000,100000,1000000")]
        shots: String,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Recompute every reference value and flag each against its target.
    ReproducePaper {
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 1_000_000)]
        shots: usize,
        /// Coefficient grid spacing for the cross-detection check.
        #[arg(long, default_value_t = 0.05)]
        c_step: f64,
        #[command(flatten)]
        seed: SeedArg,
    },
}

fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parse_cut(n: usize, text: &str) -> Result<Bipartition, CliError> {
    let (a, _) = text
        .split_once('|')
        .ok_or_else(|| input!("cut {text:?} needs the form 1,2|3,4"))?;
    let sites = a
        .split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(input!("bad site {s:?} in cut {text:?}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cut = Bipartition::new(n, &sites)?;
    let given: std::collections::BTreeSet<&str> = text.split(['|', ',']).map(str::trim).collect();
    if given.len() != n {
        return Err(input!("cut {text:?} must list every site 1..={n} once"));
    }
    Ok(cut)
}

/// Runs one command, writing its artifact to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Eval {
            state,
            witness,
            correlators,
        } => {
            let s = LoadedState::from_arg(state)?;
            if *correlators {
                let rows = correlator_table(&s.state)?;
                return match format {
                    Format::Csv => write_correlators_csv(out, &rows),
                    Format::Json => {
                        let v: Vec<_> = rows
                            .iter()
                            .map(|r| json!({"i": r.i + 1, "j": r.j + 1, "alpha": r.a.to_string(), "beta": r.b.to_string(), "value": r.value}))
                            .collect();
                        write_json(out, &v)
                    }
                    Format::Text => {
                        for r in &rows {
                            writeln!(
                                out,
                                "<s{}^{} s{}^{}> = {}",
                                r.i + 1,
                                r.a,
                                r.j + 1,
                                r.b,
                                r.value
                            )?;
                        }
                        Ok(())
                    }
                };
            }
            let spec = witness.resolve(s.state.n_qubits(), false)?;
            let sigma = sigma_value(&s.state, &spec)?;
            let w = witness_value(&s.state, &spec)?;
            let detected = detects(&s.state, &spec, DETECTION_TOL)?;
            match format {
                Format::Text => {
                    writeln!(out, "state    {}", s.id)?;
                    writeln!(out, "spec     {}", spec_label(&spec))?;
                    writeln!(out, "sigma    {sigma}")?;
                    writeln!(out, "witness  {w}")?;
                    writeln!(out, "detected {detected}")?;
                }
                Format::Json => write_json(
                    out,
                    &json!({"state": s.id, "spec": SpecFile::from_spec(&spec), "sigma": sigma, "witness": w, "detected": detected}),
                )?,
                Format::Csv => {
                    let mut wr = csv::Writer::from_writer(out);
                    wr.write_record(["state_id", "spec", "sigma", "witness", "detected"])?;
                    wr.write_record([
                        s.id.clone(),
                        spec_label(&spec),
                        crate::formats::sig17(sigma),
                        crate::formats::sig17(w),
                        detected.to_string(),
                    ])?;
                    wr.flush()?;
                }
            }
        }
        Command::Scan {
            state,
            witness,
            k_min,
            k_max,
            points,
        } => {
            let s = LoadedState::from_arg(state)?;
            let base = witness.resolve(s.state.n_qubits(), true)?;
            let (lo, hi) = (parse_angle(k_min)?, parse_angle(k_max)?);
            let grid: Vec<f64> = match *points {
                0 => return Err(input!("--points must be positive")),
                1 => vec![lo],
                p => (0..p)
                    .map(|i| lo + (hi - lo) * i as f64 / (p - 1) as f64)
                    .collect(),
            };
            let rows = scan_k(&s.state, base.coeffs(), base.layout(), &grid)?;
            match format {
                Format::Csv => write_scan_csv(out, &rows)?,
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|p| json!({"k": p.k, "sigma": p.sigma, "witness": p.witness}))
                        .collect();
                    write_json(out, &v)?;
                }
                Format::Text => {
                    writeln!(out, "{:>22} {:>22} {:>22}", "k", "sigma", "witness")?;
                    for p in &rows {
                        writeln!(out, "{:>22} {:>22} {:>22}", p.k, p.sigma, p.witness)?;
                    }
                }
            }
        }
        Command::Robustness { state, witness } => {
            let mut rows = Vec::new();
            for text in state {
                let s = LoadedState::from_arg(text)?;
                let spec = witness.resolve(s.state.n_qubits(), false)?;
                rows.push(RobustnessRow {
                    state_id: s.id,
                    spec: spec_label(&spec),
                    p_star: collective_threshold(&s.state, &spec)?,
                    q_star: individual_threshold(&s.state, &spec)?,
                });
            }
            match format {
                Format::Csv => write_robustness_csv(out, &rows)?,
                Format::Json => write_json(out, &rows)?,
                Format::Text => {
                    for r in &rows {
                        writeln!(
                            out,
                            "{}  [{}]  p* = {}  q* = {}",
                            r.state_id, r.spec, r.p_star, r.q_star
                        )?;
                    }
                }
            }
        }
        Command::BisepBound {
            n,
            state,
            witness,
            cut,
            restarts,
            tol,
            max_iter,
            seed,
        } => {
            let loaded = state.as_deref().map(LoadedState::from_arg).transpose()?;
            let n = match (n, &loaded) {
                (Some(n), Some(s)) if *n != s.state.n_qubits() => {
                    return Err(input!(
                        "--n {n} disagrees with the {}-qubit state",
                        s.state.n_qubits()
                    ))
                }
                (Some(n), _) => *n,
                (None, Some(s)) => s.state.n_qubits(),
                (None, None) => return Err(input!("give --n or --state")),
            };
            let spec = witness.resolve(n, false)?;
            let opts = SeesawOptions {
                restarts: *restarts,
                tol: *tol,
                max_iter: *max_iter,
                seed: seed.seed,
            };
            let result = match cut {
                Some(c) => seesaw_max(&spec, &parse_cut(n, c)?, &opts)?,
                None => bisep_bound(&spec, &opts)?,
            };
            let mut file = BisepFile::from_result(&result);
            if let Some(s) = &loaded {
                file.gme_check = Some(GmeCheck {
                    state: s.id.clone(),
                    sigma: sigma_value(&s.state, &spec)?,
                    gme_detected: gme_detected(&s.state, &spec, &result, DETECTION_TOL)?,
                });
            }
            match format {
                Format::Json => write_json(out, &file)?,
                Format::Csv => {
                    let mut wr = csv::Writer::from_writer(out);
                    wr.write_record([
                        "spec",
                        "bound",
                        "best_cut",
                        "restarts_used",
                        "converged",
                        "iterations",
                    ])?;
                    wr.write_record([
                        spec_label(&spec),
                        crate::formats::sig17(file.bound),
                        file.best_cut.label.clone(),
                        file.restarts_used.to_string(),
                        file.converged.to_string(),
                        file.iterations.to_string(),
                    ])?;
                    wr.flush()?;
                }
                Format::Text => {
                    writeln!(out, "spec       {}", spec_label(&spec))?;
                    writeln!(out, "bound      {}", file.bound)?;
                    writeln!(out, "best cut   {}", file.best_cut.label)?;
                    writeln!(out, "restarts   {}", file.restarts_used)?;
                    writeln!(
                        out,
                        "converged  {} after {} sweeps",
                        file.converged, file.iterations
                    )?;
                    if let Some(g) = &file.gme_check {
                        writeln!(
                            out,
                            "state      {} sigma {} gme {}",
                            g.state, g.sigma, g.gme_detected
                        )?;
                    }
                }
            }
        }
        Command::Sample {
            state,
            witness,
            shots,
            seed,
        } => {
            let s = LoadedState::from_arg(state)?;
            let spec = witness.resolve(s.state.n_qubits(), false)?;
            let curve = convergence_curve(&s.state, &spec, &parse_counts(shots)?, seed.seed)?;
            let exact = witness_value(&s.state, &spec)?;
            match format {
                Format::Csv => write_curve_csv(out, &curve)?,
                Format::Json => {
                    let points: Vec<_> = curve
                        .iter()
                        .map(|p| json!({"shots": p.shots, "estimate": p.estimate, "std_error": p.std_error}))
                        .collect();
                    write_json(
                        out,
                        &json!({"exact": exact, "seed": seed.seed, "curve": points}),
                    )?;
                }
                Format::Text => {
                    writeln!(out, "exact <W> = {exact}")?;
                    writeln!(
                        out,
                        "{:>10} {:>22} {:>22}",
                        "shots", "estimate", "std_error"
                    )?;
                    for p in &curve {
                        writeln!(
                            out,
                            "{:>10} {:>22} {:>22}",
                            p.shots, p.estimate, p.std_error
                        )?;
                    }
                }
            }
        }
        Command::ReproducePaper {
            restarts,
            shots,
            c_step,
            seed,
        } => {
            if !(*c_step > 0.0 && *c_step <= 2.0) {
                return Err(input!("--c-step must lie in (0, 2]"));
            }
            let report = reproduce(&ReportOptions {
                restarts: *restarts,
                shots: *shots,
                seed: seed.seed,
                c_step: *c_step,
            })?;
            let failed = report.failed();
            match format {
                Format::Json => write_json(
                    out,
                    &json!({"passed": report.checks.len() - failed, "failed": failed, "checks": report.checks}),
                )?,
                Format::Csv => {
                    let mut wr = csv::Writer::from_writer(&mut *out);
                    wr.write_record(["criterion", "quantity", "value", "expected", "pass"])?;
                    for c in &report.checks {
                        let value = match &c.value {
                            crate::report::Value::Number(x) => crate::formats::sig17(*x),
                            other => other.to_string(),
                        };
                        wr.write_record([
                            c.criterion.to_string(),
                            c.quantity.clone(),
                            value,
                            c.expected.clone(),
                            c.pass.to_string(),
                        ])?;
                    }
                    wr.flush()?;
                }
                Format::Text => {
                    for c in &report.checks {
                        let flag = if c.pass { "PASS" } else { "FAIL" };
                        writeln!(
                            out,
                            "[{flag}] {:>2} {}: {} (expected {})",
                            c.criterion, c.quantity, c.value, c.expected
                        )?;
                    }
                    writeln!(
                        out,
                        "{} passed, {failed} failed",
                        report.checks.len() - failed
                    )?;
                }
            }
            if failed > 0 {
                return Err(CliError::ReportFailed(failed));
            }
        }
    }
    Ok(())
}
