//! Command-line surface: per-energy analysis reports, energy sweeps over a
//! spectral window, and figure-data emission.  All outputs are deterministic:
//! identical flags produce byte-identical CSV/JSON files.
//!
//! Exit codes: `0` clean, `1` input error (bad flags, unreadable or malformed
//! model file, unknown figure name), `2` partial result (some quantities could
//! not be computed; the report records why).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::circleopt::{herman_radius, herman_radius_uniform, MinCurve};
use crate::cocycle::acceleration;
use crate::criteria::{m2_boundary_l1, subcritical_energy, subcritical_uniform, Verdict};
use crate::csvio::{fmt_sig6, write_row};
use crate::jacobi::{
    balanced_gate, jacobi_acceleration, jacobi_case, jacobi_herman_bound, jacobi_herman_radius,
    jacobi_herman_radius_uniform, jacobi_m_uniform, jacobi_subcritical, jacobi_subcritical_uniform,
    CaseTag, JacobiModel,
};
use crate::spectrum::spectral_radius_bound;
use crate::supercritical::{find_eps1, herman_bound_with_eps1, LowerBoundReport, DEFAULT_MARGIN};
use crate::trigpoly::TrigPoly;
use crate::{Error, GOLDEN_MEAN};

/// Finite-difference step for the acceleration estimate at height `0⁺`.
const ACCEL_STEP: f64 = 0.02;

/// Iterate/phase caps applied to the per-row acceleration column of sweeps
/// (full-precision estimates stay available through `analyze`).
const SWEEP_ACCEL_ITERATES: usize = 20_000;
const SWEEP_ACCEL_PHASES: usize = 8;

#[derive(Parser)]
#[command(
    name = "cocycle-lab",
    version,
    about = "Spectral-regime certificates for quasi-periodic Schrodinger and Jacobi operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-model (and optionally per-energy) report: radii, criterion
    /// verdicts, acceleration at zero height, improved lower bound.
    Analyze(AnalyzeArgs),
    /// CSV sweep over an energy window with columns
    /// `E,epsH,threshold,verdict,accel0,bound`.
    Sweep(SweepArgs),
    /// CSV data behind the standard figures.
    Figure(FigureArgs),
}

#[derive(Args)]
struct Common {
    /// Model file: JSON either `{"a":[...],"b":[...]}` (trigonometric
    /// potential) or `{"c":{...},"v":{...}}` (hopping/potential pair).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Frequency in (0,1); defaults to the golden mean.
    #[arg(long)]
    alpha: Option<f64>,
    /// Iterates per phase for exponent estimates.
    #[arg(long, default_value_t = 100_000)]
    iterates: usize,
    /// Number of equidistributed phases averaged per exponent estimate.
    #[arg(long, default_value_t = 32)]
    phases: usize,
    /// Circle-grid size for minimum-modulus searches.
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Reproducibility tag recorded in reports (the estimators themselves
    /// are deterministic).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    /// Energy at which to evaluate the per-energy quantities.
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
    /// Optional JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Lower end of the energy window (default: -spectral radius bound).
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    /// Upper end of the energy window (default: +spectral radius bound).
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    /// Energy step.
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FigureArgs {
    #[command(flatten)]
    common: Common,
    /// One of: region-m2, region-compare, mcurve, lower-bound.
    #[arg(long)]
    figure: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Energy for the mcurve figure (default 0).
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
    /// Lower end of the energy window for the lower-bound figure.
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    /// Upper end of the energy window for the lower-bound figure.
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    /// Energy step for the lower-bound figure.
    #[arg(long, default_value_t = 0.5)]
    step: f64,
}

/// A model file is one of the two supported operator classes.
#[derive(Deserialize)]
#[serde(untagged)]
enum Model {
    Potential(TrigPoly),
    Jacobi(JacobiModel),
}

/// Validated run parameters shared by all subcommands.
struct RunConfig {
    alpha: f64,
    iterates: usize,
    phases: usize,
    grid: usize,
    seed: u64,
}

impl RunConfig {
    fn from_common(c: &Common) -> Result<Self, String> {
        let alpha = c.alpha.unwrap_or(GOLDEN_MEAN);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(format!("alpha must lie strictly inside (0,1), got {alpha}"));
        }
        if c.iterates == 0 || c.phases == 0 || c.grid == 0 {
            return Err("iterates, phases and grid must all be positive".into());
        }
        Ok(RunConfig {
            alpha,
            iterates: c.iterates,
            phases: c.phases,
            grid: c.grid,
            seed: c.seed,
        })
    }
}

fn load_model(path: Option<&Path>) -> Result<Model, String> {
    let path = path.ok_or("this command needs --model <FILE>")?;
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read model file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|_| {
        format!(
            "model file {} is neither a trigonometric potential {{\"a\":[..],\"b\":[..]}} \
             nor a hopping/potential pair {{\"c\":{{..}},\"v\":{{..}}}}",
            path.display()
        )
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Figure(args) => cmd_figure(&args),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// JSON shape of the `analyze` report; the human-readable lines mirror it.
#[derive(Serialize)]
struct Report {
    kind: &'static str,
    alpha: f64,
    seed: u64,
    iterates: usize,
    phases: usize,
    energy: Option<f64>,
    uniform_radius: Option<f64>,
    uniform_verdict: Option<Verdict>,
    herman_radius: Option<f64>,
    energy_verdict: Option<Verdict>,
    acceleration_raw: Option<f64>,
    acceleration_snapped: Option<f64>,
    lower_bound: Option<LowerBoundReport>,
    jacobi: Option<JacobiSection>,
    notes: Vec<String>,
    errors: Vec<String>,
}

#[derive(Serialize)]
struct JacobiSection {
    case: CaseTag,
    mean_log_hopping: f64,
    singular_hopping: bool,
    asymptote_slope: f64,
    asymptote_constant: f64,
    exponent_bound: f64,
    gate_ratio: Option<f64>,
}

fn verdict_line(label: &str, v: &Verdict) -> String {
    let spectrum_tag =
        if label.starts_with("uniform") && v.status == crate::criteria::Status::SubcriticalProven {
            " (all spectrum)"
        } else {
            ""
        };
    format!(
        "{label}: {}{spectrum_tag} ({} vs {}) - {}",
        v.status,
        fmt_sig6(v.lhs),
        fmt_sig6(v.rhs),
        v.witness
    )
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<bool, String> {
    let cfg = RunConfig::from_common(&args.common)?;
    let model = load_model(args.common.model.as_deref())?;
    let mut report = Report {
        kind: "",
        alpha: cfg.alpha,
        seed: cfg.seed,
        iterates: cfg.iterates,
        phases: cfg.phases,
        energy: args.energy,
        uniform_radius: None,
        uniform_verdict: None,
        herman_radius: None,
        energy_verdict: None,
        acceleration_raw: None,
        acceleration_snapped: None,
        lower_bound: None,
        jacobi: None,
        notes: Vec::new(),
        errors: Vec::new(),
    };
    match &model {
        Model::Potential(v) => analyze_potential(v, &cfg, args.energy, &mut report),
        Model::Jacobi(m) => analyze_jacobi(m, &cfg, args.energy, &mut report),
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    for err in &report.errors {
        println!("error: {err}");
    }
    if let Some(path) = &args.out {
        let json =
            serde_json::to_string_pretty(&report).map_err(|e| format!("report encoding: {e}"))?;
        fs::write(path, json + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(report.errors.is_empty())
}

fn analyze_potential(v: &TrigPoly, cfg: &RunConfig, energy: Option<f64>, report: &mut Report) {
    report.kind = "potential";
    println!(
        "model: trigonometric potential, degree {}, frequency gcd {}, top modulus {}, modulus sum {}",
        v.degree(),
        v.gcd_frequency(),
        fmt_sig6(v.lambda_top_abs()),
        fmt_sig6(v.lambda_abs_sum())
    );
    println!("alpha: {}", fmt_sig6(cfg.alpha));
    match herman_radius_uniform(v) {
        Ok(r) => {
            report.uniform_radius = Some(r);
            println!("uniform herman radius: {}", fmt_sig6(r));
        }
        Err(e) => report.errors.push(format!("uniform herman radius: {e}")),
    }
    match subcritical_uniform(v) {
        Ok(verdict) => {
            println!("{}", verdict_line("uniform verdict", &verdict));
            report.uniform_verdict = Some(verdict);
        }
        Err(e) => report.errors.push(format!("uniform verdict: {e}")),
    }
    let Some(e) = energy else { return };
    println!("energy: {}", fmt_sig6(e));
    match herman_radius(v, e) {
        Ok(r) => {
            report.herman_radius = Some(r);
            println!("herman radius: {}", fmt_sig6(r));
        }
        Err(err) => report.errors.push(format!("herman radius: {err}")),
    }
    match subcritical_energy(v, e) {
        Ok(verdict) => {
            println!("{}", verdict_line("energy verdict", &verdict));
            report.energy_verdict = Some(verdict);
        }
        Err(err) => report.errors.push(format!("energy verdict: {err}")),
    }
    match acceleration(
        v,
        e,
        cfg.alpha,
        ACCEL_STEP,
        ACCEL_STEP,
        cfg.iterates,
        cfg.phases,
    ) {
        Ok(a) => {
            report.acceleration_raw = Some(a.raw);
            report.acceleration_snapped = Some(a.snapped as f64);
            println!(
                "acceleration at 0+: snapped {} (raw {})",
                a.snapped,
                fmt_sig6(a.raw)
            );
        }
        Err(err) => report.errors.push(format!("acceleration at 0+: {err}")),
    }
    match crate::supercritical::improved_herman_bound(v, e) {
        Ok(lb) => {
            println!(
                "lower bound: eps1 {}, gamma {}, bound {}, classical herman {}",
                fmt_sig6(lb.eps1),
                fmt_sig6(lb.gamma),
                fmt_sig6(lb.bound),
                fmt_sig6(lb.classical_herman)
            );
            report.lower_bound = Some(lb);
        }
        Err(Error::BoundInapplicable { reason, .. }) => {
            report
                .notes
                .push(format!("lower bound not applicable: {reason}"));
        }
        Err(err) => report.errors.push(format!("lower bound: {err}")),
    }
}

fn analyze_jacobi(m: &JacobiModel, cfg: &RunConfig, energy: Option<f64>, report: &mut Report) {
    report.kind = "jacobi";
    let case = jacobi_case(m);
    println!(
        "model: hopping/potential pair, hopping degrees [{}, {}], potential degree {}, case {:?}",
        m.n1(),
        m.n2(),
        m.potential().degree(),
        case
    );
    println!("alpha: {}", fmt_sig6(cfg.alpha));
    let gate_ratio = if case == CaseTag::Balanced {
        let (ratio, ok) = balanced_gate(m);
        println!(
            "balanced gate: ratio {} ({})",
            fmt_sig6(ratio),
            if ok { "pass" } else { "fail" }
        );
        Some(ratio)
    } else {
        None
    };
    match jacobi_herman_bound(m, cfg.alpha) {
        Ok(hb) => {
            println!(
                "hopping mean log: {} ({})",
                fmt_sig6(hb.i_c),
                if hb.singular {
                    "regularized: singular hopping"
                } else {
                    "regular"
                }
            );
            println!(
                "asymptote: slope {} (in 2*pi units), constant {}, exponent bound at 0: {}",
                fmt_sig6(crate::jacobi::asymptotic_slope(m)),
                fmt_sig6(hb.constant),
                fmt_sig6(hb.bound)
            );
            report.jacobi = Some(JacobiSection {
                case: hb.case,
                mean_log_hopping: hb.i_c,
                singular_hopping: hb.singular,
                asymptote_slope: crate::jacobi::asymptotic_slope(m),
                asymptote_constant: hb.constant,
                exponent_bound: hb.bound,
                gate_ratio,
            });
        }
        Err(err) => report.errors.push(format!("asymptote bound: {err}")),
    }
    match jacobi_herman_radius_uniform(m, cfg.alpha) {
        Ok(r) => {
            report.uniform_radius = Some(r);
            println!("uniform herman radius: {}", fmt_sig6(r));
        }
        Err(Error::UnsupportedCase(reason)) => {
            report
                .notes
                .push(format!("uniform herman radius not defined: {reason}"));
        }
        Err(err) => report.errors.push(format!("uniform herman radius: {err}")),
    }
    match jacobi_subcritical_uniform(m, cfg.alpha) {
        Ok(verdict) => {
            println!("{}", verdict_line("uniform verdict", &verdict));
            report.uniform_verdict = Some(verdict);
        }
        Err(Error::UnsupportedCase(reason)) => {
            report
                .notes
                .push(format!("uniform verdict not defined: {reason}"));
        }
        Err(err) => report.errors.push(format!("uniform verdict: {err}")),
    }
    let Some(e) = energy else { return };
    println!("energy: {}", fmt_sig6(e));
    match jacobi_herman_radius(m, e, cfg.alpha) {
        Ok(r) => {
            report.herman_radius = Some(r);
            println!("herman radius: {}", fmt_sig6(r));
        }
        Err(Error::UnsupportedCase(reason)) => {
            report
                .notes
                .push(format!("herman radius not defined: {reason}"));
        }
        Err(err) => report.errors.push(format!("herman radius: {err}")),
    }
    match jacobi_subcritical(m, e, cfg.alpha) {
        Ok(verdict) => {
            println!("{}", verdict_line("energy verdict", &verdict));
            report.energy_verdict = Some(verdict);
        }
        Err(Error::UnsupportedCase(reason)) => {
            report
                .notes
                .push(format!("energy verdict not defined: {reason}"));
        }
        Err(err) => report.errors.push(format!("energy verdict: {err}")),
    }
    match jacobi_acceleration(
        m,
        e,
        cfg.alpha,
        ACCEL_STEP,
        ACCEL_STEP,
        cfg.iterates,
        cfg.phases,
    ) {
        Ok(a) => {
            report.acceleration_raw = Some(a.raw);
            report.acceleration_snapped = Some(a.snapped);
            println!(
                "acceleration at 0+ (raw exponent): snapped {} (raw {})",
                fmt_sig6(a.snapped),
                fmt_sig6(a.raw)
            );
        }
        Err(err) => report.errors.push(format!("acceleration at 0+: {err}")),
    }
}

/// Energy grid `emin, emin+step, …` up to `emax` (inclusive within a relative
/// slack of `1e−9` steps).
fn energy_grid(emin: f64, emax: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "sweep step must be positive");
    let mut grid = Vec::new();
    let mut k = 0usize;
    loop {
        let e = emin + k as f64 * step;
        if e > emax + step * 1e-9 {
            break;
        }
        grid.push(e);
        k += 1;
    }
    grid
}

/// One line of the sweep CSV: fields for
/// `E,epsH,threshold,verdict,accel0,bound`, plus a partial-failure marker.
struct SweepRow {
    fields: [String; 6],
    failed: bool,
}

fn sweep_rows(model: &Model, cfg: &RunConfig, energies: &[f64]) -> Vec<SweepRow> {
    use rayon::prelude::*;
    let accel_n = cfg.iterates.min(SWEEP_ACCEL_ITERATES);
    let accel_ph = cfg.phases.min(SWEEP_ACCEL_PHASES);
    match model {
        Model::Potential(v) => {
            let uniform = herman_radius_uniform(v);
            crate::thread_pool().install(|| {
                energies
                    .par_iter()
                    .map(|&e| {
                        let mut failed = false;
                        let (eps_h, threshold, verdict) = match subcritical_energy(v, e) {
                            Ok(cv) => {
                                let radius = if v.gcd_frequency() == v.degree() {
                                    herman_radius(v, e).ok()
                                } else {
                                    Some(cv.lhs)
                                };
                                (radius, Some(cv.rhs), cv.status.to_string())
                            }
                            Err(err) => {
                                failed = true;
                                (None, None, err.to_string())
                            }
                        };
                        let accel0 = match acceleration(
                            v, e, cfg.alpha, ACCEL_STEP, ACCEL_STEP, accel_n, accel_ph,
                        ) {
                            Ok(a) => Some(a.snapped as f64),
                            Err(Error::UnresolvedAcceleration { raw, .. }) => Some(raw),
                            Err(_) => {
                                failed = true;
                                None
                            }
                        };
                        let bound = match &uniform {
                            Ok(u) => find_eps1(v, e, DEFAULT_MARGIN)
                                .ok()
                                .flatten()
                                .and_then(|eps1| herman_bound_with_eps1(v, e, eps1, *u).ok())
                                .map(|lb| lb.bound),
                            Err(_) => None,
                        };
                        SweepRow {
                            fields: [
                                fmt_sig6(e),
                                eps_h.map(fmt_sig6).unwrap_or_default(),
                                threshold.map(fmt_sig6).unwrap_or_default(),
                                verdict,
                                accel0.map(fmt_sig6).unwrap_or_default(),
                                bound.map(fmt_sig6).unwrap_or_default(),
                            ],
                            failed,
                        }
                    })
                    .collect()
            })
        }
        Model::Jacobi(m) => {
            let bound = jacobi_herman_bound(m, cfg.alpha).ok().map(|hb| hb.bound);
            crate::thread_pool().install(|| {
                energies
                    .par_iter()
                    .map(|&e| {
                        let mut failed = false;
                        let eps_h = jacobi_herman_radius(m, e, cfg.alpha).ok();
                        let (threshold, verdict) = match jacobi_subcritical(m, e, cfg.alpha) {
                            Ok(cv) => (Some(cv.rhs), cv.status.to_string()),
                            Err(err) => {
                                failed = true;
                                (None, err.to_string())
                            }
                        };
                        let accel0 = match jacobi_acceleration(
                            m, e, cfg.alpha, ACCEL_STEP, ACCEL_STEP, accel_n, accel_ph,
                        ) {
                            Ok(a) => Some(a.snapped),
                            Err(Error::UnresolvedAcceleration { raw, .. }) => Some(raw),
                            Err(_) => {
                                failed = true;
                                None
                            }
                        };
                        SweepRow {
                            fields: [
                                fmt_sig6(e),
                                eps_h.map(fmt_sig6).unwrap_or_default(),
                                threshold.map(fmt_sig6).unwrap_or_default(),
                                verdict,
                                accel0.map(fmt_sig6).unwrap_or_default(),
                                bound.map(fmt_sig6).unwrap_or_default(),
                            ],
                            failed,
                        }
                    })
                    .collect()
            })
        }
    }
}

fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<(), String> {
    let mut buf = Vec::new();
    write_row(
        &mut buf,
        &["E", "epsH", "threshold", "verdict", "accel0", "bound"],
    )
    .map_err(|e| e.to_string())?;
    for row in rows {
        let fields: Vec<&str> = row.fields.iter().map(String::as_str).collect();
        write_row(&mut buf, &fields).map_err(|e| e.to_string())?;
    }
    fs::write(path, buf).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn default_window(model: &Model) -> f64 {
    match model {
        Model::Potential(v) => spectral_radius_bound(v),
        Model::Jacobi(m) => crate::jacobi::spectral_hull_radius(m) + 2.0,
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<bool, String> {
    let cfg = RunConfig::from_common(&args.common)?;
    if args.step <= 0.0 {
        return Err(format!("step must be positive, got {}", args.step));
    }
    let model = load_model(args.common.model.as_deref())?;
    let window = default_window(&model);
    let emin = args.emin.unwrap_or(-window);
    let emax = args.emax.unwrap_or(window);
    if emax < emin {
        return Err(format!("empty energy window: emax {emax} < emin {emin}"));
    }
    let energies = energy_grid(emin, emax, args.step);
    let rows = sweep_rows(&model, &cfg, &energies);
    write_sweep_csv(&args.out, &rows)?;
    let failures = rows.iter().filter(|r| r.failed).count();
    println!(
        "sweep: {} rows written to {}, {} failures",
        rows.len(),
        args.out.display(),
        failures
    );
    Ok(failures == 0)
}

/// Boundary of the odd-pair region at `(N,M) = (1,2)`: the `b1` where
/// `b2² + b1·b2 + 2·b2 + b1 = 1` turns exact, clamped to zero.
fn odd_quadratic_boundary_b1(b2: f64) -> f64 {
    ((1.0 - 2.0 * b2 - b2 * b2) / (1.0 + b2)).max(0.0)
}

fn cmd_figure(args: &FigureArgs) -> Result<bool, String> {
    let cfg = RunConfig::from_common(&args.common)?;
    match args.figure.as_str() {
        "region-m2" => {
            let mut buf = Vec::new();
            write_row(&mut buf, &["lambda2", "lambda1"]).map_err(|e| e.to_string())?;
            for k in 0..=110 {
                let l2 = k as f64 * 0.002;
                let l1 = m2_boundary_l1(l2).max(0.0);
                write_row(&mut buf, &[&fmt_sig6(l2), &fmt_sig6(l1)]).map_err(|e| e.to_string())?;
            }
            fs::write(&args.out, buf)
                .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
            Ok(true)
        }
        "region-compare" => {
            let mut buf = Vec::new();
            write_row(&mut buf, &["lambda2", "lambda1_general", "lambda1_odd"])
                .map_err(|e| e.to_string())?;
            for k in 0..=180 {
                let l2 = k as f64 * 0.0025;
                let general = m2_boundary_l1(l2).max(0.0);
                let odd = odd_quadratic_boundary_b1(l2);
                write_row(&mut buf, &[&fmt_sig6(l2), &fmt_sig6(general), &fmt_sig6(odd)])
                    .map_err(|e| e.to_string())?;
            }
            fs::write(&args.out, buf)
                .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
            Ok(true)
        }
        "mcurve" => {
            let model = load_model(args.common.model.as_deref())?;
            let e = args.energy.unwrap_or(0.0);
            match &model {
                Model::Potential(v) => {
                    let eps_max = herman_radius_uniform(v).map(|r| 1.25 * r).unwrap_or(1.0);
                    let curve = MinCurve::sample(v, e, eps_max, 512)
                        .map_err(|err| format!("minimum-modulus curve: {err}"))?;
                    let mut buf = Vec::new();
                    curve.write_csv(&mut buf).map_err(|err| err.to_string())?;
                    fs::write(&args.out, buf)
                        .map_err(|err| format!("cannot write {}: {err}", args.out.display()))?;
                }
                Model::Jacobi(m) => {
                    let eps_max = jacobi_herman_radius_uniform(m, cfg.alpha)
                        .map(|r| 1.25 * r)
                        .unwrap_or(1.0);
                    let mut buf = Vec::new();
                    write_row(&mut buf, &["eps", "value"]).map_err(|err| err.to_string())?;
                    for k in 0..512 {
                        let eps = eps_max * k as f64 / 511.0;
                        let val = jacobi_m_uniform(m, cfg.alpha, eps, cfg.grid);
                        write_row(&mut buf, &[&fmt_sig6(eps), &fmt_sig6(val)])
                            .map_err(|err| err.to_string())?;
                    }
                    fs::write(&args.out, buf)
                        .map_err(|err| format!("cannot write {}: {err}", args.out.display()))?;
                }
            }
            Ok(true)
        }
        "lower-bound" => {
            let model = load_model(args.common.model.as_deref())?;
            if args.step <= 0.0 {
                return Err(format!("step must be positive, got {}", args.step));
            }
            let window = default_window(&model);
            let emin = args.emin.unwrap_or(-window);
            let emax = args.emax.unwrap_or(window);
            if emax < emin {
                return Err(format!("empty energy window: emax {emax} < emin {emin}"));
            }
            let energies = energy_grid(emin, emax, args.step);
            let rows = sweep_rows(&model, &cfg, &energies);
            write_sweep_csv(&args.out, &rows)?;
            let failures = rows.iter().filter(|r| r.failed).count();
            Ok(failures == 0)
        }
        other => Err(format!(
            "unknown figure name {other:?}; expected one of region-m2, region-compare, mcurve, lower-bound"
        )),
    }
}
