//! Experiment runner: analytic curves, Monte Carlo curves, comparisons, and
//! the figure recipes, emitted as CSV (authoritative) and SVG charts.

mod svg;

use clap::{Args, Parser, Subcommand};
use nncoop_core::config::parse_key_values;
use nncoop_core::coverage::{
    noncooperative_closest, noncooperative_fixed, coverage_fixed, ClosestCoverage,
};
use nncoop_core::monte_carlo::{simulate_coverage, CoverageCurve, Model, SimulationPlan};
use nncoop_core::numeric::QuadConfig;
use nncoop_core::{
    derive_constants, Association, CooperationScheme, DerivedConstants, Error, NetworkConfig,
};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "nncoop",
    about = "Coverage analysis of cellular networks with nearest-neighbour BS cooperation",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the derived pairing constants for a density
    Constants(CommonArgs),
    /// Evaluate the analytic coverage curve of the superposition model
    Analytic(CommonArgs),
    /// Estimate a coverage curve by Monte Carlo
    Simulate(CommonArgs),
    /// Overlay analytic, Monte Carlo and baseline curves; report the max gap
    Compare(CommonArgs),
    /// Produce the full figure set (six CSV + six SVG files)
    Figures(CommonArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// flat key=value config file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// BS density (1/km^2) [default: 0.25]
    #[arg(long)]
    lambda: Option<f64>,
    /// path-loss exponent, > 2 [default: 3]
    #[arg(long)]
    beta: Option<f64>,
    /// transmit power (W) [default: 1]
    #[arg(long)]
    power: Option<f64>,
    /// noise power (W) [default: 0]
    #[arg(long)]
    sigma2: Option<f64>,
    /// cooperation scheme: nsc | off:<q> | max | ph | ph-coherent [default: nsc]
    #[arg(long)]
    scheme: Option<String>,
    /// OFF activity probability; shorthand for --scheme off:<q>
    #[arg(long)]
    q: Option<f64>,
    /// association rule: fixed | closest [default: fixed]
    #[arg(long)]
    association: Option<String>,
    /// serving distance (km) for fixed association [default: 1]
    #[arg(long)]
    r0: Option<f64>,
    /// threshold grid start (dB) [default: -10]
    #[arg(long = "t-min-db")]
    t_min_db: Option<f64>,
    /// threshold grid end (dB) [default: 20]
    #[arg(long = "t-max-db")]
    t_max_db: Option<f64>,
    /// threshold grid size, >= 2 [default: 31]
    #[arg(long = "t-steps")]
    t_steps: Option<usize>,
    /// Monte Carlo trials per curve [default: 100000]
    #[arg(long)]
    trials: Option<u64>,
    /// base RNG seed [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    /// simulation window radius (km) [default: 15/sqrt(lambda)]
    #[arg(long = "window-radius")]
    window_radius: Option<f64>,
    /// boundary guard radius (km) [default: 3/sqrt(lambda)]
    #[arg(long = "guard-radius")]
    guard_radius: Option<f64>,
    /// Monte Carlo model: nn | superposition | baseline [default: superposition]
    #[arg(long)]
    model: Option<String>,
    /// output directory [default: .]
    #[arg(long)]
    out: Option<PathBuf>,
    /// output format: csv | svg | both [default: csv]
    #[arg(long)]
    format: Option<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
    fn svg(self) -> bool {
        matches!(self, Format::Svg | Format::Both)
    }
}

struct Settings {
    cfg: NetworkConfig,
    consts: DerivedConstants,
    t_db: Vec<f64>,
    thresholds: Vec<f64>,
    trials: u64,
    seed: u64,
    window_radius: Option<f64>,
    guard_radius: Option<f64>,
    model: Model,
    out: PathBuf,
    format: Format,
}

fn resolve(args: &CommonArgs) -> Result<Settings, Error> {
    let file: HashMap<String, String> = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_key_values(&text)?
        }
        None => HashMap::new(),
    };
    let num = |flag: Option<f64>, key: &str, default: f64| -> Result<f64, Error> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match file.get(key) {
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("bad numeric value for {key}: {s:?}"))),
            None => Ok(default),
        }
    };
    let text = |flag: &Option<String>, key: &str, default: &str| -> String {
        flag.clone()
            .or_else(|| file.get(key).cloned())
            .unwrap_or_else(|| default.to_string())
    };

    let lambda = num(args.lambda, "lambda", 0.25)?;
    let beta = num(args.beta, "beta", 3.0)?;
    let power = num(args.power, "power", 1.0)?;
    let sigma2 = num(args.sigma2, "sigma2", 0.0)?;
    let r0 = num(args.r0, "r0", 1.0)?;
    let t_min_db = num(args.t_min_db, "t_min_db", -10.0)?;
    let t_max_db = num(args.t_max_db, "t_max_db", 20.0)?;
    let t_steps = match args.t_steps {
        Some(v) => v,
        None => match file.get("t_steps") {
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("bad t_steps: {s:?}")))?,
            None => 31,
        },
    };
    if t_steps < 2 {
        return Err(Error::Config("t_steps must be >= 2".into()));
    }
    if !(t_max_db > t_min_db) {
        return Err(Error::Config("need t_max_db > t_min_db".into()));
    }

    let mut scheme_str = text(&args.scheme, "scheme", "nsc");
    let q = match args.q {
        Some(v) => Some(v),
        None => file.get("q").map(|s| s.parse()).transpose().map_err(|_| {
            Error::Config("bad q value".into())
        })?,
    };
    if let Some(q) = q {
        if scheme_str == "off" || scheme_str == "nsc" && args.scheme.is_none() {
            scheme_str = format!("off:{q}");
        } else if !scheme_str.starts_with("off") {
            return Err(Error::Config(format!(
                "--q only applies to the OFF scheme, not {scheme_str:?}"
            )));
        } else {
            scheme_str = format!("off:{q}");
        }
    }
    let scheme = CooperationScheme::from_str(&scheme_str)?;

    let association = match text(&args.association, "association", "fixed").as_str() {
        "fixed" => Association::FixedTransmitter { r0 },
        "closest" => Association::ClosestCluster,
        other => {
            return Err(Error::Config(format!(
                "unknown association {other:?} (expected fixed | closest)"
            )))
        }
    };
    let model = match text(&args.model, "model", "superposition").as_str() {
        "nn" => Model::NearestNeighbour,
        "superposition" => Model::Superposition,
        "baseline" => Model::NonCooperativeBaseline,
        other => {
            return Err(Error::Config(format!(
                "unknown model {other:?} (expected nn | superposition | baseline)"
            )))
        }
    };
    let format = match text(&args.format, "format", "csv").as_str() {
        "csv" => Format::Csv,
        "svg" => Format::Svg,
        "both" => Format::Both,
        other => {
            return Err(Error::Config(format!(
                "unknown format {other:?} (expected csv | svg | both)"
            )))
        }
    };

    let cfg = NetworkConfig::new(lambda, beta, power, sigma2, scheme, association)?;
    let consts = derive_constants(&cfg)?;

    let t_db: Vec<f64> = (0..t_steps)
        .map(|i| t_min_db + (t_max_db - t_min_db) * i as f64 / (t_steps - 1) as f64)
        .collect();
    let thresholds = t_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();

    let trials = match args.trials {
        Some(v) => v,
        None => match file.get("trials") {
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("bad trials: {s:?}")))?,
            None => 100_000,
        },
    };
    let seed = match args.seed {
        Some(v) => v,
        None => match file.get("seed") {
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("bad seed: {s:?}")))?,
            None => 1,
        },
    };

    Ok(Settings {
        cfg,
        consts,
        t_db,
        thresholds,
        trials,
        seed,
        window_radius: Some(num(args.window_radius, "window_radius", f64::NAN)?)
            .filter(|v| !v.is_nan()),
        guard_radius: Some(num(args.guard_radius, "guard_radius", f64::NAN)?)
            .filter(|v| !v.is_nan()),
        model,
        out: args
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".")),
        format,
    })
}

// ---------------------------------------------------------------------------
// CSV rows
// ---------------------------------------------------------------------------

struct Row {
    t_db: f64,
    t_linear: f64,
    coverage: f64,
    ci_low: f64,
    ci_high: f64,
    method: &'static str,
    model: String,
    scheme: String,
    association: &'static str,
}

fn association_name(a: &Association) -> &'static str {
    match a {
        Association::FixedTransmitter { .. } => "fixed",
        Association::ClosestCluster => "closest",
    }
}

fn rows_to_csv(rows: &[Row]) -> String {
    let mut out = String::from("t_db,t_linear,coverage,ci_low,ci_high,method,model,scheme,association\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.t_db, r.t_linear, r.coverage, r.ci_low, r.ci_high, r.method, r.model, r.scheme,
            r.association
        )
        .unwrap();
    }
    out
}

fn curve_rows(
    s: &Settings,
    curve: &CoverageCurve,
    model: Model,
    scheme: &str,
) -> Vec<Row> {
    s.t_db
        .iter()
        .zip(curve.estimates.iter().enumerate())
        .map(|(&db, (i, &p))| Row {
            t_db: db,
            t_linear: curve.thresholds[i],
            coverage: p,
            ci_low: curve.ci_low(i),
            ci_high: curve.ci_high(i),
            method: "simulation",
            model: model.name().to_string(),
            scheme: scheme.to_string(),
            association: association_name(&s.cfg.association),
        })
        .collect()
}

fn analytic_rows(s: &Settings, values: &[f64], model: &str, scheme: &str) -> Vec<Row> {
    s.t_db
        .iter()
        .zip(s.thresholds.iter().zip(values))
        .map(|(&db, (&t, &p))| Row {
            t_db: db,
            t_linear: t,
            coverage: p,
            ci_low: p,
            ci_high: p,
            method: "analytic",
            model: model.to_string(),
            scheme: scheme.to_string(),
            association: association_name(&s.cfg.association),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Analytic curve evaluation
// ---------------------------------------------------------------------------

/// Analytic superposition curve for the settings' association rule.
fn analytic_curve(
    s: &Settings,
    serving: &CooperationScheme,
    interference: &CooperationScheme,
) -> Result<Vec<f64>, Error> {
    let quad = QuadConfig::default();
    match s.cfg.association {
        Association::FixedTransmitter { r0 } => s
            .thresholds
            .iter()
            .map(|&t| coverage_fixed(t, r0, interference, &s.cfg, &s.consts, &quad))
            .collect(),
        Association::ClosestCluster => {
            let cov = ClosestCoverage::new(
                serving.clone(),
                interference.clone(),
                &s.cfg,
                &s.consts,
            )?;
            s.thresholds.iter().map(|&t| cov.coverage(t)).collect()
        }
    }
}

fn baseline_curve(s: &Settings) -> Result<Vec<f64>, Error> {
    let quad = QuadConfig::default();
    match s.cfg.association {
        Association::FixedTransmitter { r0 } => s
            .thresholds
            .iter()
            .map(|&t| noncooperative_fixed(t, r0, &s.cfg))
            .collect(),
        Association::ClosestCluster => s
            .thresholds
            .iter()
            .map(|&t| noncooperative_closest(t, &s.cfg, &quad))
            .collect(),
    }
}

fn make_plan(s: &Settings, model: Model) -> SimulationPlan {
    let mut plan = SimulationPlan::new(model, &s.cfg, s.thresholds.clone(), s.trials, s.seed);
    if let Some(w) = s.window_radius {
        plan.window_radius = w;
    }
    if let Some(g) = s.guard_radius {
        plan.guard_radius = g;
    }
    plan
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

fn write_outputs(
    s: &Settings,
    stem: &str,
    rows: &[Row],
    title: &str,
) -> Result<Vec<PathBuf>, Error> {
    write_outputs_to(&s.out, s.format, stem, rows, title)
}

fn write_outputs_to(
    dir: &Path,
    format: Format,
    stem: &str,
    rows: &[Row],
    title: &str,
) -> Result<Vec<PathBuf>, Error> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    if format.csv() {
        let path = dir.join(format!("{stem}.csv"));
        std::fs::write(&path, rows_to_csv(rows))
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    if format.svg() {
        // one series per (method, model, scheme) triple, in row order
        let mut series: Vec<svg::Series> = Vec::new();
        let mut keys: Vec<(String, String, String)> = Vec::new();
        for r in rows {
            let key = (r.method.to_string(), r.model.clone(), r.scheme.clone());
            let idx = match keys.iter().position(|k| *k == key) {
                Some(i) => i,
                None => {
                    keys.push(key.clone());
                    series.push(svg::Series {
                        label: format!("{} {} {}", key.1, key.2, key.0),
                        color: svg::color(keys.len() - 1),
                        dashed: key.0 == "analytic",
                        points: Vec::new(),
                    });
                    keys.len() - 1
                }
            };
            series[idx].points.push((r.t_db, r.coverage));
        }
        let path = dir.join(format!("{stem}.svg"));
        std::fs::write(&path, svg::line_chart(title, "SINR threshold (dB)", &series))
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_constants(s: &Settings) {
    let c = &s.consts;
    println!("lambda = {}", s.cfg.lambda);
    println!("gamma  = {:.6}", c.gamma);
    println!("delta  = {:.6}", c.delta);
    println!("alpha  = {:.6} km", c.alpha);
    println!("xi     = {:.6} km", c.xi);
    println!("zeta   = {:.6} km", c.zeta);
    println!("z2     = {:.6} km (nearest-daughter Rayleigh scale)", c.z2_scale());
}

fn cmd_analytic(s: &Settings) -> Result<(), Error> {
    let scheme = s.cfg.scheme.clone();
    let values = analytic_curve(s, &scheme, &scheme)?;
    let rows = analytic_rows(s, &values, "superposition", &scheme.name());
    let written = write_outputs(s, "analytic", &rows, "Analytic coverage")?;
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_simulate(s: &Settings) -> Result<(), Error> {
    let plan = make_plan(s, s.model);
    let curve = simulate_coverage(&plan, &s.cfg, &s.consts)?;
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    let rows = curve_rows(s, &curve, s.model, &s.cfg.scheme.name());
    let written = write_outputs(s, "simulate", &rows, "Monte Carlo coverage")?;
    eprintln!(
        "{} trials in {:.2?} ({} workers)",
        curve.trials,
        curve.elapsed,
        nncoop_core::monte_carlo::worker_count()
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_compare(s: &Settings) -> Result<(), Error> {
    let scheme = s.cfg.scheme.clone();
    let analytic = analytic_curve(s, &scheme, &scheme)?;
    let plan = make_plan(s, s.model);
    let mc = simulate_coverage(&plan, &s.cfg, &s.consts)?;
    let baseline = baseline_curve(s)?;

    let mut rows = analytic_rows(s, &analytic, "superposition", &scheme.name());
    rows.extend(curve_rows(s, &mc, s.model, &scheme.name()));
    rows.extend(analytic_rows(s, &baseline, "baseline", "none"));

    let mut max_gap = 0.0f64;
    let mut max_ci = 0.0f64;
    for i in 0..analytic.len() {
        max_gap = max_gap.max((analytic[i] - mc.estimates[i]).abs());
        max_ci = max_ci.max(mc.ci_half_widths[i]);
    }
    let written = write_outputs(s, "compare", &rows, "Analytic vs Monte Carlo")?;
    println!(
        "max |analytic - mc| = {max_gap:.5}, max CI half-width = {max_ci:.5} ({})",
        if max_gap <= max_ci {
            "within CI"
        } else {
            "OUTSIDE CI"
        }
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

/// The six figure recipes: model closeness (fixed/closest, beta = 3),
/// cooperation gains (fixed/closest, beta = 3), analytic-vs-MC appendix
/// checks (beta in {2.5, 4}, both associations).
fn cmd_figures(args: &CommonArgs) -> Result<(), Error> {
    let base = args.clone();
    let figures: Vec<(&str, &str, CommonArgs)> = vec![
        (
            "closeness-fixed",
            "NN model vs superposition, fixed transmitter",
            CommonArgs {
                beta: Some(base.beta.unwrap_or(3.0)),
                association: Some("fixed".into()),
                ..base.clone()
            },
        ),
        (
            "closeness-closest",
            "NN model vs superposition, closest cluster",
            CommonArgs {
                beta: Some(base.beta.unwrap_or(3.0)),
                association: Some("closest".into()),
                ..base.clone()
            },
        ),
        (
            "gains-fixed",
            "Cooperation gains, fixed transmitter",
            CommonArgs {
                beta: Some(base.beta.unwrap_or(3.0)),
                association: Some("fixed".into()),
                ..base.clone()
            },
        ),
        (
            "gains-closest",
            "Cooperation gains, closest cluster",
            CommonArgs {
                beta: Some(base.beta.unwrap_or(3.0)),
                association: Some("closest".into()),
                ..base.clone()
            },
        ),
        (
            "appendix-fixed",
            "Analytic vs Monte Carlo, fixed transmitter",
            CommonArgs {
                association: Some("fixed".into()),
                ..base.clone()
            },
        ),
        (
            "appendix-closest",
            "Analytic vs Monte Carlo, closest cluster",
            CommonArgs {
                association: Some("closest".into()),
                ..base.clone()
            },
        ),
    ];

    for (stem, title, mut fig_args) in figures {
        // figures lean on lighter default trial counts unless overridden
        if fig_args.trials.is_none() {
            fig_args.trials = Some(30_000);
        }
        fig_args.format = Some("both".into());
        let s = resolve(&fig_args)?;
        let rows = match stem {
            "closeness-fixed" | "closeness-closest" => figure_closeness(&s)?,
            "gains-fixed" => figure_gains_fixed(&s)?,
            "gains-closest" => figure_gains_closest(&s)?,
            _ => figure_appendix(&s)?,
        };
        let written = write_outputs(&s, stem, &rows, title)?;
        for p in written {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn figure_closeness(s: &Settings) -> Result<Vec<Row>, Error> {
    let scheme = CooperationScheme::Nsc;
    let analytic = analytic_curve(s, &scheme, &scheme)?;
    let nn = simulate_coverage(&make_plan(s, Model::NearestNeighbour), &s.cfg, &s.consts)?;
    let baseline = baseline_curve(s)?;
    let mut rows = analytic_rows(s, &analytic, "superposition", "nsc");
    rows.extend(curve_rows(s, &nn, Model::NearestNeighbour, "nsc"));
    rows.extend(analytic_rows(s, &baseline, "baseline", "none"));
    Ok(rows)
}

fn figure_gains_fixed(s: &Settings) -> Result<Vec<Row>, Error> {
    let mut rows = Vec::new();
    for scheme in [CooperationScheme::Nsc, CooperationScheme::Off { q: 0.5 }] {
        let values = analytic_curve(s, &scheme, &scheme)?;
        rows.extend(analytic_rows(s, &values, "superposition", &scheme.name()));
    }
    let baseline = baseline_curve(s)?;
    rows.extend(analytic_rows(s, &baseline, "baseline", "none"));
    Ok(rows)
}

fn figure_gains_closest(s: &Settings) -> Result<Vec<Row>, Error> {
    let mut rows = Vec::new();
    let nsc = analytic_curve(s, &CooperationScheme::Nsc, &CooperationScheme::Nsc)?;
    rows.extend(analytic_rows(s, &nsc, "superposition", "nsc"));
    // the composite: the serving pair picks its strongest member, interfering
    // pairs keep one member silent at random
    let max_off = analytic_curve(
        s,
        &CooperationScheme::Max,
        &CooperationScheme::Off { q: 0.5 },
    )?;
    rows.extend(analytic_rows(s, &max_off, "superposition", "max/off"));
    let baseline = baseline_curve(s)?;
    rows.extend(analytic_rows(s, &baseline, "baseline", "none"));
    Ok(rows)
}

fn figure_appendix(s: &Settings) -> Result<Vec<Row>, Error> {
    let mut rows = Vec::new();
    for beta in [2.5, 4.0] {
        let mut cfg = s.cfg.clone();
        cfg.beta = beta;
        let consts = derive_constants(&cfg)?;
        let sub = Settings {
            cfg,
            consts,
            t_db: s.t_db.clone(),
            thresholds: s.thresholds.clone(),
            trials: s.trials,
            seed: s.seed,
            window_radius: s.window_radius,
            guard_radius: s.guard_radius,
            model: Model::Superposition,
            out: s.out.clone(),
            format: s.format,
        };
        let scheme = CooperationScheme::Nsc;
        let analytic = analytic_curve(&sub, &scheme, &scheme)?;
        let mc = simulate_coverage(&make_plan(&sub, Model::Superposition), &sub.cfg, &sub.consts)?;
        let label = format!("nsc beta={beta}");
        rows.extend(analytic_rows(&sub, &analytic, "superposition", &label));
        rows.extend(
            curve_rows(&sub, &mc, Model::Superposition, &label)
                .into_iter()
                .collect::<Vec<_>>(),
        );
    }
    Ok(rows)
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Constants(args) => resolve(args).map(|s| cmd_constants(&s)),
        Cmd::Analytic(args) => resolve(args).and_then(|s| cmd_analytic(&s)),
        Cmd::Simulate(args) => resolve(args).and_then(|s| cmd_simulate(&s)),
        Cmd::Compare(args) => resolve(args).and_then(|s| cmd_compare(&s)),
        Cmd::Figures(args) => cmd_figures(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
