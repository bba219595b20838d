use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use insola::cpx::CRat;
use insola::finder::{FinderOptions, InitialCondition, Oracle};
use insola::hyper::{apply_ode, classify, Classification, Domain};
use insola::insola::{
    alpha_sweep, run_insola, InsolaConfig, InsolaReport, RecipeSource, RelationPoint,
};
use insola::parse::{parse_number, parse_ode, parse_recipe};
use insola::poly::{TriPoly, UniPoly};
use insola::transport::{check_transport, walk, TransportRule};
use insola_cli::points::{format_f64, write_points, PointRecord};
use insola_cli::svg::{self, Layer, Panel, MUTED, PALETTE};
use insola_cli::{is_real, reference_value};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "insola",
    version,
    about = "Polynomial ODE initial value problems via infinitesimal roots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the solution relation over a range of recipe degrees.
    Solve(SolveArgs),
    /// Step along a path, re-solving locally at each point.
    Walk(WalkArgs),
    /// Print the residual of a recipe and its class.
    Classify(ClassifyArgs),
    /// Classify a recipe carried to other centers by a transport rule.
    Transported(TransportedArgs),
    /// Repeat `solve` for several values of alpha*.
    Sweep(SweepArgs),
}

fn rational(s: &str) -> Result<CRat, String> {
    parse_number(s).map_err(|e| e.to_string())
}

fn rational_list(s: &str) -> Result<Vec<CRat>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(rational)
        .collect()
}

fn float_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect()
}

#[derive(Args)]
struct OdeArg {
    /// Equation F(z, y, x) = 0 with z = y'.
    #[arg(long, allow_hyphen_values = true)]
    ode: String,
}

#[derive(Args)]
struct SourceArgs {
    /// Use Taylor polynomials of a built-in solution instead of the finder.
    #[arg(long, conflicts_with_all = ["y0", "x0", "branch", "positive_slope"])]
    oracle: Option<Oracle>,
    /// Initial value y(x0).
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    y0: Option<CRat>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    x0: Option<CRat>,
    /// Which recipe to use when the finder returns several.
    #[arg(long, default_value_t = 0)]
    branch: usize,
    /// Keep only recipes with f'(0) > 0.
    #[arg(long)]
    positive_slope: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = insola::insola::DEFAULT_ALPHA_STAR)]
    alpha_star: f64,
    #[arg(long, default_value_t = insola::insola::DEFAULT_DEGREE_MIN)]
    min_degree: usize,
    #[arg(long, default_value_t = insola::insola::DEFAULT_DEGREE_MAX)]
    max_degree: usize,
    /// Drop roots that track roots of the standard part.
    #[arg(long)]
    filter: bool,
    /// Closed form to compare against; defaults to --oracle.
    #[arg(long)]
    reference: Option<Oracle>,
}

#[derive(Args)]
struct OutputArgs {
    /// Points CSV; written to stdout when no output is given.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    ode: OdeArg,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    ode: OdeArg,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated values of alpha*.
    #[arg(long, value_parser = float_list)]
    alphas: std::vec::Vec<f64>,
    /// Summary CSV; written to stdout when no output is given.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct WalkArgs {
    #[command(flatten)]
    ode: OdeArg,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    y0: CRat,
    /// Comma-separated step sizes.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_list, default_value = "")]
    steps: std::vec::Vec<CRat>,
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    positive_slope: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    ode: OdeArg,
    /// Recipe polynomial in x.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Identity,
    Shift,
    Scale,
}

impl From<Rule> for TransportRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Identity => TransportRule::Identity,
            Rule::Shift => TransportRule::Shift,
            Rule::Scale => TransportRule::Scale,
        }
    }
}

#[derive(Args)]
struct TransportedArgs {
    #[command(flatten)]
    ode: OdeArg,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, value_enum)]
    rule: Rule,
    /// Comma-separated centers.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_list)]
    probes: std::vec::Vec<CRat>,
    #[arg(long)]
    json: Option<PathBuf>,
}

enum Status {
    Done,
    Partial,
}

fn ode(arg: &OdeArg) -> Result<TriPoly> {
    parse_ode(&arg.ode).with_context(|| format!("--ode {:?}", arg.ode))
}

fn recipe(text: &str) -> Result<UniPoly> {
    parse_recipe(text).with_context(|| format!("--f {text:?}"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Writes to `path`, or to stdout when it is `None`.
fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    emit(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn config(ode: TriPoly, source: &SourceArgs, run: &RunArgs) -> Result<InsolaConfig> {
    let source = match source.oracle {
        Some(o) => RecipeSource::Oracle(o),
        None => {
            let Some(y0) = source.y0.clone() else {
                bail!("either --oracle or --y0 is required");
            };
            let x0 = source.x0.clone().unwrap_or_else(|| CRat::from_int(0));
            let mut options = FinderOptions::default();
            if source.positive_slope {
                options = options.positive_slope();
            }
            RecipeSource::Finder {
                ic: InitialCondition::new(x0, y0),
                branch: source.branch,
                options,
            }
        }
    };
    let mut cfg = InsolaConfig::new(ode, source);
    cfg.alpha_star = run.alpha_star;
    cfg.degree_min = run.min_degree;
    cfg.degree_max = run.max_degree;
    cfg.filter = run.filter;
    cfg.validate()?;
    Ok(cfg)
}

fn reference(source: &SourceArgs, run: &RunArgs) -> Option<Oracle> {
    run.reference.or(source.oracle)
}

fn report_failures(report: &InsolaReport) -> Status {
    for f in &report.failures {
        eprintln!("degree {}: {}", f.degree, f.error);
    }
    if report.is_partial() {
        Status::Partial
    } else {
        Status::Done
    }
}

fn print_fit(points: &[RelationPoint], oracle: Oracle) {
    let errs: Vec<f64> = points
        .iter()
        .filter(|p| p.survivor && p.t.norm() <= 1.0)
        .filter_map(|p| reference_value(oracle, p.t).map(|g| (p.value - g).norm()))
        .collect();
    let worst = errs.iter().copied().fold(0.0, f64::max);
    eprintln!(
        "{} survivors with |t| <= 1, max |f(t) - {oracle}(t)| = {worst:.3e}",
        errs.len()
    );
}

fn root_layers(points: &[RelationPoint]) -> Vec<Layer> {
    let pick = |survivor: bool| -> Vec<(f64, f64)> {
        points
            .iter()
            .filter(|p| p.survivor == survivor)
            .map(|p| (p.t.re, p.t.im))
            .collect()
    };
    let mut layers = Vec::new();
    let dropped = pick(false);
    if !dropped.is_empty() {
        layers.push(Layer {
            label: "filtered out".into(),
            color: MUTED.into(),
            radius: 1.5,
            points: dropped,
        });
    }
    layers.push(Layer {
        label: "roots".into(),
        color: PALETTE[0].into(),
        radius: 2.0,
        points: pick(true),
    });
    layers
}

fn solve_svg(
    path: &Path,
    title: &str,
    points: &[RelationPoint],
    oracle: Option<Oracle>,
) -> Result<()> {
    let real: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.survivor && is_real(p.t))
        .map(|p| (p.t.re, p.value.re))
        .collect();
    let curve = |x: f64| {
        oracle
            .and_then(|o| reference_value(o, x.into()))
            .map(|v| v.re)
    };
    let name = oracle.map(|o| o.name()).unwrap_or_default();
    let panels = [
        Panel {
            title: "roots t*".into(),
            x_label: "Re t*".into(),
            y_label: "Im t*".into(),
            layers: root_layers(points),
            reference: None,
        },
        Panel {
            title: "real roots".into(),
            x_label: "t*".into(),
            y_label: "Re f(t*)".into(),
            layers: vec![Layer {
                label: "f(t*)".into(),
                color: PALETTE[1].into(),
                radius: 2.0,
                points: real,
            }],
            reference: oracle.map(|_| (name, &curve as &dyn Fn(f64) -> Option<f64>)),
        },
    ];
    let mut w = create(path)?;
    w.write_all(svg::render(title, &panels).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<Status> {
    let cfg = config(ode(&args.ode)?, &args.source, &args.run)?;
    let report = run_insola(&cfg)?;
    let status = report_failures(&report);
    if report.points.is_empty() && !report.failures.is_empty() {
        bail!("no degree produced points");
    }
    let oracle = reference(&args.source, &args.run);
    if let Some(o) = oracle {
        print_fit(&report.points, o);
    }
    let out = &args.output;
    if out.out.is_some() || (out.json.is_none() && out.svg.is_none()) {
        emit(out.out.as_deref(), |w| Ok(write_points(w, &report.points)?))?;
    }
    if let Some(path) = &out.json {
        let records: Vec<PointRecord> = report
            .points
            .iter()
            .map(|p| PointRecord::new(p, oracle.and_then(|o| reference_value(o, p.t))))
            .collect();
        write_json(Some(path), &serde_json::to_value(records)?)?;
    }
    if let Some(path) = &out.svg {
        let title = format!("{}, alpha* = {:e}", args.ode.ode, cfg.alpha_star);
        solve_svg(path, &title, &report.points, oracle)?;
    }
    Ok(status)
}

fn cmd_sweep(args: &SweepArgs) -> Result<Status> {
    if args.alphas.is_empty() {
        bail!("--alphas needs at least one value");
    }
    let cfg = config(ode(&args.ode)?, &args.source, &args.run)?;
    let sweep = alpha_sweep(&cfg, &args.alphas)?;
    let mut status = Status::Done;
    for s in &sweep {
        if let Status::Partial = report_failures(&s.report) {
            status = Status::Partial;
        }
    }
    let rows: Vec<[String; 4]> = sweep
        .iter()
        .map(|s| {
            [
                format_f64(s.alpha_star),
                format_f64(s.max_survivor_modulus),
                s.report.survivors().count().to_string(),
                s.report.points.len().to_string(),
            ]
        })
        .collect();
    if args.out.is_some() || (args.json.is_none() && args.svg.is_none()) {
        emit(args.out.as_deref(), |w| {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["alpha_star", "max_survivor_modulus", "survivors", "points"])?;
            for r in &rows {
                c.write_record(r)?;
            }
            c.flush()?;
            Ok(())
        })?;
    }
    if let Some(path) = &args.json {
        let value: Vec<_> = sweep
            .iter()
            .map(|s| {
                json!({
                    "alpha_star": s.alpha_star,
                    "max_survivor_modulus": s.max_survivor_modulus,
                    "survivors": s.report.survivors().count(),
                    "points": s.report.points.len(),
                })
            })
            .collect();
        write_json(Some(path), &json!(value))?;
    }
    if let Some(path) = &args.svg {
        let layers = sweep
            .iter()
            .enumerate()
            .map(|(i, s)| Layer {
                label: format!("alpha* = {:e}", s.alpha_star),
                color: PALETTE[i % PALETTE.len()].into(),
                radius: 2.0,
                points: s.report.survivors().map(|p| (p.t.re, p.t.im)).collect(),
            })
            .collect();
        let panel = Panel {
            title: "surviving roots t*".into(),
            x_label: "Re t*".into(),
            y_label: "Im t*".into(),
            layers,
            reference: None,
        };
        let mut w = create(path)?;
        w.write_all(svg::render(&args.ode.ode, &[panel]).as_bytes())?;
        w.flush()?;
    }
    Ok(status)
}

fn cmd_walk(args: &WalkArgs) -> Result<Status> {
    let mut opts = FinderOptions::default();
    if args.positive_slope {
        opts = opts.positive_slope();
    }
    let trace = walk(&ode(&args.ode)?, &args.y0, &args.steps, args.degree, &opts)?;
    let rows: Vec<[String; 6]> = trace
        .entries
        .iter()
        .map(|e| {
            let v = e.value.to_complex64();
            [
                e.t.to_string(),
                e.value.to_string(),
                format_f64(v.re),
                format_f64(v.im),
                e.step.to_string(),
                trace.degree.to_string(),
            ]
        })
        .collect();
    if args.out.is_some() || args.json.is_none() {
        emit(args.out.as_deref(), |w| {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["t", "value_exact", "value_re", "value_im", "step", "degree"])?;
            for r in &rows {
                c.write_record(r)?;
            }
            c.flush()?;
            Ok(())
        })?;
    }
    if let Some(path) = &args.json {
        let value: Vec<_> = trace
            .entries
            .iter()
            .map(|e| {
                json!({
                    "t": e.t.to_string(),
                    "value_exact": e.value.to_string(),
                    "recipe": e.recipe.f.to_string(),
                    "step": e.step.to_string(),
                })
            })
            .collect();
        write_json(
            Some(path),
            &json!({ "degree": trace.degree, "entries": value }),
        )?;
    }
    Ok(Status::Done)
}

fn class_json(class: &Classification) -> serde_json::Value {
    let mut v = json!({ "tag": class.tag(), "g": class.g().to_string() });
    match class {
        Classification::HyperSolution { .. } => {}
        Classification::HyperTaylor { r, n, .. } => {
            v["r"] = json!(r.to_string());
            v["n"] = json!(n);
        }
        Classification::HyperLocal { p, .. } | Classification::None { p, .. } => {
            v["p"] = json!(p.to_string());
        }
    }
    v["domain"] = match class.domain() {
        Some(Domain::AllFinite) => json!("AllFinite"),
        Some(Domain::InfinitesimalOnly) => json!("InfinitesimalOnly"),
        None => json!(null),
    };
    v
}

fn cmd_classify(args: &ClassifyArgs) -> Result<Status> {
    let residual = apply_ode(&ode(&args.ode)?, &recipe(&args.f)?);
    let mut value = class_json(&classify(&residual));
    value["residual"] = json!(residual.to_string());
    write_json(None, &value)?;
    if let Some(path) = &args.json {
        write_json(Some(path), &value)?;
    }
    Ok(Status::Done)
}

fn cmd_transported(args: &TransportedArgs) -> Result<Status> {
    if args.probes.is_empty() {
        bail!("--probes needs at least one center");
    }
    let classes = check_transport(
        &ode(&args.ode)?,
        &recipe(&args.f)?,
        args.rule.into(),
        &args.probes,
    )?;
    let value: Vec<_> = args
        .probes
        .iter()
        .zip(&classes)
        .map(|(x0, c)| {
            let mut v = class_json(c);
            v["x0"] = json!(x0.to_string());
            v
        })
        .collect();
    let value = json!(value);
    write_json(None, &value)?;
    if let Some(path) = &args.json {
        write_json(Some(path), &value)?;
    }
    Ok(Status::Done)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Walk(a) => cmd_walk(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Transported(a) => cmd_transported(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Partial) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
