//! `thermalent` command-line interface.
//!
//! Results go to stdout (or `--out`) as JSON or CSV with floats rounded to
//! 12 significant digits, so identical parameters give identical bytes. A
//! run manifest with the resolved parameters and wall time goes to stderr
//! (or `--manifest`). Exit codes: 0 success, 2 invalid input, 1 internal
//! failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use thermalent::dynamics::suggested_n_max;
use thermalent::geometry::{embed, hull_volume_fraction};
use thermalent::{
    critical_temps_general, critical_temps_thermal, curve, future_cone, is_thermally_entanglable, jc_protocol,
    make_context, mtp_entangle_search, tne_boundary, verify_catalysis, volume_of, Beta, GibbsContext, InitialState,
    JcConfig, PopVector, SearchStrategy, SetId,
};

use output::{to_json, Table};

#[derive(Parser, Debug)]
#[command(name = "thermalent", version, about = "Entanglability of qubit states under thermal operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the run manifest here instead of stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Rescale input states that do not sum to 1.
    #[arg(long, global = true)]
    renorm: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Subspace and thermal entanglability of a two-qubit state.
    Classify(ClassifyArgs),
    /// Extreme points of the future thermal cone.
    Cone(SpectrumArgs),
    /// Thermomajorization curve elbows.
    Curve(SpectrumArgs),
    /// Monte Carlo volume of E, NE, TNE or an entangled cone section.
    Volume(VolumeArgs),
    /// Bisection boundary of the thermally non-entanglable set.
    Boundary(BoundaryArgs),
    /// Critical inverse temperatures.
    CriticalTemp(CriticalArgs),
    /// Jaynes-Cummings preconditioning protocol over a range of βE.
    Jc(JcArgs),
    /// Search over partial-thermalization schedules.
    Mtp(MtpArgs),
    /// Exact check of the catalysis example.
    CatalysisDemo,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Cone(_) => "cone",
            Command::Curve(_) => "curve",
            Command::Volume(_) => "volume",
            Command::Boundary(_) => "boundary",
            Command::CriticalTemp(_) => "critical-temp",
            Command::Jc(_) => "jc",
            Command::Mtp(_) => "mtp",
            Command::CatalysisDemo => "catalysis-demo",
        }
    }
}

fn parse_beta(s: &str) -> Result<Beta, String> {
    s.parse::<Beta>().map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b] => Ok((a.parse().map_err(|_| format!("bad number '{a}'"))?, b.parse().map_err(|_| format!("bad number '{b}'"))?)),
        _ => Err(format!("expected a:b, got '{s}'")),
    }
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => Ok((
            a.parse().map_err(|_| format!("bad number '{a}'"))?,
            b.parse().map_err(|_| format!("bad number '{b}'"))?,
            n.parse().map_err(|_| format!("bad count '{n}'"))?,
        )),
        _ => Err(format!("expected a:b:n, got '{s}'")),
    }
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    /// Populations of |00⟩, |01⟩, |10⟩, |11⟩, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    state: Vec<f64>,
    /// Ambient inverse temperature (a number or "inf").
    #[arg(long, value_parser = parse_beta)]
    beta: Beta,
    /// Single-qubit energy gap.
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
}

#[derive(Args, Debug, Serialize)]
struct SpectrumArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    state: Vec<f64>,
    #[arg(long, value_parser = parse_beta)]
    beta: Beta,
    /// Two-qubit gap; ignored when --energies is given.
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
    /// Arbitrary level energies, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    energies: Option<Vec<f64>>,
}

#[derive(Args, Debug, Serialize)]
struct VolumeArgs {
    /// E, NE, TNE or ENT_CONE.
    #[arg(long)]
    set: String,
    #[arg(long, value_parser = parse_beta, default_value = "0")]
    beta: Beta,
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
    /// Cone origin for ENT_CONE.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    state: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, env = "THERMALENT_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct BoundaryArgs {
    #[arg(long, value_parser = parse_beta, default_value = "0")]
    beta: Beta,
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
    /// Lattice resolution of the simplex boundary.
    #[arg(long, default_value_t = 30)]
    grid: usize,
    /// Bisection steps per grid point.
    #[arg(long, default_value_t = 30)]
    iters: usize,
    /// Also write the convex hull as a Wavefront OBJ file.
    #[arg(long)]
    mesh: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CriticalArgs {
    /// Inverse temperature of a thermal initial state.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    beta_s: Option<f64>,
    /// Arbitrary initial state; critical points are found by scanning.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    state: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
    /// Scan interval a:b of β for --state.
    #[arg(long, value_parser = parse_range, default_value = "0:10")]
    range: (f64, f64),
    /// Scan points for --state.
    #[arg(long, default_value_t = 2000)]
    scan: usize,
}

#[derive(Args, Debug, Serialize)]
struct JcArgs {
    /// Initial two-qubit state: 00 or 11.
    #[arg(long)]
    initial: String,
    /// βE grid a:b:n.
    #[arg(long = "betaE-range", value_parser = parse_grid)]
    beta_e_range: (f64, f64, usize),
    /// Fock cutoff (default: smallest with tail mass below 1e-8, per βE).
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
    #[arg(long, default_value_t = 2048)]
    time_grid: usize,
    /// Allow βE below 0.2, where truncation dominates.
    #[arg(long)]
    allow_small_beta_e: bool,
}

#[derive(Args, Debug, Serialize)]
struct MtpArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    state: Vec<f64>,
    #[arg(long, value_parser = parse_beta)]
    beta: Beta,
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
    /// greedy or beam.
    #[arg(long, default_value = "greedy")]
    strategy: String,
    /// Candidate evaluations allowed.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<thermalent::Error> for Failure {
    fn from(e: thermalent::Error) -> Self {
        match e {
            thermalent::Error::CatalysisFailed(_) => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<(Value, Table), Failure>;

fn state(probs: &[f64], renorm: bool) -> Result<PopVector, thermalent::Error> {
    if renorm {
        PopVector::renormalized(probs.to_vec())
    } else {
        PopVector::new(probs.to_vec())
    }
}

fn one_based(levels: &[usize]) -> Vec<usize> {
    levels.iter().map(|i| i + 1).collect()
}

fn level_columns(prefix: &str, d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("{prefix}{i}")).collect()
}

fn floats(v: &[f64]) -> Vec<Value> {
    v.iter().map(|x| json!(x)).collect()
}

fn classify(a: &ClassifyArgs, renorm: bool) -> CmdResult {
    let ctx = GibbsContext::two_qubit(a.gap, a.beta)?;
    let p = state(&a.state, renorm)?;
    let r = is_thermally_entanglable(&p, &ctx)?;
    let mut header = vec!["f_value", "f_star", "in_E", "in_TE", "max_negativity", "optimal_theta"];
    let star_cols = level_columns("pi_star_p", 4);
    header.extend(star_cols.iter().map(String::as_str));
    let mut t = Table::new(&header);
    let mut row = vec![json!(r.f_value), json!(r.f_star), json!(r.in_e), json!(r.in_te), json!(r.max_negativity), json!(r.optimal_theta)];
    row.extend(floats(r.pi_star_point.as_slice()));
    t.push(row);
    Ok((serde_json::to_value(&r).expect("report serializes"), t))
}

fn spectrum_context(a: &SpectrumArgs) -> Result<GibbsContext, thermalent::Error> {
    match &a.energies {
        Some(e) => make_context(e.clone(), a.beta),
        None => GibbsContext::two_qubit(a.gap, a.beta),
    }
}

fn cone(a: &SpectrumArgs, renorm: bool) -> CmdResult {
    let ctx = spectrum_context(a)?;
    let p = state(&a.state, renorm)?;
    let c = future_cone(&p, &ctx)?;
    let mut header = vec!["ordering".to_string()];
    header.extend(level_columns("p", p.dim()));
    let mut t = Table { header, rows: Vec::new() };
    let mut ext = Vec::new();
    for (order, q) in c.extremes() {
        ext.push(json!({"ordering": order.one_based(), "point": q.as_slice()}));
        let mut row = vec![json!(order.to_string())];
        row.extend(floats(q.as_slice()));
        t.push(row);
    }
    let v = json!({"origin": p.as_slice(), "beta": ctx.beta(), "n_extremes": ext.len(), "extremes": ext});
    Ok((v, t))
}

fn curve_cmd(a: &SpectrumArgs, renorm: bool) -> CmdResult {
    let ctx = spectrum_context(a)?;
    let p = state(&a.state, renorm)?;
    let c = curve(&p, &ctx)?;
    let mut t = Table::new(&["x", "y"]);
    for &(x, y) in c.elbows() {
        t.push(vec![json!(x), json!(y)]);
    }
    let order = thermalent::beta_order(&p, &ctx)?;
    let v = json!({"beta_ordering": order.one_based(), "elbows": c.elbows()});
    Ok((v, t))
}

fn volume(a: &VolumeArgs, renorm: bool) -> CmdResult {
    let set: SetId = a.set.parse()?;
    let ctx = GibbsContext::two_qubit(a.gap, a.beta)?;
    let origin = a.state.as_deref().map(|s| state(s, renorm)).transpose()?;
    let v = volume_of(set, &ctx, origin.as_ref(), a.samples, a.seed)?;
    let mut t = Table::new(&["set", "beta", "fraction", "std_error", "n_samples", "seed"]);
    t.push(vec![json!(set.to_string()), json!(ctx.beta()), json!(v.fraction), json!(v.std_error), json!(v.n_samples), json!(v.seed)]);
    let mut out = json!({"set": set.to_string(), "beta": ctx.beta()});
    let est = serde_json::to_value(&v).expect("estimate serializes");
    out.as_object_mut().unwrap().extend(est.as_object().unwrap().clone());
    Ok((out, t))
}

fn boundary(a: &BoundaryArgs) -> CmdResult {
    let ctx = GibbsContext::two_qubit(a.gap, a.beta)?;
    let cloud = tne_boundary(&ctx, a.grid, a.iters)?;
    let mut t = Table::new(&["p1", "p2", "p3", "p4", "x", "y", "z"]);
    for b in &cloud.points {
        let mut row = floats(b.point.as_slice());
        row.extend(floats(&embed(&b.point)));
        t.push(row);
    }
    let hull = if cloud.points.len() >= 4 {
        let mesh = thermalent::convex_hull_export(&cloud)?;
        if let Some(path) = &a.mesh {
            std::fs::write(path, mesh.to_obj()).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
        }
        Some(hull_volume_fraction(&cloud)?)
    } else {
        None
    };
    let points: Vec<&[f64]> = cloud.points.iter().map(|b| b.point.as_slice()).collect();
    let v = json!({
        "beta": ctx.beta(),
        "grid_resolution": cloud.grid_resolution,
        "iterations": cloud.iterations,
        "n_points": points.len(),
        "hull_volume_fraction": hull,
        "points": points,
    });
    Ok((v, t))
}

fn critical(a: &CriticalArgs, renorm: bool) -> CmdResult {
    if let Some(bs) = a.beta_s {
        let ct = critical_temps_thermal(bs, a.gap)?;
        let mut t = Table::new(&["beta_c1", "beta_c2", "approx_c1", "approx_c2"]);
        t.push(vec![json!(ct.beta_c1), json!(ct.beta_c2), json!(ct.approx_c1), json!(ct.approx_c2)]);
        return Ok((serde_json::to_value(&ct).expect("temps serialize"), t));
    }
    let p = state(a.state.as_deref().expect("clap enforces --state or --beta-s"), renorm)?;
    let roots = critical_temps_general(&p, a.gap, a.range, a.scan)?;
    let mut t = Table::new(&["beta_c"]);
    for r in &roots {
        t.push(vec![json!(r)]);
    }
    Ok((json!({"state": p.as_slice(), "range": [a.range.0, a.range.1], "roots": roots}), t))
}

const MIN_BETA_E: f64 = 0.2;

fn jc(a: &JcArgs) -> CmdResult {
    let initial: InitialState = a.initial.parse()?;
    let (lo, hi, n) = a.beta_e_range;
    if n == 0 || !(lo <= hi) || (n == 1 && lo != hi) {
        return Err(Failure::Invalid(format!("invalid βE grid {lo}:{hi}:{n}")));
    }
    if lo < MIN_BETA_E && !a.allow_small_beta_e {
        return Err(Failure::Invalid(format!("βE = {lo} is below {MIN_BETA_E}; pass --allow-small-beta-e to override")));
    }
    let grid: Vec<f64> = (0..n).map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect();
    let results: Vec<_> = grid
        .par_iter()
        .map(|&be| {
            let cfg = JcConfig {
                initial,
                beta_e: be,
                n_max: a.nmax.unwrap_or_else(|| if be > 0.0 { suggested_n_max(be) } else { 0 }),
                coupling: a.coupling,
                time_grid: a.time_grid,
            };
            jc_protocol(&cfg)
        })
        .collect::<Result<_, _>>()?;
    let mut t = Table::new(&["beta_e", "optimal_time", "ground_pop", "negativity"]);
    for r in &results {
        t.push(vec![json!(r.beta_e), json!(r.optimal_time), json!(r.ground_pop), json!(r.negativity)]);
    }
    Ok((json!({"initial": initial, "results": results}), t))
}

fn mtp(a: &MtpArgs, renorm: bool) -> CmdResult {
    let ctx = GibbsContext::two_qubit(a.gap, a.beta)?;
    let p = state(&a.state, renorm)?;
    let strategy: SearchStrategy = a.strategy.parse()?;
    let r = mtp_entangle_search(&p, &ctx, strategy, a.budget)?;
    let mut t = Table::new(&["step", "level_i", "level_j", "lambda", "p1", "p2", "p3", "p4", "f"]);
    let f = |q: &PopVector| thermalent::witness_f(q).expect("two-qubit state");
    let mut row = vec![json!(0), Value::Null, Value::Null, Value::Null];
    row.extend(floats(r.trajectory[0].as_slice()));
    row.push(json!(f(&r.trajectory[0])));
    t.push(row);
    let mut steps = Vec::new();
    for (k, (s, q)) in r.schedule.steps.iter().zip(&r.trajectory[1..]).enumerate() {
        let pair = one_based(&[s.pair.0, s.pair.1]);
        steps.push(json!({"pair": pair, "lambda": s.lambda}));
        let mut row = vec![json!(k + 1), json!(pair[0]), json!(pair[1]), json!(s.lambda)];
        row.extend(floats(q.as_slice()));
        row.push(json!(f(q)));
        t.push(row);
    }
    let trajectory: Vec<&[f64]> = r.trajectory.iter().map(|q| q.as_slice()).collect();
    let v = json!({
        "strategy": strategy,
        "best_f": r.best_f,
        "entangling": r.best_f < -thermalent::TAU_F,
        "schedule": steps,
        "trajectory": trajectory,
        "evaluations": r.evaluations,
    });
    Ok((v, t))
}

fn catalysis() -> CmdResult {
    let r = verify_catalysis()?;
    let mut v = json!({"status": if r.pass { "PASS" } else { "FAIL" }});
    v.as_object_mut().unwrap().extend(serde_json::to_value(&r).expect("report serializes").as_object().unwrap().clone());
    let mut t = Table::new(&["check", "value"]);
    for (k, val) in v.as_object().unwrap() {
        t.push(vec![json!(k), val.clone()]);
    }
    Ok((v, t))
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Internal(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(Failure::Invalid("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let start = Instant::now();
    let renorm = cli.common.renorm;
    let (value, table) = match &cli.command {
        Command::Classify(a) => classify(a, renorm)?,
        Command::Cone(a) => cone(a, renorm)?,
        Command::Curve(a) => curve_cmd(a, renorm)?,
        Command::Volume(a) => volume(a, renorm)?,
        Command::Boundary(a) => boundary(a)?,
        Command::CriticalTemp(a) => critical(a, renorm)?,
        Command::Jc(a) => jc(a)?,
        Command::Mtp(a) => mtp(a, renorm)?,
        Command::CatalysisDemo => catalysis()?,
    };
    let text = match cli.common.format {
        Format::Json => to_json(value),
        Format::Csv => table.render(),
    };
    write_out(cli.common.out.as_ref(), &text)?;

    let seed = match &cli.command {
        Command::Volume(a) => Some(a.seed),
        _ => None,
    };
    let manifest = json!({
        "tool": "thermalent",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": cli.command.name(),
        "parameters": &cli.command,
        "options": &cli.common,
        "seed": seed,
        "threads": rayon::current_num_threads(),
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    let line = serde_json::to_string(&manifest).expect("manifest serializes") + "\n";
    match &cli.common.manifest {
        Some(p) => std::fs::write(p, line).map_err(|e| Failure::Internal(format!("{}: {e}", p.display())))?,
        None => eprint!("{line}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            if cli.command.name() == "catalysis-demo" {
                println!("{}", serde_json::to_string_pretty(&json!({"status": "FAIL", "error": msg})).unwrap());
            }
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
