//! `tighthc`: generate 3-graphs, run the construction stages, and check
//! certificates.
//!
//! Exit codes: 0 on success, 1 on an honest negative (no path, no cycle,
//! cover too sparse, denseness witness found, certificate rejected), 2 on
//! usage or input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

use tighthc::absorb::{absorber_density, count_absorbers};
use tighthc::connect::{connect_pair, ConnectorParams};
use tighthc::density::{falsify_cherry, DensityParams, DensityWitness, FalsifyBudget};
use tighthc::format::{check_certificate, parse_certificate, parse_edge_list, write_certificate, write_edge_list};
use tighthc::generate::{self, GenKind};
use tighthc::oracle;
use tighthc::pathcover::{greedy_cover, CoverError, CoverParams};
use tighthc::pipeline::{find_tight_hamilton, AbsorptionMode, PipelineParams};
use tighthc::seed::stage_rng;
use tighthc::shave::shave_graph;
use tighthc::{PathEnd, Scalar, ThreeGraph, VertexSet};

#[derive(Parser)]
#[command(name = "tighthc", version, about = "Tight Hamilton cycles in dense 3-graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated 3-graph as an edge list.
    Gen(GenArgs),
    /// Search for a cherry-denseness violation.
    Density(DensityArgs),
    /// Shave to the codegree dichotomy and report what was removed.
    Shave(ShaveArgs),
    /// Count the absorbers of a vertex.
    Absorbers(AbsorberArgs),
    /// Find a connector between two ordered pairs.
    Connect(ConnectArgs),
    /// Cover the vertices by disjoint tight paths.
    Cover(CoverArgs),
    /// Run the full construction and write a certificate.
    Hamilton(HamiltonArgs),
    /// Check a certificate against a graph.
    Verify(VerifyArgs),
    /// Decide tight Hamiltonicity exactly (small graphs only).
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Complete,
    TightCycle,
    Split,
    SingleAbsorber,
}

impl From<Kind> for GenKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Random => GenKind::Random,
            Kind::Complete => GenKind::Complete,
            Kind::TightCycle => GenKind::TightCycle,
            Kind::Split => GenKind::Split,
            Kind::SingleAbsorber => GenKind::SingleAbsorber,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Edge list to read; stdin when absent or `-`.
    input: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Number of vertices; the gadget always has 5.
    #[arg(short, long)]
    n: Option<usize>,
    /// Edge probability for `random`.
    #[arg(short, long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
    /// Recount the witness in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct ShaveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    rho: f64,
    /// Write the shaved graph here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AbsorberArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    vertex: usize,
}

#[derive(Args)]
struct ConnectArgs {
    #[command(flatten)]
    common: Common,
    /// Start end as `inner,outer`.
    #[arg(long, value_parser = parse_end)]
    from: PathEnd,
    /// Target end as `inner,outer`.
    #[arg(long, value_parser = parse_end)]
    to: PathEnd,
    #[arg(long, default_value_t = 6)]
    internal_len: usize,
    /// Waypoint codegree threshold, as an absolute count.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Shave at this density first and measure waypoints in the result.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long, default_value_t = 0.02)]
    rho: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.05)]
    zeta: f64,
    #[arg(long, default_value_t = 20)]
    l0: usize,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Reserved,
    InCycle,
}

#[derive(Args)]
struct HamiltonArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    d: f64,
    #[arg(long, default_value_t = 0.02)]
    rho: f64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.15)]
    sigma: f64,
    #[arg(long, default_value_t = 0.05)]
    zeta: f64,
    #[arg(long, default_value_t = 20)]
    l0: usize,
    /// Assembly waypoint threshold as a fraction of `|A*|`; `d/20` by default.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    internal_len: usize,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Leave the graph out of the certificate.
    #[arg(long)]
    no_graph: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate to read; stdin when absent or `-`.
    certificate: Option<PathBuf>,
    /// Check against this edge list instead of the embedded graph.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
    cap: usize,
}

fn parse_end(s: &str) -> Result<PathEnd, String> {
    let (a, b) = s.split_once(',').ok_or("expected `inner,outer`")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok(PathEnd::new(p(a)?, p(b)?))
}

/// A finished command: exit status and what to print.
struct Outcome {
    ok: bool,
    text: String,
}

impl Outcome {
    fn new(ok: bool, json: bool, value: serde_json::Value, text: String) -> Self {
        let text = if json { format!("{value}\n") } else { text };
        Outcome { ok, text }
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_graph(path: Option<&Path>) -> Result<ThreeGraph> {
    Ok(parse_edge_list(&read_input(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn witness_json<S: Scalar>(w: &DensityWitness<S>) -> serde_json::Value {
    json!({
        "kind": w.objects.kind(),
        "observed": w.observed,
        "size": w.size,
        "bound": w.bound.to_string(),
        "deficit": w.deficit.to_string(),
    })
}

fn density(a: &DensityArgs) -> Result<Outcome> {
    let g = read_graph(a.common.input.as_deref())?;
    let budget = FalsifyBudget { restarts: a.restarts, iterations: a.iterations };
    let mut rng = stage_rng(a.seed, "cli.density");
    let found = if a.exact {
        let to_ratio = |x: f64| Ratio::<i64>::approximate_float(x).context("parameter not representable");
        let p = DensityParams::new(to_ratio(a.d)?, to_ratio(a.rho)?)?;
        falsify_cherry(&g, &p, budget, &mut rng).map(|w| witness_json(&w))
    } else {
        let p = DensityParams::new(a.d, a.rho)?;
        falsify_cherry(&g, &p, budget, &mut rng).map(|w| witness_json(&w))
    };
    Ok(match found {
        Some(w) => Outcome::new(
            false,
            a.common.json,
            json!({ "dense": false, "witness": w }),
            format!(
                "violated: {} witness, observed {} edges against bound {} (deficit {})\n",
                w["kind"].as_str().unwrap_or("?"),
                w["observed"],
                w["bound"].as_str().unwrap_or("?"),
                w["deficit"].as_str().unwrap_or("?")
            ),
        ),
        None => Outcome::new(
            true,
            a.common.json,
            json!({ "dense": true, "witness": null }),
            "no witness found\n".into(),
        ),
    })
}

fn shave(a: &ShaveArgs) -> Result<Outcome> {
    let g = read_graph(a.common.input.as_deref())?;
    match shave_graph(&g, a.d, a.rho) {
        Ok((res, low)) => {
            if let Some(out) = &a.out {
                emit(Some(out), &write_edge_list(&res.subgraph))?;
            }
            let stats = res.stats(low);
            let text = format!(
                "removed {} edges, {} pairs now codegree 0, threshold {:.3}, {} low pairs before\n",
                stats.removed_edges, stats.zeroed_pairs, stats.threshold_used, stats.low_pairs
            );
            Ok(Outcome::new(true, a.common.json, serde_json::to_value(&stats)?, text))
        }
        Err(e) => Ok(Outcome::new(false, a.common.json, json!({ "error": e.to_string() }), format!("{e}\n"))),
    }
}

fn absorbers(a: &AbsorberArgs) -> Result<Outcome> {
    let g = read_graph(a.common.input.as_deref())?;
    if a.vertex >= g.n() {
        bail!("vertex {} out of range for n = {}", a.vertex, g.n());
    }
    let count = count_absorbers(&g, a.vertex);
    let density = absorber_density(&g, a.vertex);
    Ok(Outcome::new(
        count > 0,
        a.common.json,
        json!({ "vertex": a.vertex, "count": count, "density": density }),
        format!("vertex {}: {count} absorbers (density {density:.6})\n", a.vertex),
    ))
}

fn connect(a: &ConnectArgs) -> Result<Outcome> {
    let g = read_graph(a.common.input.as_deref())?;
    let shaved;
    let hp = match a.d {
        Some(d) => {
            shaved = shave_graph(&g, d, a.rho)?.0.subgraph;
            &shaved
        }
        None => &g,
    };
    let p = ConnectorParams::new(a.internal_len, a.beta);
    let none = VertexSet::new(g.n());
    match connect_pair(&g, hp, a.from, a.to, &none, &p, &mut stage_rng(a.seed, "cli.connect")) {
        Ok(path) => {
            let v = path.vertices();
            let text = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n";
            Ok(Outcome::new(true, a.common.json, json!({ "path": v }), text))
        }
        Err(e) => Ok(Outcome::new(false, a.common.json, json!({ "error": e.to_string() }), format!("{e}\n"))),
    }
}

fn cover(a: &CoverArgs) -> Result<Outcome> {
    let g = read_graph(a.common.input.as_deref())?;
    let p = CoverParams { zeta: a.zeta, l0: a.l0, restarts: a.restarts, seed: a.seed };
    let (ok, res) = match greedy_cover(&g, &p) {
        Ok(r) => (true, r),
        Err(CoverError::CoverTooSparse { best, .. }) => (false, *best),
        Err(e) => return Err(e.into()),
    };
    let paths: Vec<&[usize]> = res.paths.iter().map(|p| p.vertices()).collect();
    let leftover = res.leftover.to_vec();
    let mut text = format!("{} paths, {} uncovered\n", paths.len(), leftover.len());
    for p in &paths {
        text += &p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        text.push('\n');
    }
    Ok(Outcome::new(ok, a.common.json, json!({ "ok": ok, "paths": paths, "leftover": leftover }), text))
}

fn hamilton(a: &HamiltonArgs) -> Result<Outcome> {
    let g = read_graph(a.common.input.as_deref())?;
    let base = PipelineParams::new(a.d, a.rho);
    let p = PipelineParams {
        alpha: a.alpha.unwrap_or(base.alpha),
        sigma: a.sigma,
        zeta: a.zeta,
        l0: a.l0,
        beta_connect: a.beta.unwrap_or(base.beta_connect),
        internal_len: a.internal_len,
        seed: a.seed,
        mode: match a.mode {
            Mode::Auto => AbsorptionMode::Auto,
            Mode::Reserved => AbsorptionMode::Reserved,
            Mode::InCycle => AbsorptionMode::InCycle,
        },
        ..base
    };
    match find_tight_hamilton(&g, &p) {
        Ok(cert) => {
            emit(a.out.as_deref(), &write_certificate(&cert, (!a.no_graph).then_some(&g)))?;
            let summary = json!({ "ok": true, "n": cert.n, "log": cert.log });
            eprint!(
                "{}",
                if a.common.json { format!("{summary}\n") } else { format!("tight Hamilton cycle on {} vertices\n", cert.n) }
            );
            Ok(Outcome { ok: true, text: String::new() })
        }
        Err(e @ tighthc::pipeline::PipelineError::BadParams(_)) => Err(e.into()),
        Err(e) => {
            let v = json!({ "ok": false, "stage": e.stage(), "error": e.to_string() });
            let text = if a.common.json { format!("{v}\n") } else { format!("failed at {}: {e}\n", e.stage()) };
            eprint!("{text}");
            Ok(Outcome { ok: false, text: String::new() })
        }
    }
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let file = parse_certificate(&read_input(a.certificate.as_deref())?)?;
    let g = match (&a.graph, &file.graph) {
        (Some(p), _) => read_graph(Some(p))?,
        (None, Some(g)) => g.clone(),
        (None, None) => bail!("certificate has no embedded graph; pass --graph"),
    };
    Ok(match check_certificate(&file, &g) {
        Ok(()) => Outcome::new(
            true,
            a.json,
            json!({ "valid": true, "n": g.n() }),
            format!("valid tight Hamilton cycle on {} vertices\n", g.n()),
        ),
        Err(e) => Outcome::new(false, a.json, json!({ "valid": false, "reason": e.to_string() }), format!("invalid: {e}\n")),
    })
}

fn run_oracle(a: &OracleArgs) -> Result<Outcome> {
    let g = read_graph(a.common.input.as_deref())?;
    let res = oracle::dp_hamilton_capped(&g, a.cap)?;
    Ok(match res {
        Some(c) => {
            let text = c.order().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n";
            Outcome::new(true, a.common.json, json!({ "hamiltonian": true, "order": c.order() }), text)
        }
        None => Outcome::new(
            false,
            a.common.json,
            json!({ "hamiltonian": false, "order": null }),
            "no tight Hamilton cycle\n".into(),
        ),
    })
}

#[derive(Serialize)]
struct GenReport {
    n: usize,
    edges: usize,
}

fn gen(a: &GenArgs) -> Result<Outcome> {
    let n = match (a.n, a.kind) {
        (Some(n), _) => n,
        (None, Kind::SingleAbsorber) => 5,
        (None, _) => bail!("-n is required for this kind"),
    };
    let g = generate::generate(a.kind.into(), n, a.p, a.seed)?;
    emit(a.out.as_deref(), &write_edge_list(&g))?;
    if a.out.is_some() {
        let r = GenReport { n: g.n(), edges: g.edge_count() };
        eprintln!("{}", serde_json::to_string(&r)?);
    }
    Ok(Outcome { ok: true, text: String::new() })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Density(a) => density(a),
        Command::Shave(a) => shave(a),
        Command::Absorbers(a) => absorbers(a),
        Command::Connect(a) => connect(a),
        Command::Cover(a) => cover(a),
        Command::Hamilton(a) => hamilton(a),
        Command::Verify(a) => verify(a),
        Command::Oracle(a) => run_oracle(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if io::stdout().write_all(out.text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
