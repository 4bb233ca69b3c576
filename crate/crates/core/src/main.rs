use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use modgenus::configuration::{estimate_circuit_stats, rng_for, sample_pairing_with, SampleStats, StatsOptions};
use modgenus::enumeration::{
    brute_force_classes, brute_force_filtered, enumerate_cubic_multigraphs, enumerate_one_vertex_triangulations,
    EnumerationResult, Filter,
};
use modgenus::genus::{
    envelope, genus_bounds_of, genus_bipartite, genus_complete, genus_modular_curve, EnvelopeKind, GenusReport,
};
use modgenus::halfedge::Pattern;
use modgenus::modular::{build_modular_graph, ModularGraph, ModularKind};
use modgenus::moves::flip;
use modgenus::ribbon::{
    exact_graph_genus, one_puncture_stats, rotation_system_count, sample_one_puncture, CombinatorialMap,
    DEFAULT_MAX_ATTEMPTS, DEFAULT_MAX_DARTS,
};
use modgenus::{Error, Multigraph, Result};

#[derive(Parser)]
#[command(name = "modgenus", version, about = "Genus experiments on modular curve, pants and flip graphs")]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List isomorphism classes of cubic multigraphs or one-puncture triangulations.
    Enumerate(EnumerateArgs),
    /// Build a modular graph and report its size and genus bounds.
    Modular(ModularArgs),
    /// Monte Carlo circuit statistics of random cubic multigraphs.
    SampleStats(SampleArgs),
    /// Genus bounds, and optionally the exact genus, of a graph.
    Genus(GenusArgs),
    /// Asymptotic envelopes next to small-genus computed values.
    Asymptotics(AsymptoticsArgs),
    /// Random flip sequence on a one-puncture triangulation.
    FlipWalk(FlipWalkArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Connected,
    Simple,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Orderly,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Vertex count (even).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "all")]
    filter: FilterArg,
    #[arg(long, value_enum, default_value = "orderly")]
    method: MethodArg,
    /// Enumerate one-puncture triangulations of this genus instead.
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Curve,
    Pants,
    Flip,
}

#[derive(Args)]
struct ModularArgs {
    #[arg(value_enum)]
    kind: KindArg,
    #[arg(long)]
    genus: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also run the exact genus search when the graph fits the budget.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_DARTS)]
    max_darts: u128,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Condition on the glued surface having one puncture.
    #[arg(long)]
    one_puncture: bool,
    /// Rejection attempts per conditioned sample.
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u64,
    /// Also estimate the fraction of graphs with a nontrivial automorphism.
    #[arg(long)]
    automorphisms: bool,
    /// Also estimate the mean number of K4 subgraphs.
    #[arg(long)]
    k4_copies: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GenusArgs {
    /// Named graph: K<n>, K<m>,<n>, K33, petersen, prism.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// Graph in the multigraph text format.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_DARTS)]
    max_darts: u128,
}

#[derive(Args)]
struct AsymptoticsArgs {
    /// Largest genus for pants graphs (at most 7).
    #[arg(long, default_value_t = 5)]
    max_pants_genus: usize,
    /// Largest genus for flip graphs (at most 3).
    #[arg(long, default_value_t = 2)]
    max_flip_genus: usize,
    /// Largest vertex count for class counts (at most 14).
    #[arg(long, default_value_t = 10)]
    max_n: usize,
}

#[derive(Args)]
struct FlipWalkArgs {
    #[arg(long, conflicts_with = "n")]
    genus: Option<usize>,
    /// Triangle count, 2 mod 4.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn bad_format(command: &str, format: Format) -> Error {
    let name = format.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    Error::Domain(format!("{command} does not support --format {name}"))
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<String> {
    let filter = match a.filter {
        FilterArg::All => Filter::All,
        FilterArg::Connected => Filter::Connected,
        FilterArg::Simple => Filter::Simple,
    };
    let result: EnumerationResult = match (a.genus, a.n) {
        (Some(g), _) if a.method == MethodArg::Brute => brute_force_filtered((4 * g).max(2) - 2, true, true)?,
        (Some(g), _) => enumerate_one_vertex_triangulations(g)?,
        (None, Some(n)) if a.method == MethodArg::Brute => brute_force_classes(n, false)?.with_filter(filter)?,
        (None, Some(n)) => enumerate_cubic_multigraphs(n, filter)?,
        (None, None) => return Err(Error::Domain("enumerate needs --n or --genus".into())),
    };
    match a.format {
        Format::Json => Ok(json_text(&json!({
            "n_vertices": result.n_vertices,
            "oriented": result.oriented,
            "filter": result.filter,
            "method": result.method,
            "count": result.class_codes.len(),
            "counts": result.counts,
            "class_codes": result.class_codes.iter().map(hex::encode).collect::<Vec<_>>(),
            "representatives": result.representatives,
        }))),
        Format::Text => Ok(result.representatives.join("\n")),
        f => Err(bad_format("enumerate", f)),
    }
}

/// Exact genus when the search fits the budget and the graph has at most
/// eight vertices.
fn try_exact(g: &Multigraph, max_darts: u128) -> Result<Option<u64>> {
    if g.n_vertices() > 8 || rotation_system_count(g) > max_darts {
        return Ok(None);
    }
    exact_graph_genus(g, max_darts).map(|x| Some(x as u64))
}

fn modular_report(m: &ModularGraph, exact: bool, max_darts: u128) -> Result<GenusReport> {
    let simple = m.simple_graph();
    let mut report = genus_bounds_of(&simple)?;
    if m.kind == ModularKind::Curve {
        let closed = genus_modular_curve(m.genus as u64)?;
        report = report.with_exact(closed, "closed form for the complete graph on floor(g/2)+1 vertices");
    }
    if exact {
        match try_exact(&simple, max_darts)? {
            Some(x) => {
                if report.exact.is_some_and(|c| c != x) {
                    return Err(Error::Internal(format!("exhaustive genus {x} disagrees with the closed form")));
                }
                report = report.with_exact(x, "exhaustive rotation-system search");
            }
            None => report.method_notes.push_str("; exact search skipped (over budget)"),
        }
    }
    Ok(report)
}

fn cmd_modular(a: &ModularArgs) -> Result<String> {
    let kind = match a.kind {
        KindArg::Curve => ModularKind::Curve,
        KindArg::Pants => ModularKind::Pants,
        KindArg::Flip => ModularKind::Flip,
    };
    let m = build_modular_graph(kind, a.genus)?;
    let summary = m.summary();
    let report = modular_report(&m, a.exact, a.max_darts)?;
    match a.format {
        Format::Json => Ok(json_text(&json!({
            "kind": kind,
            "genus": a.genus,
            "seed": 0,
            "summary": summary,
            "genus_report": report,
            "symmetric": m.is_symmetric(),
            "connected": m.is_connected(),
        }))),
        Format::Dot => {
            let mut out = format!(
                "// p={} q_simple={} q_multi={} loops={} girth={} genus_bounds=[{}, {}]{}\n",
                summary.p,
                summary.q_simple,
                summary.q_multi,
                summary.loop_total,
                summary.girth_simple.map_or("none".into(), |h| h.to_string()),
                report.lower_int(),
                report.upper_int(),
                report.exact.map_or(String::new(), |x| format!(" exact={x}")),
            );
            out.push_str(&m.to_dot());
            Ok(out)
        }
        f => Err(bad_format("modular", f)),
    }
}

fn cmd_sample_stats(a: &SampleArgs) -> Result<String> {
    let opts = StatsOptions {
        k_max: a.kmax,
        automorphisms: a.automorphisms,
        pattern: a.k4_copies.then(Pattern::k4),
    };
    let stats: SampleStats = if a.one_puncture {
        one_puncture_stats(a.n, a.samples, a.seed, a.max_attempts, &opts)?
    } else if !a.automorphisms && !a.k4_copies {
        estimate_circuit_stats(a.n, a.kmax, a.samples, a.seed)?
    } else {
        modgenus::configuration::matching_count(a.n)?;
        SampleStats::collect(a.n, a.samples, a.seed, false, &opts, |i| sample_pairing_with(a.n, &mut rng_for(a.seed, i)))?
    };
    match a.format {
        Format::Json => Ok(json_text(&stats)),
        Format::Csv => Ok(stats.to_csv()),
        f => Err(bad_format("sample-stats", f)),
    }
}

/// Closed-form genus for named complete and complete bipartite graphs.
fn closed_form(name: &str) -> Option<u64> {
    let upper = name.to_ascii_uppercase();
    let rest = upper.strip_prefix('K')?;
    if let Some((m, n)) = rest.split_once(',') {
        return genus_bipartite(m.parse().ok()?, n.parse().ok()?).ok();
    }
    if rest.len() == 2 && rest.as_bytes()[0] == rest.as_bytes()[1] {
        let m: u64 = rest[..1].parse().ok()?;
        return genus_bipartite(m, m).ok();
    }
    genus_complete(rest.parse().ok()?).ok()
}

fn cmd_genus(a: &GenusArgs) -> Result<String> {
    let (name, graph) = match (&a.builtin, &a.file) {
        (Some(b), _) => {
            let g = Multigraph::builtin(b).ok_or_else(|| Error::Domain(format!("unknown builtin graph '{b}'")))?;
            (b.clone(), g)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Structural(format!("cannot read {}: {e}", path.display())))?;
            (path.display().to_string(), text.parse::<Multigraph>()?)
        }
        (None, None) => return Err(Error::Domain("genus needs --builtin or --file".into())),
    };
    let mut report = genus_bounds_of(&graph)?;
    if a.exact {
        let x = exact_graph_genus(&graph, a.max_darts)? as u64;
        report = report.with_exact(x, "exhaustive rotation-system search");
    }
    let closed = a.builtin.as_deref().and_then(closed_form);
    Ok(json_text(&json!({
        "graph": name,
        "p": graph.n_vertices(),
        "q": graph.simple_edge_count(),
        "h": graph.simple_girth(),
        "lower": report.lower.to_string(),
        "upper": report.upper.to_string(),
        "report": report,
        "exact": report.exact,
        "closed_form": closed,
    })))
}

fn cmd_asymptotics(a: &AsymptoticsArgs) -> Result<String> {
    let ratio = |x: f64, log_env: f64| (x.ln() - log_env).exp();
    let mut pants = Vec::new();
    for g in 2..=a.max_pants_genus {
        let m = build_modular_graph(ModularKind::Pants, g)?;
        let s = m.summary();
        let report = genus_bounds_of(&m.simple_graph())?;
        let env = envelope(EnvelopeKind::Pants, g as u64)?;
        let upper = report.upper_int() as f64;
        pants.push(json!({
            "genus": g, "p": s.p, "q": s.q_simple, "h": s.girth_simple,
            "lower_int": report.lower_int(), "upper_int": report.upper_int(),
            "log_envelope": env.log_value, "upper_over_envelope": ratio(upper, env.log_value),
        }));
    }
    let mut flips = Vec::new();
    for g in 1..=a.max_flip_genus {
        let m = build_modular_graph(ModularKind::Flip, g)?;
        let s = m.summary();
        let report = genus_bounds_of(&m.simple_graph())?;
        let env = envelope(EnvelopeKind::Flip, g as u64)?;
        let tri = envelope(EnvelopeKind::TriangulationCount, g as u64)?;
        flips.push(json!({
            "genus": g, "p": s.p, "q": s.q_simple, "h": s.girth_simple,
            "lower_int": report.lower_int(), "upper_int": report.upper_int(),
            "log_envelope": env.log_value, "upper_over_envelope": ratio(report.upper_int() as f64, env.log_value),
            "classes_over_count_envelope": ratio(s.p as f64, tri.log_value),
        }));
    }
    let mut counts = Vec::new();
    for n in (2..=a.max_n).step_by(2) {
        let r = enumerate_cubic_multigraphs(n, Filter::All)?;
        let all = envelope(EnvelopeKind::MultigraphCount, n as u64)?;
        let simple = envelope(EnvelopeKind::SimpleCount, n as u64)?;
        counts.push(json!({
            "n": n, "classes": r.counts.total, "simple_classes": r.counts.simple,
            "classes_over_envelope": ratio(r.counts.total as f64, all.log_value),
            "simple_over_envelope": ratio(r.counts.simple as f64, simple.log_value),
        }));
    }
    let envelopes: Vec<_> = EnvelopeKind::ALL
        .into_iter()
        .map(|k| {
            let arg = if k.takes_genus() { 10 } else { 20 };
            envelope(k, arg)
        })
        .collect::<Result<_>>()?;
    Ok(json_text(&json!({
        "seed": 0,
        "envelopes": envelopes,
        "pants": pants,
        "flip": flips,
        "class_counts": counts,
    })))
}

fn cmd_flip_walk(a: &FlipWalkArgs) -> Result<String> {
    let n = match (a.genus, a.n) {
        (Some(g), _) if g >= 1 => 4 * g - 2,
        (Some(_), _) => return Err(Error::Domain("genus must be at least 1".into())),
        (None, Some(n)) => n,
        (None, None) => return Err(Error::Domain("flip-walk needs --genus or --n".into())),
    };
    let start = sample_one_puncture(n, a.seed, a.max_attempts)?;
    let before = start.surface_invariants()?;
    let mut rng = rng_for(a.seed, u64::MAX);
    let mut m: CombinatorialMap = start.clone();
    let mut preserved = true;
    let mut involutive = true;
    let mut self_moves = 0u64;
    for _ in 0..a.steps {
        let arcs = m.arcs();
        let arc = arcs[rng.gen_range(0..arcs.len())];
        let next = flip(&m, arc)?;
        preserved &= next.surface_invariants()? == before;
        involutive &= flip(&next, arc)?.canonical_code() == m.canonical_code();
        if next.canonical_code() == m.canonical_code() {
            self_moves += 1;
        }
        m = next;
    }
    match a.format {
        Format::Json => Ok(json_text(&json!({
            "seed": a.seed,
            "n_triangles": n,
            "steps": a.steps,
            "invariants": before,
            "invariants_preserved": preserved,
            "double_flip_identity": involutive,
            "self_moves": self_moves,
            "final_map": m.to_string(),
        }))),
        Format::Text => Ok(m.to_string()),
        f => Err(bad_format("flip-walk", f)),
    }
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Modular(a) => cmd_modular(a),
        Command::SampleStats(a) => cmd_sample_stats(a),
        Command::Genus(a) => cmd_genus(a),
        Command::Asymptotics(a) => cmd_asymptotics(a),
        Command::FlipWalk(a) => cmd_flip_walk(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global() {
            eprintln!("warning: could not set worker count: {e}");
        }
    }
    let text = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
