//! `colorsampler`: sampling and exact auditing of single-flaw coloring
//! dynamics.
//!
//! Every subcommand prints a single JSON document to standard output
//! (schema tag `colorsampler/1`) and human-readable notes to standard
//! error. Exit codes: 0 on success, 1 when an audit or statistical test
//! fails, 2 on usage, configuration, or parse errors.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use colorsampler_cli::formats::{format_coloring, parse_edge_list, parse_order};
use colorsampler_cli::sampler::{sample_proper_coloring, uniformity_test, SamplerParams};
use colorsampler_core::chain::{
    exact_mixing_time, theoretical_tau_bound, ChainConfig, ChainKind, TransitionMatrix,
    DEFAULT_MATRIX_BUDGET, DEFAULT_MIXING_CAP,
};
use colorsampler_core::coloring::classify;
use colorsampler_core::flow::{audit_flow_bounds, audit_transition_flow_bound};
use colorsampler_core::graph::{
    find_minimal_order, vertex_separation_number, Graph, LinearOrder, SeparatorSchedule,
    DEFAULT_ORDER_SEARCH_CAP,
};
use colorsampler_core::space::{FlawRepairMap, StateSpace, DEFAULT_ENUMERATION_BUDGET};

const SCHEMA: &str = "colorsampler/1";

#[derive(Parser)]
#[command(
    name = "colorsampler",
    version,
    about = "Sampling and exact desk-scale auditing of single-flaw coloring dynamics",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw an approximately uniform proper coloring (repeated-attempt sampler)
    Sample(SampleArgs),
    /// Count proper and singly-flawed colorings exactly
    Enumerate(EnumerateArgs),
    /// Exact worst-start mixing time, with the closed-form upper bound
    MixTime(MixTimeArgs),
    /// Route all canonical-path flows and audit the congestion bounds
    FlowAudit(FlowAuditArgs),
    /// Vertex separation number (pathwidth) with a witness order
    Vsn(VsnArgs),
    /// Empirical uniformity of the sampler over the proper colorings
    Uniformity(UniformityArgs),
}

#[derive(Args)]
struct GraphArg {
    /// Edge-list file: header `n m`, then m lines `u v`; `#` starts a comment
    #[arg(long, value_name = "FILE")]
    graph: String,
}

#[derive(Args)]
struct OrderArg {
    /// Linear order: a file or an inline permutation of 1..n like "2 1 3"
    #[arg(long, value_name = "FILE|PERM")]
    order: Option<String>,
}

#[derive(Args)]
struct StepsArgs {
    /// Walk length per attempt (overrides the derived choices)
    #[arg(long, value_name = "N")]
    steps: Option<u64>,
    /// Derive the walk length from the exact mixing time for delta1
    #[arg(long)]
    exact_tau: bool,
    /// Run the full closed-form step bound (usually astronomically long)
    #[arg(long)]
    honor_theory: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Number of colors k (needs k >= max degree + 2)
    #[arg(long, value_name = "K")]
    colors: usize,
    /// Total bias budget of the sampler
    #[arg(long, default_value_t = 0.05, value_name = "D")]
    delta: f64,
    #[command(flatten)]
    steps: StepsArgs,
    /// Base seed; attempts use seeds derived from it
    #[arg(long, default_value_t = 0, value_name = "S")]
    seed: u64,
    #[command(flatten)]
    order: OrderArg,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Number of colors k
    #[arg(long, value_name = "K")]
    colors: usize,
    /// Largest number of raw colorings the enumeration may scan
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET, value_name = "N")]
    budget: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ChainArg {
    /// Uniform (vertex, color) proposal accepted inside proper ∪ singly-flawed
    SingleFlaw,
    /// Recolor a uniform vertex with a uniform available color
    Glauber,
}

impl ChainArg {
    fn kind(self) -> ChainKind {
        match self {
            ChainArg::SingleFlaw => ChainKind::SingleFlaw,
            ChainArg::Glauber => ChainKind::Glauber,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ChainArg::SingleFlaw => "single-flaw",
            ChainArg::Glauber => "glauber",
        }
    }
}

#[derive(Args)]
struct MixTimeArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Number of colors k
    #[arg(long, value_name = "K")]
    colors: usize,
    /// Total-variation threshold defining the mixing time
    #[arg(long, default_value_t = 0.05, value_name = "D")]
    delta: f64,
    /// Which dynamics to analyze
    #[arg(long, value_enum, default_value_t = ChainArg::SingleFlaw)]
    chain: ChainArg,
    #[command(flatten)]
    order: OrderArg,
    /// Largest number of raw colorings the enumeration may scan
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET, value_name = "N")]
    budget: usize,
    /// Largest state count for the exact transition matrix
    #[arg(long, default_value_t = DEFAULT_MATRIX_BUDGET, value_name = "N")]
    matrix_budget: usize,
    /// Iteration cap for the mixing-time search
    #[arg(long, default_value_t = DEFAULT_MIXING_CAP, value_name = "T")]
    cap: u64,
}

#[derive(Args)]
struct FlowAuditArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Number of colors k (needs k >= max degree + 2)
    #[arg(long, value_name = "K")]
    colors: usize,
    #[command(flatten)]
    order: OrderArg,
    /// Largest number of raw colorings the enumeration may scan
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET, value_name = "N")]
    budget: usize,
}

#[derive(Args)]
struct VsnArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[command(flatten)]
    order: OrderArg,
    /// Largest n for the exact order search
    #[arg(long, default_value_t = DEFAULT_ORDER_SEARCH_CAP, value_name = "N")]
    cap: usize,
}

#[derive(Args)]
struct UniformityArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Number of colors k (needs k >= max degree + 2)
    #[arg(long, value_name = "K")]
    colors: usize,
    /// Total bias budget of the sampler
    #[arg(long, default_value_t = 0.05, value_name = "D")]
    delta: f64,
    /// Number of independent sampler runs to tally
    #[arg(long, default_value_t = 1000, value_name = "N")]
    trials: u64,
    #[command(flatten)]
    steps: StepsArgs,
    /// Base seed; trials and attempts use seeds derived from it
    #[arg(long, default_value_t = 0, value_name = "S")]
    seed: u64,
    #[command(flatten)]
    order: OrderArg,
    /// Largest number of raw colorings the enumeration may scan
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET, value_name = "N")]
    budget: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::MixTime(a) => cmd_mix_time(a),
        Command::FlowAudit(a) => cmd_flow_audit(a),
        Command::Vsn(a) => cmd_vsn(a),
        Command::Uniformity(a) => cmd_uniformity(a),
    }
}

fn emit(doc: &serde_json::Value) {
    println!("{doc}");
}

fn load_graph(path: &str) -> Result<Graph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read graph file `{path}`"))?;
    parse_edge_list(&text).map_err(|e| anyhow!("{path}: {e}"))
}

/// Reads `--order` as a file when one exists at that path, otherwise as an
/// inline permutation.
fn load_order(source: &str, g: &Graph) -> Result<LinearOrder> {
    let text = match fs::read_to_string(source) {
        Ok(t) => t,
        Err(io)
            if !source.trim().is_empty()
                && source.split_whitespace().all(|t| t.parse::<usize>().is_ok()) =>
        {
            let _ = io;
            source.to_string()
        }
        Err(io) => {
            bail!("cannot read order `{source}`: {io} (pass a file or an inline permutation like \"2 1 3\")")
        }
    };
    parse_order(&text, g.n()).map_err(|e| anyhow!("order `{source}`: {e}"))
}

/// Returns the order to audit with: the user's, or a minimal one found by
/// exact search. The second component is the separation width under it.
fn chosen_order(g: &Graph, order: &Option<String>, cap: usize) -> Result<(LinearOrder, usize)> {
    match order {
        Some(source) => {
            let o = load_order(source, g)?;
            let w = vertex_separation_number(g, &o);
            Ok((o, w))
        }
        None => find_minimal_order(g, cap)
            .map_err(|e| anyhow!("{e}; supply --order with an explicit order")),
    }
}

/// Picks the walk length for the sampler: explicit `--steps`, the exact
/// mixing time for `delta1`, or the closed-form bound. With none of the
/// three the bound is reported and the run refused, since honoring it
/// blindly would be astronomically slow.
fn resolve_steps(
    g: &Graph,
    k: usize,
    delta1: f64,
    choice: &StepsArgs,
    order: &Option<String>,
) -> Result<(u64, &'static str)> {
    if let Some(s) = choice.steps {
        return Ok((s, "explicit"));
    }
    if choice.exact_tau {
        let space = StateSpace::enumerate(g, k, DEFAULT_ENUMERATION_BUDGET)
            .context("cannot enumerate the state space for --exact-tau")?;
        let cfg = ChainConfig {
            kind: ChainKind::SingleFlaw,
            k,
        };
        let p = TransitionMatrix::build(g, &cfg, &space, DEFAULT_MATRIX_BUDGET)
            .context("cannot build the transition matrix for --exact-tau")?;
        let t = exact_mixing_time(&p, delta1, DEFAULT_MIXING_CAP)
            .context("exact mixing-time computation failed")?;
        return Ok((t, "exact-tau"));
    }
    let (ord, vsn) = chosen_order(g, order, DEFAULT_ORDER_SEARCH_CAP)?;
    let sch = SeparatorSchedule::build(g, ord)?;
    let bound = theoretical_tau_bound(g.n(), g.max_degree(), k, vsn, sch.lambda(), delta1);
    if choice.honor_theory {
        if !(bound.is_finite() && bound <= u64::MAX as f64) {
            bail!(
                "theoretical step count {bound:.3e} cannot be run on this machine; \
                 pass --steps or --exact-tau"
            );
        }
        return Ok((bound.ceil() as u64, "honor-theory"));
    }
    bail!(
        "no walk length chosen: the closed-form bound is {bound:.6e} steps; pass --steps N \
         for an explicit length, --exact-tau to compute the exact mixing time (small \
         graphs), or --honor-theory to run the bound as-is"
    )
}

fn cmd_sample(a: SampleArgs) -> Result<ExitCode> {
    let t0 = Instant::now();
    let g = load_graph(&a.graph.graph)?;
    let base = SamplerParams::new(&g, a.colors, a.delta, 0, a.seed)?;
    let (steps, how) = resolve_steps(&g, a.colors, base.delta1, &a.steps, &a.order.order)?;
    let params = SamplerParams { steps, ..base };
    let outcome = sample_proper_coloring(&g, &params)?;
    assert!(
        classify(&g, &outcome.coloring).is_proper(),
        "sampler must emit proper colorings"
    );
    let doc = json!({
        "schema": SCHEMA,
        "graph": a.graph.graph,
        "n": g.n(),
        "k": params.k,
        "delta": params.delta,
        "delta1": params.delta1,
        "max_attempts": params.max_attempts,
        "steps": params.steps,
        "seed": params.seed,
        "attempts": outcome.attempts,
        "fallback": outcome.fallback,
        "proper": true,
        "coloring": format_coloring(&outcome.coloring),
        "colors": outcome.coloring.colors(),
    });
    emit(&doc);
    eprintln!(
        "sampled a proper coloring in {} attempt(s) of {} steps ({how}) in {:.1?}",
        outcome.attempts,
        params.steps,
        t0.elapsed()
    );
    if outcome.fallback {
        eprintln!(
            "warning: all {} attempts ended flawed; returned the greedy fallback",
            params.max_attempts
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<ExitCode> {
    let t0 = Instant::now();
    let g = load_graph(&a.graph.graph)?;
    let space = StateSpace::enumerate(&g, a.colors, a.budget)?;
    let doc = json!({
        "schema": SCHEMA,
        "graph": a.graph.graph,
        "n": g.n(),
        "k": a.colors,
        "num_proper": space.num_proper(),
        "num_singly_flawed": space.num_singly_flawed(),
        "num_states": space.len(),
    });
    emit(&doc);
    eprintln!(
        "enumerated {} states ({} proper, {} singly flawed) in {:.1?}",
        space.len(),
        space.num_proper(),
        space.num_singly_flawed(),
        t0.elapsed()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_mix_time(a: MixTimeArgs) -> Result<ExitCode> {
    let t0 = Instant::now();
    let g = load_graph(&a.graph.graph)?;
    let space = StateSpace::enumerate(&g, a.colors, a.budget)?;
    let cfg = ChainConfig {
        kind: a.chain.kind(),
        k: a.colors,
    };
    let p = TransitionMatrix::build(&g, &cfg, &space, a.matrix_budget)?;
    let exact = exact_mixing_time(&p, a.delta, a.cap)?;
    // The closed-form bound applies to the single-flaw dynamics only.
    let mut bound = None;
    let mut vsn = None;
    let mut lambda = None;
    if cfg.kind == ChainKind::SingleFlaw && a.colors >= g.max_degree() + 2 {
        match chosen_order(&g, &a.order.order, DEFAULT_ORDER_SEARCH_CAP) {
            Ok((ord, w)) => {
                let sch = SeparatorSchedule::build(&g, ord)?;
                bound = Some(theoretical_tau_bound(
                    g.n(),
                    g.max_degree(),
                    a.colors,
                    w,
                    sch.lambda(),
                    a.delta,
                ));
                vsn = Some(w);
                lambda = Some(sch.lambda());
            }
            Err(e) => eprintln!("note: skipping the closed-form bound: {e:#}"),
        }
    }
    // For a single vertex the bound degenerates to zero (its log2(n)
    // factor vanishes), so the comparison is reported only when the bound
    // is informative.
    let within = match bound {
        Some(b) if b > 0.0 => Some((exact as f64) <= b),
        _ => None,
    };
    let doc = json!({
        "schema": SCHEMA,
        "graph": a.graph.graph,
        "k": a.colors,
        "chain": a.chain.name(),
        "delta": a.delta,
        "exact_t": exact,
        "theoretical_bound": bound,
        "vsn": vsn,
        "lambda": lambda,
        "within_bound": within,
        "num_states": p.dim(),
    });
    emit(&doc);
    eprintln!(
        "exact mixing time {exact} over {} states in {:.1?}",
        p.dim(),
        t0.elapsed()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_flow_audit(a: FlowAuditArgs) -> Result<ExitCode> {
    let t0 = Instant::now();
    let g = load_graph(&a.graph.graph)?;
    let space = StateSpace::enumerate(&g, a.colors, a.budget)?;
    let (ord, _) = chosen_order(&g, &a.order.order, DEFAULT_ORDER_SEARCH_CAP)?;
    let seq: Vec<usize> = ord.sequence().to_vec();
    let sch = SeparatorSchedule::build(&g, ord)?;
    let repair = FlawRepairMap::build(&g, &space)?;
    let transition_audit = audit_transition_flow_bound(&g, &sch, &space)?;
    let report = audit_flow_bounds(&g, &sch, &space, &repair)?;
    let pass = transition_audit.pass() && report.pass();
    let doc = json!({
        "schema": SCHEMA,
        "graph": a.graph.graph,
        "k": a.colors,
        "order": seq,
        "n": g.n(),
        "num_states": space.len(),
        "num_proper": space.num_proper(),
        "num_singly_flawed": space.num_singly_flawed(),
        "vsn": report.vsn,
        "lambda": report.lambda,
        "path_len": report.path_len,
        "rho_max": report.rho_max_f64(),
        "rho_max_exact": report.rho_max.to_string(),
        "rho_proper_max": report.rho_proper_max_f64(),
        "rho_proper_max_exact": report.rho_proper_max.to_string(),
        "rho_loop_max": report.rho_loop_max_f64(),
        "rho_bound_lemma12": report.proper_congestion_bound,
        "rho_bound_main": report.total_congestion_bound,
        "slack_lemma12": report.proper_slack(),
        "slack_main": report.total_slack(),
        "claim10_pass": transition_audit.pass(),
        "claim10_worst_ratio": transition_audit.worst_ratio_f64(),
        "claim10_checks": transition_audit.checks,
        "claim10_violations": transition_audit.violations,
        "lemma11_pass": report.phase_bound_pass(),
        "lemma11_worst_ratio": report.phase_worst_ratio_f64(),
        "lemma12_pass": report.proper_bound_pass(),
        "main_pass": report.total_bound_pass(),
        "worst_edge": report.rho_max_transition.map(|(x, y)| vec![x, y]),
        "pass": pass,
    });
    emit(&doc);
    eprintln!(
        "audited {} proper pairs over {} states ({}) in {:.1?}; slack {:.3}x",
        space.num_proper() * space.num_proper(),
        space.len(),
        if pass { "pass" } else { "FAIL" },
        t0.elapsed(),
        report.total_slack()
    );
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_vsn(a: VsnArgs) -> Result<ExitCode> {
    let t0 = Instant::now();
    let g = load_graph(&a.graph.graph)?;
    let (order, width, minimal) = match &a.order.order {
        Some(source) => {
            let o = load_order(source, &g)?;
            let w = vertex_separation_number(&g, &o);
            (o, w, false)
        }
        None => {
            let (o, w) = find_minimal_order(&g, a.cap)
                .map_err(|e| anyhow!("{e}; supply --order with an explicit order"))?;
            (o, w, true)
        }
    };
    let doc = json!({
        "schema": SCHEMA,
        "graph": a.graph.graph,
        "n": g.n(),
        "vsn": width,
        "order": order.sequence(),
        "minimal": minimal,
    });
    emit(&doc);
    eprintln!(
        "separation width {width} ({}) in {:.1?}",
        if minimal { "minimal order" } else { "given order" },
        t0.elapsed()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_uniformity(a: UniformityArgs) -> Result<ExitCode> {
    let t0 = Instant::now();
    let g = load_graph(&a.graph.graph)?;
    let base = SamplerParams::new(&g, a.colors, a.delta, 0, a.seed)?;
    let (steps, how) = resolve_steps(&g, a.colors, base.delta1, &a.steps, &a.order.order)?;
    let params = SamplerParams { steps, ..base };
    let space = StateSpace::enumerate(&g, a.colors, a.budget)?;
    let report = uniformity_test(&g, &params, a.trials, &space)?;
    let doc = json!({
        "schema": SCHEMA,
        "graph": a.graph.graph,
        "n": g.n(),
        "k": params.k,
        "delta": params.delta,
        "delta1": params.delta1,
        "steps": params.steps,
        "seed": params.seed,
        "trials": report.trials,
        "num_proper": report.num_proper,
        "tv": report.tv,
        "chi_square": report.chi_square,
        "degrees_of_freedom": report.degrees_of_freedom,
        "critical_99": report.critical_99,
        "pass": report.pass,
        "low_power": report.low_power,
        "fallback_count": report.fallback_count,
    });
    emit(&doc);
    eprintln!(
        "{} trials of {} steps ({how}) over {} proper colorings: tv={:.4}, chi2={:.2} vs {:.2} ({}) in {:.1?}",
        report.trials,
        params.steps,
        report.num_proper,
        report.tv,
        report.chi_square,
        report.critical_99,
        if report.pass { "pass" } else { "FAIL" },
        t0.elapsed()
    );
    if report.low_power {
        eprintln!(
            "warning: low statistical power: {} trials is fewer than 10 x {} proper colorings",
            report.trials, report.num_proper
        );
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
