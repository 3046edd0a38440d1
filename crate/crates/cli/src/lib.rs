//! Command-line front end: reads an instance file, runs one solver, checks
//! the certificate it returns and prints a deterministic report.

pub mod format;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use stablecut::assoc::NodeLabel;
use stablecut::fair::{fair_stable_matching, level_count_vector, LevelAssignment};
use stablecut::lcut::{disjoint_stable_matchings_min_total_cost, max_weight_union, min_lcut_in_ring};
use stablecut::optimize::{
    cheapest_stable_matching, constrained_stable_matching, cost_of, multi_cost_stable_matching, pack_h_independent,
    PackingCertificate,
};
use stablecut::poset::{weighted_greene_kleitman, InducedPoset};
use stablecut::prefs::blocking_edge;
use stablecut::{oracle, reduce_to_core, AssocDigraph, CoreSystem, EdgeId, Error, Matching, RingCode};

use format::{parse, parse_values, write, Instance, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_REFUTED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "stablecut", version, about = "Stable matching optimization with checked duality certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Instance file.
    pub instance: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Damage the certificate before it is checked (for testing the checker).
    #[arg(long, hide = true)]
    pub corrupt_certificate: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Remove edges in no stable matching and report the stable edges.
    Reduce(Common),
    /// List all stable matchings by exhaustive search (small instances).
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        max_enum: usize,
    },
    /// Decide whether a matching is stable.
    Check {
        #[command(flatten)]
        common: Common,
        /// Comma-separated edge ids.
        #[arg(long)]
        matching: String,
    },
    /// Cheapest stable matching.
    Cheapest {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cost: Option<PathBuf>,
    },
    /// Lexicographically cheapest stable matching for several costs.
    MultiCost {
        #[command(flatten)]
        common: Common,
        #[arg(long, required = true)]
        cost: Vec<PathBuf>,
    },
    /// Stable matching containing and avoiding given edges.
    Constrained {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        force: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<String>,
        #[arg(long)]
        cost: Option<PathBuf>,
    },
    /// Pack stable matchings using each edge at most h times.
    Pack {
        #[command(flatten)]
        common: Common,
        /// Uniform bound; otherwise `h` lines of the instance, default 1.
        #[arg(long)]
        h: Option<i64>,
        /// Pack only the cheapest stable matchings.
        #[arg(long)]
        cost: Option<PathBuf>,
    },
    /// Minimum cut family of ell disjoint stable cuts, capacities from costs.
    Lcut {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long)]
        cost: Option<PathBuf>,
    },
    /// Ell disjoint stable matchings of minimum total cost.
    PackMinCost {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long)]
        cost: Option<PathBuf>,
    },
    /// Ell stable matchings whose union has maximum weight.
    MaxUnion {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long)]
        weight: Option<PathBuf>,
    },
    /// Stable matchings covering each edge its weight times, with a chain witness.
    Cover {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        weight: Option<PathBuf>,
    },
    /// Maximum-weight stable matching with a covering chain family.
    Dilworth {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        weight: Option<PathBuf>,
    },
    /// Largest union of ell antichains of the edge poset, with orthogonal chains.
    Gk {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long)]
        weight: Option<PathBuf>,
        /// Bound on the total weight expanded into element copies.
        #[arg(long, default_value_t = 100_000)]
        max_copies: usize,
    },
    /// Fair stable matching for the instance's levels (rank levels if none).
    Fair(Common),
    /// Print a random instance.
    Gen {
        #[arg(long)]
        boys: usize,
        #[arg(long)]
        girls: usize,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Solver(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(Error::ResourceBound { .. } | Error::Overflow) => EXIT_RESOURCE,
            CliError::Solver(Error::Infeasible | Error::InsufficientDisjoint { .. } | Error::NoFiniteLCut { .. }) => {
                EXIT_INFEASIBLE
            }
            _ => EXIT_INPUT,
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Report {
    command: String,
    instance: String,
    primal: Value,
    dual: Value,
    value: Value,
    certified: bool,
    stats: Value,
    #[serde(skip)]
    lines: Vec<String>,
    #[serde(skip)]
    summary: String,
    #[serde(skip)]
    infeasible: bool,
}

impl Report {
    fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let verdict = if self.certified { "CERTIFIED" } else { "REFUTED" };
        let _ = writeln!(out, "{} {verdict}", self.summary);
        out
    }

    fn exit_code(&self) -> i32 {
        if !self.certified {
            EXIT_REFUTED
        } else if self.infeasible {
            EXIT_INFEASIBLE
        } else {
            EXIT_OK
        }
    }
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => stdout,
        Err(e) => Output { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn execute(command: &Command) -> Result<Output, CliError> {
    if let Command::Gen { boys, girls, density, seed } = command {
        if !(0.0..=1.0).contains(density) {
            return Err(CliError::Input(format!("density {density} is outside [0, 1]")));
        }
        let system = oracle::random_instance(*boys, *girls, *density, *seed);
        return Ok(Output { code: EXIT_OK, stdout: write(&Instance::new(system)), stderr: String::new() });
    }
    let common = common_of(command);
    let inst = load(&common.instance)?;
    let ctx = Context::new(inst);
    let c = common.corrupt_certificate;
    let mut report = match command {
        Command::Reduce(_) => reduce(&ctx, c),
        Command::Enumerate { max_enum, .. } => enumerate(&ctx, *max_enum, c),
        Command::Check { matching, .. } => check(&ctx, matching, c),
        Command::Cheapest { cost, .. } => cheapest(&ctx, cost.as_deref(), c),
        Command::MultiCost { cost, .. } => multi_cost(&ctx, cost, c),
        Command::Constrained { force, forbid, cost, .. } => constrained(&ctx, force, forbid, cost.as_deref(), c),
        Command::Pack { h, cost, .. } => pack(&ctx, *h, cost.as_deref(), c),
        Command::Lcut { ell, cost, .. } => lcut(&ctx, *ell, cost.as_deref(), c),
        Command::PackMinCost { ell, cost, .. } => pack_min_cost(&ctx, *ell, cost.as_deref(), c),
        Command::MaxUnion { ell, weight, .. } => max_union(&ctx, *ell, weight.as_deref(), c),
        Command::Cover { weight, .. } => cover(&ctx, weight.as_deref(), c),
        Command::Dilworth { weight, .. } => dilworth(&ctx, weight.as_deref(), c),
        Command::Gk { ell, weight, max_copies, .. } => gk(&ctx, *ell, weight.as_deref(), *max_copies, c),
        Command::Fair(_) => fair(&ctx, c),
        Command::Gen { .. } => unreachable!("handled above"),
    }?;
    report.command = command_name(command).into();
    report.instance = common.instance.display().to_string();
    report.stats = ctx.stats();
    Ok(Output { code: report.exit_code(), stdout: report.render(common.json), stderr: String::new() })
}

fn common_of(command: &Command) -> &Common {
    match command {
        Command::Reduce(c) | Command::Fair(c) => c,
        Command::Enumerate { common, .. }
        | Command::Check { common, .. }
        | Command::Cheapest { common, .. }
        | Command::MultiCost { common, .. }
        | Command::Constrained { common, .. }
        | Command::Pack { common, .. }
        | Command::Lcut { common, .. }
        | Command::PackMinCost { common, .. }
        | Command::MaxUnion { common, .. }
        | Command::Cover { common, .. }
        | Command::Dilworth { common, .. }
        | Command::Gk { common, .. } => common,
        Command::Gen { .. } => unreachable!("gen reads no instance"),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Reduce(_) => "reduce",
        Command::Enumerate { .. } => "enumerate",
        Command::Check { .. } => "check",
        Command::Cheapest { .. } => "cheapest",
        Command::MultiCost { .. } => "multi-cost",
        Command::Constrained { .. } => "constrained",
        Command::Pack { .. } => "pack",
        Command::Lcut { .. } => "lcut",
        Command::PackMinCost { .. } => "pack-min-cost",
        Command::MaxUnion { .. } => "max-union",
        Command::Cover { .. } => "cover",
        Command::Dilworth { .. } => "dilworth",
        Command::Gk { .. } => "gk",
        Command::Fair(_) => "fair",
        Command::Gen { .. } => "gen",
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path) -> Result<Instance, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

struct Context {
    inst: Instance,
    core: CoreSystem,
    d: AssocDigraph,
}

impl Context {
    fn new(inst: Instance) -> Self {
        let core = reduce_to_core(&inst.system);
        let d = AssocDigraph::new(&core);
        Context { inst, core, d }
    }

    fn stats(&self) -> Value {
        let s = &self.inst.system;
        json!({
            "boys": s.boys().len(),
            "girls": s.girls().len(),
            "edges": s.edge_count(),
            "stable_edges": self.core.stable_edges().len(),
            "digraph_nodes": self.d.node_count(),
        })
    }

    /// Per-core-edge values: from `file` if given, else the instance's
    /// lines, `default` where unspecified.
    fn values(&self, file: Option<&Path>, kind: &'static str, default: i64) -> Result<Vec<i64>, CliError> {
        let input = match file {
            Some(p) => parse_values(&read(p)?, &self.inst.system, kind)
                .map_err(|source| CliError::Parse { path: p.display().to_string(), source })?,
            None => match kind {
                "cost" => self.inst.cost.clone(),
                "weight" => self.inst.weight.clone(),
                _ => self.inst.h.clone(),
            },
        };
        Ok(self.core.system().edge_ids().map(|e| input[self.core.input_edge(e).0].unwrap_or(default)).collect())
    }

    fn edges(&self, names: &[String]) -> Result<Vec<EdgeId>, CliError> {
        names
            .iter()
            .filter(|n| !n.is_empty())
            .map(|n| self.inst.system.edge_by_name(n).ok_or_else(|| CliError::Input(format!("unknown edge `{n}`"))))
            .collect()
    }

    fn names(&self, m: &Matching) -> Vec<String> {
        m.names(self.core.system())
    }

    fn show(&self, m: &Matching) -> String {
        format!("{{{}}}", self.names(m).join(", "))
    }

    fn edge_names(&self, edges: &[EdgeId]) -> Vec<String> {
        edges.iter().map(|&e| self.core.system().edge_name(e).to_string()).collect()
    }

    fn node_label(&self, v: usize) -> String {
        match self.d.label(v) {
            NodeLabel::Source => "s".into(),
            NodeLabel::Sink => "t".into(),
            NodeLabel::Inner { girl, rank } => format!("{}:{rank}", self.core.system().girls()[girl]),
        }
    }

    fn shore(&self, z: &stablecut::NodeSet) -> Vec<String> {
        z.ones().map(|v| self.node_label(v)).collect()
    }

    fn require_nonempty(&self) -> Result<(), CliError> {
        if self.core.n() == 0 {
            return Err(CliError::Input("the instance has no stable edges".into()));
        }
        Ok(())
    }
}

fn report(primal: Value, dual: Value, value: Value, certified: bool, lines: Vec<String>, summary: String) -> Report {
    Report {
        command: String::new(),
        instance: String::new(),
        primal,
        dual,
        value,
        certified,
        stats: Value::Null,
        lines,
        summary,
        infeasible: false,
    }
}

fn infeasible(mut r: Report) -> Report {
    r.infeasible = true;
    r
}

/// Drops one edge, so a stable matching stops being stable or perfect.
fn damage(m: &mut Matching) {
    let first = m.iter().next();
    if let Some(e) = first {
        *m = m.iter().filter(|&f| f != e).collect();
    }
}

fn reduce(ctx: &Context, corrupt: bool) -> Result<Report, CliError> {
    let core = &ctx.core;
    let removed: Vec<String> =
        core.removed_input_edges().iter().map(|&e| ctx.inst.system.edge_name(e).to_string()).collect();
    let mut witnesses: Vec<(EdgeId, Matching)> =
        core.stable_edges().iter().map(|&e| (e, core.girl_best_with(e).expect("stable edge").clone())).collect();
    if corrupt {
        if let Some((_, m)) = witnesses.first_mut() {
            damage(m);
        }
    }
    let ok = witnesses.iter().all(|(e, m)| {
        m.contains(*e) && oracle::is_stable_by_definition(&ctx.inst.system, &core.to_input(m))
    }) && oracle::is_stable_by_definition(&ctx.inst.system, &core.to_input(core.girl_best()))
        && oracle::is_stable_by_definition(&ctx.inst.system, &core.to_input(core.boy_best()));
    let stable = ctx.edge_names(core.stable_edges());
    let lines = vec![
        format!("stable edges: {}", stable.join(" ")),
        format!("removed edges: {}", removed.join(" ")),
        format!("girl-best: {}", ctx.show(core.girl_best())),
        format!("boy-best: {}", ctx.show(core.boy_best())),
    ];
    let dual: serde_json::Map<String, Value> = witnesses
        .iter()
        .map(|(e, m)| (core.system().edge_name(*e).to_string(), json!(ctx.names(m))))
        .collect();
    Ok(report(
        json!({"stable_edges": stable, "removed_edges": removed, "girl_best": ctx.names(core.girl_best()), "boy_best": ctx.names(core.boy_best())}),
        json!({"edge_witnesses": dual}),
        json!(stable.len()),
        ok,
        lines,
        format!("stable_edges={}", stable.len()),
    ))
}

fn enumerate(ctx: &Context, max_enum: usize, corrupt: bool) -> Result<Report, CliError> {
    let mut family = oracle::enumerate_stable(&ctx.inst.system, max_enum)?;
    if corrupt {
        if let Some(m) = family.first_mut() {
            damage(m);
        }
    }
    let distinct: BTreeSet<&Matching> = family.iter().collect();
    let ok = distinct.len() == family.len()
        && family.iter().all(|m| {
            oracle::is_stable_by_definition(&ctx.inst.system, m)
                && ctx.core.from_input(m).is_some_and(|cm| {
                    ctx.d.shore_of(&ctx.core, &cm).ok().and_then(|z| ctx.d.matching_of(&z).ok()) == Some(cm.clone())
                })
        });
    let names: Vec<Vec<String>> = family.iter().map(|m| m.names(&ctx.inst.system)).collect();
    let lines = names.iter().map(|m| format!("{{{}}}", m.join(", "))).collect();
    Ok(report(json!(names), Value::Null, json!(family.len()), ok, lines, format!("count={}", family.len())))
}

fn check(ctx: &Context, matching: &str, corrupt: bool) -> Result<Report, CliError> {
    let system = &ctx.inst.system;
    let names: Vec<String> = matching.split(',').map(|s| s.trim().to_string()).collect();
    let m: Matching = ctx.edges(&names)?.into_iter().collect();
    system.check_matching(&m)?;
    let mut blocker = blocking_edge(system, &m);
    if corrupt {
        blocker = match blocker {
            Some(_) => None,
            None => system.edge_ids().find(|&e| !m.contains(e)).or(Some(EdgeId(0))),
        };
    }
    let by_definition = oracle::is_stable_by_definition(system, &m);
    let ok = match blocker {
        None => by_definition,
        Some(e) => {
            let mut with = m.clone();
            with.insert(e);
            !m.contains(e) && !by_definition && !oracle::is_stable_by_definition(system, &with) && blocks(system, &m, e)
        }
    };
    let (line, value) = match blocker {
        None => ("stable".to_string(), json!(true)),
        Some(e) => (format!("unstable: blocking edge {}", system.edge_name(e)), json!(false)),
    };
    Ok(report(
        json!({"matching": m.names(system), "stable": blocker.is_none()}),
        json!({"blocking_edge": blocker.map(|e| system.edge_name(e).to_string())}),
        value,
        ok,
        Vec::new(),
        line,
    ))
}

/// Neither endpoint of `e` prefers its partner in `m` to `e`.
fn blocks(system: &stablecut::PreferenceSystem, m: &Matching, e: EdgeId) -> bool {
    let edge = system.edge(e);
    let boy_ok = m.iter().filter(|&f| system.edge(f).boy == edge.boy).all(|f| system.boy_rank(f) > system.boy_rank(e));
    let girl_ok =
        m.iter().filter(|&f| system.edge(f).girl == edge.girl).all(|f| system.girl_rank(f) > system.girl_rank(e));
    boy_ok && girl_ok
}

/// Feasible flow of value equal to the shifted cost of `m`: then `m` is cheapest.
fn certify_cheapest(ctx: &Context, c: &[i64], m: &Matching, flow_value: i64) -> bool {
    let low = ctx.core.stable_edges().iter().map(|e| c[e.0]).min().unwrap_or(0);
    let g: Vec<i64> = c.iter().map(|&v| v - low).collect();
    let net = ctx.d.network(ctx.d.ring(), |e| stablecut::scalar::Capacity::Finite(g[e.0]));
    let Ok(mf) = stablecut::flow::max_flow(&net) else { return false };
    ctx.core.is_stable(m).unwrap_or(false)
        && net.check_flow(&mf.flow).is_ok()
        && mf.value == flow_value
        && cost_of(&g, m) == flow_value
}

fn cheapest(ctx: &Context, cost: Option<&Path>, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let c = ctx.values(cost, "cost", 0)?;
    let mut best = cheapest_stable_matching(&ctx.core, &ctx.d, &c)?;
    if corrupt {
        best.flow_value -= 1;
    }
    let ok = certify_cheapest(ctx, &c, &best.matching, best.flow_value);
    Ok(report(
        json!({"matching": ctx.names(&best.matching), "cost": best.cost}),
        json!({"shore": ctx.shore(&best.shore), "flow_value": best.flow_value}),
        json!(best.cost),
        ok,
        vec![
            format!("matching: {}", ctx.show(&best.matching)),
            format!("shore: {}", ctx.shore(&best.shore).join(" ")),
            format!("flow value: {}", best.flow_value),
        ],
        format!("cost={}", best.cost),
    ))
}

fn multi_cost(ctx: &Context, files: &[PathBuf], corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let costs: Vec<Vec<i64>> = files.iter().map(|f| ctx.values(Some(f), "cost", 0)).collect::<Result<_, _>>()?;
    let refs: Vec<&[i64]> = costs.iter().map(Vec::as_slice).collect();
    let mut best = multi_cost_stable_matching(&ctx.core, &ctx.d, &refs)?;
    if corrupt {
        damage(&mut best.matching);
    }
    // One combined cost, each stage weighted above the total spread of the
    // later ones, has the lexicographic optimum as its cheapest matching.
    let n = ctx.core.n() as i128;
    let mut combined = vec![0i128; ctx.core.system().edge_count()];
    let mut scale: i128 = 1;
    let mut overflow = false;
    for c in costs.iter().rev() {
        let (lo, hi) = ctx.core.stable_edges().iter().fold((i64::MAX, i64::MIN), |(a, b), e| (a.min(c[e.0]), b.max(c[e.0])));
        for e in ctx.core.stable_edges() {
            combined[e.0] += scale * i128::from(c[e.0] - lo);
        }
        let spread = n * i128::from(hi - lo) + 1;
        match scale.checked_mul(spread) {
            Some(s) => scale = s,
            None => overflow = true,
        }
    }
    let ok = !overflow
        && ctx.core.is_stable(&best.matching).unwrap_or(false)
        && cheapest_stable_matching(&ctx.core, &ctx.d, &combined)
            .is_ok_and(|b| cost_of(&combined, &b.matching) == cost_of(&combined, &best.matching));
    let values: Vec<String> = best.values.iter().map(i64::to_string).collect();
    Ok(report(
        json!({"matching": ctx.names(&best.matching), "values": best.values}),
        Value::Null,
        json!(best.values),
        ok,
        vec![format!("matching: {}", ctx.show(&best.matching))],
        format!("values={}", values.join(",")),
    ))
}

fn constrained(
    ctx: &Context,
    force: &[String],
    forbid: &[String],
    cost: Option<&Path>,
    corrupt: bool,
) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let forced_input = ctx.edges(force)?;
    let forbidden: Vec<EdgeId> = ctx.edges(forbid)?.into_iter().filter_map(|e| ctx.core.core_edge(e)).collect();
    let c = match cost {
        Some(_) => Some(ctx.values(cost, "cost", 0)?),
        None => None,
    };
    let forced: Option<Vec<EdgeId>> = forced_input.iter().map(|&e| ctx.core.core_edge(e)).collect();
    let result = match forced {
        None => Err(Error::Infeasible),
        Some(forced) => constrained_stable_matching(&ctx.core, &ctx.d, &forced, &forbidden, c.as_deref()),
    };
    match result {
        Ok(mut m) => {
            if corrupt {
                damage(&mut m);
            }
            let ok = ctx.core.is_stable(&m).unwrap_or(false)
                && forced_input.iter().all(|&e| ctx.core.core_edge(e).is_some_and(|f| m.contains(f)))
                && forbidden.iter().all(|&e| !m.contains(e));
            Ok(report(
                json!({"matching": ctx.names(&m)}),
                Value::Null,
                json!(ctx.names(&m).len()),
                ok,
                vec![format!("matching: {}", ctx.show(&m))],
                "feasible".into(),
            ))
        }
        Err(Error::Infeasible) => Ok(infeasible(report(
            json!({"matching": Value::Null}),
            Value::Null,
            Value::Null,
            !corrupt,
            vec!["no stable matching meets the constraints".into()],
            "infeasible".into(),
        ))),
        Err(e) => Err(e.into()),
    }
}

fn packing_json(ctx: &Context, cert: &PackingCertificate<i64>) -> (Value, Value, Vec<String>) {
    let family: Vec<Value> =
        cert.family.iter().map(|(m, k)| json!({"matching": ctx.names(m), "multiplicity": k})).collect();
    let blocker = ctx.edge_names(&cert.blocker);
    let mut lines: Vec<String> = cert.family.iter().map(|(m, k)| format!("{k} x {}", ctx.show(m))).collect();
    lines.push(format!("blocker: {{{}}}", blocker.join(", ")));
    (json!(family), json!({"blocker": blocker}), lines)
}

fn pack(ctx: &Context, h: Option<i64>, cost: Option<&Path>, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let hv = match h {
        Some(v) if v < 0 => return Err(CliError::Input("h must be nonnegative".into())),
        Some(v) => vec![v; ctx.core.system().edge_count()],
        None => ctx.values(None, "h", 1)?,
    };
    let c = match cost {
        Some(_) => Some(ctx.values(cost, "cost", 0)?),
        None => None,
    };
    let mut cert = pack_h_independent(&ctx.core, &ctx.d, &hv, c.as_deref())?;
    if corrupt {
        cert.blocker.pop();
    }
    let ok = cert.verify(&ctx.core, &ctx.d, &hv, c.as_deref()).is_ok();
    let (primal, dual, lines) = packing_json(ctx, &cert);
    Ok(report(primal, dual, json!(cert.value), ok, lines, format!("nu={} tau={}", cert.nu(), cert.tau(&hv))))
}

/// Report for fewer than `ell` disjoint stable matchings, certified by a
/// maximum packing and a blocker of the same size.
fn too_few_disjoint(ctx: &Context, ell: usize, corrupt: bool) -> Result<Report, CliError> {
    let ones = vec![1i64; ctx.core.system().edge_count()];
    let mut cert = pack_h_independent(&ctx.core, &ctx.d, &ones, None)?;
    if corrupt {
        cert.blocker.pop();
    }
    let ok = cert.verify(&ctx.core, &ctx.d, &ones, None).is_ok() && (cert.value as usize) < ell;
    let (primal, dual, mut lines) = packing_json(ctx, &cert);
    lines.insert(0, format!("only {} disjoint stable matchings exist", cert.value));
    Ok(infeasible(report(
        json!({"infeasible": true, "disjoint": primal}),
        dual,
        json!(cert.value),
        ok,
        lines,
        format!("infeasible: ell={ell} available={}", cert.value),
    )))
}

fn lcut_lines(ctx: &Context, cert: &stablecut::LCutCertificate) -> (Value, Vec<String>) {
    let shores: Vec<Vec<String>> = cert.shores.iter().map(|z| ctx.shore(z)).collect();
    let mut lines: Vec<String> = shores.iter().map(|z| format!("shore: {}", z.join(" "))).collect();
    lines.push(format!("potential: {}", cert.potential.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")));
    lines.push(format!("flow amount {} surplus {} dual {}", cert.amount, cert.surplus, cert.dual));
    let dual = json!({
        "flow": cert.flow,
        "potential": cert.potential,
        "amount": cert.amount,
        "surplus": cert.surplus,
        "dual": cert.dual,
    });
    (dual, lines)
}

fn lcut(ctx: &Context, ell: usize, cost: Option<&Path>, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let g = ctx.values(cost, "cost", 1)?;
    if ctx.core.stable_edges().iter().any(|e| g[e.0] < 0) {
        return Err(CliError::Input("capacities must be nonnegative".into()));
    }
    let empty = RingCode::full(ctx.d.node_count(), ctx.d.source(), ctx.d.sink());
    let net = ctx.d.network(&empty, |e| stablecut::scalar::Capacity::Finite(g[e.0]));
    let mut cert = match min_lcut_in_ring(&net, ctx.d.ring(), ell) {
        Ok(cert) => cert,
        Err(Error::NoFiniteLCut { .. }) => return too_few_disjoint(ctx, ell, corrupt),
        Err(e) => return Err(e.into()),
    };
    if corrupt {
        cert.capacity -= 1;
    }
    let ok = cert.verify().is_ok();
    let matchings: Vec<Matching> = cert.shores.iter().map(|z| ctx.d.matching_of(z)).collect::<Result<_, _>>()?;
    let (dual, mut lines) = lcut_lines(ctx, &cert);
    lines.extend(matchings.iter().map(|m| format!("matching: {}", ctx.show(m))));
    Ok(report(
        json!({"shores": cert.shores.iter().map(|z| ctx.shore(z)).collect::<Vec<_>>(), "matchings": matchings.iter().map(|m| ctx.names(m)).collect::<Vec<_>>()}),
        dual,
        json!(cert.capacity),
        ok,
        lines,
        format!("capacity={} dual={}", cert.capacity, cert.dual),
    ))
}

fn pack_min_cost(ctx: &Context, ell: usize, cost: Option<&Path>, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let c = ctx.values(cost, "cost", 0)?;
    let mut fam = match disjoint_stable_matchings_min_total_cost(&ctx.core, &ctx.d, ell, &c) {
        Ok(fam) => fam,
        Err(Error::InsufficientDisjoint { .. }) => return too_few_disjoint(ctx, ell, corrupt),
        Err(e) => return Err(e.into()),
    };
    if corrupt {
        fam.certificate.dual += 1;
    }
    let pairwise = fam.matchings.iter().enumerate().all(|(i, a)| fam.matchings[i + 1..].iter().all(|b| a.is_disjoint(b)));
    let ok = fam.certificate.verify().is_ok()
        && pairwise
        && fam.matchings.iter().all(|m| ctx.core.is_stable(m).unwrap_or(false))
        && fam.matchings.iter().map(|m| cost_of(&c, m)).sum::<i64>() == fam.total_cost;
    let (dual, mut lines) = lcut_lines(ctx, &fam.certificate);
    lines.extend(fam.matchings.iter().map(|m| format!("matching: {}", ctx.show(m))));
    Ok(report(
        json!({"matchings": fam.matchings.iter().map(|m| ctx.names(m)).collect::<Vec<_>>(), "total_cost": fam.total_cost}),
        dual,
        json!(fam.total_cost),
        ok,
        lines,
        format!("total_cost={}", fam.total_cost),
    ))
}

fn max_union(ctx: &Context, ell: usize, weight: Option<&Path>, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let w = ctx.values(weight, "weight", 1)?;
    let mut fam = max_weight_union(&ctx.core, ell, &w)?;
    if corrupt {
        fam.weight += 1;
    }
    let union: BTreeSet<EdgeId> = fam.matchings.iter().flat_map(|m| m.iter()).collect();
    let ok = fam.certificate.verify().is_ok()
        && fam.matchings.len() == ell
        && fam.matchings.iter().all(|m| ctx.core.is_stable(m).unwrap_or(false))
        && union.iter().map(|e| w[e.0]).sum::<i64>() == fam.weight;
    let lines = fam.matchings.iter().map(|m| format!("matching: {}", ctx.show(m))).collect();
    Ok(report(
        json!({"matchings": fam.matchings.iter().map(|m| ctx.names(m)).collect::<Vec<_>>()}),
        json!({"amount": fam.certificate.amount, "surplus": fam.certificate.surplus, "dual": fam.certificate.dual}),
        json!(fam.weight),
        ok,
        lines,
        format!("weight={}", fam.weight),
    ))
}

fn cover(ctx: &Context, weight: Option<&Path>, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let f = ctx.values(weight, "weight", 1)?;
    let p = InducedPoset::new(&ctx.core, &ctx.d);
    let (mut family, chain) = p.mirsky_cover(&ctx.core, &f)?;
    if corrupt {
        if let Some((_, k)) = family.first_mut() {
            *k += 1;
        }
    }
    let size: i64 = family.iter().map(|(_, k)| k).sum();
    let idx: Vec<usize> = chain.iter().map(|&e| p.index_of(e).expect("stable edge")).collect();
    let ok = p.poset().is_chain(&idx)
        && size == chain.iter().map(|e| f[e.0]).sum::<i64>()
        && family.iter().all(|(m, _)| ctx.core.is_stable(m).unwrap_or(false))
        && ctx.core.stable_edges().iter().all(|&e| family.iter().filter(|(m, _)| m.contains(e)).map(|(_, k)| k).sum::<i64>() >= f[e.0]);
    let mut lines: Vec<String> = family.iter().map(|(m, k)| format!("{k} x {}", ctx.show(m))).collect();
    lines.push(format!("chain: {}", ctx.edge_names(&chain).join(" > ")));
    Ok(report(
        json!(family.iter().map(|(m, k)| json!({"matching": ctx.names(m), "multiplicity": k})).collect::<Vec<_>>()),
        json!({"chain": ctx.edge_names(&chain)}),
        json!(size),
        ok,
        lines,
        format!("size={size}"),
    ))
}

fn dilworth(ctx: &Context, weight: Option<&Path>, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let w = ctx.values(weight, "weight", 1)?;
    let p = InducedPoset::new(&ctx.core, &ctx.d);
    let (m, mut cover) = p.dilworth(&ctx.core, &w)?;
    if corrupt {
        cover.chains.pop();
    }
    let lifted = p.lift(&w);
    let total: i64 = cover.chains.iter().map(|(_, k)| k).sum();
    let ok = p.poset().is_antichain(&cover.antichain)
        && cover.antichain.iter().map(|&x| lifted[x]).sum::<i64>() == cover.weight
        && total == cover.weight
        && cover.chains.iter().all(|(c, k)| *k > 0 && p.poset().is_chain(c))
        && (0..lifted.len()).all(|x| cover.chains.iter().filter(|(c, _)| c.contains(&x)).map(|(_, k)| k).sum::<i64>() >= lifted[x])
        && ctx.core.is_stable(&m).unwrap_or(false);
    let chains: Vec<Value> =
        cover.chains.iter().map(|(c, k)| json!({"chain": ctx.edge_names(&p.to_edges(c)), "multiplicity": k})).collect();
    let mut lines = vec![
        format!("antichain: {{{}}}", ctx.edge_names(&p.to_edges(&cover.antichain)).join(", ")),
        format!("matching: {}", ctx.show(&m)),
    ];
    lines.extend(cover.chains.iter().map(|(c, k)| format!("{k} x {}", ctx.edge_names(&p.to_edges(c)).join(" > "))));
    Ok(report(
        json!({"antichain": ctx.edge_names(&p.to_edges(&cover.antichain)), "matching": ctx.names(&m)}),
        json!({"chains": chains}),
        json!(cover.weight),
        ok,
        lines,
        format!("weight={} chains={total}", cover.weight),
    ))
}

fn gk(ctx: &Context, ell: usize, weight: Option<&Path>, max_copies: usize, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let w = ctx.values(weight, "weight", 1)?;
    let p = InducedPoset::new(&ctx.core, &ctx.d);
    let lifted = p.lift(&w);
    let mut cert = weighted_greene_kleitman(p.poset(), &lifted, ell, max_copies)?;
    if corrupt {
        cert.value += 1;
    }
    let ok = cert.verify(p.poset(), &lifted).is_ok();
    let antichains: Vec<Vec<String>> = cert.antichains.iter().map(|a| ctx.edge_names(&p.to_edges(a))).collect();
    let chains: Vec<Vec<String>> = cert.chains.iter().map(|c| ctx.edge_names(&p.to_edges(c))).collect();
    let mut lines: Vec<String> = antichains.iter().map(|a| format!("antichain: {{{}}}", a.join(", "))).collect();
    lines.extend(chains.iter().map(|c| format!("chain: {}", c.join(" > "))));
    Ok(report(
        json!({"antichains": antichains}),
        json!({"chains": chains}),
        json!(cert.value),
        ok,
        lines,
        format!("alpha={}", cert.value),
    ))
}

fn fair(ctx: &Context, corrupt: bool) -> Result<Report, CliError> {
    ctx.require_nonempty()?;
    let levels = if ctx.inst.levels.is_empty() {
        LevelAssignment::rank_levels(&ctx.core)
    } else {
        let m = ctx.core.system().edge_count();
        let (mut boy, mut girl) = (vec![None; m], vec![None; m]);
        for l in &ctx.inst.levels {
            if let Some(e) = ctx.core.core_edge(l.edge) {
                let slot = if l.boy_side { &mut boy } else { &mut girl };
                slot[e.0] = Some(l.level);
            }
        }
        LevelAssignment::new(&ctx.core, boy, girl)?
    };
    let (mut m, sig) = fair_stable_matching(&ctx.core, &ctx.d, &levels)?;
    if corrupt {
        damage(&mut m);
    }
    let mut counts = level_count_vector(&levels, &m);
    while counts.last() == Some(&0) {
        counts.pop();
    }
    let consistent = counts.iter().enumerate().all(|(l, &k)| {
        match sig.lambdas.iter().position(|&x| x as usize == l + 1) {
            Some(i) => sig.betas[i] == k,
            None => k == 0,
        }
    });
    let ok = consistent && ctx.core.is_stable(&m).unwrap_or(false) && sig.betas.iter().sum::<usize>() == 2 * ctx.core.n();
    let lambdas: Vec<String> = sig.lambdas.iter().map(u32::to_string).collect();
    let betas: Vec<String> = sig.betas.iter().map(usize::to_string).collect();
    Ok(report(
        json!({"matching": ctx.names(&m), "level_counts": counts}),
        json!({"lambdas": sig.lambdas, "betas": sig.betas}),
        json!(counts),
        ok,
        vec![
            format!("matching: {}", ctx.show(&m)),
            format!("level counts: {}", counts.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")),
        ],
        format!("lambdas={} betas={}", lambdas.join(","), betas.join(",")),
    ))
}
