//! Command dispatch for the `cycloid` binary.
//!
//! [`run`] parses arguments and returns the exit code with the text destined for
//! stdout and stderr, so the whole front end can be exercised without a process.
//!
//! Exit codes: 0 success or property holds, 1 property fails, 2 usage, parse or
//! domain error, 3 resource bound hit or inconclusive result.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cycloid::algebra::{self, CycloidSpec, Point, RegularCoordinate, RegularKind};
use cycloid::io::{self, Format};
use cycloid::net::{
    add_stop_transitions, backward_fold, delete_process, fold_marking, make_stop_resilient, regular_marking,
    standard_marking, synthesize, synthesize_regular, FoldSpec, Marking, Net, NodeId,
};
use cycloid::semantics::{
    self, check_fold_bisimulation, check_liveness, check_safety, isomorphic, reachability, FiringRule, Property,
    PropertyReport, Verdict, DEFAULT_MAX_STATES,
};
use cycloid::Error;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "cycloid", version, about = "Synthesize and analyse cycloid Petri nets")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Area, process length, cycle structure and minimal cycle length.
    Info(SpecArgs),
    /// Build a net and summarize it; optionally write it as JSON.
    Build(NetArgs),
    /// Test whether two points are equivalent: `equiv A B G D -- X1 Y1 X2 Y2`.
    Equiv(PointArgs),
    /// Map a point into the fundamental parallelogram: `normalize A B G D -- X Y`.
    Normalize(PointArgs),
    /// Backward folding of a regular cycloid; lists the fold classes.
    Fold(NetArgs),
    /// Add stop transitions to a folded cycloid (default: all processes, total fold).
    Stop(NetArgs),
    /// Delete a process from a folded cycloid.
    Delete(NetArgs),
    /// Exhaustive check of safety, liveness or fold bisimulation.
    Check(CheckArgs),
    /// Repeated stop, cascade and deletion on C^stop_bf(G, C).
    Scenario(ScenarioArgs),
    /// Net isomorphism between two cycloids: `iso A B G D A' B' G' D'`.
    Iso(IsoArgs),
    /// Serialize a net as DOT, PNML or JSON.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct SpecArgs {
    #[arg(value_name = "PARAM", num_args = 4, required = true, allow_negative_numbers = true)]
    params: Vec<i64>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(value_name = "PARAM", num_args = 4, required = true, allow_negative_numbers = true)]
    params: Vec<i64>,
    #[arg(value_name = "COORD", last = true, allow_negative_numbers = true)]
    coords: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MarkingKind {
    Standard,
    Regular,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Rule {
    Plain,
    ContactFree,
}

impl From<Rule> for FiringRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Plain => FiringRule::Plain,
            Rule::ContactFree => FiringRule::ContactFree,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct NetArgs {
    /// Cycloid parameters α β γ δ (omit with --input).
    #[arg(value_name = "PARAM", num_args = 0..=4, allow_negative_numbers = true)]
    params: Vec<i64>,
    /// Read net and marking from a JSON export instead.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Backward folding: `total` or a comma-separated index set such as `0,2`.
    #[arg(long, value_name = "D")]
    fold: Option<String>,
    /// Add stop transitions for these processes (comma-separated, or `all`).
    #[arg(long = "stop", value_name = "J")]
    stop: Option<String>,
    /// Allow stop transitions on nets other than total folds of C(g,c,c,c).
    #[arg(long)]
    force: bool,
    /// Delete this process after folding.
    #[arg(long = "delete", value_name = "J")]
    delete: Option<usize>,
    /// Initial marking.
    #[arg(long, value_enum, default_value = "regular")]
    marking: MarkingKind,
    /// Use the k-regular marking.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Fire these transitions first (`;`-separated ids or regular aliases like `t[1,1]`).
    #[arg(long, value_name = "SEQ")]
    fire: Option<String>,
    /// Write the JSON export of the resulting net here.
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Safe,
    Live,
    Bisim,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    net: NetArgs,
    #[arg(long, value_enum, default_value = "safe")]
    property: PropertyArg,
    #[arg(long, value_enum, default_value = "plain")]
    rule: Rule,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Liveness: only these transitions (`;`-separated).
    #[arg(long, value_name = "SEQ")]
    transitions: Option<String>,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    g: i64,
    c: i64,
    s: i64,
}

#[derive(Args, Debug)]
struct IsoArgs {
    #[arg(value_name = "PARAM", num_args = 8, required = true)]
    params: Vec<i64>,
    /// Also require the given markings to correspond.
    #[arg(long, value_enum, default_value = "none")]
    marking: MarkingKind,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    net: NetArgs,
    #[arg(long, default_value = "json")]
    format: String,
}

/// Parses and executes one command line (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok(out) => out,
        Err(e) => {
            let code = match e {
                Error::Resource(_) => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            };
            let stderr = if json {
                format!("{}\n", json!({"error": e.to_string(), "exit": code}))
            } else {
                format!("error: {e}\n")
            };
            Outcome {
                code,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

type Res<T> = std::result::Result<T, Error>;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn spec_of(params: &[i64]) -> Res<CycloidSpec> {
    match params {
        [a, b, g, d] => CycloidSpec::new(*a, *b, *g, *d),
        _ => Err(usage(format!("expected 4 cycloid parameters, got {}", params.len()))),
    }
}

fn dispatch(cli: Cli) -> Res<Outcome> {
    let json = cli.json;
    match cli.verb {
        Verb::Info(a) => info(&spec_of(&a.params)?, json),
        Verb::Equiv(a) => equiv(&a, json),
        Verb::Normalize(a) => normalize(&a, json),
        Verb::Build(a) => summarize(&a, json, Shape::Plain),
        Verb::Fold(a) => summarize(&a, json, Shape::Fold),
        Verb::Stop(a) => summarize(&a, json, Shape::Stop),
        Verb::Delete(a) => summarize(&a, json, Shape::Delete),
        Verb::Check(a) => check(&a, json),
        Verb::Scenario(a) => scenario(&a, json),
        Verb::Iso(a) => iso(&a, json),
        Verb::Export(a) => export(&a, json),
    }
}

fn ok(stdout: String) -> Res<Outcome> {
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn info(spec: &CycloidSpec, json: bool) -> Res<Outcome> {
    let m = algebra::metrics(spec);
    if json {
        return ok(pretty(&json!({"spec": spec, "metrics": m})));
    }
    let mut out = String::new();
    let p = m.process_len.map_or("-".to_string(), |p| p.to_string());
    writeln!(
        out,
        "{spec}: A={} p={p} n={} regular={}",
        m.area,
        m.n,
        yes_no(m.is_regular)
    )
    .unwrap();
    writeln!(
        out,
        "forward cycles: {} of length {}, {} token(s) each",
        m.fwd_cycle_count, m.fwd_cycle_len, m.fwd_tokens_per_cycle
    )
    .unwrap();
    writeln!(
        out,
        "backward cycles: {} of length {}, {} token(s) each",
        m.bwd_cycle_count, m.bwd_cycle_len, m.bwd_tokens_per_cycle
    )
    .unwrap();
    let source = serde_json::to_value(m.min_cycle.source).expect("enum serializes");
    writeln!(
        out,
        "minimal cycle length: {} ({})",
        m.min_cycle.value,
        source.as_str().unwrap_or("")
    )
    .unwrap();
    ok(out)
}

fn points_of(coords: &[i64], count: usize) -> Res<Vec<Point>> {
    if coords.len() != 2 * count {
        return Err(usage(format!(
            "expected {} coordinates after `--`, got {}",
            2 * count,
            coords.len()
        )));
    }
    Ok(coords.chunks(2).map(|c| Point::new(c[0], c[1])).collect())
}

fn equiv(a: &PointArgs, json: bool) -> Res<Outcome> {
    let spec = spec_of(&a.params)?;
    let pts = points_of(&a.coords, 2)?;
    let same = algebra::equivalent(&spec, pts[0], pts[1]);
    let pv = algebra::parameter_vector(&spec, pts[1] - pts[0]);
    let stdout = if json {
        pretty(&json!({"spec": spec, "a": pts[0], "b": pts[1], "equivalent": same, "parameter_vector": pv}))
    } else {
        let verdict = if same { "equivalent" } else { "not equivalent" };
        format!(
            "{} {verdict} {} in {spec} (parameter vector ({}/{}, {}/{}))\n",
            pts[0], pts[1], pv.num1, pv.den, pv.num2, pv.den
        )
    };
    Ok(Outcome {
        code: if same { EXIT_OK } else { EXIT_FAILS },
        stdout,
        stderr: String::new(),
    })
}

fn normalize(a: &PointArgs, json: bool) -> Res<Outcome> {
    let spec = spec_of(&a.params)?;
    let pts = points_of(&a.coords, 1)?;
    let w = algebra::normalize(&spec, pts[0]);
    if json {
        return ok(pretty(&json!({"spec": spec, "point": pts[0], "witness": w})));
    }
    ok(format!("{}\n", w.representative))
}

fn parse_indices(text: &str, beta: i64) -> Res<BTreeSet<usize>> {
    if text == "total" || text == "all" {
        return Ok((0..beta.max(0) as usize).collect());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad index list {text:?}")))
        })
        .collect()
}

/// Resolves a node given as a canonical id or as a regular alias.
fn resolve(net: &Net, text: &str) -> Res<NodeId> {
    let text = text.trim();
    if let Ok(id) = text.parse::<NodeId>() {
        return if net.contains(&id) {
            Ok(id)
        } else {
            Err(Error::UnknownNode(id.to_string()))
        };
    }
    let rc: RegularCoordinate = text.parse().map_err(|_| usage(format!("cannot parse node {text:?}")))?;
    let (i, j) = (rc.i as i64, rc.j as i64);
    let found = match rc.kind {
        RegularKind::Transition => net.t(i, j),
        RegularKind::FwdPlace => net.s(i, j),
        RegularKind::BwdPlace => net.s_bwd(i, j),
    };
    found.ok_or_else(|| Error::UnknownNode(text.to_string()))
}

fn resolve_list(net: &Net, text: &str) -> Res<Vec<NodeId>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| resolve(net, s))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Plain,
    Fold,
    Stop,
    Delete,
}

struct Built {
    net: Net,
    marking: Marking,
    /// Unfolded net and marking, kept for the bisimulation check.
    base: Option<(Net, Marking)>,
    fired: Vec<NodeId>,
    deleted: Option<usize>,
}

fn build(a: &NetArgs, shape: Shape) -> Res<Built> {
    let mut built = if let Some(path) = &a.input {
        if !a.params.is_empty() {
            return Err(usage("give either cycloid parameters or --input, not both"));
        }
        let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let (net, marking) = io::import_json(&bytes)?;
        Built {
            net,
            marking,
            base: None,
            fired: Vec::new(),
            deleted: None,
        }
    } else {
        let spec = spec_of(&a.params)?;
        let marking = match a.marking {
            MarkingKind::Standard if a.k == 0 => standard_marking(&spec),
            MarkingKind::Standard => return Err(usage("--k applies to the regular marking only")),
            MarkingKind::Regular => regular_marking(&spec, a.k)?,
            MarkingKind::None => Marking::new(),
        };
        let wants_fold = a.fold.is_some() || a.stop.is_some() || a.delete.is_some() || shape != Shape::Plain;
        let net = if spec.is_regular() {
            synthesize_regular(&spec)?
        } else {
            synthesize(&spec)
        };
        if !wants_fold {
            Built {
                net,
                marking,
                base: None,
                fired: Vec::new(),
                deleted: None,
            }
        } else {
            let d = FoldSpec::new(parse_indices(a.fold.as_deref().unwrap_or("total"), spec.beta())?)?;
            let folded = backward_fold(&net, &d)?;
            let fm = fold_marking(&folded, &marking)?;
            Built {
                net: folded,
                marking: fm,
                base: Some((net, marking)),
                fired: Vec::new(),
                deleted: None,
            }
        }
    };
    let stop = match (&a.stop, shape) {
        (Some(s), _) => Some(s.as_str()),
        (None, Shape::Stop) => Some("all"),
        (None, _) => None,
    };
    if let Some(list) = stop {
        let processes = parse_indices(list, built.net.spec().beta())?;
        built.net = add_stop_transitions(&built.net, &processes, a.force)?;
        built.base = None;
    }
    if let Some(seq) = &a.fire {
        let seq = resolve_list(&built.net, seq)?;
        built.marking = semantics::replay(&built.net, &built.marking, &seq, FiringRule::Plain)?;
        built.fired = seq;
        built.base = None;
    }
    let delete = match (a.delete, shape) {
        (Some(j), _) => Some(j),
        (None, Shape::Delete) => return Err(usage("delete needs --delete J")),
        (None, _) => None,
    };
    if let Some(j) = delete {
        built.net = delete_process(&built.net, j)?;
        let mut kept = Marking::new();
        for (p, c) in built.marking.iter().filter(|(p, _)| built.net.places().contains(p)) {
            kept.add(*p, c);
        }
        built.marking = kept;
        built.base = None;
        built.deleted = Some(j);
    }
    if let Some(path) = &a.output {
        let payload = io::export(&built.net, &built.marking, Format::Json).payload;
        std::fs::write(path, payload).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(built)
}

fn summarize(a: &NetArgs, json: bool, shape: Shape) -> Res<Outcome> {
    let b = build(a, shape)?;
    let net = &b.net;
    let stops: Vec<NodeId> = net
        .transitions()
        .iter()
        .copied()
        .filter(|t| matches!(t, NodeId::TStop(_)))
        .collect();
    if json {
        let classes: Vec<Value> = net
            .folding()
            .map(|f| {
                f.classes()
                    .map(|c| json!({"id": NodeId::SbClass(c.index), "members": c.members}))
                    .collect()
            })
            .unwrap_or_default();
        let stop_arcs: Vec<Value> = stops
            .iter()
            .map(|t| json!({"id": t, "pre": net.preset(t), "post": net.postset(t)}))
            .collect();
        return ok(pretty(&json!({
            "spec": net.spec(),
            "transitions": net.transitions().len(),
            "places": net.places().len(),
            "arcs": net.flow().len(),
            "folded": net.folding().map(|f| f.spec().back_indices()),
            "fold_classes": classes,
            "stop_transitions": stop_arcs,
            "fired": b.fired,
            "deleted": b.deleted,
            "marking": b.marking,
        })));
    }
    let mut out = String::new();
    let mut kind = match net.folding() {
        Some(f) => {
            let d: Vec<String> = f.spec().back_indices().iter().map(|j| j.to_string()).collect();
            format!(" folded with D={{{}}}", d.join(","))
        }
        None => String::new(),
    };
    if let Some(j) = b.deleted {
        write!(kind, ", process a_{j} deleted").unwrap();
    }
    writeln!(
        out,
        "{}{kind}: {} transitions, {} places, {} arcs",
        net.spec(),
        net.transitions().len(),
        net.places().len(),
        net.flow().len()
    )
    .unwrap();
    if shape == Shape::Fold {
        let unfolded = synthesize_regular(net.spec())?;
        for class in net.folding().into_iter().flat_map(|f| f.classes()) {
            let members: Vec<String> = class
                .members
                .iter()
                .map(|m| unfolded.label(m).map_or(m.to_string(), |rc| rc.to_string()))
                .collect();
            writeln!(out, "{} = {{{}}}", NodeId::SbClass(class.index), members.join(", ")).unwrap();
        }
    }
    for t in &stops {
        let names = |v: &[NodeId]| v.iter().map(|n| net.describe(n)).collect::<Vec<_>>().join(", ");
        writeln!(
            out,
            "{t}: pre {{{}}} post {{{}}}",
            names(net.preset(t)),
            names(net.postset(t))
        )
        .unwrap();
    }
    if !b.fired.is_empty() {
        let seq: Vec<String> = b.fired.iter().map(|t| net.describe(t)).collect();
        writeln!(out, "fired: {}", seq.join(" ")).unwrap();
    }
    writeln!(out, "marking: {}", b.marking).unwrap();
    ok(out)
}

fn verdict_code(r: &PropertyReport) -> i32 {
    match r.verdict {
        Verdict::Holds => EXIT_OK,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Inconclusive => EXIT_RESOURCE,
    }
}

fn render_report(r: &PropertyReport, net: Option<&Net>) -> String {
    let describe = |n: &NodeId| net.map_or(n.to_string(), |net| net.describe(n));
    let mut out = String::new();
    let property = serde_json::to_value(r.property).expect("enum serializes");
    let verdict = serde_json::to_value(r.verdict).expect("enum serializes");
    let stats = if r.property == Property::Isomorphic {
        format!("{} search steps", r.stats.states)
    } else {
        format!(
            "{} states, {} edges{}",
            r.stats.states,
            r.stats.edges,
            if r.stats.complete { "" } else { ", incomplete" }
        )
    };
    writeln!(
        out,
        "{}: {} ({stats})",
        property.as_str().unwrap_or(""),
        verdict.as_str().unwrap_or("")
    )
    .unwrap();
    if let Some(w) = &r.witness {
        if let Some(note) = &w.note {
            writeln!(out, "  note: {note}").unwrap();
        }
        if !w.sequence.is_empty() || w.marking.is_some() {
            let seq: Vec<String> = w.sequence.iter().map(describe).collect();
            writeln!(
                out,
                "  sequence: {}",
                if seq.is_empty() {
                    "(empty)".into()
                } else {
                    seq.join(" ")
                }
            )
            .unwrap();
        }
        if let Some(t) = &w.transition {
            writeln!(out, "  transition: {}", describe(t)).unwrap();
        }
        if let Some(p) = &w.place {
            writeln!(out, "  place: {}", describe(p)).unwrap();
        }
        if let Some(m) = &w.marking {
            writeln!(out, "  marking: {m}").unwrap();
        }
        if let Some(map) = &w.mapping {
            writeln!(out, "  mapping: {} node pairs", map.len()).unwrap();
        }
    }
    out
}

fn check(a: &CheckArgs, json: bool) -> Res<Outcome> {
    let b = build(&a.net, Shape::Plain)?;
    let rule = FiringRule::from(a.rule);
    let report = match a.property {
        PropertyArg::Safe => check_safety(&reachability(&b.net, &b.marking, rule, a.max_states)?),
        PropertyArg::Live => {
            let rg = reachability(&b.net, &b.marking, rule, a.max_states)?;
            let wanted = match &a.transitions {
                Some(list) => resolve_list(&b.net, list)?,
                None => Vec::new(),
            };
            check_liveness(&rg, &wanted)?
        }
        PropertyArg::Bisim => {
            let (base, m0) = b
                .base
                .as_ref()
                .ok_or_else(|| usage("--property bisim needs a freshly folded net (--fold, no stop/fire/delete)"))?;
            check_fold_bisimulation(base, m0, &b.net, rule, a.max_states)?
        }
    };
    let stdout = if json {
        pretty(&serde_json::to_value(&report).expect("report serializes"))
    } else {
        render_report(&report, Some(&b.net))
    };
    Ok(Outcome {
        code: verdict_code(&report),
        stdout,
        stderr: String::new(),
    })
}

fn scenario(a: &ScenarioArgs, json: bool) -> Res<Outcome> {
    let r = semantics::stop_scenario(a.g, a.c, a.s)?;
    let stdout = if json {
        pretty(&serde_json::to_value(&r).expect("report serializes"))
    } else {
        let mut out = String::new();
        writeln!(
            out,
            "stop scenario g={} c={} s={}: {}",
            a.g,
            a.c,
            a.s,
            if r.holds { "holds" } else { "fails" }
        )
        .unwrap();
        for it in &r.iterations {
            let net = make_stop_resilient(it.g, it.c)?;
            let seq: Vec<String> = it.sequence.iter().map(|t| net.describe(t)).collect();
            writeln!(
                out,
                "round C^stop_bf({},{}): stop a_{} then {}",
                it.g,
                it.c,
                it.stopped,
                seq[1..].join(" ")
            )
            .unwrap();
            writeln!(
                out,
                "  compared with {}{}",
                it.reference,
                if it.degenerate {
                    " (degenerate: single process, nothing folded)"
                } else {
                    ""
                }
            )
            .unwrap();
            for r in [&it.isomorphism, &it.safety, &it.liveness] {
                for line in render_report(r, None).lines() {
                    writeln!(out, "  {line}").unwrap();
                }
            }
        }
        out
    };
    Ok(Outcome {
        code: if r.holds { EXIT_OK } else { EXIT_FAILS },
        stdout,
        stderr: String::new(),
    })
}

fn iso(a: &IsoArgs, json: bool) -> Res<Outcome> {
    let left = spec_of(&a.params[..4])?;
    let right = spec_of(&a.params[4..])?;
    let (na, nb) = (synthesize(&left), synthesize(&right));
    let markings = match a.marking {
        MarkingKind::None => None,
        MarkingKind::Standard => Some((standard_marking(&left), standard_marking(&right))),
        MarkingKind::Regular => Some((regular_marking(&left, 0)?, regular_marking(&right, 0)?)),
    };
    let report = isomorphic(&na, &nb, markings.as_ref().map(|(x, y)| (x, y)))?;
    let stdout = if json {
        pretty(&serde_json::to_value(&report).expect("report serializes"))
    } else {
        format!("{left} vs {right}\n{}", render_report(&report, None))
    };
    Ok(Outcome {
        code: verdict_code(&report),
        stdout,
        stderr: String::new(),
    })
}

fn export(a: &ExportArgs, json: bool) -> Res<Outcome> {
    let format: Format = a.format.parse()?;
    let mut net_args = a.net.clone();
    let output = net_args.output.take();
    let b = build(&net_args, Shape::Plain)?;
    let payload = io::export(&b.net, &b.marking, format).payload;
    match output {
        Some(path) => {
            std::fs::write(&path, &payload).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            let stdout = if json {
                pretty(&json!({"format": format, "path": path.display().to_string(), "bytes": payload.len()}))
            } else {
                format!("wrote {} bytes of {format} to {}\n", payload.len(), path.display())
            };
            ok(stdout)
        }
        None => ok(String::from_utf8(payload).expect("exports are UTF-8")),
    }
}
