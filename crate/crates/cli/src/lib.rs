//! Batch front end: every command reads text format v1 files and produces a
//! human-readable report and a JSON report with the same content.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gqplab::bridge::{
    construct_preferences, derive_relation, round_trip, verify_bridge_property,
    verify_theorem2, verify_theorem2_all, BridgeProperty,
};
use gqplab::check::{CheckResult, Verdict, Witness, WitnessValue};
use gqplab::format::{emit_relation, emit_structure, parse, Document};
use gqplab::gqp::{
    check_gqp, classify, gqp_violations, is_complementation_closed, verify_gqp_property,
    EventRelation, GqpProperty,
};
use gqplab::preference::postulates::check_postulates;
use gqplab::preference::{verify_preference_lemma, CheckConfig, Postulate, PreferenceLemma, PreferenceStructure};
use gqplab::search::{
    check_intersection_conjecture, enumerate_gqps, sample_gqps, search_q7_independence,
    total_extensions, ConjectureStatus, ConjectureVerdict, Q7SearchConfig,
};
use gqplab::{Error, Event, PrizePairs, Q5Variant};

pub const REPORT_FORMAT: &str = "gqplab-report/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckPostulates,
    CheckGqp,
    Derive,
    Construct,
    RoundTrip,
    Classify,
    VerifyLemmas,
    Enumerate,
    Extensions,
    Conjecture,
    Q7Search,
    VerifyTheorem2,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckPostulates => "check-postulates",
            Command::CheckGqp => "check-gqp",
            Command::Derive => "derive",
            Command::Construct => "construct",
            Command::RoundTrip => "round-trip",
            Command::Classify => "classify",
            Command::VerifyLemmas => "verify-lemmas",
            Command::Enumerate => "enumerate",
            Command::Extensions => "extensions",
            Command::Conjecture => "conjecture",
            Command::Q7Search => "q7-search",
            Command::VerifyTheorem2 => "verify-theorem2",
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Q5Arg {
    #[default]
    Nonempty,
    Notnull,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PrizeArg {
    #[default]
    All,
    Ordered,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

/// Everything that determines a run; embedded in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<String>,
    pub output: Option<String>,
    pub q5_variant: Q5Arg,
    pub q7_prizes: PrizeArg,
    pub seed: u64,
    pub budget: u64,
    pub cap: usize,
    pub format: OutputFormat,
    pub complete: bool,
    pub states: Option<usize>,
    pub consequences: Option<usize>,
    pub samples: usize,
    pub event: Option<String>,
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: usize = 100;

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            output: None,
            q5_variant: Q5Arg::Nonempty,
            q7_prizes: PrizeArg::All,
            seed: 0,
            budget: DEFAULT_BUDGET,
            cap: gqplab::space::DEFAULT_ACT_CAP,
            format: OutputFormat::Text,
            complete: false,
            states: None,
            consequences: None,
            samples: DEFAULT_SAMPLES,
            event: None,
        }
    }

    pub fn with_input(mut self, path: impl Into<String>) -> Self {
        self.inputs.push(path.into());
        self
    }

    fn check_config(&self) -> CheckConfig {
        let mut cfg = CheckConfig::default()
            .with_q5(match self.q5_variant {
                Q5Arg::Nonempty => Q5Variant::NonEmpty,
                Q5Arg::Notnull => Q5Variant::NotNull,
            })
            .with_q7_prizes(match self.q7_prizes {
                PrizeArg::All => PrizePairs::All,
                PrizeArg::Ordered => PrizePairs::Ordered,
            });
        cfg.act_cap = self.cap;
        cfg
    }
}

#[derive(Debug, Parser)]
#[command(name = "gqplab", version, about = "Check preference postulates and plausibility relations on finite models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Flags {
    #[arg(long, value_enum, default_value_t = Q5Arg::Nonempty, global = true)]
    pub q5: Q5Arg,
    #[arg(long = "q7-prizes", value_enum, default_value_t = PrizeArg::All, global = true)]
    pub q7_prizes: PrizeArg,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Search nodes (enumeration) or structures (Q7 search).
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    pub budget: u64,
    /// Largest act space a structure may have.
    #[arg(long, default_value_t = gqplab::space::DEFAULT_ACT_CAP, global = true)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Enumerate completely instead of sampling.
    #[arg(long, global = true)]
    pub complete: bool,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Check Q0-Q7, Q'4 and R on a preference structure.
    CheckPostulates { input: PathBuf },
    /// Check the g.q.p. axioms on an event relation.
    CheckGqp { input: PathBuf },
    /// Derive the event relation of a preference structure.
    Derive { input: PathBuf },
    /// Build two-valued preferences from a g.q.p.
    Construct { input: PathBuf },
    /// Construct, check and re-derive.
    RoundTrip { input: PathBuf },
    /// Total, standard and purely non-standard flags.
    Classify { input: PathBuf },
    /// Lemma suites for a structure or a relation.
    VerifyLemmas { input: PathBuf },
    /// List g.q.p. on a number of states.
    Enumerate {
        #[arg(long)]
        states: usize,
        /// Samples drawn when not enumerating completely.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Total extensions of a g.q.p.
    Extensions { input: PathBuf },
    /// Intersection of total extensions against the relation.
    Conjecture { input: PathBuf },
    /// Search for Q1-Q6 structures where level-set indifference fails.
    Q7Search {
        #[arg(long, default_value_t = 2)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        consequences: usize,
    },
    /// Level-set indifference on one event or on all events.
    VerifyTheorem2 {
        input: PathBuf,
        /// Event bitstring; all events when absent.
        #[arg(long)]
        event: Option<String>,
    },
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let f = self.flags;
        let path = |p: PathBuf| p.display().to_string();
        let (command, input, states, consequences, samples, event) = match self.command {
            CliCommand::CheckPostulates { input } => (Command::CheckPostulates, Some(input), None, None, None, None),
            CliCommand::CheckGqp { input } => (Command::CheckGqp, Some(input), None, None, None, None),
            CliCommand::Derive { input } => (Command::Derive, Some(input), None, None, None, None),
            CliCommand::Construct { input } => (Command::Construct, Some(input), None, None, None, None),
            CliCommand::RoundTrip { input } => (Command::RoundTrip, Some(input), None, None, None, None),
            CliCommand::Classify { input } => (Command::Classify, Some(input), None, None, None, None),
            CliCommand::VerifyLemmas { input } => (Command::VerifyLemmas, Some(input), None, None, None, None),
            CliCommand::Enumerate { states, samples } => (Command::Enumerate, None, Some(states), None, Some(samples), None),
            CliCommand::Extensions { input } => (Command::Extensions, Some(input), None, None, None, None),
            CliCommand::Conjecture { input } => (Command::Conjecture, Some(input), None, None, None, None),
            CliCommand::Q7Search { states, consequences } => {
                (Command::Q7Search, None, Some(states), Some(consequences), None, None)
            }
            CliCommand::VerifyTheorem2 { input, event } => (Command::VerifyTheorem2, Some(input), None, None, None, event),
        };
        RunConfig {
            command,
            inputs: input.into_iter().map(path).collect(),
            output: f.output.map(path),
            q5_variant: f.q5,
            q7_prizes: f.q7_prizes,
            seed: f.seed,
            budget: f.budget,
            cap: f.cap,
            format: f.format,
            complete: f.complete,
            states,
            consequences,
            samples: samples.unwrap_or(DEFAULT_SAMPLES),
            event,
        }
    }
}

/// Result of a run: the exit status and both renderings of the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub text: String,
    pub machine: String,
    /// Diagnostics for standard error.
    pub diagnostics: String,
}

impl RunOutput {
    /// The rendering selected by the configuration.
    pub fn rendered(&self, format: OutputFormat) -> &str {
        match format {
            OutputFormat::Text => &self.text,
            OutputFormat::Machine => &self.machine,
        }
    }
}

fn status_name(exit_code: i32) -> &'static str {
    match exit_code {
        EXIT_PASS => "pass",
        EXIT_FAIL => "fail",
        EXIT_INCONCLUSIVE => "inconclusive",
        _ => "input-error",
    }
}

/// Report body under construction.
struct Body {
    exit_code: i32,
    lines: Vec<String>,
    results: serde_json::Map<String, Value>,
}

impl Body {
    fn new() -> Self {
        Self {
            exit_code: EXIT_PASS,
            lines: Vec::new(),
            results: serde_json::Map::new(),
        }
    }

    fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn block(&mut self, text: &str) {
        self.lines.extend(text.lines().map(str::to_owned));
    }

    fn put(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_owned(), value);
    }

    /// Raises the exit code toward fail, never back toward pass.
    fn verdict(&mut self, v: Verdict) {
        let code = match v {
            Verdict::Pass => EXIT_PASS,
            Verdict::Fail => EXIT_FAIL,
            Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        };
        self.merge(code);
    }

    fn merge(&mut self, code: i32) {
        // fail outranks inconclusive outranks pass
        let rank = |c| match c {
            EXIT_FAIL => 2,
            EXIT_INCONCLUSIVE => 1,
            _ => 0,
        };
        if rank(code) > rank(self.exit_code) {
            self.exit_code = code;
        }
    }
}

fn witness_json(w: &Witness, n: usize) -> Value {
    Value::Array(
        w.entries
            .iter()
            .map(|(name, v)| match v {
                WitnessValue::Event(e) => json!({"name": name, "event": e.to_bitstring(n)}),
                WitnessValue::Act(a) => json!({"name": name, "act": a.0}),
                WitnessValue::Consequence(c) => json!({"name": name, "consequence": c}),
            })
            .collect(),
    )
}

fn result_json(r: &CheckResult, n: usize, key: &str) -> Value {
    let mut m = serde_json::Map::new();
    m.insert(key.into(), json!(r.check));
    m.insert("verdict".into(), json!(r.verdict.to_string()));
    m.insert("witness".into(), r.witness.as_ref().map_or(Value::Null, |w| witness_json(w, n)));
    m.insert("note".into(), json!(r.note));
    if let Some(v) = r.volume {
        m.insert("volume".into(), json!(v.to_string()));
    }
    Value::Object(m)
}

fn result_line(r: &CheckResult, n: usize) -> String {
    let mut s = format!("{:<28} {}", r.check, r.verdict);
    if let Some(w) = &r.witness {
        let _ = write!(s, "  witness: {}", w.render(n));
    }
    if !r.note.is_empty() {
        let _ = write!(s, "  ({})", r.note);
    }
    s
}

fn record_results(body: &mut Body, key: &str, results: &[CheckResult], n: usize, field: &str) {
    for r in results {
        body.line(result_line(r, n));
        body.verdict(r.verdict);
    }
    body.put(key, Value::Array(results.iter().map(|r| result_json(r, n, field)).collect()));
}

fn relation_json(rel: &EventRelation) -> Value {
    json!({"states": rel.n_states(), "rows": rel.matrix().rows().collect::<Vec<_>>()})
}

fn verdict_json(v: &ConjectureVerdict, n: usize) -> Value {
    json!({
        "conjecture": v.conjecture,
        "status": v.status.name(),
        "evidence": v.evidence.as_ref().map(|e| json!({
            "description": e.description,
            "document": e.document,
            "witness": e.witness.as_ref().map(|w| witness_json(w, n)),
        })),
        "nodes_explored": v.nodes_explored,
        "seed": v.seed,
        "stats": v.stats.iter().map(|(k, x)| json!([k, x])).collect::<Vec<_>>(),
    })
}

fn record_verdict(body: &mut Body, v: &ConjectureVerdict, n: usize) {
    body.line(format!("conjecture: {}", v.conjecture));
    body.line(format!("status: {}", v.status.name()));
    body.line(format!("nodes explored: {}", v.nodes_explored));
    for (k, x) in &v.stats {
        body.line(format!("{k}: {x}"));
    }
    if let Some(e) = &v.evidence {
        body.line(format!("evidence: {}", e.description));
        if let Some(w) = &e.witness {
            body.line(format!("witness: {}", w.render(n)));
        }
        body.block(&e.document);
    }
    body.put("verdict", verdict_json(v, n));
    body.merge(match v.status {
        ConjectureStatus::HoldsOnInstance => EXIT_PASS,
        ConjectureStatus::CounterexampleFound => EXIT_FAIL,
        ConjectureStatus::Inconclusive => EXIT_INCONCLUSIVE,
    });
}

/// A failure that ends the run before a report body exists.
enum Abort {
    Input(String),
    Inconclusive(String),
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Abort::Inconclusive(e.to_string()),
            other => Abort::Input(other.to_string()),
        }
    }
}

fn load(cfg: &RunConfig) -> Result<Document, Abort> {
    let path = cfg
        .inputs
        .first()
        .ok_or_else(|| Abort::Input("no input file given".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Abort::Input(format!("{path}: {e}")))?;
    parse(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => Abort::Input(format!("{path}:{line}:{column}: {message}")),
        other => Abort::Input(format!("{path}: {other}")),
    })
}

fn structure(cfg: &RunConfig, doc: &Document) -> Result<PreferenceStructure, Abort> {
    Ok(doc.preference_structure(cfg.cap)?)
}

fn relation_of(cfg: &RunConfig, doc: &Document) -> Result<EventRelation, Abort> {
    if doc.relation.is_some() {
        return Ok(doc.event_relation()?);
    }
    Ok(derive_relation(&structure(cfg, doc)?)?)
}

fn check_postulates_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let ps = structure(cfg, &load(cfg)?)?;
    let results = check_postulates(&ps, &Postulate::ALL, &cfg.check_config())?;
    record_results(body, "postulates", &results, ps.n_states(), "postulate");
    Ok(())
}

fn check_gqp_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let rel = load(cfg)?.event_relation()?;
    let r = check_gqp(&rel);
    let all = gqp_violations(&rel, false);
    record_results(body, "gqp", &[r], rel.n_states(), "check");
    body.put("violation_count", json!(all.len()));
    body.line(format!("violations: {}", all.len()));
    Ok(())
}

fn derive_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let ps = structure(cfg, &load(cfg)?)?;
    let rel = derive_relation(&ps)?;
    body.line(format!("provenance: {}", ps.provenance()));
    body.block(&emit_relation(&rel));
    body.put("provenance", json!(ps.provenance()));
    body.put("relation", relation_json(&rel));
    Ok(())
}

fn construct_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let rel = load(cfg)?.event_relation()?;
    let ps = construct_preferences(&rel)?;
    let text = emit_structure(&ps);
    body.block(&text);
    body.put("structure", json!(text));
    Ok(())
}

fn round_trip_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let rel = load(cfg)?.event_relation()?;
    let report = round_trip(&rel, &cfg.check_config())?;
    let n = rel.n_states();
    for r in &report.construction_postulates {
        body.line(result_line(r, n));
    }
    body.line(format!("relation_match: {}", report.relation_match));
    body.line(format!("degenerate: {}", report.degenerate));
    body.put(
        "construction_postulates",
        Value::Array(report.construction_postulates.iter().map(|r| result_json(r, n, "postulate")).collect()),
    );
    body.put("relation_match", json!(report.relation_match));
    body.put("degenerate", json!(report.degenerate));
    body.put(
        "mismatch",
        report
            .mismatch
            .map_or(Value::Null, |(a, b)| json!([a.to_bitstring(n), b.to_bitstring(n)])),
    );
    body.merge(if report.is_faithful() { EXIT_PASS } else { EXIT_FAIL });
    Ok(())
}

fn classify_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let rel = relation_of(cfg, &load(cfg)?)?;
    match classify(&rel) {
        None => {
            let r = check_gqp(&rel);
            body.line(format!("not a g.q.p.: {}", result_line(&r, rel.n_states())));
            body.put("flags", Value::Null);
            body.merge(EXIT_INCONCLUSIVE);
        }
        Some(flags) => {
            body.line(format!("total: {}", flags.total));
            body.line(format!("standard: {}", flags.standard));
            body.line(format!("purely_nonstandard: {}", flags.purely_nonstandard));
            body.line(format!("complementation_closed: {}", is_complementation_closed(&rel)));
            body.put(
                "flags",
                json!({
                    "total": flags.total,
                    "standard": flags.standard,
                    "purely_nonstandard": flags.purely_nonstandard,
                }),
            );
            body.put("complementation_closed", json!(is_complementation_closed(&rel)));
        }
    }
    Ok(())
}

fn verify_lemmas_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let doc = load(cfg)?;
    if doc.relation.is_some() {
        let rel = doc.event_relation()?;
        let results = GqpProperty::all()
            .into_iter()
            .map(|id| verify_gqp_property(&rel, id))
            .collect::<Result<Vec<_>, _>>()?;
        record_results(body, "properties", &results, rel.n_states(), "property");
        return Ok(());
    }
    let ps = structure(cfg, &doc)?;
    let check = cfg.check_config();
    let mut results = PreferenceLemma::ALL
        .iter()
        .map(|&id| verify_preference_lemma(&ps, id, &check))
        .collect::<Result<Vec<_>, _>>()?;
    for id in BridgeProperty::ALL {
        results.push(verify_bridge_property(&ps, id, &check)?);
    }
    record_results(body, "lemmas", &results, ps.n_states(), "lemma");
    Ok(())
}

fn enumerate_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let n = cfg.states.ok_or_else(|| Abort::Input("--states is required".into()))?;
    // complete by default up to two states
    let complete = cfg.complete || n <= 2;
    let e = if complete {
        enumerate_gqps(n, cfg.budget)?
    } else {
        sample_gqps(n, cfg.samples, cfg.seed, cfg.budget)?
    };
    body.line(format!("mode: {}", if complete { "complete" } else { "sample" }));
    body.line(format!("count: {}", e.relations.len()));
    body.line(format!("nodes: {}", e.stats.nodes));
    body.line(format!("finished: {}", e.stats.complete));
    for rel in &e.relations {
        body.block(&emit_relation(rel));
    }
    body.put("mode", json!(if complete { "complete" } else { "sample" }));
    body.put("count", json!(e.relations.len()));
    body.put("nodes_explored", json!(e.stats.nodes));
    body.put("finished", json!(e.stats.complete));
    body.put("seed", json!(e.seed));
    body.put("relations", Value::Array(e.relations.iter().map(relation_json).collect()));
    if !e.stats.complete {
        body.merge(EXIT_INCONCLUSIVE);
    }
    Ok(())
}

fn extensions_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let rel = load(cfg)?.event_relation()?;
    let ext = total_extensions(&rel, cfg.budget)?;
    body.line(format!("count: {}", ext.relations.len()));
    body.line(format!("nodes: {}", ext.stats.nodes));
    body.line(format!("finished: {}", ext.stats.complete));
    for r in &ext.relations {
        body.block(&emit_relation(r));
    }
    body.put("count", json!(ext.relations.len()));
    body.put("nodes_explored", json!(ext.stats.nodes));
    body.put("finished", json!(ext.stats.complete));
    body.put("relations", Value::Array(ext.relations.iter().map(relation_json).collect()));
    if !ext.stats.complete {
        body.merge(EXIT_INCONCLUSIVE);
    }
    Ok(())
}

fn conjecture_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let rel = load(cfg)?.event_relation()?;
    let v = check_intersection_conjecture(&rel, cfg.budget)?;
    record_verdict(body, &v, rel.n_states());
    Ok(())
}

fn q7_search_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let mut search = Q7SearchConfig::new(cfg.states.unwrap_or(2), cfg.consequences.unwrap_or(2), cfg.budget);
    search.seed = cfg.seed;
    search.check = cfg.check_config();
    let v = search_q7_independence(&search)?;
    record_verdict(body, &v, search.max_states);
    Ok(())
}

fn verify_theorem2_cmd(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    let ps = structure(cfg, &load(cfg)?)?;
    let check = cfg.check_config();
    let r = match &cfg.event {
        Some(bits) => verify_theorem2(&ps, Event::parse_bitstring(bits, ps.n_states())?, &check)?,
        None => verify_theorem2_all(&ps, &check)?,
    };
    record_results(body, "theorem2", &[r], ps.n_states(), "check");
    Ok(())
}

fn execute(cfg: &RunConfig, body: &mut Body) -> Result<(), Abort> {
    match cfg.command {
        Command::CheckPostulates => check_postulates_cmd(cfg, body),
        Command::CheckGqp => check_gqp_cmd(cfg, body),
        Command::Derive => derive_cmd(cfg, body),
        Command::Construct => construct_cmd(cfg, body),
        Command::RoundTrip => round_trip_cmd(cfg, body),
        Command::Classify => classify_cmd(cfg, body),
        Command::VerifyLemmas => verify_lemmas_cmd(cfg, body),
        Command::Enumerate => enumerate_cmd(cfg, body),
        Command::Extensions => extensions_cmd(cfg, body),
        Command::Conjecture => conjecture_cmd(cfg, body),
        Command::Q7Search => q7_search_cmd(cfg, body),
        Command::VerifyTheorem2 => verify_theorem2_cmd(cfg, body),
    }
}

#[derive(Serialize)]
struct MachineReport<'a> {
    format: &'static str,
    config: &'a RunConfig,
    status: &'static str,
    exit_code: i32,
    error: Option<&'a str>,
    results: Value,
}

/// Runs one command. Nothing here depends on time or scheduling, so equal
/// configurations and inputs give byte-identical reports.
pub fn run(cfg: &RunConfig) -> RunOutput {
    let mut body = Body::new();
    let mut error = None;
    match execute(cfg, &mut body) {
        Ok(()) => {}
        Err(Abort::Input(m)) => {
            body.exit_code = EXIT_INPUT;
            error = Some(m);
        }
        Err(Abort::Inconclusive(m)) => {
            body.exit_code = EXIT_INCONCLUSIVE;
            error = Some(m);
        }
    }
    let status = status_name(body.exit_code);
    let config_json = serde_json::to_string(cfg).expect("config serializes");
    let mut text = String::new();
    let _ = writeln!(text, "# gqplab {}", cfg.command.name());
    let _ = writeln!(text, "# config: {config_json}");
    for l in &body.lines {
        let _ = writeln!(text, "{l}");
    }
    if let Some(e) = &error {
        let _ = writeln!(text, "error: {e}");
    }
    let _ = writeln!(text, "status: {status}");
    let report = MachineReport {
        format: REPORT_FORMAT,
        config: cfg,
        status,
        exit_code: body.exit_code,
        error: error.as_deref(),
        results: Value::Object(body.results),
    };
    let mut machine = serde_json::to_string_pretty(&report).expect("report serializes");
    machine.push('\n');
    RunOutput {
        exit_code: body.exit_code,
        text,
        machine,
        diagnostics: error.unwrap_or_default(),
    }
}
