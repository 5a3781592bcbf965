//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a criterion deviates from its recorded outcome.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use gqplab::bridge::{
    derive_relation, round_trip, verify_bridge_property, verify_theorem2_all, BridgeProperty,
};
use gqplab::corpus::structure_corpus;
use gqplab::format::parse;
use gqplab::gqp::{
    check_gqp, classify, is_complementation_closed, is_standard, is_standard_non_null,
    verify_gqp_property, EventRelation, GqpProperty,
};
use gqplab::preference::postulates::check_postulates;
use gqplab::preference::{verify_preference_lemma, CheckConfig, Postulate, PreferenceLemma, PreferenceStructure};
use gqplab::search::{
    check_intersection_conjecture, enumerate_gqps, reverify_intersection_evidence, reverify_q7_evidence,
    sample_gqps, search_q7_independence, ConjectureStatus, Q7SearchConfig,
};
use gqplab::{BitMatrix, Verdict};
use gqplab_cli::{run, Command, OutputFormat, RunConfig};

const BUDGET: u64 = 1_000_000;
const CRITERION_1_LIMIT: Duration = Duration::from_secs(60);
const CRITERION_3_LIMIT: Duration = Duration::from_secs(300);
const ROUND_TRIP_SAMPLES: usize = 100;
const ROUND_TRIP_SEED: u64 = 0;

/// Number of g.q.p. on two states, frozen from the brute-force oracle.
const GQP_COUNT_2: usize = 9;
const GQP_COUNT_1: usize = 2;
/// Relations at n = 1, 2, 3 on which the literal standardness condition and
/// complementation closure disagree; every one has a non-empty null event.
const STANDARD_DISAGREEMENTS: [usize; 3] = [1, 3, 16];

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load_structure(name: &str) -> PreferenceStructure {
    let text = std::fs::read_to_string(data(name)).unwrap();
    parse(&text).unwrap().preference_structure(4096).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn all_pass(results: &[gqplab::CheckResult], names: &[&str]) -> Result<(), String> {
    for r in results.iter().filter(|r| names.contains(&r.check.as_str())) {
        if r.verdict != Verdict::Pass {
            return Err(format!("{} {}", r.check, r.verdict));
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ps = load_structure("uniform3.gqp");
    assert_eq!((ps.n_acts(), ps.events().count()), (27, 8));
    let results = check_postulates(&ps, &Postulate::ALL, &CheckConfig::default()).unwrap();
    let elapsed = start.elapsed();
    match all_pass(&results, &["Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q'4", "R"]) {
        Ok(()) => outcome(
            elapsed < CRITERION_1_LIMIT,
            format!("expectation model n=3 passes Q1-Q6, Q'4, R in {elapsed:.2?}"),
        ),
        Err(e) => outcome(false, e),
    }
}

fn criterion_2() -> Outcome {
    let flags = |name: &str| {
        let rel = derive_relation(&load_structure(name)).unwrap();
        assert!(check_gqp(&rel).passed(), "{name} derives a non-g.q.p.");
        classify(&rel).unwrap()
    };
    let ranked = flags("ranked4.gqp");
    let nonstandard = flags("nonstandard3.gqp");
    let uniform = flags("uniform3.gqp");
    let ok = ranked.total
        && ranked.purely_nonstandard
        && nonstandard.total
        && !nonstandard.standard
        && uniform.total
        && uniform.standard;
    outcome(
        ok,
        format!("ranked {ranked:?}; nonstandard {nonstandard:?}; uniform {uniform:?}"),
    )
}

fn round_trip_failure(rel: &EventRelation, cfg: &CheckConfig) -> Option<String> {
    let report = round_trip(rel, cfg).unwrap();
    if report.is_faithful() {
        return None;
    }
    let bad: Vec<String> = report
        .construction_postulates
        .iter()
        .filter(|r| r.verdict != Verdict::Pass)
        .map(|r| format!("{} {}", r.check, r.verdict))
        .collect();
    Some(format!("match={} degenerate={} {bad:?}", report.relation_match, report.degenerate))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cfg = CheckConfig::default();
    let complete = enumerate_gqps(2, BUDGET).unwrap();
    assert!(complete.stats.complete);
    let sampled = sample_gqps(3, ROUND_TRIP_SAMPLES, ROUND_TRIP_SEED, BUDGET).unwrap();
    let inputs: Vec<&EventRelation> = complete.relations.iter().chain(&sampled.relations).collect();
    for rel in &inputs {
        if let Some(e) = round_trip_failure(rel, &cfg) {
            return outcome(false, format!("round trip failed: {e}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        elapsed < CRITERION_3_LIMIT && sampled.relations.len() == ROUND_TRIP_SAMPLES,
        format!(
            "{} relations at n=2 and {} sampled at n=3 round-trip exactly in {elapsed:.2?}",
            complete.relations.len(),
            sampled.relations.len()
        ),
    )
}

fn criterion_4(corpus: &[(String, PreferenceStructure)]) -> Outcome {
    let cfg = CheckConfig::default();
    let mut checked = 0usize;
    for (label, ps) in corpus {
        for id in PreferenceLemma::ALL {
            let r = verify_preference_lemma(ps, id, &cfg).unwrap();
            if r.verdict == Verdict::Fail {
                return outcome(false, format!("{id} fails on {label}"));
            }
            checked += usize::from(r.verdict == Verdict::Pass);
        }
    }
    let mut relations = 0;
    for n in 0..=3 {
        let e = enumerate_gqps(n, BUDGET).unwrap();
        assert!(e.stats.complete);
        for rel in &e.relations {
            for id in GqpProperty::all() {
                let r = verify_gqp_property(rel, id).unwrap();
                if r.verdict != Verdict::Pass {
                    return outcome(false, format!("{id} {} at n={n}", r.verdict));
                }
            }
            relations += 1;
        }
    }
    outcome(
        true,
        format!(
            "{checked} lemma checks on {} structures and {} properties on {relations} g.q.p., zero violations",
            corpus.len(),
            GqpProperty::all().len()
        ),
    )
}

/// The literal condition is expected to disagree with complementation closure
/// exactly on relations with non-empty null events.
fn criterion_5() -> Outcome {
    let mut agree = 0;
    let mut disagreements = Vec::new();
    for n in 1..=3 {
        let e = enumerate_gqps(n, BUDGET).unwrap();
        assert!(e.stats.complete);
        let mut count = 0;
        for rel in &e.relations {
            let literal = is_standard(rel);
            let closed = is_complementation_closed(rel);
            assert_eq!(is_standard_non_null(rel), closed);
            if literal == closed {
                agree += 1;
                continue;
            }
            count += 1;
            let has_null = rel.events().any(|a| !a.is_empty() && rel.is_null(a));
            assert!(!literal && closed && has_null, "unexpected disagreement pattern");
        }
        disagreements.push(count);
    }
    assert_eq!(disagreements, STANDARD_DISAGREEMENTS, "disagreement counts changed");
    outcome(
        false,
        format!(
            "{agree} agree; disagreements per n=1..3: {disagreements:?}, all with non-empty null events \
             (non-null hypothesis agrees everywhere)"
        ),
    )
}

/// Every reflexive matrix filtered through check_gqp.
fn brute_force(n: usize) -> BTreeSet<Vec<String>> {
    let k = 1usize << n;
    let free: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut m = BitMatrix::new(k);
        for i in 0..k {
            m.set(i, i, true);
        }
        for (bit, &(i, j)) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m.set(i, j, true);
            }
        }
        let rel = EventRelation::from_matrix(n, m).unwrap();
        if check_gqp(&rel).passed() {
            out.insert(rel.matrix().rows().collect());
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut counts = Vec::new();
    for n in 0..=2 {
        let oracle = brute_force(n);
        let e = enumerate_gqps(n, BUDGET).unwrap();
        let found: BTreeSet<Vec<String>> = e.relations.iter().map(|r| r.matrix().rows().collect()).collect();
        if found != oracle || found.len() != e.relations.len() {
            return outcome(false, format!("n={n}: enumerator {} vs oracle {}", found.len(), oracle.len()));
        }
        counts.push(oracle.len());
    }
    outcome(
        counts[1] == GQP_COUNT_1 && counts[2] == GQP_COUNT_2,
        format!("enumerator equals oracle at n=0..2, counts {counts:?}"),
    )
}

fn criterion_7(corpus: &[(String, PreferenceStructure)]) -> Outcome {
    let cfg = CheckConfig::default();
    let mut eligible = 0;
    for (label, ps) in corpus {
        let results = check_postulates(ps, &Postulate::ALL, &cfg).unwrap();
        if all_pass(&results, &["Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7"]).is_err() {
            continue;
        }
        eligible += 1;
        let r = verify_theorem2_all(ps, &cfg).unwrap();
        if r.verdict != Verdict::Pass {
            return outcome(false, format!("{} on {label}", r.verdict));
        }
        let r = verify_bridge_property(ps, BridgeProperty::DerivedIsGqp, &cfg).unwrap();
        assert_ne!(r.verdict, Verdict::Fail);
    }
    outcome(eligible > 0, format!("holds on all {eligible} structures passing Q1-Q7"))
}

fn criterion_8() -> Outcome {
    let e = enumerate_gqps(2, BUDGET).unwrap();
    let mut held = 0;
    for rel in &e.relations {
        let v = check_intersection_conjecture(rel, BUDGET).unwrap();
        match v.status {
            ConjectureStatus::HoldsOnInstance => held += 1,
            ConjectureStatus::CounterexampleFound => {
                let ev = v.evidence.as_ref().expect("counterexample carries evidence");
                assert!(reverify_intersection_evidence(ev, BUDGET).unwrap());
            }
            ConjectureStatus::Inconclusive => return outcome(false, "intersection sweep inconclusive"),
        }
    }
    let q7 = search_q7_independence(&Q7SearchConfig::new(2, 2, BUDGET)).unwrap();
    match q7.status {
        ConjectureStatus::HoldsOnInstance => {}
        ConjectureStatus::CounterexampleFound => {
            assert!(reverify_q7_evidence(q7.evidence.as_ref().unwrap(), &CheckConfig::default()).unwrap());
        }
        ConjectureStatus::Inconclusive => return outcome(false, "Q7 search inconclusive"),
    }
    outcome(
        q7.stat("sampled_instances") == Some(0),
        format!(
            "intersection: {held}/{} hold on instance; Q7 search (2,2): {} after {} structures",
            e.relations.len(),
            q7.status.name(),
            q7.nodes_explored
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut configs = Vec::new();
    let with = |c: Command, input: Option<&str>| {
        let mut cfg = RunConfig::new(c);
        if let Some(i) = input {
            cfg = cfg.with_input(data(i));
        }
        cfg.format = OutputFormat::Machine;
        cfg
    };
    configs.push(with(Command::CheckPostulates, Some("uniform3.gqp")));
    configs.push(with(Command::CheckGqp, Some("missing_empty.gqp")));
    configs.push(with(Command::Derive, Some("nonstandard3.gqp")));
    configs.push(with(Command::Classify, Some("ranked4.gqp")));
    configs.push(with(Command::VerifyLemmas, Some("uniform2.gqp")));
    configs.push(with(Command::VerifyTheorem2, Some("uniform2.gqp")));
    configs.push(with(Command::CheckGqp, Some("truncated.gqp")));
    let mut e = with(Command::Enumerate, None);
    e.states = Some(3);
    e.seed = 11;
    configs.push(e);
    let mut q = with(Command::Q7Search, None);
    q.states = Some(2);
    q.consequences = Some(3);
    q.budget = 5_000;
    q.seed = 3;
    configs.push(q);
    for cfg in &configs {
        let first = run(cfg).machine;
        let second = run(cfg).machine;
        if first != second {
            return outcome(false, format!("{} differs between runs", cfg.command.name()));
        }
    }
    let exe = env!("CARGO_BIN_EXE_gqplab");
    let args = ["enumerate", "--states", "3", "--seed", "5", "--format", "machine"];
    let a = std::process::Command::new(exe).args(args).output().unwrap().stdout;
    let b = std::process::Command::new(exe).args(args).output().unwrap().stdout;
    outcome(a == b, format!("{} configurations and the binary give byte-identical reports", configs.len()))
}

fn main() {
    let corpus = structure_corpus(3, 3).unwrap();
    // criterion 5 is false as stated; its failure is the recorded outcome
    let expected_fail = [5];
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(|| criterion_4(&corpus))),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(|| criterion_7(&corpus))),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
    ];
    let mut unexpected = Vec::new();
    for (id, check) in &criteria {
        let o = check();
        println!("{} criterion {id}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if o.pass == expected_fail.contains(id) {
            unexpected.push(*id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcomes: {unexpected:?}");
        std::process::exit(1);
    }
}
