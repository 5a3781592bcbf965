//! Line-oriented text format, version 1.
//!
//! ```text
//! states: 2
//! consequences: 2
//! order: 0 < 1
//! relation:
//! 1111
//! 0101
//! 0011
//! 0001
//! ```
//!
//! Events are bitstrings with state 0 leftmost; matrix rows follow the
//! canonical act or event order. Blank lines and lines starting with `#` are
//! ignored. [`emit`] writes sections in a fixed order, so parsing and
//! re-emitting a file written by [`emit`] reproduces it byte for byte.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::bits::BitMatrix;
use crate::error::{input, Error, Result};
use crate::gqp::EventRelation;
use crate::models::eps::rational;
use crate::models::{
    expectation_structure, nonstandard_structure, ranked_structure, EpsPoly, EpsilonNumber,
    ProbabilityModel, RankedModel,
};
use crate::preference::PreferenceStructure;
use crate::space::{Act, ConsequenceSpace, DecisionSpace, Event, StateSpace};

/// Largest act count accepted in a `prefs for` block.
const MAX_TABLE_DIM: usize = 1 << 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Expectation,
    Nonstandard,
    Ranked,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Expectation => "expectation",
            ModelKind::Nonstandard => "nonstandard",
            ModelKind::Ranked => "ranked",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub weights: Vec<(usize, EpsPoly)>,
    pub utilities: Vec<(usize, BigRational)>,
    pub rank: Option<Vec<usize>>,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            weights: Vec::new(),
            utilities: Vec::new(),
            rank: None,
        }
    }
}

/// Everything a v1 file can declare; sections absent from the file are empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub n_states: Option<usize>,
    pub labels: Option<Vec<String>>,
    pub n_consequences: Option<usize>,
    pub order: Vec<(usize, usize)>,
    pub model: Option<ModelSpec>,
    pub acts: Vec<Act>,
    pub events: Vec<Event>,
    pub prefs: Vec<(Event, BitMatrix)>,
    pub relation: Option<BitMatrix>,
}

impl Document {
    pub fn from_relation(rel: &EventRelation) -> Self {
        Self {
            n_states: Some(rel.n_states()),
            relation: Some(rel.matrix().clone()),
            ..Self::default()
        }
    }

    fn with_space(space: &DecisionSpace) -> Self {
        Self {
            n_states: Some(space.n_states()),
            labels: space.states().labels().map(<[String]>::to_vec),
            n_consequences: Some(space.n_consequences()),
            order: space.consequences().generators().to_vec(),
            ..Self::default()
        }
    }

    /// Extensional dump of every table.
    pub fn from_structure(ps: &PreferenceStructure) -> Self {
        let mut doc = Self::with_space(ps.space());
        doc.prefs = ps.events().map(|a| (a, ps.table(a).clone())).collect();
        doc
    }

    pub fn from_probability_model(
        space: &DecisionSpace,
        model: &ProbabilityModel,
        kind: ModelKind,
    ) -> Result<Self> {
        let mut spec = ModelSpec::new(kind);
        for (s, w) in model.weights().iter().enumerate() {
            match w.as_poly() {
                Some(p) => spec.weights.push((s, p.clone())),
                None => return input(format!("weight of state {s} is not a polynomial in eps")),
            }
        }
        spec.utilities = model.utilities().iter().cloned().enumerate().collect();
        let mut doc = Self::with_space(space);
        doc.model = Some(spec);
        Ok(doc)
    }

    pub fn from_ranked_model(space: &DecisionSpace, model: &RankedModel) -> Self {
        let mut spec = ModelSpec::new(ModelKind::Ranked);
        spec.rank = Some(model.order().to_vec());
        let mut doc = Self::with_space(space);
        doc.model = Some(spec);
        doc
    }

    pub fn state_space(&self) -> Result<StateSpace> {
        let n = self.n_states.ok_or_else(|| Error::Input("missing `states:`".into()))?;
        match &self.labels {
            Some(labels) => StateSpace::with_labels(labels.clone()),
            None => StateSpace::new(n),
        }
    }

    pub fn decision_space(&self) -> Result<DecisionSpace> {
        let m = self
            .n_consequences
            .ok_or_else(|| Error::Input("missing `consequences:`".into()))?;
        Ok(DecisionSpace::new(
            self.state_space()?,
            ConsequenceSpace::new(m, &self.order)?,
        ))
    }

    pub fn event_relation(&self) -> Result<EventRelation> {
        let n = self.n_states.ok_or_else(|| Error::Input("missing `states:`".into()))?;
        match &self.relation {
            Some(m) => EventRelation::from_matrix(n, m.clone()),
            None => input("no `relation:` block"),
        }
    }

    /// The structure given by `prefs for` blocks or by a `model:` section.
    pub fn preference_structure(&self, cap: usize) -> Result<PreferenceStructure> {
        let space = self.decision_space()?;
        if let Some(spec) = &self.model {
            if !self.prefs.is_empty() {
                return input("a file may give a model or preference tables, not both");
            }
            return model_structure(&space, spec);
        }
        if self.prefs.is_empty() {
            return input("no preference tables and no model");
        }
        let n_events = space.states().n_events();
        let mut tables: Vec<Option<BitMatrix>> = vec![None; n_events];
        for (a, t) in &self.prefs {
            if tables[a.index()].replace(t.clone()).is_some() {
                return input(format!(
                    "duplicate table for event {}",
                    a.to_bitstring(space.n_states())
                ));
            }
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| {
                    Error::Input(format!(
                        "missing table for event {}",
                        Event(i as u32).to_bitstring(space.n_states())
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PreferenceStructure::from_tables(space, tables, cap)
    }
}

fn model_structure(space: &DecisionSpace, spec: &ModelSpec) -> Result<PreferenceStructure> {
    if spec.kind == ModelKind::Ranked {
        let rank = spec
            .rank
            .clone()
            .ok_or_else(|| Error::Input("ranked model needs a `rank:` line".into()))?;
        return ranked_structure(space, &RankedModel::new(rank)?);
    }
    let weights = indexed(&spec.weights, space.n_states(), "weight")?
        .into_iter()
        .map(EpsilonNumber::from_poly)
        .collect();
    let utilities = indexed(&spec.utilities, space.n_consequences(), "utility")?;
    let model = ProbabilityModel::new(space, weights, utilities)?;
    match spec.kind {
        ModelKind::Expectation => expectation_structure(space, &model),
        _ => nonstandard_structure(space, &model),
    }
}

fn indexed<T: Clone>(entries: &[(usize, T)], n: usize, what: &str) -> Result<Vec<T>> {
    let mut out: Vec<Option<T>> = vec![None; n];
    for (i, v) in entries {
        if *i >= n {
            return input(format!("{what} for index {i} out of range"));
        }
        if out[*i].replace(v.clone()).is_some() {
            return input(format!("duplicate {what} for index {i}"));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Input(format!("missing {what} for index {i}"))))
        .collect()
}

fn matrix_rows(out: &mut String, m: &BitMatrix) {
    for row in m.rows() {
        out.push_str(&row);
        out.push('\n');
    }
}

/// Canonical text of a document.
pub fn emit(doc: &Document) -> String {
    let mut out = String::new();
    let n = doc.n_states.unwrap_or(0);
    if let Some(n) = doc.n_states {
        let _ = writeln!(out, "states: {n}");
    }
    if let Some(labels) = &doc.labels {
        let _ = writeln!(out, "labels: {}", labels.join(" "));
    }
    if let Some(m) = doc.n_consequences {
        let _ = writeln!(out, "consequences: {m}");
    }
    for (i, j) in &doc.order {
        let _ = writeln!(out, "order: {i} < {j}");
    }
    if let Some(spec) = &doc.model {
        let _ = writeln!(out, "model: {}", spec.kind.name());
        for (s, w) in &spec.weights {
            let _ = writeln!(out, "weight {s}: {w}");
        }
        for (c, u) in &spec.utilities {
            let _ = writeln!(out, "utility {c}: {u}");
        }
        if let Some(rank) = &spec.rank {
            let items: Vec<String> = rank.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "rank: {}", items.join(" "));
        }
    }
    for act in &doc.acts {
        let items: Vec<String> = act.0.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "act: {}", items.join(" "));
    }
    for e in &doc.events {
        let _ = writeln!(out, "event: {}", e.to_bitstring(n));
    }
    for (a, t) in &doc.prefs {
        let _ = writeln!(out, "prefs for {}:", a.to_bitstring(n));
        matrix_rows(&mut out, t);
    }
    if let Some(m) = &doc.relation {
        out.push_str("relation:\n");
        matrix_rows(&mut out, m);
    }
    out
}

pub fn emit_relation(rel: &EventRelation) -> String {
    emit(&Document::from_relation(rel))
}

pub fn emit_structure(ps: &PreferenceStructure) -> String {
    emit(&Document::from_structure(ps))
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    doc: Document,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        column,
        message: message.into(),
    })
}

/// Re-locates an error raised while reading a value that starts at `column`.
fn at<T>(line: usize, column: usize, r: Result<T>) -> Result<T> {
    r.or_else(|e| match e {
        Error::Parse { .. } => Err(e),
        Error::Input(m) | Error::Precondition(m) => err(line, column, m),
        Error::Budget { .. } => err(line, column, e.to_string()),
    })
}

fn is_matrix_row(text: &str) -> bool {
    !text.is_empty() && text.bytes().all(|b| b == b'0' || b == b'1')
}

fn parse_count(text: &str, line: usize, column: usize) -> Result<usize> {
    text.trim()
        .parse::<usize>()
        .or_else(|_| err(line, column, format!("expected a count, found {:?}", text.trim())))
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .collect();
        Self {
            lines,
            pos: 0,
            doc: Document::default(),
        }
    }

    fn n_states(&self, line: usize) -> Result<usize> {
        self.doc
            .n_states
            .map_or_else(|| err(line, 1, "`states:` must come before this line"), Ok)
    }

    fn matrix(&mut self, header_line: usize, dim: usize, what: &str) -> Result<BitMatrix> {
        let mut m = BitMatrix::new(dim);
        let mut rows = 0;
        while let Some(&(ln, text)) = self.lines.get(self.pos) {
            let text = text.trim();
            if !is_matrix_row(text) {
                break;
            }
            if rows == dim {
                return err(ln, 1, format!("{what} has more than {dim} rows"));
            }
            if text.len() != dim {
                return err(
                    ln,
                    text.len().min(dim) + 1,
                    format!("{what} row has {} entries, expected {dim}", text.len()),
                );
            }
            for (j, b) in text.bytes().enumerate() {
                m.set(rows, j, b == b'1');
            }
            rows += 1;
            self.pos += 1;
        }
        if rows != dim {
            return err(header_line, 1, format!("{what} has {rows} rows, expected {dim}"));
        }
        Ok(m)
    }

    fn run(mut self) -> Result<Document> {
        while let Some(&(ln, raw)) = self.lines.get(self.pos) {
            self.pos += 1;
            let indent = raw.len() - raw.trim_start().len();
            let text = raw.trim_start();
            let Some(colon) = text.find(':') else {
                return err(ln, indent + 1, format!("expected `key: value`, found {text:?}"));
            };
            let key = text[..colon].trim();
            let value = text[colon + 1..].trim();
            let vcol = indent + colon + 2 + (text[colon + 1..].len() - text[colon + 1..].trim_start().len());
            self.line(ln, indent + 1, key, value, vcol)?;
        }
        Ok(self.doc)
    }

    fn line(&mut self, ln: usize, kcol: usize, key: &str, value: &str, vcol: usize) -> Result<()> {
        let mut words = key.split_whitespace();
        let head = words.next().unwrap_or("");
        let arg = words.next();
        match (head, arg) {
            ("states", None) => {
                if self.doc.n_states.is_some() {
                    return err(ln, kcol, "duplicate `states:`");
                }
                self.doc.n_states = Some(parse_count(value, ln, vcol)?);
            }
            ("labels", None) => {
                let n = self.n_states(ln)?;
                let labels: Vec<String> = value.split_whitespace().map(str::to_owned).collect();
                if labels.len() != n {
                    return err(ln, vcol, format!("{} labels for {n} states", labels.len()));
                }
                self.doc.labels = Some(labels);
            }
            ("consequences", None) => {
                if self.doc.n_consequences.is_some() {
                    return err(ln, kcol, "duplicate `consequences:`");
                }
                self.doc.n_consequences = Some(parse_count(value, ln, vcol)?);
            }
            ("order", None) => {
                let Some((i, j)) = value.split_once('<') else {
                    return err(ln, vcol, "expected `<i> < <j>`");
                };
                let i = parse_count(i, ln, vcol)?;
                let j = parse_count(j, ln, vcol)?;
                self.doc.order.push((i, j));
            }
            ("model", None) => {
                if self.doc.model.is_some() {
                    return err(ln, kcol, "duplicate `model:`");
                }
                let kind = match value {
                    "expectation" => ModelKind::Expectation,
                    "nonstandard" => ModelKind::Nonstandard,
                    "ranked" => ModelKind::Ranked,
                    other => return err(ln, vcol, format!("unknown model {other:?}")),
                };
                self.doc.model = Some(ModelSpec::new(kind));
            }
            ("weight", Some(s)) => {
                let s = parse_count(s, ln, kcol)?;
                let w: EpsPoly = at(ln, vcol, value.parse())?;
                self.model(ln, kcol)?.weights.push((s, w));
            }
            ("utility", Some(c)) => {
                let c = parse_count(c, ln, kcol)?;
                let u = at(ln, vcol, rational(value))?;
                self.model(ln, kcol)?.utilities.push((c, u));
            }
            ("rank", None) => {
                let rank = value
                    .split_whitespace()
                    .map(|w| parse_count(w, ln, vcol))
                    .collect::<Result<Vec<_>>>()?;
                let spec = self.model(ln, kcol)?;
                if spec.rank.replace(rank).is_some() {
                    return err(ln, kcol, "duplicate `rank:`");
                }
            }
            ("act", None) => {
                let n = self.n_states(ln)?;
                let values = value
                    .split_whitespace()
                    .map(|w| parse_count(w, ln, vcol))
                    .collect::<Result<Vec<_>>>()?;
                if values.len() != n {
                    return err(ln, vcol, format!("act has {} values, expected {n}", values.len()));
                }
                if let Some(m) = self.doc.n_consequences {
                    if let Some(pos) = values.iter().position(|&v| v >= m) {
                        return err(ln, vcol, format!("act value {} at state {pos} out of range", values[pos]));
                    }
                }
                self.doc.acts.push(Act(values));
            }
            ("event", None) => {
                let n = self.n_states(ln)?;
                let e = at(ln, vcol, Event::parse_bitstring(value, n))?;
                self.doc.events.push(e);
            }
            ("prefs", Some("for")) => {
                let n = self.n_states(ln)?;
                let bits = words.next().unwrap_or("");
                let e = at(ln, kcol + 10, Event::parse_bitstring(bits, n))?;
                if words.next().is_some() || !value.is_empty() {
                    return err(ln, kcol, "expected `prefs for <event>:`");
                }
                let m = self
                    .doc
                    .n_consequences
                    .map_or_else(|| err(ln, 1, "`consequences:` must come before tables"), Ok)?;
                let Some(dim) = m.checked_pow(n as u32).filter(|&d| d <= MAX_TABLE_DIM) else {
                    return err(ln, kcol, format!("{m}^{n} acts is too many for a table"));
                };
                let t = self.matrix(ln, dim, "preference table")?;
                self.doc.prefs.push((e, t));
            }
            ("relation", None) => {
                if !value.is_empty() {
                    return err(ln, vcol, "rows go on the following lines");
                }
                if self.doc.relation.is_some() {
                    return err(ln, kcol, "duplicate `relation:`");
                }
                let n = self.n_states(ln)?;
                if n > crate::gqp::MAX_RELATION_STATES {
                    return err(ln, kcol, format!("relations are limited to {} states", crate::gqp::MAX_RELATION_STATES));
                }
                self.doc.relation = Some(self.matrix(ln, 1 << n, "relation block")?);
            }
            _ => return err(ln, kcol, format!("unknown section {key:?}")),
        }
        Ok(())
    }

    fn model(&mut self, ln: usize, col: usize) -> Result<&mut ModelSpec> {
        self.doc
            .model
            .as_mut()
            .map_or_else(|| err(ln, col, "`model:` must come before this line"), Ok)
    }
}

pub fn parse(text: &str) -> Result<Document> {
    Parser::new(text).run()
}

pub fn parse_relation(text: &str) -> Result<EventRelation> {
    parse(text)?.event_relation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::derive_relation;
    use crate::models::evenly_spaced_utilities;
    use proptest::prelude::*;

    #[test]
    fn minimal_file_round_trips() {
        let text = "states: 1\nconsequences: 2\norder: 0 < 1\n";
        let doc = parse(text).unwrap();
        assert_eq!(doc.n_states, Some(1));
        assert_eq!(doc.order, vec![(0, 1)]);
        assert_eq!(emit(&doc), text);
    }

    #[test]
    fn relation_block_round_trips() {
        let text = "states: 2\nrelation:\n1111\n0111\n0111\n0001\n";
        let rel = parse_relation(text).unwrap();
        assert!(rel.leq(Event(1), Event(2)));
        assert!(!rel.leq(Event(3), Event(1)));
        assert_eq!(emit_relation(&rel), text);
    }

    #[test]
    fn truncated_relation_block() {
        let e = parse("states: 2\nrelation:\n1111\n0111\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                column: 1,
                message: "relation block has 2 rows, expected 4".into()
            }
        );
    }

    #[test]
    fn diagnostics_carry_location() {
        let e = parse("states: 2\nconsequences: x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 15, .. }), "{e:?}");
        let e = parse("states: 2\nrelation:\n1111\n011\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, column: 4, .. }), "{e:?}");
        let e = parse("bogus line\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 1, .. }));
        let e = parse("states: 1\nevent: 10\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 8, .. }), "{e:?}");
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let doc = parse("# header\n\nstates: 1\n  # note\nevent: 1\n").unwrap();
        assert_eq!(doc.events, vec![Event(1)]);
    }

    #[test]
    fn model_file_builds_structure() {
        let text = "states: 2\nconsequences: 2\norder: 0 < 1\nmodel: nonstandard\n\
                    weight 0: 1 + -1 eps^1\nweight 1: 0 + 1 eps^1\nutility 0: 0\nutility 1: 1\n";
        let doc = parse(text).unwrap();
        assert_eq!(emit(&doc), text);
        let ps = doc.preference_structure(4096).unwrap();
        let rel = derive_relation(&ps).unwrap();
        assert!(rel.leq(ps.full_event(), Event::singleton(0)));
    }

    #[test]
    fn structure_round_trips_through_text() {
        let sp = DecisionSpace::new(StateSpace::new(2).unwrap(), ConsequenceSpace::chain(2).unwrap());
        let model = ProbabilityModel::uniform(&sp, evenly_spaced_utilities(2)).unwrap();
        let ps = expectation_structure(&sp, &model).unwrap();
        let text = emit_structure(&ps);
        let back = parse(&text).unwrap().preference_structure(4096).unwrap();
        for a in ps.events() {
            assert_eq!(ps.table(a), back.table(a));
        }
        assert_eq!(emit_structure(&back), text);
        let doc = Document::from_probability_model(&sp, &model, ModelKind::Expectation).unwrap();
        assert_eq!(parse(&emit(&doc)).unwrap(), doc);
    }

    #[test]
    fn ranked_model_file() {
        let sp = DecisionSpace::new(StateSpace::new(3).unwrap(), ConsequenceSpace::chain(2).unwrap());
        let doc = Document::from_ranked_model(&sp, &RankedModel::new(vec![2, 0, 1]).unwrap());
        let text = emit(&doc);
        assert!(text.contains("rank: 2 0 1\n"));
        assert_eq!(parse(&text).unwrap(), doc);
        assert!(doc.preference_structure(4096).is_ok());
    }

    proptest! {
        #[test]
        fn relations_round_trip(n in 0usize..4, seed in any::<u64>()) {
            let dim = 1usize << n;
            let mut x = seed;
            let m = BitMatrix::from_fn(dim, |_, _| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                x >> 63 == 1
            });
            let rel = EventRelation::from_matrix(n, m).unwrap();
            let text = emit_relation(&rel);
            let back = parse_relation(&text).unwrap();
            prop_assert_eq!(&back, &rel);
            prop_assert_eq!(emit_relation(&back), text);
        }
    }
}
