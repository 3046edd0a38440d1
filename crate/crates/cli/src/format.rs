//! Line-oriented instance files.
//!
//! ```text
//! boys: u1 u2
//! girls: w1 w2
//! edge e1 u1 w1
//! pref u1: e1 e2
//! cost e1 5
//! weight e1 2
//! level u1 e1 3
//! h e1 1
//! ```
//!
//! Lines come in that order (the four attribute kinds may mix), `#` starts a
//! comment, and each preference list names exactly the node's edges, best
//! first. [`write`] produces the canonical form, which parses back to the
//! same bytes.

use std::collections::HashMap;
use std::fmt;

use stablecut::prefs::Edge;
use stablecut::{EdgeId, PreferenceSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    DuplicateId(String),
    UnknownNode(String),
    UnknownEdge(String),
    /// The node's preference line is missing or omits some of its edges.
    IncompletePrefs { node: String, missing: Vec<String> },
    Tie { node: String },
    OutOfOrder(&'static str),
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "{msg}"),
            ParseErrorKind::DuplicateId(id) => write!(f, "duplicate id `{id}`"),
            ParseErrorKind::UnknownNode(id) => write!(f, "unknown node `{id}`"),
            ParseErrorKind::UnknownEdge(id) => write!(f, "unknown edge `{id}`"),
            ParseErrorKind::IncompletePrefs { node, missing } => {
                write!(f, "preference list of `{node}` is incomplete, missing {}", missing.join(", "))
            }
            ParseErrorKind::Tie { node } => write!(f, "preference list of `{node}` has a tie"),
            ParseErrorKind::OutOfOrder(kind) => write!(f, "`{kind}` line out of order"),
            ParseErrorKind::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
        }
    }
}

impl std::error::Error for ParseError {}

/// A level line: the node is a boy when `boy_side` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub boy_side: bool,
    pub edge: EdgeId,
    pub level: u32,
}

/// A system plus the optional per-edge data of the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub system: PreferenceSystem,
    pub cost: Vec<Option<i64>>,
    pub weight: Vec<Option<i64>>,
    pub h: Vec<Option<i64>>,
    pub levels: Vec<Level>,
}

impl Instance {
    pub fn new(system: PreferenceSystem) -> Self {
        let m = system.edge_count();
        Instance { system, cost: vec![None; m], weight: vec![None; m], h: vec![None; m], levels: Vec::new() }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { text: &line[s..i], column: s + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.contains([':', '#', '=', '(', ')', ',', '{', '}'])
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Boys,
    Girls,
    Edges,
    Prefs,
    Attributes,
}

struct Parser {
    line: usize,
    section: Section,
    boys: Vec<String>,
    girls: Vec<String>,
    nodes: HashMap<String, (bool, usize)>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, EdgeId>,
    boy_prefs: Vec<Option<Vec<EdgeId>>>,
    girl_prefs: Vec<Option<Vec<EdgeId>>>,
    attributes: Vec<(usize, usize, &'static str, EdgeId, i64, Option<bool>)>,
}

impl Parser {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column, kind }
    }

    fn enter(&mut self, section: Section, name: &'static str, column: usize) -> Result<(), ParseError> {
        let repeatable = matches!(section, Section::Edges | Section::Prefs | Section::Attributes);
        if self.section > section || (self.section == section && !repeatable) {
            return Err(self.err(column, ParseErrorKind::OutOfOrder(name)));
        }
        self.section = section;
        Ok(())
    }

    fn node_list(&mut self, toks: &[Token], boys: bool) -> Result<(), ParseError> {
        for t in &toks[1..] {
            if !valid_id(t.text) {
                return Err(self.err(t.column, ParseErrorKind::Syntax(format!("invalid node id `{}`", t.text))));
            }
            let list = if boys { &mut self.boys } else { &mut self.girls };
            let idx = list.len();
            list.push(t.text.to_string());
            if self.nodes.insert(t.text.to_string(), (boys, idx)).is_some() {
                return Err(self.err(t.column, ParseErrorKind::DuplicateId(t.text.into())));
            }
        }
        Ok(())
    }

    fn edge(&mut self, toks: &[Token]) -> Result<(), ParseError> {
        if toks.len() != 4 {
            return Err(self.err(toks[0].column, ParseErrorKind::Syntax("expected `edge <eid> <boy> <girl>`".into())));
        }
        let (id, boy, girl) = (&toks[1], &toks[2], &toks[3]);
        if !valid_id(id.text) {
            return Err(self.err(id.column, ParseErrorKind::Syntax(format!("invalid edge id `{}`", id.text))));
        }
        if self.edge_index.contains_key(id.text) || self.nodes.contains_key(id.text) {
            return Err(self.err(id.column, ParseErrorKind::DuplicateId(id.text.into())));
        }
        let b = match self.nodes.get(boy.text) {
            Some(&(true, b)) => b,
            _ => return Err(self.err(boy.column, ParseErrorKind::UnknownNode(boy.text.into()))),
        };
        let g = match self.nodes.get(girl.text) {
            Some(&(false, g)) => g,
            _ => return Err(self.err(girl.column, ParseErrorKind::UnknownNode(girl.text.into()))),
        };
        self.edge_index.insert(id.text.to_string(), EdgeId(self.edges.len()));
        self.edges.push(Edge { name: id.text.to_string(), boy: b, girl: g });
        Ok(())
    }

    fn pref(&mut self, toks: &[Token]) -> Result<(), ParseError> {
        let head = toks.get(1).filter(|t| t.text.ends_with(':'));
        let Some(head) = head else {
            return Err(self.err(toks[0].column, ParseErrorKind::Syntax("expected `pref <node>: <eid> ...`".into())));
        };
        let name = head.text.trim_end_matches(':');
        let Some(&(is_boy, v)) = self.nodes.get(name) else {
            return Err(self.err(head.column, ParseErrorKind::UnknownNode(name.into())));
        };
        let mut list = Vec::new();
        for t in &toks[2..] {
            if t.text.contains(['=', '(', ')', '{', '}', ',']) {
                return Err(self.err(t.column, ParseErrorKind::Tie { node: name.into() }));
            }
            let Some(&e) = self.edge_index.get(t.text) else {
                return Err(self.err(t.column, ParseErrorKind::UnknownEdge(t.text.into())));
            };
            let edge = &self.edges[e.0];
            if (if is_boy { edge.boy } else { edge.girl }) != v {
                return Err(self.err(t.column, ParseErrorKind::Invalid(format!("edge `{}` is not incident to `{name}`", t.text))));
            }
            if list.contains(&e) {
                return Err(self.err(t.column, ParseErrorKind::DuplicateId(t.text.into())));
            }
            list.push(e);
        }
        let slot = if is_boy { &mut self.boy_prefs[v] } else { &mut self.girl_prefs[v] };
        if slot.is_some() {
            return Err(self.err(head.column, ParseErrorKind::DuplicateId(format!("pref {name}"))));
        }
        *slot = Some(list);
        Ok(())
    }

    fn attribute(&mut self, toks: &[Token], kind: &'static str) -> Result<(), ParseError> {
        let level = kind == "level";
        let expected = if level { 4 } else { 3 };
        if toks.len() != expected {
            let shape = if level { "level <node> <eid> <positive-int>" } else { "<kind> <eid> <integer>" };
            return Err(self.err(toks[0].column, ParseErrorKind::Syntax(format!("expected `{shape}`"))));
        }
        let side = if level {
            match self.nodes.get(toks[1].text) {
                Some(&(is_boy, _)) => Some(is_boy),
                None => return Err(self.err(toks[1].column, ParseErrorKind::UnknownNode(toks[1].text.into()))),
            }
        } else {
            None
        };
        let et = &toks[expected - 2];
        let Some(&e) = self.edge_index.get(et.text) else {
            return Err(self.err(et.column, ParseErrorKind::UnknownEdge(et.text.into())));
        };
        if let Some(is_boy) = side {
            let edge = &self.edges[e.0];
            let owner = if is_boy { &self.boys[edge.boy] } else { &self.girls[edge.girl] };
            if owner != toks[1].text {
                return Err(self.err(et.column, ParseErrorKind::Invalid(format!("edge `{}` is not incident to `{}`", et.text, toks[1].text))));
            }
        }
        let vt = &toks[expected - 1];
        let value: i64 = vt
            .text
            .parse()
            .map_err(|_| self.err(vt.column, ParseErrorKind::Syntax(format!("`{}` is not an integer", vt.text))))?;
        let lowest = match kind {
            "cost" => i64::MIN,
            "level" => 1,
            _ => 0,
        };
        if value < lowest || (level && value > i64::from(u32::MAX)) {
            return Err(self.err(vt.column, ParseErrorKind::Syntax(format!("{kind} value {value} out of range"))));
        }
        self.attributes.push((self.line, toks[0].column, kind, e, value, side));
        Ok(())
    }

    fn finish(self) -> Result<Instance, ParseError> {
        let names = |prefs: &[Option<Vec<EdgeId>>], nodes: &[String], is_boy: bool| -> Result<Vec<Vec<EdgeId>>, ParseError> {
            let mut out = Vec::with_capacity(nodes.len());
            for (v, slot) in prefs.iter().enumerate() {
                let listed = slot.clone().unwrap_or_default();
                let missing: Vec<String> = self
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|(i, e)| (if is_boy { e.boy } else { e.girl }) == v && !listed.contains(&EdgeId(*i)))
                    .map(|(_, e)| e.name.clone())
                    .collect();
                if !missing.is_empty() {
                    let kind = ParseErrorKind::IncompletePrefs { node: nodes[v].clone(), missing };
                    return Err(ParseError { line: 0, column: 0, kind });
                }
                out.push(listed);
            }
            Ok(out)
        };
        let boy_prefs = names(&self.boy_prefs, &self.boys, true)?;
        let girl_prefs = names(&self.girl_prefs, &self.girls, false)?;
        let system = PreferenceSystem::new(self.boys.clone(), self.girls.clone(), self.edges.clone(), boy_prefs, girl_prefs)
            .map_err(|e| ParseError { line: 0, column: 0, kind: ParseErrorKind::Invalid(e.to_string()) })?;
        let mut inst = Instance::new(system);
        for &(line, column, kind, e, value, side) in &self.attributes {
            let dup = |what: String| ParseError { line, column, kind: ParseErrorKind::DuplicateId(what) };
            let name = inst.system.edge_name(e).to_string();
            let slot = match kind {
                "cost" => &mut inst.cost[e.0],
                "weight" => &mut inst.weight[e.0],
                "h" => &mut inst.h[e.0],
                _ => {
                    let boy_side = side.expect("level lines carry a side");
                    if inst.levels.iter().any(|l| l.edge == e && l.boy_side == boy_side) {
                        return Err(dup(format!("level {name}")));
                    }
                    inst.levels.push(Level { boy_side, edge: e, level: value as u32 });
                    continue;
                }
            };
            if slot.replace(value).is_some() {
                return Err(dup(format!("{kind} {name}")));
            }
        }
        inst.levels.sort_by_key(|l| (l.edge, !l.boy_side));
        Ok(inst)
    }
}

/// Parses an instance file.
pub fn parse(text: &str) -> Result<Instance, ParseError> {
    let mut p = Parser {
        line: 0,
        section: Section::Start,
        boys: Vec::new(),
        girls: Vec::new(),
        nodes: HashMap::new(),
        edges: Vec::new(),
        edge_index: HashMap::new(),
        boy_prefs: Vec::new(),
        girl_prefs: Vec::new(),
        attributes: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(first) = toks.first() else { continue };
        match first.text {
            "boys:" => {
                p.enter(Section::Boys, "boys", first.column)?;
                p.node_list(&toks, true)?;
            }
            "girls:" => {
                p.enter(Section::Girls, "girls", first.column)?;
                p.node_list(&toks, false)?;
            }
            "edge" => {
                p.enter(Section::Edges, "edge", first.column)?;
                p.edge(&toks)?;
            }
            "pref" => {
                if p.section < Section::Prefs {
                    p.boy_prefs = vec![None; p.boys.len()];
                    p.girl_prefs = vec![None; p.girls.len()];
                }
                p.enter(Section::Prefs, "pref", first.column)?;
                p.pref(&toks)?;
            }
            kind @ ("cost" | "weight" | "level" | "h") => {
                p.enter(Section::Attributes, kind_name(kind), first.column)?;
                p.attribute(&toks, kind_name(kind))?;
            }
            other => {
                return Err(p.err(first.column, ParseErrorKind::Syntax(format!("unknown line type `{other}`"))));
            }
        }
    }
    if p.section < Section::Prefs {
        p.boy_prefs = vec![None; p.boys.len()];
        p.girl_prefs = vec![None; p.girls.len()];
    }
    p.finish()
}

fn kind_name(kind: &str) -> &'static str {
    match kind {
        "cost" => "cost",
        "weight" => "weight",
        "level" => "level",
        _ => "h",
    }
}

/// Per-edge values from a file of `<kind> <eid> <integer>` lines, as given
/// by `--cost` and `--weight`.
pub fn parse_values(text: &str, system: &PreferenceSystem, kind: &'static str) -> Result<Vec<Option<i64>>, ParseError> {
    let mut out = vec![None; system.edge_count()];
    for (i, raw) in text.lines().enumerate() {
        let err = |column: usize, kind: ParseErrorKind| ParseError { line: i + 1, column, kind };
        let toks = tokens(raw.split('#').next().unwrap_or(""));
        let Some(first) = toks.first() else { continue };
        if first.text != kind || toks.len() != 3 {
            return Err(err(first.column, ParseErrorKind::Syntax(format!("expected `{kind} <eid> <integer>`"))));
        }
        let e = system.edge_by_name(toks[1].text).ok_or_else(|| err(toks[1].column, ParseErrorKind::UnknownEdge(toks[1].text.into())))?;
        let v: i64 = toks[2]
            .text
            .parse()
            .map_err(|_| err(toks[2].column, ParseErrorKind::Syntax(format!("`{}` is not an integer", toks[2].text))))?;
        if kind != "cost" && v < 0 {
            return Err(err(toks[2].column, ParseErrorKind::Syntax(format!("{kind} value {v} out of range"))));
        }
        if out[e.0].replace(v).is_some() {
            return Err(err(first.column, ParseErrorKind::DuplicateId(format!("{kind} {}", toks[1].text))));
        }
    }
    Ok(out)
}

/// Canonical text of an instance.
pub fn write(inst: &Instance) -> String {
    let s = &inst.system;
    let mut out = String::new();
    let line = |out: &mut String, head: &str, items: &mut dyn Iterator<Item = &str>| {
        out.push_str(head);
        for it in items {
            out.push(' ');
            out.push_str(it);
        }
        out.push('\n');
    };
    line(&mut out, "boys:", &mut s.boys().iter().map(String::as_str));
    line(&mut out, "girls:", &mut s.girls().iter().map(String::as_str));
    for e in s.edges() {
        out.push_str(&format!("edge {} {} {}\n", e.name, s.boys()[e.boy], s.girls()[e.girl]));
    }
    for (u, name) in s.boys().iter().enumerate() {
        line(&mut out, &format!("pref {name}:"), &mut s.boy_prefs(u).iter().map(|&e| s.edge_name(e)));
    }
    for (w, name) in s.girls().iter().enumerate() {
        line(&mut out, &format!("pref {name}:"), &mut s.girl_prefs(w).iter().map(|&e| s.edge_name(e)));
    }
    for (kind, values) in [("cost", &inst.cost), ("weight", &inst.weight)] {
        for e in s.edge_ids() {
            if let Some(v) = values[e.0] {
                out.push_str(&format!("{kind} {} {v}\n", s.edge_name(e)));
            }
        }
    }
    for l in &inst.levels {
        let edge = s.edge(l.edge);
        let node = if l.boy_side { &s.boys()[edge.boy] } else { &s.girls()[edge.girl] };
        out.push_str(&format!("level {node} {} {}\n", s.edge_name(l.edge), l.level));
    }
    for e in s.edge_ids() {
        if let Some(v) = inst.h[e.0] {
            out.push_str(&format!("h {} {v}\n", s.edge_name(e)));
        }
    }
    out
}
