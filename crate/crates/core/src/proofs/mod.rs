//! Axiom schemata, the eight logics and a Hilbert-style derivation checker.

mod catalog;

pub use catalog::{ipl_basis, schema, schema_catalog, LogicId};

use crate::classes::{has_class, FrameClass};
use crate::search::{frames_of_size, SizeBudget, MAX_SEARCH_STATES};
use crate::semantics::{falsifying_valuation, Model, SemanticsError, DEFAULT_VALUATION_CAP};
use crate::syntax::{
    describe_bindings, parse, parse_inferring_agents, render, AgentSet, Bindings, Formula, Group, Substitution,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// How a line was obtained. Line references are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Justification {
    Axiom {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<Vec<String>>,
        /// Metavariable values, as formula text.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        subst: BTreeMap<String, String>,
    },
    Mp {
        /// The line proving `A`.
        minor: usize,
        /// The line proving `A -> B`.
        major: usize,
    },
    R1 {
        line: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<Vec<String>>,
    },
    R2 {
        line: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<Vec<String>>,
    },
    R3 {
        line: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<Vec<String>>,
    },
    Sub {
        line: usize,
        subst: BTreeMap<String, String>,
    },
}

impl Justification {
    fn rule(&self) -> &'static str {
        match self {
            Justification::Axiom { .. } => "axiom",
            Justification::Mp { .. } => "mp",
            Justification::R1 { .. } => "r1",
            Justification::R2 { .. } => "r2",
            Justification::R3 { .. } => "r3",
            Justification::Sub { .. } => "sub",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Line {
    pub formula: String,
    pub just: Justification,
}

/// A derivation document: a bare list of lines, or an object that also fixes the agents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "DerivationDoc")]
pub struct Derivation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<Vec<String>>,
    pub lines: Vec<Line>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DerivationDoc {
    Bare(Vec<Line>),
    Full {
        #[serde(default)]
        agents: Option<Vec<String>>,
        lines: Vec<Line>,
    },
}

impl From<DerivationDoc> for Derivation {
    fn from(d: DerivationDoc) -> Self {
        match d {
            DerivationDoc::Bare(lines) => Derivation { agents: None, lines },
            DerivationDoc::Full { agents, lines } => Derivation { agents, lines },
        }
    }
}

impl Derivation {
    pub fn from_json(text: &str) -> Result<Derivation, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The declared agents, or the sorted names mentioned anywhere in the document.
    pub fn agent_set(&self) -> Result<AgentSet, String> {
        if let Some(names) = &self.agents {
            return AgentSet::new(names.iter().map(String::as_str)).map_err(|e| e.to_string());
        }
        let mut names = BTreeSet::new();
        for (i, l) in self.lines.iter().enumerate() {
            let mut texts = vec![l.formula.as_str()];
            let mut groups: Vec<&Vec<String>> = Vec::new();
            match &l.just {
                Justification::Axiom { alpha, beta, subst, .. } => {
                    groups.extend(alpha.iter().chain(beta.iter()));
                    texts.extend(subst.values().map(String::as_str));
                }
                Justification::R1 { group, .. } | Justification::R2 { group, .. } | Justification::R3 { group, .. } => {
                    groups.extend(group.iter())
                }
                Justification::Sub { subst, .. } => texts.extend(subst.values().map(String::as_str)),
                Justification::Mp { .. } => {}
            }
            for t in texts {
                let (ag, f) = parse_inferring_agents(t).map_err(|e| format!("line {}: {e}", i + 1))?;
                if !f.groups().is_empty() {
                    names.extend(ag.names().iter().cloned());
                }
            }
            names.extend(groups.into_iter().flatten().cloned());
        }
        if names.is_empty() {
            return Ok(AgentSet::standard(1));
        }
        AgentSet::new(names.iter().map(String::as_str)).map_err(|e| e.to_string())
    }
}

/// Why a line was not accepted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RejectReason {
    Empty,
    Agents { msg: String },
    Parse { msg: String },
    UnknownSchema { id: String },
    NotInLogic { id: String },
    NotAnInstance { id: String },
    BadGroup { msg: String },
    BadReference { index: usize },
    ShapeMismatch { msg: String },
    CertificateMismatch,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Empty => write!(f, "derivation has no lines"),
            RejectReason::Agents { msg } => write!(f, "agents: {msg}"),
            RejectReason::Parse { msg } => write!(f, "{msg}"),
            RejectReason::UnknownSchema { id } => write!(f, "unknown schema {id}"),
            RejectReason::NotInLogic { id } => write!(f, "schema {id} does not belong to the logic"),
            RejectReason::NotAnInstance { id } => write!(f, "formula is not an instance of {id} under the given bindings"),
            RejectReason::BadGroup { msg } => write!(f, "bad group: {msg}"),
            RejectReason::BadReference { index } => write!(f, "line reference {index} does not point to an earlier line"),
            RejectReason::ShapeMismatch { msg } => write!(f, "{msg}"),
            RejectReason::CertificateMismatch => write!(f, "re-checking does not reproduce the certificate"),
        }
    }
}

/// The first failing line (0 for document-level problems) and the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct Rejection {
    pub line: usize,
    pub reason: RejectReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedLine {
    pub line: usize,
    /// Canonical rendering of the line's formula.
    pub formula: String,
    pub rule: String,
    pub evidence: BTreeMap<String, String>,
}

/// Per-line evidence for an accepted derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub logic: LogicId,
    pub agents: Vec<String>,
    /// The intuitionistic basis, as `id: schema`.
    pub basis: Vec<String>,
    pub theorem: String,
    pub lines: Vec<CertifiedLine>,
    pub derivation: Derivation,
}

impl Certificate {
    pub fn agent_set(&self) -> AgentSet {
        AgentSet::new(self.agents.iter().map(String::as_str)).expect("certificate agents were validated")
    }

    pub fn theorem_formula(&self) -> Formula {
        parse(&self.theorem, &self.agent_set()).expect("certificate theorem was rendered by the checker")
    }
}

fn reject(line: usize, reason: RejectReason) -> Rejection {
    Rejection { line, reason }
}

fn shape(line: usize, msg: impl Into<String>) -> Rejection {
    reject(line, RejectReason::ShapeMismatch { msg: msg.into() })
}

fn group_of(agents: &AgentSet, names: &[String], line: usize) -> Result<Group, Rejection> {
    agents.group(names).map_err(|e| reject(line, RejectReason::BadGroup { msg: e.to_string() }))
}

fn parse_subst(agents: &AgentSet, s: &BTreeMap<String, String>, line: usize) -> Result<Substitution, Rejection> {
    s.iter()
        .map(|(k, v)| {
            parse(v, agents).map(|f| (k.clone(), f)).map_err(|e| reject(line, RejectReason::Parse { msg: format!("{k}: {e}") }))
        })
        .collect()
}

/// Accepts `d` in `logic` or reports the first line that fails.
pub fn check_derivation(d: &Derivation, logic: LogicId) -> Result<Certificate, Rejection> {
    let agents = d.agent_set().map_err(|msg| reject(0, RejectReason::Agents { msg }))?;
    if d.lines.is_empty() {
        return Err(reject(0, RejectReason::Empty));
    }
    let mut proved: Vec<Formula> = Vec::new();
    let mut lines = Vec::new();
    for (i, l) in d.lines.iter().enumerate() {
        let n = i + 1;
        let f = parse(&l.formula, &agents).map_err(|e| reject(n, RejectReason::Parse { msg: e.to_string() }))?;
        let earlier = |k: usize| -> Result<&Formula, Rejection> {
            if (1..n).contains(&k) {
                Ok(&proved[k - 1])
            } else {
                Err(reject(n, RejectReason::BadReference { index: k }))
            }
        };
        let mut evidence = BTreeMap::new();
        match &l.just {
            Justification::Axiom { id, alpha, beta, subst } => {
                let s = schema(id).ok_or_else(|| reject(n, RejectReason::UnknownSchema { id: id.clone() }))?;
                if !logic.contains_schema(id) {
                    return Err(reject(n, RejectReason::NotInLogic { id: id.clone() }));
                }
                let partial = Bindings {
                    subst: parse_subst(&agents, subst, n)?,
                    alpha: alpha.as_ref().map(|g| group_of(&agents, g, n)).transpose()?,
                    beta: beta.as_ref().map(|g| group_of(&agents, g, n)).transpose()?,
                };
                let b = s.match_extending(&f, partial).ok_or_else(|| reject(n, RejectReason::NotAnInstance { id: id.clone() }))?;
                evidence.insert("schema".into(), format!("{id}: {}", s.render()));
                evidence.extend(describe_bindings(&b, &agents));
            }
            Justification::Mp { minor, major } => {
                let (a, imp) = (earlier(*minor)?, earlier(*major)?);
                if *imp != Formula::implies(a.clone(), f.clone()) {
                    return Err(shape(n, format!("line {major} is not line {minor} -> this formula")));
                }
                evidence.insert("minor".into(), minor.to_string());
                evidence.insert("major".into(), major.to_string());
            }
            Justification::R1 { line, group } | Justification::R2 { line, group } => {
                let boxed = matches!(l.just, Justification::R1 { .. });
                let Formula::Implies(a, b) = earlier(*line)? else {
                    return Err(shape(n, format!("premise on line {line} is not an implication")));
                };
                let g = rule_group(&f, boxed, &agents, group.as_deref(), n)?;
                let wrap = |x: &Formula| if boxed { Formula::boxed(g, x.clone()) } else { Formula::dia(g, x.clone()) };
                if f != Formula::implies(wrap(a), wrap(b)) {
                    return Err(shape(n, format!("conclusion does not match {} applied to line {line}", l.just.rule())));
                }
                evidence.insert("premise".into(), line.to_string());
                evidence.insert("group".into(), agents.group_key(g));
            }
            Justification::R3 { line, group } => {
                let premise = earlier(*line)?;
                let g = rule_group(&f, false, &agents, group.as_deref(), n)?;
                let bad = || shape(n, format!("line {line} and this line do not have the shapes <α>A -> B \\/ [α](A -> C) and <α>A -> B \\/ <α>C"));
                let (Formula::Implies(da, rest), Formula::Implies(da2, rest2)) = (premise, &f) else { return Err(bad()) };
                let (Formula::Or(b, bx), Formula::Or(b2, dc)) = (&**rest, &**rest2) else { return Err(bad()) };
                let (Formula::Box(gb, ac), Formula::Dia(gd, c2)) = (&**bx, &**dc) else { return Err(bad()) };
                let Formula::Implies(a, c) = &**ac else { return Err(bad()) };
                let ok = **da == Formula::dia(g, (**a).clone()) && da == da2 && b == b2 && *gb == g && *gd == g && c == c2;
                if !ok {
                    return Err(bad());
                }
                evidence.insert("premise".into(), line.to_string());
                evidence.insert("group".into(), agents.group_key(g));
            }
            Justification::Sub { line, subst } => {
                let premise = earlier(*line)?;
                let sigma = parse_subst(&agents, subst, n)?;
                if premise.substitute(&sigma) != f {
                    return Err(shape(n, format!("formula is not the substitution instance of line {line}")));
                }
                evidence.insert("premise".into(), line.to_string());
                evidence.extend(sigma.iter().map(|(k, v)| (k.clone(), render(v, &agents))));
            }
        }
        lines.push(CertifiedLine { line: n, formula: render(&f, &agents), rule: l.just.rule().into(), evidence });
        proved.push(f);
    }
    Ok(Certificate {
        logic,
        agents: agents.names().to_vec(),
        basis: ipl_basis().into_iter().map(|id| format!("{id}: {}", schema(id).expect("basis id").render())).collect(),
        theorem: lines.last().expect("nonempty").formula.clone(),
        lines,
        derivation: d.clone(),
    })
}

/// The group a rule conclusion is about, read off `<g>A -> ...` or `[g]A -> [g]B`.
fn rule_group(f: &Formula, boxed: bool, agents: &AgentSet, given: Option<&[String]>, n: usize) -> Result<Group, Rejection> {
    let found = match f {
        Formula::Implies(a, _) => match (&**a, boxed) {
            (Formula::Box(g, _), true) | (Formula::Dia(g, _), false) => Some(*g),
            _ => None,
        },
        _ => None,
    };
    let found = found.ok_or_else(|| shape(n, "conclusion does not have the rule's shape"))?;
    if let Some(names) = given {
        if group_of(agents, names, n)? != found {
            return Err(shape(n, "conclusion uses a different group than the one given"));
        }
    }
    Ok(found)
}

/// Re-checks the stored derivation and demands an identical certificate.
pub fn replay(cert: &Certificate) -> Result<(), Rejection> {
    let again = check_derivation(&cert.derivation, cert.logic)?;
    if &again == cert {
        Ok(())
    } else {
        Err(reject(0, RejectReason::CertificateMismatch))
    }
}

/// Outcome of searching a frame class for a model falsifying a theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub frames_checked: usize,
    pub countermodel: Option<(Model, usize)>,
}

/// Checks `f` for validity on every frame within budget lying in all of `classes`.
/// The first class drives generation. Stops at the first countermodel.
pub fn probe_classes(f: &Formula, agents: &AgentSet, classes: &[FrameClass], b: &SizeBudget) -> Result<ProbeReport, SemanticsError> {
    let (&lead, rest) = classes.split_first().unwrap_or((&FrameClass::All, &[]));
    let mut frames_checked = 0;
    for n in 1..=b.max_states.min(MAX_SEARCH_STATES) {
        for fr in frames_of_size(b, lead, agents, n) {
            if !rest.iter().all(|&c| has_class(&fr, c)) {
                continue;
            }
            frames_checked += 1;
            if let Some((val, s)) = falsifying_valuation(&fr, f, DEFAULT_VALUATION_CAP)? {
                return Ok(ProbeReport { frames_checked, countermodel: Some((Model { frame: fr, val }, s)) });
            }
        }
    }
    Ok(ProbeReport { frames_checked, countermodel: None })
}

/// Looks for a frame of `logic`'s class on which `f` is not valid.
pub fn soundness_probe(f: &Formula, agents: &AgentSet, logic: LogicId, b: &SizeBudget) -> Result<ProbeReport, SemanticsError> {
    probe_classes(f, agents, &logic.frame_classes(), b)
}
