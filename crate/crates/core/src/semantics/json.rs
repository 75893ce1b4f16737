use super::{check_frame, Frame, Model, SemanticsError, Valuation};
use crate::bitset::{Rel, StateSet};
use crate::syntax::AgentSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Replace `leq` by its reflexive-transitive closure.
    pub close_leq: bool,
    /// Derive missing non-singleton relations as intersections of the singleton ones.
    pub complete_by_intersection: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    agents: Vec<String>,
    worlds: Vec<String>,
    leq: Vec<(String, String)>,
    rel: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valuation: Option<BTreeMap<String, Vec<String>>>,
}

fn doc_err(msg: impl Into<String>) -> SemanticsError {
    SemanticsError::Document(msg.into())
}

fn parse_doc(text: &str) -> Result<Doc, SemanticsError> {
    serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))
}

fn build_frame(doc: &Doc, opts: LoadOptions) -> Result<Frame, SemanticsError> {
    let agents = AgentSet::new(doc.agents.clone())?;
    let n = doc.worlds.len();
    if n == 0 {
        return Err(doc_err("no worlds"));
    }
    let index: BTreeMap<&str, usize> = doc.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    if index.len() != n {
        return Err(doc_err("duplicate world names"));
    }
    let world = |w: &str| index.get(w).copied().ok_or_else(|| doc_err(format!("unknown world {w:?}")));
    let rel_of = |pairs: &[(String, String)]| -> Result<Rel, SemanticsError> {
        let mut r = Rel::empty(n);
        for (a, b) in pairs {
            r.insert(world(a)?, world(b)?);
        }
        Ok(r)
    };
    let mut leq = rel_of(&doc.leq)?;
    if opts.close_leq {
        leq = leq.reflexive_transitive_closure();
    }
    let mut given: Vec<Option<Rel>> = vec![None; agents.group_count()];
    for (key, pairs) in &doc.rel {
        let g = agents.group_from_key(key)?;
        if given[g.index()].is_some() {
            return Err(doc_err(format!("group {key:?} listed twice")));
        }
        given[g.index()] = Some(rel_of(pairs)?);
    }
    let mut rel = Vec::with_capacity(given.len());
    for g in agents.groups() {
        let r = if opts.complete_by_intersection && g.len() > 1 {
            let meet = g
                .members()
                .map(|a| given[agents.singleton(a).index()].clone().ok_or_else(|| doc_err(format!("missing relation for agent {}", agents.name(a)))))
                .try_fold(Rel::total(n), |acc, r| r.map(|r| acc.intersection(&r)))?;
            if let Some(r) = &given[g.index()] {
                if *r != meet {
                    return Err(doc_err(format!("relation for {} is not the intersection of its members", agents.group_key(g))));
                }
            }
            meet
        } else {
            given[g.index()].clone().ok_or_else(|| doc_err(format!("missing relation for group {}", agents.group_key(g))))?
        };
        rel.push(r);
    }
    let frame = Frame { agents, names: doc.worlds.clone(), leq, rel };
    let report = check_frame(&frame);
    if !report.ok() {
        return Err(SemanticsError::InvalidFrame(report.violations.join("; ")));
    }
    Ok(frame)
}

pub fn frame_from_json(text: &str, opts: LoadOptions) -> Result<Frame, SemanticsError> {
    build_frame(&parse_doc(text)?, opts)
}

/// Loads a model; a missing `valuation` means every atom is false.
pub fn model_from_json(text: &str, opts: LoadOptions) -> Result<Model, SemanticsError> {
    let doc = parse_doc(text)?;
    let frame = build_frame(&doc, opts)?;
    let mut val = Valuation::new();
    for (p, worlds) in doc.valuation.iter().flatten() {
        if !crate::syntax::is_identifier(p) {
            return Err(doc_err(format!("invalid atom name {p:?}")));
        }
        let mut x = StateSet::empty(frame.size());
        for w in worlds {
            x.insert(frame.state_index(w).ok_or_else(|| doc_err(format!("unknown world {w:?}")))?);
        }
        val.insert(p.clone(), x);
    }
    Model::new(frame, val)
}

fn to_doc(f: &Frame, val: Option<&Valuation>) -> Doc {
    let pairs = |r: &Rel| r.pairs().map(|(i, j)| (f.names[i].clone(), f.names[j].clone())).collect::<Vec<_>>();
    Doc {
        agents: f.agents.names().to_vec(),
        worlds: f.names.clone(),
        leq: pairs(&f.leq),
        rel: f.agents.groups().map(|g| (f.agents.group_key(g), pairs(f.rel(g)))).collect(),
        valuation: val.map(|v| v.iter().map(|(p, x)| (p.clone(), x.iter().map(|i| f.names[i].clone()).collect())).collect()),
    }
}

pub fn frame_to_json(f: &Frame) -> String {
    serde_json::to_string_pretty(&to_doc(f, None)).expect("serializable")
}

pub fn model_to_value(m: &Model) -> serde_json::Value {
    serde_json::to_value(to_doc(&m.frame, Some(&m.val))).expect("serializable")
}

pub fn model_to_json(m: &Model) -> String {
    serde_json::to_string_pretty(&to_doc(&m.frame, Some(&m.val))).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = r#"{"agents":["a","b"],"worlds":["w0","w1"],"leq":[["w0","w1"]],
        "rel":{"a":[["w0","w0"],["w1","w1"]],"b":[["w0","w0"]]},"valuation":{"p":["w1"]}}"#;

    #[test]
    fn completion_and_closure() {
        let opts = LoadOptions { close_leq: true, complete_by_intersection: true };
        let m = model_from_json(CHAIN, opts).unwrap();
        let ab = m.frame.agents.full_group();
        assert_eq!(*m.frame.rel(ab), Rel::from_pairs(2, [(0, 0)]));
        assert!(m.frame.leq.contains(1, 1));
        let back = model_from_json(&model_to_json(&m), LoadOptions::default()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejections() {
        assert!(model_from_json(CHAIN, LoadOptions { close_leq: true, complete_by_intersection: false }).is_err());
        assert!(model_from_json(CHAIN, LoadOptions { close_leq: false, complete_by_intersection: true }).is_err());
        let bad_val = CHAIN.replace(r#""p":["w1"]"#, r#""p":["w0"]"#);
        let opts = LoadOptions { close_leq: true, complete_by_intersection: true };
        assert!(matches!(model_from_json(&bad_val, opts), Err(SemanticsError::InvalidValuation(_))));
        let mismatch = CHAIN.replace(r#""b":[["w0","w0"]]"#, r#""b":[["w0","w0"]],"a,b":[]"#);
        assert!(model_from_json(&mismatch, opts).is_err());
    }
}
