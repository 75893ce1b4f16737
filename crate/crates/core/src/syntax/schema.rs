//! Axiom schemata and instance matching.
//!
//! A schema body is an ordinary [`Formula`] over two reserved group
//! metavariables: bit 0 is `α`, bit 1 is `β`, so mask `0b11` stands for `α∪β`.
//! Every atom of the body is a formula metavariable.

use super::{parse, render_with, AgentSet, Formula, Group, Substitution, SyntaxError};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub id: String,
    pub body: Formula,
}

/// Values chosen for the metavariables of a schema.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub subst: Substitution,
    pub alpha: Option<Group>,
    pub beta: Option<Group>,
}

fn meta_agents() -> AgentSet {
    AgentSet::new(["alpha", "beta"]).expect("valid")
}

impl Schema {
    /// Builds a schema from text whose groups are written `[alpha]`, `[beta]`, `[alpha,beta]`.
    pub fn from_text(id: &str, text: &str) -> Result<Schema, SyntaxError> {
        Ok(Schema { id: id.to_string(), body: parse(text, &meta_agents())? })
    }

    pub fn uses_alpha(&self) -> bool {
        self.body.groups().iter().any(|g| g.contains(0))
    }

    pub fn uses_beta(&self) -> bool {
        self.body.groups().iter().any(|g| g.contains(1))
    }

    /// Text with `α`, `β`, `α∪β` as group labels.
    pub fn render(&self) -> String {
        render_with(&self.body, &|g| match g.mask() {
            1 => "α".into(),
            2 => "β".into(),
            _ => "α∪β".into(),
        })
    }

    /// Instantiates the schema. Unmapped formula metavariables stay as atoms of the same name.
    pub fn instantiate(&self, b: &Bindings) -> Result<Formula, SyntaxError> {
        instantiate(&self.body, b)
    }

    /// The first bindings (in deterministic order) under which the schema yields `f`.
    pub fn match_instance(&self, f: &Formula) -> Option<Bindings> {
        self.match_extending(f, Bindings::default())
    }

    /// The first bindings extending `partial` under which the schema yields `f`.
    pub fn match_extending(&self, f: &Formula, partial: Bindings) -> Option<Bindings> {
        matches(&self.body, f, partial).into_iter().next()
    }
}

fn instantiate(p: &Formula, b: &Bindings) -> Result<Formula, SyntaxError> {
    let group = |m: Group| -> Result<Group, SyntaxError> {
        let a = || b.alpha.ok_or_else(|| SyntaxError::Unbound("α".into()));
        let be = || b.beta.ok_or_else(|| SyntaxError::Unbound("β".into()));
        Ok(match m.mask() {
            1 => a()?,
            2 => be()?,
            _ => a()?.union(be()?),
        })
    };
    let i = |x: &Formula| instantiate(x, b).map(Box::new);
    Ok(match p {
        Formula::Atom(m) => b.subst.get(m).cloned().unwrap_or_else(|| p.clone()),
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Implies(x, y) => Formula::Implies(i(x)?, i(y)?),
        Formula::Or(x, y) => Formula::Or(i(x)?, i(y)?),
        Formula::And(x, y) => Formula::And(i(x)?, i(y)?),
        Formula::Box(g, x) => Formula::Box(group(*g)?, i(x)?),
        Formula::Dia(g, x) => Formula::Dia(group(*g)?, i(x)?),
    })
}

fn bind_group(meta: Group, target: Group, b: &Bindings) -> Vec<Bindings> {
    let with = |alpha: Group, beta: Option<Group>| {
        let mut nb = b.clone();
        nb.alpha = Some(alpha);
        if beta.is_some() {
            nb.beta = beta;
        }
        nb
    };
    let subgroups = |g: Group| (1..=g.mask()).filter(move |m| m & !g.mask() == 0).map(|m| Group::from_mask(m).unwrap());
    match meta.mask() {
        1 => match b.alpha {
            Some(a) if a != target => vec![],
            _ => vec![with(target, None)],
        },
        2 => match b.beta {
            Some(x) if x != target => vec![],
            _ => {
                let mut nb = b.clone();
                nb.beta = Some(target);
                vec![nb]
            }
        },
        _ => {
            let alphas: Vec<Group> = match b.alpha {
                Some(a) => vec![a],
                None => subgroups(target).collect(),
            };
            let mut out = Vec::new();
            for a in alphas {
                if !a.is_subset(target) {
                    continue;
                }
                let betas: Vec<Group> = match b.beta {
                    Some(x) => vec![x],
                    None => subgroups(target).collect(),
                };
                for be in betas {
                    if a.union(be) == target {
                        out.push(with(a, Some(be)));
                    }
                }
            }
            out
        }
    }
}

fn matches(p: &Formula, f: &Formula, b: Bindings) -> Vec<Bindings> {
    let pair = |x1: &Formula, y1: &Formula, x2: &Formula, y2: &Formula, b: Bindings| {
        matches(x1, x2, b).into_iter().flat_map(|b| matches(y1, y2, b)).collect::<Vec<_>>()
    };
    match (p, f) {
        (Formula::Atom(m), _) => match b.subst.get(m) {
            Some(v) if v != f => vec![],
            Some(_) => vec![b],
            None => {
                let mut nb = b;
                nb.subst.insert(m.clone(), f.clone());
                vec![nb]
            }
        },
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => vec![b],
        (Formula::Implies(x1, y1), Formula::Implies(x2, y2))
        | (Formula::Or(x1, y1), Formula::Or(x2, y2))
        | (Formula::And(x1, y1), Formula::And(x2, y2)) => pair(x1, y1, x2, y2, b),
        (Formula::Box(mg, x), Formula::Box(g, y)) | (Formula::Dia(mg, x), Formula::Dia(g, y)) => {
            bind_group(*mg, *g, &b).into_iter().flat_map(|nb| matches(x, y, nb)).collect()
        }
        _ => vec![],
    }
}

/// Renders bindings for certificates: groups by agent names, formulas in canonical text.
pub fn describe_bindings(b: &Bindings, agents: &AgentSet) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    if let Some(a) = b.alpha {
        out.insert("α".to_string(), agents.group_key(a));
    }
    if let Some(x) = b.beta {
        out.insert("β".to_string(), agents.group_key(x));
    }
    for (k, v) in &b.subst {
        out.insert(k.clone(), super::render(v, agents));
    }
    out
}
