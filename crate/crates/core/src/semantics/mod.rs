//! Finite birelational frames, hereditary valuations and satisfaction.

mod eval;
mod json;
mod mono;

pub use eval::{
    satisfies, satisfies_variant, true_in_model, truth_set, truth_set_variant, Algebra, Evaluator, Structure,
    Variant,
};
pub use json::{frame_from_json, frame_to_json, model_from_json, model_to_json, model_to_value, LoadOptions};
pub use mono::{mono_satisfies, mono_truth_set, MonoEvaluator, MonoModel, MonoStructure};

use crate::bitset::{Rel, StateSet};
use crate::syntax::{AgentSet, Formula, Group};
use std::collections::BTreeMap;

/// Default cap on valuation assignments examined by one validity check.
pub const DEFAULT_VALUATION_CAP: u64 = 1 << 20;
/// Largest carrier for which up-sets are enumerated.
pub const MAX_UP_SET_STATES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid valuation: {0}")]
    InvalidValuation(String),
    #[error("fischer_servi semantics requires a forward confluent frame")]
    NotForwardConfluent,
    #[error("document error: {0}")]
    Document(String),
    #[error(transparent)]
    Syntax(#[from] crate::syntax::SyntaxError),
}

/// A finite frame: states `0..n`, a preorder and one relation per nonempty group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub agents: AgentSet,
    pub names: Vec<String>,
    pub leq: Rel,
    /// Indexed by [`Group::index`].
    pub rel: Vec<Rel>,
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

impl Frame {
    /// Builds a frame with default state names and validates it.
    pub fn new(agents: AgentSet, leq: Rel, rel: Vec<Rel>) -> Result<Frame, SemanticsError> {
        let names = default_names(leq.size());
        let f = Frame { agents, names, leq, rel };
        let report = check_frame(&f);
        if report.ok() {
            Ok(f)
        } else {
            Err(SemanticsError::InvalidFrame(report.violations.join("; ")))
        }
    }

    /// Builds a frame whose relation for group `g` is `rel(g)`.
    pub fn from_fn(agents: AgentSet, leq: Rel, rel: impl Fn(Group) -> Rel) -> Result<Frame, SemanticsError> {
        let rels = agents.groups().map(rel).collect();
        Frame::new(agents, leq, rels)
    }

    pub fn size(&self) -> usize {
        self.leq.size()
    }

    pub fn rel(&self, g: Group) -> &Rel {
        &self.rel[g.index()]
    }

    pub fn geq(&self) -> Rel {
        self.leq.transpose()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Frame {
        assert_eq!(names.len(), self.size());
        self.names = names;
        self
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_up_closed(&self, x: &StateSet) -> bool {
        self.leq.image(x).is_subset(x)
    }
}

/// Result of [`check_frame`]; empty `violations` means the frame is well formed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FrameReport {
    pub violations: Vec<String>,
}

impl FrameReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_frame(f: &Frame) -> FrameReport {
    let mut violations = Vec::new();
    let n = f.size();
    if n == 0 {
        violations.push("no states".to_string());
    }
    if f.names.len() != n {
        violations.push(format!("{} names for {} states", f.names.len(), n));
    }
    if !f.leq.is_reflexive() {
        violations.push("not reflexive".to_string());
    }
    if !f.leq.is_transitive() {
        violations.push("not transitive".to_string());
    }
    if f.rel.len() != f.agents.group_count() {
        violations.push(format!("{} group relations for {} groups", f.rel.len(), f.agents.group_count()));
    }
    for (i, r) in f.rel.iter().enumerate() {
        if r.size() != n {
            violations.push(format!("relation for group {} has the wrong carrier", f.agents.group_key(Group::from_index(i))));
        }
    }
    FrameReport { violations }
}

/// Truth sets of atoms.
pub type Valuation = BTreeMap<String, StateSet>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    pub val: Valuation,
}

impl Model {
    /// Rejects valuations that are not up-closed.
    pub fn new(frame: Frame, val: Valuation) -> Result<Model, SemanticsError> {
        for (p, x) in &val {
            if x.universe() != frame.size() {
                return Err(SemanticsError::InvalidValuation(format!("{p}: wrong carrier")));
            }
            if !frame.is_up_closed(x) {
                return Err(SemanticsError::InvalidValuation(format!("{p} is not closed under ≤")));
            }
        }
        Ok(Model { frame, val })
    }
}

/// All up-closed subsets of the carrier, ascending by bitmask.
pub fn up_sets(f: &Frame) -> Result<Vec<StateSet>, SemanticsError> {
    let n = f.size();
    if n > MAX_UP_SET_STATES {
        return Err(SemanticsError::Budget(format!("up-set enumeration over {n} states")));
    }
    let rows: Vec<u64> = (0..n).map(|i| f.leq.row(i).mask()).collect();
    Ok((0u64..1 << n)
        .filter(|&m| (0..n).all(|i| m >> i & 1 == 0 || rows[i] & !m == 0))
        .map(|m| StateSet::from_mask(n, m))
        .collect())
}

/// Calls `visit` on every valuation of `atoms` by up-sets until it returns `false`.
/// Returns `Ok(false)` if stopped early.
pub fn for_each_valuation(
    f: &Frame,
    atoms: &[String],
    cap: u64,
    mut visit: impl FnMut(&Valuation) -> bool,
) -> Result<bool, SemanticsError> {
    let ups = up_sets(f)?;
    let total = (ups.len() as u64).checked_pow(atoms.len() as u32).unwrap_or(u64::MAX);
    if total > cap {
        return Err(SemanticsError::Budget(format!("{total} valuations exceed the cap of {cap}")));
    }
    let mut idx = vec![0usize; atoms.len()];
    let mut val: Valuation = atoms.iter().map(|p| (p.clone(), ups[0].clone())).collect();
    loop {
        if !visit(&val) {
            return Ok(false);
        }
        let mut k = 0;
        loop {
            if k == atoms.len() {
                return Ok(true);
            }
            idx[k] += 1;
            if idx[k] < ups.len() {
                val.insert(atoms[k].clone(), ups[idx[k]].clone());
                break;
            }
            idx[k] = 0;
            val.insert(atoms[k].clone(), ups[0].clone());
            k += 1;
        }
    }
}

/// A valuation and state falsifying `a` on `f`, if any.
pub fn falsifying_valuation(
    f: &Frame,
    a: &Formula,
    cap: u64,
) -> Result<Option<(Valuation, usize)>, SemanticsError> {
    let atoms: Vec<String> = a.atoms().into_iter().map(String::from).collect();
    let mut found = None;
    for_each_valuation(f, &atoms, cap, |val| {
        let t = Evaluator::new(f, val).eval(a);
        match t.complement().first() {
            Some(s) => {
                found = Some((val.clone(), s));
                false
            }
            None => true,
        }
    })?;
    Ok(found)
}

pub fn valid_in_frame(f: &Frame, a: &Formula) -> Result<bool, SemanticsError> {
    valid_in_frame_with_cap(f, a, DEFAULT_VALUATION_CAP)
}

pub fn valid_in_frame_with_cap(f: &Frame, a: &Formula, cap: u64) -> Result<bool, SemanticsError> {
    Ok(falsifying_valuation(f, a, cap)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    pub(crate) fn chain2() -> Frame {
        let ag = AgentSet::standard(1);
        Frame::from_fn(ag, Rel::from_pairs(2, [(0, 0), (0, 1), (1, 1)]), |_| Rel::empty(2)).unwrap()
    }

    #[test]
    fn frame_checks() {
        let ag = AgentSet::standard(1);
        let one = Frame::from_fn(ag.clone(), Rel::identity(1), |_| Rel::identity(1)).unwrap();
        assert!(check_frame(&one).ok());
        let bad = Frame { agents: ag.clone(), names: default_names(1), leq: Rel::empty(1), rel: vec![Rel::empty(1)] };
        assert_eq!(check_frame(&bad).violations, vec!["not reflexive".to_string()]);
        let leq = Rel::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]);
        let bad = Frame { agents: ag, names: default_names(3), leq, rel: vec![Rel::empty(3)] };
        assert_eq!(check_frame(&bad).violations, vec!["not transitive".to_string()]);
    }

    #[test]
    fn up_set_listing() {
        let ag = AgentSet::standard(1);
        let one = Frame::from_fn(ag.clone(), Rel::identity(1), |_| Rel::empty(1)).unwrap();
        assert_eq!(up_sets(&one).unwrap(), vec![StateSet::empty(1), StateSet::full(1)]);
        let masks: Vec<u64> = up_sets(&chain2()).unwrap().iter().map(StateSet::mask).collect();
        assert_eq!(masks, vec![0b00, 0b10, 0b11]);
        let disc = Frame::from_fn(ag, Rel::identity(2), |_| Rel::empty(2)).unwrap();
        assert_eq!(up_sets(&disc).unwrap().len(), 4);
    }

    #[test]
    fn validity() {
        let f = chain2();
        let ag = f.agents.clone();
        assert!(valid_in_frame(&f, &Formula::Top).unwrap());
        assert!(valid_in_frame(&f, &parse("[a]p /\\ [a]q -> [a](p /\\ q)", &ag).unwrap()).unwrap());
        let lem = parse("p \\/ ~p", &ag).unwrap();
        let (val, s) = falsifying_valuation(&f, &lem, DEFAULT_VALUATION_CAP).unwrap().unwrap();
        assert_eq!((val["p"].mask(), s), (0b10, 0));
        assert!(matches!(valid_in_frame_with_cap(&f, &lem, 2), Err(SemanticsError::Budget(_))));
    }

    #[test]
    fn non_closed_valuation_rejected() {
        let mut val = Valuation::new();
        val.insert("p".into(), StateSet::from_states(2, [0]));
        assert!(Model::new(chain2(), val).is_err());
    }
}
