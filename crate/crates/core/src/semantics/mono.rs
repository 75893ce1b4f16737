use super::{default_names, SemanticsError, Valuation};
use crate::bitset::{Rel, StateSet};
use crate::syntax::BoxFormula;

/// A single-relation birelational structure `(W, ≤, R)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoStructure {
    pub names: Vec<String>,
    pub leq: Rel,
    pub r: Rel,
}

impl MonoStructure {
    pub fn new(leq: Rel, r: Rel) -> Result<Self, SemanticsError> {
        if !leq.is_reflexive() || !leq.is_transitive() {
            return Err(SemanticsError::InvalidFrame("≤ is not a preorder".into()));
        }
        if r.size() != leq.size() {
            return Err(SemanticsError::InvalidFrame("relation has the wrong carrier".into()));
        }
        Ok(MonoStructure { names: default_names(leq.size()), leq, r })
    }

    pub fn size(&self) -> usize {
        self.leq.size()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoModel {
    pub structure: MonoStructure,
    pub val: Valuation,
}

impl MonoModel {
    pub fn new(structure: MonoStructure, val: Valuation) -> Result<Self, SemanticsError> {
        for (p, x) in &val {
            if !structure.leq.image(x).is_subset(x) {
                return Err(SemanticsError::InvalidValuation(format!("{p} is not closed under ≤")));
            }
        }
        Ok(MonoModel { structure, val })
    }
}

/// States satisfying `a`, where `□A` holds at `s` iff every `R`-successor of `s` satisfies `A`.
pub fn mono_truth_set(m: &MonoModel, a: &BoxFormula) -> StateSet {
    let n = m.structure.size();
    let ev = |x: &BoxFormula| mono_truth_set(m, x);
    match a {
        BoxFormula::Atom(p) => m.val.get(p).cloned().unwrap_or_else(|| StateSet::empty(n)),
        BoxFormula::Top => StateSet::full(n),
        BoxFormula::Bot => StateSet::empty(n),
        BoxFormula::Implies(x, y) => m.structure.leq.preimage(&ev(x).difference(&ev(y))).complement(),
        BoxFormula::Or(x, y) => ev(x).union(&ev(y)),
        BoxFormula::And(x, y) => ev(x).intersection(&ev(y)),
        BoxFormula::Box(x) => m.structure.r.preimage(&ev(x).complement()).complement(),
    }
}

pub fn mono_satisfies(m: &MonoModel, s: usize, a: &BoxFormula) -> bool {
    let st = &m.structure;
    let n = st.size();
    match a {
        BoxFormula::Atom(p) => m.val.get(p).is_some_and(|x| x.contains(s)),
        BoxFormula::Top => true,
        BoxFormula::Bot => false,
        BoxFormula::Implies(x, y) => {
            (0..n).all(|t| !st.leq.contains(s, t) || !mono_satisfies(m, t, x) || mono_satisfies(m, t, y))
        }
        BoxFormula::Or(x, y) => mono_satisfies(m, s, x) || mono_satisfies(m, s, y),
        BoxFormula::And(x, y) => mono_satisfies(m, s, x) && mono_satisfies(m, s, y),
        BoxFormula::Box(x) => (0..n).all(|t| !st.r.contains(s, t) || mono_satisfies(m, t, x)),
    }
}

/// Truth sets over a mono-modal model, for formulas whose boxes all carry one group.
/// The group label is ignored; diamonds have no mono-modal reading.
pub struct MonoEvaluator<'a>(pub &'a MonoModel);

impl super::Algebra for MonoEvaluator<'_> {
    type Value = StateSet;

    fn atom(&self, p: &str) -> StateSet {
        self.0.val.get(p).cloned().unwrap_or_else(|| StateSet::empty(self.0.structure.size()))
    }
    fn top(&self) -> StateSet {
        StateSet::full(self.0.structure.size())
    }
    fn bot(&self) -> StateSet {
        StateSet::empty(self.0.structure.size())
    }
    fn implies(&self, a: &StateSet, b: &StateSet) -> StateSet {
        self.0.structure.leq.preimage(&a.difference(b)).complement()
    }
    fn or(&self, a: &StateSet, b: &StateSet) -> StateSet {
        a.union(b)
    }
    fn and(&self, a: &StateSet, b: &StateSet) -> StateSet {
        a.intersection(b)
    }
    fn boxed(&self, _: crate::syntax::Group, a: &StateSet) -> StateSet {
        self.0.structure.r.preimage(&a.complement()).complement()
    }
    fn dia(&self, _: crate::syntax::Group, _: &StateSet) -> StateSet {
        panic!("diamonds are not part of the mono-modal language")
    }
}
