use super::{Frame, Model, SemanticsError, Valuation};
use crate::bitset::StateSet;
use crate::syntax::{AgentSet, Formula, Group};
use std::hash::Hash;

/// The three operations truth-set computation needs from a frame.
pub trait Structure: Sync {
    fn agents(&self) -> &AgentSet;
    fn state_count(&self) -> usize;
    /// `{s : s ≤ t for some t ∈ x}`.
    fn leq_down(&self, x: &StateSet) -> StateSet;
    /// `{s : t ≤ s for some t ∈ x}`.
    fn leq_up(&self, x: &StateSet) -> StateSet;
    /// `{s : s R(g) t for some t ∈ x}`.
    fn pre(&self, g: Group, x: &StateSet) -> StateSet;
}

impl Structure for Frame {
    fn agents(&self) -> &AgentSet {
        &self.agents
    }

    fn state_count(&self) -> usize {
        self.size()
    }

    fn leq_down(&self, x: &StateSet) -> StateSet {
        self.leq.preimage(x)
    }

    fn leq_up(&self, x: &StateSet) -> StateSet {
        self.leq.image(x)
    }

    fn pre(&self, g: Group, x: &StateSet) -> StateSet {
        self.rel(g).preimage(x)
    }
}

/// Which clause interprets the diamond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `s ⊨ ⟨α⟩A` iff `s ≥∘R(α) t` and `t ⊨ A` for some `t`.
    Prenosil,
    /// `s ⊨ ⟨α⟩A` iff `s R(α) t` and `t ⊨ A` for some `t`.
    FischerServi,
    /// `s ⊨ ⟨α⟩A` iff every `t ≥ s` has some `u` with `t R(α) u` and `u ⊨ A`.
    Wijesekera,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Prenosil, Variant::FischerServi, Variant::Wijesekera];
}

/// A compositional interpretation of the connectives.
pub trait Algebra: Sync {
    type Value: Clone + Eq + Hash + Send + Sync;

    fn atom(&self, p: &str) -> Self::Value;
    fn top(&self) -> Self::Value;
    fn bot(&self) -> Self::Value;
    fn implies(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn or(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn boxed(&self, g: Group, a: &Self::Value) -> Self::Value;
    fn dia(&self, g: Group, a: &Self::Value) -> Self::Value;

    fn eval(&self, f: &Formula) -> Self::Value {
        match f {
            Formula::Atom(p) => self.atom(p),
            Formula::Top => self.top(),
            Formula::Bot => self.bot(),
            Formula::Implies(a, b) => self.implies(&self.eval(a), &self.eval(b)),
            Formula::Or(a, b) => self.or(&self.eval(a), &self.eval(b)),
            Formula::And(a, b) => self.and(&self.eval(a), &self.eval(b)),
            Formula::Box(g, a) => self.boxed(*g, &self.eval(a)),
            Formula::Dia(g, a) => self.dia(*g, &self.eval(a)),
        }
    }
}

/// Truth sets over a structure. Atoms missing from the valuation are false everywhere.
pub struct Evaluator<'a, S: Structure + ?Sized> {
    pub structure: &'a S,
    pub val: &'a Valuation,
    pub variant: Variant,
}

impl<'a, S: Structure + ?Sized> Evaluator<'a, S> {
    pub fn new(structure: &'a S, val: &'a Valuation) -> Self {
        Evaluator { structure, val, variant: Variant::Prenosil }
    }

    pub fn with_variant(structure: &'a S, val: &'a Valuation, variant: Variant) -> Self {
        Evaluator { structure, val, variant }
    }
}

impl<S: Structure + ?Sized> Algebra for Evaluator<'_, S> {
    type Value = StateSet;

    fn atom(&self, p: &str) -> StateSet {
        self.val.get(p).cloned().unwrap_or_else(|| StateSet::empty(self.structure.state_count()))
    }

    fn top(&self) -> StateSet {
        StateSet::full(self.structure.state_count())
    }

    fn bot(&self) -> StateSet {
        StateSet::empty(self.structure.state_count())
    }

    fn implies(&self, a: &StateSet, b: &StateSet) -> StateSet {
        self.structure.leq_down(&a.difference(b)).complement()
    }

    fn or(&self, a: &StateSet, b: &StateSet) -> StateSet {
        a.union(b)
    }

    fn and(&self, a: &StateSet, b: &StateSet) -> StateSet {
        a.intersection(b)
    }

    fn boxed(&self, g: Group, a: &StateSet) -> StateSet {
        let s = self.structure;
        s.leq_down(&s.pre(g, &a.complement())).complement()
    }

    fn dia(&self, g: Group, a: &StateSet) -> StateSet {
        let s = self.structure;
        let reach = s.pre(g, a);
        match self.variant {
            Variant::Prenosil => s.leq_up(&reach),
            Variant::FischerServi => reach,
            Variant::Wijesekera => s.leq_down(&reach.complement()).complement(),
        }
    }
}

/// The set of states of `m` satisfying `a`.
pub fn truth_set(m: &Model, a: &Formula) -> StateSet {
    Evaluator::new(&m.frame, &m.val).eval(a)
}

pub fn truth_set_variant(m: &Model, a: &Formula, v: Variant) -> Result<StateSet, SemanticsError> {
    if v == Variant::FischerServi && !crate::classes::has_class(&m.frame, crate::classes::FrameClass::ForwardConfluent) {
        return Err(SemanticsError::NotForwardConfluent);
    }
    Ok(Evaluator::with_variant(&m.frame, &m.val, v).eval(a))
}

pub fn true_in_model(m: &Model, a: &Formula) -> bool {
    truth_set(m, a).is_full()
}

/// Satisfaction at a single state, computed clause by clause.
pub fn satisfies(m: &Model, s: usize, a: &Formula) -> bool {
    sat(m, s, a, Variant::Prenosil)
}

pub fn satisfies_variant(m: &Model, s: usize, a: &Formula, v: Variant) -> Result<bool, SemanticsError> {
    if v == Variant::FischerServi && !crate::classes::has_class(&m.frame, crate::classes::FrameClass::ForwardConfluent) {
        return Err(SemanticsError::NotForwardConfluent);
    }
    Ok(sat(m, s, a, v))
}

fn sat(m: &Model, s: usize, a: &Formula, v: Variant) -> bool {
    let f = &m.frame;
    let n = f.size();
    let leq = |x: usize, y: usize| f.leq.contains(x, y);
    match a {
        Formula::Atom(p) => m.val.get(p).is_some_and(|x| x.contains(s)),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Implies(x, y) => (0..n).all(|t| !leq(s, t) || !sat(m, t, x, v) || sat(m, t, y, v)),
        Formula::Or(x, y) => sat(m, s, x, v) || sat(m, s, y, v),
        Formula::And(x, y) => sat(m, s, x, v) && sat(m, s, y, v),
        Formula::Box(g, x) => {
            let r = f.rel(*g);
            (0..n).all(|t| !(0..n).any(|w| leq(s, w) && r.contains(w, t)) || sat(m, t, x, v))
        }
        Formula::Dia(g, x) => {
            let r = f.rel(*g);
            match v {
                Variant::Prenosil => (0..n).any(|t| (0..n).any(|w| leq(w, s) && r.contains(w, t)) && sat(m, t, x, v)),
                Variant::FischerServi => (0..n).any(|t| r.contains(s, t) && sat(m, t, x, v)),
                Variant::Wijesekera => {
                    (0..n).all(|t| !leq(s, t) || (0..n).any(|u| r.contains(t, u) && sat(m, u, x, v)))
                }
            }
        }
    }
}
