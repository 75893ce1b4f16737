//! Formula enumeration up to a depth, deduplicated by semantic value.
//!
//! The value of a compound formula depends only on the values of its
//! immediate subformulas, so closing the set of atomic values under the
//! connectives level by level reaches exactly the values of all formulas of
//! bounded depth. Each distinct value keeps one shallowest witness formula.

use crate::semantics::Algebra;
use crate::syntax::{Formula, Group};
use std::collections::HashMap;

/// Which formulas are enumerated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaSpace {
    pub atoms: Vec<String>,
    /// Groups available to modal operators.
    pub groups: Vec<Group>,
    pub diamonds: bool,
}

impl FormulaSpace {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>, groups: impl IntoIterator<Item = Group>) -> Self {
        FormulaSpace { atoms: atoms.into_iter().map(Into::into).collect(), groups: groups.into_iter().collect(), diamonds: true }
    }

    /// Diamond-free formulas whose boxes all carry `g`.
    pub fn diamond_free<S: Into<String>>(atoms: impl IntoIterator<Item = S>, g: Group) -> Self {
        FormulaSpace { atoms: atoms.into_iter().map(Into::into).collect(), groups: vec![g], diamonds: false }
    }

    fn base(&self) -> Vec<Formula> {
        let mut v: Vec<Formula> = self.atoms.iter().map(|p| Formula::atom(p.clone())).collect();
        v.push(Formula::Top);
        v.push(Formula::Bot);
        v
    }

    /// Every formula of the space up to `depth`, without deduplication. Grows very fast.
    pub fn formulas(&self, depth: usize) -> Vec<Formula> {
        let mut all = self.base();
        let mut lo = 0;
        for _ in 0..depth {
            let hi = all.len();
            let mut next = Vec::new();
            for i in 0..hi {
                for j in 0..hi {
                    if i < lo && j < lo {
                        continue;
                    }
                    let (a, b) = (all[i].clone(), all[j].clone());
                    next.push(Formula::implies(a.clone(), b.clone()));
                    next.push(Formula::or(a.clone(), b.clone()));
                    next.push(Formula::and(a, b));
                }
            }
            for f in &all[lo..hi] {
                for &g in &self.groups {
                    next.push(Formula::boxed(g, f.clone()));
                    if self.diamonds {
                        next.push(Formula::dia(g, f.clone()));
                    }
                }
            }
            lo = hi;
            all.extend(next);
        }
        all
    }
}

/// Distinct values of all formulas up to `depth`, each with a shallowest witness.
pub fn closure<A: Algebra>(alg: &A, space: &FormulaSpace, depth: usize) -> Vec<(A::Value, Formula)> {
    let mut all: Vec<(A::Value, Formula)> = Vec::new();
    let mut seen: HashMap<A::Value, ()> = HashMap::new();
    let mut push = |all: &mut Vec<(A::Value, Formula)>, v: A::Value, f: Formula| {
        if seen.insert(v.clone(), ()).is_none() {
            all.push((v, f));
        }
    };
    for f in space.base() {
        let v = alg.eval(&f);
        push(&mut all, v, f);
    }
    let mut lo = 0;
    for _ in 0..depth {
        let hi = all.len();
        if lo == hi {
            break;
        }
        for i in 0..hi {
            for j in 0..hi {
                if i < lo && j < lo {
                    continue;
                }
                let (va, fa) = (&all[i].0, &all[i].1);
                let (vb, fb) = (&all[j].0, &all[j].1);
                let items = [
                    (alg.implies(va, vb), Formula::implies(fa.clone(), fb.clone())),
                    (alg.or(va, vb), Formula::or(fa.clone(), fb.clone())),
                    (alg.and(va, vb), Formula::and(fa.clone(), fb.clone())),
                ];
                for (v, f) in items {
                    push(&mut all, v, f);
                }
            }
        }
        for i in lo..hi {
            for &g in &space.groups {
                let v = alg.boxed(g, &all[i].0);
                let f = Formula::boxed(g, all[i].1.clone());
                push(&mut all, v, f);
                if space.diamonds {
                    let v = alg.dia(g, &all[i].0);
                    let f = Formula::dia(g, all[i].1.clone());
                    push(&mut all, v, f);
                }
            }
        }
        lo = hi;
    }
    all
}

impl<A: Algebra, B: Algebra> Algebra for (A, B) {
    type Value = (A::Value, B::Value);

    fn atom(&self, p: &str) -> Self::Value {
        (self.0.atom(p), self.1.atom(p))
    }
    fn top(&self) -> Self::Value {
        (self.0.top(), self.1.top())
    }
    fn bot(&self) -> Self::Value {
        (self.0.bot(), self.1.bot())
    }
    fn implies(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (self.0.implies(&a.0, &b.0), self.1.implies(&a.1, &b.1))
    }
    fn or(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (self.0.or(&a.0, &b.0), self.1.or(&a.1, &b.1))
    }
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (self.0.and(&a.0, &b.0), self.1.and(&a.1, &b.1))
    }
    fn boxed(&self, g: Group, a: &Self::Value) -> Self::Value {
        (self.0.boxed(g, &a.0), self.1.boxed(g, &a.1))
    }
    fn dia(&self, g: Group, a: &Self::Value) -> Self::Value {
        (self.0.dia(g, &a.0), self.1.dia(g, &a.1))
    }
}

impl<A: Algebra, B: Algebra, C: Algebra> Algebra for (A, B, C) {
    type Value = (A::Value, B::Value, C::Value);

    fn atom(&self, p: &str) -> Self::Value {
        (self.0.atom(p), self.1.atom(p), self.2.atom(p))
    }
    fn top(&self) -> Self::Value {
        (self.0.top(), self.1.top(), self.2.top())
    }
    fn bot(&self) -> Self::Value {
        (self.0.bot(), self.1.bot(), self.2.bot())
    }
    fn implies(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (self.0.implies(&a.0, &b.0), self.1.implies(&a.1, &b.1), self.2.implies(&a.2, &b.2))
    }
    fn or(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (self.0.or(&a.0, &b.0), self.1.or(&a.1, &b.1), self.2.or(&a.2, &b.2))
    }
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (self.0.and(&a.0, &b.0), self.1.and(&a.1, &b.1), self.2.and(&a.2, &b.2))
    }
    fn boxed(&self, g: Group, a: &Self::Value) -> Self::Value {
        (self.0.boxed(g, &a.0), self.1.boxed(g, &a.1), self.2.boxed(g, &a.2))
    }
    fn dia(&self, g: Group, a: &Self::Value) -> Self::Value {
        (self.0.dia(g, &a.0), self.1.dia(g, &a.1), self.2.dia(g, &a.2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::{Rel, StateSet};
    use crate::semantics::{Evaluator, Frame, Valuation};
    use crate::syntax::AgentSet;
    use std::collections::HashSet;

    #[test]
    fn closure_reaches_exactly_the_enumerated_values() {
        let ag = AgentSet::standard(2);
        let leq = Rel::from_pairs(3, [(0, 1), (2, 1)]).reflexive_transitive_closure();
        let frame = Frame::from_fn(ag.clone(), leq, |g| match g.mask() {
            1 => Rel::from_pairs(3, [(0, 2), (1, 1)]),
            2 => Rel::from_pairs(3, [(2, 0), (1, 1), (0, 0)]),
            _ => Rel::from_pairs(3, [(1, 1)]),
        })
        .unwrap();
        let mut val = Valuation::new();
        val.insert("p".into(), StateSet::from_states(3, [1]));
        let ev = Evaluator::new(&frame, &val);
        let space = FormulaSpace::new(["p"], ag.groups());
        let brute: HashSet<StateSet> = space.formulas(2).iter().map(|f| ev.eval(f)).collect();
        let closed = closure(&ev, &space, 2);
        let fast: HashSet<StateSet> = closed.iter().map(|(v, _)| v.clone()).collect();
        assert_eq!(brute, fast);
        for (v, f) in &closed {
            assert_eq!(ev.eval(f), *v);
            assert!(f.depth() <= 2);
        }
    }
}
