//! Unravelling a reflexive symmetric model into a partition.
//!
//! States are pairs `(t, g)` where `g` picks, for every state `w` and group
//! `β`, some `R(β)`-successor of `w`. `(t, g) R″(β) (u, h)` holds when
//! `t R(β) u` and `{t, g(t, β)} = {u, h(u, β)}`; the prestandard variant
//! asks the set equation for every `γ ⊆ β`.

use super::fibered::{Block, FiberedFrame, FiberedModel};
use super::{ConstructionBudget, ConstructionError};
use crate::classes::{has_class, FrameClass};
use crate::semantics::Model;
use crate::syntax::Group;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartitionVariant {
    Plain,
    Prestandard,
}

/// A choice function `(state, group) ↦ state` with `w R(β) g(w, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JFunction {
    groups: usize,
    table: Vec<usize>,
}

impl JFunction {
    pub fn get(&self, w: usize, b: Group) -> usize {
        self.table[w * self.groups + b.index()]
    }

    pub fn set(&mut self, w: usize, b: Group, v: usize) {
        self.table[w * self.groups + b.index()] = v;
    }

    /// The choice function `(w, β) ↦ w`.
    pub fn identity(m: &Model) -> JFunction {
        let groups = m.frame.agents.group_count();
        JFunction { groups, table: (0..m.frame.size() * groups).map(|i| i / groups).collect() }
    }

    /// Whether every choice is a successor in the source frame.
    pub fn is_valid(&self, m: &Model) -> bool {
        m.frame.agents.groups().all(|b| (0..m.frame.size()).all(|w| m.frame.rel(b).contains(w, self.get(w, b))))
    }

    pub fn of_fibre(m: &Model, frame: &FiberedFrame, fibre: usize) -> JFunction {
        let groups = m.frame.agents.group_count();
        let table = frame
            .decode(fibre)
            .into_iter()
            .enumerate()
            .map(|(c, v)| {
                let (w, b) = (c / groups, Group::from_index(c % groups));
                m.frame.rel(b).row(w).iter().nth(v).expect("coordinate in range")
            })
            .collect();
        JFunction { groups, table }
    }

    pub fn fibre(&self, m: &Model, frame: &FiberedFrame) -> usize {
        let coords: Vec<usize> = self
            .table
            .iter()
            .enumerate()
            .map(|(c, &v)| {
                let (w, b) = (c / self.groups, Group::from_index(c % self.groups));
                m.frame.rel(b).row(w).iter().position(|x| x == v).expect("valid choice")
            })
            .collect();
        frame.encode(&coords)
    }
}

/// Number of states of the lifted frame, if it fits in `usize`.
pub fn lifted_size(m: &Model) -> Option<usize> {
    let f = &m.frame;
    let mut total = f.size();
    for w in 0..f.size() {
        for b in f.agents.groups() {
            total = total.checked_mul(f.rel(b).row(w).count())?;
        }
    }
    Some(total)
}

pub fn partition_lift(m: &Model, variant: PartitionVariant, budget: ConstructionBudget) -> Result<FiberedModel, ConstructionError> {
    let f = &m.frame;
    if !has_class(f, FrameClass::Rs) {
        return Err(ConstructionError::Precondition("frame is not reflexive and symmetric".into()));
    }
    budget.check(f.size(), f.agents.len(), lifted_size(m))?;
    let groups = f.agents.group_count();
    let coord = |w: usize, b: Group| w * groups + b.index();
    let successors = |w: usize, b: Group| f.rel(b).row(w).iter().collect::<Vec<_>>();
    let domains: Vec<usize> =
        (0..f.size()).flat_map(|w| f.agents.groups().map(move |b| (w, b))).map(|(w, b)| f.rel(b).row(w).count()).collect();
    let frame = FiberedFrame::new(f.agents.clone(), f.names.clone(), f.leq.clone(), domains, 'j', |beta, t, u| {
        if !f.rel(beta).contains(t, u) {
            return None;
        }
        let constrained: Vec<Group> = match variant {
            PartitionVariant::Plain => vec![beta],
            PartitionVariant::Prestandard => f.agents.groups().filter(|g| g.is_subset(beta)).collect(),
        };
        Some(
            constrained
                .into_iter()
                .map(|gamma| {
                    let (st, su) = (successors(t, gamma), successors(u, gamma));
                    Block {
                        left: vec![coord(t, gamma)],
                        right: vec![coord(u, gamma)],
                        allowed: Box::new(move |l: &[usize], r: &[usize]| {
                            let (x, y) = (st[l[0]], su[r[0]]);
                            let mut a = [t, x];
                            let mut b = [u, y];
                            a.sort_unstable();
                            b.sort_unstable();
                            a == b
                        }),
                    }
                })
                .collect(),
        )
    });
    Ok(FiberedModel::lift(frame, &m.val))
}

/// Labels `h`, `i` with `(t, g) ≤″ (u, h) R″(α) (v, i)`, given `t ≤ u R(α) v`.
///
/// `h` sends `u` to `v` and `i` sends `v` to `u` at every constrained group
/// (just `α` for the plain variant, every subgroup of `α` for the prestandard
/// one); all other choices are the identity. The prestandard variant needs a
/// prestandard frame, since `h` then requires `u R(β) v` for every `β ⊆ α`.
pub fn partition_witness(
    m: &Model,
    variant: PartitionVariant,
    alpha: Group,
    t: usize,
    u: usize,
    v: usize,
) -> Result<(JFunction, JFunction), ConstructionError> {
    let f = &m.frame;
    if !has_class(f, FrameClass::Rs) {
        return Err(ConstructionError::Precondition("frame is not reflexive and symmetric".into()));
    }
    if variant == PartitionVariant::Prestandard && !has_class(f, FrameClass::Prestandard) {
        return Err(ConstructionError::Precondition("frame is not prestandard".into()));
    }
    if !f.leq.contains(t, u) || !f.rel(alpha).contains(u, v) {
        return Err(ConstructionError::Precondition("expected t ≤ u R(α) v".into()));
    }
    let mut h = JFunction::identity(m);
    let mut i = JFunction::identity(m);
    for beta in f.agents.groups() {
        let hit = match variant {
            PartitionVariant::Plain => beta == alpha,
            PartitionVariant::Prestandard => beta.is_subset(alpha),
        };
        if hit {
            h.set(u, beta, v);
            i.set(v, beta, u);
        }
    }
    Ok((h, i))
}
