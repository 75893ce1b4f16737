//! Turning a prestandard model into a standard one with the same theory.
//!
//! States are pairs `(t, g)` where `g` maps each (group, agent) pair to a
//! subset of `W`. Two states are `R′(α)`-related when the labels agree on
//! every coordinate `(γ, a)` with `a ∈ α ∩ γ`, and for every group `γ` the
//! symmetric difference of all `γ`-coordinates on both sides equals
//! `π(γ)(t, u)`.

use super::fibered::{Block, FiberedFrame, FiberedModel};
use super::{ConstructionBudget, ConstructionError};
use crate::bitset::StateSet;
use crate::classes::{has_class, FrameClass};
use crate::semantics::{Frame, Model};
use crate::syntax::Group;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PiVariant {
    /// `π(γ)(t, u)` is empty when `t R(γ) u` and the whole carrier otherwise.
    Default,
    /// `π(γ)(t, u)` is the symmetric difference of the `R(γ)`-classes of `t` and `u`.
    Partition,
}

/// `π(γ)(t, u)` for every group and state pair, as bitmasks over `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiTable {
    n: usize,
    masks: Vec<u64>,
}

impl PiTable {
    pub fn new(f: &Frame, variant: PiVariant) -> PiTable {
        let n = f.size();
        assert!(n <= 64);
        let full = StateSet::full(n).mask();
        let mut masks = Vec::with_capacity(f.agents.group_count() * n * n);
        for g in f.agents.groups() {
            let r = f.rel(g);
            for t in 0..n {
                for u in 0..n {
                    masks.push(match variant {
                        PiVariant::Default if r.contains(t, u) => 0,
                        PiVariant::Default => full,
                        PiVariant::Partition => r.row(t).mask() ^ r.row(u).mask(),
                    });
                }
            }
        }
        PiTable { n, masks }
    }

    pub fn mask(&self, g: Group, t: usize, u: usize) -> u64 {
        self.masks[(g.index() * self.n + t) * self.n + u]
    }

    pub fn get(&self, g: Group, t: usize, u: usize) -> StateSet {
        StateSet::from_mask(self.n, self.mask(g, t, u))
    }
}

/// A label `(group, agent) ↦ subset of W`, stored as bitmasks in coordinate order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IFunction {
    agents: usize,
    table: Vec<u64>,
}

impl IFunction {
    pub fn new(agents: usize, table: Vec<u64>) -> IFunction {
        assert_eq!(table.len(), ((1 << agents) - 1) * agents);
        IFunction { agents, table }
    }

    pub fn get(&self, g: Group, a: usize) -> u64 {
        self.table[coord(self.agents, g, a)]
    }

    pub fn set(&mut self, g: Group, a: usize, v: u64) {
        let c = coord(self.agents, g, a);
        self.table[c] = v;
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// Reads the label of fibre `fibre` of a standardized frame.
    pub fn of_fibre(frame: &FiberedFrame, fibre: usize) -> IFunction {
        let agents = frame.agents.len();
        IFunction::new(agents, frame.decode(fibre).into_iter().map(|v| v as u64).collect())
    }

    /// Overwrites `self` with the label of `fibre`.
    pub(crate) fn load_fibre(&mut self, frame: &FiberedFrame, fibre: usize) {
        for (c, v) in self.table.iter_mut().enumerate() {
            *v = frame.digit(fibre, c) as u64;
        }
    }

    pub fn fibre(&self, frame: &FiberedFrame) -> usize {
        self.table.iter().enumerate().map(|(c, &v)| v as usize * frame.stride(c)).sum()
    }
}

fn coord(agents: usize, g: Group, a: usize) -> usize {
    g.index() * agents + a
}

fn check_input(m: &Model, variant: PiVariant) -> Result<(), ConstructionError> {
    if !has_class(&m.frame, FrameClass::Prestandard) {
        return Err(ConstructionError::Precondition("frame is not prestandard".into()));
    }
    if variant == PiVariant::Partition && !has_class(&m.frame, FrameClass::Partition) {
        return Err(ConstructionError::Precondition("frame is not a partition".into()));
    }
    Ok(())
}

/// Number of states of the standardized frame, if it fits in `usize`.
pub fn standardized_size(n: usize, agents: usize) -> Option<usize> {
    let coords = ((1usize << agents) - 1) * agents;
    let fibres = 2usize.checked_pow((n * coords) as u32)?;
    n.checked_mul(fibres)
}

pub fn standardize(m: &Model, variant: PiVariant, budget: ConstructionBudget) -> Result<FiberedModel, ConstructionError> {
    check_input(m, variant)?;
    let f = &m.frame;
    let n = f.size();
    let k = f.agents.len();
    budget.check(n, k, standardized_size(n, k))?;
    let pi = PiTable::new(f, variant);
    let domains = vec![1usize << n; f.agents.group_count() * k];
    let frame = FiberedFrame::new(f.agents.clone(), f.names.clone(), f.leq.clone(), domains, 'g', |alpha, t, u| {
        let blocks = f
            .agents
            .groups()
            .map(|gamma| {
                let members: Vec<usize> = gamma.members().collect();
                let coords: Vec<usize> = members.iter().map(|&a| coord(k, gamma, a)).collect();
                let shared: Vec<bool> = members.iter().map(|&a| alpha.contains(a)).collect();
                let target = pi.mask(gamma, t, u) as usize;
                Block {
                    left: coords.clone(),
                    right: coords,
                    allowed: Box::new(move |l: &[usize], r: &[usize]| {
                        let agree = shared.iter().enumerate().all(|(i, &s)| !s || l[i] == r[i]);
                        let sum = l.iter().chain(r).fold(0, |acc, v| acc ^ v);
                        agree && sum == target
                    }),
                }
            })
            .collect();
        Some(blocks)
    });
    Ok(FiberedModel::lift(frame, &m.val))
}

/// A label `h` with `(t, g) R′(α) (u, h)`, given `t R(α) u` in the source frame.
///
/// For each group `β` not contained in `α`, the coordinate of the least agent
/// of `β ∖ α` absorbs the symmetric difference needed for the sum condition;
/// coordinates of agents in `α ∩ β` are copied from `g`, all others are empty.
pub fn witness_h(
    m: &Model,
    variant: PiVariant,
    alpha: Group,
    t: usize,
    u: usize,
    g: &IFunction,
) -> Result<IFunction, ConstructionError> {
    check_input(m, variant)?;
    let f = &m.frame;
    if !f.rel(alpha).contains(t, u) {
        return Err(ConstructionError::Precondition(format!("{} is not R-related to {}", f.names[t], f.names[u])));
    }
    let mut h = g.clone();
    witness_into(f, &PiTable::new(f, variant), alpha, t, u, g, &mut h);
    Ok(h)
}

/// [`witness_h`] without the checks, writing into `h`.
pub(crate) fn witness_into(f: &Frame, pi: &PiTable, alpha: Group, t: usize, u: usize, g: &IFunction, h: &mut IFunction) {
    let k = f.agents.len();
    for beta in f.agents.groups() {
        let pick = beta.minus(alpha).map(Group::min_agent);
        for a in 0..k {
            let v = if !beta.contains(a) {
                0
            } else if alpha.contains(a) {
                g.get(beta, a)
            } else if Some(a) == pick {
                let outside = beta.minus(alpha).expect("pick exists");
                outside.members().fold(pi.mask(beta, t, u), |acc, b| acc ^ g.get(beta, b))
            } else {
                0
            };
            h.set(beta, a, v);
        }
    }
}
