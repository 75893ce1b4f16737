//! Model transformations that change the frame class but not the theory,
//! each with a checker for the equivalences it is meant to satisfy.

pub mod fibered;
mod lifts;
mod mono;
mod partition;
mod standardize;

pub use fibered::{Block, FiberedFrame, FiberedModel};
pub use lifts::{rs_collapse, transitive_lift};
pub use mono::{collapse_mono, expand_mono};
pub use partition::{lifted_size, partition_lift, partition_witness, JFunction, PartitionVariant};
pub use standardize::{standardize, standardized_size, witness_h, IFunction, PiTable, PiVariant};

use crate::bitset::StateSet;
use crate::classes::{has_class, is_iel_structure, FrameClass, IelKind};
use crate::closure::{closure, FormulaSpace};
use crate::semantics::{Evaluator, Model, MonoEvaluator, MonoModel};
use crate::syntax::{render, AgentSet, Group};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

/// Size limits for the product constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionBudget {
    pub max_base_states: usize,
    pub max_agents: usize,
    pub max_states: usize,
}

impl ConstructionBudget {
    pub const STANDARDIZE: ConstructionBudget = ConstructionBudget { max_base_states: 2, max_agents: 2, max_states: 8192 };
    pub const PARTITION_LIFT: ConstructionBudget = ConstructionBudget { max_base_states: 3, max_agents: 2, max_states: 59049 };

    fn check(&self, base: usize, agents: usize, states: Option<usize>) -> Result<(), ConstructionError> {
        if base > self.max_base_states {
            return Err(ConstructionError::Budget(format!("{base} source states (limit {})", self.max_base_states)));
        }
        if agents > self.max_agents {
            return Err(ConstructionError::Budget(format!("{agents} agents (limit {})", self.max_agents)));
        }
        match states {
            Some(s) if s <= self.max_states => Ok(()),
            Some(s) => Err(ConstructionError::Budget(format!("{s} states (limit {})", self.max_states))),
            None => Err(ConstructionError::Budget("state count overflows".into())),
        }
    }
}

/// Outcome of checking one construction on one model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClaimReport {
    /// Distinct formula truth-set pairs compared.
    pub values_checked: usize,
    pub failures: Vec<String>,
}

impl ClaimReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn require(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            self.failures.push(what());
        }
    }
}

/// Classes a product construction is expected to carry over from its input.
pub const STANDARDIZE_PRESERVES: [FrameClass; 5] =
    [FrameClass::Doxastic, FrameClass::Epistemic, FrameClass::Ud, FrameClass::Rs, FrameClass::Partition];

/// Compares truth sets of every formula up to `depth` on `m` and on the
/// standardized model: `t ⊨ B` iff `(t, g) ⊨ B` for every label `g`.
/// Also checks standardness, class preservation and the explicit witness.
pub fn verify_standardize(
    m: &Model,
    variant: PiVariant,
    budget: ConstructionBudget,
    atoms: &[&str],
    depth: usize,
) -> Result<ClaimReport, ConstructionError> {
    let out = standardize(m, variant, budget)?;
    let ff = &out.frame;
    let mut rep = ClaimReport::default();
    rep.require(ff.has_class(FrameClass::Standard), || "output is not standard".into());
    for c in STANDARDIZE_PRESERVES {
        if has_class(&m.frame, c) {
            rep.require(ff.has_class(c), || format!("class {c} not preserved"));
        }
    }
    check_values(&mut rep, m, &out.frame, &out.val, atoms, depth, |x| ff.cylinder(x));
    let pi = PiTable::new(&m.frame, variant);
    let mut g = IFunction::of_fibre(ff, 0);
    let mut h = g.clone();
    for alpha in m.frame.agents.groups() {
        for (t, u) in m.frame.rel(alpha).pairs() {
            for fibre in 0..ff.fibre_count() {
                g.load_fibre(ff, fibre);
                standardize::witness_into(&m.frame, &pi, alpha, t, u, &g, &mut h);
                if !ff.related(alpha, ff.state(t, fibre), ff.state(u, h.fibre(ff))) {
                    rep.failures.push(format!("witness fails for α={}, t={t}, u={u}, g={fibre}", m.frame.agents.group_key(alpha)));
                }
            }
        }
    }
    Ok(rep)
}

fn check_values<S: crate::semantics::Structure>(
    rep: &mut ClaimReport,
    m: &Model,
    target: &S,
    target_val: &crate::semantics::Valuation,
    atoms: &[&str],
    depth: usize,
    lift: impl Fn(&StateSet) -> StateSet,
) {
    let space = FormulaSpace::new(atoms.iter().copied(), m.frame.agents.groups());
    let alg = (Evaluator::new(&m.frame, &m.val), Evaluator::new(target, target_val));
    for ((src, tgt), f) in closure(&alg, &space, depth) {
        rep.values_checked += 1;
        if lift(&src) != tgt {
            rep.failures.push(format!("satisfaction differs on {}", render(&f, &m.frame.agents)));
        }
    }
}

/// Transitivity, class preservation and `t ⊨ B` iff `(t, j) ⊨ B` for both `j`.
pub fn verify_transitive_lift(m: &Model, atoms: &[&str], depth: usize) -> ClaimReport {
    let out = transitive_lift(m);
    let mut rep = ClaimReport::default();
    rep.require(has_class(&out.frame, FrameClass::Transitive), || "output is not transitive".into());
    for c in [FrameClass::Prestandard, FrameClass::Standard] {
        if has_class(&m.frame, c) {
            rep.require(has_class(&out.frame, c), || format!("class {c} not preserved"));
        }
    }
    let n2 = out.frame.size();
    check_values(&mut rep, m, &out.frame, &out.val, atoms, depth, |x| {
        StateSet::from_states(n2, x.iter().flat_map(|t| [2 * t, 2 * t + 1]))
    });
    rep
}

/// Reflexivity and symmetry, `R ⊆ R′`, prestandardness and state-wise equivalence.
pub fn verify_rs_collapse(m: &Model, atoms: &[&str], depth: usize) -> Result<ClaimReport, ConstructionError> {
    let out = rs_collapse(m)?;
    let mut rep = ClaimReport::default();
    rep.require(has_class(&out.frame, FrameClass::Rs), || "output is not reflexive and symmetric".into());
    for g in m.frame.agents.groups() {
        rep.require(m.frame.rel(g).is_subset(out.frame.rel(g)), || "R is not contained in R′".into());
    }
    if has_class(&m.frame, FrameClass::Prestandard) {
        rep.require(has_class(&out.frame, FrameClass::Prestandard), || "prestandard not preserved".into());
    }
    check_values(&mut rep, m, &out.frame, &out.val, atoms, depth, |x| x.clone());
    Ok(rep)
}

/// Partition-ness, prestandard preservation for that variant, the explicit
/// witnesses for `≤″∘R″(α)`, and `t ⊨ B` iff `(t, g) ⊨ B` for every `g`.
pub fn verify_partition_lift(
    m: &Model,
    variant: PartitionVariant,
    budget: ConstructionBudget,
    atoms: &[&str],
    depth: usize,
) -> Result<ClaimReport, ConstructionError> {
    let f = &m.frame;
    let prestandard = has_class(f, FrameClass::Prestandard);
    if variant == PartitionVariant::Prestandard && !prestandard {
        return Err(ConstructionError::Precondition("the prestandard variant is only claimed for prestandard frames".into()));
    }
    let out = partition_lift(m, variant, budget)?;
    let ff = &out.frame;
    let mut rep = ClaimReport::default();
    rep.require(ff.has_class(FrameClass::Partition), || "output is not a partition".into());
    if variant == PartitionVariant::Prestandard {
        rep.require(ff.has_class(FrameClass::Prestandard), || "prestandard not preserved".into());
    }
    for alpha in f.agents.groups() {
        for (u, v) in f.rel(alpha).pairs() {
            for t in (0..f.size()).filter(|&t| f.leq.contains(t, u)) {
                let (h, i) = partition_witness(m, variant, alpha, t, u, v)?;
                let good = h.is_valid(m)
                    && i.is_valid(m)
                    && ff.related(alpha, ff.state(u, h.fibre(m, ff)), ff.state(v, i.fibre(m, ff)));
                rep.require(good, || format!("witness fails for α={}, u={u}, v={v}", f.agents.group_key(alpha)));
            }
        }
    }
    check_values(&mut rep, m, &out.frame, &out.val, atoms, depth, |x| ff.cylinder(x));
    Ok(rep)
}

/// Doxastic and standard output (epistemic for IEL input), and agreement of
/// every diamond-free `B` over each single group with its translation.
pub fn verify_expand_mono(m: &MonoModel, agents: &AgentSet, atoms: &[&str], depth: usize) -> Result<ClaimReport, ConstructionError> {
    let out = expand_mono(m, agents)?;
    let mut rep = ClaimReport::default();
    for c in [FrameClass::Doxastic, FrameClass::Standard] {
        rep.require(has_class(&out.frame, c), || format!("output is not {c}"));
    }
    if is_iel_structure(&m.structure, IelKind::Full) {
        rep.require(has_class(&out.frame, FrameClass::Epistemic), || "output is not epistemic".into());
    }
    for g in agents.groups() {
        check_translation(&mut rep, &out, m, g, atoms, depth);
    }
    Ok(rep)
}

/// IEL⁻ output (IEL for epistemic input) and agreement of every diamond-free
/// `B` over `alpha` with its translation.
pub fn verify_collapse_mono(m: &Model, alpha: Group, atoms: &[&str], depth: usize) -> Result<ClaimReport, ConstructionError> {
    let out = collapse_mono(m, alpha)?;
    let mut rep = ClaimReport::default();
    rep.require(is_iel_structure(&out.structure, IelKind::Minus), || "output is not an IEL⁻-structure".into());
    if has_class(&m.frame, FrameClass::Epistemic) {
        rep.require(is_iel_structure(&out.structure, IelKind::Full), || "output is not an IEL-structure".into());
    }
    check_translation(&mut rep, m, &out, alpha, atoms, depth);
    Ok(rep)
}

fn check_translation(rep: &mut ClaimReport, multi: &Model, mono: &MonoModel, g: Group, atoms: &[&str], depth: usize) {
    let space = FormulaSpace::diamond_free(atoms.iter().copied(), g);
    let alg = (Evaluator::new(&multi.frame, &multi.val), MonoEvaluator(mono));
    for ((a, b), f) in closure(&alg, &space, depth) {
        rep.values_checked += 1;
        if a != b {
            rep.failures.push(format!("translation differs on {}", render(&f, &multi.frame.agents)));
        }
    }
}
