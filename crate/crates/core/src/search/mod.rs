//! Frame generation, countermodel search and the property battery.

mod frames;
mod suite;

pub use frames::{enumerate_frames, enumerate_frames_over, frames_of_size, preorders, MAX_SEARCH_STATES};
pub use suite::{
    check_rule, check_schema_on_class, proposition_suite, refute_schema_outside, rule_frames, schema_instances, RULE_FRAMES,
    PropositionResult, Rule, RuleResult, Status, SuiteReport,
};

use crate::classes::{has_class, FrameClass};
use crate::semantics::{falsifying_valuation, up_sets, Frame, Model, SemanticsError, Valuation, DEFAULT_VALUATION_CAP};
use crate::syntax::Formula;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Limits for every search in this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeBudget {
    pub max_states: usize,
    pub max_agents: usize,
    pub max_formula_depth: usize,
    /// Frames generated per state count and agent set before sampling takes over.
    pub max_candidates: usize,
    pub seed: u64,
}

impl Default for SizeBudget {
    fn default() -> Self {
        SizeBudget { max_states: 3, max_agents: 2, max_formula_depth: 2, max_candidates: 4096, seed: 0 }
    }
}

impl SizeBudget {
    pub fn is_empty(&self) -> bool {
        self.max_states == 0 || self.max_agents == 0 || self.max_candidates == 0
    }
}

/// A model on `f` giving each atom a uniformly drawn up-set.
pub fn random_model(b: &SizeBudget, f: &Frame, atoms: &[&str]) -> Result<Model, SemanticsError> {
    let ups = up_sets(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let val: Valuation = atoms.iter().map(|p| (p.to_string(), ups.choose(&mut rng).expect("∅ is an up-set").clone())).collect();
    Model::new(f.clone(), val)
}

/// The first model of class `c` within budget falsifying `a`, with the falsified state.
///
/// Frames are tried in [`enumerate_frames_over`] order over the agents `a` was parsed with.
pub fn countermodel(
    a: &Formula,
    agents: &crate::syntax::AgentSet,
    c: FrameClass,
    b: &SizeBudget,
) -> Result<Option<(Model, usize)>, SemanticsError> {
    countermodel_outside(a, agents, c, None, b)
}

/// Like [`countermodel`], skipping frames that belong to `outside`.
pub fn countermodel_outside(
    a: &Formula,
    agents: &crate::syntax::AgentSet,
    c: FrameClass,
    outside: Option<FrameClass>,
    b: &SizeBudget,
) -> Result<Option<(Model, usize)>, SemanticsError> {
    if a.groups().iter().any(|&g| !agents.contains_group(g)) {
        return Err(SemanticsError::InvalidFrame("formula mentions agents outside the agent set".into()));
    }
    for n in 1..=b.max_states.min(MAX_SEARCH_STATES) {
        for f in frames_of_size(b, c, agents, n) {
            if outside.is_some_and(|o| has_class(&f, o)) {
                continue;
            }
            if let Some((val, s)) = falsifying_valuation(&f, a, DEFAULT_VALUATION_CAP)? {
                return Ok(Some((Model { frame: f, val }, s)));
            }
        }
    }
    Ok(None)
}
