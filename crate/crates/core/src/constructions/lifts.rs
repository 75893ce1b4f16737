use super::ConstructionError;
use crate::bitset::{Rel, StateSet};
use crate::classes::{has_class, FrameClass};
use crate::semantics::{Frame, Model, Valuation};

/// Doubles every state into `(t, 0)` and `(t, 1)`; only `(t, 0) R′(α) (u, 1)` with `t R(α) u` survive.
///
/// State `(t, j)` has index `2t + j`. Every relation of the result is transitive.
pub fn transitive_lift(m: &Model) -> Model {
    let f = &m.frame;
    let n = f.size();
    let mut leq = Rel::empty(2 * n);
    for (t, u) in f.leq.pairs() {
        for j in 0..2 {
            for k in 0..2 {
                leq.insert(2 * t + j, 2 * u + k);
            }
        }
    }
    let rel = f
        .agents
        .groups()
        .map(|g| Rel::from_pairs(2 * n, f.rel(g).pairs().map(|(t, u)| (2 * t, 2 * u + 1))))
        .collect();
    let names = (0..2 * n).map(|s| format!("{}|{}", f.names[s / 2], s % 2)).collect();
    let frame = Frame { agents: f.agents.clone(), names, leq, rel };
    let val: Valuation = m
        .val
        .iter()
        .map(|(p, x)| (p.clone(), StateSet::from_states(2 * n, x.iter().flat_map(|t| [2 * t, 2 * t + 1]))))
        .collect();
    Model { frame, val }
}

/// Replaces each `R(α)` by `(≤∘R(α)∘≤) ∩ (≥∘R(α)∘≥)` on the same carrier.
pub fn rs_collapse(m: &Model) -> Result<Model, ConstructionError> {
    let f = &m.frame;
    if !has_class(f, FrameClass::Ud) {
        return Err(ConstructionError::Precondition("frame is not up and down reflexive and symmetric".into()));
    }
    let geq = f.geq();
    let rel = f
        .agents
        .groups()
        .map(|g| {
            let up = f.leq.compose(f.rel(g)).compose(&f.leq);
            let down = geq.compose(f.rel(g)).compose(&geq);
            up.intersection(&down)
        })
        .collect();
    Ok(Model { frame: Frame { rel, ..f.clone() }, val: m.val.clone() })
}
