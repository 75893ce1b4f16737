use super::ConstructionError;
use crate::classes::{has_class, is_iel_structure, FrameClass, IelKind};
use crate::semantics::{Frame, Model, MonoModel, MonoStructure};
use crate::syntax::{AgentSet, Group};

/// Gives every group the single relation of an IEL⁻-structure.
pub fn expand_mono(m: &MonoModel, agents: &AgentSet) -> Result<Model, ConstructionError> {
    let s = &m.structure;
    if !is_iel_structure(s, IelKind::Minus) {
        return Err(ConstructionError::Precondition("not an IEL⁻-structure".into()));
    }
    let frame = Frame {
        agents: agents.clone(),
        names: s.names.clone(),
        leq: s.leq.clone(),
        rel: agents.groups().map(|_| s.r.clone()).collect(),
    };
    Ok(Model { frame, val: m.val.clone() })
}

/// Keeps one group and replaces its relation by `≤∘R(α)`.
pub fn collapse_mono(m: &Model, alpha: Group) -> Result<MonoModel, ConstructionError> {
    let f = &m.frame;
    if !f.agents.contains_group(alpha) {
        return Err(ConstructionError::Precondition("group outside the agent set".into()));
    }
    if !has_class(f, FrameClass::Doxastic) {
        return Err(ConstructionError::Precondition("frame is not doxastic".into()));
    }
    let structure = MonoStructure { names: f.names.clone(), leq: f.leq.clone(), r: f.leq.compose(f.rel(alpha)) };
    Ok(MonoModel { structure, val: m.val.clone() })
}
