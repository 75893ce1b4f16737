//! Frame classes and their decision procedures.

use crate::semantics::{Frame, MonoStructure};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameClass {
    All,
    Doxastic,
    Epistemic,
    Reflexive,
    Symmetric,
    Transitive,
    Rs,
    Partition,
    UdReflexive,
    UdSymmetric,
    Ud,
    Prestandard,
    Standard,
    ForwardConfluent,
}

impl FrameClass {
    pub const ALL: [FrameClass; 14] = [
        FrameClass::All,
        FrameClass::Doxastic,
        FrameClass::Epistemic,
        FrameClass::Reflexive,
        FrameClass::Symmetric,
        FrameClass::Transitive,
        FrameClass::Rs,
        FrameClass::Partition,
        FrameClass::UdReflexive,
        FrameClass::UdSymmetric,
        FrameClass::Ud,
        FrameClass::Prestandard,
        FrameClass::Standard,
        FrameClass::ForwardConfluent,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FrameClass::All => "all",
            FrameClass::Doxastic => "doxastic",
            FrameClass::Epistemic => "epistemic",
            FrameClass::Reflexive => "reflexive",
            FrameClass::Symmetric => "symmetric",
            FrameClass::Transitive => "transitive",
            FrameClass::Rs => "rs",
            FrameClass::Partition => "partition",
            FrameClass::UdReflexive => "ud_reflexive",
            FrameClass::UdSymmetric => "ud_symmetric",
            FrameClass::Ud => "ud",
            FrameClass::Prestandard => "prestandard",
            FrameClass::Standard => "standard",
            FrameClass::ForwardConfluent => "forward_confluent",
        }
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FrameClass::ALL.into_iter().find(|c| c.tag() == s).ok_or_else(|| format!("unknown frame class {s:?}"))
    }
}

pub fn has_class(f: &Frame, c: FrameClass) -> bool {
    let groups = || f.agents.groups();
    let geq = || f.geq();
    match c {
        FrameClass::All => true,
        FrameClass::Doxastic => groups().all(|g| f.rel(g).is_subset(&f.leq)),
        FrameClass::Epistemic => {
            has_class(f, FrameClass::Doxastic)
                && groups().all(|g| {
                    let reach = f.leq.compose(f.rel(g));
                    (0..f.size()).all(|s| !reach.row(s).is_empty())
                })
        }
        FrameClass::Reflexive => groups().all(|g| f.rel(g).is_reflexive()),
        FrameClass::Symmetric => groups().all(|g| f.rel(g).is_symmetric()),
        FrameClass::Transitive => groups().all(|g| f.rel(g).is_transitive()),
        FrameClass::Rs => has_class(f, FrameClass::Reflexive) && has_class(f, FrameClass::Symmetric),
        FrameClass::Partition => has_class(f, FrameClass::Rs) && has_class(f, FrameClass::Transitive),
        FrameClass::UdReflexive => {
            let geq = geq();
            groups().all(|g| {
                let up = f.leq.compose(f.rel(g)).compose(&f.leq);
                let down = geq.compose(f.rel(g)).compose(&geq);
                (0..f.size()).all(|s| up.contains(s, s) && down.contains(s, s))
            })
        }
        FrameClass::UdSymmetric => {
            let geq = geq();
            groups().all(|g| {
                let up = f.leq.compose(f.rel(g)).compose(&f.leq);
                let down = geq.compose(f.rel(g)).compose(&geq);
                f.rel(g).pairs().all(|(s, t)| up.contains(t, s) && down.contains(t, s))
            })
        }
        FrameClass::Ud => has_class(f, FrameClass::UdReflexive) && has_class(f, FrameClass::UdSymmetric),
        FrameClass::Prestandard => groups().all(|a| {
            groups().all(|b| f.rel(a.union(b)).is_subset(&f.rel(a).intersection(f.rel(b))))
        }),
        FrameClass::Standard => {
            groups().all(|a| groups().all(|b| *f.rel(a.union(b)) == f.rel(a).intersection(f.rel(b))))
        }
        FrameClass::ForwardConfluent => {
            let geq = geq();
            groups().all(|g| geq.compose(f.rel(g)).is_subset(&f.rel(g).compose(&geq)))
        }
    }
}

/// Every tag the frame belongs to, in declaration order.
pub fn classify(f: &Frame) -> Vec<FrameClass> {
    FrameClass::ALL.into_iter().filter(|&c| has_class(f, c)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IelKind {
    /// Conditions (i) and (ii).
    Minus,
    /// Conditions (i), (ii) and seriality.
    Full,
}

/// `R ⊆ ≤`, `≤∘R ⊆ R`, and for the full kind every state has an `R`-successor.
pub fn is_iel_structure(m: &MonoStructure, kind: IelKind) -> bool {
    let inside = m.r.is_subset(&m.leq);
    let absorbs = m.leq.compose(&m.r).is_subset(&m.r);
    let serial = (0..m.size()).all(|s| !m.r.row(s).is_empty());
    inside && absorbs && (kind == IelKind::Minus || serial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::Rel;
    use crate::syntax::AgentSet;

    #[test]
    fn one_point_full_frame_has_every_class() {
        let f = Frame::from_fn(AgentSet::standard(2), Rel::identity(1), |_| Rel::identity(1)).unwrap();
        assert_eq!(classify(&f), FrameClass::ALL.to_vec());
    }

    #[test]
    fn empty_relation_on_chain() {
        let chain = Rel::from_pairs(2, [(0, 0), (0, 1), (1, 1)]);
        let f = Frame::from_fn(AgentSet::standard(1), chain, |_| Rel::empty(2)).unwrap();
        assert!(has_class(&f, FrameClass::Doxastic));
        assert!(!has_class(&f, FrameClass::Epistemic));
    }

    #[test]
    fn intersection_makes_standard() {
        let ag = AgentSet::standard(2);
        let f = Frame::from_fn(ag, Rel::identity(2), |g| match g.mask() {
            1 => Rel::from_pairs(2, [(0, 0), (1, 1)]),
            _ => Rel::from_pairs(2, [(0, 0)]),
        })
        .unwrap();
        assert!(has_class(&f, FrameClass::Standard));
        assert!(has_class(&f, FrameClass::Prestandard));
    }

    #[test]
    fn iel_conditions() {
        let one = MonoStructure::new(Rel::identity(1), Rel::identity(1)).unwrap();
        assert!(is_iel_structure(&one, IelKind::Minus) && is_iel_structure(&one, IelKind::Full));
        let chain = Rel::from_pairs(2, [(0, 0), (0, 1), (1, 1)]);
        let empty = MonoStructure::new(chain.clone(), Rel::empty(2)).unwrap();
        assert!(is_iel_structure(&empty, IelKind::Minus) && !is_iel_structure(&empty, IelKind::Full));
        let up = MonoStructure::new(chain, Rel::from_pairs(2, [(0, 1)])).unwrap();
        assert!(is_iel_structure(&up, IelKind::Minus) && !is_iel_structure(&up, IelKind::Full));
    }

    #[test]
    fn tags_round_trip() {
        for c in FrameClass::ALL {
            assert_eq!(c.tag().parse::<FrameClass>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.tag()));
        }
    }
}
