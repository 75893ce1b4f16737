use crate::classes::FrameClass;
use crate::syntax::Schema;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

const TEXTS: [(&str, &str); 27] = [
    ("IPL1", "p -> (q -> p)"),
    ("IPL2", "(p -> (q -> r)) -> ((p -> q) -> (p -> r))"),
    ("IPL3", "p /\\ q -> p"),
    ("IPL4", "p /\\ q -> q"),
    ("IPL5", "p -> (q -> p /\\ q)"),
    ("IPL6", "p -> p \\/ q"),
    ("IPL7", "q -> p \\/ q"),
    ("IPL8", "(p -> r) -> ((q -> r) -> (p \\/ q -> r))"),
    ("IPL9", "F -> p"),
    ("IPL10", "T"),
    ("A1", "[alpha]p /\\ [alpha]q -> [alpha](p /\\ q)"),
    ("A2", "<alpha>(p \\/ q) -> <alpha>p \\/ <alpha>q"),
    ("A3", "[alpha]T"),
    ("A4", "~<alpha>F"),
    ("A5", "[alpha](p \\/ q) -> ((<alpha>p -> [alpha]q) -> [alpha]q)"),
    ("A6", "p -> [alpha]p"),
    ("A7", "[alpha]p -> ~~<alpha>p"),
    ("A8", "[alpha]p -> p"),
    ("A9", "p -> <alpha>p"),
    ("A10", "p -> [alpha]<alpha>p"),
    ("A11", "<alpha>[alpha]p -> p"),
    ("A12", "[alpha]p \\/ [beta]p -> [alpha,beta]p"),
    ("A13", "<alpha,beta>p -> <alpha>p /\\ <beta>p"),
    ("A14", "[alpha]p -> [alpha][alpha]p"),
    ("A15", "<alpha><alpha>p -> <alpha>p"),
    ("A16", "<alpha>p -> [alpha]<alpha>p"),
    ("A17", "<alpha>[alpha]p -> [alpha]p"),
];

/// Every schema, intuitionistic basis first, in a fixed order.
pub fn schema_catalog() -> &'static [Schema] {
    static CATALOG: OnceLock<Vec<Schema>> = OnceLock::new();
    CATALOG.get_or_init(|| TEXTS.iter().map(|(id, t)| Schema::from_text(id, t).expect("catalog schema parses")).collect())
}

pub fn schema(id: &str) -> Option<&'static Schema> {
    schema_catalog().iter().find(|s| s.id == id)
}

/// Ids of the intuitionistic propositional basis shared by every logic.
pub fn ipl_basis() -> Vec<&'static str> {
    TEXTS.iter().map(|(id, _)| *id).filter(|id| id.starts_with("IPL")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicId {
    #[serde(rename = "L_all")]
    All,
    #[serde(rename = "L_dox")]
    Dox,
    #[serde(rename = "L_epi")]
    Epi,
    #[serde(rename = "L_par")]
    Par,
    #[serde(rename = "L_all_D")]
    AllD,
    #[serde(rename = "L_dox_D")]
    DoxD,
    #[serde(rename = "L_epi_D")]
    EpiD,
    #[serde(rename = "L_par_D")]
    ParD,
}

impl LogicId {
    pub const ALL: [LogicId; 8] =
        [LogicId::All, LogicId::Dox, LogicId::Epi, LogicId::Par, LogicId::AllD, LogicId::DoxD, LogicId::EpiD, LogicId::ParD];

    pub fn tag(self) -> &'static str {
        match self {
            LogicId::All => "L_all",
            LogicId::Dox => "L_dox",
            LogicId::Epi => "L_epi",
            LogicId::Par => "L_par",
            LogicId::AllD => "L_all_D",
            LogicId::DoxD => "L_dox_D",
            LogicId::EpiD => "L_epi_D",
            LogicId::ParD => "L_par_D",
        }
    }

    pub fn has_distribution(self) -> bool {
        matches!(self, LogicId::AllD | LogicId::DoxD | LogicId::EpiD | LogicId::ParD)
    }

    /// The logic without the group axioms.
    pub fn base(self) -> LogicId {
        match self {
            LogicId::AllD => LogicId::All,
            LogicId::DoxD => LogicId::Dox,
            LogicId::EpiD => LogicId::Epi,
            LogicId::ParD => LogicId::Par,
            l => l,
        }
    }

    /// Schema ids beyond the intuitionistic basis and A1 to A5.
    fn extra(self) -> &'static [&'static str] {
        match self.base() {
            LogicId::Dox => &["A6"],
            LogicId::Epi => &["A6", "A7"],
            LogicId::Par => &["A8", "A9", "A10", "A11"],
            _ => &[],
        }
    }

    pub fn contains_schema(self, id: &str) -> bool {
        id.starts_with("IPL")
            || ["A1", "A2", "A3", "A4", "A5"].contains(&id)
            || self.extra().contains(&id)
            || (self.has_distribution() && (id == "A12" || id == "A13"))
    }

    pub fn schema_ids(self) -> Vec<&'static str> {
        schema_catalog().iter().map(|s| s.id.as_str()).filter(|id| self.contains_schema(id)).collect()
    }

    /// Frame classes whose intersection the logic is sound for.
    pub fn frame_classes(self) -> Vec<FrameClass> {
        let base = match self.base() {
            LogicId::Dox => FrameClass::Doxastic,
            LogicId::Epi => FrameClass::Epistemic,
            LogicId::Par => FrameClass::Partition,
            _ => FrameClass::All,
        };
        if self.has_distribution() {
            vec![FrameClass::Standard, base]
        } else {
            vec![base]
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for LogicId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LogicId::ALL.into_iter().find(|l| l.tag() == s).ok_or_else(|| format!("unknown logic {s:?}"))
    }
}
