use super::SyntaxError;
use std::fmt;

/// Upper bound on agents; groups are stored as `u8` bitmasks.
pub const MAX_AGENTS: usize = 8;

/// An ordered, nonempty list of distinct agent names. List position is the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AgentSet {
    names: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl AgentSet {
    pub fn new<I, S>(names: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(SyntaxError::Agents("agent set must be nonempty".into()));
        }
        if names.len() > MAX_AGENTS {
            return Err(SyntaxError::Agents(format!("at most {MAX_AGENTS} agents are supported")));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(SyntaxError::Agents(format!("invalid agent name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(SyntaxError::Agents(format!("duplicate agent {n:?}")));
            }
        }
        Ok(AgentSet { names })
    }

    /// Agents `a`, `b`, `c`, ... in that order.
    pub fn standard(k: usize) -> Self {
        assert!((1..=MAX_AGENTS).contains(&k));
        AgentSet { names: (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn group_count(&self) -> usize {
        (1usize << self.len()) - 1
    }

    /// All nonempty groups, ascending by bitmask.
    pub fn groups(&self) -> impl Iterator<Item = Group> + Clone {
        (1..=self.group_count()).map(|m| Group(m as u8))
    }

    pub fn full_group(&self) -> Group {
        Group(self.group_count() as u8)
    }

    pub fn singleton(&self, i: usize) -> Group {
        assert!(i < self.len());
        Group(1 << i)
    }

    pub fn contains_group(&self, g: Group) -> bool {
        (g.0 as usize) <= self.group_count()
    }

    pub fn group<S: AsRef<str>>(&self, names: &[S]) -> Result<Group, SyntaxError> {
        let mut mask = 0u8;
        for n in names {
            let i = self
                .index_of(n.as_ref())
                .ok_or_else(|| SyntaxError::UnknownAgent(n.as_ref().to_string()))?;
            mask |= 1 << i;
        }
        Group::from_mask(mask).ok_or_else(|| SyntaxError::Agents("empty group".into()))
    }

    /// Parses a comma-joined group key such as `"a,b"`.
    pub fn group_from_key(&self, key: &str) -> Result<Group, SyntaxError> {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        self.group(&parts)
    }

    pub fn group_names(&self, g: Group) -> Vec<&str> {
        g.members().map(|i| self.names[i].as_str()).collect()
    }

    /// Comma-joined member names in canonical order.
    pub fn group_key(&self, g: Group) -> String {
        self.group_names(g).join(",")
    }
}

/// A nonempty set of agents, as a bitmask over agent indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Group(u8);

impl Group {
    pub fn from_mask(mask: u8) -> Option<Group> {
        (mask != 0).then_some(Group(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    /// Dense index `mask - 1`, used for group-indexed tables.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(i: usize) -> Group {
        Group((i + 1) as u8)
    }

    pub fn union(self, other: Group) -> Group {
        Group(self.0 | other.0)
    }

    pub fn minus(self, other: Group) -> Option<Group> {
        Group::from_mask(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Group) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn contains(self, agent: usize) -> bool {
        self.0 >> agent & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Member agent indices, ascending.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..MAX_AGENTS).filter(move |&i| self.contains(i))
    }

    /// The least member in canonical order.
    pub fn min_agent(self) -> usize {
        self.0.trailing_zeros() as usize
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({:#b})", self.0)
    }
}
