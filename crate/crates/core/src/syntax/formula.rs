use super::{Group, SyntaxError};
use std::collections::{BTreeMap, BTreeSet};

/// Formula tree. Negation and the biconditional are abbreviations and never appear here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Implies(Box<Formula>, Box<Formula>),
    Top,
    Bot,
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Box(Group, Box<Formula>),
    Dia(Group, Box<Formula>),
}

/// Simultaneous replacement of atoms; unmapped atoms stay fixed.
pub type Substitution = BTreeMap<String, Formula>;

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn boxed(g: Group, a: Formula) -> Formula {
        Formula::Box(g, Box::new(a))
    }

    pub fn dia(g: Group, a: Formula) -> Formula {
        Formula::Dia(g, Box::new(a))
    }

    /// `a -> F`.
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bot)
    }

    /// `(a -> b) /\ (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// Height of the tree; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Implies(a, b) | Formula::Or(a, b) | Formula::And(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Box(_, a) | Formula::Dia(_, a) => 1 + a.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::Implies(a, b) | Formula::Or(a, b) | Formula::And(a, b) => 1 + a.size() + b.size(),
            Formula::Box(_, a) | Formula::Dia(_, a) => 1 + a.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p);
            }
            Formula::Top | Formula::Bot => {}
            Formula::Implies(a, b) | Formula::Or(a, b) | Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(_, a) | Formula::Dia(_, a) => a.collect_atoms(out),
        }
    }

    /// Every group occurring in a modal operator.
    pub fn groups(&self) -> BTreeSet<Group> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Box(g, _) | Formula::Dia(g, _) = f {
                out.insert(*g);
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => {}
            Formula::Implies(a, b) | Formula::Or(a, b) | Formula::And(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Box(_, a) | Formula::Dia(_, a) => a.visit(f),
        }
    }

    /// No diamond occurs and all boxes carry the same group.
    pub fn is_diamond_free(&self) -> bool {
        let mut dia = false;
        let mut boxes = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Dia(..) => dia = true,
            Formula::Box(g, _) => {
                boxes.insert(*g);
            }
            _ => {}
        });
        !dia && boxes.len() <= 1
    }

    /// Subformula closure of a diamond-free formula.
    pub fn sf(&self) -> Result<BTreeSet<Formula>, SyntaxError> {
        if !self.is_diamond_free() {
            return Err(SyntaxError::NotDiamondFree);
        }
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            out.insert(f.clone());
        });
        Ok(out)
    }

    /// Translation into the mono-modal language.
    pub fn tau(&self) -> Result<BoxFormula, SyntaxError> {
        if !self.is_diamond_free() {
            return Err(SyntaxError::NotDiamondFree);
        }
        Ok(self.tau_unchecked())
    }

    fn tau_unchecked(&self) -> BoxFormula {
        let bx = |f: &Formula| Box::new(f.tau_unchecked());
        match self {
            Formula::Atom(p) => BoxFormula::Atom(p.clone()),
            Formula::Top => BoxFormula::Top,
            Formula::Bot => BoxFormula::Bot,
            Formula::Implies(a, b) => BoxFormula::Implies(bx(a), bx(b)),
            Formula::Or(a, b) => BoxFormula::Or(bx(a), bx(b)),
            Formula::And(a, b) => BoxFormula::And(bx(a), bx(b)),
            Formula::Box(_, a) => BoxFormula::Box(bx(a)),
            Formula::Dia(..) => unreachable!("checked diamond-free"),
        }
    }

    pub fn substitute(&self, sub: &Substitution) -> Formula {
        let s = |f: &Formula| Box::new(f.substitute(sub));
        match self {
            Formula::Atom(p) => sub.get(p).cloned().unwrap_or_else(|| self.clone()),
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Implies(a, b) => Formula::Implies(s(a), s(b)),
            Formula::Or(a, b) => Formula::Or(s(a), s(b)),
            Formula::And(a, b) => Formula::And(s(a), s(b)),
            Formula::Box(g, a) => Formula::Box(*g, s(a)),
            Formula::Dia(g, a) => Formula::Dia(*g, s(a)),
        }
    }

    /// Renames atoms according to `map`; unmapped atoms are kept.
    pub fn rename_atoms(&self, map: &BTreeMap<String, String>) -> Formula {
        let sub: Substitution = map.iter().map(|(k, v)| (k.clone(), Formula::atom(v.clone()))).collect();
        self.substitute(&sub)
    }
}

/// Mono-modal formula with a single unlabeled box.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxFormula {
    Atom(String),
    Implies(Box<BoxFormula>, Box<BoxFormula>),
    Top,
    Bot,
    Or(Box<BoxFormula>, Box<BoxFormula>),
    And(Box<BoxFormula>, Box<BoxFormula>),
    Box(Box<BoxFormula>),
}

impl BoxFormula {
    /// Inverse of the translation: label every box with `g`.
    pub fn label(&self, g: Group) -> Formula {
        let l = |f: &BoxFormula| Box::new(f.label(g));
        match self {
            BoxFormula::Atom(p) => Formula::Atom(p.clone()),
            BoxFormula::Top => Formula::Top,
            BoxFormula::Bot => Formula::Bot,
            BoxFormula::Implies(a, b) => Formula::Implies(l(a), l(b)),
            BoxFormula::Or(a, b) => Formula::Or(l(a), l(b)),
            BoxFormula::And(a, b) => Formula::And(l(a), l(b)),
            BoxFormula::Box(a) => Formula::Box(g, l(a)),
        }
    }
}
