//! Frames whose carrier is a product `W × Φ` of a base frame and a space of
//! fibre labels, with the preorder given by the first projection.
//!
//! A fibre label is a tuple of coordinates, each ranging over `0..domain`.
//! For every group `g` and base pair `(t, u)` the relation between fibres is
//! either empty or a conjunction of blocks; a block reads some coordinates of
//! the source label and some coordinates of the target label. Distinct blocks
//! read disjoint target coordinates, so an existential over target labels
//! splits block by block. Every query below is exact; the factorization only
//! avoids enumerating fibre pairs.

use crate::bitset::{Rel, StateSet};
use crate::classes::FrameClass;
use crate::semantics::{Frame, Model, Structure, Valuation};
use crate::syntax::{AgentSet, Group};
use std::collections::HashMap;
use std::sync::Mutex;

/// One conjunct of a fibre relation, before compilation.
pub struct Block<'a> {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub allowed: Box<dyn Fn(&[usize], &[usize]) -> bool + 'a>,
}

/// A block with its truth table materialized.
#[derive(Clone, Debug)]
pub(crate) struct Table {
    left: Vec<usize>,
    right: Vec<usize>,
    left_radix: Vec<usize>,
    right_radix: Vec<usize>,
    right_size: usize,
    ok: Vec<bool>,
    left_ok: Vec<bool>,
}

impl Table {
    #[cfg(test)]
    fn constant(value: bool) -> Table {
        Table {
            left: vec![],
            right: vec![],
            left_radix: vec![],
            right_radix: vec![],
            right_size: 1,
            ok: vec![value],
            left_ok: vec![value],
        }
    }

    fn compile(b: &Block<'_>, domains: &[usize]) -> Table {
        let radix = |coords: &[usize]| {
            let mut r = vec![1; coords.len()];
            for i in (0..coords.len().saturating_sub(1)).rev() {
                r[i] = r[i + 1] * domains[coords[i + 1]];
            }
            r
        };
        let lsize: usize = b.left.iter().map(|&c| domains[c]).product();
        let rsize: usize = b.right.iter().map(|&c| domains[c]).product();
        let decode = |coords: &[usize], mut x: usize| {
            let mut v = vec![0; coords.len()];
            for i in (0..coords.len()).rev() {
                v[i] = x % domains[coords[i]];
                x /= domains[coords[i]];
            }
            v
        };
        let mut ok = vec![false; lsize * rsize];
        let mut left_ok = vec![false; lsize];
        for li in 0..lsize {
            let lv = decode(&b.left, li);
            for ri in 0..rsize {
                if (b.allowed)(&lv, &decode(&b.right, ri)) {
                    ok[li * rsize + ri] = true;
                    left_ok[li] = true;
                }
            }
        }
        Table {
            left: b.left.clone(),
            right: b.right.clone(),
            left_radix: radix(&b.left),
            right_radix: radix(&b.right),
            right_size: rsize,
            ok,
            left_ok,
        }
    }

    fn is_const(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }
}

/// A relation between a source and a target fibre over one base pair.
#[derive(Clone, Debug)]
pub(crate) enum Link {
    Never,
    Blocks(Vec<Table>),
}

pub struct FiberedFrame {
    pub agents: AgentSet,
    pub base_names: Vec<String>,
    pub base_leq: Rel,
    pub domains: Vec<usize>,
    label: char,
    fibres: usize,
    strides: Vec<usize>,
    links: Vec<Link>,
    pre_cache: Mutex<HashMap<(u8, StateSet), StateSet>>,
}

impl std::fmt::Debug for FiberedFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiberedFrame")
            .field("base_states", &self.base_size())
            .field("fibres", &self.fibres)
            .field("domains", &self.domains)
            .finish()
    }
}

impl FiberedFrame {
    /// `link(g, t, u)` returns `None` when no fibre over `t` is `g`-related to a fibre over `u`.
    pub fn new<'a>(
        agents: AgentSet,
        base_names: Vec<String>,
        base_leq: Rel,
        domains: Vec<usize>,
        label: char,
        mut link: impl FnMut(Group, usize, usize) -> Option<Vec<Block<'a>>>,
    ) -> FiberedFrame {
        assert!(domains.iter().all(|&d| d > 0), "empty coordinate domain");
        let n = base_leq.size();
        let mut strides = vec![1; domains.len()];
        for i in (0..domains.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * domains[i + 1];
        }
        let fibres = domains.iter().product();
        let mut links = Vec::with_capacity(agents.group_count() * n * n);
        for g in agents.groups() {
            for t in 0..n {
                for u in 0..n {
                    links.push(match link(g, t, u) {
                        None => Link::Never,
                        Some(blocks) => {
                            let mut seen = vec![false; domains.len()];
                            for b in &blocks {
                                for &c in &b.right {
                                    assert!(!seen[c], "blocks must read disjoint target coordinates");
                                    seen[c] = true;
                                }
                            }
                            Link::Blocks(blocks.iter().map(|b| Table::compile(b, &domains)).collect())
                        }
                    });
                }
            }
        }
        FiberedFrame {
            agents,
            base_names,
            base_leq,
            domains,
            label,
            fibres,
            strides,
            links,
            pre_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn base_size(&self) -> usize {
        self.base_leq.size()
    }

    pub fn fibre_count(&self) -> usize {
        self.fibres
    }

    pub fn size(&self) -> usize {
        self.base_size() * self.fibres
    }

    pub fn state(&self, t: usize, fibre: usize) -> usize {
        t * self.fibres + fibre
    }

    pub fn split(&self, s: usize) -> (usize, usize) {
        (s / self.fibres, s % self.fibres)
    }

    pub fn state_name(&self, s: usize) -> String {
        let (t, f) = self.split(s);
        format!("{}|{}{}", self.base_names[t], self.label, f)
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    pub fn decode(&self, fibre: usize) -> Vec<usize> {
        (0..self.domains.len()).map(|c| self.digit(fibre, c)).collect()
    }

    pub(crate) fn stride(&self, c: usize) -> usize {
        self.strides[c]
    }

    pub(crate) fn digit(&self, fibre: usize, c: usize) -> usize {
        fibre / self.strides[c] % self.domains[c]
    }

    fn link(&self, g: Group, t: usize, u: usize) -> &Link {
        let n = self.base_size();
        &self.links[(g.index() * n + t) * n + u]
    }

    fn left_index(&self, tb: &Table, fibre: usize) -> usize {
        tb.left.iter().zip(&tb.left_radix).map(|(&c, r)| self.digit(fibre, c) * r).sum()
    }

    fn right_index(&self, tb: &Table, fibre: usize) -> usize {
        tb.right.iter().zip(&tb.right_radix).map(|(&c, r)| self.digit(fibre, c) * r).sum()
    }

    /// Whether `(t, f) R(g) (u, h)`.
    pub fn related(&self, g: Group, s: usize, s2: usize) -> bool {
        let (t, f) = self.split(s);
        let (u, h) = self.split(s2);
        match self.link(g, t, u) {
            Link::Never => false,
            Link::Blocks(tbs) => tbs
                .iter()
                .all(|tb| tb.ok[self.left_index(tb, f) * tb.right_size + self.right_index(tb, h)]),
        }
    }

    /// Whether the fibre `f` over `t` has some `g`-successor over `u`.
    fn has_successor_over(&self, g: Group, t: usize, f: usize, u: usize) -> bool {
        match self.link(g, t, u) {
            Link::Never => false,
            Link::Blocks(tbs) => tbs.iter().all(|tb| tb.left_ok[self.left_index(tb, f)]),
        }
    }

    /// The cylinder `x × Φ` over a base set.
    pub fn cylinder(&self, base: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.size());
        for t in base.iter() {
            out.insert_range(t * self.fibres, (t + 1) * self.fibres);
        }
        out
    }

    /// The base set if `x` is a cylinder.
    pub fn as_cylinder(&self, x: &StateSet) -> Option<StateSet> {
        let mut base = StateSet::empty(self.base_size());
        for t in 0..self.base_size() {
            match x.count_range(t * self.fibres, (t + 1) * self.fibres) {
                0 => {}
                c if c == self.fibres => base.insert(t),
                _ => return None,
            }
        }
        Some(base)
    }

    /// Base states whose fibre meets `x`.
    fn shadow(&self, x: &StateSet) -> StateSet {
        StateSet::from_states(
            self.base_size(),
            (0..self.base_size()).filter(|&t| x.count_range(t * self.fibres, (t + 1) * self.fibres) > 0),
        )
    }

    fn pre_cylinder(&self, g: Group, base: &StateSet) -> StateSet {
        let key = (g.mask(), base.clone());
        if let Some(hit) = self.pre_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let mut out = StateSet::empty(self.size());
        for t in 0..self.base_size() {
            let targets: Vec<usize> = base.iter().filter(|&u| !matches!(self.link(g, t, u), Link::Never)).collect();
            if targets.is_empty() {
                continue;
            }
            for f in 0..self.fibres {
                if targets.iter().any(|&u| self.has_successor_over(g, t, f, u)) {
                    out.insert(self.state(t, f));
                }
            }
        }
        self.pre_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Materializes the frame; state `(t, f)` becomes index `t * fibres + f`.
    pub fn materialize(&self) -> Frame {
        let n = self.size();
        let mut leq = Rel::empty(n);
        for (t, u) in self.base_leq.pairs() {
            let row = StateSet::from_states(n, u * self.fibres..(u + 1) * self.fibres);
            for f in 0..self.fibres {
                for v in row.iter() {
                    leq.insert(self.state(t, f), v);
                }
            }
        }
        let rel = self
            .agents
            .groups()
            .map(|g| {
                let mut r = Rel::empty(n);
                for s in 0..n {
                    for s2 in 0..n {
                        if self.related(g, s, s2) {
                            r.insert(s, s2);
                        }
                    }
                }
                r
            })
            .collect();
        Frame { agents: self.agents.clone(), names: (0..n).map(|s| self.state_name(s)).collect(), leq, rel }
    }

    fn uses(&self, g: Group, t: usize, u: usize, lvar: usize, rvar: usize) -> Vec<Use<'_>> {
        match self.link(g, t, u) {
            Link::Never => vec![Use { table: &FALSE, lvar, rvar }],
            Link::Blocks(tbs) => tbs.iter().map(|table| Use { table, lvar, rvar }).collect(),
        }
    }

    /// Some fibre over `t` is `g`-related to some fibre over `u`.
    fn projected(&self, g: Group, t: usize, u: usize) -> bool {
        match self.link(g, t, u) {
            Link::Never => false,
            Link::Blocks(tbs) => tbs.iter().all(|tb| tb.left_ok.iter().any(|&b| b)),
        }
    }

    pub fn has_class(&self, c: FrameClass) -> bool {
        let n = self.base_size();
        let groups = || self.agents.groups();
        let leq = |a: usize, b: usize| self.base_leq.contains(a, b);
        let dom = &self.domains;
        match c {
            FrameClass::All => true,
            FrameClass::Doxastic => {
                groups().all(|g| (0..n).all(|t| (0..n).all(|u| !self.projected(g, t, u) || leq(t, u))))
            }
            FrameClass::Epistemic => {
                self.has_class(FrameClass::Doxastic)
                    && groups().all(|g| {
                        (0..n).all(|t| (0..n).any(|v| leq(t, v) && (0..n).any(|u| self.projected(g, v, u))))
                    })
            }
            FrameClass::Reflexive => {
                groups().all(|g| (0..n).all(|t| forall_implies(dom, &[], &self.uses(g, t, t, 0, 0))))
            }
            FrameClass::Symmetric => groups().all(|g| {
                (0..n).all(|t| (0..n).all(|u| forall_implies(dom, &self.uses(g, t, u, 0, 1), &self.uses(g, u, t, 1, 0))))
            }),
            FrameClass::Transitive => groups().all(|g| {
                (0..n).all(|t| {
                    (0..n).all(|u| {
                        (0..n).all(|v| {
                            let mut prem = self.uses(g, t, u, 0, 1);
                            prem.extend(self.uses(g, u, v, 1, 2));
                            forall_implies(dom, &prem, &self.uses(g, t, v, 0, 2))
                        })
                    })
                })
            }),
            FrameClass::Rs => self.has_class(FrameClass::Reflexive) && self.has_class(FrameClass::Symmetric),
            FrameClass::Partition => self.has_class(FrameClass::Rs) && self.has_class(FrameClass::Transitive),
            FrameClass::UdReflexive => groups().all(|g| {
                (0..n).all(|t| {
                    let up = (0..n).any(|v| leq(t, v) && (0..n).any(|w| leq(w, t) && self.projected(g, v, w)));
                    let down = (0..n).any(|v| leq(v, t) && (0..n).any(|w| leq(t, w) && self.projected(g, v, w)));
                    up && down
                })
            }),
            FrameClass::UdSymmetric => groups().all(|g| {
                (0..n).all(|t| {
                    (0..n).all(|u| {
                        if !self.projected(g, t, u) {
                            return true;
                        }
                        let up = (0..n).any(|v| leq(u, v) && (0..n).any(|w| leq(w, t) && self.projected(g, v, w)));
                        let down = (0..n).any(|v| leq(v, u) && (0..n).any(|w| leq(t, w) && self.projected(g, v, w)));
                        up && down
                    })
                })
            }),
            FrameClass::Ud => self.has_class(FrameClass::UdReflexive) && self.has_class(FrameClass::UdSymmetric),
            FrameClass::Prestandard => groups().all(|a| {
                groups().all(|b| {
                    (0..n).all(|t| {
                        (0..n).all(|u| {
                            let mut concl = self.uses(a, t, u, 0, 1);
                            concl.extend(self.uses(b, t, u, 0, 1));
                            forall_implies(dom, &self.uses(a.union(b), t, u, 0, 1), &concl)
                        })
                    })
                })
            }),
            FrameClass::Standard => {
                self.has_class(FrameClass::Prestandard)
                    && groups().all(|a| {
                        groups().all(|b| {
                            (0..n).all(|t| {
                                (0..n).all(|u| {
                                    let mut prem = self.uses(a, t, u, 0, 1);
                                    prem.extend(self.uses(b, t, u, 0, 1));
                                    forall_implies(dom, &prem, &self.uses(a.union(b), t, u, 0, 1))
                                })
                            })
                        })
                    })
            }
            FrameClass::ForwardConfluent => groups().all(|g| {
                (0..n).all(|t| {
                    (0..n).all(|u| {
                        let premise = (0..n).any(|v| leq(v, t) && self.projected(g, v, u));
                        !premise
                            || (0..self.fibres).all(|f| (0..n).any(|w| leq(u, w) && self.has_successor_over(g, t, f, w)))
                    })
                })
            }),
        }
    }
}

impl Structure for FiberedFrame {
    fn agents(&self) -> &AgentSet {
        &self.agents
    }

    fn state_count(&self) -> usize {
        self.size()
    }

    fn leq_down(&self, x: &StateSet) -> StateSet {
        self.cylinder(&self.base_leq.preimage(&self.shadow(x)))
    }

    fn leq_up(&self, x: &StateSet) -> StateSet {
        self.cylinder(&self.base_leq.image(&self.shadow(x)))
    }

    fn pre(&self, g: Group, x: &StateSet) -> StateSet {
        if let Some(base) = self.as_cylinder(x) {
            return self.pre_cylinder(g, &base);
        }
        let mut out = StateSet::empty(self.size());
        for s in 0..self.size() {
            let (t, f) = self.split(s);
            let hit = (0..self.base_size()).any(|u| {
                self.has_successor_over(g, t, f, u)
                    && (0..self.fibres).any(|h| x.contains(self.state(u, h)) && self.related(g, s, self.state(u, h)))
            });
            if hit {
                out.insert(s);
            }
        }
        out
    }
}

/// A fibred frame with a valuation lifted from the base.
#[derive(Debug)]
pub struct FiberedModel {
    pub frame: FiberedFrame,
    pub val: Valuation,
}

impl FiberedModel {
    /// Lifts each base truth set `V(p)` to `V(p) × Φ`.
    pub fn lift(frame: FiberedFrame, base_val: &Valuation) -> FiberedModel {
        let val = base_val.iter().map(|(p, x)| (p.clone(), frame.cylinder(x))).collect();
        FiberedModel { frame, val }
    }

    pub fn materialize(&self) -> Model {
        Model { frame: self.frame.materialize(), val: self.val.clone() }
    }
}

static FALSE: Table = Table {
    left: Vec::new(),
    right: Vec::new(),
    left_radix: Vec::new(),
    right_radix: Vec::new(),
    right_size: 1,
    ok: Vec::new(),
    left_ok: Vec::new(),
};

/// A table applied to variables: its left coordinates are read from
/// fibre variable `lvar` and its right coordinates from `rvar`.
#[derive(Clone, Copy)]
struct Use<'a> {
    table: &'a Table,
    lvar: usize,
    rvar: usize,
}

impl Use<'_> {
    /// `Some(v)` for coordinate-free tables.
    fn constant(&self) -> Option<bool> {
        if std::ptr::eq(self.table, &FALSE) {
            Some(false)
        } else if self.table.is_const() {
            Some(self.table.ok[0])
        } else {
            None
        }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Decides `∀ fibre assignments: (∧ premises) ⇒ (∧ conclusions)`.
///
/// Variables are fibre labels; a node is a (variable, coordinate) pair.
/// Nodes linked by some use form a component. If the premises restricted to
/// some component are unsatisfiable the implication holds vacuously;
/// otherwise it holds iff it holds inside every component.
fn forall_implies(domains: &[usize], prem: &[Use<'_>], concl: &[Use<'_>]) -> bool {
    let mut prem_live = Vec::new();
    for u in prem {
        match u.constant() {
            Some(false) => return true,
            Some(true) => {}
            None => prem_live.push(*u),
        }
    }
    let mut concl_false = false;
    let mut concl_live = Vec::new();
    for u in concl {
        match u.constant() {
            Some(false) => concl_false = true,
            Some(true) => {}
            None => concl_live.push(*u),
        }
    }
    let k = domains.len();
    let node = |var: usize, c: usize| var * k + c;
    let uses_nodes = |u: &Use<'_>| {
        u.table.left.iter().map(|&c| node(u.lvar, c)).chain(u.table.right.iter().map(|&c| node(u.rvar, c))).collect::<Vec<_>>()
    };
    let all: Vec<(bool, Use<'_>)> =
        prem_live.iter().map(|u| (true, *u)).chain(concl_live.iter().map(|u| (false, *u))).collect();
    let max_node = all.iter().flat_map(|(_, u)| uses_nodes(u)).max().map_or(0, |m| m + 1);
    let mut parent: Vec<usize> = (0..max_node).collect();
    for (_, u) in &all {
        let ns = uses_nodes(u);
        for w in ns.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut comps: HashMap<usize, Vec<(bool, Use<'_>)>> = HashMap::new();
    for (is_prem, u) in &all {
        let root = find(&mut parent, uses_nodes(u)[0]);
        comps.entry(root).or_default().push((*is_prem, *u));
    }
    let mut every_valid = true;
    let mut roots: Vec<usize> = comps.keys().copied().collect();
    roots.sort_unstable();
    for root in roots {
        let members = &comps[&root];
        let mut nodes: Vec<usize> = members.iter().flat_map(|(_, u)| uses_nodes(u)).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let pos = |x: usize| nodes.binary_search(&x).unwrap();
        let compiled: Vec<(bool, &Table, Vec<usize>, Vec<usize>)> = members
            .iter()
            .map(|(p, u)| {
                let l = u.table.left.iter().map(|&c| pos(node(u.lvar, c))).collect();
                let r = u.table.right.iter().map(|&c| pos(node(u.rvar, c))).collect();
                (*p, u.table, l, r)
            })
            .collect();
        let doms: Vec<usize> = nodes.iter().map(|&x| domains[x % k]).collect();
        let mut vals = vec![0usize; nodes.len()];
        let mut satisfiable = false;
        let mut valid = true;
        loop {
            let holds = |want_prem: bool| {
                compiled.iter().filter(|c| c.0 == want_prem).all(|(_, tb, l, r)| {
                    let li: usize = l.iter().zip(&tb.left_radix).map(|(&p, m)| vals[p] * m).sum();
                    let ri: usize = r.iter().zip(&tb.right_radix).map(|(&p, m)| vals[p] * m).sum();
                    tb.ok[li * tb.right_size + ri]
                })
            };
            if holds(true) {
                satisfiable = true;
                if !holds(false) {
                    valid = false;
                }
            }
            let mut i = 0;
            while i < vals.len() {
                vals[i] += 1;
                if vals[i] < doms[i] {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == vals.len() {
                break;
            }
        }
        if !satisfiable {
            return true;
        }
        every_valid &= valid;
    }
    !concl_false && every_valid
}
