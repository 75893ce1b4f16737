use super::SizeBudget;
use crate::bitset::Rel;
use crate::classes::{has_class, FrameClass};
use crate::semantics::Frame;
use crate::syntax::{AgentSet, Group};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Largest carrier whose preorders are listed exhaustively.
const MAX_LISTED_PREORDER_STATES: usize = 4;
/// Largest carrier a relation mask can hold.
pub const MAX_SEARCH_STATES: usize = 8;

/// All preorders on `n` states, ordered by the off-diagonal mask that first produced them.
pub fn preorders(n: usize) -> Vec<Rel> {
    assert!(n <= MAX_LISTED_PREORDER_STATES, "preorder listing is limited to {MAX_LISTED_PREORDER_STATES} states");
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in 0u64..1 << off.len() {
        let r = Rel::from_pairs(n, off.iter().enumerate().filter(|(b, _)| m >> b & 1 == 1).map(|(_, &p)| p));
        let c = r.reflexive_transitive_closure();
        if seen.insert(c.to_mask()) {
            out.push(c);
        }
    }
    out
}

fn random_preorder(n: usize, rng: &mut ChaCha8Rng) -> Rel {
    let density = rng.gen_range(0.0..0.5);
    let mut r = Rel::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                r.insert(i, j);
            }
        }
    }
    r.reflexive_transitive_closure()
}

/// The relations a generator may pick for one group.
enum Options {
    /// `base` plus any union of `units`.
    Units { base: u64, units: Vec<u64> },
    List(Vec<u64>),
}

impl Options {
    fn count(&self) -> u128 {
        match self {
            Options::Units { units, .. } => 1u128 << units.len(),
            Options::List(l) => l.len() as u128,
        }
    }

    fn nth(&self, i: u128) -> u64 {
        match self {
            Options::Units { base, units } => {
                units.iter().enumerate().filter(|(b, _)| i >> b & 1 == 1).fold(*base, |acc, (_, u)| acc | u)
            }
            Options::List(l) => l[i as usize],
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            Options::Units { base, units } => units.iter().filter(|_| rng.gen_bool(0.5)).fold(*base, |acc, u| acc | u),
            Options::List(l) => *l.choose(rng).expect("nonempty option list"),
        }
    }
}

/// A generator whose outputs include every frame of the class it serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Free,
    BelowLeq,
    ReflSym,
    Equivalence,
    Prestandard,
    Standard,
}

fn shape_for(c: FrameClass) -> Shape {
    match c {
        FrameClass::Doxastic | FrameClass::Epistemic => Shape::BelowLeq,
        FrameClass::Rs => Shape::ReflSym,
        FrameClass::Partition => Shape::Equivalence,
        FrameClass::Prestandard => Shape::Prestandard,
        FrameClass::Standard => Shape::Standard,
        _ => Shape::Free,
    }
}

fn bit(n: usize, i: usize, j: usize) -> u64 {
    1u64 << (i * n + j)
}

fn identity_mask(n: usize) -> u64 {
    (0..n).fold(0, |m, i| m | bit(n, i, i))
}

fn equivalences(n: usize) -> Vec<u64> {
    // Restricted growth strings enumerate set partitions.
    let mut out = Vec::new();
    let mut block = vec![0usize; n];
    fn go(i: usize, max: usize, n: usize, block: &mut Vec<usize>, out: &mut Vec<u64>) {
        if i == n {
            let mut m = 0;
            for a in 0..n {
                for b in 0..n {
                    if block[a] == block[b] {
                        m |= bit(n, a, b);
                    }
                }
            }
            out.push(m);
            return;
        }
        for v in 0..=max + 1 {
            block[i] = v;
            go(i + 1, max.max(v), n, block, out);
        }
    }
    if n > 0 {
        go(1, 0, n, &mut block, &mut out);
    }
    out
}

fn base_options(shape: Shape, n: usize, leq: &Rel) -> Options {
    let all = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    match shape {
        Shape::Free | Shape::Prestandard | Shape::Standard => {
            Options::Units { base: 0, units: all().map(|(i, j)| bit(n, i, j)).collect() }
        }
        Shape::BelowLeq => Options::Units { base: 0, units: leq.pairs().map(|(i, j)| bit(n, i, j)).collect() },
        Shape::ReflSym => Options::Units {
            base: identity_mask(n),
            units: all().filter(|(i, j)| i < j).map(|(i, j)| bit(n, i, j) | bit(n, j, i)).collect(),
        },
        Shape::Equivalence => Options::List(equivalences(n)),
    }
}

/// Options for group `g` once every smaller mask has been chosen.
fn options_for(shape: Shape, n: usize, g: Group, chosen: &[u64]) -> Option<Options> {
    if g.len() < 2 || !matches!(shape, Shape::Prestandard | Shape::Standard) {
        return None;
    }
    let below = g.members().filter_map(|a| g.minus(Group::from_mask(1 << a).expect("agent group"))).fold(!0u64, |m, h| m & chosen[h.index()]);
    let below = below & if n * n == 64 { !0 } else { (1u64 << (n * n)) - 1 };
    Some(match shape {
        Shape::Standard => Options::List(vec![below]),
        _ => Options::Units { base: 0, units: (0..n * n).filter(|b| below >> b & 1 == 1).map(|b| 1u64 << b).collect() },
    })
}

fn upper_bound(shape: Shape, n: usize, agents: &AgentSet, leqs: &[Rel]) -> u128 {
    let mut total = 0u128;
    for leq in leqs {
        let base = base_options(shape, n, leq);
        let mut prod = 1u128;
        for g in agents.groups() {
            let c = match shape {
                Shape::Standard if g.len() >= 2 => 1,
                _ => base.count(),
            };
            prod = prod.saturating_mul(c);
        }
        total = total.saturating_add(prod);
    }
    total
}

fn build(agents: &AgentSet, leq: &Rel, masks: &[u64]) -> Frame {
    let n = leq.size();
    Frame::new(agents.clone(), leq.clone(), masks.iter().map(|&m| Rel::from_mask(n, m)).collect()).expect("generated frame is well formed")
}

fn exhaustive(shape: Shape, agents: &AgentSet, leq: &Rel, mut visit: impl FnMut(Frame)) {
    let n = leq.size();
    let groups: Vec<Group> = agents.groups().collect();
    let base = base_options(shape, n, leq);
    fn go(
        i: usize,
        shape: Shape,
        n: usize,
        groups: &[Group],
        base: &Options,
        chosen: &mut Vec<u64>,
        agents: &AgentSet,
        leq: &Rel,
        visit: &mut dyn FnMut(Frame),
    ) {
        if i == groups.len() {
            visit(build(agents, leq, chosen));
            return;
        }
        let own = options_for(shape, n, groups[i], chosen);
        let opts = own.as_ref().unwrap_or(base);
        for k in 0..opts.count() {
            chosen.push(opts.nth(k));
            go(i + 1, shape, n, groups, base, chosen, agents, leq, visit);
            chosen.pop();
        }
    }
    go(0, shape, n, &groups, &base, &mut Vec::new(), agents, leq, &mut visit);
}

fn sampled(shape: Shape, agents: &AgentSet, leq: &Rel, rng: &mut ChaCha8Rng) -> Frame {
    let n = leq.size();
    let base = base_options(shape, n, leq);
    let mut chosen = Vec::new();
    for g in agents.groups() {
        let own = options_for(shape, n, g, &chosen);
        chosen.push(own.as_ref().unwrap_or(&base).sample(rng));
    }
    build(agents, leq, &chosen)
}

fn rng_for(seed: u64, n: usize, k: usize, c: FrameClass) -> ChaCha8Rng {
    let salt = (n as u64) << 48 ^ (k as u64) << 40 ^ FrameClass::ALL.iter().position(|&x| x == c).unwrap_or(0) as u64;
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Distinct frames of class `c` over `agents` with exactly `n` states.
///
/// Exhaustive when the generator's space has at most `max_candidates` members,
/// otherwise `max_candidates` seeded draws filtered by class.
pub fn frames_of_size(b: &SizeBudget, c: FrameClass, agents: &AgentSet, n: usize) -> Vec<Frame> {
    assert!((1..=MAX_SEARCH_STATES).contains(&n), "frame size {n} outside 1..={MAX_SEARCH_STATES}");
    let shape = shape_for(c);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut keep = |f: Frame| {
        if has_class(&f, c) && seen.insert(f.clone()) {
            out.push(f);
        }
    };
    let listed = (n <= MAX_LISTED_PREORDER_STATES).then(|| preorders(n));
    let exhaustive_ok = listed.as_ref().is_some_and(|l| upper_bound(shape, n, agents, l) <= b.max_candidates as u128);
    match listed {
        Some(leqs) if exhaustive_ok => {
            for leq in &leqs {
                exhaustive(shape, agents, leq, &mut keep);
            }
        }
        listed => {
            let mut rng = rng_for(b.seed, n, agents.len(), c);
            for _ in 0..b.max_candidates {
                let leq = match &listed {
                    Some(l) => l.choose(&mut rng).expect("some preorder").clone(),
                    None => random_preorder(n, &mut rng),
                };
                keep(sampled(shape, agents, &leq, &mut rng));
            }
        }
    }
    out
}

/// Frames of class `c` over `agents`, ascending by state count.
pub fn enumerate_frames_over(b: &SizeBudget, c: FrameClass, agents: &AgentSet) -> Vec<Frame> {
    (1..=b.max_states.min(MAX_SEARCH_STATES)).flat_map(|n| frames_of_size(b, c, agents, n)).collect()
}

/// Frames of class `c` over the standard agent sets of size `1..=max_agents`,
/// ascending by state count and then by agent count.
pub fn enumerate_frames(b: &SizeBudget, c: FrameClass) -> Vec<Frame> {
    let sets: Vec<AgentSet> = (1..=b.max_agents.min(crate::syntax::MAX_AGENTS)).map(AgentSet::standard).collect();
    let mut out = Vec::new();
    for n in 1..=b.max_states.min(MAX_SEARCH_STATES) {
        for ag in &sets {
            out.extend(frames_of_size(b, c, ag, n));
        }
    }
    out
}
