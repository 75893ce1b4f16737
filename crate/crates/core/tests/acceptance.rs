//! One PASS/FAIL line per acceptance criterion. Runs without the libtest harness so the table always prints.

use ieml::bitset::{Rel, StateSet};
use ieml::classes::{has_class, is_iel_structure, FrameClass, IelKind};
use ieml::closure::{closure, FormulaSpace};
use ieml::constructions::{
    standardized_size, verify_collapse_mono, verify_expand_mono, verify_partition_lift, verify_rs_collapse, verify_standardize,
    verify_transitive_lift, ClaimReport, ConstructionBudget, ConstructionError, PartitionVariant, PiVariant,
};
use ieml::proofs::{check_derivation, replay, soundness_probe, Derivation, LogicId, RejectReason};
use ieml::search::{check_rule, check_schema_on_class, enumerate_frames, preorders, random_model, refute_schema_outside, rule_frames, Rule, SizeBudget, Status};
use ieml::semantics::{for_each_valuation, up_sets, Algebra, Evaluator, Frame, Model, MonoModel, MonoStructure, Valuation, Variant};
use ieml::syntax::{parse, render, AgentSet, Formula, Group};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::time::{Duration, Instant};

const SEED: u64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn budget(states: usize, agents: usize, depth: usize) -> SizeBudget {
    SizeBudget { max_states: states, max_agents: agents, max_formula_depth: depth, seed: SEED, ..SizeBudget::default() }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn heredity() -> Outcome {
    let start = Instant::now();
    let b = budget(4, 2, 3);
    let atoms = vec!["p".to_string(), "q".to_string()];
    let (mut models, mut values, mut broken) = (0usize, 0usize, 0usize);
    for f in enumerate_frames(&b, FrameClass::All) {
        let space = FormulaSpace::new(["p", "q"], f.agents.groups());
        for_each_valuation(&f, &atoms, u64::MAX, |val| {
            models += 1;
            for (x, _) in closure(&Evaluator::new(&f, val), &space, 3) {
                values += 1;
                if !f.is_up_closed(&x) {
                    broken += 1;
                }
            }
            true
        })
        .unwrap();
    }
    let took = start.elapsed();
    outcome(
        broken == 0 && models > 0 && took < Duration::from_secs(120),
        format!("{models} models, {values} truth sets, {broken} not up-closed, {} (limit 120s)", secs(took)),
    )
}

fn axiom_battery() -> Outcome {
    let b = budget(3, 2, 0);
    let battery: [(&[&str], FrameClass); 5] = [
        (&["A1", "A2", "A3", "A4", "A5"], FrameClass::All),
        (&["A6"], FrameClass::Doxastic),
        (&["A7"], FrameClass::Epistemic),
        (&["A8", "A9", "A10", "A11"], FrameClass::Ud),
        (&["A12", "A13"], FrameClass::Prestandard),
    ];
    let (mut checked, mut bad, mut refuted, mut unrefuted) = (0, Vec::new(), 0, Vec::new());
    for (ids, c) in battery {
        for id in ids {
            let r = check_schema_on_class(id, c, &b).unwrap();
            checked += r.checked;
            if r.status != Status::Pass {
                bad.push(*id);
            }
            if c != FrameClass::All {
                let off = refute_schema_outside(id, c, FrameClass::All, &b).unwrap();
                if off.status == Status::Pass {
                    refuted += 1;
                } else {
                    unrefuted.push(*id);
                }
            }
        }
    }
    outcome(
        bad.is_empty() && unrefuted.is_empty(),
        format!("{checked} frame instances, counterexamples on own class: {bad:?}; refuted off class {refuted}/8, missing {unrefuted:?}"),
    )
}

fn rules() -> Outcome {
    let frames = rule_frames(&budget(3, 2, 0));
    let mut pass = frames.len() >= 500;
    let mut parts = vec![format!("{} frames", frames.len())];
    for rule in [Rule::R1, Rule::R2, Rule::R3] {
        let r = check_rule(rule, &frames).unwrap();
        pass &= r.failures.is_empty() && r.vacuity() < 1.0;
        parts.push(format!("{rule:?}: {} failures, vacuity {:.1}%", r.failures.len(), 100.0 * r.vacuity()));
    }
    outcome(pass, parts.join(", "))
}

#[derive(Default)]
struct Tally {
    models: usize,
    values: usize,
    failures: usize,
    errors: usize,
}

impl Tally {
    fn add(&mut self, r: Result<ClaimReport, ConstructionError>) {
        self.models += 1;
        match r {
            Ok(rep) => {
                self.values += rep.values_checked;
                self.failures += rep.failures.len();
            }
            Err(_) => self.errors += 1,
        }
    }

    fn ok(&self) -> bool {
        self.models > 0 && self.failures == 0 && self.errors == 0
    }

    fn line(&self) -> String {
        format!("{} models, {} values, {} failures, {} errors", self.models, self.values, self.failures, self.errors)
    }
}

fn models_over(frames: Vec<Frame>) -> Vec<Model> {
    let atoms = vec!["p".to_string()];
    let mut out = Vec::new();
    for f in frames {
        for_each_valuation(&f, &atoms, u64::MAX, |val| {
            out.push(Model { frame: f.clone(), val: val.clone() });
            true
        })
        .unwrap();
    }
    out
}

fn standardization() -> Outcome {
    let start = Instant::now();
    let b = budget(2, 2, 2);
    let mut t = Tally::default();
    let mut inputs = std::collections::BTreeSet::new();
    for (variant, c) in [(PiVariant::Default, FrameClass::Prestandard), (PiVariant::Partition, FrameClass::Partition)] {
        let frames = enumerate_frames(&b, c).into_iter().filter(|f| has_class(f, FrameClass::Prestandard)).collect();
        for m in models_over(frames) {
            for k in [FrameClass::Doxastic, FrameClass::Epistemic, FrameClass::Ud, FrameClass::Rs, FrameClass::Partition] {
                if has_class(&m.frame, k) {
                    inputs.insert(k.tag());
                }
            }
            t.add(verify_standardize(&m, variant, ConstructionBudget::STANDARDIZE, &["p"], 2));
        }
    }
    let took = start.elapsed();
    let widest = standardized_size(2, 2).unwrap();
    outcome(
        t.ok() && widest == 8192 && inputs.len() == 5 && took < Duration::from_secs(300),
        format!("{}, largest output {widest} states, preserved classes seen {inputs:?}, {} (limit 300s)", t.line(), secs(took)),
    )
}

fn lifts() -> Outcome {
    let b = budget(3, 2, 2);
    let mut trans = Tally::default();
    for m in models_over(enumerate_frames(&b, FrameClass::All)) {
        trans.add(Ok(verify_transitive_lift(&m, &["p"], 2)));
    }
    let mut rs = Tally::default();
    for m in models_over(enumerate_frames(&b, FrameClass::Ud)) {
        rs.add(verify_rs_collapse(&m, &["p"], 2));
    }
    let mut part = Tally::default();
    for m in models_over(enumerate_frames(&b, FrameClass::Rs)) {
        part.add(verify_partition_lift(&m, PartitionVariant::Plain, ConstructionBudget::PARTITION_LIFT, &["p"], 2));
        if has_class(&m.frame, FrameClass::Prestandard) {
            part.add(verify_partition_lift(&m, PartitionVariant::Prestandard, ConstructionBudget::PARTITION_LIFT, &["p"], 2));
        }
    }
    outcome(
        trans.ok() && rs.ok() && part.ok(),
        format!("transitive lift: {}; rs collapse: {}; partition lift: {}", trans.line(), rs.line(), part.line()),
    )
}

fn mono_structures(max: usize) -> Vec<MonoStructure> {
    let mut out = Vec::new();
    for n in 1..=max {
        for leq in preorders(n) {
            for mask in 0u64..1 << (n * n) {
                let s = MonoStructure::new(leq.clone(), Rel::from_mask(n, mask)).unwrap();
                if is_iel_structure(&s, IelKind::Minus) {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn mono() -> Outcome {
    let structures = mono_structures(3);
    let full = structures.iter().filter(|s| is_iel_structure(s, IelKind::Full)).count();
    let mut expand = Tally::default();
    let mut collapse = Tally::default();
    for s in &structures {
        for p in up_sets(&Frame::new(AgentSet::standard(1), s.leq.clone(), vec![s.r.clone()]).unwrap()).unwrap() {
            let m = MonoModel::new(s.clone(), Valuation::from([("p".to_string(), p)])).unwrap();
            for k in 1..=2 {
                let ag = AgentSet::standard(k);
                expand.add(verify_expand_mono(&m, &ag, &["p"], 2));
            }
        }
    }
    for m in models_over(enumerate_frames(&budget(3, 2, 2), FrameClass::Doxastic)) {
        for g in m.frame.agents.groups() {
            collapse.add(verify_collapse_mono(&m, g, &["p"], 2));
        }
    }
    outcome(
        expand.ok() && collapse.ok() && full > 0,
        format!("{} IEL⁻ structures ({full} IEL); expand: {}; collapse: {}", structures.len(), expand.line(), collapse.line()),
    )
}

const SHIPPED: [(&str, LogicId, &str); 8] = [
    ("l_all", LogicId::All, include_str!("../data/derivations/l_all.json")),
    ("l_dox", LogicId::Dox, include_str!("../data/derivations/l_dox.json")),
    ("l_epi", LogicId::Epi, include_str!("../data/derivations/l_epi.json")),
    ("l_par", LogicId::Par, include_str!("../data/derivations/l_par.json")),
    ("l_all_d", LogicId::AllD, include_str!("../data/derivations/l_all_d.json")),
    ("l_dox_d", LogicId::DoxD, include_str!("../data/derivations/l_dox_d.json")),
    ("l_epi_d", LogicId::EpiD, include_str!("../data/derivations/l_epi_d.json")),
    ("l_par_d", LogicId::ParD, include_str!("../data/derivations/l_par_d.json")),
];

/// A mutated document, the logic to check it in, the line that must fail first and the accepted reasons.
struct Mutant {
    doc: Value,
    logic: LogicId,
    line: usize,
    expect: fn(&RejectReason) -> bool,
}

fn mutants() -> Vec<Mutant> {
    let mut out = Vec::new();
    for (_, logic, text) in SHIPPED {
        let doc: Value = serde_json::from_str(text).unwrap();
        let lines = doc["lines"].as_array().unwrap();
        for (i, l) in lines.iter().enumerate() {
            let at = |f: &dyn Fn(&mut Value)| {
                let mut d = doc.clone();
                f(&mut d["lines"][i]["just"]);
                d
            };
            match l["just"]["kind"].as_str().unwrap() {
                "axiom" => {
                    let id = l["just"]["id"].as_str().unwrap();
                    out.push(Mutant {
                        doc: at(&|j| j["id"] = json!("A99")),
                        logic,
                        line: i + 1,
                        expect: |r| matches!(r, RejectReason::UnknownSchema { .. }),
                    });
                    let other = if id == "IPL2" { "IPL1" } else { "IPL2" };
                    out.push(Mutant {
                        doc: at(&|j| j["id"] = json!(other)),
                        logic,
                        line: i + 1,
                        expect: |r| matches!(r, RejectReason::NotAnInstance { .. }),
                    });
                }
                "mp" => {
                    out.push(Mutant {
                        doc: at(&|j| j["major"] = json!(i + 1)),
                        logic,
                        line: i + 1,
                        expect: |r| matches!(r, RejectReason::BadReference { .. }),
                    });
                    out.push(Mutant {
                        doc: at(&|j| j["minor"] = json!(0)),
                        logic,
                        line: i + 1,
                        expect: |r| matches!(r, RejectReason::BadReference { .. }),
                    });
                    out.push(Mutant {
                        doc: at(&|j| {
                            let (a, b) = (j["minor"].clone(), j["major"].clone());
                            j["minor"] = b;
                            j["major"] = a;
                        }),
                        logic,
                        line: i + 1,
                        expect: |r| matches!(r, RejectReason::ShapeMismatch { .. }),
                    });
                }
                _ => {
                    out.push(Mutant {
                        doc: at(&|j| j["line"] = json!(lines.len() + 5)),
                        logic,
                        line: i + 1,
                        expect: |r| matches!(r, RejectReason::BadReference { .. }),
                    });
                }
            }
        }
    }
    let (_, _, all) = SHIPPED[0];
    let mut doc: Value = serde_json::from_str(all).unwrap();
    let n = doc["lines"].as_array().unwrap().len();
    doc["lines"].as_array_mut().unwrap().push(json!({"formula": "p -> [a]p", "just": {"kind": "axiom", "id": "A6"}}));
    out.push(Mutant { doc, logic: LogicId::All, line: n + 1, expect: |r| matches!(r, RejectReason::NotInLogic { .. }) });
    let single = json!({"agents": ["a"], "lines": [{"formula": "p -> [a]p", "just": {"kind": "axiom", "id": "A6"}}]});
    for l in [LogicId::All, LogicId::AllD, LogicId::Par, LogicId::ParD] {
        out.push(Mutant { doc: single.clone(), logic: l, line: 1, expect: |r| matches!(r, RejectReason::NotInLogic { .. }) });
    }
    out
}

fn proof_checker() -> Outcome {
    let mut accepted = 0;
    let mut problems = Vec::new();
    let mut probed = 0;
    let mut countermodels = 0;
    for (name, logic, text) in SHIPPED {
        let d = Derivation::from_json(text).unwrap();
        match check_derivation(&d, logic) {
            Ok(cert) => {
                accepted += 1;
                if replay(&cert).is_err() {
                    problems.push(format!("{name}: replay differs"));
                }
                let ag = cert.agent_set();
                let b = SizeBudget { max_states: 3, max_agents: ag.len(), seed: SEED, ..SizeBudget::default() };
                for l in &cert.lines {
                    let f = parse(&l.formula, &ag).unwrap();
                    probed += 1;
                    if soundness_probe(&f, &ag, logic, &b).unwrap().countermodel.is_some() {
                        countermodels += 1;
                        problems.push(format!("{name} line {}: countermodel", l.line));
                    }
                }
            }
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    let uses_group_axioms = SHIPPED[4].2.contains("A12") && SHIPPED[4].2.contains("A13");
    let ms = mutants();
    let mut rejected_right = 0;
    for m in &ms {
        let d: Derivation = serde_json::from_value(m.doc.clone()).unwrap();
        match check_derivation(&d, m.logic) {
            Err(r) if r.line == m.line && (m.expect)(&r.reason) => rejected_right += 1,
            Err(r) => problems.push(format!("mutant expected line {} got {r}", m.line)),
            Ok(_) => problems.push(format!("mutant at line {} accepted in {}", m.line, m.logic.tag())),
        }
    }
    outcome(
        accepted == 8 && uses_group_axioms && ms.len() >= 20 && rejected_right == ms.len() && countermodels == 0 && problems.is_empty(),
        format!(
            "{accepted}/8 shipped accepted, {rejected_right}/{} mutants rejected at the right line, {probed} theorems probed, {countermodels} countermodels{}",
            ms.len(),
            if problems.is_empty() { String::new() } else { format!("; {problems:?}") }
        ),
    )
}

/// Evaluates all three diamond clauses side by side.
struct Trio<'a>([Evaluator<'a, Frame>; 3]);

impl Algebra for Trio<'_> {
    type Value = [StateSet; 3];

    fn atom(&self, p: &str) -> Self::Value {
        self.0.each_ref().map(|e| e.atom(p))
    }
    fn top(&self) -> Self::Value {
        self.0.each_ref().map(|e| e.top())
    }
    fn bot(&self) -> Self::Value {
        self.0.each_ref().map(|e| e.bot())
    }
    fn implies(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        [0, 1, 2].map(|i| self.0[i].implies(&a[i], &b[i]))
    }
    fn or(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        [0, 1, 2].map(|i| self.0[i].or(&a[i], &b[i]))
    }
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        [0, 1, 2].map(|i| self.0[i].and(&a[i], &b[i]))
    }
    fn boxed(&self, g: Group, a: &Self::Value) -> Self::Value {
        [0, 1, 2].map(|i| self.0[i].boxed(g, &a[i]))
    }
    fn dia(&self, g: Group, a: &Self::Value) -> Self::Value {
        [0, 1, 2].map(|i| self.0[i].dia(g, &a[i]))
    }
}

fn variant_agreement() -> Outcome {
    let b = budget(3, 2, 3);
    let frames = enumerate_frames(&b, FrameClass::ForwardConfluent);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xFC);
    let (mut models, mut values, mut disagreements) = (0, 0, 0);
    while models < 200 {
        let f = frames.choose(&mut rng).unwrap();
        let m = random_model(&SizeBudget { seed: rng.gen(), ..b }, f, &["p", "q"]).unwrap();
        let alg = Trio(Variant::ALL.map(|v| Evaluator::with_variant(&m.frame, &m.val, v)));
        let space = FormulaSpace::new(["p", "q"], m.frame.agents.groups());
        for ([x, y, z], _) in closure(&alg, &space, 3) {
            values += 1;
            if x != y || y != z {
                disagreements += 1;
            }
        }
        models += 1;
    }
    outcome(
        disagreements == 0 && frames.len() > 1,
        format!("{models} models from {} forward-confluent frames, {values} formula classes, {disagreements} disagreements", frames.len()),
    )
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize, agents: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Formula::Top,
            1 => Formula::Bot,
            i => Formula::atom(["p", "q", "r", "s"][i - 2]),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1, agents);
    let group = |rng: &mut ChaCha8Rng| Group::from_mask(rng.gen_range(1..1u8 << agents)).unwrap();
    match rng.gen_range(0..5) {
        0 => Formula::implies(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        3 => Formula::boxed(group(rng), sub(rng)),
        _ => Formula::dia(group(rng), sub(rng)),
    }
}

const CORPUS: &[&str] = &[
    "p",
    "~p",
    "~~p -> p",
    "p \\/ ~p",
    "(p /\\ q) -> (r -> s)",
    "p -> q -> r",
    "(p -> q) -> r",
    "p /\\ q \\/ r",
    "p /\\ (q \\/ r)",
    "p <-> q",
    "[a]p -> p",
    "<a>p -> [a]<a>p",
    "[a,b]p",
    "<b,a>(p/\\q)",
    "[a][b]p -> [a,b]p",
    "[a]p \\/ [b]p -> [a,b]p",
    "<a,b>p -> <a>p /\\ <b>p",
    "~[a]F",
    "T /\\ F",
    "[a](p -> q) -> [a]p -> [a]q",
    "~~<a>p",
    "((p))",
];

fn parser() -> Outcome {
    let ag = AgentSet::standard(3);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xA57);
    let mut roundtrip = 0;
    for _ in 0..10_000 {
        let depth = rng.gen_range(0..=6);
        let f = random_formula(&mut rng, depth, 3);
        if parse(&render(&f, &ag), &ag).as_ref() == Ok(&f) {
            roundtrip += 1;
        }
    }
    let ab = AgentSet::standard(2);
    let mut corpus: Vec<(String, AgentSet)> = CORPUS.iter().map(|s| (s.to_string(), ab.clone())).collect();
    for (_, _, text) in SHIPPED {
        let d = Derivation::from_json(text).unwrap();
        let agents = d.agent_set().unwrap();
        for l in &d.lines {
            corpus.push((l.formula.clone(), agents.clone()));
        }
    }
    let mut idempotent = 0;
    for (text, agents) in &corpus {
        let once = render(&parse(text, agents).unwrap(), agents);
        let twice = render(&parse(&once, agents).unwrap(), agents);
        if once == twice {
            idempotent += 1;
        }
    }
    outcome(
        roundtrip == 10_000 && idempotent == corpus.len(),
        format!("parse after render {roundtrip}/10000, render after parse idempotent {idempotent}/{}", corpus.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("heredity", heredity),
        ("axiom battery", axiom_battery),
        ("rule preservation", rules),
        ("standardization", standardization),
        ("lifts and collapse", lifts),
        ("mono constructions", mono),
        ("proof checker", proof_checker),
        ("diamond variants agree", variant_agreement),
        ("parser round trips", parser),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(*name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
