use super::{enumerate_frames, frames_of_size, SizeBudget, MAX_SEARCH_STATES};
use crate::classes::{has_class, is_iel_structure, FrameClass, IelKind};
use crate::closure::{closure, FormulaSpace};
use crate::constructions::{
    verify_collapse_mono, verify_expand_mono, verify_partition_lift, verify_rs_collapse, verify_standardize,
    verify_transitive_lift, ClaimReport, ConstructionBudget, ConstructionError, PartitionVariant, PiVariant,
};
use crate::proofs::schema;
use crate::semantics::{
    falsifying_valuation, for_each_valuation, model_to_value, Algebra, Evaluator, Frame, Model, MonoModel, MonoStructure,
    SemanticsError, Valuation, DEFAULT_VALUATION_CAP,
};
use crate::syntax::{render, AgentSet, Bindings, Formula, Group};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashSet;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing within budget exercised the property.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropositionResult {
    pub name: String,
    pub status: Status,
    /// Instances that actually tested the property.
    pub checked: usize,
    /// Instances skipped because a premise did not hold.
    pub vacuous: usize,
    pub witnesses: Vec<Value>,
}

impl PropositionResult {
    fn new(name: impl Into<String>) -> Self {
        PropositionResult { name: name.into(), status: Status::Pass, checked: 0, vacuous: 0, witnesses: Vec::new() }
    }

    fn fail(&mut self, w: Value) {
        self.status = Status::Fail;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    fn finish(mut self) -> Self {
        if self.status == Status::Pass && self.checked == 0 {
            self.status = Status::Vacuous;
        }
        self
    }
}

const MAX_WITNESSES: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub propositions: Vec<PropositionResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.propositions.iter().all(|p| p.status != Status::Fail)
    }
}

fn model_witness(f: &Formula, m: &Model, s: usize) -> Value {
    json!({"formula": render(f, &m.frame.agents), "state": m.frame.names[s], "model": model_to_value(m)})
}

/// Every instance of schema `id` over the groups of `agents`.
pub fn schema_instances(id: &str, agents: &AgentSet) -> Vec<Formula> {
    let s = schema(id).unwrap_or_else(|| panic!("unknown schema {id}"));
    let groups: Vec<Option<Group>> = agents.groups().map(Some).collect();
    let alphas = if s.uses_alpha() { groups.clone() } else { vec![None] };
    let betas = if s.uses_beta() { groups } else { vec![None] };
    let mut out = Vec::new();
    for &alpha in &alphas {
        for &beta in &betas {
            let f = s.instantiate(&Bindings { alpha, beta, ..Bindings::default() }).expect("all metavariables bound");
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

/// Validity of every instance of schema `id` on every frame of class `c` within budget.
pub fn check_schema_on_class(id: &str, c: FrameClass, b: &SizeBudget) -> Result<PropositionResult, SemanticsError> {
    let mut r = PropositionResult::new(format!("{id} valid on {c}"));
    for f in enumerate_frames(b, c) {
        for inst in schema_instances(id, &f.agents) {
            r.checked += 1;
            if let Some((val, s)) = falsifying_valuation(&f, &inst, DEFAULT_VALUATION_CAP)? {
                r.fail(model_witness(&inst, &Model { frame: f.clone(), val }, s));
                break;
            }
        }
    }
    Ok(r.finish())
}

/// Searches frames of `within` outside class `c` for a model falsifying an instance of `id`.
/// Passes when one is found.
pub fn refute_schema_outside(id: &str, c: FrameClass, within: FrameClass, b: &SizeBudget) -> Result<PropositionResult, SemanticsError> {
    let mut r = PropositionResult::new(format!("{id} refuted off {c}"));
    for n in 1..=b.max_states.min(MAX_SEARCH_STATES) {
        for k in 1..=b.max_agents {
            let ag = AgentSet::standard(k);
            for f in frames_of_size(b, within, &ag, n) {
                if has_class(&f, c) {
                    continue;
                }
                r.checked += 1;
                for inst in schema_instances(id, &ag) {
                    if let Some((val, s)) = falsifying_valuation(&f, &inst, DEFAULT_VALUATION_CAP)? {
                        r.witnesses.push(model_witness(&inst, &Model { frame: f, val }, s));
                        return Ok(r);
                    }
                }
            }
        }
    }
    r.status = if r.checked == 0 { Status::Vacuous } else { Status::Fail };
    Ok(r)
}

/// The three modal rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleResult {
    pub rule: Rule,
    pub frames: usize,
    /// Premise and conclusion pairs examined.
    pub instances: usize,
    /// Pairs whose premise was valid on the frame.
    pub premise_valid: usize,
    pub failures: Vec<Value>,
}

impl RuleResult {
    pub fn vacuity(&self) -> f64 {
        if self.instances == 0 {
            1.0
        } else {
            1.0 - self.premise_valid as f64 / self.instances as f64
        }
    }
}

fn rule_pool(g: Group, rule: Rule) -> Vec<Formula> {
    let (p, q) = (Formula::atom("p"), Formula::atom("q"));
    let mut v = vec![p.clone(), q.clone(), Formula::and(p.clone(), q.clone()), Formula::Bot, Formula::Top];
    if rule != Rule::R3 {
        v.push(Formula::or(p.clone(), q.clone()));
        v.push(Formula::not(p.clone()));
        v.push(Formula::boxed(g, p.clone()));
        v.push(Formula::dia(g, p));
    }
    v
}

/// Premise and conclusion of one rule application.
fn rule_instance(rule: Rule, g: Group, parts: &[&Formula]) -> (Formula, Formula) {
    let c = |x: &Formula| x.clone();
    match rule {
        Rule::R1 => (Formula::implies(c(parts[0]), c(parts[1])), Formula::implies(Formula::boxed(g, c(parts[0])), Formula::boxed(g, c(parts[1])))),
        Rule::R2 => (Formula::implies(c(parts[0]), c(parts[1])), Formula::implies(Formula::dia(g, c(parts[0])), Formula::dia(g, c(parts[1])))),
        Rule::R3 => {
            let da = Formula::dia(g, c(parts[0]));
            (
                Formula::implies(da.clone(), Formula::or(c(parts[1]), Formula::boxed(g, Formula::implies(c(parts[0]), c(parts[2]))))),
                Formula::implies(da, Formula::or(c(parts[1]), Formula::dia(g, c(parts[2])))),
            )
        }
    }
}

/// Checks that `rule` preserves validity on each frame, over a fixed pool of instances.
pub fn check_rule(rule: Rule, frames: &[Frame]) -> Result<RuleResult, SemanticsError> {
    let mut out = RuleResult { rule, frames: frames.len(), instances: 0, premise_valid: 0, failures: Vec::new() };
    let atoms = vec!["p".to_string(), "q".to_string()];
    for f in frames {
        let mut pairs = Vec::new();
        for g in f.agents.groups() {
            let pool = rule_pool(g, rule);
            let arity = if rule == Rule::R3 { 3 } else { 2 };
            let mut idx = vec![0usize; arity];
            loop {
                let parts: Vec<&Formula> = idx.iter().map(|&i| &pool[i]).collect();
                pairs.push(rule_instance(rule, g, &parts));
                let mut k = 0;
                while k < arity {
                    idx[k] += 1;
                    if idx[k] < pool.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == arity {
                    break;
                }
            }
        }
        let mut premise_ok = vec![true; pairs.len()];
        let mut conclusion_bad: Vec<Option<(Valuation, usize)>> = vec![None; pairs.len()];
        for_each_valuation(f, &atoms, DEFAULT_VALUATION_CAP, |val| {
            let ev = Evaluator::new(f, val);
            for (i, (prem, concl)) in pairs.iter().enumerate() {
                if premise_ok[i] && !ev.eval(prem).is_full() {
                    premise_ok[i] = false;
                }
                if conclusion_bad[i].is_none() {
                    if let Some(s) = ev.eval(concl).complement().first() {
                        conclusion_bad[i] = Some((val.clone(), s));
                    }
                }
            }
            true
        })?;
        for (i, (_, concl)) in pairs.iter().enumerate() {
            out.instances += 1;
            if premise_ok[i] {
                out.premise_valid += 1;
                if let Some((val, s)) = conclusion_bad[i].take() {
                    if out.failures.len() < MAX_WITNESSES {
                        out.failures.push(model_witness(concl, &Model { frame: f.clone(), val }, s));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Frames sampled for rule checks.
pub const RULE_FRAMES: usize = 640;

/// Frames for rule checks: a seeded sample of at most [`RULE_FRAMES`] from
/// the class generators that tend to validate modal premises.
pub fn rule_frames(b: &SizeBudget) -> Vec<Frame> {
    let mut pool: Vec<Frame> = Vec::new();
    let mut seen = HashSet::new();
    for c in [FrameClass::All, FrameClass::Doxastic, FrameClass::Partition, FrameClass::Epistemic] {
        for f in enumerate_frames(b, c) {
            if seen.insert(f.clone()) {
                pool.push(f);
            }
        }
    }
    if pool.len() <= RULE_FRAMES {
        return pool;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed ^ 0x5255_4c45);
    let mut keep = rand::seq::index::sample(&mut rng, pool.len(), RULE_FRAMES).into_vec();
    keep.sort_unstable();
    keep.into_iter().map(|i| pool[i].clone()).collect()
}

fn heredity(b: &SizeBudget) -> Result<PropositionResult, SemanticsError> {
    let mut r = PropositionResult::new("heredity");
    let atoms = vec!["p".to_string(), "q".to_string()];
    for f in enumerate_frames(b, FrameClass::All) {
        let space = FormulaSpace::new(["p", "q"], f.agents.groups());
        let mut failure = None;
        for_each_valuation(&f, &atoms, DEFAULT_VALUATION_CAP, |val| {
            for (x, g) in closure(&Evaluator::new(&f, val), &space, b.max_formula_depth) {
                r.checked += 1;
                if !f.is_up_closed(&x) {
                    let s = (0..f.size()).find(|&s| x.contains(s) && !f.leq.row(s).is_subset(&x)).expect("some state breaks closure");
                    failure = Some((g, val.clone(), s));
                    return false;
                }
            }
            true
        })?;
        if let Some((g, val, s)) = failure {
            r.fail(model_witness(&g, &Model { frame: f, val }, s));
        }
    }
    Ok(r.finish())
}

fn all_valuations(f: &Frame, atoms: &[&str]) -> Result<Vec<Valuation>, SemanticsError> {
    let names: Vec<String> = atoms.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    for_each_valuation(f, &names, DEFAULT_VALUATION_CAP, |v| {
        out.push(v.clone());
        true
    })?;
    Ok(out)
}

/// Runs `verify` on every model over frames of class `c`, recording failing claims.
fn claim_battery(
    name: &str,
    frames: Vec<Frame>,
    mut verify: impl FnMut(&Model) -> Result<Option<ClaimReport>, ConstructionError>,
) -> Result<PropositionResult, SemanticsError> {
    let mut r = PropositionResult::new(name);
    for f in frames {
        for val in all_valuations(&f, &["p"])? {
            let m = Model { frame: f.clone(), val };
            match verify(&m) {
                Ok(Some(rep)) => {
                    r.checked += rep.values_checked;
                    if !rep.ok() {
                        r.fail(json!({"failures": rep.failures, "model": model_to_value(&m)}));
                    }
                }
                Ok(None) | Err(ConstructionError::Budget(_)) => r.vacuous += 1,
                Err(e) => r.fail(json!({"error": e.to_string(), "model": model_to_value(&m)})),
            }
        }
    }
    Ok(r.finish())
}

fn capped(b: &SizeBudget, states: usize) -> SizeBudget {
    SizeBudget { max_states: b.max_states.min(states), ..*b }
}

/// Runs every property check within budget. An empty budget yields an empty report.
pub fn proposition_suite(b: &SizeBudget) -> Result<SuiteReport, SemanticsError> {
    let mut props = Vec::new();
    if b.is_empty() {
        return Ok(SuiteReport { seed: b.seed, propositions: props });
    }
    props.push(heredity(b)?);
    let battery: [(&[&str], FrameClass); 5] = [
        (&["A1", "A2", "A3", "A4", "A5"], FrameClass::All),
        (&["A6"], FrameClass::Doxastic),
        (&["A7"], FrameClass::Epistemic),
        (&["A8", "A9", "A10", "A11"], FrameClass::Ud),
        (&["A12", "A13"], FrameClass::Prestandard),
    ];
    for (ids, c) in battery {
        for id in ids {
            props.push(check_schema_on_class(id, c, b)?);
        }
    }
    for (ids, c) in battery.into_iter().skip(1) {
        for id in ids {
            props.push(refute_schema_outside(id, c, FrameClass::All, b)?);
        }
    }
    let frames = rule_frames(b);
    for rule in [Rule::R1, Rule::R2, Rule::R3] {
        let rr = check_rule(rule, &frames)?;
        let mut p = PropositionResult::new(format!("{rule:?} preserves validity"));
        p.checked = rr.premise_valid;
        p.vacuous = rr.instances - rr.premise_valid;
        for w in rr.failures {
            p.fail(w);
        }
        props.push(p.finish());
    }
    let depth = b.max_formula_depth.min(2);
    let atoms = ["p"];
    let small = capped(b, 2);
    for variant in [PiVariant::Default, PiVariant::Partition] {
        let c = if variant == PiVariant::Default { FrameClass::Prestandard } else { FrameClass::Partition };
        let frames: Vec<Frame> =
            enumerate_frames(&small, c).into_iter().filter(|f| has_class(f, FrameClass::Prestandard)).collect();
        props.push(claim_battery(&format!("standardize ({variant:?})"), frames, |m| {
            verify_standardize(m, variant, ConstructionBudget::STANDARDIZE, &atoms, depth).map(Some)
        })?);
    }
    props.push(claim_battery("transitive lift", enumerate_frames(b, FrameClass::All), |m| {
        Ok(Some(verify_transitive_lift(m, &atoms, depth)))
    })?);
    props.push(claim_battery("rs collapse", enumerate_frames(b, FrameClass::Ud), |m| verify_rs_collapse(m, &atoms, depth).map(Some))?);
    for variant in [PartitionVariant::Plain, PartitionVariant::Prestandard] {
        let mut frames = enumerate_frames(b, FrameClass::Rs);
        if variant == PartitionVariant::Prestandard {
            frames.retain(|f| has_class(f, FrameClass::Prestandard));
        }
        props.push(claim_battery(&format!("partition lift ({variant:?})"), frames, |m| {
            verify_partition_lift(m, variant, ConstructionBudget::PARTITION_LIFT, &atoms, depth).map(Some)
        })?);
    }
    let mono_budget = SizeBudget { max_agents: 1, ..*b };
    let ag = AgentSet::standard(b.max_agents.clamp(1, 2));
    props.push(claim_battery("expand mono", enumerate_frames(&mono_budget, FrameClass::Doxastic), |m| {
        let s = MonoStructure { names: m.frame.names.clone(), leq: m.frame.leq.clone(), r: m.frame.rel[0].clone() };
        if !is_iel_structure(&s, IelKind::Minus) {
            return Ok(None);
        }
        verify_expand_mono(&MonoModel { structure: s, val: m.val.clone() }, &ag, &atoms, depth).map(Some)
    })?);
    props.push(claim_battery("collapse mono", enumerate_frames(b, FrameClass::Doxastic), |m| {
        let mut total = ClaimReport::default();
        for g in m.frame.agents.groups() {
            let rep = verify_collapse_mono(m, g, &atoms, depth)?;
            total.values_checked += rep.values_checked;
            total.failures.extend(rep.failures);
        }
        Ok(Some(total))
    })?);
    Ok(SuiteReport { seed: b.seed, propositions: props })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_budget_gives_empty_report() {
        let b = SizeBudget { max_states: 0, ..SizeBudget::default() };
        assert!(proposition_suite(&b).unwrap().propositions.is_empty());
    }

    #[test]
    fn a7_fails_on_all_frames() {
        let b = SizeBudget { max_states: 2, max_agents: 1, ..SizeBudget::default() };
        let r = check_schema_on_class("A7", FrameClass::All, &b).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(!r.witnesses.is_empty());
        assert_eq!(check_schema_on_class("A7", FrameClass::Epistemic, &b).unwrap().status, Status::Pass);
    }

    #[test]
    fn instances_cover_group_pairs() {
        let ag = AgentSet::standard(2);
        assert_eq!(schema_instances("A3", &ag).len(), 3);
        assert_eq!(schema_instances("A12", &ag).len(), 9);
        assert_eq!(schema_instances("IPL1", &ag).len(), 1);
    }
}
