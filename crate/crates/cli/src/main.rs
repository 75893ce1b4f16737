use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use ieml::classes::{classify, FrameClass};
use ieml::constructions::{
    collapse_mono, expand_mono, partition_lift, rs_collapse, standardize, transitive_lift, ConstructionBudget, ConstructionError,
    FiberedModel, PartitionVariant, PiVariant,
};
use ieml::proofs::{check_derivation, soundness_probe, Derivation, LogicId};
use ieml::search::{countermodel, proposition_suite, SizeBudget, Status};
use ieml::semantics::{
    falsifying_valuation, frame_from_json, model_from_json, model_to_json, model_to_value, satisfies_variant, Frame, LoadOptions,
    Model, MonoModel, MonoStructure, Variant, DEFAULT_VALUATION_CAP,
};
use ieml::syntax::{parse, parse_inferring_agents, render, AgentSet, Formula};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Workbench for intuitionistic multi-agent epistemic logic with distributed knowledge.
#[derive(Parser)]
#[command(name = "ieml", version)]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a formula.
    Parse {
        formula: String,
        /// Comma-separated agents; inferred from the formula when omitted.
        #[arg(long)]
        agents: Option<String>,
    },
    /// Decide whether a state of a model satisfies a formula.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: String,
        formula: String,
        #[arg(long, value_enum, default_value_t = Semantics::Prenosil)]
        semantics: Semantics,
        #[command(flatten)]
        load: Load,
    },
    /// Decide whether a formula is valid on a frame.
    Valid {
        #[arg(long)]
        frame: PathBuf,
        formula: String,
        #[command(flatten)]
        load: Load,
    },
    /// List the classes a frame belongs to.
    Classify {
        #[arg(long)]
        frame: PathBuf,
        #[command(flatten)]
        load: Load,
    },
    /// Transform a model and write the result.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `default` or `partition` for standardize; `plain` or `prestandard` for partlift.
        #[arg(long)]
        variant: Option<String>,
        /// Agents of the expanded model, comma-separated.
        #[arg(long, default_value = "a,b")]
        agents: String,
        /// Group kept by collapsemono, comma-separated; all agents when omitted.
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        load: Load,
    },
    /// Check a derivation and print its certificate or its first error.
    Prove {
        #[arg(long)]
        logic: LogicId,
        #[arg(long)]
        derivation: PathBuf,
        /// Also search the logic's frames for a countermodel to the theorem.
        #[arg(long)]
        probe: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Search a frame class for a model falsifying a formula.
    Countermodel {
        #[arg(long)]
        class: FrameClass,
        formula: String,
        #[arg(long)]
        agents: Option<String>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Run every property check within budget.
    Suite {
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Args)]
struct Load {
    /// Replace the preorder by its reflexive-transitive closure.
    #[arg(long)]
    close_leq: bool,
    /// Derive group relations as intersections of the members' relations.
    #[arg(long)]
    complete: bool,
}

impl Load {
    fn options(&self) -> LoadOptions {
        LoadOptions { close_leq: self.close_leq, complete_by_intersection: self.complete }
    }
}

#[derive(Args)]
struct Budget {
    #[arg(long, env = "IEML_BUDGET_MAX_STATES")]
    max_states: Option<usize>,
    #[arg(long, env = "IEML_BUDGET_MAX_AGENTS")]
    max_agents: Option<usize>,
    #[arg(long, env = "IEML_BUDGET_MAX_FORMULA_DEPTH")]
    max_formula_depth: Option<usize>,
    #[arg(long, env = "IEML_BUDGET_MAX_CANDIDATES")]
    max_candidates: Option<usize>,
    #[arg(long, env = "IEML_BUDGET_SEED")]
    seed: Option<u64>,
}

impl Budget {
    fn resolve(&self) -> SizeBudget {
        let d = SizeBudget::default();
        SizeBudget {
            max_states: self.max_states.unwrap_or(d.max_states),
            max_agents: self.max_agents.unwrap_or(d.max_agents),
            max_formula_depth: self.max_formula_depth.unwrap_or(d.max_formula_depth),
            max_candidates: self.max_candidates.unwrap_or(d.max_candidates),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Prenosil,
    FischerServi,
    Wijesekera,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Standardize,
    Translift,
    Rscollapse,
    Partlift,
    Expandmono,
    Collapsemono,
}

/// Exit codes: a computed verdict, a negative verdict, an operational failure.
const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const FAILURE: u8 = 2;

type Outcome = Result<u8, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(FAILURE)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Parse { formula, agents } => {
            let (ag, f) = formula_with(formula, agents.as_deref())?;
            let text = render(&f, &ag);
            emit(json, json!({"formula": text, "agents": ag.names(), "depth": f.depth()}), &text);
            Ok(OK)
        }
        Command::Eval { model, state, formula, semantics, load } => {
            let m = model_from_json(&read(model)?, load.options()).map_err(err)?;
            let s = m.frame.state_index(state).ok_or_else(|| format!("unknown state {state:?}"))?;
            let f = parse(formula, &m.frame.agents).map_err(err)?;
            let variant = match semantics {
                Semantics::Prenosil => Variant::Prenosil,
                Semantics::FischerServi => Variant::FischerServi,
                Semantics::Wijesekera => Variant::Wijesekera,
            };
            let v = satisfies_variant(&m, s, &f, variant).map_err(err)?;
            emit(json, json!({"state": state, "formula": render(&f, &m.frame.agents), "value": v}), &v.to_string());
            Ok(OK)
        }
        Command::Valid { frame, formula, load } => {
            let fr = frame_from_json(&read(frame)?, load.options()).map_err(err)?;
            let f = parse(formula, &fr.agents).map_err(err)?;
            match falsifying_valuation(&fr, &f, DEFAULT_VALUATION_CAP).map_err(err)? {
                None => {
                    emit(json, json!({"valid": true}), "valid");
                    Ok(OK)
                }
                Some((val, s)) => {
                    let m = Model { frame: fr, val };
                    let w = witness(&m, s);
                    emit(json, json!({"valid": false, "witness": w}), &format!("invalid\n{}", pretty(&w)));
                    Ok(NEGATIVE)
                }
            }
        }
        Command::Classify { frame, load } => {
            let fr = frame_from_json(&read(frame)?, load.options()).map_err(err)?;
            let tags: Vec<&str> = classify(&fr).into_iter().map(FrameClass::tag).collect();
            emit(json, json!(tags), &tags.join(" "));
            Ok(OK)
        }
        Command::Construct { kind, input, out, variant, agents, group, limits, load } => {
            let m = model_from_json(&read(input)?, load.options()).map_err(err)?;
            let result = construct(*kind, &m, variant.as_deref(), agents, group.as_deref(), limits)?;
            std::fs::write(out, model_to_json(&result)).map_err(|e| format!("{}: {e}", out.display()))?;
            let tags: Vec<&str> = classify(&result.frame).into_iter().map(FrameClass::tag).collect();
            let text = format!("wrote {} states to {}\nclasses: {}", result.frame.size(), out.display(), tags.join(" "));
            emit(json, json!({"states": result.frame.size(), "out": out, "classes": tags}), &text);
            Ok(OK)
        }
        Command::Prove { logic, derivation, probe, budget } => {
            let text = read(derivation)?;
            let d = Derivation::from_json(&text).map_err(|e| format!("{}: {e}", derivation.display()))?;
            let cert = match check_derivation(&d, *logic) {
                Ok(c) => c,
                Err(r) => {
                    emit(json, json!({"accepted": false, "rejection": r}), &format!("rejected: {r}"));
                    return Ok(NEGATIVE);
                }
            };
            let mut doc = json!({"accepted": true, "certificate": cert});
            let mut lines = vec![format!("accepted in {}: {}", cert.logic, cert.theorem)];
            for l in &cert.lines {
                let ev: Vec<String> = l.evidence.iter().map(|(k, v)| format!("{k}={v}")).collect();
                lines.push(format!("{:>4}. {}    [{}{}{}]", l.line, l.formula, l.rule, if ev.is_empty() { "" } else { " " }, ev.join(", ")));
            }
            let mut code = OK;
            if *probe {
                let b = budget.resolve();
                let report = soundness_probe(&cert.theorem_formula(), &cert.agent_set(), *logic, &b).map_err(err)?;
                let cm = report.countermodel.as_ref().map(|(m, s)| witness(m, *s));
                if cm.is_some() {
                    code = NEGATIVE;
                }
                lines.push(match &cm {
                    None => format!("probe: no countermodel on {} frames", report.frames_checked),
                    Some(w) => format!("probe: countermodel found\n{}", pretty(w)),
                });
                doc["probe"] = json!({"frames_checked": report.frames_checked, "countermodel": cm});
            }
            emit(json, doc, &lines.join("\n"));
            Ok(code)
        }
        Command::Countermodel { class, formula, agents, budget } => {
            let (ag, f) = formula_with(formula, agents.as_deref())?;
            let b = budget.resolve();
            if b.is_empty() {
                return Err("empty budget".into());
            }
            match countermodel(&f, &ag, *class, &b).map_err(err)? {
                None => {
                    emit(json, json!({"found": false}), "none within budget");
                    Ok(OK)
                }
                Some((m, s)) => {
                    let w = witness(&m, s);
                    emit(json, json!({"found": true, "witness": w}), &pretty(&w));
                    Ok(NEGATIVE)
                }
            }
        }
        Command::Suite { budget } => {
            let b = budget.resolve();
            let report = proposition_suite(&b).map_err(err)?;
            let mut lines = Vec::new();
            for p in &report.propositions {
                let status = match p.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Vacuous => "vacuous",
                };
                lines.push(format!("{status:<8} {:<36} checked={} skipped={}", p.name, p.checked, p.vacuous));
                for w in &p.witnesses {
                    lines.push(format!("         witness: {w}"));
                }
            }
            emit(json, serde_json::to_value(&report).expect("serializable"), &lines.join("\n"));
            Ok(if report.all_pass() { OK } else { NEGATIVE })
        }
    }
}

/// Size limits for the product constructions. Unset input limits keep each construction's default.
#[derive(Args)]
struct Limits {
    /// Largest input frame accepted by standardize and partlift.
    #[arg(long, env = "IEML_BUDGET_MAX_INPUT_STATES")]
    max_input_states: Option<usize>,
    /// Most agents accepted by standardize and partlift.
    #[arg(long, env = "IEML_BUDGET_MAX_INPUT_AGENTS")]
    max_input_agents: Option<usize>,
    /// Largest model written.
    #[arg(long, env = "IEML_BUDGET_MAX_OUTPUT_STATES", default_value_t = 4096)]
    max_output_states: usize,
}

impl Limits {
    fn apply(&self, b: ConstructionBudget) -> ConstructionBudget {
        ConstructionBudget {
            max_base_states: self.max_input_states.unwrap_or(b.max_base_states),
            max_agents: self.max_input_agents.unwrap_or(b.max_agents),
            max_states: b.max_states.max(self.max_output_states),
        }
    }
}

fn construct(kind: Kind, m: &Model, variant: Option<&str>, agents: &str, group: Option<&str>, limits: &Limits) -> Result<Model, String> {
    let max_out = limits.max_output_states;
    let fits = |states: usize| {
        if states > max_out {
            Err(format!("budget exceeded: output has {states} states (limit {max_out})"))
        } else {
            Ok(())
        }
    };
    let fibered = |r: Result<FiberedModel, ConstructionError>| -> Result<Model, String> {
        let fm = r.map_err(err)?;
        fits(fm.frame.size())?;
        Ok(fm.materialize())
    };
    let out = match kind {
        Kind::Standardize => {
            let v = match variant.unwrap_or("default") {
                "default" => PiVariant::Default,
                "partition" => PiVariant::Partition,
                other => return Err(format!("unknown standardize variant {other:?}")),
            };
            fibered(standardize(m, v, limits.apply(ConstructionBudget::STANDARDIZE)))?
        }
        Kind::Partlift => {
            let v = match variant.unwrap_or("plain") {
                "plain" => PartitionVariant::Plain,
                "prestandard" => PartitionVariant::Prestandard,
                other => return Err(format!("unknown partlift variant {other:?}")),
            };
            fibered(partition_lift(m, v, limits.apply(ConstructionBudget::PARTITION_LIFT)))?
        }
        Kind::Translift => transitive_lift(m),
        Kind::Rscollapse => rs_collapse(m).map_err(err)?,
        Kind::Expandmono => {
            let mono = as_mono(m)?;
            let ag = agent_list(agents)?;
            expand_mono(&mono, &ag).map_err(err)?
        }
        Kind::Collapsemono => {
            let g = match group {
                Some(text) => m.frame.agents.group(&split_names(text)).map_err(err)?,
                None => m.frame.agents.full_group(),
            };
            let mono = collapse_mono(m, g).map_err(err)?;
            from_mono(&mono)
        }
    };
    fits(out.frame.size())?;
    Ok(out)
}

/// Mono structures travel as one-agent model documents.
fn as_mono(m: &Model) -> Result<MonoModel, String> {
    if m.frame.agents.len() != 1 {
        return Err("a mono structure is a model with exactly one agent".into());
    }
    let s = MonoStructure { names: m.frame.names.clone(), leq: m.frame.leq.clone(), r: m.frame.rel[0].clone() };
    MonoModel::new(s, m.val.clone()).map_err(err)
}

fn from_mono(m: &MonoModel) -> Model {
    let s = &m.structure;
    let frame = Frame { agents: AgentSet::standard(1), names: s.names.clone(), leq: s.leq.clone(), rel: vec![s.r.clone()] };
    Model { frame, val: m.val.clone() }
}

fn split_names(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn agent_list(text: &str) -> Result<AgentSet, String> {
    AgentSet::new(split_names(text)).map_err(err)
}

fn formula_with(text: &str, agents: Option<&str>) -> Result<(AgentSet, Formula), String> {
    match agents {
        Some(a) => {
            let ag = agent_list(a)?;
            let f = parse(text, &ag).map_err(err)?;
            Ok((ag, f))
        }
        None => parse_inferring_agents(text).map_err(err),
    }
}

fn witness(m: &Model, s: usize) -> Value {
    json!({"state": m.frame.names[s], "model": model_to_value(m)})
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Writes the result; a closed pipe downstream is not an error.
fn emit(json: bool, doc: Value, text: &str) {
    let body = if json { serde_json::to_string(&doc).expect("serializable") } else { text.to_string() };
    let _ = writeln!(std::io::stdout().lock(), "{body}");
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}
