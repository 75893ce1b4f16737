use ieml::bitset::{Rel, StateSet};
use ieml::classes::{classify, has_class, is_iel_structure, FrameClass, IelKind};
use ieml::closure::FormulaSpace;
use ieml::constructions::*;
use ieml::search::{enumerate_frames, SizeBudget};
use ieml::semantics::{satisfies, Frame, Model, MonoModel, MonoStructure, Valuation};
use ieml::syntax::{parse, AgentSet, Group};

fn model(f: Frame, p: &[usize]) -> Model {
    let n = f.size();
    Model::new(f, Valuation::from([("p".to_string(), StateSet::from_states(n, p.iter().copied()))])).unwrap()
}

fn one_point(k: usize, r: Rel) -> Frame {
    Frame::from_fn(AgentSet::standard(k), Rel::identity(1), |_| r.clone()).unwrap()
}

/// `R′(α)` straight from its two conditions, over decoded labels.
fn standard_rel_oracle(m: &Model, variant: PiVariant, ff: &FiberedFrame, alpha: Group, s: usize, s2: usize) -> bool {
    let f = &m.frame;
    let pi = PiTable::new(f, variant);
    let (t, gf) = ff.split(s);
    let (u, hf) = ff.split(s2);
    let (g, h) = (IFunction::of_fibre(ff, gf), IFunction::of_fibre(ff, hf));
    f.agents.groups().all(|gamma| {
        let agree = (0..f.agents.len()).all(|a| !(alpha.contains(a) && gamma.contains(a)) || g.get(gamma, a) == h.get(gamma, a));
        let sum = gamma.members().fold(0, |acc, a| acc ^ g.get(gamma, a) ^ h.get(gamma, a));
        agree && sum == pi.mask(gamma, t, u)
    })
}

fn small_prestandard(max_states: usize, max_agents: usize) -> Vec<Frame> {
    let b = SizeBudget { max_states, max_agents, ..SizeBudget::default() };
    enumerate_frames(&b, FrameClass::Prestandard).into_iter().filter(|f| has_class(f, FrameClass::Prestandard)).collect()
}

#[test]
fn standardize_one_point() {
    let m = model(one_point(1, Rel::identity(1)), &[0]);
    let out = standardize(&m, PiVariant::Default, ConstructionBudget::STANDARDIZE).unwrap();
    assert_eq!(out.frame.size(), 2);
    let f = out.frame.materialize();
    assert!(has_class(&f, FrameClass::Standard));
}

#[test]
fn standardize_matches_its_definition() {
    let frames: Vec<Frame> =
        small_prestandard(2, 1).into_iter().chain(small_prestandard(1, 2).into_iter().filter(|f| f.agents.len() == 2)).collect();
    assert!(frames.len() > 20);
    for f in frames {
        for variant in [PiVariant::Default, PiVariant::Partition] {
            if variant == PiVariant::Partition && !has_class(&f, FrameClass::Partition) {
                continue;
            }
            let m = model(f.clone(), &[]);
            let out = standardize(&m, variant, ConstructionBudget::STANDARDIZE).unwrap();
            let ff = &out.frame;
            let mat = ff.materialize();
            for alpha in f.agents.groups() {
                for s in 0..ff.size() {
                    for s2 in 0..ff.size() {
                        assert_eq!(mat.rel(alpha).contains(s, s2), standard_rel_oracle(&m, variant, ff, alpha, s, s2));
                    }
                }
            }
            for c in FrameClass::ALL {
                assert_eq!(ff.has_class(c), has_class(&mat, c), "{c} on {f:?}");
            }
            assert!(has_class(&mat, FrameClass::Standard));
        }
    }
}

#[test]
fn standardized_satisfaction_agrees_with_materialization() {
    for f in small_prestandard(2, 1) {
        let n = f.size();
        for mask in 0..(1u64 << n) {
            let x = StateSet::from_mask(n, mask);
            if !f.is_up_closed(&x) {
                continue;
            }
            let m = model(f.clone(), &x.iter().collect::<Vec<_>>());
            let out = standardize(&m, PiVariant::Default, ConstructionBudget::STANDARDIZE).unwrap();
            let mat = out.materialize();
            for a in FormulaSpace::new(["p"], f.agents.groups()).formulas(2) {
                for s in 0..mat.frame.size() {
                    let (t, _) = out.frame.split(s);
                    assert_eq!(satisfies(&m, t, &a), satisfies(&mat, s, &a));
                }
            }
        }
    }
}

#[test]
fn standardize_preconditions() {
    let ag = AgentSet::standard(2);
    let a = ag.group(&["a"]).unwrap();
    let f = Frame::from_fn(ag, Rel::identity(1), |g| if g == a { Rel::empty(1) } else { Rel::identity(1) }).unwrap();
    assert!(!has_class(&f, FrameClass::Prestandard));
    let m = model(f, &[]);
    assert!(matches!(standardize(&m, PiVariant::Default, ConstructionBudget::STANDARDIZE), Err(ConstructionError::Precondition(_))));
    let big = model(Frame::from_fn(AgentSet::standard(1), Rel::identity(3), |_| Rel::identity(3)).unwrap(), &[]);
    assert!(matches!(standardize(&big, PiVariant::Default, ConstructionBudget::STANDARDIZE), Err(ConstructionError::Budget(_))));
    let chain = model(Frame::from_fn(AgentSet::standard(1), Rel::from_pairs(2, [(0, 0), (0, 1), (1, 1)]), |_| Rel::empty(2)).unwrap(), &[]);
    assert!(matches!(standardize(&chain, PiVariant::Partition, ConstructionBudget::STANDARDIZE), Err(ConstructionError::Precondition(_))));
}

#[test]
fn witness_h_cases() {
    let m = model(one_point(1, Rel::identity(1)), &[]);
    let out = standardize(&m, PiVariant::Default, ConstructionBudget::STANDARDIZE).unwrap();
    let alpha = Group::from_index(0);
    for fibre in 0..out.frame.fibre_count() {
        let g = IFunction::of_fibre(&out.frame, fibre);
        let h = witness_h(&m, PiVariant::Default, alpha, 0, 0, &g).unwrap();
        assert_eq!(h, g);
    }
    for f in small_prestandard(2, 2).into_iter().filter(|f| f.agents.len() == 2 && f.size() == 1) {
        let m = model(f.clone(), &[]);
        let out = standardize(&m, PiVariant::Default, ConstructionBudget::STANDARDIZE).unwrap();
        let ff = &out.frame;
        for alpha in f.agents.groups() {
            for (t, u) in f.rel(alpha).pairs() {
                for fibre in 0..ff.fibre_count() {
                    let g = IFunction::of_fibre(ff, fibre);
                    let h = witness_h(&m, PiVariant::Default, alpha, t, u, &g).unwrap();
                    for beta in f.agents.groups() {
                        for a in (0..2).filter(|&a| !beta.contains(a)) {
                            assert_eq!(h.get(beta, a), 0);
                        }
                    }
                    let s2 = ff.state(u, h.fibre(ff));
                    assert!(standard_rel_oracle(&m, PiVariant::Default, ff, alpha, ff.state(t, fibre), s2));
                }
            }
            if let Some((t, u)) = (0..f.size()).flat_map(|t| (0..f.size()).map(move |u| (t, u))).find(|&(t, u)| !f.rel(alpha).contains(t, u)) {
                let g = IFunction::of_fibre(ff, 0);
                assert!(witness_h(&m, PiVariant::Default, alpha, t, u, &g).is_err());
            }
        }
    }
}

#[test]
fn transitive_lift_examples() {
    let empty = model(Frame::from_fn(AgentSet::standard(2), Rel::identity(2), |_| Rel::empty(2)).unwrap(), &[1]);
    let out = transitive_lift(&empty);
    assert!(out.frame.rel.iter().all(Rel::is_empty));
    assert!(has_class(&out.frame, FrameClass::Transitive));

    let m = model(one_point(1, Rel::identity(1)), &[]);
    let out = transitive_lift(&m);
    assert_eq!(out.frame.rel[0], Rel::from_pairs(2, [(0, 1)]));
    assert!(has_class(&out.frame, FrameClass::Transitive));
    let top = parse("<a>T", &m.frame.agents).unwrap();
    assert_eq!(satisfies(&m, 0, &top), satisfies(&out, 0, &top));
}

#[test]
fn transitive_lift_over_small_models() {
    let b = SizeBudget { max_states: 2, max_agents: 1, ..SizeBudget::default() };
    for f in enumerate_frames(&b, FrameClass::All) {
        let m = model(f.clone(), &[]);
        let out = transitive_lift(&m);
        for a in FormulaSpace::new(["p"], f.agents.groups()).formulas(2) {
            for t in 0..f.size() {
                let want = satisfies(&m, t, &a);
                assert_eq!(satisfies(&out, 2 * t, &a), want);
                assert_eq!(satisfies(&out, 2 * t + 1, &a), want);
            }
        }
    }
}

#[test]
fn rs_collapse_examples() {
    let b = SizeBudget { max_states: 3, max_agents: 1, ..SizeBudget::default() };
    let mut seen = 0;
    for f in enumerate_frames(&b, FrameClass::Ud) {
        let m = model(f.clone(), &[]);
        let out = rs_collapse(&m).unwrap();
        assert!(has_class(&out.frame, FrameClass::Rs));
        assert!(f.rel(Group::from_index(0)).is_subset(out.frame.rel(Group::from_index(0))));
        seen += 1;
    }
    assert!(seen > 0);
    let not_ud = model(one_point(1, Rel::empty(1)), &[]);
    assert!(matches!(rs_collapse(&not_ud), Err(ConstructionError::Precondition(_))));
}

#[test]
fn partition_lift_examples() {
    let m = model(one_point(1, Rel::identity(1)), &[0]);
    let out = partition_lift(&m, PartitionVariant::Plain, ConstructionBudget::PARTITION_LIFT).unwrap();
    assert_eq!(out.frame.size(), 1);
    assert_eq!(out.materialize().frame.rel, m.frame.rel);

    let two = model(Frame::from_fn(AgentSet::standard(1), Rel::identity(2), |_| Rel::total(2)).unwrap(), &[0]);
    for variant in [PartitionVariant::Plain, PartitionVariant::Prestandard] {
        let out = partition_lift(&two, variant, ConstructionBudget::PARTITION_LIFT).unwrap();
        assert!(has_class(&out.materialize().frame, FrameClass::Partition));
        let (h, i) = partition_witness(&two, variant, Group::from_index(0), 0, 0, 1).unwrap();
        assert_eq!(h.get(0, Group::from_index(0)), 1);
        assert_eq!(i.get(1, Group::from_index(0)), 0);
        assert_eq!(h.get(1, Group::from_index(0)), 1);
    }
    let not_rs = model(one_point(1, Rel::empty(1)), &[]);
    assert!(partition_lift(&not_rs, PartitionVariant::Plain, ConstructionBudget::PARTITION_LIFT).is_err());
}

#[test]
fn prestandard_partition_lift_needs_prestandard_input() {
    let ag = AgentSet::standard(2);
    let ab = ag.full_group();
    let f = Frame::from_fn(ag, Rel::identity(2), |g| if g == ab { Rel::total(2) } else { Rel::identity(2) }).unwrap();
    assert!(has_class(&f, FrameClass::Rs) && !has_class(&f, FrameClass::Prestandard));
    let m = model(f, &[0]);
    assert!(partition_lift(&m, PartitionVariant::Prestandard, ConstructionBudget::PARTITION_LIFT).is_ok());
    let r = verify_partition_lift(&m, PartitionVariant::Prestandard, ConstructionBudget::PARTITION_LIFT, &["p"], 2);
    assert!(matches!(r, Err(ConstructionError::Precondition(_))));
    assert!(partition_witness(&m, PartitionVariant::Prestandard, ab, 0, 0, 1).is_err());
    assert!(verify_partition_lift(&m, PartitionVariant::Plain, ConstructionBudget::PARTITION_LIFT, &["p"], 2).unwrap().ok());
}

#[test]
fn mono_examples() {
    let s = MonoStructure::new(Rel::identity(1), Rel::identity(1)).unwrap();
    assert!(is_iel_structure(&s, IelKind::Full));
    let mm = MonoModel::new(s, Valuation::new()).unwrap();
    let out = expand_mono(&mm, &AgentSet::standard(2)).unwrap();
    assert_eq!(out.frame.size(), 1);
    let tags = classify(&out.frame);
    assert!(tags.contains(&FrameClass::Doxastic) && tags.contains(&FrameClass::Standard));

    let bad = MonoStructure::new(Rel::from_pairs(2, [(0, 0), (0, 1), (1, 1)]), Rel::from_pairs(2, [(1, 0)])).unwrap();
    assert!(!is_iel_structure(&bad, IelKind::Minus));
    assert!(expand_mono(&MonoModel::new(bad, Valuation::new()).unwrap(), &AgentSet::standard(1)).is_err());

    let back = collapse_mono(&out, Group::from_index(2)).unwrap();
    assert!(is_iel_structure(&back.structure, IelKind::Full));
    let chain = Frame::from_fn(AgentSet::standard(1), Rel::from_pairs(2, [(0, 0), (0, 1), (1, 1)]), |_| Rel::from_pairs(2, [(1, 0)])).unwrap();
    assert!(collapse_mono(&model(chain, &[]), Group::from_index(0)).is_err());
}
