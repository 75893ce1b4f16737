//! Formulas over a finite agent set: representation, parsing, printing,
//! subformulas, the mono-modal translation, substitution and schema matching.

mod agents;
mod formula;
mod parser;
mod render;
mod schema;

pub use agents::{AgentSet, Group, MAX_AGENTS};
pub use formula::{BoxFormula, Formula, Substitution};
pub use parser::{parse, parse_inferring_agents};
pub use render::{render, render_box, render_with};
pub use schema::{describe_bindings, Bindings, Schema};

pub(crate) use agents::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("syntax error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("{0}")]
    Agents(String),
    #[error("formula is not diamond-free")]
    NotDiamondFree,
    #[error("group metavariable {0} is unbound")]
    Unbound(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> AgentSet {
        AgentSet::standard(2)
    }

    fn p(s: &str) -> Formula {
        parse(s, &ab()).unwrap()
    }

    #[test]
    fn constants_and_negation() {
        assert_eq!(p("T"), Formula::Top);
        assert_eq!(p("~p"), Formula::not(Formula::atom("p")));
        assert_eq!(render(&p("~p"), &ab()), "~p");
        assert_eq!(render(&p("p -> F"), &ab()), "~p");
    }

    #[test]
    fn precedence_and_associativity() {
        let f = p("p -> q -> r");
        assert_eq!(f, Formula::implies(Formula::atom("p"), Formula::implies(Formula::atom("q"), Formula::atom("r"))));
        let g = p("p \\/ q /\\ r");
        assert_eq!(g, Formula::or(Formula::atom("p"), Formula::and(Formula::atom("q"), Formula::atom("r"))));
        assert_eq!(render(&p("(p /\\ q) /\\ r"), &ab()), "p /\\ q /\\ r");
        assert_eq!(render(&p("p /\\ (q /\\ r)"), &ab()), "p /\\ (q /\\ r)");
        assert_eq!(render(&p("(p -> q) -> r"), &ab()), "(p -> q) -> r");
        assert_eq!(render(&p("~(p \\/ q)"), &ab()), "~(p \\/ q)");
    }

    #[test]
    fn iff_is_desugared() {
        let f = p("p <-> q");
        assert_eq!(f, Formula::iff(Formula::atom("p"), Formula::atom("q")));
        assert_eq!(render(&f, &ab()), "(p -> q) /\\ (q -> p)");
    }

    #[test]
    fn groups_render_in_canonical_order() {
        let f = p("[b,a]p");
        assert_eq!(render(&f, &ab()), "[a,b]p");
        assert_eq!(f, Formula::boxed(ab().full_group(), Formula::atom("p")));
    }

    #[test]
    fn a5_shape() {
        let f = p("[a](p \\/ q) -> ((<a>p -> [a]q) -> [a]q)");
        assert_eq!(render(&f, &ab()), "[a](p \\/ q) -> (<a>p -> [a]q) -> [a]q");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("p ->", &ab()), Err(SyntaxError::Parse { pos: 4, .. })));
        assert!(matches!(parse("p & q", &ab()), Err(SyntaxError::Parse { pos: 2, .. })));
        assert_eq!(parse("[c]p", &ab()), Err(SyntaxError::UnknownAgent("c".into())));
        assert!(parse("(p", &ab()).is_err());
        assert!(parse("Tx", &ab()).is_err());
    }

    #[test]
    fn inferred_agents_are_sorted() {
        let (ag, f) = parse_inferring_agents("[zed]p -> <bob,zed>p").unwrap();
        assert_eq!(ag.names(), &["bob".to_string(), "zed".to_string()]);
        assert_eq!(render(&f, &ag), "[zed]p -> <bob,zed>p");
    }

    #[test]
    fn diamond_freeness() {
        assert!(p("[a]p").is_diamond_free());
        assert!(!p("[a][b]p").is_diamond_free());
        assert!(!p("<a>p").is_diamond_free());
        assert!(p("p -> q").is_diamond_free());
    }

    #[test]
    fn subformulas() {
        let set = |v: &[&str]| v.iter().map(|s| p(s)).collect::<std::collections::BTreeSet<_>>();
        assert_eq!(p("p").sf().unwrap(), set(&["p"]));
        assert_eq!(p("[a]p").sf().unwrap(), set(&["[a]p", "p"]));
        assert_eq!(p("p -> q").sf().unwrap(), set(&["p -> q", "p", "q"]));
        assert_eq!(p("<a>p").sf(), Err(SyntaxError::NotDiamondFree));
    }

    #[test]
    fn translation() {
        assert_eq!(render_box(&p("[a](p /\\ q)").tau().unwrap()), "[](p /\\ q)");
        assert_eq!(p("p").tau().unwrap(), BoxFormula::Atom("p".into()));
        assert_eq!(render_box(&p("[a][a]p").tau().unwrap()), "[][]p");
        assert!(p("[a]<a>p").tau().is_err());
    }

    #[test]
    fn substitution() {
        let mut s = Substitution::new();
        s.insert("p".into(), Formula::Bot);
        assert_eq!(p("p -> p").substitute(&s), p("F -> F"));
        assert_eq!(p("[a]q").substitute(&Substitution::new()), p("[a]q"));
    }

    #[test]
    fn schema_matching() {
        let a3 = Schema::from_text("A3", "[alpha]T").unwrap();
        assert_eq!(a3.render(), "[α]T");
        let b = a3.match_instance(&p("[a,b]T")).unwrap();
        assert_eq!(b.alpha, Some(ab().full_group()));
        assert!(a3.match_instance(&p("[a]p")).is_none());

        let a12 = Schema::from_text("A12", "[alpha]p \\/ [beta]p -> [alpha,beta]p").unwrap();
        let b = a12.match_instance(&p("[a]p \\/ [b]p -> [a,b]p")).unwrap();
        assert_eq!(b.alpha, Some(ab().singleton(0)));
        assert_eq!(b.beta, Some(ab().singleton(1)));
        assert_eq!(b.subst.get("p"), Some(&p("p")));
        assert!(a12.match_instance(&p("[a]p \\/ [b]p -> [a]p")).is_none());

        let a13 = Schema::from_text("A13", "<alpha,beta>p -> <alpha>p /\\ <beta>p").unwrap();
        assert_eq!(a13.render(), "<α∪β>p -> <α>p /\\ <β>p");
        let f = p("<a,b>q -> <a,b>q /\\ <b>q");
        let b = a13.match_instance(&f).unwrap();
        assert_eq!((b.alpha, b.beta), (Some(ab().full_group()), Some(ab().singleton(1))));
        assert_eq!(a13.instantiate(&b).unwrap(), f);
    }

    #[test]
    fn schema_instantiation() {
        let a1 = Schema::from_text("A1", "[alpha]p /\\ [alpha]q -> [alpha](p /\\ q)").unwrap();
        let mut b = Bindings { alpha: Some(ab().singleton(0)), ..Default::default() };
        b.subst.insert("p".into(), Formula::Top);
        b.subst.insert("q".into(), Formula::Bot);
        assert_eq!(a1.instantiate(&b).unwrap(), p("[a]T /\\ [a]F -> [a](T /\\ F)"));
        assert_eq!(a1.instantiate(&Bindings::default()), Err(SyntaxError::Unbound("α".into())));
    }
}
