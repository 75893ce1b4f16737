//! Canonical printing with minimal parentheses.

use super::{AgentSet, BoxFormula, Formula, Group};

const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(_, b) if **b == Formula::Bot => UNARY,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write(f: &Formula, min: u8, group: &dyn Fn(Group) -> String, out: &mut String) {
    let paren = prec(f) < min;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Top => out.push('T'),
        Formula::Bot => out.push('F'),
        Formula::Implies(a, b) if **b == Formula::Bot => {
            out.push('~');
            write(a, UNARY, group, out);
        }
        Formula::Implies(a, b) => {
            write(a, OR, group, out);
            out.push_str(" -> ");
            write(b, IMP, group, out);
        }
        Formula::Or(a, b) => {
            write(a, OR, group, out);
            out.push_str(" \\/ ");
            write(b, AND, group, out);
        }
        Formula::And(a, b) => {
            write(a, AND, group, out);
            out.push_str(" /\\ ");
            write(b, UNARY, group, out);
        }
        Formula::Box(g, a) => {
            out.push('[');
            out.push_str(&group(*g));
            out.push(']');
            write(a, UNARY, group, out);
        }
        Formula::Dia(g, a) => {
            out.push('<');
            out.push_str(&group(*g));
            out.push('>');
            write(a, UNARY, group, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Renders `f` with groups printed through `group`.
pub fn render_with(f: &Formula, group: &dyn Fn(Group) -> String) -> String {
    let mut out = String::new();
    write(f, IMP, group, &mut out);
    out
}

/// Canonical text of `f`; groups list their agents in canonical order.
pub fn render(f: &Formula, agents: &AgentSet) -> String {
    render_with(f, &|g| agents.group_key(g))
}

/// Renders a mono-modal formula, writing the box as `[]`.
pub fn render_box(f: &BoxFormula) -> String {
    render_with(&f.label(Group::from_mask(1).unwrap()), &|_| String::new())
}
