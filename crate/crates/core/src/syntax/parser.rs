//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! Precedence, loosest first: `<->`, `->` (right associative), `\/`, `/\`
//! (both left associative), then the prefix operators `~`, `[..]`, `<..>`.

use super::{AgentSet, Formula, Group, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Arrow,
    Iff,
    Or,
    And,
    Not,
    LBrack,
    RBrack,
    LAngle,
    RAngle,
    Comma,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Top => "'T'".into(),
        Tok::Bot => "'F'".into(),
        Tok::Arrow => "'->'".into(),
        Tok::Iff => "'<->'".into(),
        Tok::Or => "'\\/'".into(),
        Tok::And => "'/\\'".into(),
        Tok::Not => "'~'".into(),
        Tok::LBrack => "'['".into(),
        Tok::RBrack => "']'".into(),
        Tok::LAngle => "'<'".into(),
        Tok::RAngle => "'>'".into(),
        Tok::Comma => "','".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| SyntaxError::Parse { pos, msg: msg.to_string() };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let rest = &text[i..];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_') {
                    j += 1;
                }
                let name = text[i..j].to_string();
                i = j;
                out.push((start, Tok::Ident(name)));
                continue;
            }
            b'T' => Tok::Top,
            b'F' => Tok::Bot,
            b'~' => Tok::Not,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'>' => Tok::RAngle,
            b',' => Tok::Comma,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if rest.starts_with("->") => {
                i += 2;
                out.push((start, Tok::Arrow));
                continue;
            }
            b'<' if rest.starts_with("<->") => {
                i += 3;
                out.push((start, Tok::Iff));
                continue;
            }
            b'<' => Tok::LAngle,
            b'\\' if rest.starts_with("\\/") => {
                i += 2;
                out.push((start, Tok::Or));
                continue;
            }
            b'/' if rest.starts_with("/\\") => {
                i += 2;
                out.push((start, Tok::And));
                continue;
            }
            _ => {
                let ch = rest.chars().next().unwrap();
                return Err(err(start, &format!("unexpected character {ch:?}")));
            }
        };
        if matches!(tok, Tok::Top | Tok::Bot)
            && bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            return Err(err(start, "identifiers must start with a lowercase letter"));
        }
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

enum Agents<'a> {
    Fixed(&'a AgentSet),
    Collect(Vec<String>),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    agents: Agents<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: String) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse { pos: self.pos(), msg })
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {}, found {}", describe(&t), describe(self.peek())))
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let a = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let b = self.iff()?;
            return Ok(Formula::iff(a, b));
        }
        Ok(a)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let a = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let b = self.imp()?;
            return Ok(Formula::implies(a, b));
        }
        Ok(a)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut a = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            a = Formula::or(a, self.and()?);
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut a = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            a = Formula::and(a, self.unary()?);
        }
        Ok(a)
    }

    fn group(&mut self, close: Tok) -> Result<Group, SyntaxError> {
        let mut mask = 0u8;
        loop {
            let pos = self.pos();
            let name = match self.bump() {
                Tok::Ident(n) => n,
                t => return Err(SyntaxError::Parse { pos, msg: format!("expected agent name, found {}", describe(&t)) }),
            };
            let idx = match &mut self.agents {
                Agents::Fixed(ag) => ag.index_of(&name).ok_or(SyntaxError::UnknownAgent(name))?,
                Agents::Collect(names) => match names.iter().position(|n| *n == name) {
                    Some(i) => i,
                    None => {
                        if names.len() == super::MAX_AGENTS {
                            return Err(SyntaxError::Agents("too many agents".into()));
                        }
                        names.push(name);
                        names.len() - 1
                    }
                },
            };
            mask |= 1 << idx;
            match self.bump() {
                Tok::Comma => continue,
                t if t == close => break,
                t => {
                    return Err(SyntaxError::Parse {
                        pos: self.toks[self.at - 1].0,
                        msg: format!("expected ',' or {}, found {}", describe(&close), describe(&t)),
                    })
                }
            }
        }
        Ok(Group::from_mask(mask).expect("nonempty"))
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let g = self.group(Tok::RBrack)?;
                Ok(Formula::boxed(g, self.unary()?))
            }
            Tok::LAngle => {
                self.bump();
                let g = self.group(Tok::RAngle)?;
                Ok(Formula::dia(g, self.unary()?))
            }
            Tok::Ident(n) => {
                self.bump();
                Ok(Formula::Atom(n))
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            t => self.fail(format!("expected a formula, found {}", describe(&t))),
        }
    }

    fn finish(&mut self) -> Result<Formula, SyntaxError> {
        let f = self.iff()?;
        if *self.peek() != Tok::End {
            return self.fail(format!("unexpected {}", describe(self.peek())));
        }
        Ok(f)
    }
}

/// Parses `text` with groups resolved against `agents`.
pub fn parse(text: &str, agents: &AgentSet) -> Result<Formula, SyntaxError> {
    Parser { toks: lex(text)?, at: 0, agents: Agents::Fixed(agents) }.finish()
}

/// Parses `text`, taking the agent set to be the agent names it mentions, sorted.
/// A formula without modal operators gets the single agent `a`.
pub fn parse_inferring_agents(text: &str) -> Result<(AgentSet, Formula), SyntaxError> {
    let mut p = Parser { toks: lex(text)?, at: 0, agents: Agents::Collect(Vec::new()) };
    let f = p.finish()?;
    let Agents::Collect(seen) = p.agents else { unreachable!() };
    if seen.is_empty() {
        return Ok((AgentSet::standard(1), f));
    }
    let mut sorted = seen.clone();
    sorted.sort();
    let perm: Vec<usize> = seen.iter().map(|n| sorted.iter().position(|m| m == n).unwrap()).collect();
    let agents = AgentSet::new(sorted)?;
    Ok((agents, remap_groups(&f, &perm)))
}

fn remap_groups(f: &Formula, perm: &[usize]) -> Formula {
    let g2 = |g: &Group| {
        let mask = g.members().fold(0u8, |m, i| m | 1 << perm[i]);
        Group::from_mask(mask).unwrap()
    };
    let r = |a: &Formula| Box::new(remap_groups(a, perm));
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::Implies(a, b) => Formula::Implies(r(a), r(b)),
        Formula::Or(a, b) => Formula::Or(r(a), r(b)),
        Formula::And(a, b) => Formula::And(r(a), r(b)),
        Formula::Box(g, a) => Formula::Box(g2(g), r(a)),
        Formula::Dia(g, a) => Formula::Dia(g2(g), r(a)),
    }
}
