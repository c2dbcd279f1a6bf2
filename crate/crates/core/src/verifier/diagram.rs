use std::fmt;

use thiserror::Error;

use crate::detmodel::network::{simulate, Symbols, B_SHIFT};
use crate::detmodel::{DiamondParams, LevelVector, Relay};
use crate::strategies::StrategyAssignment;

/// One level of a signal: its symbolic content, its value under concrete
/// messages when known, and for relay outputs the extra received levels
/// folded onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub level: usize,
    pub value: Option<bool>,
    pub content: Symbols,
    pub sources: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    /// Highest level first.
    pub rows: Vec<Row>,
}

/// Level-by-level picture of one block: both transmit vectors, each
/// relay's received and sent vectors, and both received vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    pub sections: Vec<Section>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

fn expr(s: Symbols) -> String {
    let mut terms = Vec::new();
    for (name, shift) in [('a', 0), ('b', B_SHIFT)] {
        let part = (s >> shift) as u64;
        for m in 0..64 {
            if part >> m & 1 == 1 {
                terms.push(format!("{name}{}", m + 1));
            }
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn parse_expr(text: &str) -> Option<Symbols> {
    if text == "0" {
        return Some(0);
    }
    let mut s: Symbols = 0;
    for term in text.split('+') {
        let shift = match term.chars().next()? {
            'a' => 0,
            'b' => B_SHIFT,
            _ => return None,
        };
        let m: u32 = term[1..].parse().ok()?;
        if m == 0 || m > 64 {
            return None;
        }
        s ^= 1 << (shift + m - 1);
    }
    Some(s)
}

fn evaluate(s: Symbols, a: &LevelVector, b: &LevelVector) -> bool {
    let mask = |v: &LevelVector, shift: u32| {
        v.bits().iter().enumerate().filter(|(_, &x)| x).fold(0 as Symbols, |m, (i, _)| m | 1 << (shift + i as u32))
    };
    (s & (mask(a, 0) | mask(b, B_SHIFT))).count_ones() % 2 == 1
}

impl Diagram {
    fn build(params: &DiamondParams, a: &StrategyAssignment, msgs: Option<(&LevelVector, &LevelVector)>) -> Diagram {
        let ops = Relay::BOTH.map(|k| a.relays[k.index()].operator(params, k));
        let snap = simulate(params, [&a.plans[0].placement, &a.plans[1].placement], [&ops[0], &ops[1]]);
        let section = |title: String, v: &[Symbols], sources: &dyn Fn(usize) -> Vec<usize>| Section {
            title,
            rows: (1..=v.len())
                .rev()
                .map(|l| Row {
                    level: l,
                    value: msgs.map(|(ma, mb)| evaluate(v[l - 1], ma, mb)),
                    content: v[l - 1],
                    sources: sources(l),
                })
                .collect(),
        };
        let none = |_: usize| Vec::new();
        let mut sections = vec![section("A sends".into(), &snap.tx[0], &none), section("B sends".into(), &snap.tx[1], &none)];
        for k in Relay::BOTH {
            let s = &a.relays[k.index()];
            sections.push(section(format!("{k} receives"), &snap.relay_in[k.index()], &none));
            sections.push(section(format!("{k} sends {}", s.id), &snap.relay_out[k.index()], &|l| s.extra_sources(l)));
        }
        sections.push(section("A receives".into(), &snap.rx[0], &none));
        sections.push(section("B receives".into(), &snap.rx[1], &none));
        Diagram { sections }
    }

    /// Symbolic contents only.
    pub fn symbolic(params: &DiamondParams, a: &StrategyAssignment) -> Diagram {
        Diagram::build(params, a, None)
    }

    /// Contents together with their values for the given messages.
    pub fn concrete(params: &DiamondParams, a: &StrategyAssignment, msg_a: &LevelVector, msg_b: &LevelVector) -> Diagram {
        Diagram::build(params, a, Some((msg_a, msg_b)))
    }

    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    /// Inverse of the `Display` rendering.
    pub fn parse(text: &str) -> Result<Diagram, DiagramError> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            let err = |msg: &str| DiagramError::Syntax { line: i + 1, msg: msg.to_string() };
            if line.trim().is_empty() {
                continue;
            }
            if let Some(title) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                sections.push(Section { title: title.to_string(), rows: Vec::new() });
                continue;
            }
            let cur = sections.last_mut().ok_or_else(|| err("row before any section"))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 && !(fields.len() == 5 && fields[3] == "<-") {
                return Err(err("expected `level value content [<- sources]`"));
            }
            let level = fields[0].parse().map_err(|_| err("bad level"))?;
            let value = match fields[1] {
                "0" => Some(false),
                "1" => Some(true),
                "." => None,
                _ => return Err(err("value must be 0, 1 or .")),
            };
            let content = parse_expr(fields[2]).ok_or_else(|| err("bad content"))?;
            let sources = if fields.len() == 5 {
                fields[4].split(',').map(|t| t.parse().map_err(|_| err("bad source level"))).collect::<Result<_, _>>()?
            } else {
                Vec::new()
            };
            cur.rows.push(Row { level, value, content, sources });
        }
        Ok(Diagram { sections })
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{}]", s.title)?;
            for r in &s.rows {
                let v = match r.value {
                    Some(true) => "1",
                    Some(false) => "0",
                    None => ".",
                };
                write!(f, "{:>3} {v} {}", r.level, expr(r.content))?;
                if !r.sources.is_empty() {
                    let src: Vec<String> = r.sources.iter().map(|s| s.to_string()).collect();
                    write!(f, " <- {}", src.join(","))?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::select_strategies;

    #[test]
    fn expressions_round_trip() {
        for s in [0u128, 1, 1 << 64, 0b1011 | (0b110 << 64)] {
            assert_eq!(parse_expr(&expr(s)), Some(s));
        }
        assert_eq!(expr(1 | (1 << 65)), "a1+b2");
        assert_eq!(parse_expr("c1"), None);
        assert_eq!(parse_expr("a0"), None);
    }

    #[test]
    fn rendered_diagram_parses_back() {
        let p = DiamondParams::of([6, 4, 5, 7, 6, 5, 1, 7]);
        let a = select_strategies(&p);
        let d = Diagram::symbolic(&p, &a);
        assert_eq!(Diagram::parse(&d.to_string()).unwrap(), d);
        let top = &d.section("A sends").unwrap().rows[0];
        assert_eq!(top.level, 6);
    }
}
