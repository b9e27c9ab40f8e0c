//! DOT export and the line-based text format.
//!
//! ```text
//! fsa
//! state o initial final
//! state q
//! edge o x q
//! ```
//!
//! Async automata use the header `async`, carry `class=<C>` on every state
//! and write the end marker as `$`.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::asynch::{AsyncAutomaton, StateClass, Symbol};
use super::fsa::{Fsa, Label, StateId};
use crate::error::{Error, Result};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn fsa_to_dot(m: &Fsa) -> String {
    let mut out = String::from("digraph fsa {\n  rankdir=LR;\n");
    for s in m.states() {
        let shape = if m.is_final(s) {
            "doublecircle"
        } else {
            "circle"
        };
        let init = if m.initial() == Some(s) {
            ", initial=true"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  n{s} [label=\"{}\", shape={shape}{init}];",
            escape(m.name(s))
        );
    }
    for s in m.states() {
        for &(l, t) in m.out_edges(s) {
            let _ = writeln!(
                out,
                "  n{s} -> n{t} [label=\"{}\"];",
                escape(&m.labels()[l as usize])
            );
        }
    }
    out.push_str("}\n");
    out
}

pub fn async_to_dot(m: &AsyncAutomaton) -> String {
    let mut out = String::from("digraph async {\n  rankdir=LR;\n");
    for s in m.states() {
        let shape = if m.is_final(s) {
            "doublecircle"
        } else {
            "circle"
        };
        let init = if m.initial() == Some(s) {
            ", initial=true"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  n{s} [label=\"{}\", shape={shape}, class=\"{}\"{init}];",
            escape(m.name(s)),
            m.class(s)
        );
    }
    for s in m.states() {
        for (sym, t) in m.transitions(s) {
            let _ = writeln!(
                out,
                "  n{s} -> n{t} [label=\"{}\"];",
                escape(m.symbol_name(sym))
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Node and edge statement counts of a DOT digraph written by this module.
pub fn dot_counts(dot: &str) -> (usize, usize) {
    let mut nodes = 0;
    let mut edges = 0;
    for line in dot.lines().map(str::trim) {
        if line.contains(" -> ") {
            edges += 1;
        } else if line.starts_with('n') && line.contains("[label=") {
            nodes += 1;
        }
    }
    (nodes, edges)
}

fn state_line(out: &mut String, name: &str, initial: bool, fin: bool, class: Option<StateClass>) {
    out.push_str("state ");
    out.push_str(name);
    if initial {
        out.push_str(" initial");
    }
    if fin {
        out.push_str(" final");
    }
    if let Some(c) = class {
        let _ = write!(out, " class={c}");
    }
    out.push('\n');
}

pub fn fsa_to_text(m: &Fsa) -> String {
    let mut out = String::from("fsa\n");
    for s in m.states() {
        state_line(
            &mut out,
            m.name(s),
            m.initial() == Some(s),
            m.is_final(s),
            None,
        );
    }
    for s in m.states() {
        for &(l, t) in m.out_edges(s) {
            let _ = writeln!(
                out,
                "edge {} {} {}",
                m.name(s),
                m.labels()[l as usize],
                m.name(t)
            );
        }
    }
    out
}

pub fn async_to_text(m: &AsyncAutomaton) -> String {
    let mut out = String::from("async\n");
    for s in m.states() {
        state_line(
            &mut out,
            m.name(s),
            m.initial() == Some(s),
            m.is_final(s),
            Some(m.class(s)),
        );
    }
    for s in m.states() {
        for (sym, t) in m.transitions(s) {
            let _ = writeln!(
                out,
                "edge {} {} {}",
                m.name(s),
                m.symbol_name(sym),
                m.name(t)
            );
        }
    }
    out
}

struct StateDecl<'a> {
    name: &'a str,
    initial: bool,
    fin: bool,
    class: Option<StateClass>,
}

struct Parsed<'a> {
    states: Vec<StateDecl<'a>>,
    edges: Vec<(usize, &'a str, &'a str, &'a str)>,
}

fn parse_lines<'a>(text: &'a str, header: &str) -> Result<Parsed<'a>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == header => {}
        Some((i, l)) => {
            return Err(Error::parse(
                i + 1,
                1,
                format!("expected header `{header}`, found `{}`", l.trim()),
            ))
        }
        None => return Err(Error::parse(1, 1, format!("missing header `{header}`"))),
    }
    let mut parsed = Parsed {
        states: Vec::new(),
        edges: Vec::new(),
    };
    for (i, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["state", name, flags @ ..] => {
                let mut decl = StateDecl {
                    name,
                    initial: false,
                    fin: false,
                    class: None,
                };
                for f in flags {
                    match *f {
                        "initial" => decl.initial = true,
                        "final" => decl.fin = true,
                        c if c.starts_with("class=") => {
                            decl.class = Some(StateClass::from_name(&c[6..]).ok_or_else(|| {
                                Error::parse(i + 1, 1, format!("unknown class `{c}`"))
                            })?)
                        }
                        other => {
                            return Err(Error::parse(
                                i + 1,
                                1,
                                format!("unknown state flag `{other}`"),
                            ))
                        }
                    }
                }
                parsed.states.push(decl);
            }
            ["edge", from, label, to] => parsed.edges.push((i + 1, from, label, to)),
            _ => {
                return Err(Error::parse(
                    i + 1,
                    1,
                    format!("cannot read `{}`", l.trim()),
                ))
            }
        }
    }
    Ok(parsed)
}

fn state_ids(p: &Parsed) -> HashMap<String, StateId> {
    p.states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.name.to_string(), i as StateId))
        .collect()
}

fn lookup<T: Copy>(map: &HashMap<String, T>, key: &str, line: usize, what: &str) -> Result<T> {
    map.get(key)
        .copied()
        .ok_or_else(|| Error::parse(line, 1, format!("unknown {what} `{key}`")))
}

pub fn fsa_from_text(text: &str, labels: Vec<String>) -> Result<Fsa> {
    let p = parse_lines(text, "fsa")?;
    let ids = state_ids(&p);
    let label_ids: HashMap<String, Label> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i as Label))
        .collect();
    let mut m = Fsa::new(labels);
    for s in &p.states {
        let id = m.add_state(s.name, s.fin);
        if s.initial {
            m.set_initial(id);
        }
    }
    for &(line, from, label, to) in &p.edges {
        let l = lookup(&label_ids, label, line, "label")?;
        m.add_edge(
            lookup(&ids, from, line, "state")?,
            l,
            lookup(&ids, to, line, "state")?,
        );
    }
    Ok(m)
}

pub fn async_from_text(text: &str, labels: Vec<String>) -> Result<AsyncAutomaton> {
    let p = parse_lines(text, "async")?;
    let ids = state_ids(&p);
    let label_ids: HashMap<String, Label> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i as Label))
        .collect();
    let mut m = AsyncAutomaton::new(labels);
    for (i, s) in p.states.iter().enumerate() {
        let class = s
            .class
            .ok_or_else(|| Error::parse(i + 2, 1, format!("state `{}` has no class", s.name)))?;
        let id = m.add_state(s.name, class);
        if s.initial {
            m.set_initial(id);
        }
    }
    for &(line, from, label, to) in &p.edges {
        let sym = if label == "$" {
            Symbol::End
        } else {
            Symbol::Letter(lookup(&label_ids, label, line, "label")?)
        };
        m.add_transition(
            lookup(&ids, from, line, "state")?,
            sym,
            lookup(&ids, to, line, "state")?,
        )?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_automaton_has_no_nodes() {
        let m = Fsa::new(vec!["a".into()]);
        assert_eq!(dot_counts(&fsa_to_dot(&m)), (0, 0));
    }

    #[test]
    fn text_round_trip() {
        let mut m = Fsa::new(vec!["a".into(), "b".into()]);
        let s = m.add_state("s", true);
        let t = m.add_state("t", false);
        m.set_initial(s);
        m.add_edge(s, 0, t);
        m.add_edge(t, 1, s);
        let text = fsa_to_text(&m);
        assert_eq!(fsa_from_text(&text, m.labels().to_vec()).unwrap(), m);
        assert_eq!(dot_counts(&fsa_to_dot(&m)), (2, 2));
    }

    #[test]
    fn async_text_round_trip() {
        let mut m = AsyncAutomaton::new(vec!["a".into()]);
        let l = m.add_state("l", StateClass::Left);
        let re = m.add_state("re", StateClass::RightEnd);
        let e = m.add_state("e", StateClass::End);
        m.set_initial(l);
        m.add_transition(l, Symbol::Letter(0), l).unwrap();
        m.add_transition(l, Symbol::End, re).unwrap();
        m.add_transition(re, Symbol::End, e).unwrap();
        let text = async_to_text(&m);
        assert!(text.contains("class=SR$"));
        assert_eq!(async_from_text(&text, m.labels().to_vec()).unwrap(), m);
        let dot = async_to_dot(&m);
        assert!(dot.contains("class=\"S$\""));
        assert_eq!(dot_counts(&dot), (3, 3));
    }
}
