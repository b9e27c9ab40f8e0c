//! The `.gog` text format.
//!
//! ```text
//! [graph]
//! vertex u
//! vertex v
//! edge e: u -> v
//! base u
//!
//! [vertex u]
//! kind = finite
//! generators = a
//! perm a = (1 2)
//!
//! [edge e]
//! generators = g
//! fwd g = a
//! bwd g = a
//! ```
//!
//! An edge without an `[edge]` section has trivial edge group. Finite
//! vertices take either `perm` lines or a multiplication table given as `row`
//! lines (or `table_file = PATH`, one row per line) together with one
//! `element GEN = INDEX` line per generator. Free vertices take `generators`
//! and/or `rank`. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gog::{EdgeSpec, GogSpec, GraphOfGroups};
use crate::group::{SpecEntry, VertexSpec};

enum Section {
    None,
    Graph,
    Vertex(usize),
    Edge(usize),
}

struct EdgeDraft {
    spec: EdgeSpec,
    line: usize,
    has_section: bool,
    fwd: HashMap<String, (String, usize)>,
    bwd: HashMap<String, (String, usize)>,
    generators_line: usize,
}

struct VertexDraft {
    spec: VertexSpec,
    line: usize,
    has_section: bool,
}

fn col(line: &str, token: &str) -> usize {
    line.find(token)
        .map_or(1, |p| line[..p].chars().count() + 1)
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a `.gog` file. `base_dir` resolves relative `table_file` paths;
/// without it `table_file` is rejected.
pub fn parse_spec(text: &str, base_dir: Option<&Path>) -> Result<GogSpec> {
    let mut section = Section::None;
    let mut saw_graph = false;
    let mut vertices: Vec<VertexDraft> = Vec::new();
    let mut vindex: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<EdgeDraft> = Vec::new();
    let mut eindex: HashMap<String, usize> = HashMap::new();
    let mut base: Option<(String, usize, usize)> = None;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            let inner = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::parse(ln, col(line, "["), "unterminated section header"))?;
            let mut parts = inner.split_whitespace();
            section = match (parts.next(), parts.next(), parts.next()) {
                (Some("graph"), None, _) => {
                    if saw_graph {
                        return Err(Error::parse(ln, 1, "second [graph] section"));
                    }
                    saw_graph = true;
                    Section::Graph
                }
                (Some("vertex"), Some(name), None) => {
                    let &v = vindex.get(name).ok_or_else(|| {
                        Error::parse(ln, col(line, name), format!("undeclared vertex `{name}`"))
                    })?;
                    if vertices[v].has_section {
                        return Err(Error::parse(
                            ln,
                            1,
                            format!("second [vertex {name}] section"),
                        ));
                    }
                    vertices[v].has_section = true;
                    Section::Vertex(v)
                }
                (Some("edge"), Some(name), None) => {
                    let &e = eindex.get(name).ok_or_else(|| {
                        Error::parse(ln, col(line, name), format!("undeclared edge `{name}`"))
                    })?;
                    if edges[e].has_section {
                        return Err(Error::parse(ln, 1, format!("second [edge {name}] section")));
                    }
                    edges[e].has_section = true;
                    Section::Edge(e)
                }
                _ => {
                    return Err(Error::parse(
                        ln,
                        col(line, "["),
                        format!("unknown section `{trimmed}`"),
                    ))
                }
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(Error::parse(
                    ln,
                    col(line, trimmed),
                    "content before the first section",
                ))
            }
            Section::Graph => {
                let (kw, rest) = trimmed
                    .split_once(char::is_whitespace)
                    .unwrap_or((trimmed, ""));
                let rest = rest.trim();
                match kw {
                    "vertex" => {
                        if !is_name(rest) {
                            return Err(Error::parse(
                                ln,
                                col(line, rest),
                                format!("bad vertex name `{rest}`"),
                            ));
                        }
                        if let Some(&v) = vindex.get(rest) {
                            return Err(Error::parse(
                                ln,
                                col(line, rest),
                                format!(
                                    "vertex `{rest}` already declared on line {}",
                                    vertices[v].line
                                ),
                            ));
                        }
                        vindex.insert(rest.to_string(), vertices.len());
                        vertices.push(VertexDraft {
                            spec: VertexSpec {
                                name: rest.to_string(),
                                kind: String::new(),
                                generators: Vec::new(),
                                entries: Vec::new(),
                            },
                            line: ln,
                            has_section: false,
                        });
                    }
                    "edge" => {
                        let (name, ends) = rest.split_once(':').ok_or_else(|| {
                            Error::parse(ln, col(line, rest), "expected `edge NAME: FROM -> TO`")
                        })?;
                        let name = name.trim();
                        let (from, to) = ends.split_once("->").ok_or_else(|| {
                            Error::parse(ln, col(line, ends), "expected `FROM -> TO`")
                        })?;
                        let (from, to) = (from.trim(), to.trim());
                        if !is_name(name) {
                            return Err(Error::parse(
                                ln,
                                col(line, rest),
                                format!("bad edge name `{name}`"),
                            ));
                        }
                        if let Some(&e) = eindex.get(name) {
                            return Err(Error::parse(
                                ln,
                                col(line, name),
                                format!(
                                    "duplicate edge `{name}` (lines {} and {ln})",
                                    edges[e].line
                                ),
                            ));
                        }
                        for v in [from, to] {
                            if !vindex.contains_key(v) {
                                return Err(Error::parse(
                                    ln,
                                    col(line, v),
                                    format!("undeclared vertex `{v}`"),
                                ));
                            }
                        }
                        eindex.insert(name.to_string(), edges.len());
                        edges.push(EdgeDraft {
                            spec: EdgeSpec {
                                name: name.to_string(),
                                from: from.to_string(),
                                to: to.to_string(),
                                generators: Vec::new(),
                                fwd: Vec::new(),
                                bwd: Vec::new(),
                            },
                            line: ln,
                            has_section: false,
                            fwd: HashMap::new(),
                            bwd: HashMap::new(),
                            generators_line: ln,
                        });
                    }
                    "base" => {
                        if let Some((_, l, _)) = &base {
                            return Err(Error::parse(
                                ln,
                                1,
                                format!("base already given on line {l}"),
                            ));
                        }
                        base = Some((rest.to_string(), ln, col(line, rest)));
                    }
                    _ => {
                        return Err(Error::parse(
                            ln,
                            col(line, kw),
                            format!("unknown [graph] entry `{kw}`"),
                        ))
                    }
                }
            }
            Section::Vertex(v) => {
                let (key, arg, value) = key_value(line, ln)?;
                let d = &mut vertices[v];
                match (key.as_str(), &arg) {
                    ("kind", None) => d.spec.kind = value,
                    ("generators", None) => {
                        d.spec.generators = value.split_whitespace().map(str::to_string).collect();
                        if let Some(bad) = d.spec.generators.iter().find(|g| !is_name(g)) {
                            return Err(Error::parse(
                                ln,
                                col(line, bad),
                                format!("bad generator name `{bad}`"),
                            ));
                        }
                    }
                    ("table_file", None) => {
                        let dir = base_dir.ok_or_else(|| {
                            Error::parse(ln, 1, "table_file needs a file-backed input")
                        })?;
                        let path = dir.join(&value);
                        let table = std::fs::read_to_string(&path).map_err(|e| {
                            Error::parse(
                                ln,
                                col(line, &value),
                                format!("cannot read {}: {e}", path.display()),
                            )
                        })?;
                        for row in table.lines().filter(|r| !r.trim().is_empty()) {
                            d.spec.entries.push(SpecEntry {
                                key: "row".into(),
                                arg: None,
                                value: row.split_whitespace().collect::<Vec<_>>().join(" "),
                                line: ln,
                            });
                        }
                    }
                    _ => d.spec.entries.push(SpecEntry {
                        key,
                        arg,
                        value,
                        line: ln,
                    }),
                }
            }
            Section::Edge(e) => {
                let (key, arg, value) = key_value(line, ln)?;
                let d = &mut edges[e];
                match (key.as_str(), arg) {
                    ("generators", None) => {
                        d.spec.generators = value.split_whitespace().map(str::to_string).collect();
                        d.generators_line = ln;
                    }
                    ("fwd", Some(g)) => {
                        d.fwd.insert(g, (value, ln));
                    }
                    ("bwd", Some(g)) => {
                        d.bwd.insert(g, (value, ln));
                    }
                    (k, _) => {
                        return Err(Error::parse(
                            ln,
                            col(line, k),
                            format!("unknown [edge] entry `{k}`"),
                        ))
                    }
                }
            }
        }
    }

    if !saw_graph {
        return Err(Error::parse(1, 1, "missing [graph]"));
    }
    let (base, bline, bcol) = base.ok_or_else(|| Error::parse(1, 1, "[graph] has no `base`"))?;
    if !vindex.contains_key(&base) {
        return Err(Error::parse(
            bline,
            bcol,
            format!("undeclared base vertex `{base}`"),
        ));
    }
    let mut out_vertices = Vec::new();
    for d in vertices {
        if d.spec.kind.is_empty() {
            return Err(Error::parse(
                d.line,
                1,
                format!("vertex `{}` has no `kind`", d.spec.name),
            ));
        }
        out_vertices.push(d.spec);
    }
    let mut out_edges = Vec::new();
    for mut d in edges {
        for g in &d.spec.generators {
            let f = d.fwd.remove(g);
            let b = d.bwd.remove(g);
            match (f, b) {
                (Some((f, _)), Some((b, _))) => {
                    d.spec.fwd.push(f);
                    d.spec.bwd.push(b);
                }
                _ => {
                    return Err(Error::parse(
                        d.generators_line,
                        1,
                        format!(
                            "edge `{}`: generator `{g}` needs both `fwd` and `bwd`",
                            d.spec.name
                        ),
                    ))
                }
            }
        }
        if let Some((g, (_, l))) = d.fwd.into_iter().chain(d.bwd).min_by_key(|(_, (_, l))| *l) {
            return Err(Error::parse(
                l,
                1,
                format!("edge `{}`: `{g}` is not an edge generator", d.spec.name),
            ));
        }
        out_edges.push(d.spec);
    }
    Ok(GogSpec {
        vertices: out_vertices,
        edges: out_edges,
        base,
    })
}

/// `key [arg] = value`.
fn key_value(line: &str, ln: usize) -> Result<(String, Option<String>, String)> {
    let (lhs, rhs) = line
        .split_once('=')
        .ok_or_else(|| Error::parse(ln, col(line, line.trim()), "expected `key = value`"))?;
    let mut parts = lhs.split_whitespace();
    let key = parts
        .next()
        .ok_or_else(|| Error::parse(ln, 1, "missing key before `=`"))?
        .to_string();
    let arg = parts.next().map(str::to_string);
    if let Some(extra) = parts.next() {
        return Err(Error::parse(
            ln,
            col(line, extra),
            format!("unexpected `{extra}`"),
        ));
    }
    Ok((key, arg, rhs.trim().to_string()))
}

/// Prints a spec in the canonical layout; `parse_spec(print_spec(s)) == s`.
pub fn print_spec(spec: &GogSpec) -> String {
    let mut out = String::from("[graph]\n");
    for v in &spec.vertices {
        let _ = writeln!(out, "vertex {}", v.name);
    }
    for e in &spec.edges {
        let _ = writeln!(out, "edge {}: {} -> {}", e.name, e.from, e.to);
    }
    let _ = writeln!(out, "base {}", spec.base);
    for v in &spec.vertices {
        let _ = writeln!(out, "\n[vertex {}]\nkind = {}", v.name, v.kind);
        if !v.generators.is_empty() {
            let _ = writeln!(out, "generators = {}", v.generators.join(" "));
        }
        for e in &v.entries {
            match &e.arg {
                Some(a) => {
                    let _ = writeln!(out, "{} {} = {}", e.key, a, e.value);
                }
                None => {
                    let _ = writeln!(out, "{} = {}", e.key, e.value);
                }
            }
        }
    }
    for e in spec.edges.iter().filter(|e| !e.generators.is_empty()) {
        let _ = writeln!(
            out,
            "\n[edge {}]\ngenerators = {}",
            e.name,
            e.generators.join(" ")
        );
        for (g, w) in e.generators.iter().zip(&e.fwd) {
            let _ = writeln!(out, "fwd {g} = {w}");
        }
        for (g, w) in e.generators.iter().zip(&e.bwd) {
            let _ = writeln!(out, "bwd {g} = {w}");
        }
    }
    out
}

/// Reads, parses and validates a `.gog` file.
pub fn load(path: &Path) -> Result<GraphOfGroups> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    GraphOfGroups::build(parse_spec(&text, path.parent())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "[graph]\nvertex u\nvertex v\nedge e: u -> v\nbase u\n\n[vertex u]\nkind = finite\ngenerators = a\nperm a = (1 2)\n\n[vertex v]\nkind = free\nrank = 1\n";

    #[test]
    fn empty_file_is_missing_graph() {
        let err = parse_spec("", None).unwrap_err();
        assert!(err.to_string().contains("missing [graph]"), "{err}");
    }

    #[test]
    fn duplicate_edge_names_both_lines() {
        let text = "[graph]\nvertex u\nedge e: u -> u\nedge e: u -> u\nbase u\n";
        let err = parse_spec(text, None).unwrap_err().to_string();
        assert!(err.contains("lines 3 and 4"), "{err}");
    }

    #[test]
    fn undeclared_vertex_has_location() {
        let err = parse_spec("[graph]\nvertex u\nedge e: u -> w\nbase u\n", None).unwrap_err();
        match err {
            Error::Parse { span, .. } => assert_eq!((span.line, span.column), (3, 14)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let s = parse_spec(SMALL, None).unwrap();
        assert_eq!(parse_spec(&print_spec(&s), None).unwrap(), s);
        assert_eq!(s.vertices[1].entries[0].value, "1");
    }
}
