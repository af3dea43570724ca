use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::error::Category;

use super::IoError;
use crate::embedding::OrthogonalEmbedding;
use crate::graph_core::{edge_key, LabeledGraph};
use crate::grid_geom::{GridPath, GridPoint};
use crate::representation::{Representation, Semantics};
use crate::sat_reduction::{Formula, Literal};

fn parse_err(line: usize, column: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, column, msg: msg.into() }
}

fn json_err(e: serde_json::Error) -> IoError {
    match e.classify() {
        Category::Data => IoError::Schema(e.to_string()),
        _ => parse_err(e.line(), e.column(), e.to_string()),
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialise")
}

fn points_json(pts: &[GridPoint]) -> String {
    let inner: Vec<String> = pts.iter().map(|p| format!("[{},{}]", p.x, p.y)).collect();
    format!("[{}]", inner.join(","))
}

fn to_path(label: &str, pts: &[[i64; 2]]) -> Result<GridPath, IoError> {
    let seq = pts.iter().map(|&[x, y]| GridPoint::new(x, y)).collect();
    GridPath::new(seq).map_err(|e| IoError::Schema(format!("path {label}: {e}")))
}

pub fn read_graph(text: &str) -> Result<LabeledGraph, IoError> {
    let mut g: Option<LabeledGraph> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let words: Vec<&str> = raw.split_whitespace().collect();
        let Some(&head) = words.first() else { continue };
        if head.starts_with('#') {
            continue;
        }
        match (head, words.len(), g.as_mut()) {
            ("graph", n, None) if n <= 2 => g = Some(LabeledGraph::new(words.get(1).copied().unwrap_or(""))),
            ("graph", _, Some(_)) => return Err(parse_err(line, 1, "second graph header")),
            (_, _, None) => return Err(parse_err(line, 1, "expected `graph <name>` header")),
            ("v", 2, Some(g)) => g.add_vertex(words[1]),
            ("e", 3, Some(g)) => {
                g.add_vertex(words[1]);
                g.add_vertex(words[2]);
                g.add_edge(words[1], words[2]).map_err(|e| parse_err(line, 1, e.to_string()))?;
            }
            _ => return Err(parse_err(line, 1, format!("malformed line `{}`", raw.trim()))),
        }
    }
    g.ok_or_else(|| parse_err(1, 1, "missing graph header"))
}

pub fn write_graph(g: &LabeledGraph) -> String {
    let mut out = format!("graph {}\n", g.name.split_whitespace().collect::<Vec<_>>().join("_"));
    for v in g.vertices() {
        writeln!(out, "v {v}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    semantics: Semantics,
    #[serde(default)]
    refinement_level: u32,
    paths: BTreeMap<String, Vec<[i64; 2]>>,
}

pub fn read_representation(text: &str) -> Result<Representation, IoError> {
    let file: RepFile = serde_json::from_str(text).map_err(json_err)?;
    let mut rep = Representation::new(file.semantics);
    rep.refinement_level = file.refinement_level;
    for (label, pts) in &file.paths {
        rep.insert(label.clone(), to_path(label, pts)?);
    }
    Ok(rep)
}

pub fn write_representation(rep: &Representation) -> String {
    let sem = match rep.semantics {
        Semantics::Cpg => "cpg",
        Semantics::Epg => "epg",
    };
    let mut out = format!("{{\n  \"semantics\": \"{sem}\",\n  \"refinement_level\": {},\n  \"paths\": {{", rep.refinement_level);
    let lines: Vec<String> =
        rep.paths.iter().map(|(l, p)| format!("\n    {}: {}", quote(l), points_json(p.seq()))).collect();
    out.push_str(&lines.join(","));
    out.push_str(if lines.is_empty() { "}\n}\n" } else { "\n  }\n}\n" });
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingFile {
    vertices: BTreeMap<String, [i64; 2]>,
    edges: BTreeMap<String, Vec<[i64; 2]>>,
}

pub fn read_embedding(text: &str) -> Result<OrthogonalEmbedding, IoError> {
    let file: EmbeddingFile = serde_json::from_str(text).map_err(json_err)?;
    let mut emb = OrthogonalEmbedding::default();
    for (v, [x, y]) in file.vertices {
        emb.vertex_points.insert(v, GridPoint::new(x, y));
    }
    for (key, pts) in &file.edges {
        let (u, v) = key.split_once('|').ok_or_else(|| IoError::Schema(format!("edge key `{key}` lacks `|`")))?;
        let mut path = to_path(key, pts)?;
        if u > v {
            path = path.reversed();
        }
        emb.edge_paths.insert(edge_key(u, v), path);
    }
    Ok(emb)
}

pub fn write_embedding(emb: &OrthogonalEmbedding) -> String {
    let vertices: Vec<String> =
        emb.vertex_points.iter().map(|(v, p)| format!("\n    {}: [{},{}]", quote(v), p.x, p.y)).collect();
    let edges: Vec<String> = emb
        .edge_paths
        .iter()
        .map(|((u, v), p)| format!("\n    {}: {}", quote(&format!("{u}|{v}")), points_json(p.seq())))
        .collect();
    let block = |items: &[String]| if items.is_empty() { "{}".to_string() } else { format!("{{{}\n  }}", items.join(",")) };
    format!("{{\n  \"vertices\": {},\n  \"edges\": {}\n}}\n", block(&vertices), block(&edges))
}

/// DIMACS CNF. Variables are named by their index unless a `c var <n> <name>` comment renames them.
pub fn read_dimacs(text: &str) -> Result<Formula, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut clauses: Vec<Vec<(usize, bool)>> = Vec::new();
    let mut current: Vec<(usize, bool)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let words: Vec<&str> = raw.split_whitespace().collect();
        match words.as_slice() {
            [] => continue,
            ["c", "var", n, name] => {
                let n: usize = n.parse().map_err(|_| parse_err(line, 7, "bad variable number"))?;
                names.insert(n, name.to_string());
                continue;
            }
            [c, ..] if c.starts_with('c') => continue,
            ["p", "cnf", v, c] => {
                if header.is_some() {
                    return Err(parse_err(line, 1, "second problem line"));
                }
                let v = v.parse().map_err(|_| parse_err(line, 7, "bad variable count"))?;
                let c = c.parse().map_err(|_| parse_err(line, 7, "bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            ["p", ..] => return Err(parse_err(line, 1, "expected `p cnf <vars> <clauses>`")),
            _ => {}
        }
        let (nvars, _) = header.ok_or_else(|| parse_err(line, 1, "clause before problem line"))?;
        let mut column = 1;
        for w in raw.split(' ') {
            if !w.is_empty() {
                let lit: i64 = w.parse().map_err(|_| parse_err(line, column, format!("bad literal `{w}`")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > nvars {
                    return Err(parse_err(line, column, format!("variable {} out of range", lit.abs())));
                } else {
                    current.push((lit.unsigned_abs() as usize, lit > 0));
                }
            }
            column += w.len() + 1;
        }
    }
    let (nvars, nclauses) = header.ok_or_else(|| parse_err(1, 1, "missing problem line"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != nclauses {
        return Err(IoError::Schema(format!("header declares {nclauses} clauses, found {}", clauses.len())));
    }
    let name = |n: usize| names.get(&n).cloned().unwrap_or_else(|| n.to_string());
    let formula = Formula {
        variables: (1..=nvars).map(name).collect(),
        clauses: clauses
            .into_iter()
            .map(|c| c.into_iter().map(|(v, s)| Literal { var: name(v), positive: s }).collect())
            .collect(),
    };
    formula.check().map_err(|e| IoError::Schema(e.to_string()))?;
    Ok(formula)
}

pub fn write_dimacs(f: &Formula) -> String {
    let index: BTreeMap<&str, usize> = f.variables.iter().enumerate().map(|(i, v)| (v.as_str(), i + 1)).collect();
    let mut out = String::new();
    for (i, v) in f.variables.iter().enumerate() {
        if *v != (i + 1).to_string() {
            writeln!(out, "c var {} {v}", i + 1).unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", f.variables.len(), f.clauses.len()).unwrap();
    for c in &f.clauses {
        for l in c {
            let n = index[l.var.as_str()] as i64;
            write!(out, "{} ", if l.positive { n } else { -n }).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_end_eater;
    use crate::graph_core::complete_graph;
    use crate::sat_reduction::example_formula;

    #[test]
    fn representation_round_trip() {
        let rep = build_end_eater(1).unwrap().rep;
        let text = write_representation(&rep);
        assert_eq!(read_representation(&text).unwrap(), rep);
        assert_eq!(write_representation(&read_representation(&text).unwrap()), text);
        let empty = Representation::cpg();
        assert_eq!(read_representation(&write_representation(&empty)).unwrap(), empty);
    }

    #[test]
    fn malformed_point_is_a_schema_error() {
        let text = r#"{"semantics":"cpg","refinement_level":0,"paths":{"a":[[1]]}}"#;
        assert!(matches!(read_representation(text), Err(IoError::Schema(_))));
        let diagonal = r#"{"semantics":"cpg","paths":{"a":[[0,0],[1,1]]}}"#;
        assert!(matches!(read_representation(diagonal), Err(IoError::Schema(_))));
        let broken = "{\"semantics\":\n  \"cpg\",,}";
        assert!(matches!(read_representation(broken), Err(IoError::Parse { line: 2, .. })));
    }

    #[test]
    fn graph_round_trip() {
        let mut g = complete_graph(4);
        g.add_vertex("lonely");
        let text = write_graph(&g);
        assert_eq!(read_graph(&text).unwrap(), g);
        assert_eq!(write_graph(&read_graph(&text).unwrap()), text);
        assert!(matches!(read_graph("graph g\nx 1\n"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(read_graph("v 1\n"), Err(IoError::Parse { line: 1, .. })));
    }

    #[test]
    fn dimacs_example() {
        let text = "c the running example\np cnf 2 3\n1 2 0\n1 -2 0\n-1 -2 0\n";
        let f = read_dimacs(text).unwrap();
        let phi = example_formula();
        let renamed = |v: &str| if v == "x" { "1" } else { "2" };
        assert_eq!(f.variables, vec!["1", "2"]);
        for (c, d) in f.clauses.iter().zip(&phi.clauses) {
            let d: Vec<Literal> = d.iter().map(|l| Literal { var: renamed(&l.var).into(), positive: l.positive }).collect();
            assert_eq!(c, &d);
        }
        assert_eq!(read_dimacs(&write_dimacs(&phi)).unwrap(), phi);
        assert!(matches!(read_dimacs("p cnf 1 1\n1 x 0\n"), Err(IoError::Parse { line: 2, column: 3, .. })));
        assert!(matches!(read_dimacs("p cnf 1 1\n2 0\n"), Err(IoError::Parse { line: 2, .. })));
    }

    #[test]
    fn embedding_round_trip() {
        let mut emb = OrthogonalEmbedding::default();
        emb.vertex_points.insert("a".into(), GridPoint::new(0, 0));
        emb.vertex_points.insert("b".into(), GridPoint::new(2, 1));
        emb.edge_paths.insert(edge_key("a", "b"), crate::grid_geom::path_from_sequence(&[(0, 0), (2, 0), (2, 1)]).unwrap());
        let text = write_embedding(&emb);
        assert_eq!(read_embedding(&text).unwrap(), emb);
        let flipped = text.replace("\"a|b\"", "\"b|a\"").replace("[[0,0],[2,0],[2,1]]", "[[2,1],[2,0],[0,0]]");
        assert_eq!(read_embedding(&flipped).unwrap(), emb);
    }
}
