//! PACE-style file formats.
//!
//! Graphs use the `.gr` format: a `p tw <n> <m>` header followed by one
//! `<u> <v>` line per edge, 1-indexed. As an extension, a third
//! whitespace-separated token on an edge line is taken as the edge label.
//! Decompositions use the `.td` format: `s td <#bags> <width+1> <n>`,
//! `b <id> <v...>` bag lines, then one `<i> <j>` line per tree edge.
//! Comment lines start with `c`.

use crate::graph::LabeledGraph;
use crate::treedec::TreeDecomposition;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("missing header line")]
    MissingHeader,
    #[error("line {0}: invalid graph: {1}")]
    Graph(usize, crate::graph::GraphError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax(line, msg.into())
}

/// Parses a `.gr` graph.
pub fn parse_gr(text: &str) -> Result<LabeledGraph, FormatError> {
    let mut graph: Option<LabeledGraph> = None;
    let mut declared_edges = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if graph.is_some() {
                return Err(syntax(lineno, "duplicate header"));
            }
            let mut it = rest.split_whitespace();
            if it.next() != Some("tw") {
                return Err(syntax(lineno, "expected `p tw <n> <m>`"));
            }
            let n: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(lineno, "bad vertex count"))?;
            declared_edges = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(lineno, "bad edge count"))?;
            graph = Some(LabeledGraph::new(n));
            continue;
        }
        let g = graph.as_mut().ok_or(FormatError::MissingHeader)?;
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(lineno, "bad endpoint"))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(lineno, "bad endpoint"))?;
        if u == 0 || v == 0 {
            return Err(syntax(lineno, "vertices are 1-indexed"));
        }
        let label = it.next().map(|t| t.to_string());
        if it.next().is_some() {
            return Err(syntax(lineno, "trailing tokens on edge line"));
        }
        let res = match label {
            Some(l) => g.add_edge_labeled(u - 1, v - 1, l),
            None => g.add_edge(u - 1, v - 1),
        };
        res.map_err(|e| FormatError::Graph(lineno, e))?;
    }
    let g = graph.ok_or(FormatError::MissingHeader)?;
    if g.edge_count() != declared_edges {
        return Err(syntax(0, format!(
            "header declares {} edges, found {}",
            declared_edges,
            g.edge_count()
        )));
    }
    Ok(g)
}

/// Writes a graph in `.gr` format. Non-default labels are emitted as the
/// third token.
pub fn write_gr(g: &LabeledGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p tw {} {}", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let label = g.label(*u, *v).unwrap();
        if label == crate::graph::DEFAULT_LABEL {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        } else {
            let _ = writeln!(out, "{} {} {}", u + 1, v + 1, label);
        }
    }
    out
}

/// Parses a `.td` decomposition.
pub fn parse_td(text: &str) -> Result<TreeDecomposition, FormatError> {
    let mut bags: Option<Vec<Option<Vec<usize>>>> = None;
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("s ") {
            if bags.is_some() {
                return Err(syntax(lineno, "duplicate header"));
            }
            let mut it = rest.split_whitespace();
            if it.next() != Some("td") {
                return Err(syntax(lineno, "expected `s td <#bags> <width+1> <n>`"));
            }
            let count: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(lineno, "bad bag count"))?;
            bags = Some(vec![None; count]);
            continue;
        }
        if let Some(rest) = line.strip_prefix("b ") {
            let bags = bags.as_mut().ok_or(FormatError::MissingHeader)?;
            let mut it = rest.split_whitespace();
            let id: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(lineno, "bad bag id"))?;
            if id == 0 || id > bags.len() {
                return Err(syntax(lineno, "bag id out of range"));
            }
            let mut content = Vec::new();
            for tok in it {
                let v: usize = tok
                    .parse()
                    .map_err(|_| syntax(lineno, "bad bag vertex"))?;
                if v == 0 {
                    return Err(syntax(lineno, "vertices are 1-indexed"));
                }
                content.push(v - 1);
            }
            content.sort_unstable();
            content.dedup();
            if bags[id - 1].replace(content).is_some() {
                return Err(syntax(lineno, "duplicate bag id"));
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let i: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(lineno, "bad tree edge"))?;
        let j: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(lineno, "bad tree edge"))?;
        if it.next().is_some() {
            return Err(syntax(lineno, "trailing tokens on tree edge line"));
        }
        if i == 0 || j == 0 {
            return Err(syntax(lineno, "bags are 1-indexed"));
        }
        tree_edges.push((i - 1, j - 1));
    }
    let bags = bags.ok_or(FormatError::MissingHeader)?;
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| syntax(0, format!("bag {} not declared", i + 1))))
        .collect::<Result<_, _>>()?;
    let count = bags.len();
    for &(i, j) in &tree_edges {
        if i >= count || j >= count {
            return Err(syntax(0, "tree edge references unknown bag"));
        }
    }
    TreeDecomposition::from_parts(bags, tree_edges).map_err(|e| syntax(0, e.to_string()))
}

/// Writes a decomposition in `.td` format.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let width_plus_1 = td.bags().iter().map(|b| b.len()).max().unwrap_or(0);
    let _ = writeln!(out, "s td {} {} {}", td.node_count(), width_plus_1, n);
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        let _ = writeln!(out);
    }
    for (i, j) in td.tree_edges() {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_gr_basic() {
        let g = parse_gr("c a path\np tw 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
    }

    #[test]
    fn parse_gr_labels() {
        let g = parse_gr("p tw 2 1\n1 2 red\n").unwrap();
        assert_eq!(g.label(0, 1), Some("red"));
    }

    #[test]
    fn parse_gr_errors() {
        assert!(parse_gr("1 2\n").is_err());
        assert!(parse_gr("p tw 2 1\n0 1\n").is_err());
        assert!(parse_gr("p tw 2 2\n1 2\n").is_err());
    }

    #[test]
    fn gr_round_trip() {
        let g = parse_gr("p tw 4 3\n1 2\n2 3 x\n3 4\n").unwrap();
        let again = parse_gr(&write_gr(&g)).unwrap();
        assert_eq!(again.edges(), g.edges());
        assert_eq!(again.label(1, 2), Some("x"));
    }

    #[test]
    fn td_round_trip() {
        let text = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let td = parse_td(text).unwrap();
        assert_eq!(td.node_count(), 2);
        assert_eq!(td.bags()[0], vec![0, 1]);
        let again = parse_td(&write_td(&td, 3)).unwrap();
        assert_eq!(again.bags(), td.bags());
    }

    #[test]
    fn td_rejects_cycles() {
        let text = "s td 3 2 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n2 3\n3 1\n";
        assert!(parse_td(text).is_err());
    }
}
