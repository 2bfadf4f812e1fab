//! Text and JSON formats for graphs.
//!
//! Text: a header `p <n> <m>` followed by `m` lines `e <u> <v>`, or
//! `e <u> <v> <num>/<den>` for weighted graphs. Blank lines and lines
//! starting with `c` are ignored. JSON: `{"n": .., "edges": [[u, v], ..]}`,
//! with a third string entry per edge for weights.

use serde::{Deserialize, Serialize};

use super::{Graph, WeightedGraph};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, String)>,
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        Graph::from_edges(j.n, j.edges)
    }
}

impl From<WeightedGraph> for WeightedGraphJson {
    fn from(g: WeightedGraph) -> Self {
        WeightedGraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v, w)| (u, v, rational::format(&w))).collect(),
        }
    }
}

impl TryFrom<WeightedGraphJson> for WeightedGraph {
    type Error = Error;

    fn try_from(j: WeightedGraphJson) -> Result<Self> {
        let edges = j
            .edges
            .iter()
            .map(|(u, v, w)| Ok((*u, *v, rational::parse(w)?)))
            .collect::<Result<Vec<_>>>()?;
        WeightedGraph::from_edges(j.n, edges)
    }
}

struct TextGraph {
    n: usize,
    edges: Vec<(usize, usize, Option<Rational>)>,
}

fn parse_text(input: &str) -> Result<TextGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::Parse { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let num =
            |s: &str| -> Result<usize> { s.parse().map_err(|_| err(format!("expected an integer, found {s:?}"))) };
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if fields.len() != 3 {
                    return Err(err("header must be `p <n> <m>`".into()));
                }
                header = Some((num(fields[1])?, num(fields[2])?));
            }
            "e" => {
                if header.is_none() {
                    return Err(err("edge before header".into()));
                }
                let w = match fields.len() {
                    3 => None,
                    4 => Some(rational::parse(fields[3]).map_err(|e| err(e.to_string()))?),
                    _ => return Err(err("edge must be `e <u> <v> [weight]`".into())),
                };
                edges.push((num(fields[1])?, num(fields[2])?, w));
            }
            other => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing `p <n> <m>` header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok(TextGraph { n, edges })
}

pub fn parse_graph_text(input: &str) -> Result<Graph> {
    let t = parse_text(input)?;
    if t.edges.iter().any(|e| e.2.is_some()) {
        return Err(Error::input("weighted edge in an unweighted graph file"));
    }
    Graph::from_edges(t.n, t.edges.into_iter().map(|(u, v, _)| (u, v)))
}

pub fn parse_weighted_text(input: &str) -> Result<WeightedGraph> {
    let t = parse_text(input)?;
    let edges = t
        .edges
        .into_iter()
        .map(|(u, v, w)| {
            w.map(|w| (u, v, w))
                .ok_or_else(|| Error::input(format!("edge ({u}, {v}) has no weight")))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedGraph::from_edges(t.n, edges)
}

pub fn write_graph_text(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.num_edges());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn write_weighted_text(g: &WeightedGraph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.num_edges());
    for (u, v, w) in g.edges() {
        out.push_str(&format!("e {u} {v} {}\n", rational::format(&w)));
    }
    out
}

/// Reads either format, choosing JSON when the input starts with `{`.
pub fn parse_graph(input: &str) -> Result<Graph> {
    if input.trim_start().starts_with('{') {
        let j: GraphJson = serde_json::from_str(input)?;
        Graph::try_from(j)
    } else {
        parse_graph_text(input)
    }
}

pub fn parse_weighted_graph(input: &str) -> Result<WeightedGraph> {
    if input.trim_start().starts_with('{') {
        let j: WeightedGraphJson = serde_json::from_str(input)?;
        WeightedGraph::try_from(j)
    } else {
        parse_weighted_text(input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let text = write_graph_text(&g);
        assert_eq!(text, "p 4 4\ne 0 1\ne 0 3\ne 1 2\ne 2 3\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        assert_eq!(parse_graph(&json).unwrap(), g);
    }

    #[test]
    fn weighted_round_trip() {
        let text = "c a comment\np 3 2\ne 0 1 6/1\ne 1 2 3/2\n";
        let g = parse_weighted_graph(text).unwrap();
        assert_eq!(g.weight(2, 1), Some(Rational::new(3, 2)));
        assert_eq!(write_weighted_text(&g), "p 3 2\ne 0 1 6/1\ne 1 2 3/2\n");
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(parse_weighted_graph(&json).unwrap(), g);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(
            parse_graph_text("p 2 1\ne 0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_graph_text("e 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_graph_text("p 2 2\ne 0 1\n").is_err());
        assert!(parse_graph_text("p 2 1\ne 0 1 1/2\n").is_err());
        assert!(parse_weighted_text("p 2 1\ne 0 1\n").is_err());
    }
}
