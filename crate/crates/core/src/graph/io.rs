use std::fmt::Write as _;

use serde::Serialize;

use super::graph::{Graph, VertexLabel};
use crate::error::{Error, Result};

impl Graph {
    /// `n <V> m <E>` followed by one sorted `u v` line per edge, `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {} m {}\n", self.order(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match fields.as_slice() {
            ["n", n, "m", m] => (
                n.parse::<usize>().map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?,
                m.parse::<usize>().map_err(|e| Error::Parse(format!("bad edge count: {e}")))?,
            ),
            _ => return Err(Error::Parse(format!("expected `n <vertices> m <edges>`, got `{header}`"))),
        };
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad edge line `{line}`: {e}")))
            };
            let (u, v) = (next()?, next()?);
            if u >= n || v >= n {
                return Err(Error::Parse(format!("edge `{line}` has a vertex outside 0..{n}")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
        }
        let g = Graph::from_edges(n, edges).map_err(|e| Error::Parse(e.to_string()))?;
        if g.edge_count() != m {
            return Err(Error::Parse("edge list contains repeated edges".into()));
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.order() {
            match self.label(v) {
                Some(l) => {
                    let _ = writeln!(s, "  {v} [label=\"{}\"];", label_text(l));
                }
                None => {
                    let _ = writeln!(s, "  {v};");
                }
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }

    /// `{"n", "m", "edges", "labels"?}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Export<'a> {
            n: usize,
            m: usize,
            edges: Vec<(usize, usize)>,
            #[serde(skip_serializing_if = "Option::is_none")]
            labels: Option<&'a [VertexLabel]>,
        }
        serde_json::to_string(&Export { n: self.order(), m: self.edge_count(), edges: self.edges(), labels: self.labels() })
            .expect("graph export serializes")
    }
}

fn label_text(l: &VertexLabel) -> String {
    match l {
        VertexLabel::Element { id } => format!("g{id}"),
        VertexLabel::Coset { id } => format!("H{id}"),
        VertexLabel::Layer { j, i } => format!("({j},{i})"),
        VertexLabel::Product { first, second } => format!("({first},{second})"),
        VertexLabel::Petersen { outer: true, i } => format!("x{i}"),
        VertexLabel::Petersen { outer: false, i } => format!("y{i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generalized_petersen, multilayer_generalized_petersen, MPParams};

    #[test]
    fn edge_list_round_trip() {
        let g = multilayer_generalized_petersen(MPParams::new(27, 3, 9, 4).unwrap()).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("n 81 m 324\n"));
        let back = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn truncated_input_is_rejected() {
        let text = generalized_petersen(5, 2).unwrap().to_edge_list();
        let cut: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        assert!(Graph::parse_edge_list(&cut).is_err());
        assert!(Graph::parse_edge_list("n 3 m 1\n0 3\n").is_err());
        assert!(Graph::parse_edge_list("vertices 3\n").is_err());
    }

    #[test]
    fn dot_and_json() {
        let g = generalized_petersen(5, 2).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("0 [label=\"x0\"]"));
        assert_eq!(dot.matches(" -- ").count(), 15);
        let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(v["m"], 15);
        assert_eq!(v["labels"][5]["kind"], "petersen");
    }
}
