use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Structured name of a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexLabel {
    /// A group element id.
    Element { id: u32 },
    /// A right coset, by index.
    Coset { id: u32 },
    /// Vertex `(h^j, i)` of a multilayer graph.
    Layer { j: u32, i: u32 },
    /// Vertex `(x1, x2)` of a product.
    Product { first: u32, second: u32 },
    /// Outer vertex `x_i` or inner vertex `y_i` of a generalized Petersen graph.
    Petersen { outer: bool, i: u32 },
}

/// A simple undirected graph on `0..n` with adjacency bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    nbrs: Vec<Vec<u32>>,
    labels: Option<Vec<VertexLabel>>,
}

impl Graph {
    /// Builds a graph from an edge list; repeated edges collapse, loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameters(format!("loop at vertex {u}")));
            }
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        let nbrs = (0..n)
            .map(|u| {
                let row = &bits[u * words..(u + 1) * words];
                (0..n as u32).filter(|&v| row[v as usize / 64] >> (v % 64) & 1 == 1).collect()
            })
            .collect();
        Ok(Graph { n, words, bits, nbrs, labels: None })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, std::iter::empty()).expect("empty graph")
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("complete graph")
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n))).expect("cycle graph")
    }

    /// Attaches vertex labels; they must be pairwise distinct.
    pub fn with_labels(mut self, labels: Vec<VertexLabel>) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(Error::InvalidParameters("one label per vertex required".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::InvalidParameters("vertex labels are not distinct".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[VertexLabel]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&VertexLabel> {
        self.labels.as_ref().map(|l| &l[v])
    }

    pub fn vertex_of(&self, label: &VertexLabel) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.nbrs[u]
    }

    /// Adjacency row of `u` as a bitset of `ceil(n/64)` words.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.nbrs[u].len()
    }

    /// The common degree, if the graph is regular.
    pub fn valency(&self) -> Option<usize> {
        let d = self.nbrs.first().map_or(0, |x| x.len());
        self.nbrs.iter().all(|x| x.len() == d).then_some(d)
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(|x| x.len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.nbrs[u] {
                if (v as usize) > u {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Whether `perm` maps edges to edges. Vertex counts must agree.
    pub fn is_automorphism(&self, perm: &Permutation) -> bool {
        perm.degree() == self.n
            && (0..self.n).all(|u| {
                let pu = perm.apply(u);
                self.nbrs[u].iter().all(|&v| self.has_edge(pu, perm.apply(v as usize)))
            })
    }

    /// Whether `map` is an isomorphism from `self` onto `other`.
    pub fn is_isomorphism(&self, other: &Graph, map: &[u32]) -> bool {
        if self.n != other.n || map.len() != self.n || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &x in map {
            if x as usize >= self.n || std::mem::replace(&mut seen[x as usize], true) {
                return false;
            }
        }
        self.edges().iter().all(|&(u, v)| other.has_edge(map[u] as usize, map[v] as usize))
    }

    /// The graph with vertex `v` renamed `perm(v)`.
    pub fn relabel(&self, perm: &Permutation) -> Result<Graph> {
        if perm.degree() != self.n {
            return Err(Error::DegreeMismatch(perm.degree(), self.n));
        }
        Graph::from_edges(self.n, self.edges().into_iter().map(|(u, v)| (perm.apply(u), perm.apply(v))))
    }

    /// Induced subgraph; vertex `k` of the result is `vertices[k]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            if pos[v] != usize::MAX {
                return Err(Error::InvalidParameters(format!("vertex {v} repeated")));
            }
            pos[v] = k;
        }
        let mut edges = Vec::new();
        for (k, &v) in vertices.iter().enumerate() {
            for &w in &self.nbrs[v] {
                let pw = pos[w as usize];
                if pw != usize::MAX && pw > k {
                    edges.push((k, pw));
                }
            }
        }
        let g = Graph::from_edges(vertices.len(), edges)?;
        match &self.labels {
            Some(l) => g.with_labels(vertices.iter().map(|&v| l[v].clone()).collect()),
            None => Ok(g),
        }
    }

    /// Quotient by a partition: cells adjacent iff some edge joins them.
    pub fn quotient_graph(&self, cells: &[Vec<usize>]) -> Result<Graph> {
        let cell_of = partition_index(self.n, cells)?;
        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            let (a, b) = (cell_of[u], cell_of[v]);
            if a != b {
                edges.push((a, b));
            }
        }
        Graph::from_edges(cells.len(), edges)
    }

    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        if source >= self.n {
            return Err(Error::VertexOutOfRange { vertex: source, n: self.n });
        }
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap() + 1;
            for &v in &self.nbrs[u] {
                if dist[v as usize].is_none() {
                    dist[v as usize] = Some(d);
                    queue.push_back(v as usize);
                }
            }
        }
        Ok(dist)
    }

    /// Shortest-path length, `None` when `v` is unreachable from `u`.
    pub fn bfs_distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(self.bfs_distances(u)?[v])
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                k += 1;
                for &v in &self.nbrs[u] {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        comp.push(v as usize);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.nbrs[u] {
                    let v = v as usize;
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

/// `cell_of[v]` for a partition of `0..n`, validating the cells.
pub(crate) fn partition_index(n: usize, cells: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut cell_of = vec![usize::MAX; n];
    for (c, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::NotAPartition(format!("cell {c} is empty")));
        }
        for &v in cell {
            if v >= n {
                return Err(Error::NotAPartition(format!("vertex {v} out of range")));
            }
            if cell_of[v] != usize::MAX {
                return Err(Error::NotAPartition(format!("vertex {v} in two cells")));
            }
            cell_of[v] = c;
        }
    }
    if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::NotAPartition(format!("vertex {v} not covered")));
    }
    Ok(cell_of)
}
