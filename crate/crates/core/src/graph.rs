//! Simple undirected graphs over dense vertex ids and the edge-list text format.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list; duplicates are merged, self-loops rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Inserts edge `(u, v)`. Returns `Ok(false)` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(Error::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// True when `self` contains every edge of `other` (same vertex count).
    pub fn is_supergraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && other.edges().all(|(u, v)| self.has_edge(u, v))
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_count_without(None) == 1
    }

    /// Number of connected components after deleting `removed` (if any).
    pub fn component_count_without(&self, removed: Option<usize>) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        if let Some(x) = removed {
            seen[x] = true;
        }
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    /// Parses the edge-list format: `u v` lines, `#` comments, optional `n <count>` header.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut header: Option<usize> = None;
        let mut edges = Vec::new();
        let mut max_id: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "n" {
                if fields.len() != 2 {
                    return Err(parse_err("expected `n <count>`".into()));
                }
                if header.is_some() {
                    return Err(parse_err("duplicate `n` header".into()));
                }
                let count = fields[1].parse::<usize>().map_err(|e| parse_err(format!("bad vertex count: {e}")))?;
                header = Some(count);
                continue;
            }
            if fields.len() != 2 {
                return Err(parse_err(format!("expected two vertex ids, found `{line}`")));
            }
            let mut ids = [0usize; 2];
            for (slot, f) in ids.iter_mut().zip(&fields) {
                *slot = f.parse::<usize>().map_err(|e| parse_err(format!("bad vertex id `{f}`: {e}")))?;
            }
            if ids[0] == ids[1] {
                return Err(Error::SelfLoop(ids[0]));
            }
            max_id = Some(max_id.map_or(ids[0].max(ids[1]), |m: usize| m.max(ids[0]).max(ids[1])));
            edges.push((ids[0], ids[1]));
        }
        let implied = max_id.map_or(0, |m| m + 1);
        let n = match header {
            Some(h) if h < implied => {
                return Err(Error::VertexOutOfRange { vertex: implied - 1, n: h });
            }
            Some(h) => h,
            None => implied,
        };
        Graph::from_edges(n, edges)
    }

    /// `n <count>` header followed by one `u v` line per edge (u < v, sorted).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 * (self.m + 1));
        writeln!(out, "n {}", self.n()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Subgraph induced on `vertices`, relabelled to `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut h = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    h.add_edge(i, j).expect("ids in range");
                }
            }
        }
        h
    }
}
