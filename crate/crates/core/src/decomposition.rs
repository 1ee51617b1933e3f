//! Tree and path decompositions, the range/gap index algebra, the edge-addition
//! update rule, validators and text formats.
//!
//! Path decomposition bags are addressed 1-based throughout the public API.

use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::graph::Graph;

fn normalize(mut bag: Vec<usize>) -> Vec<usize> {
    bag.sort_unstable();
    bag.dedup();
    bag
}

fn bag_width(bags: &[Vec<usize>]) -> Result<usize> {
    if bags.is_empty() {
        return Err(Error::EmptyDecomposition);
    }
    Ok(bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1))
}

/// Sequence of bags `X_1, ..., X_N`; each bag is a sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathDecomposition {
    bags: Vec<Vec<usize>>,
}

/// Result of `Gap(v1, v2)`: empty when the two ranges intersect, otherwise the
/// inclusive index interval over which `insert` must be added.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gap {
    Empty,
    Interval { lo: usize, hi: usize, insert: usize },
}

impl Gap {
    pub fn is_empty(&self) -> bool {
        matches!(self, Gap::Empty)
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gap::Empty => f.write_str("gap empty"),
            Gap::Interval { lo, hi, insert } => write!(f, "gap {lo}..{hi} inserted {insert}"),
        }
    }
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<usize>>) -> Self {
        PathDecomposition { bags: bags.into_iter().map(normalize).collect() }
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Bag `X_t`, `1 <= t <= len()`.
    pub fn bag(&self, t: usize) -> &[usize] {
        &self.bags[t - 1]
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn width(&self) -> Result<usize> {
        bag_width(&self.bags)
    }

    /// Total number of vertex occurrences over all bags.
    pub fn size(&self) -> usize {
        self.bags.iter().map(Vec::len).sum()
    }

    pub fn first_index(&self, v: usize) -> Result<usize> {
        self.range(v).map(|r| r.0)
    }

    pub fn last_index(&self, v: usize) -> Result<usize> {
        self.range(v).map(|r| r.1)
    }

    /// `[FirstIndex(v), LastIndex(v)]`, by a linear scan.
    pub fn range(&self, v: usize) -> Result<(usize, usize)> {
        let mut hits = self.bags.iter().enumerate().filter(|(_, b)| b.binary_search(&v).is_ok()).map(|(i, _)| i + 1);
        let first = hits.next().ok_or(Error::AbsentVertex(v))?;
        Ok((first, hits.next_back().unwrap_or(first)))
    }

    pub fn gap(&self, v1: usize, v2: usize) -> Result<Gap> {
        gap_of(self.range(v1)?, self.range(v2)?, v1, v2)
    }

    /// Per-vertex ranges for vertices `0..n`, computed in one pass.
    pub fn ranges(&self, n: usize) -> Ranges {
        Ranges::of(self, n)
    }

    /// Adds `v` to bag `t`; returns whether it was new.
    pub fn insert(&mut self, t: usize, v: usize) -> bool {
        let bag = &mut self.bags[t - 1];
        match bag.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                bag.insert(pos, v);
                true
            }
        }
    }

    /// Applies a gap in place; returns the number of bags that gained a vertex.
    pub fn apply_gap(&mut self, gap: Gap) -> usize {
        match gap {
            Gap::Empty => 0,
            Gap::Interval { lo, hi, insert } => (lo..=hi).filter(|&t| self.insert(t, insert)).count(),
        }
    }

    /// Path decomposition of `g + (v1, v2)` obtained by inserting the endpoint
    /// with the earlier range over the gap.
    pub fn add_edge_update(&self, v1: usize, v2: usize) -> Result<PathDecomposition> {
        if v1 == v2 {
            return Err(Error::SelfLoop(v1));
        }
        let gap = self.gap(v1, v2)?;
        let mut out = self.clone();
        out.apply_gap(gap);
        Ok(out)
    }

    /// One line per bag, empty bags dropped.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for bag in self.bags.iter().filter(|b| !b.is_empty()) {
            let line: Vec<String> = bag.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    /// Inverse of [`PathDecomposition::to_text`]; an empty line is an empty bag.
    pub fn parse(text: &str) -> Result<PathDecomposition> {
        let mut bags = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let mut bag = Vec::new();
            for f in line.split_whitespace() {
                bag.push(
                    f.parse::<usize>()
                        .map_err(|e| Error::Parse { line: idx + 1, message: format!("bad vertex id `{f}`: {e}") })?,
                );
            }
            bags.push(bag);
        }
        Ok(PathDecomposition::new(bags))
    }
}

fn gap_of(r1: (usize, usize), r2: (usize, usize), v1: usize, v2: usize) -> Result<Gap> {
    Ok(if r1.1 < r2.0 {
        Gap::Interval { lo: r1.1 + 1, hi: r2.0, insert: v1 }
    } else if r2.1 < r1.0 {
        Gap::Interval { lo: r2.1 + 1, hi: r1.0, insert: v2 }
    } else {
        Gap::Empty
    })
}

/// Frozen `FirstIndex` / `LastIndex` table of one decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranges {
    // 0 marks an absent vertex.
    first: Vec<usize>,
    last: Vec<usize>,
}

impl Ranges {
    pub fn of(pd: &PathDecomposition, n: usize) -> Ranges {
        let mut first = vec![0; n];
        let mut last = vec![0; n];
        for (i, bag) in pd.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    continue;
                }
                if first[v] == 0 {
                    first[v] = i + 1;
                }
                last[v] = i + 1;
            }
        }
        Ranges { first, last }
    }

    pub fn range(&self, v: usize) -> Result<(usize, usize)> {
        match self.first.get(v) {
            Some(&f) if f > 0 => Ok((f, self.last[v])),
            _ => Err(Error::AbsentVertex(v)),
        }
    }

    pub fn first_index(&self, v: usize) -> Result<usize> {
        self.range(v).map(|r| r.0)
    }

    pub fn last_index(&self, v: usize) -> Result<usize> {
        self.range(v).map(|r| r.1)
    }

    pub fn gap(&self, v1: usize, v2: usize) -> Result<Gap> {
        gap_of(self.range(v1)?, self.range(v2)?, v1, v2)
    }
}

/// First violated decomposition condition, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownVertex(usize),
    MissingVertex(usize),
    NotContiguous(usize),
    Disconnected(usize),
    UncoveredEdge(usize, usize),
    NotATree,
    EmptyDecomposition,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex(v) => write!(f, "bag mentions vertex {v} outside the graph"),
            Violation::MissingVertex(v) => write!(f, "vertex {v} is in no bag"),
            Violation::NotContiguous(v) => write!(f, "occurrences of vertex {v} are not contiguous"),
            Violation::Disconnected(v) => write!(f, "nodes containing vertex {v} do not induce a subtree"),
            Violation::UncoveredEdge(u, v) => write!(f, "edge ({u},{v}) is in no bag"),
            Violation::NotATree => f.write_str("decomposition graph is not a tree"),
            Violation::EmptyDecomposition => f.write_str("decomposition has no bags"),
        }
    }
}

/// Checks coverage, contiguity, then edge coverage.
pub fn validate_path_decomposition(g: &Graph, pd: &PathDecomposition) -> std::result::Result<(), Violation> {
    let n = g.n();
    if pd.is_empty() {
        return if n == 0 { Ok(()) } else { Err(Violation::EmptyDecomposition) };
    }
    let mut first = vec![0usize; n];
    let mut last = vec![0usize; n];
    let mut count = vec![0usize; n];
    for (i, bag) in pd.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::UnknownVertex(v));
            }
            if first[v] == 0 {
                first[v] = i + 1;
            }
            last[v] = i + 1;
            count[v] += 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| first[v] == 0) {
        return Err(Violation::MissingVertex(v));
    }
    if let Some(v) = (0..n).find(|&v| last[v] - first[v] + 1 != count[v]) {
        return Err(Violation::NotContiguous(v));
    }
    // With contiguous ranges, a shared bag exists iff the ranges overlap.
    for (u, v) in g.edges() {
        if first[u].max(first[v]) > last[u].min(last[v]) {
            return Err(Violation::UncoveredEdge(u, v));
        }
    }
    Ok(())
}

/// Bags on the nodes of a tree, optionally with a vertex-to-node bijection.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    vertex_to_node: Option<Vec<usize>>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        TreeDecomposition { bags: bags.into_iter().map(normalize).collect(), edges, vertex_to_node: None }
    }

    pub fn with_bijection(mut self, vertex_to_node: Vec<usize>) -> Self {
        self.vertex_to_node = Some(vertex_to_node);
        self
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bag(&self, t: usize) -> &[usize] {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_to_node(&self) -> Option<&[usize]> {
        self.vertex_to_node.as_deref()
    }

    /// Node `b(v)` of the bijection, if present.
    pub fn node_of(&self, v: usize) -> Option<usize> {
        self.vertex_to_node.as_ref().and_then(|m| m.get(v).copied())
    }

    pub fn insert(&mut self, t: usize, v: usize) -> bool {
        let bag = &mut self.bags[t];
        match bag.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                bag.insert(pos, v);
                true
            }
        }
    }

    pub fn width(&self) -> Result<usize> {
        bag_width(&self.bags)
    }

    /// The decomposition tree as a graph on node ids.
    pub fn tree(&self) -> Result<Graph> {
        Graph::from_edges(self.bags.len(), self.edges.iter().copied())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, bag) in self.bags.iter().enumerate() {
            let line: Vec<String> = bag.iter().map(usize::to_string).collect();
            if line.is_empty() {
                writeln!(out, "node {t}:").unwrap();
            } else {
                writeln!(out, "node {t}: {}", line.join(" ")).unwrap();
            }
        }
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        for (a, b) in edges {
            writeln!(out, "edge {a} {b}").unwrap();
        }
        out
    }

    /// Parses `node <id>: v ...` and `edge <a> <b>` lines; node ids must be `0..N`.
    pub fn parse(text: &str) -> Result<TreeDecomposition> {
        let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let num = |s: &str| s.parse::<usize>().map_err(|e| err(format!("bad id `{s}`: {e}")));
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("node ") {
                let (id, verts) = rest.split_once(':').ok_or_else(|| err("expected `node <id>: ...`".into()))?;
                let id = num(id.trim())?;
                let bag = verts.split_whitespace().map(num).collect::<Result<Vec<_>>>()?;
                if bags.len() <= id {
                    bags.resize(id + 1, None);
                }
                if bags[id].replace(bag).is_some() {
                    return Err(err(format!("node {id} listed twice")));
                }
            } else if let Some(rest) = line.strip_prefix("edge ") {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 2 {
                    return Err(err("expected `edge <a> <b>`".into()));
                }
                edges.push((num(f[0])?, num(f[1])?));
            } else {
                return Err(err(format!("unrecognized line `{line}`")));
            }
        }
        let n = bags.len();
        let bags = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or(Error::Parse { line: 0, message: format!("node {i} missing") }))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::Parse { line: 0, message: format!("edge ({a},{b}) names an unknown node") });
        }
        Ok(TreeDecomposition::new(bags, edges))
    }
}

fn is_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 || edges.len() != n - 1 {
        return n == 0 && edges.is_empty();
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n || a == b {
            return false;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == n
}

/// Checks the tree shape, coverage, subtree connectivity, then edge coverage.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), Violation> {
    let n = g.n();
    let nodes = td.bags.len();
    if nodes == 0 {
        return if n == 0 { Ok(()) } else { Err(Violation::EmptyDecomposition) };
    }
    if !is_tree(nodes, &td.edges) {
        return Err(Violation::NotATree);
    }
    let mut count = vec![0usize; n];
    for bag in &td.bags {
        for &v in bag {
            if v >= n {
                return Err(Violation::UnknownVertex(v));
            }
            count[v] += 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| count[v] == 0) {
        return Err(Violation::MissingVertex(v));
    }
    // In a tree, a node set is connected iff it spans exactly |set| - 1 edges.
    let mut inner = vec![0usize; n];
    for &(a, b) in &td.edges {
        let (ba, bb) = (&td.bags[a], &td.bags[b]);
        for &v in ba {
            if bb.binary_search(&v).is_ok() {
                inner[v] += 1;
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| inner[v] + 1 != count[v]) {
        return Err(Violation::Disconnected(v));
    }
    let mut covered: HashSet<(usize, usize)> = HashSet::new();
    for bag in &td.bags {
        for (i, &a) in bag.iter().enumerate() {
            for &b in &bag[i + 1..] {
                covered.insert((a, b));
            }
        }
    }
    if let Some((u, v)) = g.edges().find(|e| !covered.contains(e)) {
        return Err(Violation::UncoveredEdge(u, v));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pd(bags: &[&[usize]]) -> PathDecomposition {
        PathDecomposition::new(bags.iter().map(|b| b.to_vec()).collect())
    }

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn index_queries() {
        let p = pd(&[&[0], &[0, 1], &[1]]);
        assert_eq!(p.range(0).unwrap(), (1, 2));
        assert_eq!(p.first_index(1).unwrap(), 2);
        assert_eq!(pd(&[&[2]]).range(5), Err(Error::AbsentVertex(5)));
    }

    #[test]
    fn gap_cases() {
        // ranges [1,3] and [2,5]
        let p = pd(&[&[0], &[0, 1], &[0, 1], &[1], &[1]]);
        assert_eq!(p.gap(0, 1).unwrap(), Gap::Empty);
        // range(v1)=[1,2], range(v2)=[4,6]
        let p = pd(&[&[0], &[0], &[], &[1], &[1], &[1]]);
        assert_eq!(p.gap(0, 1).unwrap(), Gap::Interval { lo: 3, hi: 4, insert: 0 });
        // range(v2)=[1,1], range(v1)=[3,3]
        let p = pd(&[&[1], &[], &[0]]);
        assert_eq!(p.gap(0, 1).unwrap(), Gap::Interval { lo: 2, hi: 3, insert: 1 });
    }

    #[test]
    fn edge_update_examples() {
        let p = pd(&[&[0], &[1], &[2]]);
        assert_eq!(p.add_edge_update(0, 2).unwrap(), pd(&[&[0], &[0, 1], &[0, 2]]));
        let p = pd(&[&[0, 1], &[1, 2]]);
        let q = p.add_edge_update(0, 2).unwrap();
        assert_eq!(q, pd(&[&[0, 1], &[0, 1, 2]]));
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(validate_path_decomposition(&tri, &q), Ok(()));
        let same = pd(&[&[0, 1, 2]]);
        assert_eq!(same.add_edge_update(0, 2).unwrap(), same);
    }

    #[test]
    fn validator_examples() {
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(validate_path_decomposition(&edge, &pd(&[&[0, 1]])), Ok(()));
        assert_eq!(validate_path_decomposition(&path3(), &pd(&[&[0, 1], &[2]])), Err(Violation::UncoveredEdge(1, 2)));
        assert_eq!(
            validate_path_decomposition(&path3(), &pd(&[&[0], &[1], &[0, 2]])),
            Err(Violation::NotContiguous(0))
        );
        assert_eq!(validate_path_decomposition(&path3(), &pd(&[&[0, 1]])), Err(Violation::MissingVertex(2)));
    }

    #[test]
    fn widths() {
        assert_eq!(pd(&[&[0, 1]]).width().unwrap(), 1);
        assert_eq!(pd(&[&[0], &[1]]).width().unwrap(), 0);
        assert_eq!(pd(&[&[0, 1, 2, 3]]).width().unwrap(), 3);
        assert_eq!(pd(&[]).width(), Err(Error::EmptyDecomposition));
    }

    #[test]
    fn text_round_trip_strips_empty_bags() {
        let p = pd(&[&[3, 1], &[], &[2]]);
        assert_eq!(p.to_text(), "1 3\n2\n");
        let q = PathDecomposition::parse("1 3\n\n2\n").unwrap();
        assert_eq!(q.len(), 3);
        assert!(q.bag(2).is_empty());
        assert!(PathDecomposition::parse("1 x").is_err());
    }

    #[test]
    fn tree_decomposition_checks() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert_eq!(validate_tree_decomposition(&path3(), &td), Ok(()));
        let back = TreeDecomposition::parse(&td.to_text()).unwrap();
        assert_eq!(back, td);
        let split = TreeDecomposition::new(vec![vec![0, 1], vec![2], vec![1, 2]], vec![(0, 1), (1, 2)]);
        assert_eq!(validate_tree_decomposition(&path3(), &split), Err(Violation::Disconnected(1)));
        let forest = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![]);
        assert_eq!(validate_tree_decomposition(&path3(), &forest), Err(Violation::NotATree));
    }

    proptest! {
        #[test]
        fn update_keeps_validity(n in 2usize..9, seq in proptest::collection::vec((0usize..9, 0usize..9), 1..20)) {
            // Start from the trivial decomposition of the empty graph, one vertex per bag.
            let mut g = Graph::new(n);
            let mut p = PathDecomposition::new((0..n).map(|v| vec![v]).collect());
            for (a, b) in seq {
                let (a, b) = (a % n, b % n);
                if a == b { continue; }
                let before = p.clone();
                let gap = p.gap(a, b).unwrap();
                p = p.add_edge_update(a, b).unwrap();
                g.add_edge(a, b).unwrap();
                prop_assert_eq!(validate_path_decomposition(&g, &p), Ok(()));
                prop_assert!(p.width().unwrap() <= before.width().unwrap() + 1);
                let together = before.bags().iter().any(|bag| bag.contains(&a) && bag.contains(&b));
                prop_assert_eq!(gap.is_empty(), together);
                for v in 0..n {
                    let (f0, l0) = before.range(v).unwrap();
                    let (f1, l1) = p.range(v).unwrap();
                    prop_assert!(f1 <= f0 && l1 >= l0);
                }
            }
        }
    }
}
