//! Brute-force oracles for small graphs. None of these share code with the
//! pipeline beyond the `Graph` type.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const EXACT_PATHWIDTH_LIMIT: usize = 20;
pub const SUBDIVISION_LIMIT: usize = 64;
pub const MENGER_LIMIT: usize = 20;

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::SizeGuard { n, limit });
    }
    Ok(())
}

/// Exact pathwidth as the vertex separation number, by dynamic programming over
/// vertex subsets: `f(S) = max(|boundary(S)|, min_v f(S - v))`.
pub fn exact_pathwidth(g: &Graph) -> Result<usize> {
    let n = g.n();
    guard(n, EXACT_PATHWIDTH_LIMIT)?;
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w))).collect();
    let full = (1u32 << n) - 1;
    let mut f = vec![u8::MAX; 1 << n];
    f[0] = 0;
    for s in 1..=full {
        let outside = !s & full;
        let boundary = (0..n).filter(|&v| s & (1 << v) != 0 && adj[v] & outside != 0).count() as u8;
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.min(f[(s & !(1 << v)) as usize]);
        }
        f[s as usize] = best.max(boundary);
    }
    Ok(f[full as usize] as usize)
}

/// A subgraph that is a subdivision of `K4` or `K2,3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubdivisionWitness {
    /// Four pairwise adjacent vertices.
    K4 { branch: [usize; 4] },
    /// Three internally disjoint paths of length at least 2 between `ends`.
    K23 { ends: (usize, usize), paths: Vec<Vec<usize>> },
}

impl fmt::Display for SubdivisionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubdivisionWitness::K4 { branch } => write!(f, "K4 on {branch:?}"),
            SubdivisionWitness::K23 { ends, paths } => {
                write!(f, "K2,3 subdivision between {} and {}:", ends.0, ends.1)?;
                for p in paths {
                    let s: Vec<String> = p.iter().map(usize::to_string).collect();
                    write!(f, " [{}]", s.join("-"))?;
                }
                Ok(())
            }
        }
    }
}

/// Searches for a `K4` or `K2,3` subdivision.
///
/// Any such subdivision yields either a `K4` subgraph or two vertices joined by
/// three internally disjoint paths of length at least two, and conversely.
pub fn forbidden_subdivision_search(g: &Graph) -> Result<Option<SubdivisionWitness>> {
    let n = g.n();
    guard(n, SUBDIVISION_LIMIT)?;
    for a in 0..n {
        let na: Vec<usize> = g.neighbors(a).iter().copied().filter(|&w| w > a).collect();
        for (i, &b) in na.iter().enumerate() {
            for (j, &c) in na.iter().enumerate().skip(i + 1) {
                if !g.has_edge(b, c) {
                    continue;
                }
                for &d in &na[j + 1..] {
                    if g.has_edge(b, d) && g.has_edge(c, d) {
                        return Ok(Some(SubdivisionWitness::K4 { branch: [a, b, c, d] }));
                    }
                }
            }
        }
    }
    for a in 0..n {
        if g.degree(a) < 3 {
            continue;
        }
        for b in a + 1..n {
            if g.degree(b) < 3 {
                continue;
            }
            let paths = disjoint_paths(g, a, b, 3, true);
            if paths.len() >= 3 {
                return Ok(Some(SubdivisionWitness::K23 { ends: (a, b), paths }));
            }
        }
    }
    Ok(None)
}

/// Maximum number of internally vertex-disjoint paths between `s` and `t`
/// (the edge `st`, if present, counts as one path).
pub fn menger_consecutive(block: &Graph, s: usize, t: usize) -> Result<usize> {
    guard(block.n(), MENGER_LIMIT)?;
    if s == t || s >= block.n() || t >= block.n() {
        return Err(Error::Precondition("menger_consecutive needs two distinct vertices of the block".into()));
    }
    let direct = usize::from(block.has_edge(s, t));
    Ok(direct + disjoint_paths(block, s, t, usize::MAX, true).len())
}

/// Up to `limit` internally disjoint `s`-`t` paths avoiding the edge `st` when
/// `skip_direct` holds, by unit-capacity augmenting paths on the split graph.
fn disjoint_paths(g: &Graph, s: usize, t: usize, limit: usize, skip_direct: bool) -> Vec<Vec<usize>> {
    let n = g.n();
    // Node 2v is v_in, 2v+1 is v_out. Arcs are stored in pairs (arc, reverse).
    let mut head: Vec<usize> = Vec::new();
    let mut cap: Vec<i32> = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut add = |a: usize, b: usize, c: i32, head: &mut Vec<usize>, cap: &mut Vec<i32>| {
        out[a].push(head.len());
        head.push(b);
        cap.push(c);
        out[b].push(head.len());
        head.push(a);
        cap.push(0);
    };
    for v in 0..n {
        let c = if v == s || v == t { n as i32 } else { 1 };
        add(2 * v, 2 * v + 1, c, &mut head, &mut cap);
    }
    for (u, v) in g.edges() {
        if skip_direct && ((u == s && v == t) || (u == t && v == s)) {
            continue;
        }
        add(2 * u + 1, 2 * v, 1, &mut head, &mut cap);
        add(2 * v + 1, 2 * u, 1, &mut head, &mut cap);
    }
    let (src, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < limit {
        let mut via = vec![usize::MAX; 2 * n];
        let mut seen = vec![false; 2 * n];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &e in &out[x] {
                let y = head[e];
                if cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        if !seen[sink] {
            break;
        }
        let mut y = sink;
        while y != src {
            let e = via[y];
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            y = head[e ^ 1];
        }
        flow += 1;
    }
    // Decompose the flow: follow saturated vertex-to-vertex arcs from s.
    let mut used: Vec<bool> = vec![false; head.len()];
    let mut paths = Vec::with_capacity(flow);
    for _ in 0..flow {
        let mut path = vec![s];
        let mut x = src;
        while x != sink {
            let e = out[x]
                .iter()
                .copied()
                .find(|&e| e % 2 == 0 && cap[e] == 0 && !used[e] && head[e] / 2 != x / 2)
                .expect("flow decomposes into paths");
            used[e] = true;
            let v = head[e] / 2;
            path.push(v);
            x = if v == t { sink } else { 2 * v + 1 };
        }
        paths.push(path);
    }
    paths
}

/// Cut vertices by deleting each vertex and counting components.
pub fn brute_force_cut_vertices(g: &Graph) -> Vec<usize> {
    let base = g.component_count_without(None);
    (0..g.n()).filter(|&v| g.component_count_without(Some(v)) > base).collect()
}

/// Every Hamiltonian cycle, each listed once: starting at 0, with the second
/// vertex smaller than the last.
pub fn hamiltonian_cycles(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    guard(n, 12)?;
    let mut found = Vec::new();
    if n < 3 {
        return Ok(found);
    }
    let mut path = vec![0];
    let mut on = vec![false; n];
    on[0] = true;
    fn extend(g: &Graph, path: &mut Vec<usize>, on: &mut [bool], found: &mut Vec<Vec<usize>>) {
        let n = g.n();
        let u = *path.last().unwrap();
        if path.len() == n {
            if g.has_edge(u, 0) && path[1] < path[n - 1] {
                found.push(path.clone());
            }
            return;
        }
        for &w in g.neighbors(u) {
            if !on[w] {
                on[w] = true;
                path.push(w);
                extend(g, path, on, found);
                path.pop();
                on[w] = false;
            }
        }
    }
    extend(g, &mut path, &mut on, &mut found);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn pathwidth_examples() {
        assert_eq!(exact_pathwidth(&Graph::new(1)).unwrap(), 0);
        assert_eq!(exact_pathwidth(&cycle(5)).unwrap(), 2);
        assert_eq!(exact_pathwidth(&Graph::from_edges(6, (0..5).map(|i| (i, i + 1))).unwrap()).unwrap(), 1);
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(exact_pathwidth(&k4).unwrap(), 3);
        assert_eq!(exact_pathwidth(&Graph::new(21)), Err(Error::SizeGuard { n: 21, limit: 20 }));
    }

    #[test]
    fn subdivision_examples() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(matches!(forbidden_subdivision_search(&k4).unwrap(), Some(SubdivisionWitness::K4 { .. })));
        let k23 = g(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
        match forbidden_subdivision_search(&k23).unwrap() {
            Some(SubdivisionWitness::K23 { ends, paths }) => {
                assert_eq!(ends, (0, 1));
                assert_eq!(paths.len(), 3);
                for p in &paths {
                    assert!(p.len() >= 3);
                    assert!(p.windows(2).all(|w| k23.has_edge(w[0], w[1])));
                }
            }
            other => panic!("expected K2,3, got {other:?}"),
        }
        let tree = g(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]);
        assert_eq!(forbidden_subdivision_search(&tree).unwrap(), None);
        // Subdivided K4: replace edge (0,1) by 0-4-1.
        let sk4 = g(5, &[(0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(forbidden_subdivision_search(&sk4).unwrap().is_some());
        assert!(forbidden_subdivision_search(&cycle(8)).unwrap().is_none());
    }

    #[test]
    fn menger_examples() {
        let tri = cycle(3);
        assert_eq!(menger_consecutive(&tri, 0, 1).unwrap(), 2);
        assert_eq!(menger_consecutive(&cycle(6), 2, 3).unwrap(), 2);
        // Fan: 0 joined to every vertex of the path 1..5, closed by (5, 0).
        let fan = g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2), (0, 3), (0, 4), (0, 5)]);
        assert_eq!(menger_consecutive(&fan, 0, 1).unwrap(), 2);
        // Non-consecutive pair in the fan has more.
        assert_eq!(menger_consecutive(&fan, 0, 3).unwrap(), 3);
    }

    #[test]
    fn cut_vertices_and_hamiltonian_cycles() {
        assert_eq!(brute_force_cut_vertices(&g(3, &[(0, 1), (1, 2)])), vec![1]);
        let k4e = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert_eq!(hamiltonian_cycles(&k4e).unwrap(), vec![vec![0, 1, 2, 3]]);
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(hamiltonian_cycles(&k4).unwrap().len(), 3);
    }
}
