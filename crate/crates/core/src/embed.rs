//! Outerplanarity recognition by degree-2 reduction, and the fixed cyclic order
//! (Hamiltonian cycle) of every non-trivial block.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::blocks::{biconnected_blocks, Block, RootedBlockTree};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Why a graph was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A block with more than `2k - 3` edges on `k` vertices.
    EdgeBound { block: usize, vertices: usize, edges: usize },
    /// The reduction got stuck: every remaining vertex has degree at least 3.
    Irreducible { block: usize, remaining: Vec<usize> },
    /// Two removed vertices were both attached to the same outer edge.
    EdgeConflict { block: usize, u: usize, w: usize },
    /// Two chords of the reconstructed cycle cross.
    CrossingChords { block: usize, first: (usize, usize), second: (usize, usize) },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::EdgeBound { block, vertices, edges } => {
                write!(f, "block {block} has {edges} edges on {vertices} vertices (> 2k-3)")
            }
            Witness::Irreducible { block, remaining } => {
                write!(f, "block {block} has no degree-2 vertex among {remaining:?}")
            }
            Witness::EdgeConflict { block, u, w } => {
                write!(f, "block {block}: edge ({u},{w}) would need to lie on the outer cycle twice")
            }
            Witness::CrossingChords { block, first, second } => {
                write!(f, "block {block}: chords {first:?} and {second:?} cross")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterplanarCertificate {
    /// Per block id: the unoriented outer cycle (bridges: both endpoints).
    cycles: Vec<Vec<usize>>,
    witness: Option<Witness>,
}

impl OuterplanarCertificate {
    pub fn is_outerplanar(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// Outer cycle of each block, indexed like [`biconnected_blocks`]. Empty when rejected.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }
}

/// Decides outerplanarity of a connected graph block by block.
pub fn check_outerplanar(g: &Graph) -> Result<OuterplanarCertificate> {
    if g.n() == 1 {
        return Ok(OuterplanarCertificate { cycles: Vec::new(), witness: None });
    }
    let blocks = biconnected_blocks(g)?;
    let mut cycles = Vec::with_capacity(blocks.len());
    for (id, blk) in blocks.iter().enumerate() {
        match outer_cycle(g, id, blk) {
            Ok(c) => cycles.push(c),
            Err(w) => return Ok(OuterplanarCertificate { cycles: Vec::new(), witness: Some(w) }),
        }
    }
    Ok(OuterplanarCertificate { cycles, witness: None })
}

fn outer_cycle(g: &Graph, id: usize, blk: &Block) -> std::result::Result<Vec<usize>, Witness> {
    let verts = blk.vertices();
    let k = verts.len();
    if blk.is_trivial() {
        return Ok(verts.to_vec());
    }
    if blk.edges().len() > 2 * k - 3 {
        return Err(Witness::EdgeBound { block: id, vertices: k, edges: blk.edges().len() });
    }
    let local = |v: usize| verts.binary_search(&v).unwrap();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for &(a, b) in blk.edges() {
        let (a, b) = (local(a), local(b));
        adj[a].insert(b);
        adj[b].insert(a);
    }
    // Degrees never increase during the reduction, so queue entries stay valid
    // until the vertex is removed.
    let mut queue: VecDeque<usize> = (0..k).filter(|&v| adj[v].len() == 2).collect();
    let mut removed = vec![false; k];
    let mut alive = k;
    let mut removals: Vec<(usize, usize, usize)> = Vec::with_capacity(k);
    while alive > 3 {
        let Some(v) = queue.pop_front() else {
            let remaining = (0..k).filter(|&v| !removed[v]).map(|v| verts[v]).collect();
            return Err(Witness::Irreducible { block: id, remaining });
        };
        if removed[v] {
            continue;
        }
        let mut it = adj[v].iter();
        let (u, w) = (*it.next().unwrap(), *it.next().unwrap());
        removed[v] = true;
        alive -= 1;
        adj[u].remove(&v);
        adj[w].remove(&v);
        adj[v].clear();
        if adj[u].insert(w) {
            adj[w].insert(u);
        }
        for x in [u, w] {
            if adj[x].len() == 2 {
                queue.push_back(x);
            }
        }
        removals.push((v, u, w));
    }
    let rest: Vec<usize> = (0..k).filter(|&v| !removed[v]).collect();
    if rest.len() != 3 || rest.iter().any(|&v| adj[v].len() != 2) {
        return Err(Witness::Irreducible { block: id, remaining: rest.iter().map(|&v| verts[v]).collect() });
    }
    let mut next = vec![usize::MAX; k];
    next[rest[0]] = rest[1];
    next[rest[1]] = rest[2];
    next[rest[2]] = rest[0];
    for &(v, u, w) in removals.iter().rev() {
        let (a, b) = if next[u] == w {
            (u, w)
        } else if next[w] == u {
            (w, u)
        } else {
            return Err(Witness::EdgeConflict { block: id, u: verts[u], w: verts[w] });
        };
        next[a] = v;
        next[v] = b;
    }
    let mut cycle = Vec::with_capacity(k);
    let mut cur = 0;
    for _ in 0..k {
        cycle.push(verts[cur]);
        cur = next[cur];
    }
    if cur != 0 {
        return Err(Witness::Irreducible { block: id, remaining: cycle });
    }
    check_laminar(g, id, blk, &cycle)?;
    Ok(cycle)
}

// Every cycle step must be a real edge and the remaining edges (chords) must
// nest like parentheses along the cycle.
fn check_laminar(g: &Graph, id: usize, blk: &Block, cycle: &[usize]) -> std::result::Result<(), Witness> {
    let k = cycle.len();
    let verts = blk.vertices();
    let mut pos = vec![0usize; k];
    for (i, &v) in cycle.iter().enumerate() {
        pos[verts.binary_search(&v).unwrap()] = i;
    }
    for i in 0..k {
        let (a, b) = (cycle[i], cycle[(i + 1) % k]);
        if !g.has_edge(a, b) {
            return Err(Witness::Irreducible { block: id, remaining: cycle.to_vec() });
        }
    }
    let mut chords: Vec<(usize, usize)> = blk
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (pa, pb) = (pos[verts.binary_search(&a).unwrap()], pos[verts.binary_search(&b).unwrap()]);
            (pa.min(pb), pa.max(pb))
        })
        .filter(|&(l, r)| r - l != 1 && r - l != k - 1)
        .collect();
    chords.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
    let mut open: Vec<(usize, usize)> = Vec::new();
    for &(l, r) in &chords {
        while open.last().is_some_and(|&(_, tr)| tr <= l) {
            open.pop();
        }
        if let Some(&(tl, tr)) = open.last() {
            if tr < r {
                return Err(Witness::CrossingChords {
                    block: id,
                    first: (cycle[tl], cycle[tr]),
                    second: (cycle[l], cycle[r]),
                });
            }
        }
        open.push((l, r));
    }
    Ok(())
}

/// Which of the two cyclic orientations is called clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// The smallest vertex of a block is followed by its smaller cycle neighbour.
    #[default]
    Canonical,
    /// The reverse of [`Orientation::Canonical`] for every block.
    Reversed,
}

fn orient(cycle: &[usize], orientation: Orientation) -> Vec<usize> {
    let k = cycle.len();
    let start = (0..k).min_by_key(|&i| cycle[i]).unwrap();
    let mut out: Vec<usize> = (0..k).map(|i| cycle[(start + i) % k]).collect();
    if k > 2 && out[1] > out[k - 1] {
        out[1..].reverse();
    }
    if orientation == Orientation::Reversed && k > 2 {
        out[1..].reverse();
    }
    out
}

/// Installs oriented cycles and first/last vertices into `bt`.
pub fn fix_clockwise_order(
    cert: &OuterplanarCertificate,
    mut bt: RootedBlockTree,
    orientation: Orientation,
) -> Result<RootedBlockTree> {
    if let Some(w) = &cert.witness {
        return Err(Error::NotOuterplanar(w.clone()));
    }
    let cycles = cert.cycles.iter().map(|c| orient(c, orientation)).collect();
    bt.set_cycles(cycles)?;
    Ok(bt)
}

/// Rooted block tree with canonical cycles, or `NotOuterplanar`.
pub fn embedded_block_tree(g: &Graph) -> Result<RootedBlockTree> {
    let cert = check_outerplanar(g)?;
    fix_clockwise_order(&cert, RootedBlockTree::build(g)?, Orientation::Canonical)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn cycle_graph(n: usize) -> Graph {
        g(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn c5_is_its_own_outer_cycle() {
        let bt = embedded_block_tree(&cycle_graph(5)).unwrap();
        assert_eq!(bt.ham_cycle(0).unwrap(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn k4_rejected() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let cert = check_outerplanar(&k4).unwrap();
        assert!(!cert.is_outerplanar());
        assert!(matches!(embedded_block_tree(&k4), Err(Error::NotOuterplanar(_))));
    }

    #[test]
    fn k23_rejected() {
        let k23 = g(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
        assert!(!check_outerplanar(&k23).unwrap().is_outerplanar());
    }

    #[test]
    fn k4_minus_edge_avoids_the_chord() {
        // 4 vertices, 5 edges, chord (0,2).
        let gr = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let bt = embedded_block_tree(&gr).unwrap();
        assert_eq!(bt.ham_cycle(0).unwrap(), &[0, 1, 2, 3]);
    }

    #[test]
    fn triangle_orientation_and_ends() {
        // Triangle {0,1,2} hanging below a pendant edge at 2.
        let gr = g(4, &[(3, 2), (0, 1), (1, 2), (2, 0)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let tri = (0..bt.block_count()).find(|&b| bt.block(b).len() == 3).unwrap();
        assert_eq!(bt.ham_cycle(tri).unwrap(), &[0, 1, 2]);
        if bt.root() != Some(tri) {
            assert_eq!(bt.attach_vertex(tri), Some(2));
            assert_eq!(bt.first(tri), Some(0));
            assert_eq!(bt.last(tri), Some(1));
        }
    }

    #[test]
    fn triangle_attached_at_two() {
        // Root is the bridge {2,3} (block 0 from vertex 0's DFS would be the
        // triangle, so force the other root).
        let gr = g(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let cert = check_outerplanar(&gr).unwrap();
        let bridge = biconnected_blocks(&gr).unwrap().iter().position(|b| b.is_trivial()).unwrap();
        let bt =
            fix_clockwise_order(&cert, RootedBlockTree::build_with_root(&gr, bridge).unwrap(), Orientation::Canonical)
                .unwrap();
        let tri = 1 - bridge;
        assert_eq!(bt.attach_vertex(tri), Some(2));
        assert_eq!((bt.first(tri), bt.last(tri)), (Some(0), Some(1)));
    }

    #[test]
    fn trivial_block_first_equals_last() {
        let gr = g(8, &[(5, 7), (0, 5), (0, 1), (1, 2), (2, 3), (3, 4), (4, 6)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let b = (0..bt.block_count()).find(|&b| bt.block(b).vertices() == [5, 7]).unwrap();
        assert_eq!(bt.attach_vertex(b), Some(5));
        assert_eq!(bt.first(b), Some(7));
        assert_eq!(bt.last(b), Some(7));
    }

    #[test]
    fn c4_attached_at_zero() {
        // C4 (0,1,2,3) with a pendant 4-0, rooted at the pendant bridge.
        let gr = g(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]);
        let cert = check_outerplanar(&gr).unwrap();
        let bridge = biconnected_blocks(&gr).unwrap().iter().position(|b| b.is_trivial()).unwrap();
        let bt =
            fix_clockwise_order(&cert, RootedBlockTree::build_with_root(&gr, bridge).unwrap(), Orientation::Canonical)
                .unwrap();
        let c4 = 1 - bridge;
        assert_eq!((bt.first(c4), bt.last(c4)), (Some(1), Some(3)));
    }

    #[test]
    fn reversed_orientation_swaps_ends() {
        let gr = g(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]);
        let cert = check_outerplanar(&gr).unwrap();
        let bridge = biconnected_blocks(&gr).unwrap().iter().position(|b| b.is_trivial()).unwrap();
        let bt =
            fix_clockwise_order(&cert, RootedBlockTree::build_with_root(&gr, bridge).unwrap(), Orientation::Reversed)
                .unwrap();
        let c4 = 1 - bridge;
        assert_eq!(bt.ham_cycle(c4).unwrap(), &[0, 3, 2, 1]);
        assert_eq!((bt.first(c4), bt.last(c4)), (Some(3), Some(1)));
    }

    #[test]
    fn orientation_is_deterministic() {
        let gr = g(6, &[(0, 3), (3, 5), (5, 1), (1, 4), (4, 2), (2, 0), (0, 5), (5, 4)]);
        let a = embedded_block_tree(&gr).unwrap();
        let b = embedded_block_tree(&gr).unwrap();
        assert_eq!(a.ham_cycle(0), b.ham_cycle(0));
        assert_eq!(a.ham_cycle(0).unwrap(), &[0, 2, 4, 1, 5, 3]);
    }

    #[test]
    fn edge_bound_fast_path() {
        // K5 has 10 > 2*5-3 edges.
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push((a, b));
            }
        }
        let cert = check_outerplanar(&g(5, &edges)).unwrap();
        assert!(matches!(cert.witness(), Some(Witness::EdgeBound { edges: 10, .. })));
    }
}
