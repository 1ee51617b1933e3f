//! Stage 1: width-2 tree decomposition with a vertex-to-node bijection, the
//! propagation step that makes it nice (width 3), and the nice path decomposition
//! obtained from an optimal path decomposition of the decomposition tree.
//!
//! Node ids coincide with vertex ids, so the bijection `b` is the identity.

use std::collections::VecDeque;
use std::fmt;

use crate::blocks::{BlockId, RootedBlockTree};
use crate::decomposition::{
    validate_path_decomposition, validate_tree_decomposition, PathDecomposition, TreeDecomposition, Violation,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::treepw::tree_optimal_path_decomposition;

/// A violated nice-decomposition property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NiceViolation {
    /// Property 1: `b` missing, not a bijection, or `v` not in its own bag.
    Bijection {
        vertex: usize,
    },
    /// Property 2 for the child block `block`.
    BlockSubtree {
        block: BlockId,
    },
    /// Property 3: a tree edge whose vertex images are not adjacent.
    TreeEdge {
        a: usize,
        b: usize,
    },
    /// Property 4: the bag of the last vertex lacks the first vertex.
    Propagation {
        block: BlockId,
    },
    Width {
        width: usize,
        limit: usize,
    },
    Decomposition(Violation),
}

impl fmt::Display for NiceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NiceViolation::Bijection { vertex } => write!(f, "P1 fails at vertex {vertex}"),
            NiceViolation::BlockSubtree { block } => write!(f, "P2 fails for block {block}"),
            NiceViolation::TreeEdge { a, b } => write!(f, "P3 fails: tree edge ({a},{b}) is not a graph edge"),
            NiceViolation::Propagation { block } => write!(f, "P4 fails for block {block}"),
            NiceViolation::Width { width, limit } => write!(f, "width {width} exceeds {limit}"),
            NiceViolation::Decomposition(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    // Bag of the section's right endpoint holds the left endpoint; new nodes hang off the right.
    Right,
    // Bag of the left endpoint holds the right endpoint; new nodes hang off the left.
    Left,
}

struct Builder {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl Builder {
    fn node(&mut self, v: usize, bag: Vec<usize>, parent: Option<usize>) {
        self.bags[v] = bag;
        self.parent[v] = parent;
    }

    /// Nodes for every vertex of a non-trivial block except the one at position 0.
    fn block(&mut self, g: &Graph, bt: &RootedBlockTree, b: BlockId, x: usize) {
        let blk = bt.block(b);
        let cycle = blk.cycle();
        let k = cycle.len();
        let shift = blk.position(x).expect("attach vertex lies on the block");
        let p: Vec<usize> = (0..k).map(|i| cycle[(shift + i) % k]).collect();
        let pos = |v: usize| blk.position(v).map(|q| (q + k - shift) % k);
        let nbrs: Vec<Vec<usize>> = p
            .iter()
            .map(|&v| {
                let mut ps: Vec<usize> = g.neighbors(v).iter().filter_map(|&w| pos(w)).collect();
                ps.sort_unstable();
                ps
            })
            .collect();
        // Largest neighbour position of `a` that is <= `bound`.
        let below = |a: usize, bound: usize| -> usize {
            let ns = &nbrs[a];
            let idx = ns.partition_point(|&q| q <= bound);
            ns[idx - 1]
        };

        self.node(p[k - 1], vec![p[k - 1], x], Some(x));
        let mut stack = vec![(0usize, k - 1, Side::Right)];
        while let Some((i, j, side)) = stack.pop() {
            if j <= i + 1 {
                continue;
            }
            let mut face = vec![i, below(i, j - 1)];
            while *face.last().unwrap() != j {
                face.push(below(*face.last().unwrap(), j));
            }
            let t = face.len() - 1;
            match side {
                Side::Right => {
                    for s in 1..t {
                        let (f, nxt) = (face[s], face[s + 1]);
                        self.node(p[f], vec![p[f], p[i], p[nxt]], Some(p[nxt]));
                    }
                    stack.push((i, face[1], Side::Right));
                    for s in 1..t {
                        stack.push((face[s], face[s + 1], Side::Left));
                    }
                }
                Side::Left => {
                    for s in 1..t {
                        let (f, prv) = (face[s], face[s - 1]);
                        self.node(p[f], vec![p[f], p[prv], p[j]], Some(p[prv]));
                    }
                    for s in 1..t {
                        stack.push((face[s - 1], face[s], Side::Right));
                    }
                    stack.push((face[t - 1], j, Side::Left));
                }
            }
        }
    }
}

/// Width-2 tree decomposition satisfying P1-P3, validated before it is returned.
pub fn base_tree_decomposition(g: &Graph, bt: &RootedBlockTree) -> Result<TreeDecomposition> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut builder = Builder { bags: vec![Vec::new(); n], parent: vec![None; n] };
    if let Some(root) = bt.root() {
        let blk = bt.block(root);
        let r = if blk.is_trivial() { blk.vertices()[0] } else { blk.cycle()[0] };
        builder.node(r, vec![r], None);
        let mut queue = VecDeque::from([(root, r)]);
        while let Some((b, x)) = queue.pop_front() {
            let blk = bt.block(b);
            if blk.is_trivial() {
                let w = if blk.vertices()[0] == x { blk.vertices()[1] } else { blk.vertices()[0] };
                builder.node(w, vec![w, x], Some(x));
            } else {
                if blk.cycle().is_empty() {
                    return Err(Error::NotEmbedded(b));
                }
                builder.block(g, bt, b, x);
            }
            // The root block's start vertex may itself be a cut vertex.
            for &v in blk.vertices() {
                if v != x || b == root {
                    queue.extend(bt.children_at(v).iter().map(|&c| (c, v)));
                }
            }
        }
    } else {
        builder.node(0, vec![0], None);
    }
    let edges = builder.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (v, p))).collect();
    let td = TreeDecomposition::new(builder.bags, edges).with_bijection((0..n).collect());
    check_p1_to_p3(g, bt, &td).map_err(|v| Error::Internal(format!("base decomposition: {v}")))?;
    check_width(&td, 2).map_err(|v| Error::Internal(format!("base decomposition: {v}")))?;
    Ok(td)
}

/// Tree decomposition plus the first vertex propagated into each non-root non-trivial block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub td: TreeDecomposition,
    /// `(block, first vertex)` for every block that received a propagated vertex.
    pub propagated: Vec<(BlockId, usize)>,
}

/// Inserts `first(B)` into the bag of every vertex of `B` other than its attaching vertex.
pub fn make_nice(td: &TreeDecomposition, bt: &RootedBlockTree) -> Result<NiceTreeDecomposition> {
    let mut td = td.clone();
    let mut propagated = Vec::new();
    for b in bt.non_root_blocks() {
        let blk = bt.block(b);
        if blk.is_trivial() {
            continue;
        }
        let x = bt.attach_vertex(b).expect("non-root block has an attaching vertex");
        let first = bt.first(b).ok_or(Error::NotEmbedded(b))?;
        for &v in blk.vertices() {
            if v != x {
                let t = td.node_of(v).ok_or_else(|| Error::Precondition("decomposition lacks a bijection".into()))?;
                td.insert(t, first);
            }
        }
        propagated.push((b, first));
    }
    Ok(NiceTreeDecomposition { td, propagated })
}

fn check_width(td: &TreeDecomposition, limit: usize) -> std::result::Result<(), NiceViolation> {
    let width = td.width().map_err(|_| NiceViolation::Decomposition(Violation::EmptyDecomposition))?;
    if width > limit {
        return Err(NiceViolation::Width { width, limit });
    }
    Ok(())
}

pub fn check_p1(td: &TreeDecomposition) -> std::result::Result<(), NiceViolation> {
    let map = td.vertex_to_node().ok_or(NiceViolation::Bijection { vertex: 0 })?;
    let mut hit = vec![false; td.node_count()];
    for (v, &t) in map.iter().enumerate() {
        if t >= hit.len() || hit[t] || td.bag(t).binary_search(&v).is_err() {
            return Err(NiceViolation::Bijection { vertex: v });
        }
        hit[t] = true;
    }
    if map.len() != td.node_count() {
        return Err(NiceViolation::Bijection { vertex: map.len() });
    }
    Ok(())
}

pub fn check_p3(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), NiceViolation> {
    let map = td.vertex_to_node().ok_or(NiceViolation::Bijection { vertex: 0 })?;
    let mut inverse = vec![usize::MAX; td.node_count()];
    for (v, &t) in map.iter().enumerate() {
        inverse[t] = v;
    }
    for &(a, b) in td.tree_edges() {
        if !g.has_edge(inverse[a], inverse[b]) {
            return Err(NiceViolation::TreeEdge { a: inverse[a], b: inverse[b] });
        }
    }
    Ok(())
}

/// Property 2 for every non-root block: the nodes of `B \ x` induce a subtree and
/// their bags, restricted to `V(B)`, decompose `B`.
pub fn check_p2(g: &Graph, bt: &RootedBlockTree, td: &TreeDecomposition) -> std::result::Result<(), NiceViolation> {
    let map = td.vertex_to_node().ok_or(NiceViolation::Bijection { vertex: 0 })?;
    let tree = td.tree().map_err(|_| NiceViolation::Decomposition(Violation::NotATree))?;
    let mut local = vec![usize::MAX; td.node_count()];
    // Scratch relabelling of graph vertices, reset after each block.
    let mut vloc = vec![usize::MAX; g.n()];
    for b in bt.non_root_blocks() {
        let blk = bt.block(b);
        let x = bt.attach_vertex(b).unwrap();
        let nodes: Vec<usize> = blk.vertices().iter().filter(|&&v| v != x).map(|&v| map[v]).collect();
        for (i, &t) in nodes.iter().enumerate() {
            local[t] = i;
        }
        let edges: Vec<(usize, usize)> = nodes
            .iter()
            .flat_map(|&a| tree.neighbors(a).iter().map(move |&c| (a, c)))
            .filter(|&(a, c)| a < c && local[c] != usize::MAX)
            .map(|(a, c)| (local[a], local[c]))
            .collect();
        let verts = blk.vertices();
        let bags: Vec<Vec<usize>> =
            nodes.iter().map(|&t| td.bag(t).iter().filter_map(|v| verts.binary_search(v).ok()).collect()).collect();
        let sub = TreeDecomposition::new(bags, edges);
        for (i, &v) in verts.iter().enumerate() {
            vloc[v] = i;
        }
        let mut h = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &w in g.neighbors(v) {
                if vloc[w] != usize::MAX && i < vloc[w] {
                    let _ = h.add_edge(i, vloc[w]);
                }
            }
        }
        for &v in verts {
            vloc[v] = usize::MAX;
        }
        let ok = validate_tree_decomposition(&h, &sub).is_ok();
        for &t in &nodes {
            local[t] = usize::MAX;
        }
        if !ok {
            return Err(NiceViolation::BlockSubtree { block: b });
        }
    }
    Ok(())
}

pub fn check_p4(bt: &RootedBlockTree, td: &TreeDecomposition) -> std::result::Result<(), NiceViolation> {
    let map = td.vertex_to_node().ok_or(NiceViolation::Bijection { vertex: 0 })?;
    for b in bt.non_root_blocks() {
        if bt.block(b).is_trivial() {
            continue;
        }
        let (first, last) = (bt.first(b).unwrap(), bt.last(b).unwrap());
        let bag = td.bag(map[last]);
        if bag.binary_search(&first).is_err() || bag.binary_search(&last).is_err() {
            return Err(NiceViolation::Propagation { block: b });
        }
    }
    Ok(())
}

fn check_p1_to_p3(g: &Graph, bt: &RootedBlockTree, td: &TreeDecomposition) -> std::result::Result<(), NiceViolation> {
    validate_tree_decomposition(g, td).map_err(NiceViolation::Decomposition)?;
    check_p1(td)?;
    check_p2(g, bt, td)?;
    check_p3(g, td)
}

/// All four properties, tree-decomposition validity and width <= 3.
pub fn check_nice_tree(
    g: &Graph,
    bt: &RootedBlockTree,
    td: &TreeDecomposition,
) -> std::result::Result<(), NiceViolation> {
    check_p1_to_p3(g, bt, td)?;
    check_p4(bt, td)?;
    check_width(td, 3)
}

/// `X_i` is the union of the bags of the tree nodes in `X_{T,i}`.
pub fn compose(ntd: &NiceTreeDecomposition, tree_pd: &PathDecomposition) -> PathDecomposition {
    let bags = tree_pd
        .bags()
        .iter()
        .map(|nodes| nodes.iter().flat_map(|&t| ntd.td.bag(t).iter().copied()).collect())
        .collect();
    PathDecomposition::new(bags)
}

/// Minimum 1-based bag index holding both `a` and `b`, if any.
pub fn first_common_bag(pd: &PathDecomposition, a: usize, b: usize) -> Option<usize> {
    (1..=pd.len()).find(|&t| {
        let bag = pd.bag(t);
        bag.binary_search(&a).is_ok() && bag.binary_search(&b).is_ok()
    })
}

/// Every non-root non-trivial block has a bag holding its first and last vertices.
pub fn check_nice_path(bt: &RootedBlockTree, pd: &PathDecomposition) -> std::result::Result<(), NiceViolation> {
    let ranges = pd.ranges(bt.n());
    for b in bt.non_root_blocks() {
        if bt.block(b).is_trivial() {
            continue;
        }
        let (f, l) = (bt.first(b).unwrap(), bt.last(b).unwrap());
        let (Ok(rf), Ok(rl)) = (ranges.range(f), ranges.range(l)) else {
            return Err(NiceViolation::Propagation { block: b });
        };
        let hit = (rf.0.max(rl.0)..=rf.1.min(rl.1)).any(|t| {
            let bag = pd.bag(t);
            bag.binary_search(&f).is_ok() && bag.binary_search(&l).is_ok()
        });
        if !hit {
            return Err(NiceViolation::Propagation { block: b });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage1Result {
    pub base: TreeDecomposition,
    pub nice: NiceTreeDecomposition,
    /// Optimal path decomposition of the decomposition tree (bags hold node ids).
    pub tree_pd: PathDecomposition,
    /// Nice path decomposition of the input graph.
    pub npd: PathDecomposition,
}

impl Stage1Result {
    pub fn width(&self) -> usize {
        self.npd.width().unwrap_or(0)
    }

    pub fn tree_width(&self) -> usize {
        self.tree_pd.width().unwrap_or(0)
    }
}

/// Runs stage 1 and checks every contract on the way.
pub fn run_stage1(g: &Graph, bt: &RootedBlockTree) -> Result<Stage1Result> {
    let base = base_tree_decomposition(g, bt)?;
    let nice = make_nice(&base, bt)?;
    check_p4(bt, &nice.td)
        .and_then(|_| check_width(&nice.td, 3))
        .map_err(|v| Error::Internal(format!("nice decomposition: {v}")))?;
    let tree = nice.td.tree()?;
    let tree_pd = tree_optimal_path_decomposition(&tree)?;
    let npd = compose(&nice, &tree_pd);
    validate_path_decomposition(g, &npd).map_err(|v| Error::Internal(format!("composed decomposition: {v}")))?;
    check_nice_path(bt, &npd).map_err(|v| Error::Internal(format!("composed decomposition: {v}")))?;
    Ok(Stage1Result { base, nice, tree_pd, npd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::embedded_block_tree;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn bowtie() -> Graph {
        g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
    }

    #[test]
    fn single_edge() {
        let gr = g(2, &[(0, 1)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let td = base_tree_decomposition(&gr, &bt).unwrap();
        assert_eq!(td.bags(), &[vec![0], vec![0, 1]]);
        assert_eq!(td.tree_edges(), &[(1, 0)]);
        let s1 = run_stage1(&gr, &bt).unwrap();
        assert!(s1.width() <= 1);
        assert!(s1.npd.len() <= 2);
    }

    #[test]
    fn triangle_tree_is_a_path_of_graph_edges() {
        let gr = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let td = base_tree_decomposition(&gr, &bt).unwrap();
        assert_eq!(td.tree_edges().len(), 2);
        assert!(td.width().unwrap() <= 2);
        assert_eq!(check_p1_to_p3(&gr, &bt, &td), Ok(()));
    }

    #[test]
    fn bowtie_propagates_first_vertex() {
        let gr = bowtie();
        let bt = embedded_block_tree(&gr).unwrap();
        assert_eq!(bt.block(bt.root().unwrap()).vertices(), &[0, 1, 2]);
        let child = 1 - bt.root().unwrap();
        assert_eq!((bt.first(child), bt.last(child)), (Some(3), Some(4)));
        let base = base_tree_decomposition(&gr, &bt).unwrap();
        assert_eq!(check_p2(&gr, &bt, &base), Ok(()));
        let nice = make_nice(&base, &bt).unwrap();
        assert!(nice.td.bag(3).contains(&3));
        assert!(nice.td.bag(4).contains(&3) && nice.td.bag(4).contains(&4));
        assert_eq!(nice.propagated, vec![(child, 3)]);
        assert_eq!(check_nice_tree(&gr, &bt, &nice.td), Ok(()));
        // At most one vertex is added per bag.
        for v in 0..5 {
            assert!(nice.td.bag(v).len() <= base.bag(v).len() + 1);
        }
    }

    #[test]
    fn tree_input_is_unchanged_by_make_nice() {
        let gr = g(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let base = base_tree_decomposition(&gr, &bt).unwrap();
        let nice = make_nice(&base, &bt).unwrap();
        assert_eq!(nice.td, base);
        assert!(nice.propagated.is_empty());
    }

    #[test]
    fn fan_and_nested_chords() {
        // Fan around 0 plus a second block with nested chords.
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2), (0, 3), (0, 4)];
        edges.extend([(5, 6), (6, 7), (7, 8), (8, 9), (9, 10), (10, 5), (6, 10), (6, 9), (7, 9)]);
        let gr = g(11, &edges);
        let bt = embedded_block_tree(&gr).unwrap();
        let s1 = run_stage1(&gr, &bt).unwrap();
        assert_eq!(check_nice_tree(&gr, &bt, &s1.nice.td), Ok(()));
        assert_eq!(check_nice_path(&bt, &s1.npd), Ok(()));
    }

    #[test]
    fn violations_are_detected() {
        let gr = bowtie();
        let bt = embedded_block_tree(&gr).unwrap();
        let base = base_tree_decomposition(&gr, &bt).unwrap();
        assert!(matches!(check_p4(&bt, &base), Err(NiceViolation::Propagation { .. })));
        let bad = TreeDecomposition::new(base.bags().to_vec(), base.tree_edges().to_vec())
            .with_bijection(vec![1, 0, 2, 3, 4]);
        assert!(matches!(check_p1(&bad), Err(NiceViolation::Bijection { .. })));
    }

    #[test]
    fn single_vertex() {
        let gr = Graph::new(1);
        let bt = embedded_block_tree(&gr).unwrap();
        let s1 = run_stage1(&gr, &bt).unwrap();
        assert_eq!(s1.npd.bags(), &[vec![0]]);
    }
}
