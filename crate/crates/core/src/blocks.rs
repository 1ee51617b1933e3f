//! Blocks (biconnected components), cut vertices and the rooted block tree.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub type BlockId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// A bridge: exactly one edge.
    Trivial,
    NonTrivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
    // Cyclic vertex order; for a bridge this is its two endpoints. Empty until embedded.
    cycle: Vec<usize>,
    // Position in `cycle` of `vertices[i]`.
    cycle_pos: Vec<usize>,
}

impl Block {
    /// Sorted vertex list.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> BlockKind {
        if self.edges.len() == 1 {
            BlockKind::Trivial
        } else {
            BlockKind::NonTrivial
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.kind() == BlockKind::Trivial
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Index of `v` in [`Block::cycle`].
    pub fn position(&self, v: usize) -> Option<usize> {
        let i = self.vertices.binary_search(&v).ok()?;
        self.cycle_pos.get(i).copied()
    }

    /// Cyclic order of the block once embedded (both endpoints for a bridge).
    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }
}

/// Computes the blocks of a connected graph.
///
/// Block ids follow the depth-first search from vertex 0: a block is numbered by the
/// discovery time of the child endpoint of the tree edge that opens it.
pub fn biconnected_blocks(g: &Graph) -> Result<Vec<Block>> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut time = 0usize;
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut raw: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();

    disc[0] = time;
    low[0] = time;
    time += 1;
    frames.push((0, UNSEEN, 0));
    while let Some(frame) = frames.last_mut() {
        let (v, parent, i) = *frame;
        if i < g.degree(v) {
            frame.2 += 1;
            let w = g.neighbors(v)[i];
            if disc[w] == UNSEEN {
                disc[w] = time;
                low[w] = time;
                time += 1;
                edge_stack.push((v, w));
                frames.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                edge_stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
            continue;
        }
        frames.pop();
        if let Some(&(u, _, _)) = frames.last() {
            low[u] = low[u].min(low[v]);
            if low[v] >= disc[u] {
                let mut edges = Vec::new();
                while let Some(e) = edge_stack.pop() {
                    edges.push(e);
                    if e == (u, v) {
                        break;
                    }
                }
                raw.push((disc[v], edges));
            }
        }
    }
    if disc.contains(&UNSEEN) {
        return Err(Error::Disconnected);
    }
    raw.sort_by_key(|(key, _)| *key);
    Ok(raw
        .into_iter()
        .map(|(_, es)| {
            let mut edges: Vec<(usize, usize)> = es.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
            edges.sort_unstable();
            let mut vertices: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            Block { vertices, edges, cycle: Vec::new(), cycle_pos: Vec::new() }
        })
        .collect())
}

/// Block-cut tree rooted at a block that contains a non-cut vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBlockTree {
    n: usize,
    blocks: Vec<Block>,
    is_cut: Vec<bool>,
    blocks_of: Vec<Vec<BlockId>>,
    root: Option<BlockId>,
    parent: Vec<Option<(BlockId, usize)>>,
    children_at: Vec<Vec<BlockId>>,
    owner: Vec<Option<BlockId>>,
    ends: Vec<Option<(usize, usize)>>,
}

impl RootedBlockTree {
    /// Rooted at the smallest block id that contains a non-cut vertex.
    pub fn build(g: &Graph) -> Result<Self> {
        Self::build_rooted(g, None)
    }

    /// Rooted at `root`, which must contain a non-cut vertex.
    pub fn build_with_root(g: &Graph, root: BlockId) -> Result<Self> {
        Self::build_rooted(g, Some(root))
    }

    fn build_rooted(g: &Graph, root: Option<BlockId>) -> Result<Self> {
        let blocks = biconnected_blocks(g)?;
        let n = g.n();
        let mut blocks_of = vec![Vec::new(); n];
        for (id, b) in blocks.iter().enumerate() {
            for &v in &b.vertices {
                blocks_of[v].push(id);
            }
        }
        let is_cut: Vec<bool> = blocks_of.iter().map(|bs| bs.len() >= 2).collect();
        let eligible = |id: BlockId| blocks[id].vertices.iter().any(|&v| !is_cut[v]);
        let root = match root {
            Some(r) if r < blocks.len() && eligible(r) => Some(r),
            Some(r) => {
                return Err(Error::Precondition(format!(
                    "block {r} cannot be the root: it must exist and contain a non-cut vertex"
                )))
            }
            None => (0..blocks.len()).find(|&id| eligible(id)),
        };
        if root.is_none() && !blocks.is_empty() {
            return Err(Error::Internal("no block contains a non-cut vertex".into()));
        }

        let mut parent = vec![None; blocks.len()];
        let mut children_at = vec![Vec::new(); n];
        let mut owner = vec![None; n];
        let mut visited = vec![false; blocks.len()];
        if let Some(r) = root {
            let mut queue = VecDeque::from([r]);
            visited[r] = true;
            while let Some(b) = queue.pop_front() {
                let attach = parent[b].map(|(_, x)| x);
                for &v in &blocks[b].vertices {
                    if Some(v) == attach {
                        continue;
                    }
                    owner[v] = Some(b);
                    if !is_cut[v] {
                        continue;
                    }
                    for &c in &blocks_of[v] {
                        if c != b {
                            if visited[c] {
                                return Err(Error::Internal("block-cut tree has a cycle".into()));
                            }
                            visited[c] = true;
                            parent[c] = Some((b, v));
                            children_at[v].push(c);
                            queue.push_back(c);
                        }
                    }
                }
            }
        } else if n == 1 {
            owner[0] = None;
        }
        Ok(RootedBlockTree {
            n,
            ends: vec![None; blocks.len()],
            blocks,
            is_cut,
            blocks_of,
            root,
            parent,
            children_at,
            owner,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `None` only for the single-vertex graph, which has no blocks.
    pub fn root(&self) -> Option<BlockId> {
        self.root
    }

    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.is_cut[v]
    }

    pub fn cut_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&v| self.is_cut[v])
    }

    pub fn blocks_containing(&self, v: usize) -> &[BlockId] {
        &self.blocks_of[v]
    }

    /// The block containing `v` that is closest to the root.
    pub fn owner(&self, v: usize) -> Option<BlockId> {
        self.owner[v]
    }

    /// Parent block and attaching cut vertex.
    pub fn parent_link(&self, b: BlockId) -> Option<(BlockId, usize)> {
        self.parent[b]
    }

    pub fn parent(&self, b: BlockId) -> Result<BlockId> {
        self.parent[b].map(|(p, _)| p).ok_or(Error::RootHasNoParent)
    }

    pub fn attach_vertex(&self, b: BlockId) -> Option<usize> {
        self.parent[b].map(|(_, x)| x)
    }

    /// Child blocks attached at cut vertex `x`, in block-id order.
    pub fn children_at(&self, x: usize) -> &[BlockId] {
        &self.children_at[x]
    }

    /// The unique child block of `b` at `x`.
    pub fn child_at(&self, b: BlockId, x: usize) -> Result<BlockId> {
        if !self.blocks[b].contains(x) {
            return Err(Error::NotInBlock { block: b, vertex: x });
        }
        let kids = &self.children_at[x];
        if !self.is_cut[x] || self.owner[x] != Some(b) || kids.is_empty() {
            return Err(Error::NotACutVertex { block: b, vertex: x });
        }
        if kids.len() > 1 {
            return Err(Error::Precondition(format!(
                "cut vertex {x} has {} child blocks, expected exactly one",
                kids.len()
            )));
        }
        Ok(kids[0])
    }

    pub fn non_root_blocks(&self) -> impl Iterator<Item = BlockId> + '_ {
        (0..self.blocks.len()).filter(move |&b| Some(b) != self.root)
    }

    pub fn is_embedded(&self) -> bool {
        self.blocks.iter().all(|b| !b.cycle.is_empty())
    }

    /// The fixed cyclic order of a non-trivial block.
    pub fn ham_cycle(&self, b: BlockId) -> Option<&[usize]> {
        let blk = &self.blocks[b];
        (!blk.is_trivial() && !blk.cycle.is_empty()).then_some(blk.cycle.as_slice())
    }

    /// Successor of `v` on the cycle of `b`; for a bridge, the other endpoint.
    pub fn next_in_block(&self, b: BlockId, v: usize) -> Result<usize> {
        self.step(b, v, 1)
    }

    pub fn prev_in_block(&self, b: BlockId, v: usize) -> Result<usize> {
        self.step(b, v, -1)
    }

    fn step(&self, b: BlockId, v: usize, dir: isize) -> Result<usize> {
        let blk = &self.blocks[b];
        if !blk.contains(v) {
            return Err(Error::NotInBlock { block: b, vertex: v });
        }
        if blk.cycle.is_empty() {
            return Err(Error::NotEmbedded(b));
        }
        let k = blk.cycle.len() as isize;
        let p = blk.position(v).expect("embedded block has positions") as isize;
        Ok(blk.cycle[((p + dir).rem_euclid(k)) as usize])
    }

    /// First vertex of a non-root block (successor of the attaching vertex).
    pub fn first(&self, b: BlockId) -> Option<usize> {
        self.ends[b].map(|(f, _)| f)
    }

    /// Last vertex of a non-root block (predecessor of the attaching vertex).
    pub fn last(&self, b: BlockId) -> Option<usize> {
        self.ends[b].map(|(_, l)| l)
    }

    /// Installs cyclic orders (one per block, bridges as their two endpoints)
    /// and derives first/last vertices.
    pub(crate) fn set_cycles(&mut self, cycles: Vec<Vec<usize>>) -> Result<()> {
        if cycles.len() != self.blocks.len() {
            return Err(Error::Internal("cycle count does not match block count".into()));
        }
        for (blk, cycle) in self.blocks.iter_mut().zip(cycles) {
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            if sorted != blk.vertices {
                return Err(Error::Internal("cycle does not list the block's vertices".into()));
            }
            let mut pos = vec![0; cycle.len()];
            for (i, &v) in cycle.iter().enumerate() {
                pos[blk.vertices.binary_search(&v).unwrap()] = i;
            }
            blk.cycle = cycle;
            blk.cycle_pos = pos;
        }
        for b in 0..self.blocks.len() {
            self.ends[b] = match self.parent[b] {
                Some((_, x)) => Some((self.next_in_block(b, x)?, self.prev_in_block(b, x)?)),
                None => None,
            };
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn bowtie() -> Graph {
        g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
    }

    #[test]
    fn triangle_is_one_block() {
        let bt = RootedBlockTree::build(&g(3, &[(0, 1), (1, 2), (2, 0)])).unwrap();
        assert_eq!(bt.block_count(), 1);
        assert_eq!(bt.block(0).vertices(), &[0, 1, 2]);
        assert_eq!(bt.cut_vertices().count(), 0);
        assert_eq!(bt.block(0).kind(), BlockKind::NonTrivial);
    }

    #[test]
    fn path_has_two_bridges() {
        let bt = RootedBlockTree::build(&g(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(bt.block(0).vertices(), &[0, 1]);
        assert_eq!(bt.block(1).vertices(), &[1, 2]);
        assert_eq!(bt.cut_vertices().collect::<Vec<_>>(), vec![1]);
        assert_eq!(bt.root(), Some(0));
        assert_eq!(bt.parent_link(1), Some((0, 1)));
        assert!(bt.block(1).is_trivial());
    }

    #[test]
    fn bowtie_root_and_child() {
        let bt = RootedBlockTree::build(&bowtie()).unwrap();
        assert_eq!(bt.block(0).vertices(), &[0, 1, 2]);
        assert_eq!(bt.block(1).vertices(), &[2, 3, 4]);
        assert_eq!(bt.cut_vertices().collect::<Vec<_>>(), vec![2]);
        assert_eq!(bt.root(), Some(0));
        assert_eq!(bt.child_at(0, 2).unwrap(), 1);
        assert_eq!(bt.parent(1).unwrap(), 0);
        assert_eq!(bt.parent(0), Err(Error::RootHasNoParent));
        assert!(matches!(bt.child_at(0, 1), Err(Error::NotACutVertex { .. })));
        assert!(matches!(bt.child_at(1, 2), Err(Error::NotACutVertex { .. })));
    }

    #[test]
    fn cut_vertices_match_deletion_test() {
        let graph = bowtie();
        let bt = RootedBlockTree::build(&graph).unwrap();
        for v in 0..graph.n() {
            assert_eq!(bt.is_cut_vertex(v), graph.component_count_without(Some(v)) > 1);
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        assert_eq!(RootedBlockTree::build(&g(4, &[(0, 1), (2, 3)])), Err(Error::Disconnected));
    }

    #[test]
    fn single_vertex_has_no_blocks() {
        let bt = RootedBlockTree::build(&Graph::new(1)).unwrap();
        assert_eq!(bt.block_count(), 0);
        assert_eq!(bt.root(), None);
    }

    #[test]
    fn star_children_listed_at_center() {
        // Every block of a star contains a leaf, so block 0 is the root.
        let bt = RootedBlockTree::build(&g(4, &[(0, 1), (0, 2), (0, 3)])).unwrap();
        assert_eq!(bt.root(), Some(0));
        assert_eq!(bt.children_at(0), &[1, 2]);
    }

    #[test]
    fn explicit_root_must_have_non_cut_vertex() {
        // 0-1-2-3: the middle block {1,2} has only cut vertices.
        let graph = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let mid = biconnected_blocks(&graph).unwrap().iter().position(|b| b.vertices() == [1, 2]).unwrap();
        assert!(RootedBlockTree::build_with_root(&graph, mid).is_err());
        let last = RootedBlockTree::build_with_root(&graph, 2).unwrap();
        assert_eq!(last.root(), Some(2));
    }

    #[test]
    fn next_in_block_conventions() {
        let mut bt = RootedBlockTree::build(&g(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(bt.next_in_block(1, 1), Err(Error::NotEmbedded(1)));
        bt.set_cycles(vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(bt.next_in_block(1, 1).unwrap(), 2);
        assert_eq!(bt.next_in_block(1, 2).unwrap(), 1);
        assert_eq!(bt.first(1), Some(2));
        assert_eq!(bt.last(1), Some(2));

        let mut tri = RootedBlockTree::build(&g(3, &[(0, 1), (1, 2), (2, 0)])).unwrap();
        tri.set_cycles(vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(tri.next_in_block(0, 2).unwrap(), 0);
        assert_eq!(tri.ham_cycle(0), Some(&[0, 1, 2][..]));
    }
}
