//! Stage 2: serialize the child blocks at every cut vertex by sequence number and
//! chain consecutive children with an edge `(first(B_i), last(B_{i+1}))`.

use std::fmt;

use crate::blocks::{BlockId, RootedBlockTree};
use crate::decomposition::{Gap, PathDecomposition, Ranges};
use crate::error::{Error, Result};
use crate::gen::mix64;
use crate::graph::Graph;

/// Sequence number of every non-root block (`None` for the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceNumbers {
    values: Vec<Option<usize>>,
}

impl SequenceNumbers {
    pub fn get(&self, b: BlockId) -> Option<usize> {
        self.values.get(b).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.values
    }

    /// `block <id> seq <index>` lines for non-root blocks.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (b, v) in self.values.iter().enumerate() {
            if let Some(v) = v {
                out.push_str(&format!("block {b} seq {v}\n"));
            }
        }
        out
    }
}

/// Ends `(first, last)` of a non-root block; a bridge gives its far endpoint twice.
pub fn block_ends(bt: &RootedBlockTree, b: BlockId) -> Result<(usize, usize)> {
    match (bt.first(b), bt.last(b)) {
        (Some(f), Some(l)) => Ok((f, l)),
        _ if bt.root() == Some(b) => Err(Error::RootHasNoParent),
        _ => Err(Error::NotEmbedded(b)),
    }
}

/// Minimum bag index holding both ends of each non-root block.
pub fn sequence_numbers(npd: &PathDecomposition, bt: &RootedBlockTree) -> Result<SequenceNumbers> {
    let ranges = npd.ranges(bt.n());
    let mut values = vec![None; bt.block_count()];
    for b in bt.non_root_blocks() {
        let (f, l) = block_ends(bt, b)?;
        let (rf, rl) = (ranges.range(f)?, ranges.range(l)?);
        let hit = (rf.0.max(rl.0)..=rf.1.min(rl.1)).find(|&t| {
            let bag = npd.bag(t);
            bag.binary_search(&f).is_ok() && bag.binary_search(&l).is_ok()
        });
        match hit {
            Some(t) => values[b] = Some(t),
            None => {
                return Err(Error::Precondition(format!(
                    "decomposition is not nice: no bag holds both {f} and {l} (block {b})"
                )))
            }
        }
    }
    Ok(SequenceNumbers { values })
}

/// How children with equal sequence numbers are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smaller block id first.
    #[default]
    BlockId,
    /// Pseudorandom but reproducible order derived from the seed.
    Shuffled(u64),
}

/// Children of `x` in increasing sequence-number order.
pub fn order_children(table: &SequenceNumbers, bt: &RootedBlockTree, x: usize) -> Vec<BlockId> {
    order_children_with(table, bt, x, TieBreak::BlockId)
}

pub fn order_children_with(table: &SequenceNumbers, bt: &RootedBlockTree, x: usize, tie: TieBreak) -> Vec<BlockId> {
    let mut kids = bt.children_at(x).to_vec();
    match tie {
        TieBreak::BlockId => kids.sort_by_key(|&b| (table.get(b), b)),
        TieBreak::Shuffled(seed) => kids.sort_by_key(|&b| (table.get(b), mix64(seed ^ b as u64), b)),
    }
    kids
}

/// One edge added by stage 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage2Edge {
    pub u: usize,
    pub v: usize,
    pub cut: usize,
    pub gap: Gap,
}

impl fmt::Display for Stage2Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage2 add {} {} at-cut {} {}", self.u, self.v, self.cut, self.gap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage2Result {
    pub g_prime: Graph,
    pub pd_prime: PathDecomposition,
    pub added: Vec<Stage2Edge>,
    /// `(cut vertex, ordered children)` for every cut vertex, ascending.
    pub child_order: Vec<(usize, Vec<BlockId>)>,
}

impl Stage2Result {
    pub fn width(&self) -> usize {
        self.pd_prime.width().unwrap_or(0)
    }
}

pub fn run_stage2(
    g: &Graph,
    bt: &RootedBlockTree,
    npd: &PathDecomposition,
    table: &SequenceNumbers,
) -> Result<Stage2Result> {
    run_stage2_with(g, bt, npd, table, TieBreak::BlockId)
}

/// Algorithm 1. Gaps are evaluated on the ranges of `npd`; insertions go into a copy.
pub fn run_stage2_with(
    g: &Graph,
    bt: &RootedBlockTree,
    npd: &PathDecomposition,
    table: &SequenceNumbers,
    tie: TieBreak,
) -> Result<Stage2Result> {
    let ranges = npd.ranges(g.n());
    let mut g_prime = g.clone();
    let mut pd_prime = npd.clone();
    let mut added = Vec::new();
    let mut child_order = Vec::new();
    for x in bt.cut_vertices() {
        let order = order_children_with(table, bt, x, tie);
        for pair in order.windows(2) {
            let (y_first, _) = block_ends(bt, pair[0])?;
            let (_, y_last) = block_ends(bt, pair[1])?;
            if !g_prime.add_edge(y_first, y_last)? {
                return Err(Error::Internal(format!("stage 2 edge ({y_first},{y_last}) already present")));
            }
            let gap = ranges.gap(y_first, y_last)?;
            pd_prime.apply_gap(gap);
            added.push(Stage2Edge { u: y_first, v: y_last, cut: x, gap });
        }
        child_order.push((x, order));
    }
    Ok(Stage2Result { g_prime, pd_prime, added, child_order })
}

/// A failed runtime check on the stage-2 gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapViolation {
    /// The gap is not `[LastIndex(first_i)+1, FirstIndex(last_{i+1})]`.
    Shape { edge: usize },
    /// A gap bag misses the cut vertex.
    CutVertexMissing { edge: usize, bag: usize },
    /// Two gaps at the same cut vertex overlap.
    Overlap { edge: usize, other: usize },
}

impl fmt::Display for GapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapViolation::Shape { edge } => write!(f, "stage 2 edge #{edge}: gap has the wrong shape"),
            GapViolation::CutVertexMissing { edge, bag } => {
                write!(f, "stage 2 edge #{edge}: gap bag {bag} lacks the cut vertex")
            }
            GapViolation::Overlap { edge, other } => {
                write!(f, "stage 2 edges #{other} and #{edge} have overlapping gaps")
            }
        }
    }
}

/// Gap shape and cut-vertex membership of every stage-2 gap, and pairwise
/// disjointness of gaps at the same cut vertex.
pub fn check_gap_properties(
    npd: &PathDecomposition,
    added: &[Stage2Edge],
    n: usize,
) -> std::result::Result<(), GapViolation> {
    let ranges = Ranges::of(npd, n);
    let mut start = 0;
    while start < added.len() {
        let cut = added[start].cut;
        let end = start + added[start..].iter().take_while(|e| e.cut == cut).count();
        let mut spans: Vec<(usize, usize, usize)> = Vec::new();
        for (i, e) in added.iter().enumerate().take(end).skip(start) {
            let Gap::Interval { lo, hi, insert } = e.gap else { continue };
            let (Ok(ru), Ok(rv)) = (ranges.range(e.u), ranges.range(e.v)) else {
                return Err(GapViolation::Shape { edge: i });
            };
            if insert != e.u || lo != ru.1 + 1 || hi != rv.0 {
                return Err(GapViolation::Shape { edge: i });
            }
            if let Some(t) = (lo..=hi).find(|&t| npd.bag(t).binary_search(&e.cut).is_err()) {
                return Err(GapViolation::CutVertexMissing { edge: i, bag: t });
            }
            spans.push((lo, hi, i));
        }
        spans.sort_unstable();
        for w in spans.windows(2) {
            if w[1].0 <= w[0].1 {
                return Err(GapViolation::Overlap { edge: w[1].2.max(w[0].2), other: w[1].2.min(w[0].2) });
            }
        }
        start = end;
    }
    Ok(())
}

/// `|X'_t| <= |X_t| + #(cut vertices of G in X_t)` for every bag.
pub fn check_bag_growth(npd: &PathDecomposition, pd_prime: &PathDecomposition, bt: &RootedBlockTree) -> Option<usize> {
    (1..=npd.len()).find(|&t| {
        let cuts = npd.bag(t).iter().filter(|&&v| bt.is_cut_vertex(v)).count();
        pd_prime.bag(t).len() > npd.bag(t).len() + cuts
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_path_decomposition;
    use crate::embed::{check_outerplanar, embedded_block_tree};
    use crate::oracle::brute_force_cut_vertices;
    use crate::stage1::{first_common_bag, run_stage1};

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn stage2(gr: &Graph) -> (RootedBlockTree, PathDecomposition, SequenceNumbers, Stage2Result) {
        let bt = embedded_block_tree(gr).unwrap();
        let s1 = run_stage1(gr, &bt).unwrap();
        let table = sequence_numbers(&s1.npd, &bt).unwrap();
        let s2 = run_stage2(gr, &bt, &s1.npd, &table).unwrap();
        (bt, s1.npd, table, s2)
    }

    #[test]
    fn biconnected_input_is_untouched() {
        let gr = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let (_, npd, _, s2) = stage2(&gr);
        assert_eq!(s2.g_prime, gr);
        assert_eq!(s2.pd_prime, npd);
        assert!(s2.added.is_empty());
    }

    #[test]
    fn three_triangles_at_one_cut_vertex() {
        // Pendant edge 7-0 makes the root the bridge, so all three triangles hang at 0.
        let gr = g(8, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 0), (0, 7)]);
        let (bt, npd, table, s2) = stage2(&gr);
        assert_eq!(bt.children_at(0).len(), 3);
        assert_eq!(s2.added.len(), 2);
        let order = &s2.child_order.iter().find(|(x, _)| *x == 0).unwrap().1;
        for (e, pair) in s2.added.iter().zip(order.windows(2)) {
            assert_eq!((e.u, e.v), (bt.first(pair[0]).unwrap(), bt.last(pair[1]).unwrap()));
        }
        let seqs: Vec<usize> = order.iter().map(|&b| table.get(b).unwrap()).collect();
        assert!(seqs.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(s2.g_prime.component_count_without(Some(0)), 2);
        assert_eq!(validate_path_decomposition(&s2.g_prime, &s2.pd_prime), Ok(()));
        assert_eq!(check_gap_properties(&npd, &s2.added, 8), Ok(()));
        assert_eq!(check_bag_growth(&npd, &s2.pd_prime, &bt), None);
        assert!(check_outerplanar(&s2.g_prime).unwrap().is_outerplanar());
    }

    #[test]
    fn sequence_numbers_match_linear_scan() {
        let gr = g(9, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (2, 5), (5, 6), (6, 7), (7, 5), (4, 8)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let s1 = run_stage1(&gr, &bt).unwrap();
        let table = sequence_numbers(&s1.npd, &bt).unwrap();
        for b in bt.non_root_blocks() {
            let (f, l) = block_ends(&bt, b).unwrap();
            assert_eq!(table.get(b), first_common_bag(&s1.npd, f, l));
        }
        assert_eq!(table.get(bt.root().unwrap()), None);
    }

    #[test]
    fn trivial_block_value_is_first_index() {
        let gr = g(3, &[(0, 1), (1, 2)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let s1 = run_stage1(&gr, &bt).unwrap();
        let table = sequence_numbers(&s1.npd, &bt).unwrap();
        assert_eq!(table.get(1), Some(s1.npd.first_index(2).unwrap()));
    }

    #[test]
    fn ordering_rules() {
        let gr = g(7, &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 0), (0, 5), (5, 6)]);
        let bt = embedded_block_tree(&gr).unwrap();
        let x = 0;
        let kids = bt.children_at(x).to_vec();
        assert!(kids.len() >= 2);
        let mut values = vec![None; bt.block_count()];
        for (i, &b) in kids.iter().enumerate() {
            values[b] = Some(10 - i);
        }
        let table = SequenceNumbers { values: values.clone() };
        let mut expect = kids.clone();
        expect.reverse();
        assert_eq!(order_children(&table, &bt, x), expect);
        for &b in &kids {
            values[b] = Some(4);
        }
        let table = SequenceNumbers { values };
        assert_eq!(order_children(&table, &bt, x), kids);
        let one = g(3, &[(0, 1), (1, 2)]);
        let bt1 = embedded_block_tree(&one).unwrap();
        let t1 = SequenceNumbers { values: vec![None, Some(1)] };
        assert_eq!(order_children(&t1, &bt1, 1), vec![1]);
    }

    #[test]
    fn every_cut_vertex_leaves_two_components() {
        let gr = g(
            12,
            &[
                (0, 1),
                (1, 2),
                (1, 3),
                (1, 4),
                (4, 5),
                (5, 1),
                (3, 6),
                (3, 7),
                (7, 8),
                (8, 3),
                (3, 9),
                (9, 10),
                (10, 11),
            ],
        );
        let (_, _, _, s2) = stage2(&gr);
        for x in brute_force_cut_vertices(&s2.g_prime) {
            assert_eq!(s2.g_prime.component_count_without(Some(x)), 2, "cut vertex {x}");
        }
        assert!(check_outerplanar(&s2.g_prime).unwrap().is_outerplanar());
    }
}
