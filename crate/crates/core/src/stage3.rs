//! Stage 3: a traversal of `G'` that bypasses every cut vertex once and joins the
//! vertices before and after each run of bypassed cut vertices, making the graph
//! 2-connected.

use std::collections::HashMap;
use std::fmt;

use crate::blocks::{biconnected_blocks, BlockId, RootedBlockTree};
use crate::decomposition::{Gap, PathDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// One edge added by stage 3, with the cut vertices it bypasses in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage3Edge {
    pub u: usize,
    pub v: usize,
    pub bypass: Vec<usize>,
    pub gap: Gap,
}

impl fmt::Display for Stage3Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.bypass.iter().map(|x| x.to_string()).collect();
        write!(f, "stage3 add {} {} bypass {} {}", self.u, self.v, seq.join(","), self.gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncounterKind {
    /// First encounter of a cut vertex.
    Bypass,
    /// The encounter that marks the vertex completed.
    Complete,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage3Result {
    pub g_dd: Graph,
    pub pd_dd: PathDecomposition,
    pub added: Vec<Stage3Edge>,
    /// Every value taken by the traversal's current vertex, in order.
    pub encounter: Vec<usize>,
    pub encounter_kinds: Vec<EncounterKind>,
    /// Cut vertices of `G'`, ascending.
    pub cut_vertices: Vec<usize>,
    pub start: usize,
}

impl Stage3Result {
    pub fn width(&self) -> usize {
        self.pd_dd.width().unwrap_or(0)
    }
}

/// Smallest non-cut vertex of the root block, or `None` for the single-vertex graph.
pub fn default_start(bt: &RootedBlockTree) -> Option<usize> {
    let root = bt.root()?;
    bt.block(root).vertices().iter().copied().find(|&v| !bt.is_cut_vertex(v))
}

fn check_preconditions(g: &Graph, bt: &RootedBlockTree, pd: &PathDecomposition, start: usize) -> Result<()> {
    if bt.n() != g.n() {
        return Err(Error::Precondition("block tree and graph disagree on the vertex count".into()));
    }
    if !bt.is_embedded() {
        return Err(Error::Precondition("block tree has no cyclic orders".into()));
    }
    for x in bt.cut_vertices() {
        if bt.children_at(x).len() != 1 {
            return Err(Error::Precondition(format!(
                "cut vertex {x} has {} child blocks, expected exactly one",
                bt.children_at(x).len()
            )));
        }
    }
    let root = bt.root().ok_or_else(|| Error::Precondition("graph has no blocks".into()))?;
    if start >= g.n() || !bt.block(root).contains(start) || bt.is_cut_vertex(start) {
        return Err(Error::Precondition(format!("start vertex {start} is not a non-cut vertex of the root block")));
    }
    let ranges = pd.ranges(g.n());
    for v in 0..g.n() {
        ranges.range(v)?;
    }
    Ok(())
}

/// Algorithm 2. Gaps are evaluated on the ranges of `pd_prime`; insertions go into a copy.
pub fn run_stage3(
    g_prime: &Graph,
    bt: &RootedBlockTree,
    pd_prime: &PathDecomposition,
    start: Option<usize>,
) -> Result<Stage3Result> {
    let n = g_prime.n();
    let cut_vertices: Vec<usize> = bt.cut_vertices().collect();
    let Some(root) = bt.root() else {
        // A single vertex: nothing to do.
        return Ok(Stage3Result {
            g_dd: g_prime.clone(),
            pd_dd: pd_prime.clone(),
            added: Vec::new(),
            encounter: vec![0],
            encounter_kinds: vec![EncounterKind::Complete],
            cut_vertices,
            start: 0,
        });
    };
    let start = match start {
        Some(s) => s,
        None => default_start(bt).ok_or_else(|| Error::Internal("root block has only cut vertices".into()))?,
    };
    check_preconditions(g_prime, bt, pd_prime, start)?;

    let ranges = pd_prime.ranges(n);
    let mut g_dd = g_prime.clone();
    let mut pd_dd = pd_prime.clone();
    let mut added = Vec::new();
    let mut encounter = Vec::with_capacity(n + cut_vertices.len());
    let mut kinds = Vec::with_capacity(n + cut_vertices.len());
    let mut completed = vec![false; n];
    let mut bypassed = vec![false; n];

    let mut b: BlockId = root;
    let mut vp = start;
    encounter.push(vp);
    kinds.push(EncounterKind::Complete);
    completed[vp] = true;
    let mut completed_count = 1;
    let mut v = vp;
    while completed_count < n {
        vp = bt.next_in_block(b, v)?;
        encounter.push(vp);
        let mut sequence = Vec::new();
        while bt.is_cut_vertex(vp) && !bypassed[vp] {
            bypassed[vp] = true;
            sequence.push(vp);
            kinds.push(EncounterKind::Bypass);
            b = bt.children_at(vp)[0];
            vp = bt.next_in_block(b, vp)?;
            encounter.push(vp);
        }
        kinds.push(EncounterKind::Complete);
        if !sequence.is_empty() {
            if !g_dd.add_edge(v, vp)? {
                return Err(Error::Internal(format!("stage 3 edge ({v},{vp}) already present")));
            }
            let gap = ranges.gap(v, vp)?;
            pd_dd.apply_gap(gap);
            added.push(Stage3Edge { u: v, v: vp, bypass: sequence, gap });
        }
        if bt.is_cut_vertex(vp) && bypassed[vp] {
            // Returning to an already bypassed cut vertex always leaves its child block.
            if bt.attach_vertex(b) != Some(vp) {
                return Err(Error::Internal(format!("returned to {vp} outside its child block")));
            }
            b = bt.parent(b)?;
        }
        if completed[vp] {
            return Err(Error::Internal(format!("vertex {vp} completed twice")));
        }
        completed[vp] = true;
        completed_count += 1;
        v = vp;
    }
    Ok(Stage3Result { g_dd, pd_dd, added, encounter, encounter_kinds: kinds, cut_vertices, start })
}

/// The recursively defined encounter order of `G'` from `v0`.
///
/// From a start `s` of block `b`, the sequence is `s` followed by the rest of the
/// cycle of `b`, where each cut vertex `u` whose child block is not `b`'s parent is
/// replaced by the sequence of its child block from `u`, then `u` again.
pub fn order_oracle(bt: &RootedBlockTree, v0: usize) -> Result<Vec<usize>> {
    enum Task {
        Emit(usize),
        Expand(BlockId, usize),
    }
    let Some(root) = bt.root() else {
        return Ok(vec![0]);
    };
    if !bt.block(root).contains(v0) || bt.is_cut_vertex(v0) {
        return Err(Error::Precondition(format!("{v0} is not a non-cut vertex of the root block")));
    }
    let mut out = Vec::with_capacity(bt.n() * 2);
    let mut tasks = vec![Task::Expand(root, v0)];
    while let Some(task) = tasks.pop() {
        match task {
            Task::Emit(v) => out.push(v),
            Task::Expand(b, s) => {
                out.push(s);
                let mut tail = Vec::new();
                let mut u = bt.next_in_block(b, s)?;
                while u != s {
                    tail.push(u);
                    u = bt.next_in_block(b, u)?;
                }
                for &u in tail.iter().rev() {
                    tasks.push(Task::Emit(u));
                    if bt.is_cut_vertex(u) && bt.attach_vertex(b) != Some(u) {
                        let kids = bt.children_at(u);
                        if kids.len() != 1 {
                            return Err(Error::Precondition(format!("cut vertex {u} has {} child blocks", kids.len())));
                        }
                        // `Expand` emits `u` itself first.
                        tasks.push(Task::Expand(kids[0], u));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A failed encounter audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditFailure {
    /// First index where the recorded order and the oracle differ.
    OrderMismatch { index: usize },
    /// A vertex encountered the wrong number of times.
    Count { vertex: usize, seen: usize, expected: usize },
    /// A cut vertex's encounters are not bypass-then-complete.
    Kind { vertex: usize },
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditFailure::OrderMismatch { index } => {
                write!(f, "encounter order differs from the oracle at position {index}")
            }
            AuditFailure::Count { vertex, seen, expected } => {
                write!(f, "vertex {vertex} encountered {seen} times, expected {expected}")
            }
            AuditFailure::Kind { vertex } => write!(f, "cut vertex {vertex} is not bypassed before it is completed"),
        }
    }
}

/// Compares the encounter log with the oracle and checks per-vertex counts and kinds.
pub fn encounter_audit(result: &Stage3Result, oracle: &[usize], n: usize) -> std::result::Result<(), AuditFailure> {
    let common = result.encounter.len().min(oracle.len());
    if let Some(index) = (0..common).find(|&i| result.encounter[i] != oracle[i]) {
        return Err(AuditFailure::OrderMismatch { index });
    }
    if result.encounter.len() != oracle.len() {
        return Err(AuditFailure::OrderMismatch { index: common });
    }
    let mut is_cut = vec![false; n];
    for &x in &result.cut_vertices {
        is_cut[x] = true;
    }
    let mut seen: Vec<Vec<EncounterKind>> = vec![Vec::new(); n];
    for (i, &v) in result.encounter.iter().enumerate() {
        if v >= n {
            return Err(AuditFailure::Count { vertex: v, seen: 1, expected: 0 });
        }
        let kind = result.encounter_kinds.get(i).copied().unwrap_or(EncounterKind::Complete);
        seen[v].push(kind);
    }
    for v in 0..n {
        let expected = if is_cut[v] { 2 } else { 1 };
        if seen[v].len() != expected {
            return Err(AuditFailure::Count { vertex: v, seen: seen[v].len(), expected });
        }
        let ok = if is_cut[v] {
            seen[v] == [EncounterKind::Bypass, EncounterKind::Complete]
        } else {
            seen[v] == [EncounterKind::Complete]
        };
        if !ok {
            return Err(AuditFailure::Kind { vertex: v });
        }
    }
    Ok(())
}

/// A failed structural check on the stage-3 edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BypassViolation {
    Empty {
        edge: usize,
    },
    /// The walk `u, x1, .., xk, v` does not follow the cyclic orders of `G'`.
    Path {
        edge: usize,
    },
    AlreadyAdjacent {
        edge: usize,
    },
    /// Two added edges start at the same vertex.
    RepeatedStart {
        edge: usize,
        other: usize,
    },
    /// The bypass sequences do not partition the cut vertices.
    Partition {
        vertex: usize,
    },
    /// The path shares two edges with one block of the graph built so far.
    SharedBlock {
        edge: usize,
    },
    /// `|X''_t|` exceeds `|X'_t|` plus the number of sequences meeting `X'_t`.
    BagGrowth {
        bag: usize,
    },
}

impl fmt::Display for BypassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BypassViolation::Empty { edge } => write!(f, "stage 3 edge #{edge} has an empty bypass sequence"),
            BypassViolation::Path { edge } => {
                write!(f, "stage 3 edge #{edge}: bypass walk does not follow the block orders")
            }
            BypassViolation::AlreadyAdjacent { edge } => write!(f, "stage 3 edge #{edge} was already an edge"),
            BypassViolation::RepeatedStart { edge, other } => {
                write!(f, "stage 3 edges #{other} and #{edge} start at the same vertex")
            }
            BypassViolation::Partition { vertex } => write!(f, "cut vertex {vertex} is not bypassed exactly once"),
            BypassViolation::SharedBlock { edge } => {
                write!(f, "stage 3 edge #{edge}: bypass path shares two edges with one block")
            }
            BypassViolation::BagGrowth { bag } => write!(f, "bag {bag} grew more than the bypass sequences allow"),
        }
    }
}

/// Walk shape, non-adjacency, distinct starts and the partition of cut vertices.
pub fn check_bypass_paths(
    g_prime: &Graph,
    bt: &RootedBlockTree,
    added: &[Stage3Edge],
) -> std::result::Result<(), BypassViolation> {
    let n = g_prime.n();
    let mut hits = vec![0usize; n];
    let mut starts: HashMap<usize, usize> = HashMap::new();
    for (i, e) in added.iter().enumerate() {
        if e.bypass.is_empty() {
            return Err(BypassViolation::Empty { edge: i });
        }
        if e.u >= n || e.v >= n || e.bypass.iter().any(|&x| x >= n) {
            return Err(BypassViolation::Path { edge: i });
        }
        if g_prime.has_edge(e.u, e.v) {
            return Err(BypassViolation::AlreadyAdjacent { edge: i });
        }
        if let Some(&other) = starts.get(&e.u) {
            return Err(BypassViolation::RepeatedStart { edge: i, other });
        }
        starts.insert(e.u, i);
        let x1 = e.bypass[0];
        let entry_ok = bt.owner(x1).is_some_and(|b| bt.next_in_block(b, e.u).ok() == Some(x1));
        if !entry_ok {
            return Err(BypassViolation::Path { edge: i });
        }
        let mut walk = e.bypass.clone();
        walk.push(e.v);
        for w in walk.windows(2) {
            let kids = bt.children_at(w[0]);
            if kids.len() != 1 || bt.next_in_block(kids[0], w[0]).ok() != Some(w[1]) || !g_prime.has_edge(w[0], w[1]) {
                return Err(BypassViolation::Path { edge: i });
            }
        }
        for &x in &e.bypass {
            hits[x] += 1;
        }
    }
    for (v, &h) in hits.iter().enumerate().take(n) {
        if h != usize::from(bt.is_cut_vertex(v)) {
            return Err(BypassViolation::Partition { vertex: v });
        }
    }
    Ok(())
}

/// Replays the additions on `G'` and checks that each bypass path uses at most one
/// edge of every block of the graph built so far. Quadratic; meant for small graphs.
pub fn check_shared_blocks(g_prime: &Graph, added: &[Stage3Edge]) -> std::result::Result<(), BypassViolation> {
    let mut g = g_prime.clone();
    for (i, e) in added.iter().enumerate() {
        let blocks = biconnected_blocks(&g).map_err(|_| BypassViolation::SharedBlock { edge: i })?;
        let mut block_of: HashMap<(usize, usize), usize> = HashMap::new();
        for (id, blk) in blocks.iter().enumerate() {
            for &(a, b) in blk.edges() {
                block_of.insert((a.min(b), a.max(b)), id);
            }
        }
        let mut path = vec![e.u];
        path.extend(&e.bypass);
        path.push(e.v);
        let mut used = vec![false; blocks.len()];
        for w in path.windows(2) {
            let Some(&id) = block_of.get(&(w[0].min(w[1]), w[0].max(w[1]))) else {
                return Err(BypassViolation::Path { edge: i });
            };
            if used[id] {
                return Err(BypassViolation::SharedBlock { edge: i });
            }
            used[id] = true;
        }
        let _ = g.add_edge(e.u, e.v);
    }
    Ok(())
}

/// `|X''_t| <= |X'_t| + #{i : S_i meets X'_t}` for every bag.
pub fn check_bag_accounting(
    pd_prime: &PathDecomposition,
    pd_dd: &PathDecomposition,
    added: &[Stage3Edge],
    n: usize,
) -> std::result::Result<(), BypassViolation> {
    let mut seq_of = vec![usize::MAX; n];
    for (i, e) in added.iter().enumerate() {
        for &x in &e.bypass {
            if x < n {
                seq_of[x] = i;
            }
        }
    }
    for t in 1..=pd_prime.len() {
        let mut meets: Vec<usize> =
            pd_prime.bag(t).iter().filter(|&&v| v < n).map(|&v| seq_of[v]).filter(|&i| i != usize::MAX).collect();
        meets.sort_unstable();
        meets.dedup();
        if pd_dd.bag(t).len() > pd_prime.bag(t).len() + meets.len() {
            return Err(BypassViolation::BagGrowth { bag: t });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_path_decomposition;
    use crate::embed::{check_outerplanar, embedded_block_tree};
    use crate::oracle::brute_force_cut_vertices;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn trivial_pd(gr: &Graph) -> PathDecomposition {
        PathDecomposition::new(vec![(0..gr.n()).collect()])
    }

    fn run(gr: &Graph, pd: &PathDecomposition) -> (RootedBlockTree, Stage3Result) {
        let bt = embedded_block_tree(gr).unwrap();
        let r = run_stage3(gr, &bt, pd, None).unwrap();
        (bt, r)
    }

    #[test]
    fn path_of_three_becomes_a_triangle() {
        let gr = g(3, &[(0, 1), (1, 2)]);
        let pd = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        let (bt, r) = run(&gr, &pd);
        assert_eq!(r.start, 0);
        assert_eq!(r.added.len(), 1);
        assert_eq!((r.added[0].u, r.added[0].v, r.added[0].bypass.clone()), (0, 2, vec![1]));
        assert_eq!(r.g_dd, g(3, &[(0, 1), (1, 2), (0, 2)]));
        assert_eq!(r.encounter, vec![0, 1, 2, 1]);
        assert_eq!(order_oracle(&bt, 0).unwrap(), vec![0, 1, 2, 1]);
        assert_eq!(encounter_audit(&r, &order_oracle(&bt, 0).unwrap(), 3), Ok(()));
        assert_eq!(r.added[0].gap, Gap::Interval { lo: 2, hi: 2, insert: 0 });
        assert_eq!(validate_path_decomposition(&r.g_dd, &r.pd_dd), Ok(()));
        assert_eq!(r.added[0].to_string(), "stage3 add 0 2 bypass 1 gap 2..2 inserted 0");
    }

    #[test]
    fn biconnected_and_tiny_inputs_are_unchanged() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let (bt, r) = run(&c4, &trivial_pd(&c4));
        assert!(r.added.is_empty());
        assert_eq!(r.g_dd, c4);
        assert_eq!(r.encounter, vec![0, 1, 2, 3]);
        assert_eq!(order_oracle(&bt, 0).unwrap(), vec![0, 1, 2, 3]);
        let edge = g(2, &[(0, 1)]);
        let (bt, r) = run(&edge, &trivial_pd(&edge));
        assert!(r.added.is_empty());
        assert_eq!(order_oracle(&bt, 0).unwrap(), vec![0, 1]);
        let one = Graph::new(1);
        let (_, r) = run(&one, &trivial_pd(&one));
        assert!(r.added.is_empty());
        assert_eq!(r.encounter, vec![0]);
    }

    #[test]
    fn long_path_gets_one_chain_of_bypasses() {
        // Path 0-1-...-6: every inner vertex is a cut vertex with one child.
        let gr = g(7, &(0..6).map(|i| (i, i + 1)).collect::<Vec<_>>());
        let pd = PathDecomposition::new((0..6).map(|i| vec![i, i + 1]).collect());
        let (bt, r) = run(&gr, &pd);
        assert_eq!(r.added.len(), 1);
        assert_eq!(r.added[0].bypass, vec![1, 2, 3, 4, 5]);
        assert!(brute_force_cut_vertices(&r.g_dd).is_empty());
        assert_eq!(encounter_audit(&r, &order_oracle(&bt, 0).unwrap(), 7), Ok(()));
        assert_eq!(check_bypass_paths(&gr, &bt, &r.added), Ok(()));
        assert_eq!(check_shared_blocks(&gr, &r.added), Ok(()));
        assert_eq!(check_bag_accounting(&pd, &r.pd_dd, &r.added, 7), Ok(()));
        assert_eq!(validate_path_decomposition(&r.g_dd, &r.pd_dd), Ok(()));
    }

    #[test]
    fn triangles_in_a_chain() {
        // Triangles 0-1-2, 2-3-4, 4-5-6 glued at 2 and 4.
        let gr = g(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (4, 5), (5, 6), (6, 4)]);
        let pd = PathDecomposition::new(vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6]]);
        let (bt, r) = run(&gr, &pd);
        assert!(brute_force_cut_vertices(&r.g_dd).is_empty());
        assert!(check_outerplanar(&r.g_dd).unwrap().is_outerplanar());
        assert_eq!(encounter_audit(&r, &order_oracle(&bt, r.start).unwrap(), 7), Ok(()));
        assert_eq!(check_bypass_paths(&gr, &bt, &r.added), Ok(()));
        assert_eq!(check_shared_blocks(&gr, &r.added), Ok(()));
        assert_eq!(validate_path_decomposition(&r.g_dd, &r.pd_dd), Ok(()));
        assert!(r.width() <= 2 * pd.width().unwrap() + 1);
    }

    #[test]
    fn rejects_two_children_at_a_cut_vertex() {
        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let bt = embedded_block_tree(&star).unwrap();
        assert!(matches!(run_stage3(&star, &bt, &trivial_pd(&star), None), Err(Error::Precondition(_))));
    }

    #[test]
    fn rejects_cut_vertex_as_start() {
        let gr = g(3, &[(0, 1), (1, 2)]);
        let bt = embedded_block_tree(&gr).unwrap();
        assert!(matches!(run_stage3(&gr, &bt, &trivial_pd(&gr), Some(1)), Err(Error::Precondition(_))));
        assert!(order_oracle(&bt, 1).is_err());
    }

    #[test]
    fn audit_catches_a_dropped_encounter() {
        let gr = g(3, &[(0, 1), (1, 2)]);
        let (bt, mut r) = run(&gr, &trivial_pd(&gr));
        let oracle = order_oracle(&bt, 0).unwrap();
        r.encounter.pop();
        r.encounter_kinds.pop();
        assert!(encounter_audit(&r, &oracle, 3).is_err());
        let mut short = oracle.clone();
        short.pop();
        assert!(matches!(encounter_audit(&r, &short, 3), Err(AuditFailure::Count { vertex: 1, .. })));
    }
}
