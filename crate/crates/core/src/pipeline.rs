//! The three stages wired together, plus the textual trace of a run.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::blocks::{BlockId, RootedBlockTree};
use crate::embed::{check_outerplanar, fix_clockwise_order, Orientation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stage1::{run_stage1, Stage1Result};
use crate::stage2::{run_stage2_with, sequence_numbers, SequenceNumbers, Stage2Result, TieBreak};
use crate::stage3::{run_stage3, Stage3Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOptions {
    pub orientation: Orientation,
    /// Root block of `G`; the default is the smallest eligible block id.
    pub root: Option<BlockId>,
    pub tie_break: TieBreak,
    /// Stage-3 start vertex; the default is the smallest non-cut vertex of the root block.
    pub start: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Timings {
    pub embed: Duration,
    pub stage1: Duration,
    pub stage2: Duration,
    pub stage3: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.embed + self.stage1 + self.stage2 + self.stage3
    }
}

#[derive(Debug, Clone)]
pub struct Augmentation {
    pub options: PipelineOptions,
    pub bt: RootedBlockTree,
    pub stage1: Stage1Result,
    pub seq: SequenceNumbers,
    pub stage2: Stage2Result,
    pub bt_prime: RootedBlockTree,
    pub stage3: Stage3Result,
    /// Cut vertices left in `G''`; empty unless something went wrong.
    pub final_cut_vertices: Vec<usize>,
    pub timings: Timings,
}

/// Rooted, embedded block tree of a connected outerplanar graph.
pub fn prepare(g: &Graph, orientation: Orientation, root: Option<BlockId>) -> Result<RootedBlockTree> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let cert = check_outerplanar(g)?;
    let bt = match root {
        Some(r) => RootedBlockTree::build_with_root(g, r)?,
        None => RootedBlockTree::build(g)?,
    };
    fix_clockwise_order(&cert, bt, orientation)
}

pub fn augment(g: &Graph) -> Result<Augmentation> {
    augment_with(g, PipelineOptions::default())
}

pub fn augment_with(g: &Graph, options: PipelineOptions) -> Result<Augmentation> {
    let mut timings = Timings::default();
    let clock = Instant::now();
    let bt = prepare(g, options.orientation, options.root)?;
    timings.embed = clock.elapsed();

    let clock = Instant::now();
    let stage1 = run_stage1(g, &bt)?;
    timings.stage1 = clock.elapsed();

    let clock = Instant::now();
    let seq = sequence_numbers(&stage1.npd, &bt)?;
    let stage2 = run_stage2_with(g, &bt, &stage1.npd, &seq, options.tie_break)?;
    timings.stage2 = clock.elapsed();

    let clock = Instant::now();
    let bt_prime = prepare(&stage2.g_prime, Orientation::Canonical, None)
        .map_err(|e| Error::Internal(format!("stage 2 output: {e}")))?;
    let stage3 = run_stage3(&stage2.g_prime, &bt_prime, &stage2.pd_prime, options.start)?;
    let final_cut_vertices = RootedBlockTree::build(&stage3.g_dd)?.cut_vertices().collect();
    timings.stage3 = clock.elapsed();

    Ok(Augmentation { options, bt, stage1, seq, stage2, bt_prime, stage3, final_cut_vertices, timings })
}

impl Augmentation {
    pub fn graph(&self) -> &Graph {
        &self.stage3.g_dd
    }

    pub fn decomposition(&self) -> &crate::decomposition::PathDecomposition {
        &self.stage3.pd_dd
    }

    /// Line-oriented record of the run; see [`crate::verify::Trace`] for the grammar.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        let root = self.bt.root().map_or("none".to_string(), |r| r.to_string());
        let orientation = match self.options.orientation {
            Orientation::Canonical => "canonical",
            Orientation::Reversed => "reversed",
        };
        let _ = writeln!(out, "run orientation {orientation} root {root} start {}", self.stage3.start);
        let s1 = &self.stage1;
        let _ = writeln!(out, "stage1 width {} bags {}", s1.width(), s1.npd.len());
        for (t, bag) in s1.nice.td.bags().iter().enumerate() {
            let _ = writeln!(out, "stage1 node {t}:{}", join(bag));
        }
        let mut edges: Vec<(usize, usize)> =
            s1.nice.td.tree_edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        for (a, b) in edges {
            let _ = writeln!(out, "stage1 tree-edge {a} {b}");
        }
        for (i, bag) in s1.tree_pd.bags().iter().enumerate() {
            let _ = writeln!(out, "stage1 tree-bag {}:{}", i + 1, join(bag));
        }
        for (i, bag) in s1.npd.bags().iter().enumerate() {
            let _ = writeln!(out, "stage1 bag {}:{}", i + 1, join(bag));
        }
        for e in &self.stage2.added {
            let _ = writeln!(out, "{e}");
        }
        let _ = writeln!(out, "stage2 done edges={}", self.stage2.g_prime.edge_count());
        for e in &self.stage3.added {
            let _ = writeln!(out, "{e}");
        }
        let _ = writeln!(
            out,
            "stage3 done edges={} cutvertices={}",
            self.stage3.g_dd.edge_count(),
            self.final_cut_vertices.len()
        );
        out
    }
}

fn join(bag: &[usize]) -> String {
    bag.iter().map(|v| format!(" {v}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let a = augment(&g).unwrap();
        assert!(a.stage2.added.is_empty());
        assert_eq!(a.stage3.added.len(), 1);
        assert_eq!(a.graph(), &Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
        assert!(a.final_cut_vertices.is_empty());
        let trace = a.trace();
        assert!(trace.starts_with("run orientation canonical root 0 start 0\n"));
        assert!(trace.ends_with("stage3 done edges=3 cutvertices=0\n"));
        assert_eq!(trace.lines().filter(|l| l.starts_with("stage3 add")).count(), 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(augment(&k4), Err(Error::NotOuterplanar(_))));
        let two = Graph::new(2);
        assert_eq!(augment(&two).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn single_vertex_and_triangle_are_fixed_points() {
        let one = Graph::new(1);
        let a = augment(&one).unwrap();
        assert_eq!(a.graph(), &one);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let a = augment(&tri).unwrap();
        assert_eq!(a.graph(), &tri);
        assert!(a.stage2.added.is_empty() && a.stage3.added.is_empty());
    }

    #[test]
    fn trace_is_deterministic() {
        let g = crate::gen::generate(&crate::gen::GenSpec { seed: 11, n: 60, ..Default::default() });
        assert_eq!(augment(&g).unwrap().trace(), augment(&g).unwrap().trace());
    }
}
