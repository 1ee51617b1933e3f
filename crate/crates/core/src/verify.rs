//! Trace format and the end-to-end replay verifier.
//!
//! A trace has these lines, in order:
//!
//! ```text
//! run orientation <canonical|reversed> root <block id|none> start <v>
//! stage1 width <w> bags <N>
//! stage1 node <t>: <vertices>          nice tree decomposition, node t belongs to vertex t
//! stage1 tree-edge <a> <b>
//! stage1 tree-bag <i>: <nodes>         optimal path decomposition of the tree
//! stage1 bag <i>: <vertices>           nice path decomposition of G
//! stage2 add <u> <v> at-cut <x> gap <lo>..<hi> inserted <w>   (or `gap empty`)
//! stage2 done edges=<|E'|>
//! stage3 add <u> <v> bypass <x1>,..,<xk> gap <lo>..<hi> inserted <w>
//! stage3 done edges=<|E''|> cutvertices=<cut vertices left in G''>
//! ```

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::blocks::{BlockId, RootedBlockTree};
use crate::decomposition::{validate_path_decomposition, Gap, PathDecomposition, TreeDecomposition};
use crate::embed::{check_outerplanar, Orientation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{brute_force_cut_vertices, exact_pathwidth};
use crate::pipeline::prepare;
use crate::stage1::{check_nice_path, check_nice_tree, compose, NiceTreeDecomposition};
use crate::stage2::{check_bag_growth, check_gap_properties, sequence_numbers, Stage2Edge};
use crate::stage3::{
    check_bag_accounting, check_bypass_paths, check_shared_blocks, encounter_audit, order_oracle, run_stage3,
    Stage3Edge,
};
use crate::treepw::tree_pathwidth;

/// Exact pathwidth is computed for inputs up to this many vertices.
pub const EXACT_CHECK_LIMIT: usize = 16;
/// Block replays and brute-force cut-vertex checks run up to this many vertices.
pub const REPLAY_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub orientation: Orientation,
    pub root: Option<BlockId>,
    pub start: usize,
    pub stage1_width: usize,
    pub stage1_bags: usize,
    pub nodes: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
    pub tree_bags: Vec<Vec<usize>>,
    pub bags: Vec<Vec<usize>>,
    pub stage2: Vec<Stage2Edge>,
    pub stage2_edges: usize,
    pub stage3: Vec<Stage3Edge>,
    pub stage3_edges: usize,
    pub stage3_cut_vertices: usize,
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn num(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| bad(line, format!("expected a number, found `{s}`")))
}

fn keyed(line: usize, s: &str, key: &str) -> Result<usize> {
    let v =
        s.strip_prefix(key).and_then(|r| r.strip_prefix('=')).ok_or_else(|| bad(line, format!("expected `{key}=`")))?;
    num(line, v)
}

// `<index>: v1 v2 ...` with the index required to be `expect`.
fn indexed_bag(line: usize, rest: &str, expect: usize) -> Result<Vec<usize>> {
    let (idx, body) = rest.split_once(':').ok_or_else(|| bad(line, "missing `:`"))?;
    if num(line, idx.trim())? != expect {
        return Err(bad(line, format!("expected index {expect}")));
    }
    let mut bag: Vec<usize> = body.split_whitespace().map(|f| num(line, f)).collect::<Result<_>>()?;
    bag.sort_unstable();
    bag.dedup();
    Ok(bag)
}

// `gap empty` or `gap lo..hi inserted w`, as the remaining tokens.
fn gap(line: usize, toks: &[&str]) -> Result<Gap> {
    match toks {
        ["gap", "empty"] => Ok(Gap::Empty),
        ["gap", span, "inserted", w] => {
            let (lo, hi) = span.split_once("..").ok_or_else(|| bad(line, "bad gap interval"))?;
            Ok(Gap::Interval { lo: num(line, lo)?, hi: num(line, hi)?, insert: num(line, w)? })
        }
        _ => Err(bad(line, "bad gap")),
    }
}

impl Trace {
    pub fn parse(text: &str) -> Result<Trace> {
        let mut lines =
            text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).peekable();
        let (ln, first) = lines.next().ok_or_else(|| bad(1, "empty trace"))?;
        let toks: Vec<&str> = first.split_whitespace().collect();
        let ["run", "orientation", o, "root", r, "start", s] = toks[..] else {
            return Err(bad(ln, "expected `run orientation .. root .. start ..`"));
        };
        let orientation = match o {
            "canonical" => Orientation::Canonical,
            "reversed" => Orientation::Reversed,
            _ => return Err(bad(ln, format!("unknown orientation `{o}`"))),
        };
        let root = if r == "none" { None } else { Some(num(ln, r)?) };
        let start = num(ln, s)?;

        let (ln, l) = lines.next().ok_or_else(|| bad(ln + 1, "missing stage1 header"))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let ["stage1", "width", w, "bags", nb] = toks[..] else {
            return Err(bad(ln, "expected `stage1 width .. bags ..`"));
        };
        let (stage1_width, stage1_bags) = (num(ln, w)?, num(ln, nb)?);

        let mut trace = Trace {
            orientation,
            root,
            start,
            stage1_width,
            stage1_bags,
            nodes: Vec::new(),
            tree_edges: Vec::new(),
            tree_bags: Vec::new(),
            bags: Vec::new(),
            stage2: Vec::new(),
            stage2_edges: 0,
            stage3: Vec::new(),
            stage3_edges: 0,
            stage3_cut_vertices: 0,
        };
        let mut section = 0;
        let mut done = false;
        for (ln, l) in lines {
            if done {
                return Err(bad(ln, "text after the final line"));
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            let rank = match (toks.first().copied(), toks.get(1).copied()) {
                (Some("stage1"), Some("node")) => 0,
                (Some("stage1"), Some("tree-edge")) => 1,
                (Some("stage1"), Some("tree-bag")) => 2,
                (Some("stage1"), Some("bag")) => 3,
                (Some("stage2"), Some("add")) => 4,
                (Some("stage2"), Some("done")) => 5,
                (Some("stage3"), Some("add")) => 6,
                (Some("stage3"), Some("done")) => 7,
                _ => return Err(bad(ln, format!("unrecognized line `{l}`"))),
            };
            if rank < section || (rank == section && (rank == 5 || rank == 7)) {
                return Err(bad(ln, "line out of order"));
            }
            section = rank;
            let rest = l.splitn(3, ' ').nth(2).unwrap_or("");
            match rank {
                0 => trace.nodes.push(indexed_bag(ln, rest, trace.nodes.len())?),
                1 => match toks[..] {
                    [_, _, a, b] => trace.tree_edges.push((num(ln, a)?, num(ln, b)?)),
                    _ => return Err(bad(ln, "expected `stage1 tree-edge a b`")),
                },
                2 => trace.tree_bags.push(indexed_bag(ln, rest, trace.tree_bags.len() + 1)?),
                3 => trace.bags.push(indexed_bag(ln, rest, trace.bags.len() + 1)?),
                4 => {
                    if toks.len() < 6 || toks[4] != "at-cut" {
                        return Err(bad(ln, "expected `stage2 add u v at-cut x gap ..`"));
                    }
                    trace.stage2.push(Stage2Edge {
                        u: num(ln, toks[2])?,
                        v: num(ln, toks[3])?,
                        cut: num(ln, toks[5])?,
                        gap: gap(ln, &toks[6..])?,
                    });
                }
                5 => match toks[..] {
                    [_, _, e] => trace.stage2_edges = keyed(ln, e, "edges")?,
                    _ => return Err(bad(ln, "expected `stage2 done edges=..`")),
                },
                6 => {
                    if toks.len() < 6 || toks[4] != "bypass" {
                        return Err(bad(ln, "expected `stage3 add u v bypass x1,.. gap ..`"));
                    }
                    let bypass = toks[5].split(',').map(|x| num(ln, x)).collect::<Result<Vec<_>>>()?;
                    trace.stage3.push(Stage3Edge {
                        u: num(ln, toks[2])?,
                        v: num(ln, toks[3])?,
                        bypass,
                        gap: gap(ln, &toks[6..])?,
                    });
                }
                _ => match toks[..] {
                    [_, _, e, c] => {
                        trace.stage3_edges = keyed(ln, e, "edges")?;
                        trace.stage3_cut_vertices = keyed(ln, c, "cutvertices")?;
                        done = true;
                    }
                    _ => return Err(bad(ln, "expected `stage3 done edges=.. cutvertices=..`")),
                },
            }
        }
        if !done {
            return Err(bad(text.lines().count() + 1, "missing `stage3 done` line"));
        }
        Ok(trace)
    }
}

/// Key/value results of a verification run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineReport {
    entries: Vec<(String, String)>,
    details: Vec<String>,
    timings: Vec<(String, Duration)>,
}

impl PipelineReport {
    fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    fn verdict(&mut self, key: &str, outcome: std::result::Result<(), String>) {
        match outcome {
            Ok(()) => self.set(key, "yes"),
            Err(why) => {
                self.set(key, "no");
                self.details.push(format!("{key}: {why}"));
            }
        }
    }

    fn bound(&mut self, key: &str, holds: Option<bool>) {
        self.set(key, holds.map_or("skipped", |h| if h { "yes" } else { "no" }));
        if holds == Some(false) {
            self.details.push(format!("{key}: bound exceeded"));
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn details(&self) -> &[String] {
        &self.details
    }

    /// True when no verdict or bound is `no`.
    pub fn ok(&self) -> bool {
        self.entries.iter().all(|(k, v)| !(k.starts_with("verdict.") || k.starts_with("bound.")) || v != "no")
    }

    pub fn add_timing(&mut self, key: &str, d: Duration) {
        self.timings.push((key.to_string(), d));
    }

    /// `key=value` lines, then `detail=` lines; timings only when asked for.
    pub fn to_text(&self, with_timings: bool) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}={v}");
        }
        if with_timings {
            for (k, d) in &self.timings {
                let _ = writeln!(out, "time.{k}_ms={:.3}", d.as_secs_f64() * 1e3);
            }
        }
        for d in &self.details {
            let _ = writeln!(out, "detail={d}");
        }
        out
    }
}

/// Vertex ranges kept current while a decomposition grows by gap insertions.
struct LiveRanges {
    first: Vec<usize>,
    last: Vec<usize>,
}

impl LiveRanges {
    fn of(pd: &PathDecomposition, n: usize) -> Result<LiveRanges> {
        let r = pd.ranges(n);
        let mut first = vec![0; n];
        let mut last = vec![0; n];
        for v in 0..n {
            let (f, l) = r.range(v)?;
            first[v] = f;
            last[v] = l;
        }
        Ok(LiveRanges { first, last })
    }

    /// Applies `gap` and checks that the inserted vertex stays contiguous and that
    /// `u` and `v` then share a bag.
    fn apply(&mut self, pd: &mut PathDecomposition, u: usize, v: usize, gap: Gap) -> std::result::Result<(), String> {
        if let Gap::Interval { lo, hi, insert } = gap {
            if lo > hi || hi > pd.len() || lo == 0 {
                return Err(format!("gap {lo}..{hi} is out of bounds"));
            }
            let w = insert;
            if w != u && w != v {
                return Err(format!("gap inserts {w}, which is not an endpoint of ({u},{v})"));
            }
            // Gaps come from frozen ranges, so a later gap may overlap an earlier insertion;
            // the union stays an interval as long as the two touch.
            if lo > self.last[w] + 1 || hi + 1 < self.first[w] {
                return Err(format!("gap {lo}..{hi} is detached from the range of {w}"));
            }
            for t in lo..=hi {
                pd.insert(t, w);
            }
            self.first[w] = self.first[w].min(lo);
            self.last[w] = self.last[w].max(hi);
        }
        if self.first[u].max(self.first[v]) > self.last[u].min(self.last[v]) {
            return Err(format!("edge ({u},{v}) is not covered after its update"));
        }
        Ok(())
    }
}

fn at(i: usize, e: impl std::fmt::Display) -> String {
    format!("edge #{i}: {e}")
}

/// Replays a trace against `g` and collects verdicts, widths and bound checks.
pub fn verify_pipeline(g: &Graph, trace: &Trace) -> PipelineReport {
    let mut report = PipelineReport::default();
    let n = g.n();
    report.set("n", n);
    report.set("edges.input", g.edge_count());
    let clock = Instant::now();

    let bt = match prepare(g, trace.orientation, trace.root) {
        Ok(bt) => bt,
        Err(e) => {
            report.verdict("verdict.input", Err(e.to_string()));
            return report;
        }
    };
    report.verdict("verdict.input", Ok(()));
    if bt.root() != trace.root {
        report
            .verdict("verdict.stage1", Err(format!("trace root {:?} but block tree root {:?}", trace.root, bt.root())));
        return report;
    }

    // Stage 1: the traced nice decomposition, the traced tree layout and their composition.
    let npd = PathDecomposition::new(trace.bags.clone());
    let stage1 = (|| -> std::result::Result<(), String> {
        if trace.nodes.len() != n {
            return Err(format!("{} nodes for {n} vertices", trace.nodes.len()));
        }
        let td = TreeDecomposition::new(trace.nodes.clone(), trace.tree_edges.clone()).with_bijection((0..n).collect());
        check_nice_tree(g, &bt, &td).map_err(|v| v.to_string())?;
        let tree = td.tree().map_err(|e| e.to_string())?;
        let tree_pd = PathDecomposition::new(trace.tree_bags.clone());
        validate_path_decomposition(&tree, &tree_pd).map_err(|v| format!("tree layout: {v}"))?;
        let optimal = tree_pathwidth(&tree).map_err(|e| e.to_string())?;
        if tree_pd.width().map_err(|e| e.to_string())? != optimal {
            return Err(format!("tree layout is not optimal (pathwidth {optimal})"));
        }
        let composed = compose(&NiceTreeDecomposition { td, propagated: Vec::new() }, &tree_pd);
        if composed != npd {
            return Err("path decomposition is not the composition of the traced parts".into());
        }
        validate_path_decomposition(g, &npd).map_err(|v| v.to_string())?;
        check_nice_path(&bt, &npd).map_err(|v| v.to_string())?;
        let w = npd.width().map_err(|e| e.to_string())?;
        if (w, npd.len()) != (trace.stage1_width, trace.stage1_bags) {
            return Err("header width or bag count does not match the bags".into());
        }
        Ok(())
    })();
    let stage1_ok = stage1.is_ok();
    report.verdict("verdict.stage1", stage1);
    if !stage1_ok {
        return report;
    }
    report.add_timing("stage1", clock.elapsed());
    let clock = Instant::now();

    // Stage 2: chain structure per cut vertex, gaps against the frozen ranges, and
    // validity after every single update.
    let mut g_prime = g.clone();
    let mut pd_prime = npd.clone();
    let stage2 = (|| -> std::result::Result<(), String> {
        let seq = sequence_numbers(&npd, &bt).map_err(|e| e.to_string())?;
        let frozen = npd.ranges(n);
        let mut live = LiveRanges::of(&npd, n).map_err(|e| e.to_string())?;
        let mut i = 0;
        for x in bt.cut_vertices() {
            let kids = bt.children_at(x);
            let edges = &trace.stage2[i.min(trace.stage2.len())..];
            let count = edges.iter().take_while(|e| e.cut == x).count();
            if count + 1 != kids.len() {
                return Err(format!("cut vertex {x} has {} children but {count} chain edges", kids.len()));
            }
            // Recover the child order from the chain: B_1 is the child whose first vertex
            // starts edge 1, and each edge's far end is the last vertex of the next child.
            let by_first = |f: usize| kids.iter().copied().find(|&b| bt.first(b) == Some(f));
            let by_last = |l: usize| kids.iter().copied().find(|&b| bt.last(b) == Some(l));
            let mut order = Vec::with_capacity(kids.len());
            for (k, e) in edges[..count].iter().enumerate() {
                let cur = by_first(e.u).ok_or_else(|| at(i + k, "does not start at a first vertex"))?;
                if k > 0 && order.last() != Some(&cur) {
                    return Err(at(i + k, "does not continue the chain"));
                }
                if k == 0 {
                    order.push(cur);
                }
                order.push(by_last(e.v).ok_or_else(|| at(i + k, "does not end at a last vertex"))?);
            }
            let mut seen = order.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != order.len() && kids.len() > 1 {
                return Err(format!("children of {x} repeat in the chain"));
            }
            if order.windows(2).any(|w| seq.get(w[0]) > seq.get(w[1])) {
                return Err(format!("children of {x} are not in sequence-number order"));
            }
            for (k, e) in edges[..count].iter().enumerate() {
                if g_prime.has_edge(e.u, e.v) {
                    return Err(at(i + k, "already present"));
                }
                g_prime.add_edge(e.u, e.v).map_err(|err| at(i + k, err))?;
                if frozen.gap(e.u, e.v).map_err(|err| at(i + k, err))? != e.gap {
                    return Err(at(i + k, "gap differs from the frozen ranges"));
                }
                live.apply(&mut pd_prime, e.u, e.v, e.gap).map_err(|m| at(i + k, m))?;
            }
            i += count;
        }
        if i != trace.stage2.len() {
            return Err(at(i, "at a vertex that is not a cut vertex, or out of order"));
        }
        if g_prime.edge_count() != trace.stage2_edges {
            return Err(format!("done line says {} edges, replay has {}", trace.stage2_edges, g_prime.edge_count()));
        }
        validate_path_decomposition(&g_prime, &pd_prime).map_err(|v| v.to_string())?;
        Ok(())
    })();
    let stage2_ok = stage2.is_ok();
    report.verdict("verdict.stage2_replay", stage2);
    if !stage2_ok {
        return report;
    }
    report.verdict("verdict.stage2_gaps", check_gap_properties(&npd, &trace.stage2, n).map_err(|v| v.to_string()));
    report.verdict(
        "verdict.stage2_bag_growth",
        match check_bag_growth(&npd, &pd_prime, &bt) {
            None => Ok(()),
            Some(t) => Err(format!("bag {t} grew by more than its cut vertices")),
        },
    );

    let bt_prime = match prepare(&g_prime, Orientation::Canonical, None) {
        Ok(b) => b,
        Err(e) => {
            report.verdict("verdict.stage2_outerplanar", Err(e.to_string()));
            return report;
        }
    };
    report.verdict("verdict.stage2_outerplanar", Ok(()));
    let two_sides = (|| {
        if let Some(x) = bt_prime.cut_vertices().find(|&x| bt_prime.blocks_containing(x).len() != 2) {
            return Err(format!("removing {x} leaves {} components", bt_prime.blocks_containing(x).len()));
        }
        if n <= REPLAY_LIMIT {
            if let Some(x) =
                brute_force_cut_vertices(&g_prime).into_iter().find(|&x| g_prime.component_count_without(Some(x)) != 2)
            {
                return Err(format!("removing {x} does not leave two components"));
            }
        }
        Ok(())
    })();
    report.verdict("verdict.stage2_two_components", two_sides);
    report.add_timing("stage2", clock.elapsed());
    let clock = Instant::now();

    // Stage 3: re-execution must reproduce the traced edges exactly.
    let rerun = match run_stage3(&g_prime, &bt_prime, &pd_prime, Some(trace.start)) {
        Ok(r) => r,
        Err(e) => {
            report.verdict("verdict.stage3_replay", Err(e.to_string()));
            return report;
        }
    };
    let mut g_dd = g_prime.clone();
    let mut pd_dd = pd_prime.clone();
    let stage3 = (|| -> std::result::Result<(), String> {
        let frozen = pd_prime.ranges(n);
        let mut live = LiveRanges::of(&pd_prime, n).map_err(|e| e.to_string())?;
        for (i, e) in trace.stage3.iter().enumerate() {
            if rerun.added.get(i) != Some(e) {
                return Err(at(i, "differs from the re-executed traversal"));
            }
            if !g_dd.add_edge(e.u, e.v).map_err(|err| at(i, err))? {
                return Err(at(i, "already present"));
            }
            if frozen.gap(e.u, e.v).map_err(|err| at(i, err))? != e.gap {
                return Err(at(i, "gap differs from the frozen ranges"));
            }
            live.apply(&mut pd_dd, e.u, e.v, e.gap).map_err(|m| at(i, m))?;
        }
        if rerun.added.len() != trace.stage3.len() {
            return Err(format!("traversal adds {} edges, trace has {}", rerun.added.len(), trace.stage3.len()));
        }
        if g_dd.edge_count() != trace.stage3_edges {
            return Err(format!("done line says {} edges, replay has {}", trace.stage3_edges, g_dd.edge_count()));
        }
        Ok(())
    })();
    let stage3_ok = stage3.is_ok();
    report.verdict("verdict.stage3_replay", stage3);
    if !stage3_ok {
        return report;
    }
    report.verdict(
        "verdict.encounter_audit",
        order_oracle(&bt_prime, rerun.start)
            .map_err(|e| e.to_string())
            .and_then(|o| encounter_audit(&rerun, &o, n).map_err(|a| a.to_string())),
    );
    report.verdict(
        "verdict.bypass_paths",
        check_bypass_paths(&g_prime, &bt_prime, &trace.stage3).map_err(|v| v.to_string()),
    );
    report.verdict(
        "verdict.bag_accounting",
        check_bag_accounting(&pd_prime, &pd_dd, &trace.stage3, n).map_err(|v| v.to_string()),
    );
    if n <= REPLAY_LIMIT {
        report
            .verdict("verdict.shared_blocks", check_shared_blocks(&g_prime, &trace.stage3).map_err(|v| v.to_string()));
    } else {
        report.set("verdict.shared_blocks", "skipped");
    }

    // The final graph.
    report.verdict(
        "verdict.outerplanar",
        match check_outerplanar(&g_dd) {
            Ok(c) if c.is_outerplanar() => Ok(()),
            Ok(c) => Err(c.witness().map_or_else(String::new, |w| w.to_string())),
            Err(e) => Err(e.to_string()),
        },
    );
    let cut_left = match RootedBlockTree::build(&g_dd) {
        Ok(b) => b.cut_vertices().count(),
        Err(_) => usize::MAX,
    };
    let biconnected = (|| {
        if cut_left != trace.stage3_cut_vertices {
            return Err(format!("done line says {} cut vertices, replay has {cut_left}", trace.stage3_cut_vertices));
        }
        if n >= 3 && cut_left != 0 {
            return Err(format!("{cut_left} cut vertices remain"));
        }
        if (3..=REPLAY_LIMIT).contains(&n) && !brute_force_cut_vertices(&g_dd).is_empty() {
            return Err("brute-force search finds a cut vertex".into());
        }
        Ok(())
    })();
    report.verdict("verdict.biconnected", biconnected);
    report.verdict(
        "verdict.supergraph",
        if g_dd.is_supergraph_of(&g_prime) && g_prime.is_supergraph_of(g) {
            Ok(())
        } else {
            Err("edges were lost".into())
        },
    );
    report.verdict("verdict.decomposition", validate_path_decomposition(&g_dd, &pd_dd).map_err(|v| v.to_string()));
    report.add_timing("stage3", clock.elapsed());

    let w1 = npd.width().unwrap_or(0);
    let w2 = pd_prime.width().unwrap_or(0);
    let w3 = pd_dd.width().unwrap_or(0);
    report.set("edges.stage2", trace.stage2.len());
    report.set("edges.stage3", trace.stage3.len());
    report.set("width.stage1", w1);
    report.set("width.stage2", w2);
    report.set("width.stage3", w3);
    let p = if n <= EXACT_CHECK_LIMIT { exact_pathwidth(g).ok() } else { None };
    report.set("pathwidth.exact", p.map_or("skipped".to_string(), |p| p.to_string()));
    report.bound("bound.stage1_4p_plus_3", p.map(|p| w1 <= 4 * p + 3));
    report.bound("bound.stage2_8p_plus_7", p.map(|p| w2 <= 8 * p + 7));
    report.bound("bound.stage3_16p_plus_15", p.map(|p| w3 <= 16 * p + 15));
    report.bound("bound.stage2_relative", Some(w2 <= 2 * w1 + 1));
    report.bound("bound.stage3_relative", Some(w3 <= 2 * w2 + 1));
    report
}

/// Parses `trace_text` and verifies it; a parse failure becomes a `no` verdict.
pub fn verify_trace_text(g: &Graph, trace_text: &str) -> PipelineReport {
    match Trace::parse(trace_text) {
        Ok(t) => verify_pipeline(g, &t),
        Err(e) => {
            let mut r = PipelineReport::default();
            r.verdict("verdict.trace_format", Err(e.to_string()));
            r
        }
    }
}
