//! Optimal path decompositions of trees via vertex-separation labels.
//!
//! The label of a rooted subtree is a strictly decreasing list of values; every
//! element except possibly the last is critical. The head is the vertex
//! separation number of the subtree; after a critical element, the remaining
//! elements describe the subtree with the critical vertex's subtree removed.

use std::collections::VecDeque;

use crate::decomposition::PathDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

type Label = Vec<(u32, bool)>;

fn combine(children: &[&[(u32, bool)]]) -> Label {
    let Some(m) = children.iter().map(|l| l[0].0).max() else {
        return vec![(0, false)];
    };
    if m == 0 {
        return vec![(1, false)];
    }
    let tops: Vec<usize> = (0..children.len()).filter(|&i| children[i][0].0 == m).collect();
    match tops.len() {
        1 => {
            let c = children[tops[0]];
            if !c[0].1 {
                return vec![(m, false)];
            }
            let mut rest_children: Vec<&[(u32, bool)]> =
                children.iter().enumerate().filter(|&(i, _)| i != tops[0]).map(|(_, l)| *l).collect();
            if c.len() > 1 {
                rest_children.push(&c[1..]);
            }
            let rest = combine(&rest_children);
            if rest[0].0 >= m {
                vec![(m + 1, false)]
            } else {
                let mut out = Vec::with_capacity(rest.len() + 1);
                out.push((m, true));
                out.extend(rest);
                out
            }
        }
        2 if tops.iter().all(|&i| !children[i][0].1) => vec![(m, true)],
        _ => vec![(m + 1, false)],
    }
}

struct Solver<'a> {
    t: &'a Graph,
    removed: Vec<bool>,
    parent: Vec<usize>,
    label: Vec<Label>,
}

impl<'a> Solver<'a> {
    fn new(t: &'a Graph) -> Self {
        let n = t.n();
        Solver { t, removed: vec![false; n], parent: vec![usize::MAX; n], label: vec![Vec::new(); n] }
    }

    fn children(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.parent[u];
        self.t.neighbors(u).iter().copied().filter(move |&w| w != p && !self.removed[w])
    }

    fn top_children(&self, u: usize, k: u32) -> Vec<usize> {
        self.children(u).filter(|&c| self.label[c][0].0 == k).collect()
    }

    // Follows the unique child of value `k` while one exists.
    fn chain(&self, start: usize, k: u32) -> Vec<usize> {
        let mut out = vec![start];
        let mut u = start;
        loop {
            let kids = self.top_children(u, k);
            if kids.len() != 1 {
                break;
            }
            u = kids[0];
            out.push(u);
        }
        out
    }

    // Roots the component of `root` there and labels all its vertices.
    fn label_component(&mut self, root: usize) {
        let mut order = vec![root];
        self.parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let kids: Vec<usize> = self.children(u).collect();
            for c in kids {
                self.parent[c] = u;
                order.push(c);
                queue.push_back(c);
            }
        }
        for &u in order.iter().rev() {
            let l = {
                let kids: Vec<&[(u32, bool)]> = self.children(u).map(|c| self.label[c].as_slice()).collect();
                combine(&kids)
            };
            self.label[u] = l;
        }
    }

    /// Path decomposition of the component of `root` among non-removed vertices,
    /// of width equal to its vertex separation number. Marks the component removed.
    fn solve(&mut self, root: usize) -> Vec<Vec<usize>> {
        self.label_component(root);
        let (k, critical) = self.label[root][0];
        if k == 0 {
            self.removed[root] = true;
            return vec![vec![root]];
        }
        let spine = if !critical {
            self.chain(root, k)
        } else {
            let mut u = root;
            let kids = loop {
                let kids = self.top_children(u, k);
                if kids.len() >= 2 {
                    break kids;
                }
                u = kids[0];
            };
            let mut spine = self.chain(kids[0], k);
            spine.reverse();
            spine.push(u);
            spine.extend(self.chain(kids[1], k));
            spine
        };
        for &p in &spine {
            self.removed[p] = true;
        }
        let mut bags = Vec::new();
        for (i, &p) in spine.iter().enumerate() {
            let comps: Vec<usize> = self.t.neighbors(p).iter().copied().filter(|&w| !self.removed[w]).collect();
            for w in comps {
                if self.removed[w] {
                    continue;
                }
                for mut bag in self.solve(w) {
                    bag.push(p);
                    bags.push(bag);
                }
            }
            if let Some(&q) = spine.get(i + 1) {
                bags.push(vec![p, q]);
            } else if spine.len() == 1 && bags.is_empty() {
                bags.push(vec![p]);
            }
        }
        bags
    }
}

fn check_tree(t: &Graph) -> Result<()> {
    if t.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if t.edge_count() + 1 != t.n() || !t.is_connected() {
        return Err(Error::NotATree);
    }
    Ok(())
}

/// Path decomposition of a tree whose width equals the tree's pathwidth.
pub fn tree_optimal_path_decomposition(t: &Graph) -> Result<PathDecomposition> {
    check_tree(t)?;
    let mut solver = Solver::new(t);
    Ok(PathDecomposition::new(solver.solve(0)))
}

/// Pathwidth (equivalently vertex separation number) of a tree.
pub fn tree_pathwidth(t: &Graph) -> Result<usize> {
    check_tree(t)?;
    let mut solver = Solver::new(t);
    solver.label_component(0);
    Ok(solver.label[0][0].0 as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_path_decomposition;

    fn check(t: &Graph, expected: usize) {
        let pd = tree_optimal_path_decomposition(t).unwrap();
        assert_eq!(validate_path_decomposition(t, &pd), Ok(()));
        assert_eq!(pd.width().unwrap(), expected);
        assert_eq!(tree_pathwidth(t).unwrap(), expected);
    }

    fn complete_binary(height: u32) -> Graph {
        let n = (1usize << (height + 1)) - 1;
        Graph::from_edges(n, (1..n).map(|v| ((v - 1) / 2, v))).unwrap()
    }

    #[test]
    fn path_and_star() {
        check(&Graph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap(), 1);
        check(&Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap(), 1);
        check(&Graph::new(1), 0);
    }

    #[test]
    fn complete_binary_trees() {
        check(&complete_binary(1), 1);
        check(&complete_binary(2), 1);
        check(&complete_binary(3), 2);
        check(&complete_binary(4), 2);
        check(&complete_binary(5), 3);
    }

    #[test]
    fn spider_with_three_long_legs() {
        // Three legs of length 2 from a centre need width 2.
        check(&Graph::from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap(), 2);
    }

    proptest::proptest! {
        #[test]
        fn matches_exact_oracle(parents in proptest::collection::vec(0usize..1000, 0..15)) {
            // Vertex i+1 hangs below a uniformly chosen earlier vertex.
            let n = parents.len() + 1;
            let t = Graph::from_edges(n, parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1))).unwrap();
            let pd = tree_optimal_path_decomposition(&t).unwrap();
            proptest::prop_assert_eq!(validate_path_decomposition(&t, &pd), Ok(()));
            proptest::prop_assert_eq!(pd.width().unwrap(), crate::oracle::exact_pathwidth(&t).unwrap());
        }
    }

    #[test]
    fn rejects_non_trees() {
        let cyc = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tree_optimal_path_decomposition(&cyc), Err(Error::NotATree));
        assert_eq!(tree_optimal_path_decomposition(&Graph::new(2)), Err(Error::NotATree));
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 200_000;
        let t = Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        assert_eq!(tree_optimal_path_decomposition(&t).unwrap().width().unwrap(), 1);
    }
}
