//! Seeded generator of connected outerplanar graphs.
//!
//! Randomness comes from SplitMix64:
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15            (wrapping)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
//! output z ^ (z >> 31)
//! ```
//!
//! A uniform real is `(output >> 11) * 2^-53`; a uniform index below `k` is `output mod k`.

use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        finalize(self.state)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform-ish index in `0..k`; `k` must be positive.
    pub fn below(&mut self, k: usize) -> usize {
        (self.next_u64() % k as u64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One SplitMix64 step applied to `x` as the state; a cheap deterministic hash.
pub fn mix64(x: u64) -> u64 {
    finalize(x.wrapping_add(0x9E37_79B9_7F4A_7C15))
}

/// Where each new block is glued to the existing graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Attach {
    /// A uniformly random existing vertex.
    #[default]
    Uniform,
    /// The most recently created vertex, giving deep block chains.
    Chain,
    /// Always the first vertex, giving one cut vertex with many children.
    Fan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub n: usize,
    /// 0 favours few large blocks, 1 favours many small ones.
    pub block_count_bias: f64,
    /// Fraction of a random triangulation's diagonals kept in each block.
    pub chord_density: f64,
    /// Largest block size; 2 yields trees.
    pub max_block_size: usize,
    pub attach: Attach,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            seed: 0,
            n: 16,
            block_count_bias: 0.5,
            chord_density: 0.5,
            max_block_size: 8,
            attach: Attach::Uniform,
        }
    }
}

/// Generates a connected outerplanar graph on `spec.n` vertices (at least one).
///
/// Blocks are added one at a time: a block of size `s` takes an existing vertex and
/// `s - 1` new ones, arranged as a shuffled polygon plus a random subset of the
/// diagonals of a random triangulation. Vertex ids are permuted at the end.
pub fn generate(spec: &GenSpec) -> Graph {
    let n = spec.n.max(1);
    let mut rng = SplitMix64::new(spec.seed);
    let max_block = spec.max_block_size.max(2);
    let bias = spec.block_count_bias.clamp(0.0, 1.0);
    let density = spec.chord_density.clamp(0.0, 1.0);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(2 * n);
    let mut placed = 1;
    while placed < n {
        let remaining = n - placed;
        let s_max = max_block.min(remaining + 1);
        let r = rng.next_f64().powf(4.0 * bias);
        let s = 2 + (s_max - 2).min((r * (s_max - 1) as f64) as usize);
        let anchor = match spec.attach {
            Attach::Uniform => rng.below(placed),
            Attach::Chain => placed - 1,
            Attach::Fan => 0,
        };
        let mut poly: Vec<usize> = std::iter::once(anchor).chain(placed..placed + s - 1).collect();
        placed += s - 1;
        if s == 2 {
            edges.push((poly[0], poly[1]));
            continue;
        }
        rng.shuffle(&mut poly);
        for i in 0..s {
            edges.push((poly[i], poly[(i + 1) % s]));
        }
        let mut stack = vec![(0usize, s - 1)];
        while let Some((i, j)) = stack.pop() {
            if j < i + 2 {
                continue;
            }
            let m = i + 1 + rng.below(j - i - 1);
            for (a, b) in [(i, m), (m, j)] {
                if b >= a + 2 {
                    if rng.next_f64() < density {
                        edges.push((poly[a], poly[b]));
                    }
                    stack.push((a, b));
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    Graph::from_edges(n, edges.into_iter().map(|(a, b)| (perm[a], perm[b]))).expect("generated edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::biconnected_blocks;
    use crate::embed::check_outerplanar;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 of the reference recurrence.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn single_vertex() {
        let g = generate(&GenSpec { n: 1, ..GenSpec::default() });
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn one_chordless_block_is_a_cycle() {
        let g = generate(&GenSpec {
            n: 9,
            block_count_bias: 0.0,
            chord_density: 0.0,
            max_block_size: 9,
            ..GenSpec::default()
        });
        assert_eq!(g.edge_count(), 9);
        assert!((0..9).all(|v| g.degree(v) == 2));
        assert!(g.is_connected());
    }

    #[test]
    fn trees_when_blocks_are_edges() {
        let g = generate(&GenSpec { n: 40, max_block_size: 2, seed: 7, ..GenSpec::default() });
        assert_eq!(g.edge_count(), 39);
        assert!(g.is_connected());
    }

    #[test]
    fn fan_puts_all_blocks_at_one_vertex() {
        let g = generate(&GenSpec {
            n: 31,
            max_block_size: 4,
            block_count_bias: 1.0,
            attach: Attach::Fan,
            seed: 3,
            ..GenSpec::default()
        });
        let blocks = biconnected_blocks(&g).unwrap();
        let hub = (0..31).max_by_key(|&v| blocks.iter().filter(|b| b.contains(v)).count()).unwrap();
        assert_eq!(blocks.iter().filter(|b| b.contains(hub)).count(), blocks.len());
    }

    #[test]
    fn deterministic_and_outerplanar() {
        for seed in 0..200 {
            let spec = GenSpec { seed, n: 1 + (seed as usize % 64), ..GenSpec::default() };
            let g = generate(&spec);
            assert_eq!(g.to_edge_list(), generate(&spec).to_edge_list());
            assert!(g.is_connected());
            assert!(check_outerplanar(&g).unwrap().is_outerplanar(), "seed {seed}");
        }
    }
}
