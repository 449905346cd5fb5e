//! Deterministic graph families for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

pub fn complete(n: usize) -> Graph {
    let n = n as VertexId;
    Graph::with_vertices(n as usize, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
}

/// `G(n, p)` with each pair decided by a ChaCha8 stream seeded by `seed`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            if rng.gen_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    Graph::with_vertices(n, pairs).unwrap()
}

/// The `d`-dimensional cube on `2^d` vertices.
pub fn hypercube(d: u32) -> Graph {
    let n: VertexId = 1 << d;
    let pairs = (0..n).flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b))).filter(|&(a, b)| a < b));
    Graph::with_vertices(n as usize, pairs).unwrap()
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(VertexId, VertexId)> = (1..n as VertexId).map(|i| (rng.gen_range(0..i), i)).collect();
    Graph::with_vertices(n, pairs).unwrap()
}

/// `rows x cols` grid.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| (r * cols + c) as VertexId;
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                pairs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                pairs.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::with_vertices(rows * cols, pairs).unwrap()
}

/// The 18-cycle `1..18` with chords of difference 4 starting at
/// `2, 3, 4, 5, 10, 11, 12, 13`; labels are kept, so vertex 0 is isolated.
pub fn fig1() -> Graph {
    let mut pairs: Vec<(VertexId, VertexId)> = fig1_cycle().windows(2).map(|w| (w[0], w[1])).collect();
    pairs.push((18, 1));
    pairs.extend(fig1_chords());
    Graph::from_edge_list(pairs).unwrap()
}

pub fn fig1_cycle() -> Vec<VertexId> {
    (1..=18).collect()
}

pub fn fig1_chords() -> Vec<(VertexId, VertexId)> {
    [2, 3, 4, 5, 10, 11, 12, 13].iter().map(|&i| (i, i + 4)).collect()
}

/// The named graphs the end-to-end checks run on.
pub fn standard_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=12 {
        out.push((format!("complete-{n}"), complete(n)));
    }
    for n in [16, 32, 64] {
        for p in [0.1, 0.3, 0.5, 0.9] {
            for seed in 0..5 {
                out.push((format!("gnp-{n}-{p}-{seed}"), gnp(n, p, seed)));
            }
        }
    }
    for d in 3..=6 {
        out.push((format!("hypercube-{d}"), hypercube(d)));
    }
    for n in [2, 5, 9, 17, 33, 64] {
        for seed in 0..2 {
            out.push((format!("tree-{n}-{seed}"), tree(n, seed)));
        }
    }
    out.push(("fig1".to_string(), fig1()));
    out.push(("grid-8x8".to_string(), grid(8, 8)));
    out
}
