//! Structural predicates on element subgraphs: cycles, K4 subdivisions,
//! degree-2 suppression and chord crossings.
//!
//! Isolated vertices are ignored everywhere here; element subgraphs are
//! stored on the full vertex range of the host graph.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// The six unordered pairs of branch indices, in the order used by
/// [`K4Witness::paths`].
pub const K4_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Branch vertices (ascending) and the six internally disjoint paths joining
/// them; `paths[i]` runs from `branch[K4_PAIRS[i].0]` to
/// `branch[K4_PAIRS[i].1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K4Witness {
    pub branch: [VertexId; 4],
    pub paths: [Vec<VertexId>; 6],
}

impl K4Witness {
    pub fn path_between(&self, a: usize, b: usize) -> Vec<VertexId> {
        for (i, &(x, y)) in K4_PAIRS.iter().enumerate() {
            if (x, y) == (a, b) {
                return self.paths[i].clone();
            }
            if (y, x) == (a, b) {
                let mut p = self.paths[i].clone();
                p.reverse();
                return p;
            }
        }
        panic!("branch indices {a},{b} out of range");
    }
}

/// Returns the cyclic vertex sequence when the non-isolated part of `g` is a
/// single cycle; it starts at the smallest vertex and continues to its
/// smaller neighbor.
pub fn is_cycle(g: &Graph) -> Option<Vec<VertexId>> {
    let active = g.active_vertices();
    if active.len() < 3 || g.edge_count() != active.len() {
        return None;
    }
    if active.iter().any(|&v| g.degree(v) != 2) {
        return None;
    }
    let start = active[0];
    let mut seq = vec![start];
    let mut prev = start;
    let mut cur = g.incident(start)[0].0;
    while cur != start {
        seq.push(cur);
        let inc = g.incident(cur);
        let next = if inc[0].0 == prev { inc[1].0 } else { inc[0].0 };
        prev = cur;
        cur = next;
        if seq.len() > active.len() {
            return None;
        }
    }
    (seq.len() == active.len()).then_some(seq)
}

/// Recognizes a subdivision of K4: connected, exactly four vertices of
/// degree 3, all other vertices of degree 2, and the degree-2 threads join
/// every pair of branch vertices exactly once.
pub fn is_k4_subdivision(g: &Graph) -> Option<K4Witness> {
    let active = g.active_vertices();
    if active.len() < 4 || g.edge_count() != active.len() + 2 {
        return None;
    }
    let mut branch = Vec::new();
    for &v in &active {
        match g.degree(v) {
            2 => {}
            3 => branch.push(v),
            _ => return None,
        }
    }
    if branch.len() != 4 || !g.is_connected_on_edges() {
        return None;
    }
    let slot = |v: VertexId| branch.iter().position(|&b| b == v);
    let mut paths: [Option<Vec<VertexId>>; 6] = Default::default();
    for (a, &b) in branch.iter().enumerate() {
        for &(first, _) in g.incident(b) {
            let mut path = vec![b];
            let mut prev = b;
            let mut cur = first;
            while slot(cur).is_none() {
                path.push(cur);
                let inc = g.incident(cur);
                let next = if inc[0].0 == prev { inc[1].0 } else { inc[0].0 };
                prev = cur;
                cur = next;
                if path.len() > active.len() {
                    return None;
                }
            }
            path.push(cur);
            let z = slot(cur).unwrap();
            if z == a {
                return None;
            }
            if a < z {
                let idx = K4_PAIRS.iter().position(|&p| p == (a, z)).unwrap();
                if paths[idx].is_some() {
                    return None;
                }
                paths[idx] = Some(path);
            }
        }
    }
    let paths = paths.map(|p| p.unwrap_or_default());
    if paths.iter().any(|p| p.is_empty()) {
        return None;
    }
    Some(K4Witness {
        branch: [branch[0], branch[1], branch[2], branch[3]],
        paths,
    })
}

#[derive(Clone, Debug)]
pub enum Suppression {
    /// The suppressed graph; edge ids are fresh.
    Simple(Graph),
    /// Some suppression step would have created a loop or a parallel edge.
    Degenerate,
}

/// Repeatedly deletes a degree-2 vertex and joins its neighbors, until no
/// degree-2 vertex remains.
pub fn suppress_degree_two(g: &Graph) -> Suppression {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n as VertexId)
        .map(|v| g.neighbors(v).collect())
        .collect();
    let mut stack: Vec<VertexId> = (0..n as VertexId)
        .filter(|&v| adj[v as usize].len() == 2)
        .collect();
    while let Some(x) = stack.pop() {
        if adj[x as usize].len() != 2 {
            continue;
        }
        let mut it = adj[x as usize].iter().copied();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        if adj[a as usize].contains(&b) {
            return Suppression::Degenerate;
        }
        adj[x as usize].clear();
        adj[a as usize].remove(&x);
        adj[b as usize].remove(&x);
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
    }
    let pairs: Vec<(VertexId, VertexId)> = adj
        .iter()
        .enumerate()
        .flat_map(|(v, ns)| {
            let v = v as VertexId;
            ns.iter().filter(move |&&w| v < w).map(move |&w| (v, w))
        })
        .collect();
    Suppression::Simple(Graph::with_vertices(n, pairs).expect("suppression keeps the graph simple"))
}

/// Whether chords with cycle positions `a` and `b` interleave strictly.
pub fn positions_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
}

/// All crossing pairs `(x, y)`, `x < y`, as indices into `chords`.
pub fn crossing_pairs(
    cycle: &[VertexId],
    chords: &[(VertexId, VertexId)],
) -> Result<Vec<(usize, usize)>> {
    let pos: HashMap<VertexId, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let len = cycle.len();
    let mut placed = Vec::with_capacity(chords.len());
    for &(a, b) in chords {
        let pa = *pos.get(&a).ok_or(Error::OffCycle(a))?;
        let pb = *pos.get(&b).ok_or(Error::OffCycle(b))?;
        if (pa + 1) % len == pb || (pb + 1) % len == pa || pa == pb {
            return Err(Error::NotAChord(format!("{a}-{b}")));
        }
        placed.push((pa, pb));
    }
    let mut out = Vec::new();
    for x in 0..placed.len() {
        for y in x + 1..placed.len() {
            if positions_cross(placed[x], placed[y]) {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

/// Edge bound of outerplanar graphs: `m <= 2h - 3`.
pub fn outerplanar_edge_bound_check(h: usize, m: usize) -> bool {
    m + 3 <= 2 * h
}
