//! Edge covers by K4 subdivisions or cycles, padded with single edges.
//!
//! The greedy covers guarantee correctness (every edge is covered, every
//! element is valid) but not the linear size bounds; sizes are measured by
//! callers against [`EdgeCover::target`].

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::structure::K4Witness;
use crate::system::{ElementKind, SystemElement, Witness};

pub trait EdgeCover {
    fn name(&self) -> &'static str;

    /// Elements whose edge union is exactly `E(g)`.
    fn cover(&self, g: &Graph) -> Result<Vec<SystemElement>>;

    /// Size the cover should not exceed on a graph with `n` vertices.
    fn target(&self, n: usize) -> usize;
}

/// K4 subdivisions and single edges.
#[derive(Copy, Clone, Debug, Default)]
pub struct GreedyK4Cover;

/// Cycles and single edges.
#[derive(Copy, Clone, Debug, Default)]
pub struct GreedyCycleCover;

impl EdgeCover for GreedyK4Cover {
    fn name(&self) -> &'static str {
        "greedy-k4"
    }

    fn cover(&self, g: &Graph) -> Result<Vec<SystemElement>> {
        greedy_cover(g, Target::K4)
    }

    fn target(&self, n: usize) -> usize {
        (2 * n).saturating_sub(3)
    }
}

impl EdgeCover for GreedyCycleCover {
    fn name(&self) -> &'static str {
        "greedy-cycle"
    }

    fn cover(&self, g: &Graph) -> Result<Vec<SystemElement>> {
        greedy_cover(g, Target::Cycle)
    }

    fn target(&self, n: usize) -> usize {
        n.saturating_sub(1)
    }
}

pub fn k4_cover(g: &Graph) -> Result<Vec<SystemElement>> {
    GreedyK4Cover.cover(g)
}

pub fn cycle_edge_cover(g: &Graph) -> Result<Vec<SystemElement>> {
    GreedyCycleCover.cover(g)
}

/// The two cycles `b0 b1 b2 b3` and `b0 b1 b3 b2` lifted through the threads
/// of the subdivision.
pub fn two_cycle_cover_of_k4_subdivision(g: &Graph, k: &SystemElement) -> Result<[SystemElement; 2]> {
    let Witness::K4(w) = k.witness() else {
        return Err(Error::invariant("two-cycle-cover", "element is not a K4 subdivision"));
    };
    let first = lift(g, w, &[0, 1, 2, 3])?;
    let second = lift(g, w, &[0, 1, 3, 2])?;
    Ok([first, second])
}

fn lift(g: &Graph, w: &K4Witness, order: &[usize; 4]) -> Result<SystemElement> {
    let mut pairs = Vec::new();
    for t in 0..4 {
        let path = w.path_between(order[t], order[(t + 1) % 4]);
        pairs.extend(path.windows(2).map(|p| (p[0], p[1])));
    }
    SystemElement::from_pairs(g, &pairs, ElementKind::Cycle)
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Target {
    K4,
    Cycle,
}

impl Target {
    fn kind(self) -> ElementKind {
        match self {
            Target::K4 => ElementKind::K4Subdivision,
            Target::Cycle => ElementKind::Cycle,
        }
    }
}

/// Depth-first forest with the non-tree edges, each of which joins a vertex
/// to one of its ancestors.
struct Dfs {
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<usize>,
    /// `(ancestor, descendant, id)`
    back: Vec<(VertexId, VertexId, EdgeId)>,
    /// Back edges indexed by their lower endpoint.
    up: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Dfs {
    /// Edges with `first(id)` are explored before the others at each vertex.
    fn run<F>(g: &Graph, first: F) -> Dfs
    where
        F: Fn(EdgeId) -> bool,
    {
        let n = g.vertex_count();
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut back = Vec::new();
        let mut up = vec![Vec::new(); n];
        let order: Vec<Vec<(VertexId, EdgeId)>> = (0..n as VertexId)
            .map(|v| {
                let mut inc = g.incident(v).to_vec();
                inc.sort_by_key(|&(_, id)| !first(id));
                inc
            })
            .collect();
        for root in g.active_vertices() {
            if depth[root as usize] != usize::MAX {
                continue;
            }
            depth[root as usize] = 0;
            let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
            while let Some(top) = stack.last_mut() {
                let (v, next) = *top;
                let inc = &order[v as usize];
                if next == inc.len() {
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let (x, id) = inc[next];
                if depth[x as usize] == usize::MAX {
                    depth[x as usize] = depth[v as usize] + 1;
                    parent[x as usize] = Some((v, id));
                    stack.push((x, 0));
                } else if depth[x as usize] + 1 < depth[v as usize] {
                    back.push((x, v, id));
                    up[v as usize].push((x, id));
                }
            }
        }
        Dfs {
            parent,
            depth,
            back,
            up,
        }
    }

    /// Tree path from `desc` up to `anc`, listed from `anc`.
    fn path(&self, anc: VertexId, desc: VertexId) -> (Vec<VertexId>, Vec<EdgeId>) {
        let mut verts = vec![desc];
        let mut ids = Vec::new();
        let mut x = desc;
        while x != anc {
            let (p, id) = self.parent[x as usize].expect("ancestor above descendant");
            verts.push(p);
            ids.push(id);
            x = p;
        }
        verts.reverse();
        (verts, ids)
    }

    /// Back edges other than `closing` with both ends on the tree path
    /// `verts`, as intervals of positions along it.
    fn chords<F>(&self, verts: &[VertexId], closing: EdgeId, allow: F) -> Vec<(usize, usize, EdgeId)>
    where
        F: Fn(EdgeId) -> bool,
    {
        let d0 = self.depth[verts[0] as usize];
        let mut out = Vec::new();
        for &y in verts {
            for &(x, id) in &self.up[y as usize] {
                if id != closing && self.depth[x as usize] >= d0 && allow(id) {
                    out.push((self.depth[x as usize] - d0, self.depth[y as usize] - d0, id));
                }
            }
        }
        out
    }
}

/// Any pair of properly interleaving intervals `a < c < b < d`.
pub(crate) fn find_crossing<T: Copy>(intervals: &mut [(usize, usize, T)]) -> Option<(T, T)> {
    intervals.sort_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
    let mut stack: Vec<(usize, usize, T)> = Vec::new();
    for &(l, r, tag) in intervals.iter() {
        while stack.last().is_some_and(|top| top.1 <= l) {
            stack.pop();
        }
        if let Some(&(tl, tr, ttag)) = stack.last() {
            if tl < l && tr < r {
                return Some((ttag, tag));
            }
        }
        stack.push((l, r, tag));
    }
    None
}

fn element_of(g: &Graph, mut ids: Vec<EdgeId>, target: Target) -> Result<SystemElement> {
    ids.sort_unstable();
    let el = SystemElement::from_edges(g, &ids)?;
    if el.kind() != target.kind() {
        return Err(Error::invariant(
            "cover",
            format!("expected {}, built {}", target.kind().as_str(), el.kind().as_str()),
        ));
    }
    Ok(el)
}

struct Covered {
    flags: Vec<bool>,
}

impl Covered {
    fn mark(&mut self, g: &Graph, ids: &[EdgeId]) {
        for id in ids {
            self.flags[g.edge_index(*id).unwrap()] = true;
        }
    }

    fn get(&self, g: &Graph, id: EdgeId) -> bool {
        self.flags[g.edge_index(id).unwrap()]
    }
}

fn greedy_cover(g: &Graph, target: Target) -> Result<Vec<SystemElement>> {
    let mut out = Vec::new();
    let mut covered = Covered {
        flags: vec![false; g.edge_count()],
    };

    // Phase 1: disjoint elements inside the uncovered edges, longest
    // fundamental cycles first.
    loop {
        let rest = g.edge_subgraph(|e| !covered.flags[g.edge_index(e.id).unwrap()]);
        let dfs = Dfs::run(&rest, |_| true);
        let mut back = dfs.back.clone();
        back.sort_by_key(|&(a, d, id)| (std::cmp::Reverse(dfs.depth[d as usize] - dfs.depth[a as usize]), id));
        let mut found = None;
        for &(anc, desc, id) in &back {
            let (verts, mut ids) = dfs.path(anc, desc);
            ids.push(id);
            if target == Target::K4 {
                let mut chords = dfs.chords(&verts, id, |_| true);
                let Some((c1, c2)) = find_crossing(&mut chords) else {
                    continue;
                };
                ids.extend([c1, c2]);
            }
            found = Some(ids);
            break;
        }
        let Some(ids) = found else { break };
        covered.mark(g, &ids);
        out.push(element_of(g, ids, target)?);
    }

    // Phase 2: elements that may reuse covered edges, kept only while each
    // picks up at least two new ones. The search runs over uncovered edges
    // first so fundamental cycles thread through them.
    while let Some(ids) = best_overlapping(g, &covered, target) {
        covered.mark(g, &ids);
        out.push(element_of(g, ids, target)?);
    }

    for e in g.edges() {
        if !covered.get(g, e.id) {
            out.push(SystemElement::single_edge(g, e.id)?);
        }
    }
    Ok(out)
}

fn best_overlapping(g: &Graph, covered: &Covered, target: Target) -> Option<Vec<EdgeId>> {
    let fresh = |id: EdgeId| !covered.get(g, id);
    let dfs = Dfs::run(g, fresh);
    // new edges on the tree path from each root
    let mut gain = vec![0usize; g.vertex_count()];
    let mut by_depth: Vec<VertexId> = g.active_vertices();
    by_depth.sort_by_key(|&v| dfs.depth[v as usize]);
    for &v in &by_depth {
        if let Some((p, id)) = dfs.parent[v as usize] {
            gain[v as usize] = gain[p as usize] + usize::from(fresh(id));
        }
    }
    let mut cands: Vec<(usize, VertexId, VertexId, EdgeId)> = dfs
        .back
        .iter()
        .map(|&(a, d, id)| (gain[d as usize] - gain[a as usize] + usize::from(fresh(id)), a, d, id))
        .collect();
    cands.sort_by_key(|&(gain, _, _, id)| (std::cmp::Reverse(gain), id));

    let mut best: Option<(usize, Vec<EdgeId>)> = None;
    for (cycle_gain, anc, desc, id) in cands {
        if best.as_ref().is_some_and(|(b, _)| *b >= cycle_gain + 2) {
            break;
        }
        let (verts, mut ids) = dfs.path(anc, desc);
        ids.push(id);
        let mut total = cycle_gain;
        if target == Target::K4 {
            // fresh chords first, then any
            let mut chords = dfs.chords(&verts, id, fresh);
            let pair = match find_crossing(&mut chords) {
                Some(p) => Some(p),
                None => find_crossing(&mut dfs.chords(&verts, id, |_| true)),
            };
            let Some((c1, c2)) = pair else { continue };
            total += usize::from(fresh(c1)) + usize::from(fresh(c2));
            ids.extend([c1, c2]);
        }
        if total >= 2 && best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, ids));
        }
        if target == Target::Cycle {
            break;
        }
    }
    best.map(|(_, ids)| ids)
}
