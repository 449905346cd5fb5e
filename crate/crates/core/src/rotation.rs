//! Pósa rotation-extension.
//!
//! Paths are stored as vertex sequences `[u, ..., v]` whose last vertex `v`
//! stays fixed. An elementary exchange at a neighbor `x = p[k]` of the free
//! end `u` (with `k >= 2`) drops the edge `p[k-1] p[k]`, adds `u x`, and makes
//! `p[k-1]` the new free end: the prefix `p[..k]` is reversed.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{ensure, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::system::{ElementKind, SystemElement};

/// A path that cannot be extended at the free end of any derived path it
/// knows about, together with the rotation closure of its endpoints.
#[derive(Clone, Debug)]
pub struct RotationRecord {
    pub path: Vec<VertexId>,
    pub fixed_end: VertexId,
    /// Free endpoints reached by rotations, ascending. Always contains
    /// `path[0]` and is contained in the exact derived set.
    pub derived: Vec<VertexId>,
    /// For every endpoint other than `path[0]`: the endpoint it was rotated
    /// from and the pivot neighbor used.
    parent: HashMap<VertexId, (VertexId, VertexId)>,
}

impl RotationRecord {
    pub fn free_end(&self) -> VertexId {
        self.path[0]
    }

    pub fn in_derived(&self, x: VertexId) -> bool {
        self.derived.binary_search(&x).is_ok()
    }

    /// Replays the stored exchange sequence to materialize the derived path
    /// that starts at `end`.
    pub fn derived_path(&self, end: VertexId) -> Option<Vec<VertexId>> {
        if !self.in_derived(end) {
            return None;
        }
        let mut chain = Vec::new();
        let mut cur = end;
        while cur != self.path[0] {
            let &(prev, pivot) = self.parent.get(&cur)?;
            chain.push(pivot);
            cur = prev;
        }
        let mut p = self.path.clone();
        for &pivot in chain.iter().rev() {
            let k = p.iter().position(|&y| y == pivot)?;
            p = exchange(&p, k);
        }
        Some(p)
    }
}

pub(crate) fn exchange(path: &[VertexId], k: usize) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = path[..k].iter().rev().copied().collect();
    out.extend_from_slice(&path[k..]);
    out
}

/// Vertices outside `set` adjacent to some vertex of `set`, ascending.
pub fn neighborhood(g: &Graph, set: &[VertexId]) -> Vec<VertexId> {
    let mut inside = vec![false; g.vertex_count()];
    for &s in set {
        inside[s as usize] = true;
    }
    let mut out: Vec<VertexId> = set
        .iter()
        .flat_map(|&s| g.neighbors(s))
        .filter(|&x| !inside[x as usize])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_path(g: &Graph, path: &[VertexId]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::NotAPath("empty sequence".into()));
    }
    let mut seen = HashSet::new();
    for &x in path {
        if x as usize >= g.vertex_count() || !seen.insert(x) {
            return Err(Error::NotAPath(format!("{path:?}")));
        }
    }
    if path.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::NotAPath(format!("{path:?}")));
    }
    Ok(())
}

/// The exact set `S_v(P)`: free endpoints of all paths obtainable from
/// `path` by elementary exchanges fixing its last vertex.
///
/// Explores path states, so the cost can be exponential in the path length.
pub fn derived_set(g: &Graph, path: &[VertexId]) -> Result<Vec<VertexId>> {
    check_path(g, path)?;
    if path.len() == 1 {
        return Ok(Vec::new());
    }
    let mut pos = vec![usize::MAX; g.vertex_count()];
    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut ends = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(path.to_vec());
    queue.push_back(path.to_vec());
    while let Some(p) = queue.pop_front() {
        ends.insert(p[0]);
        for (i, &x) in p.iter().enumerate() {
            pos[x as usize] = i;
        }
        for x in g.neighbors(p[0]) {
            let k = pos[x as usize];
            if k != usize::MAX && k >= 2 {
                let q = exchange(&p, k);
                if !seen.contains(&q) {
                    seen.insert(q.clone());
                    queue.push_back(q);
                }
            }
        }
        for &x in &p {
            pos[x as usize] = usize::MAX;
        }
    }
    let mut out: Vec<_> = ends.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

enum Closure {
    Stable {
        ends: Vec<VertexId>,
        parent: HashMap<VertexId, (VertexId, VertexId)>,
    },
    /// A derived path whose free end has a neighbor off the path; the
    /// neighbor is already prepended.
    Extended(Vec<VertexId>),
}

/// Breadth-first rotation closure keeping one representative derived path
/// per endpoint. Neighbors are scanned in ascending order.
fn rotation_closure(g: &Graph, path: &[VertexId]) -> Closure {
    let n = g.vertex_count();
    let mut on_path = vec![false; n];
    for &x in path {
        on_path[x as usize] = true;
    }
    let mut pos = vec![usize::MAX; n];
    let mut reached = vec![false; n];
    let mut parent = HashMap::new();
    let mut ends = Vec::new();
    let mut queue = VecDeque::new();
    reached[path[0] as usize] = true;
    queue.push_back(path.to_vec());
    while let Some(p) = queue.pop_front() {
        let s = p[0];
        if let Some(y) = g.neighbors(s).find(|&y| !on_path[y as usize]) {
            let mut ext = Vec::with_capacity(p.len() + 1);
            ext.push(y);
            ext.extend_from_slice(&p);
            return Closure::Extended(ext);
        }
        ends.push(s);
        for (i, &x) in p.iter().enumerate() {
            pos[x as usize] = i;
        }
        for x in g.neighbors(s) {
            let k = pos[x as usize];
            if k != usize::MAX && k >= 2 {
                let end = p[k - 1];
                if !reached[end as usize] {
                    reached[end as usize] = true;
                    parent.insert(end, (s, x));
                    queue.push_back(exchange(&p, k));
                }
            }
        }
    }
    ends.sort_unstable();
    Closure::Stable { ends, parent }
}

/// Greedily extends the free end (front) of `path` with the smallest
/// unvisited neighbor until it is stuck.
fn extend_front(g: &Graph, path: Vec<VertexId>) -> Vec<VertexId> {
    let mut on_path = vec![false; g.vertex_count()];
    for &x in &path {
        on_path[x as usize] = true;
    }
    let mut rev: Vec<VertexId> = path.into_iter().rev().collect();
    while let Some(y) = g
        .neighbors(*rev.last().unwrap())
        .find(|&y| !on_path[y as usize])
    {
        on_path[y as usize] = true;
        rev.push(y);
    }
    rev.reverse();
    rev
}

/// The rotation record of a given path, which must already be stable: no
/// endpoint reached by rotation may have a neighbor off the path.
pub fn record_for_path(g: &Graph, path: Vec<VertexId>) -> Result<RotationRecord> {
    check_path(g, &path)?;
    if path.len() < 2 {
        return Err(Error::NotAPath("a rotation path needs an edge".into()));
    }
    match rotation_closure(g, &path) {
        Closure::Extended(_) => Err(Error::invariant(
            "rotation",
            "a derived endpoint has a neighbor off the path",
        )),
        Closure::Stable { ends, parent } => Ok(RotationRecord {
            fixed_end: *path.last().unwrap(),
            path,
            derived: ends,
            parent,
        }),
    }
}

/// Builds a rotation-maximal path: grow greedily from the smallest
/// non-isolated vertex (which becomes the fixed end), and whenever some
/// rotated endpoint has a neighbor off the path, extend there and start
/// over. Terminates because every restart lengthens the path.
pub fn rotation_maximal_path(g: &Graph) -> Result<RotationRecord> {
    let start = *g.active_vertices().first().ok_or(Error::NoEdges)?;
    let mut path = extend_front(g, vec![start]);
    loop {
        match rotation_closure(g, &path) {
            Closure::Extended(longer) => path = extend_front(g, longer),
            Closure::Stable { ends, parent } => {
                let rec = RotationRecord {
                    fixed_end: *path.last().unwrap(),
                    path,
                    derived: ends,
                    parent,
                };
                let nbh = neighborhood(g, &rec.derived);
                ensure!(
                    nbh.len() <= 2 * rec.derived.len(),
                    "rotation",
                    "|N(S)| = {} exceeds 2|S| = {}",
                    nbh.len(),
                    2 * rec.derived.len()
                );
                return Ok(rec);
            }
        }
    }
}

/// The edge or cycle C through `S ∪ N(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Backbone {
    /// Vertex sequence of C; two vertices when C is a single edge,
    /// otherwise the cyclic order (closing edge implied).
    pub cycle: Vec<VertexId>,
    /// The derived path `P'` starting at `u'`.
    pub derived_path: Vec<VertexId>,
    /// `w`, the vertex of P closest to the fixed end with a neighbor in S.
    pub pivot: VertexId,
    /// `u'`, the smallest neighbor of `w` in S.
    pub start: VertexId,
}

impl Backbone {
    pub fn is_edge(&self) -> bool {
        self.cycle.len() == 2
    }

    pub fn edge_pairs(&self) -> Vec<(VertexId, VertexId)> {
        if self.is_edge() {
            return vec![(self.cycle[0], self.cycle[1])];
        }
        let m = self.cycle.len();
        (0..m).map(|i| (self.cycle[i], self.cycle[(i + 1) % m])).collect()
    }

    pub fn element(&self, g: &Graph) -> Result<SystemElement> {
        let kind = if self.is_edge() {
            ElementKind::SingleEdge
        } else {
            ElementKind::Cycle
        };
        SystemElement::from_pairs(g, &self.edge_pairs(), kind)
    }
}

/// `C = (P' + u'w) - E(P[w, v])`.
pub fn build_cycle_c(g: &Graph, rec: &RotationRecord) -> Result<Backbone> {
    let pivot = rec
        .path
        .iter()
        .rev()
        .copied()
        .find(|&x| g.neighbors(x).any(|y| rec.in_derived(y)))
        .ok_or_else(|| Error::invariant("cycle-c", "no path vertex has a neighbor in S"))?;
    let start = g
        .neighbors(pivot)
        .find(|&y| rec.in_derived(y))
        .expect("pivot has a neighbor in S");
    let derived_path = rec
        .derived_path(start)
        .ok_or_else(|| Error::invariant("cycle-c", format!("no derived path ends at {start}")))?;
    let j = derived_path
        .iter()
        .position(|&x| x == pivot)
        .expect("derived paths share the vertex set of P");
    let i = rec.path.iter().position(|&x| x == pivot).unwrap();
    ensure!(
        derived_path[j..] == rec.path[i..],
        "cycle-c",
        "rotations disturbed the segment P[w, v]"
    );
    ensure!(j >= 1, "cycle-c", "pivot {pivot} is the free end of P'");
    let backbone = Backbone {
        cycle: derived_path[..=j].to_vec(),
        derived_path,
        pivot,
        start,
    };

    let nbh = neighborhood(g, &rec.derived);
    let mut on_c = vec![false; g.vertex_count()];
    for &x in &backbone.cycle {
        on_c[x as usize] = true;
    }
    ensure!(
        rec.derived.iter().chain(&nbh).all(|&x| on_c[x as usize]),
        "cycle-c",
        "S ∪ N(S) is not contained in C"
    );
    ensure!(
        backbone.is_edge() == (rec.derived.len() == 1 && nbh.len() == 1),
        "cycle-c",
        "C is an edge iff S = {{u}} and |N(S)| = 1 (|C| = {}, |S| = {}, |N(S)| = {})",
        backbone.cycle.len(),
        rec.derived.len(),
        nbh.len()
    );
    Ok(backbone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::is_cycle;

    fn g(pairs: &[(u32, u32)]) -> Graph {
        Graph::from_edge_list(pairs.iter().copied()).unwrap()
    }

    // star: center c=0, leaves a=1, b=2, d=3
    fn star() -> Graph {
        g(&[(0, 1), (0, 2), (0, 3)])
    }

    #[test]
    fn single_edge() {
        let k2 = g(&[(0, 1)]);
        let rec = rotation_maximal_path(&k2).unwrap();
        assert_eq!(rec.path, vec![1, 0]);
        assert_eq!(rec.derived, vec![1]);
        let c = build_cycle_c(&k2, &rec).unwrap();
        assert!(c.is_edge());
        assert_eq!(derived_set(&k2, &[0, 1]).unwrap(), vec![0]);
    }

    #[test]
    fn star_path_rotates_nowhere() {
        let s = star();
        // a-c-b with v = b
        assert_eq!(derived_set(&s, &[1, 0, 2]).unwrap(), vec![1]);
        let rec = rotation_maximal_path(&s).unwrap();
        // grown from vertex 0: 0 -> 1, then rotated/extended at the front
        assert_eq!(rec.derived.len(), 1);
        let nbh = neighborhood(&s, &rec.derived);
        assert_eq!(nbh, vec![0]);
        let c = build_cycle_c(&s, &rec).unwrap();
        assert!(c.is_edge());
        assert!(c.cycle.contains(&0) && c.cycle.contains(&rec.derived[0]));
    }

    #[test]
    fn star_record_matches_hand_run() {
        // a-c-b with fixed end b: no exchange is possible, S = {a}.
        let s = star();
        let rec = record_for_path(&s, vec![1, 0, 2]).unwrap();
        assert_eq!(rec.derived, vec![1]);
        let c = build_cycle_c(&s, &rec).unwrap();
        assert_eq!(c.cycle, vec![1, 0]);
        assert_eq!(c.pivot, 0);
        // c-b is extendable at c
        assert!(record_for_path(&s, vec![0, 2]).is_err());
    }

    #[test]
    fn five_cycle_closure_respects_neighborhood_bound() {
        let c5 = g(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let rec = rotation_maximal_path(&c5).unwrap();
        assert_eq!(rec.path.len(), 5);
        let nbh = neighborhood(&c5, &rec.derived);
        assert!(nbh.len() <= 2 * rec.derived.len());
        let exact = derived_set(&c5, &rec.path).unwrap();
        assert!(rec.derived.iter().all(|x| exact.contains(x)));
        let c = build_cycle_c(&c5, &rec).unwrap();
        assert!(!c.is_edge());
    }

    #[test]
    fn k4_backbone_is_a_cycle_through_s_and_neighbors() {
        let k4 = g(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let rec = rotation_maximal_path(&k4).unwrap();
        let c = build_cycle_c(&k4, &rec).unwrap();
        let el = c.element(&k4).unwrap();
        assert_eq!(el.kind(), ElementKind::Cycle);
        let sub = k4.subgraph_of_ids(el.edges()).unwrap();
        assert!(is_cycle(&sub).is_some());
    }

    #[test]
    fn derived_paths_replay_to_their_endpoints() {
        let k5 = g(&[
            (0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
        ]);
        let rec = rotation_maximal_path(&k5).unwrap();
        for &s in &rec.derived {
            let p = rec.derived_path(s).unwrap();
            assert_eq!(p[0], s);
            assert_eq!(*p.last().unwrap(), rec.fixed_end);
            check_path(&k5, &p).unwrap();
        }
    }

    #[test]
    fn derived_set_rejects_non_paths() {
        let s = star();
        assert!(matches!(derived_set(&s, &[1, 2]), Err(Error::NotAPath(_))));
        assert!(matches!(derived_set(&s, &[1, 0, 1]), Err(Error::NotAPath(_))));
    }

    #[test]
    fn edgeless_graph_has_no_rotation_path() {
        let empty = Graph::with_vertices(3, []).unwrap();
        assert!(matches!(rotation_maximal_path(&empty), Err(Error::NoEdges)));
    }
}
