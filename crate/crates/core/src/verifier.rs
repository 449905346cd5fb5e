//! First-principles checks of separating systems, plus brute-force oracles.
//!
//! A family separates strongly iff for every edge `e` the intersection of
//! the members containing `e` is exactly `{e}`. Distinct membership
//! signatures are not enough: if every member containing `e` also contains
//! `f`, then `e` is not separated from `f` even though `f` may lie in
//! further members and so have a different signature.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::structure::{is_cycle, is_k4_subdivision};
use crate::system::{ElementKind, Mode, SeparatingSystem, SystemElement, Witness};

/// An ordered pair `(e, f)` no member separates. `f` is `None` only when
/// `e` is the single edge of the graph and lies in no member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unseparated {
    pub e: EdgeId,
    pub f: Option<EdgeId>,
    /// Members containing `e`, and those containing `f`.
    pub with_e: Vec<usize>,
    pub with_f: Vec<usize>,
}

impl fmt::Display for Unseparated {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.f {
            Some(f) if self.with_e.is_empty() => {
                write!(fmt, "({}, {f}) unseparated: {} is in no element", self.e, self.e)
            }
            Some(f) => write!(
                fmt,
                "({}, {f}) unseparated: every element containing {} ({:?}) also contains {f} ({:?})",
                self.e, self.e, self.with_e, self.with_f
            ),
            None => write!(fmt, "{} is in no element", self.e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Unseparated),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Per-element edge bitsets and per-edge element lists, with deletions.
#[derive(Clone, Debug)]
pub struct Membership {
    m: usize,
    sets: Vec<FixedBitSet>,
    of_edge: Vec<Vec<usize>>,
    live: Vec<bool>,
}

impl Membership {
    pub fn new(g: &Graph, elements: &[SystemElement]) -> Result<Membership> {
        let m = g.edge_count();
        let mut sets = Vec::with_capacity(elements.len());
        let mut of_edge = vec![Vec::new(); m];
        for (x, el) in elements.iter().enumerate() {
            let mut bits = FixedBitSet::with_capacity(m);
            for &id in el.edges() {
                let idx = g.edge_index(id).ok_or(Error::UnknownEdge(id))?;
                bits.insert(idx);
                of_edge[idx].push(x);
            }
            sets.push(bits);
        }
        Ok(Membership {
            m,
            live: vec![true; sets.len()],
            sets,
            of_edge,
        })
    }

    pub fn is_live(&self, x: usize) -> bool {
        self.live[x]
    }

    pub fn remove(&mut self, x: usize) {
        self.live[x] = false;
    }

    /// Intersection of the live members containing edge `idx`, ignoring
    /// `skip`; `None` if there are none.
    fn intersection(&self, idx: usize, skip: Option<usize>) -> Option<FixedBitSet> {
        let mut acc: Option<FixedBitSet> = None;
        for &x in &self.of_edge[idx] {
            if !self.live[x] || Some(x) == skip {
                continue;
            }
            match acc.as_mut() {
                None => acc = Some(self.sets[x].clone()),
                Some(a) => a.intersect_with(&self.sets[x]),
            }
        }
        acc
    }

    fn isolated(&self, idx: usize, skip: Option<usize>) -> bool {
        match self.intersection(idx, skip) {
            Some(bits) => bits.count_ones(..) == 1,
            None => false,
        }
    }

    /// Whether the live family minus `x` still separates, assuming the live
    /// family does. Only edges of `x` can be affected.
    pub fn separates_without(&self, x: usize) -> bool {
        self.sets[x].ones().all(|idx| self.isolated(idx, Some(x)))
    }

    fn first_failure(&self, g: &Graph) -> Option<Unseparated> {
        let members = |idx: usize| -> Vec<usize> {
            self.of_edge[idx].iter().copied().filter(|&x| self.live[x]).collect()
        };
        for idx in 0..self.m {
            let e = g.edges()[idx].id;
            let other = match self.intersection(idx, None) {
                None => (0..self.m).find(|&j| j != idx),
                Some(bits) => bits.ones().find(|&j| j != idx),
            };
            let uncovered = members(idx).is_empty();
            if uncovered || other.is_some() {
                return Some(Unseparated {
                    e,
                    f: other.map(|j| g.edges()[j].id),
                    with_e: members(idx),
                    with_f: other.map(members).unwrap_or_default(),
                });
            }
        }
        None
    }
}

/// Strong separation and coverage: for every ordered pair `(e, f)` of
/// distinct edges some element contains `e` and not `f`, and every edge is in
/// some element. Reports the lexicographically first failing pair.
pub fn verify_separation(g: &Graph, sys: &SeparatingSystem) -> Result<Verdict> {
    let mem = Membership::new(g, &sys.elements)?;
    Ok(match mem.first_failure(g) {
        None => Verdict::Pass,
        Some(u) => Verdict::Fail(u),
    })
}

/// The definition checked pair by pair; quadratic in the edge count.
pub fn verify_separation_naive(g: &Graph, sys: &SeparatingSystem) -> Result<Verdict> {
    let sets: Vec<HashSet<EdgeId>> = sys
        .elements
        .iter()
        .map(|el| el.edges().iter().copied().collect())
        .collect();
    for el in &sys.elements {
        for &id in el.edges() {
            g.edge(id).ok_or(Error::UnknownEdge(id))?;
        }
    }
    let with = |id: EdgeId| -> Vec<usize> { (0..sets.len()).filter(|&x| sets[x].contains(&id)).collect() };
    let ids: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    for &e in &ids {
        if with(e).is_empty() {
            let f = ids.iter().copied().find(|&f| f != e);
            return Ok(Verdict::Fail(Unseparated {
                e,
                f,
                with_e: vec![],
                with_f: f.map(with).unwrap_or_default(),
            }));
        }
        for &f in &ids {
            if f != e && !sets.iter().any(|s| s.contains(&e) && !s.contains(&f)) {
                return Ok(Verdict::Fail(Unseparated {
                    e,
                    f: Some(f),
                    with_e: with(e),
                    with_f: with(f),
                }));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Every element is what it claims to be, recomputed from its edge ids,
/// and cycle-mode systems hold no K4 subdivisions.
pub fn verify_structure(g: &Graph, sys: &SeparatingSystem) -> std::result::Result<(), String> {
    for (x, el) in sys.elements.iter().enumerate() {
        let sub = g
            .subgraph_of_ids(el.edges())
            .map_err(|err| format!("element {x}: {err}"))?;
        if sub.edge_count() != el.edges().len() {
            return Err(format!("element {x} repeats an edge"));
        }
        let ok = match el.witness() {
            Witness::Edge(u, v) => {
                el.edges().len() == 1 && {
                    let e = sub.edges()[0];
                    (e.u, e.v) == ((*u).min(*v), (*u).max(*v))
                }
            }
            Witness::Cycle(seq) => is_cycle(&sub).is_some_and(|c| same_cycle(&c, seq)),
            Witness::K4(w) => is_k4_subdivision(&sub).is_some_and(|k| k.branch == w.branch),
        };
        if !ok {
            return Err(format!(
                "element {x} is not a valid {} (edges {:?})",
                el.kind().as_str(),
                el.edges()
            ));
        }
        if sys.mode == Mode::CycleOnly && el.kind() == ElementKind::K4Subdivision {
            return Err(format!("element {x} is a K4 subdivision in a cycle-mode system"));
        }
    }
    Ok(())
}

fn same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let Some(k) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    let n = b.len();
    let fwd = (0..n).all(|i| a[i] == b[(k + i) % n]);
    let bwd = (0..n).all(|i| a[i] == b[(k + n - i) % n]);
    fwd || bwd
}

/// Size against `82n` or `41n`, where `n` counts non-isolated vertices.
pub fn verify_size(g: &Graph, sys: &SeparatingSystem) -> bool {
    sys.len() <= sys.mode.size_factor() * g.active_vertices().len()
}

/// Indices of elements whose removal leaves a separating family, for a
/// family that separates.
pub fn redundant_elements(g: &Graph, sys: &SeparatingSystem) -> Result<Vec<usize>> {
    let mem = Membership::new(g, &sys.elements)?;
    Ok((0..sys.len()).filter(|&x| mem.separates_without(x)).collect())
}

/// True iff no cycle of `C ∪ M` contains every edge of `M`. With `M` empty
/// the cycle itself qualifies, so the answer is false.
///
/// Exhaustive; intended for graphs of a few dozen vertices.
pub fn oracle_no_single_cycle_contains(cycle: &[VertexId], m: &[(VertexId, VertexId)]) -> bool {
    if m.is_empty() {
        return false;
    }
    let mut edges: Vec<(VertexId, VertexId)> = (0..cycle.len())
        .map(|i| (cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect();
    edges.extend_from_slice(m);
    let n = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap() as usize + 1;
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b)) in edges.iter().enumerate() {
        adj[a as usize].push((b, k));
        adj[b as usize].push((a, k));
    }
    let required: Vec<usize> = (cycle.len()..edges.len()).collect();
    let (start, target) = edges[required[0]];

    // simple paths from `target` back to `start` avoiding the first M edge
    struct Search<'a> {
        adj: &'a [Vec<(VertexId, usize)>],
        required: &'a [usize],
        goal: VertexId,
        on_path: Vec<bool>,
        used: Vec<bool>,
    }
    impl Search<'_> {
        fn go(&mut self, x: VertexId) -> bool {
            if x == self.goal {
                return self.required[1..].iter().all(|&k| self.used[k]);
            }
            for &(y, k) in &self.adj[x as usize] {
                if self.used[k] || k == self.required[0] {
                    continue;
                }
                if self.on_path[y as usize] && y != self.goal {
                    continue;
                }
                if y == self.goal && self.on_path[y as usize] {
                    // closing the cycle
                    self.used[k] = true;
                    let hit = self.go(y);
                    self.used[k] = false;
                    if hit {
                        return true;
                    }
                    continue;
                }
                self.on_path[y as usize] = true;
                self.used[k] = true;
                let hit = self.go(y);
                self.used[k] = false;
                self.on_path[y as usize] = false;
                if hit {
                    return true;
                }
            }
            false
        }
    }
    let mut s = Search {
        adj: &adj,
        required: &required,
        goal: start,
        on_path: vec![false; n],
        used: vec![false; edges.len()],
    };
    s.on_path[start as usize] = true;
    s.on_path[target as usize] = true;
    !s.go(target)
}

/// Free ends of every path reachable from `path` by exchanges that fix its
/// last vertex, found by recursive enumeration. A one-vertex path has no
/// free end and yields the empty set.
pub fn oracle_derived_set(g: &Graph, path: &[VertexId]) -> Vec<VertexId> {
    fn visit(g: &Graph, p: Vec<VertexId>, seen: &mut HashSet<Vec<VertexId>>, ends: &mut Vec<VertexId>) {
        if !seen.insert(p.clone()) {
            return;
        }
        ends.push(p[0]);
        let u = p[0];
        for k in 2..p.len() {
            if g.has_edge(u, p[k]) {
                let mut q: Vec<VertexId> = p[..k].to_vec();
                q.reverse();
                q.extend_from_slice(&p[k..]);
                visit(g, q, seen, ends);
            }
        }
    }
    if path.len() < 2 {
        return Vec::new();
    }
    let mut seen = HashSet::new();
    let mut ends = Vec::new();
    visit(g, path.to_vec(), &mut seen, &mut ends);
    ends.sort_unstable();
    ends.dedup();
    ends
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Step;

    fn system(g: &Graph, groups: &[&[(VertexId, VertexId)]], mode: Mode) -> SeparatingSystem {
        let mut sys = SeparatingSystem::new(mode);
        for grp in groups {
            let ids = g.ids_of_pairs(grp).unwrap();
            sys.push(SystemElement::from_edges(g, &ids).unwrap(), 0, Step::Cover);
        }
        sys
    }

    #[test]
    fn one_edge_and_a_short_path() {
        let g = Graph::from_edge_list([(0, 1)]).unwrap();
        assert!(verify_separation(&g, &system(&g, &[&[(0, 1)]], Mode::K4)).unwrap().is_pass());
        let empty = SeparatingSystem::new(Mode::K4);
        assert!(!verify_separation(&g, &empty).unwrap().is_pass());

        let g = Graph::from_edge_list([(0, 1), (1, 2)]).unwrap();
        let sys = system(&g, &[&[(0, 1)]], Mode::K4);
        let Verdict::Fail(u) = verify_separation(&g, &sys).unwrap() else { panic!() };
        assert_eq!(u.e, g.edge_between(1, 2).unwrap());
        assert_eq!(u.f, g.edge_between(0, 1));
        assert!(u.with_e.is_empty());
    }

    #[test]
    fn nested_signatures_are_not_separation() {
        // e = 01 lies only in the triangle, f = 12 lies in the triangle and
        // alone: signatures differ, yet nothing holds 01 without 12
        let g = Graph::from_edge_list([(0, 1), (1, 2), (0, 2)]).unwrap();
        let sys = system(&g, &[&[(0, 1), (1, 2), (0, 2)], &[(1, 2)], &[(0, 2)]], Mode::CycleOnly);
        let fast = verify_separation(&g, &sys).unwrap();
        assert_eq!(fast, verify_separation_naive(&g, &sys).unwrap());
        let Verdict::Fail(u) = fast else { panic!() };
        assert_eq!(u.e, g.edge_between(0, 1).unwrap());
    }

    #[test]
    fn structure_rejects_theta_graph_labelled_k4() {
        let g = Graph::from_edge_list([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let k4 = Graph::from_edge_list(crate::structure::K4_PAIRS.map(|(a, b)| (a as u32, b as u32))).unwrap();
        let witness = crate::structure::is_k4_subdivision(&k4).unwrap();
        let ids: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
        let mut sys = SeparatingSystem::new(Mode::K4);
        sys.push(SystemElement::from_parts(ids, Witness::K4(witness)), 0, Step::Cover);
        assert!(verify_structure(&g, &sys).is_err());
        assert!(verify_structure(&g, &SeparatingSystem::new(Mode::K4)).is_ok());
    }

    #[test]
    fn cycle_mode_forbids_k4() {
        let g = Graph::from_edge_list([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let sys = system(&g, &[&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]], Mode::CycleOnly);
        assert!(verify_structure(&g, &sys).is_err());
    }

    #[test]
    fn size_bound() {
        let g = Graph::from_edge_list([(0, 1)]).unwrap();
        let mut sys = system(&g, &[&[(0, 1)]], Mode::K4);
        assert!(verify_size(&g, &sys));
        let el = sys.elements[0].clone();
        for _ in 0..164 {
            sys.push(el.clone(), 0, Step::Cover);
        }
        assert!(!verify_size(&g, &sys));
    }

    #[test]
    fn two_chord_blocks_have_no_common_cycle() {
        let cycle: Vec<u32> = (1..=18).collect();
        let m = [(2, 6), (3, 7), (4, 8), (5, 9), (10, 14), (11, 15), (12, 16), (13, 17)];
        assert!(oracle_no_single_cycle_contains(&cycle, &m));
        let c6: Vec<u32> = (1..=6).collect();
        assert!(!oracle_no_single_cycle_contains(&c6, &[(1, 4)]));
        assert!(!oracle_no_single_cycle_contains(&c6, &[]));
        // two crossing chords of a hexagon lie on a common cycle
        assert!(!oracle_no_single_cycle_contains(&c6, &[(1, 4), (2, 5)]));
    }

    #[test]
    fn derived_set_oracle_small_cases() {
        let g = Graph::from_edge_list([(0, 1)]).unwrap();
        assert_eq!(oracle_derived_set(&g, &[0, 1]), vec![0]);
        let star = Graph::from_edge_list([(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(oracle_derived_set(&star, &[1, 0, 2]), vec![1]);
        let k4 = Graph::from_edge_list([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(oracle_derived_set(&k4, &[0, 1, 2, 3]), vec![0, 1, 2]);
    }
}
