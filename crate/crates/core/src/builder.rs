//! Turns one easy matching plus the backbone cycle into an element covering it.

use crate::error::{ensure, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matchings::{CycleOrder, EasyMatching, IndexEdge};
use crate::system::{ElementKind, SystemElement, Witness};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// At most one edge starts in each interval.
    Elementary,
    Jumbled,
}

pub fn classify(m: &EasyMatching) -> Shape {
    if m.groups().values().all(|g| g.len() <= 1) {
        Shape::Elementary
    } else {
        Shape::Jumbled
    }
}

/// C with some arcs removed and some chords added. Slot `k` is the cycle
/// edge from `cycle[k]` to `cycle[k + 1]` (wrapping).
#[derive(Clone, Debug)]
pub struct CycleEdit<'a> {
    order: &'a CycleOrder,
    keep: Vec<bool>,
    extra: Vec<IndexEdge>,
}

impl<'a> CycleEdit<'a> {
    pub fn new(order: &'a CycleOrder) -> CycleEdit<'a> {
        let slots = if order.cycle_len() == 2 { 1 } else { order.cycle_len() };
        CycleEdit {
            order,
            keep: vec![true; slots],
            extra: Vec::new(),
        }
    }

    fn arc_slots(&self, i: usize, j: usize) -> std::ops::Range<usize> {
        self.order.offset(i)..self.order.offset(j)
    }

    /// Drops `C[v_i, v_j]`, `i < j`; fails if part of it is already gone.
    pub fn remove_arc(&mut self, i: usize, j: usize) -> Result<()> {
        for k in self.arc_slots(i, j) {
            ensure!(self.keep[k], "cycle-edit", "arc [{i},{j}] overlaps a removed arc");
            self.keep[k] = false;
        }
        Ok(())
    }

    pub fn restore_arc(&mut self, i: usize, j: usize) -> Result<()> {
        for k in self.arc_slots(i, j) {
            ensure!(!self.keep[k], "cycle-edit", "arc [{i},{j}] was not removed");
            self.keep[k] = true;
        }
        Ok(())
    }

    pub fn add(&mut self, e: IndexEdge) {
        self.extra.push(e);
    }

    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        let c = &self.order.cycle;
        let mut out: Vec<(VertexId, VertexId)> = self
            .keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(k, _)| (c[k], c[(k + 1) % c.len()]))
            .collect();
        out.extend(
            self.extra
                .iter()
                .map(|e| (self.order.vertex(e.i), self.order.vertex(e.j))),
        );
        out
    }

    pub fn element(&self, g: &Graph, kind: ElementKind) -> Result<SystemElement> {
        SystemElement::from_pairs(g, &self.pairs(), kind)
    }
}

fn singleton(g: &Graph, order: &CycleOrder, e: IndexEdge) -> Result<SystemElement> {
    let (a, b) = (order.vertex(e.i), order.vertex(e.j));
    let id = g.edge_between(a, b).ok_or(Error::MissingEdge(a, b))?;
    SystemElement::single_edge(g, id)
}

/// Output of the elementary construction: the subdivision `K_M` (absent when
/// it would carry no edge of M) and the chords taken as single edges.
#[derive(Clone, Debug)]
pub struct ElementaryParts {
    pub k4: Option<SystemElement>,
    pub singles: Vec<SystemElement>,
    /// Whether some edge of M crosses one of the two backbone chords.
    pub crossing_case: bool,
}

/// `e` and `e2` are the crossing chords completing C to a subdivision K.
pub fn build_elementary(
    g: &Graph,
    order: &CycleOrder,
    e: IndexEdge,
    e2: IndexEdge,
    m: &EasyMatching,
) -> Result<ElementaryParts> {
    ensure!(
        classify(m) == Shape::Elementary,
        "elementary",
        "matching is jumbled"
    );
    ensure!(e.crosses(&e2), "elementary", "backbone chords {e} and {e2} do not cross");
    let crossing = |x: IndexEdge| -> Vec<IndexEdge> {
        m.edges.iter().copied().filter(|f| f.crosses(&x)).collect()
    };

    let mut singles = Vec::new();
    let mut base = Vec::new();
    let mut shortcut: Vec<IndexEdge> = Vec::new();
    let mut cross_e = crossing(e);
    let mut anchor = e;
    if cross_e.is_empty() {
        cross_e = crossing(e2);
        anchor = e2;
    }
    let crossing_case = !cross_e.is_empty();
    if !crossing_case {
        let w1 = e.i.min(e2.i);
        let w4 = e.j.max(e2.j);
        let spanning: Vec<IndexEdge> = m
            .edges
            .iter()
            .copied()
            .filter(|f| f.i <= w1 && f.j >= w4)
            .collect();
        ensure!(
            spanning.len() <= 1,
            "elementary",
            "{} edges span all four branch vertices",
            spanning.len()
        );
        for f in &spanning {
            singles.push(singleton(g, order, *f)?);
        }
        base.extend([e, e2]);
        shortcut.extend(m.edges.iter().copied().filter(|f| !spanning.contains(f)));
    } else {
        cross_e.sort_unstable();
        ensure!(
            cross_e.len() <= 2,
            "elementary",
            "{} edges of M cross {anchor}",
            cross_e.len()
        );
        let f = cross_e[0];
        if let Some(&f2) = cross_e.get(1) {
            singles.push(singleton(g, order, f2)?);
        }
        base.extend([anchor, f]);
        shortcut.extend(m.edges.iter().copied().filter(|x| !cross_e.contains(x)));
    }

    let k4 = if crossing_case || !shortcut.is_empty() {
        let mut edit = CycleEdit::new(order);
        for x in base {
            edit.add(x);
        }
        for x in shortcut {
            edit.remove_arc(x.i, x.j)?;
            edit.add(x);
        }
        Some(edit.element(g, ElementKind::K4Subdivision)?)
    } else {
        None
    };
    Ok(ElementaryParts {
        k4,
        singles,
        crossing_case,
    })
}

/// The vertices `w_1..w_{2s}` of one start interval: starts, then ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub r: usize,
    pub w: Vec<usize>,
}

impl Group {
    pub fn s(&self) -> usize {
        self.w.len() / 2
    }
}

/// Reroutes C through every edge of M: inside each `Q_r = C[w_1, w_{2s}]`
/// the arcs `[w_i, w_{i+1}]` with odd `i` are dropped and `M_r` added.
pub fn modify_c<'a>(order: &'a CycleOrder, m: &EasyMatching) -> Result<(CycleEdit<'a>, Vec<Group>)> {
    let mut edit = CycleEdit::new(order);
    let mut groups = Vec::new();
    for (r, group) in m.groups() {
        let s = group.len();
        ensure!(s % 2 == 1, "modify-c", "A_{r} hosts {s} starts");
        let mut w: Vec<usize> = group.iter().map(|e| e.i).collect();
        w.extend(group.iter().map(|e| e.j));
        ensure!(
            w.windows(2).all(|p| p[0] < p[1]),
            "modify-c",
            "edges starting in A_{r} do not cross pairwise"
        );
        for (k, e) in group.iter().enumerate() {
            ensure!(
                e.i == w[k] && e.j == w[k + s],
                "modify-c",
                "edge {e} is not w_{}w_{}",
                k + 1,
                k + s + 1
            );
        }
        for k in (0..2 * s - 1).step_by(2) {
            edit.remove_arc(w[k], w[k + 1])?;
        }
        for e in group {
            edit.add(e);
        }
        groups.push(Group { r, w });
    }
    Ok((edit, groups))
}

/// Cycle through every edge of M.
pub fn build_cycle_mode(g: &Graph, order: &CycleOrder, m: &EasyMatching) -> Result<SystemElement> {
    let (edit, _) = modify_c(order, m)?;
    edit.element(g, ElementKind::Cycle)
}

/// The modified cycle with two removed arcs of the first group of size at
/// least three put back.
pub fn build_jumbled(g: &Graph, order: &CycleOrder, m: &EasyMatching) -> Result<SystemElement> {
    let (mut edit, groups) = modify_c(order, m)?;
    let group = groups
        .iter()
        .find(|gr| gr.s() >= 3)
        .ok_or_else(|| Error::invariant("jumbled", "no interval hosts three starts"))?;
    let (w, s) = (&group.w, group.s());

    let c_prime = edit.element(g, ElementKind::Cycle)?;
    let Witness::Cycle(seq) = c_prime.witness() else {
        unreachable!("element was built as a cycle")
    };
    let wv: Vec<VertexId> = w.iter().map(|&i| order.vertex(i)).collect();
    check_gadget_order(seq, &wv)?;

    edit.restore_arc(w[0], w[1])?;
    edit.restore_arc(w[s + 1], w[s + 2])?;
    edit.element(g, ElementKind::K4Subdivision)
}

/// On C', walking from `w_1` towards `w_{s+1}`, the four attachment points
/// of the restored arcs must interleave.
fn check_gadget_order(seq: &[VertexId], w: &[VertexId]) -> Result<()> {
    let s = w.len() / 2;
    let n = seq.len();
    let start = seq
        .iter()
        .position(|&x| x == w[0])
        .ok_or_else(|| Error::invariant("jumbled", "w_1 is not on C'"))?;
    let step = if seq[(start + 1) % n] == w[s] { 1 } else { n - 1 };
    ensure!(
        seq[(start + step) % n] == w[s],
        "jumbled",
        "w_1 is not adjacent to w_(s+1) on C'"
    );
    let walk: Vec<VertexId> = (0..n).map(|k| seq[(start + k * step) % n]).collect();
    let p: Vec<VertexId> = walk.iter().filter(|x| w.contains(x)).copied().collect();
    let rank = |x: VertexId| p.iter().position(|&y| y == x).unwrap();
    let (a, b, c, d) = (rank(w[0]), rank(w[s + 1]), rank(w[1]), rank(w[s + 2]));
    ensure!(
        a < b && b < c && c < d,
        "jumbled",
        "restored arcs do not interleave on C' (ranks {a}, {b}, {c}, {d})"
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchings::{order_along_c, slice_geometric, slice_uniform, Family};

    fn ring(n: u32) -> Vec<(u32, u32)> {
        (1..=n).map(|i| (i, i % n + 1)).collect()
    }

    fn setup(n: u32, chords: &[(u32, u32)]) -> (Graph, CycleOrder) {
        let mut pairs = ring(n);
        pairs.extend_from_slice(chords);
        let g = Graph::from_edge_list(pairs).unwrap();
        let cycle: Vec<u32> = (1..=n).collect();
        let order = order_along_c(&cycle, &cycle).unwrap();
        (g, order)
    }

    fn jumbled_fixture() -> (Graph, CycleOrder, EasyMatching) {
        let chords = [(1, 8), (2, 10), (3, 12), (5, 16), (6, 18)];
        let (g, order) = setup(18, &chords);
        let m = EasyMatching {
            family: Family::N,
            k: 6,
            parity: 1,
            split: 0,
            slicing: slice_geometric(18, 6),
            edges: chords.iter().map(|&(a, b)| IndexEdge::new(a as usize, b as usize)).collect(),
        };
        (g, order, m)
    }

    #[test]
    fn jumbled_fixture_modified_cycle() {
        let (g, order, m) = jumbled_fixture();
        assert_eq!(m.slicing.intervals, vec![(1, 7), (8, 18)]);
        assert!(crate::matchings::validate_easy(&m));
        assert_eq!(classify(&m), Shape::Jumbled);
        let c = build_cycle_mode(&g, &order, &m).unwrap();
        assert_eq!(
            c.witness(),
            &Witness::Cycle(vec![1, 8, 9, 10, 2, 3, 12, 13, 14, 15, 16, 5, 6, 18])
        );
    }

    #[test]
    fn jumbled_fixture_restores_a_k4() {
        let (g, order, m) = jumbled_fixture();
        let k = build_jumbled(&g, &order, &m).unwrap();
        let Witness::K4(w) = k.witness() else { panic!("not a K4") };
        assert_eq!(w.branch, [1, 2, 10, 12]);
        for (a, b) in [(1, 2), (10, 11), (11, 12)] {
            assert!(k.contains(g.edge_between(a, b).unwrap()));
        }
        assert!(!k.contains(g.edge_between(3, 4).unwrap()));
    }

    #[test]
    fn elementary_case1_shortcuts_and_spanning_edge() {
        // backbone chords (3,7) and (5,9); (10,12) gets shortcut, (1,11)
        // spans all four branch vertices
        let (g, order) = setup(12, &[(3, 7), (5, 9), (10, 12), (1, 11)]);
        let (e, e2) = (IndexEdge::new(3, 7), IndexEdge::new(5, 9));
        let m = EasyMatching {
            family: Family::M,
            k: 2,
            parity: 1,
            split: 0,
            slicing: slice_uniform(12, 2),
            edges: vec![IndexEdge::new(10, 12)],
        };
        assert!(crate::matchings::validate_easy(&m));
        let parts = build_elementary(&g, &order, e, e2, &m).unwrap();
        assert!(!parts.crossing_case);
        assert!(parts.singles.is_empty());
        let k = parts.k4.unwrap();
        assert!(k.contains(g.edge_between(10, 12).unwrap()));
        assert!(!k.contains(g.edge_between(10, 11).unwrap()));

        let m = EasyMatching {
            family: Family::M,
            k: 10,
            parity: 1,
            split: 0,
            slicing: slice_uniform(12, 10),
            edges: vec![IndexEdge::new(1, 11)],
        };
        assert!(crate::matchings::validate_easy(&m));
        let parts = build_elementary(&g, &order, e, e2, &m).unwrap();
        assert!(parts.k4.is_none());
        assert_eq!(parts.singles.len(), 1);
        assert_eq!(parts.singles[0].edges(), &[g.edge_between(1, 11).unwrap()]);
    }

    #[test]
    fn elementary_case2_uses_a_crossing_edge() {
        let (g, order) = setup(16, &[(4, 8), (6, 10), (1, 5), (7, 12)]);
        let (e, e2) = (IndexEdge::new(4, 8), IndexEdge::new(6, 10));
        let m = EasyMatching {
            family: Family::M,
            k: 4,
            parity: 1,
            split: 0,
            slicing: slice_uniform(16, 4),
            edges: vec![IndexEdge::new(1, 5)],
        };
        assert!(crate::matchings::validate_easy(&m));
        let parts = build_elementary(&g, &order, e, e2, &m).unwrap();
        assert!(parts.crossing_case);
        assert!(parts.singles.is_empty());
        let k = parts.k4.unwrap();
        assert!(k.contains(g.edge_between(1, 5).unwrap()));
        assert!(k.contains(g.edge_between(4, 8).unwrap()));
        assert!(!k.contains(g.edge_between(6, 10).unwrap()));
    }
}
