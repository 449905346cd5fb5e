//! Difference classes of chords and their refinement into easy matchings.
//!
//! All arithmetic is on positions `1..=h` of the vertices of H along C, never
//! on vertex labels. A chord is written `(i, j)` with `i < j`; it *starts* at
//! `i` and *ends* at `j`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{ensure, Error, Result};
use crate::graph::VertexId;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexEdge {
    pub i: usize,
    pub j: usize,
}

impl IndexEdge {
    pub fn new(a: usize, b: usize) -> IndexEdge {
        IndexEdge {
            i: a.min(b),
            j: a.max(b),
        }
    }

    /// Key of the M family, `j - i`.
    pub fn m_key(&self) -> i64 {
        self.j as i64 - self.i as i64
    }

    /// Key of the N family, `j - 2i`.
    pub fn n_key(&self) -> i64 {
        self.j as i64 - 2 * self.i as i64
    }

    pub fn crosses(&self, other: &IndexEdge) -> bool {
        crate::structure::positions_cross((self.i, self.j), (other.i, other.j))
    }
}

impl fmt::Display for IndexEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// The vertices of H listed in the order they appear on C.
#[derive(Clone, Debug)]
pub struct CycleOrder {
    /// C rotated so that `cycle[0]` is `v_1`; orientation is unchanged.
    pub cycle: Vec<VertexId>,
    /// `v_1, ..., v_h`.
    pub order: Vec<VertexId>,
    /// Offsets of `v_1..v_h` in `cycle`, strictly increasing from 0.
    pub offsets: Vec<usize>,
    /// Index of `v_1` in the cycle as given.
    shift: usize,
    index: HashMap<VertexId, usize>,
}

impl CycleOrder {
    pub fn h(&self) -> usize {
        self.order.len()
    }

    /// `v_i`, 1-based.
    pub fn vertex(&self, i: usize) -> VertexId {
        self.order[i - 1]
    }

    /// Offset of `v_i` in [`CycleOrder::cycle`].
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i - 1]
    }

    /// The 1-based positions `σ(1) < ... < σ(h)` of the H-vertices in the
    /// cycle as it was given, unrolled past the end when the order wraps.
    pub fn sigma(&self) -> Vec<usize> {
        self.offsets.iter().map(|o| self.shift + o + 1).collect()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn index_edge(&self, a: VertexId, b: VertexId) -> Option<IndexEdge> {
        Some(IndexEdge::new(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }
}

/// Orders the given vertices along C (a cycle, or a two-vertex edge),
/// starting at the smallest label.
pub fn order_along_c(cycle: &[VertexId], h_vertices: &[VertexId]) -> Result<CycleOrder> {
    ensure!(!cycle.is_empty(), "order", "empty cycle");
    let pos: HashMap<VertexId, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let first = *h_vertices
        .iter()
        .min()
        .ok_or_else(|| Error::invariant("order", "no H vertices"))?;
    for &v in h_vertices {
        ensure!(pos.contains_key(&v), "order", "H vertex {v} is not on C");
    }
    let shift = pos[&first];
    let m = cycle.len();
    let rotated: Vec<VertexId> = (0..m).map(|k| cycle[(shift + k) % m]).collect();
    let mut offsets: Vec<usize> = h_vertices
        .iter()
        .map(|v| (pos[v] + m - shift) % m)
        .collect();
    offsets.sort_unstable();
    offsets.dedup();
    let order: Vec<VertexId> = offsets.iter().map(|&o| rotated[o]).collect();
    let index = order.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    Ok(CycleOrder {
        cycle: rotated,
        order,
        offsets,
        shift,
        index,
    })
}

fn check_linear_forest(class: &[IndexEdge], key: i64) -> Result<()> {
    let mut deg: HashMap<usize, usize> = HashMap::new();
    for e in class {
        *deg.entry(e.i).or_default() += 1;
        *deg.entry(e.j).or_default() += 1;
    }
    ensure!(
        deg.values().all(|&d| d <= 2),
        "difference-classes",
        "class {key} has a vertex of degree > 2"
    );
    // Every edge links a smaller to a strictly larger index and each index
    // has at most one edge to a larger index within a class, so walks are
    // monotone and there are no cycles.
    let mut up: HashMap<usize, usize> = HashMap::new();
    for e in class {
        ensure!(
            up.insert(e.i, e.j).is_none(),
            "difference-classes",
            "class {key} has two edges starting at {}",
            e.i
        );
    }
    Ok(())
}

fn classes_by<F>(edges: &[IndexEdge], h: usize, key: F, range: (i64, i64)) -> Result<BTreeMap<i64, Vec<IndexEdge>>>
where
    F: Fn(&IndexEdge) -> i64,
{
    let mut out: BTreeMap<i64, Vec<IndexEdge>> = BTreeMap::new();
    for e in edges {
        ensure!(
            1 <= e.i && e.i < e.j && e.j <= h,
            "difference-classes",
            "edge {e} outside [1,{h}]"
        );
        let k = key(e);
        ensure!(
            range.0 <= k && k <= range.1,
            "difference-classes",
            "key {k} of {e} outside [{}, {}]",
            range.0,
            range.1
        );
        out.entry(k).or_default().push(*e);
    }
    for (k, class) in &mut out {
        class.sort_unstable();
        check_linear_forest(class, *k)?;
    }
    Ok(out)
}

/// `M_k = {(i, j) : j - i = k}` for `k` in `[1, h-1]`; only nonempty classes
/// are stored.
pub fn build_mk(edges: &[IndexEdge], h: usize) -> Result<BTreeMap<i64, Vec<IndexEdge>>> {
    classes_by(edges, h, IndexEdge::m_key, (1, h as i64 - 1))
}

/// `N_k = {(i, j) : j - 2i = k}` for `k` in `[-h+2, h-2]`.
pub fn build_nk(edges: &[IndexEdge], h: usize) -> Result<BTreeMap<i64, Vec<IndexEdge>>> {
    classes_by(edges, h, IndexEdge::n_key, (2 - h as i64, h as i64 - 2))
}

/// Consecutive intervals `A_1, ..., A_s` partitioning `[start, h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slicing {
    pub start: usize,
    /// Inclusive bounds of each interval.
    pub intervals: Vec<(usize, usize)>,
}

impl Slicing {
    fn from_starts(starts: &[usize], h: usize) -> Slicing {
        let intervals = starts
            .iter()
            .enumerate()
            .map(|(r, &a)| {
                let hi = starts.get(r + 1).map_or(h, |&next| next - 1);
                (a, hi)
            })
            .collect();
        Slicing {
            start: starts[0],
            intervals,
        }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Left ends `a_1 < a_2 < ...` of the intervals.
    pub fn starts(&self) -> Vec<usize> {
        self.intervals.iter().map(|&(a, _)| a).collect()
    }

    /// The 1-based `r` with `x ∈ A_r`.
    pub fn interval_of(&self, x: usize) -> Option<usize> {
        let r = self.intervals.partition_point(|&(_, hi)| hi < x);
        match self.intervals.get(r) {
            Some(&(lo, hi)) if lo <= x && x <= hi => Some(r + 1),
            _ => None,
        }
    }

    pub fn is_partition_of(&self, lo: usize, hi: usize) -> bool {
        let Some(&(first, _)) = self.intervals.first() else {
            return lo > hi;
        };
        first == lo
            && self.intervals.last().unwrap().1 == hi
            && self.intervals.iter().all(|&(a, b)| a <= b)
            && self.intervals.windows(2).all(|w| w[0].1 + 1 == w[1].0)
    }
}

/// Intervals of size `k` from 1, the last one possibly shorter.
pub fn slice_uniform(h: usize, k: usize) -> Slicing {
    assert!(k >= 1, "slice width must be positive");
    let starts: Vec<usize> = (0..).map(|r| r * k + 1).take_while(|&a| a <= h).collect();
    Slicing::from_starts(&starts, h)
}

/// `a_1 = 1` if `k >= 0`, else `1 - k`; `a_{r+1} = 2 a_r + k`, stopping at the
/// first `a_{d+1} > h`.
pub fn slice_geometric(h: usize, k: i64) -> Slicing {
    let mut a: i64 = if k >= 0 { 1 } else { 1 - k };
    assert!(a as usize <= h, "slice start {a} beyond h = {h}");
    let mut starts = Vec::new();
    while a <= h as i64 {
        starts.push(a as usize);
        let next = 2 * a + k;
        assert!(next > a && a > -k, "geometric slicing must grow");
        a = next;
    }
    Slicing::from_starts(&starts, h)
}

fn start_interval(e: &IndexEdge, slicing: &Slicing) -> Result<usize> {
    slicing
        .interval_of(e.i)
        .ok_or_else(|| Error::invariant("slicing", format!("edge {e} starts before the slicing")))
}

/// Splits by the parity of the interval containing the start:
/// `[t = 0, t = 1]`.
pub fn split_parity(edges: &[IndexEdge], slicing: &Slicing) -> Result<[Vec<IndexEdge>; 2]> {
    let mut out: [Vec<IndexEdge>; 2] = Default::default();
    for e in edges {
        let r = start_interval(e, slicing)?;
        out[r % 2].push(*e);
    }
    Ok(out)
}

/// Splits so that every interval hosts zero or an odd number of starts in
/// each part: from an interval with an even positive count, the edge with
/// the largest start moves to part 1. Returns `[ρ = 0, ρ = 1]`.
pub fn split_odd(edges: &[IndexEdge], slicing: &Slicing) -> Result<[Vec<IndexEdge>; 2]> {
    let mut by_interval: BTreeMap<usize, Vec<IndexEdge>> = BTreeMap::new();
    for e in edges {
        by_interval.entry(start_interval(e, slicing)?).or_default().push(*e);
    }
    let mut out: [Vec<IndexEdge>; 2] = Default::default();
    for (_, mut group) in by_interval {
        group.sort_unstable();
        if group.len() % 2 == 0 {
            let last = group.pop().unwrap();
            out[1].push(last);
        }
        out[0].extend(group);
    }
    out[0].sort_unstable();
    out[1].sort_unstable();
    Ok(out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    M,
    N,
}

/// A matching with the slicing and parity that witness it is easy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EasyMatching {
    pub family: Family,
    pub k: i64,
    pub parity: usize,
    pub split: usize,
    pub slicing: Slicing,
    /// Sorted by start.
    pub edges: Vec<IndexEdge>,
}

impl EasyMatching {
    /// Edges grouped by start interval, ascending in `r`.
    pub fn groups(&self) -> BTreeMap<usize, Vec<IndexEdge>> {
        let mut out: BTreeMap<usize, Vec<IndexEdge>> = BTreeMap::new();
        for e in &self.edges {
            if let Some(r) = self.slicing.interval_of(e.i) {
                out.entry(r).or_default().push(*e);
            }
        }
        out
    }
}

/// Checks matching-ness and the three easy properties against the attached
/// slicing and parity.
pub fn check_easy(m: &EasyMatching) -> std::result::Result<(), String> {
    let mut used = std::collections::HashSet::new();
    for e in &m.edges {
        if e.i >= e.j {
            return Err(format!("edge {e} is not written with i < j"));
        }
        if !used.insert(e.i) || !used.insert(e.j) {
            return Err(format!("edge {e} shares an endpoint"));
        }
    }
    let mut groups: BTreeMap<usize, Vec<IndexEdge>> = BTreeMap::new();
    for e in &m.edges {
        let r = m
            .slicing
            .interval_of(e.i)
            .ok_or_else(|| format!("{e} starts outside the slicing"))?;
        if r % 2 != m.parity % 2 {
            return Err(format!("{e} starts in A_{r}, parity {} expected", m.parity));
        }
        if m.slicing.interval_of(e.j) != Some(r + 1) {
            return Err(format!("{e} starts in A_{r} but does not end in A_{}", r + 1));
        }
        groups.entry(r).or_default().push(*e);
    }
    for (r, mut group) in groups {
        group.sort_unstable();
        // pairwise crossing <=> ends increase with starts and every start
        // precedes every end
        let ends_increase = group.windows(2).all(|w| w[0].j < w[1].j);
        let max_start = group.last().unwrap().i;
        let min_end = group.iter().map(|e| e.j).min().unwrap();
        if !ends_increase || max_start >= min_end {
            return Err(format!("edges starting in A_{r} are not pairwise crossing"));
        }
        if group.len() % 2 == 0 {
            return Err(format!("A_{r} hosts an even number ({}) of starts", group.len()));
        }
    }
    Ok(())
}

pub fn validate_easy(m: &EasyMatching) -> bool {
    check_easy(m).is_ok()
}

/// The full refinement of a chord set: both difference families and the
/// nonempty easy matchings derived from them.
#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    pub m_classes: BTreeMap<i64, Vec<IndexEdge>>,
    pub n_classes: BTreeMap<i64, Vec<IndexEdge>>,
    pub matchings: Vec<EasyMatching>,
}

fn refine(family: Family, k: i64, class: &[IndexEdge], slicing: Slicing, out: &mut Vec<EasyMatching>) -> Result<()> {
    let halves = split_parity(class, &slicing)?;
    for (t, half) in halves.into_iter().enumerate() {
        let parts = split_odd(&half, &slicing)?;
        for (rho, part) in parts.into_iter().enumerate() {
            if part.is_empty() {
                continue;
            }
            let m = EasyMatching {
                family,
                k,
                parity: t,
                split: rho,
                slicing: slicing.clone(),
                edges: part,
            };
            if let Err(why) = check_easy(&m) {
                return Err(Error::invariant(
                    "easy-matchings",
                    format!("{family:?}_{{{k},{t},{rho}}} is not easy: {why}"),
                ));
            }
            out.push(m);
        }
    }
    Ok(())
}

/// Builds `M_k`, `N_k`, slices them and splits them into nonempty easy
/// matchings. `families` selects which families to refine.
pub fn decompose(edges: &[IndexEdge], h: usize, families: &[Family]) -> Result<Decomposition> {
    if edges.is_empty() {
        return Ok(Decomposition::default());
    }
    let m_classes = build_mk(edges, h)?;
    let n_classes = build_nk(edges, h)?;
    let mut matchings = Vec::new();
    if families.contains(&Family::M) {
        for (&k, class) in &m_classes {
            refine(Family::M, k, class, slice_uniform(h, k as usize), &mut matchings)?;
        }
    }
    if families.contains(&Family::N) {
        for (&k, class) in &n_classes {
            refine(Family::N, k, class, slice_geometric(h, k), &mut matchings)?;
        }
    }
    ensure!(
        matchings.len() <= 12 * h,
        "easy-matchings",
        "{} matchings exceed 12h = {}",
        matchings.len(),
        12 * h
    );
    Ok(Decomposition {
        m_classes,
        n_classes,
        matchings,
    })
}
