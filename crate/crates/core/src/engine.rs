//! Level-by-level construction of separating systems.
//!
//! Each level peels the rotation set S of the current graph. Edge ids of the
//! input graph are kept throughout, so elements built at any level refer to
//! the caller's graph.

use log::{debug, warn};

use crate::builder::{build_cycle_mode, build_elementary, build_jumbled, classify, Shape};
use crate::covers::{EdgeCover, GreedyCycleCover, GreedyK4Cover};
use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::matchings::{decompose, order_along_c, CycleOrder, Decomposition, Family, IndexEdge};
use crate::rotation::{build_cycle_c, neighborhood, rotation_maximal_path};
use crate::structure::outerplanar_edge_bound_check;
use crate::system::{LevelInfo, Mode, SeparatingSystem, Step, SystemElement};
use crate::verifier::{verify_separation, verify_structure, Membership, Verdict};

/// What one level saw, kept when [`Engine::trace`] is set.
#[derive(Clone, Debug)]
pub struct LevelTrace {
    pub level: usize,
    pub s: Vec<VertexId>,
    pub order: CycleOrder,
    /// Chords left after removing the singletons, in positions along C.
    pub h_prime: Vec<IndexEdge>,
    pub decomposition: Decomposition,
}

#[derive(Clone, Debug)]
pub struct BuildOutput {
    pub system: SeparatingSystem,
    /// Size before redundant elements were dropped.
    pub unpruned_len: usize,
    pub trace: Vec<LevelTrace>,
}

pub struct Engine<'c> {
    pub mode: Mode,
    /// Drop elements whose removal keeps the family separating.
    pub prune: bool,
    pub trace: bool,
    pub cover: &'c dyn EdgeCover,
}

impl Engine<'static> {
    pub fn new(mode: Mode) -> Engine<'static> {
        let cover: &'static dyn EdgeCover = match mode {
            Mode::K4 => &GreedyK4Cover,
            Mode::CycleOnly => &GreedyCycleCover,
        };
        Engine {
            mode,
            prune: true,
            trace: false,
            cover,
        }
    }
}

pub fn build_separating_system(g: &Graph, mode: Mode) -> Result<SeparatingSystem> {
    Engine::new(mode).run(g).map(|out| out.system)
}

impl Engine<'_> {
    pub fn run(&self, g: &Graph) -> Result<BuildOutput> {
        let mut sys = SeparatingSystem::new(self.mode);
        let mut trace = Vec::new();
        let mut cur = g.clone();
        let mut level = 0;
        while !cur.is_empty() {
            level += 1;
            let (info, s) = self
                .level(&cur, level, &mut sys, &mut trace)
                .map_err(|err| err.at_level(level))?;
            debug!("level {level}: |S| = {}, h = {}, emitted {}", info.s, info.h, info.emitted_total());
            sys.levels.push(info);
            let mut gone = vec![false; cur.vertex_count()];
            for v in s {
                gone[v as usize] = true;
            }
            cur = cur.without_vertices(|v| gone[v as usize]);
        }
        let unpruned_len = sys.len();
        if self.prune {
            sys = prune_redundant(g, sys)?;
        }
        self.final_check(g, &sys).map_err(|err| err.at_level(level))?;
        Ok(BuildOutput {
            system: sys,
            unpruned_len,
            trace,
        })
    }

    fn final_check(&self, g: &Graph, sys: &SeparatingSystem) -> Result<()> {
        if let Verdict::Fail(u) = verify_separation(g, sys)? {
            return Err(Error::invariant("final-verify", u.to_string()));
        }
        verify_structure(g, sys).map_err(|why| Error::invariant("final-verify", why))
    }

    fn level(
        &self,
        cur: &Graph,
        level: usize,
        sys: &mut SeparatingSystem,
        trace: &mut Vec<LevelTrace>,
    ) -> Result<(LevelInfo, Vec<VertexId>)> {
        let rec = rotation_maximal_path(cur)?;
        let s = rec.derived.clone();
        let backbone = build_cycle_c(cur, &rec)?;

        let mut in_s = vec![false; cur.vertex_count()];
        for &v in &s {
            in_s[v as usize] = true;
        }
        let h_edges: Vec<EdgeId> = cur
            .edges()
            .iter()
            .filter(|e| in_s[e.u as usize] || in_s[e.v as usize])
            .map(|e| e.id)
            .collect();
        let mut h_vertices = s.clone();
        h_vertices.extend(neighborhood(cur, &s));
        h_vertices.sort_unstable();
        let h = h_vertices.len();
        ensure!(h <= 3 * s.len(), "subgraph-h", "h = {h} exceeds 3|S| = {}", 3 * s.len());

        let c_ids = cur.ids_of_pairs(&backbone.edge_pairs())?;
        let order = order_along_c(&backbone.cycle, &h_vertices)?;
        let mut chords: Vec<IndexEdge> = Vec::new();
        for &id in &h_edges {
            if c_ids.binary_search(&id).is_ok() {
                continue;
            }
            let e = cur.edge(id).unwrap();
            let ie = order
                .index_edge(e.u, e.v)
                .ok_or_else(|| Error::invariant("subgraph-h", format!("edge {id} of H leaves V(H)")))?;
            chords.push(ie);
        }
        chords.sort_unstable();

        let mut info = LevelInfo {
            s: s.len(),
            h,
            ..Default::default()
        };
        let emit = |sys: &mut SeparatingSystem, info: &mut LevelInfo, el: SystemElement, step: Step| {
            info.emitted[step.index()] += 1;
            sys.push(el, level, step);
        };

        let crossing = match self.mode {
            Mode::K4 => first_crossing_pair(&chords),
            Mode::CycleOnly => None,
        };
        if self.mode == Mode::K4 && crossing.is_none() {
            ensure!(
                outerplanar_edge_bound_check(h, h_edges.len()),
                "outerplanar",
                "e(H) = {} exceeds 2h - 3 = {}",
                h_edges.len(),
                (2 * h).saturating_sub(3)
            );
            for &id in &h_edges {
                emit(sys, &mut info, SystemElement::single_edge(cur, id)?, Step::OuterplanarSingleton);
            }
            return Ok((info, s));
        }

        // K_S: edges of K (K4 mode) or of C (cycle mode) inside H
        let mut k_ids = c_ids.clone();
        if let Some((e, e2)) = crossing {
            info.crossing = true;
            for x in [e, e2] {
                let (a, b) = (order.vertex(x.i), order.vertex(x.j));
                k_ids.push(cur.edge_between(a, b).ok_or(Error::MissingEdge(a, b))?);
            }
        }
        let ks: Vec<EdgeId> = h_edges.iter().copied().filter(|id| k_ids.contains(id)).collect();
        if self.mode == Mode::K4 {
            ensure!(
                ks.len() <= 2 * s.len() + 2,
                "ks-singleton",
                "|K_S| = {} exceeds 2|S| + 2 = {}",
                ks.len(),
                2 * s.len() + 2
            );
        }
        for &id in &ks {
            emit(sys, &mut info, SystemElement::single_edge(cur, id)?, Step::KsSingleton);
        }

        let h_prime_ids: Vec<EdgeId> = h_edges.iter().copied().filter(|id| !ks.contains(id)).collect();
        let h_prime: Vec<IndexEdge> = match crossing {
            Some((e, e2)) => chords.iter().copied().filter(|&x| x != e && x != e2).collect(),
            None => chords.clone(),
        };
        ensure!(
            h_prime.len() == h_prime_ids.len(),
            "subgraph-h",
            "H' has {} edges but {} chords remain",
            h_prime_ids.len(),
            h_prime.len()
        );

        let cover = self.cover.cover(&cur.subgraph_of_ids(&h_prime_ids)?)?;
        info.cover_size = cover.len();
        info.cover_target = self.cover.target(h);
        if !info.cover_meets_target() {
            debug!(
                "level {level}: {} cover of size {} over target {}",
                self.cover.name(),
                info.cover_size,
                info.cover_target
            );
        }
        for el in cover {
            emit(sys, &mut info, el, Step::Cover);
        }

        let dec = decompose(&h_prime, h, &[Family::M, Family::N])?;
        info.matchings = dec.matchings.len();
        for m in &dec.matchings {
            match (self.mode, crossing) {
                (Mode::CycleOnly, _) => {
                    emit(sys, &mut info, build_cycle_mode(cur, &order, m)?, Step::CycleMode);
                }
                (Mode::K4, Some((e, e2))) => match classify(m) {
                    Shape::Elementary => {
                        let parts = build_elementary(cur, &order, e, e2, m)?;
                        for el in parts.k4.into_iter().chain(parts.singles) {
                            emit(sys, &mut info, el, Step::Elementary);
                        }
                    }
                    Shape::Jumbled => {
                        emit(sys, &mut info, build_jumbled(cur, &order, m)?, Step::Jumbled);
                    }
                },
                (Mode::K4, None) => unreachable!("outerplanar levels return early"),
            }
        }
        let built = info.emitted[Step::Elementary.index()]
            + info.emitted[Step::Jumbled.index()]
            + info.emitted[Step::CycleMode.index()];
        ensure!(
            built <= 24 * h,
            "matching-elements",
            "{built} elements from matchings exceed 24h = {}",
            24 * h
        );

        if self.trace {
            trace.push(LevelTrace {
                level,
                s: s.clone(),
                order,
                h_prime,
                decomposition: dec,
            });
        }
        Ok((info, s))
    }
}

/// The crossing pair `(e, e')` minimal in `(e, e')` lexicographic order of
/// positions along C.
fn first_crossing_pair(chords: &[IndexEdge]) -> Option<(IndexEdge, IndexEdge)> {
    for (a, e) in chords.iter().enumerate() {
        if let Some(e2) = chords.iter().enumerate().find(|&(b, x)| b != a && x.crosses(e)).map(|(_, x)| *x) {
            return Some((*e, e2));
        }
    }
    None
}

/// Drops redundant elements, latest first. The result is irredundant:
/// a family that stops separating without `x` still does so once further
/// elements are gone.
pub fn prune_redundant(g: &Graph, sys: SeparatingSystem) -> Result<SeparatingSystem> {
    let mut mem = Membership::new(g, &sys.elements)?;
    for x in (0..sys.len()).rev() {
        if mem.separates_without(x) {
            mem.remove(x);
        }
    }
    let mut out = SeparatingSystem::new(sys.mode);
    out.levels = sys.levels;
    for (x, (el, prov)) in sys.elements.into_iter().zip(sys.provenance).enumerate() {
        if mem.is_live(x) {
            out.push(el, prov.level, prov.step);
        }
    }
    Ok(out)
}

/// Per-level summary of a finished system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub s: usize,
    /// Elements of the final system attributed to the level, per step.
    pub counts: [usize; 6],
    pub total: usize,
    /// `82|S|` or `41|S|`.
    pub budget: usize,
    /// Whether the cover met its target, so that the level's own bounds
    /// apply.
    pub cover_on_target: bool,
}

impl LevelReport {
    pub fn within_budget(&self) -> bool {
        self.total <= self.budget
    }
}

pub fn level_accounting(sys: &SeparatingSystem) -> Vec<LevelReport> {
    let mut out: Vec<LevelReport> = sys
        .levels
        .iter()
        .enumerate()
        .map(|(k, info)| LevelReport {
            level: k + 1,
            s: info.s,
            counts: [0; 6],
            total: 0,
            budget: sys.mode.size_factor() * info.s,
            cover_on_target: info.cover_meets_target(),
        })
        .collect();
    for prov in &sys.provenance {
        if let Some(r) = out.get_mut(prov.level.wrapping_sub(1)) {
            r.counts[prov.step.index()] += 1;
            r.total += 1;
        }
    }
    for r in &out {
        if !r.within_budget() {
            warn!("level {}: {} elements exceed {}", r.level, r.total, r.budget);
        }
    }
    out
}
