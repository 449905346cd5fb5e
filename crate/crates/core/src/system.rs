//! Certificate elements and separating systems.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::structure::{is_cycle, is_k4_subdivision, K4Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementKind {
    SingleEdge,
    Cycle,
    K4Subdivision,
}

impl ElementKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::SingleEdge => "edge",
            ElementKind::Cycle => "cycle",
            ElementKind::K4Subdivision => "k4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Edge(VertexId, VertexId),
    /// Cyclic vertex sequence, first vertex not repeated.
    Cycle(Vec<VertexId>),
    K4(K4Witness),
}

/// One member of a separating system: an edge, a cycle or a K4 subdivision,
/// stored as its edge ids together with a vertex witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemElement {
    edges: Vec<EdgeId>,
    witness: Witness,
}

impl SystemElement {
    pub fn single_edge(g: &Graph, id: EdgeId) -> Result<SystemElement> {
        let e = g.edge(id).ok_or(Error::UnknownEdge(id))?;
        Ok(SystemElement {
            edges: vec![id],
            witness: Witness::Edge(e.u, e.v),
        })
    }

    /// Classifies the subgraph spanned by `ids`.
    pub fn from_edges(g: &Graph, ids: &[EdgeId]) -> Result<SystemElement> {
        let sub = g.subgraph_of_ids(ids)?;
        let edges: Vec<EdgeId> = sub.edges().iter().map(|e| e.id).collect();
        if edges.len() == 1 {
            let e = sub.edges()[0];
            return Ok(SystemElement {
                edges,
                witness: Witness::Edge(e.u, e.v),
            });
        }
        if let Some(seq) = is_cycle(&sub) {
            return Ok(SystemElement {
                edges,
                witness: Witness::Cycle(seq),
            });
        }
        if let Some(w) = is_k4_subdivision(&sub) {
            return Ok(SystemElement {
                edges,
                witness: Witness::K4(w),
            });
        }
        Err(Error::invariant(
            "element",
            format!("edge set {edges:?} is neither an edge, a cycle nor a K4 subdivision"),
        ))
    }

    /// Builds an element of the required kind from vertex pairs of `g`.
    pub fn from_pairs(
        g: &Graph,
        pairs: &[(VertexId, VertexId)],
        kind: ElementKind,
    ) -> Result<SystemElement> {
        let ids = g.ids_of_pairs(pairs)?;
        let el = SystemElement::from_edges(g, &ids)?;
        if el.kind() != kind {
            return Err(Error::invariant(
                "element",
                format!("expected {}, built {}", kind.as_str(), el.kind().as_str()),
            ));
        }
        Ok(el)
    }

    /// Trusts the caller; used when reading certificates, which are then
    /// checked by the verifier.
    pub fn from_parts(edges: Vec<EdgeId>, witness: Witness) -> SystemElement {
        let mut edges = edges;
        edges.sort_unstable();
        SystemElement { edges, witness }
    }

    pub fn kind(&self) -> ElementKind {
        match self.witness {
            Witness::Edge(..) => ElementKind::SingleEdge,
            Witness::Cycle(_) => ElementKind::Cycle,
            Witness::K4(_) => ElementKind::K4Subdivision,
        }
    }

    /// Sorted edge ids.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edges.binary_search(&id).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    K4,
    CycleOnly,
}

impl Mode {
    /// Linear size constant guaranteed for the mode.
    pub fn size_factor(self) -> usize {
        match self {
            Mode::K4 => 82,
            Mode::CycleOnly => 41,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::K4 => "k4",
            Mode::CycleOnly => "cycle",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Mode, String> {
        match s {
            "k4" => Ok(Mode::K4),
            "cycle" => Ok(Mode::CycleOnly),
            other => Err(format!("unknown mode {other:?} (expected k4 or cycle)")),
        }
    }
}

/// Which construction step emitted an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    KsSingleton,
    OuterplanarSingleton,
    Cover,
    Elementary,
    Jumbled,
    CycleMode,
}

impl Step {
    pub const ALL: [Step; 6] = [
        Step::KsSingleton,
        Step::OuterplanarSingleton,
        Step::Cover,
        Step::Elementary,
        Step::Jumbled,
        Step::CycleMode,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Step::KsSingleton => "ks-singleton",
            Step::OuterplanarSingleton => "outerplanar-singleton",
            Step::Cover => "cover",
            Step::Elementary => "elementary",
            Step::Jumbled => "jumbled",
            Step::CycleMode => "cycle-mode",
        }
    }

    pub fn index(self) -> usize {
        Step::ALL.iter().position(|&s| s == self).unwrap()
    }
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Step, String> {
        Step::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown step {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub level: usize,
    pub step: Step,
}

/// What the construction recorded about one peeling level.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LevelInfo {
    /// Size of the peeled set S.
    pub s: usize,
    /// Vertices of H, the subgraph of edges incident to S.
    pub h: usize,
    /// Whether a crossing chord pair was found (K4 mode only).
    pub crossing: bool,
    /// Size of the cover of H' and the target it is measured against.
    pub cover_size: usize,
    pub cover_target: usize,
    /// Nonempty easy matchings processed at this level.
    pub matchings: usize,
    /// Elements emitted per step before pruning, indexed by [`Step::index`].
    pub emitted: [usize; 6],
}

impl LevelInfo {
    pub fn emitted_total(&self) -> usize {
        self.emitted.iter().sum()
    }

    pub fn cover_meets_target(&self) -> bool {
        self.cover_size <= self.cover_target
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeparatingSystem {
    pub mode: Mode,
    pub elements: Vec<SystemElement>,
    pub provenance: Vec<Provenance>,
    pub levels: Vec<LevelInfo>,
}

impl SeparatingSystem {
    pub fn new(mode: Mode) -> SeparatingSystem {
        SeparatingSystem {
            mode,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push(&mut self, element: SystemElement, level: usize, step: Step) {
        self.elements.push(element);
        self.provenance.push(Provenance { level, step });
    }

    /// A copy with element `idx` deleted.
    pub fn without(&self, idx: usize) -> SeparatingSystem {
        let mut out = self.clone();
        out.elements.remove(idx);
        out.provenance.remove(idx);
        out
    }
}
