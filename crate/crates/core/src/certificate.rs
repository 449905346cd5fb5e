//! Line-oriented certificate files.
//!
//! ```text
//! k4sep-certificate 1
//! graph <n> <m> <sha256 of the labeled edge list>
//! mode k4
//! size 2
//! levels 1
//! level 1 s 1 h 2 crossing 0 cover 0 1 matchings 0 emitted 0 1 0 0 0 0
//! element edge level 1 step outerplanar-singleton edges 1 0 witness a b
//! ```
//!
//! Edges are referred to by id (their position in the edge list), vertices
//! in witnesses by label. K4 witnesses list the four branch vertices and
//! then each of the six threads as a length followed by its labels.

use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, LabeledGraph, VertexId};
use crate::structure::K4Witness;
use crate::system::{LevelInfo, Mode, SeparatingSystem, Step, SystemElement, Witness};

pub const MAGIC: &str = "k4sep-certificate";
pub const VERSION: u32 = 1;

pub fn graph_digest(lg: &LabeledGraph) -> String {
    let mut h = Sha256::new();
    h.update(lg.to_edge_list().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_certificate(lg: &LabeledGraph, sys: &SeparatingSystem) -> String {
    let g = &lg.graph;
    let label = |v: VertexId| lg.labels[v as usize].as_str();
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "graph {} {} {}", g.vertex_count(), g.edge_count(), graph_digest(lg)).unwrap();
    writeln!(out, "mode {}", sys.mode).unwrap();
    writeln!(out, "size {}", sys.len()).unwrap();
    writeln!(out, "levels {}", sys.levels.len()).unwrap();
    for (k, l) in sys.levels.iter().enumerate() {
        let emitted: Vec<String> = l.emitted.iter().map(|c| c.to_string()).collect();
        writeln!(
            out,
            "level {} s {} h {} crossing {} cover {} {} matchings {} emitted {}",
            k + 1,
            l.s,
            l.h,
            u8::from(l.crossing),
            l.cover_size,
            l.cover_target,
            l.matchings,
            emitted.join(" ")
        )
        .unwrap();
    }
    for (el, prov) in sys.elements.iter().zip(&sys.provenance) {
        let ids: Vec<String> = el.edges().iter().map(|id| id.0.to_string()).collect();
        write!(
            out,
            "element {} level {} step {} edges {} {} witness",
            el.kind().as_str(),
            prov.level,
            prov.step.as_str(),
            ids.len(),
            ids.join(" ")
        )
        .unwrap();
        match el.witness() {
            Witness::Edge(u, v) => write!(out, " {} {}", label(*u), label(*v)).unwrap(),
            Witness::Cycle(seq) => {
                for &v in seq {
                    write!(out, " {}", label(v)).unwrap();
                }
            }
            Witness::K4(w) => {
                for &b in &w.branch {
                    write!(out, " {}", label(b)).unwrap();
                }
                for p in &w.paths {
                    write!(out, " {}", p.len()).unwrap();
                    for &v in p {
                        write!(out, " {}", label(v)).unwrap();
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// A parsed certificate. `declared_size` is the header value, which may
/// disagree with the number of element records in an edited file.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub declared_size: usize,
    pub system: SeparatingSystem,
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Certificate(format!("line {line}: {}", msg.into()))
}

struct Tokens<'a> {
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn next(&mut self) -> Result<&'a str> {
        self.it.next().ok_or_else(|| bad(self.line, "truncated record"))
    }

    fn expect(&mut self, word: &str) -> Result<()> {
        let got = self.next()?;
        if got == word {
            Ok(())
        } else {
            Err(bad(self.line, format!("expected {word:?}, found {got:?}")))
        }
    }

    fn num<T: std::str::FromStr>(&mut self) -> Result<T> {
        let tok = self.next()?;
        tok.parse().map_err(|_| bad(self.line, format!("not a number: {tok:?}")))
    }

    fn end(&mut self) -> Result<()> {
        match self.it.next() {
            None => Ok(()),
            Some(t) => Err(bad(self.line, format!("trailing token {t:?}"))),
        }
    }
}

/// Everything before the element records.
#[derive(Clone, Debug)]
pub struct Header {
    pub n: usize,
    pub m: usize,
    pub digest: String,
    pub mode: Mode,
    /// The `size` line, which may disagree with the number of element
    /// records in an edited file.
    pub declared_size: usize,
    pub levels: Vec<LevelInfo>,
}

type Lines<'a> = Box<dyn Iterator<Item = (usize, &'a str)> + 'a>;

fn numbered_lines(text: &str) -> Lines<'_> {
    Box::new(
        text.lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l))
            .filter(|(_, l)| !l.trim().is_empty()),
    )
}

fn parse_header<'a>(lines: &mut Lines<'a>) -> Result<Header> {
    let mut take = |what: &str| -> Result<Tokens<'a>> {
        let (line, l) = lines
            .next()
            .ok_or_else(|| Error::Certificate(format!("missing {what} record")))?;
        Ok(Tokens {
            line,
            it: l.split_whitespace(),
        })
    };

    let mut t = take("header")?;
    t.expect(MAGIC)?;
    let version: u32 = t.num()?;
    if version != VERSION {
        return Err(bad(t.line, format!("unsupported version {version}")));
    }

    let mut t = take("graph")?;
    t.expect("graph")?;
    let (n, m): (usize, usize) = (t.num()?, t.num()?);
    let digest = t.next()?.to_string();
    t.end()?;

    let mut t = take("mode")?;
    t.expect("mode")?;
    let mode: Mode = t.next()?.parse().map_err(|e: String| bad(t.line, e))?;
    let mut t = take("size")?;
    t.expect("size")?;
    let declared_size: usize = t.num()?;
    let mut t = take("levels")?;
    t.expect("levels")?;
    let level_count: usize = t.num()?;

    let mut levels = Vec::with_capacity(level_count.min(1 << 16));
    for k in 0..level_count {
        let mut t = take("level")?;
        t.expect("level")?;
        let idx: usize = t.num()?;
        if idx != k + 1 {
            return Err(bad(t.line, format!("level {idx} out of order")));
        }
        let mut info = LevelInfo::default();
        t.expect("s")?;
        info.s = t.num()?;
        t.expect("h")?;
        info.h = t.num()?;
        t.expect("crossing")?;
        info.crossing = t.num::<u8>()? != 0;
        t.expect("cover")?;
        info.cover_size = t.num()?;
        info.cover_target = t.num()?;
        t.expect("matchings")?;
        info.matchings = t.num()?;
        t.expect("emitted")?;
        for slot in info.emitted.iter_mut() {
            *slot = t.num()?;
        }
        t.end()?;
        levels.push(info);
    }
    Ok(Header {
        n,
        m,
        digest,
        mode,
        declared_size,
        levels,
    })
}

/// Reads the header and the level of every element record without
/// resolving anything against a graph.
pub fn read_summary(text: &str) -> Result<(Header, Vec<usize>)> {
    let mut lines = numbered_lines(text);
    let header = parse_header(&mut lines)?;
    let mut element_levels = Vec::new();
    for (line, l) in lines {
        let mut t = Tokens {
            line,
            it: l.split_whitespace(),
        };
        t.expect("element")?;
        t.next()?;
        t.expect("level")?;
        element_levels.push(t.num()?);
    }
    Ok((header, element_levels))
}

/// Parses a certificate and checks that it was written for `lg`.
pub fn read_certificate(lg: &LabeledGraph, text: &str) -> Result<Certificate> {
    let g = &lg.graph;
    let index: HashMap<&str, VertexId> = lg
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as VertexId))
        .collect();
    let mut lines = numbered_lines(text);
    let header = parse_header(&mut lines)?;
    if header.n != g.vertex_count() || header.m != g.edge_count() || header.digest != graph_digest(lg) {
        return Err(Error::Certificate(
            "certificate was written for a different graph".to_string(),
        ));
    }
    let mut sys = SeparatingSystem::new(header.mode);
    sys.levels = header.levels;

    for (line, l) in lines {
        let mut t = Tokens {
            line,
            it: l.split_whitespace(),
        };
        t.expect("element")?;
        let kind = t.next()?;
        t.expect("level")?;
        let level: usize = t.num()?;
        t.expect("step")?;
        let step: Step = t.next()?.parse().map_err(|e: String| bad(line, e))?;
        t.expect("edges")?;
        let count: usize = t.num()?;
        let mut ids = Vec::with_capacity(count);
        for _ in 0..count {
            let id = EdgeId(t.num()?);
            if g.edge(id).is_none() {
                return Err(bad(line, format!("unknown edge {id}")));
            }
            ids.push(id);
        }
        t.expect("witness")?;
        let vertex = |t: &mut Tokens| -> Result<VertexId> {
            let tok = t.next()?;
            index
                .get(tok)
                .copied()
                .ok_or_else(|| bad(line, format!("unknown vertex {tok:?}")))
        };
        let witness = match kind {
            "edge" => Witness::Edge(vertex(&mut t)?, vertex(&mut t)?),
            "cycle" => {
                let mut seq = Vec::new();
                for tok in t.it.by_ref() {
                    seq.push(
                        *index
                            .get(tok)
                            .ok_or_else(|| bad(line, format!("unknown vertex {tok:?}")))?,
                    );
                }
                Witness::Cycle(seq)
            }
            "k4" => {
                let mut branch = [0; 4];
                for b in branch.iter_mut() {
                    *b = vertex(&mut t)?;
                }
                let mut paths: [Vec<VertexId>; 6] = Default::default();
                for p in paths.iter_mut() {
                    let len: usize = t.num()?;
                    for _ in 0..len {
                        p.push(vertex(&mut t)?);
                    }
                }
                Witness::K4(K4Witness { branch, paths })
            }
            other => return Err(bad(line, format!("unknown element kind {other:?}"))),
        };
        t.end()?;
        sys.push(SystemElement::from_parts(ids, witness), level, step);
    }
    Ok(Certificate {
        declared_size: header.declared_size,
        system: sys,
    })
}
