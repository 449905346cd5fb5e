use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use k4sep::certificate::{read_certificate, read_summary, write_certificate};
use k4sep::corpus;
use k4sep::graph::{EdgeId, Graph, LabeledGraph};
use k4sep::verifier::{verify_separation, verify_size, verify_structure, Verdict};
use k4sep::{Engine, Error, Mode};

/// Input problems, bad parameters, mismatched files.
const EXIT_USAGE: u8 = 2;
/// The construction tripped one of its own invariants.
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "k4sep", version, about = "Separating systems of edges, cycles and K4 subdivisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a separating system for an edge-list graph and write its certificate.
    Build {
        input: PathBuf,
        #[arg(long, default_value = "k4")]
        mode: Mode,
        /// Certificate path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against its graph: structure, separation and size.
    Verify { graph: PathBuf, certificate: PathBuf },
    /// Write a generated graph as an edge list.
    Corpus {
        #[arg(long, value_enum)]
        family: Family,
        /// Vertices (complete, gnp, tree), dimension (hypercube) or side length (grid).
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability for gnp.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarise certificates as CSV on stdout.
    Stats { certificates: Vec<PathBuf> },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    Gnp,
    Hypercube,
    Tree,
    Fig1,
    Grid,
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| fail(1, format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| fail(1, e.to_string())),
    }
}

fn load_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    LabeledGraph::parse(&read(path)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn build(input: &Path, mode: Mode, out: Option<&Path>) -> CmdResult {
    let lg = load_graph(input)?;
    let output = Engine::new(mode).run(&lg.graph).map_err(|e| match e {
        Error::Invariant { .. } => fail(EXIT_INVARIANT, e.to_string()),
        other => fail(1, other.to_string()),
    })?;
    emit(out, &write_certificate(&lg, &output.system))
}

fn describe(lg: &LabeledGraph, id: EdgeId) -> String {
    match lg.graph.edge(id) {
        Some(e) => format!("{id} ({} {})", lg.labels[e.u as usize], lg.labels[e.v as usize]),
        None => id.to_string(),
    }
}

fn verify(graph: &Path, certificate: &Path) -> CmdResult {
    let lg = load_graph(graph)?;
    let cert = read_certificate(&lg, &read(certificate)?).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let sys = &cert.system;
    if cert.declared_size != sys.len() {
        eprintln!(
            "warning: header declares {} elements, found {}",
            cert.declared_size,
            sys.len()
        );
    }
    verify_structure(&lg.graph, sys).map_err(|e| fail(1, format!("structure: {e}")))?;
    match verify_separation(&lg.graph, sys).map_err(|e| fail(1, e.to_string()))? {
        Verdict::Pass => {}
        Verdict::Fail(u) => {
            let pair = match u.f {
                Some(f) => format!("{} and {}", describe(&lg, u.e), describe(&lg, f)),
                None => describe(&lg, u.e),
            };
            return Err(fail(1, format!("separation: {u}\nunseparated: {pair}")));
        }
    }
    if !verify_size(&lg.graph, sys) {
        return Err(fail(
            1,
            format!(
                "size: {} elements exceed {} times {} vertices",
                sys.len(),
                sys.mode.size_factor(),
                lg.graph.active_vertices().len()
            ),
        ));
    }
    println!(
        "ok: {} elements, {} mode, {} edges separated",
        sys.len(),
        sys.mode,
        lg.graph.edge_count()
    );
    Ok(())
}

fn generate(family: Family, n: Option<usize>, p: Option<f64>, seed: u64) -> Result<Graph, Failure> {
    let need_n = || n.ok_or_else(|| fail(EXIT_USAGE, "--n is required for this family"));
    Ok(match family {
        Family::Complete => corpus::complete(need_n()?),
        Family::Gnp => {
            let p = p.ok_or_else(|| fail(EXIT_USAGE, "--p is required for gnp"))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(fail(EXIT_USAGE, format!("--p must lie in [0, 1], got {p}")));
            }
            corpus::gnp(need_n()?, p, seed)
        }
        Family::Hypercube => {
            let d = need_n()?;
            if d > 20 {
                return Err(fail(EXIT_USAGE, format!("hypercube dimension {d} is too large")));
            }
            corpus::hypercube(d as u32)
        }
        Family::Tree => corpus::tree(need_n()?, seed),
        Family::Fig1 => corpus::fig1(),
        Family::Grid => {
            let side = need_n()?;
            corpus::grid(side, side)
        }
    })
}

fn corpus_cmd(family: Family, n: Option<usize>, p: Option<f64>, seed: u64, out: Option<&Path>) -> CmdResult {
    let g = generate(family, n, p, seed)?;
    if g.vertex_count() > u32::MAX as usize {
        return Err(fail(EXIT_USAGE, "graph too large"));
    }
    emit(out, &LabeledGraph::from_graph(g).to_edge_list())
}

fn stats(certificates: &[PathBuf]) -> CmdResult {
    let mut w = csv::Writer::from_writer(io::stdout());
    let header = [
        "file",
        "n",
        "m",
        "mode",
        "size",
        "size_per_n",
        "max_level_size_per_s",
        "cover_size",
        "cover_target",
    ];
    w.write_record(header).map_err(|e| fail(1, e.to_string()))?;
    for path in certificates {
        let (h, element_levels) =
            read_summary(&read(path)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
        let mut per_level = vec![0usize; h.levels.len()];
        for l in element_levels {
            if let Some(c) = l.checked_sub(1).and_then(|k| per_level.get_mut(k)) {
                *c += 1;
            }
        }
        let max_ratio = h
            .levels
            .iter()
            .zip(&per_level)
            .filter(|(info, _)| info.s > 0)
            .map(|(info, &c)| c as f64 / info.s as f64)
            .fold(0.0, f64::max);
        let size: usize = per_level.iter().sum();
        let per_n = if h.n == 0 { 0.0 } else { size as f64 / h.n as f64 };
        let cover: usize = h.levels.iter().map(|l| l.cover_size).sum();
        let target: usize = h.levels.iter().map(|l| l.cover_target).sum();
        w.write_record([
            path.display().to_string(),
            h.n.to_string(),
            h.m.to_string(),
            h.mode.to_string(),
            size.to_string(),
            format!("{per_n:.4}"),
            format!("{max_ratio:.4}"),
            cover.to_string(),
            target.to_string(),
        ])
        .map_err(|e| fail(1, e.to_string()))?;
    }
    w.flush().map_err(|e| fail(1, e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { input, mode, out } => build(input, *mode, out.as_deref()),
        Command::Verify { graph, certificate } => verify(graph, certificate),
        Command::Corpus {
            family,
            n,
            p,
            seed,
            out,
        } => corpus_cmd(*family, *n, *p, *seed, out.as_deref()),
        Command::Stats { certificates } => stats(certificates),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
