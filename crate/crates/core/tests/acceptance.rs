//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use k4sep::builder::{build_cycle_mode, build_jumbled};
use k4sep::certificate::{read_certificate, write_certificate};
use k4sep::corpus::{fig1, fig1_chords, fig1_cycle, gnp, standard_corpus};
use k4sep::engine::{BuildOutput, Engine};
use k4sep::graph::{Graph, LabeledGraph, VertexId};
use k4sep::matchings::{
    build_mk, build_nk, order_along_c, slice_geometric, slice_uniform, split_parity, validate_easy,
    EasyMatching, Family, IndexEdge,
};
use k4sep::rotation::{build_cycle_c, derived_set, neighborhood, rotation_maximal_path};
use k4sep::system::{ElementKind, Mode, SeparatingSystem, Step, Witness};
use k4sep::verifier::{
    oracle_derived_set, oracle_no_single_cycle_contains, redundant_elements, verify_separation,
    verify_structure,
};

const TIME_LIMIT: Duration = Duration::from_secs(10);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Built {
    name: String,
    graph: Graph,
    out: BuildOutput,
    elapsed: Duration,
}

fn build_all(corpus: &[(String, Graph)], mode: Mode, trace: bool) -> Vec<Built> {
    corpus
        .iter()
        .map(|(name, g)| {
            let mut eng = Engine::new(mode);
            eng.trace = trace;
            let t = Instant::now();
            let out = eng.run(g).unwrap_or_else(|e| panic!("{name} ({mode}): {e}"));
            Built { name: name.clone(), graph: g.clone(), out, elapsed: t.elapsed() }
        })
        .collect()
}

fn end_to_end(built: &[Built], mode: Mode) -> Outcome {
    let factor = mode.size_factor();
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    let mut slowest = (Duration::ZERO, String::new());
    for b in built {
        let sys = &b.out.system;
        let n = b.graph.active_vertices().len();
        if let Err(e) = verify_structure(&b.graph, sys) {
            failures.push(format!("{}: structure: {e}", b.name));
        }
        match verify_separation(&b.graph, sys) {
            Ok(v) if v.is_pass() => {}
            Ok(v) => failures.push(format!("{}: {v:?}", b.name)),
            Err(e) => failures.push(format!("{}: {e}", b.name)),
        }
        if sys.len() > factor * n {
            failures.push(format!("{}: size {} > {}*{}", b.name, sys.len(), factor, n));
        }
        if mode == Mode::CycleOnly
            && sys.elements.iter().any(|el| el.kind() == ElementKind::K4Subdivision)
        {
            failures.push(format!("{}: K4 element in cycle mode", b.name));
        }
        if b.elapsed > TIME_LIMIT {
            failures.push(format!("{}: took {:?}", b.name, b.elapsed));
        }
        if n > 0 {
            worst_ratio = worst_ratio.max(sys.len() as f64 / n as f64);
        }
        if b.elapsed > slowest.0 {
            slowest = (b.elapsed, b.name.clone());
        }
    }
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} graphs, max size/n {:.2} (bound {}), slowest {} in {:.0?}, {} failures",
            built.len(),
            worst_ratio,
            factor,
            slowest.1,
            slowest.0,
            failures.len()
        ),
    )
}

fn rotation_invariant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = 0;
    let mut tested = 0;
    while tested < 1000 {
        let n = rng.gen_range(2..=64);
        let p = rng.gen_range(0.02..0.9);
        let g = gnp(n, p, rng.gen());
        if g.is_empty() {
            continue;
        }
        tested += 1;
        let rec = rotation_maximal_path(&g).unwrap();
        let s = &rec.derived;
        let nbh = neighborhood(&g, s);
        let c = build_cycle_c(&g, &rec).unwrap();
        let on_c: BTreeSet<VertexId> = c.cycle.iter().copied().collect();
        if nbh.len() > 2 * s.len() || !s.iter().chain(&nbh).all(|v| on_c.contains(v)) {
            violations += 1;
            println!("    violation on G({n}, {p:.2}): |S|={} |N(S)|={}", s.len(), nbh.len());
        }
    }
    outcome(violations == 0, format!("{tested} graphs, {violations} violations"))
}

fn rotation_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ac1e);
    let mut mismatches = 0;
    let mut tested = 0;
    let mut long_paths = 0;
    while tested < 400 {
        let n = rng.gen_range(3..=9);
        let g = gnp(n, rng.gen_range(0.2..0.9), rng.gen());
        if g.is_empty() {
            continue;
        }
        let path = if rng.gen_bool(0.5) {
            rotation_maximal_path(&g).unwrap().path
        } else {
            let start = g.edges()[rng.gen_range(0..g.edge_count())].u;
            let mut path = vec![start];
            loop {
                let last = *path.last().unwrap();
                let next: Vec<VertexId> = g.neighbors(last).filter(|x| !path.contains(x)).collect();
                if next.is_empty() || rng.gen_bool(0.15) {
                    break;
                }
                path.push(next[rng.gen_range(0..next.len())]);
            }
            path
        };
        tested += 1;
        if path.len() >= 5 {
            long_paths += 1;
        }
        if derived_set(&g, &path).unwrap() != oracle_derived_set(&g, &path) {
            mismatches += 1;
            println!("    mismatch on path {path:?}");
        }
    }
    outcome(
        mismatches == 0,
        format!("{tested} instances ({long_paths} paths of 5+ vertices), {mismatches} mismatches"),
    )
}

fn chord_obstruction() -> Outcome {
    let obstruction = oracle_no_single_cycle_contains(&fig1_cycle(), &fig1_chords());
    let g = fig1();
    let sys = Engine::new(Mode::CycleOnly).run(&g).unwrap().system;
    let n = g.active_vertices().len();
    let separates = verify_separation(&g, &sys).unwrap().is_pass();
    let structure = verify_structure(&g, &sys).is_ok();
    outcome(
        obstruction && separates && structure && sys.len() <= 41 * n,
        format!(
            "no single cycle through M: {obstruction}; cycle mode separates with {} elements (bound {})",
            sys.len(),
            41 * n
        ),
    )
}

fn easy_matchings(built: &[Built]) -> Outcome {
    let mut levels = 0;
    let mut matchings = 0;
    let mut failures = Vec::new();
    for b in built {
        for lt in &b.out.trace {
            levels += 1;
            let h = lt.order.h();
            let dec = &lt.decomposition;
            let mut expected = lt.h_prime.clone();
            expected.sort_unstable();
            for fam in [Family::M, Family::N] {
                let mut got: Vec<IndexEdge> = dec
                    .matchings
                    .iter()
                    .filter(|m| m.family == fam)
                    .flat_map(|m| m.edges.iter().copied())
                    .collect();
                got.sort_unstable();
                if got != expected {
                    failures.push(format!("{} level {}: {fam:?} is not a partition", b.name, lt.level));
                }
            }
            for (fam, classes) in [(Family::M, &dec.m_classes), (Family::N, &dec.n_classes)] {
                for (&k, class) in classes {
                    let ok = class.iter().all(|e| match fam {
                        Family::M => e.m_key() == k,
                        Family::N => e.n_key() == k,
                    });
                    if !ok {
                        failures.push(format!("{} level {}: {fam:?}_{k} mixes classes", b.name, lt.level));
                    }
                }
            }
            if dec.matchings.len() > 12 * h {
                failures.push(format!("{} level {}: {} matchings > 12h", b.name, lt.level, dec.matchings.len()));
            }
            for m in &dec.matchings {
                matchings += 1;
                if !validate_easy(m) {
                    failures.push(format!("{} level {}: {:?}_{} not easy", b.name, lt.level, m.family, m.k));
                }
            }
        }
    }
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    outcome(
        failures.is_empty(),
        format!("{levels} levels, {matchings} easy matchings, {} failures", failures.len()),
    )
}

fn starts(v: &[IndexEdge]) -> Vec<usize> {
    v.iter().map(|e| e.i).collect()
}

fn golden_fixtures() -> Outcome {
    let mut bad = Vec::new();

    let fig4: Vec<IndexEdge> = (1..=16).map(|i| IndexEdge::new(i, i + 4)).collect();
    let m4 = build_mk(&fig4, 20).unwrap();
    let s4 = slice_uniform(20, 4);
    if s4.intervals != [(1, 4), (5, 8), (9, 12), (13, 16), (17, 20)] {
        bad.push(format!("uniform slicing {:?}", s4.intervals));
    }
    let [t0, t1] = split_parity(&m4[&4], &s4).unwrap();
    if starts(&t1) != [1, 2, 3, 4, 9, 10, 11, 12] || starts(&t0) != [5, 6, 7, 8, 13, 14, 15, 16] {
        bad.push("uniform parity split".to_string());
    }

    let fig5: Vec<IndexEdge> = (1..=14).map(|i| IndexEdge::new(i, 2 * i + 1)).collect();
    let n5 = build_nk(&fig5, 30).unwrap();
    let s5 = slice_geometric(30, 1);
    if s5.starts() != [1, 3, 7, 15] || s5.intervals != [(1, 2), (3, 6), (7, 14), (15, 30)] {
        bad.push(format!("geometric slicing {:?}", s5.intervals));
    }
    let [t0, t1] = split_parity(&n5[&1], &s5).unwrap();
    if starts(&t1) != [1, 2, 7, 8, 9, 10, 11, 12, 13, 14] || starts(&t0) != [3, 4, 5, 6] {
        bad.push("geometric parity split".to_string());
    }

    let chords: [(VertexId, VertexId); 5] = [(1, 8), (2, 10), (3, 12), (5, 16), (6, 18)];
    let mut pairs: Vec<(VertexId, VertexId)> = (1..=18).map(|i| (i, i % 18 + 1)).collect();
    pairs.extend(chords);
    let g = Graph::from_edge_list(pairs).unwrap();
    let cycle: Vec<VertexId> = (1..=18).collect();
    let order = order_along_c(&cycle, &cycle).unwrap();
    let m = EasyMatching {
        family: Family::N,
        k: 6,
        parity: 1,
        split: 0,
        slicing: slice_geometric(18, 6),
        edges: chords.iter().map(|&(a, b)| IndexEdge::new(a as usize, b as usize)).collect(),
    };
    let c_prime = build_cycle_mode(&g, &order, &m).unwrap();
    let expected = [1, 8, 9, 10, 2, 3, 12, 13, 14, 15, 16, 5, 6, 18];
    let seq = match c_prime.witness() {
        Witness::Cycle(seq) => seq.clone(),
        other => panic!("expected a cycle, got {other:?}"),
    };
    if seq != expected {
        bad.push(format!("jumbled sequence {seq:?}"));
    }
    // rank of each endpoint among the matching endpoints, walking C' from 1
    let w: BTreeSet<VertexId> = chords.iter().flat_map(|&(a, b)| [a, b]).collect();
    let ranked: Vec<VertexId> = seq.iter().copied().filter(|v| w.contains(v)).collect();
    let p = |v: VertexId| ranked.iter().position(|&x| x == v).unwrap() + 1;
    let positions = [p(1), p(10), p(2), p(12)];
    if positions != [1, 3, 4, 6] {
        bad.push(format!("jumbled positions {positions:?}"));
    }
    let k = build_jumbled(&g, &order, &m).unwrap();
    match k.witness() {
        Witness::K4(kw) => {
            let branch: BTreeSet<VertexId> = kw.branch.iter().copied().collect();
            if branch != BTreeSet::from([1, 2, 10, 12]) {
                bad.push(format!("jumbled branch vertices {branch:?}"));
            }
        }
        other => bad.push(format!("jumbled restoration gave {other:?}")),
    }
    for b in &bad {
        println!("    {b}");
    }
    outcome(
        bad.is_empty(),
        format!("uniform, geometric and jumbled fixtures; p-order {positions:?}; {} mismatches", bad.len()),
    )
}

fn bookkeeping(built: &[Built]) -> Outcome {
    let idx = |s: Step| s.index();
    let mut checked = 0;
    let mut off_target = 0;
    let mut failures = Vec::new();
    let mut global = true;
    for b in built {
        let sys = &b.out.system;
        for (k, info) in sys.levels.iter().enumerate() {
            if !info.cover_meets_target() {
                off_target += 1;
                println!(
                    "    {} level {}: cover {} over target {}",
                    b.name,
                    k + 1,
                    info.cover_size,
                    info.cover_target
                );
                continue;
            }
            checked += 1;
            let ks_d = info.emitted[idx(Step::KsSingleton)]
                + info.emitted[idx(Step::OuterplanarSingleton)]
                + info.emitted[idx(Step::Cover)];
            let kk = info.emitted[idx(Step::Elementary)] + info.emitted[idx(Step::Jumbled)];
            if ks_d > 10 * info.s || kk > 24 * info.h {
                failures.push(format!(
                    "{} level {}: K_S+D' = {ks_d} (10|S| = {}), K = {kk} (24h = {})",
                    b.name,
                    k + 1,
                    10 * info.s,
                    24 * info.h
                ));
            }
        }
        if sys.len() > 82 * b.graph.active_vertices().len() {
            global = false;
        }
    }
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    outcome(
        failures.is_empty() && global,
        format!(
            "{checked} levels on target, {off_target} cover deviations, {} violations, global 82n {}",
            failures.len(),
            if global { "holds" } else { "violated" }
        ),
    )
}

/// Deletes each element record of the certificate in turn and re-verifies
/// the parsed result.
fn mutations_of(lg: &LabeledGraph, sys: &SeparatingSystem) -> (usize, Vec<usize>) {
    let text = write_certificate(lg, sys);
    let lines: Vec<&str> = text.lines().collect();
    let first = lines.iter().position(|l| l.starts_with("element ")).unwrap_or(lines.len());
    let mut survivors = Vec::new();
    for x in 0..lines.len() - first {
        let mutated: String = lines
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != first + x)
            .map(|(_, l)| format!("{l}\n"))
            .collect();
        let cert = read_certificate(lg, &mutated).unwrap();
        if verify_separation(&lg.graph, &cert.system).unwrap().is_pass() {
            survivors.push(x);
        }
    }
    (lines.len() - first, survivors)
}

fn mutation_robustness(k4: &[Built], cycle: &[Built]) -> Outcome {
    let mut total = 0;
    let mut caught = 0;
    let mut raw_total = 0;
    let mut raw_redundant = 0;
    for b in k4.iter().chain(cycle) {
        let lg = LabeledGraph::from_graph(b.graph.clone());
        let (count, survivors) = mutations_of(&lg, &b.out.system);
        total += count;
        caught += count - survivors.len();
        for x in survivors {
            let el = &b.out.system.elements[x];
            println!(
                "    {} ({}): element {x} ({}, {} edges) is redundant",
                b.name,
                b.out.system.mode,
                el.kind().as_str(),
                el.edges().len()
            );
        }
        let mut eng = Engine::new(b.out.system.mode);
        eng.prune = false;
        let raw = eng.run(&b.graph).unwrap().system;
        raw_total += raw.len();
        raw_redundant += redundant_elements(&b.graph, &raw).unwrap().len();
    }
    let rate = if total == 0 { 1.0 } else { caught as f64 / total as f64 };
    let raw_rate = 1.0 - raw_redundant as f64 / raw_total.max(1) as f64;
    outcome(
        rate >= 0.99,
        format!(
            "{caught}/{total} deletions detected ({:.2}%); before pruning {:.2}% of {raw_total} elements were essential",
            100.0 * rate,
            100.0 * raw_rate
        ),
    )
}

fn main() -> ExitCode {
    let corpus = standard_corpus();
    let k4 = build_all(&corpus, Mode::K4, true);
    let cycle = build_all(&corpus, Mode::CycleOnly, true);

    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("k4 mode end to end", Box::new(|| end_to_end(&k4, Mode::K4))),
        ("cycle mode end to end", Box::new(|| end_to_end(&cycle, Mode::CycleOnly))),
        ("rotation neighbourhood bound", Box::new(rotation_invariant)),
        ("rotation oracle equivalence", Box::new(rotation_oracle)),
        ("chord obstruction", Box::new(chord_obstruction)),
        (
            "easy matchings",
            Box::new(|| {
                let a = easy_matchings(&k4);
                let c = easy_matchings(&cycle);
                outcome(a.pass && c.pass, format!("k4: {}; cycle: {}", a.detail, c.detail))
            }),
        ),
        ("golden fixtures", Box::new(golden_fixtures)),
        ("per-level bookkeeping", Box::new(|| bookkeeping(&k4))),
        ("verifier mutation robustness", Box::new(|| mutation_robustness(&k4, &cycle))),
    ];

    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {}. {name}: {} ({:.1?})", k + 1, o.detail, t.elapsed());
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
