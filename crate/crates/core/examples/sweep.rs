use std::time::Instant;

use k4sep::corpus::standard_corpus;
use k4sep::engine::Engine;
use k4sep::verifier::{redundant_elements, verify_separation};
use k4sep::Mode;

fn main() {
    for (name, g) in standard_corpus() {
        for mode in [Mode::K4, Mode::CycleOnly] {
            let t = Instant::now();
            let mut eng = Engine::new(mode);
            eng.prune = false;
            match eng.run(&g) {
                Ok(out) => {
                    let n = g.active_vertices().len();
                    let raw = out.system.len();
                    let red = redundant_elements(&g, &out.system).unwrap().len();
                    let pruned = k4sep::engine::prune_redundant(&g, out.system.clone()).unwrap();
                    assert!(verify_separation(&g, &pruned).unwrap().is_pass());
                    let off = out.system.levels.iter().filter(|l| !l.cover_meets_target()).count();
                    println!(
                        "{name:20} {mode:5} n={n:3} m={:4} raw={raw:5} ({:.1}n) red={red:5} pruned={:5} ({:.1}n) levels={} cover_off={off} {:?}",
                        g.edge_count(),
                        raw as f64 / n.max(1) as f64,
                        pruned.len(),
                        pruned.len() as f64 / n.max(1) as f64,
                        out.system.levels.len(),
                        t.elapsed()
                    );
                }
                Err(e) => println!("{name:20} {mode:5} ERROR {e}"),
            }
        }
    }
}
