use k4sep::corpus::gnp;
use k4sep::engine::Engine;
use k4sep::system::Step;
use k4sep::Mode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut steps = [0usize; 6];
    let mut fails = 0;
    let mut cover_off = 0;
    let mut levels = 0;
    for i in 0..3000u64 {
        let n = rng.gen_range(2..=64);
        let p: f64 = rng.gen_range(0.02..0.95);
        let g = gnp(n, p, i);
        for mode in [Mode::K4, Mode::CycleOnly] {
            match Engine::new(mode).run(&g) {
                Ok(out) => {
                    for l in &out.system.levels {
                        levels += 1;
                        if !l.cover_meets_target() { cover_off += 1; }
                        for s in Step::ALL { steps[s.index()] += l.emitted[s.index()]; }
                    }
                }
                Err(e) => { fails += 1; println!("seed {i} n={n} p={p:.2} {mode}: {e}"); }
            }
        }
    }
    println!("fails={fails} levels={levels} cover_off={cover_off} steps={steps:?}");
}
