use spreadcut_core::oracle::{random_graph, GraphFamily};
use spreadcut_core::lp::{solve_mla_lp, solve_vs_lp};
use std::time::Instant;

fn main() {
    for &n in &[16usize, 24, 32, 48, 64] {
        let m = 2 * n;
        let g = random_graph(n, GraphFamily::Gnm { m }, 42).unwrap();
        let t0 = Instant::now();
        let sol = solve_mla_lp(&g).unwrap();
        let t1 = t0.elapsed();
        let t0 = Instant::now();
        let vs = solve_vs_lp(&g).unwrap();
        let t2 = t0.elapsed();
        println!(
            "n={n:3} m={m:3}  mla: {t1:9.2?} (L*={:9.3}, rounds={:2})   vs: {t2:9.2?} (P*={:9.3}, rounds={:2})",
            sol.objective, sol.rounds, vs.objective, vs.rounds
        );
    }
}
