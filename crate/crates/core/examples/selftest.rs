//! Runs chosen acceptance criteria (all by default) and prints their checks.

use highercx::config::RunConfig;
use highercx::selftest::{run_criterion, Context};
use std::time::Instant;

fn main() {
    let mut ids: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("criterion id")).collect();
    if ids.is_empty() {
        ids = (1..=9).collect();
    }
    let mut ctx = Context::new(RunConfig::default());
    for id in ids {
        let t0 = Instant::now();
        let r = run_criterion(&mut ctx, id);
        println!("{} ({:.1?})", r.line(), t0.elapsed());
        for c in &r.checks {
            let op = if c.at_least { ">=" } else { "<=" };
            println!("    {:<36} {:.3e} {} {:.0e}", c.what, c.value, op, c.limit);
        }
    }
}
