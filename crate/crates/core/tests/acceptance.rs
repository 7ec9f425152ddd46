//! Acceptance run: criteria 1 to 9 at their tolerances with runtime limits,
//! then the determinism criterion. One line per criterion.

use highercx::config::RunConfig;
use highercx::report::report_json;
use highercx::selftest::{run_criterion, selftest, Context, SelftestReport, NAMES};
use std::time::{Duration, Instant};

fn limit(id: usize) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(10)),
        2 => Some(Duration::from_secs(5)),
        3 => Some(Duration::from_secs(120)),
        4 => Some(Duration::from_secs(60)),
        9 => Some(Duration::from_secs(600)),
        _ => None,
    }
}

fn main() {
    let cfg = RunConfig::default();
    let mut ctx = Context::new(cfg.clone());
    let mut criteria = vec![];
    let mut all = true;
    for id in 1..=9 {
        let t0 = Instant::now();
        let r = run_criterion(&mut ctx, id);
        let took = t0.elapsed();
        let in_time = limit(id).map_or(true, |l| took <= l);
        let ok = r.pass && in_time;
        all &= ok;
        let budget = limit(id).map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        let line = r.line().replacen(if r.pass { "[PASS]" } else { "[FAIL]" }, if ok { "[PASS]" } else { "[FAIL]" }, 1);
        println!("{}  ({:.1}s{})", line, took.as_secs_f64(), budget);
        for c in r.checks.iter().filter(|c| !c.pass) {
            println!("        failing check: {} = {:e} against {:e}", c.what, c.value, c.limit);
        }
        criteria.push(r);
    }
    let passed = criteria.iter().all(|c| c.pass);
    let first = SelftestReport { seed: cfg.seed, resolution: cfg.resolution, criteria, passed };
    let a = report_json("selftest", &cfg, &first).expect("serializable");
    let b = report_json("selftest", &cfg, &selftest(&cfg)).expect("serializable");
    let same = a == b;
    all &= same;
    println!(
        "[{}] 10 {:<28} {} bytes, {}",
        if same { "PASS" } else { "FAIL" },
        "determinism",
        a.len(),
        if same { "identical" } else { "reports differ" }
    );
    assert_eq!(NAMES.len(), 9);
    if !all {
        std::process::exit(1);
    }
}
