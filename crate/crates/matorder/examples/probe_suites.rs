use matorder::harness::{run_suite, SuiteConfig, SUITE_NAMES};
use std::io::Write;
use std::time::Instant;

fn main() {
    let cfg = SuiteConfig { cases: Some(12), max_dim: Some(2) };
    for name in SUITE_NAMES {
        print!("{name}: ");
        std::io::stdout().flush().unwrap();
        let t0 = Instant::now();
        let rep = run_suite(name, 7, &cfg).unwrap();
        println!(
            "pass={} cases={} failures={} elapsed={:.2}s",
            rep.pass(),
            rep.cases_run,
            rep.failures.len(),
            t0.elapsed().as_secs_f64()
        );
    }
}
